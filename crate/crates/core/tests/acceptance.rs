//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypertilt::action::{
    centralizer, hyperfocal_data, hyperfocal_subgroup, AbelianGroupH, GroupPresentation,
};
use hypertilt::charfield::{eigencharacters, Character};
use hypertilt::decide::{
    decide_abelian, decide_frattini, quiver_of, reduced_quiver, Certificate, FrattiniInput,
    Outcome, Reason,
};
use hypertilt::field::{build_splitting_field, FField};
use hypertilt::format::{field_of_order, parse_group_spec, to_json, ParsedSpec};
use hypertilt::quiverbuild::{
    quiver_from_character_table, BoundQuiver, CharacterTable, CharacterTableSpec,
};
use hypertilt::repcheck::{
    enumerate_bricks, eval_relations, is_brick, is_isomorphic, pull_back_cycle_rep,
};
use hypertilt::zigzag::{default_max_len, find_qualifying_cycles, is_qualifying, validate_zigzag};
use hypertilt::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome_ = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Seeds 0..count of the random family used by criteria 4, 5 and 7, plus the
/// three fixed examples.
fn sweep_family(count: u64) -> Vec<GroupPresentation> {
    let mut out = vec![common::g1(), common::g2(), common::worked_example()];
    for seed in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        out.push(common::random_presentation(&mut rng, &[2, 3, 5], 81, 8));
    }
    out
}

fn worked_example() -> Outcome_ {
    let ParsedSpec::Abelian(pres) =
        parse_group_spec(&common::fixture("worked.group.json"), None).map_err(err)?
    else {
        return Err("worked example spec is not in abelian mode".into());
    };
    let sf = build_splitting_field(3, 4).map_err(err)?;
    let eig = eigencharacters(&pres, &sf).map_err(err)?;
    let got: Vec<(usize, Character)> = eig.iter().map(|e| (e.block, e.character.clone())).collect();
    let want = vec![
        (0, Character(vec![1])),
        (0, Character(vec![3])),
        (1, Character(vec![2])),
    ];
    ensure!(got == want, "eigencharacters {got:?}, expected {want:?}");

    let q = quiver_of(&pres).map_err(err)?;
    ensure!(q.vertex_count() == 4, "{} vertices", q.vertex_count());
    ensure!(q.arrows.len() == 12, "{} arrows", q.arrows.len());
    let rel = q.relations.as_ref().ok_or("no relations")?;
    ensure!(
        rel.commutators.len() == 4 * 3,
        "{} commutators",
        rel.commutators.len()
    );
    for v in 0..4 {
        let mut pairs: Vec<_> = rel
            .commutators
            .iter()
            .filter(|c| c.vertex == v)
            .map(|c| c.labels)
            .collect();
        pairs.sort();
        pairs.dedup();
        ensure!(
            pairs.len() == 3,
            "vertex {v} has {} label pairs",
            pairs.len()
        );
        let mut lens: Vec<usize> = rel
            .powers
            .iter()
            .filter(|r| r.vertex == v)
            .map(|r| r.path.len())
            .collect();
        lens.sort();
        ensure!(lens == vec![3, 3, 9], "powers at vertex {v}: {lens:?}");
    }
    q.check().map_err(err)?;
    let golden = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/worked.quiver.json"
    ))
    .map_err(|e| e.to_string())?;
    ensure!(
        to_json(&q) == golden,
        "quiver JSON differs from the golden file"
    );
    Ok("eigencharacters (1),(3) | (2); 4 vertices, 12 arrows, 12 commutators, powers 3,3,9; golden match".into())
}

fn rank_two_verdicts() -> Outcome_ {
    let v1 = decide_abelian(&common::g1()).map_err(err)?;
    ensure!(v1.outcome == Outcome::Finite, "G1 outcome {:?}", v1.outcome);
    ensure!(
        v1.reason == Reason::KleinFourHyperfocal,
        "G1 reason {:?}",
        v1.reason
    );
    ensure!(
        v1.hyperfocal == vec![2, 2],
        "G1 factors {:?}",
        v1.hyperfocal
    );

    let pres = common::g2();
    let v2 = decide_abelian(&pres).map_err(err)?;
    ensure!(
        v2.outcome == Outcome::Infinite,
        "G2 outcome {:?}",
        v2.outcome
    );
    ensure!(
        v2.hyperfocal == vec![4, 4],
        "G2 factors {:?}",
        v2.hyperfocal
    );
    let Some(Certificate::Cycle(cert)) = &v2.certificate else {
        return Err("G2 verdict has no cycle certificate".into());
    };
    let q = reduced_quiver(&hyperfocal_data(&pres).map_err(err)?.reduced).map_err(err)?;
    let ids: Vec<usize> = cert.arrows.iter().map(|a| a.id).collect();
    let c = validate_zigzag(&q, &ids).map_err(|v| v.to_string())?;
    ensure!(
        is_qualifying(&q, &c).qualifies,
        "G2 certificate does not qualify"
    );
    Ok(format!(
        "G1 finite (C2×C2); G2 infinite (C4×C4), certificate {ids:?} validates"
    ))
}

fn s3_table() -> Outcome_ {
    let spec: CharacterTableSpec =
        serde_json::from_slice(&common::fixture("s3.table.json")).map_err(|e| e.to_string())?;
    let table = CharacterTable::try_from(spec).map_err(err)?;
    let counts = table.arrow_counts().map_err(err)?;
    let want = vec![vec![1, 1, 0], vec![1, 2, 1], vec![0, 1, 1]];
    ensure!(counts == want, "arrow counts {counts:?}");
    let q = quiver_from_character_table(&table).map_err(err)?;
    let m: Vec<Vec<u64>> = q
        .arrow_count_matrix()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as u64).collect())
        .collect();
    ensure!(m == want, "quiver arrow counts {m:?}");
    Ok(format!("{counts:?}"))
}

fn dimension_law(family: &[GroupPresentation]) -> Outcome_ {
    let mut checked = 0;
    for (i, pres) in family.iter().enumerate() {
        let q = quiver_of(pres).map_err(err)?;
        let order_p = pres.pgroup().order() as u128;
        let mut total = 0;
        for v in 0..q.vertex_count() {
            let n = q.path_normal_form_count(v).map_err(err)?;
            ensure!(
                n == order_p,
                "member {i}, vertex {v}: {n} paths, |P| = {order_p}"
            );
            let walked = common::walked_monomials(&q, v) as u128;
            ensure!(
                walked == order_p,
                "member {i}, vertex {v}: walked {walked} classes, |P| = {order_p}"
            );
            total += n;
        }
        ensure!(
            total == pres.order(),
            "member {i}: total {total}, |G| = {}",
            pres.order()
        );
        checked += 1;
    }
    Ok(format!(
        "{checked} presentations, every vertex has |P| normal-form paths"
    ))
}

/// Returns the certificate cycles for criterion 7 alongside the report.
fn consistency(
    family: &[GroupPresentation],
    cycles: &mut Vec<(BoundQuiver, Vec<usize>)>,
) -> Outcome_ {
    let (mut finite, mut infinite) = (0, 0);
    for (i, pres) in family.iter().enumerate() {
        let v = decide_abelian(pres).map_err(err)?;
        let q = reduced_quiver(&hyperfocal_data(pres).map_err(err)?.reduced).map_err(err)?;
        let bound = 2 * pres.h().order() as usize;
        ensure!(
            bound.max(2) == default_max_len(&q),
            "member {i}: search bound mismatch"
        );
        let found = find_qualifying_cycles(&q, bound);
        match v.outcome {
            Outcome::Finite => {
                ensure!(
                    found.is_empty(),
                    "member {i}: finite verdict but cycle {:?}",
                    found[0].arrows
                );
                finite += 1;
            }
            Outcome::Infinite => {
                ensure!(
                    !found.is_empty(),
                    "member {i}: infinite verdict, no cycle within {bound}"
                );
                let Some(Certificate::Cycle(cert)) = v.certificate else {
                    return Err(format!("member {i}: classification-only infinite verdict"));
                };
                let ids: Vec<usize> = cert.arrows.iter().map(|a| a.id).collect();
                let c = validate_zigzag(&q, &ids).map_err(|v| format!("member {i}: {v}"))?;
                ensure!(
                    is_qualifying(&q, &c).qualifies,
                    "member {i}: certificate does not qualify"
                );
                cycles.push((q, ids));
                infinite += 1;
            }
            Outcome::Unknown => return Err(format!("member {i}: unknown verdict in abelian mode")),
        }
    }
    Ok(format!(
        "{finite} finite, {infinite} infinite, all consistent with exhaustive search"
    ))
}

fn hyperfocal_oracle() -> Outcome_ {
    let mut checked = 0;
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1_000 + seed);
        let pres = common::random_presentation(&mut rng, &[2, 3, 5], 256, 12);
        let r = hyperfocal_subgroup(&pres).map_err(err)?;
        let c = centralizer(&pres).map_err(err)?;
        let br = common::brute_hyperfocal(&pres);
        let bc = common::brute_centralizer(&pres);
        ensure!(
            r.order() == br.len() as u64 && br.iter().all(|x| r.contains(x)),
            "seed {seed}: [P,H] differs"
        );
        ensure!(
            c.order() == bc.len() as u64 && bc.iter().all(|x| c.contains(x)),
            "seed {seed}: C_P(H) differs"
        );
        ensure!(
            br.len() * bc.len() == pres.pgroup().order() as usize,
            "seed {seed}: |R|·|C| ≠ |P|"
        );
        ensure!(
            br.intersection(&bc).count() == 1,
            "seed {seed}: R ∩ C nontrivial"
        );
        checked += 1;
    }
    Ok(format!("{checked} presentations with |P| ≤ 256, |H| ≤ 12"))
}

fn brick_oracle(cycles: &[(BoundQuiver, Vec<usize>)]) -> Outcome_ {
    let kronecker = common::random_quiver(&mut ChaCha8Rng::seed_from_u64(0), 2, 0);
    let kronecker = BoundQuiver {
        arrows: (0..2)
            .map(|id| hypertilt::quiverbuild::Arrow {
                id,
                source: 0,
                target: 1,
                label: hypertilt::quiverbuild::ArrowLabel {
                    exponent: 0,
                    index: id + 1,
                },
            })
            .collect(),
        relations: None,
        ..kronecker
    };
    for q in [2u64, 3, 4] {
        let n = enumerate_bricks(&kronecker, &[1, 1], &field_of_order(q).map_err(err)?)
            .map_err(err)?
            .count();
        ensure!(n as u64 == q + 1, "Kronecker over F_{q}: {n} bricks");
    }
    let f4 = FField::new(2, 2).map_err(err)?;
    for (q, cycle) in cycles {
        let rel = q.relations.as_ref().ok_or("quiver without relations")?;
        let reps = (1..4)
            .map(|h| pull_back_cycle_rep(q, cycle, h, &f4))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        for r in &reps {
            ensure!(
                eval_relations(r, rel).is_ok(),
                "cycle {cycle:?}: relations fail"
            );
            ensure!(is_brick(r), "cycle {cycle:?}: not a brick");
        }
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                ensure!(
                    !is_isomorphic(&reps[i], &reps[j]).map_err(err)?,
                    "cycle {cycle:?}: holonomies {} and {} isomorphic",
                    i + 1,
                    j + 1
                );
            }
        }
    }
    Ok(format!(
        "Kronecker q+1 for q = 2,3,4; {} cycles give 3 distinct bricks over F_4",
        cycles.len()
    ))
}

fn frattini() -> Outcome_ {
    let c3 = AbelianGroupH::new(vec![3]).map_err(err)?;
    let v = decide_frattini(
        &FrattiniInput::new(2, 2, c3, &[vec![vec![0, 1], vec![1, 1]]]).map_err(err)?,
    )
    .map_err(err)?;
    ensure!(v.outcome == Outcome::Unknown, "p=2, n=2: {:?}", v.outcome);
    let c2 = AbelianGroupH::new(vec![2]).map_err(err)?;
    let c4 = AbelianGroupH::new(vec![4]).map_err(err)?;
    for n in 2..=4usize {
        let minus: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 } else { 0 }).collect())
            .collect();
        let v = decide_frattini(&FrattiniInput::new(3, n, c2.clone(), &[minus]).map_err(err)?)
            .map_err(err)?;
        ensure!(
            v.outcome == Outcome::Infinite,
            "p=3, n={n}: {:?}",
            v.outcome
        );
    }
    // p = 5, n = 2: a generator of order 4 acting by 2 on both coordinates
    let v = decide_frattini(
        &FrattiniInput::new(5, 2, c4, &[vec![vec![2, 0], vec![0, 3]]]).map_err(err)?,
    )
    .map_err(err)?;
    ensure!(v.outcome == Outcome::Infinite, "p=5, n=2: {:?}", v.outcome);
    let fixed = FrattiniInput::new(3, 2, c2, &[vec![vec![1, 0], vec![0, 2]]]).map_err(err)?;
    ensure!(
        matches!(decide_frattini(&fixed), Err(Error::NontrivialFixedSpace(1))),
        "fixed space not rejected"
    );
    Ok("p=2,n=2 unknown; p≥3,n≥2 infinite; fixed space rejected".into())
}

fn main() -> ExitCode {
    let family = sweep_family(100);
    let mut cycles = Vec::new();
    let mut failed = 0;
    let mut report = |n: u32, title: &str, budget: Duration, f: &mut dyn FnMut() -> Outcome_| {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
            other => other,
        };
        match result {
            Ok(detail) => {
                println!("criterion {n} PASS  {title}: {detail} [{elapsed:.2?} / {budget:?}]")
            }
            Err(e) => {
                failed += 1;
                println!("criterion {n} FAIL  {title}: {e} [{elapsed:.2?} / {budget:?}]");
            }
        }
    };
    report(
        1,
        "worked example quiver",
        Duration::from_secs(1),
        &mut worked_example,
    );
    report(
        2,
        "rank-two verdicts",
        Duration::from_secs(1),
        &mut rank_two_verdicts,
    );
    report(
        3,
        "S3 character-table quiver",
        Duration::from_secs(1),
        &mut s3_table,
    );
    report(4, "dimension law", Duration::from_secs(10), &mut || {
        dimension_law(&family)
    });
    report(
        5,
        "classification vs certificates",
        Duration::from_secs(120),
        &mut || consistency(&family, &mut cycles),
    );
    report(
        6,
        "hyperfocal oracle",
        Duration::from_secs(30),
        &mut hyperfocal_oracle,
    );
    report(7, "brick oracle", Duration::from_secs(120), &mut || {
        brick_oracle(&cycles)
    });
    report(8, "Frattini mode", Duration::from_secs(1), &mut frattini);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
