mod common;

use hypertilt::action::{hyperfocal_data, AbelianGroupH, GroupPresentation};
use hypertilt::decide::quiver_of;
use hypertilt::decide::{
    decide_abelian, decide_frattini, reduced_quiver, Certificate, FrattiniInput, Outcome, Reason,
};
use hypertilt::format::{parse_group_spec, parse_quiver, to_json, ParsedSpec};
use hypertilt::zigzag::{default_max_len, find_qualifying_cycles, is_qualifying, validate_zigzag};
use hypertilt::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn g1_is_finite() {
    let v = decide_abelian(&common::g1()).unwrap();
    assert_eq!(v.outcome, Outcome::Finite);
    assert_eq!(v.reason, Reason::KleinFourHyperfocal);
    assert_eq!(v.hyperfocal, vec![2, 2]);
}

#[test]
fn g2_is_infinite_with_valid_certificate() {
    let pres = common::g2();
    let v = decide_abelian(&pres).unwrap();
    assert_eq!(v.outcome, Outcome::Infinite);
    assert_eq!(v.hyperfocal, vec![4, 4]);
    let Some(Certificate::Cycle(cert)) = v.certificate else {
        panic!("cycle certificate expected");
    };
    let q = reduced_quiver(&hyperfocal_data(&pres).unwrap().reduced).unwrap();
    let ids: Vec<usize> = cert.arrows.iter().map(|a| a.id).collect();
    assert_eq!(ids.len(), 3);
    let c = validate_zigzag(&q, &ids).unwrap();
    assert!(is_qualifying(&q, &c).qualifies);
}

#[test]
fn worked_example_matches_golden_quiver() {
    let golden = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/worked.quiver.json"
    ))
    .unwrap();
    let ParsedSpec::Abelian(pres) =
        parse_group_spec(&common::fixture("worked.group.json"), None).unwrap()
    else {
        panic!("abelian spec expected");
    };
    assert_eq!(pres, common::worked_example());
    let q = quiver_of(&pres).unwrap();
    assert_eq!(to_json(&q), golden);
    assert_eq!(parse_quiver(golden.as_bytes()).unwrap(), q);
}

#[test]
fn cyclic_hyperfocal_is_finite_for_odd_p() {
    // C_25 ⋊ C_4 with the generator acting by 7, a unit of order 4 mod 25
    let pres =
        GroupPresentation::from_integer_blocks(5, &[(2, 1)], &[4], &[vec![vec![vec![7]]]]).unwrap();
    let v = decide_abelian(&pres).unwrap();
    assert_eq!(v.outcome, Outcome::Finite);
    assert_eq!(v.reason, Reason::CyclicHyperfocal);
    assert_eq!(v.hyperfocal, vec![25]);
}

#[test]
fn trivial_action_is_finite() {
    let pres = GroupPresentation::from_integer_blocks(
        3,
        &[(1, 2)],
        &[2],
        &[vec![vec![vec![1, 0], vec![0, 1]]]],
    )
    .unwrap();
    let v = decide_abelian(&pres).unwrap();
    assert_eq!(v.outcome, Outcome::Finite);
    assert_eq!(v.reason, Reason::TrivialHyperfocal);
}

#[test]
fn p_dividing_h_is_rejected() {
    let pres =
        GroupPresentation::from_integer_blocks(3, &[(1, 1)], &[3], &[vec![vec![vec![1]]]]).unwrap();
    assert!(matches!(
        decide_abelian(&pres),
        Err(Error::InvalidPresentation(_))
    ));
}

#[test]
fn frattini_mode() {
    let c3 = AbelianGroupH::new(vec![3]).unwrap();
    let v =
        decide_frattini(&FrattiniInput::new(2, 2, c3, &[vec![vec![0, 1], vec![1, 1]]]).unwrap())
            .unwrap();
    assert_eq!(v.outcome, Outcome::Unknown);
    assert_eq!(v.reason, Reason::FrattiniRankTwoEvenPrime);

    let c2 = AbelianGroupH::new(vec![2]).unwrap();
    for n in 2..=4 {
        let minus = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 } else { 0 }).collect())
            .collect();
        let v = decide_frattini(&FrattiniInput::new(3, n, c2.clone(), &[minus]).unwrap()).unwrap();
        assert_eq!(v.outcome, Outcome::Infinite);
    }
    let v =
        decide_frattini(&FrattiniInput::new(5, 1, c2.clone(), &[vec![vec![4]]]).unwrap()).unwrap();
    assert_eq!(v.outcome, Outcome::Finite);

    let fixed = FrattiniInput::new(3, 2, c2, &[vec![vec![1, 0], vec![0, 2]]]).unwrap();
    assert_eq!(decide_frattini(&fixed), Err(Error::NontrivialFixedSpace(1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verdicts_agree_with_exhaustive_search(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pres = common::random_presentation(&mut rng, &[2, 3, 5], 81, 8);
        let v = decide_abelian(&pres).unwrap();
        let reduced = hyperfocal_data(&pres).unwrap().reduced;
        let q = reduced_quiver(&reduced).unwrap();
        let found = find_qualifying_cycles(&q, default_max_len(&q));
        match v.outcome {
            Outcome::Finite => prop_assert!(found.is_empty()),
            Outcome::Infinite => {
                prop_assert!(!found.is_empty());
                let Some(Certificate::Cycle(cert)) = v.certificate else {
                    return Err(TestCaseError::fail("infinite verdict without a cycle"));
                };
                let ids: Vec<usize> = cert.arrows.iter().map(|a| a.id).collect();
                let c = validate_zigzag(&q, &ids).unwrap();
                prop_assert!(is_qualifying(&q, &c).qualifies);
            }
            Outcome::Unknown => return Err(TestCaseError::fail("abelian mode never answers unknown")),
        }
    }
}
