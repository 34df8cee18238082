//! Shared fixtures: seeded random presentations and brute-force oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hypertilt::abgroup::{AbelianPGroup, Block, BlockMatrix, ModMatrix};
use hypertilt::action::{AbelianGroupH, GroupPresentation};
use hypertilt::quiverbuild::{Arrow, ArrowLabel, BoundQuiver, RelationSet, Vertex, ZeroRelation};
use hypertilt::zigzag::{canonical_form, is_qualifying, validate_zigzag};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(path: &str) -> Vec<u8> {
    let full = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(path);
    std::fs::read(&full).unwrap_or_else(|e| panic!("{}: {e}", full.display()))
}

pub fn g1() -> GroupPresentation {
    GroupPresentation::from_integer_blocks(
        2,
        &[(1, 2)],
        &[3],
        &[vec![vec![vec![0, 1], vec![1, 1]]]],
    )
    .unwrap()
}

pub fn g2() -> GroupPresentation {
    GroupPresentation::from_integer_blocks(
        2,
        &[(2, 2)],
        &[3],
        &[vec![vec![vec![0, 3], vec![1, 3]]]],
    )
    .unwrap()
}

pub fn worked_example() -> GroupPresentation {
    GroupPresentation::from_integer_blocks(
        3,
        &[(1, 2), (2, 1)],
        &[4],
        &[vec![vec![vec![1, 1], vec![1, 2]], vec![vec![8]]]],
    )
    .unwrap()
}

/// Block lists (distinct exponents, ascending) with |P| ≤ cap.
pub fn block_shapes(p: u64, cap: u64) -> Vec<Vec<(u32, usize)>> {
    fn go(
        p: u64,
        cap: u64,
        min_e: u32,
        acc: u64,
        cur: &mut Vec<(u32, usize)>,
        out: &mut Vec<Vec<(u32, usize)>>,
    ) {
        out.push(cur.clone());
        for e in min_e..=8 {
            let mut size = acc;
            for m in 1..=8usize {
                size = match size.checked_mul(p.pow(e)) {
                    Some(s) if s <= cap => s,
                    _ => break,
                };
                cur.push((e, m));
                go(p, cap, e + 1, size, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(p, cap, 1, 1, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing order tuples (each ≥ 2, prime to p) with product ≤ cap.
pub fn h_shapes(p: u64, cap: u64) -> Vec<Vec<u64>> {
    fn go(p: u64, cap: u64, min: u64, acc: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(cur.clone());
        for d in min..=cap {
            if acc * d > cap {
                break;
            }
            if d % p == 0 {
                continue;
            }
            cur.push(d);
            go(p, cap, d, acc * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, cap, 2, 1, &mut Vec::new(), &mut out);
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_invertible(rng: &mut impl Rng, m: usize, p: u64, modulus: u64) -> ModMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(0..modulus) as i64).collect())
            .collect();
        let a = ModMatrix::from_rows(&rows, modulus).unwrap();
        if a.reduce(p).inverse().is_some() {
            return a;
        }
    }
}

/// A random element of GL_m(ℤ/p^e) whose order divides `n` (prime to p):
/// kill the p-part of a random element, then project onto the n-torsion.
fn random_torsion(rng: &mut impl Rng, m: usize, p: u64, e: u32, n: u64) -> ModMatrix {
    let modulus = p.pow(e);
    let a = random_invertible(rng, m, p, modulus);
    let p_exp = (e as u64 - 1) * (m * m) as u64 + (m * (m - 1) / 2) as u64;
    let k: u64 = (1..=m as u32).map(|i| p.pow(i) - 1).product();
    let x = a.pow(p.pow(p_exp as u32));
    x.pow(k / gcd(k, n))
}

/// Like [`random_torsion`], but usually without fixed points mod p.
fn biased_torsion(rng: &mut impl Rng, m: usize, p: u64, e: u32, n: u64) -> ModMatrix {
    let want_free = rng.gen_bool(0.7);
    let mut c = random_torsion(rng, m, p, e, n);
    for _ in 0..64 {
        let free = c
            .reduce(p)
            .sub(&ModMatrix::identity(m, p))
            .inverse()
            .is_some();
        if free || !want_free {
            break;
        }
        c = random_torsion(rng, m, p, e, n);
    }
    c
}

/// Seeded random valid presentation with p ∈ `primes`, |P| ≤ `p_cap`, |H| ≤ `h_cap`.
/// Each generator of H acts on each block by a power of one torsion element,
/// so the actions commute.
pub fn random_presentation(
    rng: &mut impl Rng,
    primes: &[u64],
    p_cap: u64,
    h_cap: u64,
) -> GroupPresentation {
    let p = *primes.choose(rng).unwrap();
    let blocks = block_shapes(p, p_cap).choose(rng).unwrap().clone();
    let h_all = h_shapes(p, h_cap);
    let orders = if rng.gen_bool(0.9) {
        h_all
            .iter()
            .filter(|o| !o.is_empty())
            .collect::<Vec<_>>()
            .choose(rng)
            .map(|o| o.to_vec())
            .unwrap_or_default()
    } else {
        Vec::new()
    };
    let pgroup =
        AbelianPGroup::new(p, blocks.iter().map(|&(e, m)| Block::new(e, m)).collect()).unwrap();
    let h = AbelianGroupH::new(orders.clone()).unwrap();
    let n = h.exponent();
    let bases: Vec<ModMatrix> = blocks
        .iter()
        .map(|&(e, m)| biased_torsion(rng, m, p, e, n))
        .collect();
    let action = orders
        .iter()
        .map(|&d| {
            let ms = bases
                .iter()
                .map(|c| {
                    // a unit exponent keeps the block free of fixed points when C is
                    let r = loop {
                        let r = rng.gen_range(1..=d);
                        if gcd(r, d) == 1 {
                            break r;
                        }
                    };
                    c.pow(n / d * r)
                })
                .collect();
            BlockMatrix::new(&pgroup, ms).unwrap()
        })
        .collect();
    GroupPresentation::new(pgroup, h, action).unwrap()
}

/// Subgroup of P generated by `gens`, by closing under addition.
pub fn span(pgroup: &AbelianPGroup, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
    set.insert(vec![0; pgroup.rank()]);
    let distinct: BTreeSet<&Vec<u64>> = gens.iter().collect();
    for g in distinct {
        if set.contains(g) {
            continue;
        }
        let mut frontier: Vec<Vec<u64>> = set.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in frontier {
                let y = pgroup.add(&x, g);
                if set.insert(y.clone()) {
                    next.push(y);
                }
            }
            frontier = next;
        }
    }
    set
}

/// `[P,H]` from every element of H and every element of P.
pub fn brute_hyperfocal(pres: &GroupPresentation) -> BTreeSet<Vec<u64>> {
    let pg = pres.pgroup();
    let mut gens = Vec::new();
    for h in pres.h().elements() {
        let a = pres.action_of(&h);
        for x in pg.elements() {
            gens.push(pg.sub(&a.apply(&x), &x));
        }
    }
    span(pg, &gens)
}

pub fn brute_centralizer(pres: &GroupPresentation) -> BTreeSet<Vec<u64>> {
    let pg = pres.pgroup();
    let maps: Vec<BlockMatrix> = pres.h().elements().map(|h| pres.action_of(&h)).collect();
    pg.elements()
        .filter(|x| maps.iter().all(|a| a.apply(x) == *x))
        .collect()
}

/// Random quiver on `nv` vertices with `na` arrows and zero relations on
/// some composable pairs.
pub fn random_quiver(rng: &mut impl Rng, nv: usize, na: usize) -> BoundQuiver {
    let arrows: Vec<Arrow> = (0..na)
        .map(|id| Arrow {
            id,
            source: rng.gen_range(0..nv),
            target: rng.gen_range(0..nv),
            label: ArrowLabel {
                exponent: 0,
                index: 1,
            },
        })
        .collect();
    let mut zero = Vec::new();
    for a in &arrows {
        for b in &arrows {
            if a.target == b.source && rng.gen_bool(0.3) {
                zero.push(ZeroRelation {
                    id: zero.len(),
                    vertex: a.source,
                    path: vec![a.id, b.id],
                });
            }
        }
    }
    BoundQuiver {
        p: None,
        h_orders: vec![],
        vertices: (0..nv).map(|i| Vertex::Named(i.to_string())).collect(),
        labels: vec![],
        arrows,
        relations: Some(RelationSet {
            zero,
            ..RelationSet::default()
        }),
    }
}

/// Canonical arrow lists of all qualifying cycles of length ≤ `max_len`,
/// by trying every sequence of distinct arrows.
pub fn naive_qualifying_cycles(q: &BoundQuiver, max_len: usize) -> BTreeSet<Vec<usize>> {
    fn go(q: &BoundQuiver, max_len: usize, seq: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if seq.len() >= 2 {
            if let Ok(c) = validate_zigzag(q, seq) {
                if is_qualifying(q, &c).qualifies {
                    out.insert(canonical_form(q, seq).unwrap().arrows);
                }
            }
        }
        if seq.len() == max_len {
            return;
        }
        for a in 0..q.arrows.len() {
            if !seq.contains(&a) {
                seq.push(a);
                go(q, max_len, seq, out);
                seq.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(q, max_len, &mut Vec::new(), &mut out);
    out
}

/// Walks every label sequence from `v` with the power bounds as the only
/// truncation; returns the number of distinct label-count vectors reached,
/// and panics if two walks with the same counts end at different vertices.
pub fn walked_monomials(q: &BoundQuiver, v: usize) -> usize {
    use std::collections::BTreeMap;
    let labels: Vec<ArrowLabel> = q.labels.iter().map(|l| l.label).collect();
    let p = q.p.unwrap();
    let bound: Vec<u64> = labels.iter().map(|l| p.pow(l.exponent)).collect();
    let mut seen: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    seen.insert(vec![0; labels.len()], v);
    let mut frontier = vec![(vec![0u64; labels.len()], v)];
    while let Some((counts, at)) = frontier.pop() {
        for a in q.out_arrows(at) {
            let k = labels.iter().position(|l| *l == a.label).unwrap();
            let mut next = counts.clone();
            next[k] += 1;
            if next[k] >= bound[k] {
                continue;
            }
            match seen.get(&next) {
                Some(&w) => assert_eq!(
                    w, a.target,
                    "paths with equal label counts end at different vertices"
                ),
                None => {
                    seen.insert(next.clone(), a.target);
                    frontier.push((next, a.target));
                }
            }
        }
    }
    seen.len()
}
