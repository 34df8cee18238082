//! Zigzag cycles in bound quivers and the test for whether they certify
//! infinitely many bricks.
//!
//! A zigzag cycle `a_1, …, a_n` walks `a_1` forward from `v_0`, then alternates
//! direction: `t(a_i) = t(a_{i+1})` for odd `i`, `s(a_i) = s(a_{i+1})` for even `i`.
//! It closes with `s(a_1) = t(a_n)` when `n` is odd and `s(a_1) = s(a_n)` when `n`
//! is even. Vertices `v_0, …, v_{n−1}` and arrows must be pairwise distinct.

mod search;
mod templates;

pub use search::{default_max_len, find_qualifying_cycles, first_qualifying_cycle};
pub use templates::template_certificates;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiverbuild::BoundQuiver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZigzagCycle {
    pub arrows: Vec<usize>,
    pub vertices: Vec<usize>,
    pub parity: Parity,
}

impl ZigzagCycle {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Indices are 1-based positions in the arrow sequence.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZigzagViolation {
    #[error("a zigzag cycle needs n >= 2 arrows, got {len}")]
    TooShort { len: usize },
    #[error("arrow {arrow} at position {index} is not in the quiver")]
    UnknownArrow { index: usize, arrow: usize },
    #[error("arrow at position {index} repeats an earlier arrow")]
    RepeatedArrow { index: usize },
    #[error("alternation fails between positions {index} and {}", index + 1)]
    Alternation { index: usize },
    #[error("the cycle does not close")]
    Closure,
    #[error("vertex at position {index} repeats an earlier vertex (distinct vertices required)")]
    RepeatedVertex { index: usize },
    #[error("composable pairs of cycle arrows are not as expected: {pairs:?}")]
    ComposablePairs { pairs: Vec<(usize, usize)> },
}

/// Accepts exactly the arrow sequences that form a zigzag cycle in `q`.
pub fn validate_zigzag(q: &BoundQuiver, arrows: &[usize]) -> Result<ZigzagCycle, ZigzagViolation> {
    let n = arrows.len();
    if n < 2 {
        return Err(ZigzagViolation::TooShort { len: n });
    }
    for (i, &a) in arrows.iter().enumerate() {
        if a >= q.arrows.len() {
            return Err(ZigzagViolation::UnknownArrow {
                index: i + 1,
                arrow: a,
            });
        }
        if arrows[..i].contains(&a) {
            return Err(ZigzagViolation::RepeatedArrow { index: i + 1 });
        }
    }
    let src = |i: usize| q.arrows[arrows[i - 1]].source;
    let tgt = |i: usize| q.arrows[arrows[i - 1]].target;
    for i in 1..n {
        let ok = if i % 2 == 1 {
            tgt(i) == tgt(i + 1)
        } else {
            src(i) == src(i + 1)
        };
        if !ok {
            return Err(ZigzagViolation::Alternation { index: i });
        }
    }
    let closes = if n % 2 == 1 {
        src(1) == tgt(n)
    } else {
        src(1) == src(n)
    };
    if !closes {
        return Err(ZigzagViolation::Closure);
    }
    let vertices: Vec<usize> = std::iter::once(src(1))
        .chain((1..n).map(|i| if i % 2 == 1 { tgt(i) } else { src(i) }))
        .collect();
    for i in 1..n {
        if vertices[..i].contains(&vertices[i]) {
            return Err(ZigzagViolation::RepeatedVertex { index: i });
        }
    }
    let parity = if n.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    };
    let pairs = composable_pairs(q, arrows);
    let expected: Vec<(usize, usize)> = match parity {
        Parity::Even => Vec::new(),
        Parity::Odd => vec![(arrows[n - 1], arrows[0])],
    };
    if pairs != expected {
        return Err(ZigzagViolation::ComposablePairs { pairs });
    }
    Ok(ZigzagCycle {
        arrows: arrows.to_vec(),
        vertices,
        parity,
    })
}

/// Ordered pairs `(a, b)` of cycle arrows with `t(a) = s(b)`.
pub fn composable_pairs(q: &BoundQuiver, arrows: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &a in arrows {
        for &b in arrows {
            if q.arrows[a].target == q.arrows[b].source {
                out.push((a, b));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QualificationReason {
    EvenLength,
    OddAndClosingPathAbsent,
    OddButClosingPathAppears { generator: usize },
    RelationsUnknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualificationReport {
    pub qualifies: bool,
    pub reason: QualificationReason,
    /// For odd cycles, the path `a_n` then `a_1` in traversal order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closing_path: Option<Vec<usize>>,
}

/// Even cycles always qualify; an odd cycle qualifies when its closing path
/// is not, as a whole monomial, one of the relation monomials.
pub fn is_qualifying(q: &BoundQuiver, c: &ZigzagCycle) -> QualificationReport {
    if c.parity == Parity::Even {
        return QualificationReport {
            qualifies: true,
            reason: QualificationReason::EvenLength,
            closing_path: None,
        };
    }
    let closing = vec![c.arrows[c.arrows.len() - 1], c.arrows[0]];
    let Some(rel) = &q.relations else {
        return QualificationReport {
            qualifies: false,
            reason: QualificationReason::RelationsUnknown,
            closing_path: Some(closing),
        };
    };
    let hit = rel
        .monomials()
        .find(|(_, m)| *m == closing.as_slice())
        .map(|(id, _)| id);
    QualificationReport {
        qualifies: hit.is_none(),
        reason: match hit {
            Some(generator) => QualificationReason::OddButClosingPathAppears { generator },
            None => QualificationReason::OddAndClosingPathAbsent,
        },
        closing_path: Some(closing),
    }
}

/// All arrow sequences describing the same cycle: rotations by an even
/// number of steps of the sequence and of its reversal.
fn representations(arrows: &[usize]) -> Vec<Vec<usize>> {
    let n = arrows.len();
    let mut rev = arrows.to_vec();
    rev.reverse();
    let mut out = Vec::new();
    for seq in [arrows.to_vec(), rev] {
        for k in 0..n {
            let mut r = seq.clone();
            r.rotate_left(k);
            out.push(r);
        }
    }
    out
}

/// The canonical representation of a cycle given by any arrangement of its
/// arrows along the cycle: the lexicographically least valid one.
pub fn canonical_form(q: &BoundQuiver, arrows: &[usize]) -> Option<ZigzagCycle> {
    representations(arrows)
        .into_iter()
        .filter_map(|r| validate_zigzag(q, &r).ok())
        .min_by(|a, b| a.arrows.cmp(&b.arrows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverbuild::{Arrow, ArrowLabel, Vertex};

    pub(crate) fn kronecker() -> BoundQuiver {
        BoundQuiver {
            p: None,
            h_orders: vec![],
            vertices: vec![Vertex::Named("0".into()), Vertex::Named("1".into())],
            labels: vec![],
            arrows: (0..2)
                .map(|id| Arrow {
                    id,
                    source: 0,
                    target: 1,
                    label: ArrowLabel {
                        exponent: 0,
                        index: id + 1,
                    },
                })
                .collect(),
            relations: None,
        }
    }

    #[test]
    fn kronecker_is_even_cycle() {
        let q = kronecker();
        let c = validate_zigzag(&q, &[0, 1]).unwrap();
        assert_eq!(c.parity, Parity::Even);
        assert_eq!(c.vertices, vec![0, 1]);
        assert!(is_qualifying(&q, &c).qualifies);
        assert_eq!(canonical_form(&q, &[1, 0]).unwrap().arrows, vec![0, 1]);
    }

    #[test]
    fn violations() {
        let q = kronecker();
        assert_eq!(
            validate_zigzag(&q, &[0]),
            Err(ZigzagViolation::TooShort { len: 1 })
        );
        assert_eq!(
            validate_zigzag(&q, &[0, 0]),
            Err(ZigzagViolation::RepeatedArrow { index: 2 })
        );
        assert_eq!(
            validate_zigzag(&q, &[0, 7]),
            Err(ZigzagViolation::UnknownArrow { index: 2, arrow: 7 })
        );
    }
}
