//! τ-tilting finiteness verdicts.
//!
//! Abelian mode: `k[P ⋊ H]` is τ-tilting finite iff `R = [P,H]` is trivial or
//! `C_2 × C_2` (p = 2), or trivial or cyclic (p ≥ 3). Infinite verdicts carry a
//! qualifying zigzag cycle in the quiver of `R ⋊ H`.
//!
//! Frattini mode only sees the action on `P/Φ(P)` and decides by its rank.

use serde::{Deserialize, Serialize};

use crate::abgroup::{AbelianPGroup, Block, BlockMatrix, ModMatrix};
use crate::action::{centralizer, ensure_valid, hyperfocal_data, AbelianGroupH, GroupPresentation};
use crate::charfield::{check_reduced_invariants, eigencharacters};
use crate::error::{Error, Result};
use crate::field::build_splitting_field;
use crate::quiverbuild::{build_bound_quiver, Arrow, BoundQuiver, Vertex};
use crate::zigzag::{
    default_max_len, first_qualifying_cycle, is_qualifying, template_certificates, Parity,
    ZigzagCycle,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HyperfocalClass {
    Trivial,
    Cyclic { order: u64 },
    KleinFour,
    Other { factors: Vec<u64> },
}

/// Isomorphism class of `R` from its invariant factors.
pub fn classify_hyperfocal(factors: &[u64], p: u64) -> Result<HyperfocalClass> {
    for &f in factors {
        let mut x = f;
        while x > 1 && x % p == 0 {
            x /= p;
        }
        if x != 1 || f == 1 {
            return Err(Error::InvalidInput(format!(
                "{f} is not a nontrivial power of {p}"
            )));
        }
    }
    let mut sorted = factors.to_vec();
    sorted.sort_unstable();
    Ok(match sorted.as_slice() {
        [] => HyperfocalClass::Trivial,
        [order] => HyperfocalClass::Cyclic { order: *order },
        [2, 2] => HyperfocalClass::KleinFour,
        _ => HyperfocalClass::Other { factors: sorted },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Finite,
    Infinite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Reason {
    /// R = 1
    TrivialHyperfocal,
    /// p ≥ 3 and R cyclic
    CyclicHyperfocal,
    /// p = 2 and R ≅ C_2 × C_2, the dihedral group of order 4
    KleinFourHyperfocal,
    /// p ≥ 3 and R is not cyclic
    NonCyclicHyperfocal,
    /// p = 2 and R is neither trivial nor C_2 × C_2
    HyperfocalNotKleinFour,
    /// Frattini mode, P trivial
    FrattiniRankZero,
    /// Frattini mode, p ≥ 3 and P of rank 1
    FrattiniRankOne,
    /// Frattini mode, p = 2 and P of rank 2: both outcomes occur
    FrattiniRankTwoEvenPrime,
    /// Frattini mode, rank too large for finiteness
    FrattiniRankTooLarge { rank: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoundBy {
    Template,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    /// arrows of the cycle in the quiver of `R ⋊ H`, with endpoints and labels
    pub arrows: Vec<Arrow>,
    pub vertices: Vec<Vertex>,
    pub parity: Parity,
    pub found_by: FoundBy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Cycle(CycleCertificate),
    /// Infinite by classification, but no cycle was found within the search bound.
    ClassificationOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: Reason,
    /// invariant factors of `R` (Frattini mode: of the hyperfocal subgroup of `P/Φ(P) ⋊ H`)
    pub hyperfocal: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, Default)]
pub struct DecideOptions {
    /// zigzag search bound; `None` means twice the number of vertices
    pub max_cycle_len: Option<usize>,
}

/// Quiver with relations of `P ⋊ H`.
pub fn quiver_of(pres: &GroupPresentation) -> Result<BoundQuiver> {
    let sf = build_splitting_field(pres.p(), pres.h().exponent())?;
    let eig = eigencharacters(pres, &sf)?;
    let exps: Vec<u32> = pres.pgroup().blocks().iter().map(|b| b.exponent).collect();
    build_bound_quiver(&eig, &exps, pres.h(), pres.p())
}

/// Quiver with relations of `R ⋊ H` for a presentation already reduced to
/// its hyperfocal subgroup; checks that no eigencharacter is trivial.
pub fn reduced_quiver(reduced: &GroupPresentation) -> Result<BoundQuiver> {
    let sf = build_splitting_field(reduced.p(), reduced.h().exponent())?;
    let eig = eigencharacters(reduced, &sf)?;
    check_reduced_invariants(reduced, &eig)?;
    let exps: Vec<u32> = reduced
        .pgroup()
        .blocks()
        .iter()
        .map(|b| b.exponent)
        .collect();
    build_bound_quiver(&eig, &exps, reduced.h(), reduced.p())
}

/// First certificate for a quiver: the least template cycle, else the least
/// cycle from the exhaustive search.
pub fn find_certificate(q: &BoundQuiver, max_len: usize) -> Option<(ZigzagCycle, FoundBy)> {
    if let Some(c) = template_certificates(q)
        .into_iter()
        .find(|c| c.len() <= max_len)
    {
        return Some((c, FoundBy::Template));
    }
    first_qualifying_cycle(q, max_len).map(|c| (c, FoundBy::Search))
}

pub fn decide_abelian(pres: &GroupPresentation) -> Result<Verdict> {
    decide_abelian_with(pres, &DecideOptions::default())
}

pub fn decide_abelian_with(pres: &GroupPresentation, opts: &DecideOptions) -> Result<Verdict> {
    ensure_valid(pres)?;
    let p = pres.p();
    let data = hyperfocal_data(pres)?;
    let factors = data.hyperfocal.invariant_factors().to_vec();
    let reduced = &data.reduced;
    if p == 2 {
        if let Some(b) = reduced
            .pgroup()
            .blocks()
            .iter()
            .find(|b| b.multiplicity == 1)
        {
            return Err(Error::Internal(format!(
                "p = 2 and the reduced block of exponent {} has multiplicity 1",
                b.exponent
            )));
        }
    }
    let class = classify_hyperfocal(&factors, p)?;
    let finite = match (&class, p) {
        (HyperfocalClass::Trivial, _) => Some(Reason::TrivialHyperfocal),
        (HyperfocalClass::KleinFour, 2) => Some(Reason::KleinFourHyperfocal),
        (HyperfocalClass::Cyclic { .. }, p) if p >= 3 => Some(Reason::CyclicHyperfocal),
        _ => None,
    };
    if let Some(reason) = finite {
        return Ok(Verdict {
            outcome: Outcome::Finite,
            reason,
            hyperfocal: factors,
            certificate: None,
        });
    }
    let reason = if p == 2 {
        Reason::HyperfocalNotKleinFour
    } else {
        Reason::NonCyclicHyperfocal
    };

    let q = reduced_quiver(reduced)?;
    let max_len = opts.max_cycle_len.unwrap_or_else(|| default_max_len(&q));
    let certificate = match find_certificate(&q, max_len) {
        Some((c, found_by)) => {
            if !is_qualifying(&q, &c).qualifies {
                return Err(Error::Internal("certificate cycle does not qualify".into()));
            }
            Certificate::Cycle(CycleCertificate {
                arrows: c.arrows.iter().map(|&a| q.arrows[a].clone()).collect(),
                vertices: c.vertices.iter().map(|&v| q.vertices[v].clone()).collect(),
                parity: c.parity,
                found_by,
            })
        }
        None => {
            log::warn!("no qualifying zigzag cycle of length <= {max_len}; verdict rests on classification only");
            Certificate::ClassificationOnly
        }
    };
    Ok(Verdict {
        outcome: Outcome::Infinite,
        reason,
        hyperfocal: factors,
        certificate: Some(certificate),
    })
}

/// The action of `H` on the Frattini quotient `P/Φ(P) ≅ 𝔽_p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrattiniInput {
    pres: GroupPresentation,
}

impl FrattiniInput {
    /// `matrices[g]` is the n×n action of generator `g` of `H`, row-major, reduced mod p.
    pub fn new(p: u64, n: usize, h: AbelianGroupH, matrices: &[Vec<Vec<i64>>]) -> Result<Self> {
        let blocks = if n == 0 {
            Vec::new()
        } else {
            vec![Block::new(1, n)]
        };
        let pgroup = AbelianPGroup::new(p, blocks)?;
        let action = matrices
            .iter()
            .map(|rows| {
                let ms = if n == 0 {
                    Vec::new()
                } else {
                    vec![ModMatrix::from_rows(rows, p)?]
                };
                BlockMatrix::new(&pgroup, ms)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FrattiniInput {
            pres: GroupPresentation::new(pgroup, h, action)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.pres.p()
    }

    pub fn rank(&self) -> usize {
        self.pres.pgroup().rank()
    }

    /// As a presentation of `(P/Φ(P)) ⋊ H`.
    pub fn as_presentation(&self) -> &GroupPresentation {
        &self.pres
    }
}

pub fn decide_frattini(inp: &FrattiniInput) -> Result<Verdict> {
    ensure_valid(&inp.pres)?;
    let fixed = centralizer(&inp.pres)?;
    if !fixed.is_trivial() {
        return Err(Error::NontrivialFixedSpace(fixed.invariant_factors().len()));
    }
    let (p, n) = (inp.p(), inp.rank());
    let hyperfocal = vec![p; n];
    let (outcome, reason) = match (p, n) {
        (_, 0) => (Outcome::Finite, Reason::FrattiniRankZero),
        (2, 1) => return Err(Error::InconsistentRankOne),
        (2, 2) => (Outcome::Unknown, Reason::FrattiniRankTwoEvenPrime),
        (_, 1) => (Outcome::Finite, Reason::FrattiniRankOne),
        (_, rank) => (Outcome::Infinite, Reason::FrattiniRankTooLarge { rank }),
    };
    Ok(Verdict {
        outcome,
        reason,
        hyperfocal,
        certificate: None,
    })
}

/// Structure of `R` as far as the sufficient criterion for finiteness needs it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HyperfocalDescriptor {
    Abelian(HyperfocalClass),
    Cyclic,
    Dihedral { order: u64 },
    Semidihedral { order: u64 },
    Quaternion { order: u64 },
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sufficiency {
    Yes,
    Unknown,
}

/// Finite when `R` is cyclic, or p = 2 and `R` is dihedral, semidihedral or
/// generalized quaternion. Otherwise nothing is claimed.
pub fn finiteness_sufficient(desc: &HyperfocalDescriptor, p: u64) -> Sufficiency {
    use HyperfocalDescriptor as D;
    let yes = match desc {
        D::Cyclic
        | D::Abelian(HyperfocalClass::Trivial)
        | D::Abelian(HyperfocalClass::Cyclic { .. }) => true,
        D::Abelian(HyperfocalClass::KleinFour)
        | D::Dihedral { .. }
        | D::Semidihedral { .. }
        | D::Quaternion { .. } => p == 2,
        D::Abelian(HyperfocalClass::Other { .. }) | D::Other => false,
    };
    if yes {
        Sufficiency::Yes
    } else {
        Sufficiency::Unknown
    }
}
