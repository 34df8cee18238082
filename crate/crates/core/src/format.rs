//! JSON documents: group specs, quivers, representations and verdicts.
//!
//! Group spec, abelian mode:
//!
//! ```json
//! { "p": 2,
//!   "P": { "blocks": [ { "exponent": 1, "multiplicity": 2 } ] },
//!   "H": { "orders": [3] },
//!   "action": [ { "generator": 0, "blocks": [ [[0,1],[1,1]] ] } ] }
//! ```
//!
//! Matrices are row-major; column `j` is the image of the `j`-th generator of
//! the block, so `[[0,1],[1,1]]` sends `a ↦ b` and `b ↦ ab`. Frattini mode
//! (`"mode": "frattini"`) replaces `P` by `"n"` and each `blocks` list by a
//! single n×n `"matrix"` over 𝔽_p.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::abgroup::prime_power;
use crate::action::{AbelianGroupH, GroupPresentation};
use crate::decide::{CycleCertificate, FrattiniInput, Verdict};
use crate::error::{Error, Result};
use crate::field::{Elem, FField, FMatrix};
use crate::quiverbuild::BoundQuiver;
use crate::repcheck::QuiverRep;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Abelian,
    Frattini,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Abelian => "abelian",
            Mode::Frattini => "frattini",
        })
    }
}

/// Integer matrix rejected at parse time unless every row has as many
/// entries as there are rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SquareMatrix(pub Vec<Vec<i64>>);

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        let n = rows.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(de::Error::custom(format!(
                "matrix is not square: row {r} has {} entries (column {} out of range) but there are {n} rows",
                row.len(),
                row.len().min(n)
            )));
        }
        Ok(SquareMatrix(rows))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub exponent: u32,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PSpec {
    pub blocks: Vec<BlockSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSpec {
    pub orders: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub generator: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<SquareMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<SquareMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub mode: Mode,
    pub p: u64,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub pgroup: Option<PSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "H")]
    pub h: HSpec,
    pub action: Vec<ActionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedSpec {
    Abelian(GroupPresentation),
    Frattini(FrattiniInput),
}

impl ParsedSpec {
    pub fn presentation(&self) -> &GroupPresentation {
        match self {
            ParsedSpec::Abelian(p) => p,
            ParsedSpec::Frattini(f) => f.as_presentation(),
        }
    }
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

/// Parses a group spec; `mode` overrides the mode written in the file.
pub fn parse_group_spec(bytes: &[u8], mode: Option<Mode>) -> Result<ParsedSpec> {
    let mut spec: GroupSpec =
        serde_json::from_slice(bytes).map_err(|e| json_error("group spec", e))?;
    if let Some(m) = mode {
        spec.mode = m;
    }
    spec.to_parsed()
}

/// Action entries ordered by generator, each generator exactly once.
fn ordered_action(action: &[ActionSpec], count: usize) -> Result<Vec<&ActionSpec>> {
    let mut slots: Vec<Option<&ActionSpec>> = vec![None; count];
    for (i, a) in action.iter().enumerate() {
        let slot = slots.get_mut(a.generator).ok_or_else(|| {
            Error::Parse(format!(
                "action[{i}]: generator {} but H has {count} generators",
                a.generator
            ))
        })?;
        if slot.replace(a).is_some() {
            return Err(Error::Parse(format!(
                "action[{i}]: generator {} given twice",
                a.generator
            )));
        }
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(g, s)| s.ok_or_else(|| Error::Parse(format!("no action given for generator {g}"))))
        .collect()
}

impl GroupSpec {
    pub fn to_parsed(&self) -> Result<ParsedSpec> {
        let h = AbelianGroupH::new(self.h.orders.clone())?;
        let action = ordered_action(&self.action, h.generator_count())?;
        match self.mode {
            Mode::Abelian => {
                if self.n.is_some() {
                    return Err(Error::Parse("field \"n\" belongs to frattini mode".into()));
                }
                let blocks: Vec<(u32, usize)> = self
                    .pgroup
                    .as_ref()
                    .map(|p| {
                        p.blocks
                            .iter()
                            .map(|b| (b.exponent, b.multiplicity))
                            .collect()
                    })
                    .unwrap_or_default();
                let mats = action
                    .iter()
                    .map(|a| {
                        if a.matrix.is_some() {
                            return Err(Error::Parse(format!(
                                "generator {}: \"matrix\" belongs to frattini mode; use \"blocks\"",
                                a.generator
                            )));
                        }
                        Ok(a.blocks.iter().flatten().map(|m| m.0.clone()).collect())
                    })
                    .collect::<Result<Vec<Vec<_>>>>()?;
                Ok(ParsedSpec::Abelian(GroupPresentation::from_integer_blocks(
                    self.p,
                    &blocks,
                    &self.h.orders,
                    &mats,
                )?))
            }
            Mode::Frattini => {
                if self.pgroup.is_some() {
                    return Err(Error::Parse(
                        "field \"P\" belongs to abelian mode; use \"n\"".into(),
                    ));
                }
                let n = self
                    .n
                    .ok_or_else(|| Error::Parse("frattini mode needs \"n\"".into()))?;
                let mats = action
                    .iter()
                    .map(|a| match (&a.matrix, &a.blocks) {
                        (Some(m), None) => Ok(m.0.clone()),
                        _ => Err(Error::Parse(format!(
                            "generator {}: frattini mode needs exactly one \"matrix\"",
                            a.generator
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ParsedSpec::Frattini(FrattiniInput::new(
                    self.p, n, h, &mats,
                )?))
            }
        }
    }

    /// Canonical spec: entries reduced, action listed by generator.
    pub fn from_parsed(parsed: &ParsedSpec) -> Self {
        let pres = parsed.presentation();
        let to_int = |rows: Vec<Vec<u64>>| {
            SquareMatrix(
                rows.into_iter()
                    .map(|r| r.into_iter().map(|x| x as i64).collect())
                    .collect(),
            )
        };
        let h = HSpec {
            orders: pres.h().orders().to_vec(),
        };
        match parsed {
            ParsedSpec::Abelian(pres) => GroupSpec {
                mode: Mode::Abelian,
                p: pres.p(),
                pgroup: Some(PSpec {
                    blocks: pres
                        .pgroup()
                        .blocks()
                        .iter()
                        .map(|b| BlockSpec {
                            exponent: b.exponent,
                            multiplicity: b.multiplicity,
                        })
                        .collect(),
                }),
                n: None,
                h,
                action: pres
                    .action()
                    .iter()
                    .enumerate()
                    .map(|(g, a)| ActionSpec {
                        generator: g,
                        blocks: Some(a.blocks().iter().map(|m| to_int(m.to_rows())).collect()),
                        matrix: None,
                    })
                    .collect(),
            },
            ParsedSpec::Frattini(f) => GroupSpec {
                mode: Mode::Frattini,
                p: f.p(),
                pgroup: None,
                n: Some(f.rank()),
                h,
                action: pres
                    .action()
                    .iter()
                    .enumerate()
                    .map(|(g, a)| ActionSpec {
                        generator: g,
                        blocks: None,
                        matrix: Some(
                            a.blocks()
                                .first()
                                .map(|m| to_int(m.to_rows()))
                                .unwrap_or(SquareMatrix(vec![])),
                        ),
                    })
                    .collect(),
            },
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

pub fn serialize_group_spec(parsed: &ParsedSpec) -> String {
    to_json(&GroupSpec::from_parsed(parsed))
}

pub fn parse_quiver(bytes: &[u8]) -> Result<BoundQuiver> {
    let q: BoundQuiver = serde_json::from_slice(bytes).map_err(|e| json_error("quiver", e))?;
    q.check()?;
    Ok(q)
}

pub fn parse_verdict(bytes: &[u8]) -> Result<Verdict> {
    serde_json::from_slice(bytes).map_err(|e| json_error("verdict", e))
}

/// `{q, dims: {vertex: n}, matrices: {arrow id: rows}}`. Vertices are keyed by
/// index or by their printed label; missing vertices have dimension 0 and
/// missing arrows the zero matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub q: u64,
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub matrices: BTreeMap<String, Vec<Vec<Elem>>>,
}

/// 𝔽_q for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<FField> {
    let (p, m) = prime_power(q).ok_or(Error::InvalidModulus(q))?;
    FField::new(p, m)
}

fn vertex_key(q: &BoundQuiver, key: &str) -> Result<usize> {
    if let Ok(i) = key.parse::<usize>() {
        if i < q.vertex_count() {
            return Ok(i);
        }
    }
    q.vertices
        .iter()
        .position(|v| v.to_string() == key)
        .ok_or_else(|| Error::Parse(format!("unknown vertex {key:?}")))
}

impl RepFile {
    pub fn to_rep(&self, q: &BoundQuiver) -> Result<QuiverRep> {
        let field = field_of_order(self.q)?;
        let mut dims = vec![0; q.vertex_count()];
        for (k, &d) in &self.dims {
            dims[vertex_key(q, k)?] = d;
        }
        let mut matrices: Vec<FMatrix> = q
            .arrows
            .iter()
            .map(|a| FMatrix::zeros(dims[a.target], dims[a.source]))
            .collect();
        for (k, rows) in &self.matrices {
            let id: usize = k
                .parse()
                .ok()
                .filter(|&i| i < q.arrows.len())
                .ok_or_else(|| Error::Parse(format!("unknown arrow {k:?}")))?;
            let a = &q.arrows[id];
            let (r, c) = (dims[a.target], dims[a.source]);
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(Error::Shape(format!("arrow {id} needs a {r}x{c} matrix")));
            }
            matrices[id] = if r == 0 {
                FMatrix::zeros(0, c)
            } else {
                FMatrix::from_rows(rows)?
            };
        }
        QuiverRep::new(field, q, dims, matrices)
    }

    pub fn from_rep(rep: &QuiverRep) -> Self {
        RepFile {
            q: rep.field().order(),
            dims: rep
                .dims()
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(v, &d)| (v.to_string(), d))
                .collect(),
            matrices: rep
                .matrices()
                .iter()
                .enumerate()
                .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
                .map(|(a, m)| (a.to_string(), m.to_rows()))
                .collect(),
        }
    }
}

pub fn parse_rep(bytes: &[u8], q: &BoundQuiver) -> Result<QuiverRep> {
    let f: RepFile = serde_json::from_slice(bytes).map_err(|e| json_error("representation", e))?;
    f.to_rep(q)
}

/// Anything carrying a cycle: a verdict, a cycle certificate, `{"arrows": [ids]}`
/// or a bare list of arrow ids.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum CycleDocument {
    Verdict(Verdict),
    Certificate(CycleCertificate),
    Ids { arrows: Vec<usize> },
    Bare(Vec<usize>),
}

/// Arrow ids of the cycle in a certificate document. Certificates carrying
/// full arrows must agree with `q` on endpoints and labels.
pub fn parse_cycle(bytes: &[u8], q: &BoundQuiver) -> Result<Vec<usize>> {
    let doc: CycleDocument =
        serde_json::from_slice(bytes).map_err(|e| json_error("certificate", e))?;
    let cert = match doc {
        CycleDocument::Bare(ids) | CycleDocument::Ids { arrows: ids } => return Ok(ids),
        CycleDocument::Certificate(c) => c,
        CycleDocument::Verdict(v) => match v.certificate {
            Some(crate::decide::Certificate::Cycle(c)) => c,
            _ => {
                return Err(Error::InvalidInput(
                    "verdict carries no cycle certificate".into(),
                ))
            }
        },
    };
    cert.arrows
        .iter()
        .map(|a| match q.arrows.get(a.id) {
            Some(b) if b == a => Ok(a.id),
            _ => Err(Error::InvalidInput(format!(
                "certificate arrow {} does not match the quiver",
                a.id
            ))),
        })
        .collect()
}
