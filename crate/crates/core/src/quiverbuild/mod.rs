//! Gabriel quivers with relations.
//!
//! For abelian `H` the vertices are the characters of `H`, and each
//! eigencharacter `χ_ℓ` (label `ℓ = (e, j)`: the j-th character of the block of
//! exponent e) gives one arrow `α_{ℓ,λ}: λ → χ_ℓ ⊗ λ` at every vertex.
//!
//! Paths are stored in traversal order: the first arrow walked comes first.
//! The product `α_ℓ α_ℓ'` at `λ` (walk `α_ℓ'` first) is the path
//! `[α_{ℓ',λ}, α_{ℓ,χ_ℓ'⊗λ}]`.

mod chartable;
mod cyclotomic;
mod dot;

pub use chartable::{
    quiver_from_character_table, CharacterTable, CharacterTableSpec, ClassInfo, IrreducibleSpec,
    ValueSpec,
};
pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use dot::to_dot;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::AbelianGroupH;
use crate::charfield::{Character, Eigencharacter};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Vertex {
    Character(Character),
    Named(String),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Character(c) => write!(f, "{c}"),
            Vertex::Named(s) => f.write_str(s),
        }
    }
}

/// Layer label `(e, j)`: exponent of the block and 1-based index inside it.
/// Quivers built from a character table use `e = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u32, usize)", into = "(u32, usize)")]
pub struct ArrowLabel {
    pub exponent: u32,
    pub index: usize,
}

impl From<(u32, usize)> for ArrowLabel {
    fn from((exponent, index): (u32, usize)) -> Self {
        ArrowLabel { exponent, index }
    }
}

impl From<ArrowLabel> for (u32, usize) {
    fn from(l: ArrowLabel) -> Self {
        (l.exponent, l.index)
    }
}

impl fmt::Display for ArrowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.exponent, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrow {
    pub id: usize,
    #[serde(rename = "src")]
    pub source: usize,
    #[serde(rename = "tgt")]
    pub target: usize,
    pub label: ArrowLabel,
}

/// `lhs − rhs` at `vertex`, both paths of length two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Commutator {
    pub id: usize,
    pub vertex: usize,
    pub labels: (ArrowLabel, ArrowLabel),
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

/// `α_ℓ^{p^e}` starting at `vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerRelation {
    pub id: usize,
    pub vertex: usize,
    pub label: ArrowLabel,
    pub path: Vec<usize>,
}

/// A single path set to zero; arises when restricting to a subquiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroRelation {
    pub id: usize,
    pub vertex: usize,
    pub path: Vec<usize>,
}

/// Generator ids run through commutators, then powers, then zero relations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSet {
    pub commutators: Vec<Commutator>,
    pub powers: Vec<PowerRelation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero: Vec<ZeroRelation>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.commutators.len() + self.powers.len() + self.zero.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every monomial occurring in a generator, tagged with the generator id.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.commutators
            .iter()
            .flat_map(|c| [(c.id, c.lhs.as_slice()), (c.id, c.rhs.as_slice())])
            .chain(self.powers.iter().map(|r| (r.id, r.path.as_slice())))
            .chain(self.zero.iter().map(|r| (r.id, r.path.as_slice())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelCharacter {
    pub label: ArrowLabel,
    pub character: Character,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundQuiver {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h_orders: Vec<u64>,
    pub vertices: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<LabelCharacter>,
    pub arrows: Vec<Arrow>,
    /// `None` marks a quiver without known relations.
    pub relations: Option<RelationSet>,
}

/// Labels in eigencharacter order: `(exponent of block, 1-based index)`.
fn labels_for(eig: &[Eigencharacter], block_exponents: &[u32]) -> Vec<LabelCharacter> {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    eig.iter()
        .map(|e| {
            let j = count.entry(e.block).or_insert(0);
            *j += 1;
            LabelCharacter {
                label: ArrowLabel {
                    exponent: block_exponents[e.block],
                    index: *j,
                },
                character: e.character.clone(),
            }
        })
        .collect()
}

/// The quiver of `k[P ⋊ H]` with its commutator and power relations.
/// `block_exponents[i]` is the exponent of block `i` of `P`.
pub fn build_bound_quiver(
    eig: &[Eigencharacter],
    block_exponents: &[u32],
    h: &AbelianGroupH,
    p: u64,
) -> Result<BoundQuiver> {
    if let Some(e) = eig.iter().find(|e| e.block >= block_exponents.len()) {
        return Err(Error::Shape(format!(
            "eigencharacter on unknown block {}",
            e.block
        )));
    }
    if let Some(e) = eig
        .iter()
        .find(|e| e.character.0.len() != h.generator_count())
    {
        return Err(Error::Shape(format!(
            "character {} has the wrong length",
            e.character
        )));
    }
    let labels = labels_for(eig, block_exponents);
    let n = labels.len();
    let chars = h.characters();
    let nv = chars.len();
    let arrow_id = |v: usize, k: usize| v * n + k;
    let step = |v: usize, k: usize| h.character_index(&h.tensor(&labels[k].character, &chars[v]));

    let mut arrows = Vec::with_capacity(nv * n);
    for v in 0..nv {
        for (k, l) in labels.iter().enumerate() {
            arrows.push(Arrow {
                id: arrow_id(v, k),
                source: v,
                target: step(v, k),
                label: l.label,
            });
        }
    }

    let mut rel = RelationSet::default();
    for v in 0..nv {
        for k in 0..n {
            for k2 in k + 1..n {
                rel.commutators.push(Commutator {
                    id: rel.commutators.len(),
                    vertex: v,
                    labels: (labels[k].label, labels[k2].label),
                    lhs: vec![arrow_id(v, k2), arrow_id(step(v, k2), k)],
                    rhs: vec![arrow_id(v, k), arrow_id(step(v, k), k2)],
                });
            }
        }
    }
    let offset = rel.commutators.len();
    for v in 0..nv {
        for (k, l) in labels.iter().enumerate() {
            let len = p
                .checked_pow(l.label.exponent)
                .filter(|&x| x <= 1 << 20)
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "power relation of length {p}^{} is too long",
                        l.label.exponent
                    ))
                })?;
            let mut path = Vec::with_capacity(len as usize);
            let mut cur = v;
            for _ in 0..len {
                path.push(arrow_id(cur, k));
                cur = step(cur, k);
            }
            rel.powers.push(PowerRelation {
                id: offset + rel.powers.len(),
                vertex: v,
                label: l.label,
                path,
            });
        }
    }

    Ok(BoundQuiver {
        p: Some(p),
        h_orders: h.orders().to_vec(),
        vertices: chars.into_iter().map(Vertex::Character).collect(),
        labels,
        arrows,
        relations: Some(rel),
    })
}

/// Number of arrows `λ → μ`: the multiplicity of `μ ⊗ λ^{-1}` among the eigencharacters.
pub fn arrow_count_general(
    eig: &[Eigencharacter],
    h: &AbelianGroupH,
    lambda: &Character,
    mu: &Character,
) -> usize {
    let want = h.tensor(mu, &h.dual_inverse(lambda));
    eig.iter().filter(|e| e.character == want).count()
}

impl BoundQuiver {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow(&self, id: usize) -> &Arrow {
        &self.arrows[id]
    }

    pub fn is_quiver_only(&self) -> bool {
        self.relations.is_none()
    }

    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.source == v)
    }

    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.target == v)
    }

    /// `counts[s][t]` = number of arrows `s → t`.
    pub fn arrow_count_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut counts = vec![vec![0; n]; n];
        for a in &self.arrows {
            counts[a.source][a.target] += 1;
        }
        counts
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(|a| a.source == a.target)
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            adj[a.source].push(a.target);
            adj[a.target].push(a.source);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of paths from `v` in normal form modulo the relations: the
    /// product of the power-relation lengths at `v`.
    pub fn path_normal_form_count(&self, v: usize) -> Result<u128> {
        let rel = self
            .relations
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("quiver has no relations".into()))?;
        if v >= self.vertices.len() {
            return Err(Error::InvalidInput(format!("no vertex {v}")));
        }
        Ok(rel
            .powers
            .iter()
            .filter(|r| r.vertex == v)
            .map(|r| r.path.len() as u128)
            .product())
    }

    /// Full subquiver on the given arrows and their endpoints, renumbered in
    /// increasing order of the old ids. A relation monomial using a dropped
    /// arrow becomes zero, so a commutator with one surviving side turns into
    /// a zero relation on that side.
    pub fn restrict_to_arrows(&self, keep: &[usize]) -> Result<BoundQuiver> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&a) = keep.iter().find(|&&a| a >= self.arrows.len()) {
            return Err(Error::InvalidInput(format!("no arrow {a}")));
        }
        let mut verts: Vec<usize> = keep
            .iter()
            .flat_map(|&a| [self.arrows[a].source, self.arrows[a].target])
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let vmap: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let amap: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let arrows = keep
            .iter()
            .enumerate()
            .map(|(i, &a)| Arrow {
                id: i,
                source: vmap[&self.arrows[a].source],
                target: vmap[&self.arrows[a].target],
                label: self.arrows[a].label,
            })
            .collect();
        let map_path = |path: &[usize]| -> Option<Vec<usize>> {
            path.iter().map(|a| amap.get(a).copied()).collect()
        };
        let relations = self.relations.as_ref().map(|rel| {
            let mut out = RelationSet::default();
            let mut zero_paths = Vec::new();
            for c in &rel.commutators {
                match (map_path(&c.lhs), map_path(&c.rhs)) {
                    (Some(lhs), Some(rhs)) => out.commutators.push(Commutator {
                        id: out.commutators.len(),
                        vertex: vmap[&c.vertex],
                        labels: c.labels,
                        lhs,
                        rhs,
                    }),
                    (Some(path), None) | (None, Some(path)) => {
                        zero_paths.push((vmap[&c.vertex], path))
                    }
                    (None, None) => {}
                }
            }
            for r in &rel.powers {
                if let Some(path) = map_path(&r.path) {
                    out.powers.push(PowerRelation {
                        id: 0,
                        vertex: vmap[&r.vertex],
                        label: r.label,
                        path,
                    });
                }
            }
            for r in &rel.zero {
                if let Some(path) = map_path(&r.path) {
                    zero_paths.push((vmap[&r.vertex], path));
                }
            }
            let offset = out.commutators.len();
            for (k, r) in out.powers.iter_mut().enumerate() {
                r.id = offset + k;
            }
            let offset = offset + out.powers.len();
            out.zero = zero_paths
                .into_iter()
                .enumerate()
                .map(|(k, (vertex, path))| ZeroRelation {
                    id: offset + k,
                    vertex,
                    path,
                })
                .collect();
            out
        });
        Ok(BoundQuiver {
            p: self.p,
            h_orders: self.h_orders.clone(),
            vertices: verts.iter().map(|&v| self.vertices[v].clone()).collect(),
            labels: self.labels.clone(),
            arrows,
            relations,
        })
    }

    /// The path is composable in traversal order.
    pub fn is_path(&self, path: &[usize]) -> bool {
        path.iter().all(|&a| a < self.arrows.len())
            && path
                .windows(2)
                .all(|w| self.arrows[w[0]].target == self.arrows[w[1]].source)
    }

    /// Structural checks for quivers read from outside: ids, endpoints and
    /// relation paths.
    pub fn check(&self) -> Result<()> {
        let nv = self.vertices.len();
        for (i, a) in self.arrows.iter().enumerate() {
            if a.id != i {
                return Err(Error::InvalidInput(format!(
                    "arrow at position {i} has id {}",
                    a.id
                )));
            }
            if a.source >= nv || a.target >= nv {
                return Err(Error::InvalidInput(format!(
                    "arrow {i} has an endpoint outside the vertex list"
                )));
            }
        }
        if let Some(rel) = &self.relations {
            for (k, c) in rel.commutators.iter().enumerate() {
                if c.id != k {
                    return Err(Error::InvalidInput(format!(
                        "commutator at position {k} has id {}",
                        c.id
                    )));
                }
                for path in [&c.lhs, &c.rhs] {
                    if !self.is_path(path)
                        || path.first().map(|&a| self.arrows[a].source) != Some(c.vertex)
                    {
                        return Err(Error::InvalidInput(format!(
                            "commutator {k} is not a path at vertex {}",
                            c.vertex
                        )));
                    }
                }
                let end = |p: &[usize]| p.last().map(|&a| self.arrows[a].target);
                if end(&c.lhs) != end(&c.rhs) {
                    return Err(Error::InvalidInput(format!(
                        "commutator {k} has sides with different endpoints"
                    )));
                }
            }
            let offset = rel.commutators.len();
            for (k, r) in rel.powers.iter().enumerate() {
                if r.id != offset + k {
                    return Err(Error::InvalidInput(format!(
                        "power relation at position {k} has id {}",
                        r.id
                    )));
                }
                if !self.is_path(&r.path)
                    || r.path.first().map(|&a| self.arrows[a].source) != Some(r.vertex)
                {
                    return Err(Error::InvalidInput(format!(
                        "power relation {} is not a path at vertex {}",
                        r.id, r.vertex
                    )));
                }
            }
            let offset = offset + rel.powers.len();
            for (k, r) in rel.zero.iter().enumerate() {
                if r.id != offset + k {
                    return Err(Error::InvalidInput(format!(
                        "zero relation at position {k} has id {}",
                        r.id
                    )));
                }
                if !self.is_path(&r.path)
                    || r.path.first().map(|&a| self.arrows[a].source) != Some(r.vertex)
                {
                    return Err(Error::InvalidInput(format!(
                        "zero relation {} is not a path at vertex {}",
                        r.id, r.vertex
                    )));
                }
            }
        }
        Ok(())
    }
}
