//! Representations of bound quivers over small finite fields: relation
//! checks, endomorphism algebras, isomorphism tests and brute-force brick
//! enumeration.
//!
//! The matrix of an arrow `a` is `dim t(a) × dim s(a)`; a path walked
//! `a_1, …, a_k` acts as `M_{a_k} ⋯ M_{a_1}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FField, FMatrix};
use crate::quiverbuild::{BoundQuiver, RelationSet};
use crate::zigzag::{is_qualifying, validate_zigzag};

/// Largest solution space searched exhaustively by [`is_isomorphic`].
pub const ISO_EXHAUSTION_CAP: u128 = 1 << 20;
/// Largest assignment space searched by [`enumerate_bricks`].
pub const BRICK_SEARCH_CAP: u128 = 1 << 24;
const ISO_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    field: FField,
    dims: Vec<usize>,
    /// (source, target) per arrow
    ends: Vec<(usize, usize)>,
    matrices: Vec<FMatrix>,
}

impl QuiverRep {
    pub fn new(
        field: FField,
        q: &BoundQuiver,
        dims: Vec<usize>,
        matrices: Vec<FMatrix>,
    ) -> Result<Self> {
        if dims.len() != q.vertex_count() {
            return Err(Error::Shape(format!(
                "{} dimensions for {} vertices",
                dims.len(),
                q.vertex_count()
            )));
        }
        if matrices.len() != q.arrows.len() {
            return Err(Error::Shape(format!(
                "{} matrices for {} arrows",
                matrices.len(),
                q.arrows.len()
            )));
        }
        for (a, m) in q.arrows.iter().zip(&matrices) {
            if (m.rows(), m.cols()) != (dims[a.target], dims[a.source]) {
                return Err(Error::Shape(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.id,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let q_order = field.order() as Elem;
        if matrices
            .iter()
            .any(|m| m.to_rows().iter().flatten().any(|&x| x >= q_order))
        {
            return Err(Error::InvalidInput(format!(
                "matrix entry outside 𝔽_{}",
                field.order()
            )));
        }
        Ok(QuiverRep {
            field,
            dims,
            ends: q.arrows.iter().map(|a| (a.source, a.target)).collect(),
            matrices,
        })
    }

    pub fn zero(field: FField, q: &BoundQuiver, dims: Vec<usize>) -> Result<Self> {
        let matrices = q
            .arrows
            .iter()
            .map(|a| {
                FMatrix::zeros(
                    dims.get(a.target).copied().unwrap_or(0),
                    dims.get(a.source).copied().unwrap_or(0),
                )
            })
            .collect();
        QuiverRep::new(field, q, dims, matrices)
    }

    pub fn field(&self) -> &FField {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrices(&self) -> &[FMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, arrow: usize) -> &FMatrix {
        &self.matrices[arrow]
    }

    pub fn total_dimension(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Action of a path given in traversal order; `None` if it is not composable.
    pub fn path_matrix(&self, path: &[usize]) -> Option<FMatrix> {
        let (&first, rest) = path.split_first()?;
        let mut acc = self.matrices[first].clone();
        let mut at = self.ends[first].1;
        for &a in rest {
            if self.ends[a].0 != at {
                return None;
            }
            acc = self.matrices[a].mul(&acc, &self.field);
            at = self.ends[a].1;
        }
        Some(acc)
    }
}

/// Id of the first relation generator that does not vanish on `rep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("relation generator {generator} does not vanish")]
pub struct RelationViolation {
    pub generator: usize,
}

pub fn eval_relations(
    rep: &QuiverRep,
    rels: &RelationSet,
) -> std::result::Result<(), RelationViolation> {
    let f = &rep.field;
    let vanishes = |path: &[usize]| rep.path_matrix(path).is_some_and(|m| m.is_zero());
    for c in &rels.commutators {
        let (Some(l), Some(r)) = (rep.path_matrix(&c.lhs), rep.path_matrix(&c.rhs)) else {
            return Err(RelationViolation { generator: c.id });
        };
        if !l.sub(&r, f).is_zero() {
            return Err(RelationViolation { generator: c.id });
        }
    }
    for r in &rels.powers {
        if !vanishes(&r.path) {
            return Err(RelationViolation { generator: r.id });
        }
    }
    for r in &rels.zero {
        if !vanishes(&r.path) {
            return Err(RelationViolation { generator: r.id });
        }
    }
    Ok(())
}

/// Offsets of the blocks `E_v` (a `dims_b[v] × dims_a[v]` matrix each) in the unknown vector.
fn unknown_offsets(dims_a: &[usize], dims_b: &[usize]) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(dims_a.len());
    let mut total = 0;
    for (da, db) in dims_a.iter().zip(dims_b) {
        offsets.push(total);
        total += da * db;
    }
    (offsets, total)
}

/// Basis of `Hom(a, b)`: families `E_v` with `E_t M^a = M^b E_s` for every arrow.
pub fn hom_basis(a: &QuiverRep, b: &QuiverRep) -> Result<Vec<Vec<FMatrix>>> {
    if a.ends != b.ends || a.field != b.field {
        return Err(Error::InvalidInput(
            "representations of different quivers or fields".into(),
        ));
    }
    let f = &a.field;
    let (offsets, total) = unknown_offsets(&a.dims, &b.dims);
    // unknown E_v[i][j] sits at offsets[v] + i * dims_a[v] + j
    let var = |v: usize, i: usize, j: usize| offsets[v] + i * a.dims[v] + j;
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for (k, &(s, t)) in a.ends.iter().enumerate() {
        let (ma, mb) = (&a.matrices[k], &b.matrices[k]);
        // (E_t M^a − M^b E_s)[i][j], i < dims_b[t], j < dims_a[s]
        for i in 0..b.dims[t] {
            for j in 0..a.dims[s] {
                let mut row = vec![0; total];
                for l in 0..a.dims[t] {
                    let x = ma.get(l, j);
                    if x != 0 {
                        let idx = var(t, i, l);
                        row[idx] = f.add(row[idx], x);
                    }
                }
                for l in 0..b.dims[s] {
                    let x = mb.get(i, l);
                    if x != 0 {
                        let idx = var(s, l, j);
                        row[idx] = f.sub(row[idx], x);
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        FMatrix::zeros(0, total)
    } else {
        FMatrix::from_rows(&rows)?
    };
    Ok(system
        .nullspace(f)
        .into_iter()
        .map(|x| {
            (0..a.dims.len())
                .map(|v| {
                    let mut m = FMatrix::zeros(b.dims[v], a.dims[v]);
                    for i in 0..b.dims[v] {
                        for j in 0..a.dims[v] {
                            m.set(i, j, x[var(v, i, j)]);
                        }
                    }
                    m
                })
                .collect()
        })
        .collect())
}

/// dim End(rep).
pub fn endomorphism_dimension(rep: &QuiverRep) -> usize {
    hom_basis(rep, rep).expect("same representation").len()
}

pub fn is_brick(rep: &QuiverRep) -> bool {
    rep.total_dimension() > 0 && endomorphism_dimension(rep) == 1
}

fn combine(basis: &[Vec<FMatrix>], coeffs: &[Elem], f: &FField) -> Vec<FMatrix> {
    let mut acc: Vec<FMatrix> = basis[0]
        .iter()
        .map(|m| FMatrix::zeros(m.rows(), m.cols()))
        .collect();
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (x, m) in acc.iter_mut().zip(b) {
            *x = x.add(&m.scale(c, f), f);
        }
    }
    acc
}

/// Calls `visit` on every coefficient vector of length `k` over 𝔽_q in
/// lexicographic order until it returns true.
fn any_coefficients(k: usize, q: u64, mut visit: impl FnMut(&[Elem]) -> bool) -> bool {
    let mut c = vec![0 as Elem; k];
    loop {
        if visit(&c) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            c[i] += 1;
            if (c[i] as u64) < q {
                break;
            }
            c[i] = 0;
        }
    }
}

fn space_size(q: u64, k: usize) -> u128 {
    (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

/// Whether `a ≅ b`: some element of `Hom(a, b)` is invertible at every vertex.
/// The solution space is searched exhaustively up to [`ISO_EXHAUSTION_CAP`];
/// beyond that random elements are tried and a negative answer is refused.
pub fn is_isomorphic(a: &QuiverRep, b: &QuiverRep) -> Result<bool> {
    if a.dims != b.dims {
        return Ok(false);
    }
    let f = &a.field;
    let basis = hom_basis(a, b)?;
    if a.total_dimension() == 0 {
        return Ok(true);
    }
    if basis.is_empty() {
        return Ok(false);
    }
    let invertible = |e: &[FMatrix]| e.iter().all(|m| m.rows() == 0 || m.det(f) != 0);
    let size = space_size(f.order(), basis.len());
    if size <= ISO_EXHAUSTION_CAP {
        return Ok(any_coefficients(basis.len(), f.order(), |c| {
            invertible(&combine(&basis, c, f))
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..ISO_SAMPLES {
        let c: Vec<Elem> = (0..basis.len())
            .map(|_| rng.gen_range(0..f.order()) as Elem)
            .collect();
        if invertible(&combine(&basis, &c, f)) {
            return Ok(true);
        }
    }
    Err(Error::SearchSpaceTooLarge {
        size: format!("{}^{}", f.order(), basis.len()),
        cap: ISO_EXHAUSTION_CAP.to_string(),
    })
}

/// Whether End(rep) contains an idempotent other than 0 and 1.
pub fn has_nontrivial_idempotent(rep: &QuiverRep) -> Result<bool> {
    let f = &rep.field;
    let basis = hom_basis(rep, rep)?;
    if basis.is_empty() {
        return Ok(false);
    }
    let size = space_size(f.order(), basis.len());
    if size > ISO_EXHAUSTION_CAP {
        return Err(Error::SearchSpaceTooLarge {
            size: format!("{}^{}", f.order(), basis.len()),
            cap: ISO_EXHAUSTION_CAP.to_string(),
        });
    }
    Ok(any_coefficients(basis.len(), f.order(), |c| {
        let e = combine(&basis, c, f);
        let is_idem = e.iter().all(|m| m.mul(m, f) == *m);
        let zero = e.iter().all(FMatrix::is_zero);
        let one = e.iter().all(|m| *m == FMatrix::identity(m.rows()));
        is_idem && !zero && !one
    }))
}

/// One-dimensional at the cycle vertices, identity on cycle arrows except
/// `a_1`, which carries `holonomy`; zero elsewhere.
pub fn pull_back_cycle_rep(
    q: &BoundQuiver,
    cycle: &[usize],
    holonomy: Elem,
    field: &FField,
) -> Result<QuiverRep> {
    if holonomy == 0 {
        return Err(Error::HolonomyZero);
    }
    if holonomy as u64 >= field.order() {
        return Err(Error::InvalidInput(format!(
            "holonomy {holonomy} is not in 𝔽_{}",
            field.order()
        )));
    }
    let c = validate_zigzag(q, cycle).map_err(|v| Error::NotQualifying(v.to_string()))?;
    let report = is_qualifying(q, &c);
    if !report.qualifies {
        return Err(Error::NotQualifying(format!("{:?}", report.reason)));
    }
    let mut dims = vec![0; q.vertex_count()];
    for &v in &c.vertices {
        dims[v] = 1;
    }
    let matrices = q
        .arrows
        .iter()
        .map(|a| {
            let mut m = FMatrix::zeros(dims[a.target], dims[a.source]);
            if let Some(pos) = c.arrows.iter().position(|&x| x == a.id) {
                m.set(0, 0, if pos == 0 { holonomy } else { 1 });
            }
            m
        })
        .collect();
    QuiverRep::new(field.clone(), q, dims, matrices)
}

#[derive(Clone, Debug)]
pub struct BrickEnumeration {
    /// one representative per isoclass, the lexicographically least assignment
    pub representatives: Vec<QuiverRep>,
}

impl BrickEnumeration {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// All bricks of the given dimension vector up to isomorphism, satisfying the
/// quiver's relations when it has any.
pub fn enumerate_bricks(
    q: &BoundQuiver,
    dims: &[usize],
    field: &FField,
) -> Result<BrickEnumeration> {
    if dims.len() != q.vertex_count() {
        return Err(Error::Shape(format!(
            "{} dimensions for {} vertices",
            dims.len(),
            q.vertex_count()
        )));
    }
    let shapes: Vec<(usize, usize)> = q
        .arrows
        .iter()
        .map(|a| (dims[a.target], dims[a.source]))
        .collect();
    let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let size = space_size(field.order(), entries);
    if size > BRICK_SEARCH_CAP {
        return Err(Error::SearchSpaceTooLarge {
            size: format!("{}^{entries}", field.order()),
            cap: BRICK_SEARCH_CAP.to_string(),
        });
    }
    let mut reps: Vec<QuiverRep> = Vec::new();
    if dims.iter().all(|&d| d == 0) {
        return Ok(BrickEnumeration {
            representatives: reps,
        });
    }
    let mut failure = None;
    any_coefficients(entries, field.order(), |c| {
        let mut matrices = Vec::with_capacity(shapes.len());
        let mut pos = 0;
        for &(r, cols) in &shapes {
            let mut m = FMatrix::zeros(r, cols);
            for i in 0..r {
                for j in 0..cols {
                    m.set(i, j, c[pos]);
                    pos += 1;
                }
            }
            matrices.push(m);
        }
        let rep = match QuiverRep::new(field.clone(), q, dims.to_vec(), matrices) {
            Ok(r) => r,
            Err(e) => {
                failure = Some(e);
                return true;
            }
        };
        if let Some(rel) = &q.relations {
            if eval_relations(&rep, rel).is_err() {
                return false;
            }
        }
        if !is_brick(&rep) {
            return false;
        }
        for known in &reps {
            match is_isomorphic(known, &rep) {
                Ok(true) => return false,
                Ok(false) => {}
                Err(e) => {
                    failure = Some(e);
                    return true;
                }
            }
        }
        reps.push(rep);
        false
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(BrickEnumeration {
            representatives: reps,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverbuild::{Arrow, ArrowLabel, Vertex};

    fn kronecker() -> BoundQuiver {
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

    fn col(v: &[Elem]) -> FMatrix {
        FMatrix::from_columns(v.len(), &[v.to_vec()])
    }

    #[test]
    fn simple_is_brick() {
        let f = FField::new(2, 1).unwrap();
        let rep = QuiverRep::zero(f, &kronecker(), vec![1, 0]).unwrap();
        assert_eq!(endomorphism_dimension(&rep), 1);
        assert!(!has_nontrivial_idempotent(&rep).unwrap());
    }

    #[test]
    fn kronecker_one_two() {
        let f = FField::new(3, 1).unwrap();
        let rep = QuiverRep::new(
            f,
            &kronecker(),
            vec![1, 2],
            vec![col(&[1, 0]), col(&[0, 1])],
        )
        .unwrap();
        assert_eq!(endomorphism_dimension(&rep), 1);
    }

    #[test]
    fn direct_sum_of_bricks() {
        let f = FField::new(2, 1).unwrap();
        let one = FMatrix::identity(2);
        let rep = QuiverRep::new(f, &kronecker(), vec![2, 2], vec![one.clone(), one]).unwrap();
        assert_eq!(endomorphism_dimension(&rep), 4);
        assert!(has_nontrivial_idempotent(&rep).unwrap());
    }

    #[test]
    fn kronecker_isomorphism() {
        let f = FField::new(2, 1).unwrap();
        let q = kronecker();
        let x = QuiverRep::new(f.clone(), &q, vec![1, 1], vec![col(&[1]), col(&[0])]).unwrap();
        let y = QuiverRep::new(f, &q, vec![1, 1], vec![col(&[0]), col(&[1])]).unwrap();
        assert!(is_isomorphic(&x, &x).unwrap());
        assert!(!is_isomorphic(&x, &y).unwrap());
    }

    #[test]
    fn kronecker_brick_counts() {
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = FField::new(p, m).unwrap();
            let n = enumerate_bricks(&kronecker(), &[1, 1], &f).unwrap().count();
            assert_eq!(n as u64, f.order() + 1);
        }
        let f = FField::new(2, 1).unwrap();
        assert_eq!(
            enumerate_bricks(&kronecker(), &[0, 0], &f).unwrap().count(),
            0
        );
    }

    #[test]
    fn holonomy_zero_rejected() {
        let f = FField::new(2, 1).unwrap();
        assert_eq!(
            pull_back_cycle_rep(&kronecker(), &[0, 1], 0, &f).unwrap_err(),
            Error::HolonomyZero
        );
    }
}
