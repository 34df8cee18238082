//! Normal forms over the chain ring ℤ/p^e.
//!
//! Submodules of (ℤ/p^e)^n are stored in column Howell form: basis columns in
//! echelon order, each with leading entry exactly `p^a`, entries above a
//! pivot reduced into `[0, p^a)`, and the Howell property (the columns whose
//! leading index is ≥ k span every element of the submodule vanishing on the
//! first k coordinates). This makes the form unique for a given span.

use super::modmat::{inv_mod, mul_mod, prime_power, sub_mod, valuation, ModMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HowellForm {
    modulus: u64,
    p: u64,
    e: u32,
    dim: usize,
    basis: Vec<Vec<u64>>,
    /// (leading row, valuation of the pivot) for each basis column
    pivots: Vec<(usize, u32)>,
}

/// Column Howell form of the span of the columns of `m`.
pub fn howell_form(m: &ModMatrix) -> Result<HowellForm> {
    HowellForm::from_generators(m.rows(), m.modulus(), m.columns())
}

impl HowellForm {
    pub fn from_generators<I>(dim: usize, modulus: u64, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let (p, e) = prime_power(modulus).ok_or(Error::InvalidModulus(modulus))?;
        let mut pool: Vec<Vec<u64>> = Vec::new();
        for g in generators {
            if g.len() != dim {
                return Err(Error::Shape(format!(
                    "generator of length {} in a module of rank {dim}",
                    g.len()
                )));
            }
            let g: Vec<u64> = g.into_iter().map(|x| x % modulus).collect();
            if g.iter().any(|&x| x != 0) {
                pool.push(g);
            }
        }

        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();
        for row in 0..dim {
            // lowest valuation at this coordinate; ties go to the earliest generator
            let Some((idx, a)) = pool
                .iter()
                .enumerate()
                .map(|(i, v)| (i, valuation(v[row], p, e)))
                .filter(|&(_, a)| a < e)
                .min_by_key(|&(i, a)| (a, i))
            else {
                continue;
            };
            let mut piv = pool.remove(idx);
            let pa = p.pow(a);
            let unit = piv[row] / pa;
            let u_inv = inv_mod(unit, modulus).expect("unit part is invertible");
            for x in piv.iter_mut() {
                *x = mul_mod(*x, u_inv, modulus);
            }
            debug_assert_eq!(piv[row], pa);

            for w in pool.iter_mut() {
                if w[row] != 0 {
                    let f = w[row] / pa;
                    for (x, &y) in w.iter_mut().zip(&piv) {
                        *x = sub_mod(*x, mul_mod(f, y, modulus), modulus);
                    }
                }
            }
            if a > 0 {
                let ann = p.pow(e - a);
                let extra: Vec<u64> = piv.iter().map(|&x| mul_mod(x, ann, modulus)).collect();
                pool.push(extra);
            }
            pool.retain(|v| v.iter().any(|&x| x != 0));
            basis.push(piv);
            pivots.push((row, a));
        }

        // reduce entries above each pivot
        for s in 0..basis.len() {
            let (row, a) = pivots[s];
            let pa = p.pow(a);
            for k in 0..s {
                let f = basis[k][row] / pa;
                if f != 0 {
                    let src = basis[s].clone();
                    for (x, y) in basis[k].iter_mut().zip(src) {
                        *x = sub_mod(*x, mul_mod(f, y, modulus), modulus);
                    }
                }
            }
        }

        Ok(HowellForm {
            modulus,
            p,
            e,
            dim,
            basis,
            pivots,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn to_matrix(&self) -> ModMatrix {
        ModMatrix::from_columns(self.dim, &self.basis, self.modulus)
    }

    /// Number of elements of the span.
    pub fn order(&self) -> u64 {
        self.pivots
            .iter()
            .map(|&(_, a)| self.p.pow(self.e - a))
            .product()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let m = self.modulus;
        let mut w: Vec<u64> = v.iter().map(|&x| x % m).collect();
        let mut next_pivot = 0;
        for row in 0..self.dim {
            if next_pivot < self.pivots.len() && self.pivots[next_pivot].0 == row {
                let pa = self.p.pow(self.pivots[next_pivot].1);
                if !w[row].is_multiple_of(pa) {
                    return false;
                }
                let f = w[row] / pa;
                for (x, &y) in w.iter_mut().zip(&self.basis[next_pivot]) {
                    *x = sub_mod(*x, mul_mod(f, y, m), m);
                }
                next_pivot += 1;
            } else if w[row] != 0 {
                return false;
            }
        }
        true
    }

    /// Isomorphism type of the span as a multiset of cyclic orders p^f.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let smith = local_smith(&self.to_matrix()).expect("modulus already validated");
        let mut f: Vec<u64> = smith
            .valuations
            .iter()
            .map(|&v| self.p.pow(self.e - v))
            .collect();
        f.sort_unstable();
        f
    }

    /// Span of both forms.
    pub fn join(&self, other: &HowellForm) -> HowellForm {
        assert_eq!((self.dim, self.modulus), (other.dim, other.modulus));
        HowellForm::from_generators(
            self.dim,
            self.modulus,
            self.basis.iter().chain(&other.basis).cloned(),
        )
        .expect("same module")
    }
}

/// Diagonalization `L·M·R = diag(p^{v_0}, …, p^{v_{k-1}}, 0, …)` over ℤ/p^e.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    /// valuations of the nonzero diagonal entries, nondecreasing
    pub valuations: Vec<u32>,
    /// the column transform R (invertible)
    pub col_transform: ModMatrix,
}

pub fn local_smith(m: &ModMatrix) -> Result<LocalSmith> {
    let modulus = m.modulus();
    let (p, e) = prime_power(modulus).ok_or(Error::InvalidModulus(modulus))?;
    let mut a = m.clone();
    let mut r = ModMatrix::identity(m.cols(), modulus);
    let mut valuations = Vec::new();
    let n = m.rows().min(m.cols());
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..a.rows() {
            for j in k..a.cols() {
                let v = valuation(a.get(i, j), p, e);
                if v < e && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap_rows(k, i);
        a.swap_cols(k, j);
        r.swap_cols(k, j);
        let pv = p.pow(v);
        let u_inv = inv_mod(a.get(k, k) / pv, modulus).expect("unit part");
        a.scale_row(k, u_inv);
        for i in k + 1..a.rows() {
            let f = a.get(i, k) / pv;
            if f != 0 {
                a.row_sub_multiple(i, k, f);
            }
        }
        for j in k + 1..a.cols() {
            let f = a.get(k, j) / pv;
            if f != 0 {
                a.col_sub_multiple(j, k, f);
                r.col_sub_multiple(j, k, f);
            }
        }
        valuations.push(v);
    }
    Ok(LocalSmith {
        valuations,
        col_transform: r,
    })
}

/// Kernel of `x ↦ M·x` on (ℤ/p^e)^cols, in Howell form.
pub fn kernel(m: &ModMatrix) -> Result<HowellForm> {
    let modulus = m.modulus();
    let (p, e) = prime_power(modulus).ok_or(Error::InvalidModulus(modulus))?;
    let smith = local_smith(m)?;
    let r = &smith.col_transform;
    let k = smith.valuations.len();
    let mut gens = Vec::new();
    for (i, &v) in smith.valuations.iter().enumerate() {
        if v > 0 {
            let s = p.pow(e - v);
            gens.push(
                r.column(i)
                    .into_iter()
                    .map(|x| mul_mod(x, s, modulus))
                    .collect(),
            );
        }
    }
    for i in k..m.cols() {
        gens.push(r.column(i));
    }
    HowellForm::from_generators(m.cols(), modulus, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_brute(
        dim: usize,
        modulus: u64,
        gens: &[Vec<u64>],
    ) -> std::collections::BTreeSet<Vec<u64>> {
        let mut set = std::collections::BTreeSet::new();
        set.insert(vec![0; dim]);
        loop {
            let mut grew = false;
            for x in set.clone() {
                for g in gens {
                    let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % modulus).collect();
                    grew |= set.insert(y);
                }
            }
            if !grew {
                return set;
            }
        }
    }

    #[test]
    fn full_span_mod_two_is_identity() {
        let m = ModMatrix::from_rows(&[vec![0, 1], vec![1, 1]], 2).unwrap();
        let h = howell_form(&m).unwrap();
        assert_eq!(h.rank(), 2);
        assert_eq!(h.basis(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(span_brute(2, 2, &m.columns()).len(), 4);
    }

    #[test]
    fn zero_matrix_has_empty_form() {
        let h = howell_form(&ModMatrix::zeros(3, 2, 9)).unwrap();
        assert_eq!(h.rank(), 0);
        assert_eq!(h.order(), 1);
    }

    #[test]
    fn three_mod_nine() {
        let m = ModMatrix::from_rows(&[vec![3]], 9).unwrap();
        let h = howell_form(&m).unwrap();
        assert_eq!(h.basis(), &[vec![3]]);
        assert_eq!(h.rank(), 1);
        let brute = span_brute(1, 9, &m.columns());
        assert_eq!(
            brute.into_iter().collect::<Vec<_>>(),
            vec![vec![0], vec![3], vec![6]]
        );
        assert_eq!(h.order(), 3);
    }

    #[test]
    fn howell_property_needs_annihilator_column() {
        // span of (3, 1) mod 9 contains (0, 3) = 3·(3, 1)
        let h = HowellForm::from_generators(2, 9, vec![vec![3, 1]]).unwrap();
        assert_eq!(h.rank(), 2);
        assert!(h.contains(&[0, 3]));
        assert!(!h.contains(&[0, 1]));
        assert_eq!(h.order(), 9);
        assert_eq!(h.invariant_factors(), vec![9]);
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(
            HowellForm::from_generators(1, 6, vec![vec![1]]),
            Err(Error::InvalidModulus(6))
        );
    }

    #[test]
    fn kernel_of_unit_matrix_is_trivial() {
        let m = ModMatrix::from_rows(&[vec![1, 1], vec![1, 0]], 2).unwrap();
        assert!(kernel(&m).unwrap().is_zero());
    }

    #[test]
    fn kernel_of_multiplication_by_three() {
        let m = ModMatrix::from_rows(&[vec![3]], 9).unwrap();
        let k = kernel(&m).unwrap();
        assert_eq!(k.basis(), &[vec![3]]);
    }
}
