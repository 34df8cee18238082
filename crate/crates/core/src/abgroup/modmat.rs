//! Dense integer matrices with entries in ℤ/m.

use std::fmt;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub(crate) fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n = p^e` with `p` prime and `e ≥ 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut rest = n;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Inverse of `a` modulo `m`, if it is a unit.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of a residue in ℤ/p^e; zero has valuation e.
pub(crate) fn valuation(x: u64, p: u64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) && v < e {
        y /= p;
        v += 1;
    }
    v
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix(mod {}) {:?}", self.modulus, self.to_rows())
    }
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        ModMatrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1 % modulus);
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod `modulus`.
    pub fn from_rows(rows: &[Vec<i64>], modulus: u64) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols, modulus);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, reduce_i64(x, modulus));
            }
        }
        Ok(m)
    }

    /// Builds a `nrows × cols.len()` matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, columns: &[Vec<u64>], modulus: u64) -> Self {
        let mut m = Self::zeros(nrows, columns.len(), modulus);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length mismatch");
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x % modulus);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        assert_eq!(self.modulus, other.modulus, "moduli differ");
        let m = self.modulus;
        let mut out = Self::zeros(self.rows, other.cols, m);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add_mod(out.get(i, j), mul_mod(a, other.get(k, j), m), m);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let m = self.modulus;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &x)| add_mod(acc, mul_mod(a, x, m), m))
            })
            .collect()
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        self.zip_with(other, add_mod)
    }

    pub fn sub(&self, other: &ModMatrix) -> ModMatrix {
        self.zip_with(other, sub_mod)
    }

    fn zip_with(&self, other: &ModMatrix, f: fn(u64, u64, u64) -> u64) -> ModMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.modulus, other.modulus);
        ModMatrix {
            rows: self.rows,
            cols: self.cols,
            modulus: self.modulus,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b, self.modulus))
                .collect(),
        }
    }

    pub fn scale(&self, k: u64) -> ModMatrix {
        let m = self.modulus;
        ModMatrix {
            data: self.data.iter().map(|&a| mul_mod(a, k % m, m)).collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, mut k: u64) -> ModMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u64::from(r == c) % self.modulus))
    }

    /// Reduces entries modulo a divisor of the current modulus.
    pub fn reduce(&self, modulus: u64) -> ModMatrix {
        assert!(
            self.modulus.is_multiple_of(modulus),
            "{} does not divide {}",
            modulus,
            self.modulus
        );
        ModMatrix {
            data: self.data.iter().map(|&a| a % modulus).collect(),
            modulus,
            ..self.clone()
        }
    }

    /// Stacks matrices with a common column count on top of each other.
    pub fn vstack(parts: &[ModMatrix], cols: usize, modulus: u64) -> ModMatrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            assert_eq!(p.cols, cols);
            assert_eq!(p.modulus, modulus);
            data.extend_from_slice(&p.data);
        }
        ModMatrix {
            rows,
            cols,
            modulus,
            data,
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= f * row[src]
    pub(crate) fn row_sub_multiple(&mut self, dst: usize, src: usize, f: u64) {
        let m = self.modulus;
        for c in 0..self.cols {
            let v = sub_mod(self.get(dst, c), mul_mod(f, self.get(src, c), m), m);
            self.set(dst, c, v);
        }
    }

    /// col[dst] -= f * col[src]
    pub(crate) fn col_sub_multiple(&mut self, dst: usize, src: usize, f: u64) {
        let m = self.modulus;
        for r in 0..self.rows {
            let v = sub_mod(self.get(r, dst), mul_mod(f, self.get(r, src), m), m);
            self.set(r, dst, v);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, f: u64) {
        let m = self.modulus;
        for c in 0..self.cols {
            let v = mul_mod(self.get(r, c), f, m);
            self.set(r, c, v);
        }
    }

    /// Gauss–Jordan inverse over ℤ/m; `None` when the matrix is singular.
    pub fn inverse(&self) -> Option<ModMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let m = self.modulus;
        let mut a = self.clone();
        let mut inv = Self::identity(n, m);
        for c in 0..n {
            let pivot = (c..n).find(|&r| inv_mod(a.get(r, c), m).is_some())?;
            a.swap_rows(c, pivot);
            inv.swap_rows(c, pivot);
            let u = inv_mod(a.get(c, c), m)?;
            a.scale_row(c, u);
            inv.scale_row(c, u);
            for r in 0..n {
                if r != c {
                    let f = a.get(r, c);
                    if f != 0 {
                        a.row_sub_multiple(r, c, f);
                        inv.row_sub_multiple(r, c, f);
                    }
                }
            }
        }
        Some(inv)
    }
}
