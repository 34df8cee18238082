//! Small finite fields 𝔽_{p^m} with table-driven multiplication, and dense
//! linear algebra over them.
//!
//! An element is encoded as the integer whose base-p digits are its
//! coefficients in the polynomial basis: digit k is the coefficient of x^k.
//! The prime field 𝔽_p is therefore encoded as `0..p`.

use std::fmt;

use crate::abgroup::{is_prime, mul_mod};
use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const FIELD_ORDER_CAP: u64 = 1 << 20;

pub type Elem = u32;

#[derive(Clone)]
pub struct FField {
    p: u64,
    m: u32,
    q: u64,
    /// lower coefficients of the monic modulus, index k = coefficient of x^k
    modulus: Vec<u64>,
    primitive: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl fmt::Debug for FField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for FField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FField {}

fn digits(mut x: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Remainder of `a` modulo the monic polynomial with lower coefficients `f`.
fn poly_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len();
    while a.len() > m {
        let lead = a.pop().expect("nonempty");
        if lead != 0 {
            let shift = a.len() - m;
            for (k, &c) in f.iter().enumerate() {
                let t = mul_mod(lead, c, p);
                a[shift + k] = (a[shift + k] + p - t) % p;
            }
        }
    }
    a.resize(m, 0);
    a
}

fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(prod, f, p)
}

/// Brute-force irreducibility: no monic factor of degree ≤ m/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len();
    if m <= 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let mut full = f.to_vec();
    full.push(1);
    for d in 1..=m / 2 {
        for low in 0..p.pow(d as u32) {
            let g = digits(low, p, d);
            if poly_rem(full.clone(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FField {
    /// The field of order p^m, with the smallest irreducible modulus (by
    /// encoding of its lower coefficients) and the smallest primitive element.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidInput("field degree must be positive".into()));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= FIELD_ORDER_CAP)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "field of order {p}^{m} exceeds the cap {FIELD_ORDER_CAP}"
                ))
            })?;
        let m_us = m as usize;
        let modulus = (0..q)
            .map(|low| digits(low, p, m_us))
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");

        let pow = |g: &[u64], mut k: u64| {
            let mut base = g.to_vec();
            let mut acc = digits(1, p, m_us);
            while k > 0 {
                if k & 1 == 1 {
                    acc = poly_mul_mod(&acc, &base, &modulus, p);
                }
                base = poly_mul_mod(&base, &base, &modulus, p);
                k >>= 1;
            }
            acc
        };
        let one = digits(1, p, m_us);
        let factors = prime_factors(q - 1);
        let primitive = (1..q)
            .find(|&g| {
                let gd = digits(g, p, m_us);
                factors.iter().all(|&r| pow(&gd, (q - 1) / r) != one)
            })
            .expect("the multiplicative group is cyclic");

        let mut exp = vec![0 as Elem; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let gd = digits(primitive, p, m_us);
        let mut cur = one;
        for k in 0..(q - 1) as usize {
            let enc = undigits(&cur, p) as Elem;
            exp[k] = enc;
            log[enc as usize] = k as u32;
            cur = poly_mul_mod(&cur, &gd, &modulus, p);
        }
        Ok(FField {
            p,
            m,
            q,
            modulus,
            primitive: primitive as Elem,
            exp,
            log,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Lower coefficients of the monic modulus polynomial.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, x: i64) -> Elem {
        x.rem_euclid(self.p as i64) as Elem
    }

    /// The element as an integer if it lies in the prime field.
    pub fn to_prime_field(&self, x: Elem) -> Option<u64> {
        ((x as u64) < self.p).then_some(x as u64)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p) as Elem;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as Elem
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut a = a as u64;
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as Elem
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let k = (self.q - 1 - self.log[a as usize] as u64) % (self.q - 1);
        Some(self.exp[k as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u128 * k as u128) % (self.q as u128 - 1);
        self.exp[e as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(n / num_integer::gcd(n, self.log[a as usize] as u64))
    }

    /// g^k for the fixed primitive element g.
    pub fn primitive_power(&self, k: u64) -> Elem {
        self.exp[(k % (self.q - 1)) as usize]
    }
}

/// 𝔽_{p^m} containing a primitive N-th root of unity ζ, m = ord_N(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingField {
    pub field: FField,
    /// ζ = g^{(q−1)/N}
    pub zeta: Elem,
    pub root_order: u64,
}

pub fn build_splitting_field(p: u64, n: u64) -> Result<SplittingField> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "root-of-unity order must be positive".into(),
        ));
    }
    if n.is_multiple_of(p) {
        return Err(Error::NotCoprime { p, n });
    }
    let mut m = 1u32;
    let mut r = p % n;
    while r != 1 % n {
        r = mul_mod(r, p, n);
        m += 1;
    }
    let field = FField::new(p, m)?;
    let zeta = field.primitive_power((field.order() - 1) / n);
    Ok(SplittingField {
        field,
        zeta,
        root_order: n,
    })
}

impl SplittingField {
    /// A primitive d-th root of unity, ζ^{N/d}; `d` must divide N.
    pub fn root_of_unity(&self, d: u64) -> Elem {
        assert_eq!(
            self.root_order % d,
            0,
            "{d} does not divide {}",
            self.root_order
        );
        self.field.pow(self.zeta, self.root_order / d)
    }
}

/// Dense row-major matrix over an [`FField`]; the field is passed to each operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(FMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_columns(nrows: usize, columns: &[Vec<Elem>]) -> Self {
        let mut m = FMatrix::zeros(nrows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    /// Embeds an integer matrix through the prime field.
    pub fn from_ints(
        f: &FField,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = i64>,
    ) -> Self {
        let data: Vec<Elem> = entries.into_iter().map(|x| f.from_int(x)).collect();
        assert_eq!(data.len(), rows * cols);
        FMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &FMatrix, f: &FField) -> FMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = FMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem], f: &FField) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &FMatrix, f: &FField) -> FMatrix {
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &FMatrix, f: &FField) -> FMatrix {
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &FMatrix, op: impl Fn(Elem, Elem) -> Elem) -> FMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shapes differ"
        );
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: Elem, f: &FField) -> FMatrix {
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, k)).collect(),
        }
    }

    pub fn pow(&self, mut k: u64, f: &FField) -> FMatrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = FMatrix::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            k >>= 1;
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &FField) -> (FMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..a.cols {
                    a.data.swap(pr * a.cols + j, r * a.cols + j);
                }
            }
            let inv = f.inv(a.get(r, c)).expect("nonzero pivot");
            for j in 0..a.cols {
                let v = a.get(r, j);
                a.set(r, j, f.mul(v, inv));
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let factor = a.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..a.cols {
                    let v = f.sub(a.get(i, j), f.mul(factor, a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self, f: &FField) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of {x : self·x = 0}, one vector per free column, in column order.
    pub fn nullspace(&self, f: &FField) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self, f: &FField) -> Option<FMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn det(&self, f: &FField) -> Elem {
        assert_eq!(self.rows, self.cols);
        let mut a = self.clone();
        let n = a.rows;
        let mut det = 1;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| a.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                for j in 0..n {
                    a.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = a.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(a.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(a.get(i, j), f.mul(factor, a.get(c, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Some solution of self·x = b, if one exists.
    pub fn solve(&self, b: &[Elem], f: &FField) -> Option<Vec<Elem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }
}
