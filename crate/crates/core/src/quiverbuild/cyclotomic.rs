//! Exact arithmetic in ℚ(ζ_m), as rational polynomials reduced modulo Φ_m.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

type Q = Ratio<i64>;

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    // x^m − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = exact_div(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Quotient of `a` by the monic `b`, assuming exact divisibility.
fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut quot = vec![0i64; a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db];
        quot[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            rem[k + i] -= c * bi;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    m: u64,
    /// coefficients of 1, ζ, …, ζ^{φ(m)−1}
    coeffs: Vec<Q>,
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({}; ", self.m)?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "{c}·z^{k} ")?;
            }
        }
        write!(f, ")")
    }
}

impl Cyclotomic {
    fn reduce(m: u64, mut raw: Vec<Q>) -> Self {
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        while raw.len() > deg {
            let lead = raw.pop().expect("nonempty");
            if !lead.is_zero() {
                let shift = raw.len() - deg;
                for (i, &c) in phi[..deg].iter().enumerate() {
                    raw[shift + i] -= lead * Q::from_integer(c);
                }
            }
        }
        raw.resize(deg, Q::zero());
        Cyclotomic { m, coeffs: raw }
    }

    pub fn zero(m: u64) -> Self {
        Cyclotomic::reduce(m, Vec::new())
    }

    pub fn from_integer(m: u64, x: i64) -> Self {
        Cyclotomic::reduce(m, vec![Q::from_integer(x)])
    }

    /// ζ_m^k
    pub fn root_power(m: u64, k: u64) -> Self {
        let mut raw = vec![Q::zero(); (k % m) as usize + 1];
        raw[(k % m) as usize] = Q::one();
        Cyclotomic::reduce(m, raw)
    }

    /// Σ c·ζ^k over the given terms.
    pub fn from_terms(m: u64, terms: &[(i64, u64)]) -> Self {
        terms.iter().fold(Cyclotomic::zero(m), |acc, &(c, k)| {
            acc.add(&Cyclotomic::root_power(m, k).scale(Q::from_integer(c)))
        })
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.m, other.m);
        Cyclotomic {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: Q) -> Cyclotomic {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.m, other.m);
        let mut raw = vec![Q::zero(); self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Cyclotomic::reduce(self.m, raw)
    }

    /// Complex conjugation, ζ ↦ ζ^{m−1}.
    pub fn conj(&self) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.m);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k2 = (self.m - k as u64 % self.m) % self.m;
                acc = acc.add(&Cyclotomic::root_power(self.m, k2).scale(*c));
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value if it lies in ℚ.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0])
    }
}
