//! Characters of an abelian p'-group and the eigencharacter decomposition of
//! the mod-p action on `J/J²`.
//!
//! A character of `H = C_{d_1} × … × C_{d_s}` is an exponent tuple `(c_1, …, c_s)`
//! sending generator `g` to `ζ_g^{c_g}`, where `ζ_g = ζ^{N/d_g}` and `N = exp(H)`.
//! Tensor product is componentwise addition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::{AbelianGroupH, GroupPresentation};
use crate::error::{Error, Result};
use crate::field::{Elem, FMatrix, SplittingField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<u64>);

impl Character {
    pub fn trivial(h: &AbelianGroupH) -> Self {
        Character(vec![0; h.generator_count()])
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dual-group arithmetic. The dual of `H` has the same generator orders as `H`.
impl AbelianGroupH {
    pub fn tensor(&self, a: &Character, b: &Character) -> Character {
        Character(
            a.0.iter()
                .zip(&b.0)
                .zip(self.orders())
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn dual_inverse(&self, a: &Character) -> Character {
        Character(
            a.0.iter()
                .zip(self.orders())
                .map(|(&x, &d)| (d - x % d) % d)
                .collect(),
        )
    }

    /// `a^{⊗k}`
    pub fn dual_power(&self, a: &Character, k: u64) -> Character {
        Character(
            a.0.iter()
                .zip(self.orders())
                .map(|(&x, &d)| ((x as u128 * k as u128) % d as u128) as u64)
                .collect(),
        )
    }

    pub fn character_order(&self, a: &Character) -> u64 {
        a.0.iter()
            .zip(self.orders())
            .map(|(&x, &d)| d / num_integer::gcd(x % d, d))
            .fold(1, num_integer::lcm)
    }

    /// All characters in mixed-radix order; position = [`AbelianGroupH::character_index`].
    pub fn characters(&self) -> Vec<Character> {
        self.elements().map(Character).collect()
    }

    pub fn character_index(&self, a: &Character) -> usize {
        self.index_of(&a.0) as usize
    }

    pub fn character_at(&self, k: usize) -> Character {
        Character(self.element_at(k as u64))
    }

    /// Value of `a` at the element `h` (an exponent tuple of `H`).
    pub fn character_value(&self, sf: &SplittingField, a: &Character, h: &[u64]) -> Elem {
        let n = sf.root_order;
        let mut k: u128 = 0;
        for ((&c, &x), &d) in a.0.iter().zip(h).zip(self.orders()) {
            k += c as u128 * x as u128 * (n / d) as u128;
        }
        sf.field.pow(sf.zeta, (k % n as u128) as u64)
    }
}

/// One eigencharacter of the mod-p action, with a certifying eigenvector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigencharacter {
    pub block: usize,
    pub character: Character,
    pub eigenvector: Vec<Elem>,
}

/// Reduction mod p of each generator's action on block `block`, over the splitting field.
pub fn reduced_block_matrices(
    pres: &GroupPresentation,
    sf: &SplittingField,
    block: usize,
) -> Vec<FMatrix> {
    let p = pres.p();
    pres.action()
        .iter()
        .map(|a| {
            let m = a.block(block);
            let n = m.rows();
            FMatrix::from_ints(
                &sf.field,
                n,
                n,
                m.to_rows().concat().into_iter().map(|x| (x % p) as i64),
            )
        })
        .collect()
}

/// Simultaneous eigen-decomposition of the reduced action matrices, block by
/// block. The output is sorted by block, then character.
pub fn eigencharacters(
    pres: &GroupPresentation,
    sf: &SplittingField,
) -> Result<Vec<Eigencharacter>> {
    let f = &sf.field;
    let h = pres.h();
    if sf.field.p() != pres.p() || !sf.root_order.is_multiple_of(h.exponent()) {
        return Err(Error::InvalidInput(format!(
            "splitting field of characteristic {} with roots of order {} does not fit p = {} and exp(H) = {}",
            sf.field.p(),
            sf.root_order,
            pres.p(),
            h.exponent()
        )));
    }
    let mut out = Vec::new();
    for (b, block) in pres.pgroup().blocks().iter().enumerate() {
        let t = block.multiplicity;
        let mats = reduced_block_matrices(pres, sf, b);
        // (partial character, basis of the common eigenspace as columns)
        let mut spaces: Vec<(Vec<u64>, Vec<Vec<Elem>>)> =
            vec![(Vec::new(), (0..t).map(|i| unit_vector(t, i)).collect())];
        for (g, a) in mats.iter().enumerate() {
            let d = h.orders()[g];
            let root = sf.root_of_unity(d);
            let mut next = Vec::new();
            for (partial, basis) in spaces {
                let v = FMatrix::from_columns(t, &basis);
                let mut found = 0;
                for j in 0..d {
                    let shifted = a.sub(&FMatrix::identity(t).scale(f.pow(root, j), f), f);
                    let coords = shifted.mul(&v, f).nullspace(f);
                    if coords.is_empty() {
                        continue;
                    }
                    found += coords.len();
                    let sub: Vec<Vec<Elem>> = coords.iter().map(|y| v.mul_vec(y, f)).collect();
                    let mut c = partial.clone();
                    c.push(j);
                    next.push((c, sub));
                }
                if found != basis.len() {
                    return Err(Error::Internal(format!(
                        "generator {g} does not split a {}-dimensional eigenspace of block {b} (found {found})",
                        basis.len()
                    )));
                }
            }
            spaces = next;
        }
        let mut block_out: Vec<Eigencharacter> = spaces
            .into_iter()
            .flat_map(|(c, basis)| {
                basis.into_iter().map(move |v| Eigencharacter {
                    block: b,
                    character: Character(c.clone()),
                    eigenvector: v,
                })
            })
            .collect();
        block_out.sort_by(|x, y| x.character.cmp(&y.character));
        out.extend(block_out);
    }
    Ok(out)
}

fn unit_vector(n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Checks `Ā_g v = χ(g) v` for every generator.
pub fn verify_eigenvector(
    pres: &GroupPresentation,
    sf: &SplittingField,
    e: &Eigencharacter,
) -> bool {
    let f = &sf.field;
    let h = pres.h();
    if e.eigenvector.iter().all(|&x| x == 0) {
        return false;
    }
    reduced_block_matrices(pres, sf, e.block)
        .iter()
        .enumerate()
        .all(|(g, a)| {
            let mut unit = vec![0; h.generator_count()];
            unit[g] = 1;
            let lambda = h.character_value(sf, &e.character, &unit);
            let lhs = a.mul_vec(&e.eigenvector, f);
            let rhs: Vec<Elem> = e.eigenvector.iter().map(|&x| f.mul(x, lambda)).collect();
            lhs == rhs
        })
}

/// After reduction to the hyperfocal subgroup: no trivial eigencharacter, and
/// for p = 2 no block of multiplicity one.
pub fn check_reduced_invariants(pres: &GroupPresentation, eig: &[Eigencharacter]) -> Result<()> {
    if let Some(e) = eig.iter().find(|e| e.character.is_trivial()) {
        return Err(Error::Internal(format!(
            "trivial eigencharacter on block {} after reduction",
            e.block
        )));
    }
    if pres.p() == 2 {
        if let Some(b) = pres.pgroup().blocks().iter().find(|b| b.multiplicity == 1) {
            return Err(Error::Internal(format!(
                "p = 2 and the reduced block of exponent {} has multiplicity 1",
                b.exponent
            )));
        }
    }
    Ok(())
}

/// An orbit of `χ ↦ χ^{⊗p}` on the dual group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusOrbit {
    /// starting at the smallest member, then following the map
    pub members: Vec<Character>,
}

impl FrobeniusOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Frobenius orbits of the distinct characters in `chars`, ordered by their
/// smallest member.
pub fn frobenius_orbits(chars: &[Character], h: &AbelianGroupH, p: u64) -> Vec<FrobeniusOrbit> {
    let mut seen: BTreeMap<Character, ()> = BTreeMap::new();
    let mut distinct: Vec<&Character> = chars.iter().collect();
    distinct.sort();
    distinct.dedup();
    let mut out = Vec::new();
    for c in distinct {
        if seen.contains_key(c) {
            continue;
        }
        let mut members = vec![c.clone()];
        let mut cur = h.dual_power(c, p);
        while &cur != c {
            members.push(cur.clone());
            cur = h.dual_power(&cur, p);
        }
        for m in &members {
            seen.insert(m.clone(), ());
        }
        let start = members
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .expect("nonempty orbit");
        members.rotate_left(start);
        out.push(FrobeniusOrbit { members });
    }
    out
}
