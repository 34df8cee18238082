//! Finite abelian p-groups given as products of homocyclic blocks, their
//! block-preserving endomorphisms, and subgroups in canonical form.
//!
//! An element of `∏ (C_{p^e})^t` is a flat exponent vector: the coordinates of
//! the first block, then those of the second, and so on. Endomorphisms act on
//! these column vectors from the left.

mod howell;
mod modmat;

pub use howell::{howell_form, kernel, local_smith, HowellForm, LocalSmith};
pub(crate) use modmat::{add_mod, mul_mod, sub_mod};
pub use modmat::{inv_mod, is_prime, prime_power, ModMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(C_{p^exponent})^multiplicity`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Block {
    pub exponent: u32,
    pub multiplicity: usize,
}

impl Block {
    pub fn new(exponent: u32, multiplicity: usize) -> Self {
        Block {
            exponent,
            multiplicity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianPGroup {
    p: u64,
    blocks: Vec<Block>,
}

const ORDER_CAP: u64 = 1 << 63;

impl AbelianPGroup {
    pub fn new(p: u64, blocks: Vec<Block>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let mut order: u64 = 1;
        for (i, b) in blocks.iter().enumerate() {
            if b.exponent == 0 || b.multiplicity == 0 {
                return Err(Error::InvalidInput(format!(
                    "block {i} has exponent {} and multiplicity {}; both must be positive",
                    b.exponent, b.multiplicity
                )));
            }
            if i > 0 && blocks[i - 1].exponent >= b.exponent {
                return Err(Error::InvalidInput(
                    "block exponents must be strictly increasing".into(),
                ));
            }
            let too_big = || Error::InvalidInput("group order exceeds 2^63".into());
            let block_order = u32::try_from(b.multiplicity)
                .ok()
                .and_then(|t| b.exponent.checked_mul(t))
                .and_then(|et| p.checked_pow(et))
                .ok_or_else(too_big)?;
            order = order.checked_mul(block_order).ok_or_else(too_big)?;
            if order > ORDER_CAP {
                return Err(too_big());
            }
        }
        Ok(AbelianPGroup { p, blocks })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, Vec::new())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_modulus(&self, i: usize) -> u64 {
        self.p.pow(self.blocks[i].exponent)
    }

    pub fn order(&self) -> u64 {
        self.blocks
            .iter()
            .map(|b| self.p.pow(b.exponent * b.multiplicity as u32))
            .product()
    }

    /// Number of cyclic factors, i.e. the rank of P.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.multiplicity).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Starting coordinate of each block in a flat element vector.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for b in &self.blocks {
            off.push(acc);
            acc += b.multiplicity;
        }
        off
    }

    pub fn split<'a>(&self, x: &'a [u64]) -> Vec<&'a [u64]> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut rest = x;
        for b in &self.blocks {
            let (head, tail) = rest.split_at(b.multiplicity);
            out.push(head);
            rest = tail;
        }
        out
    }

    /// Per-coordinate moduli of a flat element.
    pub fn coordinate_moduli(&self) -> Vec<u64> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| std::iter::repeat_n(self.block_modulus(i), b.multiplicity))
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.coordinate_moduli()
            .iter()
            .zip(x.iter().zip(y))
            .map(|(&m, (&a, &b))| add_mod(a, b, m))
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.coordinate_moduli()
            .iter()
            .zip(x.iter().zip(y))
            .map(|(&m, (&a, &b))| sub_mod(a, b, m))
            .collect()
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> {
        let moduli = self.coordinate_moduli();
        let total = self.order();
        (0..total).map(move |mut k| {
            let mut v = vec![0; moduli.len()];
            for (slot, &m) in v.iter_mut().zip(&moduli).rev() {
                *slot = k % m;
                k /= m;
            }
            v
        })
    }
}

/// A block-diagonal endomorphism: one `t × t` matrix over ℤ/p^e per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockMatrix {
    blocks: Vec<ModMatrix>,
}

impl BlockMatrix {
    pub fn new(group: &AbelianPGroup, blocks: Vec<ModMatrix>) -> Result<Self> {
        let m = BlockMatrix { blocks };
        m.check_shape(group)?;
        Ok(m)
    }

    pub fn identity(group: &AbelianPGroup) -> Self {
        BlockMatrix {
            blocks: (0..group.blocks().len())
                .map(|i| {
                    ModMatrix::identity(group.blocks()[i].multiplicity, group.block_modulus(i))
                })
                .collect(),
        }
    }

    pub fn zero(group: &AbelianPGroup) -> Self {
        BlockMatrix {
            blocks: (0..group.blocks().len())
                .map(|i| {
                    let t = group.blocks()[i].multiplicity;
                    ModMatrix::zeros(t, t, group.block_modulus(i))
                })
                .collect(),
        }
    }

    pub fn check_shape(&self, group: &AbelianPGroup) -> Result<()> {
        if self.blocks.len() != group.blocks().len() {
            return Err(Error::Shape(format!(
                "{} matrix blocks for a group with {} blocks",
                self.blocks.len(),
                group.blocks().len()
            )));
        }
        for (i, (m, b)) in self.blocks.iter().zip(group.blocks()).enumerate() {
            let t = b.multiplicity;
            if m.rows() != t || m.cols() != t || m.modulus() != group.block_modulus(i) {
                return Err(Error::Shape(format!(
                    "block {i}: expected {t}x{t} mod {}, got {}x{} mod {}",
                    group.block_modulus(i),
                    m.rows(),
                    m.cols(),
                    m.modulus()
                )));
            }
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[ModMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &ModMatrix {
        &self.blocks[i]
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(x.len());
        let mut rest = x;
        for m in &self.blocks {
            let (head, tail) = rest.split_at(m.cols());
            out.extend(m.mul_vec(head));
            rest = tail;
        }
        out
    }

    pub fn mul(&self, other: &BlockMatrix) -> BlockMatrix {
        self.zip(other, ModMatrix::mul)
    }

    pub fn sub(&self, other: &BlockMatrix) -> BlockMatrix {
        self.zip(other, ModMatrix::sub)
    }

    fn zip(&self, other: &BlockMatrix, f: fn(&ModMatrix, &ModMatrix) -> ModMatrix) -> BlockMatrix {
        assert_eq!(self.blocks.len(), other.blocks.len());
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn pow(&self, k: u64) -> BlockMatrix {
        BlockMatrix {
            blocks: self.blocks.iter().map(|m| m.pow(k)).collect(),
        }
    }

    /// `A − I`
    pub fn minus_identity(&self) -> BlockMatrix {
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .map(|m| m.sub(&ModMatrix::identity(m.rows(), m.modulus())))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(ModMatrix::is_identity)
    }
}

/// A subgroup of an [`AbelianPGroup`] that splits along the blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupData {
    ambient: AbelianPGroup,
    blocks: Vec<HowellForm>,
    invariant_factors: Vec<u64>,
}

impl SubgroupData {
    pub fn from_block_forms(ambient: &AbelianPGroup, blocks: Vec<HowellForm>) -> Result<Self> {
        if blocks.len() != ambient.blocks().len() {
            return Err(Error::Shape("one Howell form per block required".into()));
        }
        for (i, h) in blocks.iter().enumerate() {
            if h.dim() != ambient.blocks()[i].multiplicity
                || h.modulus() != ambient.block_modulus(i)
            {
                return Err(Error::Shape(format!(
                    "Howell form for block {i} has the wrong shape"
                )));
            }
        }
        let mut invariant_factors: Vec<u64> =
            blocks.iter().flat_map(|h| h.invariant_factors()).collect();
        invariant_factors.sort_unstable();
        Ok(SubgroupData {
            ambient: ambient.clone(),
            blocks,
            invariant_factors,
        })
    }

    /// Subgroup generated by flat elements of the ambient group.
    pub fn generated_by(ambient: &AbelianPGroup, gens: &[Vec<u64>]) -> Result<Self> {
        let forms = (0..ambient.blocks().len())
            .map(|i| {
                let block_gens = gens.iter().map(|g| ambient.split(g)[i].to_vec());
                HowellForm::from_generators(
                    ambient.blocks()[i].multiplicity,
                    ambient.block_modulus(i),
                    block_gens,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_block_forms(ambient, forms)
    }

    pub fn whole(ambient: &AbelianPGroup) -> Self {
        image_subgroup(&[BlockMatrix::identity(ambient)], ambient)
            .expect("identity has the right shape")
    }

    pub fn ambient(&self) -> &AbelianPGroup {
        &self.ambient
    }

    pub fn blocks(&self) -> &[HowellForm] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &HowellForm {
        &self.blocks[i]
    }

    /// Number of Howell basis columns per block.
    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(HowellForm::rank).collect()
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.blocks.iter().map(HowellForm::order).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().all(HowellForm::is_zero)
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.ambient
            .split(x)
            .iter()
            .zip(&self.blocks)
            .all(|(part, h)| h.contains(part))
    }

    /// The subgroup generated by `self` and `other`.
    pub fn join(&self, other: &SubgroupData) -> SubgroupData {
        assert_eq!(self.ambient, other.ambient);
        let forms = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.join(b))
            .collect();
        Self::from_block_forms(&self.ambient, forms).expect("same ambient")
    }

    /// Flat generators: the Howell columns of each block, embedded.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        let offsets = self.ambient.block_offsets();
        let n = self.ambient.rank();
        let mut out = Vec::new();
        for (i, h) in self.blocks.iter().enumerate() {
            for col in h.basis() {
                let mut v = vec![0; n];
                v[offsets[i]..offsets[i] + col.len()].copy_from_slice(col);
                out.push(v);
            }
        }
        out
    }
}

/// Subgroup generated by the images of all `maps`.
pub fn image_subgroup(maps: &[BlockMatrix], group: &AbelianPGroup) -> Result<SubgroupData> {
    for m in maps {
        m.check_shape(group)?;
    }
    let forms = (0..group.blocks().len())
        .map(|i| {
            let gens = maps.iter().flat_map(|m| m.block(i).columns());
            HowellForm::from_generators(
                group.blocks()[i].multiplicity,
                group.block_modulus(i),
                gens,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    SubgroupData::from_block_forms(group, forms)
}

pub fn kernel_subgroup(map: &BlockMatrix, group: &AbelianPGroup) -> Result<SubgroupData> {
    common_kernel(std::slice::from_ref(map), group)
}

/// Intersection of the kernels of all `maps`.
pub fn common_kernel(maps: &[BlockMatrix], group: &AbelianPGroup) -> Result<SubgroupData> {
    for m in maps {
        m.check_shape(group)?;
    }
    let forms = (0..group.blocks().len())
        .map(|i| {
            let t = group.blocks()[i].multiplicity;
            let modulus = group.block_modulus(i);
            if maps.is_empty() {
                return HowellForm::from_generators(
                    t,
                    modulus,
                    ModMatrix::identity(t, modulus).columns(),
                );
            }
            let parts: Vec<ModMatrix> = maps.iter().map(|m| m.block(i).clone()).collect();
            kernel(&ModMatrix::vstack(&parts, t, modulus))
        })
        .collect::<Result<Vec<_>>>()?;
    SubgroupData::from_block_forms(group, forms)
}

pub fn invariant_factors(s: &SubgroupData) -> Vec<u64> {
    s.invariant_factors.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, blocks: &[(u32, usize)]) -> AbelianPGroup {
        AbelianPGroup::new(p, blocks.iter().map(|&(e, t)| Block::new(e, t)).collect()).unwrap()
    }

    fn bm(group: &AbelianPGroup, rows: &[&[Vec<i64>]]) -> BlockMatrix {
        let blocks = rows
            .iter()
            .enumerate()
            .map(|(i, r)| ModMatrix::from_rows(r, group.block_modulus(i)).unwrap())
            .collect();
        BlockMatrix::new(group, blocks).unwrap()
    }

    #[test]
    fn group_validation() {
        assert!(AbelianPGroup::new(4, vec![]).is_err());
        assert!(AbelianPGroup::new(2, vec![Block::new(2, 1), Block::new(1, 1)]).is_err());
        assert!(AbelianPGroup::new(2, vec![Block::new(1, 0)]).is_err());
        assert!(AbelianPGroup::new(2, vec![Block::new(1, 64)]).is_err());
        assert!(AbelianPGroup::new(2, vec![Block::new(1, 63)]).is_ok());
        assert_eq!(g(3, &[(1, 2), (2, 1)]).order(), 81);
    }

    #[test]
    fn image_of_unit_matrix_is_everything() {
        let p = g(2, &[(1, 2)]);
        let a = bm(&p, &[&[vec![0, 1], vec![1, 1]]]);
        let img = image_subgroup(&[a.minus_identity()], &p).unwrap();
        assert_eq!(img.invariant_factors(), &[2, 2]);
        assert_eq!(img.order(), 4);
    }

    #[test]
    fn image_of_zero_is_trivial() {
        let p = g(3, &[(1, 2)]);
        let img = image_subgroup(&[BlockMatrix::zero(&p)], &p).unwrap();
        assert!(img.is_trivial());
        assert!(img.invariant_factors().is_empty());
    }

    #[test]
    fn image_and_kernel_of_projection() {
        let p = g(3, &[(1, 2)]);
        let d = bm(&p, &[&[vec![0, 0], vec![0, 1]]]);
        let img = image_subgroup(std::slice::from_ref(&d), &p).unwrap();
        assert_eq!(img.invariant_factors(), &[3]);
        assert!(img.contains(&[0, 1]) && !img.contains(&[1, 0]));
        let ker = kernel_subgroup(&d, &p).unwrap();
        assert_eq!(ker.invariant_factors(), &[3]);
        assert!(ker.contains(&[2, 0]) && !ker.contains(&[0, 1]));
    }

    #[test]
    fn kernel_of_zero_map_is_whole_group() {
        let p = g(2, &[(1, 1), (2, 2)]);
        let ker = kernel_subgroup(&BlockMatrix::zero(&p), &p).unwrap();
        assert_eq!(ker.order(), p.order());
    }

    #[test]
    fn full_c4_squared() {
        let p = g(2, &[(2, 2)]);
        assert_eq!(SubgroupData::whole(&p).invariant_factors(), &[4, 4]);
    }

    #[test]
    fn wrong_block_shape_is_reported() {
        let p = g(3, &[(1, 2)]);
        let bad = BlockMatrix {
            blocks: vec![ModMatrix::identity(3, 3)],
        };
        assert!(matches!(image_subgroup(&[bad], &p), Err(Error::Shape(_))));
    }
}
