//! Semidirect products `P ⋊ H` with `P` an abelian p-group in homocyclic
//! blocks and `H` an abelian p'-group acting block-diagonally.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abgroup::{
    common_kernel, image_subgroup, inv_mod, mul_mod, sub_mod, AbelianPGroup, Block, BlockMatrix,
    ModMatrix, SubgroupData,
};
use crate::error::{Error, Result};

const H_ORDER_CAP: u64 = 1 << 32;

/// A finite abelian group `C_{d_1} × … × C_{d_s}`; elements are exponent tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupH {
    orders: Vec<u64>,
}

impl AbelianGroupH {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        let mut total: u64 = 1;
        for (g, &d) in orders.iter().enumerate() {
            if d == 0 {
                return Err(Error::InvalidInput(format!(
                    "generator {g} of H has order 0"
                )));
            }
            total = total
                .checked_mul(d)
                .filter(|&t| t <= H_ORDER_CAP)
                .ok_or_else(|| Error::InvalidInput("|H| exceeds 2^32".into()))?;
        }
        Ok(AbelianGroupH { orders })
    }

    pub fn trivial() -> Self {
        AbelianGroupH { orders: Vec::new() }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Least common multiple of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &d| acc.lcm(&d))
    }

    /// Elements in mixed-radix order (last generator varies fastest).
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(move |k| self.element_at(k))
    }

    pub fn element_at(&self, mut k: u64) -> Vec<u64> {
        let mut v = vec![0; self.orders.len()];
        for (slot, &d) in v.iter_mut().zip(&self.orders).rev() {
            *slot = k % d;
            k /= d;
        }
        v
    }

    pub fn index_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&a, &d)| acc * d + a % d)
    }
}

/// One failed constraint of a [`GroupPresentation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    PDividesOrderOfH {
        p: u64,
        order: u64,
    },
    NotInvertible {
        generator: usize,
        block: usize,
    },
    OrderMismatch {
        generator: usize,
        block: usize,
        order: u64,
    },
    NotCommuting {
        first: usize,
        second: usize,
        block: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PDividesOrderOfH { p, order } => write!(f, "p divides |H| ({p} | {order})"),
            Violation::NotInvertible { generator, block } => {
                write!(
                    f,
                    "action of generator {generator} is not invertible mod p on block {block}"
                )
            }
            Violation::OrderMismatch {
                generator,
                block,
                order,
            } => write!(
                f,
                "action of generator {generator} on block {block} does not satisfy A^{order} = I"
            ),
            Violation::NotCommuting {
                first,
                second,
                block,
            } => {
                write!(
                    f,
                    "actions of generators {first} and {second} do not commute on block {block}"
                )
            }
        }
    }
}

/// `G = P ⋊ H`, with one block-diagonal action matrix per generator of `H`.
/// Column `j` of a block matrix is the image of the `j`-th generator of the block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupPresentation {
    pgroup: AbelianPGroup,
    h: AbelianGroupH,
    action: Vec<BlockMatrix>,
}

impl GroupPresentation {
    /// Checks shapes only; semantic constraints are reported by [`validate_presentation`].
    pub fn new(pgroup: AbelianPGroup, h: AbelianGroupH, action: Vec<BlockMatrix>) -> Result<Self> {
        if action.len() != h.generator_count() {
            return Err(Error::Shape(format!(
                "{} action matrices for {} generators of H",
                action.len(),
                h.generator_count()
            )));
        }
        for a in &action {
            a.check_shape(&pgroup)?;
        }
        Ok(GroupPresentation { pgroup, h, action })
    }

    /// Builds a presentation from plain integer data: `(exponent, multiplicity)`
    /// blocks, the orders of the generators of `H`, and for each generator one
    /// row-major integer matrix per block.
    pub fn from_integer_blocks(
        p: u64,
        blocks: &[(u32, usize)],
        h_orders: &[u64],
        action: &[Vec<Vec<Vec<i64>>>],
    ) -> Result<Self> {
        let pgroup =
            AbelianPGroup::new(p, blocks.iter().map(|&(e, m)| Block::new(e, m)).collect())?;
        let h = AbelianGroupH::new(h_orders.to_vec())?;
        let action = action
            .iter()
            .enumerate()
            .map(|(g, per_block)| {
                if per_block.len() != pgroup.blocks().len() {
                    return Err(Error::Shape(format!(
                        "generator {g} has {} block matrices for {} blocks",
                        per_block.len(),
                        pgroup.blocks().len()
                    )));
                }
                let ms = per_block
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| ModMatrix::from_rows(rows, pgroup.block_modulus(i)))
                    .collect::<Result<Vec<_>>>()?;
                BlockMatrix::new(&pgroup, ms)
            })
            .collect::<Result<Vec<_>>>()?;
        GroupPresentation::new(pgroup, h, action)
    }

    /// The action in which every generator of `H` fixes `P`.
    pub fn trivial_action(pgroup: AbelianPGroup, h: AbelianGroupH) -> Self {
        let action = vec![BlockMatrix::identity(&pgroup); h.generator_count()];
        GroupPresentation { pgroup, h, action }
    }

    pub fn p(&self) -> u64 {
        self.pgroup.p()
    }

    pub fn pgroup(&self) -> &AbelianPGroup {
        &self.pgroup
    }

    pub fn h(&self) -> &AbelianGroupH {
        &self.h
    }

    pub fn action(&self) -> &[BlockMatrix] {
        &self.action
    }

    /// |G| = |P|·|H|
    pub fn order(&self) -> u128 {
        self.pgroup.order() as u128 * self.h.order() as u128
    }

    /// Matrix of an arbitrary element of `H` given as an exponent tuple.
    pub fn action_of(&self, h: &[u64]) -> BlockMatrix {
        self.action
            .iter()
            .zip(h)
            .fold(BlockMatrix::identity(&self.pgroup), |acc, (a, &k)| {
                acc.mul(&a.pow(k))
            })
    }

    /// Same group with the generators of `H` listed in another order.
    pub fn permute_generators(&self, perm: &[usize]) -> Self {
        let orders = perm.iter().map(|&i| self.h.orders[i]).collect();
        GroupPresentation {
            pgroup: self.pgroup.clone(),
            h: AbelianGroupH { orders },
            action: perm.iter().map(|&i| self.action[i].clone()).collect(),
        }
    }
}

/// Reports every violated constraint; an empty list means the presentation is valid.
pub fn validate_presentation(pres: &GroupPresentation) -> Vec<Violation> {
    let mut out = Vec::new();
    let p = pres.p();
    let order = pres.h.order();
    if order.is_multiple_of(p) {
        out.push(Violation::PDividesOrderOfH { p, order });
    }
    for (g, a) in pres.action.iter().enumerate() {
        for (b, m) in a.blocks().iter().enumerate() {
            if m.reduce(p).inverse().is_none() {
                out.push(Violation::NotInvertible {
                    generator: g,
                    block: b,
                });
            }
            let d = pres.h.orders[g];
            if !m.pow(d).is_identity() {
                out.push(Violation::OrderMismatch {
                    generator: g,
                    block: b,
                    order: d,
                });
            }
        }
    }
    for g in 0..pres.action.len() {
        for g2 in g + 1..pres.action.len() {
            for b in 0..pres.pgroup.blocks().len() {
                let x = pres.action[g].block(b);
                let y = pres.action[g2].block(b);
                if x.mul(y) != y.mul(x) {
                    out.push(Violation::NotCommuting {
                        first: g,
                        second: g2,
                        block: b,
                    });
                }
            }
        }
    }
    out
}

pub fn ensure_valid(pres: &GroupPresentation) -> Result<()> {
    let v = validate_presentation(pres);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidPresentation(v))
    }
}

fn commutator_maps(pres: &GroupPresentation) -> Vec<BlockMatrix> {
    pres.action
        .iter()
        .map(BlockMatrix::minus_identity)
        .collect()
}

/// `[P, H]`, generated by the images of `A_g − I` over the generators of `H`.
pub fn hyperfocal_subgroup(pres: &GroupPresentation) -> Result<SubgroupData> {
    image_subgroup(&commutator_maps(pres), &pres.pgroup)
}

/// `C_P(H)`, the common kernel of `A_g − I`.
pub fn centralizer(pres: &GroupPresentation) -> Result<SubgroupData> {
    common_kernel(&commutator_maps(pres), &pres.pgroup)
}

#[derive(Clone, Debug)]
pub struct HyperfocalData {
    pub hyperfocal: SubgroupData,
    pub centralizer: SubgroupData,
    pub reduced: GroupPresentation,
}

/// Computes `R = [P,H]`, `C = C_P(H)` and the presentation of `R ⋊ H`, checking
/// `P = C × R` and the `H`-invariance of both factors.
pub fn hyperfocal_data(pres: &GroupPresentation) -> Result<HyperfocalData> {
    let r = hyperfocal_subgroup(pres)?;
    let c = centralizer(pres)?;
    let order_p = pres.pgroup.order();
    if r.order().checked_mul(c.order()) != Some(order_p) || r.join(&c).order() != order_p {
        return Err(Error::Internal(format!(
            "P is not the direct product of [P,H] (order {}) and C_P(H) (order {})",
            r.order(),
            c.order()
        )));
    }
    for sub in [&r, &c] {
        for v in sub.generators() {
            for a in &pres.action {
                if !sub.contains(&a.apply(&v)) {
                    return Err(Error::Internal(
                        "subgroup is not invariant under the action".into(),
                    ));
                }
            }
        }
    }
    let reduced = reduce_with(pres, &r)?;
    Ok(HyperfocalData {
        hyperfocal: r,
        centralizer: c,
        reduced,
    })
}

/// Presentation of `[P,H] ⋊ H` with the induced action.
pub fn reduce_to_hyperfocal(pres: &GroupPresentation) -> Result<GroupPresentation> {
    let r = hyperfocal_subgroup(pres)?;
    reduce_with(pres, &r)
}

fn reduce_with(pres: &GroupPresentation, r: &SubgroupData) -> Result<GroupPresentation> {
    let p = pres.p();
    let mut blocks = Vec::new();
    // per generator, the induced matrices of the surviving blocks
    let mut induced: Vec<Vec<ModMatrix>> = vec![Vec::new(); pres.action.len()];
    for (i, form) in r.blocks().iter().enumerate() {
        let block = pres.pgroup.blocks()[i];
        let modulus = pres.pgroup.block_modulus(i);
        let basis = summand_basis(form.basis(), p);
        let rank = basis.len();
        if rank == 0 {
            continue;
        }
        let expected = (block.exponent as usize)
            .checked_mul(rank)
            .and_then(|k| p.checked_pow(k as u32));
        if expected != Some(form.order()) {
            return Err(Error::Internal(format!(
                "block {i} of [P,H] is not a free summand of rank {rank}"
            )));
        }
        let b = ModMatrix::from_columns(block.multiplicity, &basis, modulus);
        let rows = independent_rows(&b, p);
        let b_sel = select_rows(&b, &rows);
        let b_sel_inv = b_sel.inverse().ok_or_else(|| {
            Error::Internal(format!("selected rows of the block {i} basis are singular"))
        })?;
        for (g, a) in pres.action.iter().enumerate() {
            let ab = a.block(i).mul(&b);
            let x = b_sel_inv.mul(&select_rows(&ab, &rows));
            if b.mul(&x) != ab {
                return Err(Error::Internal(format!(
                    "block {i} of [P,H] is not invariant under generator {g}"
                )));
            }
            induced[g].push(x);
        }
        blocks.push(Block::new(block.exponent, rank));
    }
    let pgroup = AbelianPGroup::new(p, blocks)?;
    let action = induced
        .into_iter()
        .map(|ms| BlockMatrix::new(&pgroup, ms))
        .collect::<Result<Vec<_>>>()?;
    let reduced = GroupPresentation::new(pgroup, pres.h.clone(), action)?;
    let violations = validate_presentation(&reduced);
    if !violations.is_empty() {
        return Err(Error::Internal(format!(
            "reduced presentation is invalid: {}",
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    Ok(reduced)
}

/// Greedy, lowest-index-first choice of columns that stay independent mod p.
fn summand_basis(columns: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for col in columns {
        let mut v: Vec<u64> = col.iter().map(|&x| x % p).collect();
        for (piv, row) in &echelon {
            let f = v[*piv];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[piv], p).expect("nonzero mod p");
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            echelon.push((piv, v));
            chosen.push(col.clone());
        }
    }
    chosen
}

/// Indices of `cols()` rows of `b` forming a matrix invertible mod p.
fn independent_rows(b: &ModMatrix, p: u64) -> Vec<usize> {
    let rows: Vec<Vec<u64>> = b.to_rows();
    let mut picked = Vec::new();
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v: Vec<u64> = row.iter().map(|&x| x % p).collect();
        for (piv, e) in &echelon {
            let f = v[*piv];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(e) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[piv], p).expect("nonzero mod p");
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            echelon.push((piv, v));
            picked.push(idx);
        }
    }
    picked
}

fn select_rows(m: &ModMatrix, rows: &[usize]) -> ModMatrix {
    let mut out = ModMatrix::zeros(rows.len(), m.cols(), m.modulus());
    for (i, &r) in rows.iter().enumerate() {
        for c in 0..m.cols() {
            out.set(i, c, m.get(r, c));
        }
    }
    out
}
