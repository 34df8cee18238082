//! Explicit cycle constructions for quivers of reduced `P ⋊ H`.
//!
//! * Two labels `ℓ ≠ ℓ'` with characters `χ, χ'`: walk `χ` forward and `χ'`
//!   backward from the trivial vertex. Every second vertex is translated by
//!   `δ = χ ⊗ χ'^{-1}`, so the first repeated vertex is `v_0` or `v_1`; the closed
//!   part of the walk is a candidate, as is the even closure after `2·ord(δ)` steps.
//!   Used for p ≥ 3, and for p = 2 on labels sharing an exponent ≥ 2.
//! * p = 2: Frobenius orbits `χ ↦ χ²` on exponent-one characters give a six-arrow
//!   cycle (orbit of size ≥ 3), a four-arrow fallback when `χ^5` is trivial, and a
//!   four-arrow cycle from two orbits of size 2.
//!
//! Nothing here is trusted: every candidate is validated and qualified, and
//! failures are dropped.

use std::collections::BTreeSet;

use super::{canonical_form, is_qualifying, ZigzagCycle};
use crate::action::AbelianGroupH;
use crate::charfield::{frobenius_orbits, Character};
use crate::quiverbuild::BoundQuiver;

struct Ctx<'a> {
    q: &'a BoundQuiver,
    h: AbelianGroupH,
    /// label position → character
    chars: Vec<Character>,
    n: usize,
}

impl Ctx<'_> {
    fn vertex(&self, c: &Character) -> usize {
        self.h.character_index(c)
    }

    /// Arrow with label position `k` leaving vertex `v`.
    fn arrow(&self, v: usize, k: usize) -> usize {
        v * self.n + k
    }

    /// First label position carrying the character `c`.
    fn label_of(&self, c: &Character) -> Option<usize> {
        self.chars.iter().position(|x| x == c)
    }

    /// Arrow `from → c ⊗ from`, using the first label with character `c`.
    fn step(&self, from: &Character, c: &Character) -> Option<usize> {
        Some(self.arrow(self.vertex(from), self.label_of(c)?))
    }
}

fn walk_candidates(ctx: &Ctx, k: usize, k2: usize) -> Vec<Vec<usize>> {
    let h = &ctx.h;
    let (chi, chi2) = (&ctx.chars[k], &ctx.chars[k2]);
    let chi2_inv = h.dual_inverse(chi2);
    let delta = h.tensor(chi, &chi2_inv);
    let mut out = Vec::new();

    let mut vertices = vec![Character::trivial(h)];
    let mut arrows = Vec::new();
    let limit = 2 * ctx.q.vertex_count() + 2;
    for i in 0..limit {
        let cur = vertices.last().expect("nonempty").clone();
        let (next, arrow) = if i % 2 == 0 {
            let next = h.tensor(chi, &cur);
            (next, ctx.arrow(ctx.vertex(&cur), k))
        } else {
            let next = h.tensor(&chi2_inv, &cur);
            (next.clone(), ctx.arrow(ctx.vertex(&next), k2))
        };
        arrows.push(arrow);
        if let Some(pos) = vertices.iter().position(|v| *v == next) {
            out.push(arrows[pos..].to_vec());
            break;
        }
        vertices.push(next);
    }

    let half = h.character_order(&delta) as usize;
    let mut even = Vec::with_capacity(2 * half);
    let mut cur = Character::trivial(h);
    for _ in 0..half {
        even.push(ctx.arrow(ctx.vertex(&cur), k));
        let top = h.tensor(chi, &cur);
        let below = h.tensor(&chi2_inv, &top);
        even.push(ctx.arrow(ctx.vertex(&below), k2));
        cur = below;
    }
    out.push(even);
    out
}

fn frobenius_candidates(ctx: &Ctx) -> Vec<Vec<usize>> {
    let h = &ctx.h;
    let exp_one: Vec<Character> = ctx
        .q
        .labels
        .iter()
        .filter(|l| l.label.exponent == 1)
        .map(|l| l.character.clone())
        .collect();
    let orbits = frobenius_orbits(&exp_one, h, 2);
    let lambda = Character::trivial(h);
    let pw = |c: &Character, e: u64| h.dual_power(c, e);
    let mut out = Vec::new();
    for orbit in orbits.iter().filter(|o| o.size() >= 3) {
        let c = &orbit.members[0];
        let six = [
            ctx.step(&lambda, &pw(c, 2)),
            ctx.step(c, c),
            ctx.step(c, &pw(c, 4)),
            ctx.step(&pw(c, 3), &pw(c, 2)),
            ctx.step(&pw(c, 3), c),
            ctx.step(&lambda, &pw(c, 4)),
        ];
        if let Some(seq) = six.into_iter().collect::<Option<Vec<_>>>() {
            out.push(seq);
        }
        let four = [
            ctx.step(&lambda, c),
            ctx.step(&pw(c, 2), &pw(c, 4)),
            ctx.step(&pw(c, 2), &pw(c, 2)),
            ctx.step(&lambda, &pw(c, 4)),
        ];
        if let Some(seq) = four.into_iter().collect::<Option<Vec<_>>>() {
            out.push(seq);
        }
    }
    let pairs: Vec<&Character> = orbits
        .iter()
        .filter(|o| o.size() == 2)
        .map(|o| &o.members[0])
        .collect();
    for (i, c) in pairs.iter().enumerate() {
        for c2 in &pairs[i + 1..] {
            let both = h.tensor(c, c2);
            let four = [
                ctx.step(&lambda, c),
                ctx.step(&both, &pw(c2, 2)),
                ctx.step(&both, &pw(c, 2)),
                ctx.step(&lambda, c2),
            ];
            if let Some(seq) = four.into_iter().collect::<Option<Vec<_>>>() {
                out.push(seq);
            }
        }
    }
    out
}

/// Valid, qualifying cycles built from the constructions above, canonical,
/// deduplicated and sorted. Requires a quiver from [`crate::quiverbuild::build_bound_quiver`].
pub fn template_certificates(q: &BoundQuiver) -> Vec<ZigzagCycle> {
    let (Some(p), Ok(h)) = (q.p, AbelianGroupH::new(q.h_orders.clone())) else {
        return Vec::new();
    };
    if q.labels.is_empty() || q.vertex_count() as u64 != h.order() {
        return Vec::new();
    }
    let ctx = Ctx {
        q,
        h,
        chars: q.labels.iter().map(|l| l.character.clone()).collect(),
        n: q.labels.len(),
    };
    let mut raw = Vec::new();
    for k in 0..ctx.n {
        for k2 in 0..ctx.n {
            if k == k2 {
                continue;
            }
            let (e, e2) = (q.labels[k].label.exponent, q.labels[k2].label.exponent);
            if p >= 3 || (e == e2 && e >= 2) {
                raw.extend(walk_candidates(&ctx, k, k2));
            }
        }
    }
    if p == 2 {
        raw.extend(frobenius_candidates(&ctx));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for seq in raw {
        if let Some(c) = canonical_form(q, &seq) {
            if seen.insert(c.arrows.clone()) && is_qualifying(q, &c).qualifies {
                out.push(c);
            }
        }
    }
    out.sort_by(|a, b| a.arrows.cmp(&b.arrows));
    out
}
