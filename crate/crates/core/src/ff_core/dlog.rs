//! Discrete logarithms (Pohlig-Hellman over baby-step/giant-step) and k-th
//! roots of scalars.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// Baby-step table size limit; subgroups of prime order above the square of
/// this are refused.
pub const BSGS_TABLE_CAP: u64 = 1 << 22;

/// Root sets at most this large are scanned for the canonical representative.
const CANONICAL_SCAN_CAP: u64 = 4096;

/// Largest extension degree multiplier tried when no root exists.
const EXTENSION_SEARCH_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KthRoot {
    /// y with y^k = c.
    Root(FieldElement),
    /// No root here; one exists in GF(Q^multiplier) for this least multiplier.
    NeedsExtension { multiplier: u64 },
}

/// Inverse of a modulo m (m >= 1, gcd(a, m) = 1). Returns 0 when m = 1.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Solves base^x = target where base has prime order `order`.
fn bsgs(base: &FieldElement, target: &FieldElement, order: u64) -> Result<u64> {
    let steps = (order as f64).sqrt().ceil() as u64 + 1;
    if steps > BSGS_TABLE_CAP {
        return Err(Error::EffortCap(format!(
            "baby-step/giant-step in a subgroup of order {order} needs {steps} baby steps"
        )));
    }
    let mut table = HashMap::with_capacity(steps as usize);
    let mut cur = base.ctx().one();
    for j in 0..steps {
        table.entry(cur.coeffs().to_vec()).or_insert(j);
        cur = &cur * base;
    }
    let giant = base.pow_u128(steps as u128).inv()?;
    let mut gamma = target.clone();
    for i in 0..steps {
        if let Some(&j) = table.get(gamma.coeffs()) {
            return Ok((i * steps + j) % order);
        }
        gamma = &gamma * &giant;
    }
    Err(Error::Invariant(format!(
        "target is not in the subgroup of order {order}"
    )))
}

/// log_g(c) for the generator g of GF(Q)^x.
pub(crate) fn discrete_log(g: &FieldElement, c: &FieldElement) -> Result<u64> {
    let ctx = g.ctx();
    let n = ctx.group_order();
    let mut x_acc: u128 = 0;
    let mut mod_acc: u128 = 1;
    for &(l, e) in ctx.group_order_factors()? {
        let pe = l.pow(e);
        let gamma = g.pow_u128((n / pe) as u128);
        let h = c.pow_u128((n / pe) as u128);
        let gamma_top = gamma.pow_u128((pe / l) as u128);
        let mut x: u64 = 0;
        let mut l_i: u64 = 1;
        for i in 0..e {
            let shifted = &gamma.pow_u128(x as u128).inv()? * &h;
            let probe = shifted.pow_u128((pe / (l_i * l)) as u128);
            let d = bsgs(&gamma_top, &probe, l)?;
            x += d * l_i;
            if i + 1 < e {
                l_i *= l;
            }
        }
        // CRT merge of x mod pe into x_acc mod mod_acc
        let m_inv = inv_mod((mod_acc % pe as u128) as u64, pe)
            .ok_or_else(|| Error::Invariant("non-coprime CRT moduli".into()))?;
        let diff = (x as i128 - (x_acc % pe as u128) as i128).rem_euclid(pe as i128) as u128;
        let t = diff * m_inv as u128 % pe as u128;
        x_acc += mod_acc * t;
        mod_acc *= pe as u128;
    }
    Ok((x_acc % n as u128) as u64)
}

pub(crate) fn kth_root(ctx: &Arc<FieldCtx>, c: &FieldElement, k: &BigUint) -> Result<KthRoot> {
    if !c.ctx().same_field(ctx) {
        return Err(Error::ContextMismatch);
    }
    if k.is_zero() {
        return if c.is_one() {
            Ok(KthRoot::Root(ctx.one()))
        } else {
            Err(Error::InvalidArgument(
                "y^0 = c has no solution for c != 1".into(),
            ))
        };
    }
    if c.is_zero() {
        return Ok(KthRoot::Root(ctx.zero()));
    }
    let n = ctx.group_order();
    let ord = c.mult_order()?;
    let g = (k % n).to_u64().unwrap_or(0).gcd(&n);
    if !(n / g).is_multiple_of(ord) {
        return extension_advice(ctx.order(), ord, k);
    }

    let k_mod_ord = (k % ord).to_u64().unwrap_or(0);
    let root = match inv_mod(k_mod_ord, ord) {
        Some(inv) if k_mod_ord.gcd(&ord) == 1 => c.pow_u128(inv as u128),
        _ => {
            let gen = ctx.find_generator()?;
            let log = discrete_log(&gen, c)?;
            if log % g != 0 {
                return Err(Error::Invariant(
                    "discrete log incompatible with solvability criterion".into(),
                ));
            }
            let reduced_n = n / g;
            let k_red = ((k / g) % reduced_n).to_u64().unwrap_or(0);
            let k_inv = inv_mod(k_red, reduced_n)
                .ok_or_else(|| Error::Invariant("k/g not invertible mod (Q-1)/g".into()))?;
            let x0 = ((log / g) as u128 * k_inv as u128 % reduced_n as u128) as u64;
            gen.pow_u128(x0 as u128)
        }
    };
    if &root.pow(k) != c {
        return Err(Error::Invariant("computed k-th root fails y^k = c".into()));
    }
    Ok(KthRoot::Root(canonical_root(ctx, root, g)?))
}

/// Among the g roots y0 * zeta^i (zeta of order g), the one of least rank.
fn canonical_root(ctx: &Arc<FieldCtx>, y0: FieldElement, g: u64) -> Result<FieldElement> {
    if g == 1 || g > CANONICAL_SCAN_CAP {
        return Ok(y0);
    }
    let zeta = ctx.root_of_unity(g)?;
    let mut best = y0.clone();
    let mut cur = y0;
    for _ in 1..g {
        cur = &cur * &zeta;
        if cur.rank() < best.rank() {
            best = cur.clone();
        }
    }
    Ok(best)
}

/// Least e such that an element of order `ord` in GF(q) is a k-th power in GF(q^e).
fn extension_advice(q: u64, ord: u64, k: &BigUint) -> Result<KthRoot> {
    let q = BigUint::from(q);
    let ord = BigUint::from(ord);
    let mut qe = q.clone();
    for e in 2..=EXTENSION_SEARCH_CAP {
        qe *= &q;
        let ne: BigUint = &qe - BigUint::one();
        let ge = k.gcd(&ne);
        if ((ne / ge) % &ord).is_zero() {
            return Ok(KthRoot::NeedsExtension { multiplier: e });
        }
    }
    Err(Error::EffortCap(format!(
        "no k-th root within extension degree {EXTENSION_SEARCH_CAP}"
    )))
}
