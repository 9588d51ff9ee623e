//! Exhaustive search for the least s with t = y_1^k + ... + y_s^k over a
//! tiny field and tiny base degrees.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ff_core::{make_field, FieldElement};

/// Largest |GF(p^e)|^((D+1) S) the search accepts.
pub const SEARCH_CAP: u64 = 1 << 32;
/// Largest field whose addition table is built.
pub const MAX_FIELD_ORDER: u64 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteForce {
    Found(usize),
    /// `saturated` means adding another k-th power changes nothing, so no
    /// number of terms works.
    NotFound {
        saturated: bool,
    },
}

impl fmt::Display for BruteForce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BruteForce::Found(s) => write!(f, "least number of k-th powers: {s}"),
            BruteForce::NotFound { saturated: true } => {
                f.write_str("not found: sums of k-th powers are closed, t is never reached")
            }
            BruteForce::NotFound { saturated: false } => {
                f.write_str("not found within the term limit")
            }
        }
    }
}

/// Coefficient vector of ranks, low degree first.
type Dense = Vec<u32>;

pub fn brute_force_min_powers(
    p: u64,
    k: u64,
    field_degree: usize,
    max_terms: usize,
    max_degree: usize,
) -> Result<BruteForce> {
    if k == 0 || max_terms == 0 {
        return Err(Error::InvalidArgument(
            "k and the term limit must be positive".into(),
        ));
    }
    let f = make_field(p, field_degree)?;
    let q = f.order();
    if q > MAX_FIELD_ORDER {
        return Err(Error::EffortCap(format!(
            "field order {q} above {MAX_FIELD_ORDER}"
        )));
    }
    let space = BigUint::from(q).pow(((max_degree + 1) * max_terms) as u32);
    if space > BigUint::from(SEARCH_CAP) {
        return Err(Error::EffortCap(format!(
            "search space {space} above {SEARCH_CAP}"
        )));
    }
    let k_usize = k
        .to_usize()
        .filter(|&k| k.checked_mul(max_degree).is_some_and(|d| d < 1 << 16))
        .ok_or_else(|| Error::EffortCap("k times the base degree is too large".into()))?;
    let len = (k_usize * max_degree).max(1) + 1;

    let elems: Vec<FieldElement> = (0..q).map(|r| f.element_at(r)).collect();
    let add: Vec<Vec<u32>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| (a + b).rank() as u32).collect())
        .collect();

    let mut powers: HashSet<Dense> = HashSet::new();
    let bases = q.pow(max_degree as u32 + 1);
    for index in 0..bases {
        let mut digits = index;
        let base: Vec<FieldElement> = (0..=max_degree)
            .map(|_| {
                let c = &elems[(digits % q) as usize];
                digits /= q;
                c.clone()
            })
            .collect();
        powers.insert(dense_power(&base, k_usize, len, &f.zero()));
    }
    let powers: Vec<Dense> = powers.into_iter().collect();

    let mut target = vec![0u32; len];
    target[1] = f.one().rank() as u32;

    let mut reached: HashSet<Dense> = powers.iter().cloned().collect();
    for s in 1..=max_terms {
        if reached.contains(&target) {
            return Ok(BruteForce::Found(s));
        }
        if s == max_terms {
            break;
        }
        let mut next = HashSet::with_capacity(reached.len());
        for a in &reached {
            for b in &powers {
                next.insert(
                    a.iter()
                        .zip(b)
                        .map(|(&x, &y)| add[x as usize][y as usize])
                        .collect(),
                );
            }
        }
        // 0 is a k-th power, so the reachable sets only grow
        if next.len() == reached.len() {
            return Ok(BruteForce::NotFound { saturated: true });
        }
        reached = next;
    }
    Ok(BruteForce::NotFound { saturated: false })
}

fn dense_power(base: &[FieldElement], k: usize, len: usize, zero: &FieldElement) -> Dense {
    let mut acc = vec![zero.clone(); len];
    acc[0] = zero.ctx().one();
    for _ in 0..k {
        let mut next = vec![zero.clone(); len];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in base.iter().enumerate() {
                if i + j < len {
                    next[i + j] = &next[i + j] + &(a * b);
                }
            }
        }
        acc = next;
    }
    acc.iter().map(|c| c.rank() as u32).collect()
}
