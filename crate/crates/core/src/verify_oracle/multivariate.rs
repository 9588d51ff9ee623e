//! Dense multivariate check of the root-of-unity sum identity
//!
//! `sum_{j=1}^{M-1} prod_i (w^j + x_i)^{k_i}
//!     = (M-1) prod_i x_i^{k_i} + (M-1) sum_i k_i x_i + [M = 2]`
//!
//! for sum k_i = M, and of its reduced form when sum k_i < M.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff_core::{FieldCtx, FieldElement};

pub const MAX_M: u64 = 6;
pub const MAX_VARS: usize = 4;

type Monomial = Vec<u32>;
type MPoly = BTreeMap<Monomial, FieldElement>;

fn add_term(f: &mut MPoly, mono: Monomial, c: FieldElement) {
    let sum = match f.remove(&mono) {
        Some(old) => &old + &c,
        None => c,
    };
    if !sum.is_zero() {
        f.insert(mono, sum);
    }
}

fn mul(f: &MPoly, g: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (ma, ca) in f {
        for (mb, cb) in g {
            let mono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
            add_term(&mut out, mono, ca * cb);
        }
    }
    out
}

/// Pascal's triangle row n, reduced mod p.
fn binomial_row(n: u32, p: u64) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = (row[i - 1] + row[i]) % p;
        }
        row = next;
    }
    row
}

/// (c + x_var)^e in `nvars` variables.
fn binomial(ctx: &Arc<FieldCtx>, c: &FieldElement, var: usize, e: u32, nvars: usize) -> MPoly {
    let mut f = MPoly::new();
    for (d, b) in binomial_row(e, ctx.characteristic())
        .into_iter()
        .enumerate()
    {
        let mut mono = vec![0u32; nvars];
        mono[var] = d as u32;
        let coeff = &ctx.from_int(b as i64) * &c.pow_u64(e as u64 - d as u64);
        add_term(&mut f, mono, coeff);
    }
    f
}

fn total(mono: &[u32]) -> u64 {
    mono.iter().map(|&d| d as u64).sum()
}

/// The coefficient each monomial must have on the left of the full identity
/// (exponents summing to M): M-1 on prod x_i^{k_i}, k_i (M-1) on x_i, 1 on
/// the constant when M = 2, zero elsewhere.
fn expected_coefficient(ctx: &Arc<FieldCtx>, mono: &[u32], exps: &[u32], m: u64) -> FieldElement {
    let m1 = ctx.from_int((m - 1) as i64);
    let d = total(mono);
    if d == m {
        debug_assert_eq!(mono, exps);
        return m1;
    }
    if d == 1 {
        let i = mono
            .iter()
            .position(|&x| x == 1)
            .expect("one unit exponent");
        return &m1 * &ctx.from_int(exps[i] as i64);
    }
    if d == 0 && m == 2 {
        return ctx.one();
    }
    ctx.zero()
}

/// Expands both sides densely and compares them. When the exponents sum to
/// less than M, the identity is taken with an extra exponent R on x_{N+1}
/// and then specialized at x_{N+1} = 0.
pub fn check_multivariate_identity(m: u64, k_vec: &[u32], ctx: &Arc<FieldCtx>) -> Result<bool> {
    if !(2..=MAX_M).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "M = {m} must lie in 2..={MAX_M}"
        )));
    }
    if k_vec.is_empty() || k_vec.len() > MAX_VARS || k_vec.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "need 1 to {MAX_VARS} positive exponents, got {k_vec:?}"
        )));
    }
    let sum: u64 = k_vec.iter().map(|&k| k as u64).sum();
    if sum > m {
        return Err(Error::InvalidArgument(format!(
            "exponents sum to {sum}, more than M = {m}"
        )));
    }
    let omega = ctx.root_of_unity(m - 1)?;
    Ok(identity_holds_with(m, k_vec, ctx, &omega))
}

fn identity_holds_with(m: u64, k_vec: &[u32], ctx: &Arc<FieldCtx>, omega: &FieldElement) -> bool {
    let sum: u64 = k_vec.iter().map(|&k| k as u64).sum();
    let mut exps = k_vec.to_vec();
    if sum < m {
        exps.push((m - sum) as u32);
    }
    let nvars = exps.len();

    let mut lhs = MPoly::new();
    let mut w = ctx.one();
    for _ in 1..m {
        w = &w * omega;
        let mut prod = MPoly::new();
        prod.insert(vec![0; nvars], ctx.one());
        for (i, &e) in exps.iter().enumerate() {
            prod = mul(&prod, &binomial(ctx, &w, i, e, nvars));
        }
        for (mono, c) in prod {
            add_term(&mut lhs, mono, c);
        }
    }

    // every monomial with nonzero expected coefficient must be present, and
    // every present monomial must match
    for (mono, c) in &lhs {
        if c != &expected_coefficient(ctx, mono, &exps, m) {
            return false;
        }
    }
    let m1 = ctx.from_int((m - 1) as i64);
    let mut rhs = MPoly::new();
    add_term(&mut rhs, exps.clone(), m1.clone());
    for (i, &e) in exps.iter().enumerate() {
        let mut mono = vec![0u32; nvars];
        mono[i] = 1;
        add_term(&mut rhs, mono, &m1 * &ctx.from_int(e as i64));
    }
    if m == 2 {
        add_term(&mut rhs, vec![0; nvars], ctx.one());
    }
    if lhs != rhs {
        return false;
    }

    if sum < m {
        // x_{N+1} = 0 keeps only the monomials free of it
        let restrict = |f: &MPoly| -> MPoly {
            f.iter()
                .filter(|(mono, _)| mono[nvars - 1] == 0)
                .map(|(mono, c)| (mono[..nvars - 1].to_vec(), c.clone()))
                .collect()
        };
        // the specialized left side, expanded directly with weights w^{jR}
        let r = m - sum;
        let n = k_vec.len();
        let mut direct = MPoly::new();
        let mut w = ctx.one();
        for _ in 1..m {
            w = &w * omega;
            let mut prod = MPoly::new();
            prod.insert(vec![0; n], w.pow_u64(r));
            for (i, &e) in k_vec.iter().enumerate() {
                prod = mul(&prod, &binomial(ctx, &w, i, e, n));
            }
            for (mono, c) in prod {
                add_term(&mut direct, mono, c);
            }
        }
        let mut reduced = MPoly::new();
        for (i, &e) in k_vec.iter().enumerate() {
            let mut mono = vec![0u32; n];
            mono[i] = 1;
            add_term(&mut reduced, mono, &m1 * &ctx.from_int(e as i64));
        }
        if m == 2 {
            add_term(&mut reduced, vec![0; n], ctx.one());
        }
        if restrict(&lhs) != direct || direct != reduced {
            return false;
        }
    }
    true
}

/// Least m with d | p^m - 1, if p does not divide d.
pub fn least_degree_with_roots(p: u64, d: u64) -> Option<usize> {
    if d.is_multiple_of(p) {
        return None;
    }
    let mut x = 1 % d;
    for m in 1..=d as usize {
        x = x * (p % d) % d;
        if x == 1 % d {
            return Some(m);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_core::make_field;

    #[test]
    fn worked_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert!(check_multivariate_identity(2, &[2], &f3).unwrap());
        assert!(check_multivariate_identity(3, &[1, 2], &f3).unwrap());
        assert!(check_multivariate_identity(3, &[1, 1], &f3).unwrap());
        let f5 = make_field(5, 1).unwrap();
        assert!(check_multivariate_identity(5, &[3, 2], &f5).unwrap());
    }

    #[test]
    fn three_term_example_by_hand() {
        // (-1+x1)(-1+x2)^2 + (1+x1)(1+x2)^2 = 2 x1 x2^2 + 2 x1 + 4 x2 over GF(5)
        let f = make_field(5, 1).unwrap();
        let omega = f.root_of_unity(2).unwrap();
        let mut lhs = MPoly::new();
        for w in [omega.clone(), f.one()] {
            let prod = mul(&binomial(&f, &w, 0, 1, 2), &binomial(&f, &w, 1, 2, 2));
            for (m, c) in prod {
                add_term(&mut lhs, m, c);
            }
        }
        let mut rhs = MPoly::new();
        add_term(&mut rhs, vec![1, 2], f.from_int(2));
        add_term(&mut rhs, vec![1, 0], f.from_int(2));
        add_term(&mut rhs, vec![0, 1], f.from_int(4));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rejects_missing_roots_and_bad_shapes() {
        let f2 = make_field(2, 1).unwrap();
        assert!(matches!(
            check_multivariate_identity(3, &[1, 2], &f2),
            Err(Error::NoRootOfUnity { .. })
        ));
        let f3 = make_field(3, 1).unwrap();
        assert!(check_multivariate_identity(3, &[2, 2], &f3).is_err());
        assert!(check_multivariate_identity(7, &[1], &f3).is_err());
    }

    #[test]
    fn wrong_root_of_unity_is_detected() {
        let f7 = make_field(7, 1).unwrap();
        assert!(check_multivariate_identity(4, &[1, 1, 2], &f7).unwrap());
        // 6 has order 2, not 3
        assert!(!identity_holds_with(4, &[1, 1, 2], &f7, &f7.from_int(6)));
        assert!(!identity_holds_with(3, &[1, 1], &f7, &f7.one()));
        assert_eq!(least_degree_with_roots(2, 3), Some(2));
        assert_eq!(least_degree_with_roots(3, 3), None);
        assert_eq!(least_degree_with_roots(7, 5), Some(4));
    }
}
