//! Replacing k by a multiple with the same nonzero digits at better-placed
//! exponents.
//!
//! Both pumps move digit positions by multiples of r, the order of q mod k.
//! Since q^r = 1 mod k this keeps k' = k mod k.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::digits::{expand_base, order_mod, BaseExpansion, Term};
use crate::error::{Error, Result};
use crate::ff_core::dlog::inv_mod;

fn order_as_u64(r: &BigUint) -> Result<u64> {
    r.to_u64()
        .ok_or_else(|| Error::EffortCap(format!("multiplicative order {r} does not fit 64 bits")))
}

fn check_coprime(k: &BigUint, q: &BigUint) -> Result<()> {
    if k.gcd(q).is_one() {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "k = {k} must be relatively prime to q = {q}"
        )))
    }
}

fn check_u(u: u64, r: u64) -> Result<()> {
    if u == 0 {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    if u.gcd(&r) != 1 {
        return Err(Error::Hypothesis(format!(
            "u = {u} must be relatively prime to the order r = {r}"
        )));
    }
    Ok(())
}

/// Moves every digit after the first to an exponent a' = a + r b with
/// a' = 1 mod u. Each b is the least admissible value, raised by u until the
/// exponents increase strictly.
pub fn pump_exponents_uniform(exp: &BaseExpansion, r: u64, u: u64) -> Result<BaseExpansion> {
    if u < 2 {
        return Err(Error::InvalidArgument(format!("u = {u} must exceed 1")));
    }
    check_u(u, r)?;
    let r_inv = inv_mod(r % u, u).expect("r is a unit mod u");
    let step = r
        .checked_mul(u)
        .ok_or_else(|| Error::EffortCap("pumping step overflows 64 bits".into()))?;
    let mut terms: Vec<Term> = Vec::with_capacity(exp.len());
    for (i, t) in exp.terms().iter().enumerate() {
        if i == 0 {
            terms.push(t.clone());
            continue;
        }
        // r b = 1 - a mod u
        let need = (1 + u - t.exponent % u) % u;
        let b = need * r_inv % u;
        let mut a = t.exponent + r * b;
        let prev = terms[i - 1].exponent;
        if a <= prev {
            a += (prev - a) / step * step;
            while a <= prev {
                a += step;
            }
        }
        terms.push(Term {
            digit: t.digit.clone(),
            exponent: a,
        });
    }
    BaseExpansion::from_terms(exp.base().clone(), terms)
}

/// k' with k | k', the same base-q digits as k, and every exponent after the
/// first congruent to 1 mod u. Returns k' and its base-q expansion.
pub fn pump_uniform_residue(k: &BigUint, q: &BigUint, u: u64) -> Result<(BigUint, BaseExpansion)> {
    let exp = pump_uniform_residue_expansion(k, q, u)?;
    Ok((exp.value(), exp))
}

/// The expansion of [`pump_uniform_residue`] without materializing k'.
pub fn pump_uniform_residue_expansion(k: &BigUint, q: &BigUint, u: u64) -> Result<BaseExpansion> {
    check_coprime(k, q)?;
    let r = order_as_u64(&order_mod(q, k)?)?;
    pump_exponents_uniform(&expand_base(k, q)?, r, u)
}

/// Multiplies every exponent by rb + 1, where b is the least positive integer
/// with r b = -1 mod u. The result is divisible by u in every exponent, so its
/// base-q^u digits are the base-q digits of the input. u = 1 is the identity.
pub fn pump_exponents_base_power(exp: &BaseExpansion, r: u64, u: u64) -> Result<BaseExpansion> {
    check_u(u, r)?;
    if u == 1 {
        return Ok(exp.clone());
    }
    let r_inv = inv_mod(r % u, u).expect("r is a unit mod u");
    let mut b = (u - 1) * r_inv % u;
    if b == 0 {
        b = u;
    }
    let scale = r
        .checked_mul(b)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::EffortCap("exponent scale overflows 64 bits".into()))?;
    let terms = exp
        .terms()
        .iter()
        .map(|t| {
            t.exponent
                .checked_mul(scale)
                .map(|exponent| Term {
                    digit: t.digit.clone(),
                    exponent,
                })
                .ok_or_else(|| Error::EffortCap("pumped exponent overflows 64 bits".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    BaseExpansion::from_terms(exp.base().clone(), terms)
}

/// k' with k | k' and gamma_{q^u}(k') = gamma_q(k).
pub fn pump_base_power(k: &BigUint, q: &BigUint, u: u64) -> Result<BigUint> {
    Ok(pump_base_power_expansion(k, q, u)?.value())
}

/// The base-q expansion of [`pump_base_power`].
pub fn pump_base_power_expansion(k: &BigUint, q: &BigUint, u: u64) -> Result<BaseExpansion> {
    check_coprime(k, q)?;
    let r = order_as_u64(&order_mod(q, k)?)?;
    pump_exponents_base_power(&expand_base(k, q)?, r, u)
}
