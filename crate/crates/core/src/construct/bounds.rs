//! Upper bounds on the number of k-th powers, from every applicable route.
//!
//! `base_power` reads the indicator in 2(p^u - 1) + [gamma = M] with M = p^u,
//! the value the underlying construction uses.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::params::{best_candidate, Route, SearchWindow};
use super::primes::primes_up_to;
use crate::digits::{digit_sum, order_mod, vaserstein_bound};
use crate::error::{Error, Result};
use crate::ff_core::factor;

/// Checked up to this u in the base-power entry.
pub const BASE_POWER_MAX_U: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSumBound {
    pub bound: u64,
    pub m: u64,
    pub n: u32,
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddOrderBound {
    pub bound: BigUint,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePowerBound {
    pub u: u64,
    pub bound: BigUint,
}

/// v(p, k) < `below`, from the least prime not dividing r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeastPrimeBound {
    pub ell: u64,
    pub below: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub p: u64,
    pub k: BigUint,
    /// digit sum of k in base p
    pub gamma: BigUint,
    /// order of p mod k
    pub r: BigUint,
    pub vaserstein: BigUint,
    pub digit_sum: Option<DigitSumBound>,
    pub odd_order: Option<OddOrderBound>,
    pub base_power: Vec<BasePowerBound>,
    pub least_prime: Option<LeastPrimeBound>,
    pub best: BigUint,
    pub best_source: &'static str,
}

/// Least c >= 0 with gamma <= 2^c + 1.
pub fn least_c(gamma: &BigUint) -> u32 {
    let mut c = 0u32;
    while gamma > &((BigUint::one() << c) + 1u32) {
        c += 1;
    }
    c
}

pub fn compute_bounds(p: u64, k: &BigUint) -> Result<BoundReport> {
    if !factor::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < &BigUint::from(2u32) {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be at least 2"
        )));
    }
    let vaserstein = vaserstein_bound(k, p)?;
    let pb = BigUint::from(p);
    let gamma = digit_sum(k, &pb)?;
    let r = order_mod(&pb, k)?;

    let window = SearchWindow {
        max_order_bits: u32::MAX,
        ..SearchWindow::default()
    };
    let digit_sum = best_candidate(p, k, &window)?.map(|c| DigitSumBound {
        bound: c.bound,
        m: c.m,
        n: c.n,
        route: c.route,
    });

    let odd_order = if p % 2 == 1 && r.bit(0) {
        let c = least_c(&gamma);
        let two_c = BigUint::one() << c;
        let mut bound = &two_c << 1u32;
        if gamma == two_c + 1u32 {
            bound += 1u32;
        }
        Some(OddOrderBound { bound, c })
    } else {
        None
    };

    let r_small = r.to_u64();
    let base_power = (1..=BASE_POWER_MAX_U)
        .filter(|&u| r_small.is_some_and(|r| num_integer::gcd(u, r) == 1))
        .filter_map(|u| {
            let pu = pb.pow(u as u32);
            if gamma > pu {
                return None;
            }
            let mut bound = (&pu - 1u32) << 1u32;
            if gamma == pu {
                bound += 1u32;
            }
            Some(BasePowerBound { u, bound })
        })
        .collect::<Vec<_>>();

    let least_prime = match r_small {
        Some(r) if gamma > pb => primes_up_to(64 + 2 * (r as f64).log2() as u64)
            .into_iter()
            .find(|&l| r % l != 0)
            .map(|ell| LeastPrimeBound {
                ell,
                below: (gamma.pow(ell as u32) << 1u32) - 1u32,
            }),
        _ => None,
    };

    let mut entries: Vec<(BigUint, &'static str)> = vec![(vaserstein.clone(), "digit-product")];
    if let Some(d) = &digit_sum {
        entries.push((BigUint::from(d.bound), "digit-sum"));
    }
    if let Some(o) = &odd_order {
        entries.push((o.bound.clone(), "odd-order"));
    }
    for b in &base_power {
        entries.push((b.bound.clone(), "base-power"));
    }
    if let Some(l) = &least_prime {
        entries.push((&l.below - 1u32, "least-prime"));
    }
    let (best, best_source) = entries
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("the digit-product bound is always present");

    Ok(BoundReport {
        p,
        k: k.clone(),
        gamma,
        r,
        vaserstein,
        digit_sum,
        odd_order,
        base_power,
        least_prime,
        best,
        best_source,
    })
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}, k = {}", self.p, self.k)?;
        writeln!(f, "digit sum in base p: {}", self.gamma)?;
        writeln!(f, "order of p mod k: {}", self.r)?;
        writeln!(f, "digit-product bound: {}", self.vaserstein)?;
        match &self.digit_sum {
            Some(d) => writeln!(
                f,
                "digit-sum bound: {} (M = {}, n = {}, via {})",
                d.bound, d.m, d.n, d.route
            )?,
            None => writeln!(
                f,
                "digit-sum bound: no admissible (M, n) with n <= {}",
                super::params::DEFAULT_MAX_N
            )?,
        }
        match &self.odd_order {
            Some(o) => writeln!(f, "odd-order bound: {} (c = {})", o.bound, o.c)?,
            None => writeln!(
                f,
                "odd-order bound: not applicable (needs p odd and odd order)"
            )?,
        }
        if self.base_power.is_empty() {
            writeln!(f, "base-power bound: no u <= {BASE_POWER_MAX_U} applies")?;
        }
        for b in &self.base_power {
            writeln!(f, "base-power bound: {} (u = {})", b.bound, b.u)?;
        }
        match &self.least_prime {
            Some(l) => writeln!(f, "least-prime bound: below {} (l = {})", l.below, l.ell)?,
            None => writeln!(f, "least-prime bound: not applicable (needs digit sum > p)")?,
        }
        writeln!(f, "best: {} ({})", self.best, self.best_source)
    }
}
