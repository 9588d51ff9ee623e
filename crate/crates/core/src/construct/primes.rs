//! Small primes not dividing a given order, and the Chebyshev function
//! theta(x) = sum of ln l over primes l <= x.

use crate::error::{Error, Result};

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn theta(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    primes_up_to(x.floor() as u64)
        .iter()
        .map(|&l| (l as f64).ln())
        .sum()
}

/// theta(i) for every integer 0 <= i <= n.
pub fn theta_table(n: u64) -> Vec<f64> {
    let primes = primes_up_to(n);
    let mut out = vec![0.0; n as usize + 1];
    let mut acc = 0.0;
    let mut next = primes.iter().peekable();
    for (i, slot) in out.iter_mut().enumerate() {
        if next.peek().is_some_and(|&&l| l == i as u64) {
            acc += (i as f64).ln();
            next.next();
        }
        *slot = acc;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSearch {
    /// L = ln r, or log2 r when p = 2
    pub lower: f64,
    /// (2 + eps) L
    pub upper: f64,
    /// least prime in (lower, upper] not dividing r
    pub ell: Option<u64>,
}

/// Looks for the least prime l with l not dividing r in (L, (2 + eps) L].
pub fn prime_search(r: u64, p: u64, eps: f64) -> Result<PrimeSearch> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "r = {r} must be at least 2"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {eps} must be positive"
        )));
    }
    let lower = if p == 2 {
        (r as f64).log2()
    } else {
        (r as f64).ln()
    };
    let upper = (2.0 + eps) * lower;
    let ell = primes_up_to(upper.floor() as u64)
        .into_iter()
        .find(|&l| l as f64 > lower && !r.is_multiple_of(l));
    Ok(PrimeSearch { lower, upper, ell })
}
