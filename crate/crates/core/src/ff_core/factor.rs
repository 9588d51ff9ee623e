//! Integer factorization for 64-bit group orders.
//!
//! Trial division up to [`TRIAL_LIMIT`], then Brent's variant of Pollard rho
//! with a bounded number of iterations per attempt. Primality is decided by
//! deterministic Miller-Rabin, which is exact for every `u64`.

use crate::error::{Error, Result};

pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Iteration budget for a single rho attempt.
pub const RHO_ITERATION_CAP: u64 = 1 << 22;

const RHO_ATTEMPTS: u64 = 24;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Finds a nontrivial factor of the odd composite `n`.
fn rho(n: u64) -> Option<u64> {
    for c in 1..=RHO_ATTEMPTS {
        let f = |v: u64| ((v as u128 * v as u128 + c as u128) % n as u128) as u64;
        let mut y = 2u64;
        let mut ys = y;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let mut spent = 0u64;
        let x = loop {
            let x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let batch = 128.min(r - k);
                for _ in 0..batch {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += batch;
            }
            spent += r;
            r <<= 1;
            if g != 1 || spent > RHO_ITERATION_CAP {
                break x;
            }
        };
        if g == n {
            // the batched product overshot; replay one step at a time
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization as sorted `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d < TRIAL_LIMIT && d * d <= rest {
        while rest.is_multiple_of(d) {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        match rho(m) {
            Some(f) => {
                stack.push(f);
                stack.push(m / f);
            }
            None => {
                return Err(Error::EffortCap(format!(
                    "Pollard rho could not split {m} within {RHO_ITERATION_CAP} iterations"
                )))
            }
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// All positive divisors in ascending order.
pub fn divisors(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}
