//! Dense polynomials over the prime field GF(p), only as much as modulus
//! search and irreducibility testing need. Coefficients are low-degree first
//! and trailing zeros are trimmed.

use super::factor::{self, mul_mod, pow_mod};

pub(crate) type FpPoly = Vec<u64>;

pub(crate) fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `f`.
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> FpPoly {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        let shift = top - df;
        for (j, &fj) in f.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, fj, p)) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn pow_rem(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> FpPoly {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, f, p);
        }
        b = mul_rem(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

/// Rabin's test: `f` of degree m is irreducible iff x^(p^m) = x mod f and
/// gcd(x^(p^(m/l)) - x, f) = 1 for every prime l dividing m.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let m = f.len() - 1;
    let x: FpPoly = vec![0, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = Vec::with_capacity(m + 1);
    frob.push(rem(&x, &f, p));
    for i in 1..=m {
        let next = pow_rem(&frob[i - 1], p, &f, p);
        frob.push(next);
    }
    if frob[m] != rem(&x, &f, p) {
        return false;
    }
    let prime_divisors = factor::factorize(m as u64).unwrap_or_default();
    prime_divisors.iter().all(|&(l, _)| {
        let h = sub(&frob[m / l as usize], &x, p);
        gcd(&h, &f, p).len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducible iff no monic factor of degree 1..=deg/2 divides it.
    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        for d in 1..=m / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut v = idx;
                for _ in 0..d {
                    g.push(v % p);
                    v /= p;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_trial_factor_search() {
        for (p, m) in [
            (2u64, 1usize),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 6),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 2),
            (5, 3),
            (7, 2),
        ] {
            for idx in 0..p.pow(m as u32) {
                let mut f = Vec::with_capacity(m + 1);
                let mut v = idx;
                for _ in 0..m {
                    f.push(v % p);
                    v /= p;
                }
                f.push(1);
                assert_eq!(
                    is_irreducible(&f, p),
                    brute_irreducible(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn gcd_is_monic() {
        // (x+1)(x+2) and (x+1)x over GF(3)
        let a = mul(&[1, 1], &[2, 1], 3);
        let b = mul(&[1, 1], &[0, 1], 3);
        assert_eq!(gcd(&a, &b, 3), vec![1, 1]);
    }
}
