//! Base-q digit machinery: sparse expansions, digit sums, Lucas-style
//! binomial coefficients mod p, multiplicative orders mod k and the
//! digit-product bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ff_core::factor;

/// Below this modulus `order_mod` iterates powers directly.
pub const ORDER_BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Step budget when the modulus is too large to factor.
const ORDER_ITERATION_CAP: u64 = 10_000_000;

/// One nonzero digit `digit * base^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub digit: BigUint,
    pub exponent: u64,
}

/// `k = sum digit_i * q^exponent_i` with `0 < digit_i < q` and strictly
/// increasing exponents. Zero digits are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseExpansion {
    base: BigUint,
    terms: Vec<Term>,
}

impl BaseExpansion {
    /// Validates digit ranges and exponent order.
    pub fn from_terms(base: BigUint, terms: Vec<Term>) -> Result<Self> {
        if base < BigUint::from(2u32) {
            return Err(Error::InvalidArgument(format!("base {base} is below 2")));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.digit.is_zero() || t.digit >= base {
                return Err(Error::InvalidArgument(format!(
                    "digit {} is outside (0, {base})",
                    t.digit
                )));
            }
            if i > 0 && terms[i - 1].exponent >= t.exponent {
                return Err(Error::InvalidArgument(
                    "exponents must be strictly increasing".into(),
                ));
            }
        }
        Ok(BaseExpansion { base, terms })
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of nonzero digits.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn digit_sum(&self) -> BigUint {
        self.terms.iter().map(|t| &t.digit).sum()
    }

    /// The integer this expansion represents.
    pub fn value(&self) -> BigUint {
        self.terms
            .iter()
            .map(|t| &t.digit * self.base.pow(t.exponent as u32))
            .sum()
    }

    /// value mod m without materializing the value.
    pub fn residue(&self, m: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        for t in &self.terms {
            acc += &t.digit * self.base.modpow(&BigUint::from(t.exponent), m);
        }
        acc % m
    }

    /// Rewrites the same integer in base `base^u`, carrying where digits
    /// collide.
    pub fn regroup(&self, u: u64) -> BaseExpansion {
        assert!(u >= 1, "regroup factor must be positive");
        if u == 1 {
            return self.clone();
        }
        let new_base = self.base.pow(u as u32);
        let mut slots: BTreeMap<u64, BigUint> = BTreeMap::new();
        for t in &self.terms {
            let shift = self.base.pow((t.exponent % u) as u32);
            *slots.entry(t.exponent / u).or_default() += &t.digit * shift;
        }
        let mut terms = Vec::with_capacity(slots.len());
        while let Some((pos, val)) = slots.pop_first() {
            let (carry, digit) = val.div_rem(&new_base);
            if !carry.is_zero() {
                *slots.entry(pos + 1).or_default() += carry;
            }
            if !digit.is_zero() {
                terms.push(Term {
                    digit,
                    exponent: pos,
                });
            }
        }
        BaseExpansion {
            base: new_base,
            terms,
        }
    }
}

/// `k_1*q^a_1 + k_2*q^a_2 + ...`; the empty expansion prints as `0`.
impl fmt::Display for BaseExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*{}^{}", t.digit, self.base, t.exponent)?;
        }
        Ok(())
    }
}

pub fn expand_base(k: &BigUint, q: &BigUint) -> Result<BaseExpansion> {
    if q < &BigUint::from(2u32) {
        return Err(Error::InvalidArgument(format!("base {q} is below 2")));
    }
    let mut terms = Vec::new();
    match q.to_u32() {
        Some(small) if small <= 256 => {
            if !k.is_zero() {
                for (i, d) in k.to_radix_le(small).into_iter().enumerate() {
                    if d != 0 {
                        terms.push(Term {
                            digit: BigUint::from(d),
                            exponent: i as u64,
                        });
                    }
                }
            }
        }
        _ => {
            let mut rest = k.clone();
            let mut exponent = 0u64;
            while !rest.is_zero() {
                let (quot, digit) = rest.div_rem(q);
                if !digit.is_zero() {
                    terms.push(Term { digit, exponent });
                }
                rest = quot;
                exponent += 1;
            }
        }
    }
    Ok(BaseExpansion {
        base: q.clone(),
        terms,
    })
}

/// The digit sum of k in base q.
pub fn digit_sum(k: &BigUint, q: &BigUint) -> Result<BigUint> {
    Ok(expand_base(k, q)?.digit_sum())
}

fn small_binomial_row(n: u64, p: u64) -> Vec<u64> {
    // C(n, 0..=n) mod p for n < p, by the multiplicative recurrence
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = 1u64;
    row.push(c);
    for j in 0..n {
        c = factor::mul_mod(c, (n - j) % p, p);
        c = factor::mul_mod(c, factor::pow_mod(j + 1, p - 2, p), p);
        row.push(c);
    }
    row
}

/// C(k, d) mod p as the product of digit binomials.
pub fn lucas_binom(k: &BigUint, d: &BigUint, p: u64) -> Result<u64> {
    if d > k {
        return Err(Error::InvalidArgument(format!("{d} exceeds {k}")));
    }
    if !factor::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pb = BigUint::from(p);
    let (mut kk, mut dd) = (k.clone(), d.clone());
    let mut acc = 1u64;
    while !dd.is_zero() {
        let (kq, kr) = kk.div_rem(&pb);
        let (dq, dr) = dd.div_rem(&pb);
        let (kr, dr) = (kr.to_u64().unwrap_or(0), dr.to_u64().unwrap_or(0));
        if dr > kr {
            return Ok(0);
        }
        acc = factor::mul_mod(acc, small_binomial_row(kr, p)[dr as usize], p);
        kk = kq;
        dd = dq;
    }
    Ok(acc)
}

/// Every d whose base-p digits are bounded by those of k, with C(k, d) mod p
/// (always nonzero). There are prod(k_i + 1) of them; d = 0 comes first and
/// the order is ascending.
pub struct Dominated {
    powers: Vec<BigUint>,
    digits: Vec<u64>,
    rows: Vec<Vec<u64>>,
    counters: Vec<u64>,
    p: u64,
    done: bool,
}

pub fn dominated(k: &BigUint, p: u64) -> Result<Dominated> {
    if !factor::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let exp = expand_base(k, &BigUint::from(p))?;
    let mut powers = Vec::with_capacity(exp.len());
    let mut digits = Vec::with_capacity(exp.len());
    let mut rows = Vec::with_capacity(exp.len());
    for t in exp.terms() {
        let d = t.digit.to_u64().unwrap_or(0);
        powers.push(exp.base().pow(t.exponent as u32));
        digits.push(d);
        rows.push(small_binomial_row(d, p));
    }
    Ok(Dominated {
        counters: vec![0; digits.len()],
        powers,
        digits,
        rows,
        p,
        done: false,
    })
}

impl Dominated {
    /// prod(k_i + 1) over the base-p digits.
    pub fn term_count(&self) -> BigUint {
        self.digits.iter().map(|&d| BigUint::from(d + 1)).product()
    }
}

impl Iterator for Dominated {
    type Item = (BigUint, u64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut d = BigUint::zero();
        let mut c = 1u64;
        for (i, &ci) in self.counters.iter().enumerate() {
            if ci > 0 {
                d += &self.powers[i] * ci;
            }
            c = factor::mul_mod(c, self.rows[i][ci as usize], self.p);
        }
        // odometer, least significant digit first => ascending d
        let mut i = 0;
        loop {
            if i == self.counters.len() {
                self.done = true;
                break;
            }
            if self.counters[i] < self.digits[i] {
                self.counters[i] += 1;
                break;
            }
            self.counters[i] = 0;
            i += 1;
        }
        Some((d, c))
    }
}

fn carmichael(factors: &[(u64, u32)]) -> u64 {
    factors.iter().fold(1u64, |acc, &(p, e)| {
        let part = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1u64 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        acc.lcm(&part)
    })
}

/// Least r >= 1 with q^r = 1 mod k.
pub fn order_mod(q: &BigUint, k: &BigUint) -> Result<BigUint> {
    if k.is_zero() {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    if !q.gcd(k).is_one() {
        return Err(Error::Hypothesis(format!(
            "{q} and {k} must be relatively prime"
        )));
    }
    if k.is_one() {
        return Ok(BigUint::one());
    }
    if let Some(km) = k.to_u64() {
        let qm = (q % k).to_u64().unwrap_or(0);
        if km < ORDER_BRUTE_FORCE_LIMIT {
            let mut x = qm;
            let mut r = 1u64;
            while x != 1 {
                x = factor::mul_mod(x, qm, km);
                r += 1;
            }
            return Ok(BigUint::from(r));
        }
        let lambda = carmichael(&factor::factorize(km)?);
        let mut r = lambda;
        for (l, _) in factor::factorize(lambda)? {
            while r.is_multiple_of(l) && factor::pow_mod(qm, r / l, km) == 1 {
                r /= l;
            }
        }
        return Ok(BigUint::from(r));
    }
    let base = q % k;
    let mut x = base.clone();
    for r in 1..=ORDER_ITERATION_CAP {
        if x.is_one() {
            return Ok(BigUint::from(r));
        }
        x = (&x * &base) % k;
    }
    Err(Error::EffortCap(format!(
        "order of {q} mod a {}-bit modulus exceeds {ORDER_ITERATION_CAP}",
        k.bits()
    )))
}

/// prod(k_i + 1) - 1 over the base-p digits of k.
pub fn vaserstein_bound(k: &BigUint, p: u64) -> Result<BigUint> {
    if !factor::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !k.gcd(&BigUint::from(p)).is_one() {
        return Err(Error::Hypothesis("k must be relatively prime to p".into()));
    }
    let exp = expand_base(k, &BigUint::from(p))?;
    let prod: BigUint = exp
        .terms()
        .iter()
        .map(|t| &t.digit + BigUint::one())
        .product();
    Ok(prod - BigUint::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn pairs(e: &BaseExpansion) -> Vec<(u64, u64)> {
        e.terms()
            .iter()
            .map(|t| (t.digit.to_u64().unwrap(), t.exponent))
            .collect()
    }

    /// Pascal's triangle mod p.
    fn pascal_mod(n: usize, p: u64) -> Vec<Vec<u64>> {
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u64; i + 1];
            for j in 1..i {
                row[j] = (prev[j - 1] + prev[j]) % p;
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(
            pairs(&expand_base(&big(11), &big(3)).unwrap()),
            vec![(2, 0), (1, 2)]
        );
        assert_eq!(
            pairs(&expand_base(&big(2189), &big(3)).unwrap()),
            vec![(2, 0), (1, 7)]
        );
        assert_eq!(pairs(&expand_base(&big(4), &big(7)).unwrap()), vec![(4, 0)]);
        assert!(expand_base(&big(0), &big(5)).unwrap().is_empty());
        assert!(expand_base(&big(3), &big(1)).is_err());
        let wide = big(1) << 70u32;
        let e = expand_base(&(&wide + 5u32), &big(1000)).unwrap();
        assert_eq!(e.value(), &wide + 5u32);
        assert_eq!(
            expand_base(&big(11), &big(3)).unwrap().to_string(),
            "2*3^0 + 1*3^2"
        );
    }

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(&big(31), &big(2)).unwrap(), big(5));
        assert_eq!(digit_sum(&big(80), &big(3)).unwrap(), big(8));
        assert_eq!(digit_sum(&big(11), &big(3)).unwrap(), big(3));
        assert_eq!(digit_sum(&big(1), &big(3)).unwrap(), big(1));
        assert_eq!(digit_sum(&big(0), &big(3)).unwrap(), big(0));
    }

    #[test]
    fn lucas_matches_pascal_exhaustively() {
        for p in [2u64, 3, 5, 7] {
            let rows = pascal_mod(1000, p);
            for k in (0..=1000usize).step_by(if p == 2 { 1 } else { 3 }) {
                for (d, &expected) in rows[k].iter().enumerate().take(k + 1) {
                    assert_eq!(
                        lucas_binom(&big(k as u64), &big(d as u64), p).unwrap(),
                        expected,
                        "C({k},{d}) mod {p}"
                    );
                }
            }
        }
        assert_eq!(lucas_binom(&big(5), &big(2), 3).unwrap(), 1);
        assert_eq!(lucas_binom(&big(7), &big(1), 7).unwrap(), 0);
        assert_eq!(lucas_binom(&big(123), &big(123), 5).unwrap(), 1);
        assert!(lucas_binom(&big(3), &big(4), 5).is_err());
    }

    #[test]
    fn dominated_enumerates_nonzero_binomials() {
        for p in [2u64, 3, 5] {
            let rows = pascal_mod(400, p);
            for k in 0..=400u64 {
                let it = dominated(&big(k), p).unwrap();
                let count = it.term_count();
                let items: Vec<(BigUint, u64)> = dominated(&big(k), p).unwrap().collect();
                assert_eq!(big(items.len() as u64), count);
                let expected: Vec<(BigUint, u64)> = (0..=k as usize)
                    .filter(|&d| rows[k as usize][d] != 0)
                    .map(|d| (big(d as u64), rows[k as usize][d]))
                    .collect();
                assert_eq!(items, expected, "k={k} p={p}");
                if k % p != 0 {
                    assert_eq!(count - 1u32, vaserstein_bound(&big(k), p).unwrap());
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_mod(&big(3), &big(11)).unwrap(), big(5));
        assert_eq!(order_mod(&big(3), &big(5)).unwrap(), big(4));
        assert_eq!(order_mod(&big(7), &big(1)).unwrap(), big(1));
        assert!(order_mod(&big(3), &big(9)).is_err());
        // above the brute-force threshold: factorization path
        let k = big(1_000_003 * 3);
        let r = order_mod(&big(2), &k).unwrap();
        assert!(big(2).modpow(&r, &k).is_one());
        // modulus beyond u64 with a small order
        let k = big(3).pow(100) - 1u32;
        assert_eq!(order_mod(&big(3), &k).unwrap(), big(100));
    }

    #[test]
    fn vaserstein_examples() {
        assert_eq!(vaserstein_bound(&big(7), 2).unwrap(), big(7));
        assert_eq!(vaserstein_bound(&big(13), 5).unwrap(), big(11));
        // digits {1, 1}: k = p^r + 1
        assert_eq!(vaserstein_bound(&big(28), 3).unwrap(), big(3));
        assert!(matches!(
            vaserstein_bound(&big(2), 2),
            Err(Error::Hypothesis(_))
        ));
    }

    fn phi(n: u64) -> u64 {
        (1..=n).filter(|&i| i.gcd(&n) == 1).count() as u64
    }

    proptest! {
        #[test]
        fn roundtrip_and_casting_out(k in 0u64..u64::MAX, q in 2u64..5000) {
            let e = expand_base(&big(k), &big(q)).unwrap();
            prop_assert_eq!(e.value(), big(k));
            prop_assert!(e.terms().iter().all(|t| !t.digit.is_zero() && t.digit < big(q)));
            prop_assert!(e.terms().windows(2).all(|w| w[0].exponent < w[1].exponent));
            prop_assert_eq!(e.digit_sum() % (q - 1), big(k % (q - 1)));
        }

        #[test]
        fn regroup_preserves_value(k in 0u64..u64::MAX, q in 2u64..20, u in 1u64..6) {
            let e = expand_base(&big(k), &big(q)).unwrap();
            let r = e.regroup(u);
            prop_assert_eq!(r.value(), big(k));
            prop_assert_eq!(&r, &expand_base(&big(k), &big(q.pow(u as u32))).unwrap());
        }

        #[test]
        fn order_divides_totient(q in 1u64..500, k in 1u64..3000) {
            prop_assume!(q.gcd(&k) == 1);
            let r = order_mod(&big(q), &big(k)).unwrap().to_u64().unwrap();
            prop_assert_eq!(phi(k) % r, 0);
            prop_assert_eq!(factor::pow_mod(q, r, k), 1 % k);
        }

        #[test]
        fn residue_matches_value(k in 0u64..u64::MAX, q in 2u64..50, m in 1u64..10_000) {
            let e = expand_base(&big(k), &big(q)).unwrap();
            prop_assert_eq!(e.residue(&big(m)), big(k % m));
        }
    }
}
