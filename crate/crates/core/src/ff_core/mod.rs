//! Exact arithmetic in explicitly constructed finite fields GF(p^m).
//!
//! A field is GF(p)[x]/(f) for the first monic irreducible `f` of degree m in
//! lexicographic order of its low-degree-first coefficient vector. Elements
//! are dense coefficient vectors of length m. The same lexicographic order is
//! used whenever an element has to be chosen canonically (generators, roots).

pub(crate) mod dlog;
pub mod factor;
pub(crate) mod fp_poly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use factor::mul_mod;

pub use dlog::KthRoot;

/// Largest supported field order is below 2^64 so that group orders factor
/// with 64-bit arithmetic.
pub const MAX_ORDER_BITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldOptions {
    /// Number of irreducible candidates to skip; 0 selects the first one.
    pub seed: usize,
    /// Reject fields with p^m >= 2^max_order_bits.
    pub max_order_bits: u32,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            seed: 0,
            max_order_bits: MAX_ORDER_BITS,
        }
    }
}

/// An explicit finite field GF(p^m). Immutable once built; lazily populated
/// caches are write-once.
pub struct FieldCtx {
    p: u64,
    m: usize,
    /// monic, low-degree first, length m + 1
    modulus: Vec<u64>,
    order: u64,
    group_factors: OnceLock<std::result::Result<Vec<(u64, u32)>, String>>,
    generator: OnceLock<Vec<u64>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Builds GF(p^m) with the canonical modulus.
pub fn make_field(p: u64, m: usize) -> Result<Arc<FieldCtx>> {
    FieldCtx::build(p, m, &FieldOptions::default())
}

fn checked_order(p: u64, m: usize, cap_bits: u32) -> Result<u64> {
    let cap_bits = cap_bits.min(MAX_ORDER_BITS);
    let mut q: u128 = 1;
    for _ in 0..m {
        q *= p as u128;
        if q >= 1u128 << cap_bits {
            return Err(Error::FieldTooLarge { p, m, cap_bits });
        }
    }
    Ok(q as u64)
}

impl FieldCtx {
    pub fn build(p: u64, m: usize, opts: &FieldOptions) -> Result<Arc<FieldCtx>> {
        if !factor::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = checked_order(p, m, opts.max_order_bits)?;
        let mut skipped = 0usize;
        // constant coefficient is the most significant digit of idx, and a
        // zero constant term means x divides the candidate
        let start = if m > 1 { order / p } else { 0 };
        for idx in start..order {
            let mut coeffs = vec![0u64; m + 1];
            let mut v = idx;
            for i in (0..m).rev() {
                coeffs[i] = v % p;
                v /= p;
            }
            coeffs[m] = 1;
            if fp_poly::is_irreducible(&coeffs, p) {
                if skipped == opts.seed {
                    return Ok(Arc::new(Self::raw(p, coeffs, order)));
                }
                skipped += 1;
            }
        }
        Err(Error::InvalidArgument(format!(
            "only {skipped} irreducible polynomials of degree {m} over GF({p})"
        )))
    }

    /// Rebuilds a field from an explicit modulus, rechecking that it is
    /// monic and irreducible.
    pub fn from_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<FieldCtx>> {
        if !factor::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::ZeroDegree);
        }
        let m = modulus.len() - 1;
        if modulus[m] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus:?} is not a monic polynomial over GF({p})"
            )));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        let order = checked_order(p, m, MAX_ORDER_BITS)?;
        Ok(Arc::new(Self::raw(p, modulus, order)))
    }

    fn raw(p: u64, modulus: Vec<u64>, order: u64) -> FieldCtx {
        FieldCtx {
            p,
            m: modulus.len() - 1,
            modulus,
            order,
            group_factors: OnceLock::new(),
            generator: OnceLock::new(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Q = p^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Q - 1, the order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.order - 1
    }

    pub fn same_field(&self, other: &FieldCtx) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    /// Factorization of Q - 1, computed once.
    pub fn group_order_factors(&self) -> Result<&[(u64, u32)]> {
        let cached = self
            .group_factors
            .get_or_init(|| factor::factorize(self.group_order()).map_err(|e| e.to_string()));
        match cached {
            Ok(f) => Ok(f),
            Err(msg) => Err(Error::EffortCap(msg.clone())),
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            ctx: Arc::clone(self),
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = (n as i128).rem_euclid(self.p as i128) as u64;
        e
    }

    pub fn from_biguint(self: &Arc<Self>, n: &BigUint) -> FieldElement {
        let r = (n % self.p).to_u64().unwrap_or(0);
        let mut e = self.zero();
        e.coeffs[0] = r;
        e
    }

    /// The class of x in GF(p)[x]/(f).
    pub fn x(self: &Arc<Self>) -> FieldElement {
        let mut coeffs = vec![0u64; self.m + 1];
        coeffs[1] = 1;
        self.reduce_wide(coeffs)
    }

    /// Element from a coefficient vector (low degree first). Shorter vectors
    /// are zero-padded.
    pub fn element(self: &Arc<Self>, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.m || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "{coeffs:?} is not a coefficient vector of GF({}^{})",
                self.p, self.m
            )));
        }
        let mut e = self.zero();
        e.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(e)
    }

    /// Element at position `rank` of the canonical enumeration: coefficient
    /// vectors in lexicographic order, constant coefficient most significant.
    pub fn element_at(self: &Arc<Self>, rank: u64) -> FieldElement {
        let mut e = self.zero();
        let mut v = rank % self.order;
        for i in (0..self.m).rev() {
            e.coeffs[i] = v % self.p;
            v /= self.p;
        }
        e
    }

    fn reduce_wide(self: &Arc<Self>, mut wide: Vec<u64>) -> FieldElement {
        let p = self.p;
        let m = self.m;
        for i in (m..wide.len()).rev() {
            let c = wide[i];
            if c == 0 {
                continue;
            }
            for j in 0..m {
                let sub = mul_mod(c, self.modulus[j], p);
                wide[i - m + j] = (wide[i - m + j] + p - sub) % p;
            }
            wide[i] = 0;
        }
        wide.truncate(m);
        wide.resize(m, 0);
        FieldElement {
            ctx: Arc::clone(self),
            coeffs: wide,
        }
    }

    /// First element of order Q - 1 in the canonical enumeration.
    pub fn find_generator(self: &Arc<Self>) -> Result<FieldElement> {
        if let Some(c) = self.generator.get() {
            return Ok(FieldElement {
                ctx: Arc::clone(self),
                coeffs: c.clone(),
            });
        }
        let n = self.group_order();
        let primes: Vec<u64> = self
            .group_order_factors()?
            .iter()
            .map(|&(l, _)| l)
            .collect();
        for rank in 1..self.order {
            let a = self.element_at(rank);
            if a.is_zero() {
                continue;
            }
            if primes
                .iter()
                .all(|&l| !a.pow_u128((n / l) as u128).is_one())
            {
                let _ = self.generator.set(a.coeffs.clone());
                return Ok(a);
            }
        }
        unreachable!("a finite field always has a primitive element")
    }

    /// g^((Q-1)/d) for the canonical generator g: a primitive d-th root of unity.
    pub fn root_of_unity(self: &Arc<Self>, d: u64) -> Result<FieldElement> {
        let n = self.group_order();
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NoRootOfUnity {
                d: BigUint::from(d),
                order: BigUint::from(n),
            });
        }
        let omega = self.find_generator()?.pow_u128((n / d) as u128);
        debug_assert_eq!(omega.mult_order().ok(), Some(d));
        Ok(omega)
    }

    /// Solves y^k = c in this field, or reports the least extension degree
    /// multiplier over which a root exists.
    pub fn kth_root(self: &Arc<Self>, c: &FieldElement, k: &BigUint) -> Result<KthRoot> {
        dlog::kth_root(self, c, k)
    }
}

/// An element of a [`FieldCtx`]. Arithmetic operators panic when the
/// operands come from different fields; use [`FieldElement::check_same`] first
/// where that cannot be ruled out statically.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Position in the canonical enumeration (inverse of `element_at`).
    pub fn rank(&self) -> u64 {
        self.coeffs
            .iter()
            .fold(0u64, |acc, &c| acc * self.ctx.p + c)
    }

    pub fn check_same(&self, other: &FieldElement) -> Result<()> {
        if self.ctx.same_field(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn assert_same(&self, other: &FieldElement) {
        assert!(
            self.ctx.same_field(&other.ctx),
            "field elements from different contexts"
        );
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow_u128(self.ctx.group_order() as u128 - 1))
    }

    /// self^e for a machine-size exponent, without reduction.
    pub fn pow_u128(&self, mut e: u128) -> FieldElement {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// self^e; for a nonzero base the exponent is reduced mod Q - 1 first.
    pub fn pow(&self, e: &BigUint) -> FieldElement {
        if e.is_zero() {
            return self.ctx.one();
        }
        if self.is_zero() {
            return self.ctx.zero();
        }
        let reduced = (e % self.ctx.group_order()).to_u64().unwrap_or(0);
        self.pow_u128(reduced as u128)
    }

    pub fn pow_u64(&self, e: u64) -> FieldElement {
        self.pow(&BigUint::from(e))
    }

    /// self^e for a signed exponent; negative exponents need a nonzero base.
    pub fn pow_signed(&self, e: &BigInt) -> Result<FieldElement> {
        match e.sign() {
            Sign::Minus => Ok(self.inv()?.pow(e.magnitude())),
            _ => Ok(self.pow(e.magnitude())),
        }
    }

    /// a^(p^j). Frobenius has order m, so only j mod m matters.
    pub fn frobenius(&self, j: &BigUint) -> FieldElement {
        let steps = (j % self.ctx.m).to_usize().unwrap_or(0);
        let mut out = self.clone();
        for _ in 0..steps {
            out = out.pow_u128(self.ctx.p as u128);
        }
        out
    }

    /// Least d >= 1 with self^d = 1.
    pub fn mult_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "zero has no multiplicative order".into(),
            ));
        }
        let mut d = self.ctx.group_order();
        for &(l, _) in self.ctx.group_order_factors()? {
            while d.is_multiple_of(l) && self.pow_u128((d / l) as u128).is_one() {
                d /= l;
            }
        }
        Ok(d)
    }

    fn zip_with(&self, other: &FieldElement, f: impl Fn(u64, u64) -> u64) -> FieldElement {
        self.assert_same(other);
        FieldElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn mul_impl(&self, other: &FieldElement) -> FieldElement {
        self.assert_same(other);
        let p = self.ctx.p;
        let m = self.ctx.m;
        if m == 1 {
            return FieldElement {
                ctx: Arc::clone(&self.ctx),
                coeffs: vec![mul_mod(self.coeffs[0], other.coeffs[0], p)],
            };
        }
        let mut wide = vec![0u128; 2 * m - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                wide[i + j] += (a as u128 * b as u128) % p as u128;
            }
        }
        let wide = wide.into_iter().map(|w| (w % p as u128) as u64).collect();
        self.ctx.reduce_wide(wide)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Coefficient vector, low degree first: `[c0,c1,...]`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        let p = self.ctx.p;
        self.zip_with(rhs, |a, b| ((a as u128 + b as u128) % p as u128) as u64)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        let p = self.ctx.p;
        self.zip_with(rhs, |a, b| {
            ((a as u128 + (p - b) as u128) % p as u128) as u64
        })
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.mul_impl(rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.ctx.p;
        FieldElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
