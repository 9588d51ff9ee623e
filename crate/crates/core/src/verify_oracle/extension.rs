//! GF(Q^2) as GF(Q)[z]/(z^2 + a z + b), for evaluating identities at points
//! outside the field they were built over.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ff_core::{FieldCtx, FieldElement};

/// Candidates (a, b) tried when looking for an irreducible quadratic.
const SEARCH_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct QuadraticExtension {
    base: Arc<FieldCtx>,
    /// z^2 = -a z - b
    a: FieldElement,
    b: FieldElement,
    /// Q^2 - 1
    group_order: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElement {
    /// c0 + c1 z
    pub c0: FieldElement,
    pub c1: FieldElement,
}

impl QuadraticExtension {
    /// The first z^2 + a z + b, in order of (rank a, rank b), with no root in
    /// the base field.
    pub fn new(base: &Arc<FieldCtx>) -> Result<Self> {
        let q = base.order();
        let mut tried = 0u64;
        for ra in 0..q {
            for rb in 1..q {
                tried += 1;
                if tried > SEARCH_LIMIT {
                    return Err(Error::EffortCap("no irreducible quadratic found".into()));
                }
                let ext = QuadraticExtension {
                    base: Arc::clone(base),
                    a: base.element_at(ra),
                    b: base.element_at(rb),
                    group_order: BigUint::from(q).pow(2) - 1u32,
                };
                if ext.is_field() {
                    return Ok(ext);
                }
            }
        }
        Err(Error::EffortCap("no irreducible quadratic found".into()))
    }

    /// z^2 + a z + b is irreducible over GF(Q) iff gcd(z^Q - z, f) = 1.
    fn is_field(&self) -> bool {
        let z = self.element(self.base.zero(), self.base.one());
        let zq = self.pow(&z, &BigUint::from(self.base.order()));
        // h = z^Q - z = h0 + h1 z
        let h = self.sub(&zq, &z);
        if h.c1.is_zero() {
            return !h.c0.is_zero();
        }
        // the one root of h, -h0/h1, must not be a root of f
        let root = -&(&h.c0 * &h.c1.inv().expect("nonzero"));
        let value = &(&(&root * &root) + &(&self.a * &root)) + &self.b;
        !value.is_zero()
    }

    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    /// The minimal polynomial z^2 + a z + b as (a, b).
    pub fn modulus(&self) -> (&FieldElement, &FieldElement) {
        (&self.a, &self.b)
    }

    pub fn element(&self, c0: FieldElement, c1: FieldElement) -> QuadElement {
        QuadElement { c0, c1 }
    }

    pub fn embed(&self, c: &FieldElement) -> QuadElement {
        QuadElement {
            c0: c.clone(),
            c1: self.base.zero(),
        }
    }

    pub fn add(&self, x: &QuadElement, y: &QuadElement) -> QuadElement {
        QuadElement {
            c0: &x.c0 + &y.c0,
            c1: &x.c1 + &y.c1,
        }
    }

    pub fn sub(&self, x: &QuadElement, y: &QuadElement) -> QuadElement {
        QuadElement {
            c0: &x.c0 - &y.c0,
            c1: &x.c1 - &y.c1,
        }
    }

    pub fn mul(&self, x: &QuadElement, y: &QuadElement) -> QuadElement {
        let hi = &x.c1 * &y.c1;
        QuadElement {
            c0: &(&x.c0 * &y.c0) - &(&self.b * &hi),
            c1: &(&(&x.c0 * &y.c1) + &(&x.c1 * &y.c0)) - &(&self.a * &hi),
        }
    }

    pub fn is_zero(&self, x: &QuadElement) -> bool {
        x.c0.is_zero() && x.c1.is_zero()
    }

    /// x^e with e reduced mod Q^2 - 1 for nonzero x.
    pub fn pow(&self, x: &QuadElement, e: &BigUint) -> QuadElement {
        if self.is_zero(x) {
            return if e.is_zero() {
                self.embed(&self.base.one())
            } else {
                x.clone()
            };
        }
        let e = e % &self.group_order;
        let mut acc = self.embed(&self.base.one());
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_core::make_field;

    #[test]
    fn builds_fields_with_quadratic_group_order() {
        for (p, m) in [(2u64, 1usize), (3, 1), (3, 2), (5, 1), (2, 4), (7, 2)] {
            let f = make_field(p, m).unwrap();
            let ext = QuadraticExtension::new(&f).unwrap();
            let n = BigUint::from(f.order()).pow(2) - 1u32;
            // every element satisfies x^(Q^2-1) = 1, and z is not in the base
            for (r0, r1) in [(0u64, 1u64), (1, 1), (f.order() - 1, 2 % f.order())] {
                let x = ext.element(f.element_at(r0), f.element_at(r1));
                if ext.is_zero(&x) {
                    continue;
                }
                let y = ext.pow(&x, &n);
                assert_eq!(y, ext.embed(&f.one()), "p={p} m={m}");
            }
            let z = ext.element(f.zero(), f.one());
            assert_ne!(ext.pow(&z, &BigUint::from(f.order())), z);
        }
    }

    #[test]
    fn gf3_extension_is_minus_one_adjoined() {
        // z^2 + 1: a = 0, b = 1 is the first rootless quadratic over GF(3)
        let f = make_field(3, 1).unwrap();
        let ext = QuadraticExtension::new(&f).unwrap();
        let (a, b) = ext.modulus();
        assert!(a.is_zero());
        assert!(b.is_one());
    }
}
