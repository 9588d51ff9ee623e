//! Univariate polynomials over a [`FieldCtx`] with arbitrary-precision
//! exponents.
//!
//! There is deliberately no general multiplication. Every polynomial the
//! constructions need is a linear combination of powers `(a + b t)^k`, and
//! those expand through the base-p digits of `k` with `prod(k_i + 1)` terms,
//! however large `k` itself is.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::digits;
use crate::error::{Error, Result};
use crate::ff_core::{FieldCtx, FieldElement};

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    ctx: Arc<FieldCtx>,
    /// exponent -> nonzero coefficient, ascending
    terms: BTreeMap<BigUint, FieldElement>,
}

impl SparsePoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        SparsePoly {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: &FieldElement, d: BigUint) -> Self {
        let mut f = Self::zero(c.ctx());
        if !c.is_zero() {
            f.terms.insert(d, c.clone());
        }
        f
    }

    pub fn constant(c: &FieldElement) -> Self {
        Self::monomial(c, BigUint::zero())
    }

    /// The indeterminate t.
    pub fn t(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(&ctx.one(), BigUint::from(1u32))
    }

    /// c0 + c1 t.
    pub fn linear(c0: &FieldElement, c1: &FieldElement) -> Result<Self> {
        c0.check_same(c1)?;
        let mut f = Self::constant(c0);
        f.add_scaled(&c0.ctx().one(), &Self::monomial(c1, BigUint::from(1u32)))?;
        Ok(f)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &FieldElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.keys().next_back()
    }

    pub fn coeff(&self, d: &BigUint) -> FieldElement {
        self.terms
            .get(d)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    fn check_ctx(&self, other: &SparsePoly) -> Result<()> {
        if self.ctx.same_field(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// (a + t)^k through the base-p digits of k.
    pub fn binomial_power(a: &FieldElement, k: &BigUint) -> Result<Self> {
        let ctx = a.ctx();
        if a.is_zero() {
            return Ok(Self::monomial(&ctx.one(), k.clone()));
        }
        let mut terms = BTreeMap::new();
        for (d, binom) in digits::dominated(k, ctx.characteristic())? {
            let coeff = &ctx.from_int(binom as i64) * &a.pow(&(k - &d));
            terms.insert(d, coeff);
        }
        Ok(SparsePoly {
            ctx: Arc::clone(ctx),
            terms,
        })
    }

    /// (alpha + beta t)^k.
    pub fn linear_power(alpha: &FieldElement, beta: &FieldElement, k: &BigUint) -> Result<Self> {
        alpha.check_same(beta)?;
        if beta.is_zero() {
            return Ok(Self::constant(&alpha.pow(k)));
        }
        Self::binomial_power(alpha, k)?.scale_argument(beta)
    }

    /// self += c * other.
    pub fn add_scaled(&mut self, c: &FieldElement, other: &SparsePoly) -> Result<()> {
        self.check_ctx(other)?;
        if !c.ctx().same_field(&self.ctx) {
            return Err(Error::ContextMismatch);
        }
        if c.is_zero() {
            return Ok(());
        }
        for (d, v) in &other.terms {
            let add = c * v;
            match self.terms.get_mut(d) {
                Some(existing) => {
                    let sum = &*existing + &add;
                    if sum.is_zero() {
                        self.terms.remove(d);
                    } else {
                        *existing = sum;
                    }
                }
                None => {
                    self.terms.insert(d.clone(), add);
                }
            }
        }
        Ok(())
    }

    /// sum_i c_i * f_i with zero coefficients pruned.
    pub fn combine<'a>(
        ctx: &Arc<FieldCtx>,
        ops: impl IntoIterator<Item = (&'a FieldElement, &'a SparsePoly)>,
    ) -> Result<Self> {
        let mut acc = Self::zero(ctx);
        for (c, f) in ops {
            acc.add_scaled(c, f)?;
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(&-&self.ctx.one(), other)?;
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Self> {
        Self::combine(&self.ctx, [(c, self)])
    }

    /// f(lambda t): the coefficient of t^d picks up lambda^d.
    pub fn scale_argument(&self, lambda: &FieldElement) -> Result<Self> {
        if !lambda.ctx().same_field(&self.ctx) {
            return Err(Error::ContextMismatch);
        }
        if lambda.is_zero() {
            return Err(Error::InvalidArgument(
                "argument scaling by zero collapses the polynomial".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| (d.clone(), c * &lambda.pow(d)))
            .collect();
        Ok(SparsePoly {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    pub fn eval_at(&self, alpha: &FieldElement) -> Result<FieldElement> {
        if !alpha.ctx().same_field(&self.ctx) {
            return Err(Error::ContextMismatch);
        }
        if alpha.is_zero() {
            return Ok(self.coeff(&BigUint::zero()));
        }
        Ok(self
            .terms
            .iter()
            .fold(self.ctx.zero(), |acc, (d, c)| &acc + &(c * &alpha.pow(d))))
    }

    /// Parses the canonical text form produced by `Display`.
    pub fn parse(ctx: &Arc<FieldCtx>, text: &str) -> Result<Self> {
        let text = text.trim();
        let mut f = Self::zero(ctx);
        if text == "0" {
            return Ok(f);
        }
        let mut last: Option<BigUint> = None;
        for part in text.split(" + ") {
            let (coeff, power) = part
                .split_once("*t^")
                .ok_or_else(|| Error::Malformed(format!("bad polynomial term {part:?}")))?;
            let c = parse_element(ctx, coeff)?;
            let d: BigUint = power
                .parse()
                .map_err(|_| Error::Malformed(format!("bad exponent {power:?}")))?;
            if c.is_zero() {
                return Err(Error::Malformed(format!("zero coefficient at t^{d}")));
            }
            if last.as_ref().is_some_and(|l| l >= &d) {
                return Err(Error::Malformed("exponents must ascend strictly".into()));
            }
            last = Some(d.clone());
            f.terms.insert(d, c);
        }
        Ok(f)
    }
}

/// Parses `[c0,c1,...]` into an element of `ctx`.
pub fn parse_element(ctx: &Arc<FieldCtx>, text: &str) -> Result<FieldElement> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Malformed(format!("bad field element {text:?}")))?;
    let coeffs = inner
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| Error::Malformed(format!("bad coefficient {c:?}")))
        })
        .collect::<Result<Vec<u64>>>()?;
    if coeffs.len() != ctx.degree() {
        return Err(Error::Malformed(format!(
            "element {text} has {} coefficients, field degree is {}",
            coeffs.len(),
            ctx.degree()
        )));
    }
    ctx.element(&coeffs)
        .map_err(|e| Error::Malformed(e.to_string()))
}

/// `c_d*t^d + ...` in ascending d; the zero polynomial is `0`.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*t^{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_core::make_field;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// (a + t)^k by k repeated multiplications on a dense coefficient vector.
    fn dense_power(a: &FieldElement, k: usize) -> Vec<FieldElement> {
        let ctx = a.ctx();
        let mut acc = vec![ctx.one()];
        for _ in 0..k {
            let mut next = vec![ctx.zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i] = &next[i] + &(c * a);
                next[i + 1] = &next[i + 1] + c;
            }
            acc = next;
        }
        acc
    }

    fn from_dense(ctx: &Arc<FieldCtx>, dense: &[FieldElement]) -> SparsePoly {
        let mut f = SparsePoly::zero(ctx);
        for (i, c) in dense.iter().enumerate() {
            f.add_scaled(&ctx.one(), &SparsePoly::monomial(c, big(i as u64)))
                .unwrap();
        }
        f
    }

    #[test]
    fn binomial_power_examples() {
        let f3 = make_field(3, 1).unwrap();
        let one = f3.one();
        assert_eq!(
            SparsePoly::binomial_power(&f3.zero(), &big(17)).unwrap(),
            SparsePoly::monomial(&one, big(17))
        );
        let sq = SparsePoly::binomial_power(&one, &big(2)).unwrap();
        assert_eq!(sq.to_string(), "[1]*t^0 + [2]*t^1 + [1]*t^2");

        let f = SparsePoly::binomial_power(&one, &big(2189)).unwrap();
        let got: Vec<(BigUint, u64)> = f.terms().map(|(d, c)| (d.clone(), c.coeffs()[0])).collect();
        let e = 3u64.pow(7);
        let expected = vec![
            (big(0), 1),
            (big(1), 2),
            (big(2), 1),
            (big(e), 1),
            (big(e + 1), 2),
            (big(e + 2), 1),
        ];
        assert_eq!(got, expected);
        // (1+t)^2 * (1+t^2187) densely
        let square = dense_power(&one, 2);
        let mut prod = vec![f3.zero(); 2190];
        for (i, c) in square.iter().enumerate() {
            prod[i] = &prod[i] + c;
            prod[i + 2187] = &prod[i + 2187] + c;
        }
        assert_eq!(f, from_dense(&f3, &prod));
    }

    #[test]
    fn combine_examples() {
        let f3 = make_field(3, 1).unwrap();
        let one = f3.one();
        let f = SparsePoly::binomial_power(&one, &big(2)).unwrap();
        assert!(f.sub(&f).unwrap().is_zero());
        let g = SparsePoly::parse(&f3, "[1]*t^1 + [1]*t^2").unwrap();
        let both = SparsePoly::combine(&f3, [(&one, &f), (&f3.zero(), &g)]).unwrap();
        assert_eq!(both, f);
        assert_eq!(f.sub(&g).unwrap().to_string(), "[1]*t^0 + [1]*t^1");
        let other = make_field(5, 1).unwrap();
        assert!(matches!(
            f.sub(&SparsePoly::t(&other)),
            Err(Error::ContextMismatch)
        ));
    }

    #[test]
    fn scale_argument_examples() {
        let f3 = make_field(3, 1).unwrap();
        let t2 = SparsePoly::monomial(&f3.one(), big(2));
        assert_eq!(t2.scale_argument(&f3.one()).unwrap(), t2);
        assert_eq!(t2.scale_argument(&f3.from_int(2)).unwrap(), t2);
        assert!(t2.scale_argument(&f3.zero()).is_err());

        let f9 = make_field(3, 2).unwrap();
        let g = f9.find_generator().unwrap();
        let big_mono = SparsePoly::monomial(&f9.one(), big(2187));
        assert_eq!(
            big_mono.scale_argument(&g).unwrap(),
            SparsePoly::monomial(&g.pow_u64(3), big(2187))
        );
    }

    #[test]
    fn eval_examples() {
        let f3 = make_field(3, 1).unwrap();
        let t = SparsePoly::t(&f3);
        let a = f3.from_int(2);
        assert_eq!(t.eval_at(&a).unwrap(), a);
        let f = SparsePoly::parse(&f3, "[2]*t^0 + [1]*t^5").unwrap();
        assert_eq!(f.eval_at(&f3.zero()).unwrap(), f3.from_int(2));
        let g = SparsePoly::parse(&f3, "[1]*t^0 + [1]*t^1").unwrap();
        assert!(g.eval_at(&a).unwrap().is_zero());
    }

    #[test]
    fn parse_rejects_noncanonical_text() {
        let f3 = make_field(3, 1).unwrap();
        assert!(SparsePoly::parse(&f3, "[1]*t^2 + [1]*t^1").is_err());
        assert!(SparsePoly::parse(&f3, "[0]*t^2").is_err());
        assert!(SparsePoly::parse(&f3, "[1,0]*t^2").is_err());
        assert!(SparsePoly::parse(&f3, "[3]*t^2").is_err());
        assert!(SparsePoly::parse(&f3, "0").unwrap().is_zero());
    }

    fn small_fields() -> Vec<Arc<FieldCtx>> {
        [
            (2u64, 1usize),
            (2, 3),
            (3, 1),
            (3, 2),
            (5, 1),
            (5, 2),
            (7, 1),
        ]
        .iter()
        .map(|&(p, m)| make_field(p, m).unwrap())
        .collect()
    }

    proptest! {
        #[test]
        fn lucas_expansion_matches_dense(idx in 0usize..7, rank in 0u64..49, k in 0usize..=500) {
            let f = &small_fields()[idx];
            let a = f.element_at(rank);
            let sparse = SparsePoly::binomial_power(&a, &big(k as u64)).unwrap();
            prop_assert_eq!(&sparse, &from_dense(f, &dense_power(&a, k)));
            if !a.is_zero() {
                let expected = digits::dominated(&big(k as u64), f.characteristic()).unwrap().term_count();
                prop_assert_eq!(big(sparse.len() as u64), expected);
            }
        }

        #[test]
        fn eval_respects_sums_and_powers(idx in 0usize..7, a in 0u64..49, b in 0u64..49, x in 0u64..49, k in 0u64..100_000) {
            let f = &small_fields()[idx];
            let (a, b, x) = (f.element_at(a), f.element_at(b), f.element_at(x));
            let k = big(k);
            let pa = SparsePoly::binomial_power(&a, &k).unwrap();
            let pb = SparsePoly::binomial_power(&b, &k).unwrap();
            prop_assert_eq!(pa.eval_at(&x).unwrap(), (&a + &x).pow(&k));
            let sum = SparsePoly::combine(f, [(&f.one(), &pa), (&f.one(), &pb)]).unwrap();
            prop_assert_eq!(sum.eval_at(&x).unwrap(), &pa.eval_at(&x).unwrap() + &pb.eval_at(&x).unwrap());
        }

        #[test]
        fn scale_argument_inverts(idx in 0usize..7, a in 0u64..49, lam in 1u64..49, k in 0u64..5000) {
            let f = &small_fields()[idx];
            let lam = f.element_at(lam);
            prop_assume!(!lam.is_zero());
            let poly = SparsePoly::binomial_power(&f.element_at(a), &big(k)).unwrap();
            let back = poly.scale_argument(&lam).unwrap().scale_argument(&lam.inv().unwrap()).unwrap();
            prop_assert_eq!(back, poly);
        }

        #[test]
        fn text_form_roundtrips(idx in 0usize..7, a in 0u64..49, k in 0u64..100_000) {
            let f = &small_fields()[idx];
            let poly = SparsePoly::binomial_power(&f.element_at(a), &big(k)).unwrap();
            prop_assert_eq!(SparsePoly::parse(f, &poly.to_string()).unwrap(), poly);
        }
    }
}
