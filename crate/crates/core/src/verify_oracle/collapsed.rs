//! The univariate identity obtained by putting x_i = t^(q^a_i):
//!
//! `sum_j (w^j + t)^k = (M-1) t^k + (M-1) k_1 t + (M-1) sum_{i>=2} k_i t^(q^a_i) + [M = 2]`
//!
//! when the base-q digits of k sum to exactly M.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::digits::expand_base;
use crate::error::{Error, Result};
use crate::ff_core::FieldCtx;
use crate::sparse_poly::SparsePoly;

/// Left side minus right side; the zero polynomial when the identity holds.
pub fn collapsed_identity_residual(
    ctx: &Arc<FieldCtx>,
    k: &BigUint,
    m: u64,
    n: u32,
) -> Result<SparsePoly> {
    let p = ctx.characteristic();
    let q = BigUint::from(p).pow(n);
    let exp = expand_base(k, &q)?;
    let gamma = exp.digit_sum();
    if gamma != BigUint::from(m) {
        return Err(Error::Hypothesis(format!(
            "digit sum of {k} in base {q} is {gamma}, not M = {m}"
        )));
    }
    if m < 2 || !((&q - 1u32) % (m - 1)).is_zero() {
        return Err(Error::Hypothesis(format!(
            "M - 1 = {} must divide q - 1",
            m.max(1) - 1
        )));
    }
    let first = &exp.terms()[0];
    if first.exponent != 0 {
        return Err(Error::Hypothesis("k must be relatively prime to p".into()));
    }
    let omega = ctx.root_of_unity(m - 1)?;
    let one = ctx.one();
    let m1 = ctx.from_int((m - 1) as i64);

    let mut residual = SparsePoly::zero(ctx);
    let mut w = one.clone();
    for _ in 1..m {
        w = &w * &omega;
        residual.add_scaled(&one, &SparsePoly::binomial_power(&w, k)?)?;
    }
    let neg = -&one;
    residual.add_scaled(&neg, &SparsePoly::monomial(&m1, k.clone()))?;
    let k1 = ctx.from_biguint(&first.digit);
    residual.add_scaled(&neg, &SparsePoly::monomial(&(&m1 * &k1), BigUint::one()))?;
    for t in &exp.terms()[1..] {
        let exponent = q.pow(
            t.exponent
                .to_u32()
                .ok_or_else(|| Error::EffortCap("digit position too large".into()))?,
        );
        let c = &m1 * &ctx.from_biguint(&t.digit);
        residual.add_scaled(&neg, &SparsePoly::monomial(&c, exponent))?;
    }
    if m == 2 {
        residual.add_scaled(&neg, &SparsePoly::constant(&one))?;
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_core::make_field;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn vanishes_on_examples() {
        for (p, k, m, n) in [
            (3u64, 2u64, 2u64, 1u32),
            (2, 3, 2, 1),
            (5, 13, 5, 1),
            (3, 2189, 3, 1),
            (3, 10, 2, 2),
        ] {
            let f = make_field(p, n as usize).unwrap();
            let r = collapsed_identity_residual(&f, &big(k), m, n).unwrap();
            assert!(r.is_zero(), "p={p} k={k}: {r}");
        }
    }

    #[test]
    fn rejects_wrong_digit_sum() {
        let f = make_field(3, 2).unwrap();
        assert!(matches!(
            collapsed_identity_residual(&f, &big(5), 2, 2),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn vanishes_for_other_digit_patterns() {
        // 2 + 3 = 5 has digit sum 3 in base 3: the M = 3 identity holds over GF(3)
        let f = make_field(3, 1).unwrap();
        assert!(collapsed_identity_residual(&f, &big(5), 3, 1)
            .unwrap()
            .is_zero());
        // 7 = 1 + 2*3, digit sum 3 with the larger digit on top
        assert!(collapsed_identity_residual(&f, &big(7), 3, 1)
            .unwrap()
            .is_zero());
    }
}
