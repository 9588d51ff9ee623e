//! Choosing (M, n, u) and the auxiliary multiple of k.
//!
//! For each n in the window the search tries three multiples of k, all read
//! in base q = p^n: k itself, the base-power pump of k that carries its base-p
//! digits over to base p^n, and p^s + 1 when k divides it. Each candidate
//! gets the least admissible M and is scored by 2(M-1) + [gamma = M].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::pump::{pump_exponents_base_power, pump_exponents_uniform};
use crate::digits::{expand_base, order_mod, BaseExpansion};
use crate::error::{Error, Result};
use crate::ff_core::{factor, FieldCtx, FieldElement, FieldOptions, MAX_ORDER_BITS};

pub const DEFAULT_MAX_N: u32 = 8;
pub const DEFAULT_MAX_U: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    /// k read directly in base p^n
    Direct,
    /// base-p digits of k moved onto multiples of n
    BasePower,
    /// the multiple p^s + 1 with s least
    NegativeUnit,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::BasePower => "base-power",
            Route::NegativeUnit => "negative-unit",
        }
    }

    pub fn parse(s: &str) -> Result<Route> {
        match s {
            "direct" => Ok(Route::Direct),
            "base-power" => Ok(Route::BasePower),
            "negative-unit" => Ok(Route::NegativeUnit),
            _ => Err(Error::Malformed(format!("unknown route {s:?}"))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchWindow {
    pub max_n: u32,
    /// largest pumping modulus considered
    pub max_u: u64,
    pub max_order_bits: u32,
    pub force_n: Option<u32>,
    pub force_m: Option<u64>,
}

impl Default for SearchWindow {
    fn default() -> Self {
        SearchWindow {
            max_n: DEFAULT_MAX_N,
            max_u: DEFAULT_MAX_U,
            max_order_bits: MAX_ORDER_BITS,
            force_n: None,
            force_m: None,
        }
    }
}

/// One admissible (multiple, n, M) before any field is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub route: Route,
    pub n: u32,
    /// the multiple of k in base p^n, before uniform-residue pumping
    pub multiple: BaseExpansion,
    pub gamma: u64,
    pub m: u64,
    pub bound: u64,
    /// order of p^n mod k
    pub r: u64,
    /// least u > 1 coprime to r within the window
    pub u: Option<u64>,
}

impl Candidate {
    pub fn field_degree(&self) -> Option<u64> {
        self.u.map(|u| u * self.n as u64)
    }

    /// Field order p^(n u) when it is below 2^bits.
    fn field_order(&self, p: u64, bits: u32) -> Option<u64> {
        let deg = self.field_degree()?;
        let mut q: u128 = 1;
        for _ in 0..deg {
            q *= p as u128;
            if q >= 1u128 << bits.min(MAX_ORDER_BITS) {
                return None;
            }
        }
        Some(q as u64)
    }
}

/// The full parameter tuple a certificate is built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub p: u64,
    pub k: BigUint,
    pub route: Route,
    pub n: u32,
    pub m: u64,
    pub u: u64,
    pub r: u64,
    pub gamma: u64,
    /// k' in base q = p^n, every exponent after the first = 1 mod u
    pub expansion: BaseExpansion,
    pub kprime: BigUint,
    /// GF(p^(n u))
    pub field: Arc<FieldCtx>,
    pub lambda: FieldElement,
    pub omega: FieldElement,
}

/// 2(M-1) + [gamma = M].
pub fn main_bound(gamma: u64, m: u64) -> u64 {
    2 * (m - 1) + u64::from(gamma == m)
}

/// How far above max(gamma, 2) the search for M goes.
pub const M_SEARCH_SPAN: u64 = 1 << 20;

/// Least M >= max(gamma, 2) with (M-1) | q-1, if any.
pub fn least_m(gamma: u64, q: &BigUint) -> Option<u64> {
    let q1 = q - 1u32;
    let start = gamma.max(2);
    if BigUint::from(start) > *q {
        return None;
    }
    let end = start.saturating_add(M_SEARCH_SPAN);
    if let Some(q1) = q1.to_u64() {
        let factors = factor::factorize(q1).ok()?;
        return factor::divisors(&factors)
            .into_iter()
            .find(|&d| d >= start - 1)
            .map(|d| d + 1)
            .filter(|&m| m <= end);
    }
    (start..=end).find(|&m| (&q1 % (m - 1)).is_zero())
}

/// Least s >= 1 with p^s = -1 mod k.
pub fn negative_unit_exponent(p: u64, k: &BigUint) -> Result<Option<u64>> {
    let r = order_mod(&BigUint::from(p), k)?
        .to_u64()
        .ok_or_else(|| Error::EffortCap("order does not fit 64 bits".into()))?;
    let target = k - 1u32;
    let pb = BigUint::from(p) % k;
    let mut x = pb.clone();
    for s in 1..=r {
        if x == target {
            return Ok(Some(s));
        }
        x = (&x * &pb) % k;
    }
    Ok(None)
}

fn least_coprime_above_one(r: u64, max_u: u64) -> Option<u64> {
    (2..=max_u).find(|u| u.gcd(&r) == 1)
}

fn check_inputs(p: u64, k: &BigUint) -> Result<()> {
    if !factor::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < &BigUint::from(2u32) {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be at least 2"
        )));
    }
    if !k.gcd(&BigUint::from(p)).is_one() {
        return Err(Error::Hypothesis("k must be relatively prime to p".into()));
    }
    Ok(())
}

/// Every admissible (route, n, M) in the window, before field feasibility.
pub fn candidates(p: u64, k: &BigUint, window: &SearchWindow) -> Result<Vec<Candidate>> {
    check_inputs(p, k)?;
    let pb = BigUint::from(p);
    let r_p = order_mod(&pb, k)?
        .to_u64()
        .ok_or_else(|| Error::EffortCap("order does not fit 64 bits".into()))?;
    let base_p = expand_base(k, &pb)?;
    let mut multiples = vec![(Route::Direct, base_p.clone())];
    if let Some(s) = negative_unit_exponent(p, k)? {
        let value = pb.pow(s as u32) + 1u32;
        multiples.push((Route::NegativeUnit, expand_base(&value, &pb)?));
    }

    let ns: Vec<u32> = match window.force_n {
        Some(n) => vec![n],
        None => (1..=window.max_n).collect(),
    };
    let mut out = Vec::new();
    for n in ns {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let q = pb.pow(n);
        let r = order_mod(&q, k)?
            .to_u64()
            .ok_or_else(|| Error::EffortCap("order does not fit 64 bits".into()))?;
        let u = least_coprime_above_one(r, window.max_u);
        let mut forms: Vec<(Route, BaseExpansion)> = Vec::new();
        for (route, exp) in &multiples {
            forms.push((*route, exp.regroup(n as u64)));
            if *route == Route::Direct && n > 1 && (n as u64).gcd(&r_p) == 1 {
                let pumped = pump_exponents_base_power(exp, r_p, n as u64)?;
                forms.push((Route::BasePower, pumped.regroup(n as u64)));
            }
        }
        for (route, multiple) in forms {
            let Some(gamma) = multiple.digit_sum().to_u64() else {
                continue;
            };
            let m = match window.force_m {
                Some(m) => {
                    let ok = m >= gamma.max(2) && ((&q - 1u32) % (m - 1)).is_zero();
                    if !ok {
                        continue;
                    }
                    m
                }
                None => match least_m(gamma, &q) {
                    Some(m) => m,
                    None => continue,
                },
            };
            out.push(Candidate {
                route,
                n,
                multiple,
                gamma,
                m,
                bound: main_bound(gamma, m),
                r,
                u,
            });
        }
    }
    Ok(out)
}

/// The candidate with the least bound, ignoring field size.
pub fn best_candidate(p: u64, k: &BigUint, window: &SearchWindow) -> Result<Option<Candidate>> {
    Ok(candidates(p, k, window)?
        .into_iter()
        .min_by_key(|c| (c.bound, c.n, c.route)))
}

/// Selects and instantiates the construction parameters for (p, k).
pub fn find_params(p: u64, k: &BigUint, window: &SearchWindow) -> Result<ConstructionParams> {
    let all = candidates(p, k, window)?;
    if all.is_empty() {
        return Err(Error::Hypothesis(format!(
            "no n <= {} and M with gamma_(p^n)(k) <= M and M-1 | p^n-1",
            window.force_n.unwrap_or(window.max_n)
        )));
    }
    let chosen = all
        .iter()
        .filter_map(|c| c.field_order(p, window.max_order_bits).map(|q| (c, q)))
        .min_by_key(|(c, q)| (c.bound, *q, c.n, c.route))
        .map(|(c, _)| c.clone());
    let Some(chosen) = chosen else {
        let c = &all[0];
        return Err(match c.field_degree() {
            Some(deg) => Error::FieldTooLarge {
                p,
                m: deg as usize,
                cap_bits: window.max_order_bits,
            },
            None => Error::EffortCap(format!(
                "no pumping modulus u <= {} coprime to r = {}",
                window.max_u, c.r
            )),
        });
    };
    instantiate(p, k, &chosen, window)
}

/// Builds the field, generator and root of unity for a candidate and pumps
/// its exponents to 1 mod u.
pub fn instantiate(
    p: u64,
    k: &BigUint,
    c: &Candidate,
    window: &SearchWindow,
) -> Result<ConstructionParams> {
    let u = c.u.ok_or_else(|| {
        Error::EffortCap(format!(
            "no pumping modulus u <= {} coprime to r = {}",
            window.max_u, c.r
        ))
    })?;
    let expansion = pump_exponents_uniform(&c.multiple, c.r, u)?;
    let opts = FieldOptions {
        max_order_bits: window.max_order_bits,
        ..FieldOptions::default()
    };
    let field = FieldCtx::build(p, (c.n as u64 * u) as usize, &opts)?;
    let lambda = field.find_generator()?;
    let omega = field.root_of_unity(c.m - 1)?;
    let params = ConstructionParams {
        p,
        k: k.clone(),
        route: c.route,
        n: c.n,
        m: c.m,
        u,
        r: c.r,
        gamma: c.gamma,
        kprime: expansion.value(),
        expansion,
        field,
        lambda,
        omega,
    };
    params.check()?;
    Ok(params)
}

impl ConstructionParams {
    pub fn q(&self) -> BigUint {
        BigUint::from(self.p).pow(self.n)
    }

    pub fn bound(&self) -> u64 {
        main_bound(self.gamma, self.m)
    }

    /// Field-independent and field-dependent invariants the construction
    /// relies on.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let q = self.q();
        let pb = BigUint::from(self.p);
        if !self.k.gcd(&pb).is_one() {
            return fail("k shares a factor with p".into());
        }
        if self.expansion.base() != &q {
            return fail("expansion is not in base p^n".into());
        }
        if self.expansion.value() != self.kprime {
            return fail("expansion does not represent k'".into());
        }
        if !(&self.kprime % &self.k).is_zero() {
            return fail("k does not divide k'".into());
        }
        if self.expansion.digit_sum() != BigUint::from(self.gamma) {
            return fail("recorded gamma differs from the digit sum of k'".into());
        }
        if self.m < 2 || self.gamma > self.m {
            return fail(format!(
                "need 2 <= M and gamma <= M, got M = {}, gamma = {}",
                self.m, self.gamma
            ));
        }
        if !((&q - 1u32) % (self.m - 1)).is_zero() {
            return fail("M - 1 does not divide p^n - 1".into());
        }
        if self.u < 2 || self.u.gcd(&self.r) != 1 {
            return fail(format!(
                "u = {} must exceed 1 and be coprime to r = {}",
                self.u, self.r
            ));
        }
        let terms = self.expansion.terms();
        if terms.first().map(|t| t.exponent) != Some(0) {
            return fail("k' has no nonzero constant digit".into());
        }
        if terms.iter().skip(1).any(|t| t.exponent % self.u != 1) {
            return fail("an exponent after the first is not 1 mod u".into());
        }
        if self.field.characteristic() != self.p
            || self.field.degree() as u64 != self.n as u64 * self.u
        {
            return fail("field is not GF(p^(n u))".into());
        }
        if !self.lambda.ctx().same_field(&self.field) || !self.omega.ctx().same_field(&self.field) {
            return Err(Error::ContextMismatch);
        }
        if self.lambda.mult_order()? != self.field.group_order() {
            return fail("lambda is not a generator".into());
        }
        if self.omega.mult_order()? != self.m - 1 {
            return fail("omega is not a primitive (M-1)-th root of unity".into());
        }
        if self.lambda == self.lambda.frobenius(&BigUint::from(self.n)) {
            return fail("lambda equals lambda^q".into());
        }
        if (self.m - 1).is_multiple_of(self.p) {
            return fail("M - 1 vanishes in the field".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn direct(p: u64, k: u64, n: u32) -> Candidate {
        candidates(p, &big(k), &SearchWindow::default())
            .unwrap()
            .into_iter()
            .find(|c| c.route == Route::Direct && c.n == n)
            .unwrap()
    }

    #[test]
    fn p3_k11_uses_base_three() {
        let params = find_params(3, &big(11), &SearchWindow::default()).unwrap();
        assert_eq!((params.n, params.m, params.u, params.gamma), (1, 3, 2, 3));
        assert_eq!(params.bound(), 5);
        assert_eq!(params.kprime, big(2189));
        assert_eq!(params.field.order(), 9);
    }

    #[test]
    fn p5_k13_direct_route_gives_nine() {
        let c = direct(5, 13, 1);
        assert_eq!((c.gamma, c.m, c.bound), (5, 5, 9));
        assert!(c.bound < 11);
        // 13 | 5^2 + 1 gives the better three-term route
        let params = find_params(5, &big(13), &SearchWindow::default()).unwrap();
        assert_eq!(params.route, Route::NegativeUnit);
        assert_eq!(params.bound(), 3);
    }

    #[test]
    fn negative_unit_examples() {
        let params = find_params(2, &big(3), &SearchWindow::default()).unwrap();
        assert_eq!((params.m, params.n, params.bound()), (2, 1, 3));
        assert_eq!(negative_unit_exponent(3, &big(5)).unwrap(), Some(2));
        assert_eq!(negative_unit_exponent(3, &big(11)).unwrap(), None);
        let params = find_params(3, &big(5), &SearchWindow::default()).unwrap();
        assert_eq!(params.bound(), 3);
        assert_eq!(params.m, 2);
    }

    #[test]
    fn forcing_window_values() {
        let window = SearchWindow {
            force_n: Some(2),
            ..SearchWindow::default()
        };
        let params = find_params(3, &big(5), &window).unwrap();
        assert_eq!(params.n, 2);
        assert_eq!(params.bound(), 3);
        let window = SearchWindow {
            force_n: Some(1),
            force_m: Some(3),
            ..SearchWindow::default()
        };
        let params = find_params(3, &big(11), &window).unwrap();
        assert_eq!(params.m, 3);
        let window = SearchWindow {
            force_m: Some(4),
            force_n: Some(1),
            ..SearchWindow::default()
        };
        assert!(matches!(
            find_params(3, &big(11), &window),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            find_params(3, &big(6), &SearchWindow::default()),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            find_params(4, &big(5), &SearchWindow::default()),
            Err(Error::NotPrime(4))
        ));
        assert!(find_params(3, &big(1), &SearchWindow::default()).is_err());
    }

    #[test]
    fn least_m_examples() {
        assert_eq!(least_m(3, &big(3)), Some(3));
        assert_eq!(least_m(2, &big(2)), Some(2));
        assert_eq!(least_m(3, &big(2)), None);
        assert_eq!(least_m(5, &big(32)), Some(32));
        assert_eq!(least_m(5, &big(16)), Some(6));
    }

    #[test]
    fn all_small_params_pass_their_checks() {
        for p in [2u64, 3, 5, 7] {
            for k in 2u64..=40 {
                if k % p == 0 {
                    continue;
                }
                let params = find_params(p, &big(k), &SearchWindow::default())
                    .unwrap_or_else(|e| panic!("p={p} k={k}: {e}"));
                params.check().unwrap();
                assert!(params.bound() < 2 * params.m);
            }
        }
    }
}
