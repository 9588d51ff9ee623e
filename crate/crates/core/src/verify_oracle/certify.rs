//! Re-checking a certificate from its contents alone.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::extension::QuadraticExtension;
use crate::construct::certificate::{
    linear_parts, parse_certificate, serialize, Absorption, WaringCertificate,
};
use crate::construct::params::main_bound;
use crate::digits::expand_base;
use crate::error::{Error, Result};
use crate::ff_core::FieldElement;
use crate::sparse_poly::SparsePoly;

pub const DEFAULT_TRIALS: u32 = 32;
pub const DEFAULT_SEED: u64 = 0x5741_5249_4e47;
/// Dense re-expansion runs only below this total degree.
pub const DENSE_DEGREE_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed(String),
    Skipped(String),
}

impl CheckStatus {
    fn from_bool(ok: bool, why: impl Into<String>) -> Self {
        if ok {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed(why.into())
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self, CheckStatus::Failed(_))
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Passed => f.write_str("pass"),
            CheckStatus::Failed(why) => write!(f, "FAIL ({why})"),
            CheckStatus::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub symbolic: bool,
    pub dense: CheckStatus,
    pub trials: u32,
    pub trial_passes: u32,
    pub extension_trials: u32,
    pub extension_passes: u32,
    pub hypotheses: CheckStatus,
    pub bound_respected: bool,
    pub divisibility: bool,
    pub normalized: CheckStatus,
    /// Only known when verifying from text.
    pub reserialized: Option<bool>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.symbolic
            && !self.dense.failed()
            && self.trial_passes == self.trials
            && self.extension_passes == self.extension_trials
            && !self.hypotheses.failed()
            && self.bound_respected
            && self.divisibility
            && !self.normalized.failed()
            && self.reserialized != Some(false)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pf = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(f, "symbolic identity: {}", pf(self.symbolic))?;
        writeln!(f, "dense re-expansion: {}", self.dense)?;
        writeln!(
            f,
            "random points in field: {}/{}",
            self.trial_passes, self.trials
        )?;
        writeln!(
            f,
            "random points in quadratic extension: {}/{}",
            self.extension_passes, self.extension_trials
        )?;
        writeln!(f, "parameter hypotheses: {}", self.hypotheses)?;
        writeln!(f, "term count within bound: {}", pf(self.bound_respected))?;
        writeln!(f, "k divides k': {}", pf(self.divisibility))?;
        writeln!(f, "normalized form: {}", self.normalized)?;
        match self.reserialized {
            Some(b) => writeln!(f, "byte-identical re-serialization: {}", pf(b))?,
            None => writeln!(
                f,
                "byte-identical re-serialization: skipped (no source text)"
            )?,
        }
        write!(f, "overall: {}", pf(self.passed()))
    }
}

/// (alpha, beta) for every term, with their scalars.
fn linear_terms(
    cert: &WaringCertificate,
) -> Result<Vec<(FieldElement, FieldElement, FieldElement)>> {
    let field = &cert.params.field;
    cert.terms
        .iter()
        .map(|t| {
            if !t.scalar.ctx().same_field(field) || !t.base.ctx().same_field(field) {
                return Err(Error::ContextMismatch);
            }
            let (a, b) = linear_parts(&t.base)?;
            Ok((t.scalar.clone(), a, b))
        })
        .collect()
}

fn symbolic_sum(
    field: &std::sync::Arc<crate::ff_core::FieldCtx>,
    terms: &[(FieldElement, FieldElement, FieldElement)],
    e: &BigUint,
) -> Result<SparsePoly> {
    let mut acc = SparsePoly::zero(field);
    for (s, a, b) in terms {
        acc.add_scaled(s, &SparsePoly::linear_power(a, b, e)?)?;
    }
    Ok(acc)
}

/// Coefficients of (a + b t)^e by e successive multiplications.
fn dense_power(a: &FieldElement, b: &FieldElement, e: usize) -> Vec<FieldElement> {
    let ctx = a.ctx();
    let mut acc = vec![ctx.one()];
    for _ in 0..e {
        let mut next = vec![ctx.zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[i] = &next[i] + &(c * a);
            next[i + 1] = &next[i + 1] + &(c * b);
        }
        acc = next;
    }
    acc
}

fn dense_check(
    cert: &WaringCertificate,
    terms: &[(FieldElement, FieldElement, FieldElement)],
) -> CheckStatus {
    let total = BigUint::from(terms.len()) * &cert.params.kprime;
    let small = total.to_u64().filter(|&d| d < DENSE_DEGREE_LIMIT);
    let Some(_) = small else {
        return CheckStatus::Skipped(format!(
            "total degree {} * {} is not below {DENSE_DEGREE_LIMIT}",
            terms.len(),
            cert.params.kprime
        ));
    };
    let e = cert.params.kprime.to_usize().expect("checked above");
    let ctx = &cert.params.field;
    let mut sum = vec![ctx.zero(); e.max(1) + 1];
    for (s, a, b) in terms {
        for (i, c) in dense_power(a, b, e).into_iter().enumerate() {
            sum[i] = &sum[i] + &(s * &c);
        }
    }
    let mut expected = vec![ctx.zero(); sum.len()];
    expected[0] = cert.c0.clone();
    expected[1] = &expected[1] + &cert.c1;
    CheckStatus::from_bool(sum == expected, "dense sum differs from c1 t + c0")
}

fn random_element(
    field: &std::sync::Arc<crate::ff_core::FieldCtx>,
    rng: &mut ChaCha8Rng,
) -> FieldElement {
    field.element_at(rng.gen_range(0..field.order()))
}

fn hypotheses(cert: &WaringCertificate) -> (CheckStatus, bool) {
    let p = &cert.params;
    let pb = BigUint::from(p.p);
    let q = pb.pow(p.n);
    let gamma = match expand_base(&p.kprime, &q) {
        Ok(e) => e.digit_sum(),
        Err(e) => return (CheckStatus::Failed(e.to_string()), false),
    };
    let field_ok = p.field.characteristic() == p.p && p.field.degree() as u64 == p.n as u64 * p.u;
    let mut problems = Vec::new();
    if !p.k.gcd(&pb).is_one() {
        problems.push("k shares a factor with p".to_string());
    }
    if gamma != BigUint::from(p.gamma) {
        problems.push(format!("recorded digit sum {} but k' has {gamma}", p.gamma));
    }
    if p.m < 2 || BigUint::from(p.m) < gamma {
        problems.push("digit sum exceeds M".into());
    }
    if p.m < 2 || !((&q - 1u32) % (p.m - 1)).is_zero() {
        problems.push("M - 1 does not divide p^n - 1".into());
    }
    if !field_ok {
        problems.push("field is not GF(p^(n u))".into());
    }
    let bound_ok = p.m >= 2
        && gamma
            .to_u64()
            .is_some_and(|g| g <= p.m && cert.terms.len() as u64 <= main_bound(g, p.m));
    let status = if problems.is_empty() {
        CheckStatus::Passed
    } else {
        CheckStatus::Failed(problems.join("; "))
    };
    (status, bound_ok)
}

fn normalized_check(cert: &WaringCertificate) -> Result<CheckStatus> {
    let Some(nf) = &cert.normalized else {
        return Ok(CheckStatus::Skipped("no normalized form".into()));
    };
    let p = &cert.params;
    let field = &p.field;
    if &nf.inner * &p.k != p.kprime {
        return Ok(CheckStatus::Failed(
            "inner exponent times k is not k'".into(),
        ));
    }
    let q = field.order();
    let mut acc = SparsePoly::zero(field);
    for t in &nf.terms {
        let (a, b) = linear_parts(&t.base)?;
        match t.absorption {
            Absorption::Kept => {}
            Absorption::Absorbed => {
                if !t.scalar.is_one() {
                    return Ok(CheckStatus::Failed("absorbed term keeps a scalar".into()));
                }
            }
            Absorption::NeedsExtension(e) => {
                if let Some(why) = extension_claim_problem(&t.scalar, &p.k, q, e)? {
                    return Ok(CheckStatus::Failed(why));
                }
            }
        }
        let weight = &t.scalar * &t.multiplier.pow(&p.k);
        acc.add_scaled(&weight, &SparsePoly::linear_power(&a, &b, &p.kprime)?)?;
    }
    Ok(CheckStatus::from_bool(
        acc == SparsePoly::t(field),
        "sum of normalized k-th powers is not t",
    ))
}

/// Whether an element of order `ord` is a k-th power in GF(q^e).
fn is_kth_power_in(ord: &BigUint, k: &BigUint, q: u64, e: u64) -> bool {
    let qe = BigUint::from(q).pow(e as u32) - 1u32;
    let g = k.gcd(&qe);
    ((qe / g) % ord).is_zero()
}

/// Checks that `c` has no k-th root in GF(q) or in any GF(q^d) with d < e,
/// but has one in GF(q^e).
fn extension_claim_problem(
    c: &FieldElement,
    k: &BigUint,
    q: u64,
    e: u64,
) -> Result<Option<String>> {
    if c.is_zero() || e < 2 {
        return Ok(Some(format!(
            "extension degree {e} claimed for a trivial case"
        )));
    }
    let ord = BigUint::from(c.mult_order()?);
    if !is_kth_power_in(&ord, k, q, e) {
        return Ok(Some(format!("no k-th root in the degree-{e} extension")));
    }
    if (1..e).any(|d| is_kth_power_in(&ord, k, q, d)) {
        return Ok(Some(format!("a k-th root already exists below degree {e}")));
    }
    Ok(None)
}

/// Every check that needs only the certificate itself.
pub fn verify_certificate(
    cert: &WaringCertificate,
    trials: u32,
    seed: u64,
) -> Result<VerificationReport> {
    let params = &cert.params;
    let field = &params.field;
    if !cert.c1.ctx().same_field(field) || !cert.c0.ctx().same_field(field) {
        return Err(Error::ContextMismatch);
    }
    if cert.c1.is_zero() {
        return Err(Error::Malformed("coefficient of t is zero".into()));
    }
    let terms = linear_terms(cert)?;
    let k = &params.kprime;

    let target = SparsePoly::linear(&cert.c0, &cert.c1)?;
    let symbolic = symbolic_sum(field, &terms, k)? == target;
    let dense = dense_check(cert, &terms);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trial_passes = 0;
    for _ in 0..trials {
        let x = random_element(field, &mut rng);
        let lhs = terms.iter().fold(field.zero(), |acc, (s, a, b)| {
            &acc + &(s * &(a + &(b * &x)).pow(k))
        });
        if lhs == &(&cert.c1 * &x) + &cert.c0 {
            trial_passes += 1;
        }
    }

    let ext = QuadraticExtension::new(field)?;
    let mut extension_passes = 0;
    for _ in 0..trials {
        let z = ext.element(
            random_element(field, &mut rng),
            random_element(field, &mut rng),
        );
        let mut lhs = ext.embed(&field.zero());
        for (s, a, b) in &terms {
            let y = ext.add(&ext.embed(a), &ext.mul(&ext.embed(b), &z));
            lhs = ext.add(&lhs, &ext.mul(&ext.embed(s), &ext.pow(&y, k)));
        }
        let rhs = ext.add(&ext.mul(&ext.embed(&cert.c1), &z), &ext.embed(&cert.c0));
        if lhs == rhs {
            extension_passes += 1;
        }
    }

    let (hyp, bound_respected) = hypotheses(cert);
    let divisibility = !params.k.is_zero() && (k % &params.k).is_zero();
    let normalized = normalized_check(cert)?;
    Ok(VerificationReport {
        symbolic,
        dense,
        trials,
        trial_passes,
        extension_trials: trials,
        extension_passes,
        hypotheses: hyp,
        bound_respected,
        divisibility,
        normalized,
        reserialized: None,
    })
}

/// Parses, verifies and checks that the text is the canonical serialization.
pub fn verify_text(text: &str, trials: u32, seed: u64) -> Result<VerificationReport> {
    let cert = parse_certificate(text)?;
    let mut report = verify_certificate(&cert, trials, seed)?;
    report.reserialized = Some(serialize(&cert) == text);
    Ok(report)
}
