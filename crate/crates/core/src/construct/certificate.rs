//! Assembling the power-sum identity and its canonical text form.
//!
//! With y ranging over the bases below, the certificate asserts
//! `sum_i c_i y_i(t)^k' = c1 t + c0` exactly. The two families of bases,
//! (w^j + lambda t) and (w^j + t), carry the same intermediate-degree terms
//! up to the factor lambda^q, so weighting the second family by -lambda^q
//! leaves only t^k', t and a constant. An extra base t removes t^k'.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use super::params::{ConstructionParams, Route};
use crate::digits::expand_base;
use crate::error::{Error, Result};
use crate::ff_core::{FieldCtx, FieldElement, KthRoot};
use crate::sparse_poly::{parse_element, SparsePoly};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerTerm {
    pub scalar: FieldElement,
    /// a linear polynomial alpha + beta t
    pub base: SparsePoly,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absorption {
    /// scalar left in front of the power
    Kept,
    /// scalar replaced by a k-th root folded into the multiplier
    Absorbed,
    /// no k-th root in this field; one exists in the extension of this degree
    NeedsExtension(u64),
}

/// `scalar * (multiplier * base^inner)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedTerm {
    pub scalar: FieldElement,
    pub multiplier: FieldElement,
    pub base: SparsePoly,
    pub absorption: Absorption,
}

/// t = sum_i scalar_i (multiplier_i base_i^inner)^k, with inner = k'/k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedForm {
    pub inner: BigUint,
    pub terms: Vec<NormalizedTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaringCertificate {
    pub params: ConstructionParams,
    pub terms: Vec<PowerTerm>,
    pub c1: FieldElement,
    pub c0: FieldElement,
    pub normalized: Option<NormalizedForm>,
}

impl WaringCertificate {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Splits a polynomial of degree at most one into (alpha, beta).
pub fn linear_parts(f: &SparsePoly) -> Result<(FieldElement, FieldElement)> {
    if f.degree().is_some_and(|d| d > &BigUint::from(1u32)) {
        return Err(Error::Malformed(format!("base {f} is not linear")));
    }
    Ok((f.coeff(&BigUint::zero()), f.coeff(&BigUint::from(1u32))))
}

pub fn build_certificate(
    params: &ConstructionParams,
    absorb_scalars: bool,
) -> Result<WaringCertificate> {
    params.check()?;
    let f = &params.field;
    let one = f.one();
    let m1 = params.m - 1;
    let lambda = &params.lambda;
    let lambda_q = lambda.frobenius(&BigUint::from(params.n));
    let neg_lambda_q = -&lambda_q;
    let r_extra = params.m - params.gamma;

    let mut terms = Vec::with_capacity(2 * m1 as usize + 1);
    let mut w = one.clone();
    for j in 1..=m1 {
        w = &w * &params.omega;
        let weight = w.pow_u64(r_extra);
        terms.push(PowerTerm {
            scalar: weight.clone(),
            base: SparsePoly::linear(&w, lambda)?,
            note: format!("scaled j={j}"),
        });
        terms.push(PowerTerm {
            scalar: &neg_lambda_q * &weight,
            base: SparsePoly::linear(&w, &one)?,
            note: format!("plain j={j}"),
        });
    }
    if r_extra == 0 {
        let top = &f.from_int(m1 as i64) * &(&lambda.pow(&params.kprime) - &lambda_q);
        terms.push(PowerTerm {
            scalar: -&top,
            base: SparsePoly::t(f),
            note: "top-degree".into(),
        });
    }

    let k1 = &params.expansion.terms()[0].digit;
    let c1 = &(&f.from_int(m1 as i64) * &f.from_biguint(k1)) * &(lambda - &lambda_q);
    let c0 = if params.m == 2 {
        &one - &lambda_q
    } else {
        f.zero()
    };
    if c1.is_zero() {
        return Err(Error::Invariant("coefficient of t vanished".into()));
    }
    if terms.len() as u64 != params.bound() {
        return Err(Error::Invariant(format!(
            "emitted {} terms, expected {}",
            terms.len(),
            params.bound()
        )));
    }
    let normalized = normalize(params, &terms, &c1, &c0, absorb_scalars)?;
    Ok(WaringCertificate {
        params: params.clone(),
        terms,
        c1,
        c0,
        normalized: Some(normalized),
    })
}

/// Substitutes t -> (t - c0)/c1 into every base and records k'/k, turning
/// `sum c y^k' = c1 t + c0` into a representation of t by k-th powers.
pub fn normalize(
    params: &ConstructionParams,
    terms: &[PowerTerm],
    c1: &FieldElement,
    c0: &FieldElement,
    absorb_scalars: bool,
) -> Result<NormalizedForm> {
    let (inner, rem) = params.kprime.div_rem(&params.k);
    if !rem.is_zero() {
        return Err(Error::Invariant("k does not divide k'".into()));
    }
    let f = &params.field;
    let c1_inv = c1.inv()?;
    let shift = c0 * &c1_inv;
    let mut out = Vec::with_capacity(terms.len());
    for term in terms {
        let (alpha, beta) = linear_parts(&term.base)?;
        let base = SparsePoly::linear(&(&alpha - &(&beta * &shift)), &(&beta * &c1_inv))?;
        let (scalar, multiplier, absorption) = if absorb_scalars && !term.scalar.is_zero() {
            match f.kth_root(&term.scalar, &params.k)? {
                KthRoot::Root(rho) => (f.one(), rho, Absorption::Absorbed),
                KthRoot::NeedsExtension { multiplier } => (
                    term.scalar.clone(),
                    f.one(),
                    Absorption::NeedsExtension(multiplier),
                ),
            }
        } else {
            (term.scalar.clone(), f.one(), Absorption::Kept)
        };
        out.push(NormalizedTerm {
            scalar,
            multiplier,
            base,
            absorption,
        });
    }
    Ok(NormalizedForm { inner, terms: out })
}

fn field_line(f: &FieldCtx) -> String {
    let coeffs: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
    format!(
        "field p {} degree {} modulus {}",
        f.characteristic(),
        f.degree(),
        coeffs.join(" ")
    )
}

/// Canonical text form; equal certificates serialize to identical bytes.
pub fn serialize(cert: &WaringCertificate) -> String {
    let p = &cert.params;
    let mut s = String::new();
    let _ = writeln!(s, "waring-certificate format {FORMAT_VERSION}");
    let _ = writeln!(s, "p {}", p.p);
    let _ = writeln!(s, "k {}", p.k);
    let _ = writeln!(s, "kprime {}", p.kprime);
    let _ = writeln!(s, "route {}", p.route);
    let _ = writeln!(s, "n {}", p.n);
    let _ = writeln!(s, "M {}", p.m);
    let _ = writeln!(s, "u {}", p.u);
    let _ = writeln!(s, "r {}", p.r);
    let _ = writeln!(s, "gamma {}", p.gamma);
    let _ = writeln!(s, "bound {}", p.bound());
    let _ = writeln!(s, "{}", field_line(&p.field));
    let _ = writeln!(s, "lambda {}", p.lambda);
    let _ = writeln!(s, "omega {}", p.omega);
    let _ = writeln!(s, "affine c1 {} c0 {}", cert.c1, cert.c0);
    let _ = writeln!(s, "terms {}", cert.terms.len());
    for t in &cert.terms {
        let _ = writeln!(
            s,
            "term scalar {} base {} note {}",
            t.scalar, t.base, t.note
        );
    }
    if let Some(nf) = &cert.normalized {
        let _ = writeln!(s, "normalized inner {} terms {}", nf.inner, nf.terms.len());
        for t in &nf.terms {
            let status = match t.absorption {
                Absorption::Kept => "kept".to_string(),
                Absorption::Absorbed => "absorbed".to_string(),
                Absorption::NeedsExtension(e) => format!("extension {e}"),
            };
            let _ = writeln!(
                s,
                "nterm scalar {} multiplier {} base {} status {}",
                t.scalar, t.multiplier, t.base, status
            );
        }
    }
    s.push_str("end\n");
    s
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<&'a str> {
        self.inner
            .next()
            .ok_or_else(|| Error::Malformed("unexpected end of certificate".into()))
    }

    /// The remainder of the next line after `key `.
    fn field(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next_line()?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| Error::Malformed(format!("expected `{key}`, found {line:?}")))
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let raw = self.field(key)?;
        raw.parse()
            .map_err(|_| Error::Malformed(format!("bad value for {key}: {raw:?}")))
    }
}

fn split_once<'a>(text: &'a str, sep: &str) -> Result<(&'a str, &'a str)> {
    text.split_once(sep)
        .ok_or_else(|| Error::Malformed(format!("missing `{}` in {text:?}", sep.trim())))
}

fn strip<'a>(text: &'a str, prefix: &str) -> Result<&'a str> {
    text.strip_prefix(prefix)
        .ok_or_else(|| Error::Malformed(format!("expected `{}` in {text:?}", prefix.trim())))
}

/// Reads the text form back. Structural checks only; the mathematical
/// content is left to the verifier.
pub fn parse_certificate(text: &str) -> Result<WaringCertificate> {
    let mut lines = Lines {
        inner: text.lines().peekable(),
    };
    let version: u32 = lines.number("waring-certificate format")?;
    if version != FORMAT_VERSION {
        return Err(Error::Malformed(format!(
            "unsupported format version {version}"
        )));
    }
    let p: u64 = lines.number("p")?;
    let k: BigUint = lines.number("k")?;
    let kprime: BigUint = lines.number("kprime")?;
    let route = Route::parse(lines.field("route")?)?;
    let n: u32 = lines.number("n")?;
    let m: u64 = lines.number("M")?;
    let u: u64 = lines.number("u")?;
    let r: u64 = lines.number("r")?;
    let gamma: u64 = lines.number("gamma")?;
    let claimed_bound: u64 = lines.number("bound")?;

    let field_text = lines.field("field")?;
    let rest = strip(field_text, "p ")?;
    let (fp, rest) = split_once(rest, " degree ")?;
    let (deg, coeffs) = split_once(rest, " modulus ")?;
    let fp: u64 = fp
        .parse()
        .map_err(|_| Error::Malformed(format!("bad field characteristic {fp:?}")))?;
    let deg: usize = deg
        .parse()
        .map_err(|_| Error::Malformed(format!("bad field degree {deg:?}")))?;
    let modulus = coeffs
        .split(' ')
        .map(|c| {
            c.parse::<u64>()
                .map_err(|_| Error::Malformed(format!("bad modulus coefficient {c:?}")))
        })
        .collect::<Result<Vec<u64>>>()?;
    if fp != p || modulus.len() != deg + 1 {
        return Err(Error::Malformed("field block disagrees with header".into()));
    }
    let field: Arc<FieldCtx> =
        FieldCtx::from_modulus(p, modulus).map_err(|e| Error::Malformed(e.to_string()))?;

    let lambda = parse_element(&field, lines.field("lambda")?)?;
    let omega = parse_element(&field, lines.field("omega")?)?;
    let affine = strip(lines.field("affine")?, "c1 ")?;
    let (c1, c0) = split_once(affine, " c0 ")?;
    let c1 = parse_element(&field, c1)?;
    let c0 = parse_element(&field, c0)?;

    let count: usize = lines.number("terms")?;
    let mut terms = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let body = strip(lines.field("term")?, "scalar ")?;
        let (scalar, rest) = split_once(body, " base ")?;
        let (base, note) = split_once(rest, " note ")?;
        terms.push(PowerTerm {
            scalar: parse_element(&field, scalar)?,
            base: SparsePoly::parse(&field, base)?,
            note: note.to_string(),
        });
    }

    let mut normalized = None;
    if lines
        .inner
        .peek()
        .is_some_and(|l| l.starts_with("normalized "))
    {
        let head = lines.field("normalized")?;
        let (inner, count) = split_once(strip(head, "inner ")?, " terms ")?;
        let inner: BigUint = inner
            .parse()
            .map_err(|_| Error::Malformed(format!("bad inner exponent {inner:?}")))?;
        let count: usize = count
            .parse()
            .map_err(|_| Error::Malformed(format!("bad term count {count:?}")))?;
        let mut nterms = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let body = strip(lines.field("nterm")?, "scalar ")?;
            let (scalar, rest) = split_once(body, " multiplier ")?;
            let (multiplier, rest) = split_once(rest, " base ")?;
            let (base, status) = split_once(rest, " status ")?;
            let absorption = match status {
                "kept" => Absorption::Kept,
                "absorbed" => Absorption::Absorbed,
                other => {
                    let e = strip(other, "extension ")?;
                    Absorption::NeedsExtension(
                        e.parse()
                            .map_err(|_| Error::Malformed(format!("bad extension degree {e:?}")))?,
                    )
                }
            };
            nterms.push(NormalizedTerm {
                scalar: parse_element(&field, scalar)?,
                multiplier: parse_element(&field, multiplier)?,
                base: SparsePoly::parse(&field, base)?,
                absorption,
            });
        }
        normalized = Some(NormalizedForm {
            inner,
            terms: nterms,
        });
    }
    if lines.next_line()? != "end" {
        return Err(Error::Malformed("missing end marker".into()));
    }
    if lines.inner.next().is_some() {
        return Err(Error::Malformed("trailing content after end marker".into()));
    }

    if m < 2 || n == 0 {
        return Err(Error::Malformed(
            "M must be at least 2 and n positive".into(),
        ));
    }
    let q = BigUint::from(p).pow(n);
    let expansion = expand_base(&kprime, &q)?;
    let params = ConstructionParams {
        p,
        k,
        route,
        n,
        m,
        u,
        r,
        gamma,
        expansion,
        kprime,
        field,
        lambda,
        omega,
    };
    if params.bound() != claimed_bound {
        return Err(Error::Malformed(format!(
            "header bound {claimed_bound} disagrees with 2(M-1) + [gamma = M] = {}",
            params.bound()
        )));
    }
    Ok(WaringCertificate {
        params,
        terms,
        c1,
        c0,
        normalized,
    })
}
