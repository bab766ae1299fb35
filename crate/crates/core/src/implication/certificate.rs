use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use super::FactSet;
use crate::error::{Error, Result};
use crate::lincore::{format_rational, Inequality, LinearExpression, Rational};

/// Nonnegative multipliers whose combination of labelled inequalities
/// dominates a target inequality.
///
/// With every symbol a free unknown, domination means the combination
/// `Σ λᵢ·exprᵢ` has exactly the target's symbol coefficients and a scalar
/// at least as large as the target's. Then `target = Σ λᵢ·exprᵢ − δ` with
/// `δ ≥ 0`, so the target holds wherever the inputs do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub target: String,
    pub multipliers: BTreeMap<String, Rational>,
}

impl FarkasCertificate {
    pub fn new(target: impl Into<String>) -> Self {
        Self {
            target: target.into(),
            multipliers: BTreeMap::new(),
        }
    }

    pub fn with(mut self, label: impl Into<String>, multiplier: Rational) -> Self {
        self.multipliers.insert(label.into(), multiplier);
        self
    }

    /// Σ λᵢ·exprᵢ over the referenced inequalities.
    pub fn combination<'a>(
        &self,
        lookup: impl Fn(&str) -> Option<&'a Inequality>,
    ) -> Result<LinearExpression> {
        let mut combo = LinearExpression::zero();
        for (label, lambda) in &self.multipliers {
            let ineq = lookup(label).ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            combo.add_assign_scaled(ineq.expr(), lambda);
        }
        Ok(combo)
    }
}

/// Checks a certificate under exact arithmetic.
///
/// Labels are looked up in `context` first, then in `facts`; an unknown
/// label is an error rather than a rejection.
pub fn verify_certificate(
    cert: &FarkasCertificate,
    target: &Inequality,
    context: &[Inequality],
    facts: &FactSet,
) -> Result<bool> {
    let lookup = |label: &str| {
        context
            .iter()
            .find(|i| i.label() == label)
            .or_else(|| facts.get(label))
    };
    let combo = cert.combination(lookup)?;
    if cert.target != target.label() {
        return Ok(false);
    }
    if cert.multipliers.values().any(Signed::is_negative) {
        return Ok(false);
    }
    let slack = combo.minus(target.expr());
    Ok(slack.is_scalar() && !slack.scalar().is_negative())
}

/// Text form: `target <label>` followed by `<label> * <rational>` lines,
/// blank line between certificates.
pub fn format_certificates(certs: &[FarkasCertificate]) -> String {
    let mut out = String::new();
    for (k, cert) in certs.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "target {}", cert.target);
        for (label, lambda) in &cert.multipliers {
            let _ = writeln!(out, "{} * {}", label, format_rational(lambda));
        }
    }
    out
}

pub fn parse_certificates(text: &str) -> Result<Vec<FarkasCertificate>> {
    let mut certs: Vec<FarkasCertificate> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fail = |message: &str| Error::CertificateFormat {
            line,
            message: message.to_string(),
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["target", label] => certs.push(FarkasCertificate::new(*label)),
            [label, "*", value] => {
                let cert = certs.last_mut().ok_or_else(|| fail("multiplier before any `target` line"))?;
                let lambda = parse_rational(value).ok_or_else(|| fail("malformed rational"))?;
                if cert.multipliers.insert(label.to_string(), lambda).is_some() {
                    return Err(fail("label repeated within one certificate"));
                }
            }
            _ => return Err(fail("expected `target <label>` or `<label> * <rational>`")),
        }
    }
    Ok(certs)
}

fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: num_bigint::BigInt = num.parse().ok()?;
    let den: num_bigint::BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}
