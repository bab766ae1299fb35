//! Implication testing, Farkas certificates, redundancy pruning and
//! equivalence of inequality systems.
//!
//! An inequality is implied when the LP maximum of its left-hand side over
//! the context and the fact set is nonpositive. Redundancy is always judged
//! relative to the facts: a rank identity may be what makes a bound
//! unnecessary.

mod certificate;
mod lp;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

pub use certificate::{format_certificates, parse_certificates, verify_certificate, FarkasCertificate};
pub use lp::{lp_max, LpOutcome, LpStatus};

use crate::error::{Error, Result};
use crate::lincore::{Inequality, InequalitySystem, LinearExpression, Rational};

/// Inequalities over symbolic constants only, assumed valid throughout a
/// derivation. Equalities are stored as two opposite inequalities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactSet {
    facts: Vec<Inequality>,
}

impl FactSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_inequalities(facts: Vec<Inequality>) -> Result<Self> {
        for f in &facts {
            if let Some(var) = f.expr().variable_terms().keys().next() {
                return Err(Error::FactMentionsVariable {
                    label: f.label().to_string(),
                    var: var.clone(),
                });
            }
        }
        Ok(Self { facts })
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Inequality> {
        self.facts.iter()
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&Inequality> {
        self.facts.iter().find(|f| f.label() == label)
    }

    /// Facts whose label is `label` or one of its `/le`, `/ge` halves.
    pub fn by_identity(&self, label: &str) -> Vec<&Inequality> {
        self.facts
            .iter()
            .filter(|f| {
                f.label() == label
                    || f.label().strip_prefix(label).is_some_and(|rest| rest == "/le" || rest == "/ge")
            })
            .collect()
    }

    pub fn merged(&self, other: &FactSet) -> FactSet {
        let mut facts = self.facts.clone();
        for f in &other.facts {
            if !facts.iter().any(|g| g.label() == f.label()) {
                facts.push(f.clone());
            }
        }
        FactSet { facts }
    }
}

/// Answer to "does the context, together with the facts, imply the target?"
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Implication {
    Implied(FarkasCertificate),
    /// The context and facts admit no point at all.
    Vacuous,
    /// `witness` satisfies the context and facts but violates the target.
    NotImplied { witness: BTreeMap<String, Rational> },
}

impl Implication {
    /// True for both genuine and vacuous implication.
    pub fn holds(&self) -> bool {
        !matches!(self, Implication::NotImplied { .. })
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match self {
            Implication::Implied(c) => Some(c),
            _ => None,
        }
    }
}

pub fn is_implied(target: &Inequality, context: &[Inequality], facts: &FactSet) -> Implication {
    let constraints: Vec<&Inequality> = context.iter().chain(facts.iter()).collect();
    match lp_max(target.expr(), constraints.iter().copied()) {
        LpOutcome::Infeasible => Implication::Vacuous,
        LpOutcome::Optimal { value, point, duals } => {
            if value.is_positive() {
                return Implication::NotImplied { witness: point };
            }
            let mut cert = FarkasCertificate::new(target.label());
            for (ineq, y) in constraints.iter().zip(duals) {
                if !y.is_zero() {
                    *cert
                        .multipliers
                        .entry(ineq.label().to_string())
                        .or_insert_with(Rational::zero) += y;
                }
            }
            Implication::Implied(cert)
        }
        LpOutcome::Unbounded { point, ray } => {
            // Walk far enough along the ray to violate the target.
            let at_point = target.expr().evaluate(&point).expect("point covers all unknowns");
            let mut direction = target.expr().clone();
            direction.add_scalar(&-direction.scalar().clone());
            let slope = direction.evaluate(&ray).expect("ray covers all unknowns");
            let steps = if at_point.is_positive() {
                Rational::zero()
            } else {
                -at_point / slope + Rational::one()
            };
            let witness = point
                .iter()
                .map(|(k, v)| (k.clone(), v + &steps * &ray[k]))
                .collect();
            Implication::NotImplied { witness }
        }
    }
}

/// True when the inequalities and facts admit at least one point.
pub fn is_feasible(context: &[Inequality], facts: &FactSet) -> bool {
    let constraints = context.iter().chain(facts.iter());
    lp_max(&LinearExpression::zero(), constraints).status() != LpStatus::Infeasible
}

/// Removes every inequality implied by the rest of the system and the facts.
///
/// Candidates are visited in canonical order. Conceptually the scan restarts
/// after each removal; since removing an inequality can only make the others
/// harder to imply, members already kept stay kept and a single pass gives
/// the same result. Returns the surviving system (original order) and one
/// certificate per removal, each in terms of the input system's labels.
pub fn prune(system: &InequalitySystem, facts: &FactSet) -> Result<(InequalitySystem, Vec<FarkasCertificate>)> {
    if !is_feasible(system.inequalities(), facts) {
        return Err(Error::Infeasible);
    }
    let mut removed: Vec<String> = Vec::new();
    let mut certs = Vec::new();
    for candidate in system.canonical_order() {
        let context: Vec<Inequality> = system
            .iter()
            .filter(|i| i.label() != candidate.label() && !removed.iter().any(|r| r == i.label()))
            .cloned()
            .collect();
        match is_implied(candidate, &context, facts) {
            Implication::Implied(cert) => {
                removed.push(candidate.label().to_string());
                certs.push(cert);
            }
            Implication::Vacuous => return Err(Error::Infeasible),
            Implication::NotImplied { .. } => {}
        }
    }
    let kept = system.filtered(|i| !removed.iter().any(|r| r == i.label()));
    Ok((kept, certs))
}

/// Mutual implication under the facts.
pub fn systems_equivalent(a: &InequalitySystem, b: &InequalitySystem, facts: &FactSet) -> Result<bool> {
    if !a.table().same_symbols(b.table()) {
        return Err(Error::TableMismatch);
    }
    let covers = |from: &InequalitySystem, to: &InequalitySystem| {
        to.iter()
            .all(|t| is_implied(t, from.inequalities(), facts).holds())
    };
    Ok(covers(b, a) && covers(a, b))
}
