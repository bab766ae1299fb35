//! Fourier-Motzkin elimination.
//!
//! Eliminating `x` splits the system into upper bounds (positive coefficient
//! on `x`), lower bounds (negative) and free inequalities. Every
//! (lower, upper) pair is scaled so the coefficients of `x` become `∓lcm`
//! and added; the sums plus the free inequalities describe exactly the
//! projection of the original region.

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::implication::{prune, FactSet, FarkasCertificate};
use crate::lincore::{Inequality, InequalitySystem, Rational};

/// One (lower, upper) pair and the inequality it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    pub lower: String,
    pub upper: String,
    pub lower_multiplier: Rational,
    pub upper_multiplier: Rational,
    /// Canonical form of `lower_multiplier·lower + upper_multiplier·upper`.
    pub result: Inequality,
}

/// Everything [`eliminate`] did for one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationLog {
    pub eliminated_var: String,
    pub upper_bounds: Vec<Inequality>,
    pub lower_bounds: Vec<Inequality>,
    pub free: Vec<Inequality>,
    pub combinations: Vec<Combination>,
}

impl EliminationLog {
    /// Recompute a combination row from the logged bounds.
    pub fn rederive(&self, row: &Combination) -> Option<Inequality> {
        let lower = self.lower_bounds.iter().find(|i| i.label() == row.lower)?;
        let upper = self.upper_bounds.iter().find(|i| i.label() == row.upper)?;
        let mut sum = lower.expr().scaled(&row.lower_multiplier);
        sum.add_assign_scaled(upper.expr(), &row.upper_multiplier);
        Some(Inequality::canonical(row.result.label(), sum))
    }

    /// Checks every logged combination: positive multipliers, exact
    /// cancellation of the eliminated variable, and a reproducible result.
    pub fn verify(&self) -> bool {
        if self.combinations.len() != self.upper_bounds.len() * self.lower_bounds.len() {
            return false;
        }
        self.combinations.iter().all(|row| {
            let Some(lower) = self.lower_bounds.iter().find(|i| i.label() == row.lower) else {
                return false;
            };
            let Some(upper) = self.upper_bounds.iter().find(|i| i.label() == row.upper) else {
                return false;
            };
            let x = &self.eliminated_var;
            row.lower_multiplier.is_positive()
                && row.upper_multiplier.is_positive()
                && (&row.lower_multiplier * lower.expr().variable_coeff(x)
                    + &row.upper_multiplier * upper.expr().variable_coeff(x))
                    .is_zero()
                && self.rederive(row).is_some_and(|r| r.expr() == row.result.expr())
        })
    }

    /// Human-readable trace.
    pub fn render(&self, system: &InequalitySystem) -> String {
        let table = Some(system.table());
        let mut out = String::new();
        let _ = writeln!(
            out,
            "eliminate {}: {} upper, {} lower, {} free",
            self.eliminated_var,
            self.upper_bounds.len(),
            self.lower_bounds.len(),
            self.free.len()
        );
        for (title, group) in [
            ("upper", &self.upper_bounds),
            ("lower", &self.lower_bounds),
            ("free", &self.free),
        ] {
            for i in group {
                let _ = writeln!(out, "  {title:<5} {}: {}", i.label(), i.render(table));
            }
        }
        for c in &self.combinations {
            let _ = writeln!(
                out,
                "  combine {}*{} + {}*{} => {}",
                c.lower_multiplier,
                c.lower,
                c.upper_multiplier,
                c.upper,
                c.result.render(table)
            );
        }
        out
    }
}

/// Label given to the inequality produced from a (lower, upper) pair.
pub fn combination_label(lower: &str, upper: &str) -> String {
    format!("{lower}⊕{upper}")
}

/// Eliminate `var`, returning the projected system and the log.
///
/// Fails if `var` is not a declared variable, or if a combination is a
/// contradiction (the input region is empty).
pub fn eliminate(system: &InequalitySystem, var: &str) -> Result<(InequalitySystem, EliminationLog)> {
    if !system.table().is_variable(var) {
        return Err(Error::UnknownVariable(var.to_string()));
    }
    let mut log = EliminationLog {
        eliminated_var: var.to_string(),
        upper_bounds: Vec::new(),
        lower_bounds: Vec::new(),
        free: Vec::new(),
        combinations: Vec::new(),
    };
    for ineq in system.iter() {
        let c = ineq.expr().variable_coeff(var);
        if c.is_positive() {
            log.upper_bounds.push(ineq.clone());
        } else if c.is_negative() {
            log.lower_bounds.push(ineq.clone());
        } else {
            log.free.push(ineq.clone());
        }
    }

    let mut out = InequalitySystem::new(system.table().without_variable(var));
    for ineq in &log.free {
        out.insert(ineq.clone())?;
    }
    for lower in &log.lower_bounds {
        let a_low = lower.expr().variable_coeff(var).abs();
        for upper in &log.upper_bounds {
            let a_up = upper.expr().variable_coeff(var);
            let lcm = lcm_rational(&a_low, &a_up);
            let lower_multiplier = &lcm / &a_low;
            let upper_multiplier = &lcm / &a_up;
            let mut sum = lower.expr().scaled(&lower_multiplier);
            sum.add_assign_scaled(upper.expr(), &upper_multiplier);
            let result = Inequality::canonical(combination_label(lower.label(), upper.label()), sum);
            out.insert(result.clone())?;
            log.combinations.push(Combination {
                lower: lower.label().to_string(),
                upper: upper.label().to_string(),
                lower_multiplier,
                upper_multiplier,
                result,
            });
        }
    }
    Ok((out, log))
}

/// Least common multiple of two positive rationals `p/q`, `r/s`: lcm(p,r)/gcd(q,s).
fn lcm_rational(a: &Rational, b: &Rational) -> Rational {
    Rational::new(a.numer().lcm(b.numer()), a.denom().gcd(b.denom()))
}

/// When [`project`] calls the pruner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrunePolicy {
    #[default]
    Never,
    /// After every elimination (so also once at the end).
    AfterEach,
}

/// Result of [`project`].
#[derive(Clone, Debug)]
pub struct Projection {
    pub system: InequalitySystem,
    pub logs: Vec<EliminationLog>,
    pub certificates: Vec<FarkasCertificate>,
}

/// Eliminate `vars` in the given order, pruning with `facts` according to `policy`.
pub fn project(
    system: &InequalitySystem,
    vars: &[&str],
    facts: &FactSet,
    policy: PrunePolicy,
) -> Result<Projection> {
    for (k, v) in vars.iter().enumerate() {
        if !system.table().is_variable(v) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
        if vars[..k].contains(v) {
            return Err(Error::RepeatedVariable(v.to_string()));
        }
    }
    let mut current = system.clone();
    let mut logs = Vec::new();
    let mut certificates = Vec::new();
    for v in vars {
        let (next, log) = eliminate(&current, v)?;
        logs.push(log);
        current = next;
        if policy == PrunePolicy::AfterEach {
            let (pruned, certs) = prune(&current, facts)?;
            current = pruned;
            certificates.extend(certs);
        }
    }
    Ok(Projection {
        system: current,
        logs,
        certificates,
    })
}
