use std::fmt;

use num_traits::{Signed, Zero};

use super::expr::write_sum;
use super::{integral_scale, LinearExpression, Rational, SymbolTable};

/// Whether an inequality constrains anything at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    Proper,
    /// `c ≤ 0` with `c ≤ 0`: always true.
    Tautology,
    /// `c ≤ 0` with `c > 0`: never true.
    Contradiction,
}

/// `expr ≤ 0`, tagged with a provenance label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    expr: LinearExpression,
    label: String,
}

impl Inequality {
    /// Stores `expr ≤ 0` as given; see [`Inequality::canonical`] for the normalized form.
    pub fn new(label: impl Into<String>, expr: LinearExpression) -> Self {
        Self {
            expr,
            label: label.into(),
        }
    }

    /// `lhs ≤ rhs`, canonicalized.
    pub fn le(label: impl Into<String>, lhs: &LinearExpression, rhs: &LinearExpression) -> Self {
        Self::new(label, lhs.minus(rhs)).canonicalize()
    }

    /// `expr ≤ 0`, canonicalized.
    pub fn canonical(label: impl Into<String>, expr: LinearExpression) -> Self {
        Self::new(label, expr).canonicalize()
    }

    pub fn expr(&self) -> &LinearExpression {
        &self.expr
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        Self {
            expr: self.expr.clone(),
            label: label.into(),
        }
    }

    /// Scale by a positive factor so that all coefficients (scalar included)
    /// are coprime integers. Idempotent; the direction of the inequality is
    /// never changed.
    pub fn canonicalize(&self) -> Self {
        let e = &self.expr;
        let factor = integral_scale(
            e.variable_terms()
                .values()
                .chain(e.constant_terms().values())
                .chain(std::iter::once(e.scalar())),
        );
        Self {
            expr: e.scaled(&factor),
            label: self.label.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().expr == self.expr
    }

    pub fn triviality(&self) -> Triviality {
        if !self.expr.is_scalar() {
            Triviality::Proper
        } else if self.expr.scalar().is_positive() {
            Triviality::Contradiction
        } else {
            Triviality::Tautology
        }
    }

    pub fn is_tautology(&self) -> bool {
        self.triviality() == Triviality::Tautology
    }

    pub fn is_contradiction(&self) -> bool {
        self.triviality() == Triviality::Contradiction
    }

    /// Same constraint, ignoring labels (both sides canonicalized).
    pub fn same_constraint(&self, other: &Inequality) -> bool {
        self.canonicalize().expr == other.canonicalize().expr
    }

    /// Renders as `lhs <= rhs`.
    ///
    /// Variable terms stay on the left and everything else moves right; an
    /// inequality over constants only puts positive terms left.
    pub fn render(&self, table: Option<&SymbolTable>) -> String {
        let e = &self.expr;
        let vars = LinearExpression::ordered_terms(e.variable_terms(), table);
        let consts = LinearExpression::ordered_terms(e.constant_terms(), table);
        let own = |(k, v): (&str, &Rational)| (k.to_string(), v.clone());
        let moved = |(k, v): (&str, &Rational)| (k.to_string(), -v.clone());
        let zero = Rational::zero();
        if !vars.is_empty() {
            let lhs: Vec<_> = vars.into_iter().map(own).collect();
            let rhs: Vec<_> = consts.into_iter().map(moved).collect();
            format!("{} <= {}", write_sum(&lhs, &zero), write_sum(&rhs, &-e.scalar().clone()))
        } else {
            let (pos, neg): (Vec<_>, Vec<_>) = consts.into_iter().partition(|(_, v)| v.is_positive());
            let lhs: Vec<_> = pos.into_iter().map(own).collect();
            let rhs: Vec<_> = neg.into_iter().map(moved).collect();
            let (ls, rs) = if e.scalar().is_positive() {
                (e.scalar().clone(), zero)
            } else {
                (zero, -e.scalar().clone())
            };
            format!("{} <= {}", write_sum(&lhs, &ls), write_sum(&rhs, &rs))
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.render(None))
    }
}
