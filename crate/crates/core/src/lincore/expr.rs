use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::{format_rational, Rational, SymbolTable};
use crate::error::{Error, Result};

/// `Σ aᵢ·varᵢ + Σ bⱼ·constⱼ + scalar` with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearExpression {
    vars: BTreeMap<String, Rational>,
    consts: BTreeMap<String, Rational>,
    scalar: Rational,
}

fn accumulate(map: &mut BTreeMap<String, Rational>, name: &str, coeff: &Rational) {
    if coeff.is_zero() {
        return;
    }
    let entry = map.entry(name.to_string()).or_insert_with(Rational::zero);
    *entry += coeff;
    if entry.is_zero() {
        map.remove(name);
    }
}

impl LinearExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar_only(value: Rational) -> Self {
        Self {
            scalar: value,
            ..Self::default()
        }
    }

    pub fn variable(name: &str) -> Self {
        let mut e = Self::zero();
        e.add_variable_term(name, &Rational::from_integer(1.into()));
        e
    }

    pub fn constant(name: &str) -> Self {
        let mut e = Self::zero();
        e.add_constant_term(name, &Rational::from_integer(1.into()));
        e
    }

    pub fn add_variable_term(&mut self, name: &str, coeff: &Rational) {
        accumulate(&mut self.vars, name, coeff);
    }

    pub fn add_constant_term(&mut self, name: &str, coeff: &Rational) {
        accumulate(&mut self.consts, name, coeff);
    }

    pub fn add_scalar(&mut self, value: &Rational) {
        self.scalar += value;
    }

    pub fn variable_terms(&self) -> &BTreeMap<String, Rational> {
        &self.vars
    }

    pub fn constant_terms(&self) -> &BTreeMap<String, Rational> {
        &self.consts
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn variable_coeff(&self, name: &str) -> Rational {
        self.vars.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_coeff(&self, name: &str) -> Rational {
        self.consts.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of any symbol, variable or constant.
    pub fn coeff(&self, name: &str) -> Rational {
        self.vars
            .get(name)
            .or_else(|| self.consts.get(name))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.vars.contains_key(name) || self.consts.contains_key(name)
    }

    /// No variable or constant-symbol terms remain.
    pub fn is_scalar(&self) -> bool {
        self.vars.is_empty() && self.consts.is_empty()
    }

    pub fn has_variables(&self) -> bool {
        !self.vars.is_empty()
    }

    /// Every symbol name (variables first, each group in name order).
    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.vars.keys().chain(self.consts.keys()).map(String::as_str)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            vars: self.vars.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
            consts: self.consts.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
            scalar: &self.scalar * factor,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::from_integer(1.into()));
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::from_integer((-1).into()));
        out
    }

    /// `self += factor · other`
    pub fn add_assign_scaled(&mut self, other: &Self, factor: &Rational) {
        for (k, v) in &other.vars {
            accumulate(&mut self.vars, k, &(v * factor));
        }
        for (k, v) in &other.consts {
            accumulate(&mut self.consts, k, &(v * factor));
        }
        self.scalar += &other.scalar * factor;
    }

    /// Replace variable `name` by `replacement`.
    pub fn substitute_variable(&self, name: &str, replacement: &LinearExpression) -> Self {
        match self.vars.get(name) {
            None => self.clone(),
            Some(coeff) => {
                let mut out = self.clone();
                out.vars.remove(name);
                out.add_assign_scaled(replacement, coeff);
                out
            }
        }
    }

    /// Replace every constant symbol by its value; missing values are an error.
    pub fn instantiate(&self, assignment: &BTreeMap<String, Rational>) -> Result<Self> {
        let mut out = Self {
            vars: self.vars.clone(),
            consts: BTreeMap::new(),
            scalar: self.scalar.clone(),
        };
        for (k, v) in &self.consts {
            let value = assignment
                .get(k)
                .ok_or_else(|| Error::MissingAssignment(k.clone()))?;
            out.scalar += v * value;
        }
        Ok(out)
    }

    /// Value at a point that assigns every symbol (variables and constants alike).
    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut total = self.scalar.clone();
        for (k, v) in self.vars.iter().chain(self.consts.iter()) {
            let x = point.get(k).ok_or_else(|| Error::MissingAssignment(k.clone()))?;
            total += v * x;
        }
        Ok(total)
    }

    /// Coefficients in canonical table order followed by the scalar.
    pub fn coefficient_vector(&self, table: &SymbolTable) -> Vec<Rational> {
        let mut out: Vec<Rational> = table.variables().iter().map(|v| self.variable_coeff(v)).collect();
        out.extend(table.constant_names().map(|c| self.constant_coeff(c)));
        out.push(self.scalar.clone());
        out
    }

    /// Symbols sorted by table position; names unknown to the table go last.
    pub(crate) fn ordered_terms<'a>(
        terms: &'a BTreeMap<String, Rational>,
        table: Option<&SymbolTable>,
    ) -> Vec<(&'a str, &'a Rational)> {
        let mut out: Vec<(&str, &Rational)> = terms.iter().map(|(k, v)| (k.as_str(), v)).collect();
        if let Some(t) = table {
            out.sort_by_key(|(k, _)| (t.position(k).unwrap_or(usize::MAX), k.to_string()));
        }
        out
    }
}

/// Writes a signed sum such as `2*R1 - R2 + 3`, or `0` when empty.
pub(crate) fn write_sum(terms: &[(String, Rational)], scalar: &Rational) -> String {
    let mut out = String::new();
    let push = |out: &mut String, negative: bool, body: String| {
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    };
    for (name, coeff) in terms {
        let magnitude = coeff.abs();
        let body = if magnitude == Rational::from_integer(1.into()) {
            name.clone()
        } else {
            format!("{}*{}", format_rational(&magnitude), name)
        };
        push(&mut out, coeff.is_negative(), body);
    }
    if !scalar.is_zero() {
        push(&mut out, scalar.is_negative(), format_rational(&scalar.abs()));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LinearExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Rational)> = self
            .vars
            .iter()
            .chain(self.consts.iter())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        f.write_str(&write_sum(&terms, &self.scalar))
    }
}

impl Add for LinearExpression {
    type Output = LinearExpression;
    fn add(self, rhs: Self) -> Self {
        self.plus(&rhs)
    }
}

impl Sub for LinearExpression {
    type Output = LinearExpression;
    fn sub(self, rhs: Self) -> Self {
        self.minus(&rhs)
    }
}

impl Neg for LinearExpression {
    type Output = LinearExpression;
    fn neg(self) -> Self {
        self.scaled(&Rational::from_integer((-1).into()))
    }
}

impl Mul<&Rational> for &LinearExpression {
    type Output = LinearExpression;
    fn mul(self, rhs: &Rational) -> LinearExpression {
        self.scaled(rhs)
    }
}
