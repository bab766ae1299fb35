use std::collections::BTreeMap;

use log::debug;

use super::{Inequality, LinearExpression, Rational, SymbolTable, Triviality};
use crate::error::{Error, Result};

/// What happened to an inequality handed to [`InequalitySystem::insert`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Added,
    /// Canonical form already present; labels were joined with `|`.
    Merged,
    DroppedTautology,
}

/// An ordered set of canonical inequalities over a declared symbol table.
#[derive(Clone, Debug)]
pub struct InequalitySystem {
    table: SymbolTable,
    inequalities: Vec<Inequality>,
}

impl InequalitySystem {
    pub fn new(table: SymbolTable) -> Self {
        Self {
            table,
            inequalities: Vec::new(),
        }
    }

    pub fn from_inequalities(
        table: SymbolTable,
        inequalities: impl IntoIterator<Item = Inequality>,
    ) -> Result<Self> {
        let mut sys = Self::new(table);
        for ineq in inequalities {
            sys.insert(ineq)?;
        }
        Ok(sys)
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Inequality> {
        self.inequalities.iter()
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.inequalities.iter().map(Inequality::label).collect()
    }

    pub fn get(&self, label: &str) -> Option<&Inequality> {
        self.inequalities.iter().find(|i| i.label() == label)
    }

    /// Canonicalize and add. Tautologies are dropped, contradictions rejected,
    /// duplicates merged.
    pub fn insert(&mut self, ineq: Inequality) -> Result<Insertion> {
        for name in ineq.expr().variable_terms().keys() {
            if !self.table.is_variable(name) {
                return Err(Error::UndeclaredSymbol(name.clone()));
            }
        }
        for name in ineq.expr().constant_terms().keys() {
            if !self.table.is_constant(name) {
                return Err(Error::UndeclaredSymbol(name.clone()));
            }
        }
        let ineq = ineq.canonicalize();
        match ineq.triviality() {
            Triviality::Tautology => {
                debug!("dropping tautology `{}`", ineq.label());
                return Ok(Insertion::DroppedTautology);
            }
            Triviality::Contradiction => {
                return Err(Error::Contradiction {
                    label: ineq.label().to_string(),
                });
            }
            Triviality::Proper => {}
        }
        if let Some(existing) = self.inequalities.iter_mut().find(|i| i.expr() == ineq.expr()) {
            let already = existing.label().split('|').any(|l| l == ineq.label());
            if !already {
                *existing = existing.with_label(format!("{}|{}", existing.label(), ineq.label()));
            }
            return Ok(Insertion::Merged);
        }
        self.inequalities.push(ineq);
        Ok(Insertion::Added)
    }

    /// Sort key: coefficient vector in canonical symbol order, scalar last.
    pub fn sort_key(&self, ineq: &Inequality) -> Vec<Rational> {
        ineq.expr().coefficient_vector(&self.table)
    }

    /// Inequalities in canonical (lexicographic coefficient) order.
    pub fn canonical_order(&self) -> Vec<&Inequality> {
        let mut out: Vec<&Inequality> = self.inequalities.iter().collect();
        out.sort_by_cached_key(|i| (self.sort_key(i), i.label().to_string()));
        out
    }

    /// Copy of the system keeping only inequalities accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&Inequality) -> bool) -> Self {
        Self {
            table: self.table.clone(),
            inequalities: self.inequalities.iter().filter(|i| keep(i)).cloned().collect(),
        }
    }

    pub fn without_labels(&self, labels: &[&str]) -> Self {
        self.filtered(|i| !labels.contains(&i.label()))
    }

    pub fn contains_constraint(&self, ineq: &Inequality) -> bool {
        let c = ineq.canonicalize();
        self.inequalities.iter().any(|i| i.expr() == c.expr())
    }

    /// Equal as sets of canonical constraints over the same symbols; labels ignored.
    pub fn same_constraints(&self, other: &InequalitySystem) -> bool {
        self.table.same_symbols(&other.table)
            && self.len() == other.len()
            && self.inequalities.iter().all(|i| other.contains_constraint(i))
    }

    /// Constraints of `self` missing from `other`, and vice versa.
    pub fn constraint_difference<'a>(
        &'a self,
        other: &'a InequalitySystem,
    ) -> (Vec<&'a Inequality>, Vec<&'a Inequality>) {
        let only_self = self.iter().filter(|i| !other.contains_constraint(i)).collect();
        let only_other = other.iter().filter(|i| !self.contains_constraint(i)).collect();
        (only_self, only_other)
    }

    /// Take labels from `reference` wherever the canonical forms match.
    pub fn relabeled_from(&self, reference: &InequalitySystem) -> Self {
        let inequalities = self
            .inequalities
            .iter()
            .map(|i| match reference.iter().find(|r| r.expr() == i.expr()) {
                Some(r) => i.with_label(r.label()),
                None => i.clone(),
            })
            .collect();
        Self {
            table: self.table.clone(),
            inequalities,
        }
    }

    /// Replace `var` everywhere by `replacement` and drop it from the table.
    ///
    /// A variable the table does not declare leaves the system untouched.
    pub fn substitute_variable(&self, var: &str, replacement: &LinearExpression) -> Result<Self> {
        if replacement.mentions(var) {
            return Err(Error::SelfReference(var.to_string()));
        }
        if !self.table.is_variable(var) {
            return Ok(self.clone());
        }
        for name in replacement.variable_terms().keys() {
            if !self.table.is_variable(name) {
                return Err(Error::UndeclaredSymbol(name.clone()));
            }
        }
        for name in replacement.constant_terms().keys() {
            if !self.table.is_constant(name) {
                return Err(Error::UndeclaredSymbol(name.clone()));
            }
        }
        let mut out = Self::new(self.table.without_variable(var));
        for ineq in &self.inequalities {
            let expr = ineq.expr().substitute_variable(var, replacement);
            out.insert(Inequality::new(ineq.label(), expr))?;
        }
        Ok(out)
    }

    /// Give every constant symbol its value; the table loses its constants.
    pub fn instantiate(&self, assignment: &BTreeMap<String, Rational>) -> Result<Self> {
        let mut out = Self::new(self.table.without_constants());
        for ineq in &self.inequalities {
            out.insert(Inequality::new(ineq.label(), ineq.expr().instantiate(assignment)?))?;
        }
        Ok(out)
    }

    /// True when `point` (covering every symbol) satisfies all inequalities.
    pub fn satisfied_by(&self, point: &BTreeMap<String, Rational>) -> Result<bool> {
        for ineq in &self.inequalities {
            if ineq.expr().evaluate(point)? > Rational::from_integer(0.into()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// One `label: lhs <= rhs` line per inequality, in insertion order.
    pub fn pretty(&self) -> String {
        self.inequalities
            .iter()
            .map(|i| format!("{}: {}\n", i.label(), i.render(Some(&self.table))))
            .collect()
    }
}

/// Same table and the same labelled inequalities, in any order.
impl PartialEq for InequalitySystem {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
            && self.len() == other.len()
            && self
                .inequalities
                .iter()
                .all(|i| other.inequalities.iter().any(|j| j == i))
    }
}

impl Eq for InequalitySystem {}
