//! Dense two-phase primal simplex over exact rationals.
//!
//! Every symbol is a free unknown. Free unknowns are split as `u - v` with
//! `u, v ≥ 0`, each constraint row gets a slack, and rows with a negative
//! right-hand side start from an artificial. Bland's rule (lowest eligible
//! column enters, ties in the ratio test go to the lowest basic column)
//! rules out cycling.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::lincore::{Inequality, LinearExpression, Rational};

/// Result of [`lp_max`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `value` is attained at `point`. `duals[i] ≥ 0` is the multiplier of
    /// constraint `i`; the duals prove that nothing better exists.
    Optimal {
        value: Rational,
        point: BTreeMap<String, Rational>,
        duals: Vec<Rational>,
    },
    /// `point` is feasible; moving along `ray` keeps feasibility and improves
    /// the objective without bound.
    Unbounded {
        point: BTreeMap<String, Rational>,
        ray: BTreeMap<String, Rational>,
    },
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
            LpOutcome::Infeasible => LpStatus::Infeasible,
        }
    }

    pub fn optimum(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the maximization; a column may enter when positive.
    cost: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, q: usize) {
        let inv = self.rows[r][q].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row: Vec<(usize, Rational)> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.clone()))
            .collect();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][q].is_zero() {
                continue;
            }
            let f = self.rows[i][q].clone();
            for (j, x) in &pivot_row {
                self.rows[i][*j] -= &f * x;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.cost[q].is_zero() {
            let f = self.cost[q].clone();
            for (j, x) in &pivot_row {
                self.cost[*j] -= &f * x;
            }
            self.value += &f * &pivot_rhs;
        }
        self.basis[r] = q;
    }

    /// Runs to optimality. Returns the entering column if it proves unboundedness.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> Option<usize> {
        loop {
            let entering = (0..self.cost.len()).find(|&j| allowed(j) && self.cost[j].is_positive());
            let Some(q) = entering else {
                return None;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                None => return Some(q),
                Some((r, _)) => self.pivot(r, q),
            }
        }
    }

    fn column_values(&self, ncols: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[i].clone();
        }
        x
    }
}

/// Maximize `objective` subject to `expr ≤ 0` for every constraint.
///
/// Variables and constant symbols are all free real unknowns; only the
/// constraints restrict them. The objective's scalar is included in the
/// reported optimum.
pub fn lp_max<'a>(
    objective: &LinearExpression,
    constraints: impl IntoIterator<Item = &'a Inequality>,
) -> LpOutcome {
    let constraints: Vec<&Inequality> = constraints.into_iter().collect();
    let unknowns: Vec<String> = objective
        .symbols()
        .chain(constraints.iter().flat_map(|c| c.expr().symbols()))
        .map(str::to_string)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = unknowns.len();
    let m = constraints.len();

    // a_i · z <= b_i
    let a: Vec<Vec<Rational>> = constraints
        .iter()
        .map(|c| unknowns.iter().map(|u| c.expr().coeff(u)).collect())
        .collect();
    let b: Vec<Rational> = constraints.iter().map(|c| -c.expr().scalar().clone()).collect();

    let slack0 = 2 * n;
    let art0 = slack0 + m;
    let negative_rows: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let ncols = art0 + negative_rows.len();

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_of_row = vec![None; m];
    for (k, &i) in negative_rows.iter().enumerate() {
        art_of_row[i] = Some(art0 + k);
    }
    for i in 0..m {
        let sign = if b[i].is_negative() { -Rational::one() } else { Rational::one() };
        let mut row = vec![Rational::zero(); ncols];
        for j in 0..n {
            if !a[i][j].is_zero() {
                row[j] = &a[i][j] * &sign;
                row[n + j] = -&row[j];
            }
        }
        row[slack0 + i] = sign.clone();
        rhs.push(&b[i] * &sign);
        match art_of_row[i] {
            Some(col) => {
                row[col] = Rational::one();
                basis.push(col);
            }
            None => basis.push(slack0 + i),
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        cost: vec![Rational::zero(); ncols],
        value: Rational::zero(),
    };
    let is_art = |j: usize| j >= art0;

    if !negative_rows.is_empty() {
        // maximize -Σ artificials
        for &i in &negative_rows {
            for j in 0..art0 {
                if !t.rows[i][j].is_zero() {
                    t.cost[j] += &t.rows[i][j];
                }
            }
            t.value -= &t.rhs[i];
        }
        let unbounded = t.optimize(|_| true);
        debug_assert!(unbounded.is_none(), "phase one is bounded by zero");
        if t.value.is_negative() {
            return LpOutcome::Infeasible;
        }
        // Artificials left in the basis sit at zero; swap them out. Slack
        // columns make the constraint matrix full row rank, so a nonzero
        // entry outside the artificials always exists.
        for r in 0..m {
            if is_art(t.basis[r]) {
                if let Some(q) = (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, q);
                }
            }
        }
    }

    // Phase two objective.
    let mut c = vec![Rational::zero(); ncols];
    for (j, u) in unknowns.iter().enumerate() {
        let cj = objective.coeff(u);
        c[n + j] = -cj.clone();
        c[j] = cj;
    }
    t.value = Rational::zero();
    for j in 0..ncols {
        t.cost[j] = c[j].clone();
    }
    for i in 0..m {
        let cb = &c[t.basis[i]];
        if cb.is_zero() {
            continue;
        }
        let cb = cb.clone();
        for j in 0..ncols {
            if !t.rows[i][j].is_zero() {
                t.cost[j] -= &cb * &t.rows[i][j];
            }
        }
        t.value += &cb * &t.rhs[i];
    }

    let unbounded = t.optimize(|j| !is_art(j));
    let x = t.column_values(ncols);
    let point: BTreeMap<String, Rational> = unknowns
        .iter()
        .enumerate()
        .map(|(j, u)| (u.clone(), &x[j] - &x[n + j]))
        .collect();

    match unbounded {
        Some(q) => {
            let mut dx = vec![Rational::zero(); ncols];
            dx[q] = Rational::one();
            for (i, &bcol) in t.basis.iter().enumerate() {
                dx[bcol] = -t.rows[i][q].clone();
            }
            let ray = unknowns
                .iter()
                .enumerate()
                .map(|(j, u)| (u.clone(), &dx[j] - &dx[n + j]))
                .collect();
            LpOutcome::Unbounded { point, ray }
        }
        None => {
            let duals = (0..m).map(|i| -t.cost[slack0 + i].clone()).collect();
            LpOutcome::Optimal {
                value: &t.value + objective.scalar(),
                point,
                duals,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincore::{parse_system, rat, ratio};

    fn constraints(text: &str) -> Vec<Inequality> {
        parse_system(text).unwrap().0.inequalities().to_vec()
    }

    fn x() -> LinearExpression {
        LinearExpression::variable("x")
    }

    #[test]
    fn single_upper_bound() {
        let cs = constraints("var x\nineq a: x <= 3");
        let out = lp_max(&x(), &cs);
        assert_eq!(out.optimum(), Some(&rat(3)));
    }

    #[test]
    fn no_constraints_is_unbounded() {
        let out = lp_max(&x(), &[]);
        assert_eq!(out.status(), LpStatus::Unbounded);
        let LpOutcome::Unbounded { ray, .. } = out else { unreachable!() };
        assert_eq!(ray["x"], rat(1));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let cs = constraints("var x y\nineq a: x <= 1\nineq b: y <= 2\nineq c: x + y >= 5");
        let obj = x() + LinearExpression::variable("y");
        assert_eq!(lp_max(&obj, &cs), LpOutcome::Infeasible);
    }

    #[test]
    fn negative_right_hand_sides_need_phase_one() {
        // x >= 2, x <= 5, maximize -x  -> -2
        let cs = constraints("var x\nineq a: x >= 2\nineq b: x <= 5");
        let out = lp_max(&-x(), &cs);
        assert_eq!(out.optimum(), Some(&rat(-2)));
    }

    #[test]
    fn objective_scalar_is_reported() {
        let cs = constraints("var x\nineq a: 2*x <= 1");
        let mut obj = x();
        obj.add_scalar(&rat(1));
        assert_eq!(lp_max(&obj, &cs).optimum(), Some(&ratio(3, 2)));
    }

    #[test]
    fn duals_certify_the_optimum() {
        let cs = constraints("var x y\nineq a: x + y <= 4\nineq b: x - y <= 2\nineq c: y <= 3");
        let obj = x().scaled(&rat(2)) + LinearExpression::variable("y");
        let LpOutcome::Optimal { value, point, duals } = lp_max(&obj, &cs) else {
            panic!("expected optimum")
        };
        assert_eq!(value, rat(7));
        assert_eq!(obj.evaluate(&point).unwrap(), value);
        // Σ y_i a_i = c and Σ y_i b_i = value
        let mut combo = LinearExpression::zero();
        for (c, y) in cs.iter().zip(&duals) {
            assert!(!y.is_negative());
            combo.add_assign_scaled(c.expr(), y);
        }
        let mut lhs = combo.clone();
        lhs.add_scalar(&-combo.scalar().clone());
        assert_eq!(lhs, obj);
        assert_eq!(-combo.scalar().clone(), value);
    }

    /// Beale's example cycles under the textbook largest-coefficient rule.
    #[test]
    fn beale_cycling_instance_terminates() {
        let text = "var x4 x5 x6 x7
            ineq c1: 1/4*x4 - 8*x5 - x6 + 9*x7 <= 0
            ineq c2: 1/2*x4 - 12*x5 - 1/2*x6 + 3*x7 <= 0
            ineq c3: x6 <= 1
            ineq n4: x4 >= 0
            ineq n5: x5 >= 0
            ineq n6: x6 >= 0
            ineq n7: x7 >= 0";
        let cs = constraints(text);
        let obj = parse_system("var x4 x5 x6 x7\nineq o: 3/4*x4 - 20*x5 + 1/2*x6 - 6*x7 <= 0")
            .unwrap()
            .0
            .inequalities()[0]
            .expr()
            .clone();
        // canonical form scaled the objective by 4
        let out = lp_max(&obj, &cs);
        assert_eq!(out.optimum(), Some(&rat(5)));
    }
}
