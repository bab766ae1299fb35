//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use fmelim::lincore::rat;
use fmelim::{Inequality, InequalitySystem, LinearExpression, LpOutcome, Rational, SymbolTable};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

pub fn int(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    rat(rng.gen_range(-range..=range))
}

/// Up to `max_rows` inequalities over `x0..x{nvars-1}`, integer coefficients
/// and scalar in `[-range, range]`; every row mentions some variable.
pub fn random_system(rng: &mut ChaCha8Rng, nvars: usize, max_rows: usize, range: i64) -> InequalitySystem {
    let vars = names(nvars);
    let table = SymbolTable::new().with_variables(&vars).unwrap();
    let mut system = InequalitySystem::new(table);
    let rows = rng.gen_range(1..=max_rows);
    for k in 0..rows {
        let expr = loop {
            let mut e = LinearExpression::zero();
            for v in &vars {
                e.add_variable_term(v, &int(rng, range));
            }
            if e.has_variables() {
                e.add_scalar(&int(rng, range));
                break e;
            }
        };
        system.insert(Inequality::new(format!("r{k}"), expr)).unwrap();
    }
    system
}

/// Rational with denominator in 1..=3 and magnitude at most `range`.
pub fn random_rational(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    let d = rng.gen_range(1..=3);
    Rational::new(rng.gen_range(-range * d..=range * d).into(), d.into())
}

pub fn random_point(rng: &mut ChaCha8Rng, vars: &[String], range: i64) -> BTreeMap<String, Rational> {
    vars.iter().map(|v| (v.clone(), random_rational(rng, range))).collect()
}

/// Does `point` (over every variable except `var`) extend to a point of `system`?
/// Intersects the one-dimensional bounds each inequality puts on `var`.
pub fn extension_nonempty(system: &InequalitySystem, var: &str, point: &BTreeMap<String, Rational>) -> bool {
    let mut full = point.clone();
    full.insert(var.to_string(), Rational::zero());
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for ineq in system.iter() {
        let a = ineq.expr().variable_coeff(var);
        let rest = ineq.expr().evaluate(&full).unwrap();
        if a.is_zero() {
            if rest.is_positive() {
                return false;
            }
            continue;
        }
        let bound = -rest / &a;
        if a.is_positive() {
            upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
        } else {
            lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
        }
    }
    match (lower, upper) {
        (Some(l), Some(u)) => l <= u,
        _ => true,
    }
}

// ----- dense rational linear algebra, kept separate from the crate's own -----

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Unique solution of the square system `a x = b`, if `a` is nonsingular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Spanning vector of the kernel when it is one-dimensional.
pub fn kernel_line(a: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut d = vec![Rational::zero(); n];
    d[free] = rat(1);
    for (row, &p) in pivots.iter().enumerate() {
        d[p] = -m[row][free].clone();
    }
    Some(d)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Every `k`-subset of `0..n`, lexicographically.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

// ----- LP by exhaustive enumeration -----

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumerated {
    Optimal(Rational),
    Unbounded,
    Infeasible,
}

/// `max c·x` s.t. `a x ≤ b` with `rank(a) = n`: the polyhedron is pointed, so it
/// is empty iff it has no vertex, and unbounded iff some extreme ray of
/// `{d : a d ≤ 0}` has `c·d > 0`; otherwise the best vertex is optimal.
pub fn enumerate_lp(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Enumerated {
    let n = c.len();
    assert_eq!(rank(a), n, "enumeration needs a pointed polyhedron");
    let feasible = |x: &[Rational]| a.iter().zip(b).all(|(row, bi)| dot(row, x) <= *bi);
    let mut best: Option<Rational> = None;
    for s in subsets(a.len(), n) {
        let sa: Vec<Vec<Rational>> = s.iter().map(|&i| a[i].clone()).collect();
        let sb: Vec<Rational> = s.iter().map(|&i| b[i].clone()).collect();
        if let Some(x) = solve(&sa, &sb) {
            if feasible(&x) {
                let v = dot(c, &x);
                best = Some(best.map_or(v.clone(), |bv| bv.max(v)));
            }
        }
    }
    let Some(best) = best else { return Enumerated::Infeasible };
    for s in subsets(a.len(), n - 1) {
        let sa: Vec<Vec<Rational>> = s.iter().map(|&i| a[i].clone()).collect();
        let Some(d) = kernel_line(&sa, n) else { continue };
        for d in [d.clone(), d.iter().map(|x| -x).collect::<Vec<_>>()] {
            let recedes = a.iter().all(|row| !dot(row, &d).is_positive());
            if recedes && dot(c, &d).is_positive() {
                return Enumerated::Unbounded;
            }
        }
    }
    Enumerated::Optimal(best)
}

/// A random LP with `rank(a) = n`, as raw matrices plus the crate's inputs.
pub struct RandomLp {
    pub c: Vec<Rational>,
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub objective: LinearExpression,
    pub constraints: Vec<Inequality>,
}

pub fn random_lp(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, range: i64) -> RandomLp {
    loop {
        let n = rng.gen_range(1..=max_n);
        let m = rng.gen_range(n..=max_m);
        let a: Vec<Vec<Rational>> = (0..m).map(|_| (0..n).map(|_| int(rng, range)).collect()).collect();
        if rank(&a) != n {
            continue;
        }
        let b: Vec<Rational> = (0..m).map(|_| int(rng, range)).collect();
        let c: Vec<Rational> = (0..n).map(|_| int(rng, range)).collect();
        let vars = names(n);
        let mut objective = LinearExpression::zero();
        for (v, ci) in vars.iter().zip(&c) {
            objective.add_variable_term(v, ci);
        }
        let constraints = a
            .iter()
            .zip(&b)
            .enumerate()
            .map(|(i, (row, bi))| {
                let mut e = LinearExpression::zero();
                for (v, aij) in vars.iter().zip(row) {
                    e.add_variable_term(v, aij);
                }
                e.add_scalar(&-bi.clone());
                Inequality::new(format!("c{i}"), e)
            })
            .collect();
        return RandomLp {
            c,
            a,
            b,
            objective,
            constraints,
        };
    }
}

/// Compares `lp_max` with enumeration, re-checking the returned witness.
pub fn lp_agrees(lp: &RandomLp, out: &LpOutcome) -> Result<(), String> {
    let vars = names(lp.c.len());
    let vec_of = |p: &BTreeMap<String, Rational>| -> Vec<Rational> {
        vars.iter().map(|v| p.get(v).cloned().unwrap_or_else(Rational::zero)).collect()
    };
    let feasible = |x: &[Rational]| lp.a.iter().zip(&lp.b).all(|(row, bi)| dot(row, x) <= *bi);
    match (enumerate_lp(&lp.c, &lp.a, &lp.b), out) {
        (Enumerated::Infeasible, LpOutcome::Infeasible) => Ok(()),
        (Enumerated::Unbounded, LpOutcome::Unbounded { point, ray }) => {
            let (x, d) = (vec_of(point), vec_of(ray));
            let recedes = lp.a.iter().all(|row| !dot(row, &d).is_positive());
            if feasible(&x) && recedes && dot(&lp.c, &d).is_positive() {
                Ok(())
            } else {
                Err("bad unbounded witness".into())
            }
        }
        (Enumerated::Optimal(v), LpOutcome::Optimal { value, point, .. }) => {
            let x = vec_of(point);
            if &v == value && feasible(&x) && dot(&lp.c, &x) == v {
                Ok(())
            } else {
                Err(format!("optimum {value} vs enumerated {v}"))
            }
        }
        (want, got) => Err(format!("enumeration says {want:?}, lp_max says {:?}", got.status())),
    }
}

// ----- projection checks -----

use fmelim::implication::is_feasible;
use fmelim::{eliminate, lp_max, project, systems_equivalent, Error, FactSet, PrunePolicy};

/// Sample points over the remaining variables: uniform ones, projections
/// of LP vertices (always extendable) and small perturbations of those.
fn sample_points(
    rng: &mut ChaCha8Rng,
    system: &InequalitySystem,
    var: &str,
    count: usize,
) -> Vec<BTreeMap<String, Rational>> {
    let rest: Vec<String> = system.table().variables().iter().filter(|v| *v != var).cloned().collect();
    let all = system.table().variables().to_vec();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match out.len() % 3 {
            0 => out.push(random_point(rng, &rest, 6)),
            _ => {
                let mut objective = LinearExpression::zero();
                for v in &all {
                    objective.add_variable_term(v, &int(rng, 3));
                }
                let LpOutcome::Optimal { point, .. } = lp_max(&objective, system.iter()) else {
                    out.push(random_point(rng, &rest, 6));
                    continue;
                };
                let mut p: BTreeMap<String, Rational> = rest
                    .iter()
                    .map(|v| (v.clone(), point.get(v).cloned().unwrap_or_else(Rational::zero)))
                    .collect();
                if out.len() % 3 == 2 {
                    for x in p.values_mut() {
                        *x += Rational::new(rng.gen_range(-2..=2).into(), 4.into());
                    }
                }
                out.push(p);
            }
        }
    }
    out
}

/// Pointwise soundness of eliminating `var`: output membership equals
/// nonemptiness of the extension interval, at `count` points.
pub fn check_projection(rng: &mut ChaCha8Rng, system: &InequalitySystem, var: &str, count: usize) -> Result<(), String> {
    let points = sample_points(rng, system, var, count);
    match eliminate(system, var) {
        Ok((out, log)) => {
            if out.iter().any(|i| i.expr().mentions(var)) {
                return Err(format!("output still mentions {var}"));
            }
            if !log.verify() {
                return Err("elimination log does not re-verify".into());
            }
            for p in &points {
                let inside = out.satisfied_by(p).map_err(|e| e.to_string())?;
                if inside != extension_nonempty(system, var, p) {
                    return Err(format!("point {p:?}: projected={inside}\n{}", system.pretty()));
                }
            }
            Ok(())
        }
        Err(Error::Contradiction { .. }) => {
            if is_feasible(system.inequalities(), &FactSet::new()) {
                return Err("contradiction reported for a feasible system".into());
            }
            match points.iter().find(|p| extension_nonempty(system, var, p)) {
                Some(p) => Err(format!("contradiction reported but {p:?} extends")),
                None => Ok(()),
            }
        }
        Err(e) => Err(e.to_string()),
    }
}

/// `None` for an empty region, however it was detected.
fn projected_region(system: &InequalitySystem, vars: &[&str]) -> Result<Option<InequalitySystem>, String> {
    match project(system, vars, &FactSet::new(), PrunePolicy::Never) {
        Ok(p) if is_feasible(p.system.inequalities(), &FactSet::new()) => Ok(Some(p.system)),
        Ok(_) | Err(Error::Contradiction { .. }) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

/// Eliminating the first two variables in either order gives equivalent systems.
pub fn check_order(system: &InequalitySystem) -> Result<(), String> {
    let vars = system.table().variables();
    if vars.len() < 2 {
        return Ok(());
    }
    let (a, b) = (vars[0].as_str(), vars[1].as_str());
    match (projected_region(system, &[a, b])?, projected_region(system, &[b, a])?) {
        (None, None) => Ok(()),
        (Some(x), Some(y)) => match systems_equivalent(&x, &y, &FactSet::new()) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("orders disagree on\n{}", system.pretty())),
            Err(e) => Err(e.to_string()),
        },
        _ => Err(format!("one order found the region empty\n{}", system.pretty())),
    }
}
