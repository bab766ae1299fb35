use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::PaperFixture;
use crate::error::Result;
use crate::fme::{eliminate, EliminationLog};
use crate::implication::{is_implied, prune, verify_certificate, FactSet, FarkasCertificate, Implication};
use crate::lincore::{InequalitySystem, LinearExpression};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Informational; never fails the replay.
    Note,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Note => "NOTE",
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct StageReport {
    pub title: String,
    pub checks: Vec<Check>,
    /// System produced by this stage, before pruning.
    pub produced: InequalitySystem,
    /// `produced` minus the expected redundancies; input of the next stage.
    pub pruned: InequalitySystem,
    pub log: Option<EliminationLog>,
    /// One per expected redundancy, in removal order.
    pub certificates: Vec<FarkasCertificate>,
    /// Everything a full prune with the facts removes, which may exceed
    /// the expected set.
    pub removed: BTreeSet<String>,
    /// Certificates for removals outside the expected set.
    pub extra_certificates: Vec<FarkasCertificate>,
}

impl StageReport {
    fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.push(name, status, detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct ReplayReport {
    pub stages: Vec<StageReport>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(StageReport::passed)
    }

    /// Stage-by-stage scoreboard, one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            let _ = writeln!(out, "{}", s.title);
            for c in &s.checks {
                let _ = writeln!(out, "  {} {}: {}", c.status.tag(), c.name, c.detail);
            }
        }
        let _ = writeln!(out, "{}", if self.passed() { "replay: PASS" } else { "replay: FAIL" });
        out
    }
}

fn label_set(set: &BTreeSet<String>) -> String {
    format!("{{{}}}", set.iter().cloned().collect::<Vec<_>>().join(", "))
}

fn removed_labels(certs: &[FarkasCertificate]) -> BTreeSet<String> {
    certs.iter().map(|c| c.target.clone()).collect()
}

fn verified_count(certs: &[FarkasCertificate], input: &InequalitySystem, facts: &FactSet) -> Result<usize> {
    let mut ok = 0;
    for cert in certs {
        let Some(target) = input.get(&cert.target) else {
            continue;
        };
        let context = input.without_labels(&[target.label()]);
        if verify_certificate(cert, target, context.inequalities(), facts)? {
            ok += 1;
        }
    }
    Ok(ok)
}

fn compare(stage: &mut StageReport, name: &str, got: &InequalitySystem, want: &InequalitySystem) {
    let (extra, missing) = got.constraint_difference(want);
    let detail = if extra.is_empty() && missing.is_empty() {
        format!("{} inequalities, equal as canonical sets", got.len())
    } else {
        let show = |v: Vec<&crate::lincore::Inequality>| {
            v.iter().map(|i| i.label().to_string()).collect::<Vec<_>>().join(", ")
        };
        format!(
            "{} vs {} inequalities; unexpected [{}], missing [{}]",
            got.len(),
            want.len(),
            show(extra),
            show(missing)
        )
    };
    stage.check(name, got.same_constraints(want), detail);
}

/// Removes the expected labels one at a time in canonical order, each
/// certified against what is still left, then runs a full prune to see
/// whether anything beyond the expected set is redundant.
fn prune_checks(
    stage: &mut StageReport,
    input: &InequalitySystem,
    facts: &FactSet,
    expected: &BTreeSet<String>,
) -> Result<()> {
    let mut remaining = input.clone();
    let mut certs = Vec::new();
    let mut failed = Vec::new();
    for candidate in input.canonical_order() {
        if !expected.contains(candidate.label()) {
            continue;
        }
        let context = remaining.without_labels(&[candidate.label()]);
        match is_implied(candidate, context.inequalities(), facts) {
            Implication::Implied(cert) if verify_certificate(&cert, candidate, context.inequalities(), facts)? => {
                certs.push(cert);
                remaining = context;
            }
            _ => failed.push(candidate.label().to_string()),
        }
    }
    let missing: Vec<&String> = expected.iter().filter(|l| input.get(l).is_none()).collect();
    stage.check(
        "expected redundancies",
        failed.is_empty() && missing.is_empty(),
        if failed.is_empty() && missing.is_empty() {
            format!("{} removed, {} certificates verified", label_set(expected), certs.len())
        } else {
            format!("not implied {failed:?}, absent {missing:?}")
        },
    );

    let (_, all) = prune(input, facts)?;
    let removed = removed_labels(&all);
    let extra: Vec<FarkasCertificate> = all.into_iter().filter(|c| !expected.contains(&c.target)).collect();
    let extra_ok = verified_count(&extra, input, facts)?;
    let extra_labels: BTreeSet<String> = extra.iter().map(|c| c.target.clone()).collect();
    if extra.is_empty() {
        stage.check("irredundant", true, "no further inequality is implied");
    } else {
        stage.push(
            "further redundancies",
            if extra_ok == extra.len() { Status::Note } else { Status::Fail },
            format!(
                "{} also implied, {extra_ok}/{} certificates verified; kept to follow the derivation",
                label_set(&extra_labels),
                extra.len()
            ),
        );
    }
    stage.pruned = remaining;
    stage.certificates = certs;
    stage.removed = removed;
    stage.extra_certificates = extra;
    Ok(())
}

fn log_counts(stage: &mut StageReport, log: &EliminationLog, counts: (usize, usize, usize)) {
    let got = (log.upper_bounds.len(), log.lower_bounds.len(), log.free.len());
    stage.check(
        "bounds",
        got == counts,
        format!(
            "{} upper, {} lower, {} free, {} combinations",
            got.0,
            got.1,
            got.2,
            log.combinations.len()
        ),
    );
    stage.check("log", log.verify(), "every combination re-derives");
}

fn new_stage(title: &str, system: &InequalitySystem) -> StageReport {
    StageReport {
        title: title.to_string(),
        checks: Vec::new(),
        produced: system.clone(),
        pruned: system.clone(),
        log: None,
        certificates: Vec::new(),
        removed: BTreeSet::new(),
        extra_certificates: Vec::new(),
    }
}

/// Re-runs the whole derivation from the 14-inequality system and checks
/// every intermediate result against the fixture.
pub fn replay(f: &PaperFixture) -> Result<ReplayReport> {
    let expected = |s: u32| f.expected_redundancies.get(&s).cloned().unwrap_or_default();

    let mut s0 = new_stage("stage 0: prune, substitute R1p = R1 - R1c, R2p = R2 - R2c", &f.start_full);
    prune_checks(&mut s0, &f.start_full, &f.facts, &expected(0))?;
    let r1 = LinearExpression::variable("R1") - LinearExpression::variable("R1c");
    let r2 = LinearExpression::variable("R2") - LinearExpression::variable("R2c");
    let reduced = s0
        .pruned
        .substitute_variable("R1p", &r1)?
        .substitute_variable("R2p", &r2)?;
    compare(&mut s0, "substitution", &reduced, &f.start_reduced);
    s0.produced = reduced.clone();

    let mut s1 = new_stage("stage 1: eliminate R1c, prune", &reduced);
    let (raw1, log1) = eliminate(&reduced, "R1c")?;
    log_counts(&mut s1, &log1, (5, 2, 5));
    compare(&mut s1, "elimination", &raw1, &f.stage1);
    let raw1 = raw1.relabeled_from(&f.stage1);
    prune_checks(&mut s1, &raw1, &f.facts, &expected(1))?;
    s1.produced = raw1;
    s1.log = Some(log1);

    let mut s2 = new_stage("stage 2: eliminate R2c, prune", &s1.pruned);
    let (raw2, log2) = eliminate(&s1.pruned, "R2c")?;
    log_counts(&mut s2, &log2, (6, 2, 4));
    compare(&mut s2, "elimination", &raw2, &f.stage2);
    let raw2 = raw2.relabeled_from(&f.stage2);
    prune_checks(&mut s2, &raw2, &f.facts, &expected(2))?;
    let final_system = s2.pruned.clone();
    compare(&mut s2, "final bounds", &final_system, &f.final_bounds);
    s2.produced = raw2;
    s2.log = Some(log2);

    Ok(ReplayReport {
        stages: vec![s0, s1, s2],
    })
}
