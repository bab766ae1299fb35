//! Numeric ground truth for the symbolic derivation.
//!
//! Random integer channels with prescribed link ranks are generated, the
//! zero-forcing bases are built exactly, and every rank symbol gets its
//! value by exact elimination. On each instance the facts are evaluated
//! directly, and the instantiated starting region is projected numerically
//! and compared with the instantiated final bounds.

mod channel;
mod matrix;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

pub use channel::{sample_dims, sample_instance, ChannelDims, ChannelInstance, ENTRY_RANGE, RESAMPLE_BUDGET};
pub use matrix::{rank_exact, QMatrix};

use crate::error::Result;
use crate::fme::eliminate;
use crate::implication::{systems_equivalent, FactSet};
use crate::lincore::{serialize_system, Inequality, InequalitySystem, LinearExpression, Rational};
use crate::rankfacts::PaperFixture;

/// One fact evaluated on an assignment. Equalities (stored as `/le` and
/// `/ge` halves) are reported once under their common label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactCheck {
    pub label: String,
    pub equality: bool,
    /// `rhs - lhs` of the `≤` form; zero is required for an equality.
    pub slack: Rational,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FactReport {
    pub checks: Vec<FactCheck>,
}

impl FactReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FactCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, label: &str) -> Option<&FactCheck> {
        self.checks.iter().find(|c| c.label == label)
    }
}

fn equality_base(label: &str) -> Option<&str> {
    label.strip_suffix("/le").or_else(|| label.strip_suffix("/ge"))
}

/// Substitute the instance's values into every fact.
pub fn verify_facts(assignment: &BTreeMap<String, Rational>, facts: &FactSet) -> Result<FactReport> {
    let mut checks: Vec<FactCheck> = Vec::new();
    for fact in facts.iter() {
        let slack = -fact.expr().evaluate(assignment)?;
        match equality_base(fact.label()) {
            Some(base) => {
                if let Some(prev) = checks.iter_mut().find(|c| c.equality && c.label == base) {
                    prev.passed &= slack.is_zero();
                    continue;
                }
                let passed = slack.is_zero();
                // Report the `/le` orientation even if `/ge` comes first.
                let slack = if fact.label().ends_with("/ge") { -slack } else { slack };
                checks.push(FactCheck {
                    label: base.to_string(),
                    equality: true,
                    slack,
                    passed,
                });
            }
            None => checks.push(FactCheck {
                label: fact.label().to_string(),
                equality: false,
                passed: !slack.is_negative(),
                slack,
            }),
        }
    }
    Ok(FactReport { checks })
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    /// Fact diagnostics come first: a violated fact explains a failed comparison.
    pub facts: FactReport,
    /// Numeric projection of the instantiated starting region onto `(R1, R2)`.
    pub numeric: InequalitySystem,
    /// Instantiated final bounds.
    pub symbolic: InequalitySystem,
    pub equivalent: bool,
    pub nonneg: bool,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.equivalent
    }

    /// Both systems, for failure diagnostics.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in self.facts.failures() {
            let _ = writeln!(out, "violated fact {} (slack {})", c.label, c.slack);
        }
        let _ = writeln!(out, "numeric projection:");
        out.push_str(&self.numeric.pretty());
        let _ = writeln!(out, "instantiated final bounds:");
        out.push_str(&self.symbolic.pretty());
        out
    }
}

fn with_nonnegativity(system: &InequalitySystem, vars: &[&str]) -> Result<InequalitySystem> {
    let mut out = system.clone();
    for v in vars {
        let e = -LinearExpression::variable(v);
        out.insert(Inequality::new(format!("nonneg:{v}"), e))?;
    }
    Ok(out)
}

/// Numeric projection of the instantiated starting region, eliminating
/// `R1c` then `R2c` with no facts.
pub fn numeric_projection(
    assignment: &BTreeMap<String, Rational>,
    fixture: &PaperFixture,
    nonneg: bool,
) -> Result<InequalitySystem> {
    let mut start = fixture.start_full.instantiate(assignment)?;
    if nonneg {
        start = with_nonnegativity(&start, &["R1c", "R1p", "R2c", "R2p"])?;
    }
    let r1 = LinearExpression::variable("R1") - LinearExpression::variable("R1c");
    let r2 = LinearExpression::variable("R2") - LinearExpression::variable("R2c");
    let reduced = start
        .substitute_variable("R1p", &r1)?
        .substitute_variable("R2p", &r2)?;
    let (s1, _) = eliminate(&reduced, "R1c")?;
    let (s2, _) = eliminate(&s1, "R2c")?;
    Ok(s2)
}

/// Compare the numeric projection with the instantiated final bounds.
pub fn verify_pipeline(
    assignment: &BTreeMap<String, Rational>,
    fixture: &PaperFixture,
    nonneg: bool,
) -> Result<PipelineReport> {
    let facts = verify_facts(assignment, &fixture.facts)?;
    let numeric = numeric_projection(assignment, fixture, nonneg)?;
    let mut symbolic = fixture.final_bounds.instantiate(assignment)?;
    if nonneg {
        symbolic = with_nonnegativity(&symbolic, &["R1", "R2"])?;
    }
    let equivalent = systems_equivalent(&numeric, &symbolic, &FactSet::new())?;
    Ok(PipelineReport {
        facts,
        numeric,
        symbolic,
        equivalent,
        nonneg,
    })
}

/// Everything checked on one random instance.
#[derive(Clone, Debug)]
pub struct TrialReport {
    pub seed: u64,
    pub dims: ChannelDims,
    pub ranks: bool,
    pub bases: bool,
    pub facts: FactReport,
    pub pipeline: PipelineReport,
}

impl TrialReport {
    /// In exploratory nonnegativity mode the comparison is reported, not required.
    pub fn passed(&self) -> bool {
        self.ranks && self.bases && self.facts.passed() && (self.pipeline.nonneg || self.pipeline.passed())
    }

    pub fn line(&self) -> String {
        let v = |b: bool| if b { "PASS" } else { "FAIL" };
        let equiv = if self.pipeline.nonneg {
            format!("nonneg-equiv={}", if self.pipeline.equivalent { "yes" } else { "no" })
        } else {
            format!("equiv={}", v(self.pipeline.equivalent))
        };
        format!(
            "{} seed={} {} ranks={} bases={} facts={} {}",
            v(self.passed()),
            self.seed,
            self.dims,
            v(self.ranks),
            v(self.bases),
            v(self.facts.passed()),
            equiv
        )
    }
}

/// Full check of the instance generated from `seed`.
pub fn run_trial(seed: u64, max_dim: usize, fixture: &PaperFixture, nonneg: bool) -> Result<TrialReport> {
    let dims = sample_dims(seed, max_dim)?;
    let inst = sample_instance(dims, seed)?;
    let pipeline = verify_pipeline(&inst.assignment, fixture, nonneg)?;
    Ok(TrialReport {
        seed,
        dims,
        ranks: inst.ranks_valid(),
        bases: inst.bases_valid(),
        facts: pipeline.facts.clone(),
        pipeline,
    })
}

/// Seeds `seed, seed+1, …` for `trials` instances, run in parallel and
/// returned in seed order.
pub fn run_trials(
    seed: u64,
    trials: usize,
    max_dim: usize,
    fixture: &PaperFixture,
    nonneg: bool,
) -> Result<Vec<TrialReport>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|k| run_trial(seed.wrapping_add(k), max_dim, fixture, nonneg))
        .collect()
}

/// Write each trial's two instantiated systems as DSL files.
pub fn dump_trials(dir: &Path, reports: &[TrialReport]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for r in reports {
        let base = format!("trial-{}", r.seed);
        std::fs::write(dir.join(format!("{base}-numeric.dsl")), serialize_system(&r.pipeline.numeric))?;
        std::fs::write(dir.join(format!("{base}-final.dsl")), serialize_system(&r.pipeline.symbolic))?;
    }
    Ok(())
}
