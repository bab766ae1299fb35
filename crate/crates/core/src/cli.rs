//! Command-line front end.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or a system
//! is infeasible, 2 for usage, I/O and parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fme::{project, PrunePolicy};
use crate::implication::{
    format_certificates, parse_certificates, prune, systems_equivalent, verify_certificate, FactSet,
};
use crate::lincore::{parse_document, serialize_system, InequalitySystem};
use crate::oracle::{dump_trials, run_trials};
use crate::rankfacts::{load_paper_fixture, load_paper_fixture_from_dir, replay};

#[derive(Parser, Debug)]
#[command(name = "fmelim", version, about = "Exact Fourier-Motzkin elimination with symbolic constants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eliminate variables and write the projected system.
    Project {
        system: PathBuf,
        /// Comma-separated variables, eliminated in order.
        #[arg(long, value_delimiter = ',', required = true)]
        eliminate: Vec<String>,
        /// Extra fact file (facts in the system file are always used).
        #[arg(long)]
        facts: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = PruneArg::Never)]
        prune: PruneArg,
        /// Prefix the output with the elimination log as comment lines.
        #[arg(long)]
        trace: bool,
        /// Write certificates for pruned inequalities here.
        #[arg(long)]
        certs: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Remove every inequality implied by the others and the facts.
    Prune {
        system: PathBuf,
        #[arg(long)]
        facts: Option<PathBuf>,
        #[arg(long)]
        certs: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check certificates against the system they were produced from.
    Certify {
        system: PathBuf,
        certificates: PathBuf,
        #[arg(long)]
        facts: Option<PathBuf>,
    },
    /// Decide whether two systems describe the same region under the facts.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        facts: Option<PathBuf>,
    },
    /// Re-run the shipped two-user channel derivation and score every stage.
    ReplayPaper {
        /// Read fixture files from this directory instead of the embedded copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Check facts and the end-to-end projection on random channel instances.
    Oracle {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the instantiated systems of every trial here.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Add nonnegative rates to both sides; the comparison is reported only.
        #[arg(long)]
        nonneg: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PruneArg {
    Never,
    AfterEach,
}

impl From<PruneArg> for PrunePolicy {
    fn from(p: PruneArg) -> Self {
        match p {
            PruneArg::Never => PrunePolicy::Never,
            PruneArg::AfterEach => PrunePolicy::AfterEach,
        }
    }
}

/// Parse `args` (program name first) and run; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 1 for mathematical failures, 2 for everything the user has to fix.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible
        | Error::Contradiction { .. }
        | Error::FixtureCorrupt(_)
        | Error::ResampleBudgetExceeded { .. } => 1,
        _ => 2,
    }
}

fn read_system(path: &Path) -> Result<(InequalitySystem, FactSet)> {
    let text = std::fs::read_to_string(path)?;
    let doc = parse_document(&text)?;
    Ok((doc.system, doc.facts))
}

fn with_extra_facts(facts: FactSet, path: Option<&Path>) -> Result<FactSet> {
    match path {
        None => Ok(facts),
        Some(p) => Ok(facts.merged(&read_system(p)?.1)),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn commented(text: &str) -> String {
    text.lines().map(|l| format!("# {l}\n")).collect()
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Project {
            system,
            eliminate,
            facts,
            prune: policy,
            trace,
            certs,
            output,
        } => {
            let (sys, own) = read_system(&system)?;
            let facts = with_extra_facts(own, facts.as_deref())?;
            let vars: Vec<&str> = eliminate.iter().map(String::as_str).collect();
            let p = project(&sys, &vars, &facts, policy.into())?;
            let mut text = String::new();
            if trace {
                for log in &p.logs {
                    text.push_str(&commented(&log.render(&sys)));
                }
            }
            text.push_str(&serialize_system(&p.system));
            emit(&text, output.as_deref(), out)?;
            if let Some(path) = certs {
                std::fs::write(path, format_certificates(&p.certificates))?;
            }
            Ok(0)
        }
        Command::Prune {
            system,
            facts,
            certs,
            output,
        } => {
            let (sys, own) = read_system(&system)?;
            let facts = with_extra_facts(own, facts.as_deref())?;
            let (kept, found) = prune(&sys, &facts)?;
            emit(&serialize_system(&kept), output.as_deref(), out)?;
            if let Some(path) = certs {
                std::fs::write(path, format_certificates(&found))?;
            }
            Ok(0)
        }
        Command::Certify {
            system,
            certificates,
            facts,
        } => {
            let (sys, own) = read_system(&system)?;
            let facts = with_extra_facts(own, facts.as_deref())?;
            let certs = parse_certificates(&std::fs::read_to_string(certificates)?)?;
            let mut all = true;
            for cert in &certs {
                let verdict = match sys.get(&cert.target) {
                    None => Err(format!("no inequality labelled {}", cert.target)),
                    Some(target) => {
                        let context = sys.without_labels(&[target.label()]);
                        match verify_certificate(cert, target, context.inequalities(), &facts) {
                            Ok(true) => Ok(()),
                            Ok(false) => Err("combination does not dominate the target".to_string()),
                            Err(e) => Err(e.to_string()),
                        }
                    }
                };
                match verdict {
                    Ok(()) => writeln!(out, "PASS {}", cert.target)?,
                    Err(why) => {
                        all = false;
                        writeln!(out, "FAIL {}: {why}", cert.target)?;
                    }
                }
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::Equiv { a, b, facts } => {
            let (sa, fa) = read_system(&a)?;
            let (sb, fb) = read_system(&b)?;
            let facts = with_extra_facts(fa.merged(&fb), facts.as_deref())?;
            if systems_equivalent(&sa, &sb, &facts)? {
                writeln!(out, "PASS equivalent")?;
                Ok(0)
            } else {
                writeln!(out, "FAIL not equivalent")?;
                Ok(1)
            }
        }
        Command::ReplayPaper { fixtures } => {
            let fixture = match fixtures {
                Some(dir) => load_paper_fixture_from_dir(&dir)?,
                None => load_paper_fixture()?,
            };
            let report = replay(&fixture)?;
            out.write_all(report.render().as_bytes())?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Oracle {
            trials,
            max_dim,
            seed,
            dump,
            nonneg,
        } => {
            if max_dim == 0 {
                writeln!(err, "error: --max-dim must be at least 1")?;
                return Ok(2);
            }
            let fixture = load_paper_fixture()?;
            let reports = run_trials(seed, trials, max_dim, &fixture, nonneg)?;
            let mut passed = 0;
            for r in &reports {
                writeln!(out, "{}", r.line())?;
                if r.passed() {
                    passed += 1;
                } else {
                    for l in r.pipeline.render().lines() {
                        writeln!(out, "  {l}")?;
                    }
                }
            }
            writeln!(out, "oracle: {passed}/{} trials passed", reports.len())?;
            if let Some(dir) = dump {
                dump_trials(&dir, &reports)?;
            }
            Ok(if passed == reports.len() { 0 } else { 1 })
        }
    }
}
