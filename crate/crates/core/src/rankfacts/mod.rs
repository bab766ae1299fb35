//! Shipped fixtures for the two-user MIMO interference channel derivation.
//!
//! Each stage of the derivation is a DSL file under `fixtures/`, embedded at
//! compile time and pinned by SHA-256. The fact set holds the rank
//! identities and lower bounds over the symbolic constants, the two
//! identifications `rank(UᵢᵀHᵢᵢVⱼ₁) = rank(HᵢᵢVⱼ₁)`, and the handful of
//! generic rank axioms the redundancy arguments lean on.

mod replay;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use sha2::{Digest, Sha256};

pub use replay::{replay, Check, ReplayReport, StageReport, Status};

use crate::error::{Error, Result};
use crate::implication::FactSet;
use crate::lincore::{parse_document, InequalitySystem, SymbolTable};

/// The fixture files, their embedded text and pinned digests.
pub const FIXTURE_FILES: [(&str, &str, &str); 6] = [
    (
        "start_full.dsl",
        include_str!("../../fixtures/start_full.dsl"),
        "95c1092667083485d3f2b2b20dc246407678f8f0a798bf0982c59b7e5fc16945",
    ),
    (
        "start_reduced.dsl",
        include_str!("../../fixtures/start_reduced.dsl"),
        "08d8e6702278cd3b31728e24a92e08c235b99a88ad0de93a4cfee342dc069114",
    ),
    ("stage1.dsl", include_str!("../../fixtures/stage1.dsl"), "4723519ad8c8410eaeb27ee2f561ea66e73ace2cff46dbc767753590ba0ef95f"),
    ("stage2.dsl", include_str!("../../fixtures/stage2.dsl"), "ef3bf2bdcff299fecfae64f4383d189de0146c12514f72f920ce1c9d3d02ce0e"),
    ("final.dsl", include_str!("../../fixtures/final.dsl"), "d24b8f16ad7ebc2d8af89f36d69cc884841dc3e65528c2786b211dca87759f59"),
    ("facts.dsl", include_str!("../../fixtures/facts.dsl"), "5014c9c670423c337740e4c56e21cd9eba2eeebe156b96072cc41c1e5b4c94f9"),
];

/// Serialized form of the final system, byte for byte.
pub const FINAL_GOLDEN: &str = include_str!("../../fixtures/golden/final.dsl");

/// Every system of the derivation together with its facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperFixture {
    pub table: SymbolTable,
    /// Split-rate region, 14 inequalities.
    pub start_full: InequalitySystem,
    /// After removing two bounds and substituting the private rates, 12.
    pub start_reduced: InequalitySystem,
    /// After eliminating `R1c`, 15.
    pub stage1: InequalitySystem,
    /// After eliminating `R2c`, 16.
    pub stage2: InequalitySystem,
    /// The seven final bounds on `(R1, R2)`.
    pub final_bounds: InequalitySystem,
    pub facts: FactSet,
    pub expected_redundancies: BTreeMap<u32, BTreeSet<String>>,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn checked<'a>(name: &str, text: &'a str, digest: &str) -> Result<&'a str> {
    if sha256_hex(text) != digest {
        return Err(Error::FixtureCorrupt(name.to_string()));
    }
    Ok(text)
}

fn build(texts: [&str; 6]) -> Result<PaperFixture> {
    let [full, reduced, s1, s2, fin, facts] = texts.map(|t| parse_document(t).map_err(Error::from));
    let start_full = full?.system;
    let table = start_full.table().clone();
    let facts = facts?.facts;
    let expected_redundancies = (0..=2)
        .map(|s| Ok((s, expected_redundancy_labels(s)?)))
        .collect::<Result<_>>()?;
    Ok(PaperFixture {
        table,
        start_full,
        start_reduced: reduced?.system,
        stage1: s1?.system,
        stage2: s2?.system,
        final_bounds: fin?.system,
        facts,
        expected_redundancies,
    })
}

/// Parse the embedded fixtures after checking their digests.
pub fn load_paper_fixture() -> Result<PaperFixture> {
    let mut texts = [""; 6];
    for (k, (name, text, digest)) in FIXTURE_FILES.iter().enumerate() {
        texts[k] = checked(name, text, digest)?;
    }
    build(texts)
}

/// Same as [`load_paper_fixture`] but reads the files from `dir`.
pub fn load_paper_fixture_from_dir(dir: &Path) -> Result<PaperFixture> {
    let mut owned = Vec::new();
    for (name, _, digest) in FIXTURE_FILES.iter() {
        let text = std::fs::read_to_string(dir.join(name))?;
        checked(name, &text, digest)?;
        owned.push(text);
    }
    let texts: [&str; 6] = std::array::from_fn(|k| owned[k].as_str());
    build(texts)
}

/// Labels the derivation drops as redundant at each stage: 0 before the
/// substitution, 1 after eliminating `R1c`, 2 after eliminating `R2c`.
pub fn expected_redundancy_labels(stage: u32) -> Result<BTreeSet<String>> {
    let labels: &[&str] = match stage {
        0 => &["cp13", "cp23"],
        1 => &["v26", "v210", "v211"],
        2 => &["v36", "v37", "v39", "v310", "v312", "v313", "v314", "v315", "v316"],
        other => return Err(Error::UnknownStage(other)),
    };
    Ok(labels.iter().map(|s| s.to_string()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincore::{Inequality, LinearExpression};

    fn var(n: &str) -> LinearExpression {
        LinearExpression::variable(n)
    }
    fn sym(n: &str) -> LinearExpression {
        LinearExpression::constant(n)
    }

    #[test]
    fn stage_sizes() {
        let f = load_paper_fixture().unwrap();
        assert_eq!(f.start_full.len(), 14);
        assert_eq!(f.start_reduced.len(), 12);
        assert_eq!(f.stage1.len(), 15);
        assert_eq!(f.stage2.len(), 16);
        assert_eq!(f.final_bounds.len(), 7);
    }

    #[test]
    fn final_contains_bound6() {
        let f = load_paper_fixture().unwrap();
        let lhs = var("R1").scaled(&crate::lincore::rat(2)) + var("R2");
        let rhs = sym("k_U20_H22_V10") + sym("m1") + sym("n1");
        assert!(f.final_bounds.contains_constraint(&Inequality::le("b", &lhs, &rhs)));
    }

    #[test]
    fn fact_three_is_an_equality() {
        let f = load_paper_fixture().unwrap();
        let halves = f.facts.by_identity("fact:3");
        assert_eq!(halves.len(), 2);
        let diff = sym("k_H11_V20") - sym("m1") + sym("r21");
        assert!(halves.iter().any(|h| h.expr() == &diff));
        assert!(halves.iter().any(|h| h.expr() == &-diff.clone()));
    }

    #[test]
    fn loading_is_deterministic() {
        assert_eq!(load_paper_fixture().unwrap(), load_paper_fixture().unwrap());
    }

    #[test]
    fn no_orphan_symbols() {
        let f = load_paper_fixture().unwrap();
        for sys in [&f.start_full, &f.start_reduced, &f.stage1, &f.stage2, &f.final_bounds] {
            for name in sys.iter().flat_map(|i| i.expr().symbols()) {
                assert!(f.table.class_of(name).is_some(), "{name}");
            }
        }
        for name in f.facts.iter().flat_map(|i| i.expr().symbols()) {
            assert!(f.table.is_constant(name), "{name}");
        }
    }

    #[test]
    fn redundancy_labels() {
        let s2 = expected_redundancy_labels(2).unwrap();
        assert_eq!(s2.len(), 9);
        assert!(s2.contains("v316"));
        assert_eq!(
            expected_redundancy_labels(0).unwrap(),
            ["cp13", "cp23"].iter().map(|s| s.to_string()).collect()
        );
        assert_eq!(expected_redundancy_labels(1).unwrap().len(), 3);
        assert!(matches!(expected_redundancy_labels(3), Err(Error::UnknownStage(3))));
    }

    #[test]
    fn corrupted_fixture_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        for (name, text, _) in FIXTURE_FILES.iter() {
            std::fs::write(dir.path().join(name), text).unwrap();
        }
        assert!(load_paper_fixture_from_dir(dir.path()).is_ok());
        let path = dir.path().join("stage2.dsl");
        let text = std::fs::read_to_string(&path).unwrap().replace("v36: R2", "v36: 2*R2");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(
            load_paper_fixture_from_dir(dir.path()),
            Err(Error::FixtureCorrupt(name)) if name == "stage2.dsl"
        ));
    }
}
