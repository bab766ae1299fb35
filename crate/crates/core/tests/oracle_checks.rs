use fmelim::lincore::rat;
use fmelim::oracle::{
    rank_exact, run_trials, sample_dims, sample_instance, verify_facts, verify_pipeline, ChannelDims, QMatrix,
};
use fmelim::rankfacts::load_paper_fixture;
use fmelim::Rational;

fn int(v: usize) -> Rational {
    rat(v as i64)
}

#[test]
fn rank_examples() {
    assert_eq!(rank_exact(&QMatrix::zeros(0, 4)), 0);
    assert_eq!(rank_exact(&QMatrix::zeros(4, 0)), 0);
    assert_eq!(rank_exact(&QMatrix::identity(3)), 3);
    assert_eq!(rank_exact(&QMatrix::from_ints(2, 2, &[1, 2, 2, 4])), 1);
}

#[test]
fn sampled_dims_are_valid_and_reproducible() {
    let first: Vec<ChannelDims> = (0..100).map(|s| sample_dims(s, 4).unwrap()).collect();
    let again: Vec<ChannelDims> = (0..100).map(|s| sample_dims(s, 4).unwrap()).collect();
    assert_eq!(first, again);
    for d in &first {
        d.validate().unwrap();
        assert!(d.r11 + d.r12 >= d.n1);
        assert!([d.n1, d.n2, d.m1, d.m2, d.r11, d.r12, d.r21, d.r22].iter().all(|&x| (1..=4).contains(&x)));
    }
    assert!(first.iter().any(|d| d != &first[0]), "seeds must matter");
}

#[test]
fn instance_invariants() {
    for seed in 0..30 {
        let d = sample_dims(seed, 5).unwrap();
        let inst = sample_instance(d, seed).unwrap();
        assert!(inst.ranks_valid() && inst.bases_valid());
        let a = &inst.assignment;
        assert_eq!(a["k_U10_H11"], int(d.n1 - d.r12));
        assert_eq!(a["k_U20_H22"], int(d.n2 - d.r21));
        assert_eq!(a["k_H11_V20"], int(d.m1 - d.r21));
        assert_eq!(a["k_H22_V10"], int(d.m2 - d.r12));
        assert_eq!(a["k_U1_H11_V21"], a["k_H11_V21"]);
        assert_eq!(a["k_U2_H22_V11"], a["k_H22_V11"]);
    }
}

#[test]
fn fact_slacks_on_random_instances() {
    let f = load_paper_fixture().unwrap();
    for seed in 0..50 {
        let d = sample_dims(seed, 5).unwrap();
        let inst = sample_instance(d, seed).unwrap();
        let report = verify_facts(&inst.assignment, &f.facts).unwrap();
        assert!(report.passed(), "seed {seed}: {:?}", report.failures().collect::<Vec<_>>());
        let five = report.get("fact:5").unwrap();
        let a = &inst.assignment;
        assert_eq!(five.slack, &a["k_H11_V21"] - (int(d.r11) + int(d.r21) - int(d.m1)));
    }
}

#[test]
fn all_ones_fact_nine() {
    let f = load_paper_fixture().unwrap();
    let inst = sample_instance(ChannelDims::all_ones(), 1).unwrap();
    let report = verify_facts(&inst.assignment, &f.facts).unwrap();
    // 0 >= 1 + 1 - 1 - 1 - 1
    assert_eq!(report.get("fact:9").unwrap().slack, rat(1));
    assert!(report.passed());
}

#[test]
fn all_ones_pipeline_region() {
    let f = load_paper_fixture().unwrap();
    let inst = sample_instance(ChannelDims::all_ones(), 1).unwrap();
    let report = verify_pipeline(&inst.assignment, &f, false).unwrap();
    assert!(report.equivalent, "{}", report.render());
    let text = report.symbolic.pretty();
    for bound in ["R1 <= 1", "R2 <= 1", "R1 + R2 <= 1", "R1 + 2*R2 <= 2", "2*R1 + R2 <= 2"] {
        assert!(text.contains(bound), "{bound} missing from\n{text}");
    }
}

#[test]
fn perturbed_assignment_flags_fact_one_first() {
    let f = load_paper_fixture().unwrap();
    let inst = sample_instance(sample_dims(4, 5).unwrap(), 4).unwrap();
    let mut a = inst.assignment.clone();
    *a.get_mut("k_U10_H11").unwrap() -= rat(1);
    let report = verify_pipeline(&a, &f, false).unwrap();
    assert_eq!(report.facts.failures().next().unwrap().label, "fact:1");
    assert!(report.render().starts_with("violated fact fact:1"));
}

#[test]
fn trials_are_deterministic_and_pass() {
    let f = load_paper_fixture().unwrap();
    let a = run_trials(7, 20, 5, &f, false).unwrap();
    let b = run_trials(7, 20, 5, &f, false).unwrap();
    let lines = |r: &[fmelim::oracle::TrialReport]| r.iter().map(|t| t.line()).collect::<Vec<_>>();
    assert_eq!(lines(&a), lines(&b));
    assert!(a.iter().all(|t| t.passed()));
    assert_eq!(a.iter().map(|t| t.seed).collect::<Vec<_>>(), (7..27).collect::<Vec<_>>());
}
