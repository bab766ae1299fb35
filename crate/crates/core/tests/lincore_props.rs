use fmelim::lincore::{parse_document, parse_system, rat, serialize_document, serialize_system, Triviality};
use fmelim::{DslErrorKind, Inequality, InequalitySystem, LinearExpression, Rational, SymbolKind, SymbolTable};
use num_traits::{One, Zero};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];
const CONSTS: [(&str, SymbolKind); 4] = [
    ("m1", SymbolKind::Dimension),
    ("r12", SymbolKind::LinkRank),
    ("k_U10_H11", SymbolKind::CompositeRank),
    ("c", SymbolKind::Opaque),
];

fn table() -> SymbolTable {
    let mut t = SymbolTable::new().with_variables(&VARS).unwrap();
    for (name, kind) in CONSTS {
        t.declare_constant(name, kind).unwrap();
    }
    t
}

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=500, 1i64..=500).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn expression() -> impl Strategy<Value = LinearExpression> {
    (
        proptest::collection::vec(rational(), VARS.len()),
        proptest::collection::vec(rational(), CONSTS.len()),
        rational(),
    )
        .prop_map(|(v, c, s)| {
            let mut e = LinearExpression::zero();
            for (name, q) in VARS.iter().zip(&v) {
                e.add_variable_term(name, q);
            }
            for ((name, _), q) in CONSTS.iter().zip(&c) {
                e.add_constant_term(name, q);
            }
            e.add_scalar(&s);
            e
        })
}

fn system() -> impl Strategy<Value = InequalitySystem> {
    proptest::collection::vec(expression(), 0..8).prop_map(|exprs| {
        let mut s = InequalitySystem::new(table());
        for (k, e) in exprs.into_iter().enumerate() {
            let ineq = Inequality::new(format!("e{k}"), e);
            if !ineq.is_contradiction() {
                s.insert(ineq).unwrap();
            }
        }
        s
    })
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(e in expression()) {
        let once = Inequality::new("t", e).canonicalize();
        prop_assert!(once.is_canonical());
        prop_assert_eq!(once.canonicalize(), once);
    }

    #[test]
    fn canonicalize_is_scale_invariant(e in expression(), q in positive_rational()) {
        let a = Inequality::new("t", e.clone()).canonicalize();
        let b = Inequality::new("t", e.scaled(&q)).canonicalize();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn canonical_coefficients_are_coprime_integers(e in expression()) {
        let c = Inequality::new("t", e).canonicalize();
        let all: Vec<&Rational> = c.expr().variable_terms().values()
            .chain(c.expr().constant_terms().values())
            .chain(std::iter::once(c.expr().scalar()))
            .collect();
        prop_assert!(all.iter().all(|q| q.is_integer()));
        let g = all.iter().fold(num_bigint::BigInt::zero(), |g, q| num_integer::Integer::gcd(&g, q.numer()));
        prop_assert!(g.is_zero() || g.is_one());
    }

    #[test]
    fn rational_arithmetic_is_exact(a in rational(), b in rational(), c in positive_rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &c) / &c, a.clone());
        prop_assert!(*(&a * &c).denom() > num_bigint::BigInt::zero());
    }

    #[test]
    fn adding_twice_changes_nothing(s in system(), e in expression()) {
        let ineq = Inequality::new("dup", e);
        prop_assume!(!ineq.is_contradiction());
        let mut once = s.clone();
        once.insert(ineq.clone()).unwrap();
        let mut twice = once.clone();
        twice.insert(ineq).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn serialization_ignores_insertion_order(s in system()) {
        let mut reversed = InequalitySystem::new(table());
        for i in s.inequalities().iter().rev() {
            reversed.insert(i.clone()).unwrap();
        }
        prop_assert_eq!(serialize_system(&s), serialize_system(&reversed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn parse_serialize_round_trip(s in system()) {
        let text = serialize_system(&s);
        let (back, facts) = parse_system(&text).unwrap();
        prop_assert!(facts.is_empty());
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize_system(&back), text);
    }
}

#[test]
fn gcd_scaling_example() {
    let (s, _) = parse_system("var R1 R2\nsym m1\nineq a: 2*R1 + 4*R2 - 2*m1 <= 0").unwrap();
    let e = s.inequalities()[0].expr();
    assert_eq!(e.variable_coeff("R1"), rat(1));
    assert_eq!(e.variable_coeff("R2"), rat(2));
    assert_eq!(e.constant_coeff("m1"), rat(-1));
}

#[test]
fn upper_bound_keeps_its_orientation() {
    let (s, _) = parse_system("var R1c\nsym k_U1_H11_V21\nineq cp11: R1c <= k_U1_H11_V21").unwrap();
    let e = s.inequalities()[0].expr();
    assert_eq!(e.variable_coeff("R1c"), rat(1));
    assert_eq!(e.constant_coeff("k_U1_H11_V21"), rat(-1));
}

#[test]
fn zero_is_a_tautology() {
    let t = Inequality::new("z", LinearExpression::zero());
    assert_eq!(t.triviality(), Triviality::Tautology);
    let mut one = LinearExpression::zero();
    one.add_scalar(&rat(1));
    assert_eq!(Inequality::new("c", one).triviality(), Triviality::Contradiction);
}

#[test]
fn parse_examples() {
    let (s, f) = parse_system("var R1c\nsym r21\nineq cp23: R1c <= r21").unwrap();
    assert_eq!(s.labels(), ["cp23"]);
    assert!(f.is_empty());
    let (s, f) = parse_system("").unwrap();
    assert!(s.is_empty() && f.is_empty());
    assert_eq!(serialize_system(&s), "# fmelim inequality system\n");
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_system("ineq x: R9 <= 1").unwrap_err();
    assert!(matches!(e.kind, DslErrorKind::UndeclaredSymbol(ref n) if n == "R9"), "{e:?}");
    assert_eq!((e.line, e.column), (1, 9));

    let e = parse_system("var x\nvar x").unwrap_err();
    assert!(matches!(e.kind, DslErrorKind::DuplicateDeclaration(_)));
    assert_eq!(e.line, 2);

    let e = parse_system("var x\nineq a: x <== 1").unwrap_err();
    assert!(matches!(e.kind, DslErrorKind::Syntax(_)));
    assert_eq!(e.line, 2);

    let e = parse_system("var x\nineq a: x == 1").unwrap_err();
    assert!(matches!(e.kind, DslErrorKind::Syntax(_)));

    let e = parse_system("var x\nsym a\nfact f: x <= a").unwrap_err();
    assert!(matches!(e.kind, DslErrorKind::FactMentionsVariable { .. }));
}

#[test]
fn documents_round_trip_with_facts() {
    let text = "var x\nsym a b\nineq u: x <= a\nfact f: a == b\nfact g: a >= 0\n";
    let doc = parse_document(text).unwrap();
    assert_eq!(doc.facts.len(), 3);
    let again = parse_document(&serialize_document(&doc.system, &doc.facts)).unwrap();
    assert_eq!(again.system, doc.system);
    assert_eq!(again.facts, doc.facts);
}

#[test]
fn substitution_examples() {
    let (s, _) = parse_system("var x y\nineq a: x + y <= 1").unwrap();
    assert_eq!(s.substitute_variable("w", &LinearExpression::variable("y")).unwrap(), s);
    let x1 = LinearExpression::variable("x") + LinearExpression::scalar_only(Rational::one());
    assert!(matches!(
        s.substitute_variable("x", &x1),
        Err(fmelim::Error::SelfReference(_))
    ));
}
