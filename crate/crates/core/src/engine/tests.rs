use super::*;
use crate::dsl::parse;
use crate::lattice::TriBool;

fn e(src: &str) -> AlgebraExpr {
    parse(src).unwrap()
}

fn iv(lo: u64, hi: u64) -> RankInterval {
    RankInterval::new(ExtNat::fin(lo), ExtNat::fin(hi)).unwrap()
}

fn root(src: &str) -> RankState {
    infer(&e(src), &[]).unwrap().root_state().clone()
}

#[test]
fn sphere_five() {
    let s = root("Cx(S(5))");
    assert_eq!(s.gsr, iv(4, 4));
    assert_eq!(s.csr, iv(4, 4));
}

#[test]
fn finite_dimensional() {
    let s = root("F(2, 3)");
    assert_eq!(s.tsr, iv(1, 1));
    assert_eq!(s.gsr, iv(1, 1));
    assert_eq!(s.csr, iv(1, 1));
    assert_eq!(s.k1_zero, TriBool::Yes);
    assert_eq!(s.finite, TriBool::Yes);
}

#[test]
fn matrix_over_torus() {
    let inf = infer(&e("M(3, Cx(T(6)))"), &[]).unwrap();
    assert_eq!(inf.root_state().csr, iv(1, 2));
    let chain = explain(inf.derivation(), inf.root(), &Quantity::Csr).unwrap();
    let rules: Vec<_> = chain.iter().filter_map(|s| s.source.rule()).collect();
    assert_eq!(rules.first(), Some(&RuleId::R23));
    assert_eq!(rules.last(), Some(&RuleId::R3));
    let hi_step = chain.last().unwrap();
    assert!(hi_step.citation.contains("⌈(csr(A)-1)/n⌉"));
}

#[test]
fn kirchberg_tensor() {
    let s = root("Cx(cw(6))*Oinf");
    assert_eq!(s.gsr, iv(2, 2));
    assert_eq!(s.csr, iv(2, 2));
}

#[test]
fn rotation_tensor() {
    for n in 0..=4 {
        let s = root(&format!("Cx(cw({n}))*rot"));
        assert_eq!(s.gsr, iv(1, 1), "n = {n}");
        assert_eq!(s.csr, iv(2, 2), "n = {n}");
    }
}

#[test]
fn sphere_gsr_chain_ends_in_closed_form() {
    let inf = infer(&e("Cx(S(5))"), &[]).unwrap();
    let chain = explain(inf.derivation(), inf.root(), &Quantity::Gsr).unwrap();
    assert!(chain.iter().any(|s| s.source == Source::Rule(RuleId::R23)));
}

#[test]
fn disks_are_scalars() {
    let c = root("C");
    for n in 1..=9 {
        let s = root(&format!("Cx(D({n}))"));
        assert_eq!((s.gsr, s.csr), (c.gsr, c.csr), "n = {n}");
        assert_eq!(s.k1_zero, c.k1_zero, "n = {n}");
        // tsr(C(D^n)) grows with n, so only the homotopy invariants are copied.
        assert!(s.tsr.contains(ExtNat::fin(n / 2 + 1)), "n = {n}");
    }
}

#[test]
fn torus_values() {
    for d in 1..=10u64 {
        let s = root(&format!("Cx(T({d}))"));
        let g = crate::spaces::gsr_commutative_torus(d);
        let c = crate::spaces::csr_commutative_torus(d);
        assert_eq!(s.gsr, RankInterval::exact(g), "d = {d}");
        assert_eq!(s.csr, RankInterval::exact(c), "d = {d}");
    }
}

#[test]
fn sphere_pullback_matches_closed_form() {
    for d in 5..=10u64 {
        let src = format!("pullback(Cx(D({d})), Cx(D({d})); Cx(S({})))", d - 1);
        let s = root(&src);
        assert_eq!(
            s.gsr.hi(),
            crate::spaces::gsr_commutative_sphere(d),
            "d = {d}"
        );
    }
}

#[test]
fn direct_sum_takes_max() {
    let s = root("Cx(T(6)) (+) C");
    assert_eq!(s.csr, iv(4, 4));
    assert_eq!(s.gsr, iv(4, 4));
}

#[test]
fn cuntz_has_infinite_gsr() {
    let s = root("cuntz(3)");
    assert_eq!(s.ibn, TriBool::No);
    assert_eq!(s.gsr, RankInterval::exact(ExtNat::INF));
}

#[test]
fn bad_axiom_is_inconsistent() {
    let ax = Axiom {
        target: "$".into(),
        quantity: Quantity::Csr,
        value: AxiomValue::Interval(iv(5, 5)),
    };
    let err = infer(&e("C"), &[ax]).unwrap_err();
    assert!(matches!(err, EngineError::Inconsistent(_)), "{err}");
    assert!(err.to_string().contains("AXIOM"), "{err}");
}

#[test]
fn axiom_on_child_propagates() {
    let ax = Axiom {
        target: "$.0".into(),
        quantity: Quantity::Csr,
        value: AxiomValue::Interval(iv(1, 3)),
    };
    let inf = infer(&e("M(2, rr0(AF))"), &[ax]).unwrap();
    assert!(inf.root_state().csr.hi() <= ExtNat::fin(2));
    assert_eq!(inf.derivation().steps[0].source, Source::Axiom);
}

#[test]
fn unknown_axiom_target() {
    let ax = Axiom {
        target: "$.3".into(),
        quantity: Quantity::Tsr,
        value: AxiomValue::Interval(iv(1, 1)),
    };
    assert!(matches!(
        infer(&e("C"), &[ax]),
        Err(EngineError::UnknownNode(_))
    ));
}

#[test]
fn axioms_file_parses() {
    let json = r#"[
        {"node": "$", "quantity": "csr", "lo": 1, "hi": "inf"},
        {"node": "$.0", "quantity": "k1_zero", "value": true},
        {"node": "C", "quantity": "inj_0", "hi": 1}
    ]"#;
    let ax = parse_axioms(json).unwrap();
    assert_eq!(ax.len(), 3);
    assert_eq!(ax[1].value, AxiomValue::Flag(true));
    assert!(parse_axioms(r#"[{"node": "$", "quantity": "csr"}]"#).is_err());
    assert!(parse_axioms(r#"[{"node": "$", "quantity": "nope", "hi": 2}]"#).is_err());
}

#[test]
fn size_limit() {
    let opts = InferOptions {
        max_nodes: 3,
        shuffle_seed: None,
    };
    assert!(matches!(
        infer_with(&e("M(2, C) (+) M(3, C) (+) Cx(S(3))"), &[], &opts),
        Err(EngineError::SizeLimit { limit: 3 })
    ));
}

#[test]
fn consistency_checks() {
    assert!(check_consistency(&vec![RankState::default(); 3]).is_empty());
    let bad = RankState {
        csr: iv(1, 1),
        gsr: iv(2, 2),
        ..RankState::default()
    };
    assert_eq!(check_consistency(&[bad]).len(), 1);
    for src in [
        "C",
        "F(1, 2)",
        "rot",
        "AF",
        "Oinf",
        "kirchberg_ibn",
        "cuntz(2)",
        "pis_corner",
    ] {
        let inf = infer(&e(src), &[]).unwrap();
        assert!(check_consistency(inf.states()).is_empty(), "{src}");
    }
}

#[test]
fn shuffled_runs_agree() {
    for src in [
        "Cx(S(7))",
        "pullback(Cx(D(6)), Cx(D(6)); Cx(S(5)))",
        "M(2, Cx(prod(T(2), S(3)))) (+) nccw(F(1); 1: F(1); 2: F(1, 2))",
        "ext(Cx(wedge(S(6), T(3))), rot)",
    ] {
        let base = infer(&e(src), &[]).unwrap();
        for seed in 0..4 {
            let opts = InferOptions {
                max_nodes: DEFAULT_MAX_NODES,
                shuffle_seed: Some(seed),
            };
            let other = infer_with(&e(src), &[], &opts).unwrap();
            assert_eq!(base.states(), other.states(), "{src}, seed {seed}");
        }
    }
}

#[test]
fn quotient_bound_from_asserted_extension() {
    let ax = |q, hi| Axiom {
        target: "$".into(),
        quantity: q,
        value: AxiomValue::Interval(RankInterval::at_most(ExtNat::fin(hi))),
    };
    let src = "ext(C, Cx(cw(9)))";
    let inf = infer(&e(src), &[ax(Quantity::Tsr, 2), ax(Quantity::Csr, 3)]).unwrap();
    let b = inf.find(&e("Cx(cw(9))")).unwrap();
    assert_eq!(inf.state(b).csr.hi(), ExtNat::fin(3));
    let chain = explain(inf.derivation(), b, &Quantity::Csr).unwrap();
    assert_eq!(chain.last().unwrap().source, Source::Rule(RuleId::R25));
    assert!(chain.iter().any(|s| s.source == Source::Axiom));
}
