//! Engine invariants over seeded random expressions.

use proptest::prelude::*;
use stablerank::corpus::generate;
use stablerank::engine::{infer, infer_with, Axiom, AxiomValue, InferOptions, Quantity};
use stablerank::{AlgebraExpr, ExtNat, SpaceExpr};

fn expr(seed: u64) -> AlgebraExpr {
    generate(seed, 1).pop().unwrap()
}

fn shuffled(seed: u64) -> InferOptions {
    InferOptions {
        shuffle_seed: Some(seed),
        ..InferOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contractible_tensor_keeps_homotopy_ranks(seed in any::<u64>(), n in 1u32..8) {
        let a = expr(seed);
        let base = infer(&a, &[]).unwrap();
        for x in [SpaceExpr::Disk(n), SpaceExpr::Cube(n.min(3)), SpaceExpr::Pt] {
            let t = infer(&AlgebraExpr::tensor(x, a.clone()), &[]).unwrap();
            prop_assert_eq!(t.root_state().gsr, base.root_state().gsr);
            prop_assert_eq!(t.root_state().csr, base.root_state().csr);
        }
    }

    #[test]
    fn firing_order_does_not_matter(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let e = expr(seed);
        let a = infer_with(&e, &[], &shuffled(s1)).unwrap();
        let b = infer_with(&e, &[], &shuffled(s2)).unwrap();
        prop_assert_eq!(a.states(), b.states());
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>()) {
        let e = expr(seed);
        let a = serde_json::to_string(&infer(&e, &[]).unwrap().derivation().steps).unwrap();
        let b = serde_json::to_string(&infer(&e, &[]).unwrap().derivation().steps).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn restating_the_result_changes_nothing(seed in any::<u64>()) {
        let e = expr(seed);
        let base = infer(&e, &[]).unwrap();
        let s = base.root_state();
        let axioms: Vec<Axiom> = [(Quantity::Tsr, s.tsr), (Quantity::Gsr, s.gsr), (Quantity::Csr, s.csr)]
            .into_iter()
            .map(|(quantity, iv)| Axiom { target: "$".into(), quantity, value: AxiomValue::Interval(iv) })
            .collect();
        let again = infer(&e, &axioms).unwrap();
        prop_assert_eq!(again.states(), base.states());
    }

    #[test]
    fn axioms_only_narrow(seed in any::<u64>()) {
        let e = expr(seed);
        let base = infer(&e, &[]).unwrap();
        let csr = base.root_state().csr;
        prop_assume!(csr.hi() > csr.lo());
        let hi = if csr.hi().is_inf() { csr.lo().succ() } else { csr.hi().pred_clamped() };
        let ax = Axiom {
            target: "$".into(),
            quantity: Quantity::Csr,
            value: AxiomValue::Interval(stablerank::RankInterval::new(ExtNat::ONE, hi).unwrap()),
        };
        // A false assertion may be rejected; an accepted one never widens anything.
        if let Ok(tight) = infer(&e, &[ax]) {
            for (node, state) in base.nodes().iter().zip(base.states()) {
                let id = tight.find(&node.expr).unwrap();
                let t = tight.state(id);
                for q in [Quantity::Tsr, Quantity::Gsr, Quantity::Csr] {
                    prop_assert!(t.interval(&q).within(&state.interval(&q)), "{} {}", node.label, q);
                }
            }
        }
    }
}
