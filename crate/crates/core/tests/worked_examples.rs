//! Per-operation examples across the public API.

use stablerank::engine::{check_consistency, explain, infer, Quantity, RankState, RuleId};
use stablerank::homotopy::{
    bott_stable_bound, slots_class_f, slots_finite_dimensional, slots_from_ranks,
    slots_sphere_tensor, SlotKey, SlotTable,
};
use stablerank::lattice::{ceil_div, interval_meet};
use stablerank::nccw::{csr_upper_nccw, lower_to_pullback, NccwComplex, NccwStage};
use stablerank::spaces::{
    csr_commutative_torus, dim_upper, dominates, gsr_commutative_sphere, gsr_commutative_torus,
    inj_space_scalars, normalize_space, SpaceExpr,
};
use stablerank::{format, parse, AlgebraExpr, ExtNat, RankInterval, TriBool};

use SpaceExpr::*;

fn fin(n: u64) -> ExtNat {
    ExtNat::fin(n)
}

fn iv(lo: u64, hi: u64) -> RankInterval {
    RankInterval::new(fin(lo), fin(hi)).unwrap()
}

fn up_to(hi: u64) -> RankInterval {
    RankInterval::at_most(fin(hi))
}

fn nz(n: u64) -> std::num::NonZeroU64 {
    std::num::NonZeroU64::new(n).unwrap()
}

#[test]
fn ceil_div_examples() {
    assert_eq!(ceil_div(9, nz(2)), 5);
    assert_eq!(ceil_div(4, nz(4)), 1);
    assert_eq!(ceil_div(5, nz(2)), 3);
}

#[test]
fn interval_meet_examples() {
    let unknown = RankInterval::UNKNOWN;
    assert_eq!(interval_meet(&unknown, &iv(2, 5)).unwrap(), iv(2, 5));
    assert_eq!(interval_meet(&iv(4, 4), &iv(1, 4)).unwrap(), iv(4, 4));
    let three_up = RankInterval::new(fin(4), ExtNat::INF).unwrap();
    assert_eq!(interval_meet(&iv(3, 5), &three_up).unwrap(), iv(4, 5));
    assert!(interval_meet(&iv(1, 1), &iv(5, 5)).is_err());
}

#[test]
fn normalize_examples() {
    assert_eq!(normalize_space(&Disk(7)), Pt);
    assert_eq!(normalize_space(&SpaceExpr::prod(Pt, Sphere(3))), Sphere(3));
    assert_eq!(normalize_space(&SpaceExpr::wedge(Pt, Torus(2))), Torus(2));
    assert_eq!(normalize_space(&SpaceExpr::susp(Sphere(4))), Sphere(5));
}

#[test]
fn dim_upper_examples() {
    assert_eq!(dim_upper(&Torus(3)), 3);
    assert_eq!(dim_upper(&SpaceExpr::prod(Sphere(2), Torus(2))), 4);
    assert_eq!(dim_upper(&SpaceExpr::wedge(Sphere(5), Sphere(8))), 8);
}

#[test]
fn commutative_closed_forms() {
    assert_eq!(gsr_commutative_sphere(5), fin(4));
    assert_eq!(gsr_commutative_sphere(4), fin(1));
    assert_eq!(gsr_commutative_sphere(8), fin(4));
    assert_eq!(gsr_commutative_torus(4), fin(1));
    assert_eq!(gsr_commutative_torus(5), fin(4));
    assert_eq!(gsr_commutative_torus(9), fin(6));
    assert_eq!(csr_commutative_torus(1), fin(2));
    assert_eq!(csr_commutative_torus(3), fin(3));
    assert_eq!(csr_commutative_torus(6), fin(4));
}

#[test]
fn inj_space_scalar_examples() {
    assert_eq!(inj_space_scalars(&Sphere(4)), iv(4, 4));
    assert_eq!(inj_space_scalars(&Pt), iv(1, 1));
    assert_eq!(inj_space_scalars(&Torus(4)), iv(4, 4));
}

#[test]
fn domination_examples() {
    assert_eq!(
        dominates(&SpaceExpr::susp(Torus(4)), &Sphere(5)),
        TriBool::Yes
    );
    assert_eq!(
        dominates(&SpaceExpr::wedge(Sphere(2), Sphere(7)), &Sphere(7)),
        TriBool::Yes
    );
    assert_eq!(dominates(&Sphere(2), &Sphere(3)), TriBool::Unknown);
}

#[test]
fn bott_examples() {
    assert_eq!(bott_stable_bound(4, 1), 3);
    assert_eq!(bott_stable_bound(1, 1), 2);
    assert_eq!(bott_stable_bound(6, 3), 2);
}

#[test]
fn finite_dimensional_slots() {
    assert_eq!(slots_finite_dimensional(&[1], 1).1, up_to(2));
    // surj_4 of F(2, 3) sits at the Bott threshold; inj_4 needs one more degree.
    assert_eq!(slots_finite_dimensional(&[2, 3], 4).1, up_to(2));
    assert_eq!(slots_finite_dimensional(&[2, 3], 4).0, up_to(3));
    assert_eq!(slots_finite_dimensional(&[1], 0), (iv(1, 1), iv(1, 1)));
}

#[test]
fn class_f_slots() {
    for k in [0, 1, 5] {
        assert_eq!(slots_class_f(k), (iv(1, 1), iv(1, 2)));
    }
}

#[test]
fn slots_from_rank_examples() {
    let u = RankInterval::UNKNOWN;
    let got = slots_from_ranks(iv(1, 1), u, u);
    assert!(got.contains(&(SlotKey::Surj(0), up_to(1))));
    let got = slots_from_ranks(u, iv(1, 3), u);
    assert!(got.contains(&(SlotKey::Inj(0), up_to(3))));
    let got = slots_from_ranks(u, u, iv(1, 2));
    assert!(got.contains(&(SlotKey::Inj(0), up_to(2))));
    assert!(got.contains(&(SlotKey::Surj(1), up_to(2))));
}

#[test]
fn sphere_tensor_examples() {
    let mut scalars = SlotTable::default();
    for k in 0..=5 {
        let (inj, surj) = slots_finite_dimensional(&[1], k);
        scalars.tighten(SlotKey::Inj(k), inj).unwrap();
        scalars.tighten(SlotKey::Surj(k), surj).unwrap();
    }
    assert_eq!(slots_sphere_tensor(&scalars, 5).hi(), fin(4));

    let mut class_f = SlotTable::default();
    for k in 0..=5 {
        let (inj, surj) = slots_class_f(k);
        class_f.tighten(SlotKey::Inj(k), inj).unwrap();
        class_f.tighten(SlotKey::Surj(k), surj).unwrap();
    }
    assert_eq!(slots_sphere_tensor(&class_f, 5).hi(), fin(2));

    let mut ones = SlotTable::default();
    for k in 0..=5 {
        ones.tighten(SlotKey::Inj(k), iv(1, 1)).unwrap();
        ones.tighten(SlotKey::Surj(k), iv(1, 1)).unwrap();
    }
    assert_eq!(slots_sphere_tensor(&ones, 5).hi(), fin(1));
}

#[test]
fn nccw_examples() {
    assert_eq!(csr_upper_nccw(&NccwComplex::standard(5)), fin(4));
    let single = NccwComplex::new(
        vec![1],
        vec![NccwStage {
            dim: 4,
            blocks: vec![2],
        }],
    )
    .unwrap();
    assert_eq!(csr_upper_nccw(&single), fin(2));
    let bare = NccwComplex::new(vec![2, 3], vec![]).unwrap();
    assert_eq!(csr_upper_nccw(&bare), fin(1));
}

#[test]
fn nccw_lowering() {
    let bare = NccwComplex::new(vec![2, 3], vec![]).unwrap();
    assert_eq!(lower_to_pullback(&bare), AlgebraExpr::FiniteDim(vec![2, 3]));
    let one = NccwComplex::new(
        vec![1, 1],
        vec![NccwStage {
            dim: 1,
            blocks: vec![1],
        }],
    )
    .unwrap();
    let f1 = AlgebraExpr::FiniteDim(vec![1]);
    assert_eq!(
        lower_to_pullback(&one),
        AlgebraExpr::pullback(
            AlgebraExpr::FiniteDim(vec![1, 1]),
            AlgebraExpr::tensor(Disk(1), f1.clone()),
            AlgebraExpr::tensor(Sphere(0), f1),
        )
    );
    let mut nesting = 0;
    let mut cur = lower_to_pullback(&NccwComplex::standard(2));
    while let AlgebraExpr::Pullback { b, .. } = cur {
        nesting += 1;
        cur = *b;
    }
    assert_eq!(nesting, 2);
}

#[test]
fn nccw_direct_and_lowered_agree() {
    for n in 1..=6 {
        let c = NccwComplex::standard(n);
        let direct = infer(&AlgebraExpr::Nccw(c.clone()), &[]).unwrap();
        let lowered = infer(&lower_to_pullback(&c), &[]).unwrap();
        assert!(direct.root_state().csr.hi() <= csr_upper_nccw(&c));
        assert_eq!(direct.root_state().csr, lowered.root_state().csr, "n = {n}");
    }
}

#[test]
fn parse_examples() {
    assert_eq!(
        parse("M(2, Cx(S(5)))").unwrap(),
        AlgebraExpr::matrix(2, AlgebraExpr::commutative(Sphere(5)))
    );
    assert_eq!(
        parse("F(2,3) (+) C").unwrap(),
        AlgebraExpr::direct_sum(AlgebraExpr::FiniteDim(vec![2, 3]), AlgebraExpr::Scalars)
    );
    let err = parse("M(2,").unwrap_err();
    assert_eq!((err.offset, err.column()), (4, 5));
}

#[test]
fn format_examples() {
    assert_eq!(format(&AlgebraExpr::Scalars), "C");
    assert_eq!(format(&AlgebraExpr::commutative(Torus(6))), "Cx(T(6))");
    let e = parse("Cx(wedge(S(2), T(3)))*(rot (+) M(2, AF))").unwrap();
    assert_eq!(parse(&format(&e)).unwrap(), e);
}

#[test]
fn infer_examples() {
    let root = |src: &str| {
        infer(&parse(src).unwrap(), &[])
            .unwrap()
            .root_state()
            .clone()
    };
    let s = root("Cx(S(5))");
    assert_eq!((s.gsr, s.csr), (iv(4, 4), iv(4, 4)));
    let s = root("F(2, 3)");
    assert_eq!((s.tsr, s.gsr, s.csr), (iv(1, 1), iv(1, 1), iv(1, 1)));
    assert_eq!(root("M(3, Cx(T(6)))").csr, iv(1, 2));
    let s = root("Cx(cw(6))*Oinf");
    assert_eq!((s.gsr, s.csr), (iv(2, 2), iv(2, 2)));
}

#[test]
fn explain_examples() {
    let inf = infer(&parse("Cx(S(5))").unwrap(), &[]).unwrap();
    let chain = explain(inf.derivation(), inf.root(), &Quantity::Gsr).unwrap();
    assert_eq!(chain.last().unwrap().source.rule(), Some(RuleId::R23));

    let inf = infer(&parse("M(3, Cx(T(6)))").unwrap(), &[]).unwrap();
    let chain = explain(inf.derivation(), inf.root(), &Quantity::Csr).unwrap();
    let rules: Vec<_> = chain.iter().filter_map(|s| s.source.rule()).collect();
    assert_eq!(rules, [RuleId::R23, RuleId::R3]);

    let empty = stablerank::Derivation::default();
    assert!(explain(&empty, inf.root(), &Quantity::Tsr).is_err());
}

#[test]
fn consistency_examples() {
    assert!(check_consistency(&vec![RankState::default(); 4]).is_empty());
    let bad = RankState {
        csr: iv(1, 1),
        gsr: iv(2, 2),
        ..RankState::default()
    };
    assert_eq!(check_consistency(&[bad]).len(), 1);
    let atoms = [
        "C",
        "F(3)",
        "rot",
        "cuntz(4)",
        "Oinf",
        "kirchberg_ibn",
        "AF",
        "pis_corner",
        "rr0(AF)",
    ];
    for src in atoms {
        let inf = infer(&parse(src).unwrap(), &[]).unwrap();
        assert!(check_consistency(inf.states()).is_empty(), "{src}");
    }
}
