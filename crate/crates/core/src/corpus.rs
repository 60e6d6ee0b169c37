//! Seeded random expressions, known exact values, and the audits run over them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{check_consistency, Inference, Quantity};
use crate::expr::{AlgebraExpr, Atom};
use crate::lattice::{ExtNat, RankInterval};
use crate::nccw::{NccwComplex, NccwStage};
use crate::spaces::{
    csr_commutative_torus, gsr_commutative_sphere, gsr_commutative_torus, normalize_space,
    SpaceExpr,
};

pub const CORPUS_SEED: u64 = 0x5eed_2024;
pub const CORPUS_SIZE: usize = 1000;

fn blocks(rng: &mut ChaCha8Rng) -> Vec<u32> {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| rng.gen_range(1..=3)).collect()
}

pub fn random_space(rng: &mut ChaCha8Rng, depth: u32) -> SpaceExpr {
    let leaf = depth == 0 || rng.gen_bool(0.6);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => SpaceExpr::Pt,
            1 => SpaceExpr::Sphere(rng.gen_range(0..=12)),
            2 => SpaceExpr::Torus(rng.gen_range(1..=8)),
            3 => SpaceExpr::Disk(rng.gen_range(1..=6)),
            4 => SpaceExpr::Cube(rng.gen_range(1..=3)),
            _ => SpaceExpr::CwSkeleton(rng.gen_range(0..=8)),
        };
    }
    match rng.gen_range(0..3) {
        0 => SpaceExpr::prod(random_space(rng, depth - 1), random_space(rng, depth - 1)),
        1 => SpaceExpr::wedge(random_space(rng, depth - 1), random_space(rng, depth - 1)),
        _ => SpaceExpr::susp(random_space(rng, depth - 1)),
    }
}

fn random_atom(rng: &mut ChaCha8Rng) -> AlgebraExpr {
    let a = match rng.gen_range(0..6) {
        0 => Atom::IrrationalRotation,
        1 => Atom::Cuntz(rng.gen_range(2..=5)),
        2 => Atom::CuntzInfinity,
        3 => Atom::KirchbergIbn,
        4 => Atom::SimpleInfDimAf,
        _ => Atom::PurelyInfiniteSimpleCorner,
    };
    AlgebraExpr::Atom(a)
}

fn random_nccw(rng: &mut ChaCha8Rng) -> NccwComplex {
    let n = rng.gen_range(0..=3);
    let mut dims: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    dims.sort_unstable();
    NccwComplex {
        base: blocks(rng),
        stages: dims
            .into_iter()
            .map(|dim| NccwStage {
                dim,
                blocks: blocks(rng),
            })
            .collect(),
    }
}

pub fn random_algebra(rng: &mut ChaCha8Rng, depth: u32) -> AlgebraExpr {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => AlgebraExpr::Scalars,
            1 => AlgebraExpr::FiniteDim(blocks(rng)),
            2 => AlgebraExpr::Nccw(random_nccw(rng)),
            3 => AlgebraExpr::commutative(random_space(rng, 2)),
            _ => random_atom(rng),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => AlgebraExpr::matrix(rng.gen_range(1..=4), random_algebra(rng, d)),
        1 => AlgebraExpr::direct_sum(random_algebra(rng, d), random_algebra(rng, d)),
        2 | 3 => AlgebraExpr::tensor(random_space(rng, 2), random_algebra(rng, d)),
        4 => AlgebraExpr::pullback(
            random_algebra(rng, d),
            random_algebra(rng, d),
            random_algebra(rng, d),
        ),
        5 => AlgebraExpr::extension(random_algebra(rng, d), random_algebra(rng, d)),
        6 => {
            let n = rng.gen_range(1..=3);
            AlgebraExpr::Limit((0..n).map(|_| random_algebra(rng, d)).collect())
        }
        7 => AlgebraExpr::Atom(Atom::JiangSuStable(Box::new(random_algebra(rng, d)))),
        _ => AlgebraExpr::Atom(Atom::RealRankZero(Box::new(real_rank_zero(rng, d)))),
    }
}

/// Only algebras that do have real rank zero, so `rr0(...)` never asserts a falsehood.
fn real_rank_zero(rng: &mut ChaCha8Rng, depth: u32) -> AlgebraExpr {
    let leaf = depth == 0 || rng.gen_bool(0.6);
    if leaf {
        return match rng.gen_range(0..4) {
            0 => AlgebraExpr::FiniteDim(blocks(rng)),
            1 => AlgebraExpr::Atom(Atom::SimpleInfDimAf),
            2 => AlgebraExpr::Atom(Atom::PurelyInfiniteSimpleCorner),
            _ => random_atom(rng),
        };
    }
    match rng.gen_range(0..2) {
        0 => AlgebraExpr::matrix(rng.gen_range(1..=4), real_rank_zero(rng, depth - 1)),
        _ => AlgebraExpr::direct_sum(
            real_rank_zero(rng, depth - 1),
            real_rank_zero(rng, depth - 1),
        ),
    }
}

/// `count` expressions from `seed`; the same arguments always give the same list.
pub fn generate(seed: u64, count: usize) -> Vec<AlgebraExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_algebra(&mut rng, 3)).collect()
}

/// Corrupted variants of `texts`: truncations, deletions, insertions and swaps.
pub fn mutate(seed: u64, texts: &[String]) -> Vec<String> {
    const NOISE: &[char] = &[
        '(', ')', ',', ';', ':', '*', '+', ' ', '0', '7', 'x', '$', 'S', 'é',
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(texts.len());
    for t in texts {
        let mut chars: Vec<char> = t.chars().collect();
        if chars.is_empty() {
            out.push(String::new());
            continue;
        }
        let i = rng.gen_range(0..chars.len());
        match rng.gen_range(0..4) {
            0 => chars.truncate(i),
            1 => {
                chars.remove(i);
            }
            2 => chars.insert(i, *NOISE.choose(&mut rng).expect("nonempty")),
            _ => {
                let j = rng.gen_range(0..chars.len());
                chars.swap(i, j);
            }
        }
        out.push(chars.into_iter().collect());
    }
    out
}

fn exact(v: ExtNat) -> Option<RankInterval> {
    Some(RankInterval::exact(v))
}

fn fin(n: u64) -> Option<RankInterval> {
    exact(ExtNat::fin(n))
}

/// Values stated outright for `expr`, independent of the engine.
pub fn known_value(expr: &AlgebraExpr, q: &Quantity) -> Option<RankInterval> {
    use AlgebraExpr as E;
    use Quantity::*;
    let ranks = matches!(q, Tsr | Gsr | Csr);
    if !ranks {
        return None;
    }
    match expr {
        E::Scalars | E::FiniteDim(_) => fin(1),
        E::Matrix(_, a) if **a == E::Scalars => fin(1),
        E::Atom(Atom::IrrationalRotation) => match q {
            Csr => fin(2),
            _ => fin(1),
        },
        E::Atom(Atom::CuntzInfinity | Atom::KirchbergIbn) => match q {
            Tsr => None,
            _ => fin(2),
        },
        E::Atom(Atom::SimpleInfDimAf) => fin(1),
        E::Atom(Atom::Cuntz(_)) => match q {
            Tsr => None,
            _ => exact(ExtNat::INF),
        },
        E::Tensor(_, a) if matches!(**a, E::Atom(Atom::CuntzInfinity | Atom::KirchbergIbn)) => {
            match q {
                Tsr => None,
                _ => fin(2),
            }
        }
        E::Tensor(_, a) if **a == E::Atom(Atom::IrrationalRotation) => match q {
            Gsr => fin(1),
            Csr => fin(2),
            _ => None,
        },
        E::Tensor(SpaceExpr::Pt, a) if **a == E::Scalars => fin(1),
        E::Tensor(x, a) if **a == E::Scalars => commutative_value(&normalize_space(x), q),
        _ => None,
    }
}

fn commutative_value(x: &SpaceExpr, q: &Quantity) -> Option<RankInterval> {
    match (x, q) {
        // Only the homotopy invariants survive contraction; tsr(C(D^n)) grows with n.
        (SpaceExpr::Pt, Quantity::Gsr | Quantity::Csr) => fin(1),
        (SpaceExpr::Sphere(d), Quantity::Gsr) => exact(gsr_commutative_sphere(u64::from(*d))),
        (SpaceExpr::Sphere(d), Quantity::Csr) => {
            // gsr <= csr <= ⌈d/2⌉ + 1 pins csr whenever the sphere gsr reaches the ceiling.
            let d = u64::from(*d);
            let ceiling = ExtNat::fin(d.div_ceil(2) + 1);
            (gsr_commutative_sphere(d) == ceiling).then(|| RankInterval::exact(ceiling))
        }
        (SpaceExpr::Torus(d), Quantity::Gsr) => exact(gsr_commutative_torus(u64::from(*d))),
        (SpaceExpr::Torus(d), Quantity::Csr) => exact(csr_commutative_torus(u64::from(*d))),
        _ => None,
    }
}

/// One expected value from the worked examples.
#[derive(Debug, Clone)]
pub struct Example {
    pub src: &'static str,
    pub quantity: Quantity,
    pub lo: Option<u64>,
    pub hi: Option<u64>,
}

const fn ex(src: &'static str, quantity: Quantity, lo: u64, hi: u64) -> Example {
    Example {
        src,
        quantity,
        lo: Some(lo),
        hi: Some(hi),
    }
}

const fn ex_hi(src: &'static str, quantity: Quantity, hi: u64) -> Example {
    Example {
        src,
        quantity,
        lo: None,
        hi: Some(hi),
    }
}

pub fn worked_examples() -> Vec<Example> {
    use Quantity::*;
    vec![
        ex("Cx(S(5))", Gsr, 4, 4),
        ex("Cx(S(5))", Csr, 4, 4),
        ex("Cx(S(4))", Gsr, 1, 1),
        ex("Cx(S(8))", Gsr, 4, 4),
        ex("Cx(S(12))", Gsr, 6, 6),
        ex("Cx(T(4))", Gsr, 1, 1),
        ex("Cx(T(5))", Gsr, 4, 4),
        ex("Cx(T(5))", Csr, 4, 4),
        ex("Cx(T(9))", Gsr, 6, 6),
        ex("Cx(T(1))", Csr, 2, 2),
        ex("Cx(T(3))", Csr, 3, 3),
        ex("Cx(T(6))", Csr, 4, 4),
        ex("Cx(D(7))", Gsr, 1, 1),
        ex("Cx(D(7))", Csr, 1, 1),
        ex("F(2, 3)", Tsr, 1, 1),
        ex("F(2, 3)", Gsr, 1, 1),
        ex("F(2, 3)", Csr, 1, 1),
        ex("M(3, Cx(T(6)))", Csr, 1, 2),
        ex("Cx(cw(6))*Oinf", Gsr, 2, 2),
        ex("Cx(cw(6))*Oinf", Csr, 2, 2),
        ex("Cx(cw(5))*kirchberg_ibn", Csr, 2, 2),
        ex("Cx(cw(5))*rot", Gsr, 1, 1),
        ex("Cx(cw(5))*rot", Csr, 2, 2),
        ex("Cx(T(1))*AF", Csr, 2, 2),
        ex("rr0(C (+) C)", Gsr, 1, 1),
        ex_hi("pullback(Cx(D(5)), Cx(D(5)); Cx(S(4)))", Gsr, 4),
        ex_hi("pullback(Cx(D(8)), Cx(D(8)); Cx(S(7)))", Gsr, 4),
        ex_hi(
            "nccw(F(1); 1: F(1); 2: F(1); 3: F(1); 4: F(1); 5: F(1))",
            Csr,
            4,
        ),
    ]
}

/// Problems with one inference: invalid intervals, order violations, and
/// any node whose state excludes a known value.
pub fn audit(inf: &Inference) -> Vec<String> {
    let mut out: Vec<String> = check_consistency(inf.states())
        .into_iter()
        .map(|v| {
            format!(
                "{}: {}",
                inf.node(crate::engine::NodeId(v.index)).label,
                v.message
            )
        })
        .collect();
    for (node, state) in inf.nodes().iter().zip(inf.states()) {
        for q in [Quantity::Tsr, Quantity::Gsr, Quantity::Csr] {
            let iv = state.interval(&q);
            if let Some(k) = known_value(&node.expr, &q) {
                if !(iv.contains(k.lo()) && iv.contains(k.hi())) {
                    out.push(format!("{}: {q} = {iv} excludes known {k}", node.label));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{format, parse};

    #[test]
    fn generation_is_seeded() {
        assert_eq!(generate(7, 50), generate(7, 50));
        assert_ne!(generate(7, 50), generate(8, 50));
        assert!(generate(7, 200).iter().all(|e| e.validate().is_ok()));
    }

    #[test]
    fn mutations_are_seeded() {
        let texts: Vec<String> = generate(1, 20).iter().map(format).collect();
        assert_eq!(mutate(3, &texts), mutate(3, &texts));
    }

    #[test]
    fn known_values_follow_closed_forms() {
        let e = parse("Cx(S(6))").unwrap();
        assert_eq!(known_value(&e, &Quantity::Csr), fin(4));
        let e = parse("Cx(S(8))").unwrap();
        assert_eq!(known_value(&e, &Quantity::Csr), None);
        let e = parse("Cx(D(3))").unwrap();
        assert_eq!(known_value(&e, &Quantity::Gsr), fin(1));
    }

    #[test]
    fn examples_parse() {
        for ex in worked_examples() {
            assert!(parse(ex.src).is_ok(), "{}", ex.src);
        }
    }
}
