//! Compositional descriptions of unital C*-algebras.

use std::fmt;

use crate::nccw::NccwComplex;
use crate::spaces::SpaceExpr;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraExpr {
    Scalars,
    /// `⊕ M_ℓ(C)` over the listed block sizes.
    FiniteDim(Vec<u32>),
    Matrix(u32, Box<AlgebraExpr>),
    DirectSum(Box<AlgebraExpr>, Box<AlgebraExpr>),
    /// `C(X) ⊗ A`
    Tensor(SpaceExpr, Box<AlgebraExpr>),
    /// `B ⊕_D C`. At least one leg into `D` must be surjective.
    Pullback {
        b: Box<AlgebraExpr>,
        c: Box<AlgebraExpr>,
        d: Box<AlgebraExpr>,
        surjective_leg: bool,
    },
    /// Some `A` with `0 -> J -> A -> B -> 0`.
    Extension(Box<AlgebraExpr>, Box<AlgebraExpr>),
    /// Inductive limit in which every listed algebra occurs cofinally.
    Limit(Vec<AlgebraExpr>),
    Nccw(NccwComplex),
    Atom(Atom),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `A ⊗ 𝒵`
    JiangSuStable(Box<AlgebraExpr>),
    IrrationalRotation,
    /// `O_n`, `n >= 2`
    Cuntz(u32),
    CuntzInfinity,
    KirchbergIbn,
    SimpleInfDimAf,
    PurelyInfiniteSimpleCorner,
    /// `A`, asserted to have real rank zero.
    RealRankZero(Box<AlgebraExpr>),
}

impl AlgebraExpr {
    pub fn matrix(n: u32, a: AlgebraExpr) -> AlgebraExpr {
        AlgebraExpr::Matrix(n, Box::new(a))
    }

    pub fn direct_sum(a: AlgebraExpr, b: AlgebraExpr) -> AlgebraExpr {
        AlgebraExpr::DirectSum(Box::new(a), Box::new(b))
    }

    pub fn tensor(x: SpaceExpr, a: AlgebraExpr) -> AlgebraExpr {
        AlgebraExpr::Tensor(x, Box::new(a))
    }

    /// `C(X)`
    pub fn commutative(x: SpaceExpr) -> AlgebraExpr {
        AlgebraExpr::tensor(x, AlgebraExpr::Scalars)
    }

    pub fn pullback(b: AlgebraExpr, c: AlgebraExpr, d: AlgebraExpr) -> AlgebraExpr {
        AlgebraExpr::Pullback {
            b: Box::new(b),
            c: Box::new(c),
            d: Box::new(d),
            surjective_leg: true,
        }
    }

    pub fn extension(ideal: AlgebraExpr, quotient: AlgebraExpr) -> AlgebraExpr {
        AlgebraExpr::Extension(Box::new(ideal), Box::new(quotient))
    }

    /// `C(𝕋) ⊗ self`
    pub fn circle_tensor(&self) -> AlgebraExpr {
        AlgebraExpr::tensor(SpaceExpr::Torus(1), self.clone())
    }

    /// Direct sub-expressions, in source order.
    pub fn children(&self) -> Vec<&AlgebraExpr> {
        match self {
            AlgebraExpr::Scalars | AlgebraExpr::FiniteDim(_) | AlgebraExpr::Nccw(_) => vec![],
            AlgebraExpr::Matrix(_, a) | AlgebraExpr::Tensor(_, a) => vec![a],
            AlgebraExpr::DirectSum(a, b) | AlgebraExpr::Extension(a, b) => vec![a, b],
            AlgebraExpr::Pullback { b, c, d, .. } => vec![b, c, d],
            AlgebraExpr::Limit(parts) => parts.iter().collect(),
            AlgebraExpr::Atom(Atom::JiangSuStable(a) | Atom::RealRankZero(a)) => vec![a],
            AlgebraExpr::Atom(_) => vec![],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Checks the parameter constraints that the types do not encode.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            AlgebraExpr::FiniteDim(blocks) => {
                if blocks.is_empty() || blocks.contains(&0) {
                    return Err("F(...) needs at least one block, all of size >= 1".into());
                }
            }
            AlgebraExpr::Matrix(0, _) => return Err("M(n, A) needs n >= 1".into()),
            AlgebraExpr::Tensor(x, _) => x.validate()?,
            AlgebraExpr::Pullback {
                surjective_leg: false,
                ..
            } => return Err("a pullback needs one surjective leg".into()),
            AlgebraExpr::Limit(parts) if parts.is_empty() => {
                return Err("limit(...) needs at least one algebra".into())
            }
            AlgebraExpr::Nccw(c) => c.validate()?,
            AlgebraExpr::Atom(Atom::Cuntz(n)) if *n < 2 => {
                return Err("cuntz(n) needs n >= 2".into())
            }
            _ => {}
        }
        self.children()
            .into_iter()
            .try_for_each(AlgebraExpr::validate)
    }
}

impl fmt::Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::format(self))
    }
}
