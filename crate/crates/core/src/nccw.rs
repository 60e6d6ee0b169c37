//! Noncommutative CW complexes.
//!
//! A complex starts from a finite-dimensional algebra and glues on one stage
//! per cell dimension `k`: the pullback of the previous stage with
//! `C(D^k) ⊗ F_k` over `C(S^{k-1}) ⊗ F_k`, the disk leg being restriction.
//! The connecting maps do not enter any bound, so they are not recorded.

use crate::expr::AlgebraExpr;
use crate::homotopy::bott_stable_bound;
use crate::lattice::ExtNat;
use crate::spaces::SpaceExpr;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NccwStage {
    pub dim: u32,
    pub blocks: Vec<u32>,
}

impl NccwStage {
    /// Smallest block size of `F_k`.
    pub fn min_block(&self) -> u32 {
        self.blocks.iter().copied().min().unwrap_or(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NccwComplex {
    pub base: Vec<u32>,
    pub stages: Vec<NccwStage>,
}

impl NccwComplex {
    pub fn new(base: Vec<u32>, stages: Vec<NccwStage>) -> Result<NccwComplex, String> {
        let c = NccwComplex { base, stages };
        c.validate()?;
        Ok(c)
    }

    /// Stages `k = 1..=n`, each with `F_k = F(1)`.
    pub fn standard(n: u32) -> NccwComplex {
        NccwComplex {
            base: vec![1],
            stages: (1..=n)
                .map(|dim| NccwStage {
                    dim,
                    blocks: vec![1],
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let bad_blocks = |b: &[u32]| b.is_empty() || b.contains(&0);
        if bad_blocks(&self.base) {
            return Err("nccw base needs at least one block, all of size >= 1".into());
        }
        for s in &self.stages {
            if s.dim == 0 {
                return Err("nccw stage dimensions must be >= 1".into());
            }
            if bad_blocks(&s.blocks) {
                return Err(format!("nccw stage {} has an empty or zero block", s.dim));
            }
        }
        Ok(())
    }

    pub fn top_dim(&self) -> u32 {
        self.stages.iter().map(|s| s.dim).max().unwrap_or(0)
    }
}

/// `max_k (⌈k/(2 d_k)⌉ + 1)` over the stages, and 1 without stages.
pub fn csr_upper_nccw(complex: &NccwComplex) -> ExtNat {
    let bound = complex
        .stages
        .iter()
        .map(|s| bott_stable_bound(u64::from(s.dim), u64::from(s.min_block())))
        .max()
        .unwrap_or(1);
    ExtNat::fin(bound)
}

/// Expand into nested pullbacks `A_k = A_{k-1} ⊕_{C(S^{k-1})⊗F_k} C(D^k)⊗F_k`.
pub fn lower_to_pullback(complex: &NccwComplex) -> AlgebraExpr {
    let mut acc = AlgebraExpr::FiniteDim(complex.base.clone());
    for stage in &complex.stages {
        let fk = AlgebraExpr::FiniteDim(stage.blocks.clone());
        acc = AlgebraExpr::pullback(
            acc,
            AlgebraExpr::tensor(SpaceExpr::Disk(stage.dim), fk.clone()),
            AlgebraExpr::tensor(SpaceExpr::Sphere(stage.dim - 1), fk),
        );
    }
    acc
}
