//! Sound interval bounds for the topological, general and connected stable
//! ranks of C*-algebras built from a small expression language.

pub mod cli;
pub mod corpus;
pub mod dsl;
pub mod engine;
pub mod expr;
pub mod homotopy;
pub mod lattice;
pub mod nccw;
pub mod report;
pub mod spaces;

pub use dsl::{format, parse, ParseError};
pub use engine::{
    explain, infer, infer_with, Derivation, EngineError, Inconsistency, InferOptions, Inference,
    RankState,
};
pub use expr::{AlgebraExpr, Atom};
pub use lattice::{ExtNat, RankInterval, TriBool};
pub use report::Report;
pub use spaces::SpaceExpr;
