//! Bound propagation over an expression graph.
//!
//! [`infer`] builds the node graph for an expression, applies user axioms,
//! then fires rule instances from a worklist until every interval and flag
//! is stable. Every narrowing is recorded as a [`Step`] citing its rule.

mod graph;
pub mod rules;
mod run;
pub mod state;
pub mod trace;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::AlgebraExpr;
use crate::lattice::{ExtNat, RankInterval};

pub use graph::{Node, FINITE_SPECTRUM_MAX_DIM};
pub use rules::{Cite, RuleId};
pub use state::{Flag, Quantity, RankState, UnknownQuantity, Value};
pub use trace::{explain, Derivation, ExplainError, Source, Step};

use graph::Graph;
use run::{saturate, Run};

pub const DEFAULT_MAX_NODES: usize = 10_000;
pub const MAX_NODES_ENV: &str = "STABLERANK_MAX_NODES";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Two bounds on one quantity with an empty intersection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "inconsistent {quantity} on `{node}`: {current} (from {current_by}) \
     does not meet {incoming} (from {incoming_by})"
)]
pub struct Inconsistency {
    pub node: String,
    pub quantity: String,
    pub current: String,
    pub current_by: String,
    pub incoming: String,
    pub incoming_by: String,
}

impl Inconsistency {
    pub(crate) fn into_error(self) -> EngineError {
        EngineError::Inconsistent(Box::new(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Inconsistent(Box<Inconsistency>),
    #[error("expression needs more than {limit} nodes and slots (raise {MAX_NODES_ENV})")]
    SizeLimit { limit: usize },
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomValue {
    Interval(RankInterval),
    Flag(bool),
}

/// A user-asserted fact, merged before any rule fires.
///
/// `target` is `$` for the root, `$.i.j` for the `j`-th child of the `i`-th
/// child of the root, or any DSL expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub target: String,
    pub quantity: Quantity,
    pub value: AxiomValue,
}

#[derive(Debug, Error)]
pub enum AxiomFileError {
    #[error("axioms file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("axiom {index}: {message}")]
    Entry { index: usize, message: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomEntry {
    node: String,
    quantity: String,
    #[serde(default)]
    lo: Option<ExtNat>,
    #[serde(default)]
    hi: Option<ExtNat>,
    #[serde(default)]
    value: Option<bool>,
}

/// Parse a JSON list of `{"node", "quantity", "lo", "hi"}` or
/// `{"node", "quantity", "value"}` entries.
pub fn parse_axioms(json: &str) -> Result<Vec<Axiom>, AxiomFileError> {
    let entries: Vec<AxiomEntry> = serde_json::from_str(json)?;
    entries
        .into_iter()
        .enumerate()
        .map(|(index, e)| {
            let err = |message: String| AxiomFileError::Entry { index, message };
            let quantity: Quantity = e
                .quantity
                .parse()
                .map_err(|q: UnknownQuantity| err(q.to_string()))?;
            let value = match (quantity.is_flag(), e.value, e.lo, e.hi) {
                (true, Some(v), None, None) => AxiomValue::Flag(v),
                (false, None, lo, hi) if lo.is_some() || hi.is_some() => {
                    let iv =
                        RankInterval::new(lo.unwrap_or(ExtNat::ONE), hi.unwrap_or(ExtNat::INF))
                            .map_err(|e| err(e.to_string()))?;
                    AxiomValue::Interval(iv)
                }
                (true, ..) => return Err(err(format!("{quantity} needs a boolean `value`"))),
                (false, ..) => return Err(err(format!("{quantity} needs `lo` and/or `hi`"))),
            };
            Ok(Axiom {
                target: e.node,
                quantity,
                value,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferOptions {
    /// Cap on graph nodes plus demanded slots.
    pub max_nodes: usize,
    /// Shuffle the initial firing order and the wake-up order.
    pub shuffle_seed: Option<u64>,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions {
            max_nodes: max_nodes_from_env(),
            shuffle_seed: None,
        }
    }
}

/// `STABLERANK_MAX_NODES`, or the default when unset or unparsable.
pub fn max_nodes_from_env() -> usize {
    std::env::var(MAX_NODES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_NODES)
}

#[derive(Debug, Clone)]
pub struct Inference {
    nodes: Vec<Node>,
    states: Vec<RankState>,
    derivation: Derivation,
    root: NodeId,
    index: HashMap<AlgebraExpr, NodeId>,
}

impl Inference {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_state(&self) -> &RankState {
        &self.states[self.root.0]
    }

    pub fn state(&self, id: NodeId) -> &RankState {
        &self.states[id.0]
    }

    pub fn states(&self) -> &[RankState] {
        &self.states
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn find(&self, expr: &AlgebraExpr) -> Option<NodeId> {
        self.index.get(expr).copied()
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    /// Steps of the derivation that touch the root.
    pub fn root_steps(&self) -> impl Iterator<Item = &Step> {
        self.derivation
            .steps
            .iter()
            .filter(move |s| s.node == self.root)
    }
}

fn resolve_path<'e>(root: &'e AlgebraExpr, path: &str) -> Option<&'e AlgebraExpr> {
    let mut cur = root;
    let rest = path.strip_prefix('$')?;
    for part in rest.split('.').skip(1) {
        let i: usize = part.parse().ok()?;
        cur = *cur.children().get(i)?;
    }
    Some(cur)
}

fn axiom_target(root: &AlgebraExpr, target: &str) -> Result<AlgebraExpr, EngineError> {
    let target = target.trim();
    if target.starts_with('$') {
        return resolve_path(root, target)
            .cloned()
            .ok_or_else(|| EngineError::UnknownNode(target.to_string()));
    }
    crate::dsl::parse(target).map_err(|e| EngineError::UnknownNode(format!("{target}: {e}")))
}

pub fn infer(expr: &AlgebraExpr, axioms: &[Axiom]) -> Result<Inference, EngineError> {
    infer_with(expr, axioms, &InferOptions::default())
}

pub fn infer_with(
    expr: &AlgebraExpr,
    axioms: &[Axiom],
    opts: &InferOptions,
) -> Result<Inference, EngineError> {
    expr.validate().map_err(EngineError::Malformed)?;
    if expr.size() > opts.max_nodes {
        return Err(EngineError::SizeLimit {
            limit: opts.max_nodes,
        });
    }
    let targets = axioms
        .iter()
        .map(|a| axiom_target(expr, &a.target))
        .collect::<Result<Vec<_>, _>>()?;
    for t in &targets {
        t.validate().map_err(EngineError::Malformed)?;
    }
    let mut roots: Vec<&AlgebraExpr> = vec![expr];
    roots.extend(targets.iter());
    let graph = Graph::build(&roots, opts.max_nodes)?;

    let mut run = Run::new(&graph.nodes);
    for (axiom, target) in axioms.iter().zip(&targets) {
        let id = graph.find(target).expect("axiom targets are graph roots");
        let citation = format!(
            "AXIOM: {} {} asserted",
            target_label(target),
            axiom.quantity
        );
        match &axiom.value {
            AxiomValue::Interval(iv) => {
                if axiom.quantity.is_flag() {
                    return Err(EngineError::Malformed(format!(
                        "{} is a flag, not an interval",
                        axiom.quantity
                    )));
                }
                run.tighten_with(Source::Axiom, &citation, id, &axiom.quantity, *iv)?;
            }
            AxiomValue::Flag(b) => {
                let Quantity::Flag(f) = axiom.quantity else {
                    return Err(EngineError::Malformed(format!(
                        "{} is an interval, not a flag",
                        axiom.quantity
                    )));
                };
                run.refine_with(Source::Axiom, &citation, id, f, *b)?;
            }
        }
    }
    saturate(&mut run, &graph.groups, opts.shuffle_seed)?;

    let root = graph.find(expr).expect("root is interned first");
    let Run { states, steps, .. } = run;
    let index = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.expr.clone(), NodeId(i)))
        .collect();
    Ok(Inference {
        nodes: graph.nodes,
        states,
        derivation: Derivation { steps },
        root,
        index,
    })
}

fn target_label(e: &AlgebraExpr) -> String {
    crate::dsl::format(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "state {}: {}", self.index, self.message)
    }
}

/// Checks `gsr.hi <= csr.hi <= tsr.hi + 1` on every state.
pub fn check_consistency(states: &[RankState]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (index, s) in states.iter().enumerate() {
        if s.gsr.hi() > s.csr.hi() {
            out.push(Violation {
                index,
                message: format!("gsr {} exceeds csr {}", s.gsr, s.csr),
            });
        }
        if s.csr.hi() > s.tsr.hi().succ() {
            out.push(Violation {
                index,
                message: format!("csr {} exceeds tsr {} + 1", s.csr, s.tsr),
            });
        }
        for (q, iv) in [("tsr", s.tsr), ("gsr", s.gsr), ("csr", s.csr)] {
            if iv.lo() > iv.hi() {
                out.push(Violation {
                    index,
                    message: format!("{q} interval {iv} is inverted"),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
