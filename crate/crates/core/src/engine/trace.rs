use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::rules::RuleId;
use super::state::{Quantity, Value};
use super::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Rule(RuleId),
    Axiom,
}

impl Source {
    pub fn rule(self) -> Option<RuleId> {
        match self {
            Source::Rule(r) => Some(r),
            Source::Axiom => None,
        }
    }
}

impl Serialize for Source {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Source::Rule(r) => s.collect_str(r),
            Source::Axiom => s.serialize_str("AXIOM"),
        }
    }
}

/// One strict tightening.
#[derive(Debug, Clone, Serialize)]
pub struct Step {
    pub index: usize,
    #[serde(rename = "rule")]
    pub source: Source,
    pub citation: String,
    #[serde(skip)]
    pub node: NodeId,
    #[serde(rename = "node")]
    pub node_label: String,
    pub quantity: Quantity,
    pub old: Value,
    pub new: Value,
    /// Earlier steps whose results this step read.
    pub inputs: Vec<usize>,
}

impl Step {
    fn moved_lo(&self) -> bool {
        match (self.old, self.new) {
            (Value::Interval(a), Value::Interval(b)) => a.lo() != b.lo(),
            _ => true,
        }
    }

    fn moved_hi(&self) -> bool {
        match (self.old, self.new) {
            (Value::Interval(a), Value::Interval(b)) => a.hi() != b.hi(),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error("no step tightened {quantity} on node {node}")]
    NoSteps { node: NodeId, quantity: String },
}

/// Steps that feed the final value of `quantity` on `node`, in firing order.
pub fn explain<'a>(
    derivation: &'a Derivation,
    node: NodeId,
    quantity: &Quantity,
) -> Result<Vec<&'a Step>, ExplainError> {
    let mine = || {
        derivation
            .steps
            .iter()
            .filter(|s| s.node == node && &s.quantity == quantity)
    };
    let last_lo = mine().rfind(|s| s.moved_lo());
    let last_hi = mine().rfind(|s| s.moved_hi());
    let mut pending: Vec<usize> = last_lo
        .into_iter()
        .chain(last_hi)
        .map(|s| s.index)
        .collect();
    if pending.is_empty() {
        return Err(ExplainError::NoSteps {
            node,
            quantity: quantity.to_string(),
        });
    }
    let mut seen = BTreeSet::new();
    while let Some(i) = pending.pop() {
        if seen.insert(i) {
            pending.extend(derivation.steps[i].inputs.iter().copied());
        }
    }
    Ok(seen.into_iter().map(|i| &derivation.steps[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_is_an_error() {
        let d = Derivation::default();
        assert!(explain(&d, NodeId(0), &Quantity::Tsr).is_err());
    }
}
