//! Query results in the shape the CLI prints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use serde::Serialize;

use crate::engine::{explain, Flag, Inference, Quantity, Step};
use crate::lattice::{RankInterval, TriBool};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub query: String,
    pub tsr: RankInterval,
    pub gsr: RankInterval,
    pub csr: RankInterval,
    pub flags: BTreeMap<&'static str, TriBool>,
    pub trace: Vec<Step>,
    pub version: &'static str,
}

impl Report {
    /// Summarize the root of `inf`. With `with_trace`, keep every step that
    /// feeds a root rank or flag.
    pub fn new(query: String, inf: &Inference, with_trace: bool) -> Report {
        let s = inf.root_state();
        let flags = Flag::ALL.iter().map(|&f| (f.name(), s.flag(f))).collect();
        let trace = if with_trace {
            root_trace(inf)
        } else {
            Vec::new()
        };
        Report {
            query,
            tsr: s.tsr,
            gsr: s.gsr,
            csr: s.csr,
            flags,
            trace,
            version: VERSION,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "query: {}", self.query);
        for (name, iv) in [("tsr", self.tsr), ("gsr", self.gsr), ("csr", self.csr)] {
            let _ = writeln!(out, "{}", RankLine(name, iv));
        }
        let flags: Vec<String> = self
            .flags
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        let _ = writeln!(out, "flags: {}", flags.join(", "));
        if !self.trace.is_empty() {
            let _ = writeln!(out, "trace:");
            for s in &self.trace {
                let _ = writeln!(out, "  {}", StepLine(s));
            }
        }
        out
    }
}

/// `gsr = 4` when exact, `gsr in [4, 5]` otherwise.
pub struct RankLine<'a>(pub &'a str, pub RankInterval);

impl fmt::Display for RankLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1.is_exact() {
            write!(f, "{} = {}", self.0, self.1.lo())
        } else {
            write!(f, "{} in {}", self.0, self.1)
        }
    }
}

pub struct StepLine<'a>(pub &'a Step);

impl fmt::Display for StepLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0;
        write!(
            f,
            "[{}] {} {}: {} -> {} by {}",
            s.index, s.node_label, s.quantity, s.old, s.new, s.citation
        )?;
        if !s.inputs.is_empty() {
            let ins: Vec<String> = s.inputs.iter().map(|i| i.to_string()).collect();
            write!(f, " from [{}]", ins.join(", "))?;
        }
        Ok(())
    }
}

fn root_trace(inf: &Inference) -> Vec<Step> {
    let d = inf.derivation();
    let quantities = [Quantity::Tsr, Quantity::Gsr, Quantity::Csr]
        .into_iter()
        .chain(Flag::ALL.into_iter().map(Quantity::Flag));
    let mut keep = BTreeSet::new();
    for q in quantities {
        if let Ok(chain) = explain(d, inf.root(), &q) {
            keep.extend(chain.iter().map(|s| s.index));
        }
    }
    keep.into_iter().map(|i| d.steps[i].clone()).collect()
}
