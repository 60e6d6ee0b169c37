//! The worklist: instances fire until nothing narrows any further.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::homotopy::{bott_stable_bound, finite_dimensional_slot, sphere_tensor_inputs, SlotKey};
use crate::lattice::{ceil_div, ExtNat, RankInterval, TriBool};
use crate::spaces::{
    csr_commutative_torus, dim_upper, gsr_commutative_sphere, gsr_commutative_torus,
    inj_space_scalars, SpaceExpr,
};

use super::graph::{AtomFact, Equivalence, Inst, Node};
use super::rules::{self, Cite};
use super::state::{Flag, Quantity, RankState, Value};
use super::trace::{Source, Step};
use super::{EngineError, Inconsistency, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum End {
    Lo,
    Hi,
}

pub(crate) struct Run<'g> {
    nodes: &'g [Node],
    pub states: Vec<RankState>,
    pub steps: Vec<Step>,
    producers: HashMap<(NodeId, Quantity, End), usize>,
    reads: BTreeSet<usize>,
    dirty: Vec<NodeId>,
}

use Quantity::{Csr, Gsr, Tsr};

const INJ0: Quantity = Quantity::Slot(SlotKey::Inj(0));
const SURJ0: Quantity = Quantity::Slot(SlotKey::Surj(0));
const SURJ1: Quantity = Quantity::Slot(SlotKey::Surj(1));

fn one() -> RankInterval {
    RankInterval::exact(ExtNat::ONE)
}

fn exact(n: u64) -> RankInterval {
    RankInterval::exact(ExtNat::fin(n))
}

fn slot(key: SlotKey) -> Quantity {
    Quantity::Slot(key)
}

impl<'g> Run<'g> {
    pub(crate) fn new(nodes: &'g [Node]) -> Run<'g> {
        Run {
            nodes,
            states: vec![RankState::default(); nodes.len()],
            steps: Vec::new(),
            producers: HashMap::new(),
            reads: BTreeSet::new(),
            dirty: Vec::new(),
        }
    }

    fn begin(&mut self) {
        self.reads.clear();
    }

    fn note(&mut self, n: NodeId, q: &Quantity, end: End) {
        if let Some(&i) = self.producers.get(&(n, q.clone(), end)) {
            self.reads.insert(i);
        }
    }

    fn lo(&mut self, n: NodeId, q: &Quantity) -> ExtNat {
        self.note(n, q, End::Lo);
        self.states[n.0].interval(q).lo()
    }

    fn hi(&mut self, n: NodeId, q: &Quantity) -> ExtNat {
        self.note(n, q, End::Hi);
        self.states[n.0].interval(q).hi()
    }

    fn iv(&mut self, n: NodeId, q: &Quantity) -> RankInterval {
        self.note(n, q, End::Lo);
        self.note(n, q, End::Hi);
        self.states[n.0].interval(q)
    }

    fn flag(&mut self, n: NodeId, f: Flag) -> TriBool {
        self.note(n, &Quantity::Flag(f), End::Lo);
        self.states[n.0].flag(f)
    }

    fn record(
        &mut self,
        source: Source,
        citation: String,
        n: NodeId,
        q: Quantity,
        old: Value,
        new: Value,
    ) {
        let index = self.steps.len();
        let (lo_moved, hi_moved) = match (old, new) {
            (Value::Interval(a), Value::Interval(b)) => (a.lo() != b.lo(), a.hi() != b.hi()),
            _ => (true, false),
        };
        if lo_moved {
            self.producers.insert((n, q.clone(), End::Lo), index);
        }
        if hi_moved {
            self.producers.insert((n, q.clone(), End::Hi), index);
        }
        self.steps.push(Step {
            index,
            source,
            citation,
            node: n,
            node_label: self.nodes[n.0].label.clone(),
            quantity: q,
            old,
            new,
            inputs: self.reads.iter().copied().collect(),
        });
        self.dirty.push(n);
    }

    fn producer_citations(&self, n: NodeId, q: &Quantity) -> String {
        let mut cites: Vec<&str> = [End::Lo, End::Hi]
            .iter()
            .filter_map(|e| self.producers.get(&(n, q.clone(), *e)))
            .map(|&i| self.steps[i].citation.as_str())
            .collect();
        cites.dedup();
        if cites.is_empty() {
            "no prior step".to_string()
        } else {
            cites.join("; ")
        }
    }

    pub(crate) fn tighten_with(
        &mut self,
        source: Source,
        citation: &str,
        n: NodeId,
        q: &Quantity,
        bound: RankInterval,
    ) -> Result<(), EngineError> {
        let old = self.states[n.0].interval(q);
        let new = old.meet(&bound).map_err(|_| {
            Inconsistency {
                node: self.nodes[n.0].label.clone(),
                quantity: q.to_string(),
                current: old.to_string(),
                current_by: self.producer_citations(n, q),
                incoming: bound.to_string(),
                incoming_by: citation.to_string(),
            }
            .into_error()
        })?;
        if new != old {
            self.states[n.0].set_interval(q, new);
            self.record(
                source,
                citation.to_string(),
                n,
                q.clone(),
                Value::Interval(old),
                Value::Interval(new),
            );
        }
        Ok(())
    }

    pub(crate) fn refine_with(
        &mut self,
        source: Source,
        citation: &str,
        n: NodeId,
        f: Flag,
        value: bool,
    ) -> Result<(), EngineError> {
        let q = Quantity::Flag(f);
        let old = self.states[n.0].flag(f);
        match old.refine(value) {
            Ok(None) => Ok(()),
            Ok(Some(new)) => {
                *self.states[n.0].flag_mut(f) = new;
                self.record(
                    source,
                    citation.to_string(),
                    n,
                    q,
                    Value::Flag(old),
                    Value::Flag(new),
                );
                Ok(())
            }
            Err(_) => Err(Inconsistency {
                node: self.nodes[n.0].label.clone(),
                quantity: q.to_string(),
                current: old.to_string(),
                current_by: self.producer_citations(n, &q),
                incoming: TriBool::from_bool(value).to_string(),
                incoming_by: citation.to_string(),
            }
            .into_error()),
        }
    }

    fn tighten(
        &mut self,
        c: Cite,
        n: NodeId,
        q: &Quantity,
        bound: RankInterval,
    ) -> Result<(), EngineError> {
        self.tighten_with(Source::Rule(c.rule), &c.render(), n, q, bound)
    }

    fn at_most(&mut self, c: Cite, n: NodeId, q: &Quantity, hi: ExtNat) -> Result<(), EngineError> {
        self.tighten(c, n, q, RankInterval::at_most(hi))
    }

    fn at_least(
        &mut self,
        c: Cite,
        n: NodeId,
        q: &Quantity,
        lo: ExtNat,
    ) -> Result<(), EngineError> {
        self.tighten(c, n, q, RankInterval::at_least(lo))
    }

    fn refine(&mut self, c: Cite, n: NodeId, f: Flag, value: bool) -> Result<(), EngineError> {
        self.refine_with(Source::Rule(c.rule), &c.render(), n, f, value)
    }

    /// `target <= max(parts)`, upper ends only.
    fn max_upper(
        &mut self,
        c: Cite,
        target: (NodeId, &Quantity),
        parts: &[(NodeId, &Quantity)],
    ) -> Result<(), EngineError> {
        self.begin();
        let hi = parts
            .iter()
            .map(|(n, q)| self.hi(*n, q))
            .max()
            .unwrap_or(ExtNat::INF);
        self.at_most(c, target.0, target.1, hi)
    }

    /// `target = max(parts)`, tightened in every direction it constrains.
    fn max_eq(
        &mut self,
        c: Cite,
        target: (NodeId, &Quantity),
        parts: &[(NodeId, &Quantity)],
    ) -> Result<(), EngineError> {
        let mut parts: Vec<(NodeId, &Quantity)> = parts.to_vec();
        parts.sort();
        parts.dedup();
        self.begin();
        let ivs: Vec<RankInterval> = parts.iter().map(|(n, q)| self.iv(*n, q)).collect();
        let lo = ivs.iter().map(|i| i.lo()).max().unwrap_or(ExtNat::ONE);
        let hi = ivs.iter().map(|i| i.hi()).max().unwrap_or(ExtNat::ONE);
        let bound = RankInterval::new(lo, hi).expect("componentwise max of valid intervals");
        self.tighten(c, target.0, target.1, bound)?;
        for (n, q) in &parts {
            self.begin();
            let hi = self.hi(target.0, target.1);
            self.at_most(c, *n, q, hi)?;
        }
        self.begin();
        let t_lo = self.lo(target.0, target.1);
        let mut reach = Vec::new();
        for (n, q) in &parts {
            if self.hi(*n, q) >= t_lo {
                reach.push((*n, *q));
            }
        }
        if let [(n, q)] = reach[..] {
            self.at_least(c, n, q, t_lo)?;
        }
        Ok(())
    }

    /// `a.q >= b.q` on lower ends.
    fn lower_from(
        &mut self,
        c: Cite,
        a: NodeId,
        b: NodeId,
        q: &Quantity,
    ) -> Result<(), EngineError> {
        self.begin();
        let lo = self.lo(b, q);
        self.at_least(c, a, q, lo)
    }

    fn copy_both(
        &mut self,
        c: Cite,
        a: NodeId,
        b: NodeId,
        q: &Quantity,
    ) -> Result<(), EngineError> {
        self.begin();
        let v = self.iv(b, q);
        self.tighten(c, a, q, v)?;
        self.begin();
        let v = self.iv(a, q);
        self.tighten(c, b, q, v)
    }

    fn copy_flag(&mut self, c: Cite, a: NodeId, b: NodeId, f: Flag) -> Result<(), EngineError> {
        for (from, to) in [(a, b), (b, a)] {
            self.begin();
            match self.flag(from, f) {
                TriBool::Yes => self.refine(c, to, f, true)?,
                TriBool::No => self.refine(c, to, f, false)?,
                TriBool::Unknown => {}
            }
        }
        Ok(())
    }

    fn set_ranks(
        &mut self,
        c: Cite,
        n: NodeId,
        ranks: &[(Quantity, RankInterval)],
    ) -> Result<(), EngineError> {
        for (q, v) in ranks {
            self.begin();
            self.tighten(c, n, q, *v)?;
        }
        Ok(())
    }

    fn set_flags(&mut self, c: Cite, n: NodeId, flags: &[(Flag, bool)]) -> Result<(), EngineError> {
        self.begin();
        for (f, v) in flags {
            self.refine(c, n, *f, *v)?;
        }
        Ok(())
    }

    pub(crate) fn take_dirty(&mut self) -> Vec<NodeId> {
        std::mem::take(&mut self.dirty)
    }

    pub(crate) fn fire(&mut self, inst: &Inst) -> Result<(), EngineError> {
        match inst {
            Inst::Local(n) => self.local(*n),
            Inst::Scalars(n) => self.scalars(*n),
            Inst::FiniteDim(n, blocks) => self.finite_dim(*n, blocks),
            Inst::Atom(n, fact) => self.atom(*n, *fact),
            Inst::AfCircle { td } => {
                self.begin();
                self.tighten(rules::AF, *td, &Csr, exact(2))
            }
            Inst::DirectSum { node, a, b } => self.direct_sum(*node, *a, *b),
            Inst::Matrix { node, a, n } => {
                let n = std::num::NonZeroU64::new(u64::from(*n)).expect("validated matrix size");
                for q in [Csr, Gsr] {
                    self.begin();
                    let h = self.hi(*a, &q);
                    let bound = match h.finite() {
                        Some(h) => ExtNat::fin(ceil_div(h - 1, n) + 1),
                        None => ExtNat::INF,
                    };
                    self.at_most(rules::MATRIX, *node, &q, bound)?;
                }
                Ok(())
            }
            Inst::SplitEpi { node, a } => {
                self.lower_from(rules::SPLIT_EPI, *node, *a, &Csr)?;
                self.lower_from(rules::SPLIT_EPI, *node, *a, &Gsr)
            }
            Inst::ClassFTensor { node, a } => self.class_f_tensor(*node, *a),
            Inst::SlotTransfer { node, a, key } => {
                let k = slot(key.clone());
                self.max_eq(
                    rules::SLOT_TRANSFER,
                    (*node, &INJ0),
                    &[(*a, &k), (*a, &INJ0)],
                )
            }
            Inst::Suspension { node, a, key } => {
                let k = slot(key.clone());
                self.max_eq(rules::SUSPENSION, (*node, &Gsr), &[(*a, &Gsr), (*a, &k)])
            }
            Inst::FiniteSpectrum { node, a, n } => {
                let mut qs = vec![Csr];
                for k in 1..=*n {
                    qs.push(slot(SlotKey::Surj(k)));
                    qs.push(slot(SlotKey::Inj(k - 1)));
                }
                let parts: Vec<(NodeId, &Quantity)> = qs.iter().map(|q| (*a, q)).collect();
                self.max_upper(rules::FINITE_SPECTRUM, (*node, &Csr), &parts)
            }
            Inst::SphereSlots { node, a, n } => {
                let qs: Vec<Quantity> = sphere_tensor_inputs(*n).into_iter().map(slot).collect();
                let parts: Vec<(NodeId, &Quantity)> = qs.iter().map(|q| (*a, q)).collect();
                self.max_upper(rules::SPHERE_SLOTS, (*node, &INJ0), &parts)?;
                self.max_upper(rules::SPHERE_SLOTS, (*node, &SURJ1), &parts)
            }
            Inst::Commutative { node, x } => self.commutative(*node, x),
            Inst::Wedge { node, a, b } => {
                self.max_eq(rules::WEDGE, (*node, &Gsr), &[(*a, &Gsr), (*b, &Gsr)])?;
                self.max_eq(rules::WEDGE, (*node, &Csr), &[(*a, &Csr), (*b, &Csr)])
            }
            Inst::CircleProduct { node, y, sy } => self.max_eq(
                rules::CIRCLE_PRODUCT,
                (*node, &Gsr),
                &[(*y, &Gsr), (*sy, &Gsr)],
            ),
            Inst::Dominates { big, small } => {
                self.lower_from(rules::DOMINATION, *big, *small, &Csr)?;
                self.lower_from(rules::DOMINATION, *big, *small, &Gsr)
            }
            Inst::Equiv { a, b, kind } => self.equiv(*a, *b, *kind),
            Inst::Pullback { node, b, c, d } => self.pullback(*node, *b, *c, *d),
            Inst::CircleSlots { d, td } => {
                self.max_upper(rules::SURJ0_CSR, (*d, &SURJ0), &[(*d, &Csr)])?;
                self.max_upper(rules::INJ0_GSR_CIRCLE, (*d, &INJ0), &[(*td, &Gsr)])?;
                self.max_upper(rules::SLOTS_CSR_CIRCLE, (*d, &INJ0), &[(*td, &Csr)])?;
                self.max_upper(rules::SLOTS_CSR_CIRCLE, (*d, &SURJ1), &[(*td, &Csr)])
            }
            Inst::Extension { node, j, b } => {
                self.max_upper(rules::EXTENSION, (*node, &Csr), &[(*j, &Csr), (*b, &Csr)])?;
                self.max_upper(rules::EXTENSION, (*node, &Gsr), &[(*j, &Gsr), (*b, &Csr)])?;
                self.max_upper(rules::QUOTIENT, (*b, &Csr), &[(*node, &Csr), (*node, &Tsr)])?;
                self.max_upper(rules::QUOTIENT, (*b, &Gsr), &[(*node, &Gsr), (*node, &Tsr)])
            }
            Inst::Limit { node, parts } => {
                for q in [Csr, Gsr] {
                    self.begin();
                    let hi = parts
                        .iter()
                        .map(|p| self.hi(*p, &q))
                        .min()
                        .unwrap_or(ExtNat::INF);
                    self.at_most(rules::LIMIT, *node, &q, hi)?;
                }
                Ok(())
            }
            Inst::Nccw { node, bound } => {
                self.begin();
                self.at_most(rules::NCCW, *node, &Csr, *bound)
            }
        }
    }

    fn local(&mut self, n: NodeId) -> Result<(), EngineError> {
        use rules::*;
        let (one, two) = (ExtNat::ONE, ExtNat::TWO);

        self.max_upper(ORDER, (n, &Gsr), &[(n, &Csr)])?;
        self.begin();
        let g = self.lo(n, &Gsr);
        self.at_least(ORDER, n, &Csr, g)?;
        self.begin();
        let t = self.hi(n, &Tsr);
        self.at_most(ORDER, n, &Csr, t.succ())?;
        self.begin();
        let c = self.lo(n, &Csr);
        self.at_least(ORDER, n, &Tsr, c.pred_clamped())?;

        self.begin();
        if self.hi(n, &Gsr) == one {
            self.refine(STABLY_FINITE, n, Flag::StablyFinite, true)?;
        }
        self.begin();
        if self.flag(n, Flag::StablyFinite).is_yes() {
            self.refine(STABLY_FINITE, n, Flag::Finite, true)?;
        }
        self.begin();
        if self.flag(n, Flag::Finite).is_no() {
            self.refine(STABLY_FINITE, n, Flag::StablyFinite, false)?;
        }
        self.begin();
        if self.flag(n, Flag::StablyFinite).is_no() {
            self.at_least(STABLY_FINITE, n, &Gsr, two)?;
        }
        self.begin();
        if self.flag(n, Flag::Finite).is_yes() {
            if self.hi(n, &Gsr) <= two {
                self.at_most(FINITE_GSR, n, &Gsr, one)?;
            } else if self.lo(n, &Gsr) >= two {
                self.at_least(FINITE_GSR, n, &Gsr, ExtNat::fin(3))?;
            }
        }
        self.begin();
        if self.flag(n, Flag::Ibn).is_no() {
            self.at_least(IBN_SWINDLE, n, &Gsr, ExtNat::INF)?;
        }
        self.begin();
        if !self.hi(n, &Gsr).is_inf() {
            self.refine(IBN_SWINDLE, n, Flag::Ibn, true)?;
        }

        self.begin();
        if self.hi(n, &Csr) == one {
            self.refine(CSR_K1, n, Flag::K1Zero, true)?;
        }
        self.begin();
        if self.hi(n, &Tsr) == one && self.flag(n, Flag::K1Zero).is_yes() {
            self.at_most(CSR_K1_CONVERSE, n, &Csr, one)?;
        }
        self.begin();
        if self.flag(n, Flag::K1Zero).is_no() {
            self.at_least(CSR_K1, n, &Csr, two)?;
        }
        self.begin();
        if self.hi(n, &Tsr) == one && self.lo(n, &Csr) >= two {
            self.refine(CSR_K1_CONVERSE, n, Flag::K1Zero, false)?;
        }

        self.begin();
        if self.hi(n, &Tsr) == one {
            self.at_most(TSR_ONE, n, &Gsr, one)?;
        }
        self.begin();
        if self.lo(n, &Gsr) >= two {
            self.at_least(TSR_ONE, n, &Tsr, two)?;
        }

        self.begin();
        if self.flag(n, Flag::RealRankZero).is_yes() {
            self.tighten(REAL_RANK_ZERO, n, &INJ0, RankInterval::exact(one))?;
        }
        let demands: Vec<SlotKey> = self.nodes[n.0].demands.iter().cloned().collect();
        for key in demands {
            let bound = match key {
                SlotKey::Inj(_) => RankInterval::exact(one),
                SlotKey::Surj(_) => RankInterval::at_most(two),
                SlotKey::InjSpace(_) => continue,
            };
            self.begin();
            if self.flag(n, Flag::ClassF).is_yes() {
                self.tighten(CLASS_F_SLOTS, n, &slot(key), bound)?;
            }
        }
        Ok(())
    }

    fn scalar_slots(&mut self, n: NodeId, blocks: &[u32]) -> Result<(), EngineError> {
        let all_ones = blocks.iter().all(|&b| b == 1);
        let demands: Vec<SlotKey> = self.nodes[n.0].demands.iter().cloned().collect();
        for key in demands {
            self.begin();
            let q = slot(key.clone());
            match &key {
                SlotKey::Inj(k) if all_ones => {
                    let v = inj_space_scalars(&SpaceExpr::Sphere(*k));
                    self.tighten(rules::INJ_SCALARS, n, &q, v)?;
                }
                SlotKey::InjSpace(x) if all_ones => {
                    self.tighten(rules::INJ_SCALARS, n, &q, inj_space_scalars(x))?;
                }
                SlotKey::Surj(k) if blocks == [1] => {
                    let hi = ExtNat::fin(bott_stable_bound(u64::from(*k), 1));
                    self.at_most(rules::SCALAR_BOTT, n, &q, hi)?;
                }
                _ => {
                    if let Some(v) = finite_dimensional_slot(blocks, &key) {
                        self.tighten(rules::BOTT, n, &q, v)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn scalars(&mut self, n: NodeId) -> Result<(), EngineError> {
        let c = rules::SCALARS;
        self.set_ranks(c, n, &[(Tsr, one()), (Gsr, one()), (Csr, one())])?;
        self.set_flags(c, n, &[(Flag::K1Zero, true), (Flag::ClassF, false)])?;
        self.scalar_slots(n, &[1])
    }

    fn finite_dim(&mut self, n: NodeId, blocks: &[u32]) -> Result<(), EngineError> {
        let c = rules::FINITE_DIM;
        self.set_ranks(c, n, &[(Tsr, one()), (Gsr, one()), (Csr, one())])?;
        self.set_flags(c, n, &[(Flag::K1Zero, true), (Flag::Finite, true)])?;
        self.set_flags(rules::NOT_CLASS_F, n, &[(Flag::ClassF, false)])?;
        self.scalar_slots(n, blocks)
    }

    fn atom(&mut self, n: NodeId, fact: AtomFact) -> Result<(), EngineError> {
        use rules::*;
        let f = |q, v| (q, v);
        if fact != AtomFact::RealRankZero {
            self.set_flags(CLASS_F_MEMBER, n, &[(Flag::ClassF, true)])?;
        }
        match fact {
            AtomFact::ZStable => Ok(()),
            AtomFact::Rotation => {
                self.set_ranks(
                    ROTATION,
                    n,
                    &[f(Tsr, one()), f(Gsr, one()), f(Csr, exact(2))],
                )?;
                self.set_flags(ROTATION, n, &[(Flag::K1Zero, false), (Flag::Finite, true)])
            }
            AtomFact::Cuntz => {
                self.set_flags(CUNTZ, n, &[(Flag::Ibn, false)])?;
                self.set_flags(PURELY_INFINITE, n, &[(Flag::Finite, false)])
            }
            AtomFact::CuntzInfinity | AtomFact::Kirchberg => {
                self.set_ranks(KIRCHBERG, n, &[f(Gsr, exact(2)), f(Csr, exact(2))])?;
                self.set_flags(KIRCHBERG, n, &[(Flag::Ibn, true)])?;
                self.set_flags(PURELY_INFINITE, n, &[(Flag::Finite, false)])
            }
            AtomFact::Af => {
                self.set_ranks(AF, n, &[f(Tsr, one()), f(Csr, one())])?;
                self.set_flags(AF, n, &[(Flag::StablyFinite, true)])
            }
            AtomFact::PurelyInfinite => {
                self.set_flags(PURELY_INFINITE, n, &[(Flag::Finite, false)])
            }
            AtomFact::RealRankZero => {
                self.set_flags(REAL_RANK_ZERO, n, &[(Flag::RealRankZero, true)])
            }
        }
    }

    fn direct_sum(&mut self, node: NodeId, a: NodeId, b: NodeId) -> Result<(), EngineError> {
        for q in [Tsr, Gsr, Csr] {
            self.max_eq(rules::DIRECT_SUM, (node, &q), &[(a, &q), (b, &q)])?;
        }
        let c = rules::DIRECT_SUM_K1;
        let k1 = Flag::K1Zero;
        self.begin();
        let (fa, fb) = (self.flag(a, k1), self.flag(b, k1));
        if fa.is_yes() && fb.is_yes() {
            self.refine(c, node, k1, true)?;
        }
        for (part, val) in [(a, fa), (b, fb)] {
            if val.is_no() {
                self.begin();
                self.flag(part, k1);
                self.refine(c, node, k1, false)?;
            }
        }
        self.begin();
        if self.flag(node, k1).is_yes() {
            self.refine(c, a, k1, true)?;
            self.refine(c, b, k1, true)?;
        }
        Ok(())
    }

    fn class_f_tensor(&mut self, node: NodeId, a: NodeId) -> Result<(), EngineError> {
        use rules::{CLASS_F_CSR, CLASS_F_GSR};
        let gate = |run: &mut Self| run.flag(a, Flag::ClassF).is_yes();

        self.begin();
        if !gate(self) {
            return Ok(());
        }
        let v = self.iv(a, &Gsr);
        self.tighten(CLASS_F_GSR, node, &Gsr, v)?;
        self.begin();
        gate(self);
        let v = self.iv(node, &Gsr);
        self.tighten(CLASS_F_GSR, a, &Gsr, v)?;

        self.begin();
        gate(self);
        let g = self.hi(a, &Gsr);
        self.at_most(CLASS_F_CSR, node, &Csr, g.max(ExtNat::TWO))?;

        self.begin();
        gate(self);
        if self.lo(a, &Csr) >= ExtNat::TWO {
            let v = self.iv(a, &Csr);
            self.tighten(CLASS_F_CSR, node, &Csr, v)?;
            self.begin();
            gate(self);
            self.lo(a, &Csr);
            let v = self.iv(node, &Csr);
            self.tighten(CLASS_F_CSR, a, &Csr, v)?;
        }
        Ok(())
    }

    fn commutative(&mut self, node: NodeId, x: &SpaceExpr) -> Result<(), EngineError> {
        match x {
            SpaceExpr::Sphere(d) => {
                let d64 = u64::from(*d);
                let g = RankInterval::exact(gsr_commutative_sphere(d64));
                self.set_ranks(rules::SPHERE_FORMULA, node, &[(Gsr, g)])?;
                if *d == 1 {
                    let c = RankInterval::exact(csr_commutative_torus(1));
                    self.set_ranks(rules::TORUS_FORMULA, node, &[(Csr, c)])?;
                }
                self.set_flags(rules::SPHERE_K1, node, &[(Flag::K1Zero, d % 2 == 0)])?;
            }
            SpaceExpr::Torus(d) => {
                let d = u64::from(*d);
                let g = RankInterval::exact(gsr_commutative_torus(d));
                let c = RankInterval::exact(csr_commutative_torus(d));
                self.set_ranks(rules::TORUS_FORMULA, node, &[(Gsr, g), (Csr, c)])?;
                self.set_flags(rules::SPHERE_K1, node, &[(Flag::K1Zero, false)])?;
            }
            _ => {}
        }
        let dim = dim_upper(x);
        self.begin();
        self.at_most(rules::NISTOR, node, &Csr, ExtNat::fin(dim.div_ceil(2) + 1))?;
        if dim <= 4 {
            self.begin();
            self.at_most(rules::LOW_DIM, node, &Gsr, ExtNat::ONE)?;
        }
        Ok(())
    }

    fn equiv(&mut self, a: NodeId, b: NodeId, kind: Equivalence) -> Result<(), EngineError> {
        let c = match kind {
            Equivalence::Homotopy => rules::HOMOTOPY_EQUIVALENCE,
            Equivalence::Iso => rules::ISOMORPHISM,
        };
        self.copy_both(c, a, b, &Gsr)?;
        self.copy_both(c, a, b, &Csr)?;
        let keys: BTreeSet<SlotKey> = self.states[a.0]
            .slots
            .iter()
            .chain(self.states[b.0].slots.iter())
            .map(|(k, _)| k.clone())
            .collect();
        for k in keys {
            self.copy_both(c, a, b, &slot(k))?;
        }
        match kind {
            Equivalence::Homotopy => self.copy_flag(c, a, b, Flag::K1Zero),
            Equivalence::Iso => {
                self.copy_both(c, a, b, &Tsr)?;
                for f in Flag::ALL {
                    self.copy_flag(c, a, b, f)?;
                }
                Ok(())
            }
        }
    }

    fn pullback(
        &mut self,
        node: NodeId,
        b: NodeId,
        c: NodeId,
        d: NodeId,
    ) -> Result<(), EngineError> {
        self.max_upper(rules::PULLBACK_TSR, (node, &Tsr), &[(b, &Tsr), (c, &Tsr)])?;
        self.max_upper(
            rules::PULLBACK_GSR,
            (node, &Gsr),
            &[(b, &Csr), (c, &Csr), (d, &INJ0)],
        )?;
        self.begin();
        if self.flag(d, Flag::K1Zero).is_yes() {
            let hi = [(b, Gsr), (c, Gsr), (d, INJ0)]
                .iter()
                .map(|(n, q)| self.hi(*n, q))
                .max()
                .unwrap_or(ExtNat::INF);
            self.at_most(rules::PULLBACK_GSR_K1, node, &Gsr, hi)?;
        }
        self.max_upper(
            rules::PULLBACK_CSR,
            (node, &Csr),
            &[(b, &Csr), (c, &Csr), (d, &INJ0), (d, &SURJ1)],
        )
    }
}

/// Fire `insts` until no instance narrows anything.
pub(crate) fn saturate(
    run: &mut Run<'_>,
    groups: &[Vec<Inst>],
    shuffle_seed: Option<u64>,
) -> Result<(), EngineError> {
    let mut insts: Vec<&Inst> = Vec::new();
    for group in groups.iter().rev() {
        insts.extend(group.iter().filter(|i| i.is_axiomatic()));
        insts.extend(group.iter().filter(|i| !i.is_axiomatic()));
    }
    let mut order: Vec<usize> = (0..insts.len()).collect();
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
    for (i, inst) in insts.iter().enumerate() {
        let mut touched = inst.touches();
        touched.sort();
        touched.dedup();
        for n in touched {
            watchers[n.0].push(i);
        }
    }
    if let Some(seed) = shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
        for w in &mut watchers {
            w.shuffle(&mut rng);
        }
    }
    let mut queued = vec![true; insts.len()];
    let mut queue: VecDeque<usize> = order.into();
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        run.fire(insts[i])?;
        for n in run.take_dirty() {
            for &w in &watchers[n.0] {
                if !queued[w] {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(())
}
