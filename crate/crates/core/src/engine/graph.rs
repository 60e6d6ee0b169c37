//! The node graph: the input expression, every sub-expression, and the
//! derived algebras the rules talk about (`C(𝕋)⊗D`, normalized tensors,
//! dominated tensors, expanded NCCW complexes).

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::expr::{AlgebraExpr, Atom};
use crate::homotopy::{sphere_tensor_inputs, SlotKey};
use crate::lattice::ExtNat;
use crate::nccw::{csr_upper_nccw, lower_to_pullback};
use crate::spaces::{
    desuspend, dim_upper, dominated_candidates, normalize_space, split_circle, SpaceExpr,
};

use super::{EngineError, NodeId};

/// Above this covering dimension the finite-spectrum rule is not instantiated
/// for non-scalar coefficients (it would demand `2n` slots).
pub const FINITE_SPECTRUM_MAX_DIM: u64 = 64;

#[derive(Debug, Clone)]
pub struct Node {
    pub expr: AlgebraExpr,
    pub label: String,
    /// Slots some rule reads on this node.
    pub demands: BTreeSet<SlotKey>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Equivalence {
    /// Same gsr, csr, K_1 and slots.
    Homotopy,
    /// Same everything.
    Iso,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AtomFact {
    ZStable,
    Rotation,
    Cuntz,
    CuntzInfinity,
    Kirchberg,
    Af,
    PurelyInfinite,
    RealRankZero,
}

/// One rule applied at one place in the graph.
#[derive(Debug, Clone)]
pub(crate) enum Inst {
    Local(NodeId),
    Scalars(NodeId),
    FiniteDim(NodeId, Vec<u32>),
    Atom(NodeId, AtomFact),
    DirectSum {
        node: NodeId,
        a: NodeId,
        b: NodeId,
    },
    Matrix {
        node: NodeId,
        a: NodeId,
        n: u32,
    },
    SplitEpi {
        node: NodeId,
        a: NodeId,
    },
    ClassFTensor {
        node: NodeId,
        a: NodeId,
    },
    SlotTransfer {
        node: NodeId,
        a: NodeId,
        key: SlotKey,
    },
    Suspension {
        node: NodeId,
        a: NodeId,
        key: SlotKey,
    },
    FiniteSpectrum {
        node: NodeId,
        a: NodeId,
        n: u32,
    },
    SphereSlots {
        node: NodeId,
        a: NodeId,
        n: u32,
    },
    Commutative {
        node: NodeId,
        x: SpaceExpr,
    },
    Wedge {
        node: NodeId,
        a: NodeId,
        b: NodeId,
    },
    CircleProduct {
        node: NodeId,
        y: NodeId,
        sy: NodeId,
    },
    Dominates {
        big: NodeId,
        small: NodeId,
    },
    Equiv {
        a: NodeId,
        b: NodeId,
        kind: Equivalence,
    },
    Pullback {
        node: NodeId,
        b: NodeId,
        c: NodeId,
        d: NodeId,
    },
    CircleSlots {
        d: NodeId,
        td: NodeId,
    },
    Extension {
        node: NodeId,
        j: NodeId,
        b: NodeId,
    },
    Limit {
        node: NodeId,
        parts: Vec<NodeId>,
    },
    Nccw {
        node: NodeId,
        bound: ExtNat,
    },
    AfCircle {
        td: NodeId,
    },
}

impl Inst {
    /// Nodes whose state the instance reads or writes.
    pub(crate) fn touches(&self) -> Vec<NodeId> {
        match self {
            Inst::Local(n) | Inst::Scalars(n) | Inst::FiniteDim(n, _) | Inst::Atom(n, _) => {
                vec![*n]
            }
            Inst::Commutative { node, .. } | Inst::Nccw { node, .. } => vec![*node],
            Inst::AfCircle { td } => vec![*td],
            Inst::Matrix { node, a, .. }
            | Inst::SplitEpi { node, a }
            | Inst::ClassFTensor { node, a }
            | Inst::SlotTransfer { node, a, .. }
            | Inst::Suspension { node, a, .. }
            | Inst::FiniteSpectrum { node, a, .. }
            | Inst::SphereSlots { node, a, .. } => vec![*node, *a],
            Inst::DirectSum { node, a, b } | Inst::Wedge { node, a, b } => vec![*node, *a, *b],
            Inst::CircleProduct { node, y, sy } => vec![*node, *y, *sy],
            Inst::Dominates { big, small } => vec![*big, *small],
            Inst::Equiv { a, b, .. } => vec![*a, *b],
            Inst::Pullback { node, b, c, d } => vec![*node, *b, *c, *d],
            Inst::CircleSlots { d, td } => vec![*d, *td],
            Inst::Extension { node, j, b } => vec![*node, *j, *b],
            Inst::Limit { node, parts } => {
                let mut v = vec![*node];
                v.extend(parts);
                v
            }
        }
    }

    /// Rules that only write constants go first within a node.
    pub(crate) fn is_axiomatic(&self) -> bool {
        matches!(
            self,
            Inst::Scalars(_)
                | Inst::FiniteDim(..)
                | Inst::Atom(..)
                | Inst::Commutative { .. }
                | Inst::Nccw { .. }
                | Inst::AfCircle { .. }
        )
    }
}

pub(crate) struct Graph {
    pub nodes: Vec<Node>,
    index: HashMap<AlgebraExpr, NodeId>,
    /// Instances grouped by the node whose expansion created them.
    pub groups: Vec<Vec<Inst>>,
    equivs: Vec<Vec<NodeId>>,
    budget: usize,
    used: usize,
    expand: VecDeque<NodeId>,
    pending_demands: VecDeque<(NodeId, SlotKey)>,
}

fn scalar_tensor(x: SpaceExpr) -> AlgebraExpr {
    AlgebraExpr::tensor(x, AlgebraExpr::Scalars)
}

impl Graph {
    pub(crate) fn build(roots: &[&AlgebraExpr], budget: usize) -> Result<Graph, EngineError> {
        let mut g = Graph {
            nodes: Vec::new(),
            index: HashMap::new(),
            groups: Vec::new(),
            equivs: Vec::new(),
            budget,
            used: 0,
            expand: VecDeque::new(),
            pending_demands: VecDeque::new(),
        };
        for r in roots {
            g.intern(r)?;
        }
        while let Some(id) = g.expand.pop_front() {
            g.expand_node(id)?;
        }
        while let Some((id, key)) = g.pending_demands.pop_front() {
            g.propagate_demand(id, key)?;
        }
        g.add_slot_instances();
        Ok(g)
    }

    pub(crate) fn find(&self, e: &AlgebraExpr) -> Option<NodeId> {
        self.index.get(e).copied()
    }

    fn charge(&mut self) -> Result<(), EngineError> {
        self.used += 1;
        if self.used > self.budget {
            return Err(EngineError::SizeLimit { limit: self.budget });
        }
        Ok(())
    }

    fn intern(&mut self, e: &AlgebraExpr) -> Result<NodeId, EngineError> {
        if let Some(id) = self.index.get(e) {
            return Ok(*id);
        }
        self.charge()?;
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            expr: e.clone(),
            label: crate::dsl::format(e),
            demands: BTreeSet::new(),
        });
        self.index.insert(e.clone(), id);
        self.groups.push(Vec::new());
        self.equivs.push(Vec::new());
        self.expand.push_back(id);
        Ok(id)
    }

    fn demand(&mut self, id: NodeId, key: SlotKey) -> Result<(), EngineError> {
        if self.nodes[id.0].demands.insert(key.clone()) {
            self.charge()?;
            self.pending_demands.push_back((id, key));
        }
        Ok(())
    }

    fn push(&mut self, owner: NodeId, inst: Inst) {
        self.groups[owner.0].push(inst);
    }

    fn equiv(&mut self, a: NodeId, b: NodeId, kind: Equivalence) {
        if a == b {
            return;
        }
        self.equivs[a.0].push(b);
        self.equivs[b.0].push(a);
        self.push(a, Inst::Equiv { a, b, kind });
    }

    fn expand_node(&mut self, id: NodeId) -> Result<(), EngineError> {
        let expr = self.nodes[id.0].expr.clone();
        self.push(id, Inst::Local(id));
        match &expr {
            AlgebraExpr::Scalars => self.push(id, Inst::Scalars(id)),
            AlgebraExpr::FiniteDim(blocks) => self.push(id, Inst::FiniteDim(id, blocks.clone())),
            AlgebraExpr::Matrix(n, a) => {
                let a = self.intern(a)?;
                self.push(id, Inst::Matrix { node: id, a, n: *n });
            }
            AlgebraExpr::DirectSum(a, b) => {
                let a = self.intern(a)?;
                let b = self.intern(b)?;
                self.push(id, Inst::DirectSum { node: id, a, b });
            }
            AlgebraExpr::Tensor(x, a) => self.expand_tensor(id, x, a)?,
            AlgebraExpr::Pullback { b, c, d, .. } => {
                let td_expr = AlgebraExpr::tensor(SpaceExpr::Sphere(1), (**d).clone());
                let b = self.intern(b)?;
                let c = self.intern(c)?;
                let d = self.intern(d)?;
                let td = self.intern(&td_expr)?;
                self.push(id, Inst::Pullback { node: id, b, c, d });
                self.push(id, Inst::CircleSlots { d, td });
                self.demand(d, SlotKey::Inj(0))?;
                self.demand(d, SlotKey::Surj(1))?;
            }
            AlgebraExpr::Extension(j, b) => {
                let j = self.intern(j)?;
                let b = self.intern(b)?;
                self.push(id, Inst::Extension { node: id, j, b });
            }
            AlgebraExpr::Limit(parts) => {
                let parts = parts
                    .iter()
                    .map(|p| self.intern(p))
                    .collect::<Result<Vec<_>, _>>()?;
                self.push(id, Inst::Limit { node: id, parts });
            }
            AlgebraExpr::Nccw(c) => {
                let lowered = self.intern(&lower_to_pullback(c))?;
                self.equiv(id, lowered, Equivalence::Iso);
                self.push(
                    id,
                    Inst::Nccw {
                        node: id,
                        bound: csr_upper_nccw(c),
                    },
                );
            }
            AlgebraExpr::Atom(atom) => self.expand_atom(id, atom)?,
        }
        Ok(())
    }

    fn expand_atom(&mut self, id: NodeId, atom: &Atom) -> Result<(), EngineError> {
        let fact = match atom {
            Atom::JiangSuStable(a) => {
                self.intern(a)?;
                AtomFact::ZStable
            }
            Atom::RealRankZero(a) => {
                let a = self.intern(a)?;
                self.equiv(id, a, Equivalence::Iso);
                self.demand(id, SlotKey::Inj(0))?;
                AtomFact::RealRankZero
            }
            Atom::IrrationalRotation => AtomFact::Rotation,
            Atom::Cuntz(_) => AtomFact::Cuntz,
            Atom::CuntzInfinity => AtomFact::CuntzInfinity,
            Atom::KirchbergIbn => AtomFact::Kirchberg,
            Atom::PurelyInfiniteSimpleCorner => AtomFact::PurelyInfinite,
            Atom::SimpleInfDimAf => {
                let td = self.intern(&AlgebraExpr::tensor(
                    SpaceExpr::Sphere(1),
                    AlgebraExpr::Atom(Atom::SimpleInfDimAf),
                ))?;
                self.push(id, Inst::AfCircle { td });
                self.push(id, Inst::CircleSlots { d: id, td });
                AtomFact::Af
            }
        };
        self.push(id, Inst::Atom(id, fact));
        Ok(())
    }

    fn expand_tensor(
        &mut self,
        id: NodeId,
        x: &SpaceExpr,
        a_expr: &AlgebraExpr,
    ) -> Result<(), EngineError> {
        let a = self.intern(a_expr)?;
        self.push(id, Inst::SplitEpi { node: id, a });
        if let AlgebraExpr::Tensor(y, b) = a_expr {
            let merged = AlgebraExpr::tensor(SpaceExpr::prod(x.clone(), y.clone()), (**b).clone());
            let m = self.intern(&merged)?;
            self.equiv(id, m, Equivalence::Iso);
        }
        let xn = normalize_space(x);
        if xn == SpaceExpr::Pt {
            self.equiv(id, a, Equivalence::Homotopy);
            return Ok(());
        }
        if &xn != x {
            let canonical = self.intern(&AlgebraExpr::tensor(xn, a_expr.clone()))?;
            self.equiv(id, canonical, Equivalence::Homotopy);
            return Ok(());
        }
        let scalar = *a_expr == AlgebraExpr::Scalars;
        self.push(id, Inst::ClassFTensor { node: id, a });
        if let Some(y) = desuspend(&xn) {
            let key = SlotKey::inj_space(&y);
            self.demand(a, key.clone())?;
            self.push(id, Inst::Suspension { node: id, a, key });
        }
        let dim = dim_upper(&xn);
        if !scalar && dim <= FINITE_SPECTRUM_MAX_DIM {
            let n = dim as u32;
            for k in 1..=n {
                self.demand(a, SlotKey::Surj(k))?;
                self.demand(a, SlotKey::Inj(k - 1))?;
            }
            self.push(id, Inst::FiniteSpectrum { node: id, a, n });
        }
        let wedge = matches!(xn, SpaceExpr::Wedge(..));
        for y in dominated_candidates(&xn) {
            let y = normalize_space(&y);
            if wedge && matches!(y, SpaceExpr::Wedge(..)) {
                continue;
            }
            let small = if y == SpaceExpr::Pt {
                a
            } else {
                self.intern(&AlgebraExpr::tensor(y, a_expr.clone()))?
            };
            self.push(id, Inst::Dominates { big: id, small });
        }
        if scalar {
            self.push(
                id,
                Inst::Commutative {
                    node: id,
                    x: xn.clone(),
                },
            );
            if let SpaceExpr::Wedge(l, r) = &xn {
                let l = self.intern(&scalar_tensor((**l).clone()))?;
                let r = self.intern(&scalar_tensor((**r).clone()))?;
                self.push(
                    id,
                    Inst::Wedge {
                        node: id,
                        a: l,
                        b: r,
                    },
                );
            }
            if let Some(y) = split_circle(&xn) {
                let sy = normalize_space(&SpaceExpr::susp(y.clone()));
                let y = self.intern(&scalar_tensor(y))?;
                let sy = self.intern(&scalar_tensor(sy))?;
                self.push(id, Inst::CircleProduct { node: id, y, sy });
            }
        }
        Ok(())
    }

    /// The canonical tensor node `C(X)⊗A` behind `id`, if `id` is one.
    fn canonical_tensor(&self, id: NodeId) -> Option<(SpaceExpr, NodeId)> {
        match &self.nodes[id.0].expr {
            AlgebraExpr::Tensor(x, a) if *x == normalize_space(x) && *x != SpaceExpr::Pt => {
                Some((x.clone(), self.find(a)?))
            }
            _ => None,
        }
    }

    fn propagate_demand(&mut self, id: NodeId, key: SlotKey) -> Result<(), EngineError> {
        for other in self.equivs[id.0].clone() {
            self.demand(other, key.clone())?;
        }
        let Some((x, a)) = self.canonical_tensor(id) else {
            return Ok(());
        };
        if key == SlotKey::Inj(0) {
            self.demand(a, SlotKey::inj_space(&x))?;
            self.demand(a, SlotKey::Inj(0))?;
        }
        if key == SlotKey::Inj(0) || key == SlotKey::Surj(1) {
            if let SpaceExpr::Sphere(m) = x {
                for k in sphere_tensor_inputs(m + 1) {
                    self.demand(a, k)?;
                }
            }
        }
        Ok(())
    }

    fn add_slot_instances(&mut self) {
        for i in 0..self.nodes.len() {
            let id = NodeId(i);
            let Some((x, a)) = self.canonical_tensor(id) else {
                continue;
            };
            let demands = &self.nodes[i].demands;
            let inj0 = demands.contains(&SlotKey::Inj(0));
            let surj1 = demands.contains(&SlotKey::Surj(1));
            if inj0 {
                let key = SlotKey::inj_space(&x);
                self.push(id, Inst::SlotTransfer { node: id, a, key });
            }
            if let SpaceExpr::Sphere(m) = x {
                if inj0 || surj1 {
                    self.push(
                        id,
                        Inst::SphereSlots {
                            node: id,
                            a,
                            n: m + 1,
                        },
                    );
                }
            }
        }
    }
}
