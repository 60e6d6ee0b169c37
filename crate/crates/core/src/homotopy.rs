//! Stability thresholds for `GL_{m-1}(A) -> GL_m(A)` and the inj/surj slots.
//!
//! `inj_k(A)` (resp. `surj_k(A)`) is the least `n >= 1` such that the block
//! inclusion is injective (resp. surjective) on `π_k` for every `m >= n`;
//! `inj_X(A)` is the same with based homotopy classes of maps out of `X`.
//! Only thresholds are modeled, never the groups themselves.

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU64;

use crate::lattice::{ceil_div, EmptyMeet, ExtNat, RankInterval};
use crate::spaces::{normalize_space, SpaceExpr};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotKey {
    Inj(u32),
    Surj(u32),
    /// `inj_X` for a space that is not a sphere. Spheres use [`SlotKey::Inj`].
    InjSpace(SpaceExpr),
}

impl SlotKey {
    /// Key for `inj_X`; `inj_{S^k}` is `inj_k`.
    pub fn inj_space(x: &SpaceExpr) -> SlotKey {
        match normalize_space(x) {
            SpaceExpr::Sphere(k) => SlotKey::Inj(k),
            other => SlotKey::InjSpace(other),
        }
    }
}

impl fmt::Display for SlotKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotKey::Inj(k) => write!(f, "inj_{k}"),
            SlotKey::Surj(k) => write!(f, "surj_{k}"),
            SlotKey::InjSpace(x) => write!(f, "inj[{x}]"),
        }
    }
}

/// Slot intervals of one algebra. A missing key reads as `[1, inf]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlotTable(BTreeMap<SlotKey, RankInterval>);

impl SlotTable {
    pub fn get(&self, key: &SlotKey) -> RankInterval {
        self.0.get(key).copied().unwrap_or(RankInterval::UNKNOWN)
    }

    /// Meet `bound` into the slot; returns whether it narrowed.
    pub fn tighten(&mut self, key: SlotKey, bound: RankInterval) -> Result<bool, EmptyMeet> {
        let cur = self.get(&key);
        let next = cur.meet(&bound)?;
        if next == cur {
            return Ok(false);
        }
        self.0.insert(key, next);
        Ok(true)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SlotKey, &RankInterval)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `⌈k/(2ℓ)⌉ + 1`: from this matrix size on, both π_k-surjectivity and
/// π_{k-1}-injectivity hold for `M_ℓ(C)` blocks.
pub fn bott_stable_bound(k: u64, ell: u64) -> u64 {
    let two_ell = NonZeroU64::new(ell.max(1).saturating_mul(2)).expect("2ℓ >= 2");
    ceil_div(k, two_ell) + 1
}

/// Injectivity threshold in degree `j` for `M_ℓ(C)` blocks.
///
/// Injectivity in degree `j` is the degree-`(j+1)` Bott condition. If
/// `j <= 2ℓ - 1` the maps are isomorphisms for every `m >= 2`, and `m = 1`
/// is trivially injective, so the threshold drops to 1.
pub fn inj_stable_bound(j: u64, ell: u64) -> u64 {
    if j < 2 * ell.max(1) {
        1
    } else {
        bott_stable_bound(j + 1, ell)
    }
}

fn min_block(blocks: &[u32]) -> u64 {
    blocks.iter().copied().min().map_or(1, u64::from).max(1)
}

/// `(inj_k, surj_k)` for a finite-dimensional algebra with the given block sizes.
pub fn slots_finite_dimensional(blocks: &[u32], k: u32) -> (RankInterval, RankInterval) {
    let ell = min_block(blocks);
    let k = u64::from(k);
    (
        RankInterval::at_most(ExtNat::fin(inj_stable_bound(k, ell))),
        RankInterval::at_most(ExtNat::fin(bott_stable_bound(k, ell))),
    )
}

/// Bound for a single slot of a finite-dimensional algebra, if one is known.
pub fn finite_dimensional_slot(blocks: &[u32], key: &SlotKey) -> Option<RankInterval> {
    match key {
        SlotKey::Inj(k) => Some(slots_finite_dimensional(blocks, *k).0),
        SlotKey::Surj(k) => Some(slots_finite_dimensional(blocks, *k).1),
        SlotKey::InjSpace(_) => None,
    }
}

/// `(inj_k, surj_k)` for an algebra whose block inclusions are weak homotopy
/// equivalences from `m = 2` on. Independent of `k`.
pub fn slots_class_f(_k: u32) -> (RankInterval, RankInterval) {
    (
        RankInterval::exact(ExtNat::ONE),
        RankInterval::at_most(ExtNat::TWO),
    )
}

/// Slot bounds implied by the ranks of `D`, `C(𝕋)⊗D`:
/// `surj_0 <= csr(D)`, `inj_0 <= gsr(𝕋D)`, `max{inj_0, surj_1} <= csr(𝕋D)`.
pub fn slots_from_ranks(
    csr_self: RankInterval,
    gsr_tensor_circle: RankInterval,
    csr_tensor_circle: RankInterval,
) -> Vec<(SlotKey, RankInterval)> {
    vec![
        (SlotKey::Surj(0), RankInterval::at_most(csr_self.hi())),
        (
            SlotKey::Inj(0),
            RankInterval::at_most(gsr_tensor_circle.hi()),
        ),
        (
            SlotKey::Inj(0),
            RankInterval::at_most(csr_tensor_circle.hi()),
        ),
        (
            SlotKey::Surj(1),
            RankInterval::at_most(csr_tensor_circle.hi()),
        ),
    ]
}

/// Slots of `A` that bound `inj_0` and `surj_1` of `C(S^{n-1})⊗A`.
pub fn sphere_tensor_inputs(n: u32) -> Vec<SlotKey> {
    let mut keys = vec![
        SlotKey::Surj(1),
        SlotKey::Surj(n),
        SlotKey::Inj(n.saturating_sub(1)),
        SlotKey::Inj(0),
    ];
    keys.sort();
    keys.dedup();
    keys
}

/// Upper bound on `inj_0` and `surj_1` of `C(S^{n-1})⊗A` from the slots of `A`:
/// `max{surj_1(A), surj_n(A), inj_{n-1}(A), inj_0(A)}`.
pub fn slots_sphere_tensor(a_slots: &SlotTable, n: u32) -> RankInterval {
    let hi = sphere_tensor_inputs(n)
        .iter()
        .map(|k| a_slots.get(k).hi())
        .max()
        .unwrap_or(ExtNat::INF);
    RankInterval::at_most(hi)
}
