//! Pointed compact spaces and the closed-form commutative rank formulas.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::homotopy::bott_stable_bound;
use crate::lattice::{ExtNat, RankInterval, TriBool};

/// A pointed compact Hausdorff space, built from a few standard pieces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpaceExpr {
    Pt,
    Sphere(u32),
    /// `d >= 1`
    Torus(u32),
    /// `d >= 1`
    Disk(u32),
    /// `k >= 1`
    Cube(u32),
    Prod(Box<SpaceExpr>, Box<SpaceExpr>),
    Wedge(Box<SpaceExpr>, Box<SpaceExpr>),
    Susp(Box<SpaceExpr>),
    /// Some compact space of covering dimension at most `n`; nothing else is known.
    CwSkeleton(u32),
}

impl SpaceExpr {
    pub fn prod(a: SpaceExpr, b: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn wedge(a: SpaceExpr, b: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Wedge(Box::new(a), Box::new(b))
    }

    pub fn susp(a: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Susp(Box::new(a))
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        match self {
            SpaceExpr::Prod(a, b) | SpaceExpr::Wedge(a, b) => 1 + a.size() + b.size(),
            SpaceExpr::Susp(a) => 1 + a.size(),
            _ => 1,
        }
    }

    /// Parameter constraints that the type cannot express.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            SpaceExpr::Torus(0) => Err("T(d) needs d >= 1".into()),
            SpaceExpr::Disk(0) => Err("D(d) needs d >= 1".into()),
            SpaceExpr::Cube(0) => Err("I(k) needs k >= 1".into()),
            SpaceExpr::Prod(a, b) | SpaceExpr::Wedge(a, b) => {
                a.validate()?;
                b.validate()
            }
            SpaceExpr::Susp(a) => a.validate(),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Pt => f.write_str("pt"),
            SpaceExpr::Sphere(d) => write!(f, "S({d})"),
            SpaceExpr::Torus(d) => write!(f, "T({d})"),
            SpaceExpr::Disk(d) => write!(f, "D({d})"),
            SpaceExpr::Cube(k) => write!(f, "I({k})"),
            SpaceExpr::Prod(a, b) => write!(f, "prod({a}, {b})"),
            SpaceExpr::Wedge(a, b) => write!(f, "wedge({a}, {b})"),
            SpaceExpr::Susp(a) => write!(f, "susp({a})"),
            SpaceExpr::CwSkeleton(n) => write!(f, "cw({n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceFacts {
    pub dim_upper: u64,
    pub is_contractible: TriBool,
}

pub fn space_facts(x: &SpaceExpr) -> SpaceFacts {
    let n = normalize_space(x);
    let is_contractible = if n == SpaceExpr::Pt {
        TriBool::Yes
    } else if has_sphere_retract(&n) {
        TriBool::No
    } else {
        TriBool::Unknown
    };
    SpaceFacts {
        dim_upper: dim_upper(x),
        is_contractible,
    }
}

// A space that retracts onto a sphere or circle is not contractible.
fn has_sphere_retract(n: &SpaceExpr) -> bool {
    match n {
        SpaceExpr::Sphere(_) | SpaceExpr::Torus(_) => true,
        SpaceExpr::Prod(a, b) | SpaceExpr::Wedge(a, b) => {
            has_sphere_retract(a) || has_sphere_retract(b)
        }
        _ => false,
    }
}

/// Upper bound on covering dimension.
pub fn dim_upper(x: &SpaceExpr) -> u64 {
    match x {
        SpaceExpr::Pt => 0,
        SpaceExpr::Sphere(d)
        | SpaceExpr::Torus(d)
        | SpaceExpr::Disk(d)
        | SpaceExpr::Cube(d)
        | SpaceExpr::CwSkeleton(d) => u64::from(*d),
        SpaceExpr::Prod(a, b) => dim_upper(a).saturating_add(dim_upper(b)),
        SpaceExpr::Wedge(a, b) => dim_upper(a).max(dim_upper(b)),
        SpaceExpr::Susp(a) => dim_upper(a).saturating_add(1),
    }
}

fn product_factors(x: SpaceExpr, out: &mut Vec<SpaceExpr>) {
    match x {
        SpaceExpr::Prod(a, b) => {
            product_factors(*a, out);
            product_factors(*b, out);
        }
        other => out.push(other),
    }
}

fn wedge_summands(x: SpaceExpr, out: &mut Vec<SpaceExpr>) {
    match x {
        SpaceExpr::Wedge(a, b) => {
            wedge_summands(*a, out);
            wedge_summands(*b, out);
        }
        other => out.push(other),
    }
}

fn fold_left(items: Vec<SpaceExpr>, join: fn(SpaceExpr, SpaceExpr) -> SpaceExpr) -> SpaceExpr {
    items.into_iter().reduce(join).unwrap_or(SpaceExpr::Pt)
}

fn circle_dim(x: &SpaceExpr) -> Option<u32> {
    match x {
        SpaceExpr::Sphere(1) => Some(1),
        SpaceExpr::Torus(d) => Some(*d),
        _ => None,
    }
}

fn torus(d: u32) -> SpaceExpr {
    if d == 1 {
        SpaceExpr::Sphere(1)
    } else {
        SpaceExpr::Torus(d)
    }
}

/// Build a normalized product from normalized, non-product factors.
fn make_product(factors: Vec<SpaceExpr>) -> SpaceExpr {
    let mut circles: u32 = 0;
    let mut rest = Vec::with_capacity(factors.len());
    for f in factors {
        if f == SpaceExpr::Pt {
            continue;
        }
        match circle_dim(&f) {
            Some(d) => circles = circles.saturating_add(d),
            None => rest.push(f),
        }
    }
    if circles > 0 {
        rest.push(torus(circles));
    }
    rest.sort();
    fold_left(rest, SpaceExpr::prod)
}

fn make_wedge(summands: Vec<SpaceExpr>) -> SpaceExpr {
    let mut rest: Vec<SpaceExpr> = summands
        .into_iter()
        .filter(|s| *s != SpaceExpr::Pt)
        .collect();
    rest.sort();
    fold_left(rest, SpaceExpr::wedge)
}

/// Rewrite to a homotopy-equivalent canonical form.
///
/// Contractible pieces become `Pt`, `Pt` factors and summands disappear,
/// suspensions of spheres become spheres, products and wedges are flattened,
/// sorted and re-associated to the left, and circle factors of a product are
/// merged into a single torus (a lone circle is written `S(1)`).
pub fn normalize_space(x: &SpaceExpr) -> SpaceExpr {
    match x {
        SpaceExpr::Pt | SpaceExpr::Disk(_) | SpaceExpr::Cube(_) => SpaceExpr::Pt,
        SpaceExpr::Sphere(d) => SpaceExpr::Sphere(*d),
        SpaceExpr::Torus(d) => torus(*d),
        SpaceExpr::CwSkeleton(n) => SpaceExpr::CwSkeleton(*n),
        SpaceExpr::Susp(a) => match normalize_space(a) {
            SpaceExpr::Pt => SpaceExpr::Pt,
            SpaceExpr::Sphere(d) if d < u32::MAX => SpaceExpr::Sphere(d + 1),
            other => SpaceExpr::susp(other),
        },
        SpaceExpr::Prod(a, b) => {
            let mut factors = Vec::new();
            product_factors(normalize_space(a), &mut factors);
            product_factors(normalize_space(b), &mut factors);
            make_product(factors)
        }
        SpaceExpr::Wedge(a, b) => {
            let mut summands = Vec::new();
            wedge_summands(normalize_space(a), &mut summands);
            wedge_summands(normalize_space(b), &mut summands);
            make_wedge(summands)
        }
    }
}

/// If `x` (normalized) is a reduced suspension `ΣY`, returns `Y`.
pub fn desuspend(x: &SpaceExpr) -> Option<SpaceExpr> {
    match x {
        SpaceExpr::Sphere(d) if *d >= 1 => Some(SpaceExpr::Sphere(d - 1)),
        SpaceExpr::Susp(y) => Some((**y).clone()),
        _ => None,
    }
}

/// If `x` (normalized) is `𝕋 × Y`, returns `Y`.
pub fn split_circle(x: &SpaceExpr) -> Option<SpaceExpr> {
    match x {
        SpaceExpr::Torus(d) if *d >= 2 => Some(torus(d - 1)),
        SpaceExpr::Prod(..) => {
            let mut factors = Vec::new();
            product_factors(x.clone(), &mut factors);
            let pos = factors.iter().position(|f| circle_dim(f).is_some())?;
            let d = circle_dim(&factors[pos]).unwrap_or(1);
            if d == 1 {
                factors.remove(pos);
            } else {
                factors[pos] = torus(d - 1);
            }
            Some(make_product(factors))
        }
        _ => None,
    }
}

/// Total dimension when `x` (normalized) is a product of spheres of positive
/// dimension (tori included).
fn sphere_product_dim(x: &SpaceExpr) -> Option<u64> {
    match x {
        SpaceExpr::Sphere(d) if *d >= 1 => Some(u64::from(*d)),
        SpaceExpr::Torus(d) => Some(u64::from(*d)),
        SpaceExpr::Prod(a, b) => Some(sphere_product_dim(a)? + sphere_product_dim(b)?),
        _ => None,
    }
}

/// Spaces that the normalized space `x` directly dominates (not including itself).
///
/// A wedge dominates each summand, a product each sub-product obtained by
/// dropping a factor, `T(k)` dominates `T(k-1)`, and the suspension of a
/// product of spheres of total dimension `n` dominates `S(n+1)`.
pub fn dominated_candidates(x: &SpaceExpr) -> Vec<SpaceExpr> {
    let mut out = BTreeSet::new();
    match x {
        SpaceExpr::Wedge(..) => {
            let mut summands = Vec::new();
            wedge_summands(x.clone(), &mut summands);
            for i in 0..summands.len() {
                out.insert(summands[i].clone());
                let rest: Vec<_> = summands
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, s)| s.clone())
                    .collect();
                out.insert(make_wedge(rest));
            }
        }
        SpaceExpr::Prod(..) => {
            let mut factors = Vec::new();
            product_factors(x.clone(), &mut factors);
            for i in 0..factors.len() {
                let mut rest = factors.clone();
                match &factors[i] {
                    SpaceExpr::Torus(d) if *d >= 2 => rest[i] = torus(d - 1),
                    _ => {
                        rest.remove(i);
                    }
                }
                out.insert(make_product(rest));
            }
        }
        SpaceExpr::Torus(d) if *d >= 2 => {
            out.insert(torus(d - 1));
        }
        SpaceExpr::Susp(p) => {
            if let Some(n) = sphere_product_dim(p) {
                if let Ok(n) = u32::try_from(n + 1) {
                    out.insert(SpaceExpr::Sphere(n));
                }
            }
        }
        _ => {}
    }
    out.remove(x);
    out.into_iter().collect()
}

/// Whether `x` homotopically dominates `y`. Never answers `No`.
pub fn dominates(x: &SpaceExpr, y: &SpaceExpr) -> TriBool {
    const SEARCH_LIMIT: usize = 4096;

    let start = normalize_space(x);
    let target = normalize_space(y);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur == target {
            return TriBool::Yes;
        }
        if !seen.insert(cur.clone()) || seen.len() > SEARCH_LIMIT {
            continue;
        }
        queue.extend(dominated_candidates(&cur));
    }
    TriBool::Unknown
}

pub fn gsr_commutative_sphere(d: u64) -> ExtNat {
    if d <= 4 {
        ExtNat::ONE
    } else if d.is_multiple_of(4) {
        ExtNat::fin(d.div_ceil(2))
    } else {
        ExtNat::fin(d.div_ceil(2) + 1)
    }
}

pub fn gsr_commutative_torus(d: u64) -> ExtNat {
    if d <= 4 {
        ExtNat::ONE
    } else {
        ExtNat::fin(d.div_ceil(2) + 1)
    }
}

pub fn csr_commutative_torus(d: u64) -> ExtNat {
    ExtNat::fin(d.div_ceil(2) + 1)
}

/// `inj_X(C) = gsr(C(ΣX))`.
///
/// Exact for points, spheres and tori `T(d)` with `d <= 4` or `d` even; for
/// odd `d >= 5` the torus value is only pinned between `gsr(C(S(d+1)))` and
/// `gsr(C(T(d+1)))`. Wedges take the max of their summands. Anything else gets
/// the covering-dimension bound on `C(ΣX)`.
pub fn inj_space_scalars(x: &SpaceExpr) -> RankInterval {
    let n = normalize_space(x);
    match &n {
        SpaceExpr::Pt => RankInterval::exact(ExtNat::ONE),
        SpaceExpr::Sphere(d) => RankInterval::exact(gsr_commutative_sphere(u64::from(*d) + 1)),
        SpaceExpr::Torus(d) => torus_suspension_gsr(u64::from(*d)),
        SpaceExpr::Wedge(..) => {
            let mut summands = Vec::new();
            wedge_summands(n.clone(), &mut summands);
            summands
                .iter()
                .map(inj_space_scalars)
                .reduce(|a, b| a.max_with(&b))
                .unwrap_or(RankInterval::exact(ExtNat::ONE))
        }
        _ => {
            let dim = dim_upper(&n);
            let hi = if dim < 4 {
                ExtNat::ONE
            } else {
                ExtNat::fin(bott_stable_bound(dim + 1, 1))
            };
            let lo = sphere_product_dim(&n)
                .map(|k| gsr_commutative_sphere(k + 1))
                .unwrap_or(ExtNat::ONE);
            RankInterval::new(lo.min(hi), hi).expect("lo clamped to hi")
        }
    }
}

// gsr(C(T^{d+1})) = max{gsr(C(T^d)), gsr(C(ΣT^d))}, and ΣT^d dominates S^{d+1}.
fn torus_suspension_gsr(d: u64) -> RankInterval {
    let next = gsr_commutative_torus(d + 1);
    if next > gsr_commutative_torus(d) {
        RankInterval::exact(next)
    } else {
        let lo = gsr_commutative_sphere(d + 1).min(next);
        RankInterval::new(lo, next).expect("lo clamped to hi")
    }
}
