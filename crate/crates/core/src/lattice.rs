//! Extended naturals, rank intervals and three-valued flags.
//!
//! Every rank the engine tracks lives in `{1, 2, ...} ∪ {∞}`. A rank is
//! never stored as a point value; it is stored as a [`RankInterval`] that
//! only ever narrows. Flags use [`TriBool`], which only ever moves away
//! from `Unknown`.

use std::fmt;
use std::num::NonZeroU64;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A natural number `>= 1`, or infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtNat(u64);

impl ExtNat {
    pub const ONE: ExtNat = ExtNat(1);
    pub const TWO: ExtNat = ExtNat(2);
    pub const INF: ExtNat = ExtNat(u64::MAX);

    /// Finite value. Panics on `0`, which is not a rank.
    pub const fn fin(n: u64) -> ExtNat {
        assert!(n >= 1 && n < u64::MAX, "ranks are finite naturals >= 1");
        ExtNat(n)
    }

    pub fn checked(n: u64) -> Option<ExtNat> {
        (1..u64::MAX).contains(&n).then_some(ExtNat(n))
    }

    pub fn is_inf(self) -> bool {
        self.0 == u64::MAX
    }

    pub fn finite(self) -> Option<u64> {
        (!self.is_inf()).then_some(self.0)
    }

    pub fn succ(self) -> ExtNat {
        if self.is_inf() {
            self
        } else {
            ExtNat(self.0 + 1)
        }
    }

    /// `self - 1`, clamped at 1. `∞ - 1 = ∞`.
    pub fn pred_clamped(self) -> ExtNat {
        if self.is_inf() || self.0 == 1 {
            self
        } else {
            ExtNat(self.0 - 1)
        }
    }

    pub fn div_ceil(self, b: NonZeroU64) -> ExtNat {
        match self.finite() {
            None => self,
            Some(a) => ExtNat(ceil_div(a, b)),
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            Some(n) => write!(f, "{n}"),
            None => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.finite() {
            Some(n) => s.serialize_u64(n),
            None => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNat, E> {
                ExtNat::checked(v).ok_or_else(|| E::custom("ranks are >= 1"))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNat, E> {
                u64::try_from(v)
                    .ok()
                    .and_then(ExtNat::checked)
                    .ok_or_else(|| E::custom("ranks are >= 1"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNat, E> {
                if v == "inf" {
                    Ok(ExtNat::INF)
                } else {
                    Err(E::custom(format!("expected \"inf\", got {v:?}")))
                }
            }
        }

        d.deserialize_any(ExtNatVisitor)
    }
}

/// `⌈a / b⌉` for a finite natural `a`.
pub fn ceil_div(a: u64, b: NonZeroU64) -> u64 {
    a.div_ceil(b.get())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("interval lower end {lo} exceeds upper end {hi}")]
pub struct InvertedInterval {
    pub lo: ExtNat,
    pub hi: ExtNat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("empty intersection of {left} and {right}")]
pub struct EmptyMeet {
    pub left: RankInterval,
    pub right: RankInterval,
}

/// Closed interval `[lo, hi]` of extended naturals with `lo <= hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RankInterval {
    lo: ExtNat,
    hi: ExtNat,
}

impl RankInterval {
    pub const UNKNOWN: RankInterval = RankInterval {
        lo: ExtNat::ONE,
        hi: ExtNat::INF,
    };

    pub fn new(lo: ExtNat, hi: ExtNat) -> Result<RankInterval, InvertedInterval> {
        if lo <= hi {
            Ok(RankInterval { lo, hi })
        } else {
            Err(InvertedInterval { lo, hi })
        }
    }

    pub fn exact(v: ExtNat) -> RankInterval {
        RankInterval { lo: v, hi: v }
    }

    pub fn at_most(hi: ExtNat) -> RankInterval {
        RankInterval {
            lo: ExtNat::ONE,
            hi,
        }
    }

    pub fn at_least(lo: ExtNat) -> RankInterval {
        RankInterval {
            lo,
            hi: ExtNat::INF,
        }
    }

    pub fn lo(&self) -> ExtNat {
        self.lo
    }

    pub fn hi(&self) -> ExtNat {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_unknown(&self) -> bool {
        *self == Self::UNKNOWN
    }

    pub fn contains(&self, v: ExtNat) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// `self` is contained in `other`.
    pub fn within(&self, other: &RankInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn meet(&self, other: &RankInterval) -> Result<RankInterval, EmptyMeet> {
        RankInterval::new(self.lo.max(other.lo), self.hi.min(other.hi)).map_err(|_| EmptyMeet {
            left: *self,
            right: *other,
        })
    }

    /// Enclosure of `max(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn max_with(&self, other: &RankInterval) -> RankInterval {
        RankInterval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// Free-standing form of [`RankInterval::meet`].
pub fn interval_meet(x: &RankInterval, y: &RankInterval) -> Result<RankInterval, EmptyMeet> {
    x.meet(y)
}

impl Default for RankInterval {
    fn default() -> Self {
        RankInterval::UNKNOWN
    }
}

impl fmt::Display for RankInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RankInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for RankInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: ExtNat,
            hi: ExtNat,
        }
        let raw = Raw::deserialize(d)?;
        RankInterval::new(raw.lo, raw.hi).map_err(de::Error::custom)
    }
}

/// Three-valued truth for structural predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriBool {
    Yes,
    No,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot refine {current:?} to {requested:?}")]
pub struct FlagConflict {
    pub current: TriBool,
    pub requested: TriBool,
}

impl TriBool {
    pub fn from_bool(b: bool) -> TriBool {
        if b {
            TriBool::Yes
        } else {
            TriBool::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriBool::Yes
    }

    pub fn is_no(self) -> bool {
        self == TriBool::No
    }

    /// Refine towards `value`. Returns `Ok(None)` when nothing changes.
    pub fn refine(self, value: bool) -> Result<Option<TriBool>, FlagConflict> {
        let requested = TriBool::from_bool(value);
        match self {
            TriBool::Unknown => Ok(Some(requested)),
            cur if cur == requested => Ok(None),
            cur => Err(FlagConflict {
                current: cur,
                requested,
            }),
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriBool::Yes => "yes",
            TriBool::No => "no",
            TriBool::Unknown => "unknown",
        })
    }
}
