use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::homotopy::{SlotKey, SlotTable};
use crate::lattice::{RankInterval, TriBool};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    K1Zero,
    Finite,
    StablyFinite,
    Ibn,
    ClassF,
    RealRankZero,
}

impl Flag {
    pub const ALL: [Flag; 6] = [
        Flag::K1Zero,
        Flag::Finite,
        Flag::StablyFinite,
        Flag::Ibn,
        Flag::ClassF,
        Flag::RealRankZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::K1Zero => "k1_zero",
            Flag::Finite => "finite",
            Flag::StablyFinite => "stably_finite",
            Flag::Ibn => "ibn",
            Flag::ClassF => "class_F",
            Flag::RealRankZero => "real_rank_zero",
        }
    }
}

/// Anything a rule can tighten on a node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    Tsr,
    Gsr,
    Csr,
    Slot(SlotKey),
    Flag(Flag),
}

impl Quantity {
    pub fn is_flag(&self) -> bool {
        matches!(self, Quantity::Flag(_))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Tsr => f.write_str("tsr"),
            Quantity::Gsr => f.write_str("gsr"),
            Quantity::Csr => f.write_str("csr"),
            Quantity::Slot(k) => write!(f, "{k}"),
            Quantity::Flag(flag) => f.write_str(flag.name()),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown quantity `{0}`")]
pub struct UnknownQuantity(pub String);

impl FromStr for Quantity {
    type Err = UnknownQuantity;

    /// Accepts `tsr`, `gsr`, `csr`, flag names, `inj_K`, `surj_K` and
    /// `inj[SPACE]`.
    fn from_str(s: &str) -> Result<Quantity, UnknownQuantity> {
        let s = s.trim();
        match s {
            "tsr" => return Ok(Quantity::Tsr),
            "gsr" => return Ok(Quantity::Gsr),
            "csr" => return Ok(Quantity::Csr),
            _ => {}
        }
        if let Some(flag) = Flag::ALL.iter().find(|f| f.name() == s) {
            return Ok(Quantity::Flag(*flag));
        }
        let bad = || UnknownQuantity(s.to_string());
        if let Some(k) = s.strip_prefix("inj_") {
            return k
                .parse()
                .map(|k| Quantity::Slot(SlotKey::Inj(k)))
                .map_err(|_| bad());
        }
        if let Some(k) = s.strip_prefix("surj_") {
            return k
                .parse()
                .map(|k| Quantity::Slot(SlotKey::Surj(k)))
                .map_err(|_| bad());
        }
        if let Some(space) = s.strip_prefix("inj[").and_then(|r| r.strip_suffix(']')) {
            let x = crate::dsl::parse_space(space).map_err(|_| bad())?;
            return Ok(Quantity::Slot(SlotKey::inj_space(&x)));
        }
        Err(bad())
    }
}

/// What is known about one node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankState {
    pub tsr: RankInterval,
    pub gsr: RankInterval,
    pub csr: RankInterval,
    pub slots: SlotTable,
    pub k1_zero: TriBool,
    pub finite: TriBool,
    pub stably_finite: TriBool,
    pub ibn: TriBool,
    pub class_f: TriBool,
    pub real_rank_zero: TriBool,
}

impl RankState {
    pub fn flag(&self, f: Flag) -> TriBool {
        match f {
            Flag::K1Zero => self.k1_zero,
            Flag::Finite => self.finite,
            Flag::StablyFinite => self.stably_finite,
            Flag::Ibn => self.ibn,
            Flag::ClassF => self.class_f,
            Flag::RealRankZero => self.real_rank_zero,
        }
    }

    pub(crate) fn flag_mut(&mut self, f: Flag) -> &mut TriBool {
        match f {
            Flag::K1Zero => &mut self.k1_zero,
            Flag::Finite => &mut self.finite,
            Flag::StablyFinite => &mut self.stably_finite,
            Flag::Ibn => &mut self.ibn,
            Flag::ClassF => &mut self.class_f,
            Flag::RealRankZero => &mut self.real_rank_zero,
        }
    }

    /// Interval-valued quantity. Panics on flags.
    pub fn interval(&self, q: &Quantity) -> RankInterval {
        match q {
            Quantity::Tsr => self.tsr,
            Quantity::Gsr => self.gsr,
            Quantity::Csr => self.csr,
            Quantity::Slot(k) => self.slots.get(k),
            Quantity::Flag(f) => panic!("{} is a flag", f.name()),
        }
    }

    pub(crate) fn set_interval(&mut self, q: &Quantity, v: RankInterval) {
        match q {
            Quantity::Tsr => self.tsr = v,
            Quantity::Gsr => self.gsr = v,
            Quantity::Csr => self.csr = v,
            Quantity::Slot(k) => {
                self.slots
                    .tighten(k.clone(), v)
                    .expect("caller already met the interval");
            }
            Quantity::Flag(f) => panic!("{} is a flag", f.name()),
        }
    }
}

/// Value of a quantity before or after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Interval(RankInterval),
    Flag(TriBool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Interval(i) => write!(f, "{i}"),
            Value::Flag(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Interval(i) => i.serialize(s),
            Value::Flag(b) => b.serialize(s),
        }
    }
}
