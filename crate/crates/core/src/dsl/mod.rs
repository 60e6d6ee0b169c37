//! ASCII surface syntax.
//!
//! ```text
//! algebra := primary { "(+)" primary }
//! primary := "C" | "F(" nat {"," nat} ")" | "M(" nat "," algebra ")"
//!          | "Cx(" space ")" ["*" primary] | "(" algebra ")"
//!          | "pullback(" algebra "," algebra ";" algebra ")" | "ext(" algebra "," algebra ")"
//!          | "limit(" algebra {"," algebra} ")" | "nccw(" blocks {";" nat ":" blocks} ")"
//!          | "AF" | "rot" | "Oinf" | "kirchberg_ibn" | "pis_corner"
//!          | "cuntz(" nat ")" | "zstable(" algebra ")" | "rr0(" algebra ")"
//! blocks  := "F(" nat {"," nat} ")"
//! space   := "pt" | "S(" nat ")" | "T(" nat ")" | "D(" nat ")" | "I(" nat ")"
//!          | "prod(" space "," space ")" | "wedge(" space "," space ")"
//!          | "susp(" space ")" | "cw(" nat ")"
//! ```

mod parser;

pub use parser::{parse, parse_space, ParseError, MAX_NESTING};

use std::fmt::Write;

use crate::expr::{AlgebraExpr, Atom};
use crate::nccw::NccwComplex;

/// Canonical text; `parse(&format(e)) == Ok(e)` for every valid `e`.
pub fn format(expr: &AlgebraExpr) -> String {
    let mut out = String::new();
    write_algebra(&mut out, expr);
    out
}

fn join(nums: &[u32]) -> String {
    nums.iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_primary(out: &mut String, e: &AlgebraExpr) {
    if matches!(e, AlgebraExpr::DirectSum(..)) {
        out.push('(');
        write_algebra(out, e);
        out.push(')');
    } else {
        write_algebra(out, e);
    }
}

fn write_nccw(out: &mut String, c: &NccwComplex) {
    let _ = write!(out, "nccw(F({})", join(&c.base));
    for s in &c.stages {
        let _ = write!(out, "; {}: F({})", s.dim, join(&s.blocks));
    }
    out.push(')');
}

fn write_algebra(out: &mut String, e: &AlgebraExpr) {
    match e {
        AlgebraExpr::Scalars => out.push('C'),
        AlgebraExpr::FiniteDim(b) => {
            let _ = write!(out, "F({})", join(b));
        }
        AlgebraExpr::Matrix(n, a) => {
            let _ = write!(out, "M({n}, ");
            write_algebra(out, a);
            out.push(')');
        }
        AlgebraExpr::DirectSum(a, b) => {
            write_algebra(out, a);
            out.push_str(" (+) ");
            write_primary(out, b);
        }
        AlgebraExpr::Tensor(x, a) => {
            let _ = write!(out, "Cx({x})");
            if **a != AlgebraExpr::Scalars {
                out.push('*');
                write_primary(out, a);
            }
        }
        AlgebraExpr::Pullback { b, c, d, .. } => {
            out.push_str("pullback(");
            write_algebra(out, b);
            out.push_str(", ");
            write_algebra(out, c);
            out.push_str("; ");
            write_algebra(out, d);
            out.push(')');
        }
        AlgebraExpr::Extension(j, b) => {
            out.push_str("ext(");
            write_algebra(out, j);
            out.push_str(", ");
            write_algebra(out, b);
            out.push(')');
        }
        AlgebraExpr::Limit(parts) => {
            out.push_str("limit(");
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_algebra(out, p);
            }
            out.push(')');
        }
        AlgebraExpr::Nccw(c) => write_nccw(out, c),
        AlgebraExpr::Atom(atom) => match atom {
            Atom::JiangSuStable(a) => {
                out.push_str("zstable(");
                write_algebra(out, a);
                out.push(')');
            }
            Atom::RealRankZero(a) => {
                out.push_str("rr0(");
                write_algebra(out, a);
                out.push(')');
            }
            Atom::IrrationalRotation => out.push_str("rot"),
            Atom::Cuntz(n) => {
                let _ = write!(out, "cuntz({n})");
            }
            Atom::CuntzInfinity => out.push_str("Oinf"),
            Atom::KirchbergIbn => out.push_str("kirchberg_ibn"),
            Atom::SimpleInfDimAf => out.push_str("AF"),
            Atom::PurelyInfiniteSimpleCorner => out.push_str("pis_corner"),
        },
    }
}
