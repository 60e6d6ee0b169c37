use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
    R15,
    R16,
    R17,
    R18,
    R19,
    R20,
    R21,
    R22,
    R23,
    R24,
    R25,
    R26,
}

impl RuleId {
    pub const ALL: [RuleId; 26] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13,
        RuleId::R14,
        RuleId::R15,
        RuleId::R16,
        RuleId::R17,
        RuleId::R18,
        RuleId::R19,
        RuleId::R20,
        RuleId::R21,
        RuleId::R22,
        RuleId::R23,
        RuleId::R24,
        RuleId::R25,
        RuleId::R26,
    ];

    pub fn title(self) -> &'static str {
        match self {
            RuleId::R1 => "direct sum",
            RuleId::R2 => "order",
            RuleId::R3 => "matrix ceilings",
            RuleId::R4 => "split-epi lower bounds",
            RuleId::R5 => "extension",
            RuleId::R6 => "cofinal inductive limit",
            RuleId::R7 => "finiteness",
            RuleId::R8 => "K_1",
            RuleId::R9 => "tsr = 1",
            RuleId::R10 => "pullback tsr",
            RuleId::R11 => "pullback gsr",
            RuleId::R12 => "pullback csr",
            RuleId::R13 => "slot transfer",
            RuleId::R14 => "suspension tensor gsr",
            RuleId::R15 => "finite-dim spectrum csr",
            RuleId::R16 => "class F tensor rigidity",
            RuleId::R17 => "class F membership",
            RuleId::R18 => "wedge",
            RuleId::R19 => "circle product",
            RuleId::R20 => "domination",
            RuleId::R21 => "Nistor",
            RuleId::R22 => "low-dimensional commutative gsr",
            RuleId::R23 => "closed forms",
            RuleId::R24 => "base atoms",
            RuleId::R25 => "quotient",
            RuleId::R26 => "scalars",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A rule id together with the formula a step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cite {
    pub rule: RuleId,
    pub anchor: &'static str,
}

impl Cite {
    pub const fn new(rule: RuleId, anchor: &'static str) -> Cite {
        Cite { rule, anchor }
    }

    pub fn render(&self) -> String {
        format!("{} {}: {}", self.rule, self.rule.title(), self.anchor)
    }
}

use RuleId::*;

pub const DIRECT_SUM: Cite = Cite::new(R1, "gsr(A⊕B) = max{gsr(A), gsr(B)}, likewise csr, tsr");
pub const DIRECT_SUM_K1: Cite = Cite::new(R1, "K_1(A⊕B) = K_1(A) ⊕ K_1(B)");
pub const ORDER: Cite = Cite::new(R2, "gsr(A) <= csr(A) <= tsr(A) + 1");
pub const MATRIX: Cite = Cite::new(R3, "csr(M_n(A)) <= ⌈(csr(A)-1)/n⌉ + 1, likewise gsr");
pub const SPLIT_EPI: Cite = Cite::new(R4, "csr(C(X)⊗A) >= csr(A), likewise gsr");
pub const EXTENSION: Cite = Cite::new(
    R5,
    "csr(A) <= max{csr(J), csr(B)}, gsr(A) <= max{gsr(J), csr(B)}",
);
pub const LIMIT: Cite = Cite::new(R6, "csr(A) <= liminf_i csr(A_i), likewise gsr");
pub const STABLY_FINITE: Cite = Cite::new(R7, "gsr(A) = 1 => A stably finite");
pub const FINITE_GSR: Cite = Cite::new(R7, "gsr(A) <= 2 and A finite => gsr(A) = 1");
pub const IBN_SWINDLE: Cite = Cite::new(R7, "A without IBN => gsr(A) = ∞");
pub const CSR_K1: Cite = Cite::new(R8, "csr(A) = 1 => K_1(A) = 0");
pub const CSR_K1_CONVERSE: Cite = Cite::new(R8, "tsr(A) = 1 and K_1(A) = 0 => csr(A) = 1");
pub const TSR_ONE: Cite = Cite::new(R9, "tsr(A) = 1 => gsr(A) = 1");
pub const PULLBACK_TSR: Cite = Cite::new(R10, "tsr(A) <= max{tsr(B), tsr(C)}");
pub const PULLBACK_GSR: Cite = Cite::new(R11, "gsr(A) <= max{csr(B), csr(C), inj_0(D)}");
pub const PULLBACK_GSR_K1: Cite =
    Cite::new(R11, "K_1(D) = 0 => gsr(A) <= max{gsr(B), gsr(C), inj_0(D)}");
pub const INJ0_GSR_CIRCLE: Cite = Cite::new(R11, "inj_0(D) <= gsr(𝕋D)");
pub const PULLBACK_CSR: Cite = Cite::new(R12, "csr(A) <= max{csr(B), csr(C), inj_0(D), surj_1(D)}");
pub const SURJ0_CSR: Cite = Cite::new(R12, "surj_0(D) <= csr(D)");
pub const SLOTS_CSR_CIRCLE: Cite = Cite::new(R12, "max{inj_0(D), surj_1(D)} <= csr(𝕋D)");
pub const NCCW: Cite = Cite::new(R12, "csr(A_n) <= max_k {⌈k/(2d_k)⌉ + 1}");
pub const SLOT_TRANSFER: Cite = Cite::new(R13, "inj_0(C(X)⊗A) = inj_X(A)");
pub const SUSPENSION: Cite = Cite::new(R14, "gsr(C(ΣX)⊗A) = max{gsr(A), inj_X(A)}");
pub const FINITE_SPECTRUM: Cite = Cite::new(
    R15,
    "csr(C(X)⊗A) <= max{csr(A), surj_k(A), inj_(k-1)(A) : 1 <= k <= dim X}",
);
pub const SPHERE_SLOTS: Cite = Cite::new(
    R15,
    "max{inj_0(D), surj_1(D)} <= max{surj_1(A), surj_n(A), inj_(n-1)(A)}, D = C(S^(n-1))⊗A",
);
pub const CLASS_F_GSR: Cite = Cite::new(R16, "A ∈ F => gsr(C(X)⊗A) = gsr(A)");
pub const CLASS_F_CSR: Cite = Cite::new(
    R16,
    "A ∈ F => csr(C(X)⊗A) <= max{2, gsr(A)}, = csr(A) if csr(A) >= 2",
);
pub const CLASS_F_SLOTS: Cite = Cite::new(
    R16,
    "A ∈ F => GL_(m-1)(A) -> GL_m(A) weak equivalence for m >= 2",
);
pub const CLASS_F_MEMBER: Cite = Cite::new(
    R17,
    "A⊗Z, A_θ, A⊗O_n, AF⊗B, pAp (A purely infinite simple) ∈ F",
);
pub const NOT_CLASS_F: Cite = Cite::new(
    R17,
    "GL_(m-1)(M_ℓ(C)) -> GL_m(M_ℓ(C)) is not a weak equivalence",
);
pub const WEDGE: Cite = Cite::new(R18, "gsr(C(X∨Y)) = max{gsr(C(X)), gsr(C(Y))}, likewise csr");
pub const CIRCLE_PRODUCT: Cite = Cite::new(R19, "gsr(C(𝕋×X)) = max{gsr(C(X)), gsr(C(ΣX))}");
pub const DOMINATION: Cite = Cite::new(R20, "A dominates B => csr(A) >= csr(B), gsr(A) >= gsr(B)");
pub const HOMOTOPY_EQUIVALENCE: Cite = Cite::new(R20, "A ≃ B => csr(A) = csr(B), gsr(A) = gsr(B)");
pub const ISOMORPHISM: Cite = Cite::new(R20, "A ≅ B");
pub const NISTOR: Cite = Cite::new(R21, "csr(C(X)) <= ⌈dim X/2⌉ + 1");
pub const LOW_DIM: Cite = Cite::new(R22, "dim X <= 4 => gsr(C(X)) = 1");
pub const SPHERE_FORMULA: Cite = Cite::new(
    R23,
    "gsr(C(S^d)) = 1 (d <= 4), ⌈d/2⌉ (d > 4, 4 | d), ⌈d/2⌉ + 1 otherwise",
);
pub const TORUS_FORMULA: Cite = Cite::new(
    R23,
    "gsr(C(T^d)) = 1 (d <= 4), ⌈d/2⌉ + 1 (d > 4); csr(C(T^d)) = ⌈d/2⌉ + 1",
);
pub const SPHERE_K1: Cite = Cite::new(R23, "K_1(C(S^d)) = 0 iff d even; K_1(C(T^d)) ≠ 0");
pub const INJ_SCALARS: Cite = Cite::new(R23, "gsr(C(ΣX)) = inj_X(C)");
pub const FINITE_DIM: Cite = Cite::new(R24, "csr(F) = 1");
pub const BOTT: Cite = Cite::new(R24, "surj_k, inj_(k-1) of ⊕M_ℓ(C) <= ⌈k/(2 min ℓ)⌉ + 1");
pub const ROTATION: Cite = Cite::new(R24, "A_θ: tsr = gsr = 1, csr = 2, K_1 ≠ 0");
pub const KIRCHBERG: Cite = Cite::new(R24, "Kirchberg A with IBN: gsr(A) = csr(A) = 2");
pub const CUNTZ: Cite = Cite::new(R24, "O_n: [1] has finite order in K_0, so no IBN");
pub const PURELY_INFINITE: Cite = Cite::new(R24, "purely infinite => not finite");
pub const AF: Cite = Cite::new(
    R24,
    "simple infinite-dim AF: tsr = csr = 1, stably finite, csr(𝕋A) = 2",
);
pub const REAL_RANK_ZERO: Cite = Cite::new(R24, "RR(A) = 0 => inj_0(A) = 1");
pub const QUOTIENT: Cite = Cite::new(
    R25,
    "csr(B) <= max{csr(A), tsr(A)}, gsr(B) <= max{gsr(A), tsr(A)}",
);
pub const SCALARS: Cite = Cite::new(R26, "tsr(C) = gsr(C) = csr(C) = 1");
pub const SCALAR_BOTT: Cite = Cite::new(R26, "surj_k(C) <= ⌈k/2⌉ + 1");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_names_rule_and_anchor() {
        let s = MATRIX.render();
        assert!(s.starts_with("R3 matrix ceilings: "));
        assert!(s.contains("csr(M_n(A))"));
    }

    #[test]
    fn ids_are_ordered() {
        assert_eq!(RuleId::ALL.len(), 26);
        assert!(RuleId::ALL.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(RuleId::R26.to_string(), "R26");
    }
}
