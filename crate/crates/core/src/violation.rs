//! Axiom violations reported by the validators, with witnesses given by label
//! or element name.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    // fusion ring
    ShapeMismatch { detail: String },
    UnitLaw { a: String, b: String },
    Associativity { a: String, b: String, c: String, d: String },
    DualityViolation { a: String, b: String },
    DualNotInvolutive { a: String },
    UnitNotSelfDual,
    NonCommutative { a: String, b: String, c: String },

    // premodular data
    ConductorMismatch { detail: String },
    UnitDimension,
    UnitTwist,
    ZeroDimension { a: String },
    ZeroTwist { a: String },
    DualDimension { a: String },
    DualTwist { a: String },
    DimensionCharacterViolation { a: String, b: String },
    BalancingViolation { a: String, b: String },
    SMatrixAsymmetric { a: String, b: String },
    SUnitRow { a: String },
    SConjugation { a: String, b: String },

    // metric groups
    InvalidOrder { order: u64 },
    GroupTooLarge { order: usize },
    MissingElement { element: String },
    UnknownElement { key: String },
    QuadraticLawViolation { x: String, n: u64 },
    BilinearityViolation { x: String, y: String, z: String },
}

impl Violation {
    /// Snake-case name of the violated axiom.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::ShapeMismatch { .. } => "shape_mismatch",
            Violation::UnitLaw { .. } => "unit_law",
            Violation::Associativity { .. } => "associativity",
            Violation::DualityViolation { .. } => "duality_violation",
            Violation::DualNotInvolutive { .. } => "dual_not_involutive",
            Violation::UnitNotSelfDual => "unit_not_self_dual",
            Violation::NonCommutative { .. } => "non_commutative",
            Violation::ConductorMismatch { .. } => "conductor_mismatch",
            Violation::UnitDimension => "unit_dimension",
            Violation::UnitTwist => "unit_twist",
            Violation::ZeroDimension { .. } => "zero_dimension",
            Violation::ZeroTwist { .. } => "zero_twist",
            Violation::DualDimension { .. } => "dual_dimension",
            Violation::DualTwist { .. } => "dual_twist",
            Violation::DimensionCharacterViolation { .. } => "dimension_character_violation",
            Violation::BalancingViolation { .. } => "balancing_violation",
            Violation::SMatrixAsymmetric { .. } => "s_matrix_asymmetric",
            Violation::SUnitRow { .. } => "s_unit_row",
            Violation::SConjugation { .. } => "s_conjugation",
            Violation::InvalidOrder { .. } => "invalid_order",
            Violation::GroupTooLarge { .. } => "group_too_large",
            Violation::MissingElement { .. } => "missing_element",
            Violation::UnknownElement { .. } => "unknown_element",
            Violation::QuadraticLawViolation { .. } => "quadratic_law_violation",
            Violation::BilinearityViolation { .. } => "bilinearity_violation",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            ShapeMismatch { detail } => write!(f, "shape mismatch: {detail}"),
            UnitLaw { a, b } => write!(f, "unit law fails at ({a}, {b})"),
            Associativity { a, b, c, d } => {
                write!(f, "associativity fails at ({a}, {b}, {c}; {d})")
            }
            DualityViolation { a, b } => write!(f, "duality fails at ({a}, {b})"),
            DualNotInvolutive { a } => write!(f, "dual is not an involution at {a}"),
            UnitNotSelfDual => write!(f, "unit is not self-dual"),
            NonCommutative { a, b, c } => write!(f, "N^{c}_{{{a},{b}}} != N^{c}_{{{b},{a}}}"),
            ConductorMismatch { detail } => write!(f, "conductor mismatch: {detail}"),
            UnitDimension => write!(f, "dimension of the unit is not 1"),
            UnitTwist => write!(f, "twist of the unit is not 1"),
            ZeroDimension { a } => write!(f, "dimension of {a} is zero"),
            ZeroTwist { a } => write!(f, "twist of {a} is zero"),
            DualDimension { a } => write!(f, "d({a}) != d({a}*)"),
            DualTwist { a } => write!(f, "theta({a}) != theta({a}*)"),
            DimensionCharacterViolation { a, b } => {
                write!(f, "d({a}) d({b}) != sum_c N^c d(c)")
            }
            BalancingViolation { a, b } => write!(f, "balancing fails for s({a}, {b})"),
            SMatrixAsymmetric { a, b } => write!(f, "s({a}, {b}) != s({b}, {a})"),
            SUnitRow { a } => write!(f, "s(1, {a}) != d({a})"),
            SConjugation { a, b } => write!(f, "conj s({a}, {b}) != s({a}*, {b})"),
            InvalidOrder { order } => write!(f, "invalid cyclic order {order}"),
            GroupTooLarge { order } => write!(f, "group order {order} exceeds the cap"),
            MissingElement { element } => write!(f, "q table is missing element {element}"),
            UnknownElement { key } => write!(f, "q table has unknown key {key}"),
            QuadraticLawViolation { x, n } => write!(f, "q({n}*{x}) != {n}^2 q({x})"),
            BilinearityViolation { x, y, z } => {
                write!(f, "b({x}+{y}, {z}) != b({x}, {z}) + b({y}, {z})")
            }
        }
    }
}
