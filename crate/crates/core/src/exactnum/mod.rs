//! Arbitrary-precision rational and quadratic-surd arithmetic.
//!
//! [`QuadSurd`] is the universal value type of the crate: every exact
//! constant, tail value and bound lives in some real quadratic field
//! `ℚ(√d)`, with rationals embedded as `q = 0, d = 1`. Arithmetic,
//! comparison, floors and decimal rendering are all exact.

mod factor;
mod parse;
mod surd;

use num_bigint::BigInt;
use thiserror::Error;

pub use factor::{factor_u64, is_prime_u64, squarefree_decompose_u64, TRIAL_DIVISION_BOUND};
pub use surd::QuadSurd;
#[allow(unused_imports)]
pub(crate) use surd::{int_from_repr, int_to_repr, IntRepr};

/// Serde adapter: big integers as JSON numbers when they fit, strings
/// otherwise.
pub(crate) mod serde_bigint {
    use super::surd::{int_from_repr, int_to_repr, IntRepr};
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
        int_to_repr(n).serialize(serializer)
    }

    #[allow(dead_code)]
    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
        int_from_repr(IntRepr::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}

/// Serde adapter: exact rationals as `"num/den"` strings.
pub(crate) mod serde_rational {
    use super::BigRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", x.numer(), x.denom()))
    }
}

/// Arbitrary-precision rational numbers (re-exported from `num-rational`).
pub type BigRational = num_rational::BigRational;

/// Errors from exact-number construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    /// Arithmetic on two irrational operands from different quadratic fields.
    #[error("mixed radicands: sqrt({left}) and sqrt({right}) do not span a quadratic field")]
    MixedRadicand { left: BigInt, right: BigInt },
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand {radicand}: only real quadratic fields are supported")]
    NegativeRadicand { radicand: BigInt },
    /// Square-freeness of the radicand could not be certified within the
    /// factorization bound.
    #[error("radicand {radicand} exceeds the square-free factorization bound")]
    RadicandBound { radicand: BigInt },
    #[error("parse error: {0}")]
    Parse(String),
}
