//! Numeric abstraction shared by the graph, search and voting code.
//!
//! Every cost, score and vote total is carried in a type implementing
//! [`Scalar`]. The library is exercised with `f64` (the default for the CLI
//! and benchmarks), `f32`, and exact rationals ([`Rational`]) for
//! integer-valued layers and hand-written score matrices.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Exact rational scalar.
pub type Rational = Ratio<i64>;

/// A field-like numeric type usable as an edge cost and a normalized score.
///
/// Integer types satisfy the bounds but truncate during normalization, so
/// only fields (floats, rationals) should be used.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    /// Largest difference at which two accumulated costs of the given
    /// magnitude are considered equal. Zero for exact types.
    fn merge_tolerance(magnitude: Self) -> Self;

    /// Converts a heuristic or configuration value, panicking only if the
    /// type cannot represent finite `f64` values at all.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(|| panic!("value {v} not representable"))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_positive(self) -> bool {
        self > Self::zero() && self.to_f64().is_some_and(f64::is_finite)
    }
}

impl Scalar for f64 {
    fn merge_tolerance(magnitude: Self) -> Self {
        1e-9 * magnitude.abs().max(1.0)
    }
}

impl Scalar for f32 {
    fn merge_tolerance(magnitude: Self) -> Self {
        1e-4 * magnitude.abs().max(1.0)
    }
}

impl Scalar for Rational {
    fn merge_tolerance(_magnitude: Self) -> Self {
        Ratio::from_integer(0)
    }
}

pub(crate) fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn abs_of<S: Scalar>(a: S) -> S {
    if a < S::zero() {
        S::zero() - a
    } else {
        a
    }
}

/// `a` and `b` agree within the type's merge tolerance.
pub fn approx_eq<S: Scalar>(a: S, b: S) -> bool {
    let tol = S::merge_tolerance(max_of(abs_of(a), abs_of(b)));
    abs_of(a - b) <= tol
}
