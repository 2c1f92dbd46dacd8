//! Exact planar geometry over arbitrary-precision rationals.
//!
//! Everything in this module is deterministic. Comparisons, enclosing
//! circles, and similarity transforms are computed exactly; the only
//! approximation is [`sqrt_approx`], which rounds onto a fixed dyadic grid
//! and is globally monotone, so downstream decisions never flip between
//! runs or platforms.

mod config;
mod point;
mod scalar;
mod similarity;
mod tolerance;

pub use config::{
    is_linear, min_pairwise_sq_distance, smallest_enclosing_circle, Circle, Configuration,
};
pub use point::{angle_cmp, sq_dist, Point};
pub use scalar::Scalar;
pub use similarity::{is_similar, SimilarityTransform};
pub use tolerance::{sqrt_approx, ToleranceConfig};

pub(crate) use tolerance::sqrt_ceil_approx;

use thiserror::Error;

/// Errors produced by geometric primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    /// A configuration must contain at least one point.
    #[error("a configuration must contain at least one point")]
    EmptyConfiguration,
    /// A square root of a negative scalar was requested.
    #[error("square root of negative scalar {0}")]
    NegativeSqrt(Scalar),
    /// An angle comparison was asked for the zero vector.
    #[error("angle undefined for a point equal to the center")]
    ZeroVector,
    /// Fewer distinct points than the operation needs.
    #[error("operation needs at least {needed} distinct points, got {got}")]
    TooFewPoints {
        /// How many distinct points the operation requires.
        needed: usize,
        /// How many distinct points were available.
        got: usize,
    },
    /// Two configurations were expected to have the same total size.
    #[error("configurations have different sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    /// A scalar string could not be parsed.
    #[error("malformed rational literal: {0}")]
    BadScalarLiteral(String),
    /// A point string could not be parsed.
    #[error("malformed point literal: {0}")]
    BadPointLiteral(String),
    /// An invalid tolerance configuration was supplied.
    #[error("invalid tolerance configuration: {0}")]
    BadTolerance(String),
    /// A similarity transform with zero linear part was requested.
    #[error("similarity transform must have a nonzero linear part")]
    DegenerateTransform,
}
