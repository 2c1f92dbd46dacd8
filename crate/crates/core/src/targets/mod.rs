//! Destination rules: the decision functions robots evaluate each activation.
//!
//! A destination rule maps the multiset of positions a robot observes (in its
//! own coordinate frame, with itself at the origin) to the point it will move
//! to.  A rule family is a finite set of such rules; a swarm is programmed by
//! assigning every robot one rule from the family.  The families implemented
//! here cover three tasks:
//!
//! - **Scattering** ([`sct`]): spread out until at least `count` distinct
//!   positions are occupied.
//! - **Gathering** ([`two_gat`], [`gat`], [`sgat`], [`swap_gat`]): merge onto
//!   a single point.
//! - **Shape formation** ([`sct_star`], [`pf`]): arrange the swarm into a
//!   configuration similar to a goal shape.
//!
//! All rules are exact: they consume and produce rational coordinates, and
//! every branch is decided by exact arithmetic except where a square root is
//! unavoidable, in which case a one-sided rounding keeps the relevant
//! invariant certifiable (see [`formation`]).

mod basic;
mod formation;

pub use basic::{gat, is_bivalent, sct, sgat, swap_gat, two_gat};
pub use formation::{choose_completion, is_good, pf, sct_star, GoodDecomposition};

use std::fmt;
use std::str::FromStr;

use crate::geom::{Configuration, GeomError, Point, ToleranceConfig};
use crate::symmetry::SymmetryError;

/// Errors produced while evaluating a destination rule.
#[derive(Debug, thiserror::Error)]
pub enum TargetError {
    /// The observed multiset does not contain the origin, i.e. the observer
    /// is not part of its own observation.  Rules are undefined there.
    #[error("observation does not contain the observer's own position")]
    OriginMissing,
    /// The rule needs a goal shape but none was supplied.
    #[error("rule requires a goal shape but none was provided")]
    MissingPattern,
    /// The supplied goal shape cannot be used.
    #[error("unusable goal shape: {0}")]
    BadPattern(String),
    /// A rule identifier is out of range for its family.
    #[error("invalid rule identifier: {0}")]
    BadIndex(String),
    /// A staged formation state offered no robot eligible to move.
    #[error("no eligible mover in staged formation state")]
    NoMover,
    /// Underlying geometric computation failed.
    #[error(transparent)]
    Geometry(#[from] GeomError),
    /// Underlying symmetry computation failed.
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// Identifier of one destination rule inside a named family.
///
/// The string form (via `Display`/`FromStr`) is `sct:i/c`, `sct*:i/n`,
/// `2gat`, `gat:i`, `sgat:i`, `swapgat`, and `pf:i/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetFunctionId {
    /// Scattering rule `i` of the family of size `count`.
    Sct { index: u32, count: u32 },
    /// Formation-compatible scattering rule `i` for swarms of size `n`.
    SctStar { index: u32, n: u32 },
    /// The single gathering rule that suffices for swarms that are not
    /// balanced two-point configurations.
    TwoGat,
    /// Gathering rule `i` of the two-rule family that also handles balanced
    /// two-point configurations by breaking ties through coordinate order.
    Gat { index: u32 },
    /// Rotation-equivariant gathering rule `i` of the three-rule family.
    Sgat { index: u32 },
    /// Gathering rule that walks onto the partner in a balanced two-point
    /// configuration; used to exhibit livelock when a swarm is programmed
    /// with clones of one rule.
    SwapGat,
    /// Shape-formation rule `i` for swarms of size `n`.
    Pf { index: u32, n: u32 },
}

impl TargetFunctionId {
    /// Checks that indices are within range for the family.
    pub fn validate(&self) -> Result<(), TargetError> {
        let bad = |msg: String| Err(TargetError::BadIndex(msg));
        match *self {
            TargetFunctionId::Sct { index, count } => {
                if count == 0 || index == 0 || index > count {
                    return bad(format!("sct:{index}/{count} (need 1 <= i <= c)"));
                }
            }
            TargetFunctionId::SctStar { index, n } => {
                if n == 0 || index == 0 || index > n {
                    return bad(format!("sct*:{index}/{n} (need 1 <= i <= n)"));
                }
            }
            TargetFunctionId::TwoGat | TargetFunctionId::SwapGat => {}
            TargetFunctionId::Gat { index } => {
                if !(1..=2).contains(&index) {
                    return bad(format!("gat:{index} (need i in 1..=2)"));
                }
            }
            TargetFunctionId::Sgat { index } => {
                if !(1..=3).contains(&index) {
                    return bad(format!("sgat:{index} (need i in 1..=3)"));
                }
            }
            TargetFunctionId::Pf { index, n } => {
                // Swarms of fewer than four robots are handled by the
                // gathering and scattering families directly.
                if n < 4 || index == 0 || index > n {
                    return bad(format!("pf:{index}/{n} (need n >= 4, 1 <= i <= n)"));
                }
            }
        }
        Ok(())
    }

    /// True when the rule commutes with every rotation about the observer:
    /// rotating the observation rotates the destination the same way.
    ///
    /// Scattering rules and the shape-formation rules are not equivariant
    /// (they break symmetry through the observer's own axes or through
    /// coordinate order), and `gat:2` deliberately uses coordinate order to
    /// escape balanced two-point configurations.
    pub fn is_symmetric(&self) -> bool {
        matches!(
            self,
            TargetFunctionId::TwoGat
                | TargetFunctionId::Gat { index: 1 }
                | TargetFunctionId::Sgat { .. }
                | TargetFunctionId::SwapGat
        )
    }
}

impl fmt::Display for TargetFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TargetFunctionId::Sct { index, count } => write!(f, "sct:{index}/{count}"),
            TargetFunctionId::SctStar { index, n } => write!(f, "sct*:{index}/{n}"),
            TargetFunctionId::TwoGat => write!(f, "2gat"),
            TargetFunctionId::Gat { index } => write!(f, "gat:{index}"),
            TargetFunctionId::Sgat { index } => write!(f, "sgat:{index}"),
            TargetFunctionId::SwapGat => write!(f, "swapgat"),
            TargetFunctionId::Pf { index, n } => write!(f, "pf:{index}/{n}"),
        }
    }
}

impl FromStr for TargetFunctionId {
    type Err = TargetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_u32 = |part: &str, whole: &str| {
            part.parse::<u32>()
                .map_err(|_| TargetError::BadIndex(format!("cannot parse `{whole}`")))
        };
        let id = match s {
            "2gat" => TargetFunctionId::TwoGat,
            "swapgat" => TargetFunctionId::SwapGat,
            _ => {
                let (name, rest) = s
                    .split_once(':')
                    .ok_or_else(|| TargetError::BadIndex(format!("cannot parse `{s}`")))?;
                match name {
                    "sct" | "sct*" | "pf" => {
                        let (i, n) = rest
                            .split_once('/')
                            .ok_or_else(|| TargetError::BadIndex(format!("cannot parse `{s}`")))?;
                        let index = parse_u32(i, s)?;
                        let size = parse_u32(n, s)?;
                        match name {
                            "sct" => TargetFunctionId::Sct { index, count: size },
                            "sct*" => TargetFunctionId::SctStar { index, n: size },
                            _ => TargetFunctionId::Pf { index, n: size },
                        }
                    }
                    "gat" => TargetFunctionId::Gat { index: parse_u32(rest, s)? },
                    "sgat" => TargetFunctionId::Sgat { index: parse_u32(rest, s)? },
                    _ => return Err(TargetError::BadIndex(format!("unknown family in `{s}`"))),
                }
            }
        };
        id.validate()?;
        Ok(id)
    }
}

/// Evaluates rule `id` on an observation.
///
/// `obs` is the observed multiset in the robot's own frame and must contain
/// the origin (the robot sees itself).  `pattern` supplies the goal shape for
/// the formation rules (`sct*`, `pf`) and is ignored by the others.
pub fn evaluate(
    id: TargetFunctionId,
    obs: &Configuration,
    pattern: Option<&Configuration>,
    tol: &ToleranceConfig,
) -> Result<Point, TargetError> {
    id.validate()?;
    if !obs.contains(&Point::origin()) {
        return Err(TargetError::OriginMissing);
    }
    match id {
        TargetFunctionId::Sct { index, count } => sct(index, count, obs, tol),
        TargetFunctionId::SctStar { index, n } => {
            let g = pattern.ok_or(TargetError::MissingPattern)?;
            sct_star(index, n, obs, g, tol)
        }
        TargetFunctionId::TwoGat => two_gat(obs, tol),
        TargetFunctionId::Gat { index } => gat(index, obs, tol),
        TargetFunctionId::Sgat { index } => sgat(index, obs, tol),
        TargetFunctionId::SwapGat => swap_gat(obs, tol),
        TargetFunctionId::Pf { index, n } => {
            let g = pattern.ok_or(TargetError::MissingPattern)?;
            pf(index, n, obs, g, tol)
        }
    }
}
