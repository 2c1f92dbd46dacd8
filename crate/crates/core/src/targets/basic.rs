//! Scattering and gathering rules.
//!
//! Every rule here follows the same convention: the observation is a
//! nonempty multiset of points in the observer's frame, the observer sits at
//! the origin, and the returned point is the destination in that same frame
//! (the origin means "stay put").

use crate::geom::{
    min_pairwise_sq_distance, sqrt_approx, Configuration, Point, Scalar, ToleranceConfig,
};
use crate::symmetry::{largest_point, rotation_order};

use super::TargetError;

/// A balanced pair: exactly two distinct positions with equal multiplicity.
///
/// These configurations are the hard case for gathering — the two groups are
/// mutually indistinguishable, so no single rotation-equivariant rule can
/// break the tie.
pub fn is_bivalent(p: &Configuration) -> bool {
    if p.m() != 2 {
        return false;
    }
    let a = &p.support()[0];
    let b = &p.support()[1];
    p.multiplicity(a) == p.multiplicity(b)
}

/// Scattering rule `index` of a family of size `count`.
///
/// The swarm spreads until at least `count` distinct positions are occupied
/// and then freezes.  While fewer are occupied, robots sharing a position
/// separate because distinct rules prescribe distinct step lengths along the
/// local x-axis, and all steps stay below a quarter of the minimum distance
/// between occupied positions, so distinct positions never merge.
pub fn sct(
    index: u32,
    count: u32,
    p: &Configuration,
    tol: &ToleranceConfig,
) -> Result<Point, TargetError> {
    let m = p.m();
    if m >= count as usize {
        return Ok(Point::origin());
    }
    if m == 1 {
        return Ok(if index == 1 {
            Point::origin()
        } else {
            Point::new(Scalar::one(), Scalar::zero())
        });
    }
    // 2 <= m <= count - 1: step (d / (2 (index + 1)), 0) where d is the
    // minimum distance between distinct positions (rounded down, so the
    // step-length bound d / 4 still holds exactly).
    let min_sq = min_pairwise_sq_distance(p)?;
    let d = sqrt_approx(&min_sq, tol)?;
    let step = d / Scalar::from_int(2 * (i64::from(index) + 1));
    Ok(Point::new(step, Scalar::zero()))
}

/// The single gathering rule for swarms that never pass through a balanced
/// pair: walk to the unique most-distinguished position if one exists,
/// otherwise to the center of the smallest enclosing circle.
pub fn two_gat(p: &Configuration, tol: &ToleranceConfig) -> Result<Point, TargetError> {
    if p.m() == 1 || is_bivalent(p) {
        return Ok(Point::origin());
    }
    if rotation_order(p, tol) == 1 {
        return Ok(largest_point(p, tol)?);
    }
    Ok(p.sec().center.clone())
}

/// Gathering rule `index` (1 or 2) of the two-rule family.
///
/// Both rules delegate to [`two_gat`] except on balanced pairs, where they
/// break the tie through coordinate order: rule 1 stays, rule 2 steps onto
/// the partner or past it depending on which side of the observer the
/// partner lies.  Any mix of the two rules across the swarm escapes the
/// balanced pair.
pub fn gat(index: u32, p: &Configuration, tol: &ToleranceConfig) -> Result<Point, TargetError> {
    if !is_bivalent(p) {
        return two_gat(p, tol);
    }
    if index == 1 {
        return Ok(Point::origin());
    }
    let q = partner(p);
    Ok(if q > Point::origin() {
        q
    } else {
        q.scale(&Scalar::from_int(2))
    })
}

/// Rotation-equivariant gathering rule `index` (1, 2, or 3).
///
/// On a balanced pair the rule moves to `-index` times the partner's
/// position — a destination that rotates with the observation, so the rule
/// stays equivariant.  Distinct indices prescribe distinct destinations,
/// which is what lets a three-rule mix escape the balanced pair even when
/// activations interleave adversarially.
pub fn sgat(index: u32, p: &Configuration, tol: &ToleranceConfig) -> Result<Point, TargetError> {
    if !is_bivalent(p) {
        return two_gat(p, tol);
    }
    let q = partner(p);
    Ok(q.scale(&Scalar::from_int(-i64::from(index))))
}

/// Gathering rule that walks onto the partner in a balanced pair.
///
/// Equivariant like [`sgat`], but a swarm programmed entirely with this rule
/// livelocks on a balanced pair: when both sides move simultaneously they
/// swap positions forever.  It exists to demonstrate that failure mode.
pub fn swap_gat(p: &Configuration, tol: &ToleranceConfig) -> Result<Point, TargetError> {
    if !is_bivalent(p) {
        return two_gat(p, tol);
    }
    Ok(partner(p))
}

/// The distinct position other than the observer's own in a two-position
/// configuration.
fn partner(p: &Configuration) -> Point {
    p.support()
        .iter()
        .find(|q| !q.is_origin())
        .cloned()
        .unwrap_or_else(Point::origin)
}
