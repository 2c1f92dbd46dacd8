//! Shape-formation rules.
//!
//! The formation strategy builds the goal shape through a staged layout
//! measured in a *gauge frame*: two robots pin down the frame — an **anchor**
//! at its origin and a **beacon** at `(31, 0)` — and the segment between them
//! fixes the unit of length.  Three disjoint closed unit disks matter:
//! the *anchor disk* around `(0, 0)`, the *holding disk* around `(10, 0)`
//! where unplaced robots wait, and the *build disk* around `(30, 0)` where
//! the shape is assembled at unit scale.  A configuration is *ready* when it
//! is in one of two shapes:
//!
//! - **Isolated**: the points form a set and one of them stands at least ten
//!   radii away from the smallest circle enclosing the others.  The isolated
//!   robot acts as a sentinel: it is the one robot every observer can single
//!   out, which makes the final move unambiguous.
//! - **Staged**: exactly two points span the enclosing circle, every point
//!   sits in one of the three disks, the holding-disk points are distinct,
//!   and the build-disk points extend to a placement of the goal shape.
//!
//! The two shapes are mutually exclusive: in a staged layout no point is
//! ever ten enclosing-radii away from the rest, because the rest always
//! spans at least a third of the gauge segment.
//!
//! [`sct_star`] scatters any non-ready swarm until rule 1's escape move
//! establishes an isolated sentinel without disturbing anybody else.
//! [`pf`] then funnels the swarm through staged layouts: the sentinel's
//! distance defines the gauge, one distinguished waiting robot at a time
//! walks into the build disk, and the sentinel finally walks in to complete
//! the shape.  One build-disk position is deliberately kept in reserve for
//! that last move, chosen so that the second-to-last state is a set with an
//! isolated sentinel — the only state from which the final move is
//! well-defined.  Goal shapes where some position must hold three or more
//! robots, or where two distinct positions must each hold two, cannot keep
//! that invariant and are not formable by these rules.

use std::cmp::Ordering;

use crate::geom::{
    is_similar, sq_dist, sqrt_ceil_approx, Configuration, Point, Scalar, SimilarityTransform,
    ToleranceConfig,
};
use crate::symmetry::compare_points;

use super::basic::sct;
use super::{TargetError, TargetFunctionId};

/// Beacon x-coordinate in the gauge frame; also the span of the frame.
const SPAN: i64 = 31;
/// Holding-disk center x-coordinate in the gauge frame.
const HOLD_X: i64 = 10;
/// Build-disk center x-coordinate in the gauge frame.
const BUILD_X: i64 = 30;
/// A sentinel must stand at least this many enclosing-circle radii away
/// from the rest of the swarm.
const ISOLATION: i64 = 10;

/// Witness that a configuration is ready for a formation move, and which of
/// the two ready shapes it is in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoodDecomposition {
    /// One point stands isolated far from all the others.
    Isolated {
        /// The isolated point.
        sentinel: Point,
        /// Everything except the sentinel.
        rest: Configuration,
        /// Center of the smallest circle enclosing `rest`.
        center: Point,
        /// Squared radius of that circle.
        sq_radius: Scalar,
    },
    /// The swarm has pinned down a gauge frame and is assembling the shape.
    Staged {
        /// The point at the gauge origin.
        anchor: Point,
        /// The point at `(31, 0)` of the gauge frame.
        beacon: Point,
        /// Distinct points waiting in the holding disk, ascending.
        waiting: Vec<Point>,
        /// Points already in the build disk, in gauge coordinates,
        /// ascending with multiplicities expanded; always contains
        /// `(31, 0)`.
        placed: Vec<Point>,
        /// Similarity taking observed coordinates to gauge coordinates.
        to_gauge: SimilarityTransform,
        /// The chosen full placement of the goal shape in gauge
        /// coordinates, ascending with multiplicities expanded.
        target: Vec<Point>,
    },
}

/// Tests whether `p` is ready for a formation move toward `pattern` and
/// returns the witnessing decomposition.
///
/// The isolated shape is tested first; the staged shape requires the
/// smallest enclosing circle of `p` to have exactly two points of the
/// support on its boundary (they necessarily span a diameter), a
/// single-point anchor disk, distinct holding-disk points, full disk
/// coverage, and build-disk contents extendable to a canonical placement of
/// `pattern`.
pub fn is_good(
    p: &Configuration,
    pattern: &Configuration,
    // Accepted for signature uniformity with the other target-function
    // entry points; every readiness decision is an exact comparison.
    _tol: &ToleranceConfig,
) -> Result<Option<GoodDecomposition>, TargetError> {
    if pattern.n() != p.n() {
        return Err(TargetError::BadPattern(format!(
            "goal shape has {} points but the swarm has {}",
            pattern.n(),
            p.n()
        )));
    }
    if p.n() < 2 {
        return Ok(None);
    }
    if p.n() == p.m() {
        // A set: look for an isolated sentinel.
        let threshold = Scalar::from_int(ISOLATION * ISOLATION);
        for p1 in p.support() {
            let rest = p.minus_one(p1).expect("n >= 2 leaves a nonempty rest");
            let (center, sq_radius) = {
                let c = rest.sec();
                (c.center.clone(), c.sq_radius.clone())
            };
            if sq_dist(p1, &center) >= &threshold * &sq_radius {
                return Ok(Some(GoodDecomposition::Isolated {
                    sentinel: p1.clone(),
                    rest,
                    center,
                    sq_radius,
                }));
            }
        }
    }
    staged_decomposition(p, pattern)
}

/// The point the ready configuration asks to have occupied next.
///
/// - Isolated with a one-point completion: that completion point.
/// - Isolated without one: the beacon position, placed on the far side of
///   the rest so the sentinel-to-center segment becomes exactly ten
///   thirty-firsts of the gauge span.
/// - Staged: the next unplaced target position (in observed coordinates),
///   skipping the reserved one.
pub fn choose_completion(
    pattern: &Configuration,
    decomp: &GoodDecomposition,
    tol: &ToleranceConfig,
) -> Result<Point, TargetError> {
    match decomp {
        GoodDecomposition::Isolated { sentinel, rest, center, .. } => {
            match completion_point(rest, pattern, tol)? {
                Some(q) => Ok(q),
                None => Ok(beacon_point(sentinel, center)),
            }
        }
        GoodDecomposition::Staged { placed, to_gauge, target, .. } => {
            let fill = next_fill(target, placed).ok_or(TargetError::NoMover)?;
            Ok(to_gauge.inverse().apply(&fill))
        }
    }
}

/// Formation-compatible scattering rule `index` for swarms of size `n`.
///
/// Ready configurations are left untouched.  Otherwise robots on shared
/// positions scatter as in [`sct`], and once the positions are distinct only
/// rule 1 may still move: if the observer is less than ten radii from the
/// enclosing circle of the others, it escapes straight away from that
/// circle's center to at least ten radii (the root is rounded up so the
/// threshold is met exactly), which makes it an isolated sentinel while
/// every other robot holds still.
pub fn sct_star(
    index: u32,
    n: u32,
    p: &Configuration,
    pattern: &Configuration,
    tol: &ToleranceConfig,
) -> Result<Point, TargetError> {
    TargetFunctionId::SctStar { index, n }.validate()?;
    if is_good(p, pattern, tol)?.is_some() {
        return Ok(Point::origin());
    }
    scatter_step(index, n, p, tol)
}

/// Shape-formation rule `index` for swarms of size `n`.
///
/// Non-ready configurations scatter as in [`sct_star`].  In a ready
/// configuration exactly one robot moves:
///
/// - Isolated, some single point completes the shape: the sentinel walks to
///   the completion point chosen by [`choose_completion`].
/// - Isolated otherwise: the highest-ranked non-sentinel robot walks out to
///   the beacon position, creating a staged layout whose holding disk is
///   exactly the enclosing circle of the remaining robots.
/// - Staged: the highest-ranked waiting robot (ranked within the
///   sub-configuration of anchor plus holding disk) walks to the next
///   unplaced target position.
pub fn pf(
    index: u32,
    n: u32,
    p: &Configuration,
    pattern: &Configuration,
    tol: &ToleranceConfig,
) -> Result<Point, TargetError> {
    TargetFunctionId::Pf { index, n }.validate()?;
    let Some(decomp) = is_good(p, pattern, tol)? else {
        return scatter_step(index, n, p, tol);
    };
    let origin = Point::origin();
    match &decomp {
        GoodDecomposition::Isolated { sentinel, rest, .. } => {
            if completion_point(rest, pattern, tol)?.is_some() {
                if *sentinel == origin {
                    choose_completion(pattern, &decomp, tol)
                } else {
                    Ok(origin)
                }
            } else {
                // The whole configuration ranks the candidates; the
                // sentinel itself never moves here.
                let mover = ranked_max(p, rest.support(), tol)?;
                if mover == origin {
                    choose_completion(pattern, &decomp, tol)
                } else {
                    Ok(origin)
                }
            }
        }
        GoodDecomposition::Staged { anchor, waiting, .. } => {
            if waiting.is_empty() {
                return Err(TargetError::NoMover);
            }
            let mover = if waiting.len() == 1 {
                waiting[0].clone()
            } else {
                // Rank within anchor + holding disk: the anchor pins the
                // ranking frame, and build-disk points stay out of it so
                // placements never reshuffle who moves next.
                let mut pts = Vec::with_capacity(waiting.len() + 1);
                pts.push(anchor.clone());
                pts.extend(waiting.iter().cloned());
                let p12 = Configuration::new(pts).expect("anchor plus waiting is nonempty");
                ranked_max(&p12, waiting, tol)?
            };
            if mover == origin {
                choose_completion(pattern, &decomp, tol)
            } else {
                Ok(origin)
            }
        }
    }
}

/// The scatter behavior shared by [`sct_star`] and [`pf`] on non-ready
/// configurations.
fn scatter_step(
    index: u32,
    n: u32,
    p: &Configuration,
    tol: &ToleranceConfig,
) -> Result<Point, TargetError> {
    let origin = Point::origin();
    if p.n() != p.m() {
        // Shared positions: split them apart.
        return sct(index, n, p, tol);
    }
    if index >= 2 {
        return Ok(origin);
    }
    let Some(rest) = p.minus_one(&origin) else {
        return Ok(origin);
    };
    let (center, sq_radius) = {
        let c = rest.sec();
        (c.center.clone(), c.sq_radius.clone())
    };
    let d2 = sq_dist(&origin, &center);
    let threshold = Scalar::from_int(ISOLATION * ISOLATION);
    if d2 >= &threshold * &sq_radius {
        return Ok(origin);
    }
    let ten = Scalar::from_int(ISOLATION);
    if center.is_origin() {
        // Observer at the exact center: any direction works; use the local
        // x-axis.
        let r = sqrt_ceil_approx(&sq_radius, tol)?;
        return Ok(Point::new(&ten * &r, Scalar::zero()));
    }
    // Walk along the center-to-observer ray to distance >= 10 r: the
    // stretch factor 10 ceil(sqrt(r^2 / d^2)) is certifiably enough and
    // exceeds 1 because d < 10 r, so the observer stays between the center
    // and its destination.
    let ratio = &sq_radius / &d2;
    let stretch = &ten * &sqrt_ceil_approx(&ratio, tol)?;
    Ok(center.scale(&(Scalar::one() - stretch)))
}

/// Detects the staged shape and assembles its decomposition.
fn staged_decomposition(
    p: &Configuration,
    pattern: &Configuration,
) -> Result<Option<GoodDecomposition>, TargetError> {
    let sec = p.sec();
    let boundary: Vec<Point> = p
        .support()
        .iter()
        .filter(|q| sec.on_boundary(q))
        .cloned()
        .collect();
    if boundary.len() != 2 {
        return Ok(None);
    }
    let rulers = boundary_embeddings(pattern)?;
    if rulers.is_empty() {
        return Ok(None);
    }
    for (a, b) in [(&boundary[0], &boundary[1]), (&boundary[1], &boundary[0])] {
        if let Some(d) = try_gauge_orientation(p, a, b, &rulers)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Tries to read `p` as a staged layout with `a` as anchor and `b` as
/// beacon.
fn try_gauge_orientation(
    p: &Configuration,
    a: &Point,
    b: &Point,
    rulers: &[Vec<Point>],
) -> Result<Option<GoodDecomposition>, TargetError> {
    let to_gauge = gauge_frame(a, b)?;
    let one = Scalar::one();
    let anchor_c = Point::origin();
    let hold_c = Point::from_ints(HOLD_X, 0);
    let build_c = Point::from_ints(BUILD_X, 0);

    let mut anchor_count = 0usize;
    let mut waiting: Vec<Point> = Vec::new();
    let mut placed: Vec<Point> = Vec::new();
    for q in p.points() {
        let z = to_gauge.apply(q);
        if sq_dist(&z, &anchor_c) <= one {
            anchor_count += 1;
        } else if sq_dist(&z, &hold_c) <= one {
            waiting.push(q.clone());
        } else if sq_dist(&z, &build_c) <= one {
            placed.push(z);
        } else {
            return Ok(None);
        }
    }
    if anchor_count != 1 {
        return Ok(None);
    }
    // Holding-disk points must be distinct; `p.points()` is sorted, so the
    // subsequence `waiting` is too.
    if waiting.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    placed.sort();
    let target = match rulers.iter().find(|r| multiset_contains(r, &placed)) {
        Some(r) => r.clone(),
        None => return Ok(None),
    };
    Ok(Some(GoodDecomposition::Staged {
        anchor: a.clone(),
        beacon: b.clone(),
        waiting,
        placed,
        to_gauge,
        target,
    }))
}

/// The similarity taking `a` to `(0, 0)` and `b` to `(31, 0)`.
fn gauge_frame(a: &Point, b: &Point) -> Result<SimilarityTransform, TargetError> {
    let v = b - a;
    let n2 = v.sq_norm();
    let span = Scalar::from_int(SPAN);
    let lin_a = &(&span * &v.x) / &n2;
    let lin_b = &(-&(&span * &v.y)) / &n2;
    let tx = -(&(&lin_a * &a.x) - &(&lin_b * &a.y));
    let ty = -(&(&lin_b * &a.x) + &(&lin_a * &a.y));
    Ok(SimilarityTransform::new(lin_a, lin_b, Point::new(tx, ty))?)
}

/// All canonical placements of `pattern` in the gauge frame, ascending in
/// the order on sorted point lists, duplicates removed.
///
/// A canonical placement scales the pattern so its enclosing circle becomes
/// the build disk and rotates it so one of the pattern points on that
/// circle lands on `(31, 0)`.  There is one candidate per boundary point of
/// the pattern's support; an all-coincident pattern has none.
fn boundary_embeddings(pattern: &Configuration) -> Result<Vec<Vec<Point>>, TargetError> {
    let sec = pattern.sec();
    if sec.sq_radius.is_zero() {
        return Ok(Vec::new());
    }
    let build_c = Point::from_ints(BUILD_X, 0);
    let mut seen = std::collections::BTreeSet::new();
    for g in pattern.support() {
        if !sec.on_boundary(g) {
            continue;
        }
        // Rotation-scale taking (g - center) to (1, 0), i.e. dividing by
        // the complex number (g - center); exact because |g - center|^2 is
        // the rational squared radius.
        let w = g - &sec.center;
        let n2 = w.sq_norm();
        let lin_a = &w.x / &n2;
        let lin_b = &(-&w.y) / &n2;
        let mx = &(&lin_a * &sec.center.x) - &(&lin_b * &sec.center.y);
        let my = &(&lin_b * &sec.center.x) + &(&lin_a * &sec.center.y);
        let t = SimilarityTransform::new(
            lin_a,
            lin_b,
            Point::new(&build_c.x - &mx, &build_c.y - &my),
        )?;
        let mut image: Vec<Point> = pattern.points().iter().map(|q| t.apply(q)).collect();
        image.sort();
        seen.insert(image);
    }
    Ok(seen.into_iter().collect())
}

/// The single point whose addition to `rest` yields the goal shape, if one
/// exists; the smallest such point under coordinate order when several do.
fn completion_point(
    rest: &Configuration,
    pattern: &Configuration,
    tol: &ToleranceConfig,
) -> Result<Option<Point>, TargetError> {
    let mut best: Option<Point> = None;
    for g in pattern.support() {
        let Some(h) = pattern.minus_one(g) else {
            continue;
        };
        if let Some(t) = is_similar(rest, &h, tol)? {
            let q = t.apply(g);
            if best.as_ref().is_none_or(|b| q < *b) {
                best = Some(q);
            }
        }
    }
    Ok(best)
}

/// The beacon position for an isolated sentinel: the point past the rest on
/// the sentinel-to-center line at 31/10 of the sentinel's distance.  The
/// rest's enclosing circle then sits exactly on the holding disk of the
/// resulting gauge frame, and its radius (at most a tenth of the sentinel
/// distance) keeps every resting robot inside.
fn beacon_point(sentinel: &Point, center: &Point) -> Point {
    let stretch = Scalar::ratio(SPAN, ISOLATION);
    let v = (center - sentinel).scale(&stretch);
    sentinel + &v
}

/// The highest-ranked point among `members`, ranked by the point order of
/// `config`; ties (which cannot occur when the configuration ranks all
/// points distinctly) break toward the smaller coordinates.
fn ranked_max(
    config: &Configuration,
    members: &[Point],
    tol: &ToleranceConfig,
) -> Result<Point, TargetError> {
    let mut best: Option<&Point> = None;
    for q in members {
        match best {
            None => best = Some(q),
            Some(b) => match compare_points(config, q, b, tol)? {
                Ordering::Greater => best = Some(q),
                Ordering::Equal if q < b => best = Some(q),
                _ => {}
            },
        }
    }
    best.cloned().ok_or(TargetError::NoMover)
}

/// The next target position to fill: the smallest unplaced one, keeping one
/// copy of the reserve position for the sentinel's final move.
fn next_fill(target: &[Point], placed: &[Point]) -> Option<Point> {
    let mut remaining = multiset_subtract(target, placed);
    if remaining.is_empty() {
        return None;
    }
    if let Some(r) = reserve_point(target) {
        if let Some(i) = remaining.iter().position(|q| **q == r) {
            remaining.remove(i);
        }
    }
    remaining.first().map(|q| (*q).clone())
}

/// The target position reserved for the sentinel's final move: the smallest
/// duplicated position if the target has one (so the last remaining
/// positions stay distinct as long as possible), otherwise the largest
/// position other than the beacon's `(31, 0)`.
fn reserve_point(target: &[Point]) -> Option<Point> {
    for w in target.windows(2) {
        if w[0] == w[1] {
            return Some(w[0].clone());
        }
    }
    let beacon = Point::from_ints(SPAN, 0);
    target.iter().rev().find(|p| **p != beacon).cloned()
}

/// Multiset inclusion for ascending point slices.
fn multiset_contains(big: &[Point], small: &[Point]) -> bool {
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            match b.cmp(s) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Multiset difference `big - small` for ascending point slices, ascending.
fn multiset_subtract<'a>(big: &'a [Point], small: &[Point]) -> Vec<&'a Point> {
    let mut out = Vec::with_capacity(big.len().saturating_sub(small.len()));
    let mut si = small.iter().peekable();
    for b in big {
        match si.peek() {
            Some(s) if *s == b => {
                si.next();
            }
            _ => out.push(b),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn ratio_pt(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
        Point::new(Scalar::ratio(xn, xd), Scalar::ratio(yn, yd))
    }

    fn config(pts: Vec<Point>) -> Configuration {
        Configuration::new(pts).unwrap()
    }

    fn unit_square() -> Configuration {
        Configuration::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    /// The unique canonical placement of the unit square: a diamond on the
    /// build disk.
    fn square_target() -> Vec<Point> {
        vec![pt(29, 0), pt(30, -1), pt(30, 1), pt(31, 0)]
    }

    fn line5() -> Configuration {
        Configuration::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)])
    }

    /// The observation of the robot standing at `at` (axis-aligned frame).
    fn seen_from(global: &Configuration, at: &Point) -> Configuration {
        global.translate(&-at)
    }

    #[test]
    fn isolated_sentinel_is_detected_with_exact_witness() {
        let p = config(vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2), pt(100, 1)]);
        match is_good(&p, &line5(), &tol()).unwrap() {
            Some(GoodDecomposition::Isolated { sentinel, center, sq_radius, rest }) => {
                assert_eq!(sentinel, pt(100, 1));
                assert_eq!(center, pt(1, 1));
                assert_eq!(sq_radius, Scalar::from_int(2));
                assert_eq!(rest.n(), 4);
            }
            other => panic!("expected the isolated shape, got {other:?}"),
        }
    }

    #[test]
    fn compact_sets_and_multisets_are_not_ready() {
        // A bare square: nobody is isolated and four points sit on the
        // enclosing circle.
        let square = config(vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)]);
        assert_eq!(is_good(&square, &unit_square(), &tol()).unwrap(), None);

        // A shared position blocks the isolated shape even with a far
        // point, and the build-disk contents here fit no placement of the
        // goal.
        let multi = config(vec![pt(0, 0), pt(0, 0), pt(1, 0), pt(100, 0)]);
        assert_eq!(is_good(&multi, &unit_square(), &tol()).unwrap(), None);
    }

    #[test]
    fn pattern_size_mismatch_is_rejected() {
        let p = config(vec![pt(0, 0), pt(1, 0)]);
        let err = is_good(&p, &unit_square(), &tol()).unwrap_err();
        assert!(matches!(err, TargetError::BadPattern(_)));
    }

    #[test]
    fn staged_layout_is_recognized_in_gauge_coordinates() {
        let p = config(vec![
            pt(0, 0),
            ratio_pt(21, 2, 0, 1),
            ratio_pt(10, 1, 1, 2),
            pt(31, 0),
        ]);
        match is_good(&p, &unit_square(), &tol()).unwrap() {
            Some(GoodDecomposition::Staged { anchor, beacon, waiting, placed, to_gauge, target }) => {
                assert_eq!(anchor, pt(0, 0));
                assert_eq!(beacon, pt(31, 0));
                assert_eq!(waiting, vec![ratio_pt(10, 1, 1, 2), ratio_pt(21, 2, 0, 1)]);
                assert_eq!(placed, vec![pt(31, 0)]);
                assert_eq!(target, square_target());
                // The frame here is the identity.
                assert_eq!(to_gauge.apply(&pt(5, 7)), pt(5, 7));
            }
            other => panic!("expected the staged shape, got {other:?}"),
        }
    }

    #[test]
    fn staged_fill_moves_the_distinguished_waiter() {
        let global = config(vec![
            pt(0, 0),
            ratio_pt(21, 2, 0, 1),
            ratio_pt(10, 1, 1, 2),
            pt(31, 0),
        ]);
        let g = unit_square();

        // (10, 1/2) sits strictly inside the enclosing circle of
        // anchor-plus-holding-disk, so it outranks the two boundary points
        // and is the designated mover; its destination is the smallest
        // unreserved target position, (29, 0).
        let mover = ratio_pt(10, 1, 1, 2);
        let obs = seen_from(&global, &mover);
        for i in [1, 3] {
            let dest = pf(i, 4, &obs, &g, &tol()).unwrap();
            assert_eq!(dest, ratio_pt(19, 1, -1, 2), "pf:{i}");
        }

        // Everybody else stays.
        for still in [pt(0, 0), ratio_pt(21, 2, 0, 1), pt(31, 0)] {
            let obs = seen_from(&global, &still);
            assert_eq!(pf(1, 4, &obs, &g, &tol()).unwrap(), Point::origin());
        }
    }

    #[test]
    fn beacon_move_matches_the_nominal_geometry_at_the_threshold() {
        // The sentinel stands exactly ten radii out (distance 15, radius
        // 3/2).  The rest is collinear, so no single point completes a
        // square and the distinguished rest robot must create the beacon.
        let sentinel = ratio_pt(-27, 2, 0, 1);
        let global = config(vec![sentinel.clone(), pt(0, 0), pt(1, 0), pt(3, 0)]);
        let g = unit_square();

        match is_good(&global, &g, &tol()).unwrap() {
            Some(GoodDecomposition::Isolated { sentinel: s, center, sq_radius, .. }) => {
                assert_eq!(s, sentinel);
                assert_eq!(center, ratio_pt(3, 2, 0, 1));
                assert_eq!(sq_radius, Scalar::ratio(9, 4));
            }
            other => panic!("expected the isolated shape, got {other:?}"),
        }

        // (0, 0) lies closest to the enclosing center of the whole swarm,
        // so it is the highest-ranked rest point — and it is the observer.
        let dest = pf(1, 4, &global, &g, &tol()).unwrap();
        // 31/10 of the way from the sentinel through the rest center:
        // distance from the center is then 21/10 of the sentinel distance,
        // i.e. exactly 21 radii here.
        assert_eq!(dest, pt(33, 0));
        assert_eq!(
            sq_dist(&dest, &ratio_pt(3, 2, 0, 1)),
            Scalar::ratio(9 * 441, 4)
        );

        // The other rest robots stay.
        for still in [pt(1, 0), pt(3, 0), sentinel.clone()] {
            let obs = seen_from(&global, &still);
            assert_eq!(pf(1, 4, &obs, &g, &tol()).unwrap(), Point::origin());
        }

        // Applying the move yields a staged layout whose holding disk is
        // exactly the old enclosing circle of the rest.
        let after = config(vec![sentinel.clone(), pt(1, 0), pt(3, 0), pt(33, 0)]);
        match is_good(&after, &g, &tol()).unwrap() {
            Some(GoodDecomposition::Staged { anchor, beacon, waiting, placed, .. }) => {
                assert_eq!(anchor, sentinel);
                assert_eq!(beacon, pt(33, 0));
                assert_eq!(waiting, vec![pt(1, 0), pt(3, 0)]);
                assert_eq!(placed, vec![pt(31, 0)]);
            }
            other => panic!("expected the staged shape, got {other:?}"),
        }
    }

    #[test]
    fn sentinel_walks_in_when_one_point_completes_the_shape() {
        let global = config(vec![pt(0, 0), pt(4, 0), pt(0, 4), pt(100, 100)]);
        let g = unit_square();
        match is_good(&global, &g, &tol()).unwrap() {
            Some(GoodDecomposition::Isolated { sentinel, .. }) => {
                assert_eq!(sentinel, pt(100, 100));
            }
            other => panic!("expected the isolated shape, got {other:?}"),
        }

        // Sentinel's own view: walk to the missing corner.
        let obs = seen_from(&global, &pt(100, 100));
        assert_eq!(pf(2, 4, &obs, &g, &tol()).unwrap(), pt(-96, -96));

        // Everyone else stays.
        for still in [pt(0, 0), pt(4, 0), pt(0, 4)] {
            let obs = seen_from(&global, &still);
            assert_eq!(pf(2, 4, &obs, &g, &tol()).unwrap(), Point::origin());
        }
    }

    #[test]
    fn escape_move_establishes_isolation_exactly() {
        let square = config(vec![pt(0, 0), pt(2, 0), pt(0, 2), pt(2, 2)]);
        let g = unit_square();
        // The enclosing circle of the other three has center (1, 1) and
        // squared radius 2 — the ratio to the observer's squared distance
        // is exactly 1, so the escape lands at stretch 10: center * (1-10).
        assert_eq!(sct_star(1, 4, &square, &g, &tol()).unwrap(), pt(-9, -9));
        let after = config(vec![pt(-9, -9), pt(2, 0), pt(0, 2), pt(2, 2)]);
        assert!(matches!(
            is_good(&after, &g, &tol()).unwrap(),
            Some(GoodDecomposition::Isolated { .. })
        ));

        // All other rules hold still on a distinct-position swarm.
        for i in 2..=4 {
            assert_eq!(sct_star(i, 4, &square, &g, &tol()).unwrap(), Point::origin());
        }
    }

    #[test]
    fn non_ready_multisets_scatter() {
        let p = config(vec![pt(0, 0), pt(0, 0), pt(6, 0)]);
        let g = Configuration::from_ints(&[(0, 0), (3, 0), (6, 0)]);
        assert_eq!(
            sct_star(1, 3, &p, &g, &tol()).unwrap(),
            ratio_pt(3, 2, 0, 1)
        );
        assert_eq!(sct_star(2, 3, &p, &g, &tol()).unwrap(), pt(1, 0));
    }

    #[test]
    fn ready_configurations_freeze_the_scatter_rules() {
        let p = config(vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2), pt(100, 1)]);
        for i in 1..=5 {
            assert_eq!(sct_star(i, 5, &p, &line5(), &tol()).unwrap(), Point::origin());
        }
    }

    #[test]
    fn embeddings_are_deduplicated_and_ordered() {
        // Four-fold symmetry: all four boundary anchors give the same
        // placement.
        let sq = boundary_embeddings(&unit_square()).unwrap();
        assert_eq!(sq, vec![square_target()]);

        // A segment's two endpoints also coincide after reflection through
        // the build-disk center.
        let seg = Configuration::from_ints(&[(0, 0), (3, 0), (6, 0)]);
        assert_eq!(
            boundary_embeddings(&seg).unwrap(),
            vec![vec![pt(29, 0), pt(30, 0), pt(31, 0)]]
        );

        // A scalene shape with all three points on its circle yields three
        // distinct placements, ascending.
        let tri = Configuration::from_ints(&[(0, 0), (4, 0), (1, 2)]);
        let rulers = boundary_embeddings(&tri).unwrap();
        assert_eq!(rulers.len(), 3);
        for w in rulers.windows(2) {
            assert!(w[0] < w[1]);
        }
        for r in &rulers {
            assert!(r.contains(&pt(31, 0)));
        }
    }

    #[test]
    fn reserve_rules_keep_the_last_position_for_the_sentinel() {
        // No duplicates: reserve the largest non-beacon position.
        assert_eq!(reserve_point(&square_target()), Some(pt(30, 1)));
        // A duplicated position is reserved instead.
        let dup = vec![pt(29, 0), pt(29, 0), pt(30, 1), pt(31, 0)];
        assert_eq!(reserve_point(&dup), Some(pt(29, 0)));

        // Fill order skips the reserve.
        assert_eq!(next_fill(&square_target(), &[pt(31, 0)]), Some(pt(29, 0)));
        assert_eq!(
            next_fill(&square_target(), &[pt(29, 0), pt(31, 0)]),
            Some(pt(30, -1))
        );
        assert_eq!(
            next_fill(&dup, &[pt(29, 0), pt(31, 0)]),
            Some(pt(30, 1))
        );
    }

    /// Drives a full formation run under simultaneous activation with
    /// axis-aligned frames: evaluate every robot, apply all moves, repeat.
    fn run_formation(start: Vec<Point>, g: &Configuration, max_steps: usize) -> Configuration {
        let mut world = config(start);
        for _ in 0..max_steps {
            if is_similar(&world, g, &tol()).unwrap().is_some() {
                return world;
            }
            let mut next = Vec::with_capacity(world.n());
            for r in world.points() {
                let obs = seen_from(&world, r);
                let dest = pf(1, g.n() as u32, &obs, g, &tol()).unwrap();
                next.push(&dest + r);
            }
            world = config(next);
        }
        world
    }

    #[test]
    fn staged_run_forms_a_shape_with_a_duplicated_position() {
        // Goal: unit right triangle with its right-angle corner doubled is
        // similar to {(29,0)^2, (30,1), (31,0)} — the reserve rule must
        // hold back one copy of the duplicated position so the
        // second-to-last state is a set with an isolated sentinel.
        let g = config(vec![pt(0, 0), pt(1, 0), pt(1, 0), pt(0, 1)]);
        let final_world = run_formation(
            vec![pt(0, 0), pt(10, 0), ratio_pt(21, 2, 0, 1), pt(31, 0)],
            &g,
            6,
        );
        assert!(
            is_similar(&final_world, &g, &tol()).unwrap().is_some(),
            "formation did not complete: {final_world:?}"
        );
        assert_eq!(final_world.m(), 3);
        assert_eq!(final_world.n(), 4);
    }

    #[test]
    fn staged_run_forms_a_plain_square() {
        let g = unit_square();
        let final_world = run_formation(
            vec![pt(0, 0), pt(10, 0), ratio_pt(21, 2, 0, 1), pt(31, 0)],
            &g,
            6,
        );
        assert!(
            is_similar(&final_world, &g, &tol()).unwrap().is_some(),
            "formation did not complete: {final_world:?}"
        );
    }

    #[test]
    fn choose_completion_reports_the_designated_point() {
        let g = unit_square();

        let iso = is_good(
            &config(vec![pt(0, 0), pt(4, 0), pt(0, 4), pt(100, 100)]),
            &g,
            &tol(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(choose_completion(&g, &iso, &tol()).unwrap(), pt(4, 4));

        let staged = is_good(
            &config(vec![
                pt(0, 0),
                ratio_pt(21, 2, 0, 1),
                ratio_pt(10, 1, 1, 2),
                pt(31, 0),
            ]),
            &g,
            &tol(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(choose_completion(&g, &staged, &tol()).unwrap(), pt(29, 0));
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

        #[test]
        fn staged_recognition_is_frame_invariant(
            offsets in prop::collection::btree_set((-7i64..=7, -7i64..=7), 2),
            flip in any::<bool>(),
        ) {
            // Two distinct waiting points strictly inside the holding disk.
            let mut pts = vec![pt(0, 0), pt(31, 0)];
            for &(dx, dy) in &offsets {
                pts.push(Point::new(
                    Scalar::from_int(10) + Scalar::ratio(dx, 10),
                    Scalar::ratio(dy, 10),
                ));
            }
            let p = config(pts);
            let g = unit_square();
            let d = is_good(&p, &g, &tol()).unwrap();
            let Some(GoodDecomposition::Staged { target, .. }) = &d else {
                return Err(TestCaseError::fail(format!("not staged: {d:?}")));
            };
            prop_assert_eq!(target, &square_target());

            // An exact rotation-scale-translation (optionally composed
            // with a half turn) must not change the gauge-frame view.
            let (la, lb) = if flip {
                (Scalar::ratio(-6, 5), Scalar::ratio(-8, 5))
            } else {
                (Scalar::ratio(6, 5), Scalar::ratio(8, 5))
            };
            let s = SimilarityTransform::new(la, lb, pt(7, -3)).unwrap();
            let moved = s.apply_config(&p);
            match is_good(&moved, &g, &tol()).unwrap() {
                Some(GoodDecomposition::Staged { anchor, beacon, target: t2, placed, .. }) => {
                    prop_assert_eq!(anchor, s.apply(&pt(0, 0)));
                    prop_assert_eq!(beacon, s.apply(&pt(31, 0)));
                    prop_assert_eq!(t2, square_target());
                    prop_assert_eq!(placed, vec![pt(31, 0)]);
                }
                other => return Err(TestCaseError::fail(format!("not staged: {other:?}"))),
            }
        }

        #[test]
        fn readiness_never_panics_on_integer_swarms(
            pts in prop::collection::btree_set((-20i64..=20, -20i64..=20), 4),
        ) {
            let p = config(pts.iter().map(|&(x, y)| pt(x, y)).collect());
            let _ = is_good(&p, &unit_square(), &tol()).unwrap();
        }
    }
}
