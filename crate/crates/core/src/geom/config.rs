//! Point multisets and their smallest enclosing circles.

use std::sync::OnceLock;

use super::{sq_dist, GeomError, Point, Scalar};

/// A circle given by its center and *squared* radius, both exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    /// Center of the circle.
    pub center: Point,
    /// Squared radius (zero for a point circle).
    pub sq_radius: Scalar,
}

impl Circle {
    /// The degenerate circle containing exactly one point.
    pub fn point_circle(p: &Point) -> Self {
        Circle {
            center: p.clone(),
            sq_radius: Scalar::zero(),
        }
    }

    /// The circle with segment `ab` as diameter.
    pub fn diameter_circle(a: &Point, b: &Point) -> Self {
        let center = a.midpoint(b);
        let sq_radius = sq_dist(a, &center);
        Circle { center, sq_radius }
    }

    /// The circle through three points.
    ///
    /// For collinear triples (which have no circumscribed circle) this falls
    /// back to the diameter circle of the farthest pair, which is the
    /// smallest circle containing all three.
    pub fn circumscribe(a: &Point, b: &Point, c: &Point) -> Self {
        let two = Scalar::from_int(2);
        let d = &two
            * (&a.x * (&b.y - &c.y) + &b.x * (&c.y - &a.y) + &c.x * (&a.y - &b.y));
        if d.is_zero() {
            let (mut u, mut v, mut best) = (a, b, sq_dist(a, b));
            for (p, q) in [(a, c), (b, c)] {
                let s = sq_dist(p, q);
                if s > best {
                    best = s;
                    u = p;
                    v = q;
                }
            }
            return Circle::diameter_circle(u, v);
        }
        let na = a.sq_norm();
        let nb = b.sq_norm();
        let nc = c.sq_norm();
        let ux = (&na * (&b.y - &c.y) + &nb * (&c.y - &a.y) + &nc * (&a.y - &b.y)) / &d;
        let uy = (&na * (&c.x - &b.x) + &nb * (&a.x - &c.x) + &nc * (&b.x - &a.x)) / &d;
        let center = Point::new(ux, uy);
        let sq_radius = sq_dist(&center, a);
        Circle { center, sq_radius }
    }

    /// Whether `p` lies in the closed disk.
    pub fn contains(&self, p: &Point) -> bool {
        sq_dist(&self.center, p) <= self.sq_radius
    }

    /// Whether `p` lies exactly on the boundary.
    pub fn on_boundary(&self, p: &Point) -> bool {
        sq_dist(&self.center, p) == self.sq_radius
    }
}

/// A nonempty multiset of points, the snapshot a robot observes.
///
/// Points are stored sorted in the canonical lexicographic order, so two
/// configurations are equal as values exactly when they are equal as
/// multisets. The support (distinct points) and per-point multiplicities
/// are precomputed; the smallest enclosing circle and the squared diameter
/// are computed on first use and cached.
#[derive(Debug, Clone)]
pub struct Configuration {
    points: Vec<Point>,
    support: Vec<Point>,
    mults: Vec<usize>,
    sec: OnceLock<Circle>,
    sq_diameter: OnceLock<Scalar>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for Configuration {}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Configuration {
    /// Lexicographic order on the sorted point sequences; the canonical
    /// total order on same-size multisets.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.points.cmp(&other.points)
    }
}

impl Configuration {
    /// Builds a configuration from a multiset of points.
    ///
    /// Errors if `points` is empty.
    pub fn new(mut points: Vec<Point>) -> Result<Self, GeomError> {
        if points.is_empty() {
            return Err(GeomError::EmptyConfiguration);
        }
        points.sort();
        let mut support: Vec<Point> = Vec::new();
        let mut mults: Vec<usize> = Vec::new();
        for p in &points {
            if support.last() == Some(p) {
                *mults.last_mut().expect("parallel to support") += 1;
            } else {
                support.push(p.clone());
                mults.push(1);
            }
        }
        Ok(Configuration {
            points,
            support,
            mults,
            sec: OnceLock::new(),
            sq_diameter: OnceLock::new(),
        })
    }

    /// Convenience constructor from integer coordinates.
    ///
    /// # Panics
    /// Panics if `coords` is empty.
    pub fn from_ints(coords: &[(i64, i64)]) -> Self {
        Configuration::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
            .expect("nonempty coordinate list")
    }

    /// All points, sorted ascending (multiplicities expanded).
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The distinct points, sorted ascending.
    pub fn support(&self) -> &[Point] {
        &self.support
    }

    /// Total number of points counted with multiplicity.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Number of distinct points.
    pub fn m(&self) -> usize {
        self.support.len()
    }

    /// Multiplicity of `p` (zero when `p` is not in the configuration).
    pub fn multiplicity(&self, p: &Point) -> usize {
        match self.support.binary_search(p) {
            Ok(i) => self.mults[i],
            Err(_) => 0,
        }
    }

    /// Iterates over `(point, multiplicity)` pairs in ascending point order.
    pub fn support_multiplicities(&self) -> impl Iterator<Item = (&Point, usize)> {
        self.support.iter().zip(self.mults.iter().copied())
    }

    /// Whether `p` occurs in the configuration.
    pub fn contains(&self, p: &Point) -> bool {
        self.support.binary_search(p).is_ok()
    }

    /// The smallest enclosing circle of the support (cached).
    pub fn sec(&self) -> &Circle {
        self.sec.get_or_init(|| sec_of_points(&self.support))
    }

    /// The squared diameter: the largest squared distance between two
    /// points of the support (cached; zero for a single distinct point).
    pub fn sq_diameter(&self) -> &Scalar {
        self.sq_diameter.get_or_init(|| {
            let mut best = Scalar::zero();
            for i in 0..self.support.len() {
                for j in (i + 1)..self.support.len() {
                    let s = sq_dist(&self.support[i], &self.support[j]);
                    if s > best {
                        best = s;
                    }
                }
            }
            best
        })
    }

    /// The configuration shifted by the vector `v`.
    pub fn translate(&self, v: &Point) -> Configuration {
        Configuration::new(self.points.iter().map(|p| p + v).collect())
            .expect("translation preserves nonemptiness")
    }

    /// The configuration reflected through the origin.
    pub fn negate(&self) -> Configuration {
        Configuration::new(self.points.iter().map(|p| -p).collect())
            .expect("negation preserves nonemptiness")
    }

    /// Removes one copy of `p`. Returns `None` if `p` is absent or if the
    /// configuration would become empty.
    pub fn minus_one(&self, p: &Point) -> Option<Configuration> {
        if self.n() == 1 || !self.contains(p) {
            return None;
        }
        let mut pts = self.points.clone();
        let idx = pts.iter().position(|q| q == p).expect("checked above");
        pts.remove(idx);
        Some(Configuration::new(pts).expect("still nonempty"))
    }
}

/// Whether all distinct points of the configuration lie on one line.
///
/// Configurations with at most two distinct points are linear by
/// convention.
pub fn is_linear(config: &Configuration) -> bool {
    let s = config.support();
    if s.len() <= 2 {
        return true;
    }
    let dir = &s[1] - &s[0];
    s[2..].iter().all(|p| dir.cross(&(p - &s[0])).is_zero())
}

/// The smallest squared distance between two distinct points of the
/// configuration. Errors when there is only one distinct point.
pub fn min_pairwise_sq_distance(config: &Configuration) -> Result<Scalar, GeomError> {
    let s = config.support();
    if s.len() < 2 {
        return Err(GeomError::TooFewPoints {
            needed: 2,
            got: s.len(),
        });
    }
    let mut best: Option<Scalar> = None;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let d = sq_dist(&s[i], &s[j]);
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
            }
        }
    }
    Ok(best.expect("at least one pair"))
}

/// The smallest enclosing circle of the configuration's support.
///
/// Exact and deterministic: a fixed move-to-front order over the sorted
/// support is used, so equal configurations always produce identical
/// centers and radii.
pub fn smallest_enclosing_circle(config: &Configuration) -> Circle {
    config.sec().clone()
}

pub(crate) fn sec_of_points(pts: &[Point]) -> Circle {
    debug_assert!(!pts.is_empty());
    let mut work = pts.to_vec();
    let mut c = Circle::point_circle(&work[0]);
    for i in 1..work.len() {
        if !c.contains(&work[i]) {
            c = sec_with_one(&mut work, i);
            work[..=i].rotate_right(1);
        }
    }
    c
}

/// Smallest circle containing `work[..i]` with `work[i]` on the boundary.
fn sec_with_one(work: &mut [Point], i: usize) -> Circle {
    let q = work[i].clone();
    let mut c = Circle::point_circle(&q);
    for j in 0..i {
        if !c.contains(&work[j]) {
            c = sec_with_two(work, j, &q);
            work[..=j].rotate_right(1);
        }
    }
    c
}

/// Smallest circle containing `work[..j]` with `q1` and `work[j]` on the
/// boundary.
fn sec_with_two(work: &mut [Point], j: usize, q1: &Point) -> Circle {
    let q2 = work[j].clone();
    let mut c = Circle::diameter_circle(q1, &q2);
    for p in &work[..j] {
        if !c.contains(p) {
            c = Circle::circumscribe(q1, &q2, p);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    /// Brute-force smallest enclosing circle: the best circle among all
    /// diameter circles of pairs and circumscribed circles of
    /// non-collinear triples that contains every point.
    fn sec_oracle(pts: &[Point]) -> Circle {
        let mut candidates = vec![Circle::point_circle(&pts[0])];
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                candidates.push(Circle::diameter_circle(&pts[i], &pts[j]));
                for k in (j + 1)..pts.len() {
                    let ab = &pts[j] - &pts[i];
                    let ac = &pts[k] - &pts[i];
                    if !ab.cross(&ac).is_zero() {
                        candidates.push(Circle::circumscribe(&pts[i], &pts[j], &pts[k]));
                    }
                }
            }
        }
        candidates
            .into_iter()
            .filter(|c| pts.iter().all(|q| c.contains(q)))
            .min_by(|a, b| a.sq_radius.cmp(&b.sq_radius))
            .expect("the full point set always admits an enclosing circle")
    }

    #[test]
    fn multiset_bookkeeping() {
        let c = Configuration::from_ints(&[(1, 0), (0, 0), (1, 0), (2, 2), (1, 0)]);
        assert_eq!(c.n(), 5);
        assert_eq!(c.m(), 3);
        assert_eq!(c.support(), &[p(0, 0), p(1, 0), p(2, 2)]);
        assert_eq!(c.multiplicity(&p(1, 0)), 3);
        assert_eq!(c.multiplicity(&p(0, 0)), 1);
        assert_eq!(c.multiplicity(&p(9, 9)), 0);
        assert!(c.contains(&p(2, 2)));
        assert!(!c.contains(&p(1, 1)));
        let pairs: Vec<(Point, usize)> = c
            .support_multiplicities()
            .map(|(q, m)| (q.clone(), m))
            .collect();
        assert_eq!(pairs, vec![(p(0, 0), 1), (p(1, 0), 3), (p(2, 2), 1)]);
    }

    #[test]
    fn equality_is_multiset_equality() {
        let a = Configuration::from_ints(&[(0, 0), (1, 1), (0, 0)]);
        let b = Configuration::from_ints(&[(1, 1), (0, 0), (0, 0)]);
        let c = Configuration::from_ints(&[(1, 1), (0, 0)]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(
            Configuration::new(vec![]).unwrap_err(),
            GeomError::EmptyConfiguration
        );
    }

    #[test]
    fn minus_one_semantics() {
        let c = Configuration::from_ints(&[(0, 0), (0, 0), (1, 1)]);
        let d = c.minus_one(&p(0, 0)).unwrap();
        assert_eq!(d, Configuration::from_ints(&[(0, 0), (1, 1)]));
        assert!(c.minus_one(&p(5, 5)).is_none());
        let single = Configuration::from_ints(&[(3, 3)]);
        assert!(single.minus_one(&p(3, 3)).is_none());
    }

    #[test]
    fn sec_simple_cases() {
        // Single point.
        let c1 = Configuration::from_ints(&[(4, -2), (4, -2)]);
        assert_eq!(*c1.sec(), Circle::point_circle(&p(4, -2)));
        // A pair: diameter circle.
        let c2 = Configuration::from_ints(&[(0, 0), (4, 0)]);
        assert_eq!(c2.sec().center, p(2, 0));
        assert_eq!(c2.sec().sq_radius, Scalar::from_int(4));
        // Obtuse triangle: the SEC is the diameter circle of the long side.
        let c3 = Configuration::from_ints(&[(0, 0), (10, 0), (5, 1)]);
        assert_eq!(c3.sec().center, p(5, 0));
        assert_eq!(c3.sec().sq_radius, Scalar::from_int(25));
        // Square: circumscribed circle.
        let c4 = Configuration::from_ints(&[(0, 0), (2, 0), (0, 2), (2, 2)]);
        assert_eq!(c4.sec().center, p(1, 1));
        assert_eq!(c4.sec().sq_radius, Scalar::from_int(2));
        // Right triangle: hypotenuse is the diameter.
        let c5 = Configuration::from_ints(&[(0, 0), (6, 0), (0, 8)]);
        assert_eq!(c5.sec().center, p(3, 4));
        assert_eq!(c5.sec().sq_radius, Scalar::from_int(25));
    }

    #[test]
    fn sec_matches_oracle_on_fixed_batch() {
        let batches: &[&[(i64, i64)]] = &[
            &[(0, 0), (1, 7), (-3, 2), (4, 4), (2, -5)],
            &[(0, 0), (8, 0), (4, 3), (4, -3), (4, 0)],
            &[(-5, -5), (5, 5), (5, -5), (-5, 5), (0, 0), (1, 2)],
            &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)],
            &[(3, 3), (3, 3), (3, 3)],
            &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (-1, -1), (3, 0)],
        ];
        for coords in batches {
            let cfg = Configuration::from_ints(coords);
            let got = cfg.sec();
            let want = sec_oracle(cfg.support());
            assert_eq!(got.center, want.center, "center for {coords:?}");
            assert_eq!(got.sq_radius, want.sq_radius, "radius for {coords:?}");
        }
    }

    #[test]
    fn circumscribe_collinear_falls_back() {
        let c = Circle::circumscribe(&p(0, 0), &p(2, 0), &p(5, 0));
        assert_eq!(c, Circle::diameter_circle(&p(0, 0), &p(5, 0)));
        assert!(c.contains(&p(2, 0)));
    }

    #[test]
    fn boundary_membership() {
        let c = Circle {
            center: p(0, 0),
            sq_radius: Scalar::from_int(25),
        };
        assert!(c.on_boundary(&p(3, 4)));
        assert!(c.contains(&p(3, 4)));
        assert!(c.contains(&p(1, 1)));
        assert!(!c.on_boundary(&p(1, 1)));
        assert!(!c.contains(&p(5, 1)));
    }

    #[test]
    fn linearity_and_min_distance() {
        assert!(is_linear(&Configuration::from_ints(&[(0, 0)])));
        assert!(is_linear(&Configuration::from_ints(&[(0, 0), (5, 5)])));
        assert!(is_linear(&Configuration::from_ints(&[
            (0, 0),
            (2, 1),
            (4, 2),
            (-2, -1)
        ])));
        assert!(!is_linear(&Configuration::from_ints(&[
            (0, 0),
            (2, 1),
            (4, 3)
        ])));

        let c = Configuration::from_ints(&[(0, 0), (5, 0), (5, 2), (9, 9)]);
        assert_eq!(min_pairwise_sq_distance(&c).unwrap(), Scalar::from_int(4));
        let single = Configuration::from_ints(&[(1, 1), (1, 1)]);
        assert!(matches!(
            min_pairwise_sq_distance(&single),
            Err(GeomError::TooFewPoints { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn diameter_is_max_pairwise() {
        let c = Configuration::from_ints(&[(0, 0), (3, 0), (0, 4), (1, 1)]);
        assert_eq!(*c.sq_diameter(), Scalar::from_int(25));
        let single = Configuration::from_ints(&[(7, 7)]);
        assert_eq!(*single.sq_diameter(), Scalar::zero());
    }

    #[test]
    fn translate_and_negate() {
        let c = Configuration::from_ints(&[(1, 2), (3, 4)]);
        let t = c.translate(&p(-1, -2));
        assert_eq!(t, Configuration::from_ints(&[(0, 0), (2, 2)]));
        let n = c.negate();
        assert_eq!(n, Configuration::from_ints(&[(-1, -2), (-3, -4)]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(160))]

        #[test]
        fn sec_matches_oracle(coords in prop::collection::vec((-8i64..=8, -8i64..=8), 1..=7)) {
            let cfg = Configuration::from_ints(&coords);
            let got = cfg.sec();
            let want = sec_oracle(cfg.support());
            prop_assert_eq!(&got.center, &want.center);
            prop_assert_eq!(&got.sq_radius, &want.sq_radius);
            // Every support point is enclosed.
            for q in cfg.support() {
                prop_assert!(got.contains(q));
            }
        }

        #[test]
        fn sec_invariant_under_input_order(coords in prop::collection::vec((-8i64..=8, -8i64..=8), 1..=7)) {
            let cfg = Configuration::from_ints(&coords);
            let mut rev = coords.clone();
            rev.reverse();
            let cfg2 = Configuration::from_ints(&rev);
            prop_assert_eq!(cfg.sec(), cfg2.sec());
        }
    }
}
