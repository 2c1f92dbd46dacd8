//! Orientation-preserving similarity transforms and similarity detection.

use super::{sq_dist, Configuration, GeomError, Point, Scalar, ToleranceConfig};

/// An orientation-preserving similarity of the plane: rotation and uniform
/// scaling followed by a translation.
///
/// The linear part is stored as the exact pair `(a, b)` acting as
/// `p ↦ (a·pₓ − b·p_y, b·pₓ + a·p_y)`; the squared scale factor is
/// `a² + b²`. Reflections are deliberately not representable: observers
/// share a handedness, so mirrored shapes are *not* equivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityTransform {
    a: Scalar,
    b: Scalar,
    translation: Point,
}

impl SimilarityTransform {
    /// Builds a transform from its linear part `(a, b)` and translation.
    ///
    /// Errors if `a = b = 0`, which would collapse the plane.
    pub fn new(a: Scalar, b: Scalar, translation: Point) -> Result<Self, GeomError> {
        if a.is_zero() && b.is_zero() {
            return Err(GeomError::DegenerateTransform);
        }
        Ok(SimilarityTransform { a, b, translation })
    }

    /// The identity transform.
    pub fn identity() -> Self {
        SimilarityTransform {
            a: Scalar::one(),
            b: Scalar::zero(),
            translation: Point::origin(),
        }
    }

    /// A pure translation by `v`.
    pub fn translation_by(v: Point) -> Self {
        SimilarityTransform {
            a: Scalar::one(),
            b: Scalar::zero(),
            translation: v,
        }
    }

    /// The linear coefficients `(a, b)`.
    pub fn linear(&self) -> (&Scalar, &Scalar) {
        (&self.a, &self.b)
    }

    /// The translation component.
    pub fn translation(&self) -> &Point {
        &self.translation
    }

    /// The squared scale factor `a² + b²` (exact).
    pub fn sq_scale(&self) -> Scalar {
        self.a.sq() + self.b.sq()
    }

    /// Applies the transform to a point.
    pub fn apply(&self, p: &Point) -> Point {
        Point::new(
            &self.a * &p.x - &self.b * &p.y + &self.translation.x,
            &self.b * &p.x + &self.a * &p.y + &self.translation.y,
        )
    }

    /// Applies the transform to every point of a configuration.
    pub fn apply_config(&self, config: &Configuration) -> Configuration {
        Configuration::new(config.points().iter().map(|p| self.apply(p)).collect())
            .expect("transforms preserve nonemptiness")
    }

    /// The inverse transform (exact).
    pub fn inverse(&self) -> SimilarityTransform {
        let s = self.sq_scale();
        let ia = &self.a / &s;
        let ib = -(&self.b / &s);
        let tx = -(&ia * &self.translation.x - &ib * &self.translation.y);
        let ty = -(&ib * &self.translation.x + &ia * &self.translation.y);
        SimilarityTransform {
            a: ia,
            b: ib,
            translation: Point::new(tx, ty),
        }
    }
}

/// Searches for an orientation-preserving similarity `T` with
/// `T(reference) = config` as multisets.
///
/// Returns the first transform found in a deterministic candidate order, or
/// `None` when the configurations are not similar. Errors when the two
/// multisets have different total sizes.
///
/// The search anchors on a farthest pair of the reference support: any
/// similarity must map it to a pair of points in `config` at the scaled
/// distance, and the scale is forced by the ratio of the smallest enclosing
/// circles. Each candidate image pair determines the full transform by
/// exact linear algebra, which is then verified point by point. Matching is
/// exact for exact inputs; a relative tolerance of `rel_eps` times the
/// diameter absorbs inputs that are rational approximations.
pub fn is_similar(
    config: &Configuration,
    reference: &Configuration,
    tol: &ToleranceConfig,
) -> Result<Option<SimilarityTransform>, GeomError> {
    if config.n() != reference.n() {
        return Err(GeomError::SizeMismatch(config.n(), reference.n()));
    }
    // Degenerate case: all points coincide.
    if reference.m() == 1 {
        if config.m() == 1 {
            let v = &config.support()[0] - &reference.support()[0];
            return Ok(Some(SimilarityTransform::translation_by(v)));
        }
        return Ok(None);
    }
    if config.m() == 1 {
        return Ok(None);
    }

    let g = reference.support();
    // Anchor: lexicographically first farthest pair of the reference.
    let (mut a1, mut a2) = (&g[0], &g[1]);
    let mut best = sq_dist(a1, a2);
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            let d = sq_dist(&g[i], &g[j]);
            if d > best {
                best = d;
                a1 = &g[i];
                a2 = &g[j];
            }
        }
    }
    let anchor_sq = best;
    let v = a2 - a1;
    let v_sq = v.sq_norm();

    // The scale is forced by the enclosing circles.
    let sq_ratio = &config.sec().sq_radius / &reference.sec().sq_radius;
    let target_sq = &sq_ratio * &anchor_sq;
    let pair_tol = tol.rel_eps() * config.sq_diameter();
    let point_tol = tol.rel_eps().sq() * config.sq_diameter();

    let p = config.support();
    for i in 0..p.len() {
        for j in 0..p.len() {
            if i == j {
                continue;
            }
            let (b1, b2) = (&p[i], &p[j]);
            if (sq_dist(b1, b2) - &target_sq).abs() > pair_tol {
                continue;
            }
            let w = b2 - b1;
            let la = v.dot(&w) / &v_sq;
            let lb = v.cross(&w) / &v_sq;
            let lin = SimilarityTransform {
                a: la,
                b: lb,
                translation: Point::origin(),
            };
            let shift = b1 - &lin.apply(a1);
            let cand = SimilarityTransform {
                translation: shift,
                ..lin
            };
            if multisets_match(&cand.apply_config(reference), config, &point_tol) {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

/// Whether two same-size sorted multisets agree elementwise within a
/// squared distance tolerance.
fn multisets_match(a: &Configuration, b: &Configuration, sq_tol: &Scalar) -> bool {
    a.points()
        .iter()
        .zip(b.points())
        .all(|(x, y)| &sq_dist(x, y) <= sq_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tolc() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn cfg(coords: &[(i64, i64)]) -> Configuration {
        Configuration::from_ints(coords)
    }

    #[test]
    fn apply_and_inverse_round_trip() {
        let t = SimilarityTransform::new(
            Scalar::ratio(3, 5),
            Scalar::ratio(4, 5),
            Point::from_ints(2, -1),
        )
        .unwrap();
        assert_eq!(t.sq_scale(), Scalar::one());
        let p = Point::from_ints(7, 3);
        let q = t.apply(&p);
        assert_eq!(t.inverse().apply(&q), p);
        let c = cfg(&[(0, 0), (1, 0), (0, 2)]);
        assert_eq!(t.inverse().apply_config(&t.apply_config(&c)), c);
    }

    #[test]
    fn degenerate_transform_rejected() {
        assert_eq!(
            SimilarityTransform::new(Scalar::zero(), Scalar::zero(), Point::origin()),
            Err(GeomError::DegenerateTransform)
        );
    }

    #[test]
    fn detects_translated_copy() {
        let g = cfg(&[(0, 0), (2, 0), (1, 3)]);
        let p = cfg(&[(10, -5), (12, -5), (11, -2)]);
        let t = is_similar(&p, &g, &tolc()).unwrap().unwrap();
        assert_eq!(t.apply_config(&g), p);
        assert_eq!(t.sq_scale(), Scalar::one());
    }

    #[test]
    fn detects_rotated_scaled_copy() {
        let g = cfg(&[(0, 0), (2, 0), (0, 2), (2, 2)]);
        // Rotate 90° counterclockwise, scale by 3, translate by (5, 7).
        let rot = SimilarityTransform::new(Scalar::zero(), Scalar::from_int(3), Point::from_ints(5, 7)).unwrap();
        let p = rot.apply_config(&g);
        let found = is_similar(&p, &g, &tolc()).unwrap().unwrap();
        assert_eq!(found.apply_config(&g), p);
        assert_eq!(found.sq_scale(), Scalar::from_int(9));
    }

    #[test]
    fn respects_multiplicities() {
        // Right triangle with the doubled point at the right-angle vertex.
        let g = cfg(&[(0, 0), (0, 0), (4, 0), (0, 3)]);
        let yes = cfg(&[(10, 10), (10, 10), (10, 18), (4, 10)]);
        assert!(is_similar(&yes, &g, &tolc()).unwrap().is_some());
        // Same support shape but the doubled point is at an acute vertex.
        let no = cfg(&[(0, 0), (4, 0), (4, 0), (0, 3)]);
        assert!(is_similar(&no, &g, &tolc()).unwrap().is_none());
    }

    #[test]
    fn mirror_images_are_not_similar() {
        // A chiral quadrilateral and its mirror image.
        let g = cfg(&[(0, 0), (4, 0), (4, 1), (1, 3)]);
        let mirrored = Configuration::new(
            g.points()
                .iter()
                .map(|q| Point::new(-&q.x, q.y.clone()))
                .collect(),
        )
        .unwrap();
        assert!(is_similar(&g, &g, &tolc()).unwrap().is_some());
        assert!(is_similar(&mirrored, &g, &tolc()).unwrap().is_none());
    }

    #[test]
    fn all_coincident_cases() {
        let g = cfg(&[(1, 1), (1, 1), (1, 1)]);
        let p = cfg(&[(-2, 4), (-2, 4), (-2, 4)]);
        let t = is_similar(&p, &g, &tolc()).unwrap().unwrap();
        assert_eq!(t.apply_config(&g), p);
        let spread = cfg(&[(0, 0), (0, 0), (1, 0)]);
        assert!(is_similar(&spread, &g, &tolc()).unwrap().is_none());
        assert!(is_similar(&p, &spread, &tolc()).unwrap().is_none());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = cfg(&[(0, 0), (1, 0)]);
        let p = cfg(&[(0, 0), (1, 0), (2, 0)]);
        assert_eq!(
            is_similar(&p, &g, &tolc()).unwrap_err(),
            GeomError::SizeMismatch(3, 2)
        );
    }

    #[test]
    fn dissimilar_shapes_rejected() {
        let g = cfg(&[(0, 0), (4, 0), (0, 4)]);
        let p = cfg(&[(0, 0), (4, 0), (1, 4)]);
        assert!(is_similar(&p, &g, &tolc()).unwrap().is_none());
    }

    fn arb_transform() -> impl Strategy<Value = SimilarityTransform> {
        (
            -4i64..=4,
            -4i64..=4,
            1i64..=3,
            -6i64..=6,
            -6i64..=6,
        )
            .prop_filter_map("nonzero linear part", |(a, b, den, tx, ty)| {
                if a == 0 && b == 0 {
                    return None;
                }
                Some(
                    SimilarityTransform::new(
                        Scalar::ratio(a, den),
                        Scalar::ratio(b, den),
                        Point::new(Scalar::from_int(tx), Scalar::from_int(ty)),
                    )
                    .expect("nonzero"),
                )
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn transformed_copies_are_recognized(
            coords in prop::collection::vec((-6i64..=6, -6i64..=6), 1..=6),
            t in arb_transform(),
        ) {
            let g = Configuration::from_ints(&coords);
            let p = t.apply_config(&g);
            let found = is_similar(&p, &g, &tolc()).unwrap();
            // Some similarity must be found, and it must reproduce p
            // exactly (not necessarily equal to t when g is symmetric).
            let found = found.expect("a planted similarity must be detected");
            prop_assert_eq!(found.apply_config(&g), p);
        }

        #[test]
        fn inverse_composes_to_identity(
            q in (-9i64..=9, -9i64..=9),
            t in arb_transform(),
        ) {
            let p = Point::from_ints(q.0, q.1);
            prop_assert_eq!(t.inverse().apply(&t.apply(&p)), p);
        }
    }
}
