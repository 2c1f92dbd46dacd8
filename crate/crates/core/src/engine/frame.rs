//! Per-robot local coordinate frames.
//!
//! Every robot carries a private right-handed similarity frame: an exact
//! rational rotation (stored as a cosine/sine pair on the unit circle), a
//! positive scale, and the robot's current global position as the frame
//! origin. The Look phase expresses the global position multiset in this
//! frame; the Move phase maps the computed destination back out of it.
//! Rotation and scale never change over a robot's lifetime — only the
//! origin follows the robot around.

use crate::geom::{Configuration, Point, Scalar};

use super::EngineError;

/// A robot's private coordinate frame: a right-handed similarity of the
/// plane anchored at the robot's position.
///
/// A global point `q` appears locally as `R(−θ) · (q − position) / scale`,
/// so one local unit spans `scale` global units and the robot itself always
/// sits at the local origin. Rotations are kept as an exact `(cos θ, sin θ)`
/// pair with `cos²θ + sin²θ = 1`; [`LocalFrame::from_param`] produces such
/// pairs from a single rational parameter, densely covering the circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFrame {
    cos: Scalar,
    sin: Scalar,
    scale: Scalar,
    position: Point,
}

impl LocalFrame {
    /// The axis-aligned unit frame at `position`.
    pub fn identity_at(position: Point) -> LocalFrame {
        LocalFrame {
            cos: Scalar::one(),
            sin: Scalar::zero(),
            scale: Scalar::one(),
            position,
        }
    }

    /// Builds a frame whose rotation is the rational-circle point
    /// `(cos θ, sin θ) = ((1 − t²)/(1 + t²), 2t/(1 + t²))`.
    ///
    /// Every rational `t` yields an exactly representable rotation; the map
    /// covers the whole circle densely (only the half turn itself is out of
    /// reach, see [`LocalFrame::half_turned`]).
    pub fn from_param(t: &Scalar, scale: Scalar, position: Point) -> Result<LocalFrame, EngineError> {
        let t2 = t.sq();
        let den = &Scalar::one() + &t2;
        let cos = &(&Scalar::one() - &t2) / &den;
        let sin = &(&Scalar::from_int(2) * t) / &den;
        LocalFrame::from_rotation(cos, sin, scale, position)
    }

    /// Builds a frame from an explicit rotation pair, validating that it
    /// lies exactly on the unit circle and that the scale is positive.
    pub fn from_rotation(
        cos: Scalar,
        sin: Scalar,
        scale: Scalar,
        position: Point,
    ) -> Result<LocalFrame, EngineError> {
        if &cos.sq() + &sin.sq() != Scalar::one() {
            return Err(EngineError::BadFrame(format!(
                "rotation ({cos}, {sin}) is not on the unit circle"
            )));
        }
        if !scale.is_positive() {
            return Err(EngineError::BadFrame(format!(
                "scale must be positive, got {scale}"
            )));
        }
        Ok(LocalFrame {
            cos,
            sin,
            scale,
            position,
        })
    }

    /// The same frame rotated by a half turn (both axes reversed). This is
    /// the one rotation [`LocalFrame::from_param`] cannot reach.
    pub fn half_turned(&self) -> LocalFrame {
        LocalFrame {
            cos: -&self.cos,
            sin: -&self.sin,
            scale: self.scale.clone(),
            position: self.position.clone(),
        }
    }

    /// The rotation as its exact `(cos θ, sin θ)` pair.
    pub fn rotation(&self) -> (&Scalar, &Scalar) {
        (&self.cos, &self.sin)
    }

    /// Global length of one local unit.
    pub fn scale(&self) -> &Scalar {
        &self.scale
    }

    /// The frame origin — the robot's current global position.
    pub fn position(&self) -> &Point {
        &self.position
    }

    pub(crate) fn set_position(&mut self, position: Point) {
        self.position = position;
    }

    /// Expresses a global point in this frame: translate by `−position`,
    /// rotate by `−θ`, divide by the scale.
    pub fn to_local(&self, global: &Point) -> Point {
        let v = global - &self.position;
        let x = &(&v.x * &self.cos) + &(&v.y * &self.sin);
        let y = &(&v.y * &self.cos) - &(&v.x * &self.sin);
        Point::new(&x / &self.scale, &y / &self.scale)
    }

    /// Maps a local point back to global coordinates; inverse of
    /// [`LocalFrame::to_local`].
    pub fn to_global(&self, local: &Point) -> Point {
        let sx = &local.x * &self.scale;
        let sy = &local.y * &self.scale;
        let x = &(&sx * &self.cos) - &(&sy * &self.sin);
        let y = &(&sx * &self.sin) + &(&sy * &self.cos);
        &self.position + &Point::new(x, y)
    }

    /// The Look phase: the whole position multiset re-expressed in this
    /// frame. When the robot's own position is part of the multiset, the
    /// result contains the origin.
    pub fn observe(&self, config: &Configuration) -> Configuration {
        let points = config.points().iter().map(|p| self.to_local(p)).collect();
        Configuration::new(points).expect("observing a nonempty multiset yields a nonempty multiset")
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn quarter_turn_scaled_observation() {
        // t = 1 encodes a quarter turn; scale 2 halves observed lengths.
        let frame = LocalFrame::from_param(
            &Scalar::one(),
            Scalar::from_int(2),
            pt(5, 5),
        )
        .unwrap();
        assert_eq!(frame.rotation(), (&Scalar::zero(), &Scalar::one()));
        let config = Configuration::from_ints(&[(5, 5), (7, 5)]);
        let seen = frame.observe(&config);
        assert_eq!(
            seen.points(),
            &[Point::new(Scalar::zero(), Scalar::from_int(-1)), Point::origin()]
        );
    }

    #[test]
    fn identity_frame_observes_verbatim() {
        let frame = LocalFrame::identity_at(Point::origin());
        let config = Configuration::from_ints(&[(0, 0), (1, 2)]);
        assert_eq!(frame.observe(&config).points(), config.points());
    }

    #[test]
    fn half_turn_reverses_axes() {
        let frame = LocalFrame::identity_at(pt(3, 4)).half_turned();
        assert_eq!(frame.to_global(&pt(1, 0)), pt(2, 4));
        assert_eq!(frame.to_local(&pt(2, 4)), pt(1, 0));
        assert_eq!(
            &frame.rotation().0.sq() + &frame.rotation().1.sq(),
            Scalar::one()
        );
    }

    #[test]
    fn rejects_degenerate_frames() {
        assert!(LocalFrame::from_rotation(
            Scalar::one(),
            Scalar::one(),
            Scalar::one(),
            Point::origin()
        )
        .is_err());
        assert!(LocalFrame::from_param(&Scalar::zero(), Scalar::zero(), Point::origin()).is_err());
        assert!(
            LocalFrame::from_param(&Scalar::zero(), Scalar::from_int(-1), Point::origin()).is_err()
        );
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-40i64..40, 1i64..8).prop_map(|(n, d)| Scalar::ratio(n, d))
    }

    proptest! {
        #[test]
        fn param_rotations_stay_on_unit_circle(t in arb_scalar()) {
            let frame = LocalFrame::from_param(&t, Scalar::one(), Point::origin()).unwrap();
            let (c, s) = frame.rotation();
            prop_assert_eq!(&c.sq() + &s.sq(), Scalar::one());
        }

        #[test]
        fn local_global_round_trip(
            t in arb_scalar(),
            sn in 1i64..30, sd in 1i64..30,
            px in -20i64..20, py in -20i64..20,
            qx in -20i64..20, qy in -20i64..20,
        ) {
            let frame = LocalFrame::from_param(
                &t,
                Scalar::ratio(sn, sd),
                Point::from_ints(px, py),
            ).unwrap();
            let q = Point::from_ints(qx, qy);
            prop_assert_eq!(frame.to_global(&frame.to_local(&q)), q.clone());
            prop_assert_eq!(frame.to_local(&frame.to_global(&q)), q);
        }

        #[test]
        fn observation_always_contains_the_origin(
            t in arb_scalar(),
            sn in 1i64..30, sd in 1i64..30,
            px in -20i64..20, py in -20i64..20,
            others in proptest::collection::vec((-20i64..20, -20i64..20), 1..6),
        ) {
            let position = Point::from_ints(px, py);
            let frame = LocalFrame::from_param(&t, Scalar::ratio(sn, sd), position.clone()).unwrap();
            let mut points = vec![position];
            points.extend(others.iter().map(|&(x, y)| Point::from_ints(x, y)));
            let config = Configuration::new(points).unwrap();
            prop_assert!(frame.observe(&config).contains(&Point::origin()));
        }
    }
}
