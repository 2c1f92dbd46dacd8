//! Deterministic input builders shared by the benchmark targets.
//!
//! Every builder is seeded so repeated benchmark runs measure the same
//! workload; none of them touch global state.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use swarmkit_core::engine::{GoalPredicate, LocalFrame, Robot, World};
use swarmkit_core::geom::{Configuration, Point, Scalar};
use swarmkit_core::targets::TargetFunctionId;

/// Distinct random integer points drawn from `[-span, span]^2`.
pub fn int_points(seed: u64, n: usize, span: i64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::from_ints(rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        if !points.contains(&p) {
            points.push(p);
        }
    }
    points
}

/// A configuration of distinct random integer points.
pub fn int_config(seed: u64, n: usize, span: i64) -> Configuration {
    Configuration::new(int_points(seed, n, span)).expect("non-empty point set")
}

/// A configuration closed under quarter turns about the origin.
///
/// Each base point contributes its whole 4-element rotation orbit, so the
/// result has rotational symmetry of order (at least) 4. `rings` base
/// points yield `4 * rings` points.
pub fn quarter_symmetric_config(rings: usize) -> Configuration {
    let mut points = Vec::with_capacity(4 * rings);
    for i in 0..rings {
        let (x, y) = (3 + 2 * i as i64, 1 + i as i64);
        points.push(Point::from_ints(x, y));
        points.push(Point::from_ints(-y, x));
        points.push(Point::from_ints(-x, -y));
        points.push(Point::from_ints(y, -x));
    }
    Configuration::new(points).expect("non-empty point set")
}

/// The image of `config` under a fixed orientation-preserving similarity:
/// rotation by the rational angle with cosine 3/5, uniform scale 2, then a
/// translation. Useful for exercising similarity detection on a true match.
pub fn similar_copy(config: &Configuration) -> Configuration {
    let (cos, sin) = (Scalar::ratio(3, 5), Scalar::ratio(4, 5));
    let scale = Scalar::from_int(2);
    let shift = Point::from_ints(7, -3);
    let mut points = Vec::new();
    for p in config.points() {
        let rotated = Point::new(&cos * &p.x - &sin * &p.y, &sin * &p.x + &cos * &p.y);
        points.push(rotated.scale(&scale) + shift.clone());
    }
    Configuration::new(points).expect("non-empty point set")
}

/// A world of `n` robots at random integer positions, each running the
/// gather-everything rule in its own random local frame, paired with the
/// goal of ending on a single point.
pub fn gather_world(seed: u64, n: usize) -> (World, GoalPredicate) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = int_points(seed.wrapping_add(1), n, 8);
    let tf: TargetFunctionId = "2gat".parse().expect("valid rule name");
    let mut robots = Vec::with_capacity(n);
    for (id, position) in points.into_iter().enumerate() {
        let frame = random_frame(&mut rng, position);
        robots.push(Robot::new(id, frame, tf.clone()));
    }
    let world = World::new(robots).expect("valid robot set");
    (world, GoalPredicate::GatherAtMost(1))
}

fn random_frame(rng: &mut ChaCha8Rng, position: Point) -> LocalFrame {
    let t = Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9));
    let scale = Scalar::ratio(rng.gen_range(1..=5), rng.gen_range(1..=3));
    let frame = LocalFrame::from_param(&t, scale, position).expect("positive scale");
    if rng.gen_ratio(1, 4) {
        frame.half_turned()
    } else {
        frame
    }
}
