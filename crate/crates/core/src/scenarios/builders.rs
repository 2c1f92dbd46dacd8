//! The packaged constructions behind the scenario registry.
//!
//! Each builder assembles the exact swarm a solvability argument reasons
//! about: who stands where, with which frame, running which rule, crashed
//! when, driven by which scheduler — plus the claim the argument makes
//! about every execution of that swarm.

use super::{Expectation, Measure, Scenario, ScenarioError, DEFAULT_HORIZON};
use crate::engine::{
    Assignment, FaultPlan, GoalPredicate, LocalFrame, Robot, SchedulerKind, World,
};
use crate::geom::{Point, Scalar};
use crate::targets::TargetFunctionId;

fn bad(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::BadParameter(msg.into())
}

fn int_point(x: i64, y: i64) -> Point {
    Point::new(Scalar::from_int(x), Scalar::from_int(y))
}

fn as_u32(value: usize, what: &str) -> Result<u32, ScenarioError> {
    u32::try_from(value).map_err(|_| bad(format!("{what} is too large")))
}

/// Builds the world and the matching assignment record from one member list.
fn assemble(
    name: &str,
    members: Vec<(usize, LocalFrame, TargetFunctionId)>,
    faults: FaultPlan,
    scheduler: SchedulerKind,
    goal: GoalPredicate,
    expectation: Expectation,
) -> Result<Scenario, ScenarioError> {
    let assignment = Assignment::from_pairs(members.iter().map(|(id, _, tf)| (*id, *tf)));
    let robots = members
        .into_iter()
        .map(|(id, frame, tf)| Robot::new(id, frame, tf))
        .collect();
    let mut world = World::new(robots)?;
    world.apply_faults(&faults)?;
    Ok(Scenario::new(
        name,
        world,
        assignment,
        scheduler,
        faults,
        goal,
        expectation,
    ))
}

/// A swarm that provably cannot spread to `c` points: `n` robots stand on
/// one point with identical frames and share only `m < c` spreading rules.
///
/// Robots running the same rule are perfect clones — same view, same frame,
/// same destination — so they stay co-located forever and the swarm never
/// occupies more than `m` points.  The claim is that the support stays
/// strictly below `m + 1` at every instant.
pub fn scatter_lower_bound(c: usize, m: usize, n: usize) -> Result<Scenario, ScenarioError> {
    if c < 2 {
        return Err(bad("c must be at least 2; spreading to one point is vacuous"));
    }
    if m < 1 || m >= c {
        return Err(bad(format!("need 1 <= m < c, got m={m}, c={c}")));
    }
    if c > n {
        return Err(bad(format!("need c <= n, got c={c}, n={n}")));
    }
    let count = as_u32(c, "c")?;
    let members = (0..n)
        .map(|i| {
            let index = as_u32(i % m + 1, "m")?;
            Ok((
                i,
                LocalFrame::identity_at(Point::origin()),
                TargetFunctionId::Sct { index, count },
            ))
        })
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    assemble(
        "scatter_lower_bound",
        members,
        FaultPlan::none(),
        SchedulerKind::Fsync,
        GoalPredicate::ScatterAtLeast(c),
        Expectation::MustStayBelow(Measure::SupportSize, m + 1, DEFAULT_HORIZON),
    )
}

/// A balanced two-point swarm running a single gathering rule.
///
/// The rule prescribes staying put on balanced pairs (any other choice
/// breaks it elsewhere), so with every robot running the same rule the
/// configuration is a fixpoint: nobody ever moves.
pub fn bivalent_stasis(n: usize) -> Result<Scenario, ScenarioError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(bad(format!("need an even swarm of at least 4, got n={n}")));
    }
    let members = (0..n)
        .map(|i| {
            let position = if i < n / 2 {
                Point::origin()
            } else {
                int_point(2, 0)
            };
            (i, LocalFrame::identity_at(position), TargetFunctionId::TwoGat)
        })
        .collect();
    assemble(
        "bivalent_stasis",
        members,
        FaultPlan::none(),
        SchedulerKind::Fsync,
        GoalPredicate::GatherAtMost(1),
        Expectation::MustNotChange(DEFAULT_HORIZON),
    )
}

/// Two mirrored clone pairs that defeat any symmetric two-rule algorithm.
///
/// Four robots stand on a balanced pair, each point hosting one robot of
/// each rule.  Robots 0 and 1 share one frame; robots 2 and 3 share that
/// frame rotated by a half turn, so the two sides see literally identical
/// observations.  One rule holds its ground on balanced pairs, the other
/// walks onto the partner point — and because both are symmetric, every
/// synchronized round swaps the walkers and reproduces the same multiset.
/// The swarm is live (robots keep moving) yet the configuration never
/// changes, so it never gathers.
pub fn clone_symmetric_failure() -> Scenario {
    let left = int_point(-1, 0);
    let right = int_point(1, 0);
    let members = vec![
        (0, LocalFrame::identity_at(left.clone()), TargetFunctionId::TwoGat),
        (1, LocalFrame::identity_at(right.clone()), TargetFunctionId::TwoGat),
        (
            2,
            LocalFrame::identity_at(left).half_turned(),
            TargetFunctionId::SwapGat,
        ),
        (
            3,
            LocalFrame::identity_at(right).half_turned(),
            TargetFunctionId::SwapGat,
        ),
    ];
    assemble(
        "clone_symmetric_failure",
        members,
        FaultPlan::none(),
        // The argument needs clone partners activated together; one scripted
        // set holding everyone replays the synchronized schedule it cites.
        SchedulerKind::Scripted(vec![vec![0, 1, 2, 3]]),
        GoalPredicate::GatherAtMost(1),
        Expectation::MustNotChange(DEFAULT_HORIZON),
    )
    .expect("the fixed four-robot construction is always valid")
}

/// A crash pattern that defeats `f + 1` spreading rules: everyone starts on
/// one point, and the `f` robots holding the rules that would move are
/// crashed before the first slot.
///
/// The surviving robots all hold the one rule that stays put on a singleton
/// observation, so the support never reaches two points.  One more rule in
/// the mix would survive the crashes and break out (see the tests).
pub fn crash_scatter_lower_bound(f: usize, n: usize) -> Result<Scenario, ScenarioError> {
    if f < 1 {
        return Err(bad("need at least one crash; f=0 leaves a live mover"));
    }
    if f >= n {
        return Err(bad(format!("need f <= n-1, got f={f}, n={n}")));
    }
    let count = as_u32(f + 2, "f")?;
    let members = (0..n)
        .map(|i| {
            let index = if i < f { as_u32(i + 2, "f")? } else { 1 };
            Ok((
                i,
                LocalFrame::identity_at(Point::origin()),
                TargetFunctionId::Sct { index, count },
            ))
        })
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    let mut faults = FaultPlan::none();
    for id in 0..f {
        faults = faults.crash(id, 0);
    }
    assemble(
        "crash_scatter_lower_bound",
        members,
        faults,
        SchedulerKind::Fsync,
        GoalPredicate::ScatterAtLeast(2),
        Expectation::MustStayBelow(Measure::SupportSize, 2, DEFAULT_HORIZON),
    )
}

/// The endgame that separates gathering the survivors from gathering
/// everyone: `n - 1` robots stand together, the straggler is crashed.
///
/// Every live robot's destination is the heavy point it already occupies,
/// and the crashed robot cannot move, so the configuration is a fixpoint:
/// the survivors are gathered from the start, but all `n` robots never
/// share a point.
pub fn fgp_crash_stuck(n: usize) -> Result<Scenario, ScenarioError> {
    if n < 3 {
        return Err(bad(format!(
            "need n >= 3 so the heavy point outweighs the straggler, got n={n}"
        )));
    }
    let members = (0..n)
        .map(|i| {
            let position = if i < n - 1 {
                Point::origin()
            } else {
                int_point(4, 0)
            };
            (i, LocalFrame::identity_at(position), TargetFunctionId::TwoGat)
        })
        .collect();
    assemble(
        "fgp_crash_stuck",
        members,
        FaultPlan::none().crash(n - 1, 0),
        SchedulerKind::Fsync,
        GoalPredicate::GatherAllAtMost(1),
        Expectation::MustNotChange(DEFAULT_HORIZON),
    )
}
