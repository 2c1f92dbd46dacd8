//! World state, local frames, the semi-synchronous step rule, schedulers,
//! crash faults, assignment plumbing, goal predicates, and executions.
//!
//! The simulation advances in discrete slots. In each slot a scheduler
//! picks a set of robots; every picked, non-crashed robot observes the
//! *same* position multiset through its own private frame, feeds the
//! observation to its assigned target function, and moves rigidly to the
//! computed destination — all landings happen atomically at the end of
//! the slot. Everyone else stays put. Because destinations depend only on
//! the shared snapshot, the result of a slot is independent of any
//! ordering among the activated robots, and a state where every robot's
//! destination equals its position is a permanent fixpoint.
//!
//! [`run`] drives a world under a scheduler until a goal predicate holds,
//! such a fixpoint is detected, or a step budget runs out, recording an
//! exact, replayable [`ExecutionTrace`].

mod assignment;
mod frame;
mod run;
mod scheduler;
mod world;

pub use assignment::{
    canonical_assignments, enumerate_assignments, validate_assignment, Assignment, FaultPlan,
};
pub use frame::LocalFrame;
pub use run::{run, ExecutionTrace, TraceStep, Verdict};
pub use scheduler::{make_scheduler, Scheduler, SchedulerKind};
pub use world::{Robot, World};

use crate::geom::{is_similar, Configuration, GeomError, ToleranceConfig};
use crate::symmetry::{center_multiplicity, largest_point, rotation_order, SymmetryError};
use crate::targets::TargetError;

/// Errors from world construction, scheduling, and execution.
#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    /// A world needs at least one robot.
    #[error("a world needs at least one robot")]
    EmptySwarm,
    /// Two robots were given the same id.
    #[error("duplicate robot id {0}")]
    DuplicateRobotId(usize),
    /// An id does not name any robot of the world.
    #[error("no robot with id {0}")]
    UnknownRobot(usize),
    /// A frame's rotation pair or scale is invalid.
    #[error("invalid frame: {0}")]
    BadFrame(String),
    /// Scheduler parameters out of range.
    #[error("invalid scheduler: {0}")]
    BadScheduler(String),
    /// Executions need a step budget of at least one.
    #[error("horizon must be at least 1")]
    BadHorizon,
    /// The assignment is not a valid surjection setup.
    #[error("invalid assignment: {0}")]
    BadAssignment(String),
    /// A serialized trace did not parse.
    #[error("malformed trace: {0}")]
    BadTrace(String),
    /// A target function failed.
    #[error(transparent)]
    Target(#[from] TargetError),
    /// An underlying geometric operation failed.
    #[error(transparent)]
    Geometry(#[from] GeomError),
    /// An underlying symmetry computation failed.
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// Lexicographically ordered progress measure of a configuration, used by
/// the gathering analyses: rotation order, support size, and the negated
/// multiplicity of the pivot point.
///
/// The pivot is the whole swarm when only one point is occupied, the
/// top-ranked support point when the rotation order is 1, and the center
/// of the enclosing circle otherwise. Gathering progress shows up as a
/// strict lexicographic decrease.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaTriple {
    /// Rotation order of the support about the enclosing-circle center.
    pub k: usize,
    /// Number of distinct occupied points.
    pub m: usize,
    /// Negated multiplicity of the pivot point.
    pub neg_mu: i64,
}

/// Computes the [`LambdaTriple`] progress measure of a configuration.
pub fn lambda(config: &Configuration, tol: &ToleranceConfig) -> Result<LambdaTriple, EngineError> {
    let k = rotation_order(config, tol);
    let m = config.m();
    let mu = if m == 1 {
        config.n()
    } else if k == 1 {
        let top = largest_point(config, tol)?;
        config.multiplicity(&top)
    } else {
        center_multiplicity(config, tol)
    };
    Ok(LambdaTriple {
        k,
        m,
        neg_mu: -(mu as i64),
    })
}

/// A machine-checkable success condition on a world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalPredicate {
    /// At least this many distinct occupied points.
    ScatterAtLeast(usize),
    /// At most this many distinct occupied points.
    GatherAtMost(usize),
    /// Every robot that has not crashed sits on one common point.
    GatherNonFaulty,
    /// The configuration is similar to the given pattern.
    PatternSimilar(Configuration),
    /// At most this many distinct occupied points, crashed robots
    /// included — strictly harder than [`GoalPredicate::GatherNonFaulty`]
    /// once somebody has crashed away from the pack.
    GatherAllAtMost(usize),
}

/// Evaluates a goal on the current configuration and crash flags.
pub fn check_goal(
    goal: &GoalPredicate,
    world: &World,
    tol: &ToleranceConfig,
) -> Result<bool, EngineError> {
    Ok(match goal {
        GoalPredicate::ScatterAtLeast(c) => world.config().m() >= *c,
        GoalPredicate::GatherAtMost(c) | GoalPredicate::GatherAllAtMost(c) => {
            world.config().m() <= *c
        }
        GoalPredicate::GatherNonFaulty => {
            let mut alive = world
                .robots()
                .iter()
                .filter(|r| !r.is_crashed_at(world.time()));
            match alive.next() {
                None => true,
                Some(first) => alive.all(|r| r.position() == first.position()),
            }
        }
        GoalPredicate::PatternSimilar(pattern) => {
            let config = world.config();
            pattern.n() == config.n() && is_similar(&config, pattern, tol)?.is_some()
        }
    })
}
