//! Exact-arithmetic simulation kit for swarms of anonymous, oblivious mobile
//! robots operating in look-compute-move cycles under a semi-synchronous
//! scheduler.
//!
//! The library is organized in layers:
//!
//! * [`geom`] — rational scalars and points, smallest enclosing circles,
//!   deterministic square-root approximation, similarity detection;
//! * [`symmetry`] — rotational symmetry of point multisets, orbit structure,
//!   observer-relative views and the induced point order;
//! * [`targets`] — the target functions robots compute: scattering,
//!   gathering (plain and symmetric), and pattern formation;
//! * [`engine`] — robots, local frames, schedulers, fault plans, and the
//!   execution loop producing replayable traces;
//! * [`scenarios`] — packaged worlds with machine-checked expectations that
//!   reconstruct the boundary cases separating solvable from unsolvable.
//!
//! All coordinates are arbitrary-precision rationals; square roots are the
//! only approximate quantity and are produced by a deterministic, monotone
//! grid rounding so identical inputs yield identical executions everywhere.

// Error payloads carry arbitrary-precision points and descriptive strings;
// they sit on cold paths, so keeping them inline beats boxing every variant.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod engine;
pub mod geom;
pub mod scenarios;
pub mod symmetry;
pub mod targets;

pub use engine::{
    canonical_assignments, check_goal, enumerate_assignments, lambda, make_scheduler, run,
    validate_assignment, Assignment, EngineError, ExecutionTrace, FaultPlan, GoalPredicate,
    LambdaTriple, LocalFrame, Robot, Scheduler, SchedulerKind, TraceStep, Verdict, World,
};
pub use geom::{
    angle_cmp, is_linear, is_similar, min_pairwise_sq_distance, smallest_enclosing_circle,
    sq_dist, sqrt_approx, Circle, Configuration, GeomError, Point, Scalar, SimilarityTransform,
    ToleranceConfig,
};
pub use scenarios::{
    bivalent_stasis, build_scenario, clone_symmetric_failure, crash_scatter_lower_bound,
    expectation_holds, fgp_crash_stuck, scatter_lower_bound, scenario_registry, Expectation,
    Measure, Scenario, ScenarioError, ScenarioInfo, ScenarioOutcome,
};
pub use symmetry::{
    center_multiplicity, compare_points, largest_point, orbits, order_key, rotation_order,
    symmetricity, view, OrbitPartition, PointOrderKey, SymmetryError, View,
};
pub use targets::{
    choose_completion, evaluate, gat, is_bivalent, is_good, pf, sct, sct_star, sgat, swap_gat,
    two_gat, GoodDecomposition, TargetError, TargetFunctionId,
};
