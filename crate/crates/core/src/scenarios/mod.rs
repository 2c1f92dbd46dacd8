//! Packaged executions that witness solvability boundaries.
//!
//! Each scenario bundles a fully assembled world (robots, frames, target
//! functions, crash plan), a scheduler, a goal, and a machine-checkable
//! [`Expectation`] about the resulting trace.  The negative constructions
//! (a swarm that provably cannot spread, a balanced pair that no single
//! rule escapes, a crash that pins everyone forever) check their claim over
//! a finite horizon; that is conclusive because every one of them either
//! reaches a fixpoint — permanent by construction — or repeats with a short
//! period well inside the horizon.
//!
//! Builders take nothing but plain integer parameters and use no randomness,
//! so a scenario is bit-for-bit reproducible from its name and parameters.

mod builders;

pub use builders::{
    bivalent_stasis, clone_symmetric_failure, crash_scatter_lower_bound, fgp_crash_stuck,
    scatter_lower_bound,
};

use std::collections::BTreeMap;
use std::fmt;

use crate::engine::{
    make_scheduler, run, Assignment, EngineError, ExecutionTrace, FaultPlan, GoalPredicate,
    SchedulerKind, Verdict, World,
};
use crate::geom::{Point, ToleranceConfig};

/// Errors from building or running a scenario.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    /// No registered scenario has this name.
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    /// A parameter is missing, unknown, or outside the valid range.
    #[error("bad scenario parameter: {0}")]
    BadParameter(String),
    /// The underlying execution failed.
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A quantity of a configuration that an expectation can bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Number of distinct occupied points.
    SupportSize,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::SupportSize => write!(f, "support size"),
        }
    }
}

/// What a scenario claims about its execution trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    /// The goal holds at some time no later than the horizon.
    MustReach(u64),
    /// The configuration (as a multiset of points) equals the initial one
    /// at every time through the horizon.
    MustNotChange(u64),
    /// The measure stays strictly below the bound at every time through the
    /// horizon.
    MustStayBelow(Measure, usize, u64),
}

impl Expectation {
    /// The horizon the claim is stated over.
    pub fn horizon(&self) -> u64 {
        match *self {
            Expectation::MustReach(h)
            | Expectation::MustNotChange(h)
            | Expectation::MustStayBelow(_, _, h) => h,
        }
    }

    /// The same claim restated over a different horizon.
    pub fn with_horizon(self, horizon: u64) -> Expectation {
        match self {
            Expectation::MustReach(_) => Expectation::MustReach(horizon),
            Expectation::MustNotChange(_) => Expectation::MustNotChange(horizon),
            Expectation::MustStayBelow(m, b, _) => Expectation::MustStayBelow(m, b, horizon),
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::MustReach(h) => write!(f, "goal reached within {h} slots"),
            Expectation::MustNotChange(h) => write!(f, "configuration unchanged through {h} slots"),
            Expectation::MustStayBelow(m, b, h) => {
                write!(f, "{m} stays below {b} through {h} slots")
            }
        }
    }
}

/// A named, fully assembled execution with a checkable claim.
///
/// The world already has its target functions and crash plan applied; the
/// assignment and fault plan are kept alongside so callers can inspect what
/// was installed.  [`Scenario::run`] executes it and checks the expectation.
#[derive(Debug, Clone)]
pub struct Scenario {
    name: String,
    world: World,
    assignment: Assignment,
    scheduler: SchedulerKind,
    faults: FaultPlan,
    goal: GoalPredicate,
    expectation: Expectation,
}

impl Scenario {
    pub(crate) fn new(
        name: impl Into<String>,
        world: World,
        assignment: Assignment,
        scheduler: SchedulerKind,
        faults: FaultPlan,
        goal: GoalPredicate,
        expectation: Expectation,
    ) -> Scenario {
        Scenario {
            name: name.into(),
            world,
            assignment,
            scheduler,
            faults,
            goal,
            expectation,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The initial world, with target functions and crashes installed.
    pub fn world(&self) -> &World {
        &self.world
    }

    /// Which robot runs which target function.
    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn scheduler(&self) -> &SchedulerKind {
        &self.scheduler
    }

    pub fn fault_plan(&self) -> &FaultPlan {
        &self.faults
    }

    pub fn goal(&self) -> &GoalPredicate {
        &self.goal
    }

    pub fn expectation(&self) -> &Expectation {
        &self.expectation
    }

    /// The same scenario with its claim restated over a different horizon.
    pub fn with_horizon(mut self, horizon: u64) -> Scenario {
        self.expectation = self.expectation.with_horizon(horizon);
        self
    }

    /// Executes the scenario and checks its expectation against the trace.
    pub fn run(&self, tol: &ToleranceConfig) -> Result<ScenarioOutcome, ScenarioError> {
        let mut scheduler = make_scheduler(self.scheduler.clone())?;
        let trace = run(
            self.world.clone(),
            &mut scheduler,
            &self.goal,
            self.expectation.horizon(),
            0,
            tol,
        )?;
        let passed = expectation_holds(&trace, &self.expectation);
        Ok(ScenarioOutcome { passed, trace })
    }
}

/// The result of running a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioOutcome {
    /// Whether the trace satisfies the scenario's expectation.
    pub passed: bool,
    /// The full execution record.
    pub trace: ExecutionTrace,
}

/// Checks an expectation against a finished trace, from the trace alone.
///
/// Claims over a horizon are conclusive in exactly two cases: the trace
/// covers every time instant through the horizon, or it ends in a detected
/// fixpoint (which pins every later configuration to the last recorded
/// one).  A trace that stops early for any other reason fails the claim —
/// inconclusive evidence is not a pass.
pub fn expectation_holds(trace: &ExecutionTrace, expectation: &Expectation) -> bool {
    match *expectation {
        Expectation::MustReach(h) => match trace.verdict {
            Verdict::Reached(t) => t <= h,
            _ => false,
        },
        Expectation::MustNotChange(h) => {
            let Some(first) = trace.steps.first() else {
                return false;
            };
            let initial = multiset(&first.positions);
            trace.steps.iter().all(|s| multiset(&s.positions) == initial)
                && covers_horizon(trace, h)
        }
        Expectation::MustStayBelow(Measure::SupportSize, bound, h) => {
            !trace.steps.is_empty()
                && trace.steps.iter().all(|s| support_size(&s.positions) < bound)
                && covers_horizon(trace, h)
        }
    }
}

/// Whether the trace is conclusive through time `h`: it either recorded
/// every instant up to `h` or ended in a permanent fixpoint.
fn covers_horizon(trace: &ExecutionTrace, h: u64) -> bool {
    trace.verdict == Verdict::StasisDetected
        || trace.steps.last().is_some_and(|s| s.time >= h)
}

fn multiset(points: &[Point]) -> Vec<Point> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted
}

fn support_size(points: &[Point]) -> usize {
    let mut sorted = multiset(points);
    sorted.dedup();
    sorted.len()
}

/// A registry entry: the scenario's name and its parameters with defaults.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioInfo {
    /// Name used to address the scenario.
    pub name: &'static str,
    /// Accepted parameters and their default values.
    pub params: &'static [(&'static str, u64)],
    /// One-line description of the construction.
    pub summary: &'static str,
}

const REGISTRY: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "scatter_lower_bound",
        params: &[("c", 3), ("m", 2), ("n", 4), ("horizon", DEFAULT_HORIZON)],
        summary: "m co-located clones with m < c spreading rules never occupy c points",
    },
    ScenarioInfo {
        name: "bivalent_stasis",
        params: &[("n", 4), ("horizon", DEFAULT_HORIZON)],
        summary: "a balanced two-point swarm running one gathering rule freezes forever",
    },
    ScenarioInfo {
        name: "clone_symmetric_failure",
        params: &[("horizon", DEFAULT_HORIZON)],
        summary: "two mirrored clone pairs under a symmetric rule pair keep the same multiset",
    },
    ScenarioInfo {
        name: "crash_scatter_lower_bound",
        params: &[("f", 2), ("n", 5), ("horizon", DEFAULT_HORIZON)],
        summary: "f crashed movers leave f+1 spreading rules unable to occupy two points",
    },
    ScenarioInfo {
        name: "fgp_crash_stuck",
        params: &[("n", 4), ("horizon", DEFAULT_HORIZON)],
        summary: "one robot crashed off the pack pins the whole swarm in place",
    },
];

/// Default claim horizon for every packaged scenario.
pub const DEFAULT_HORIZON: u64 = 200;

/// All registered scenarios with their parameter schemas.
pub fn scenario_registry() -> &'static [ScenarioInfo] {
    REGISTRY
}

/// Builds a registered scenario by name, overriding defaults with `params`.
///
/// Unknown names and unknown parameter keys are rejected, so a typo fails
/// loudly instead of silently running the default construction.
pub fn build_scenario(
    name: &str,
    params: &BTreeMap<String, u64>,
) -> Result<Scenario, ScenarioError> {
    let info = REGISTRY
        .iter()
        .find(|i| i.name == name)
        .ok_or_else(|| ScenarioError::UnknownScenario(name.to_string()))?;
    for key in params.keys() {
        if !info.params.iter().any(|(p, _)| p == key) {
            return Err(ScenarioError::BadParameter(format!(
                "scenario `{name}` takes no parameter `{key}`"
            )));
        }
    }
    let get = |key: &str| {
        let default = info
            .params
            .iter()
            .find(|(p, _)| *p == key)
            .map(|(_, d)| *d)
            .expect("registry lists every key the builders read");
        params.get(key).copied().unwrap_or(default)
    };
    let size = |key: &str| -> Result<usize, ScenarioError> {
        usize::try_from(get(key))
            .map_err(|_| ScenarioError::BadParameter(format!("parameter `{key}` is too large")))
    };
    let scenario = match name {
        "scatter_lower_bound" => scatter_lower_bound(size("c")?, size("m")?, size("n")?)?,
        "bivalent_stasis" => bivalent_stasis(size("n")?)?,
        "clone_symmetric_failure" => clone_symmetric_failure(),
        "crash_scatter_lower_bound" => crash_scatter_lower_bound(size("f")?, size("n")?)?,
        "fgp_crash_stuck" => fgp_crash_stuck(size("n")?)?,
        _ => unreachable!("registry and dispatch list the same names"),
    };
    Ok(scenario.with_horizon(get("horizon")))
}
