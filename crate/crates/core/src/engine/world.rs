//! Robots, world state, and the synchronous step rule.
//!
//! A step works in three phases shared by every activated robot: all of
//! them observe the same position multiset, each computes a destination
//! through its own frame and target function, and all of them land
//! simultaneously (moves are rigid — a robot always reaches its
//! destination within the slot). Robots outside the activation set, and
//! robots whose crash time has passed, keep their positions.

use std::collections::BTreeSet;

use crate::geom::{Configuration, Point, ToleranceConfig};
use crate::targets::{evaluate, TargetFunctionId};

use super::{Assignment, EngineError, FaultPlan, LocalFrame};

/// One robot: a bookkeeping id, a private frame, an assigned target
/// function, and an optional crash time.
///
/// The id exists purely so schedulers, fault plans, and traces can refer to
/// the robot; target functions only ever receive the anonymous observation
/// multiset.
#[derive(Debug, Clone)]
pub struct Robot {
    id: usize,
    frame: LocalFrame,
    tf: TargetFunctionId,
    crashed_at: Option<u64>,
}

impl Robot {
    /// A healthy robot with the given id, frame, and target function.
    pub fn new(id: usize, frame: LocalFrame, tf: TargetFunctionId) -> Robot {
        Robot {
            id,
            frame,
            tf,
            crashed_at: None,
        }
    }

    /// The same robot scheduled to crash at `time`.
    pub fn with_crash(mut self, time: u64) -> Robot {
        self.crashed_at = Some(time);
        self
    }

    /// Bookkeeping identifier.
    pub fn id(&self) -> usize {
        self.id
    }

    /// The robot's private coordinate frame.
    pub fn frame(&self) -> &LocalFrame {
        &self.frame
    }

    /// The robot's assigned target function.
    pub fn tf(&self) -> TargetFunctionId {
        self.tf
    }

    /// The scheduled crash time, if any.
    pub fn crashed_at(&self) -> Option<u64> {
        self.crashed_at
    }

    /// Current global position.
    pub fn position(&self) -> &Point {
        self.frame.position()
    }

    /// Whether the robot is permanently inactive at `time`. A crash at `t`
    /// already suppresses the move of an activation at `t`.
    pub fn is_crashed_at(&self, time: u64) -> bool {
        self.crashed_at.is_some_and(|c| c <= time)
    }

    fn set_position(&mut self, position: Point) {
        self.frame.set_position(position);
    }
}

/// The full simulation state: a swarm of robots and the current time.
///
/// The configuration — the multiset of robot positions — is derived on
/// demand via [`World::config`]. Worlds whose robots run pattern-forming
/// target functions also carry the shared goal pattern those functions
/// take as input.
#[derive(Debug, Clone)]
pub struct World {
    robots: Vec<Robot>,
    time: u64,
    pattern: Option<Configuration>,
}

impl World {
    /// Builds a world at time 0. Errors when the swarm is empty or two
    /// robots share an id.
    pub fn new(robots: Vec<Robot>) -> Result<World, EngineError> {
        if robots.is_empty() {
            return Err(EngineError::EmptySwarm);
        }
        let mut seen = BTreeSet::new();
        for robot in &robots {
            if !seen.insert(robot.id()) {
                return Err(EngineError::DuplicateRobotId(robot.id()));
            }
        }
        Ok(World {
            robots,
            time: 0,
            pattern: None,
        })
    }

    /// Attaches the goal pattern that pattern-forming target functions
    /// receive alongside each observation.
    pub fn with_pattern(mut self, pattern: Configuration) -> World {
        self.pattern = Some(pattern);
        self
    }

    /// The robots, in construction order.
    pub fn robots(&self) -> &[Robot] {
        &self.robots
    }

    /// Looks a robot up by id.
    pub fn robot(&self, id: usize) -> Option<&Robot> {
        self.robots.iter().find(|r| r.id() == id)
    }

    /// All robot ids, ascending.
    pub fn ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.robots.iter().map(Robot::id).collect();
        ids.sort_unstable();
        ids
    }

    /// Current time.
    pub fn time(&self) -> u64 {
        self.time
    }

    /// The shared goal pattern, when one is attached.
    pub fn pattern(&self) -> Option<&Configuration> {
        self.pattern.as_ref()
    }

    /// The current configuration: the multiset of robot positions.
    pub fn config(&self) -> Configuration {
        let points = self.robots.iter().map(|r| r.position().clone()).collect();
        Configuration::new(points).expect("worlds hold at least one robot")
    }

    /// What robot `id` sees right now: the configuration in its own frame.
    pub fn observation(&self, id: usize) -> Result<Configuration, EngineError> {
        let robot = self.robot(id).ok_or(EngineError::UnknownRobot(id))?;
        Ok(robot.frame().observe(&self.config()))
    }

    /// Reassigns target functions per `assignment`. Every robot must have
    /// an entry and every entry must name an existing robot.
    pub fn apply_assignment(&mut self, assignment: &Assignment) -> Result<(), EngineError> {
        for id in assignment.map().keys() {
            if self.robot(*id).is_none() {
                return Err(EngineError::UnknownRobot(*id));
            }
        }
        for robot in &self.robots {
            if assignment.tf_for(robot.id()).is_none() {
                return Err(EngineError::BadAssignment(format!(
                    "robot {} has no target function in the assignment",
                    robot.id()
                )));
            }
        }
        for robot in &mut self.robots {
            robot.tf = assignment
                .tf_for(robot.id())
                .expect("presence checked above");
        }
        Ok(())
    }

    /// Schedules the crashes of `plan`, replacing any previously scheduled
    /// crash times for the robots named in it.
    pub fn apply_faults(&mut self, plan: &FaultPlan) -> Result<(), EngineError> {
        for id in plan.crashes().keys() {
            if self.robot(*id).is_none() {
                return Err(EngineError::UnknownRobot(*id));
            }
        }
        for robot in &mut self.robots {
            if let Some(&t) = plan.crashes().get(&robot.id) {
                robot.crashed_at = Some(t);
            }
        }
        Ok(())
    }

    /// Every robot's destination under a hypothetical activation right
    /// now, in robot order: crashed robots hold their position, everyone
    /// else runs Look–Compute on the shared configuration.
    ///
    /// Destinations depend only on the current configuration, never on the
    /// activation set, so this doubles as the fixpoint test: when every
    /// destination equals the robot's position, no activation whatsoever
    /// can change the configuration.
    pub fn destinations(&self, tol: &ToleranceConfig) -> Result<Vec<Point>, EngineError> {
        let snapshot = self.config();
        self.robots
            .iter()
            .map(|robot| {
                if robot.is_crashed_at(self.time) {
                    Ok(robot.position().clone())
                } else {
                    let seen = robot.frame().observe(&snapshot);
                    let local = evaluate(robot.tf(), &seen, self.pattern.as_ref(), tol)?;
                    Ok(robot.frame().to_global(&local))
                }
            })
            .collect()
    }

    /// One synchronous slot: every activated, non-crashed robot observes
    /// the same configuration, computes its destination, and all of them
    /// land atomically; everyone else stays put. Time advances by one.
    pub fn step(
        &self,
        activated: &BTreeSet<usize>,
        tol: &ToleranceConfig,
    ) -> Result<World, EngineError> {
        self.check_ids(activated)?;
        let snapshot = self.config();
        let mut next = self.clone();
        for (i, robot) in self.robots.iter().enumerate() {
            if !activated.contains(&robot.id()) || robot.is_crashed_at(self.time) {
                continue;
            }
            let seen = robot.frame().observe(&snapshot);
            let local = evaluate(robot.tf(), &seen, self.pattern.as_ref(), tol)?;
            next.robots[i].set_position(robot.frame().to_global(&local));
        }
        next.time += 1;
        Ok(next)
    }

    /// Like [`World::step`] but reusing destinations already computed by
    /// [`World::destinations`] for the current time.
    pub(crate) fn step_with(
        &self,
        activated: &BTreeSet<usize>,
        destinations: &[Point],
    ) -> Result<World, EngineError> {
        self.check_ids(activated)?;
        debug_assert_eq!(destinations.len(), self.robots.len());
        let mut next = self.clone();
        for (i, robot) in self.robots.iter().enumerate() {
            if activated.contains(&robot.id()) && !robot.is_crashed_at(self.time) {
                next.robots[i].set_position(destinations[i].clone());
            }
        }
        next.time += 1;
        Ok(next)
    }

    fn check_ids(&self, activated: &BTreeSet<usize>) -> Result<(), EngineError> {
        for id in activated {
            if self.robot(*id).is_none() {
                return Err(EngineError::UnknownRobot(*id));
            }
        }
        Ok(())
    }
}
