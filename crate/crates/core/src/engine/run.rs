//! Executions: scheduled steps with goal checking, fixpoint detection,
//! and an exact, replayable trace.

use std::fmt::Write as _;

use crate::geom::{Point, ToleranceConfig};

use super::{check_goal, lambda, EngineError, GoalPredicate, LambdaTriple, Scheduler, World};

/// Snapshot of one time instant of an execution.
///
/// The first snapshot of a trace shows the initial world with an empty
/// activation set; every later snapshot shows the world *after* one slot,
/// with `activated` naming the robots that acted in that slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// Time of this snapshot.
    pub time: u64,
    /// Robots that acted in the slot producing this snapshot, ascending.
    pub activated: Vec<usize>,
    /// Robots already crashed at this time, ascending.
    pub crashed: Vec<usize>,
    /// Global robot positions, in robot order.
    pub positions: Vec<Point>,
    /// Progress measure of the configuration.
    pub lambda: LambdaTriple,
}

/// How an execution ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The goal first held at this time.
    Reached(u64),
    /// Every robot's destination equals its position: no activation
    /// whatsoever can ever change the configuration again.
    StasisDetected,
    /// The step budget ran out before the goal or a fixpoint.
    HorizonExceeded,
}

/// The full record of an execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTrace {
    /// One snapshot per time instant, starting with the initial world.
    pub steps: Vec<TraceStep>,
    /// How the execution ended.
    pub verdict: Verdict,
    /// When the goal was reached: whether it kept holding through every
    /// extra stability slot that was run afterwards.
    pub goal_stable: Option<bool>,
}

/// Drives `world` under `scheduler` until `goal` holds, a fixpoint is
/// detected, or `horizon` slots have been executed — in that order of
/// precedence at each time instant.
///
/// On success the verdict is [`Verdict::Reached`] with the first time the
/// goal held, after which `stability_window` extra slots are executed and
/// recorded, and [`ExecutionTrace::goal_stable`] reports whether the goal
/// survived all of them.
pub fn run(
    world: World,
    scheduler: &mut Scheduler,
    goal: &GoalPredicate,
    horizon: u64,
    stability_window: u64,
    tol: &ToleranceConfig,
) -> Result<ExecutionTrace, EngineError> {
    if horizon == 0 {
        return Err(EngineError::BadHorizon);
    }
    let mut world = world;
    let mut steps = vec![snapshot(&world, Vec::new(), tol)?];
    loop {
        if check_goal(goal, &world, tol)? {
            let reached_at = world.time();
            let mut stable = true;
            for _ in 0..stability_window {
                let activated = scheduler.next_activation(&world);
                world = world.step(&activated, tol)?;
                steps.push(snapshot(&world, activated.into_iter().collect(), tol)?);
                if !check_goal(goal, &world, tol)? {
                    stable = false;
                }
            }
            return Ok(ExecutionTrace {
                steps,
                verdict: Verdict::Reached(reached_at),
                goal_stable: Some(stable),
            });
        }
        let destinations = world.destinations(tol)?;
        let fixpoint = world
            .robots()
            .iter()
            .zip(&destinations)
            .all(|(robot, dest)| robot.position() == dest);
        if fixpoint {
            return Ok(ExecutionTrace {
                steps,
                verdict: Verdict::StasisDetected,
                goal_stable: None,
            });
        }
        if world.time() >= horizon {
            return Ok(ExecutionTrace {
                steps,
                verdict: Verdict::HorizonExceeded,
                goal_stable: None,
            });
        }
        let activated = scheduler.next_activation(&world);
        world = world.step_with(&activated, &destinations)?;
        steps.push(snapshot(&world, activated.into_iter().collect(), tol)?);
    }
}

fn snapshot(
    world: &World,
    activated: Vec<usize>,
    tol: &ToleranceConfig,
) -> Result<TraceStep, EngineError> {
    let mut crashed: Vec<usize> = world
        .robots()
        .iter()
        .filter(|r| r.is_crashed_at(world.time()))
        .map(|r| r.id())
        .collect();
    crashed.sort_unstable();
    Ok(TraceStep {
        time: world.time(),
        activated,
        crashed,
        positions: world.robots().iter().map(|r| r.position().clone()).collect(),
        lambda: lambda(&world.config(), tol)?,
    })
}

impl ExecutionTrace {
    /// Serializes the trace to its line-oriented text format. The format
    /// is versioned, keeps every coordinate as an exact rational, and
    /// round-trips losslessly through [`ExecutionTrace::parse_text`].
    pub fn to_text(&self) -> String {
        let robots = self.steps.first().map_or(0, |s| s.positions.len());
        let mut out = String::from("swarmkit-trace 1\n");
        writeln!(out, "robots {robots}").expect("string writes cannot fail");
        for step in &self.steps {
            write!(
                out,
                "step {} a={} c={} l={},{},{} p=",
                step.time,
                join_ids(&step.activated),
                join_ids(&step.crashed),
                step.lambda.k,
                step.lambda.m,
                step.lambda.neg_mu,
            )
            .expect("string writes cannot fail");
            for (i, p) in step.positions.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "{p}").expect("string writes cannot fail");
            }
            out.push('\n');
        }
        match &self.verdict {
            Verdict::Reached(t) => writeln!(out, "verdict reached {t}"),
            Verdict::StasisDetected => writeln!(out, "verdict stasis"),
            Verdict::HorizonExceeded => writeln!(out, "verdict horizon"),
        }
        .expect("string writes cannot fail");
        if let Some(stable) = self.goal_stable {
            writeln!(out, "stable {stable}").expect("string writes cannot fail");
        }
        out
    }

    /// Parses the text format written by [`ExecutionTrace::to_text`].
    pub fn parse_text(input: &str) -> Result<ExecutionTrace, EngineError> {
        let bad = |msg: &str| EngineError::BadTrace(msg.to_string());
        let mut lines = input.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("swarmkit-trace 1") {
            return Err(bad("missing or unsupported format header"));
        }
        let robots: usize = lines
            .next()
            .and_then(|l| l.trim().strip_prefix("robots "))
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad("missing robot count"))?;
        let mut steps = Vec::new();
        let mut verdict = None;
        let mut goal_stable = None;
        for line in lines {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("step ") {
                if verdict.is_some() {
                    return Err(bad("step record after the verdict"));
                }
                steps.push(parse_step(rest, robots)?);
            } else if let Some(rest) = line.strip_prefix("verdict ") {
                if verdict.is_some() {
                    return Err(bad("duplicate verdict"));
                }
                verdict = Some(parse_verdict(rest.trim())?);
            } else if let Some(rest) = line.strip_prefix("stable ") {
                if verdict.is_none() || goal_stable.is_some() {
                    return Err(bad("misplaced stability flag"));
                }
                goal_stable = Some(match rest.trim() {
                    "true" => true,
                    "false" => false,
                    other => return Err(EngineError::BadTrace(format!(
                        "stability flag must be true or false, got {other}"
                    ))),
                });
            } else {
                return Err(EngineError::BadTrace(format!(
                    "unrecognized line: {line}"
                )));
            }
        }
        Ok(ExecutionTrace {
            steps,
            verdict: verdict.ok_or_else(|| bad("missing verdict"))?,
            goal_stable,
        })
    }
}

fn join_ids(ids: &[usize]) -> String {
    if ids.is_empty() {
        return "-".into();
    }
    ids.iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_ids(field: &str) -> Result<Vec<usize>, EngineError> {
    if field == "-" {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|part| {
            part.parse()
                .map_err(|_| EngineError::BadTrace(format!("bad id list entry: {part}")))
        })
        .collect()
}

fn parse_step(rest: &str, robots: usize) -> Result<TraceStep, EngineError> {
    let bad = |msg: String| EngineError::BadTrace(msg);
    let mut fields = rest.split_whitespace();
    let time = fields
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("step record missing time".into()))?;
    let activated = parse_ids(
        fields
            .next()
            .and_then(|f| f.strip_prefix("a="))
            .ok_or_else(|| bad("step record missing activation field".into()))?,
    )?;
    let crashed = parse_ids(
        fields
            .next()
            .and_then(|f| f.strip_prefix("c="))
            .ok_or_else(|| bad("step record missing crash field".into()))?,
    )?;
    let lambda_field = fields
        .next()
        .and_then(|f| f.strip_prefix("l="))
        .ok_or_else(|| bad("step record missing progress field".into()))?;
    let lambda_parts: Vec<&str> = lambda_field.split(',').collect();
    let [k, m, neg_mu] = lambda_parts.as_slice() else {
        return Err(bad(format!("bad progress triple: {lambda_field}")));
    };
    let lambda = LambdaTriple {
        k: k.parse()
            .map_err(|_| bad(format!("bad rotation order: {k}")))?,
        m: m.parse()
            .map_err(|_| bad(format!("bad support size: {m}")))?,
        neg_mu: neg_mu
            .parse()
            .map_err(|_| bad(format!("bad pivot multiplicity: {neg_mu}")))?,
    };
    let first_point = fields
        .next()
        .and_then(|f| f.strip_prefix("p="))
        .ok_or_else(|| bad("step record missing positions".into()))?;
    let mut positions = Vec::with_capacity(robots);
    for token in std::iter::once(first_point).chain(fields) {
        positions.push(
            token
                .parse::<Point>()
                .map_err(|_| bad(format!("bad position literal: {token}")))?,
        );
    }
    if positions.len() != robots {
        return Err(bad(format!(
            "expected {robots} positions, found {}",
            positions.len()
        )));
    }
    Ok(TraceStep {
        time,
        activated,
        crashed,
        positions,
        lambda,
    })
}

fn parse_verdict(rest: &str) -> Result<Verdict, EngineError> {
    if rest == "stasis" {
        return Ok(Verdict::StasisDetected);
    }
    if rest == "horizon" {
        return Ok(Verdict::HorizonExceeded);
    }
    if let Some(t) = rest.strip_prefix("reached ") {
        return t
            .trim()
            .parse()
            .map(Verdict::Reached)
            .map_err(|_| EngineError::BadTrace(format!("bad verdict time: {t}")));
    }
    Err(EngineError::BadTrace(format!("unknown verdict: {rest}")))
}
