//! The run-specification file: one small text document that assembles a
//! whole execution — swarm, rules, scheduler, crashes, goal, tolerances.
//!
//! Two encodings are accepted and parse to the same thing:
//!
//! * **line format** — `# comments`, blank lines, a `swarmkit-run 1` header,
//!   then one `key value` directive per line;
//! * **JSON** — an object with the same keys; a value may be a string (the
//!   same text as after the key in line format), an integer, or an array of
//!   strings (joined with spaces, except `frame`, where each element is one
//!   per-robot directive).
//!
//! Every coordinate, rotation parameter, scale, and probability is an exact
//! rational written as `a` or `a/b`; nothing is ever parsed through floating
//! point, so a file replays bit-identically anywhere.
//!
//! # Directives
//!
//! | key          | value                                                           |
//! |--------------|-----------------------------------------------------------------|
//! | `algorithm`  | the rule set, e.g. `2gat` or `gat:1 gat:2`                      |
//! | `n`          | number of robots                                                |
//! | `points`     | `[x,y]` literals, or `random box=B [seed=S]`                    |
//! | `frames`     | `identity` (default) or `random [seed=S]`                       |
//! | `frame`      | `ID [t=RAT] [scale=RAT] [half]` — one robot's frame             |
//! | `assignment` | `ID:RULE ...`, `sampled [seed=S] [cap=C]`, or `first`           |
//! | `scheduler`  | `fsync` (default), `roundrobin`, `fair [p=RAT] [bound=B] [seed=S]`, or `scripted 0,1\|2\|-` |
//! | `crash`      | `ID@TIME ...`                                                   |
//! | `goal`       | `gather<=K`, `scatter>=K`, `gather_all<=K`, `gather_nonfaulty`, `pattern` |
//! | `pattern`    | `[x,y]` literals — goal shape for `pattern`, `pf`, `sct*`       |
//! | `horizon`    | slot budget (or `--horizon`)                                    |
//! | `stability`  | extra slots the goal must keep holding (default 0)              |
//! | `seed`       | base seed for generators that omit their own                    |
//! | `eps`        | relative tolerance, `2^-64` or a rational                       |
//! | `sqrt-bits`  | square-root precision in bits                                   |
//!
//! # Seeds
//!
//! Each generator may carry its own `seed=`; those that do not derive one
//! from the base seed (points +1, frames +2, assignment +3, scheduler +4).
//! The base seed resolves as `--seed`, else the file's `seed`, else the
//! `SWARMKIT_SEED` environment variable, else 0.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;
use std::{env, fs};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use swarmkit_core::{
    canonical_assignments, enumerate_assignments, validate_assignment, Assignment, Configuration,
    FaultPlan, GoalPredicate, LocalFrame, Point, Robot, Scalar, SchedulerKind, TargetFunctionId,
    ToleranceConfig, World,
};

/// Result alias for load-time problems; the message is shown to the user
/// and the process exits with the usage/parse status.
pub type UResult<T> = Result<T, String>;

const HEADER_KEY: &str = "swarmkit-run";
const HEADER_VERSION: &str = "1";

/// A fully validated execution, ready for the engine.
pub struct LoadedRun {
    pub world: World,
    pub scheduler: SchedulerKind,
    pub goal: GoalPredicate,
    pub horizon: u64,
    pub stability: u64,
    pub tol: ToleranceConfig,
}

/// Command-line values that win over what the file says.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub horizon: Option<u64>,
    pub stability: Option<u64>,
    pub eps: Option<String>,
    pub sqrt_bits: Option<u32>,
}

/// Builds a tolerance policy from optional flag values over the defaults.
pub fn resolve_tolerance(eps: Option<&str>, sqrt_bits: Option<u32>) -> UResult<ToleranceConfig> {
    let default = ToleranceConfig::default();
    let eps = match eps {
        Some(text) => parse_eps(text)?,
        None => default.rel_eps().clone(),
    };
    let bits = sqrt_bits.unwrap_or(default.sqrt_bits());
    ToleranceConfig::new(eps, bits).map_err(stringify)
}

/// Parses a tolerance written either as a power of two (`2^-64`) or as an
/// exact rational (`1/1000000`).
pub fn parse_eps(text: &str) -> UResult<Scalar> {
    let text = text.trim();
    if let Some(exp) = text.strip_prefix("2^") {
        let exp: i64 = exp
            .parse()
            .map_err(|_| format!("bad exponent in tolerance `{text}`"))?;
        return Ok(Scalar::pow2(exp));
    }
    Scalar::from_str(text).map_err(|_| format!("bad tolerance `{text}`: not a rational"))
}

/// Reads, parses, and validates a run file, applying command-line overrides.
pub fn load(path: &Path, overrides: &Overrides) -> UResult<LoadedRun> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read run file `{}`: {e}", path.display()))?;
    let raw = if text.trim_start().starts_with('{') {
        parse_json(&text)?
    } else {
        parse_lines(&text)?
    };
    resolve(raw, overrides)
}

// ---------------------------------------------------------------------
// raw spec: what the file said, before cross-validation
// ---------------------------------------------------------------------

#[derive(Default)]
struct RawSpec {
    algorithm: Option<Vec<TargetFunctionId>>,
    n: Option<usize>,
    points: Option<PointsSpec>,
    frames: Option<FramesSpec>,
    frame_lines: Vec<(usize, FrameParams)>,
    assignment: Option<AssignSpec>,
    scheduler: Option<SchedSpec>,
    crashes: Vec<(usize, u64)>,
    goal: Option<GoalSpec>,
    pattern: Option<Vec<Point>>,
    horizon: Option<u64>,
    stability: Option<u64>,
    seed: Option<u64>,
    eps: Option<Scalar>,
    sqrt_bits: Option<u32>,
}

enum PointsSpec {
    Explicit(Vec<Point>),
    Random { span: i64, seed: Option<u64> },
}

enum FramesSpec {
    Identity,
    Random { seed: Option<u64> },
}

struct FrameParams {
    t: Scalar,
    scale: Scalar,
    half: bool,
}

enum AssignSpec {
    Explicit(Vec<(usize, TargetFunctionId)>),
    Sampled { seed: Option<u64>, cap: usize },
    First,
}

enum SchedSpec {
    Fsync,
    RoundRobin,
    Fair {
        p: Scalar,
        bound: u64,
        seed: Option<u64>,
    },
    Scripted(Vec<Vec<usize>>),
}

enum GoalSpec {
    GatherAtMost(usize),
    ScatterAtLeast(usize),
    GatherAllAtMost(usize),
    GatherNonFaulty,
    Pattern,
}

// ---------------------------------------------------------------------
// the two surface syntaxes
// ---------------------------------------------------------------------

fn parse_lines(text: &str) -> UResult<RawSpec> {
    let mut raw = RawSpec::default();
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (line, ""),
        };
        if !saw_header {
            if key != HEADER_KEY || value != HEADER_VERSION {
                return Err(format!(
                    "line {}: a run file must start with `{HEADER_KEY} {HEADER_VERSION}`",
                    lineno + 1
                ));
            }
            saw_header = true;
            continue;
        }
        apply(&mut raw, key, value).map_err(|e| format!("line {}: {e}", lineno + 1))?;
    }
    if !saw_header {
        return Err(format!(
            "empty run file: expected a `{HEADER_KEY} {HEADER_VERSION}` header"
        ));
    }
    Ok(raw)
}

fn parse_json(text: &str) -> UResult<RawSpec> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("bad JSON run file: {e}"))?;
    let object = value
        .as_object()
        .ok_or("a JSON run file must be an object")?;
    let mut raw = RawSpec::default();
    for (key, value) in object {
        match value {
            serde_json::Value::Array(items) => {
                let texts: Vec<String> = items
                    .iter()
                    .map(|item| match item {
                        serde_json::Value::String(s) => Ok(s.clone()),
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        other => Err(format!("key `{key}`: unsupported array element {other}")),
                    })
                    .collect::<UResult<_>>()?;
                if key == "frame" {
                    // One per-robot directive per element; joining them
                    // would merge different robots into one line.
                    for text in &texts {
                        apply(&mut raw, key, text).map_err(|e| format!("key `{key}`: {e}"))?;
                    }
                } else {
                    apply(&mut raw, key, &texts.join(" "))
                        .map_err(|e| format!("key `{key}`: {e}"))?;
                }
            }
            serde_json::Value::String(s) => {
                apply(&mut raw, key, s).map_err(|e| format!("key `{key}`: {e}"))?;
            }
            serde_json::Value::Number(n) => {
                apply(&mut raw, key, &n.to_string()).map_err(|e| format!("key `{key}`: {e}"))?;
            }
            other => return Err(format!("key `{key}`: unsupported JSON value {other}")),
        }
    }
    Ok(raw)
}

// ---------------------------------------------------------------------
// shared directive handling
// ---------------------------------------------------------------------

fn apply(raw: &mut RawSpec, key: &str, value: &str) -> UResult<()> {
    match key {
        HEADER_KEY => {
            if value.trim() == HEADER_VERSION {
                Ok(())
            } else {
                Err(format!("unsupported run-file version `{value}`"))
            }
        }
        "algorithm" => set_once(&mut raw.algorithm, key, parse_algorithm(value)?),
        "n" => set_once(&mut raw.n, key, parse_number::<usize>(value, key)?),
        "points" => set_once(&mut raw.points, key, parse_points_spec(value)?),
        "frames" => set_once(&mut raw.frames, key, parse_frames_spec(value)?),
        "frame" => {
            let (id, params) = parse_frame_line(value)?;
            if raw.frame_lines.iter().any(|(seen, _)| *seen == id) {
                return Err(format!("robot {id} has two `frame` directives"));
            }
            raw.frame_lines.push((id, params));
            Ok(())
        }
        "assignment" => set_once(&mut raw.assignment, key, parse_assignment_spec(value)?),
        "scheduler" => set_once(&mut raw.scheduler, key, parse_scheduler_spec(value)?),
        "crash" => {
            for token in value.split_whitespace() {
                let (id, time) = token
                    .split_once('@')
                    .ok_or_else(|| format!("bad crash `{token}`: expected ID@TIME"))?;
                let id = parse_number::<usize>(id, "crash robot id")?;
                let time = parse_number::<u64>(time, "crash time")?;
                if raw.crashes.iter().any(|(seen, _)| *seen == id) {
                    return Err(format!("robot {id} is crashed twice"));
                }
                raw.crashes.push((id, time));
            }
            Ok(())
        }
        "goal" => set_once(&mut raw.goal, key, parse_goal_spec(value)?),
        "pattern" => set_once(&mut raw.pattern, key, parse_point_list(value)?),
        "horizon" => set_once(&mut raw.horizon, key, parse_number::<u64>(value, key)?),
        "stability" => set_once(&mut raw.stability, key, parse_number::<u64>(value, key)?),
        "seed" => set_once(&mut raw.seed, key, parse_number::<u64>(value, key)?),
        "eps" => set_once(&mut raw.eps, key, parse_eps(value)?),
        "sqrt-bits" => set_once(&mut raw.sqrt_bits, key, parse_number::<u32>(value, key)?),
        _ => Err(format!("unknown directive `{key}`")),
    }
}

fn set_once<T>(slot: &mut Option<T>, key: &str, value: T) -> UResult<()> {
    if slot.is_some() {
        return Err(format!("directive `{key}` given twice"));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_number<T: FromStr>(text: &str, what: &str) -> UResult<T> {
    text.trim()
        .parse()
        .map_err(|_| format!("bad {what}: `{text}` is not a valid number"))
}

fn parse_algorithm(value: &str) -> UResult<Vec<TargetFunctionId>> {
    let mut rules = Vec::new();
    for token in value.split_whitespace() {
        let id = TargetFunctionId::from_str(token).map_err(stringify)?;
        if rules.contains(&id) {
            return Err(format!("rule `{token}` is listed twice"));
        }
        rules.push(id);
    }
    if rules.is_empty() {
        return Err("`algorithm` needs at least one rule".into());
    }
    Ok(rules)
}

fn parse_point_list(value: &str) -> UResult<Vec<Point>> {
    let points: Vec<Point> = value
        .split_whitespace()
        .map(|token| Point::from_str(token).map_err(stringify))
        .collect::<UResult<_>>()?;
    if points.is_empty() {
        return Err("expected at least one [x,y] literal".into());
    }
    Ok(points)
}

/// Splits `k=v` tokens from bare flag tokens.
fn split_kv(tokens: &[&str]) -> (Vec<(String, String)>, Vec<String>) {
    let mut pairs = Vec::new();
    let mut flags = Vec::new();
    for token in tokens {
        match token.split_once('=') {
            Some((k, v)) => pairs.push((k.to_string(), v.to_string())),
            None => flags.push(token.to_string()),
        }
    }
    (pairs, flags)
}

fn take_kv(pairs: &mut Vec<(String, String)>, key: &str) -> Option<String> {
    let at = pairs.iter().position(|(k, _)| k == key)?;
    Some(pairs.remove(at).1)
}

fn reject_leftovers(pairs: &[(String, String)], flags: &[String], context: &str) -> UResult<()> {
    if let Some((k, _)) = pairs.first() {
        return Err(format!("unknown option `{k}=` in `{context}`"));
    }
    if let Some(flag) = flags.first() {
        return Err(format!("unknown token `{flag}` in `{context}`"));
    }
    Ok(())
}

fn parse_points_spec(value: &str) -> UResult<PointsSpec> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    if tokens.first() == Some(&"random") {
        let (mut pairs, flags) = split_kv(&tokens[1..]);
        let span = match take_kv(&mut pairs, "box") {
            Some(v) => parse_number::<i64>(&v, "points box")?,
            None => 6,
        };
        if span < 1 {
            return Err("points box must be at least 1".into());
        }
        let seed = take_kv(&mut pairs, "seed")
            .map(|v| parse_number::<u64>(&v, "points seed"))
            .transpose()?;
        reject_leftovers(&pairs, &flags, "points random")?;
        Ok(PointsSpec::Random { span, seed })
    } else {
        Ok(PointsSpec::Explicit(parse_point_list(value)?))
    }
}

fn parse_frames_spec(value: &str) -> UResult<FramesSpec> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    match tokens.split_first() {
        Some((&"identity", [])) => Ok(FramesSpec::Identity),
        Some((&"random", rest)) => {
            let (mut pairs, flags) = split_kv(rest);
            let seed = take_kv(&mut pairs, "seed")
                .map(|v| parse_number::<u64>(&v, "frames seed"))
                .transpose()?;
            reject_leftovers(&pairs, &flags, "frames random")?;
            Ok(FramesSpec::Random { seed })
        }
        _ => Err(format!(
            "bad frames mode `{value}`: expected `identity` or `random [seed=S]`"
        )),
    }
}

fn parse_frame_line(value: &str) -> UResult<(usize, FrameParams)> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    let (first, rest) = tokens
        .split_first()
        .ok_or("bad frame directive: expected `ID [t=RAT] [scale=RAT] [half]`")?;
    let id = parse_number::<usize>(first, "frame robot id")?;
    let (mut pairs, mut flags) = split_kv(rest);
    let t = match take_kv(&mut pairs, "t") {
        Some(v) => Scalar::from_str(&v).map_err(stringify)?,
        None => Scalar::zero(),
    };
    let scale = match take_kv(&mut pairs, "scale") {
        Some(v) => Scalar::from_str(&v).map_err(stringify)?,
        None => Scalar::one(),
    };
    let half = if let Some(at) = flags.iter().position(|f| f == "half") {
        flags.remove(at);
        true
    } else {
        false
    };
    reject_leftovers(&pairs, &flags, "frame")?;
    Ok((id, FrameParams { t, scale, half }))
}

fn parse_assignment_spec(value: &str) -> UResult<AssignSpec> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    match tokens.split_first() {
        Some((&"first", [])) => Ok(AssignSpec::First),
        Some((&"sampled", rest)) => {
            let (mut pairs, flags) = split_kv(rest);
            let seed = take_kv(&mut pairs, "seed")
                .map(|v| parse_number::<u64>(&v, "assignment seed"))
                .transpose()?;
            let cap = match take_kv(&mut pairs, "cap") {
                Some(v) => parse_number::<usize>(&v, "assignment cap")?,
                None => 10_000,
            };
            reject_leftovers(&pairs, &flags, "assignment sampled")?;
            Ok(AssignSpec::Sampled { seed, cap })
        }
        Some(_) => {
            let mut pairs = Vec::new();
            for token in &tokens {
                let (id, rule) = token
                    .split_once(':')
                    .ok_or_else(|| format!("bad assignment `{token}`: expected ID:RULE"))?;
                let id = parse_number::<usize>(id, "assignment robot id")?;
                let rule = TargetFunctionId::from_str(rule).map_err(stringify)?;
                if pairs.iter().any(|(seen, _)| *seen == id) {
                    return Err(format!("robot {id} is assigned twice"));
                }
                pairs.push((id, rule));
            }
            Ok(AssignSpec::Explicit(pairs))
        }
        None => Err("empty assignment: expected ID:RULE pairs, `sampled`, or `first`".into()),
    }
}

fn parse_scheduler_spec(value: &str) -> UResult<SchedSpec> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    match tokens.split_first() {
        Some((&"fsync", [])) => Ok(SchedSpec::Fsync),
        Some((&"roundrobin", [])) => Ok(SchedSpec::RoundRobin),
        Some((&"fair", rest)) => {
            let (mut pairs, flags) = split_kv(rest);
            let p = match take_kv(&mut pairs, "p") {
                Some(v) => Scalar::from_str(&v).map_err(stringify)?,
                None => Scalar::ratio(1, 2),
            };
            let bound = match take_kv(&mut pairs, "bound") {
                Some(v) => parse_number::<u64>(&v, "fairness bound")?,
                None => 8,
            };
            let seed = take_kv(&mut pairs, "seed")
                .map(|v| parse_number::<u64>(&v, "scheduler seed"))
                .transpose()?;
            reject_leftovers(&pairs, &flags, "scheduler fair")?;
            Ok(SchedSpec::Fair { p, bound, seed })
        }
        Some((&"scripted", rest)) => {
            let script_text = rest.join(" ");
            if script_text.is_empty() {
                return Err("scripted scheduler needs at least one slot".into());
            }
            let mut slots = Vec::new();
            for segment in script_text.split('|') {
                let segment = segment.trim();
                if segment == "-" || segment.is_empty() {
                    slots.push(Vec::new());
                    continue;
                }
                let ids: Vec<usize> = segment
                    .split(',')
                    .map(|id| parse_number::<usize>(id, "scripted robot id"))
                    .collect::<UResult<_>>()?;
                slots.push(ids);
            }
            Ok(SchedSpec::Scripted(slots))
        }
        _ => Err(format!(
            "bad scheduler `{value}`: expected `fsync`, `roundrobin`, `fair ...`, or `scripted ...`"
        )),
    }
}

fn parse_goal_spec(value: &str) -> UResult<GoalSpec> {
    let value = value.trim();
    if let Some(k) = value.strip_prefix("gather<=") {
        return Ok(GoalSpec::GatherAtMost(parse_number(k, "goal bound")?));
    }
    if let Some(k) = value.strip_prefix("gather_all<=") {
        return Ok(GoalSpec::GatherAllAtMost(parse_number(k, "goal bound")?));
    }
    if let Some(k) = value.strip_prefix("scatter>=") {
        return Ok(GoalSpec::ScatterAtLeast(parse_number(k, "goal bound")?));
    }
    match value {
        "gather_nonfaulty" => Ok(GoalSpec::GatherNonFaulty),
        "pattern" => Ok(GoalSpec::Pattern),
        _ => Err(format!(
            "bad goal `{value}`: expected gather<=K, scatter>=K, gather_all<=K, \
             gather_nonfaulty, or pattern"
        )),
    }
}

// ---------------------------------------------------------------------
// resolution: raw spec + overrides -> engine input
// ---------------------------------------------------------------------

fn resolve(raw: RawSpec, overrides: &Overrides) -> UResult<LoadedRun> {
    let RawSpec {
        algorithm,
        n,
        points,
        frames,
        frame_lines,
        assignment,
        scheduler,
        crashes,
        goal,
        pattern,
        horizon,
        stability,
        seed,
        eps,
        sqrt_bits,
    } = raw;
    let algorithm = algorithm.ok_or("missing `algorithm` directive")?;
    let n = n.ok_or("missing `n` directive")?;
    if n == 0 {
        return Err("`n` must be at least 1".into());
    }

    let base_seed = match overrides.seed.or(seed) {
        Some(seed) => seed,
        None => env_seed()?.unwrap_or(0),
    };

    let default_tol = ToleranceConfig::default();
    let eps = match &overrides.eps {
        Some(text) => parse_eps(text)?,
        None => eps.unwrap_or_else(|| default_tol.rel_eps().clone()),
    };
    let bits = overrides
        .sqrt_bits
        .or(sqrt_bits)
        .unwrap_or(default_tol.sqrt_bits());
    let tol = ToleranceConfig::new(eps, bits).map_err(stringify)?;

    let points = match points.ok_or("missing `points` directive")? {
        PointsSpec::Explicit(points) => {
            if points.len() != n {
                return Err(format!(
                    "`points` lists {} positions but n is {n}",
                    points.len()
                ));
            }
            points
        }
        PointsSpec::Random { span, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(base_seed.wrapping_add(1)));
            (0..n)
                .map(|_| {
                    Point::from_ints(rng.gen_range(-span..=span), rng.gen_range(-span..=span))
                })
                .collect()
        }
    };

    let frames = build_frames(frames, &frame_lines, n, &points, base_seed)?;
    let assignment = build_assignment(assignment, n, &algorithm, base_seed)?;

    let robots: Vec<Robot> = (0..n)
        .map(|id| {
            let tf = assignment
                .tf_for(id)
                .expect("assignment covers every robot after validation");
            Robot::new(id, frames[id].clone(), tf)
        })
        .collect();
    let mut world = World::new(robots).map_err(stringify)?;

    let pattern = pattern
        .map(|points| {
            let config = Configuration::new(points).map_err(stringify)?;
            if config.n() != n {
                return Err(format!(
                    "`pattern` has {} points but the swarm has {n}",
                    config.n()
                ));
            }
            Ok(config)
        })
        .transpose()?;
    let needs_pattern = algorithm.iter().any(|id| {
        matches!(
            id,
            TargetFunctionId::Pf { .. } | TargetFunctionId::SctStar { .. }
        )
    });
    if needs_pattern && pattern.is_none() {
        return Err("the formation rules need a goal shape: add a `pattern` directive".into());
    }
    if let Some(config) = &pattern {
        world = world.with_pattern(config.clone());
    }

    let mut faults = FaultPlan::none();
    for &(id, time) in &crashes {
        if id >= n {
            return Err(format!("crash names robot {id}, but ids stop at {}", n - 1));
        }
        faults = faults.crash(id, time);
    }
    world.apply_faults(&faults).map_err(stringify)?;

    let goal = match goal.ok_or("missing `goal` directive")? {
        GoalSpec::GatherAtMost(k) => GoalPredicate::GatherAtMost(positive(k, "goal bound")?),
        GoalSpec::GatherAllAtMost(k) => GoalPredicate::GatherAllAtMost(positive(k, "goal bound")?),
        GoalSpec::ScatterAtLeast(k) => GoalPredicate::ScatterAtLeast(positive(k, "goal bound")?),
        GoalSpec::GatherNonFaulty => GoalPredicate::GatherNonFaulty,
        GoalSpec::Pattern => GoalPredicate::PatternSimilar(
            pattern.ok_or("goal `pattern` needs a `pattern` directive")?,
        ),
    };

    let horizon = overrides
        .horizon
        .or(horizon)
        .ok_or("horizon not set: add a `horizon` directive or pass --horizon")?;
    let stability = overrides.stability.or(stability).unwrap_or(0);

    let scheduler = match scheduler.unwrap_or(SchedSpec::Fsync) {
        SchedSpec::Fsync => SchedulerKind::Fsync,
        SchedSpec::RoundRobin => SchedulerKind::CentralRoundRobin,
        SchedSpec::Fair { p, bound, seed } => SchedulerKind::FairRandom {
            seed: seed.unwrap_or(base_seed.wrapping_add(4)),
            p,
            bound,
        },
        SchedSpec::Scripted(slots) => {
            for slot in &slots {
                if let Some(&id) = slot.iter().find(|&&id| id >= n) {
                    return Err(format!(
                        "scripted slot names robot {id}, but ids stop at {}",
                        n - 1
                    ));
                }
            }
            SchedulerKind::Scripted(slots)
        }
    };

    Ok(LoadedRun {
        world,
        scheduler,
        goal,
        horizon,
        stability,
        tol,
    })
}

fn build_frames(
    mode: Option<FramesSpec>,
    frame_lines: &[(usize, FrameParams)],
    n: usize,
    points: &[Point],
    base_seed: u64,
) -> UResult<Vec<LocalFrame>> {
    if !frame_lines.is_empty() && matches!(mode, Some(FramesSpec::Random { .. })) {
        return Err("`frames random` and explicit `frame` directives cannot be mixed".into());
    }
    let mut frames: Vec<LocalFrame> = match mode {
        None | Some(FramesSpec::Identity) => points
            .iter()
            .map(|p| LocalFrame::identity_at(p.clone()))
            .collect(),
        Some(FramesSpec::Random { seed }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(base_seed.wrapping_add(2)));
            points
                .iter()
                .map(|p| random_frame(&mut rng, p.clone()))
                .collect::<UResult<_>>()?
        }
    };
    for (id, params) in frame_lines {
        if *id >= n {
            return Err(format!(
                "frame names robot {id}, but ids stop at {}",
                n - 1
            ));
        }
        let frame = LocalFrame::from_param(&params.t, params.scale.clone(), points[*id].clone())
            .map_err(stringify)?;
        frames[*id] = if params.half { frame.half_turned() } else { frame };
    }
    Ok(frames)
}

/// Draws a frame with a rational rotation parameter in [-9, 9]/[1, 9], a
/// scale in [1, 5]/[1, 3], and a one-in-four half turn (the one rotation
/// the parameter cannot express).
fn random_frame(rng: &mut ChaCha8Rng, at: Point) -> UResult<LocalFrame> {
    let t = Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9));
    let scale = Scalar::ratio(rng.gen_range(1..=5), rng.gen_range(1..=3));
    let frame = LocalFrame::from_param(&t, scale, at).map_err(stringify)?;
    Ok(if rng.gen_ratio(1, 4) {
        frame.half_turned()
    } else {
        frame
    })
}

fn build_assignment(
    spec: Option<AssignSpec>,
    n: usize,
    algorithm: &[TargetFunctionId],
    base_seed: u64,
) -> UResult<Assignment> {
    let ids: Vec<usize> = (0..n).collect();
    match &spec.ok_or("missing `assignment` directive")? {
        AssignSpec::Explicit(pairs) => {
            for &(id, _) in pairs {
                if id >= n {
                    return Err(format!(
                        "assignment names robot {id}, but ids stop at {}",
                        n - 1
                    ));
                }
            }
            if pairs.len() != n {
                return Err(format!(
                    "assignment covers {} robots but n is {n}",
                    pairs.len()
                ));
            }
            let assignment = Assignment::from_pairs(pairs.iter().cloned());
            let declared: BTreeSet<TargetFunctionId> = algorithm.iter().copied().collect();
            if !validate_assignment(&assignment, &declared) {
                return Err(
                    "assignment must use every rule in `algorithm` and no others".into(),
                );
            }
            Ok(assignment)
        }
        AssignSpec::First => canonical_assignments(algorithm, &ids)
            .map_err(stringify)?
            .into_iter()
            .next()
            .ok_or_else(|| "no assignment exists for this rule set".into()),
        AssignSpec::Sampled { seed, cap } => {
            let seed = seed.unwrap_or(base_seed.wrapping_add(3));
            let all = enumerate_assignments(algorithm, &ids, *cap, seed).map_err(stringify)?;
            if all.is_empty() {
                return Err("no assignment exists for this rule set".into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(all[rng.gen_range(0..all.len())].clone())
        }
    }
}

fn positive(k: usize, what: &str) -> UResult<usize> {
    if k == 0 {
        return Err(format!("{what} must be at least 1"));
    }
    Ok(k)
}

fn env_seed() -> UResult<Option<u64>> {
    match env::var("SWARMKIT_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| format!("SWARMKIT_SEED is set to `{text}`, not an unsigned integer")),
        Err(env::VarError::NotPresent) => Ok(None),
        Err(env::VarError::NotUnicode(_)) => Err("SWARMKIT_SEED is not valid unicode".into()),
    }
}

pub fn stringify(e: impl Display) -> String {
    e.to_string()
}
