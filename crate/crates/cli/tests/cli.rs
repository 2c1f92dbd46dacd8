//! End-to-end tests of the `swarmkit` binary: every command is exercised
//! through real process spawns, checking output, written files, and the
//! 0/1/2 exit-status contract (0 = claim holds, 1 = claim fails, 2 =
//! usage/parse error).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use swarmkit_core::{ExecutionTrace, Verdict};
use tempfile::TempDir;

/// Spawns the binary with a clean seed environment so an inherited
/// `SWARMKIT_SEED` can never skew a test; env tests set it explicitly.
fn swarmkit(dir: &Path, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_swarmkit"));
    cmd.current_dir(dir).env_remove("SWARMKIT_SEED").args(args);
    cmd.output().expect("failed to spawn swarmkit")
}

fn swarmkit_with_env(dir: &Path, env: &[(&str, &str)], args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_swarmkit"));
    cmd.current_dir(dir).env_remove("SWARMKIT_SEED").args(args);
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("failed to spawn swarmkit")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

const GATHER_RUN: &str = "\
swarmkit-run 1
# five robots, one gathering rule, random placement and frames
algorithm 2gat
n 5
points random box=5 seed=11
frames random
assignment sampled
scheduler fair p=1/2 bound=8
goal gather<=1
horizon 2000
stability 20
seed 42
";

fn write(dir: &Path, name: &str, content: &str) {
    fs::write(dir.join(name), content).expect("write test file");
}

// ---------------------------------------------------------------------
// run
// ---------------------------------------------------------------------

#[test]
fn run_gathers_writes_a_lossless_trace_and_replays_identically() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "gather.run", GATHER_RUN);

    let out = swarmkit(dir.path(), &["run", "gather.run", "-o", "a.trace"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("goal reached"));

    let bytes = fs::read_to_string(dir.path().join("a.trace")).unwrap();
    let trace = ExecutionTrace::parse_text(&bytes).expect("trace parses back");
    assert!(matches!(trace.verdict, Verdict::Reached(_)));
    assert_eq!(trace.goal_stable, Some(true));
    assert_eq!(trace.to_text(), bytes, "parse -> serialize is lossless");

    let again = swarmkit(dir.path(), &["run", "gather.run", "-o", "b.trace"]);
    assert_eq!(code(&again), 0);
    let rerun = fs::read_to_string(dir.path().join("b.trace")).unwrap();
    assert_eq!(rerun, bytes, "a fixed seed replays byte-for-byte");
}

#[test]
fn json_run_file_produces_the_identical_trace() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "gather.run", GATHER_RUN);
    write(
        dir.path(),
        "gather.json",
        r#"{
  "algorithm": "2gat",
  "n": 5,
  "points": "random box=5 seed=11",
  "frames": "random",
  "assignment": "sampled",
  "scheduler": "fair p=1/2 bound=8",
  "goal": "gather<=1",
  "horizon": 2000,
  "stability": 20,
  "seed": 42
}
"#,
    );
    let line = swarmkit(dir.path(), &["run", "gather.run", "-o", "line.trace"]);
    let json = swarmkit(dir.path(), &["run", "gather.json", "-o", "json.trace"]);
    assert_eq!(code(&line), 0);
    assert_eq!(code(&json), 0, "stderr: {}", stderr(&json));
    let a = fs::read(dir.path().join("line.trace")).unwrap();
    let b = fs::read(dir.path().join("json.trace")).unwrap();
    assert_eq!(a, b, "both encodings assemble the same execution");
}

#[test]
fn trace_goes_to_stdout_without_an_output_file() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "gather.run", GATHER_RUN);
    let piped = swarmkit(dir.path(), &["run", "gather.run"]);
    assert_eq!(code(&piped), 0);
    let out = swarmkit(dir.path(), &["run", "gather.run", "-o", "f.trace"]);
    assert_eq!(code(&out), 0);
    let file = fs::read_to_string(dir.path().join("f.trace")).unwrap();
    assert_eq!(stdout(&piped), file, "stdout carries exactly the trace");
    assert!(stderr(&piped).contains("goal reached"), "summary on stderr");
}

#[test]
fn two_rule_gathering_escapes_a_balanced_pair() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "pair.run",
        "swarmkit-run 1
algorithm gat:1 gat:2
n 4
points [0,0] [0,0] [3,0] [3,0]
frames identity
assignment 0:gat:1 1:gat:2 2:gat:1 3:gat:2
scheduler fair seed=5 p=1/2 bound=8
goal gather<=1
horizon 2000
",
    );
    let out = swarmkit(dir.path(), &["run", "pair.run", "-o", "pair.trace"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("goal reached"));
}

#[test]
fn zero_denominator_rational_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "bad.run",
        "swarmkit-run 1
algorithm 2gat
n 2
points [1/0,0] [0,0]
assignment sampled
goal gather<=1
horizon 10
",
    );
    let out = swarmkit(dir.path(), &["run", "bad.run"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 4"), "stderr: {}", stderr(&out));
}

#[test]
fn usage_errors_from_bad_run_files_exit_2() {
    let dir = TempDir::new().unwrap();
    // Missing horizon: rejected until the flag supplies one.
    // Three distinct points are favorable for the gathering rule; two
    // would form a balanced pair and freeze.
    write(
        dir.path(),
        "nohorizon.run",
        "swarmkit-run 1
algorithm 2gat
n 3
points [0,0] [1,0] [5,1]
assignment sampled
goal gather<=1
",
    );
    let out = swarmkit(dir.path(), &["run", "nohorizon.run"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("horizon"));
    let with_flag = swarmkit(dir.path(), &["run", "nohorizon.run", "--horizon", "100"]);
    assert_eq!(code(&with_flag), 0, "stderr: {}", stderr(&with_flag));

    // Non-surjective assignment: a declared rule nobody runs.
    write(
        dir.path(),
        "nonsurjective.run",
        "swarmkit-run 1
algorithm gat:1 gat:2
n 2
points [0,0] [1,0]
assignment 0:gat:1 1:gat:1
goal gather<=1
horizon 10
",
    );
    let out = swarmkit(dir.path(), &["run", "nonsurjective.run"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("every rule"), "stderr: {}", stderr(&out));

    // Unknown directive.
    write(
        dir.path(),
        "unknown.run",
        "swarmkit-run 1
algorithm 2gat
bogus 7
n 2
points [0,0] [1,0]
assignment sampled
goal gather<=1
horizon 10
",
    );
    let out = swarmkit(dir.path(), &["run", "unknown.run"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bogus"));
}

#[test]
fn unmet_goal_exits_1() {
    let dir = TempDir::new().unwrap();
    // A balanced pair under the single gathering rule freezes, so the
    // gathering goal can never be met: the run ends in a fixpoint.
    write(
        dir.path(),
        "stuck.run",
        "swarmkit-run 1
algorithm 2gat
n 4
points [0,0] [0,0] [2,0] [2,0]
assignment sampled
scheduler fsync
goal gather<=1
horizon 50
",
    );
    let out = swarmkit(dir.path(), &["run", "stuck.run"]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("fixpoint"));
}

// ---------------------------------------------------------------------
// run --scenario
// ---------------------------------------------------------------------

#[test]
fn scenario_mode_runs_passes_and_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let out = swarmkit(
        dir.path(),
        &[
            "run",
            "--scenario",
            "fgp_crash_stuck",
            "--param",
            "n=5",
            "-o",
            "s.trace",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("PASS"));
    let bytes = fs::read_to_string(dir.path().join("s.trace")).unwrap();
    ExecutionTrace::parse_text(&bytes).expect("scenario trace parses");

    let unknown = swarmkit(dir.path(), &["run", "--scenario", "nope"]);
    assert_eq!(code(&unknown), 2);
    assert!(stderr(&unknown).contains("unknown scenario"));

    let bad_key = swarmkit(
        dir.path(),
        &["run", "--scenario", "fgp_crash_stuck", "--param", "bogus=1"],
    );
    assert_eq!(code(&bad_key), 2);

    let bad_value = swarmkit(
        dir.path(),
        &["run", "--scenario", "fgp_crash_stuck", "--param", "n=x"],
    );
    assert_eq!(code(&bad_value), 2);
}

// ---------------------------------------------------------------------
// seeds
// ---------------------------------------------------------------------

#[test]
fn env_seed_is_the_fallback_and_the_flag_wins() {
    let dir = TempDir::new().unwrap();
    // No `seed` directive, so generators without their own seed fall back
    // to the environment.
    let noseed: String = GATHER_RUN
        .lines()
        .filter(|l| !l.starts_with("seed"))
        .map(|l| format!("{l}\n"))
        .collect();
    write(dir.path(), "noseed.run", &noseed);

    let env7a = swarmkit_with_env(
        dir.path(),
        &[("SWARMKIT_SEED", "7")],
        &["run", "noseed.run", "-o", "a.trace"],
    );
    let env7b = swarmkit_with_env(
        dir.path(),
        &[("SWARMKIT_SEED", "7")],
        &["run", "noseed.run", "-o", "b.trace"],
    );
    assert_eq!(code(&env7a), 0, "stderr: {}", stderr(&env7a));
    assert_eq!(code(&env7b), 0);
    let a = fs::read(dir.path().join("a.trace")).unwrap();
    let b = fs::read(dir.path().join("b.trace")).unwrap();
    assert_eq!(a, b, "same env seed, same bytes");

    let flagged = swarmkit_with_env(
        dir.path(),
        &[("SWARMKIT_SEED", "99")],
        &["run", "noseed.run", "--seed", "7", "-o", "c.trace"],
    );
    assert_eq!(code(&flagged), 0);
    let c = fs::read(dir.path().join("c.trace")).unwrap();
    assert_eq!(a, c, "--seed beats the environment");

    let garbage = swarmkit_with_env(
        dir.path(),
        &[("SWARMKIT_SEED", "gibberish")],
        &["run", "noseed.run"],
    );
    assert_eq!(code(&garbage), 2);
    assert!(stderr(&garbage).contains("SWARMKIT_SEED"));
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

#[test]
fn analyze_reports_symmetry_and_views() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "square.cfg", "[0,0] [2,0] [2,2] [0,2]\n");
    let out = swarmkit(dir.path(), &["analyze", "square.cfg", "--view", "[0,0]"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("k        4"), "got: {text}");
    assert!(text.contains("sigma    4"));
    assert!(text.contains("center   [1,1]"));
    assert!(text.contains("orbit 1  [0,0] [0,2] [2,0] [2,2]"));
    assert!(text.contains("view from [0,0]: [0,0] [1,-1] [1,1] [2,0]"));

    // A stacked singleton: rotation order 0, symmetricity n.
    write(dir.path(), "stack.cfg", "[5,5]\n[5,5]\n[5,5]\n");
    let out = swarmkit(dir.path(), &["analyze", "stack.cfg"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("k        0"), "got: {text}");
    assert!(text.contains("sigma    3"));
    assert!(text.contains("[5,5]x3"));
}

#[test]
fn analyze_prints_the_point_order_when_asymmetric() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "asym.cfg", "[-1,-2] [-3,0] [0,-1] [1,0]\n");
    let out = swarmkit(dir.path(), &["analyze", "asym.cfg"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("k        1"), "got: {text}");
    // The point nearest the enclosing-circle center outranks the rest.
    assert!(text.contains("largest  [0,-1]"));
    let order = text
        .lines()
        .find(|l| l.starts_with("order"))
        .expect("order line present when k = 1");
    assert!(order.contains("[0,-1] >"));
    assert_eq!(order.matches(" > ").count(), 3, "full four-point chain");
}

#[test]
fn analyze_rejects_empty_and_bad_queries() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "empty.cfg", "# nothing here\n");
    let out = swarmkit(dir.path(), &["analyze", "empty.cfg"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("empty configuration"));

    write(dir.path(), "square.cfg", "[0,0] [2,0] [2,2] [0,2]\n");
    let off = swarmkit(dir.path(), &["analyze", "square.cfg", "--view", "[9,9]"]);
    assert_eq!(code(&off), 2, "view point must lie in the support");
}

// ---------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------

#[test]
fn suite_runs_everything_and_filters_by_substring() {
    let dir = TempDir::new().unwrap();
    let all = swarmkit(dir.path(), &["suite"]);
    assert_eq!(code(&all), 0, "stderr: {}", stderr(&all));
    let text = stdout(&all);
    assert!(text.contains("suite: 5 of 5 scenarios passed"), "got: {text}");
    assert_eq!(text.matches("PASS").count(), 5);

    let filtered = swarmkit(dir.path(), &["suite", "scatter"]);
    assert_eq!(code(&filtered), 0);
    assert!(stdout(&filtered).contains("suite: 2 of 2 scenarios passed"));

    let unknown = swarmkit(dir.path(), &["suite", "not_a_scenario"]);
    assert_eq!(code(&unknown), 2);
    assert!(stderr(&unknown).contains("no scenario matches"));
}

// ---------------------------------------------------------------------
// render
// ---------------------------------------------------------------------

#[test]
fn render_draws_trajectories_multiplicities_and_crashes() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "gather.run", GATHER_RUN);
    let run = swarmkit(dir.path(), &["run", "gather.run", "-o", "g.trace"]);
    assert_eq!(code(&run), 0);
    let out = swarmkit(dir.path(), &["render", "g.trace", "g.svg"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let svg = fs::read_to_string(dir.path().join("g.svg")).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.contains("<polyline"), "trajectories are polylines");
    assert!(svg.contains(">x5<"), "five robots share the final point");
    assert!(svg.contains("goal reached"), "caption names the verdict");

    // A crashed robot gets an X mark.
    let crashed = swarmkit(
        dir.path(),
        &["run", "--scenario", "fgp_crash_stuck", "-o", "c.trace"],
    );
    assert_eq!(code(&crashed), 0);
    let out = swarmkit(dir.path(), &["render", "c.trace", "c.svg"]);
    assert_eq!(code(&out), 0);
    let svg = fs::read_to_string(dir.path().join("c.svg")).unwrap();
    assert!(svg.contains("class=\"crash\""));

    write(dir.path(), "bad.trace", "not a trace\n");
    let bad = swarmkit(dir.path(), &["render", "bad.trace", "x.svg"]);
    assert_eq!(code(&bad), 2);
}
