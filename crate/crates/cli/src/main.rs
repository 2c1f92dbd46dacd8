//! `swarmkit` — command-line front end for the exact-arithmetic robot-swarm
//! simulator.
//!
//! Four commands: `run` executes a run file or a packaged scenario and
//! writes a replayable trace; `analyze` reports the symmetry and order
//! structure of a configuration; `suite` checks every packaged scenario's
//! built-in claim; `render` draws a trace as a static SVG.
//!
//! Exit status: 0 when the goal or expectation holds, 1 when the execution
//! finished but the claim does not hold, 2 for usage, parse, and input
//! errors.

mod analyze;
mod render;
mod runspec;
mod suite;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::fs;

use clap::{ArgGroup, Args, Parser, Subcommand};
use swarmkit_core::{
    build_scenario, make_scheduler, run, ExecutionTrace, Point, Verdict,
};

use runspec::{resolve_tolerance, stringify, LoadedRun, Overrides, UResult};

#[derive(Parser)]
#[command(
    name = "swarmkit",
    version,
    about = "Exact-arithmetic simulator for look-compute-move robot swarms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run file or a packaged scenario and write its trace
    Run(RunArgs),
    /// Report the symmetry and order structure of a configuration
    Analyze(AnalyzeArgs),
    /// Run packaged scenarios and check their built-in claims
    Suite(SuiteArgs),
    /// Draw a recorded trace as a static SVG
    Render(RenderArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).args(["file", "scenario"]))]
struct RunArgs {
    /// Run file, in line format or JSON
    file: Option<PathBuf>,
    /// Packaged scenario name (list them with `swarmkit suite`)
    #[arg(long)]
    scenario: Option<String>,
    /// Scenario parameter override, repeatable (e.g. --param n=6)
    #[arg(long, value_name = "KEY=VALUE", requires = "scenario")]
    param: Vec<String>,
    /// Write the trace here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Base seed for generators without their own ($SWARMKIT_SEED as
    /// fallback; run files only — scenarios are deterministic)
    #[arg(long)]
    seed: Option<u64>,
    /// Slot budget, overriding the file or scenario value
    #[arg(long)]
    horizon: Option<u64>,
    /// Extra slots the goal must keep holding (run files only)
    #[arg(long)]
    stability: Option<u64>,
    /// Relative tolerance, written 2^-K or as a rational
    #[arg(long)]
    eps: Option<String>,
    /// Square-root precision in bits
    #[arg(long, value_name = "BITS")]
    sqrt_bits: Option<u32>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Configuration file: whitespace-separated [x,y] literals
    config: PathBuf,
    /// Also print the configuration as seen from this support point
    #[arg(long, value_name = "[X,Y]")]
    view: Option<String>,
    /// Relative tolerance, written 2^-K or as a rational
    #[arg(long)]
    eps: Option<String>,
    /// Square-root precision in bits
    #[arg(long, value_name = "BITS")]
    sqrt_bits: Option<u32>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Substring to select scenarios by name; `*` runs everything
    #[arg(default_value = "*")]
    filter: String,
    /// Restate every scenario's claim over this horizon
    #[arg(long)]
    horizon: Option<u64>,
    /// Relative tolerance, written 2^-K or as a rational
    #[arg(long)]
    eps: Option<String>,
    /// Square-root precision in bits
    #[arg(long, value_name = "BITS")]
    sqrt_bits: Option<u32>,
}

#[derive(Args)]
struct RenderArgs {
    /// Trace file written by `swarmkit run`
    trace: PathBuf,
    /// Output SVG path
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("swarmkit: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> UResult<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Suite(args) => cmd_suite(args),
        Command::Render(args) => cmd_render(args),
    }
}

// ---------------------------------------------------------------------
// run
// ---------------------------------------------------------------------

fn cmd_run(args: RunArgs) -> UResult<ExitCode> {
    if let Some(name) = &args.scenario {
        return run_scenario(name, &args);
    }
    let file = args
        .file
        .as_ref()
        .expect("clap requires a file when --scenario is absent");
    let overrides = Overrides {
        seed: args.seed,
        horizon: args.horizon,
        stability: args.stability,
        eps: args.eps.clone(),
        sqrt_bits: args.sqrt_bits,
    };
    let LoadedRun {
        world,
        scheduler,
        goal,
        horizon,
        stability,
        tol,
    } = runspec::load(file, &overrides)?;

    let mut scheduler = make_scheduler(scheduler).map_err(stringify)?;
    let trace = run(world, &mut scheduler, &goal, horizon, stability, &tol).map_err(stringify)?;

    let mut summary = vec![describe_verdict(&trace)];
    if let Some(stable) = trace.goal_stable {
        if stability > 0 {
            summary.push(if stable {
                format!("stability: goal held through all {stability} extra slots")
            } else {
                format!("stability: goal broke inside the {stability}-slot window")
            });
        }
    }
    summary.push(describe_final(&trace));

    let satisfied =
        matches!(trace.verdict, Verdict::Reached(_)) && trace.goal_stable != Some(false);
    emit_trace_and_summary(&trace, args.output.as_deref(), &summary)?;
    Ok(exit_for(satisfied))
}

fn run_scenario(name: &str, args: &RunArgs) -> UResult<ExitCode> {
    let mut params = BTreeMap::new();
    for pair in &args.param {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("bad --param `{pair}`: expected KEY=VALUE"))?;
        let value: u64 = value
            .parse()
            .map_err(|_| format!("bad --param `{pair}`: value is not an unsigned integer"))?;
        params.insert(key.to_string(), value);
    }
    let tol = resolve_tolerance(args.eps.as_deref(), args.sqrt_bits)?;
    let mut scenario = build_scenario(name, &params).map_err(stringify)?;
    if let Some(h) = args.horizon {
        scenario = scenario.with_horizon(h);
    }
    let expectation = scenario.expectation().to_string();
    let outcome = scenario.run(&tol).map_err(stringify)?;

    let summary = vec![
        format!("scenario: {name}"),
        format!("expectation: {expectation}"),
        format!(
            "{} — {}",
            describe_verdict(&outcome.trace),
            if outcome.passed { "PASS" } else { "FAIL" }
        ),
    ];
    emit_trace_and_summary(&outcome.trace, args.output.as_deref(), &summary)?;
    Ok(exit_for(outcome.passed))
}

fn describe_verdict(trace: &ExecutionTrace) -> String {
    let last = trace.steps.last().map_or(0, |s| s.time);
    match trace.verdict {
        Verdict::Reached(t) => format!("verdict: goal reached at t={t}"),
        Verdict::StasisDetected => format!("verdict: fixpoint at t={last}, goal unmet"),
        Verdict::HorizonExceeded => format!("verdict: horizon exceeded at t={last}, goal unmet"),
    }
}

fn describe_final(trace: &ExecutionTrace) -> String {
    let last = trace.steps.last().expect("a trace records its start");
    let mut support = last.positions.clone();
    support.sort_unstable();
    support.dedup();
    format!(
        "final: {} robots on {} point(s); {} snapshots",
        last.positions.len(),
        support.len(),
        trace.steps.len()
    )
}

/// The trace goes to the output file when one is named — then the summary
/// may use stdout — otherwise the trace owns stdout and the summary moves
/// to stderr, keeping piped output byte-exact either way.
fn emit_trace_and_summary(
    trace: &ExecutionTrace,
    output: Option<&std::path::Path>,
    summary: &[String],
) -> UResult<()> {
    let text = trace.to_text();
    match output {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| format!("cannot write trace `{}`: {e}", path.display()))?;
            for line in summary {
                println!("{line}");
            }
            println!("trace: {} bytes -> {}", text.len(), path.display());
        }
        None => {
            print!("{text}");
            for line in summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

fn exit_for(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

fn cmd_analyze(args: AnalyzeArgs) -> UResult<ExitCode> {
    let tol = resolve_tolerance(args.eps.as_deref(), args.sqrt_bits)?;
    let config = analyze::read_config(&args.config)?;
    let query = args
        .view
        .as_deref()
        .map(|text| Point::from_str(text).map_err(stringify))
        .transpose()?;
    print!("{}", analyze::report(&config, query.as_ref(), &tol)?);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------

fn cmd_suite(args: SuiteArgs) -> UResult<ExitCode> {
    let tol = resolve_tolerance(args.eps.as_deref(), args.sqrt_bits)?;
    let lines = suite::run_suite(&args.filter, args.horizon, &tol)?;
    let passed = lines.iter().filter(|l| l.passed).count();
    for line in &lines {
        println!("{}", line.text);
    }
    println!("suite: {passed} of {} scenarios passed", lines.len());
    Ok(exit_for(passed == lines.len()))
}

// ---------------------------------------------------------------------
// render
// ---------------------------------------------------------------------

fn cmd_render(args: RenderArgs) -> UResult<ExitCode> {
    let text = fs::read_to_string(&args.trace)
        .map_err(|e| format!("cannot read trace `{}`: {e}", args.trace.display()))?;
    let trace = ExecutionTrace::parse_text(&text).map_err(stringify)?;
    let svg = render::render_svg(&trace)?;
    fs::write(&args.output, &svg)
        .map_err(|e| format!("cannot write SVG `{}`: {e}", args.output.display()))?;
    println!(
        "rendered {} snapshots -> {}",
        trace.steps.len(),
        args.output.display()
    );
    Ok(ExitCode::SUCCESS)
}
