//! The packaged-scenario runner: executes every registered scenario whose
//! name contains the filter and checks its built-in claim.

use std::collections::BTreeMap;

use swarmkit_core::{build_scenario, scenario_registry, ToleranceConfig, Verdict};

use crate::runspec::{stringify, UResult};

/// One scenario's result line plus whether it passed.
pub struct SuiteLine {
    pub text: String,
    pub passed: bool,
}

/// Runs the matching scenarios with their registry-default parameters.
/// `filter` is a substring match; `"*"` selects everything. Zero matches is
/// an error so a typo cannot masquerade as an empty-but-green suite.
pub fn run_suite(
    filter: &str,
    horizon: Option<u64>,
    tol: &ToleranceConfig,
) -> UResult<Vec<SuiteLine>> {
    let selected: Vec<_> = scenario_registry()
        .iter()
        .filter(|info| filter == "*" || info.name.contains(filter))
        .collect();
    if selected.is_empty() {
        return Err(format!("no scenario matches `{filter}`"));
    }
    let mut lines = Vec::new();
    for info in selected {
        let mut scenario =
            build_scenario(info.name, &BTreeMap::new()).map_err(stringify)?;
        if let Some(h) = horizon {
            scenario = scenario.with_horizon(h);
        }
        let expectation = scenario.expectation().to_string();
        let outcome = scenario.run(tol).map_err(stringify)?;
        let end = match outcome.trace.verdict {
            Verdict::Reached(t) => format!("goal reached at t={t}"),
            Verdict::StasisDetected => format!(
                "fixpoint at t={}",
                outcome.trace.steps.last().map_or(0, |s| s.time)
            ),
            Verdict::HorizonExceeded => "ran to the horizon".to_string(),
        };
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        lines.push(SuiteLine {
            text: format!("{status}  {:<26} {expectation}; {end}", info.name),
            passed: outcome.passed,
        });
    }
    Ok(lines)
}
