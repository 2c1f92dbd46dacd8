//! The configuration report: symmetry and order structure of a multiset of
//! points, printed as aligned `label value` lines.

use std::path::Path;
use std::str::FromStr;
use std::{fmt::Write as _, fs};

use swarmkit_core::{
    orbits, rotation_order, symmetricity, view, Configuration, Point, ToleranceConfig,
};

use crate::runspec::{stringify, UResult};

/// Reads a configuration file: whitespace- or newline-separated `[x,y]`
/// literals, with `#` comments.
pub fn read_config(path: &Path) -> UResult<Configuration> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read configuration `{}`: {e}", path.display()))?;
    let mut points = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            points.push(Point::from_str(token).map_err(stringify)?);
        }
    }
    if points.is_empty() {
        return Err("empty configuration: expected at least one [x,y] literal".into());
    }
    Configuration::new(points).map_err(stringify)
}

/// Renders the report. Orbits come out highest-ranked first; with rotation
/// order 1 every orbit is a singleton, so their sequence *is* the point
/// order, and the report spells it out as a chain.
pub fn report(
    config: &Configuration,
    query: Option<&Point>,
    tol: &ToleranceConfig,
) -> UResult<String> {
    let k = rotation_order(config, tol);
    let sigma = symmetricity(config, tol);
    let partition = orbits(config, tol);
    let center = &config.sec().center;

    let mut out = String::new();
    let mut line = |label: &str, value: String| {
        let _ = writeln!(out, "{label:<8} {value}");
    };
    line("n", config.n().to_string());
    line("m", config.m().to_string());
    line("k", k.to_string());
    line("sigma", sigma.to_string());
    line("center", center.to_string());
    for (index, orbit) in partition.orbits.iter().enumerate() {
        let members: Vec<String> = orbit
            .iter()
            .map(|p| {
                let mult = config.multiplicity(p);
                if mult > 1 {
                    format!("{p}x{mult}")
                } else {
                    p.to_string()
                }
            })
            .collect();
        line(&format!("orbit {}", index + 1), members.join(" "));
    }
    if k == 1 {
        let chain: Vec<String> = partition
            .orbits
            .iter()
            .map(|orbit| orbit[0].to_string())
            .collect();
        line("largest", chain[0].clone());
        line("order", chain.join(" > "));
    }
    if let Some(q) = query {
        let seen = view(config, q, tol).map_err(stringify)?;
        let coords: Vec<String> = seen.coords.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "view from {q}: {}", coords.join(" "));
    }
    Ok(out)
}
