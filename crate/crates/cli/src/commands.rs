use std::fmt::Write as _;

use bops_core::dynsim::{replicate_stats, simulate, LeftoverRule, SimConfig};
use bops_core::equilibrium::{
    global_equilibrium, outcome_at, region_map, verify_re_equilibrium, Axis, AxisParam,
    FIXED_POINT_TOL,
};
use bops_core::oracle::{brute_force_optimum, classify_point, slack, GridSpec};
use bops_core::{Belief, ModelError};
use serde::Serialize;
use thiserror::Error;

use crate::scenario::{Scenario, ScenarioError};

/// Everything that maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("bad axis spec `{spec}`: {reason}")]
    Axis { spec: String, reason: String },
    #[error("bad override `{0}` (expected q=<num>, mu_bar=<num> or xi=<num>)")]
    Override(String),
    #[error("bad grid spec `{0}` (expected q_steps:mu_steps)")]
    Grid(String),
    #[error("{0}")]
    Input(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Rendered command output and the exit code it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

#[derive(Serialize)]
struct SolveReport {
    region: String,
    q: f64,
    mu_bar: f64,
    xi: f64,
    demand: f64,
    profit: f64,
    verification: SolveVerification,
}

#[derive(Serialize)]
struct SolveVerification {
    consumer_ok: bool,
    argmax_ok: bool,
    fixed_point_residual: f64,
}

/// Global equilibrium as JSON, checked against the grid oracle.
pub fn solve(scenario: &Scenario) -> Result<Outcome, CliError> {
    let params = &scenario.params;
    let eq = global_equilibrium(params)?;
    let check = verify_re_equilibrium(params, eq.q, eq.mu_bar, Belief::new(eq.xi)?, &scenario.grid_spec())?;
    let report = SolveReport {
        region: eq.region.to_string(),
        q: eq.q,
        mu_bar: eq.mu_bar,
        xi: eq.xi,
        demand: eq.demand,
        profit: eq.profit,
        verification: SolveVerification {
            consumer_ok: check.consumer_ok,
            argmax_ok: check.argmax_ok,
            fixed_point_residual: check.fixed_point_residual,
        },
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serialises");
    text.push('\n');
    Ok(Outcome {
        text,
        exit_code: if check.all_ok() { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

/// Parses `param:lo:hi:steps`.
pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = |reason: String| CliError::Axis { spec: spec.to_string(), reason };
    let parts: Vec<&str> = spec.split(':').collect();
    let [name, lo, hi, steps] = parts[..] else {
        return Err(bad("expected param:lo:hi:steps".into()));
    };
    let param: AxisParam = name.parse().map_err(|e: ModelError| bad(e.to_string()))?;
    let lo: f64 = lo.parse().map_err(|_| bad(format!("lo `{lo}` is not a number")))?;
    let hi: f64 = hi.parse().map_err(|_| bad(format!("hi `{hi}` is not a number")))?;
    let steps: usize = steps
        .parse()
        .map_err(|_| bad(format!("steps `{steps}` is not a whole number")))?;
    Axis::new(param, lo, hi, steps).map_err(|e| bad(e.to_string()))
}

/// CSV `x,y,region`, row-major with `y` as the row.
pub fn region_map_csv(scenario: &Scenario, x: &str, y: &str) -> Result<String, CliError> {
    let map = region_map(&scenario.params, parse_axis(x)?, parse_axis(y)?)?;
    let mut out = String::from("x,y,region\n");
    for (xv, yv, cell) in map.points() {
        writeln!(out, "{xv},{yv},{cell}").expect("write to string");
    }
    Ok(out)
}

/// Replacement values for the candidate equilibrium checked by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CandidateOverrides {
    pub q: Option<f64>,
    pub mu_bar: Option<f64>,
    pub xi: Option<f64>,
}

impl CandidateOverrides {
    pub fn parse(specs: &[String]) -> Result<Self, CliError> {
        let mut out = Self::default();
        for spec in specs {
            let (key, value) = spec
                .split_once('=')
                .ok_or_else(|| CliError::Override(spec.clone()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Override(spec.clone()))?;
            match key.trim() {
                "q" => out.q = Some(value),
                "mu_bar" => out.mu_bar = Some(value),
                "xi" => out.xi = Some(value),
                _ => return Err(CliError::Override(spec.clone())),
            }
        }
        Ok(out)
    }
}

pub fn parse_grid(spec: &str, base: GridSpec) -> Result<GridSpec, CliError> {
    let (q, mu) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Grid(spec.to_string()))?;
    let grid = GridSpec {
        q_steps: q.parse().map_err(|_| CliError::Grid(spec.to_string()))?,
        mu_steps: mu.parse().map_err(|_| CliError::Grid(spec.to_string()))?,
        ..base
    };
    grid.validate()?;
    Ok(grid)
}

/// Compares the closed-form equilibrium (optionally perturbed) with the grid
/// oracle. Exit code 1 when any check fails.
pub fn verify(
    scenario: &Scenario,
    grid: Option<&str>,
    overrides: &CandidateOverrides,
) -> Result<Outcome, CliError> {
    let params = &scenario.params;
    let grid = match grid {
        Some(spec) => parse_grid(spec, scenario.grid_spec())?,
        None => scenario.grid_spec(),
    };
    let eq = global_equilibrium(params)?;
    let best = brute_force_optimum(params, &grid)?;
    let tolerance = slack(params, &grid);
    let grid_region = classify_point(params, best.q, best.mu_bar);

    let q = overrides.q.unwrap_or(eq.q);
    let mu_bar = overrides.mu_bar.unwrap_or(eq.mu_bar);
    let belief = Belief::new(overrides.xi.unwrap_or(eq.xi))?;
    let candidate = verify_re_equilibrium(params, q, mu_bar, belief, &grid)?;
    let (xi_at, demand_at) = outcome_at(params, q, mu_bar)?;

    let gap = (eq.profit - best.profit).abs();
    let gap_ok = gap <= tolerance;
    let region_ok = grid_region == eq.region;
    let passed = gap_ok && region_ok && candidate.all_ok();

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "grid            {} x {} over q in [0, {}], mu_bar in [0, {}]", grid.q_steps, grid.mu_steps, grid.q_max, params.max_wait).unwrap();
    writeln!(w, "closed form     region={} q={} mu_bar={} xi={} profit={}", eq.region, eq.q, eq.mu_bar, eq.xi, eq.profit).unwrap();
    writeln!(w, "brute force     region={} q={} mu_bar={} profit={}", grid_region, best.q, best.mu_bar, best.profit).unwrap();
    writeln!(w, "profit gap      {} (slack {}) {}", gap, tolerance, verdict(gap_ok)).unwrap();
    writeln!(w, "region match    {}", verdict(region_ok)).unwrap();
    writeln!(w, "candidate       q={} mu_bar={} xi_hat={} profit={} (xi(q, mu_bar)={} demand={})", q, mu_bar, belief.value(), candidate.candidate_profit, xi_at, demand_at).unwrap();
    writeln!(w, "  consumer      {}", verdict(candidate.consumer_ok)).unwrap();
    writeln!(w, "  argmax        gap {} (slack {}) {}", candidate.profit_gap, candidate.profit_slack, verdict(candidate.argmax_ok)).unwrap();
    writeln!(w, "  fixed point   residual {} (tol {}) {}", candidate.fixed_point_residual, FIXED_POINT_TOL, verdict(candidate.fixed_point_ok)).unwrap();
    writeln!(w, "result          {}", if passed { "PASS" } else { "FAIL" }).unwrap();

    Ok(Outcome {
        text: out,
        exit_code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateArgs {
    pub r: f64,
    pub weeks: usize,
    pub seed: u64,
    pub rule: String,
    pub reps: usize,
}

#[derive(Serialize)]
struct SimulateStats {
    r: f64,
    mean_b_fraction: f64,
    std_error: f64,
}

/// One replication: the weekly `S`/`B` table as CSV. Several: summary JSON.
pub fn simulate_output(args: &SimulateArgs) -> Result<String, CliError> {
    let rule: LeftoverRule = args.rule.parse()?;
    let config = SimConfig {
        r: args.r,
        weeks: args.weeks,
        seed: args.seed,
        rule,
        replications: args.reps,
    };
    if args.reps <= 1 {
        return Ok(simulate(&config)?.to_csv());
    }
    let stats = replicate_stats(&config)?;
    let mut text = serde_json::to_string(&SimulateStats {
        r: stats.r,
        mean_b_fraction: stats.mean_b_fraction,
        std_error: stats.std_error,
    })
    .expect("stats serialise");
    text.push('\n');
    Ok(text)
}

/// `BOPS_SEED`, when set, wins over `--seed`.
pub fn effective_seed(flag: u64, env: Option<&str>) -> Result<u64, CliError> {
    match env {
        Some(value) => value
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("BOPS_SEED must be an unsigned 64-bit integer, got `{value}`"))),
        None => Ok(flag),
    }
}
