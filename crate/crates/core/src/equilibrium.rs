//! Retailer optimisation and rational-expectations equilibrium.
//!
//! For a fixed maximum wait `μ̄` the optimal stock level falls into one of five
//! regimes, split by whether consumers use BOPS (`μ̄ ≤ c_o`) and by where the
//! in-stock probability lands:
//!
//! | regime   | `μ̄` range                              | `ξ`       | `q`                               |
//! |----------|-----------------------------------------|-----------|-----------------------------------|
//! | BOPS I   | `[c/(p−c)·c_o, c_o]`, `p ≥ 2c`          | 1         | `c_o`                             |
//! | BOPS II  | `[c/(p+c)·c_o, min{c/(p−c)·c_o, c_o}]`  | (0, 1)    | `[(pμ̄/c)² − (c_o−μ̄)²] / 4μ̄`       |
//! | BOPS III | `[0, c/(p+c)·c_o)`                      | 0         | 0                                 |
//! | Store I  | `(c_o, M]`, `p ≥ 2c`                    | 1         | `c_o`                             |
//! | Store II | `(c_o, M]`, `c < p < 2c`                | `p/2c`    | `(p/2c)² c_o`                     |
//!
//! Shared endpoints go to the lower-numbered regime; profits agree there.

use std::fmt;
use std::str::FromStr;

use crate::consumer::{choose_channel, demand};
use crate::error::{ModelError, Result};
use crate::inventory::{profit, stock_probability};
use crate::oracle::{argmax_channel, brute_force_optimum, fixed_point_residual, slack, GridSpec};
use crate::params::{invalid, Belief, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolutionRegion {
    BopsI,
    BopsII,
    BopsIII,
    StoreI,
    StoreII,
}

impl SolutionRegion {
    pub const ALL: [SolutionRegion; 5] = [
        SolutionRegion::BopsI,
        SolutionRegion::BopsII,
        SolutionRegion::BopsIII,
        SolutionRegion::StoreI,
        SolutionRegion::StoreII,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SolutionRegion::BopsI => "BOPS I",
            SolutionRegion::BopsII => "BOPS II",
            SolutionRegion::BopsIII => "BOPS III",
            SolutionRegion::StoreI => "Store I",
            SolutionRegion::StoreII => "Store II",
        }
    }

    pub fn uses_bops(self) -> bool {
        matches!(
            self,
            SolutionRegion::BopsI | SolutionRegion::BopsII | SolutionRegion::BopsIII
        )
    }

    /// Checks the price condition under which the regime can occur.
    pub fn check_admissible(self, params: &ModelParams) -> Result<()> {
        let reason = match self {
            SolutionRegion::BopsI | SolutionRegion::StoreI if !params.high_margin() => {
                "requires p ≥ 2c"
            }
            SolutionRegion::StoreII if params.high_margin() => "requires c < p < 2c",
            _ => return Ok(()),
        };
        Err(ModelError::RegionInadmissible { region: self, reason })
    }
}

impl fmt::Display for SolutionRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SolutionRegion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SolutionRegion::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| format!("unknown region `{s}`"))
    }
}

/// Best stock level for a given `μ̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionalOptimum {
    pub region: SolutionRegion,
    pub q: f64,
    pub profit: f64,
}

/// Lowest `μ̄` at which stocking anything pays: `c/(p+c)·c_o`.
pub fn bops_stocking_threshold(params: &ModelParams) -> f64 {
    let (p, c) = (params.price, params.unit_cost);
    c / (p + c) * params.delivery_fee
}

/// `μ̄` from which full availability is optimal under BOPS: `c/(p−c)·c_o`.
/// Exceeds `c_o` when `p < 2c`.
pub fn bops_full_stock_threshold(params: &ModelParams) -> f64 {
    let (p, c) = (params.price, params.unit_cost);
    c / (p - c) * params.delivery_fee
}

pub fn optimal_q_given_mu(params: &ModelParams, mu_bar: f64) -> Result<RegionalOptimum> {
    params.check_mu_bar(mu_bar)?;
    let (p, c, co) = (params.price, params.unit_cost, params.delivery_fee);
    let effort = params.effort_cost * (params.max_wait - mu_bar);

    let (region, q, gross) = if mu_bar > co {
        if params.high_margin() {
            (SolutionRegion::StoreI, co, (p - c) * co)
        } else {
            let ratio = p / (2.0 * c);
            (SolutionRegion::StoreII, ratio * ratio * co, p * p / (4.0 * c) * co)
        }
    } else if mu_bar < bops_stocking_threshold(params) {
        (SolutionRegion::BopsIII, 0.0, p * (co - mu_bar))
    } else if params.high_margin() && mu_bar >= bops_full_stock_threshold(params) {
        (SolutionRegion::BopsI, co, (p - c) * co)
    } else {
        let lead = p * mu_bar / c;
        let gap = co - mu_bar;
        let q = (lead * lead - gap * gap) / (4.0 * mu_bar);
        let inner = (p - c) / c * mu_bar + co;
        (SolutionRegion::BopsII, q.max(0.0), c / (4.0 * mu_bar) * inner * inner)
    };

    Ok(RegionalOptimum {
        region,
        q,
        profit: gross - effort,
    })
}

/// Best `μ̄` within a regime. No regime has an interior optimum: the profit is
/// linear in `μ̄` in BOPS I/III and the Store regimes, and convex in BOPS II.
pub fn local_optimal_mu(params: &ModelParams, region: SolutionRegion) -> Result<f64> {
    region.check_admissible(params)?;
    Ok(match region {
        SolutionRegion::BopsI => params.delivery_fee,
        SolutionRegion::BopsII if params.high_margin() => bops_full_stock_threshold(params),
        SolutionRegion::BopsII => params.delivery_fee,
        SolutionRegion::BopsIII => 0.0,
        SolutionRegion::StoreI | SolutionRegion::StoreII => params.max_wait,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResult {
    pub region: SolutionRegion,
    pub q: f64,
    pub mu_bar: f64,
    pub xi: f64,
    pub demand: f64,
    pub profit: f64,
}

/// Effort cost `k` at or below which the pickup-only equilibrium
/// (`q = 0`, `μ̄ = 0`) beats the best walk-in equilibrium.
pub fn effort_cost_threshold(params: &ModelParams) -> f64 {
    let (p, c, co, m) = (
        params.price,
        params.unit_cost,
        params.delivery_fee,
        params.max_wait,
    );
    if params.high_margin() {
        co / m * c
    } else {
        (1.0 - p / (4.0 * c)) * p * co / m
    }
}

/// Global optimum of the retailer under rational expectations. The retailer
/// either holds no stock and makes BOPS instant (`μ̄ = 0`), or makes no effort
/// (`μ̄ = M`) and stocks for walk-in customers.
pub fn global_equilibrium(params: &ModelParams) -> Result<EquilibriumResult> {
    params.validate()?;
    let (p, c, co, k, m) = (
        params.price,
        params.unit_cost,
        params.delivery_fee,
        params.effort_cost,
        params.max_wait,
    );

    if k <= effort_cost_threshold(params) {
        return Ok(EquilibriumResult {
            region: SolutionRegion::BopsIII,
            q: 0.0,
            mu_bar: 0.0,
            xi: 0.0,
            demand: co,
            profit: p * co - k * m,
        });
    }

    if params.high_margin() {
        Ok(EquilibriumResult {
            region: SolutionRegion::StoreI,
            q: co,
            mu_bar: m,
            xi: 1.0,
            demand: co,
            profit: (p - c) * co,
        })
    } else {
        let ratio = p / (2.0 * c);
        Ok(EquilibriumResult {
            region: SolutionRegion::StoreII,
            q: ratio * ratio * co,
            mu_bar: m,
            xi: ratio,
            demand: ratio * co,
            profit: p * p / (4.0 * c) * co,
        })
    }
}

/// Outcome of checking a candidate `(q, μ̄, ξ̂)` against the three
/// equilibrium conditions. Failures are reported, never raised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReVerification {
    /// Closed-form choices agree with utility maximisation at every sampled `t`.
    pub consumer_ok: bool,
    /// Candidate profit is within `profit_slack` of the grid optimum.
    pub argmax_ok: bool,
    /// `ξ̂ = min{q/D, 1}` holds to [`FIXED_POINT_TOL`].
    pub fixed_point_ok: bool,
    pub candidate_profit: f64,
    pub grid_profit: f64,
    pub profit_gap: f64,
    pub profit_slack: f64,
    pub fixed_point_residual: f64,
}

impl ReVerification {
    pub fn all_ok(&self) -> bool {
        self.consumer_ok && self.argmax_ok && self.fixed_point_ok
    }
}

pub const FIXED_POINT_TOL: f64 = 1e-9;

const CONSUMER_SAMPLES: usize = 2001;

pub fn verify_re_equilibrium(
    params: &ModelParams,
    q: f64,
    mu_bar: f64,
    belief: Belief,
    grid: &GridSpec,
) -> Result<ReVerification> {
    params.validate()?;
    grid.validate()?;
    let candidate_profit = profit(params, q, mu_bar)?;

    let t_max = 2.0 * params.delivery_fee;
    let mut consumer_ok = true;
    for i in 0..CONSUMER_SAMPLES {
        let t = t_max * i as f64 / (CONSUMER_SAMPLES - 1) as f64;
        let closed = choose_channel(params, belief, t, mu_bar)?.channel();
        if closed != argmax_channel(params, belief, t, mu_bar)? {
            consumer_ok = false;
            break;
        }
    }

    let grid_best = brute_force_optimum(params, grid)?;
    let profit_slack = slack(params, grid);
    let profit_gap = (candidate_profit - grid_best.profit).abs();

    let residual = fixed_point_residual(params, q, mu_bar, belief);

    Ok(ReVerification {
        consumer_ok,
        argmax_ok: profit_gap <= profit_slack,
        fixed_point_ok: residual <= FIXED_POINT_TOL,
        candidate_profit,
        grid_profit: grid_best.profit,
        profit_gap,
        profit_slack,
        fixed_point_residual: residual,
    })
}

/// Parameters that can be swept along a region-map axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisParam {
    Price,
    UnitCost,
    DeliveryFee,
    EffortCost,
    MaxWait,
    MuBar,
}

impl AxisParam {
    pub fn key(self) -> &'static str {
        match self {
            AxisParam::Price => "p",
            AxisParam::UnitCost => "c",
            AxisParam::DeliveryFee => "c_o",
            AxisParam::EffortCost => "k",
            AxisParam::MaxWait => "M",
            AxisParam::MuBar => "mu_bar",
        }
    }
}

impl FromStr for AxisParam {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "p" => AxisParam::Price,
            "c" => AxisParam::UnitCost,
            "c_o" => AxisParam::DeliveryFee,
            "k" => AxisParam::EffortCost,
            "M" => AxisParam::MaxWait,
            "mu_bar" => AxisParam::MuBar,
            other => return Err(ModelError::InvalidAxis(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: AxisParam, lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(invalid(format!(
                "axis {} needs finite lo ≤ hi, got {lo}..{hi}",
                param.key()
            )));
        }
        if steps == 0 {
            return Err(invalid(format!("axis {} needs at least one step", param.key())));
        }
        Ok(Self { param, lo, hi, steps })
    }

    /// Evenly spaced values from `lo` to `hi` inclusive; a single step is `lo`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionCell {
    Region(SolutionRegion),
    Invalid,
}

impl fmt::Display for RegionCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionCell::Region(r) => r.fmt(f),
            RegionCell::Invalid => f.write_str("invalid"),
        }
    }
}

/// Classification of a 2-D parameter slice. `cells` is row-major with `y`
/// as the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub x: Axis,
    pub y: Axis,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    pub cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn get(&self, ix: usize, iy: usize) -> RegionCell {
        self.cells[iy * self.x_values.len() + ix]
    }

    /// `(x, y, cell)` triples in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, RegionCell)> + '_ {
        self.y_values.iter().enumerate().flat_map(move |(iy, &y)| {
            self.x_values
                .iter()
                .enumerate()
                .map(move |(ix, &x)| (x, y, self.get(ix, iy)))
        })
    }
}

/// Sweeps two parameters over a grid. When either axis is `mu_bar` the
/// regime of the optimal stock level at that wait is reported; otherwise the
/// regime of the global equilibrium. The valuation tracks `p + c_o + M` with
/// the base scenario's margin, since it never affects the retailer.
pub fn region_map(base: &ModelParams, x: Axis, y: Axis) -> Result<RegionMap> {
    if x.param == y.param {
        return Err(invalid(format!("both axes sweep {}", x.param.key())));
    }
    let margin = base.valuation - base.min_full_coverage_valuation();
    let x_values = x.values();
    let y_values = y.values();

    let mut cells = Vec::with_capacity(x_values.len() * y_values.len());
    for &yv in &y_values {
        for &xv in &x_values {
            let mut params = *base;
            let mut mu_bar = None;
            for (param, value) in [(x.param, xv), (y.param, yv)] {
                match param {
                    AxisParam::Price => params.price = value,
                    AxisParam::UnitCost => params.unit_cost = value,
                    AxisParam::DeliveryFee => params.delivery_fee = value,
                    AxisParam::EffortCost => params.effort_cost = value,
                    AxisParam::MaxWait => params.max_wait = value,
                    AxisParam::MuBar => mu_bar = Some(value),
                }
            }
            params.valuation = params.min_full_coverage_valuation() + margin;
            cells.push(classify(&params, mu_bar));
        }
    }

    Ok(RegionMap {
        x,
        y,
        x_values,
        y_values,
        cells,
    })
}

fn classify(params: &ModelParams, mu_bar: Option<f64>) -> RegionCell {
    if params.validate().is_err() {
        return RegionCell::Invalid;
    }
    let region = match mu_bar {
        Some(mu) => optimal_q_given_mu(params, mu).map(|o| o.region),
        None => global_equilibrium(params).map(|e| e.region),
    };
    region.map_or(RegionCell::Invalid, RegionCell::Region)
}

/// `ξ(q, μ̄)` and the demand it induces, for reporting an arbitrary decision.
pub fn outcome_at(params: &ModelParams, q: f64, mu_bar: f64) -> Result<(f64, f64)> {
    let xi = stock_probability(params, q, mu_bar)?;
    Ok((xi.value(), demand(params, xi.as_belief(), mu_bar)))
}
