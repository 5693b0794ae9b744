//! Brute-force counterparts of the closed forms.
//!
//! Everything here is deliberately naive: exhaustive grids, bisection and
//! midpoint sums built directly from the utility and profit definitions.

use crate::consumer::{
    choose_channel, utility_bops, utility_online, utility_store, Channel,
};
use crate::equilibrium::SolutionRegion;
use crate::error::Result;
use crate::inventory::profit;
use crate::params::{invalid, Belief, ModelParams};

pub const DEFAULT_GRID_STEPS: usize = 400;
pub const DEFAULT_XI_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub q_max: f64,
    pub q_steps: usize,
    pub mu_steps: usize,
}

impl GridSpec {
    /// 400 × 400 over `q ∈ [0, 2c_o]`, `μ̄ ∈ [0, M]`. No optimum stocks more
    /// than `c_o`.
    pub fn default_for(params: &ModelParams) -> Self {
        Self {
            q_max: 2.0 * params.delivery_fee,
            q_steps: DEFAULT_GRID_STEPS,
            mu_steps: DEFAULT_GRID_STEPS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q_max.is_finite() && self.q_max > 0.0) {
            return Err(invalid(format!("grid q_max must be positive, got {}", self.q_max)));
        }
        if self.q_steps < 2 || self.mu_steps < 2 {
            return Err(invalid("grid needs at least 2 steps per axis"));
        }
        Ok(())
    }

    pub fn q_spacing(&self) -> f64 {
        self.q_max / (self.q_steps - 1) as f64
    }

    pub fn mu_spacing(&self, params: &ModelParams) -> f64 {
        params.max_wait / (self.mu_steps - 1) as f64
    }
}

/// Tolerance for comparing a closed-form optimum with the grid optimum:
/// `(c + p)` times the coarser grid spacing.
pub fn slack(params: &ModelParams, grid: &GridSpec) -> f64 {
    let spacing = grid.q_spacing().max(grid.mu_spacing(params));
    (params.unit_cost + params.price) * spacing
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    pub q: f64,
    pub mu_bar: f64,
    pub profit: f64,
}

/// Exhaustive search of the profit over the grid. Ties keep the point that
/// is smallest in `(μ̄, q)` lexicographic order.
pub fn brute_force_optimum(params: &ModelParams, grid: &GridSpec) -> Result<GridOptimum> {
    grid.validate()?;
    let m = params.max_wait;
    let mut best = GridOptimum {
        q: 0.0,
        mu_bar: 0.0,
        profit: f64::NEG_INFINITY,
    };
    for j in 0..grid.mu_steps {
        let mu_bar = (m * j as f64 / (grid.mu_steps - 1) as f64).min(m);
        for i in 0..grid.q_steps {
            let q = grid.q_max * i as f64 / (grid.q_steps - 1) as f64;
            let value = profit(params, q, mu_bar)?;
            if value > best.profit {
                best = GridOptimum { q, mu_bar, profit: value };
            }
        }
    }
    Ok(best)
}

/// Realised demand `ξ·D(ξ)` net of stock, monotone non-decreasing in `ξ`.
fn stock_gap(params: &ModelParams, q: f64, mu_bar: f64, xi: f64) -> f64 {
    let co = params.delivery_fee;
    let demand = if mu_bar <= co {
        co - (1.0 - xi) * mu_bar
    } else {
        xi * co
    };
    xi * demand - q
}

/// Solves `ξ·D(ξ) = q` on `[0, 1]` by bisection, returning 1 when the stock
/// covers full demand. Bisection runs until both the residual and the
/// bracket width are within `tol`.
pub fn fixed_point_xi(params: &ModelParams, q: f64, mu_bar: f64, tol: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    if stock_gap(params, q, mu_bar, 1.0) <= 0.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gap = stock_gap(params, q, mu_bar, mid);
        if gap.abs() <= tol && hi - lo <= tol {
            return mid;
        }
        if gap > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `|ξ̂ − min{q/D(ξ̂), 1}|`. With no stock the consistent belief is 0; with
/// stock but no demand it is 1.
pub fn fixed_point_residual(params: &ModelParams, q: f64, mu_bar: f64, belief: Belief) -> f64 {
    let co = params.delivery_fee;
    let xi = belief.value();
    let demand = if mu_bar <= co {
        co - (1.0 - xi) * mu_bar
    } else {
        xi * co
    };
    let implied = if q <= 0.0 {
        0.0
    } else if demand <= 0.0 {
        1.0
    } else {
        (q / demand).min(1.0)
    };
    (xi - implied).abs()
}

/// Utility-maximising channel with the tie-break BOPS > Store > Online.
///
/// Two ties are settled by the belief itself. At `ξ̂ = 1` BOPS and walking in
/// are the same purchase; the consumer walks in when `μ̄ > c_o`. At `ξ̂ = 0` a
/// store visit can never succeed and is not chosen over buying online.
pub fn argmax_channel(params: &ModelParams, belief: Belief, t: f64, mu_bar: f64) -> Result<Channel> {
    let bops = utility_bops(params, belief, t, mu_bar)?;
    let store = utility_store(params, belief, t, mu_bar);
    let online = utility_online(params);
    let top = bops.max(store).max(online);

    Ok(if bops == top && store == top {
        if belief.value() == 1.0 && mu_bar > params.delivery_fee {
            Channel::Store
        } else {
            Channel::Bops
        }
    } else if bops == top {
        Channel::Bops
    } else if store == top {
        if belief.value() == 0.0 && online == top {
            Channel::Online
        } else {
            Channel::Store
        }
    } else {
        Channel::Online
    })
}

/// Midpoint-rule measure of `{t ∈ [0, 2c_o] : consumer buys from the retailer}`.
pub fn demand_by_integration(
    params: &ModelParams,
    belief: Belief,
    mu_bar: f64,
    steps: usize,
) -> Result<f64> {
    let h = 2.0 * params.delivery_fee / steps as f64;
    let mut count = 0usize;
    for i in 0..steps {
        let t = (i as f64 + 0.5) * h;
        if choose_channel(params, belief, t, mu_bar)?.buys_from_retailer() {
            count += 1;
        }
    }
    Ok(count as f64 * h)
}

/// Consumers gained by BOPS: integral over `μ̄ ∈ [0, c_o]` of the demand with
/// BOPS less the walk-in-only demand `ξ̂ c_o`.
pub fn gain_by_integration(params: &ModelParams, belief: Belief, steps: usize) -> Result<f64> {
    let co = params.delivery_fee;
    let h = co / steps as f64;
    let baseline = belief.value() * co;
    let mut total = 0.0;
    for j in 0..steps {
        let mu_bar = (j as f64 + 0.5) * h;
        total += demand_by_integration(params, belief, mu_bar, steps)? - baseline;
    }
    Ok(total * h)
}

/// Regime of an arbitrary decision, read off the bisected in-stock
/// probability (BOPS in use) or the price condition (walk-in).
pub fn classify_point(params: &ModelParams, q: f64, mu_bar: f64) -> SolutionRegion {
    if mu_bar > params.delivery_fee {
        return if params.high_margin() {
            SolutionRegion::StoreI
        } else {
            SolutionRegion::StoreII
        };
    }
    let xi = fixed_point_xi(params, q, mu_bar, DEFAULT_XI_TOL);
    if xi <= 1e-9 {
        SolutionRegion::BopsIII
    } else if xi >= 1.0 - 1e-9 {
        SolutionRegion::BopsI
    } else {
        SolutionRegion::BopsII
    }
}
