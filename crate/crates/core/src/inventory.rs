//! Self-consistent in-stock probability and retailer profit.

use crate::consumer::demand;
use crate::error::Result;
use crate::params::{invalid, Belief, ModelParams};

/// Unclamped probabilities above `1 − CLAMP_EPS` are treated as certain stock.
pub const CLAMP_EPS: f64 = 1e-12;

/// The retailer's two levers: stock level `q` and the maximum BOPS wait `μ̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StockDecision {
    pub q: f64,
    pub mu_bar: f64,
}

impl StockDecision {
    pub fn new(params: &ModelParams, q: f64, mu_bar: f64) -> Result<Self> {
        check_q(q)?;
        params.check_mu_bar(mu_bar)?;
        Ok(Self { q, mu_bar })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct StockProbability(f64);

impl StockProbability {
    pub fn value(self) -> f64 {
        self.0
    }

    /// The belief consumers hold when they expect this probability.
    pub fn as_belief(self) -> Belief {
        Belief::new(self.0).expect("stock probability lies in [0, 1]")
    }
}

fn check_q(q: f64) -> Result<()> {
    if q.is_nan() || q < 0.0 {
        return Err(invalid(format!("inventory q must be non-negative, got {q}")));
    }
    Ok(())
}

/// Cost of shortening the maximum wait from `M` to `μ̄`: `k (M − μ̄)`.
pub fn reduction_cost(params: &ModelParams, mu_bar: f64) -> Result<f64> {
    params.check_mu_bar(mu_bar)?;
    Ok(params.effort_cost * (params.max_wait - mu_bar))
}

/// In-stock probability `ξ` satisfying `ξ = min{q / D(ξ), 1}`.
///
/// With BOPS in use (`μ̄ ≤ c_o`) the fixed point is the positive root of
/// `μ̄ ξ² + (c_o − μ̄) ξ − q = 0`, evaluated as `2q / (b + √(b² + 4μ̄q))`
/// with `b = c_o − μ̄`. That form avoids cancellation for small `μ̄` and
/// reduces to `q / c_o` at `μ̄ = 0`. Without BOPS, `ξ = √(q / c_o)`.
pub fn stock_probability(params: &ModelParams, q: f64, mu_bar: f64) -> Result<StockProbability> {
    check_q(q)?;
    params.check_mu_bar(mu_bar)?;
    if q == 0.0 {
        return Ok(StockProbability(0.0));
    }
    let co = params.delivery_fee;
    let raw = if mu_bar <= co {
        let b = co - mu_bar;
        2.0 * q / (b + (b * b + 4.0 * mu_bar * q).sqrt())
    } else {
        (q / co).sqrt()
    };
    Ok(StockProbability(if raw > 1.0 - CLAMP_EPS { 1.0 } else { raw }))
}

/// Retailer profit: revenue on realised demand less stock and effort costs.
/// BOPS orders that arrive during a stockout are still fulfilled, so with
/// `μ̄ ≤ c_o` the whole demand `D(ξ)` is sold.
pub fn profit(params: &ModelParams, q: f64, mu_bar: f64) -> Result<f64> {
    let xi = stock_probability(params, q, mu_bar)?;
    let effort = reduction_cost(params, mu_bar)?;
    let sold = if mu_bar <= params.delivery_fee {
        demand(params, xi.as_belief(), mu_bar)
    } else {
        xi.value() * params.delivery_fee
    };
    Ok(params.price * sold - params.unit_cost * q - effort)
}
