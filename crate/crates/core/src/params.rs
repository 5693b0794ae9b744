//! Exogenous model parameters and consumer beliefs.

use crate::error::{ModelError, Result};

/// The retailer's exogenous environment.
///
/// Fields are public so formulas can be evaluated on arbitrary inputs;
/// solvers and scenario loading go through [`ModelParams::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Retail price `p`.
    pub price: f64,
    /// Unit inventory cost `c`.
    pub unit_cost: f64,
    /// Online delivery fee `c_o`.
    pub delivery_fee: f64,
    /// Marginal cost `k` of shortening the maximum BOPS wait by one unit.
    pub effort_cost: f64,
    /// Maximum waiting disutility `M` when the retailer makes no effort.
    pub max_wait: f64,
    /// Consumer valuation `v`.
    pub valuation: f64,
}

impl ModelParams {
    /// Builds and validates a parameter set. A missing valuation defaults to
    /// `p + c_o + M`, the smallest value for which every consumer buys.
    pub fn new(
        price: f64,
        unit_cost: f64,
        delivery_fee: f64,
        effort_cost: f64,
        max_wait: f64,
        valuation: Option<f64>,
    ) -> Result<Self> {
        let params = Self {
            price,
            unit_cost,
            delivery_fee,
            effort_cost,
            max_wait,
            valuation: valuation.unwrap_or(price + delivery_fee + max_wait),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("p", self.price),
            ("c", self.unit_cost),
            ("c_o", self.delivery_fee),
            ("k", self.effort_cost),
            ("M", self.max_wait),
            ("v", self.valuation),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(invalid(format!("{name} must be finite")));
            }
        }
        if self.unit_cost <= 0.0 {
            return Err(invalid("c must satisfy c > 0"));
        }
        if self.price <= self.unit_cost {
            return Err(invalid("p must satisfy p > c"));
        }
        if !(0.0 <= self.effort_cost && self.effort_cost < self.price) {
            return Err(invalid("k must satisfy 0 ≤ k < p"));
        }
        if self.delivery_fee <= 0.0 {
            return Err(invalid("c_o must satisfy c_o > 0"));
        }
        if self.max_wait <= self.delivery_fee {
            return Err(invalid("M must satisfy M > c_o"));
        }
        if self.valuation < self.min_full_coverage_valuation() {
            return Err(invalid("v must satisfy v − p ≥ c_o + M"));
        }
        Ok(())
    }

    /// `p + c_o + M`: below this valuation some consumer would rather not buy.
    pub fn min_full_coverage_valuation(&self) -> f64 {
        self.price + self.delivery_fee + self.max_wait
    }

    /// `v − p`, the surplus of an immediate hassle-free purchase.
    pub fn net_value(&self) -> f64 {
        self.valuation - self.price
    }

    /// `p ≥ 2c`: the upper half of the inventory solution table.
    pub fn high_margin(&self) -> bool {
        self.price >= 2.0 * self.unit_cost
    }

    pub(crate) fn check_mu_bar(&self, mu_bar: f64) -> Result<()> {
        if !(0.0..=self.max_wait).contains(&mu_bar) {
            return Err(invalid(format!(
                "mu_bar must lie in [0, M] = [0, {}], got {mu_bar}",
                self.max_wait
            )));
        }
        Ok(())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> ModelError {
    ModelError::InvalidParameter(msg.into())
}

/// A consumer's belief that the item is in stock.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Belief(f64);

impl Belief {
    pub fn new(xi_hat: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi_hat) {
            return Err(invalid(format!("belief must lie in [0, 1], got {xi_hat}")));
        }
        Ok(Self(xi_hat))
    }

    pub const CERTAIN: Belief = Belief(1.0);
    pub const HOPELESS: Belief = Belief(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    /// Probability of a stockout, `1 − ξ̂`.
    pub fn miss(self) -> f64 {
        1.0 - self.0
    }
}
