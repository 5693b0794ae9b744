//! Consumer utilities, the channel choice rule, and the demand it induces.
//!
//! A consumer with travel cost `t` picks among three channels:
//!
//! * **BOPS**: order online, pick up in store; waits `μ̄` if the item is not
//!   in stock (probability `1 − ξ̂`).
//! * **Store**: walk in without ordering; on a stockout, either buy online or
//!   fall back to BOPS and wait.
//! * **Online**: pay the delivery fee `c_o`.
//!
//! Consumers have unit mass density on `t ∈ [0, ∞)`, so demand is the
//! length of the `t`-interval that buys from the retailer.

use std::fmt;

use crate::error::Result;
use crate::params::{invalid, Belief, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Bops,
    Store,
    Online,
}

/// What a store visitor does on finding the shelf empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StockoutFallback {
    Online,
    BopsWait,
}

/// A consumer's decision. Only store visitors carry a second-stage action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelChoice {
    Bops,
    Store { fallback: StockoutFallback },
    Online,
}

impl ChannelChoice {
    pub fn channel(self) -> Channel {
        match self {
            ChannelChoice::Bops => Channel::Bops,
            ChannelChoice::Store { .. } => Channel::Store,
            ChannelChoice::Online => Channel::Online,
        }
    }

    pub fn fallback_after_stockout(self) -> Option<StockoutFallback> {
        match self {
            ChannelChoice::Store { fallback } => Some(fallback),
            _ => None,
        }
    }

    /// True when the consumer buys from the retailer rather than online.
    pub fn buys_from_retailer(self) -> bool {
        !matches!(self, ChannelChoice::Online)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Bops => "BOPS",
            Channel::Store => "Store",
            Channel::Online => "Online",
        })
    }
}

fn check_travel(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid(format!("travel cost t must be non-negative, got {t}")));
    }
    Ok(())
}

/// Expected utility of ordering for in-store pickup: `v − p − t − (1 − ξ̂)μ̄`.
pub fn utility_bops(params: &ModelParams, belief: Belief, t: f64, mu_bar: f64) -> Result<f64> {
    check_travel(t)?;
    params.check_mu_bar(mu_bar)?;
    Ok(params.net_value() - t - belief.miss() * mu_bar)
}

/// Utility of buying online directly: `v − p − c_o`.
pub fn utility_online(params: &ModelParams) -> f64 {
    params.net_value() - params.delivery_fee
}

/// Utility of falling back to BOPS after finding the store out of stock.
/// The wait is then certain: `v − p − t − μ̄`.
pub fn utility_bops_after_stockout(params: &ModelParams, t: f64, mu_bar: f64) -> f64 {
    params.net_value() - t - mu_bar
}

/// Expected utility of visiting the store without ordering. The visitor pays
/// `t`, buys on the spot with probability `ξ̂`, and otherwise takes the better
/// of buying online and waiting for a BOPS delivery.
pub fn utility_store(params: &ModelParams, belief: Belief, t: f64, mu_bar: f64) -> f64 {
    let fallback =
        utility_online(params).max(utility_bops_after_stockout(params, t, mu_bar));
    -t + belief.value() * params.net_value() + belief.miss() * fallback
}

/// Closed-form channel choice.
///
/// * `μ̄ ≤ c_o`: BOPS for `t ≤ c_o − (1 − ξ̂)μ̄`, online beyond.
/// * `μ̄ > c_o`: walk in for `t ≤ ξ̂ c_o` (never when `ξ̂ = 0`), online beyond.
///
/// Boundaries are closed in favour of the retailer's channel. At `ξ̂ = 1`
/// BOPS and walking in give identical utility; the consumer uses BOPS exactly
/// when `μ̄ ≤ c_o`.
pub fn choose_channel(
    params: &ModelParams,
    belief: Belief,
    t: f64,
    mu_bar: f64,
) -> Result<ChannelChoice> {
    check_travel(t)?;
    params.check_mu_bar(mu_bar)?;
    let xi = belief.value();
    let co = params.delivery_fee;

    if mu_bar <= co {
        if t <= co - belief.miss() * mu_bar {
            return Ok(ChannelChoice::Bops);
        }
        return Ok(ChannelChoice::Online);
    }

    if xi > 0.0 && t <= xi * co {
        let fallback = if utility_online(params) >= utility_bops_after_stockout(params, t, mu_bar) {
            StockoutFallback::Online
        } else {
            StockoutFallback::BopsWait
        };
        return Ok(ChannelChoice::Store { fallback });
    }
    Ok(ChannelChoice::Online)
}

/// Mass of consumers buying from the retailer.
pub fn demand(params: &ModelParams, belief: Belief, mu_bar: f64) -> f64 {
    let co = params.delivery_fee;
    if mu_bar <= co {
        co - belief.miss() * mu_bar
    } else {
        belief.value() * co
    }
}

/// Consumers won from online by offering BOPS, integrated over all waits
/// `μ̄ ∈ [0, c_o]`: `(1 − ξ̂) c_o² / 2`.
pub fn bops_gain(params: &ModelParams, belief: Belief) -> f64 {
    let co = params.delivery_fee;
    belief.miss() * co * co / 2.0
}
