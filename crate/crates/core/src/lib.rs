//! Buy-online-pick-up-in-store (BOPS) retail under rational expectations.
//!
//! * [`consumer`]: channel utilities, the closed-form choice rule and demand.
//! * [`inventory`]: the self-consistent in-stock probability and profit.
//! * [`equilibrium`]: optimal stock per wait, optimal wait, global
//!   equilibrium, verification and parameter-plane region maps.
//! * [`oracle`]: brute-force counterparts used to check the closed forms.
//! * [`dynsim`]: the two-store leftover-sharing simulation.

pub mod consumer;
pub mod dynsim;
pub mod equilibrium;
pub mod error;
pub mod inventory;
pub mod oracle;
pub mod params;

pub use consumer::{Channel, ChannelChoice, StockoutFallback};
pub use equilibrium::{EquilibriumResult, SolutionRegion};
pub use error::{ModelError, Result};
pub use params::{Belief, ModelParams};
