use thiserror::Error;

use crate::equilibrium::SolutionRegion;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("region {region} is not admissible: {reason}")]
    RegionInadmissible {
        region: SolutionRegion,
        reason: &'static str,
    },

    #[error("unsupported axis parameter `{0}` (expected one of p, c, c_o, k, M, mu_bar)")]
    InvalidAxis(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
