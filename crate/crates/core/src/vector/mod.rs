//! Vector observations `x = βY + ε` encoded coordinate by coordinate.

mod jackknife;
mod unified;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use jackknife::{jackknife_mi, MiEstimate, MAX_CELLS};
pub use unified::{
    chain_rule_bins, chain_rule_check, chain_rule_check_channels, coordinate_channels, product_relevance,
    vector_unified, ChainRule, ENUMERATION_CAP,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorModel {
    betas: Vec<f64>,
}

impl VectorModel {
    pub fn new(betas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::invalid("at least one coordinate is required"));
        }
        if let Some(b) = betas.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
            return Err(Error::domain("beta", *b, "[0, inf)"));
        }
        Ok(VectorModel { betas })
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn dim(&self) -> usize {
        self.betas.len()
    }
}

/// Per-coordinate budgets `R_1 + … + R_d = R` in nats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateAllocation {
    rates: Vec<f64>,
}

impl RateAllocation {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::invalid("allocation is empty"));
        }
        if let Some(r) = rates.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
            return Err(Error::domain("R_i", *r, "[0, inf)"));
        }
        Ok(RateAllocation { rates })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn total(&self) -> f64 {
        self.rates.iter().sum()
    }
}

/// `R_i = R / d0`.
pub fn equal_allocation(r: f64, d0: usize) -> Result<RateAllocation> {
    if d0 == 0 {
        return Err(Error::invalid("d0 must be at least 1"));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("R", r, "[0, inf)"));
    }
    RateAllocation::new(vec![r / d0 as f64; d0])
}
