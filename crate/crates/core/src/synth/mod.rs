//! Seeded synthetic datasets with planted disclosure rules.
//!
//! Labels are drawn from a loglinear rule over the *true* analog values
//! (computed before any label-dependent structure exists), then flipped at
//! rate `noise`. The observed features are estimated afterwards by the
//! regular feature pipeline, so estimation error and model error can be
//! told apart.

pub mod location;
pub mod osn;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use location::{
    generate_location_survey, sample_demographics, Demographics, LocationTruth, StudyMix,
    SCENARIOS_PER_PARTICIPANT,
};
pub use osn::{generate_osn_graph, OsnGenConfig, OsnTruth, TrueRequest};

/// log-odds = alpha + Σ beta_k · z_k over the standardized true factors
/// (tendency, sensitivity, trustworthiness, appropriateness).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedRule {
    pub alpha: f64,
    pub betas: [f64; 4],
    /// Probability of flipping each drawn decision. 0.5 makes labels
    /// independent of every feature.
    pub noise: f64,
    /// Record mutual pairs without their request order. Twitter graphs
    /// never carry the order; in Google+ graphs this puts both directions
    /// of a mutual pair in the same stage.
    pub obfuscate_direction: bool,
}

impl PlantedRule {
    pub fn new(alpha: f64, betas: [f64; 4], noise: f64) -> Self {
        PlantedRule {
            alpha,
            betas,
            noise,
            obfuscate_direction: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.betas.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("rule coefficients must be finite"));
        }
        if !(0.0..=0.5).contains(&self.noise) {
            return Err(Error::invalid(format!(
                "noise rate must be in [0, 0.5], got {}",
                self.noise
            )));
        }
        Ok(())
    }

    pub fn probability(&self, z: [f64; 4]) -> f64 {
        let eta = self.alpha + self.betas.iter().zip(z).map(|(b, x)| b * x).sum::<f64>();
        1.0 / (1.0 + (-eta).exp())
    }
}

/// Population z-scores of each of the four factor columns (constant
/// columns map to 0).
pub(crate) fn standardize(raw: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let n = raw.len().max(1) as f64;
    let mut mean = [0.0; 4];
    let mut sd = [0.0; 4];
    for k in 0..4 {
        mean[k] = raw.iter().map(|r| r[k]).sum::<f64>() / n;
        sd[k] = (raw.iter().map(|r| (r[k] - mean[k]).powi(2)).sum::<f64>() / n).sqrt();
    }
    raw.iter()
        .map(|r| {
            let mut z = [0.0; 4];
            for k in 0..4 {
                if sd[k] > 0.0 {
                    z[k] = (r[k] - mean[k]) / sd[k];
                }
            }
            z
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PlantedRule::new(0.0, [1.0; 4], 0.1).validate().is_ok());
        assert!(PlantedRule::new(0.0, [1.0; 4], 0.6).validate().is_err());
        assert!(PlantedRule::new(f64::NAN, [1.0; 4], 0.1)
            .validate()
            .is_err());
    }

    #[test]
    fn standardized_columns() {
        let z = standardize(&[[1.0, 5.0, 0.0, 2.0], [3.0, 5.0, 0.0, 4.0]]);
        assert_eq!(z[0], [-1.0, 0.0, 0.0, -1.0]);
        assert_eq!(z[1], [1.0, 0.0, 0.0, 1.0]);
    }
}
