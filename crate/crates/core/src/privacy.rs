//! Laplace noise, exponential-mechanism weights, and the analytic
//! privacy/utility bound calculators.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::Pattern;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrivacyError {
    #[error("laplace scale must be positive, got {0}")]
    BadScale(f64),
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("gamma must lie in (0, 1), got {0}")]
    BadGamma(f64),
    #[error("output-space bound must be at least 1, got {0}")]
    BadSpaceBound(f64),
    #[error("k must be at least 1")]
    BadK,
}

/// Parameters of a zero-mean Laplace distribution (variance `2 * scale^2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceParams {
    pub scale: f64,
}

impl LaplaceParams {
    pub fn new(scale: f64) -> Result<Self, PrivacyError> {
        if !(scale > 0.0) {
            return Err(PrivacyError::BadScale(scale));
        }
        Ok(Self { scale })
    }

    pub fn density(&self, x: f64) -> f64 {
        (-x.abs() / self.scale).exp() / (2.0 * self.scale)
    }
}

/// One Laplace draw by inverse CDF from a single uniform variate, so the
/// result is a pure function of the generator state.
pub fn laplace_sample(scale: f64, rng: &mut impl Rng) -> Result<f64, PrivacyError> {
    if !(scale > 0.0) {
        return Err(PrivacyError::BadScale(scale));
    }
    let mut u: f64 = rng.gen::<f64>() - 0.5; // [-0.5, 0.5)
    if u <= -0.5 {
        u = -0.5 + f64::EPSILON;
    }
    let sign = if u < 0.0 { -1.0 } else { 1.0 };
    Ok(-scale * sign * (1.0 - 2.0 * u.abs()).ln())
}

/// Adds independent `Lap(k / eps2)` noise to each true support. Callers must
/// skip perturbation entirely when no budget is reserved for it.
pub fn perturb_supports(
    records: &[(Pattern, usize)],
    eps2: f64,
    k: u32,
    rng: &mut impl Rng,
) -> Result<Vec<(Pattern, f64)>, PrivacyError> {
    if !(eps2 > 0.0) {
        return Err(PrivacyError::BadEpsilon(eps2));
    }
    if k == 0 {
        return Err(PrivacyError::BadK);
    }
    let scale = k as f64 / eps2;
    records
        .iter()
        .map(|(p, s)| Ok((p.clone(), *s as f64 + laplace_sample(scale, rng)?)))
        .collect()
}

/// High-probability bound on how far below the threshold a sampled pattern's
/// support can fall: `(2k / eps1) * ln(k * m_upper / gamma)`, where `m_upper`
/// upper-bounds the output-space size.
pub fn beta_sampling_bound(
    k: u32,
    eps1: f64,
    gamma: f64,
    m_upper: f64,
) -> Result<f64, PrivacyError> {
    if k == 0 {
        return Err(PrivacyError::BadK);
    }
    if !(eps1 > 0.0) {
        return Err(PrivacyError::BadEpsilon(eps1));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(PrivacyError::BadGamma(gamma));
    }
    if !(m_upper >= 1.0) {
        return Err(PrivacyError::BadSpaceBound(m_upper));
    }
    let k = k as f64;
    Ok(2.0 * k / eps1 * (k * m_upper / gamma).ln())
}

/// High-probability bound on the noise added to a released support:
/// `(k / eps2) * ln(1 / gamma)`.
pub fn beta_noise_bound(k: u32, eps2: f64, gamma: f64) -> Result<f64, PrivacyError> {
    if k == 0 {
        return Err(PrivacyError::BadK);
    }
    if !(eps2 > 0.0) {
        return Err(PrivacyError::BadEpsilon(eps2));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(PrivacyError::BadGamma(gamma));
    }
    Ok(k as f64 / eps2 * (1.0 / gamma).ln())
}

/// The additive privacy slack incurred when the sampling distribution sits
/// within total-variation distance `theta` of the target:
/// `theta * (1 + exp(eps1 / k))`. Zero at steady state.
pub fn approx_delta(theta: f64, eps1: f64, k: u32) -> f64 {
    debug_assert!(theta >= 0.0);
    debug_assert!(k >= 1);
    theta * (1.0 + (eps1 / k as f64).exp())
}

/// Exponential-mechanism probabilities over an enumerated space:
/// `pi(x) proportional to exp(eps1 * u(x) / (2 k delta_u))`.
///
/// Scores are shifted by their maximum before exponentiation, which keeps the
/// computation stable and makes the output an exact fixed point under adding
/// any constant to all scores.
pub fn exp_mechanism_weights(scores: &[f64], eps1: f64, k: u32, delta_u: f64) -> Vec<f64> {
    assert!(!scores.is_empty(), "output space must be non-empty");
    let c = eps1 / (2.0 * k as f64 * delta_u);
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|&s| (c * (s - top)).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// The utility-bound block surfaced in run metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityBound {
    pub beta: f64,
    pub gamma: f64,
    pub m_upper: f64,
}
