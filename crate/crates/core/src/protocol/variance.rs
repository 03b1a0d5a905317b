//! Empirical check of the four-term variance decomposition of the block value `X_M`
//! and of the exact Pauli-shadow variance.

use super::shadow::repeat_pauli_shadow;
use super::shared::{block_value, EnsembleKind, RunConfig};
use crate::error::{Error, Result};
use crate::moments::{shadow_coefficients, state_coefficients, CoefficientOptions, MomentCoefficients, ShadowCoefficients, VarianceTerms};
use crate::qcore::QuantumState;
use crate::Ensemble;
use rayon::prelude::*;
use serde::Serialize;

/// Sample mean and unbiased variance with their large-sample standard errors;
/// the variance error uses the fourth central moment, `sqrt((m4 - s^4) / N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleMoments {
    pub count: usize,
    pub mean: f64,
    pub se_mean: f64,
    pub variance: f64,
    pub se_variance: f64,
}

impl SampleMoments {
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::InvalidArgument("need at least two samples".into()));
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        let variance = m2 * n / (n - 1.0);
        Ok(Self {
            count: xs.len(),
            mean,
            se_mean: (variance / n).sqrt(),
            variance,
            se_variance: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
        })
    }
}

/// `(observed - expected) / se`; infinite when `se = 0` and the values differ.
pub fn z_score(observed: f64, expected: f64, se: f64) -> f64 {
    let d = observed - expected;
    if se > 0.0 {
        d / se
    } else if d.abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub ensemble: Ensemble,
    pub nm: usize,
    pub blocks: usize,
    pub seed: u64,
    pub overlap: f64,
    pub terms: VarianceTerms,
    pub exact_variance: f64,
    pub empirical: SampleMoments,
    pub z_variance: f64,
    pub z_mean: f64,
    /// `|z_variance| ≤ 3` and `|z_mean| ≤ 5`.
    pub pass: bool,
}

/// Compares the empirical variance of `X_M` over `blocks` blocks with the exact
/// decomposition built from generic coefficients.
pub fn empirical_variance_decomposition(
    rho: &QuantumState,
    sigma: &QuantumState,
    ensemble: Ensemble,
    nm: usize,
    blocks: usize,
    seed: u64,
) -> Result<VarianceReport> {
    let coeffs = state_coefficients(rho, sigma, &CoefficientOptions::default())?;
    empirical_variance_with(rho, sigma, &coeffs, ensemble, nm, blocks, seed)
}

/// As [`empirical_variance_decomposition`] with precomputed coefficients.
pub fn empirical_variance_with(
    rho: &QuantumState,
    sigma: &QuantumState,
    coeffs: &MomentCoefficients,
    ensemble: Ensemble,
    nm: usize,
    blocks: usize,
    seed: u64,
) -> Result<VarianceReport> {
    let config = RunConfig::new(rho.n(), blocks, nm, seed, EnsembleKind::from(ensemble));
    config.validate()?;
    let values = (0..blocks as u64)
        .into_par_iter()
        .map(|l| block_value(rho, sigma, &config, l).map(|(x, _)| x))
        .collect::<Result<Vec<f64>>>()?;
    let empirical = SampleMoments::from_samples(&values)?;
    let terms = coeffs.variance(ensemble, nm);
    let exact_variance = terms.total();
    let overlap = coeffs.overlap.value;
    let z_variance = z_score(empirical.variance, exact_variance, empirical.se_variance);
    let z_mean = z_score(empirical.mean, overlap, empirical.se_mean);
    Ok(VarianceReport {
        ensemble,
        nm,
        blocks,
        seed,
        overlap,
        terms,
        exact_variance,
        empirical,
        z_variance,
        z_mean,
        pass: z_variance.abs() <= 3.0 && z_mean.abs() <= 5.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowVarianceReport {
    pub copies: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub coefficients: ShadowCoefficients,
    pub exact_variance: f64,
    pub empirical: SampleMoments,
    pub z_variance: f64,
    pub z_mean: f64,
    pub pass: bool,
}

pub fn shadow_variance_check(rho: &QuantumState, sigma: &QuantumState, copies: usize, repetitions: usize, seed: u64) -> Result<ShadowVarianceReport> {
    let coefficients = shadow_coefficients(&rho.to_density(), &sigma.to_density())?;
    let (vals, _, _) = repeat_pauli_shadow(rho, sigma, copies, seed, repetitions)?;
    let empirical = SampleMoments::from_samples(&vals)?;
    let exact_variance = coefficients.variance(copies);
    let z_variance = z_score(empirical.variance, exact_variance, empirical.se_variance);
    let z_mean = z_score(empirical.mean, coefficients.overlap, empirical.se_mean);
    Ok(ShadowVarianceReport {
        copies,
        repetitions,
        seed,
        coefficients,
        exact_variance,
        empirical,
        z_variance,
        z_mean,
        pass: z_variance.abs() <= 3.0 && z_mean.abs() <= 5.0,
    })
}
