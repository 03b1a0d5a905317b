//! Shared local randomized measurements: per block, one product unitary is sampled
//! and applied by both parties, each of which records `N_M` outcomes.

use super::rng::{substream, Party};
use super::sampling::{depolarized_outcome_transform, outcome_probabilities, sample_outcomes};
use crate::error::{invalid, Error, Result};
use crate::moments::montecarlo::{apply_bitwise, draw_rotations};
use crate::protocol::sampling::U2;
use crate::qcore::{Limits, QuantumState};
use crate::Ensemble;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    CliffordLocal,
    HaarLocal,
    PauliShadowIndependent,
}

impl EnsembleKind {
    pub fn shared(self) -> Option<Ensemble> {
        match self {
            EnsembleKind::CliffordLocal => Some(Ensemble::Clifford),
            EnsembleKind::HaarLocal => Some(Ensemble::Haar),
            EnsembleKind::PauliShadowIndependent => None,
        }
    }
}

impl From<Ensemble> for EnsembleKind {
    fn from(e: Ensemble) -> Self {
        match e {
            Ensemble::Clifford => EnsembleKind::CliffordLocal,
            Ensemble::Haar => EnsembleKind::HaarLocal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: usize,
    /// Unitary blocks `N_U`.
    pub nu: usize,
    /// Shots per block per party `N_M`.
    pub nm: usize,
    pub seed: u64,
    pub ensemble: EnsembleKind,
    /// Local depolarizing strength applied to both parties' outcome laws.
    #[serde(default)]
    pub noise: Option<f64>,
}

impl RunConfig {
    pub fn new(n: usize, nu: usize, nm: usize, seed: u64, ensemble: EnsembleKind) -> Self {
        Self { n, nu, nm, seed, ensemble, noise: None }
    }

    /// Copies per party, `N = N_U N_M`.
    pub fn copies(&self) -> usize {
        self.nu * self.nm
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 || self.nm == 0 {
            return Err(invalid("N_U and N_M must be at least 1"));
        }
        Limits::default().check(self.n)?;
        if let Some(p) = self.noise {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("noise {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRecord {
    /// Mean of the block values.
    pub estimate: f64,
    /// Sample standard error of the mean over blocks (zero for a single block).
    pub stderr: f64,
    pub block_values: Vec<f64>,
    pub config: RunConfig,
    pub wall_time_s: f64,
}

/// `μ_U = Σ_{s,t} f(s,t) p(s) q(t)` for the unique kernel.
pub fn conditional_mean(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(apply_bitwise(q, 2.0, -1.0)).map(|(a, b)| a * b).sum()
}

/// Kernel average `N_M^{-2} Σ_{i,j} f(s_i, t_j)` of two shot records.
pub fn kernel_average(n: usize, s: &[u64], t: &[u64]) -> f64 {
    let (ns, nt) = (s.len(), t.len());
    let pair_cost = ns * nt;
    let hist_cost = n.max(1) << n;
    let total = if pair_cost <= hist_cost {
        let mut acc = 0.0;
        for &a in s {
            for &b in t {
                let d = (a ^ b).count_ones() as i32;
                let v = 2f64.powi(n as i32 - d);
                acc += if d % 2 == 0 { v } else { -v };
            }
        }
        acc
    } else {
        let mut hs = vec![0.0; 1 << n];
        let mut ht = vec![0.0; 1 << n];
        for &a in s {
            hs[a as usize] += 1.0;
        }
        for &b in t {
            ht[b as usize] += 1.0;
        }
        hs.iter().zip(apply_bitwise(&ht, 2.0, -1.0)).map(|(a, b)| a * b).sum()
    };
    total / (ns * nt) as f64
}

fn laws(rho: &QuantumState, sigma: &QuantumState, us: &[U2], noise: Option<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut p = outcome_probabilities(rho, us)?;
    let mut q = outcome_probabilities(sigma, us)?;
    if let Some(noise) = noise {
        p = depolarized_outcome_transform(&p, noise)?;
        q = depolarized_outcome_transform(&q, noise)?;
    }
    Ok((p, q))
}

/// One block: shared rotations from the block's unitary stream, shots from each party's stream.
/// Returns `(X_M, μ_U)`.
pub fn block_value(rho: &QuantumState, sigma: &QuantumState, config: &RunConfig, block: u64) -> Result<(f64, f64)> {
    let ensemble = config.ensemble.shared().ok_or_else(|| invalid("shared protocol needs a shared ensemble"))?;
    let us = draw_rotations(&mut substream(config.seed, block, Party::Unitary), config.n, ensemble);
    let (p, q) = laws(rho, sigma, &us, config.noise)?;
    let s = sample_outcomes(&p, config.nm, &mut substream(config.seed, block, Party::Alice));
    let t = sample_outcomes(&q, config.nm, &mut substream(config.seed, block, Party::Bob));
    Ok((kernel_average(config.n, &s, &t), conditional_mean(&p, &q)))
}

pub fn run_shared_lrm(rho: &QuantumState, sigma: &QuantumState, config: &RunConfig) -> Result<EstimateRecord> {
    config.validate()?;
    if rho.n() != config.n || sigma.n() != config.n {
        return Err(Error::DimensionMismatch(format!("states on {}/{} qubits, config n = {}", rho.n(), sigma.n(), config.n)));
    }
    let start = Instant::now();
    let block_values = (0..config.nu as u64)
        .into_par_iter()
        .map(|l| block_value(rho, sigma, config, l).map(|(x, _)| x))
        .collect::<Result<Vec<f64>>>()?;
    let (estimate, stderr) = mean_and_stderr(&block_values);
    Ok(EstimateRecord { estimate, stderr, block_values, config: config.clone(), wall_time_s: start.elapsed().as_secs_f64() })
}

pub(crate) fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}
