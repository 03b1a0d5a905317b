//! Monte Carlo estimates of the coefficients from sampled product unitaries.
//!
//! For a fixed `U`, with `p`, `q` the rotated outcome laws and `K = [[2,-1],[-1,2]]`
//! the one-bit kernel matrix, the unique kernel gives
//! `μ_U = <p, K^{⊗n} q>`, `A_U = <p, (K∘K)^{⊗n} q>`,
//! `C_U = Σ_s p(s) (K^{⊗n} q)(s)^2 + Σ_t q(t) (K^{⊗n} p)(t)^2` and `B_U = μ_U^2`.
//! Every coefficient is the ensemble mean of its per-`U` value.

use super::{Method, Value};
use crate::error::{Error, Result};
use crate::protocol::rng::{substream, Party};
use crate::protocol::sampling::{basis_rotation, haar_u2, outcome_probabilities, U2};
use crate::qcore::QuantumState;
use crate::Ensemble;
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McValue {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCoefficients {
    pub ensemble: Ensemble,
    pub samples: usize,
    pub seed: u64,
    pub overlap: McValue,
    pub a: McValue,
    pub c: McValue,
    pub b: McValue,
}

impl McValue {
    pub(crate) fn to_value_with(self, seed: u64, samples: usize) -> Value {
        Value { value: self.mean, method: Method::MonteCarlo { seed, samples }, stderr: Some(self.stderr) }
    }
}

impl McCoefficients {
    pub fn value(&self, v: McValue) -> Value {
        v.to_value_with(self.seed, self.samples)
    }
}

/// Applies `[[d, o], [o, d]]` to every bit of a length-`2^n` vector.
pub(crate) fn apply_bitwise(v: &[f64], d: f64, o: f64) -> Vec<f64> {
    let mut cur = v.to_vec();
    let mut bit = 1usize;
    while bit < cur.len() {
        for s in 0..cur.len() {
            if s & bit == 0 {
                let (x, y) = (cur[s], cur[s | bit]);
                cur[s] = d * x + o * y;
                cur[s | bit] = o * x + d * y;
            }
        }
        bit <<= 1;
    }
    cur
}

pub(crate) fn draw_rotations(rng: &mut impl Rng, n: usize, ensemble: Ensemble) -> Vec<U2> {
    (0..n)
        .map(|_| match ensemble {
            Ensemble::Clifford => basis_rotation(rng.random_range(0..3)),
            Ensemble::Haar => haar_u2(rng),
        })
        .collect()
}

/// `(μ_U, A_U, C_U)` for fixed outcome laws.
pub(crate) fn conditional_terms(p: &[f64], q: &[f64]) -> (f64, f64, f64) {
    let kq = apply_bitwise(q, 2.0, -1.0);
    let kp = apply_bitwise(p, 2.0, -1.0);
    let k2q = apply_bitwise(q, 4.0, 1.0);
    let mu: f64 = p.iter().zip(&kq).map(|(a, b)| a * b).sum();
    let a: f64 = p.iter().zip(&k2q).map(|(a, b)| a * b).sum();
    let c: f64 = p.iter().zip(&kq).map(|(w, g)| w * g * g).sum::<f64>()
        + q.iter().zip(&kp).map(|(w, h)| w * h * h).sum::<f64>();
    (mu, a, c)
}

#[derive(Default)]
struct Running {
    sum: f64,
    sum_sq: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn finish(&self, k: usize) -> McValue {
        let m = k as f64;
        let mean = self.sum / m;
        let var = if k > 1 { ((self.sum_sq - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
        McValue { mean, stderr: (var / m).sqrt() }
    }
}

pub fn mc_coefficients(
    rho: &QuantumState,
    sigma: &QuantumState,
    ensemble: Ensemble,
    samples: usize,
    seed: u64,
) -> Result<McCoefficients> {
    let n = rho.n();
    if sigma.n() != n {
        return Err(Error::DimensionMismatch(format!("{n} vs {} qubits", sigma.n())));
    }
    if samples < 2 {
        return Err(crate::error::invalid("Monte Carlo needs at least 2 samples"));
    }
    let mut rng = substream(seed, 0, Party::Unitary);
    let (mut ov, mut a, mut c, mut b) = (Running::default(), Running::default(), Running::default(), Running::default());
    for _ in 0..samples {
        let us = draw_rotations(&mut rng, n, ensemble);
        let p = outcome_probabilities(rho, &us)?;
        let q = outcome_probabilities(sigma, &us)?;
        let (mu, au, cu) = conditional_terms(&p, &q);
        ov.push(mu);
        a.push(au);
        c.push(cu);
        b.push(mu * mu);
    }
    Ok(McCoefficients {
        ensemble,
        samples,
        seed,
        overlap: ov.finish(samples),
        a: a.finish(samples),
        c: c.finish(samples),
        b: b.finish(samples),
    })
}
