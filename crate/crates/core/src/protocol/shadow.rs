//! Independent Pauli shadows: each party measures every copy in its own uniformly
//! random Pauli basis and forms snapshots `⊗(3ψ - I)`; the estimate is
//! `N^{-2} Σ_{i,j} tr[ρ̂_i σ̂_j]`, a product of per-qubit factors `tr[s_ψ s_φ]`.

use super::rng::{substream, Party};
use super::sampling::{basis_rotation, outcome_probabilities, OutcomeSampler};
use super::shared::mean_and_stderr;
use crate::error::{invalid, Error, Result};
use crate::qcore::{Limits, QuantumState};
use rand::Rng;
use serde::Serialize;
use std::time::Instant;

/// Eigenstate labels `0..6` in the order `0 1 + - r l`: basis Z, X, Y and outcome bit.
fn eigenstate_label(basis: usize, bit: u64) -> u8 {
    // basis_rotation order is X, Y, Z.
    const OFFSET: [u8; 3] = [2, 4, 0];
    OFFSET[basis] + bit as u8
}

/// `tr[s_ψ s_φ] = 9 tr[ψφ] - 4` for Pauli eigenstates: 5, -4 or 1/2.
pub fn snapshot_pair_factor(a: u8, b: u8) -> f64 {
    if a == b {
        5.0
    } else if a / 2 == b / 2 {
        -4.0
    } else {
        0.5
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowRecord {
    /// `ĝ_P`.
    pub estimate: f64,
    pub copies: usize,
    pub seed: u64,
    pub repetition: u64,
    pub wall_time_s: f64,
}

/// One party's `copies` snapshots as per-qubit eigenstate labels (row-major, `n` per copy).
fn snapshots(state: &QuantumState, copies: usize, seed: u64, repetition: u64, basis_party: Party, shot_party: Party) -> Result<Vec<u8>> {
    let n = state.n();
    let mut basis_rng = substream(seed, repetition, basis_party);
    let mut shot_rng = substream(seed, repetition, shot_party);
    let mut out = Vec::with_capacity(copies * n);
    for _ in 0..copies {
        let bases: Vec<usize> = (0..n).map(|_| basis_rng.random_range(0..3)).collect();
        let us: Vec<_> = bases.iter().map(|&b| basis_rotation(b)).collect();
        let probs = outcome_probabilities(state, &us)?;
        let s = OutcomeSampler::new(&probs).sample(&mut shot_rng);
        for (q, &b) in bases.iter().enumerate() {
            out.push(eigenstate_label(b, (s >> (n - 1 - q)) & 1));
        }
    }
    Ok(out)
}

/// `N^{-2} Σ_{i,j} Π_l tr[s_{a_il} s_{b_jl}]`, by pair sums or by a per-qubit
/// transform of the 6^n label histogram, whichever is cheaper.
fn shadow_overlap(n: usize, a: &[u8], b: &[u8], copies: usize) -> f64 {
    let pair_cost = copies * copies * n;
    let hist_cost = 6usize.saturating_pow(n as u32 + 1).saturating_mul(n);
    let total = if pair_cost <= hist_cost || n > 8 {
        let mut acc = 0.0;
        for i in 0..copies {
            let ai = &a[i * n..(i + 1) * n];
            for j in 0..copies {
                let bj = &b[j * n..(j + 1) * n];
                acc += ai.iter().zip(bj).map(|(x, y)| snapshot_pair_factor(*x, *y)).product::<f64>();
            }
        }
        acc
    } else {
        let dim = 6usize.pow(n as u32);
        let index = |labels: &[u8]| labels.iter().fold(0usize, |acc, &l| acc * 6 + l as usize);
        let mut ha = vec![0.0; dim];
        let mut hb = vec![0.0; dim];
        for i in 0..copies {
            ha[index(&a[i * n..(i + 1) * n])] += 1.0;
            hb[index(&b[i * n..(i + 1) * n])] += 1.0;
        }
        let mut map = [0.0; 36];
        for x in 0..6u8 {
            for y in 0..6u8 {
                map[x as usize * 6 + y as usize] = snapshot_pair_factor(x, y);
            }
        }
        let tb = crate::moments::transfer::mode_apply(&hb, n, 6, 6, &map);
        ha.iter().zip(&tb).map(|(x, y)| x * y).sum()
    };
    total / (copies * copies) as f64
}

/// One repetition with its own substreams (`block = repetition`).
pub fn run_pauli_shadow_repetition(rho: &QuantumState, sigma: &QuantumState, copies: usize, seed: u64, repetition: u64) -> Result<ShadowRecord> {
    let n = rho.n();
    if sigma.n() != n {
        return Err(Error::DimensionMismatch(format!("{n} vs {} qubits", sigma.n())));
    }
    if copies == 0 {
        return Err(invalid("need at least one copy per party"));
    }
    Limits::default().check(n)?;
    let start = Instant::now();
    // Independent bases: Alice draws from the unitary stream, Bob from the auxiliary one.
    let a = snapshots(rho, copies, seed, repetition, Party::Unitary, Party::Alice)?;
    let b = snapshots(sigma, copies, seed, repetition, Party::Aux, Party::Bob)?;
    Ok(ShadowRecord {
        estimate: shadow_overlap(n, &a, &b, copies),
        copies,
        seed,
        repetition,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub fn run_pauli_shadow(rho: &QuantumState, sigma: &QuantumState, copies: usize, seed: u64) -> Result<ShadowRecord> {
    run_pauli_shadow_repetition(rho, sigma, copies, seed, 0)
}

/// Estimates over independent repetitions, with their mean and standard error.
pub fn repeat_pauli_shadow(rho: &QuantumState, sigma: &QuantumState, copies: usize, seed: u64, repetitions: usize) -> Result<(Vec<f64>, f64, f64)> {
    use rayon::prelude::*;
    let vals = (0..repetitions as u64)
        .into_par_iter()
        .map(|r| run_pauli_shadow_repetition(rho, sigma, copies, seed, r).map(|x| x.estimate))
        .collect::<Result<Vec<f64>>>()?;
    let (m, se) = mean_and_stderr(&vals);
    Ok((vals, m, se))
}
