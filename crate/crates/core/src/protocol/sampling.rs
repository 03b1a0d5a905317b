//! Single-qubit unitary sampling, rotated outcome distributions and shot sampling.

use crate::error::{invalid, Error, Result};
use crate::qcore::{ComplexMatrix, QuantumState, C64};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::FRAC_1_SQRT_2;

/// Row-major 2×2 complex matrix.
pub type U2 = [C64; 4];

pub const IDENTITY_U2: U2 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];

/// Rotations that map the X, Y, Z measurement bases onto the computational basis:
/// `H`, `H S†`, `I`.
pub fn basis_rotation(basis: usize) -> U2 {
    let h = FRAC_1_SQRT_2;
    match basis {
        0 => [C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)],
        1 => [C64::new(h, 0.0), C64::new(0.0, -h), C64::new(h, 0.0), C64::new(0.0, h)],
        _ => IDENTITY_U2,
    }
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar U(2) from Gram-Schmidt on two standard complex Gaussian columns.
/// Gram-Schmidt leaves a positive diagonal in the implied R factor, which fixes the phases.
pub fn haar_u2(rng: &mut impl Rng) -> U2 {
    let (a0, a1) = (gaussian(rng), gaussian(rng));
    let (b0, b1) = (gaussian(rng), gaussian(rng));
    let na = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
    let (q0, q1) = (a0 / na, a1 / na);
    let proj = q0.conj() * b0 + q1.conj() * b1;
    let (c0, c1) = (b0 - proj * q0, b1 - proj * q1);
    let nc = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
    [q0, c0 / nc, q1, c1 / nc]
}

pub fn sample_haar_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_row_major(haar_u2(rng).to_vec()).expect("2x2")
}

pub fn u2_matrix(u: &U2) -> ComplexMatrix {
    ComplexMatrix::from_row_major(u.to_vec()).expect("2x2")
}

/// Applies `u` to qubit `q` (0-based from the most significant bit) of an `n`-qubit vector.
fn apply_u2_vector(v: &mut [C64], n: usize, q: usize, u: &U2) {
    let bit = 1usize << (n - 1 - q);
    for i in 0..v.len() {
        if i & bit != 0 {
            continue;
        }
        let (x, y) = (v[i], v[i | bit]);
        v[i] = u[0] * x + u[1] * y;
        v[i | bit] = u[2] * x + u[3] * y;
    }
}

/// `(⊗ u_l) ψ`.
pub fn rotate_amplitudes(amps: &[C64], us: &[U2]) -> Vec<C64> {
    let n = us.len();
    let mut v = amps.to_vec();
    for (q, u) in us.iter().enumerate() {
        apply_u2_vector(&mut v, n, q, u);
    }
    v
}

/// `(⊗ u_l) ρ (⊗ u_l)†`.
pub fn rotate_density(m: &ComplexMatrix, us: &[U2]) -> ComplexMatrix {
    let n = us.len();
    let d = m.dim();
    let mut work = m.clone();
    for (q, u) in us.iter().enumerate() {
        // Left multiplication on each column.
        let mut col = vec![C64::new(0.0, 0.0); d];
        for c in 0..d {
            for r in 0..d {
                col[r] = work.get(r, c);
            }
            apply_u2_vector(&mut col, n, q, u);
            for r in 0..d {
                work.set(r, c, col[r]);
            }
        }
        // Right multiplication by u† on each row: row ← conj(u · conj(row)).
        let uc = [u[0].conj(), u[1].conj(), u[2].conj(), u[3].conj()];
        let data = work.as_mut_slice();
        for r in 0..d {
            let row = &mut data[r * d..(r + 1) * d];
            apply_u2_vector(row, n, q, &uc);
        }
    }
    work
}

/// Computational-basis outcome distribution of the rotated state.
pub fn outcome_probabilities(state: &QuantumState, us: &[U2]) -> Result<Vec<f64>> {
    if us.len() != state.n() {
        return Err(Error::DimensionMismatch(format!("{} rotations for {} qubits", us.len(), state.n())));
    }
    Ok(match state {
        QuantumState::Pure(p) => rotate_amplitudes(p.amplitudes(), us).iter().map(|a| a.norm_sqr()).collect(),
        QuantumState::Mixed(m) => {
            let r = rotate_density(m.matrix(), us);
            (0..r.dim()).map(|i| r.get(i, i).re.max(0.0)).collect()
        }
    })
}

/// Applies the per-bit binary symmetric channel with flip probability `p/2`;
/// equivalent to local depolarization followed by a computational-basis measurement.
pub fn depolarized_outcome_transform(probs: &[f64], p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("depolarizing strength {p} outside [0, 1]")));
    }
    if probs.is_empty() || !probs.len().is_power_of_two() {
        return Err(Error::DimensionMismatch("probability vector length must be 2^n".into()));
    }
    let n = probs.len().trailing_zeros() as usize;
    let flip = p / 2.0;
    let mut cur = probs.to_vec();
    for q in 0..n {
        let bit = 1usize << q;
        let mut next = vec![0.0; cur.len()];
        for (s, v) in next.iter_mut().enumerate() {
            *v = (1.0 - flip) * cur[s] + flip * cur[s ^ bit];
        }
        cur = next;
    }
    Ok(cur)
}

/// Inverse-CDF sampler over a fixed distribution.
pub struct OutcomeSampler {
    cdf: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(probs: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p.max(0.0);
                acc
            })
            .collect();
        Self { cdf }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u64 {
        let total = *self.cdf.last().unwrap_or(&1.0);
        let u: f64 = rng.random::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) as u64
    }
}

/// `N` independent outcome records.
pub fn sample_outcomes(probs: &[f64], shots: usize, rng: &mut impl Rng) -> Vec<u64> {
    let s = OutcomeSampler::new(probs);
    (0..shots).map(|_| s.sample(rng)).collect()
}
