//! Monte Carlo twirl of the Clifford fourth-moment operator by single-qubit Haar unitaries.
//!
//! Conjugation acts on Pauli coefficients through `W† P_i W = Σ_j O_ji P_j` with
//! `O_ji = tr[P_j W† P_i W] / 2`, so each sample maps the 256 coefficients of `R4_Cl`
//! by `(1 ⊕ O)^{⊗4}`; only the nonzero input coefficients are propagated.

use super::operators::operators;
use super::transfer::pauli_transfer_tensor;
use crate::error::Result;
use crate::protocol::rng::{substream, Party};
use crate::protocol::sampling::{haar_u2, U2};
use crate::qcore::{pauli_reconstruct, ComplexMatrix, C64};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwirlReport {
    pub samples: usize,
    pub seed: u64,
    /// Max entrywise deviation of the averaged conjugate from `R4_H`.
    pub max_deviation: f64,
    pub trace_twirled: f64,
    pub trace_haar: f64,
    /// `tr[· (|+><+|)^{⊗4}]` of the averaged conjugate and of `R4_H`.
    pub plus_twirled: f64,
    pub plus_haar: f64,
}

fn mul(a: &U2, b: &U2) -> U2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn adjoint(a: &U2) -> U2 {
    [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()]
}

/// `(1 ⊕ O)` as a 4×4 row-major real matrix, index order I, X, Y, Z.
pub(crate) fn pauli_rotation(w: &U2) -> [f64; 16] {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let paulis: [U2; 3] = [[z, o, o, z], [z, -i, i, z], [o, z, z, -o]];
    let wd = adjoint(w);
    let mut out = [0.0; 16];
    out[0] = 1.0;
    for (ci, p) in paulis.iter().enumerate() {
        let m = mul(&mul(&wd, p), w);
        // tr[X M], tr[Y M], tr[Z M] halved.
        let col = [(m[1] + m[2]).re / 2.0, (i * m[1] - i * m[2]).re / 2.0, (m[0] - m[3]).re / 2.0];
        for (rj, v) in col.iter().enumerate() {
            out[(rj + 1) * 4 + ci + 1] = *v;
        }
    }
    out
}

/// Applies `rot^{⊗4}` to the sparse coefficient list and accumulates into `acc`.
fn accumulate(acc: &mut [f64; 256], nonzero: &[([usize; 4], f64)], rot: &[f64; 16]) {
    for &(a, v) in nonzero {
        let col = |k: usize| -> [f64; 4] { [rot[a[k]], rot[4 + a[k]], rot[8 + a[k]], rot[12 + a[k]]] };
        let (c0, c1, c2, c3) = (col(0), col(1), col(2), col(3));
        for j0 in 0..4 {
            let x0 = v * c0[j0];
            if x0 == 0.0 {
                continue;
            }
            for j1 in 0..4 {
                let x1 = x0 * c1[j1];
                if x1 == 0.0 {
                    continue;
                }
                for j2 in 0..4 {
                    let x2 = x1 * c2[j2];
                    let base = j0 * 64 + j1 * 16 + j2 * 4;
                    for j3 in 0..4 {
                        acc[base + j3] += x2 * c3[j3];
                    }
                }
            }
        }
    }
}

fn plus_value(coeffs: &[f64]) -> f64 {
    // M = 2^{-4} Σ c(a) P_a and tr[P_a (|+><+|)^{⊗4}] = Π r_{a_k} with r = (1, 1, 0, 0).
    let r = [1.0, 1.0, 0.0, 0.0];
    coeffs
        .iter()
        .enumerate()
        .map(|(idx, c)| c * r[idx >> 6] * r[(idx >> 4) & 3] * r[(idx >> 2) & 3] * r[idx & 3])
        .sum::<f64>()
        / 16.0
}

/// `E_W[(W^{⊗4})† R4_Cl W^{⊗4}]` estimated from `samples` Haar draws, compared with `R4_H`.
pub fn verify_twirl_identity(samples: usize, seed: u64) -> Result<TwirlReport> {
    let ops = operators();
    // Coefficients c(a) = tr[R P_a], so R = 2^{-4} Σ c(a) P_a.
    let coeffs: Vec<f64> = pauli_transfer_tensor(&ops.r4_clifford.matrix, 4)?.iter().map(|t| t * 16.0).collect();
    let nonzero: Vec<([usize; 4], f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > 1e-14)
        .map(|(idx, &v)| ([idx >> 6, (idx >> 4) & 3, (idx >> 2) & 3, idx & 3], v))
        .collect();
    let mut rng = substream(seed, 0, Party::Unitary);
    let mut acc = [0.0f64; 256];
    for _ in 0..samples {
        let w = haar_u2(&mut rng);
        accumulate(&mut acc, &nonzero, &pauli_rotation(&w));
    }
    let mean: Vec<f64> = acc.iter().map(|v| v / samples as f64).collect();
    let twirled = pauli_reconstruct(&mean, 4)?;
    let haar = &ops.r4_haar.matrix;
    let haar_coeffs: Vec<f64> = pauli_transfer_tensor(haar, 4)?.iter().map(|t| t * 16.0).collect();
    Ok(TwirlReport {
        samples,
        seed,
        max_deviation: twirled.max_abs_diff(haar),
        trace_twirled: twirled.trace().re,
        trace_haar: haar.trace().re,
        plus_twirled: plus_value(&mean),
        plus_haar: plus_value(&haar_coeffs),
    })
}

/// Direct 16×16 conjugation `(W^{⊗4})† R W^{⊗4}`, the reference for the Pauli-basis route.
pub fn conjugate_direct(r: &ComplexMatrix, w: &U2) -> Result<ComplexMatrix> {
    let wm = ComplexMatrix::from_row_major(w.to_vec())?;
    let w4 = wm.tensor_power(4)?;
    Ok(&(&w4.adjoint() * r) * &w4)
}
