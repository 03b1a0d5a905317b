//! Pauli-basis contraction of `n`-fold tensor powers of one-qubit replica operators.
//!
//! With `ρ = 2^{-n} Σ_P ρ̂(P) P`, every coefficient is a sum over Pauli strings
//! weighted by the one-qubit transfer tensor `t[a_1..a_m] = tr[R (P_{a_1} ⊗ ... ⊗ P_{a_m})] / 2^m`.
//! Digit `l` of every working index belongs to qubit `l`, qubit 1 most significant.

use crate::error::Result;
use crate::qcore::{pauli_coefficients_of_matrix, ComplexMatrix};

/// `t[a_1 .. a_m]` in base 4 with replica 1 most significant.
pub fn pauli_transfer_tensor(op: &ComplexMatrix, replicas: usize) -> Result<Vec<f64>> {
    let scale = (1u64 << replicas) as f64;
    Ok(pauli_coefficients_of_matrix(op, replicas)?.iter().map(|z| z.re / scale).collect())
}

/// Applies `map` (`dout × din`, row-major) to every base-`din` digit of `input`.
pub fn mode_apply(input: &[f64], n: usize, din: usize, dout: usize, map: &[f64]) -> Vec<f64> {
    debug_assert_eq!(map.len(), din * dout);
    debug_assert_eq!(input.len(), din.pow(n as u32));
    let nz: Vec<(usize, usize, f64)> = (0..dout)
        .flat_map(|o| (0..din).map(move |i| (o, i)))
        .filter_map(|(o, i)| {
            let v = map[o * din + i];
            (v != 0.0).then_some((o, i, v))
        })
        .collect();
    let mut cur = input.to_vec();
    for l in 0..n {
        let outer = dout.pow(l as u32);
        let inner = din.pow((n - 1 - l) as u32);
        let mut next = vec![0.0; outer * dout * inner];
        for a in 0..outer {
            let src = &cur[a * din * inner..(a + 1) * din * inner];
            let dst = &mut next[a * dout * inner..(a + 1) * dout * inner];
            for &(o, i, v) in &nz {
                let s = &src[i * inner..(i + 1) * inner];
                let d = &mut dst[o * inner..(o + 1) * inner];
                for (dv, sv) in d.iter_mut().zip(s) {
                    *dv += v * sv;
                }
            }
        }
        cur = next;
    }
    cur
}

/// Pair-interleaved product `X[(a_1 b_1)(a_2 b_2)...] = x[a] y[b]` over base-4 strings.
pub fn interleave_pair(x: &[f64], y: &[f64], n: usize) -> Vec<f64> {
    let len = 1usize << (4 * n);
    let mut out = vec![0.0; len];
    for (idx, o) in out.iter_mut().enumerate() {
        let (mut a, mut b) = (0usize, 0usize);
        for l in 0..n {
            let digit = (idx >> (4 * (n - 1 - l))) & 15;
            a = a * 4 + (digit >> 2);
            b = b * 4 + (digit & 3);
        }
        let xv = x[a];
        if xv != 0.0 {
            *o = xv * y[b];
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ_{P,Q} x(P) y(Q) ∏_l t2[P_l, Q_l]`.
pub fn contract_two(x: &[f64], y: &[f64], n: usize, t2: &[f64]) -> f64 {
    dot(x, &mode_apply(y, n, 4, 4, t2))
}

/// `Σ x(P) y(Q) x(P') y(Q') ∏_l t4[P_l, Q_l, P'_l, Q'_l]`, i.e. `tr[R^{⊗n}(ρ⊗σ⊗ρ⊗σ)]`.
pub fn contract_four(x: &[f64], y: &[f64], n: usize, t4: &[f64]) -> f64 {
    let v = interleave_pair(x, y, n);
    dot(&v, &mode_apply(&v, n, 16, 16, t4))
}

/// `Σ u(P) u(P') w(Q) ∏ t3[P_l, P'_l, Q_l]` for replica order (u, u, w).
pub fn contract_three_uuw(u: &[f64], w: &[f64], n: usize, t3: &[f64]) -> f64 {
    let v = interleave_pair(u, u, n);
    dot(&v, &mode_apply(w, n, 4, 16, t3))
}

/// `Σ w(P) u(Q) u(Q') ∏ t3[P_l, Q_l, Q'_l]` for replica order (w, u, u).
pub fn contract_three_wuu(w: &[f64], u: &[f64], n: usize, t3: &[f64]) -> f64 {
    // Reorder to (u, u, w): t'[(b b'), a] = t3[a, b, b'].
    let mut map = vec![0.0; 64];
    for a in 0..4 {
        for bb in 0..16 {
            map[bb * 4 + a] = t3[a * 16 + bb];
        }
    }
    let v = interleave_pair(u, u, n);
    dot(&v, &mode_apply(w, n, 4, 16, &map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_apply_matches_dense_kronecker() {
        let n = 3;
        let map = [1.0, 2.0, -1.0, 0.5, 0.0, 3.0];
        let input: Vec<f64> = (0..8).map(|i| (i as f64 + 1.0).sin()).collect();
        let got = mode_apply(&input, n, 2, 3, &map);
        for out in 0..27usize {
            let (o1, o2, o3) = (out / 9, (out / 3) % 3, out % 3);
            let mut want = 0.0;
            for inp in 0..8usize {
                let (i1, i2, i3) = (inp >> 2, (inp >> 1) & 1, inp & 1);
                want += map[o1 * 2 + i1] * map[o2 * 2 + i2] * map[o3 * 2 + i3] * input[inp];
            }
            assert!((got[out] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn interleave_layout() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0];
        let y: Vec<f64> = (0..16).map(|i| 100.0 + i as f64).collect();
        let v = interleave_pair(&x, &y, 2);
        // digits (a1 b1)(a2 b2) with a = 4 a1 + a2.
        let (a1, a2, b1, b2) = (2usize, 1usize, 3usize, 0usize);
        let idx = ((a1 * 4 + b1) << 4) | (a2 * 4 + b2);
        assert_eq!(v[idx], x[a1 * 4 + a2] * y[b1 * 4 + b2]);
    }
}
