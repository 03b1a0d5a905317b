//! Closed forms of `A_n` and `B_{n,H}` on identical pure benchmark families.

use super::operators::operators;
use crate::error::{invalid, Result};
use crate::Ensemble;

/// `W`-family falling-factorial constants `C_1..C_4`:
/// `B_{n,H}(W) = n^{-4} Σ_{r=1}^{4} (n)_r (6/5)^{n-r} C_r`.
pub const W_FALLING_CONSTANTS: [f64; 4] = [6.0 / 5.0, 254.0 / 25.0, 587.0 / 125.0, 1561.0 / 2500.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormFamily {
    Ghz,
    W,
    BellDimer,
    Product,
}

fn powi(x: f64, n: usize) -> f64 {
    x.powi(n as i32)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("closed forms need n >= 1"));
    }
    Ok(())
}

/// `A_n(ψ, ψ)`.
pub fn closed_form_a(family: ClosedFormFamily, n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(match family {
        ClosedFormFamily::Ghz => (powi(3.0, n) + powi(2.0, n) + 1.0) / 2.0,
        ClosedFormFamily::W => powi(3.0, n) * (5.0 * n as f64 + 4.0) / (9.0 * n as f64),
        ClosedFormFamily::BellDimer => powi(7.0, n / 2) * powi(3.0, n % 2),
        ClosedFormFamily::Product => powi(3.0, n),
    })
}

/// `B_{n,H}(ψ, ψ)`.
pub fn closed_form_b(family: ClosedFormFamily, n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(match family {
        ClosedFormFamily::Ghz => {
            0.625 * powi(1.2, n)
                + 0.5 * powi(0.8, n)
                + 0.75 * powi(0.2, n)
                + 0.5 * powi(-0.2, n)
                + powi(0.3, n)
                + powi(-0.3, n)
        }
        ClosedFormFamily::W => {
            let x = n as f64;
            (1561.0 * x * x * x + 4722.0 * x * x + 11483.0 * x - 12582.0) / (5184.0 * x * x * x) * powi(1.2, n)
        }
        ClosedFormFamily::BellDimer => powi(29.0 / 20.0, n / 2) * powi(1.2, n % 2),
        ClosedFormFamily::Product => powi(1.2, n),
    })
}

/// `W` value through the falling-factorial constants table (independent of the rational form).
pub fn w_b_falling(n: usize) -> Result<f64> {
    check_n(n)?;
    let x = n as f64;
    let mut total = 0.0;
    let mut falling = 1.0;
    for (r, c) in W_FALLING_CONSTANTS.iter().enumerate() {
        falling *= x - r as f64;
        if falling == 0.0 {
            break;
        }
        total += falling * powi(1.2, n - (r + 1)) * c;
    }
    Ok(total / (x * x * x * x))
}

/// GHZ value via the replica basis sum `2^{-4} Σ_{a,b∈{0,1}^4} <b|R4|a>^n`,
/// valid for both ensembles at any `n`.
pub fn ghz_b_replica_sum(n: usize, ensemble: Ensemble) -> Result<f64> {
    check_n(n)?;
    let r = match ensemble {
        Ensemble::Clifford => &operators().r4_clifford.matrix,
        Ensemble::Haar => &operators().r4_haar.matrix,
    };
    let mut total = 0.0;
    for a in 0..16 {
        for b in 0..16 {
            let z = r.get(b, a);
            if z.norm() != 0.0 {
                total += z.powi(n as i32).re;
            }
        }
    }
    Ok(total / 16.0)
}

/// Schmidt pair `√λ|00> + √(1-λ)|11>` with `t = λ(1-λ)`: `A_2 = 9 - 8t`.
pub fn schmidt_a(t: f64) -> f64 {
    9.0 - 8.0 * t
}

/// `B_{2,H} = 36/25 - 58/25 t + 236/25 t^2`.
pub fn schmidt_b_haar(t: f64) -> f64 {
    36.0 / 25.0 - 58.0 / 25.0 * t + 236.0 / 25.0 * t * t
}

/// `A_2 B_{2,H} = 324/25 - 162/5 t + 2588/25 t^2 - 1888/25 t^3`.
pub fn schmidt_product(t: f64) -> f64 {
    324.0 / 25.0 - 162.0 / 5.0 * t + 2588.0 / 25.0 * t * t - 1888.0 / 25.0 * t * t * t
}

/// Single-qubit pair with Bloch vectors `r`, `s`: `A_1 = (5 + r·s)/2`.
pub fn single_qubit_a(r: [f64; 3], s: [f64; 3]) -> f64 {
    (5.0 + dot3(r, s)) / 2.0
}

/// `B_{1,H} = 1/4 + x/2 + 3/20 |r|²|s|² + 3/10 x²` with `x = r·s`.
pub fn single_qubit_b_haar(r: [f64; 3], s: [f64; 3]) -> f64 {
    let x = dot3(r, s);
    let q = dot3(r, r) * dot3(s, s);
    0.25 + x / 2.0 + 0.15 * q + 0.3 * x * x
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Closed-form family of a state specification, when one applies.
pub fn closed_form_family(f: &crate::states::StateFamily) -> Option<ClosedFormFamily> {
    use crate::states::StateFamily as S;
    match f {
        S::Ghz { .. } => Some(ClosedFormFamily::Ghz),
        S::W { .. } => Some(ClosedFormFamily::W),
        S::BellDimer { .. } => Some(ClosedFormFamily::BellDimer),
        S::ProductPlus { .. } | S::ProductCustom { .. } => Some(ClosedFormFamily::Product),
        S::ChainGraph { m: 0, .. } => Some(ClosedFormFamily::Product),
        S::HaarRandomPure { n: 1, .. } => Some(ClosedFormFamily::Product),
        S::Depolarized { base, p } if *p == 0.0 => closed_form_family(base),
        _ => None,
    }
}
