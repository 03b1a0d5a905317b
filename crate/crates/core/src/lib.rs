//! Numerical laboratory for distributed inner-product estimation (DIPE) with
//! local randomized measurements.
//!
//! Two parties hold `n`-qubit states `rho` and `sigma`, rotate every qubit by a
//! shared random single-qubit unitary, measure in the computational basis and
//! post-process the outcomes with a kernel `f(s, t)`. This crate provides:
//!
//! * [`qcore`]: dense complex linear algebra, states, Pauli coefficients and
//!   replica permutation operators.
//! * [`states`]: the benchmark state families and their local deformations.
//! * [`kernels`]: the unique unbiased Hamming kernel, symmetrization and the
//!   q = 3 Krawtchouk swap-sector transform.
//! * [`moments`]: exact moment operators and the variance coefficients
//!   `A_n`, `C_n`, `B_{n,E}` with generic, product, stabilizer and closed-form
//!   evaluation paths.
//! * [`protocol`]: seeded simulators for shared local randomized measurements
//!   and independent Pauli shadows, plus the empirical variance harness.
//! * [`planner`]: Chebyshev copy budgets and optimal shot allocation.

pub mod error;
pub mod kernels;
pub mod moments;
pub mod planner;
pub mod protocol;
pub mod qcore;
pub mod states;

pub use error::{Error, Result};
pub use qcore::{ComplexMatrix, DensityOperator, PureState, QuantumState, C64};

use serde::{Deserialize, Serialize};

/// Single-qubit unitary ensemble shared by both parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// Uniform single-qubit Clifford; measurement-equivalent to a uniform Pauli basis.
    Clifford,
    /// Haar-random U(2).
    Haar,
}

impl Ensemble {
    pub const ALL: [Ensemble; 2] = [Ensemble::Clifford, Ensemble::Haar];

    pub fn label(self) -> &'static str {
        match self {
            Ensemble::Clifford => "clifford",
            Ensemble::Haar => "haar",
        }
    }
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clifford" | "cl" => Ok(Ensemble::Clifford),
            "haar" | "h" => Ok(Ensemble::Haar),
            other => Err(Error::Parse(format!("unknown ensemble {other:?}"))),
        }
    }
}
