//! Dense complex linear algebra and quantum-operator primitives.
//!
//! Qubit 1 is the leftmost (most significant) tensor factor everywhere; a
//! computational basis index `i` of an `n`-qubit register has qubit `l` (1-based)
//! in bit `n - l`.

mod matrix;
mod pauli;
mod permutation;
mod state;

pub use matrix::{ComplexMatrix, DEFAULT_DIM_CAP};
pub use pauli::{
    pauli_coefficients, pauli_coefficients_of_matrix, pauli_matrix, pauli_reconstruct,
    string_index, PauliLetter, PauliString,
};
pub use permutation::{
    all_permutations, compose, permutation_operator, permutation_operator_on, swap_operator,
    Permutation,
};
pub use state::{
    partial_trace, DensityOperator, Limits, PureState, QuantumState, DENSE_QUBIT_CAP,
};

pub use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);
