//! Seeded simulators for shared local randomized measurements and independent
//! Pauli shadows, and the empirical variance harness.

pub mod rng;
pub mod sampling;
pub mod shadow;
pub mod shared;
pub mod variance;

pub use rng::{substream, Party};
pub use sampling::{
    basis_rotation, depolarized_outcome_transform, haar_u2, outcome_probabilities, sample_haar_unitary,
    sample_outcomes, OutcomeSampler, U2,
};
pub use shadow::{
    repeat_pauli_shadow, run_pauli_shadow, run_pauli_shadow_repetition, snapshot_pair_factor, ShadowRecord,
};
pub use shared::{block_value, conditional_mean, run_shared_lrm, EnsembleKind, EstimateRecord, RunConfig};
pub use variance::{
    empirical_variance_decomposition, empirical_variance_with, shadow_variance_check, z_score, SampleMoments, ShadowVarianceReport,
    VarianceReport,
};
