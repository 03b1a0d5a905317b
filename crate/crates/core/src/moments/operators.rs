//! One-qubit replica operators. Replica order for four copies is (A1, B1, A2, B2).

use crate::error::Result;
use crate::qcore::{pauli_matrix, permutation_operator, ComplexMatrix, PauliLetter, Permutation, C64};
use crate::states::letter_state;
use serde::Serialize;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReplicaLabel {
    /// `2I + F` on (A, B).
    SecondMoment,
    /// On (A, A', B).
    RAAB,
    /// On (A, B, B').
    RABB,
    R4Clifford,
    R4Haar,
    Omega2P,
    Omega3P,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaOperator {
    pub label: ReplicaLabel,
    pub replicas: usize,
    pub matrix: ComplexMatrix,
}

impl ReplicaOperator {
    fn new(label: ReplicaLabel, replicas: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << replicas);
        Self { label, replicas, matrix }
    }
}

fn swap(m: usize, i: usize, j: usize) -> ComplexMatrix {
    permutation_operator(&Permutation::transposition(m, i, j).expect("valid transposition"))
}

fn perm(m: usize, cycles: &[&[usize]]) -> ComplexMatrix {
    permutation_operator(&Permutation::from_cycles(m, cycles).expect("valid cycles"))
}

fn combine(dim: usize, terms: &[(f64, ComplexMatrix)]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(dim);
    for (c, m) in terms {
        acc.axpy(C64::new(*c, 0.0), m).expect("same dimension");
    }
    acc
}

pub fn build_second_moment() -> ReplicaOperator {
    let m = combine(4, &[(2.0, ComplexMatrix::identity(4)), (1.0, swap(2, 1, 2))]);
    ReplicaOperator::new(ReplicaLabel::SecondMoment, 2, m)
}

/// `R_AA'B = -I + 3/2 F_AA' + 1/2 F_AB + 1/2 F_A'B` and
/// `R_ABB' = -I + 3/2 F_BB' + 1/2 F_AB + 1/2 F_AB'`.
pub fn build_third_moment_operators() -> (ReplicaOperator, ReplicaOperator) {
    let i8 = ComplexMatrix::identity(8);
    let raab = combine(8, &[(-1.0, i8.clone()), (1.5, swap(3, 1, 2)), (0.5, swap(3, 1, 3)), (0.5, swap(3, 2, 3))]);
    let rabb = combine(8, &[(-1.0, i8), (1.5, swap(3, 2, 3)), (0.5, swap(3, 1, 2)), (0.5, swap(3, 1, 3))]);
    (ReplicaOperator::new(ReplicaLabel::RAAB, 3, raab), ReplicaOperator::new(ReplicaLabel::RABB, 3, rabb))
}

/// One-qubit Clifford commutant generator `Ω = (I + X^{⊗4} + Y^{⊗4} + Z^{⊗4}) / 2`.
pub fn clifford_commutant_generator() -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(16);
    for l in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
        acc.axpy(C64::new(1.0, 0.0), &pauli_matrix(l).tensor_power(4).expect("16x16")).expect("16");
    }
    acc.scale_real(0.5)
}

/// `R4_Cl = -I + (F_12 + F_34)/2 + 3/2 Ω`.
pub fn build_r4_clifford() -> ReplicaOperator {
    let m = combine(
        16,
        &[
            (-1.0, ComplexMatrix::identity(16)),
            (0.5, swap(4, 1, 2)),
            (0.5, swap(4, 3, 4)),
            (1.5, clifford_commutant_generator()),
        ],
    );
    ReplicaOperator::new(ReplicaLabel::R4Clifford, 4, m)
}

/// `R4_H = (I + F12 + F34)/5 + 3/5 (F12F34 + F13F24 + F14F23) - 3/10 (F13 + F24 + F14 + F23)`.
pub fn build_r4_haar() -> ReplicaOperator {
    let m = combine(
        16,
        &[
            (0.2, ComplexMatrix::identity(16)),
            (0.2, swap(4, 1, 2)),
            (0.2, swap(4, 3, 4)),
            (0.6, perm(4, &[&[1, 2], &[3, 4]])),
            (0.6, perm(4, &[&[1, 3], &[2, 4]])),
            (0.6, perm(4, &[&[1, 4], &[2, 3]])),
            (-0.3, swap(4, 1, 3)),
            (-0.3, swap(4, 2, 4)),
            (-0.3, swap(4, 1, 4)),
            (-0.3, swap(4, 2, 3)),
        ],
    );
    ReplicaOperator::new(ReplicaLabel::R4Haar, 4, m)
}

/// The six single-qubit Pauli eigenstates as projectors, in the order `0 1 + - r l`.
pub fn pauli_eigenprojectors() -> Vec<ComplexMatrix> {
    "01+-rl".chars().map(|c| letter_state(c).expect("letter").density().matrix().clone()).collect()
}

/// Snapshot `s_ψ = 3ψ - I`.
pub fn shadow_snapshot(psi: &ComplexMatrix) -> ComplexMatrix {
    psi.scale_real(3.0).try_sub(&ComplexMatrix::identity(2)).expect("2x2")
}

/// `ω2 = Σ_{ψ,φ} E_ψ ⊗ E_φ tr[s_ψ s_φ]^2` and `ω3 = Σ_ψ E_ψ ⊗ s_ψ ⊗ s_ψ`, with `E_ψ = ψ/3`.
pub fn build_shadow_operators() -> Result<(ReplicaOperator, ReplicaOperator)> {
    let projs = pauli_eigenprojectors();
    let snaps: Vec<ComplexMatrix> = projs.iter().map(shadow_snapshot).collect();
    let effects: Vec<ComplexMatrix> = projs.iter().map(|p| p.scale_real(1.0 / 3.0)).collect();
    let mut w2 = ComplexMatrix::zeros(4);
    let mut w3 = ComplexMatrix::zeros(8);
    for (i, ei) in effects.iter().enumerate() {
        for (j, ej) in effects.iter().enumerate() {
            let t = snaps[i].trace_product(&snaps[j])?.re;
            w2.axpy(C64::new(t * t, 0.0), &ei.tensor(ej)?)?;
        }
        w3.axpy(C64::new(1.0, 0.0), &ei.tensor(&snaps[i])?.tensor(&snaps[i])?)?;
    }
    Ok((ReplicaOperator::new(ReplicaLabel::Omega2P, 2, w2), ReplicaOperator::new(ReplicaLabel::Omega3P, 3, w3)))
}

/// Cached operators; building them is cheap but they are used in inner loops.
pub struct OperatorCache {
    pub second: ReplicaOperator,
    pub raab: ReplicaOperator,
    pub rabb: ReplicaOperator,
    pub r4_clifford: ReplicaOperator,
    pub r4_haar: ReplicaOperator,
    pub omega2: ReplicaOperator,
    pub omega3: ReplicaOperator,
}

pub fn operators() -> &'static OperatorCache {
    static CACHE: OnceLock<OperatorCache> = OnceLock::new();
    CACHE.get_or_init(|| {
        let (raab, rabb) = build_third_moment_operators();
        let (omega2, omega3) = build_shadow_operators().expect("fixed-size construction");
        OperatorCache {
            second: build_second_moment(),
            raab,
            rabb,
            r4_clifford: build_r4_clifford(),
            r4_haar: build_r4_haar(),
            omega2,
            omega3,
        }
    })
}
