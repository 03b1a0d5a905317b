use super::{ComplexMatrix, C64, ZERO};
use crate::error::{invalid, Error, Result};

/// Default cap on the qubit count of dense states.
pub const DENSE_QUBIT_CAP: usize = 12;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_FLOOR: f64 = -1e-10;
// Full eigendecomposition beyond this size dominates construction time.
const PSD_CHECK_MAX_QUBITS: usize = 8;

/// Size limits for dense computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_qubits: DENSE_QUBIT_CAP }
    }
}

impl Limits {
    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_qubits {
            return Err(Error::SizeLimit { requested: n, cap: self.max_qubits });
        }
        Ok(())
    }
}

fn qubits_of_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Normalized state vector on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Validates the length (a power of two) and the unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n = qubits_of_dim(amps.len())?;
        Limits::default().check(n)?;
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm2} is not 1")));
        }
        Ok(Self { n, amps })
    }

    /// Rescales an arbitrary nonzero vector.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n = qubits_of_dim(amps.len())?;
        Limits::default().check(n)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        Limits::default().check(n)?;
        if index >= 1 << n {
            return Err(invalid(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Kronecker product of single-qubit (or larger) factors, left factor most significant.
    pub fn product(factors: &[PureState]) -> Result<Self> {
        let mut amps = vec![C64::new(1.0, 0.0)];
        let mut n = 0;
        for f in factors {
            n += f.n;
            Limits::default().check(n)?;
            let mut next = Vec::with_capacity(amps.len() * f.amps.len());
            for a in &amps {
                for b in &f.amps {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        if factors.is_empty() {
            return Err(invalid("empty product"));
        }
        Self::normalized(amps)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator { n: self.n, matrix: ComplexMatrix::outer(&self.amps) }
    }

    pub fn overlap(&self, other: &PureState) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} qubits", self.n, other.n)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Reduced density matrix on the 1-based qubits `keep`, computed from amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        let split = Split::new(self.n, keep)?;
        let dk = 1usize << split.kept.len();
        let dt = 1usize << (self.n - split.kept.len());
        let mut out = ComplexMatrix::zeros(dk);
        for t in 0..dt {
            let col: Vec<C64> = (0..dk).map(|k| self.amps[split.embed(k, t)]).collect();
            for r in 0..dk {
                if col[r] == ZERO {
                    continue;
                }
                for c in 0..dk {
                    let z = out.get(r, c) + col[r] * col[c].conj();
                    out.set(r, c, z);
                }
            }
        }
        Ok(out)
    }

    /// `tr[ψ_S²]` for the 1-based subset `keep`; the empty subset has purity 1.
    pub fn marginal_purity(&self, keep: &[usize]) -> Result<f64> {
        if keep.is_empty() {
            return Ok(1.0);
        }
        let r = self.reduced(keep)?;
        Ok(r.trace_product(&r)?.re)
    }
}

/// Density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Checks hermiticity and trace to 1e-12 and the eigenvalue floor -1e-10.
    /// The spectral check runs only up to 8 qubits.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = qubits_of_dim(matrix.dim())?;
        Limits::default().check(n)?;
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        if n <= PSD_CHECK_MAX_QUBITS {
            let min = matrix.hermitian_eigenvalues()[0];
            if min < EIGEN_FLOOR {
                return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
            }
        }
        Ok(Self { n, matrix })
    }

    /// Wraps a matrix that is a state by construction (channel outputs, products of states).
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n = matrix.dim().trailing_zeros() as usize;
        debug_assert_eq!(1usize << n, matrix.dim());
        Self { n, matrix }
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Limits::default().check(n)?;
        let d = 1usize << n;
        Ok(Self { n, matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64) })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).map(|z| z.re).unwrap_or(f64::NAN)
    }

    /// `tr[ρσ]`.
    pub fn overlap(&self, other: &DensityOperator) -> Result<f64> {
        Ok(self.matrix.trace_product(&other.matrix)?.re)
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        Limits::default().check(self.n + other.n)?;
        Ok(Self::from_matrix_unchecked(
            self.matrix.tensor_with_cap(&other.matrix, usize::MAX)?,
        ))
    }

    /// Reduced state on the 1-based qubits `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        Ok(Self::from_matrix_unchecked(partial_trace(&self.matrix, keep, self.n)?))
    }

    /// Diagonal in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.matrix.dim()).map(|i| self.matrix.get(i, i).re).collect()
    }
}

/// A state held in the cheapest faithful representation.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl QuantumState {
    pub fn n(&self) -> usize {
        match self {
            QuantumState::Pure(p) => p.n(),
            QuantumState::Mixed(m) => m.n(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            QuantumState::Pure(p) => p.density(),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            QuantumState::Pure(p) => Some(p),
            QuantumState::Mixed(_) => None,
        }
    }

    pub fn overlap(&self, other: &QuantumState) -> Result<f64> {
        match (self, other) {
            (QuantumState::Pure(a), QuantumState::Pure(b)) => Ok(a.overlap(b)?.norm_sqr()),
            _ => self.to_density().overlap(&other.to_density()),
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        QuantumState::Pure(p)
    }
}

impl From<DensityOperator> for QuantumState {
    fn from(m: DensityOperator) -> Self {
        QuantumState::Mixed(m)
    }
}

/// Bit bookkeeping for splitting a register into kept and traced qubits.
struct Split {
    n: usize,
    kept: Vec<usize>,
    traced: Vec<usize>,
}

impl Split {
    fn new(n: usize, keep: &[usize]) -> Result<Self> {
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(invalid("repeated qubit in keep set"));
        }
        if kept.iter().any(|&q| q == 0 || q > n) {
            return Err(invalid(format!("keep set {keep:?} is not a subset of 1..={n}")));
        }
        let traced = (1..=n).filter(|q| !kept.contains(q)).collect();
        Ok(Self { n, kept, traced })
    }

    /// Full index from kept-register index `k` and traced-register index `t`.
    fn embed(&self, k: usize, t: usize) -> usize {
        let mut idx = 0;
        let nk = self.kept.len();
        for (j, &q) in self.kept.iter().enumerate() {
            if (k >> (nk - 1 - j)) & 1 == 1 {
                idx |= 1 << (self.n - q);
            }
        }
        let nt = self.traced.len();
        for (j, &q) in self.traced.iter().enumerate() {
            if (t >> (nt - 1 - j)) & 1 == 1 {
                idx |= 1 << (self.n - q);
            }
        }
        idx
    }
}

/// Traces out every qubit not in `keep` (1-based, any order; output ordered ascending).
pub fn partial_trace(m: &ComplexMatrix, keep: &[usize], n: usize) -> Result<ComplexMatrix> {
    if m.dim() != 1usize << n {
        return Err(Error::DimensionMismatch(format!(
            "matrix of dim {} is not a {n}-qubit operator",
            m.dim()
        )));
    }
    let split = Split::new(n, keep)?;
    let dk = 1usize << split.kept.len();
    let dt = 1usize << split.traced.len();
    let rows: Vec<Vec<usize>> =
        (0..dk).map(|k| (0..dt).map(|t| split.embed(k, t)).collect()).collect();
    Ok(ComplexMatrix::from_fn(dk, |r, c| {
        rows[r].iter().zip(&rows[c]).map(|(&i, &j)| m.get(i, j)).sum()
    }))
}
