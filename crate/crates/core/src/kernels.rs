//! Post-processing kernels `f(s, t)`: the unique unbiased Hamming kernel,
//! symmetrization, and the q = 3 Krawtchouk transform onto partial-swap sectors.

use crate::error::{invalid, Error, Result};
use crate::qcore::{
    pauli_coefficients_of_matrix, pauli_matrix, permutation_operator, ComplexMatrix,
    DensityOperator, PauliLetter, Permutation, C64,
};
use crate::Ensemble;
use std::fmt;
use std::str::FromStr;

/// Largest `n` for which full `4^n` kernel tables are built.
pub const TABLE_MAX_QUBITS: usize = 6;
/// Largest `n` for which the group `(S_2)^n ⋊ S_n` is enumerated explicitly.
pub const GROUP_ENUMERATION_MAX_QUBITS: usize = 3;

/// Measurement record of `n` bits, bit 1 most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    n: usize,
    bits: u64,
}

impl BitString {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n > 63 || (n < 64 && bits >> n != 0) {
            return Err(invalid(format!("{bits:#b} does not fit in {n} bits")));
        }
        Ok(Self { n, bits })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// 1-based bit access.
    #[inline]
    pub fn bit(&self, l: usize) -> u8 {
        ((self.bits >> (self.n - l)) & 1) as u8
    }

    pub fn hamming_distance(&self, other: &BitString) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} bits", self.n, other.n)));
        }
        Ok((self.bits ^ other.bits).count_ones() as usize)
    }
}

impl FromStr for BitString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for ch in s.chars() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(Error::Parse(format!("bad bit {other:?}"))),
                };
        }
        BitString::new(s.len(), bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 1..=self.n {
            write!(f, "{}", self.bit(l))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelRepr {
    /// `4^n` values, entry `s * 2^n + t`.
    FullTable(Vec<f64>),
    /// `g(0..=n)`, with `f(s, t) = g(D(s, t))`.
    HammingProfile(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    n: usize,
    repr: KernelRepr,
}

impl Kernel {
    pub fn from_profile(g: Vec<f64>) -> Result<Self> {
        if g.is_empty() {
            return Err(invalid("profile needs n+1 >= 1 entries"));
        }
        Ok(Self { n: g.len() - 1, repr: KernelRepr::HammingProfile(g) })
    }

    pub fn from_table(n: usize, table: Vec<f64>) -> Result<Self> {
        check_table_size(n)?;
        if table.len() != 1 << (2 * n) {
            return Err(Error::DimensionMismatch(format!("{} entries for a {n}-bit table", table.len())));
        }
        Ok(Self { n, repr: KernelRepr::FullTable(table) })
    }

    /// `g(d) = (-1)^d 2^{n-d}`.
    pub fn unique(n: usize) -> Self {
        let g = (0..=n).map(|d| unique_profile_value(n, d) as f64).collect();
        Self { n, repr: KernelRepr::HammingProfile(g) }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self { n, repr: KernelRepr::HammingProfile(vec![value; n + 1]) }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn repr(&self) -> &KernelRepr {
        &self.repr
    }

    pub fn profile(&self) -> Option<&[f64]> {
        match &self.repr {
            KernelRepr::HammingProfile(g) => Some(g),
            KernelRepr::FullTable(_) => None,
        }
    }

    /// Value on raw `n`-bit integers.
    #[inline]
    pub fn value_bits(&self, s: u64, t: u64) -> f64 {
        match &self.repr {
            KernelRepr::FullTable(v) => v[((s as usize) << self.n) | t as usize],
            KernelRepr::HammingProfile(g) => g[(s ^ t).count_ones() as usize],
        }
    }

    pub fn value(&self, s: &BitString, t: &BitString) -> Result<f64> {
        if s.len() != self.n || t.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "bit strings of length {}/{} for an {}-bit kernel",
                s.len(),
                t.len(),
                self.n
            )));
        }
        Ok(self.value_bits(s.bits(), t.bits()))
    }

    pub fn to_table(&self) -> Result<Vec<f64>> {
        check_table_size(self.n)?;
        let d = 1u64 << self.n;
        Ok((0..d).flat_map(|s| (0..d).map(move |t| (s, t))).map(|(s, t)| self.value_bits(s, t)).collect())
    }

    pub fn to_full_table(&self) -> Result<Kernel> {
        Ok(Self { n: self.n, repr: KernelRepr::FullTable(self.to_table()?) })
    }
}

fn check_table_size(n: usize) -> Result<()> {
    if n > TABLE_MAX_QUBITS {
        return Err(Error::SizeLimit { requested: n, cap: TABLE_MAX_QUBITS });
    }
    Ok(())
}

fn unique_profile_value(n: usize, d: usize) -> i128 {
    let mag = 1i128 << (n - d);
    if d % 2 == 0 {
        mag
    } else {
        -mag
    }
}

/// `∏_l (3 δ_{s_l t_l} - 1) = (-1)^D 2^{n-D}`.
pub fn unique_kernel_value(n: usize, s: &BitString, t: &BitString) -> Result<f64> {
    if s.len() != n || t.len() != n {
        return Err(Error::DimensionMismatch(format!("expected {n} bits, got {}/{}", s.len(), t.len())));
    }
    Ok(unique_profile_value(n, s.hamming_distance(t)?) as f64)
}

/// Orbit average over simultaneous bit flips and qubit permutations, as a Hamming profile.
///
/// Up to [`GROUP_ENUMERATION_MAX_QUBITS`] the group is enumerated; beyond, each
/// Hamming class is averaged directly (the group acts transitively on each class).
pub fn hamming_symmetrize(f: &Kernel) -> Result<Kernel> {
    let n = f.n;
    if let KernelRepr::HammingProfile(g) = &f.repr {
        return Kernel::from_profile(g.clone());
    }
    check_table_size(n)?;
    let g = if n <= GROUP_ENUMERATION_MAX_QUBITS {
        let sym = group_average_table(f)?;
        let mut g = vec![0.0; n + 1];
        for d in 0..=n {
            // Representative pair (0, 1^d 0^{n-d}).
            let t = ((1u64 << d) - 1) << (n - d);
            g[d] = sym[t as usize];
        }
        g
    } else {
        class_average(f)
    };
    Kernel::from_profile(g)
}

/// `f_sym(s, t) = |Γ|^{-1} Σ_γ f(γ s, γ t)` over `Γ = (S_2)^n ⋊ S_n`, as a full table.
pub fn group_average_table(f: &Kernel) -> Result<Vec<f64>> {
    let n = f.n;
    check_table_size(n)?;
    let perms = crate::qcore::all_permutations(n);
    let d = 1u64 << n;
    let order = (perms.len() as u64 * d) as f64;
    let mut out = vec![0.0; 1 << (2 * n)];
    for s in 0..d {
        for t in 0..d {
            let mut acc = 0.0;
            for pi in &perms {
                let (ps, pt) = (permute_bits(s, pi, n), permute_bits(t, pi, n));
                for flip in 0..d {
                    acc += f.value_bits(ps ^ flip, pt ^ flip);
                }
            }
            out[((s << n) | t) as usize] = acc / order;
        }
    }
    Ok(out)
}

fn class_average(f: &Kernel) -> Vec<f64> {
    let n = f.n;
    let d = 1u64 << n;
    let mut sum = vec![0.0; n + 1];
    let mut count = vec![0u64; n + 1];
    for s in 0..d {
        for t in 0..d {
            let k = (s ^ t).count_ones() as usize;
            sum[k] += f.value_bits(s, t);
            count[k] += 1;
        }
    }
    sum.iter().zip(&count).map(|(s, &c)| s / c as f64).collect()
}

/// Bit `l` of `x` moves to position `π(l)`.
fn permute_bits(x: u64, pi: &Permutation, n: usize) -> u64 {
    let mut out = 0;
    for l in 0..n {
        if (x >> (n - 1 - l)) & 1 == 1 {
            out |= 1 << (n - 1 - pi.apply(l));
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// `K_d(k; n, 3) = Σ_j (-1)^j 2^{d-j} C(k, j) C(n-k, d-j)`, exactly.
pub fn krawtchouk(d: usize, k: usize, n: usize) -> Result<i128> {
    if d > n || k > n {
        return Err(invalid(format!("krawtchouk indices d={d}, k={k} must be <= n={n}")));
    }
    Ok((0..=d)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * (1i128 << (d - j)) * binomial(k, j) * binomial(n - k, d - j)
        })
        .sum())
}

/// Exact `3^n α_k` for an integer profile; returns numerators and the common denominator `3^n`.
pub fn swap_sector_numerators(g: &[i128]) -> Result<(Vec<i128>, i128)> {
    if g.is_empty() {
        return Err(invalid("empty profile"));
    }
    let n = g.len() - 1;
    let denom = 3i128.pow(n as u32);
    let nums = (0..=n)
        .map(|k| (0..=n).map(|d| krawtchouk(d, k, n).map(|kk| g[d] * kk)).sum::<Result<i128>>())
        .collect::<Result<Vec<_>>>()?;
    Ok((nums, denom))
}

/// `α_k(g) = 3^{-n} Σ_d g(d) K_d(k; n, 3)`, so that `Ω̄_f = Σ_k α_k Σ_{|S|=k} F_S`.
pub fn swap_sector_coefficients(g: &Kernel) -> Result<Vec<f64>> {
    let g = g.profile().ok_or_else(|| invalid("swap sectors need a Hamming profile"))?;
    let n = g.len() - 1;
    let scale = 3f64.powi(n as i32);
    (0..=n)
        .map(|k| {
            (0..=n)
                .map(|d| krawtchouk(d, k, n).map(|kk| g[d] * kk as f64))
                .sum::<Result<f64>>()
                .map(|s| s / scale)
        })
        .collect()
}

/// Inverse transform `α -> g` by an LU solve of the Krawtchouk system.
pub fn profile_from_sectors(alpha: &[f64]) -> Result<Kernel> {
    if alpha.is_empty() {
        return Err(invalid("empty sector vector"));
    }
    let n = alpha.len() - 1;
    let scale = 3f64.powi(n as i32);
    let mut m = nalgebra::DMatrix::<f64>::zeros(n + 1, n + 1);
    for k in 0..=n {
        for d in 0..=n {
            m[(k, d)] = krawtchouk(d, k, n)? as f64 / scale;
        }
    }
    let rhs = nalgebra::DVector::from_column_slice(alpha);
    let g = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular Krawtchouk system".into()))?;
    Kernel::from_profile(g.iter().copied().collect())
}

/// The six signed single-qubit Pauli directions `±X, ±Y, ±Z`.
pub const SIGNED_DIRECTIONS: [(PauliLetter, f64); 6] = [
    (PauliLetter::X, 1.0),
    (PauliLetter::X, -1.0),
    (PauliLetter::Y, 1.0),
    (PauliLetter::Y, -1.0),
    (PauliLetter::Z, 1.0),
    (PauliLetter::Z, -1.0),
];

/// Projector for outcome `s` along a signed direction: `(I + (-1)^s sign P)/2`.
fn direction_projector(dir: (PauliLetter, f64), s: u64) -> ComplexMatrix {
    let sgn = if s == 0 { dir.1 } else { -dir.1 };
    let mut m = pauli_matrix(dir.0).scale_real(0.5 * sgn);
    m.axpy(C64::new(0.5, 0.0), &ComplexMatrix::identity(2)).expect("2x2");
    m
}

/// Ensemble average `E_U[(U†⊗U†) Ω_f (U⊗U)]` with `Ω_f = Σ f(s,t) |s><s| ⊗ |t><t|`,
/// on the register order (A_1..A_n, B_1..B_n).
///
/// Clifford enumerates the `6^n` signed Pauli measurement directions (basis choice
/// times outcome relabelling); Haar uses the exact one-qubit second moment.
pub fn averaged_omega(f: &Kernel, ensemble: Ensemble) -> Result<ComplexMatrix> {
    let n = f.n;
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("averaged_omega supports 1 <= n <= 2, got {n}")));
    }
    let d = 1u64 << n;
    let dim = 1usize << (2 * n);
    match ensemble {
        Ensemble::Clifford => {
            let mut acc = ComplexMatrix::zeros(dim);
            let combos = 6usize.pow(n as u32);
            for c in 0..combos {
                let dirs: Vec<_> = (0..n).map(|l| SIGNED_DIRECTIONS[(c / 6usize.pow((n - 1 - l) as u32)) % 6]).collect();
                let proj = |x: u64| {
                    let mut m = ComplexMatrix::identity(1);
                    for (l, dir) in dirs.iter().enumerate() {
                        m = m.tensor(&direction_projector(*dir, (x >> (n - 1 - l)) & 1)).expect("small");
                    }
                    m
                };
                let projs: Vec<ComplexMatrix> = (0..d).map(proj).collect();
                for s in 0..d {
                    for t in 0..d {
                        let v = f.value_bits(s, t);
                        if v != 0.0 {
                            acc.axpy(C64::new(v, 0.0), &projs[s as usize].tensor(&projs[t as usize])?)?;
                        }
                    }
                }
            }
            Ok(acc.scale_real(1.0 / combos as f64))
        }
        Ensemble::Haar => {
            // Per qubit pair (A_l, B_l): E[U†|s><s|U ⊗ U†|t><t|U] = (I + (-1)^{s+t}(2F - I)/3)/4.
            let f2 = permutation_operator(&Permutation::transposition(2, 1, 2)?);
            let i4 = ComplexMatrix::identity(4);
            let a = (&f2.scale_real(2.0) - &i4).scale_real(1.0 / 3.0);
            let m = [(&i4 + &a).scale_real(0.25), (&i4 - &a).scale_real(0.25)];
            let mut interleaved = ComplexMatrix::zeros(dim);
            for s in 0..d {
                for t in 0..d {
                    let v = f.value_bits(s, t);
                    if v == 0.0 {
                        continue;
                    }
                    let mut op = ComplexMatrix::identity(1);
                    for l in 0..n {
                        let e = (((s ^ t) >> (n - 1 - l)) & 1) as usize;
                        op = op.tensor(&m[e])?;
                    }
                    interleaved.axpy(C64::new(v, 0.0), &op)?;
                }
            }
            // Reorder (A_1, B_1, A_2, B_2, ...) -> (A_1, ..., A_n, B_1, ..., B_n).
            let images: Vec<usize> = (0..2 * n).map(|k| if k % 2 == 0 { k / 2 + 1 } else { n + k / 2 + 1 }).collect();
            let p = permutation_operator(&Permutation::from_one_line(&images)?);
            Ok(&(&p * &interleaved) * &p.adjoint())
        }
    }
}

/// Outcome distribution of `rho` measured along the signed directions `dirs` (one per qubit).
///
/// Uses `p(s) = 2^{-n} Σ_S ∏_{l∈S} (±1)^{s_l} tr[ρ P_S]` over the Pauli coefficients.
pub fn direction_probabilities(coeffs: &[f64], n: usize, dirs: &[(PauliLetter, f64)]) -> Vec<f64> {
    let d = 1usize << n;
    let mut out = vec![0.0; d];
    for mask in 0..d {
        let mut idx = 0usize;
        let mut sign = 1.0;
        for (l, dir) in dirs.iter().enumerate() {
            let on = (mask >> (n - 1 - l)) & 1 == 1;
            idx = idx * 4 + if on { dir.0.index() } else { 0 };
            if on {
                sign *= dir.1;
            }
        }
        let c = coeffs[idx] * sign;
        if c == 0.0 {
            continue;
        }
        for (s, o) in out.iter_mut().enumerate() {
            let parity = (s & mask).count_ones() % 2;
            *o += if parity == 0 { c } else { -c };
        }
    }
    for o in &mut out {
        *o /= d as f64;
    }
    out
}

/// Exact mean and variance of a single shot pair `f(s, t)` under the signed Clifford
/// ensemble, enumerating all `6^n` direction assignments.
pub fn single_shot_moments(f: &Kernel, rho: &DensityOperator, sigma: &DensityOperator) -> Result<(f64, f64)> {
    let n = f.n;
    if rho.n() != n || sigma.n() != n {
        return Err(Error::DimensionMismatch("kernel and states disagree on n".into()));
    }
    if n > 4 {
        return Err(Error::SizeLimit { requested: n, cap: 4 });
    }
    let cr: Vec<f64> = pauli_coefficients_of_matrix(rho.matrix(), n)?.iter().map(|z| z.re).collect();
    let cs: Vec<f64> = pauli_coefficients_of_matrix(sigma.matrix(), n)?.iter().map(|z| z.re).collect();
    let combos = 6usize.pow(n as u32);
    let d = 1u64 << n;
    let (mut m1, mut m2) = (0.0, 0.0);
    for c in 0..combos {
        let dirs: Vec<_> = (0..n).map(|l| SIGNED_DIRECTIONS[(c / 6usize.pow((n - 1 - l) as u32)) % 6]).collect();
        let p = direction_probabilities(&cr, n, &dirs);
        let q = direction_probabilities(&cs, n, &dirs);
        for s in 0..d {
            for t in 0..d {
                let w = p[s as usize] * q[t as usize];
                let v = f.value_bits(s, t);
                m1 += w * v;
                m2 += w * v * v;
            }
        }
    }
    m1 /= combos as f64;
    m2 /= combos as f64;
    Ok((m1, m2 - m1 * m1))
}
