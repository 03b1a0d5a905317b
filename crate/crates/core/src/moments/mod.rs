//! Moment operators and the state-dependent variance coefficients
//! `A_n = tr[(2I+F)^{⊗n}(ρ⊗σ)]`, `C_n`, `B_{n,E} = tr[R_{4,E}^{⊗n}(ρ⊗σ⊗ρ⊗σ)]`
//! and their independent-shadow analogues.

pub mod closed_form;
pub mod montecarlo;
pub mod operators;
pub mod stabilizer;
pub mod transfer;
pub mod twirl;

pub use closed_form::{
    closed_form_a, closed_form_b, closed_form_family, ghz_b_replica_sum, schmidt_a, schmidt_b_haar,
    schmidt_product, single_qubit_a, single_qubit_b_haar, w_b_falling, ClosedFormFamily,
    W_FALLING_CONSTANTS,
};
pub use montecarlo::{mc_coefficients, McCoefficients, McValue};
pub use operators::{
    build_r4_clifford, build_r4_haar, build_second_moment, build_shadow_operators,
    build_third_moment_operators, clifford_commutant_generator, operators, pauli_eigenprojectors,
    shadow_snapshot, ReplicaLabel, ReplicaOperator,
};
pub use stabilizer::{
    clifford_support_sum, coeff_b_stabilizer, enumerate_stabilizer_states, haar_support_sum, kappa,
    product_support, StabilizerSupport, CLIFFORD_SUPPORT_MAX_QUBITS, HAAR_SUPPORT_MAX_QUBITS,
};
pub use twirl::{verify_twirl_identity, TwirlReport};

use crate::error::{Error, Result};
use crate::qcore::{pauli_coefficients, DensityOperator, Limits, PureState, QuantumState};
use crate::states::{depolarize_local, StateFamily};
use crate::Ensemble;
use serde::Serialize;
use std::fmt;
use std::sync::OnceLock;
use transfer::{contract_four, contract_three_uuw, contract_three_wuu, contract_two, pauli_transfer_tensor};

/// Default largest `n` for the generic `B` contraction.
pub const GENERIC_B_MAX_QUBITS: usize = 3;
/// Largest `n` for the generic `B` contraction when explicitly extended.
pub const GENERIC_B_EXTENDED_MAX_QUBITS: usize = 5;
/// Largest `n` for the generic `C` contraction (its working vectors have `16^n` entries).
pub const GENERIC_C_MAX_QUBITS: usize = 6;

struct TransferTensors {
    second: Vec<f64>,
    raab: Vec<f64>,
    rabb: Vec<f64>,
    r4_clifford: Vec<f64>,
    r4_haar: Vec<f64>,
    omega2: Vec<f64>,
    omega3: Vec<f64>,
}

fn tensors() -> &'static TransferTensors {
    static CACHE: OnceLock<TransferTensors> = OnceLock::new();
    CACHE.get_or_init(|| {
        let ops = operators();
        let t = |op: &ReplicaOperator| pauli_transfer_tensor(&op.matrix, op.replicas).expect("fixed sizes");
        TransferTensors {
            second: t(&ops.second),
            raab: t(&ops.raab),
            rabb: t(&ops.rabb),
            r4_clifford: t(&ops.r4_clifford),
            r4_haar: t(&ops.r4_haar),
            omega2: t(&ops.omega2),
            omega3: t(&ops.omega3),
        }
    })
}

fn pair_coefficients(rho: &DensityOperator, sigma: &DensityOperator) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    if rho.n() != sigma.n() {
        return Err(Error::DimensionMismatch(format!("{} vs {} qubits", rho.n(), sigma.n())));
    }
    Ok((pauli_coefficients(rho)?, pauli_coefficients(sigma)?, rho.n()))
}

fn size_check(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeLimit { requested: n, cap });
    }
    Ok(())
}

/// `A_n(ρ, σ)` by Pauli-basis contraction.
pub fn coeff_a(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let (x, y, n) = pair_coefficients(rho, sigma)?;
    Ok(contract_two(&x, &y, n, &tensors().second))
}

/// `A_n(ψ, ψ) = Σ_S 2^{n-|S|} tr[ψ_S^2]` over all subsets `S` (the empty set contributes `2^n`).
pub fn coeff_a_purity_form(psi: &PureState) -> Result<f64> {
    let n = psi.n();
    size_check(n, 10)?;
    let mut total = 0.0;
    for mask in 0usize..(1 << n) {
        let keep: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).map(|q| q + 1).collect();
        let purity = if keep.is_empty() { 1.0 } else { psi.marginal_purity(&keep)? };
        total += 2f64.powi((n - keep.len()) as i32) * purity;
    }
    Ok(total)
}

/// `C_n = tr[R_{AA'B}^{⊗n}(ρ⊗ρ⊗σ)] + tr[R_{ABB'}^{⊗n}(ρ⊗σ⊗σ)]`, reported signed.
pub fn coeff_c(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let (a, b) = coeff_c_terms(rho, sigma)?;
    Ok(a + b)
}

/// The two ordered terms of `C_n` separately.
pub fn coeff_c_terms(rho: &DensityOperator, sigma: &DensityOperator) -> Result<(f64, f64)> {
    size_check(rho.n(), GENERIC_C_MAX_QUBITS)?;
    let (x, y, n) = pair_coefficients(rho, sigma)?;
    let t = tensors();
    Ok((contract_three_uuw(&x, &y, n, &t.raab), contract_three_wuu(&x, &y, n, &t.rabb)))
}

/// `B_{n,E}(ρ, σ)` with the default size cap.
pub fn coeff_b(rho: &DensityOperator, sigma: &DensityOperator, ensemble: Ensemble) -> Result<f64> {
    coeff_b_with_cap(rho, sigma, ensemble, GENERIC_B_MAX_QUBITS)
}

/// `B_{n,E}(ρ, σ)` with an explicit cap, at most [`GENERIC_B_EXTENDED_MAX_QUBITS`].
pub fn coeff_b_with_cap(rho: &DensityOperator, sigma: &DensityOperator, ensemble: Ensemble, cap: usize) -> Result<f64> {
    size_check(rho.n(), cap.min(GENERIC_B_EXTENDED_MAX_QUBITS))?;
    if rho.n() > GENERIC_B_MAX_QUBITS {
        log::warn!("generic B contraction at n = {} beyond the default cap {}", rho.n(), GENERIC_B_MAX_QUBITS);
    }
    let (x, y, n) = pair_coefficients(rho, sigma)?;
    let t = match ensemble {
        Ensemble::Clifford => &tensors().r4_clifford,
        Ensemble::Haar => &tensors().r4_haar,
    };
    Ok(contract_four(&x, &y, n, t))
}

/// Coefficients of the independent Pauli-shadow variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShadowCoefficients {
    pub overlap: f64,
    /// `tr[ω2^{⊗n}(ρ⊗σ)]`.
    pub a: f64,
    /// `tr[ω3^{⊗n}(ρ⊗σ⊗σ)]`.
    pub b_rho_sigma: f64,
    /// `tr[ω3^{⊗n}(σ⊗ρ⊗ρ)]`.
    pub b_sigma_rho: f64,
}

impl ShadowCoefficients {
    /// `V[ĝ] = A/N^2 + (N-1)/N^2 (B_ρσ + B_σρ) - (2N-1)/N^2 tr[ρσ]^2` for `N` snapshots per party.
    pub fn variance(&self, copies: usize) -> f64 {
        let n = copies as f64;
        self.a / (n * n) + (n - 1.0) / (n * n) * (self.b_rho_sigma + self.b_sigma_rho)
            - (2.0 * n - 1.0) / (n * n) * self.overlap * self.overlap
    }
}

pub fn shadow_coefficients(rho: &DensityOperator, sigma: &DensityOperator) -> Result<ShadowCoefficients> {
    size_check(rho.n(), GENERIC_C_MAX_QUBITS)?;
    let (x, y, n) = pair_coefficients(rho, sigma)?;
    let t = tensors();
    Ok(ShadowCoefficients {
        overlap: rho.overlap(sigma)?,
        a: contract_two(&x, &y, n, &t.omega2),
        b_rho_sigma: contract_three_wuu(&x, &y, n, &t.omega3),
        b_sigma_rho: contract_three_wuu(&y, &x, n, &t.omega3),
    })
}

/// Exact `V[X_M] = -tr[ρσ]^2 + A/N_M^2 + C(N_M-1)/N_M^2 + B((N_M-1)/N_M)^2`, term by term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceTerms {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
}

impl VarianceTerms {
    pub fn new(overlap: f64, a: f64, c: f64, b: f64, shots: usize) -> Self {
        let m = shots as f64;
        Self {
            v1: -overlap * overlap,
            v2: a / (m * m),
            v3: c * (m - 1.0) / (m * m),
            v4: b * ((m - 1.0) / m).powi(2),
        }
    }

    pub fn total(&self) -> f64 {
        self.v1 + self.v2 + self.v3 + self.v4
    }
}

/// How a coefficient was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Generic,
    ClosedForm,
    Stabilizer,
    Product,
    #[serde(rename = "mc")]
    MonteCarlo { seed: u64, samples: usize },
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Generic => "generic",
            Method::ClosedForm => "closed_form",
            Method::Stabilizer => "stabilizer",
            Method::Product => "product",
            Method::MonteCarlo { .. } => "mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::MonteCarlo { seed, samples } => write!(f, "mc(seed={seed};samples={samples})"),
            other => f.write_str(other.label()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Value {
    pub value: f64,
    pub method: Method,
    /// Standard error, for Monte Carlo values only.
    pub stderr: Option<f64>,
}

impl Value {
    fn exact(value: f64, method: Method) -> Self {
        Self { value, method, stderr: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCoefficients {
    pub n: usize,
    pub overlap: Value,
    pub a: Value,
    pub c: Value,
    pub b_cl: Value,
    pub b_haar: Value,
}

impl MomentCoefficients {
    pub fn b(&self, ensemble: Ensemble) -> &Value {
        match ensemble {
            Ensemble::Clifford => &self.b_cl,
            Ensemble::Haar => &self.b_haar,
        }
    }

    pub fn variance(&self, ensemble: Ensemble, shots: usize) -> VarianceTerms {
        VarianceTerms::new(self.overlap.value, self.a.value, self.c.value, self.b(ensemble).value, shots)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientOptions {
    /// Allow the generic `B` contraction up to [`GENERIC_B_EXTENDED_MAX_QUBITS`].
    pub extended_generic: bool,
    /// Monte Carlo fallback when no exact path applies; `None` turns it into an error.
    pub mc_samples: Option<usize>,
    pub mc_seed: u64,
}

impl Default for CoefficientOptions {
    fn default() -> Self {
        Self { extended_generic: false, mc_samples: Some(20_000), mc_seed: 1 }
    }
}

impl CoefficientOptions {
    fn b_cap(&self) -> usize {
        if self.extended_generic {
            GENERIC_B_EXTENDED_MAX_QUBITS
        } else {
            GENERIC_B_MAX_QUBITS
        }
    }
}

/// Tensor factors as density operators, when the family is a product of small blocks.
fn density_factors(f: &StateFamily) -> Option<Vec<DensityOperator>> {
    match f {
        StateFamily::Depolarized { base, p } => {
            density_factors(base)?.iter().map(|d| depolarize_local(d, *p).ok()).collect()
        }
        _ => Some(f.product_factors()?.iter().map(|p| p.density()).collect()),
    }
}

struct FactorValues {
    overlap: f64,
    a: f64,
    c: (f64, f64),
    b_cl: f64,
    b_haar: f64,
}

fn product_path(rho: &StateFamily, sigma: &StateFamily) -> Result<Option<FactorValues>> {
    let (Some(fr), Some(fs)) = (density_factors(rho), density_factors(sigma)) else {
        return Ok(None);
    };
    if fr.len() != fs.len() || fr.iter().zip(&fs).any(|(a, b)| a.n() != b.n()) {
        return Ok(None);
    }
    let mut out = FactorValues { overlap: 1.0, a: 1.0, c: (1.0, 1.0), b_cl: 1.0, b_haar: 1.0 };
    for (a, b) in fr.iter().zip(&fs) {
        let (c1, c2) = coeff_c_terms(a, b)?;
        out.overlap *= a.overlap(b)?;
        out.a *= coeff_a(a, b)?;
        out.c = (out.c.0 * c1, out.c.1 * c2);
        out.b_cl *= coeff_b(a, b, Ensemble::Clifford)?;
        out.b_haar *= coeff_b(a, b, Ensemble::Haar)?;
    }
    Ok(Some(out))
}

/// Coefficients for a pair of families, taking for each field the first applicable path
/// in the order closed form, product, stabilizer, generic, Monte Carlo.
pub fn family_coefficients(rho: &StateFamily, sigma: &StateFamily, opts: &CoefficientOptions) -> Result<MomentCoefficients> {
    rho.validate()?;
    sigma.validate()?;
    let n = rho.n();
    if sigma.n() != n {
        return Err(Error::DimensionMismatch(format!("{n} vs {} qubits", sigma.n())));
    }
    let identical_pure = rho == sigma && rho.is_pure();
    let closed = if identical_pure { closed_form_family(rho) } else { None };

    let mut overlap = None;
    let mut a = None;
    let mut c = None;
    let mut b_cl = None;
    let mut b_haar = None;

    if identical_pure {
        overlap = Some(Value::exact(1.0, Method::ClosedForm));
    }
    if let Some(fam) = closed {
        a = Some(Value::exact(closed_form_a(fam, n)?, Method::ClosedForm));
        // The Haar product value (6/5)^n holds for every pure product; the Clifford one does not.
        b_haar = Some(Value::exact(closed_form_b(fam, n)?, Method::ClosedForm));
        if fam == ClosedFormFamily::Ghz {
            b_cl = Some(Value::exact(ghz_b_replica_sum(n, Ensemble::Clifford)?, Method::ClosedForm));
        }
    }
    if let Some(p) = product_path(rho, sigma)? {
        let m = Method::Product;
        overlap.get_or_insert(Value::exact(p.overlap, m));
        a.get_or_insert(Value::exact(p.a, m));
        c.get_or_insert(Value::exact(p.c.0 + p.c.1, m));
        b_cl.get_or_insert(Value::exact(p.b_cl, m));
        b_haar.get_or_insert(Value::exact(p.b_haar, m));
    }
    if identical_pure && (b_cl.is_none() || b_haar.is_none()) {
        if let Some(gens) = rho.stabilizer_generators() {
            let s = StabilizerSupport::from_generators(gens)?;
            if b_cl.is_none() && n <= CLIFFORD_SUPPORT_MAX_QUBITS {
                b_cl = Some(Value::exact(clifford_support_sum(&s)?, Method::Stabilizer));
            }
            if b_haar.is_none() && n <= HAAR_SUPPORT_MAX_QUBITS {
                b_haar = Some(Value::exact(haar_support_sum(&s)?, Method::Stabilizer));
            }
        }
    }

    let needs_state = overlap.is_none() || a.is_none() || c.is_none() || b_cl.is_none() || b_haar.is_none();
    if needs_state {
        Limits::default().check(n)?;
        let (sr, ss) = (rho.build()?, sigma.build()?);
        let (dr, ds) = (sr.to_density(), ss.to_density());
        let m = Method::Generic;
        if overlap.is_none() {
            overlap = Some(Value::exact(dr.overlap(&ds)?, m));
        }
        if a.is_none() {
            a = Some(Value::exact(coeff_a(&dr, &ds)?, m));
        }
        if c.is_none() && n <= GENERIC_C_MAX_QUBITS {
            c = Some(Value::exact(coeff_c(&dr, &ds)?, m));
        }
        for (slot, ens) in [(&mut b_cl, Ensemble::Clifford), (&mut b_haar, Ensemble::Haar)] {
            if slot.is_none() && n <= opts.b_cap() {
                *slot = Some(Value::exact(coeff_b_with_cap(&dr, &ds, ens, opts.b_cap())?, m));
            }
        }
        let mut mc_cache: [Option<McCoefficients>; 2] = [None, None];
        let mut mc = |ens: Ensemble| -> Result<McCoefficients> {
            let Some(samples) = opts.mc_samples else {
                return Err(Error::Unsupported(format!("no exact path for {rho} / {sigma} at n = {n}")));
            };
            let slot = &mut mc_cache[ens as usize];
            if slot.is_none() {
                *slot = Some(mc_coefficients(&sr, &ss, ens, samples, opts.mc_seed)?);
            }
            Ok(slot.clone().expect("filled"))
        };
        if c.is_none() {
            let m = mc(Ensemble::Haar)?;
            c = Some(m.value(m.c));
        }
        if b_cl.is_none() {
            let m = mc(Ensemble::Clifford)?;
            b_cl = Some(m.value(m.b));
        }
        if b_haar.is_none() {
            let m = mc(Ensemble::Haar)?;
            b_haar = Some(m.value(m.b));
        }
    }
    Ok(MomentCoefficients {
        n,
        overlap: overlap.expect("filled"),
        a: a.expect("filled"),
        c: c.expect("filled"),
        b_cl: b_cl.expect("filled"),
        b_haar: b_haar.expect("filled"),
    })
}

/// Exact coefficients of an explicit state pair by the generic paths.
pub fn state_coefficients(rho: &QuantumState, sigma: &QuantumState, opts: &CoefficientOptions) -> Result<MomentCoefficients> {
    let (dr, ds) = (rho.to_density(), sigma.to_density());
    let m = Method::Generic;
    let cap = opts.b_cap();
    Ok(MomentCoefficients {
        n: dr.n(),
        overlap: Value::exact(dr.overlap(&ds)?, m),
        a: Value::exact(coeff_a(&dr, &ds)?, m),
        c: Value::exact(coeff_c(&dr, &ds)?, m),
        b_cl: Value::exact(coeff_b_with_cap(&dr, &ds, Ensemble::Clifford, cap)?, m),
        b_haar: Value::exact(coeff_b_with_cap(&dr, &ds, Ensemble::Haar, cap)?, m),
    })
}

/// Product-benchmark check `A_n B_{n,H} ≤ (18/5)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub product: f64,
    pub bound: f64,
    /// `bound - product`; zero for identical pure products.
    pub margin: f64,
    pub ratio: f64,
    pub pass: bool,
}

pub fn certificate(a: f64, b_haar: f64, n: usize) -> Certificate {
    let product = a * b_haar;
    let bound = 3.6f64.powi(n as i32);
    Certificate { n, product, bound, margin: bound - product, ratio: product / bound, pass: product <= bound * (1.0 + 1e-12) }
}

/// Certificate for an identical pure closed-form family at size `n`.
pub fn family_certificate(family: ClosedFormFamily, n: usize) -> Result<Certificate> {
    Ok(certificate(closed_form_a(family, n)?, closed_form_b(family, n)?, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{permutation_operator, ComplexMatrix, Permutation};
    use crate::states::{make_bell_dimer, make_ghz, make_haar_random_pure, make_schmidt_pair, make_w};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mixed(n: usize, rank: usize, seed: u64) -> DensityOperator {
        let d = 1usize << n;
        let mut m = ComplexMatrix::zeros(d);
        for k in 0..rank {
            let psi = make_haar_random_pure(n, seed * 31 + k as u64).unwrap();
            let w = 1.0 / rank as f64;
            m.axpy(crate::C64::new(w, 0.0), psi.density().matrix()).unwrap();
        }
        DensityOperator::new(m).unwrap()
    }

    fn random_state(n: usize, seed: u64) -> DensityOperator {
        if seed % 2 == 0 {
            make_haar_random_pure(n, seed).unwrap().density()
        } else {
            random_mixed(n, 1 + (seed as usize % 3), seed)
        }
    }

    /// Dense `tr[R^{⊗n} Π (X_1 ⊗ ... ⊗ X_m) Π†]` with registers reordered qubit-major.
    fn dense_replica_value(r: &ComplexMatrix, m: usize, regs: &[&DensityOperator]) -> f64 {
        let n = regs[0].n();
        let mut x = regs[0].clone();
        for reg in &regs[1..] {
            x = x.tensor(reg).unwrap();
        }
        let images: Vec<usize> = (0..m * n).map(|k| {
            let (reg, l) = (k / n, k % n);
            l * m + reg + 1
        }).collect();
        let pi = permutation_operator(&Permutation::from_one_line(&images).unwrap());
        let xm = &(&pi * x.matrix()) * &pi.adjoint();
        let big = r.tensor_power(n).unwrap();
        big.trace_product(&xm).unwrap().re
    }

    #[test]
    fn landmark_a_values() {
        for n in 1..=4 {
            let psi = crate::states::make_plus_product(n).unwrap().density();
            assert!((coeff_a(&psi, &psi).unwrap() - 3f64.powi(n as i32)).abs() < 1e-9);
        }
        let bell = make_bell_dimer(2).unwrap().density();
        assert!((coeff_a(&bell, &bell).unwrap() - 7.0).abs() < 1e-9);
        let g3 = make_ghz(3).unwrap().density();
        assert!((coeff_a(&g3, &g3).unwrap() - 18.0).abs() < 1e-9);
    }

    #[test]
    fn a_purity_form_agrees() {
        for n in 1..=4 {
            for psi in [make_ghz(n).unwrap(), make_w(n).unwrap(), make_haar_random_pure(n, n as u64).unwrap()] {
                let d = psi.density();
                assert!((coeff_a(&d, &d).unwrap() - coeff_a_purity_form(&psi).unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn a_is_strictly_below_product_value_for_entangled_states() {
        for n in 2..=5 {
            for psi in [make_ghz(n).unwrap(), make_w(n).unwrap(), make_bell_dimer(n).unwrap()] {
                let d = psi.density();
                assert!(coeff_a(&d, &d).unwrap() < 3f64.powi(n as i32) - 1e-6);
            }
        }
    }

    #[test]
    fn c_values() {
        let z = crate::states::letter_state('0').unwrap().density();
        // Oracle: dense 8x8 contractions, 3/2 per ordered term.
        let ops = operators();
        let zzz = z.tensor(&z).unwrap().tensor(&z).unwrap();
        let dense = ops.raab.matrix.trace_product(zzz.matrix()).unwrap().re + ops.rabb.matrix.trace_product(zzz.matrix()).unwrap().re;
        assert!((dense - 3.0).abs() < 1e-12);
        assert!((coeff_c(&z, &z).unwrap() - 3.0).abs() < 1e-12);
        // Maximally mixed pair: each ordered term is tr[R]/8 = 1/4 by the dense oracle.
        let mixed = DensityOperator::maximally_mixed(1).unwrap();
        let mmm = mixed.tensor(&mixed).unwrap().tensor(&mixed).unwrap();
        let dense = ops.raab.matrix.trace_product(mmm.matrix()).unwrap().re + ops.rabb.matrix.trace_product(mmm.matrix()).unwrap().re;
        assert!((dense - 0.5).abs() < 1e-12);
        assert!((coeff_c(&mixed, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn c_matches_dense_oracle_and_bound() {
        let ops = operators();
        for n in 1..=3usize {
            for seed in 0..6u64 {
                let (r, s) = (random_state(n, seed + 10 * n as u64), random_state(n, seed + 100));
                let (t1, t2) = coeff_c_terms(&r, &s).unwrap();
                if n <= 2 || seed < 2 {
                    let d1 = dense_replica_value(&ops.raab.matrix, 3, &[&r, &r, &s]);
                    let d2 = dense_replica_value(&ops.rabb.matrix, 3, &[&r, &s, &s]);
                    assert!((t1 - d1).abs() < 1e-9 && (t2 - d2).abs() < 1e-9, "n={n} seed={seed}");
                }
                assert!(t1 + t2 <= 2.0 * 1.75f64.powi(n as i32) + 1e-9);
            }
        }
    }

    #[test]
    fn b_matches_dense_oracle() {
        let ops = operators();
        for n in 1..=2usize {
            for seed in 0..4u64 {
                let (r, s) = (random_state(n, seed), random_state(n, seed + 7));
                for (ens, op) in [(Ensemble::Clifford, &ops.r4_clifford), (Ensemble::Haar, &ops.r4_haar)] {
                    let want = dense_replica_value(&op.matrix, 4, &[&r, &s, &r, &s]);
                    assert!((coeff_b(&r, &s, ens).unwrap() - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn b_landmark_values() {
        let bell = make_bell_dimer(2).unwrap().density();
        assert!((coeff_b(&bell, &bell, Ensemble::Haar).unwrap() - 29.0 / 20.0).abs() < 1e-9);
        let prod = crate::states::make_product("0+").unwrap().density();
        assert!((coeff_b(&prod, &prod, Ensemble::Haar).unwrap() - 36.0 / 25.0).abs() < 1e-9);
        for k in 0..=20 {
            let lambda = k as f64 / 20.0;
            let t = lambda * (1.0 - lambda);
            let psi = make_schmidt_pair(lambda).unwrap().density();
            let a = coeff_a(&psi, &psi).unwrap();
            let b = coeff_b(&psi, &psi, Ensemble::Haar).unwrap();
            assert!((b - schmidt_b_haar(t)).abs() < 1e-9 && (a - schmidt_a(t)).abs() < 1e-9);
            assert!((a * b - schmidt_product(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn single_qubit_forms_match_generic() {
        for seed in 0..20u64 {
            let (r, s) = (random_state(1, seed), random_state(1, seed + 50));
            let bloch = |d: &DensityOperator| {
                let c = pauli_coefficients(d).unwrap();
                [c[1], c[2], c[3]]
            };
            assert!((coeff_a(&r, &s).unwrap() - single_qubit_a(bloch(&r), bloch(&s))).abs() < 1e-12);
            assert!((coeff_b(&r, &s, Ensemble::Haar).unwrap() - single_qubit_b_haar(bloch(&r), bloch(&s))).abs() < 1e-12);
        }
    }

    #[test]
    fn universal_bound_on_random_pairs() {
        for n in 1..=3usize {
            for seed in 0..200u64 {
                let (r, s) = (random_state(n, seed), random_state(n, seed + 1000));
                let cap = 1.5f64.powi(n as i32) + 1e-9;
                for ens in Ensemble::ALL {
                    let b = coeff_b(&r, &s, ens).unwrap();
                    assert!(b <= cap && b >= -1e-12, "n={n} seed={seed} {ens}: {b}");
                }
                let a = coeff_a(&r, &s).unwrap();
                assert!(a <= 3f64.powi(n as i32) + 1e-9);
            }
        }
    }

    #[test]
    fn identical_pure_pair_dominates() {
        for n in 1..=2usize {
            for seed in 0..40u64 {
                let (r, s) = (random_state(n, seed), random_state(n, seed + 500));
                for ens in Ensemble::ALL {
                    let b = coeff_b(&r, &s, ens).unwrap();
                    let m = coeff_b(&r, &r, ens).unwrap().max(coeff_b(&s, &s, ens).unwrap());
                    assert!(b <= m + 1e-9, "n={n} seed={seed} {ens}");
                }
            }
        }
    }

    #[test]
    fn one_qubit_pure_extremes() {
        let mut best_haar: f64 = 0.0;
        for seed in 0..200u64 {
            let d = make_haar_random_pure(1, seed).unwrap().density();
            let bh = coeff_b(&d, &d, Ensemble::Haar).unwrap();
            assert!((bh - 1.2).abs() < 1e-9);
            best_haar = best_haar.max(bh);
            assert!(coeff_b(&d, &d, Ensemble::Clifford).unwrap() < 1.5 - 1e-6);
        }
        assert!((best_haar - 1.2).abs() < 1e-9);
        for c in "01+-rl".chars() {
            let d = crate::states::letter_state(c).unwrap().density();
            assert!((coeff_b(&d, &d, Ensemble::Clifford).unwrap() - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn stabilizer_paths_agree_with_generic() {
        for n in 1..=3 {
            for fam in [
                StateFamily::Ghz { n },
                StateFamily::ChainGraph { n, m: n - 1 },
                StateFamily::BellDimer { n },
                StateFamily::ProductPlus { n },
            ] {
                let s = StabilizerSupport::from_generators(fam.stabilizer_generators().unwrap()).unwrap();
                let d = fam.build().unwrap().to_density();
                assert!(s.density().unwrap().matrix().max_abs_diff(d.matrix()) < 1e-12, "{fam}");
                for ens in Ensemble::ALL {
                    let g = coeff_b(&d, &d, ens).unwrap();
                    assert!((coeff_b_stabilizer(&s, ens).unwrap() - g).abs() < 1e-10, "{fam} {ens}");
                }
            }
        }
        for s in enumerate_stabilizer_states(2).unwrap().iter().step_by(7) {
            let d = s.density().unwrap();
            for ens in Ensemble::ALL {
                assert!((coeff_b_stabilizer(s, ens).unwrap() - coeff_b(&d, &d, ens).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn closed_forms_agree_with_generic() {
        for n in 2..=3 {
            for (fam, psi) in [
                (ClosedFormFamily::Ghz, make_ghz(n).unwrap()),
                (ClosedFormFamily::W, make_w(n).unwrap()),
                (ClosedFormFamily::BellDimer, make_bell_dimer(n).unwrap()),
            ] {
                let d = psi.density();
                assert!((closed_form_b(fam, n).unwrap() - coeff_b(&d, &d, Ensemble::Haar).unwrap()).abs() < 1e-9);
                assert!((closed_form_a(fam, n).unwrap() - coeff_a(&d, &d).unwrap()).abs() < 1e-9);
            }
        }
        let g = make_ghz(3).unwrap().density();
        assert!((ghz_b_replica_sum(3, Ensemble::Clifford).unwrap() - coeff_b(&g, &g, Ensemble::Clifford).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn product_path_factorizes() {
        let opts = CoefficientOptions { mc_samples: None, ..Default::default() };
        for fam in ["belldimer:3", "product:0+r", "depol:plusprod:3:0.3", "depol:belldimer:3:0.2"] {
            let f: StateFamily = fam.parse().unwrap();
            let c = family_coefficients(&f, &f, &opts).unwrap();
            let g = state_coefficients(&f.build().unwrap(), &f.build().unwrap(), &opts).unwrap();
            for (x, y) in [(&c.a, &g.a), (&c.c, &g.c), (&c.b_cl, &g.b_cl), (&c.b_haar, &g.b_haar), (&c.overlap, &g.overlap)] {
                assert!((x.value - y.value).abs() < 1e-9, "{fam}: {x:?} vs {y:?}");
            }
        }
        let f: StateFamily = "depol:plusprod:3:0.3".parse().unwrap();
        assert_eq!(family_coefficients(&f, &f, &opts).unwrap().b_cl.method, Method::Product);
    }

    #[test]
    fn path_priority_and_mc_fallback() {
        let opts = CoefficientOptions { mc_samples: Some(4000), mc_seed: 9, ..Default::default() };
        let g = StateFamily::Ghz { n: 6 };
        let c = family_coefficients(&g, &g, &opts).unwrap();
        assert_eq!(c.a.method, Method::ClosedForm);
        assert_eq!(c.b_haar.method, Method::ClosedForm);
        assert_eq!(c.b_cl.method, Method::ClosedForm);
        assert_eq!(c.c.method, Method::Generic);
        let chain = StateFamily::ChainGraph { n: 7, m: 4 };
        let c = family_coefficients(&chain, &chain, &opts).unwrap();
        assert_eq!(c.b_cl.method, Method::Stabilizer);
        assert_eq!(c.b_haar.method, Method::Stabilizer);
        assert!(matches!(c.c.method, Method::MonteCarlo { seed: 9, samples: 4000 }));
        let w = StateFamily::W { n: 5 };
        let c = family_coefficients(&w, &w, &opts).unwrap();
        let v = c.b_cl;
        assert!(matches!(v.method, Method::MonteCarlo { .. }) && v.stderr.unwrap() > 0.0);
        let strict = CoefficientOptions { mc_samples: None, ..Default::default() };
        assert!(family_coefficients(&w, &w, &strict).is_err());
        let ext = CoefficientOptions { extended_generic: true, mc_samples: None, ..Default::default() };
        assert_eq!(family_coefficients(&w, &w, &ext).unwrap().b_cl.method, Method::Generic);
    }

    #[test]
    fn mc_fallback_is_consistent_with_exact() {
        let h = StateFamily::HaarRandomPure { n: 4, seed: 3 };
        let ext = CoefficientOptions { extended_generic: true, mc_samples: None, ..Default::default() };
        let exact = family_coefficients(&h, &h, &ext).unwrap();
        let opts = CoefficientOptions { mc_samples: Some(20_000), mc_seed: 4, ..Default::default() };
        let s = h.build().unwrap();
        let mc = mc_coefficients(&s, &s, Ensemble::Haar, 20_000, opts.mc_seed).unwrap();
        assert!((mc.b.mean - exact.b_haar.value).abs() < 5.0 * mc.b.stderr);
        assert!((mc.a.mean - exact.a.value).abs() < 5.0 * mc.a.stderr);
        assert!((mc.c.mean - exact.c.value).abs() < 5.0 * mc.c.stderr);
    }

    #[test]
    fn shadow_coefficients_single_qubit() {
        let z = crate::states::letter_state('0').unwrap().density();
        let s = shadow_coefficients(&z, &z).unwrap();
        assert!((s.a - 7.5).abs() < 1e-12);
        assert!((s.b_rho_sigma - 1.5).abs() < 1e-12 && (s.b_sigma_rho - 1.5).abs() < 1e-12);
        assert!((s.variance(64) - 69.5 / 4096.0).abs() < 1e-15);
        let ops = operators();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=2 {
            let (r, q) = (random_state(n, rng.random_range(0..100)), random_state(n, rng.random_range(100..200)));
            let s = shadow_coefficients(&r, &q).unwrap();
            assert!((s.a - dense_replica_value(&ops.omega2.matrix, 2, &[&r, &q])).abs() < 1e-9);
            assert!((s.b_rho_sigma - dense_replica_value(&ops.omega3.matrix, 3, &[&r, &q, &q])).abs() < 1e-9);
            assert!((s.b_sigma_rho - dense_replica_value(&ops.omega3.matrix, 3, &[&q, &r, &r])).abs() < 1e-9);
        }
    }

    #[test]
    fn certificates() {
        for n in 1..=12 {
            let p = family_certificate(ClosedFormFamily::Product, n).unwrap();
            assert!(p.pass && p.margin.abs() <= 1e-9 * p.bound);
            for fam in [ClosedFormFamily::Ghz, ClosedFormFamily::W, ClosedFormFamily::BellDimer] {
                let c = family_certificate(fam, n).unwrap();
                assert!(c.pass, "{fam:?} n={n}");
                if n >= 2 {
                    assert!(c.margin > 0.0);
                }
            }
        }
        let g3 = family_certificate(ClosedFormFamily::Ghz, 3).unwrap();
        assert!((g3.product - 18.0 * 1.338).abs() < 1e-9 && (g3.bound - 46.656).abs() < 1e-9);
        for n in 2..=12usize {
            let x = n as f64;
            let ratio = (5.0 * x + 4.0) * (1561.0 * x.powi(3) + 4722.0 * x * x + 11483.0 * x - 12582.0) / (46656.0 * x.powi(4));
            let c = family_certificate(ClosedFormFamily::W, n).unwrap();
            assert!((c.ratio - ratio).abs() < 1e-12 && ratio < 1.0);
        }
    }

    #[test]
    fn variance_terms() {
        let v = VarianceTerms::new(1.0, 3.0, 3.0, 1.5, 2);
        assert!((v.total() - (-1.0 + 0.75 + 0.75 + 0.25 * 1.5)).abs() < 1e-15);
        let v1 = VarianceTerms::new(0.5, 7.0, 2.0, 1.4, 1);
        assert_eq!(v1.v3, 0.0);
        assert_eq!(v1.v4, 0.0);
    }
}
