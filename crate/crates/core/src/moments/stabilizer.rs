//! Stabilizer supports and the Pauli-support fast paths for `B_{n,E}(ψ, ψ)`.

use super::transfer::pauli_transfer_tensor;
use super::operators::operators;
use crate::error::{invalid, Error, Result};
use crate::qcore::{pauli_reconstruct, DensityOperator, PauliLetter, PauliString};
use crate::Ensemble;
use std::collections::HashMap;

/// Largest `n` for the Clifford double sum over `S × S`.
pub const CLIFFORD_SUPPORT_MAX_QUBITS: usize = 12;
/// Largest `n` for the Haar triple sum over `S × S × S`.
pub const HAAR_SUPPORT_MAX_QUBITS: usize = 8;

/// Phase-free support of a stabilizer state with signs `ε(P) = tr[ψ P]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerSupport {
    n: usize,
    generators: Vec<PauliString>,
    /// `(string index, ε)` for all `2^n` elements, sorted by index.
    elements: Vec<(usize, i8)>,
}

impl StabilizerSupport {
    /// Validates commutation and independence, then expands the group.
    pub fn from_generators(generators: Vec<PauliString>) -> Result<Self> {
        let n = generators.first().map(|g| g.n()).ok_or_else(|| invalid("no generators"))?;
        if generators.len() != n || generators.iter().any(|g| g.n() != n) {
            return Err(invalid(format!("need exactly {n} generators on {n} qubits")));
        }
        if n > 62 {
            return Err(Error::SizeLimit { requested: n, cap: 62 });
        }
        for (i, g) in generators.iter().enumerate() {
            for h in &generators[i + 1..] {
                if !g.commutes_with(h) {
                    return Err(invalid(format!("{g} and {h} anticommute")));
                }
            }
        }
        let mut elements = Vec::with_capacity(1 << n);
        let mut seen = HashMap::with_capacity(1 << n);
        for mask in 0u64..(1u64 << n) {
            let mut p = PauliString::identity(n);
            for (k, g) in generators.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    p = p.mul_commuting(g)?;
                }
            }
            if seen.insert(p.index(), p.sign()).is_some() {
                return Err(invalid("generators are not independent"));
            }
            elements.push((p.index(), p.sign()));
        }
        if seen.get(&0) != Some(&1) {
            return Err(invalid("group contains -I"));
        }
        elements.sort_unstable();
        Ok(Self { n, generators, elements })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn elements(&self) -> &[(usize, i8)] {
        &self.elements
    }

    /// Dense Pauli coefficient vector (`ε(P)` on the support, zero elsewhere).
    pub fn coefficients(&self) -> Vec<f64> {
        let mut c = vec![0.0; 1 << (2 * self.n)];
        for &(idx, s) in &self.elements {
            c[idx] = s as f64;
        }
        c
    }

    pub fn density(&self) -> Result<DensityOperator> {
        crate::qcore::Limits::default().check(self.n)?;
        DensityOperator::new(pauli_reconstruct(&self.coefficients(), self.n)?)
    }

    pub fn is_product(&self) -> bool {
        // A product stabilizer support is generated by weight-one strings; equivalently
        // every element's letters lie in a fixed per-qubit letter.
        let mut letter = vec![0usize; self.n];
        for &(idx, _) in &self.elements {
            for (l, slot) in letter.iter_mut().enumerate() {
                let d = (idx >> (2 * (self.n - 1 - l))) & 3;
                if d != 0 {
                    if *slot != 0 && *slot != d {
                        return false;
                    }
                    *slot = d;
                }
            }
        }
        true
    }
}

/// One-qubit Clifford kernel on letters in the base-4 encoding I=0, X=1, Y=2, Z=3.
#[inline]
pub fn kappa(p: usize, q: usize) -> f64 {
    match (p, q) {
        (0, _) | (_, 0) => 1.0,
        (a, b) if a == b => 3.0,
        _ => 0.0,
    }
}

fn letters_of(idx: usize, n: usize) -> impl Iterator<Item = usize> {
    (0..n).map(move |l| (idx >> (2 * (n - 1 - l))) & 3)
}

/// `F_n(S) = 4^{-n} Σ_{P,Q∈S} ∏_j κ(P_j, Q_j)`.
pub fn clifford_support_sum(s: &StabilizerSupport) -> Result<f64> {
    if s.n > CLIFFORD_SUPPORT_MAX_QUBITS {
        return Err(Error::SizeLimit { requested: s.n, cap: CLIFFORD_SUPPORT_MAX_QUBITS });
    }
    let n = s.n;
    let letters: Vec<Vec<usize>> = s.elements.iter().map(|&(i, _)| letters_of(i, n).collect()).collect();
    let mut total = 0.0;
    for p in &letters {
        for q in &letters {
            let mut prod = 1.0;
            for (a, b) in p.iter().zip(q) {
                prod *= kappa(*a, *b);
                if prod == 0.0 {
                    break;
                }
            }
            total += prod;
        }
    }
    Ok(total / 4f64.powi(n as i32))
}

/// Letters as F_2^2 vectors, so the product string is `a xor b` up to phase.
#[inline]
fn letter_xor(a: usize, b: usize) -> usize {
    // Base-4 codes I=0, X=1, Y=2, Z=3 map to (x,z) = 00, 10, 11, 01.
    const TO_XZ: [usize; 4] = [0b00, 0b10, 0b11, 0b01];
    const FROM_XZ: [usize; 4] = [0, 3, 1, 2];
    FROM_XZ[TO_XZ[a] ^ TO_XZ[b]]
}

/// `Σ_{P,Q,P'∈S} ε(P)ε(Q)ε(P')ε(R) ∏_l t[P_l, Q_l, P'_l, R_l]` with `R = P⊕Q⊕P'`
/// (phase-free); the one-qubit tensor vanishes unless the four letters multiply to I.
pub fn haar_support_sum(s: &StabilizerSupport) -> Result<f64> {
    if s.n > HAAR_SUPPORT_MAX_QUBITS {
        return Err(Error::SizeLimit { requested: s.n, cap: HAAR_SUPPORT_MAX_QUBITS });
    }
    let t = pauli_transfer_tensor(&operators().r4_haar.matrix, 4)?;
    support_triple_sum(s, &t)
}

fn support_triple_sum(s: &StabilizerSupport, t: &[f64]) -> Result<f64> {
    let n = s.n;
    let sign: HashMap<usize, i8> = s.elements.iter().copied().collect();
    let letters: Vec<Vec<usize>> = s.elements.iter().map(|&(i, _)| letters_of(i, n).collect()).collect();
    let signs: Vec<f64> = s.elements.iter().map(|&(_, e)| e as f64).collect();
    let mut total = 0.0;
    for (ip, p) in letters.iter().enumerate() {
        for (iq, q) in letters.iter().enumerate() {
            for (ir, r) in letters.iter().enumerate() {
                let mut prod = signs[ip] * signs[iq] * signs[ir];
                let mut idx4 = 0usize;
                for l in 0..n {
                    let d = letter_xor(letter_xor(p[l], q[l]), r[l]);
                    idx4 = idx4 * 4 + d;
                    prod *= t[p[l] * 64 + q[l] * 16 + r[l] * 4 + d];
                    if prod == 0.0 {
                        break;
                    }
                }
                if prod != 0.0 {
                    let e4 = *sign.get(&idx4).ok_or_else(|| Error::Numerical("support not closed".into()))?;
                    total += prod * e4 as f64;
                }
            }
        }
    }
    Ok(total)
}

/// `B_{n,E}(ψ, ψ)` for a stabilizer state from its support.
pub fn coeff_b_stabilizer(s: &StabilizerSupport, ensemble: Ensemble) -> Result<f64> {
    match ensemble {
        Ensemble::Clifford => clifford_support_sum(s),
        Ensemble::Haar => haar_support_sum(s),
    }
}

/// All pure stabilizer states on `n ≤ 3` qubits, each once, as supports.
pub fn enumerate_stabilizer_states(n: usize) -> Result<Vec<StabilizerSupport>> {
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("stabilizer enumeration supports 1 <= n <= 3, got {n}")));
    }
    let strings: Vec<PauliString> = (1..1usize << (2 * n)).map(|i| PauliString::from_index(n, i)).collect();
    let mut found: HashMap<Vec<(usize, i8)>, StabilizerSupport> = HashMap::new();
    let mut chosen = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        strings: &[PauliString],
        chosen: &mut Vec<PauliString>,
        found: &mut HashMap<Vec<(usize, i8)>, StabilizerSupport>,
    ) {
        if chosen.len() == n {
            for signs in 0u32..(1 << n) {
                let gens: Vec<PauliString> = chosen
                    .iter()
                    .enumerate()
                    .map(|(k, g)| PauliString::new(g.letters().to_vec(), if signs >> k & 1 == 1 { -1 } else { 1 }).unwrap())
                    .collect();
                if let Ok(s) = StabilizerSupport::from_generators(gens) {
                    found.entry(s.elements.clone()).or_insert(s);
                }
            }
            return;
        }
        for i in start..strings.len() {
            if chosen.iter().all(|g| g.commutes_with(&strings[i])) {
                chosen.push(strings[i].clone());
                rec(i + 1, n, strings, chosen, found);
                chosen.pop();
            }
        }
    }
    rec(0, n, &strings, &mut chosen, &mut found);
    let mut out: Vec<StabilizerSupport> = found.into_values().collect();
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    Ok(out)
}

/// Product stabilizer support from per-qubit letters and signs.
pub fn product_support(letters: &[(PauliLetter, i8)]) -> Result<StabilizerSupport> {
    let n = letters.len();
    let gens = letters
        .iter()
        .enumerate()
        .map(|(q, &(l, s))| {
            let mut v = vec![PauliLetter::I; n];
            v[q] = l;
            PauliString::new(v, s)
        })
        .collect::<Result<Vec<_>>>()?;
    StabilizerSupport::from_generators(gens)
}
