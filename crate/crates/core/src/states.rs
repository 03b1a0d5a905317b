//! Benchmark state families and local deformations.

use crate::error::{invalid, Error, Result};
use crate::qcore::{
    ComplexMatrix, DensityOperator, Limits, PauliLetter, PauliString, PureState, QuantumState,
    C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

/// Single-qubit letters accepted by [`StateFamily::ProductCustom`]:
/// `0 1` (Z basis), `+ -` (X basis), `r l` (Y basis).
pub const PRODUCT_LETTERS: &str = "01+-rl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateFamily {
    ProductPlus { n: usize },
    ProductCustom { letters: String },
    Ghz { n: usize },
    W { n: usize },
    BellDimer { n: usize },
    HaarRandomPure { n: usize, seed: u64 },
    ChainGraph { n: usize, m: usize },
    Depolarized { base: Box<StateFamily>, p: f64 },
    SchmidtPair { lambda: f64 },
}

impl StateFamily {
    pub fn n(&self) -> usize {
        match self {
            StateFamily::ProductPlus { n }
            | StateFamily::Ghz { n }
            | StateFamily::W { n }
            | StateFamily::BellDimer { n }
            | StateFamily::HaarRandomPure { n, .. }
            | StateFamily::ChainGraph { n, .. } => *n,
            StateFamily::ProductCustom { letters } => letters.chars().count(),
            StateFamily::Depolarized { base, .. } => base.n(),
            StateFamily::SchmidtPair { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n() == 0 {
            return Err(invalid("families need at least one qubit"));
        }
        Limits::default().check(self.n())?;
        match self {
            StateFamily::ProductCustom { letters } => {
                if let Some(c) = letters.chars().find(|c| !PRODUCT_LETTERS.contains(*c)) {
                    return Err(invalid(format!("product letter {c:?} not in {PRODUCT_LETTERS}")));
                }
            }
            StateFamily::ChainGraph { n, m } if *m >= *n => {
                return Err(invalid(format!("chain graph needs 0 <= m <= n-1, got m={m}, n={n}")));
            }
            StateFamily::Depolarized { base, p } => {
                check_probability(*p)?;
                base.validate()?;
            }
            StateFamily::SchmidtPair { lambda } => check_probability(*lambda)?,
            _ => {}
        }
        Ok(())
    }

    pub fn is_pure(&self) -> bool {
        match self {
            StateFamily::Depolarized { base, p } => *p == 0.0 && base.is_pure(),
            _ => true,
        }
    }

    pub fn build(&self) -> Result<QuantumState> {
        self.validate()?;
        Ok(match self {
            StateFamily::ProductPlus { n } => make_plus_product(*n)?.into(),
            StateFamily::ProductCustom { letters } => make_product(letters)?.into(),
            StateFamily::Ghz { n } => make_ghz(*n)?.into(),
            StateFamily::W { n } => make_w(*n)?.into(),
            StateFamily::BellDimer { n } => make_bell_dimer(*n)?.into(),
            StateFamily::HaarRandomPure { n, seed } => make_haar_random_pure(*n, *seed)?.into(),
            StateFamily::ChainGraph { n, m } => make_chain_graph(*n, *m)?.into(),
            StateFamily::SchmidtPair { lambda } => make_schmidt_pair(*lambda)?.into(),
            StateFamily::Depolarized { base, p } => {
                depolarize_local(&base.build()?.to_density(), *p)?.into()
            }
        })
    }

    /// Single-qubit (or Bell-pair) pure factors, when the state is a tensor product of them.
    pub fn product_factors(&self) -> Option<Vec<PureState>> {
        match self {
            StateFamily::ProductPlus { n } => Some(vec![letter_state('+').ok()?; *n]),
            StateFamily::ProductCustom { letters } => {
                letters.chars().map(|c| letter_state(c).ok()).collect()
            }
            StateFamily::ChainGraph { n, m: 0 } => Some(vec![letter_state('+').ok()?; *n]),
            StateFamily::BellDimer { n } => {
                let mut f = vec![bell(); n / 2];
                if n % 2 == 1 {
                    f.push(letter_state('0').ok()?);
                }
                Some(f)
            }
            StateFamily::Ghz { n: 1 } => Some(vec![letter_state('+').ok()?]),
            StateFamily::W { n: 1 } => Some(vec![letter_state('1').ok()?]),
            _ => None,
        }
    }

    /// `n` independent commuting signed generators, for stabilizer families.
    pub fn stabilizer_generators(&self) -> Option<Vec<PauliString>> {
        let n = self.n();
        let single = |q: usize, l: PauliLetter, sign: i8| {
            let mut letters = vec![PauliLetter::I; n];
            letters[q] = l;
            PauliString::new(letters, sign).ok()
        };
        match self {
            StateFamily::ProductPlus { .. } => (0..n).map(|q| single(q, PauliLetter::X, 1)).collect(),
            StateFamily::ProductCustom { letters } => letters
                .chars()
                .enumerate()
                .map(|(q, c)| {
                    let (l, s) = letter_stabilizer(c)?;
                    single(q, l, s)
                })
                .collect(),
            StateFamily::Ghz { n } => {
                let mut gens = vec![PauliString::new(vec![PauliLetter::X; *n], 1).ok()?];
                for q in 0..n - 1 {
                    let mut letters = vec![PauliLetter::I; *n];
                    letters[q] = PauliLetter::Z;
                    letters[q + 1] = PauliLetter::Z;
                    gens.push(PauliString::new(letters, 1).ok()?);
                }
                Some(gens)
            }
            StateFamily::BellDimer { n } => {
                let mut gens = Vec::with_capacity(*n);
                for pair in 0..n / 2 {
                    for l in [PauliLetter::X, PauliLetter::Z] {
                        let mut letters = vec![PauliLetter::I; *n];
                        letters[2 * pair] = l;
                        letters[2 * pair + 1] = l;
                        gens.push(PauliString::new(letters, 1).ok()?);
                    }
                }
                if n % 2 == 1 {
                    gens.push(single(n - 1, PauliLetter::Z, 1)?);
                }
                Some(gens)
            }
            StateFamily::ChainGraph { n, m } => (0..*n)
                .map(|q| {
                    let mut letters = vec![PauliLetter::I; *n];
                    letters[q] = PauliLetter::X;
                    if q >= 1 && q <= *m {
                        letters[q - 1] = PauliLetter::Z;
                    }
                    if q < *m {
                        letters[q + 1] = PauliLetter::Z;
                    }
                    PauliString::new(letters, 1).ok()
                })
                .collect(),
            StateFamily::SchmidtPair { lambda } if *lambda == 0.0 || *lambda == 1.0 => {
                let s = if *lambda == 1.0 { 1 } else { -1 };
                Some(vec![single(0, PauliLetter::Z, s)?, single(1, PauliLetter::Z, s)?])
            }
            StateFamily::SchmidtPair { lambda } if *lambda == 0.5 => {
                StateFamily::BellDimer { n: 2 }.stabilizer_generators()
            }
            StateFamily::Depolarized { base, p } if *p == 0.0 => base.stabilizer_generators(),
            _ => None,
        }
    }

    /// Same family at a different size, where the family has a size parameter.
    pub fn with_n(&self, n: usize) -> Result<StateFamily> {
        let f = match self {
            StateFamily::ProductPlus { .. } => StateFamily::ProductPlus { n },
            StateFamily::Ghz { .. } => StateFamily::Ghz { n },
            StateFamily::W { .. } => StateFamily::W { n },
            StateFamily::BellDimer { .. } => StateFamily::BellDimer { n },
            StateFamily::HaarRandomPure { seed, .. } => StateFamily::HaarRandomPure { n, seed: *seed },
            StateFamily::ChainGraph { m, .. } => StateFamily::ChainGraph { n, m: (*m).min(n.saturating_sub(1)) },
            StateFamily::Depolarized { base, p } => {
                StateFamily::Depolarized { base: Box::new(base.with_n(n)?), p: *p }
            }
            StateFamily::ProductCustom { .. } | StateFamily::SchmidtPair { .. } => {
                if n == self.n() {
                    self.clone()
                } else {
                    return Err(Error::Unsupported(format!("{self} has a fixed size")));
                }
            }
        };
        f.validate()?;
        Ok(f)
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFamily::ProductPlus { n } => write!(f, "plusprod:{n}"),
            StateFamily::ProductCustom { letters } => write!(f, "product:{letters}"),
            StateFamily::Ghz { n } => write!(f, "ghz:{n}"),
            StateFamily::W { n } => write!(f, "w:{n}"),
            StateFamily::BellDimer { n } => write!(f, "belldimer:{n}"),
            StateFamily::HaarRandomPure { n, seed } => write!(f, "haar:{n}:{seed}"),
            StateFamily::ChainGraph { n, m } => write!(f, "chain:{n}:{m}"),
            StateFamily::Depolarized { base, p } => write!(f, "depol:{base}:{p}"),
            StateFamily::SchmidtPair { lambda } => write!(f, "schmidt:{lambda}"),
        }
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    /// Parses `plusprod:4`, `product:0+r`, `ghz:4`, `w:5`, `belldimer:6`, `haar:3:7`,
    /// `chain:5:3`, `depol:<family>:<p>`, `schmidt:0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("{s:?}: expected kind:args")))?;
        let int = |v: &str| v.parse::<usize>().map_err(|_| Error::Parse(format!("{s:?}: bad integer {v:?}")));
        let float = |v: &str| v.parse::<f64>().map_err(|_| Error::Parse(format!("{s:?}: bad number {v:?}")));
        let parts: Vec<&str> = rest.split(':').collect();
        let fam = match (head.to_ascii_lowercase().as_str(), parts.as_slice()) {
            ("plusprod" | "plus", [n]) => StateFamily::ProductPlus { n: int(n)? },
            ("product", [letters]) => StateFamily::ProductCustom { letters: letters.to_string() },
            ("ghz", [n]) => StateFamily::Ghz { n: int(n)? },
            ("w", [n]) => StateFamily::W { n: int(n)? },
            ("belldimer" | "bell", [n]) => StateFamily::BellDimer { n: int(n)? },
            ("haar", [n]) => StateFamily::HaarRandomPure { n: int(n)?, seed: 0 },
            ("haar", [n, seed]) => StateFamily::HaarRandomPure {
                n: int(n)?,
                seed: seed.parse().map_err(|_| Error::Parse(format!("{s:?}: bad seed")))?,
            },
            ("chain", [n, m]) => StateFamily::ChainGraph { n: int(n)?, m: int(m)? },
            ("depol", _) => {
                let (base, p) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| Error::Parse(format!("{s:?}: expected depol:<family>:<p>")))?;
                StateFamily::Depolarized { base: Box::new(base.parse()?), p: float(p)? }
            }
            ("schmidt", [lambda]) => StateFamily::SchmidtPair { lambda: float(lambda)? },
            _ => return Err(Error::Parse(format!("unknown state family {s:?}"))),
        };
        fam.validate()?;
        Ok(fam)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("parameter {p} outside [0, 1]")));
    }
    Ok(())
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn bell() -> PureState {
    PureState::new(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]).expect("normalized")
}

/// One of the six single-qubit Pauli eigenstates, by letter in [`PRODUCT_LETTERS`].
pub fn letter_state(letter: char) -> Result<PureState> {
    let h = FRAC_1_SQRT_2;
    let amps = match letter {
        '0' => [c(1.0), c(0.0)],
        '1' => [c(0.0), c(1.0)],
        '+' => [c(h), c(h)],
        '-' => [c(h), c(-h)],
        'r' => [c(h), C64::new(0.0, h)],
        'l' => [c(h), C64::new(0.0, -h)],
        other => return Err(invalid(format!("product letter {other:?} not in {PRODUCT_LETTERS}"))),
    };
    PureState::new(amps.to_vec())
}

fn letter_stabilizer(letter: char) -> Option<(PauliLetter, i8)> {
    Some(match letter {
        '0' => (PauliLetter::Z, 1),
        '1' => (PauliLetter::Z, -1),
        '+' => (PauliLetter::X, 1),
        '-' => (PauliLetter::X, -1),
        'r' => (PauliLetter::Y, 1),
        'l' => (PauliLetter::Y, -1),
        _ => return None,
    })
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("need at least one qubit"));
    }
    Limits::default().check(n)
}

pub fn make_plus_product(n: usize) -> Result<PureState> {
    check_n(n)?;
    PureState::product(&vec![letter_state('+')?; n])
}

pub fn make_product(letters: &str) -> Result<PureState> {
    let factors = letters.chars().map(letter_state).collect::<Result<Vec<_>>>()?;
    check_n(factors.len())?;
    PureState::product(&factors)
}

pub fn make_ghz(n: usize) -> Result<PureState> {
    check_n(n)?;
    let mut amps = vec![c(0.0); 1 << n];
    amps[0] = c(FRAC_1_SQRT_2);
    amps[(1 << n) - 1] = c(FRAC_1_SQRT_2);
    PureState::new(amps)
}

pub fn make_w(n: usize) -> Result<PureState> {
    check_n(n)?;
    let a = 1.0 / (n as f64).sqrt();
    let mut amps = vec![c(0.0); 1 << n];
    for q in 0..n {
        amps[1 << q] = c(a);
    }
    PureState::normalized(amps)
}

/// `⌊n/2⌋` Bell pairs on qubits (1,2), (3,4), ..., plus `|0>` on the last qubit when `n` is odd.
pub fn make_bell_dimer(n: usize) -> Result<PureState> {
    check_n(n)?;
    let mut factors = vec![bell(); n / 2];
    if n % 2 == 1 {
        factors.push(letter_state('0')?);
    }
    PureState::product(&factors)
}

/// `∏_{j=1}^{m} CZ_{j,j+1} |+>^n`.
pub fn make_chain_graph(n: usize, m: usize) -> Result<PureState> {
    check_n(n)?;
    if m >= n {
        return Err(invalid(format!("chain graph needs 0 <= m <= n-1, got m={m}, n={n}")));
    }
    let a = 1.0 / ((1u64 << n) as f64).sqrt();
    let amps = (0..1usize << n)
        .map(|idx| {
            let bit = |q: usize| (idx >> (n - 1 - q)) & 1;
            let parity: usize = (0..m).map(|j| bit(j) & bit(j + 1)).sum();
            c(if parity % 2 == 0 { a } else { -a })
        })
        .collect();
    PureState::normalized(amps)
}

/// `√λ|00> + √(1-λ)|11>`.
pub fn make_schmidt_pair(lambda: f64) -> Result<PureState> {
    check_probability(lambda)?;
    PureState::normalized(vec![c(lambda.sqrt()), c(0.0), c(0.0), c((1.0 - lambda).sqrt())])
}

/// Normalized vector of independent standard complex Gaussians from a ChaCha8 stream.
pub fn make_haar_random_pure(n: usize, seed: u64) -> Result<PureState> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1usize << n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    PureState::normalized(amps)
}

/// `D_p^{⊗n}` with `D_p(τ) = (1-p)τ + p tr[τ] I/2`, applied qubit by qubit on matrix elements.
pub fn depolarize_local(state: &DensityOperator, p: f64) -> Result<DensityOperator> {
    check_probability(p)?;
    let n = state.n();
    let d = 1usize << n;
    let mut m = state.matrix().clone();
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        let mut next = m.scale_real(1.0 - p);
        for r in 0..d {
            if r & bit != 0 {
                continue;
            }
            for col in 0..d {
                if col & bit != 0 {
                    continue;
                }
                let traced = m.get(r, col) + m.get(r | bit, col | bit);
                let add = traced * (0.5 * p);
                next.set(r, col, next.get(r, col) + add);
                next.set(r | bit, col | bit, next.get(r | bit, col | bit) + add);
            }
        }
        m = next;
    }
    Ok(DensityOperator::from_matrix_unchecked(m))
}

/// Permutes qubits: qubit `l` (1-based) of the input becomes qubit `perm[l-1]` of the output.
pub fn permute_qubits(m: &ComplexMatrix, perm: &[usize]) -> Result<ComplexMatrix> {
    let n = perm.len();
    if m.dim() != 1 << n {
        return Err(Error::DimensionMismatch("permutation length vs matrix size".into()));
    }
    let pi = crate::qcore::Permutation::from_one_line(perm)?;
    let p = crate::qcore::permutation_operator(&pi);
    Ok(&(&p * m) * &p.adjoint())
}
