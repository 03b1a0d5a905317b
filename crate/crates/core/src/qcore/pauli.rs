use super::state::Limits;
use super::{ComplexMatrix, DensityOperator, C64, I, ONE, ZERO};
use crate::error::{invalid, Error, Result};
use std::fmt;
use std::str::FromStr;

/// Single-qubit Pauli letter. The discriminant is the base-4 digit used in string indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Symplectic bits `(x, z)`: I=00, X=10, Z=01, Y=11.
    #[inline]
    pub fn xz(self) -> (u8, u8) {
        match self {
            PauliLetter::I => (0, 0),
            PauliLetter::X => (1, 0),
            PauliLetter::Y => (1, 1),
            PauliLetter::Z => (0, 1),
        }
    }

    pub fn from_xz(x: u8, z: u8) -> Self {
        match (x & 1, z & 1) {
            (0, 0) => PauliLetter::I,
            (1, 0) => PauliLetter::X,
            (1, 1) => PauliLetter::Y,
            _ => PauliLetter::Z,
        }
    }

    /// `self * other = i^k * product` with `k` returned mod 4.
    pub fn mul(self, other: PauliLetter) -> (u8, PauliLetter) {
        use PauliLetter::*;
        let (xa, za) = self.xz();
        let (xb, zb) = other.xz();
        let prod = PauliLetter::from_xz(xa ^ xb, za ^ zb);
        let k = match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        };
        (k, prod)
    }

    fn symbol(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index()]
    }
}

pub fn pauli_matrix(p: PauliLetter) -> ComplexMatrix {
    let m = match p {
        PauliLetter::I => [ONE, ZERO, ZERO, ONE],
        PauliLetter::X => [ZERO, ONE, ONE, ZERO],
        PauliLetter::Y => [ZERO, -I, I, ZERO],
        PauliLetter::Z => [ONE, ZERO, ZERO, -ONE],
    };
    ComplexMatrix::from_row_major(m.to_vec()).expect("2x2")
}

/// Base-4 index of a letter sequence, qubit 1 most significant.
pub fn string_index(letters: &[PauliLetter]) -> usize {
    letters.iter().fold(0, |acc, l| acc * 4 + l.index())
}

/// Signed Pauli string `sign * P_1 ⊗ ... ⊗ P_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    sign: i8,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(invalid(format!("sign {sign} is not ±1")));
        }
        Ok(Self { letters, sign })
    }

    pub fn identity(n: usize) -> Self {
        Self { letters: vec![PauliLetter::I; n], sign: 1 }
    }

    /// Unsigned string from its base-4 index.
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut letters = vec![PauliLetter::I; n];
        for l in letters.iter_mut().rev() {
            *l = PauliLetter::from_index(index & 3);
            index >>= 2;
        }
        Self { letters, sign: 1 }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    #[inline]
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn index(&self) -> usize {
        string_index(&self.letters)
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != PauliLetter::I).count()
    }

    /// Symplectic form: true iff the strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| {
                let (xa, za) = a.xz();
                let (xb, zb) = b.xz();
                (xa & zb) ^ (za & xb) == 1
            })
            .count();
        anti % 2 == 0
    }

    /// Product of two commuting signed strings (the result is again Hermitian).
    pub fn mul_commuting(&self, other: &PauliString) -> Result<PauliString> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!("{} vs {} qubits", self.n(), other.n())));
        }
        let mut phase = 0u8;
        let mut letters = Vec::with_capacity(self.n());
        for (a, b) in self.letters.iter().zip(&other.letters) {
            let (k, p) = a.mul(*b);
            phase = (phase + k) % 4;
            letters.push(p);
        }
        let sign = match phase {
            0 => self.sign * other.sign,
            2 => -self.sign * other.sign,
            _ => return Err(invalid("product of anticommuting strings is not Hermitian")),
        };
        Ok(PauliString { letters, sign })
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::identity(1);
        for l in &self.letters {
            m = m.tensor(&pauli_matrix(*l))?;
        }
        Ok(m.scale_real(self.sign as f64))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign < 0 { '-' } else { '+' })?;
        for l in &self.letters {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses strings such as `XZI`, `+XX`, `-YZ`.
    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (-1, &s[1..]),
            Some(b'+') => (1, &s[1..]),
            _ => (1, s),
        };
        let letters = body
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(PauliLetter::I),
                'X' => Ok(PauliLetter::X),
                'Y' => Ok(PauliLetter::Y),
                'Z' => Ok(PauliLetter::Z),
                other => Err(Error::Parse(format!("unknown Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        PauliString::new(letters, sign)
    }
}

/// All `4^n` values `tr[m P]` indexed by [`string_index`].
///
/// Works on the digit-interleaved layout: digit `l` of the working index is
/// `2 r_l + c_l` for row bit `r_l` and column bit `c_l` of qubit `l`, and each
/// qubit is transformed in place.
pub fn pauli_coefficients_of_matrix(m: &ComplexMatrix, n: usize) -> Result<Vec<C64>> {
    if m.dim() != 1usize << n {
        return Err(Error::DimensionMismatch(format!("dim {} is not 2^{n}", m.dim())));
    }
    let mut t = interleave(m, n);
    for l in 0..n {
        let stride = 1usize << (2 * (n - 1 - l));
        for base in 0..t.len() {
            if (base / stride) % 4 != 0 {
                continue;
            }
            let t00 = t[base];
            let t01 = t[base + stride];
            let t10 = t[base + 2 * stride];
            let t11 = t[base + 3 * stride];
            t[base] = t00 + t11;
            t[base + stride] = t01 + t10;
            t[base + 2 * stride] = I * (t01 - t10);
            t[base + 3 * stride] = t00 - t11;
        }
    }
    Ok(t)
}

/// Real Pauli coefficients `tr[ρ P]` of a state; entry 0 (the identity string) is 1.
pub fn pauli_coefficients(state: &DensityOperator) -> Result<Vec<f64>> {
    Limits::default().check(state.n())?;
    Ok(pauli_coefficients_of_matrix(state.matrix(), state.n())?.into_iter().map(|z| z.re).collect())
}

/// Inverse of [`pauli_coefficients`]: `2^{-n} Σ_P c(P) P`.
pub fn pauli_reconstruct(coeffs: &[f64], n: usize) -> Result<ComplexMatrix> {
    if coeffs.len() != 1usize << (2 * n) {
        return Err(Error::DimensionMismatch(format!("{} coefficients for {n} qubits", coeffs.len())));
    }
    let mut t: Vec<C64> = coeffs.iter().map(|&c| C64::new(c, 0.0)).collect();
    for l in 0..n {
        let stride = 1usize << (2 * (n - 1 - l));
        for base in 0..t.len() {
            if (base / stride) % 4 != 0 {
                continue;
            }
            let (ci, cx, cy, cz) =
                (t[base], t[base + stride], t[base + 2 * stride], t[base + 3 * stride]);
            t[base] = (ci + cz) * 0.5;
            t[base + stride] = (cx - I * cy) * 0.5;
            t[base + 2 * stride] = (cx + I * cy) * 0.5;
            t[base + 3 * stride] = (ci - cz) * 0.5;
        }
    }
    Ok(deinterleave(&t, n))
}

fn interleave(m: &ComplexMatrix, n: usize) -> Vec<C64> {
    let d = 1usize << n;
    let mut t = vec![ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            t[interleave_index(r, c, n)] = m.get(r, c);
        }
    }
    t
}

fn deinterleave(t: &[C64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(1usize << n, |r, c| t[interleave_index(r, c, n)])
}

#[inline]
fn interleave_index(r: usize, c: usize, n: usize) -> usize {
    let mut idx = 0;
    for l in 0..n {
        let shift = n - 1 - l;
        let digit = (((r >> shift) & 1) << 1) | ((c >> shift) & 1);
        idx = idx * 4 + digit;
    }
    idx
}
