use super::{ComplexMatrix, C64};
use crate::error::{invalid, Result};

/// Element of the symmetric group `S_m`, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Self { images: (0..m).collect() }
    }

    /// One-line notation with 1-based values: `images[k-1] = π(k)`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &v in images {
            if v == 0 || v > m || seen[v - 1] {
                return Err(invalid(format!("{images:?} is not a permutation of 1..={m}")));
            }
            seen[v - 1] = true;
        }
        Ok(Self { images: images.iter().map(|v| v - 1).collect() })
    }

    /// Product of disjoint or overlapping cycles in 1-based notation, rightmost applied first.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut out = Self::identity(m);
        for cycle in cycles.iter().rev() {
            let mut c = Self::identity(m);
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a == 0 || a > m || b == 0 || b > m {
                    return Err(invalid(format!("cycle entry outside 1..={m}")));
                }
                c.images[a - 1] = b - 1;
            }
            Self::from_one_line(&c.images.iter().map(|v| v + 1).collect::<Vec<_>>())?;
            out = compose(&c, &out);
        }
        Ok(out)
    }

    pub fn transposition(m: usize, i: usize, j: usize) -> Result<Self> {
        if !(1 <= i && i < j && j <= m) {
            return Err(invalid(format!("transposition ({i} {j}) needs 1 <= i < j <= {m}")));
        }
        Self::from_cycles(m, &[&[i, j]])
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of 0-based `k`.
    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.m()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v] = k;
        }
        Self { images: inv }
    }
}

/// `(π τ)(k) = π(τ(k))`.
pub fn compose(pi: &Permutation, tau: &Permutation) -> Permutation {
    Permutation { images: tau.images.iter().map(|&k| pi.images[k]).collect() }
}

/// All of `S_m` in lexicographic one-line order.
pub fn all_permutations(m: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation { images: prefix.clone() });
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// `Π_π` on `(C^2)^{⊗m}`: tensor factor `k` is moved to slot `π(k)`, so `Π_π Π_τ = Π_{πτ}`.
pub fn permutation_operator(pi: &Permutation) -> ComplexMatrix {
    permutation_operator_on(pi, 1)
}

/// `Π_π` acting on `m` replicas of a `q`-qubit register.
pub fn permutation_operator_on(pi: &Permutation, q: usize) -> ComplexMatrix {
    let m = pi.m();
    let total = m * q;
    let d = 1usize << total;
    let mask = (1usize << q) - 1;
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..d {
        let mut j = 0;
        for k in 0..m {
            let block = (i >> ((m - 1 - k) * q)) & mask;
            j |= block << ((m - 1 - pi.apply(k)) * q);
        }
        out.set(j, i, C64::new(1.0, 0.0));
    }
    out
}

/// Swap of (1-based) replicas `i < j` among `m` single-qubit replicas.
pub fn swap_operator(m: usize, i: usize, j: usize) -> Result<ComplexMatrix> {
    Ok(permutation_operator(&Permutation::transposition(m, i, j)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PureState;

    #[test]
    fn swap_trace_is_local_dimension() {
        let f = swap_operator(2, 1, 2).unwrap();
        assert_eq!(f.trace(), C64::new(2.0, 0.0));
    }

    #[test]
    fn swap_trick_on_identical_zero_states() {
        let f = swap_operator(2, 1, 2).unwrap();
        let zero = PureState::basis(1, 0).unwrap().density();
        let rs = zero.tensor(&zero).unwrap();
        assert_eq!(f.trace_product(rs.matrix()).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn double_transposition_is_an_involution() {
        let p = Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap();
        let m = permutation_operator(&p);
        assert_eq!(&m * &m, ComplexMatrix::identity(16));
        assert_eq!(compose(&p, &p), Permutation::identity(4));
    }

    #[test]
    fn invalid_swaps_rejected() {
        assert!(swap_operator(3, 2, 2).is_err());
        assert!(swap_operator(3, 3, 1).is_err());
        assert!(swap_operator(3, 0, 1).is_err());
        assert!(swap_operator(3, 1, 4).is_err());
        assert!(Permutation::from_one_line(&[1, 1, 2]).is_err());
    }

    #[test]
    fn homomorphism_on_s4() {
        let group = all_permutations(4);
        assert_eq!(group.len(), 24);
        let mats: Vec<ComplexMatrix> = group.iter().map(permutation_operator).collect();
        let mut checks = 0;
        for (a, ma) in group.iter().zip(&mats) {
            for (b, mb) in group.iter().zip(&mats) {
                let lhs = ma * mb;
                assert_eq!(lhs, permutation_operator(&compose(a, b)));
                checks += 1;
            }
        }
        assert_eq!(checks, 576);
    }

    #[test]
    fn factor_moves_to_image_slot() {
        // π = (1 2 3): factor 1 lands in slot 2.
        let pi = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let m = permutation_operator(&pi);
        // |100> -> |010>
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[0b100] = C64::new(1.0, 0.0);
        let out = m.apply(&v).unwrap();
        assert_eq!(out[0b010], C64::new(1.0, 0.0));
    }

    #[test]
    fn register_swap_matches_qubitwise_swaps() {
        // Swapping two 2-qubit registers equals F_{13} F_{24} on four qubits.
        let reg = permutation_operator_on(&Permutation::transposition(2, 1, 2).unwrap(), 2);
        let qubitwise = permutation_operator(&Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap());
        assert_eq!(reg, qubitwise);
    }
}
