//! Sparse elements of the exterior algebra Λ•V with bitmask basis monomials.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::{self, Scalar};

/// Basis monomial e^{i₁}∧…∧e^{i_k} with i₁<…<i_k, stored as a bit mask
/// (bit `i` set means generator `i+1` is present).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub u32);

impl BasisIndex {
    pub const UNIT: BasisIndex = BasisIndex(0);

    pub fn generator(i: usize) -> Self {
        BasisIndex(1 << i)
    }

    pub fn top(dim: usize) -> Self {
        BasisIndex(((1u64 << dim) - 1) as u32)
    }

    pub fn from_generators(gens: &[usize]) -> Self {
        BasisIndex(gens.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Zero-based generator indices in ascending order.
    pub fn generators(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn complement(self, dim: usize) -> Self {
        BasisIndex(Self::top(dim).0 & !self.0)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn label(self) -> String {
        if self.0 == 0 {
            return "1".into();
        }
        let gens: Vec<String> = self.generators().iter().map(|i| (i + 1).to_string()).collect();
        format!("e{}", gens.join("_"))
    }
}

/// Product of two basis monomials: `None` if they share a generator,
/// otherwise the merged monomial and whether the merge is an odd permutation.
pub fn wedge_basis(a: BasisIndex, b: BasisIndex) -> Option<(BasisIndex, bool)> {
    if a.0 & b.0 != 0 {
        return None;
    }
    // each generator j of b must move past every generator i > j of a
    let mut inversions = 0u32;
    let mut rest = b.0;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a.0 >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some((BasisIndex(a.0 | b.0), inversions % 2 == 1))
}

/// Element of Λ•V for V of dimension `dim`; coefficients keyed by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVector {
    pub dim: usize,
    pub coeffs: SparseVec,
}

impl MultiVector {
    pub fn zero(dim: usize) -> Self {
        Self { dim, coeffs: SparseVec::new() }
    }

    pub fn unit(dim: usize) -> Self {
        Self::monomial(dim, BasisIndex::UNIT)
    }

    pub fn monomial(dim: usize, idx: BasisIndex) -> Self {
        Self { dim, coeffs: SparseVec::basis(idx.0 as usize) }
    }

    /// `e^{i+1}` for zero-based `i`.
    pub fn generator(dim: usize, i: usize) -> Self {
        Self::monomial(dim, BasisIndex::generator(i))
    }

    pub fn from_coeffs(dim: usize, coeffs: SparseVec) -> Self {
        Self { dim, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn coefficient(&self, idx: BasisIndex) -> Scalar {
        self.coeffs.get(idx.0 as usize)
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisIndex, &Scalar)> {
        self.coeffs.iter().map(|(i, c)| (BasisIndex(i as u32), c))
    }

    /// Component of form degree `k`.
    pub fn homogeneous(&self, k: usize) -> MultiVector {
        let coeffs = SparseVec::from_pairs(
            self.terms()
                .filter(|(b, _)| b.degree() == k)
                .map(|(b, c)| (b.0 as usize, c.clone())),
        );
        Self { dim: self.dim, coeffs }
    }

    /// Form degree if homogeneous and non-zero.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms().map(|(b, _)| b.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.scaled(c) }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.add(&other.coeffs);
        Self { dim: self.dim, coeffs }
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in self.terms() {
            let neg = c < &Scalar::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "{}", b.label())?;
            } else if b.0 == 0 {
                write!(f, "{}", scalar::format(&mag))?;
            } else {
                write!(f, "{}*{}", scalar::format(&mag), b.label())?;
            }
        }
        Ok(())
    }
}

/// Wedge product of sparse coefficient vectors indexed by masks.
pub fn wedge_coeffs(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, x) in a.iter() {
        for (j, y) in b.iter() {
            if let Some((m, odd)) = wedge_basis(BasisIndex(i as u32), BasisIndex(j as u32)) {
                let c = x * y;
                out.add_term(m.0 as usize, &if odd { -c } else { c });
            }
        }
    }
    out
}

pub fn mv_wedge(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "wedge of elements of Λ(dim {}) and Λ(dim {})",
            a.dim, b.dim
        )));
    }
    Ok(MultiVector { dim: a.dim, coeffs: wedge_coeffs(&a.coeffs, &b.coeffs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn g(dim: usize, i: usize) -> MultiVector {
        MultiVector::generator(dim, i)
    }

    #[test]
    fn wedge_examples() {
        let e12 = mv_wedge(&g(3, 0), &g(3, 1)).unwrap();
        assert_eq!(e12, MultiVector::monomial(3, BasisIndex::from_generators(&[0, 1])));
        assert!(mv_wedge(&g(3, 0), &g(3, 0)).unwrap().is_zero());
        let e21 = mv_wedge(&g(3, 1), &g(3, 0)).unwrap();
        assert_eq!(e21, e12.scaled(&int(-1)));
        assert!(mv_wedge(&g(3, 0), &g(4, 0)).is_err());
    }

    #[test]
    fn associative_and_graded_commutative_up_to_dim_4() {
        for dim in 1..=4usize {
            let n = 1u32 << dim;
            for a in 0..n {
                for b in 0..n {
                    let (ma, mb) = (
                        MultiVector::monomial(dim, BasisIndex(a)),
                        MultiVector::monomial(dim, BasisIndex(b)),
                    );
                    let ab = mv_wedge(&ma, &mb).unwrap();
                    let ba = mv_wedge(&mb, &ma).unwrap();
                    let odd = BasisIndex(a).degree() * BasisIndex(b).degree() % 2 == 1;
                    assert_eq!(ab, ba.scaled(&scalar::sign(odd)));
                    for c in 0..n {
                        let mc = MultiVector::monomial(dim, BasisIndex(c));
                        let left = mv_wedge(&ab, &mc).unwrap();
                        let right = mv_wedge(&ma, &mv_wedge(&mb, &mc).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn display() {
        let v = g(3, 0).plus(&g(3, 2).scaled(&int(-2)));
        assert_eq!(v.to_string(), "e1 - 2*e3");
    }
}
