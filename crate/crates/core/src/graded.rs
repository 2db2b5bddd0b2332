//! Graded vector spaces with a fixed homogeneous basis and degree-homogeneous maps.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::scalar::Scalar;

/// Finite-dimensional graded space: basis vector `i` sits in degree `degrees[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub degrees: Vec<i32>,
}

impl GradedSpace {
    pub fn new(degrees: Vec<i32>) -> Self {
        Self { degrees }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// Basis indices grouped by degree, ascending.
    pub fn blocks(&self) -> BTreeMap<i32, Vec<usize>> {
        let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, &d) in self.degrees.iter().enumerate() {
            out.entry(d).or_default().push(i);
        }
        out
    }

    /// Dimension per degree over the inclusive range `lo..=hi`.
    pub fn dims(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi)
            .map(|k| self.degrees.iter().filter(|&&d| d == k).count())
            .collect()
    }

    /// Degree of a vector if it is homogeneous and non-zero.
    pub fn degree_of(&self, v: &SparseVec) -> Option<i32> {
        let mut it = v.indices().map(|i| self.degrees[i]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

/// Linear map of fixed degree, stored by columns (images of source basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub shift: i32,
    pub cols: Vec<SparseVec>,
}

impl GradedMap {
    /// Builds a map from its columns, checking homogeneity.
    pub fn new(source: GradedSpace, target: GradedSpace, shift: i32, cols: Vec<SparseVec>) -> Result<Self> {
        if cols.len() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns for a source of dimension {}",
                cols.len(),
                source.dim()
            )));
        }
        for (j, c) in cols.iter().enumerate() {
            for i in c.indices() {
                if i >= target.dim() {
                    return Err(Error::DimensionMismatch(format!("row {i} outside target")));
                }
                if target.degree(i) != source.degree(j) + shift {
                    return Err(Error::DimensionMismatch(format!(
                        "column {j} (degree {}) hits row {i} (degree {}) under shift {shift}",
                        source.degree(j),
                        target.degree(i)
                    )));
                }
            }
        }
        Ok(Self { source, target, shift, cols })
    }

    pub fn zero(source: GradedSpace, target: GradedSpace, shift: i32) -> Self {
        let cols = vec![SparseVec::new(); source.dim()];
        Self { source, target, shift, cols }
    }

    pub fn identity(space: GradedSpace) -> Self {
        let cols = (0..space.dim()).map(SparseVec::basis).collect();
        Self { source: space.clone(), target: space, shift: 0, cols }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v.iter() {
            out.add_scaled(x, &self.cols[j]);
        }
        out
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(other.target.dim(), self.source.dim(), "composition dimension mismatch");
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            shift: self.shift + other.shift,
            cols,
        }
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.cols.len(), other.cols.len());
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.add(b);
                c
            })
            .collect();
        GradedMap { cols, ..self.clone() }
    }

    pub fn scaled(&self, c: &Scalar) -> GradedMap {
        GradedMap {
            cols: self.cols.iter().map(|v| v.scaled(c)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.add(&other.scaled(&-Scalar::from_integer(1.into())))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// First source basis vector where `self` and `other` differ.
    pub fn first_difference(&self, other: &GradedMap) -> Option<usize> {
        (0..self.cols.len()).find(|&j| self.cols[j] != other.cols[j])
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(i)
    }

    /// Dense matrix of the block from source degree `k` to target degree `k + shift`,
    /// together with the row and column index lists.
    pub fn block(&self, k: i32) -> (Matrix, Vec<usize>, Vec<usize>) {
        let cols: Vec<usize> = (0..self.source.dim()).filter(|&j| self.source.degree(j) == k).collect();
        let rows: Vec<usize> = (0..self.target.dim())
            .filter(|&i| self.target.degree(i) == k + self.shift)
            .collect();
        let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (b, &j) in cols.iter().enumerate() {
            for (i, x) in self.cols[j].iter() {
                m[(pos[&i], b)] = x.clone();
            }
        }
        (m, rows, cols)
    }

    pub fn transpose_entries(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.target.dim()];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.iter() {
                rows[i].add_term(j, x);
            }
        }
        rows
    }
}

/// Kernel basis, image basis and rank of one degree block.
#[derive(Clone, Debug)]
pub struct BlockSolution {
    pub degree: i32,
    pub kernel: Vec<SparseVec>,
    pub image: Vec<SparseVec>,
    pub rank: usize,
}

/// Exact kernel and image of every source degree block.
pub fn solve_kernel_image(m: &GradedMap) -> Vec<BlockSolution> {
    m.source
        .blocks()
        .into_keys()
        .map(|k| {
            let (mat, rows, cols) = m.block(k);
            let kernel = mat
                .kernel()
                .into_iter()
                .map(|v| v.reindex(|a| Some(cols[a])))
                .collect();
            let image: Vec<SparseVec> = mat
                .image()
                .into_iter()
                .map(|v| v.reindex(|a| Some(rows[a])))
                .collect();
            BlockSolution { degree: k, kernel, rank: image.len(), image }
        })
        .collect()
}

/// Kernel of the whole map as one list.
pub fn kernel(m: &GradedMap) -> Vec<SparseVec> {
    solve_kernel_image(m).into_iter().flat_map(|b| b.kernel).collect()
}

/// Image of the whole map as one list.
pub fn image(m: &GradedMap) -> Vec<SparseVec> {
    solve_kernel_image(m).into_iter().flat_map(|b| b.image).collect()
}

/// Writes `v` in the basis `basis` (which must be linearly independent);
/// `None` if `v` is outside the span.
pub fn coordinates(basis: &[SparseVec], v: &SparseVec) -> Option<Vec<Scalar>> {
    let rows: Vec<usize> = {
        let mut s: Vec<usize> = basis.iter().flat_map(|b| b.indices()).chain(v.indices()).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(a, &i)| (i, a)).collect();
    let mut aug = Matrix::zeros(rows.len(), basis.len() + 1);
    for (j, b) in basis.iter().enumerate() {
        for (i, x) in b.iter() {
            aug[(pos[&i], j)] = x.clone();
        }
    }
    for (i, x) in v.iter() {
        aug[(pos[&i], basis.len())] = x.clone();
    }
    let pivots = aug.rref();
    if pivots.contains(&basis.len()) {
        return None;
    }
    let mut out = vec![Scalar::zero(); basis.len()];
    for (r, &p) in pivots.iter().enumerate() {
        out[p] = aug[(r, basis.len())].clone();
    }
    Some(out)
}

/// Decomposition V = A₁ ⊕ … ⊕ A_r of a space into spans of the given families;
/// [`Decomposition::split`] returns the component of a vector in each summand.
#[derive(Clone, Debug)]
pub struct Decomposition {
    families: Vec<Vec<SparseVec>>,
    /// inverse of the matrix whose columns are all family vectors
    inverse: Matrix,
}

impl Decomposition {
    pub fn new(dim: usize, families: Vec<Vec<SparseVec>>) -> Result<Self> {
        let all: Vec<SparseVec> = families.iter().flatten().cloned().collect();
        if all.len() != dim {
            return Err(Error::NotDirect(format!(
                "summands have total dimension {} in a space of dimension {dim}",
                all.len()
            )));
        }
        let inverse = Matrix::from_columns(dim, &all)
            .inverse()
            .ok_or_else(|| Error::NotDirect("summands are not independent".into()))?;
        Ok(Self { families, inverse })
    }

    /// Coordinates of `v` in the concatenated family basis.
    pub fn coordinates(&self, v: &SparseVec) -> SparseVec {
        self.inverse.apply(v)
    }

    /// Coordinates split per family.
    pub fn split_coordinates(&self, v: &SparseVec) -> Vec<Vec<Scalar>> {
        let c = self.coordinates(v);
        let mut out = Vec::new();
        let mut offset = 0;
        for f in &self.families {
            out.push((0..f.len()).map(|a| c.get(offset + a)).collect());
            offset += f.len();
        }
        out
    }

    /// Component of `v` in summand `which`.
    pub fn component(&self, which: usize, v: &SparseVec) -> SparseVec {
        let coords = &self.split_coordinates(v)[which];
        let mut out = SparseVec::new();
        for (c, b) in coords.iter().zip(&self.families[which]) {
            out.add_scaled(c, b);
        }
        out
    }

    pub fn family(&self, which: usize) -> &[SparseVec] {
        &self.families[which]
    }
}

/// Returns `g` with `g(m(x)) = x` for `x` in span(`domain`) and `g = 0` on
/// span(`complement`). `m` must map span(`domain`) bijectively onto
/// span(`codomain`), and span(`codomain`) ⊕ span(`complement`) must be the
/// whole target. The result has degree `-m.shift`.
pub fn restricted_inverse(
    m: &GradedMap,
    domain: &[SparseVec],
    codomain: &[SparseVec],
    complement: &[SparseVec],
) -> Result<GradedMap> {
    let images: Vec<SparseVec> = domain.iter().map(|v| m.apply(v)).collect();
    let image_span = Subspace::spanned_by(&images);
    if image_span.dim() < domain.len() || Subspace::spanned_by(domain).dim() < domain.len() {
        return Err(Error::NotInjective(format!(
            "{} domain vectors map onto a span of dimension {}",
            domain.len(),
            image_span.dim()
        )));
    }
    let cod_span = Subspace::spanned_by(codomain);
    if cod_span.dim() != image_span.dim() || !codomain.iter().all(|c| image_span.contains(c)) {
        return Err(Error::NotSurjective(format!(
            "image has dimension {} but the codomain span has dimension {}",
            image_span.dim(),
            cod_span.dim()
        )));
    }
    let mut families = vec![images.clone()];
    families.push(complement.to_vec());
    let dec = Decomposition::new(m.target.dim(), families)?;
    let cols = (0..m.target.dim())
        .map(|i| {
            let coords = &dec.split_coordinates(&SparseVec::basis(i))[0];
            let mut out = SparseVec::new();
            for (c, d) in coords.iter().zip(domain) {
                out.add_scaled(c, d);
            }
            out
        })
        .collect();
    GradedMap::new(m.target.clone(), m.source.clone(), -m.shift, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn space(n: usize) -> GradedSpace {
        GradedSpace::new(vec![0; n])
    }

    #[test]
    fn zero_and_identity_maps() {
        let z = GradedMap::zero(space(3), space(3), 0);
        let s = solve_kernel_image(&z);
        assert_eq!((s[0].kernel.len(), s[0].rank), (3, 0));
        let id = GradedMap::identity(space(3));
        let s = solve_kernel_image(&id);
        assert_eq!((s[0].kernel.len(), s[0].rank), (0, 3));
    }

    #[test]
    fn restricted_identity_and_failure() {
        let id = GradedMap::identity(space(3));
        let dom = vec![SparseVec::basis(0), SparseVec::basis(1)];
        let g = restricted_inverse(&id, &dom, &dom, &[SparseVec::basis(2)]).unwrap();
        assert_eq!(g.apply(&SparseVec::basis(1)), SparseVec::basis(1));
        assert!(g.apply(&SparseVec::basis(2)).is_zero());

        let collapse = GradedMap::new(
            space(2),
            space(2),
            0,
            vec![SparseVec::basis(0), SparseVec::basis(0)],
        )
        .unwrap();
        let dom = vec![SparseVec::basis(0), SparseVec::basis(1)];
        assert!(matches!(
            restricted_inverse(&collapse, &dom, &dom, &[]),
            Err(Error::NotInjective(_))
        ));
    }

    #[test]
    fn coordinates_in_basis() {
        let basis = vec![
            SparseVec::from_pairs([(0, int(1)), (1, int(1))]),
            SparseVec::basis(1),
        ];
        let v = SparseVec::from_pairs([(0, int(2)), (1, int(5))]);
        assert_eq!(coordinates(&basis, &v).unwrap(), vec![int(2), int(3)]);
        assert!(coordinates(&basis, &SparseVec::basis(2)).is_none());
    }
}
