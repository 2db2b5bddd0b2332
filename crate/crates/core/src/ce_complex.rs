//! The Chevalley–Eilenberg cdga Λ•𝔰* with d, the Koszul codifferential ∂,
//! Hodge star, integral pairing, coadjoint action, invariants and cohomology.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{self, GradedMap, GradedSpace};
use crate::lie_algebra::{killing_form, LieAlgebraData};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::multivector::{wedge_basis, wedge_coeffs, BasisIndex, MultiVector};
use crate::scalar::{self, Scalar};

/// Symmetric pairing on 𝔰 used to transport the bracket to 𝔰*.
#[derive(Clone, Debug)]
pub struct TransportPairing {
    pub matrix: Matrix,
    pub inverse: Matrix,
    /// `Some(c)` when the pairing is `c` times the Killing form.
    pub killing_multiple: Option<Scalar>,
    pub description: String,
}

impl TransportPairing {
    /// Killing form normalized so that its first non-zero diagonal entry is 1;
    /// the identity when the Killing form is degenerate. For su(2) in the
    /// ε-basis this is the identity.
    pub fn default_for(g: &LieAlgebraData) -> Self {
        let k = killing_form(g);
        let n = g.dim();
        if !k.degenerate {
            if let Some(first) = (0..n).map(|i| k.matrix[(i, i)].clone()).find(|x| !x.is_zero()) {
                let c = Scalar::one() / first;
                let matrix = k.matrix.scaled(&c);
                let inverse = matrix.inverse().expect("non-degenerate");
                return Self {
                    description: format!("killing form times {}", scalar::format(&c)),
                    killing_multiple: Some(c),
                    matrix,
                    inverse,
                };
            }
        }
        Self::identity(n)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Matrix::identity(n),
            inverse: Matrix::identity(n),
            killing_multiple: None,
            description: "identity".into(),
        }
    }

    pub fn custom(matrix: Matrix) -> Result<Self> {
        let inverse = matrix
            .inverse()
            .ok_or_else(|| Error::DegeneratePairing("transport pairing is singular".into()))?;
        Ok(Self { matrix, inverse, killing_multiple: None, description: "custom".into() })
    }
}

/// Λ•𝔰* with its operators precomputed as maps on the 2^d monomial basis
/// (basis vector `m` is the monomial with bit mask `m`).
#[derive(Clone, Debug)]
pub struct CeComplex {
    pub algebra: LieAlgebraData,
    pub dim: usize,
    pub space: GradedSpace,
    pub d: GradedMap,
    pub codiff: GradedMap,
    pub transport: TransportPairing,
}

impl CeComplex {
    pub fn new(algebra: &LieAlgebraData) -> Result<Self> {
        let t = TransportPairing::default_for(algebra);
        Self::with_transport(algebra, t)
    }

    pub fn with_transport(algebra: &LieAlgebraData, transport: TransportPairing) -> Result<Self> {
        if algebra.is_graded() {
            return Err(Error::InvalidAlgebra("the CE complex is built for ungraded algebras".into()));
        }
        let dim = algebra.dim();
        if dim > 16 {
            return Err(Error::DimensionMismatch(format!("dimension {dim} exceeds 16")));
        }
        let space = GradedSpace::new((0..1u32 << dim).map(|m| m.count_ones() as i32).collect());
        let d = ce_differential_on(algebra, &space);
        let codiff = codifferential_on(algebra, &space, &transport);
        Ok(Self { algebra: algebra.clone(), dim, space, d, codiff, transport })
    }

    pub fn size(&self) -> usize {
        self.space.dim()
    }

    pub fn top(&self) -> BasisIndex {
        BasisIndex::top(self.dim)
    }

    pub fn mv(&self, v: &SparseVec) -> MultiVector {
        MultiVector::from_coeffs(self.dim, v.clone())
    }

    /// Generator `e^{i+1}` as a coefficient vector.
    pub fn generator(&self, i: usize) -> SparseVec {
        SparseVec::basis(1 << i)
    }

    pub fn wedge(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        wedge_coeffs(a, b)
    }

    /// `(-1)^{|a|}` times the top coefficient of `a ∧ b`, extended bilinearly.
    pub fn integral_pairing(&self, a: &SparseVec, b: &SparseVec) -> Scalar {
        let top = self.top().0 as usize;
        let mut s = Scalar::zero();
        for (i, x) in a.iter() {
            let c = BasisIndex(i as u32).complement(self.dim).0 as usize;
            let y = b.get(c);
            if y.is_zero() {
                continue;
            }
            let (m, odd) = wedge_basis(BasisIndex(i as u32), BasisIndex(c as u32)).expect("disjoint");
            debug_assert_eq!(m.0 as usize, top);
            let odd = odd ^ (BasisIndex(i as u32).degree() % 2 == 1);
            s += scalar::sign(odd) * x * y;
        }
        s
    }

    /// Rows of the integral pairing: row `m` holds the single non-zero entry.
    pub fn pairing_rows(&self) -> Vec<SparseVec> {
        (0..self.size())
            .map(|m| {
                let c = BasisIndex(m as u32).complement(self.dim).0 as usize;
                let v = self.integral_pairing(&SparseVec::basis(m), &SparseVec::basis(c));
                SparseVec::from_pairs([(c, v)])
            })
            .collect()
    }

    /// Coadjoint action of basis vector `x` as a degree-0 derivation.
    pub fn lie_derivative_map(&self, x: usize) -> GradedMap {
        let n = self.dim;
        let on_gen: Vec<SparseVec> = (0..n)
            .map(|k| {
                SparseVec::from_pairs((0..n).map(|j| (1usize << j, -self.algebra.f(x, j, k))))
            })
            .collect();
        derivation(&self.space, n, &on_gen, 0)
    }

    pub fn lie_derivative(&self, x: usize, a: &SparseVec) -> SparseVec {
        self.lie_derivative_map(x).apply(a)
    }

    /// Hodge star for the orthonormal reference basis: `⋆e^I = ±e^{I^c}`
    /// with `e^I ∧ ⋆e^I = e¹…e^d`.
    pub fn hodge_star(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            let b = BasisIndex(i as u32);
            let c = b.complement(self.dim);
            let (_, odd) = wedge_basis(b, c).expect("disjoint");
            out.add_term(c.0 as usize, &(scalar::sign(odd) * x));
        }
        out
    }

    /// Star built from the metric `G` on 𝔰* without the volume factor:
    /// `⋆_G e^I = Σ_J det G[I,J] · sign(J, J^c) e^{J^c}`.
    pub fn metric_star_map(&self, g: &Matrix) -> GradedMap {
        let n = self.size();
        let cols = (0..n)
            .map(|i| {
                let bi = BasisIndex(i as u32);
                let gi = bi.generators();
                let mut out = SparseVec::new();
                for j in 0..n {
                    let bj = BasisIndex(j as u32);
                    if bj.degree() != bi.degree() {
                        continue;
                    }
                    let gj = bj.generators();
                    let mut minor = Matrix::zeros(gi.len(), gj.len());
                    for (a, &r) in gi.iter().enumerate() {
                        for (b, &c) in gj.iter().enumerate() {
                            minor[(a, b)] = g[(r, c)].clone();
                        }
                    }
                    let det = if gi.is_empty() { Scalar::one() } else { minor.determinant() };
                    if det.is_zero() {
                        continue;
                    }
                    let c = bj.complement(self.dim);
                    let (_, odd) = wedge_basis(bj, c).expect("disjoint");
                    out.add_term(c.0 as usize, &(scalar::sign(odd) * det));
                }
                out
            })
            .collect();
        let target = self.space.clone();
        GradedMap {
            source: self.space.clone(),
            shift: 0,
            cols,
            target,
        }
    }

    /// ⋆d⋆ for the metric dual to the transport pairing, computed exactly as
    /// `|det B| · ⋆_G d ⋆_G` with `G = B⁻¹`. Maps degree k to degree k−1.
    pub fn star_d_star(&self) -> GradedMap {
        let star = self.metric_star_map(&self.transport.inverse);
        let factor = self.transport.matrix.determinant().abs();
        let cols = (0..self.size())
            .map(|i| star.apply(&self.d.apply(star.col(i))).scaled(&factor))
            .collect();
        GradedMap { source: self.space.clone(), target: self.space.clone(), shift: -1, cols }
    }

    /// Per-degree σ(k) with ∂ = σ(k)·⋆d⋆ on Λ^k. `Ok(None)` entries mark
    /// degrees where both sides vanish; an error names a degree where no
    /// sign ±1 works.
    pub fn codifferential_sign_table(&self) -> std::result::Result<Vec<Option<i32>>, usize> {
        let sds = self.star_d_star();
        let mut table = Vec::new();
        for k in 0..=self.dim {
            let idx: Vec<usize> = (0..self.size()).filter(|&m| self.space.degree(m) == k as i32).collect();
            let matches = |s: i32| {
                idx.iter().all(|&m| self.codiff.cols[m] == sds.cols[m].scaled(&scalar::int(s as i64)))
            };
            let zero = idx.iter().all(|&m| self.codiff.cols[m].is_zero() && sds.cols[m].is_zero());
            if zero {
                table.push(None);
            } else if matches(1) {
                table.push(Some(1));
            } else if matches(-1) {
                table.push(Some(-1));
            } else {
                return Err(k);
            }
        }
        Ok(table)
    }

    /// D = d∂ + ∂d.
    pub fn laplacian(&self) -> GradedMap {
        self.d.compose(&self.codiff).add(&self.codiff.compose(&self.d))
    }

    /// Joint kernel of the coadjoint action, per degree 0..=dim.
    pub fn invariants(&self) -> Vec<Vec<SparseVec>> {
        let maps: Vec<GradedMap> = (0..self.dim).map(|x| self.lie_derivative_map(x)).collect();
        (0..=self.dim as i32)
            .map(|k| {
                let cols: Vec<usize> = (0..self.size()).filter(|&m| self.space.degree(m) == k).collect();
                if maps.is_empty() {
                    return cols.iter().map(|&m| SparseVec::basis(m)).collect();
                }
                let blocks: Vec<Matrix> = maps.iter().map(|l| l.block(k).0).collect();
                let rows: usize = blocks.iter().map(|b| b.rows).sum();
                let mut stacked = Matrix::zeros(rows, cols.len());
                let mut off = 0;
                for b in &blocks {
                    for r in 0..b.rows {
                        for c in 0..b.cols {
                            stacked[(off + r, c)] = b[(r, c)].clone();
                        }
                    }
                    off += b.rows;
                }
                stacked
                    .kernel()
                    .into_iter()
                    .map(|v| v.reindex(|a| Some(cols[a])))
                    .collect()
            })
            .collect()
    }

    /// Cohomology dimensions and representatives per degree.
    ///
    /// Representatives are the harmonic forms ker d ∩ ker ∂ whenever these
    /// have the right dimension in every degree; otherwise a complement of
    /// im d inside ker d is chosen.
    pub fn cohomology(&self) -> Cohomology {
        let d_blocks = graded::solve_kernel_image(&self.d);
        let c_blocks = graded::solve_kernel_image(&self.codiff);
        let mut dims = Vec::new();
        let mut harmonic = Vec::new();
        let mut complement = Vec::new();
        for k in 0..=self.dim {
            let ker = &d_blocks[k].kernel;
            let im_prev: &[SparseVec] = if k == 0 { &[] } else { &d_blocks[k - 1].image };
            dims.push(ker.len() - im_prev.len());

            let mut span = Subspace::spanned_by(im_prev);
            let mut reps = Vec::new();
            for v in ker {
                if span.insert(v) {
                    reps.push(v.clone());
                }
            }
            complement.push(reps);

            let h = intersect(ker, &c_blocks[k].kernel);
            harmonic.push(h);
        }
        let harmonic_ok = harmonic.iter().zip(&dims).all(|(h, &n)| h.len() == n);
        Cohomology {
            representatives: if harmonic_ok { harmonic } else { complement },
            harmonic: harmonic_ok,
            dims,
        }
    }

    /// Λ𝔰* = invariants ⊕ im d ⊕ im ∂, checked to be direct with dim im d = dim im ∂.
    pub fn reductive_decomposition(&self) -> Result<ReductiveDecomposition> {
        let invariants: Vec<SparseVec> = self.invariants().into_iter().flatten().collect();
        let im_d = graded::image(&self.d);
        let im_codiff = graded::image(&self.codiff);
        if im_d.len() != im_codiff.len() {
            return Err(Error::NotDirect(format!(
                "dim im d = {} but dim im ∂ = {}",
                im_d.len(),
                im_codiff.len()
            )));
        }
        let decomposition = graded::Decomposition::new(
            self.size(),
            vec![invariants.clone(), im_d.clone(), im_codiff.clone()],
        )?;
        Ok(ReductiveDecomposition { invariants, im_d, im_codiff, decomposition })
    }

    /// Short report of cohomology, invariants, decomposition and σ(k).
    pub fn report(&self) -> CeReport {
        let coh = self.cohomology();
        let invariants = self.invariants();
        let decomposition = self
            .reductive_decomposition()
            .ok()
            .map(|r| [r.invariants.len(), r.im_d.len(), r.im_codiff.len()]);
        let sign_table = self.codifferential_sign_table().ok();
        CeReport {
            algebra: self.algebra.name.clone(),
            dim: self.dim,
            transport_pairing: self.transport.description.clone(),
            cohomology_dims: coh.dims.clone(),
            harmonic_representatives: coh.harmonic,
            representatives: coh
                .representatives
                .iter()
                .map(|b| b.iter().map(|v| self.mv(v).to_string()).collect())
                .collect(),
            invariant_dims: invariants.iter().map(|b| b.len()).collect(),
            decomposition_dims: decomposition,
            codifferential_sign: sign_table,
        }
    }
}

impl GradedMap {
    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }
}

/// Basis of span(a) ∩ span(b).
pub fn intersect(a: &[SparseVec], b: &[SparseVec]) -> Vec<SparseVec> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // solve Σ x_i a_i − Σ y_j b_j = 0
    let mut rows: Vec<usize> = a.iter().chain(b).flat_map(|v| v.indices()).collect();
    rows.sort_unstable();
    rows.dedup();
    let pos: std::collections::BTreeMap<usize, usize> = rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut m = Matrix::zeros(rows.len(), a.len() + b.len());
    for (j, v) in a.iter().enumerate() {
        for (i, x) in v.iter() {
            m[(pos[&i], j)] = x.clone();
        }
    }
    for (j, v) in b.iter().enumerate() {
        for (i, x) in v.iter() {
            m[(pos[&i], a.len() + j)] = -x.clone();
        }
    }
    let mut span = Subspace::new();
    let mut out = Vec::new();
    for k in m.kernel() {
        let mut v = SparseVec::new();
        for (j, x) in k.iter().filter(|(j, _)| *j < a.len()) {
            v.add_scaled(x, &a[j]);
        }
        if span.insert(&v) {
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub dims: Vec<usize>,
    /// Per degree.
    pub representatives: Vec<Vec<SparseVec>>,
    /// Whether the representatives are the harmonic forms.
    pub harmonic: bool,
}

#[derive(Clone, Debug)]
pub struct ReductiveDecomposition {
    pub invariants: Vec<SparseVec>,
    pub im_d: Vec<SparseVec>,
    pub im_codiff: Vec<SparseVec>,
    pub decomposition: graded::Decomposition,
}

#[derive(Clone, Debug, Serialize)]
pub struct CeReport {
    pub algebra: String,
    pub dim: usize,
    pub transport_pairing: String,
    pub cohomology_dims: Vec<usize>,
    pub harmonic_representatives: bool,
    pub representatives: Vec<Vec<String>>,
    pub invariant_dims: Vec<usize>,
    /// (invariants, im d, im ∂) when the decomposition is direct.
    pub decomposition_dims: Option<[usize; 3]>,
    /// σ(k) with ∂ = σ(k)·⋆d⋆; null entries where both sides vanish.
    pub codifferential_sign: Option<Vec<Option<i32>>>,
}

impl CeReport {
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = format!(
            "algebra {} (dim {})\ntransport pairing: {}\ncohomology: {}\ninvariants: {}\n",
            self.algebra,
            self.dim,
            self.transport_pairing,
            join(&self.cohomology_dims),
            join(&self.invariant_dims)
        );
        match self.decomposition_dims {
            Some([a, b, c]) => s += &format!("decomposition (invariants, im d, im ∂): ({a}, {b}, {c})\n"),
            None => s += "decomposition: not direct\n",
        }
        if let Some(t) = &self.codifferential_sign {
            let cells: Vec<String> = t
                .iter()
                .map(|x| x.map_or("·".into(), |v| if v > 0 { "+".into() } else { "-".into() }))
                .collect();
            s += &format!("∂ = σ⋆d⋆, σ by degree: {}\n", cells.join(" "));
        }
        s += &format!(
            "representatives ({}):\n",
            if self.harmonic_representatives { "harmonic" } else { "complement of im d" }
        );
        for (k, reps) in self.representatives.iter().enumerate() {
            for r in reps {
                s += &format!("  H^{k}: {r}\n");
            }
        }
        s
    }
}

/// Degree-`shift` derivation of Λ determined by its values on generators.
fn derivation(space: &GradedSpace, n: usize, on_gen: &[SparseVec], shift: i32) -> GradedMap {
    let cols = (0..space.dim())
        .map(|m| {
            let gens = BasisIndex(m as u32).generators();
            let mut out = SparseVec::new();
            for (a, &g) in gens.iter().enumerate() {
                let prefix = SparseVec::basis(BasisIndex::from_generators(&gens[..a]).0 as usize);
                let suffix = SparseVec::basis(BasisIndex::from_generators(&gens[a + 1..]).0 as usize);
                let term = wedge_coeffs(&prefix, &wedge_coeffs(&on_gen[g], &suffix));
                // an odd derivation passes `a` generators
                let odd = shift.rem_euclid(2) == 1 && a % 2 == 1;
                out.add_scaled(&scalar::sign(odd), &term);
            }
            out
        })
        .collect();
    let _ = n;
    GradedMap { source: space.clone(), target: space.clone(), shift, cols }
}

/// d e^k = ½ Σ_{ij} f_{ij}^k e^i e^j, extended as a degree +1 derivation.
fn ce_differential_on(g: &LieAlgebraData, space: &GradedSpace) -> GradedMap {
    let n = g.dim();
    let on_gen: Vec<SparseVec> = (0..n)
        .map(|k| {
            let mut v = SparseVec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    v.add_term(BasisIndex::from_generators(&[i, j]).0 as usize, &g.f(i, j, k));
                }
            }
            v
        })
        .collect();
    derivation(space, n, &on_gen, 1)
}

pub fn ce_differential(g: &LieAlgebraData) -> Result<GradedMap> {
    Ok(CeComplex::new(g)?.d)
}

/// [e^i, e^j]_* = Σ B⁻¹_{ik} B⁻¹_{jl} f_{kl}^m B_{mn} e^n.
fn transported_bracket(g: &LieAlgebraData, t: &TransportPairing, i: usize, j: usize) -> SparseVec {
    let n = g.dim();
    let (b, binv) = (&t.matrix, &t.inverse);
    let mut out = SparseVec::new();
    for k in 0..n {
        if binv[(i, k)].is_zero() {
            continue;
        }
        for l in 0..n {
            if binv[(j, l)].is_zero() {
                continue;
            }
            let c = &binv[(i, k)] * &binv[(j, l)];
            for (m, f) in g.bracket(k, l).iter() {
                for nn in 0..n {
                    if !b[(m, nn)].is_zero() {
                        out.add_term(nn, &(&c * f * &b[(m, nn)]));
                    }
                }
            }
        }
    }
    out
}

/// ∂(e^{i₁}…e^{i_k}) = Σ_{a<b} (−1)^{a+b−1} [e^{i_a}, e^{i_b}]_* ∧ (remaining factors).
fn codifferential_on(g: &LieAlgebraData, space: &GradedSpace, t: &TransportPairing) -> GradedMap {
    let n = g.dim();
    let brackets: Vec<Vec<SparseVec>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    transported_bracket(g, t, i, j)
                        .reindex(|k| Some(1usize << k))
                })
                .collect()
        })
        .collect();
    let cols = (0..space.dim())
        .map(|m| {
            let gens = BasisIndex(m as u32).generators();
            let mut out = SparseVec::new();
            for a in 0..gens.len() {
                for b in (a + 1)..gens.len() {
                    let rest: Vec<usize> = gens
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| *p != a && *p != b)
                        .map(|(_, &x)| x)
                        .collect();
                    let rest = SparseVec::basis(BasisIndex::from_generators(&rest).0 as usize);
                    let term = wedge_coeffs(&brackets[gens[a]][gens[b]], &rest);
                    // one-based positions a+1, b+1: exponent a + b + 1
                    out.add_scaled(&scalar::sign((a + b + 1) % 2 == 1), &term);
                }
            }
            out
        })
        .collect();
    GradedMap { source: space.clone(), target: space.clone(), shift: -1, cols }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::builtin;
    use crate::scalar::int;

    fn ce(name: &str) -> CeComplex {
        CeComplex::new(&builtin(name).unwrap()).unwrap()
    }

    fn mono(gens: &[usize]) -> SparseVec {
        SparseVec::basis(BasisIndex::from_generators(gens).0 as usize)
    }

    #[test]
    fn su2_differential() {
        let c = ce("su2");
        assert_eq!(c.d.apply(&mono(&[2])), mono(&[0, 1]));
        assert!(c.d.apply(&mono(&[0, 1])).is_zero());
        assert!(c.d.compose(&c.d).is_zero());
        assert!(ce("abelian(3)").d.is_zero());
    }

    #[test]
    fn su2_degree_one_rank() {
        let c = ce("su2");
        let blocks = graded::solve_kernel_image(&c.d);
        assert_eq!(blocks[1].rank, 3);
        for b in &blocks {
            assert_eq!(b.rank + b.kernel.len(), c.space.dims(b.degree, b.degree)[0]);
        }
    }

    #[test]
    fn su2_codifferential() {
        let c = ce("su2");
        assert_eq!(c.codiff.apply(&mono(&[0, 1])), mono(&[2]));
        assert!(c.codiff.apply(&mono(&[0])).is_zero());
        assert!(c.codiff.apply(&mono(&[0, 1, 2])).is_zero());
        assert!(c.codiff.compose(&c.codiff).is_zero());
    }

    #[test]
    fn integral_pairing_values() {
        let c = ce("su2");
        assert_eq!(c.integral_pairing(&mono(&[]), &mono(&[0, 1, 2])), int(1));
        assert!(c.integral_pairing(&mono(&[0]), &mono(&[0])).is_zero());
        assert_eq!(c.integral_pairing(&mono(&[0]), &mono(&[1, 2])), int(-1));
    }

    #[test]
    fn hodge_star_examples() {
        let c = ce("su2");
        assert_eq!(c.hodge_star(&mono(&[])), mono(&[0, 1, 2]));
        assert_eq!(c.hodge_star(&mono(&[0])), mono(&[1, 2]));
        for d in 1..=8usize {
            let g = builtin(&format!("abelian({d})")).unwrap();
            let c = CeComplex::new(&g).unwrap();
            for m in 0..c.size() {
                let k = BasisIndex(m as u32).degree();
                let v = SparseVec::basis(m);
                let twice = c.hodge_star(&c.hodge_star(&v));
                assert_eq!(twice, v.scaled(&scalar::sign(k * (d - k) % 2 == 1)));
                assert_eq!(
                    c.wedge(&v, &c.hodge_star(&v)),
                    SparseVec::basis(c.top().0 as usize)
                );
            }
        }
    }

    #[test]
    fn coadjoint_action() {
        let c = ce("su2");
        assert!(c.lie_derivative(0, &mono(&[])).is_zero());
        // e₁·e² = −f_{1j}² e^j = −f_{13}² e³ = e³
        assert_eq!(c.lie_derivative(0, &mono(&[1])), mono(&[2]));
        assert!(c.lie_derivative(0, &mono(&[0, 1, 2])).is_zero());
    }

    #[test]
    fn su2_invariants_and_cohomology() {
        let c = ce("su2");
        let inv = c.invariants();
        assert_eq!(inv.iter().map(|b| b.len()).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
        let coh = c.cohomology();
        assert_eq!(coh.dims, vec![1, 0, 0, 1]);
        assert!(coh.harmonic);
        let abelian = ce("abelian(2)");
        assert_eq!(abelian.cohomology().dims, vec![1, 2, 1]);
        assert_eq!(abelian.invariants().iter().map(|b| b.len()).sum::<usize>(), 4);
    }

    #[test]
    fn decompositions() {
        let c = ce("su2");
        let r = c.reductive_decomposition().unwrap();
        assert_eq!((r.invariants.len(), r.im_d.len(), r.im_codiff.len()), (2, 3, 3));
        let a = ce("abelian(3)");
        let r = a.reductive_decomposition().unwrap();
        assert_eq!((r.invariants.len(), r.im_d.len(), r.im_codiff.len()), (8, 0, 0));
    }

    #[test]
    fn pairing_and_integral_properties() {
        // ∫dα = 0 needs unimodularity, so affine2 is left out
        for name in ["su2", "abelian(2)"] {
            let c = ce(name);
            let top = c.top().0 as usize;
            for v in 0..c.size() {
                let bv = SparseVec::basis(v);
                assert!(c.d.apply(&bv).get(top).is_zero(), "∫dα ≠ 0 in {name}");
                for w in 0..c.size() {
                    let bw = SparseVec::basis(w);
                    // the sign uses the shifted degree |v| − 1 of Λ𝔰*[1]
                    let s = scalar::sign(BasisIndex(v as u32).degree() % 2 == 0);
                    let lhs = c.integral_pairing(&c.d.apply(&bv), &bw)
                        + s * c.integral_pairing(&bv, &c.d.apply(&bw));
                    assert!(lhs.is_zero(), "{name}: {v} {w}");
                }
            }
        }
    }

    #[test]
    fn laplacian_commutes() {
        let c = ce("su2");
        let lap = c.laplacian();
        assert_eq!(lap.compose(&c.d), c.d.compose(&lap));
        assert_eq!(lap.compose(&c.codiff), c.codiff.compose(&lap));
    }

    #[test]
    fn su2_codifferential_is_signed_star_d_star() {
        let t = ce("su2").codifferential_sign_table().unwrap();
        assert!(t.iter().any(|x| x.is_some()));
    }
}

#[cfg(test)]
mod su3_tests {
    use super::*;
    use crate::lie_algebra::builtin;

    #[test]
    fn su3_structure() {
        let c = CeComplex::new(&builtin("su3").unwrap()).unwrap();
        assert!(c.d.compose(&c.d).is_zero());
        assert!(c.codiff.compose(&c.codiff).is_zero());
        let coh = c.cohomology();
        assert_eq!(coh.dims, vec![1, 0, 0, 1, 0, 1, 0, 0, 1]);
        let r = c.reductive_decomposition().unwrap();
        assert_eq!((r.invariants.len(), r.im_d.len(), r.im_codiff.len()), (4, 126, 126));
        let t = c.codifferential_sign_table().unwrap();
        assert!(t.iter().flatten().all(|&s| s == 1));
        assert_eq!(c.transport.killing_multiple, Some(crate::scalar::frac(1, 12)));
    }
}
