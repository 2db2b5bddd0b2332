//! Tensoring the CE complex with a quadratic Lie algebra 𝔤: the dgla
//! E_𝔤 = Λ𝔰*[1] ⊗ 𝔤, its bracket, BV pairing and ghost degrees.

use serde::Serialize;

use crate::ce_complex::CeComplex;
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::lie_algebra::{killing_form, LieAlgebraData};
use crate::linalg::{Matrix, SparseVec};
use crate::multivector::{wedge_basis, BasisIndex};
use crate::scalar::{self, Scalar};
use crate::sdr::{Ambient, Pairing, SdrData};
use crate::sign::parity;

/// The pair (Λ𝔰*, 𝔤). Basis vector `mask * dim 𝔤 + α` is e^{mask} ⊗ t_α.
#[derive(Clone, Debug)]
pub struct Dgla {
    pub forms_dim: usize,
    pub coefficients: LieAlgebraData,
}

/// Sparse element of E_𝔤 tagged with its ambient dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DglaElement {
    pub forms_dim: usize,
    pub coeff_dim: usize,
    pub coeffs: SparseVec,
}

impl Dgla {
    pub fn new(forms_dim: usize, coefficients: &LieAlgebraData) -> Self {
        Self { forms_dim, coefficients: coefficients.clone() }
    }

    pub fn coeff_dim(&self) -> usize {
        self.coefficients.dim()
    }

    pub fn size(&self) -> usize {
        (1usize << self.forms_dim) * self.coeff_dim()
    }

    pub fn index(&self, form: BasisIndex, alpha: usize) -> usize {
        form.0 as usize * self.coeff_dim() + alpha
    }

    pub fn split(&self, i: usize) -> (BasisIndex, usize) {
        let n = self.coeff_dim();
        (BasisIndex((i / n) as u32), i % n)
    }

    /// Unshifted degree: form degree plus internal degree.
    pub fn degree(&self, i: usize) -> i32 {
        let (f, a) = self.split(i);
        f.degree() as i32 + self.coefficients.degrees[a]
    }

    /// gh = form degree − 1 + internal degree.
    pub fn ghost_degree(&self, i: usize) -> i32 {
        self.degree(i) - 1
    }

    pub fn space(&self) -> GradedSpace {
        GradedSpace::new((0..self.size()).map(|i| self.degree(i)).collect())
    }

    pub fn element(&self, coeffs: SparseVec) -> DglaElement {
        DglaElement { forms_dim: self.forms_dim, coeff_dim: self.coeff_dim(), coeffs }
    }

    /// [α⊗x, β⊗y] = (−1)^{|x||β|} (α∧β) ⊗ [x,y] on basis vectors.
    pub fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        let (a, x) = self.split(i);
        let (b, y) = self.split(j);
        let lie = self.coefficients.bracket(x, y);
        if lie.is_zero() {
            return SparseVec::new();
        }
        let Some((m, odd)) = wedge_basis(a, b) else {
            return SparseVec::new();
        };
        let odd = odd ^ (parity(self.coefficients.degrees[x]) && b.degree() % 2 == 1);
        let s = scalar::sign(odd);
        SparseVec::from_pairs(lie.iter().map(|(g, c)| (self.index(m, g), &s * c)))
    }

    pub fn bracket_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&(x * y), &self.bracket_basis(i, j));
            }
        }
        out
    }

    fn check(&self, a: &DglaElement) -> Result<()> {
        if a.forms_dim != self.forms_dim || a.coeff_dim != self.coeff_dim() {
            return Err(Error::AmbientMismatch(format!(
                "element of Λ(dim {})⊗𝔤(dim {}) used in Λ(dim {})⊗𝔤(dim {})",
                a.forms_dim,
                a.coeff_dim,
                self.forms_dim,
                self.coeff_dim()
            )));
        }
        Ok(())
    }

    pub fn dgla_bracket(&self, a: &DglaElement, b: &DglaElement) -> Result<DglaElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.element(self.bracket_vec(&a.coeffs, &b.coeffs)))
    }

    /// d ⊗ 1 on E_𝔤.
    pub fn differential(&self, ce: &CeComplex) -> GradedMap {
        tensor_map(&ce.d, self.coeff_dim(), &self.space(), &self.space())
    }

    /// Reads the JSON list of `[[generators...], α, "p/q"]` (one-based).
    pub fn element_from_json(&self, text: &str) -> Result<DglaElement> {
        let terms: Vec<(Vec<usize>, usize, String)> = serde_json::from_str(text)?;
        let mut v = SparseVec::new();
        for (gens, a, c) in terms {
            if gens.iter().any(|&g| g == 0 || g > self.forms_dim) || a == 0 || a > self.coeff_dim() {
                return Err(Error::Parse("index out of range in element".into()));
            }
            let zero_based: Vec<usize> = gens.iter().map(|g| g - 1).collect();
            let mut sorted = zero_based.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != zero_based.len() {
                continue;
            }
            let perm: Vec<usize> = sorted
                .iter()
                .map(|s| zero_based.iter().position(|z| z == s).expect("present"))
                .collect();
            let s = scalar::sign(crate::sign::permutation_odd(&perm));
            v.add_term(self.index(BasisIndex::from_generators(&sorted), a - 1), &(s * scalar::parse(&c)?));
        }
        Ok(self.element(v))
    }

    pub fn element_to_json(&self, a: &DglaElement) -> String {
        let terms: Vec<(Vec<usize>, usize, String)> = a
            .coeffs
            .iter()
            .map(|(i, c)| {
                let (f, al) = self.split(i);
                (f.generators().iter().map(|g| g + 1).collect(), al + 1, scalar::format(c))
            })
            .collect();
        serde_json::to_string(&terms).expect("serializable")
    }
}

/// `m ⊗ 1` for a map on forms, with the given source and target spaces.
fn tensor_map(m: &GradedMap, n: usize, source: &GradedSpace, target: &GradedSpace) -> GradedMap {
    let cols = (0..m.source.dim() * n)
        .map(|i| {
            let (f, a) = (i / n, i % n);
            m.cols[f].reindex(|r| Some(r * n + a))
        })
        .collect();
    GradedMap { source: source.clone(), target: target.clone(), shift: m.shift, cols }
}

/// The pairing used on 𝔤: its own if present, otherwise the Killing form
/// when that is non-degenerate.
pub fn coefficient_pairing(g: &LieAlgebraData) -> Option<Matrix> {
    g.pairing.clone().or_else(|| {
        let k = killing_form(g);
        (!k.degenerate).then_some(k.matrix)
    })
}

/// Degree of the BV pairing on E_𝔤 (shifted): (2 − dim 𝔰) + degree of t.
pub fn bv_pairing_degree(forms_dim: usize, g: &LieAlgebraData) -> Option<i32> {
    let t_degree = match &g.pairing {
        Some(_) => g.pairing_degree()?,
        None => 0,
    };
    Some(2 - forms_dim as i32 + t_degree)
}

/// ⟨α⊗x, β⊗y⟩ = (−1)^{|x||β|} ⟨α, β⟩_∫ t(x, y) as a [`Pairing`], after
/// checking that its degree is −1.
pub fn bv_pairing(ce: &CeComplex, g: &LieAlgebraData) -> Result<Pairing> {
    let t = coefficient_pairing(g)
        .ok_or_else(|| Error::DegeneratePairing(format!("{} carries no non-degenerate pairing", g.name)))?;
    let degree = bv_pairing_degree(ce.dim, g)
        .ok_or_else(|| Error::DegreeMismatch("pairing on 𝔤 is not homogeneous".into()))?;
    if degree != -1 {
        return Err(Error::DegreeMismatch(format!(
            "(2 − {}) + {} = {degree}, but the BV pairing must have degree −1",
            ce.dim,
            degree - (2 - ce.dim as i32)
        )));
    }
    let dgla = Dgla::new(ce.dim, g);
    let n = g.dim();
    let rows = (0..dgla.size())
        .map(|i| {
            let (a, x) = dgla.split(i);
            let c = a.complement(ce.dim);
            let form = ce.integral_pairing(&SparseVec::basis(a.0 as usize), &SparseVec::basis(c.0 as usize));
            let odd = parity(g.degrees[x]) && c.degree() % 2 == 1;
            SparseVec::from_pairs((0..n).map(|y| {
                (dgla.index(c, y), scalar::sign(odd) * &form * &t[(x, y)])
            }))
        })
        .collect();
    Ok(Pairing { rows, degree })
}

pub fn bv_pair(pairing: &Pairing, a: &DglaElement, b: &DglaElement) -> Scalar {
    pairing.pair(&a.coeffs, &b.coeffs)
}

/// `s ⊗ 𝔤`: every map acts as the original tensored with the identity.
/// The BV pairing is attached when 𝔤 carries a pairing of the right degree.
pub fn tensor_sdr(ce: &CeComplex, s: &SdrData, g: &LieAlgebraData) -> Result<SdrData> {
    let Ambient::Forms { dim } = s.ambient else {
        return Err(Error::AmbientMismatch("tensor_sdr expects a retract of Λ𝔰*".into()));
    };
    if dim != ce.dim {
        return Err(Error::AmbientMismatch("retract and complex differ".into()));
    }
    let n = g.dim();
    let dgla = Dgla::new(dim, g);
    let source = dgla.space();
    let reduced = GradedSpace::new(
        (0..s.reduced.dim() * n)
            .map(|i| s.reduced.degree(i / n) + g.degrees[i % n])
            .collect(),
    );
    let pairing = bv_pairing(ce, g).ok();
    Ok(SdrData {
        label: format!("{} ⊗ {}", s.label, g.name),
        ambient: Ambient::Tensor { forms_dim: dim, coefficients: g.clone() },
        d: tensor_map(&s.d, n, &source, &source),
        d_w: tensor_map(&s.d_w, n, &reduced, &reduced),
        p: tensor_map(&s.p, n, &source, &reduced),
        e: tensor_map(&s.e, n, &reduced, &source),
        k: tensor_map(&s.k, n, &source, &source),
        source,
        reduced,
        pairing,
        notes: s.notes.clone(),
    })
}

/// One row of the ghost-degree table.
#[derive(Clone, Debug, Serialize)]
pub struct GhostRow {
    pub forms: usize,
    pub internal: i32,
    pub ghost: i32,
}

/// Ghost degree of Λ^k ⊗ 𝔤_i for every form degree k and internal degree i of 𝔤.
pub fn ghost_degree_table(forms_dim: usize, g: &LieAlgebraData) -> Vec<GhostRow> {
    let mut internal: Vec<i32> = g.degrees.clone();
    internal.sort_unstable_by(|a, b| b.cmp(a));
    internal.dedup();
    let mut rows = Vec::new();
    for &i in &internal {
        for k in 0..=forms_dim {
            rows.push(GhostRow { forms: k, internal: i, ghost: ghost_degree(k, i) });
        }
    }
    rows
}

pub fn ghost_degree(form_degree: usize, internal: i32) -> i32 {
    form_degree as i32 - 1 + internal
}

/// Degrees of the reduced space W ⊗ 𝔤 in three conventions: the ghost degree,
/// and the Λ[2] degree (form − 2) that ignores the internal grading.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedDegreeRow {
    pub class: String,
    pub form_degree: i32,
    pub internal: i32,
    pub ghost: i32,
    pub form_shifted_by_two: i32,
}

pub fn reduced_degree_table(s: &SdrData, forms: &SdrData) -> Vec<ReducedDegreeRow> {
    let Ambient::Tensor { coefficients, .. } = &s.ambient else {
        return Vec::new();
    };
    let mut internal: Vec<i32> = coefficients.degrees.clone();
    internal.sort_unstable_by(|a, b| b.cmp(a));
    internal.dedup();
    let mut rows = Vec::new();
    for &i in &internal {
        for w in 0..forms.reduced.dim() {
            let k = forms.reduced.degree(w);
            rows.push(ReducedDegreeRow {
                class: forms.reduced_label(w),
                form_degree: k,
                internal: i,
                ghost: k - 1 + i,
                form_shifted_by_two: k - 2,
            });
        }
    }
    rows
}
