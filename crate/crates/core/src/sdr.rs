//! Special deformation retracts (p, e, k) of the CE complex and of its
//! tensor products: construction, side conditions, cyclicity.

use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::ce_complex::CeComplex;
use crate::error::{Error, Result};
use crate::graded::{self, Decomposition, GradedMap, GradedSpace};
use crate::lie_algebra::LieAlgebraData;
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::multivector::{wedge_coeffs, BasisIndex, MultiVector};
use crate::scalar::{self, Scalar};

/// What the basis of the source complex means.
#[derive(Clone, Debug)]
pub enum Ambient {
    /// Λ•𝔰*, basis vector = monomial mask.
    Forms { dim: usize },
    /// Λ•𝔰* ⊗ 𝔤, basis vector `mask * dim 𝔤 + α`.
    Tensor { forms_dim: usize, coefficients: LieAlgebraData },
}

impl Ambient {
    pub fn label(&self, v: &SparseVec) -> String {
        match self {
            Ambient::Forms { dim } => MultiVector::from_coeffs(*dim, v.clone()).to_string(),
            Ambient::Tensor { forms_dim, coefficients } => {
                let n = coefficients.dim();
                let mut parts = Vec::new();
                for a in 0..n {
                    let form = SparseVec::from_pairs(
                        v.iter().filter(|(i, _)| i % n == a).map(|(i, c)| (i / n, c.clone())),
                    );
                    if !form.is_zero() {
                        let f = MultiVector::from_coeffs(*forms_dim, form);
                        parts.push(format!("({f})⊗{}", coefficients.basis[a]));
                    }
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }
}

/// Non-degenerate pairing on the source, stored by rows: ⟨a,b⟩ = Σ a_i P_ij b_j.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub rows: Vec<SparseVec>,
    /// Degree of the pairing on the unshifted complex.
    pub degree: i32,
}

impl Pairing {
    pub fn pair(&self, a: &SparseVec, b: &SparseVec) -> Scalar {
        let mut s = Scalar::zero();
        for (i, x) in a.iter() {
            s += x * self.rows[i].dot(b);
        }
        s
    }

    /// The covector ⟨a, −⟩.
    pub fn covector(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            out.add_scaled(x, &self.rows[i]);
        }
        out
    }
}

/// The quadruple (d, k, p, e) with its reduced space W.
#[derive(Clone, Debug)]
pub struct SdrData {
    pub label: String,
    pub ambient: Ambient,
    /// Unshifted degrees of the source basis.
    pub source: GradedSpace,
    pub d: GradedMap,
    /// Degrees of the W basis.
    pub reduced: GradedSpace,
    pub d_w: GradedMap,
    pub p: GradedMap,
    pub e: GradedMap,
    pub k: GradedMap,
    pub pairing: Option<Pairing>,
    /// Construction notes (input reductions, complement used, …).
    pub notes: Vec<String>,
}

impl SdrData {
    pub fn source_label(&self, v: &SparseVec) -> String {
        self.ambient.label(v)
    }

    /// Label of W basis vector `w`, via its image under e.
    pub fn reduced_label(&self, w: usize) -> String {
        self.ambient.label(self.e.col(w))
    }

    pub fn reduced_dims(&self) -> Vec<usize> {
        let lo = *self.reduced.degrees.iter().min().unwrap_or(&0);
        let hi = *self.reduced.degrees.iter().max().unwrap_or(&0);
        self.reduced.dims(lo.min(0), hi)
    }

    /// Serializes the maps as sparse (row, column, value) triples.
    pub fn to_json(&self) -> serde_json::Value {
        let triples = |m: &GradedMap| -> Vec<(usize, usize, String)> {
            let mut out = Vec::new();
            for (j, c) in m.cols.iter().enumerate() {
                for (i, x) in c.iter() {
                    out.push((i, j, scalar::format(x)));
                }
            }
            out
        };
        json!({
            "label": self.label,
            "source_degrees": self.source.degrees,
            "reduced_degrees": self.reduced.degrees,
            "reduced_basis": (0..self.reduced.dim()).map(|w| self.reduced_label(w)).collect::<Vec<_>>(),
            "d": triples(&self.d),
            "d_w": triples(&self.d_w),
            "p": triples(&self.p),
            "e": triples(&self.e),
            "k": triples(&self.k),
            "notes": self.notes,
        })
    }
}

/// The integral pairing of a CE complex as a [`Pairing`].
pub fn integral_pairing(ce: &CeComplex) -> Pairing {
    Pairing { rows: ce.pairing_rows(), degree: -(ce.dim as i32) }
}

fn inclusion(source: &GradedSpace, basis: &[SparseVec]) -> (GradedSpace, GradedMap) {
    let degrees = basis
        .iter()
        .map(|v| source.degree_of(v).expect("homogeneous basis vector"))
        .collect();
    let reduced = GradedSpace::new(degrees);
    let e = GradedMap::new(reduced.clone(), source.clone(), 0, basis.to_vec()).expect("degree-0 inclusion");
    (reduced, e)
}

/// Projection onto summand `which` of `dec`, written in the basis of that summand.
fn projection(source: &GradedSpace, reduced: &GradedSpace, dec: &Decomposition, which: usize) -> GradedMap {
    let cols = (0..source.dim())
        .map(|i| SparseVec::from_dense(&dec.split_coordinates(&SparseVec::basis(i))[which]))
        .collect();
    GradedMap::new(source.clone(), reduced.clone(), 0, cols).expect("degree-0 projection")
}

fn assemble(
    label: String,
    ce: &CeComplex,
    reduced: GradedSpace,
    p: GradedMap,
    e: GradedMap,
    k: GradedMap,
    notes: Vec<String>,
) -> SdrData {
    let d_w = p.compose(&ce.d).compose(&e);
    SdrData {
        label,
        ambient: Ambient::Forms { dim: ce.dim },
        source: ce.space.clone(),
        d: ce.d.clone(),
        reduced,
        d_w,
        p,
        e,
        k,
        pairing: Some(integral_pairing(ce)),
        notes,
    }
}

/// p = e = id, k = 0.
pub fn trivial_sdr(ce: &CeComplex) -> SdrData {
    let id = GradedMap::identity(ce.space.clone());
    let k = GradedMap::zero(ce.space.clone(), ce.space.clone(), -1);
    assemble(
        format!("trivial({})", ce.algebra.name),
        ce,
        ce.space.clone(),
        id.clone(),
        id,
        k,
        vec![],
    )
}

/// The retract with im k = I: W = (I ⊕ dI)^⊥ for the integral pairing,
/// k = (d|_I)⁻¹ on dI and 0 on I ⊕ W.
pub fn isotrope_sdr(ce: &CeComplex, isotrope: &[SparseVec]) -> Result<SdrData> {
    let mut notes = Vec::new();
    for v in isotrope {
        if ce.space.degree_of(v).is_none() {
            return Err(Error::Parse(format!("isotrope vector {} is not homogeneous", ce.mv(v))));
        }
    }
    let span = Subspace::spanned_by(isotrope);
    let basis: Vec<SparseVec> = span.basis().to_vec();
    if basis.len() < isotrope.len() {
        notes.push(format!(
            "isotrope input of {} vectors reduced to an echelon basis of {}",
            isotrope.len(),
            basis.len()
        ));
    }
    let d_basis: Vec<SparseVec> = basis.iter().map(|v| ce.d.apply(v)).collect();
    if Subspace::spanned_by(&d_basis).dim() < basis.len() {
        return Err(Error::NotInjective(
            "d restricted to I is not injective (I meets ker d)".into(),
        ));
    }
    let pairing = integral_pairing(ce);
    let mut gram = Matrix::zeros(basis.len(), basis.len());
    for (a, x) in basis.iter().enumerate() {
        for (b, y) in d_basis.iter().enumerate() {
            gram[(a, b)] = pairing.pair(x, y);
        }
    }
    if !basis.is_empty() && gram.determinant().is_zero() {
        return Err(Error::DegeneratePairing("⟨−, d−⟩ is degenerate on I".into()));
    }
    let isotropic = basis
        .iter()
        .all(|x| basis.iter().all(|y| pairing.pair(x, y).is_zero()));
    if !isotropic {
        notes.push("I is not isotropic; the retract is not expected to be cyclic".into());
    }
    notes.push("W is the symplectic complement of I ⊕ dI for the integral pairing".into());

    // W = {x : ⟨x, y⟩ = 0 for y in I ⊕ dI}, solved per degree
    let constraints: Vec<SparseVec> = basis
        .iter()
        .chain(&d_basis)
        .map(|y| {
            // the covector x ↦ ⟨x, y⟩
            let mut c = SparseVec::new();
            for i in 0..ce.size() {
                let v = pairing.rows[i].dot(y);
                c.add_term(i, &v);
            }
            c
        })
        .collect();
    let mut w_basis = Vec::new();
    for (_, cols) in ce.space.blocks() {
        let relevant: Vec<&SparseVec> = constraints
            .iter()
            .filter(|c| c.indices().any(|i| cols.contains(&i)))
            .collect();
        let mut m = Matrix::zeros(relevant.len(), cols.len());
        for (r, c) in relevant.iter().enumerate() {
            for (b, &i) in cols.iter().enumerate() {
                m[(r, b)] = c.get(i);
            }
        }
        for v in m.kernel() {
            w_basis.push(v.reindex(|a| Some(cols[a])));
        }
    }
    let dec = Decomposition::new(ce.size(), vec![basis.clone(), d_basis.clone(), w_basis.clone()])
        .map_err(|_| Error::NotDirect("I ⊕ dI ⊕ (I ⊕ dI)^⊥ is not the whole complex".into()))?;
    let complement: Vec<SparseVec> = basis.iter().chain(&w_basis).cloned().collect();
    let k = graded::restricted_inverse(&ce.d, &basis, &d_basis, &complement)?;
    let (reduced, e) = inclusion(&ce.space, &w_basis);
    let p = projection(&ce.space, &reduced, &dec, 2);
    let names: Vec<String> = basis.iter().map(|v| ce.mv(v).to_string()).collect();
    Ok(assemble(
        format!("isotrope({}; {})", ce.algebra.name, names.join(", ")),
        ce,
        reduced,
        p,
        e,
        k,
        notes,
    ))
}

/// The canonical retract onto invariants: k = k_D ∘ ∂ with k_D the inverse
/// of D = d∂ + ∂d on im d ⊕ im ∂, zero on invariants.
pub fn meinrenken_sdr(ce: &CeComplex) -> Result<SdrData> {
    let r = ce.reductive_decomposition()?;
    let lap = ce.laplacian();
    let moving: Vec<SparseVec> = r.im_d.iter().chain(&r.im_codiff).cloned().collect();
    let k_d = graded::restricted_inverse(&lap, &moving, &moving, &r.invariants)?;
    let k = k_d.compose(&ce.codiff);
    let (reduced, e) = inclusion(&ce.space, &r.invariants);
    let p = projection(&ce.space, &reduced, &r.decomposition, 0);
    let notes = vec![format!("transport pairing: {}", ce.transport.description)];
    Ok(assemble(format!("meinrenken({})", ce.algebra.name), ce, reduced, p, e, k, notes))
}

/// One identity check with an optional witness.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s += &format!("  [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.name);
            if let Some(w) = &c.witness {
                s += &format!("  (witness: {w})");
            }
            s += "\n";
        }
        s
    }
}

fn map_check(name: &str, lhs: &GradedMap, rhs: &GradedMap, label: impl Fn(usize) -> String) -> Check {
    let diff = lhs.first_difference(rhs);
    Check { name: name.into(), pass: diff.is_none(), witness: diff.map(label) }
}

/// The five SDR identities and the chain-map conditions, exactly on every basis vector.
pub fn verify_sdr(s: &SdrData) -> CheckReport {
    let src = |j: usize| s.source_label(&SparseVec::basis(j));
    let red = |j: usize| s.reduced_label(j);
    let id_w = GradedMap::identity(s.reduced.clone());
    let id = GradedMap::identity(s.source.clone());
    let homotopy = id.sub(&s.d.compose(&s.k)).sub(&s.k.compose(&s.d));
    let zero_ss = GradedMap::zero(s.source.clone(), s.source.clone(), -2);
    let checks = vec![
        map_check("p∘e = id_W", &s.p.compose(&s.e), &id_w, red),
        map_check("e∘p = 1 − dk − kd", &s.e.compose(&s.p), &homotopy, src),
        map_check(
            "p∘k = 0",
            &s.p.compose(&s.k),
            &GradedMap::zero(s.source.clone(), s.reduced.clone(), -1),
            src,
        ),
        map_check(
            "k∘e = 0",
            &s.k.compose(&s.e),
            &GradedMap::zero(s.reduced.clone(), s.source.clone(), -1),
            red,
        ),
        map_check("k∘k = 0", &s.k.compose(&s.k), &zero_ss, src),
        map_check("d∘e = e∘d_W", &s.d.compose(&s.e), &s.e.compose(&s.d_w), red),
        map_check("p∘d = d_W∘p", &s.p.compose(&s.d), &s.d_w.compose(&s.p), src),
    ];
    CheckReport { checks }
}

/// Result of the cyclicity checks.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicReport {
    pub convention: String,
    /// λ with k† = λk, when one exists.
    pub k_adjoint_sign: Option<i32>,
    /// λ with d† = λd, when one exists.
    pub d_adjoint_sign: Option<i32>,
    pub checks: Vec<Check>,
}

impl CyclicReport {
    pub fn is_cyclic(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Degree-`shift` operator adjoint sign: finds λ ∈ {±1} with
/// ⟨A a, b⟩ = (−1)^{|A||a|} λ ⟨a, A b⟩ for all basis a, b (|a| shifted).
fn adjoint_sign(s: &SdrData, pairing: &Pairing, a_map: &GradedMap) -> (Option<i32>, Option<usize>) {
    let rows_t = a_map.transpose_entries();
    let apply_t = |v: &SparseVec| {
        let mut out = SparseVec::new();
        for (i, x) in v.iter() {
            out.add_scaled(x, &rows_t[i]);
        }
        out
    };
    let odd_op = a_map.shift.rem_euclid(2) == 1;
    let mut candidates = vec![1i32, -1];
    let mut first_bad = None;
    for a in 0..s.source.dim() {
        let ea = SparseVec::basis(a);
        // ⟨A a, −⟩ and ⟨a, A −⟩ as covectors over b
        let left = pairing.covector(&a_map.apply(&ea));
        let right = apply_t(&pairing.covector(&ea));
        let shifted_odd = (s.source.degree(a) - 1).rem_euclid(2) == 1;
        let eps = scalar::sign(odd_op && shifted_odd);
        candidates.retain(|&l| left == right.scaled(&(eps.clone() * scalar::int(l as i64))));
        if candidates.is_empty() {
            first_bad = Some(a);
            break;
        }
    }
    (candidates.first().copied(), first_bad)
}

/// Cyclicity under the graded-adjoint convention ⟨A a, b⟩ = (−1)^{|A||a|}⟨a, A† b⟩
/// with shifted degrees: d† = ±d, k† = ±k, ⟨e w, x⟩ = ⟨e w, e p x⟩, and im k isotropic.
pub fn verify_cyclic(s: &SdrData, pairing: &Pairing) -> CyclicReport {
    let src = |j: usize| s.source_label(&SparseVec::basis(j));
    let (d_sign, d_bad) = adjoint_sign(s, pairing, &s.d);
    let (k_sign, k_bad) = adjoint_sign(s, pairing, &s.k);

    let mut ep_bad = None;
    'outer: for w in 0..s.reduced.dim() {
        let ew = s.e.col(w);
        let cov = pairing.covector(ew);
        for x in 0..s.source.dim() {
            let ex = SparseVec::basis(x);
            if cov.dot(&ex) != cov.dot(&s.e.apply(&s.p.apply(&ex))) {
                ep_bad = Some((w, x));
                break 'outer;
            }
        }
    }

    let mut iso_bad = None;
    let k_cols: Vec<SparseVec> = s.k.cols.clone();
    for a in 0..s.source.dim() {
        if k_cols[a].is_zero() {
            continue;
        }
        let cov = pairing.covector(&k_cols[a]);
        if let Some(b) = (0..s.source.dim()).find(|&b| !cov.dot(&k_cols[b]).is_zero()) {
            iso_bad = Some((a, b));
            break;
        }
    }

    let checks = vec![
        Check {
            name: "d is graded self-adjoint up to sign".into(),
            pass: d_sign.is_some(),
            witness: d_bad.map(src),
        },
        Check {
            name: "k is graded self-adjoint up to sign".into(),
            pass: k_sign.is_some(),
            witness: k_bad.map(src),
        },
        Check {
            name: "e is the adjoint of p".into(),
            pass: ep_bad.is_none(),
            witness: ep_bad.map(|(w, x)| format!("{} against {}", s.reduced_label(w), src(x))),
        },
        Check {
            name: "im k is isotropic".into(),
            pass: iso_bad.is_none(),
            witness: iso_bad.map(|(a, b)| format!("k({}) against k({})", src(a), src(b))),
        },
    ];
    CyclicReport {
        convention: "⟨A a, b⟩ = (−1)^{|A||a|} ⟨a, A† b⟩ with shifted degrees |a| = deg a − 1".into(),
        k_adjoint_sign: k_sign,
        d_adjoint_sign: d_sign,
        checks,
    }
}

/// Whether e(w₁)∧e(w₂) ∈ im e for all basis w₁, w₂; otherwise a violating pair.
pub fn image_closed_under_wedge(s: &SdrData) -> (bool, Option<(usize, usize)>) {
    if !matches!(s.ambient, Ambient::Forms { .. }) {
        return (false, None);
    }
    let image = Subspace::spanned_by(&s.e.cols);
    for a in 0..s.reduced.dim() {
        for b in 0..s.reduced.dim() {
            let prod = wedge_coeffs(s.e.col(a), s.e.col(b));
            if !image.contains(&prod) {
                return (false, Some((a, b)));
            }
        }
    }
    (true, None)
}

/// Parses an isotrope specification such as `"e1+e2, e3"` or `"2e1 - 1/2 e3"`
/// into degree-1 vectors of Λ𝔰*.
pub fn parse_isotrope(spec: &str, dim: usize) -> Result<Vec<SparseVec>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
        if part.is_empty() {
            continue;
        }
        let mut v = SparseVec::new();
        let mut rest = part.as_str();
        while !rest.is_empty() {
            let (neg, r) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            let epos = r.find('e').ok_or_else(|| Error::Parse(format!("missing generator in {part:?}")))?;
            let coeff = r[..epos].trim_end_matches('*');
            let mut c = if coeff.is_empty() { Scalar::from_integer(1.into()) } else { scalar::parse(coeff)? };
            if neg {
                c = -c;
            }
            let digits: String = r[epos + 1..].chars().take_while(|ch| ch.is_ascii_digit()).collect();
            let i: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator index in {part:?}")))?;
            if i == 0 || i > dim {
                return Err(Error::Parse(format!("generator e{i} outside 1..={dim}")));
            }
            v.add_term(BasisIndex::generator(i - 1).0 as usize, &c);
            rest = &r[epos + 1 + digits.len()..];
        }
        out.push(v);
    }
    Ok(out)
}
