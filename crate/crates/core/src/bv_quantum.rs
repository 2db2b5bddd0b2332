//! Polynomial BV calculus on the coordinate ring of Λ•su(2)* ⊗ 𝔤 [1].
//!
//! Coordinates, for α over a basis of 𝔤 and i ∈ {1,2,3}:
//! `u_α` (degree 1), `x^i_α` (0), `y^i_α` (−1), `v_α` (−2). Parity is degree
//! mod 2, so `u` and `y` are odd and `x` and `v` are even.
//!
//! Conventions:
//! * all partial derivatives act from the left;
//! * fields are `x, v` and antifields `y, u`; the antibracket is
//!   `{F,G} = Σ t_{αβ} [(F∂←_{φ_α})(∂→_{φ*_β} G) − (F∂←_{φ*_α})(∂→_{φ_β} G)]`;
//! * `Δ = t_{αβ} (Σ_i ∂_{x^i_α} ∂_{y^i_β} + ∂_{u_α} ∂_{v_β})`;
//! * `f^{αβγ} = t^{αα'} t^{ββ'} f_{α'β'}^γ` with `t^{αβ}` the inverse of `t_{αβ}`.
//!
//! With these choices `Δ(FG) = ΔF·G + (−1)^{|F|} F·ΔG + (−1)^{|F|} {F,G}`.
//!
//! The last term of the action is taken as `−½ f^{αβγ} u_α u_β v_γ`: with the
//! uniform-sign Δ above, the other sign leaves a `u u x y` residual in {S,S}.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_algebra::{is_invariant, is_unimodular, LieAlgebraData};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::poly::{Monomial, Poly, PolyRing};
use crate::scalar::{self, Scalar};

/// Sign in the BV relation: `Δ(FG) − ΔF·G − (−1)^{|F|}F·ΔG = BV_RELATION_SIGN · (−1)^{|F|}{F,G}`.
pub const BV_RELATION_SIGN: i64 = 1;

const EPS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// The coordinate ring together with the pairing `t_{αβ}` on 𝔤.
#[derive(Clone, Debug)]
pub struct BvSpace {
    pub ring: PolyRing,
    pub dim: usize,
    pub t: Matrix,
    pub t_inv: Matrix,
}

impl BvSpace {
    pub fn new(g: &LieAlgebraData, t: &Matrix) -> Result<Self> {
        if g.is_graded() {
            return Err(Error::InvalidAlgebra("the BV action is built for ungraded coefficient algebras".into()));
        }
        let n = g.dim();
        if t.rows != n || t.cols != n {
            return Err(Error::DimensionMismatch(format!("pairing is {}×{}, algebra has dimension {n}", t.rows, t.cols)));
        }
        if *t != t.transpose() {
            return Err(Error::DegeneratePairing("pairing is not symmetric".into()));
        }
        let t_inv = t.inverse().ok_or_else(|| Error::DegeneratePairing("pairing is degenerate".into()))?;
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for b in &g.basis {
            names.push(format!("u_{b}"));
            degrees.push(1);
        }
        for (family, deg) in [("x", 0), ("y", -1)] {
            for i in 1..=3 {
                for b in &g.basis {
                    names.push(format!("{family}{i}_{b}"));
                    degrees.push(deg);
                }
            }
        }
        for b in &g.basis {
            names.push(format!("v_{b}"));
            degrees.push(-2);
        }
        Ok(Self { ring: PolyRing::new(names, degrees), dim: n, t: t.clone(), t_inv })
    }

    pub fn u(&self, a: usize) -> u32 {
        a as u32
    }

    /// `i` is zero-based.
    pub fn x(&self, i: usize, a: usize) -> u32 {
        ((1 + i) * self.dim + a) as u32
    }

    pub fn y(&self, i: usize, a: usize) -> u32 {
        ((4 + i) * self.dim + a) as u32
    }

    pub fn v(&self, a: usize) -> u32 {
        (7 * self.dim + a) as u32
    }

    pub fn is_u(&self, var: u32) -> bool {
        (var as usize) < self.dim
    }

    fn t_entry(&self, a: usize, b: usize) -> &Scalar {
        &self.t.row(a)[b]
    }

    /// (field, antifield, weight) triples.
    fn pairs(&self) -> Vec<(u32, u32, Scalar)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in 0..self.dim {
                let w = self.t_entry(a, b).clone();
                if w.is_zero() {
                    continue;
                }
                for i in 0..3 {
                    out.push((self.x(i, a), self.y(i, b), w.clone()));
                }
                out.push((self.v(a), self.u(b), w));
            }
        }
        out
    }

    pub fn monomial(&self, vars: &[u32]) -> Poly {
        vars.iter().fold(Poly::constant(Scalar::one()), |acc, &v| self.ring.mul(&acc, &self.ring.var(v)))
    }

    /// `F ∂←/∂z`, from the left derivative by the sign `(−1)^{|z||R|}` on each result monomial R.
    pub fn right_derivative(&self, p: &Poly, z: u32) -> Poly {
        let left = self.ring.derivative(p, z);
        if !self.ring.is_odd(z) {
            return left;
        }
        let mut out = Poly::zero();
        for (m, c) in &left.terms {
            let c = if self.ring.monomial_odd(m) { -c.clone() } else { c.clone() };
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn antibracket(&self, f: &Poly, g: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (phi, star, w) in self.pairs() {
            let a = self.ring.mul(&self.right_derivative(f, phi), &self.ring.derivative(g, star));
            out.add_scaled(&w, &a);
            let b = self.ring.mul(&self.right_derivative(f, star), &self.ring.derivative(g, phi));
            out.add_scaled(&-w, &b);
        }
        out
    }

    pub fn bv_laplacian(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for a in 0..self.dim {
            for b in 0..self.dim {
                let w = self.t_entry(a, b);
                if w.is_zero() {
                    continue;
                }
                for i in 0..3 {
                    let inner = self.ring.derivative(f, self.y(i, b));
                    out.add_scaled(w, &self.ring.derivative(&inner, self.x(i, a)));
                }
                let inner = self.ring.derivative(f, self.v(b));
                out.add_scaled(w, &self.ring.derivative(&inner, self.u(a)));
            }
        }
        out
    }

    /// `t^{αβ} x^i_α x^i_β`.
    pub fn kinetic_term(&self) -> Poly {
        let mut out = Poly::zero();
        for a in 0..self.dim {
            for b in 0..self.dim {
                let w = &self.t_inv.row(a)[b];
                if w.is_zero() {
                    continue;
                }
                for i in 0..3 {
                    out.add_scaled(w, &self.monomial(&[self.x(i, a), self.x(i, b)]));
                }
            }
        }
        out
    }

    /// `f^{αβγ} = t^{αα'} t^{ββ'} f_{α'β'}^γ`.
    pub fn raised_structure_constants(&self, g: &LieAlgebraData) -> Vec<Vec<Vec<Scalar>>> {
        let n = self.dim;
        let mut out = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for a2 in 0..n {
            for b2 in 0..n {
                for (c, f) in g.bracket(a2, b2).iter() {
                    for a in 0..n {
                        let ta = &self.t_inv.row(a)[a2];
                        if ta.is_zero() {
                            continue;
                        }
                        for b in 0..n {
                            let tb = &self.t_inv.row(b)[b2];
                            if !tb.is_zero() {
                                out[a][b][c] += ta * tb * f;
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// `S = t^{αβ}x^i_αx^i_β + f^{αβγ}(⅙ ε_{ijk} x^i_α x^j_β x^k_γ + u_α x^i_β y^i_γ − ½ u_α u_β v_γ)`.
pub fn build_classical_action(space: &BvSpace, g: &LieAlgebraData) -> Poly {
    let n = space.dim;
    let f = space.raised_structure_constants(g);
    let sixth = scalar::frac(1, 6);
    let half = scalar::frac(1, 2);
    let mut s = space.kinetic_term();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let fabc = &f[a][b][c];
                if fabc.is_zero() {
                    continue;
                }
                for (i, j, k) in EPS {
                    // ε_{ijk} = +1 on cyclic and −1 on anticyclic orderings
                    s.add_scaled(&(fabc * &sixth), &space.monomial(&[space.x(i, a), space.x(j, b), space.x(k, c)]));
                    s.add_scaled(&-(fabc * &sixth), &space.monomial(&[space.x(j, a), space.x(i, b), space.x(k, c)]));
                }
                for i in 0..3 {
                    s.add_scaled(fabc, &space.monomial(&[space.u(a), space.x(i, b), space.y(i, c)]));
                }
                s.add_scaled(&-(fabc * &half), &space.monomial(&[space.u(a), space.u(b), space.v(c)]));
            }
        }
    }
    s
}

/// Outcome of the master-equation analysis.
#[derive(Clone, Debug, Serialize)]
pub struct QmeReport {
    pub algebra: String,
    pub pairing: String,
    pub pairing_invariant: bool,
    pub action_terms: usize,
    pub action_degree_zero: bool,
    pub cme_residual: String,
    pub cme_holds: bool,
    pub delta_s: String,
    pub delta_s_zero: bool,
    /// ΔS only contains monomials `u_α`.
    pub delta_s_u_linear: bool,
    pub unimodular: bool,
    pub trace_vector: Vec<String>,
    /// c with `ΔS = c Σ_α t^{αβ} tr(ad_β) u_α`, when ΔS is of that form.
    pub trace_constant: Option<String>,
    /// `ΔS = 0 ⇔ 𝔤 unimodular`.
    pub equivalence_holds: bool,
}

impl QmeReport {
    pub fn to_text(&self) -> String {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut s = format!(
            "coefficients {} with {} pairing (invariant: {})\naction: {} monomials, all of degree 0: {}\n",
            self.algebra,
            self.pairing,
            yes(self.pairing_invariant),
            self.action_terms,
            yes(self.action_degree_zero)
        );
        s += &format!("CME: {}\nΔS: {}\n", self.cme_residual, self.delta_s);
        s += &format!("unimodular: {} (trace vector [{}])\n", yes(self.unimodular), self.trace_vector.join(", "));
        if let Some(c) = &self.trace_constant {
            s += &format!("ΔS = {c} · Σ_α t^(αβ) tr(ad_β) u_α\n");
        }
        s += &format!("ΔS = 0 ⇔ unimodular: {}\n", yes(self.equivalence_holds));
        s
    }
}

fn render(space: &BvSpace, p: &Poly) -> String {
    if p.is_zero() {
        "0".into()
    } else {
        space.ring.display(p).to_string()
    }
}

pub fn qme_obstruction(g: &LieAlgebraData, t: &Matrix, pairing_name: &str) -> Result<QmeReport> {
    let space = BvSpace::new(g, t)?;
    let s = build_classical_action(&space, g);
    let cme = space.antibracket(&s, &s);
    let delta = space.bv_laplacian(&s);
    let (unimodular, trace) = is_unimodular(g);
    let n = space.dim;
    // predicted direction Σ_α t^{αβ} tr_β u_α
    let mut direction = Poly::zero();
    for a in 0..n {
        let c = (0..n).fold(Scalar::zero(), |acc, b| acc + &space.t_inv.row(a)[b] * &trace[b]);
        direction.add_term(vec![space.u(a)], c);
    }
    let trace_constant = if delta.is_zero() {
        Some("0".into())
    } else {
        direction
            .terms
            .iter()
            .next()
            .map(|(m, c)| delta.coefficient(m) / c)
            .filter(|c| delta == direction.scaled(c))
            .map(|c| scalar::format(&c))
    };
    let delta_s_u_linear = delta.terms.keys().all(|m| m.len() == 1 && space.is_u(m[0]));
    Ok(QmeReport {
        algebra: g.name.clone(),
        pairing: pairing_name.into(),
        pairing_invariant: is_invariant(g, t),
        action_terms: s.len(),
        action_degree_zero: s.terms.keys().all(|m| space.ring.monomial_degree(m) == 0),
        cme_residual: render(&space, &cme),
        cme_holds: cme.is_zero(),
        delta_s: render(&space, &delta),
        delta_s_zero: delta.is_zero(),
        delta_s_u_linear,
        unimodular,
        trace_vector: trace.iter().map(scalar::format).collect(),
        trace_constant,
        equivalence_holds: delta.is_zero() == unimodular,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CountertermReport {
    pub ansatz_size: usize,
    pub image_dim: usize,
    pub solvable: bool,
    /// The part of −ΔS outside the image of {·, kinetic term}.
    pub witness: Option<String>,
}

impl CountertermReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "counterterm ansatz: {} linear monomials, image of {{·, kinetic}} has dimension {}\n",
            self.ansatz_size, self.image_dim
        );
        s += if self.solvable { "counterterm: solvable\n" } else { "counterterm: none exists\n" };
        if let Some(w) = &self.witness {
            s += &format!("unreachable component: {w}\n");
        }
        s
    }
}

/// Solves `{S', t^{αβ}x x} = −ΔS` over linear S'.
pub fn no_counterterm_check(g: &LieAlgebraData, t: &Matrix) -> Result<CountertermReport> {
    let space = BvSpace::new(g, t)?;
    let s = build_classical_action(&space, g);
    let target = space.bv_laplacian(&s).scaled(&-Scalar::one());
    let kin = space.kinetic_term();
    let images: Vec<Poly> = (0..space.ring.len() as u32)
        .map(|z| space.antibracket(&space.ring.var(z), &kin))
        .collect();
    // coordinates: index monomials appearing anywhere
    let mut index: Vec<Monomial> = images.iter().chain([&target]).flat_map(|p| p.terms.keys().cloned()).collect();
    index.sort();
    index.dedup();
    let to_vec = |p: &Poly| {
        SparseVec::from_pairs(p.terms.iter().map(|(m, c)| (index.binary_search(m).unwrap(), c.clone())))
    };
    let vecs: Vec<SparseVec> = images.iter().map(to_vec).collect();
    let image = Subspace::spanned_by(vecs.iter());
    let rest = image.reduce(&to_vec(&target));
    let witness = (!rest.is_zero()).then(|| {
        let mut p = Poly::zero();
        for (i, c) in rest.iter() {
            p.add_term(index[i].clone(), c.clone());
        }
        render(&space, &p)
    });
    Ok(CountertermReport { ansatz_size: images.len(), image_dim: image.dim(), solvable: rest.is_zero(), witness })
}

/// The named pairings on 𝔤: `identity`, `killing`, or the algebra's own.
pub fn named_pairing(g: &LieAlgebraData, name: &str) -> Result<Matrix> {
    match name {
        "identity" => Ok(Matrix::identity(g.dim())),
        "killing" => {
            let k = crate::lie_algebra::killing_form(g);
            if k.degenerate {
                Err(Error::DegeneratePairing(format!("the Killing form of {} is degenerate", g.name)))
            } else {
                Ok(k.matrix)
            }
        }
        "default" => match &g.pairing {
            Some(p) => Ok(p.clone()),
            None => named_pairing(g, "killing"),
        },
        other => Err(Error::Parse(format!("unknown pairing '{other}' (identity, killing, default)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::builtin;
    use std::collections::HashMap;

    fn space(name: &str, pairing: &str) -> (LieAlgebraData, BvSpace) {
        let g = builtin(name).unwrap();
        let t = named_pairing(&g, pairing).unwrap();
        let s = BvSpace::new(&g, &t).unwrap();
        (g, s)
    }

    fn all_monomials(ring: &PolyRing, max: usize) -> Vec<Monomial> {
        let mut out = vec![vec![]];
        let mut layer: Vec<Monomial> = vec![vec![]];
        for _ in 0..max {
            let mut next = Vec::new();
            for m in &layer {
                let start = m.last().copied().unwrap_or(0);
                for v in start..ring.len() as u32 {
                    if m.last() == Some(&v) && ring.is_odd(v) {
                        continue;
                    }
                    let mut w = m.clone();
                    w.push(v);
                    next.push(w);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn mono(sp: &BvSpace, m: &[u32]) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m.to_vec(), Scalar::one());
        let _ = sp;
        p
    }

    #[test]
    fn laplacian_squares_to_zero() {
        let (_, sp) = space("abelian(1)", "identity");
        for m in all_monomials(&sp.ring, 4) {
            let p = mono(&sp, &m);
            assert!(sp.bv_laplacian(&sp.bv_laplacian(&p)).is_zero(), "{m:?}");
        }
        let (_, sp) = space("su2", "killing");
        for m in all_monomials(&sp.ring, 3) {
            assert!(sp.bv_laplacian(&sp.bv_laplacian(&mono(&sp, &m))).is_zero());
        }
    }

    #[test]
    fn bv_relation_and_jacobi() {
        let (_, sp) = space("affine2", "identity");
        let ms = all_monomials(&sp.ring, 2);
        let sample: Vec<&Monomial> = ms.iter().step_by(7).collect();
        for a in &sample {
            for b in &sample {
                let (f, g) = (mono(&sp, a), mono(&sp, b));
                let fg = sp.ring.mul(&f, &g);
                let f_odd = sp.ring.monomial_odd(a);
                let mut lhs = sp.bv_laplacian(&fg);
                lhs.add_scaled(&-Scalar::one(), &sp.ring.mul(&sp.bv_laplacian(&f), &g));
                lhs.add_scaled(&-scalar::sign(f_odd), &sp.ring.mul(&f, &sp.bv_laplacian(&g)));
                let rhs = sp.antibracket(&f, &g).scaled(&(scalar::int(BV_RELATION_SIGN) * scalar::sign(f_odd)));
                assert_eq!(lhs, rhs, "{a:?} {b:?}");
            }
        }
        // graded Jacobi on a sample of cubic monomials
        let cubic: Vec<Monomial> = all_monomials(&sp.ring, 3).into_iter().filter(|m| m.len() == 3).step_by(97).take(8).collect();
        for a in &cubic {
            for b in &cubic {
                for c in cubic.iter().take(3) {
                    let (f, g, h) = (mono(&sp, a), mono(&sp, b), mono(&sp, c));
                    let shifted = |m: &Monomial| !sp.ring.monomial_odd(m);
                    let lhs = sp.antibracket(&f, &sp.antibracket(&g, &h));
                    let mut rhs = sp.antibracket(&sp.antibracket(&f, &g), &h);
                    rhs.add_scaled(
                        &scalar::sign(shifted(a) && shifted(b)),
                        &sp.antibracket(&g, &sp.antibracket(&f, &h)),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn action_matches_term_by_term_expansion() {
        let (g, sp) = space("su2", "killing");
        let s = build_classical_action(&sp, &g);
        assert!(s.terms.keys().all(|m| sp.ring.monomial_degree(m) == 0));
        // independent count: expand into ordered index tuples, then canonicalize by sorting
        let f = sp.raised_structure_constants(&g);
        let mut support: HashMap<Vec<u32>, Scalar> = HashMap::new();
        let mut put = |mut vars: Vec<u32>, c: Scalar, odd_sign: bool| {
            // sort with a bubble pass tracking odd transpositions
            let mut sign = odd_sign;
            for i in 0..vars.len() {
                for j in 0..vars.len() - 1 - i {
                    if vars[j] > vars[j + 1] {
                        if sp.ring.is_odd(vars[j]) && sp.ring.is_odd(vars[j + 1]) {
                            sign = !sign;
                        }
                        vars.swap(j, j + 1);
                    }
                }
            }
            *support.entry(vars).or_insert_with(Scalar::zero) += scalar::sign(sign) * c;
        };
        for a in 0..3 {
            for b in 0..3 {
                for i in 0..3 {
                    put(vec![sp.x(i, a), sp.x(i, b)], sp.t_inv.row(a)[b].clone(), false);
                }
                for c in 0..3 {
                    for (i, j, k) in EPS {
                        put(vec![sp.x(i, a), sp.x(j, b), sp.x(k, c)], &f[a][b][c] / scalar::int(6), false);
                        put(vec![sp.x(j, a), sp.x(i, b), sp.x(k, c)], -&f[a][b][c] / scalar::int(6), false);
                    }
                    for i in 0..3 {
                        put(vec![sp.u(a), sp.x(i, b), sp.y(i, c)], f[a][b][c].clone(), false);
                    }
                    if a != b {
                        put(vec![sp.u(a), sp.u(b), sp.v(c)], -&f[a][b][c] / scalar::int(2), false);
                    }
                }
            }
        }
        support.retain(|_, c| !c.is_zero());
        assert_eq!(s.len(), support.len());
        for (m, c) in &support {
            assert_eq!(&s.coefficient(m), c);
        }
        let kinetic = s.terms.keys().filter(|m| m.len() == 2).count();
        assert_eq!(kinetic, 9);
    }

    #[test]
    fn su2_satisfies_both_master_equations() {
        let g = builtin("su2").unwrap();
        let r = qme_obstruction(&g, &named_pairing(&g, "killing").unwrap(), "killing").unwrap();
        assert!(r.cme_holds && r.delta_s_zero && r.unimodular && r.equivalence_holds, "{}", r.to_text());
        let c = no_counterterm_check(&g, &named_pairing(&g, "killing").unwrap()).unwrap();
        assert!(c.solvable);
    }

    #[test]
    fn corrupted_structure_constant_breaks_cme() {
        let mut g = builtin("su2").unwrap();
        let t = named_pairing(&g, "killing").unwrap();
        let mut v = SparseVec::basis(2);
        v.add_term(0, &Scalar::one());
        g.set_antisymmetric(0, 1, v);
        let r = qme_obstruction(&g, &t, "killing").unwrap();
        assert!(!r.cme_holds);
    }

    #[test]
    fn affine_obstruction() {
        let g = builtin("affine2").unwrap();
        let t = Matrix::identity(2);
        let r = qme_obstruction(&g, &t, "identity").unwrap();
        assert!(!r.delta_s_zero && r.delta_s_u_linear && !r.unimodular && r.equivalence_holds);
        assert!(r.trace_constant.is_some(), "{}", r.to_text());
        let c = no_counterterm_check(&g, &t).unwrap();
        assert!(!c.solvable);
        assert!(c.witness.unwrap().contains("u_"));
    }

    #[test]
    fn abelian_is_trivial() {
        let g = builtin("abelian(2)").unwrap();
        let r = qme_obstruction(&g, &Matrix::identity(2), "identity").unwrap();
        assert!(r.cme_holds && r.delta_s_zero && r.unimodular);
        assert_eq!(r.action_terms, 6);
    }
}
