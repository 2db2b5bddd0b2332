//! Finite-dimensional, optionally graded Lie algebras given by structure constants.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::scalar::{self, int, Scalar};
use crate::sign::parity;

/// Structure constants `f_{ij}^k` (zero-based here, one-based in JSON), with
/// optional internal degrees and an optional symmetric pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub name: String,
    pub basis: Vec<String>,
    pub degrees: Vec<i32>,
    /// `brackets[i][j]` is `[b_i, b_j]` as a sparse vector over `k`.
    brackets: Vec<Vec<SparseVec>>,
    pub pairing: Option<Matrix>,
}

impl LieAlgebraData {
    /// Algebra with all brackets zero.
    pub fn abelian_named(name: &str, basis: Vec<String>, degrees: Vec<i32>) -> Self {
        let n = basis.len();
        Self {
            name: name.into(),
            basis,
            degrees,
            brackets: vec![vec![SparseVec::new(); n]; n],
            pairing: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.iter().any(|&d| d != 0)
    }

    pub fn odd(&self, i: usize) -> bool {
        parity(self.degrees[i])
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i][j]
    }

    pub fn f(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.brackets[i][j].get(k)
    }

    /// Sets `[b_i, b_j]` only.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: SparseVec) {
        self.brackets[i][j] = value;
    }

    /// Sets `[b_i, b_j]` and the graded-antisymmetric partner `[b_j, b_i]`.
    pub fn set_antisymmetric(&mut self, i: usize, j: usize, value: SparseVec) {
        let s = scalar::sign(!(self.odd(i) && self.odd(j)));
        self.brackets[j][i] = value.scaled(&s);
        self.brackets[i][j] = value;
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&(x * y), &self.brackets[i][j]);
            }
        }
        out
    }

    /// Degree of the pairing: `-(deg i + deg j)` on non-zero entries, if consistent.
    pub fn pairing_degree(&self) -> Option<i32> {
        let t = self.pairing.as_ref()?;
        let mut deg = None;
        for i in 0..t.rows {
            for j in 0..t.cols {
                if !t[(i, j)].is_zero() {
                    let d = -(self.degrees[i] + self.degrees[j]);
                    if deg.is_some_and(|e| e != d) {
                        return None;
                    }
                    deg = Some(d);
                }
            }
        }
        deg
    }

    /// `t(x, y)` on basis vectors; zero without a pairing.
    pub fn pair(&self, i: usize, j: usize) -> Scalar {
        self.pairing.as_ref().map_or_else(Scalar::zero, |t| t[(i, j)].clone())
    }
}

/// One violated axiom instance. Indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Antisymmetry { i: usize, j: usize },
    DegreeMismatch { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, k: usize, residual: Vec<(usize, String)> },
    PairingShape,
    PairingAsymmetric { i: usize, j: usize },
    PairingDegenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// `None` without a pairing.
    pub pairing_invariant: Option<bool>,
    pub unimodular: bool,
    pub trace_vector: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_lie(g: &LieAlgebraData) -> ValidationReport {
    let n = g.dim();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let s = scalar::sign(!(g.odd(i) && g.odd(j)));
            if *g.bracket(i, j) != g.bracket(j, i).scaled(&s) && i <= j {
                violations.push(Violation::Antisymmetry { i, j });
            }
            for k in g.bracket(i, j).indices() {
                if g.degrees[k] != g.degrees[i] + g.degrees[j] {
                    violations.push(Violation::DegreeMismatch { i, j, k });
                }
            }
        }
    }
    // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = SparseVec::basis(i);
                let y = SparseVec::basis(j);
                let z = SparseVec::basis(k);
                let lhs = g.bracket_vec(&x, &g.bracket_vec(&y, &z));
                let mut rhs = g.bracket_vec(&g.bracket_vec(&x, &y), &z);
                rhs.add_scaled(
                    &scalar::sign(g.odd(i) && g.odd(j)),
                    &g.bracket_vec(&y, &g.bracket_vec(&x, &z)),
                );
                let mut residual = lhs;
                residual.add_scaled(&-Scalar::one(), &rhs);
                if !residual.is_zero() {
                    violations.push(Violation::Jacobi {
                        i,
                        j,
                        k,
                        residual: residual.iter().map(|(a, c)| (a, scalar::format(c))).collect(),
                    });
                }
            }
        }
    }
    if let Some(t) = &g.pairing {
        if t.rows != n || t.cols != n {
            violations.push(Violation::PairingShape);
        } else {
            for i in 0..n {
                for j in (i + 1)..n {
                    if t[(i, j)] != t[(j, i)] {
                        violations.push(Violation::PairingAsymmetric { i, j });
                    }
                }
            }
            if t.determinant().is_zero() {
                violations.push(Violation::PairingDegenerate);
            }
        }
    }
    let pairing_invariant = g
        .pairing
        .as_ref()
        .filter(|t| t.rows == n && t.cols == n)
        .map(|_| is_pairing_invariant(g));
    let (unimodular, trace) = is_unimodular(g);
    ValidationReport {
        violations,
        pairing_invariant,
        unimodular,
        trace_vector: trace.iter().map(scalar::format).collect(),
    }
}

/// `t([x,y],z) + (-1)^{|x||y|} t(y,[x,z]) = 0` on all basis triples.
pub fn is_invariant(g: &LieAlgebraData, t: &Matrix) -> bool {
    let n = g.dim();
    let pair = |a: &SparseVec, b: &SparseVec| {
        let mut s = Scalar::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                s += x * y * &t[(i, j)];
            }
        }
        s
    };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let a = pair(g.bracket(x, y), &SparseVec::basis(z));
                let b = pair(&SparseVec::basis(y), g.bracket(x, z));
                if a + scalar::sign(g.odd(x) && g.odd(y)) * b != Scalar::zero() {
                    return false;
                }
            }
        }
    }
    true
}

fn is_pairing_invariant(g: &LieAlgebraData) -> bool {
    g.pairing.as_ref().is_some_and(|t| is_invariant(g, t))
}

/// Killing form and whether it is degenerate.
#[derive(Clone, Debug)]
pub struct KillingForm {
    pub matrix: Matrix,
    pub degenerate: bool,
}

/// `t_{αβ} = Σ_{k,l} f_{αk}^l f_{βl}^k`.
pub fn killing_form(g: &LieAlgebraData) -> KillingForm {
    let n = g.dim();
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut s = Scalar::zero();
            for k in 0..n {
                for (l, x) in g.bracket(a, k).iter() {
                    let y = g.f(b, l, k);
                    if !y.is_zero() {
                        s += x * y;
                    }
                }
            }
            m[(a, b)] = s;
        }
    }
    let degenerate = m.determinant().is_zero();
    KillingForm { matrix: m, degenerate }
}

/// Trace vector `Σ_β f_{αβ}^β` and whether it vanishes.
pub fn is_unimodular(g: &LieAlgebraData) -> (bool, Vec<Scalar>) {
    let n = g.dim();
    let trace: Vec<Scalar> = (0..n)
        .map(|a| (0..n).fold(Scalar::zero(), |s, b| s + g.f(a, b, b)))
        .collect();
    (trace.iter().all(|t| t.is_zero()), trace)
}

/// The built-in algebras: `su2`, `su3`, `abelian(n)`, `affine2`, and
/// `double(<name>,<shift>)` for [`graded_double`].
pub fn builtin(name: &str) -> Result<LieAlgebraData> {
    let name = name.trim();
    match name {
        "su2" => Ok(su2()),
        "su3" => Ok(su3()),
        "affine2" => Ok(affine2()),
        _ => {
            if let Some(n) = name.strip_prefix("abelian(").and_then(|r| r.strip_suffix(')')) {
                let n: usize = n.trim().parse().map_err(|_| Error::UnknownAlgebra(name.into()))?;
                let basis = (1..=n).map(|i| format!("a{i}")).collect();
                return Ok(LieAlgebraData::abelian_named(name, basis, vec![0; n]));
            }
            if let Some(args) = name.strip_prefix("double(").and_then(|r| r.strip_suffix(')')) {
                let (inner, shift) = args.rsplit_once(',').ok_or_else(|| Error::UnknownAlgebra(name.into()))?;
                let shift: i32 = shift.trim().parse().map_err(|_| Error::UnknownAlgebra(name.into()))?;
                return graded_double(&builtin(inner)?, shift);
            }
            Err(Error::UnknownAlgebra(name.into()))
        }
    }
}

fn su2() -> LieAlgebraData {
    let mut g = LieAlgebraData::abelian_named("su2", vec!["e1".into(), "e2".into(), "e3".into()], vec![0; 3]);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        g.set_antisymmetric(i, j, SparseVec::basis(k));
    }
    g
}

fn affine2() -> LieAlgebraData {
    let mut g = LieAlgebraData::abelian_named("affine2", vec!["x".into(), "y".into()], vec![0; 2]);
    g.set_antisymmetric(0, 1, SparseVec::basis(1));
    g
}

/// The Cartan–Weyl matrices of sl(3) as 3×3 integer matrices.
pub fn su3_matrices() -> Vec<Matrix> {
    let unit = |entries: &[(usize, usize, i64)]| {
        let mut m = Matrix::zeros(3, 3);
        for &(i, j, c) in entries {
            m[(i, j)] = int(c);
        }
        m
    };
    vec![
        unit(&[(0, 0, 1), (1, 1, -1)]),
        unit(&[(1, 1, 1), (2, 2, -1)]),
        unit(&[(0, 1, 1)]),
        unit(&[(1, 2, -1)]),
        unit(&[(0, 2, -1)]),
        unit(&[(1, 0, 1)]),
        unit(&[(2, 1, -1)]),
        unit(&[(2, 0, 1)]),
    ]
}

/// Structure constants of a matrix Lie algebra spanned by `mats`, from commutators.
pub fn from_matrices(name: &str, mats: &[Matrix]) -> Result<LieAlgebraData> {
    let n = mats.len();
    let flatten = |m: &Matrix| {
        SparseVec::from_pairs((0..m.rows * m.cols).map(|a| (a, m[(a / m.cols, a % m.cols)].clone())))
    };
    let basis: Vec<SparseVec> = mats.iter().map(flatten).collect();
    let names = (1..=n).map(|i| format!("E{i}")).collect();
    let mut g = LieAlgebraData::abelian_named(name, names, vec![0; n]);
    for i in 0..n {
        for j in 0..n {
            let c = mats[i].mul(&mats[j]).add_matrix(&mats[j].mul(&mats[i]).negated());
            let coords = crate::graded::coordinates(&basis, &flatten(&c))
                .ok_or_else(|| Error::InvalidAlgebra(format!("commutator [{i},{j}] leaves the span")))?;
            g.set_bracket(i, j, SparseVec::from_dense(&coords));
        }
    }
    Ok(g)
}

fn su3() -> LieAlgebraData {
    from_matrices("su3", &su3_matrices()).expect("Cartan–Weyl matrices close under commutators")
}

/// `g₀ ⊕ g₀*[shift]`: adjoint on `g₀`, coadjoint action on the dual block,
/// zero bracket among duals, canonical pairing of degree `shift`.
pub fn graded_double(g0: &LieAlgebraData, shift: i32) -> Result<LieAlgebraData> {
    if g0.is_graded() {
        return Err(Error::InvalidAlgebra("graded_double expects an ungraded algebra".into()));
    }
    if !validate_lie(g0).is_valid() {
        return Err(Error::InvalidAlgebra(format!("{} fails validation", g0.name)));
    }
    let n = g0.dim();
    let mut basis = g0.basis.clone();
    basis.extend(g0.basis.iter().map(|b| format!("{b}*")));
    let mut degrees = vec![0; n];
    degrees.extend(vec![-shift; n]);
    let mut g = LieAlgebraData::abelian_named(&format!("double({},{shift})", g0.name), basis, degrees);
    for a in 0..n {
        for b in 0..n {
            g.set_bracket(a, b, g0.bracket(a, b).clone());
            // [t_a, t^b] = -Σ_c f_{ac}^b t^c
            let coadj = SparseVec::from_pairs((0..n).map(|c| (n + c, -g0.f(a, c, b))));
            // the dual block has degree -shift against degree 0, so the swap sign is -1
            g.set_bracket(n + b, a, coadj.scaled(&int(-1)));
            g.set_bracket(a, n + b, coadj);
        }
    }
    let mut t = Matrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        t[(a, n + a)] = Scalar::one();
        t[(n + a, a)] = Scalar::one();
    }
    g.pairing = Some(t);
    Ok(g)
}

impl Matrix {
    pub fn add_matrix(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] += &other[(i, j)];
            }
        }
        out
    }

    pub fn negated(&self) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = -out[(i, j)].clone();
            }
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = &out[(i, j)] * c;
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |s, i| s + &self[(i, i)])
    }
}

/// JSON form of a Lie algebra. Indices are one-based; scalars are `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieAlgebraJson {
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub degrees: Vec<i32>,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, Vec<(usize, String)>)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairing: Vec<(usize, usize, String)>,
}

impl LieAlgebraData {
    /// Reads the JSON schema. A bracket given for `(i, j)` but not `(j, i)` is
    /// completed by graded antisymmetry; pairs given both ways are kept as is.
    pub fn from_json_str(name: &str, text: &str) -> Result<Self> {
        let j: LieAlgebraJson = serde_json::from_str(text)?;
        Self::from_json(name, &j)
    }

    pub fn from_json(name: &str, j: &LieAlgebraJson) -> Result<Self> {
        let n = j.dim;
        let basis = if j.basis.is_empty() {
            (1..=n).map(|i| format!("b{i}")).collect()
        } else {
            j.basis.clone()
        };
        let degrees = if j.degrees.is_empty() { vec![0; n] } else { j.degrees.clone() };
        if basis.len() != n || degrees.len() != n {
            return Err(Error::Parse(format!("basis/degrees must have length {n}")));
        }
        let mut g = LieAlgebraData::abelian_named(name, basis, degrees);
        let index = |i: usize| -> Result<usize> {
            if i == 0 || i > n {
                Err(Error::Parse(format!("index {i} outside 1..={n}")))
            } else {
                Ok(i - 1)
            }
        };
        let mut given = vec![vec![false; n]; n];
        for (i, jj, terms) in &j.brackets {
            let (a, b) = (index(*i)?, index(*jj)?);
            let mut v = SparseVec::new();
            for (k, c) in terms {
                v.add_term(index(*k)?, &scalar::parse(c)?);
            }
            g.set_bracket(a, b, v);
            given[a][b] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if given[a][b] && !given[b][a] {
                    let s = scalar::sign(!(g.odd(a) && g.odd(b)));
                    let v = g.bracket(a, b).scaled(&s);
                    g.set_bracket(b, a, v);
                }
            }
        }
        if !j.pairing.is_empty() {
            let mut t = Matrix::zeros(n, n);
            for (i, jj, c) in &j.pairing {
                t[(index(*i)?, index(*jj)?)] = scalar::parse(c)?;
            }
            g.pairing = Some(t);
        }
        Ok(g)
    }

    pub fn to_json(&self) -> LieAlgebraJson {
        let n = self.dim();
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a..n {
                let v = self.bracket(a, b);
                if !v.is_zero() {
                    brackets.push((a + 1, b + 1, v.iter().map(|(k, c)| (k + 1, scalar::format(c))).collect()));
                }
            }
        }
        let mut pairing = Vec::new();
        if let Some(t) = &self.pairing {
            for a in 0..n {
                for b in 0..n {
                    if !t[(a, b)].is_zero() {
                        pairing.push((a + 1, b + 1, scalar::format(&t[(a, b)])));
                    }
                }
            }
        }
        LieAlgebraJson {
            dim: n,
            basis: self.basis.clone(),
            degrees: self.degrees.clone(),
            brackets,
            pairing,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in ["su2", "su3", "affine2", "abelian(4)", "double(su2,5)", "double(abelian(1),5)"] {
            let g = builtin(name).unwrap();
            let r = validate_lie(&g);
            assert!(r.is_valid(), "{name}: {:?}", r.violations);
        }
        assert_eq!(builtin("su3").unwrap().dim(), 8);
        assert!(matches!(builtin("so5"), Err(Error::UnknownAlgebra(_))));
    }

    #[test]
    fn su2_brackets_are_cyclic() {
        let g = builtin("su2").unwrap();
        assert_eq!(*g.bracket(0, 1), SparseVec::basis(2));
        assert_eq!(*g.bracket(1, 2), SparseVec::basis(0));
        assert_eq!(*g.bracket(2, 0), SparseVec::basis(1));
    }

    #[test]
    fn flipped_sign_breaks_jacobi() {
        let mut g = builtin("su2").unwrap();
        g.set_bracket(0, 1, SparseVec::basis(2).scaled(&int(-1)));
        let r = validate_lie(&g);
        assert!(r.violations.contains(&Violation::Antisymmetry { i: 0, j: 1 }));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Jacobi { .. })));
    }

    #[test]
    fn killing_forms() {
        let k = killing_form(&builtin("su2").unwrap());
        assert_eq!(k.matrix, Matrix::identity(3).scaled(&int(-2)));
        assert!(!k.degenerate);
        let k = killing_form(&builtin("abelian(3)").unwrap());
        assert!(k.matrix.is_zero() && k.degenerate);
        let k = killing_form(&builtin("affine2").unwrap());
        assert_eq!(k.matrix[(0, 0)], int(1));
        assert!(k.matrix[(0, 1)].is_zero() && k.matrix[(1, 1)].is_zero());
        assert!(k.degenerate);
    }

    #[test]
    fn killing_forms_are_invariant() {
        for name in ["su2", "su3"] {
            let g = builtin(name).unwrap();
            assert!(is_invariant(&g, &killing_form(&g).matrix), "{name}");
        }
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&builtin("su2").unwrap()).0);
        assert!(is_unimodular(&builtin("abelian(2)").unwrap()).0);
        let (u, tr) = is_unimodular(&builtin("affine2").unwrap());
        assert!(!u);
        assert_eq!(tr, vec![int(1), int(0)]);
    }

    #[test]
    fn graded_double_of_su2() {
        let g = graded_double(&builtin("su2").unwrap(), 5).unwrap();
        assert_eq!(g.dim(), 6);
        assert_eq!(g.pairing_degree(), Some(5));
        assert_eq!(validate_lie(&g).pairing_invariant, Some(true));
        let a = graded_double(&builtin("abelian(1)").unwrap(), 5).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.pairing_degree(), Some(5));
    }

    #[test]
    fn json_round_trip() {
        for name in ["su3", "double(su2,5)"] {
            let g = builtin(name).unwrap();
            let text = serde_json::to_string(&g.to_json()).unwrap();
            let back = LieAlgebraData::from_json_str(name, &text).unwrap();
            assert_eq!(back, g);
        }
    }
}
