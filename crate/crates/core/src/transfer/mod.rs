//! Homotopy transfer along a deformation retract.
//!
//! Everything is computed in the shifted convention: an element of degree
//! `deg` has shifted degree `deg − 1`. The binary operation has shifted degree
//! +1 and the propagator `H = −k` has degree −1, so every composite `H∘b₂`
//! has degree 0 and tree evaluations carry no internal signs. Only input
//! permutations cost Koszul signs.
//!
//! * scalar complex: `b₂(a, b) = (−1)^{|a|} a∧b` gives a C∞ structure `m_n`;
//! * tensor complex: `ℓ₂(a, b) = (−1)^{|a|} [a, b]` gives an L∞ structure `ℓ_n`.
//!
//! Unshifted products are `m_n = (−1)^{Σ_i (n−i)|a_i|} m_n^{sh}` with unshifted degrees.

pub mod checks;
pub mod dot;
pub mod hpl;
pub mod tables;
pub mod trees;

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::coefficients::Dgla;
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::linalg::SparseVec;
use crate::multivector::{wedge_basis, BasisIndex};
use crate::scalar::{self, Scalar};
use crate::sdr::{verify_sdr, Ambient, SdrData};
use crate::sign::{koszul_odd, parity};

pub use tables::{build_tables, vanishing_report, Budget, Operations, VanishingReport};
pub use trees::{catalan, enumerate_trees, TransferTree, DEFAULT_ARITY_CAP};

/// Which algebraic structure the vertices carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Kind {
    /// Wedge product: planar trees, ordered inputs, C∞ products.
    Commutative,
    /// Lie bracket of the coefficient dgla: symmetrized trees, L∞ brackets.
    Lie,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Commutative => "C∞",
            Kind::Lie => "L∞",
        }
    }
}

/// A verified retract together with its binary operation.
pub struct TransferContext<'a> {
    pub sdr: &'a SdrData,
    pub kind: Kind,
    dgla: Option<Dgla>,
    pub cap: usize,
}

impl<'a> TransferContext<'a> {
    /// Fails with [`Error::UnverifiedSdr`] unless every retract identity holds.
    pub fn new(s: &'a SdrData) -> Result<Self> {
        let report = verify_sdr(s);
        if !report.all_pass() {
            let bad: Vec<String> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            return Err(Error::UnverifiedSdr(bad.join(", ")));
        }
        let (kind, dgla) = match &s.ambient {
            Ambient::Forms { .. } => (Kind::Commutative, None),
            Ambient::Tensor { forms_dim, coefficients } => (Kind::Lie, Some(Dgla::new(*forms_dim, coefficients))),
        };
        Ok(Self { sdr: s, kind, dgla, cap: DEFAULT_ARITY_CAP })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn reduced(&self) -> &GradedSpace {
        &self.sdr.reduced
    }

    pub fn reduced_dim(&self) -> usize {
        self.sdr.reduced.dim()
    }

    pub fn source_shifted_odd(&self, i: usize) -> bool {
        parity(self.sdr.source.degree(i) - 1)
    }

    pub fn reduced_shifted_odd(&self, w: usize) -> bool {
        parity(self.sdr.reduced.degree(w) - 1)
    }

    pub fn dgla(&self) -> Option<&Dgla> {
        self.dgla.as_ref()
    }

    /// The shifted binary operation on the source.
    pub fn product(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            let sign = scalar::sign(parity(self.sdr.source.degree(i)));
            for (j, y) in b.iter() {
                let c = &sign * x * y;
                match &self.dgla {
                    None => {
                        if let Some((m, odd)) = wedge_basis(BasisIndex(i as u32), BasisIndex(j as u32)) {
                            out.add_term(m.0 as usize, &(scalar::sign(odd) * &c));
                        }
                    }
                    Some(g) => out.add_scaled(&c, &g.bracket_basis(i, j)),
                }
            }
        }
        out
    }

    /// The propagator H = −k.
    pub fn homotopy(&self, v: &SparseVec) -> SparseVec {
        self.sdr.k.apply(v).neg()
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.sdr.p.apply(v)
    }

    pub fn embed(&self, w: &SparseVec) -> SparseVec {
        self.sdr.e.apply(w)
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.cap {
            return Err(Error::ArityOverCap { arity: n, cap: self.cap });
        }
        Ok(())
    }

    fn check_kind(&self, kind: Kind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::AmbientMismatch(format!(
                "{} operations requested on a retract carrying {} structure",
                kind.name(),
                self.kind.name()
            )));
        }
        Ok(())
    }

    /// Splits each input into homogeneous pieces and sums `f` over all choices.
    fn multilinear(&self, inputs: &[SparseVec], f: impl Fn(&[SparseVec], &[i32]) -> SparseVec) -> SparseVec {
        let pieces: Vec<Vec<(i32, SparseVec)>> = inputs.iter().map(|v| by_degree(&self.sdr.reduced, v)).collect();
        let mut out = SparseVec::new();
        for choice in pieces.iter().map(|p| p.iter()).multi_cartesian_product() {
            let degrees: Vec<i32> = choice.iter().map(|(d, _)| *d).collect();
            let vecs: Vec<SparseVec> = choice.iter().map(|(_, v)| v.clone()).collect();
            out.add(&f(&vecs, &degrees));
        }
        out
    }

    /// Shifted m_n by planar trees: φ on each interval is the sum over its
    /// binary splittings, with H on internal edges and p at the root.
    pub fn c_transfer_shifted(&self, inputs: &[SparseVec]) -> Result<SparseVec> {
        self.check_kind(Kind::Commutative)?;
        self.check_arity(inputs.len())?;
        Ok(self.planar(inputs))
    }

    fn planar(&self, inputs: &[SparseVec]) -> SparseVec {
        let n = inputs.len();
        if n == 1 {
            return self.sdr.d_w.apply(&inputs[0]);
        }
        // phi[i][len] for the interval starting at i
        let mut phi: Vec<Vec<SparseVec>> = vec![vec![SparseVec::new(); n + 1]; n];
        for (i, x) in inputs.iter().enumerate() {
            phi[i][1] = self.embed(x);
        }
        let mut root = SparseVec::new();
        for len in 2..=n {
            for i in 0..=(n - len) {
                let mut sum = SparseVec::new();
                for s in 1..len {
                    let (l, r) = (&phi[i][s], &phi[i + s][len - s]);
                    if !l.is_zero() && !r.is_zero() {
                        sum.add(&self.product(l, r));
                    }
                }
                if len == n {
                    root = self.project(&sum);
                } else {
                    phi[i][len] = self.homotopy(&sum);
                }
            }
        }
        root
    }

    /// Unshifted C∞ product m_n (m₁ = d_W).
    pub fn c_transfer(&self, inputs: &[SparseVec]) -> Result<SparseVec> {
        self.check_kind(Kind::Commutative)?;
        self.check_arity(inputs.len())?;
        Ok(self.multilinear(inputs, |v, degrees| {
            self.planar(v).scaled(&scalar::sign(unshifted_sign(degrees)))
        }))
    }

    /// Shifted ℓ_n: sum over trees with unlabelled vertices, each counted
    /// once, with Koszul signs for the input reordering. Equivalently the
    /// planar sum over all input permutations divided by 2^{n−1}.
    pub fn transferred_bracket(&self, inputs: &[SparseVec]) -> Result<SparseVec> {
        self.check_arity(inputs.len())?;
        Ok(self.multilinear(inputs, |v, degrees| {
            let odd: Vec<bool> = degrees.iter().map(|&d| parity(d - 1)).collect();
            self.symmetric(v, &odd)
        }))
    }

    /// Unshifted ℓ_n, related to the shifted one by the same sign as m_n.
    pub fn transferred_bracket_unshifted(&self, inputs: &[SparseVec]) -> Result<SparseVec> {
        self.check_arity(inputs.len())?;
        Ok(self.multilinear(inputs, |v, degrees| {
            let odd: Vec<bool> = degrees.iter().map(|&d| parity(d - 1)).collect();
            self.symmetric(v, &odd).scaled(&scalar::sign(unshifted_sign(degrees)))
        }))
    }

    fn symmetric(&self, inputs: &[SparseVec], odd: &[bool]) -> SparseVec {
        let n = inputs.len();
        if n == 1 {
            return self.sdr.d_w.apply(&inputs[0]);
        }
        let full = (1usize << n) - 1;
        let mut phi: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (i, x) in inputs.iter().enumerate() {
            phi.insert(1 << i, self.embed(x));
        }
        let mut masks: Vec<usize> = (1..=full).filter(|m: &usize| m.count_ones() >= 2).collect();
        masks.sort_by_key(|m| m.count_ones());
        let mut root = SparseVec::new();
        for mask in masks {
            let sum = split_sum(mask, odd, |sub| phi.get(&sub).filter(|v| !v.is_zero()), |a, b| self.product(a, b));
            if mask == full {
                root = self.project(&sum);
            } else {
                phi.insert(mask, self.homotopy(&sum));
            }
        }
        root
    }

    /// Shifted evaluation of one planar tree on ordered inputs.
    pub fn tree_eval(&self, tree: &TransferTree, inputs: &[SparseVec]) -> SparseVec {
        self.tree_eval_edges(tree, inputs).0
    }

    /// As [`Self::tree_eval`], also returning H∘(vertex value) for every
    /// non-root internal vertex in preorder.
    pub fn tree_eval_edges(&self, tree: &TransferTree, inputs: &[SparseVec]) -> (SparseVec, Vec<SparseVec>) {
        let mut edges = Vec::new();
        let value = match tree {
            TransferTree::Leaf(i) => return (self.embed(&inputs[*i]), edges),
            TransferTree::Node(l, r) => {
                let a = self.subtree(l, inputs, &mut edges);
                let b = self.subtree(r, inputs, &mut edges);
                self.project(&self.product(&a, &b))
            }
        };
        (value, edges)
    }

    fn subtree(&self, tree: &TransferTree, inputs: &[SparseVec], edges: &mut Vec<SparseVec>) -> SparseVec {
        match tree {
            TransferTree::Leaf(i) => self.embed(&inputs[*i]),
            TransferTree::Node(l, r) => {
                let slot = edges.len();
                edges.push(SparseVec::new());
                let a = self.subtree(l, inputs, edges);
                let b = self.subtree(r, inputs, edges);
                let v = self.homotopy(&self.product(&a, &b));
                edges[slot] = v.clone();
                v
            }
        }
    }

    /// Literal planar sum Σ_T eval_T of the shifted product; an oracle for
    /// [`Self::c_transfer_shifted`].
    pub fn literal_product(&self, inputs: &[SparseVec]) -> Result<SparseVec> {
        self.check_arity(inputs.len())?;
        let mut out = SparseVec::new();
        for t in enumerate_trees(inputs.len())? {
            out.add(&self.tree_eval(&t, inputs));
        }
        Ok(out)
    }

    /// Literal (1/2^{n−1}) Σ_T Σ_σ ε(σ) eval_T(x_σ) on basis inputs; an
    /// oracle for [`Self::transferred_bracket`].
    pub fn literal_bracket(&self, basis_inputs: &[usize]) -> Result<SparseVec> {
        let n = basis_inputs.len();
        self.check_arity(n)?;
        let odd: Vec<bool> = basis_inputs.iter().map(|&w| self.reduced_shifted_odd(w)).collect();
        let trees = enumerate_trees(n)?;
        let mut out = SparseVec::new();
        for perm in (0..n).permutations(n) {
            let sign = scalar::sign(koszul_odd(&odd, &perm));
            let inputs: Vec<SparseVec> = perm.iter().map(|&i| SparseVec::basis(basis_inputs[i])).collect();
            for t in &trees {
                out.add_scaled(&sign, &self.tree_eval(t, &inputs));
            }
        }
        Ok(out.scaled(&(Scalar::one() / scalar::int(1i64 << (n - 1)))))
    }

    /// Human-readable W element, through its image under e.
    pub fn label(&self, w: &SparseVec) -> String {
        self.sdr.source_label(&self.embed(w))
    }

    pub fn basis_label(&self, w: usize) -> String {
        self.sdr.reduced_label(w)
    }
}

/// Σ over splittings mask = I ⊔ J with the lowest bit in I and J ≠ ∅ of
/// ε(I, J)·op(φ_I, φ_J), where ε is the Koszul sign of listing I before J.
pub(crate) fn split_sum<'v>(
    mask: usize,
    odd: &[bool],
    phi: impl Fn(usize) -> Option<&'v SparseVec>,
    op: impl Fn(&SparseVec, &SparseVec) -> SparseVec,
) -> SparseVec {
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut sum = SparseVec::new();
    // enumerate subsets of `rest` joined with `low` as I, excluding I = mask
    let mut sub = rest;
    loop {
        let i_mask = sub | low;
        if i_mask != mask {
            let j_mask = mask ^ i_mask;
            if let (Some(a), Some(b)) = (phi(i_mask), phi(j_mask)) {
                let perm: Vec<usize> = bits(i_mask).chain(bits(j_mask)).collect();
                let sign = scalar::sign(koszul_odd(odd, &perm));
                sum.add_scaled(&sign, &op(a, b));
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    sum
}

pub(crate) fn bits(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |i| mask >> i & 1 == 1)
}

/// `true` when Σ_i (n−i)·deg(a_i) is odd (one-based i).
pub fn unshifted_sign(degrees: &[i32]) -> bool {
    let n = degrees.len();
    degrees.iter().enumerate().filter(|(t, &d)| (n - 1 - t) % 2 == 1 && parity(d)).count() % 2 == 1
}

/// Homogeneous components of `v`, by degree.
pub fn by_degree(space: &GradedSpace, v: &SparseVec) -> Vec<(i32, SparseVec)> {
    let mut parts: BTreeMap<i32, SparseVec> = BTreeMap::new();
    for (i, c) in v.iter() {
        parts.entry(space.degree(i)).or_default().add_term(i, c);
    }
    parts.into_iter().collect()
}

/// Largest |numerator| among the coefficients of `v`.
pub fn max_abs_numerator(v: &SparseVec) -> num_bigint::BigInt {
    v.iter().map(|(_, c)| scalar::abs_numerator(c)).max().unwrap_or_else(num_bigint::BigInt::zero)
}
