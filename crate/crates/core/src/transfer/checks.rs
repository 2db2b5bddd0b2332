//! Identities satisfied by transferred structures.
//!
//! Each check visits only the tuples on which some term of the identity can be
//! non-zero, read off from the sparse operation tables, so a pass is exact on
//! the whole space.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::One;
use serde::Serialize;

use super::tables::Operations;
use super::{enumerate_trees, Kind, TransferContext, TransferTree};
use crate::error::{Error, Result};
use crate::lie_algebra::LieAlgebraData;
use crate::linalg::SparseVec;
use crate::scalar::{self, Scalar};
use crate::sign::{koszul_odd, parity};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityArity {
    pub arity: usize,
    pub tuples_checked: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub arities: Vec<IdentityArity>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.arities.iter().all(|a| a.violations == 0)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.identity);
        for a in &self.arities {
            s += &format!("  arity {}: {} tuples, {} violations\n", a.arity, a.tuples_checked, a.violations);
            if let Some(w) = &a.witness {
                s += &format!("    witness {w}\n");
            }
        }
        s
    }
}

fn require_complete(ops: &Operations, n: usize) -> Result<()> {
    if ops.complete_through < n {
        return Err(Error::BudgetExceeded(format!(
            "operations are exhaustive only through arity {}, identity needs {n}",
            ops.complete_through
        )));
    }
    Ok(())
}

fn d_w_preimages(ops: &Operations, c: usize) -> Vec<usize> {
    (0..ops.d_w.len()).filter(|&x| !ops.d_w[x].get(c).eq(&scalar::zero())).collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Σ_{I ⊔ J} ε ℓ_j(ℓ_i(x_I), x_J) on a sorted tuple (shifted convention).
fn lie_identity_value(ops: &Operations, t: &[usize]) -> SparseVec {
    let n = t.len();
    let odd: Vec<bool> = t.iter().map(|&w| ops.shifted_odd(w)).collect();
    let mut total = SparseVec::new();
    for i_mask in 1usize..(1 << n) {
        let i_pos: Vec<usize> = (0..n).filter(|p| i_mask >> p & 1 == 1).collect();
        let j_pos: Vec<usize> = (0..n).filter(|p| i_mask >> p & 1 == 0).collect();
        let inner = ops.eval_basis(&i_pos.iter().map(|&p| t[p]).collect::<Vec<_>>());
        if inner.is_zero() {
            continue;
        }
        let perm: Vec<usize> = i_pos.iter().chain(&j_pos).copied().collect();
        let eps = scalar::sign(koszul_odd(&odd, &perm));
        for (b, c) in inner.iter() {
            let mut key = vec![b];
            key.extend(j_pos.iter().map(|&p| t[p]));
            total.add_scaled(&(&eps * c), &ops.eval_basis(&key));
        }
    }
    total
}

/// Σ_{r+s+u=n} (−1)^{|x_1|+…+|x_r|} m_{r+1+u}(x_1…x_r, m_s(…), …) on a word.
fn assoc_identity_value(ops: &Operations, t: &[usize]) -> SparseVec {
    let n = t.len();
    let mut total = SparseVec::new();
    for r in 0..n {
        let sign = scalar::sign(t[..r].iter().filter(|&&w| ops.shifted_odd(w)).count() % 2 == 1);
        for s in 1..=(n - r) {
            let inner = ops.eval_basis(&t[r..r + s]);
            for (b, c) in inner.iter() {
                let key: Vec<usize> = t[..r].iter().copied().chain([b]).chain(t[r + s..].iter().copied()).collect();
                total.add_scaled(&(&sign * c), &ops.eval_basis(&key));
            }
        }
    }
    total
}

/// Tuples on which some composite ℓ_j∘ℓ_i (or m_j∘m_i) can be non-zero.
fn identity_candidates(ops: &Operations, n: usize) -> BTreeSet<Vec<usize>> {
    let lie = ops.kind == Kind::Lie;
    let empty = Default::default();
    let table = |k: usize| ops.table(k).unwrap_or(&empty);
    let mut out = BTreeSet::new();
    let push = |out: &mut BTreeSet<Vec<usize>>, v: Vec<usize>| {
        out.insert(if lie { sorted(v) } else { v });
    };
    // inner and outer both of arity ≥ 2
    for i in 2..n {
        let j = n - i + 1;
        for (a, va) in table(i) {
            for b in table(j).keys() {
                for q in 0..b.len() {
                    if va.get(b[q]) == scalar::zero() {
                        continue;
                    }
                    let t: Vec<usize> = b[..q].iter().chain(a.iter()).chain(b[q + 1..].iter()).copied().collect();
                    push(&mut out, t);
                }
            }
        }
    }
    for b in table(n).keys() {
        // outer d_W
        push(&mut out, b.clone());
        // inner d_W feeding one slot
        for q in 0..b.len() {
            for x in d_w_preimages(ops, b[q]) {
                let mut t = b.clone();
                t[q] = x;
                push(&mut out, t);
            }
        }
    }
    out
}

fn run_identity(ops: &Operations, max_arity: usize, name: &str, value: impl Fn(&Operations, &[usize]) -> SparseVec) -> Result<IdentityReport> {
    require_complete(ops, max_arity)?;
    let mut arities = Vec::new();
    // arity one: d_W² = 0
    let mut bad = None;
    for x in 0..ops.d_w.len() {
        let dd = ops.eval_basis(&[x]).iter().fold(SparseVec::new(), |mut acc, (b, c)| {
            acc.add_scaled(c, &ops.d_w[b]);
            acc
        });
        if !dd.is_zero() && bad.is_none() {
            bad = Some(format!("d_W² ≠ 0 on basis vector {x}"));
        }
    }
    arities.push(IdentityArity { arity: 1, tuples_checked: ops.d_w.len(), violations: usize::from(bad.is_some()), witness: bad });
    for n in 2..=max_arity {
        let cands = identity_candidates(ops, n);
        let mut violations = 0;
        let mut witness = None;
        for t in &cands {
            let v = value(ops, t);
            if !v.is_zero() {
                violations += 1;
                witness.get_or_insert_with(|| format!("{t:?} -> {v:?}"));
            }
        }
        arities.push(IdentityArity { arity: n, tuples_checked: cands.len(), violations, witness });
    }
    Ok(IdentityReport { identity: name.into(), arities })
}

/// The generalized Jacobi identities of a shifted L∞ structure with ℓ₁ = d_W,
/// through total arity `max_arity`.
pub fn linf_identities(ops: &Operations, max_arity: usize) -> Result<IdentityReport> {
    if ops.kind != Kind::Lie {
        return Err(Error::AmbientMismatch("L∞ identities need bracket tables".into()));
    }
    run_identity(ops, max_arity, "Σ ε ℓ_j(ℓ_i(x_I), x_J) = 0 (shifted)", lie_identity_value)
}

/// The A∞ relations of a shifted A∞ structure with m₁ = d_W.
pub fn ainf_identities(ops: &Operations, max_arity: usize) -> Result<IdentityReport> {
    if ops.kind != Kind::Commutative {
        return Err(Error::AmbientMismatch("A∞ identities need product tables".into()));
    }
    run_identity(ops, max_arity, "Σ ± m_j(1^r ⊗ m_i ⊗ 1^u) = 0 (shifted)", assoc_identity_value)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShuffleCase {
    pub p: usize,
    pub q: usize,
    pub pairs_checked: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShuffleReport {
    pub arity: usize,
    pub convention: String,
    pub cases: Vec<ShuffleCase>,
}

impl ShuffleReport {
    pub fn holds(&self) -> bool {
        self.cases.iter().all(|c| c.violations == 0)
    }
}

/// Σ over (p,q)-shuffles σ of sgn(σ)·ε(σ)·m_n(x_σ) = 0 for the unshifted m_n,
/// with ε the Koszul sign for unshifted degrees.
pub fn shuffle_check(ops: &Operations, n: usize) -> Result<ShuffleReport> {
    if ops.kind != Kind::Commutative {
        return Err(Error::AmbientMismatch("shuffle identities apply to products".into()));
    }
    require_complete(ops, n)?;
    let empty = Default::default();
    let table = ops.table(n).unwrap_or(&empty);
    let mut cases = Vec::new();
    for p in 1..n {
        let q = n - p;
        // (a, b) pairs one of whose shuffles is a stored word
        let mut pairs: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
        for word in table.keys() {
            for pos in (0..n).combinations(p) {
                let a: Vec<usize> = pos.iter().map(|&i| word[i]).collect();
                let b: Vec<usize> = (0..n).filter(|i| !pos.contains(i)).map(|i| word[i]).collect();
                pairs.insert((a, b));
            }
        }
        let mut violations = 0;
        let mut witness = None;
        for (a, b) in &pairs {
            let joined: Vec<usize> = a.iter().chain(b).copied().collect();
            let odd: Vec<bool> = joined.iter().map(|&w| parity(ops.reduced.degree(w))).collect();
            let mut total = SparseVec::new();
            for pos in (0..n).combinations(p) {
                // perm[t] = index in `joined` of the element placed at t
                let mut perm = Vec::with_capacity(n);
                let (mut ia, mut ib) = (0, p);
                for t in 0..n {
                    if pos.contains(&t) {
                        perm.push(ia);
                        ia += 1;
                    } else {
                        perm.push(ib);
                        ib += 1;
                    }
                }
                let word: Vec<usize> = perm.iter().map(|&i| joined[i]).collect();
                let sign = crate::sign::permutation_odd(&perm) ^ koszul_odd(&odd, &perm);
                total.add_scaled(&scalar::sign(sign), &ops.eval_unshifted(&word));
            }
            if !total.is_zero() {
                violations += 1;
                witness.get_or_insert_with(|| format!("{a:?} ⧢ {b:?} -> {total:?}"));
            }
        }
        cases.push(ShuffleCase { p, q, pairs_checked: pairs.len(), violations, witness });
    }
    Ok(ShuffleReport {
        arity: n,
        convention: "unshifted m_n, sign sgn(σ)·(Koszul sign for unshifted degrees)".into(),
        cases,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub arity: usize,
    pub tuples_checked: usize,
    pub mismatches: usize,
    pub witness: Option<String>,
}

impl ConsistencyReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }
}

fn lie_tree(g: &LieAlgebraData, tree: &TransferTree, xs: &[usize]) -> SparseVec {
    match tree {
        TransferTree::Leaf(i) => SparseVec::basis(xs[*i]),
        TransferTree::Node(l, r) => {
            let (a, b) = (lie_tree(g, l, xs), lie_tree(g, r, xs));
            let mut out = SparseVec::new();
            for (i, x) in a.iter() {
                for (j, y) in b.iter() {
                    out.add_scaled(&(x * y), &g.bracket(i, j));
                }
            }
            out
        }
    }
}

/// Compares the brackets transferred along `s ⊗ 𝔤` with the scalar product
/// structure of `s` tensored with the Lie bracket of 𝔤.
///
/// Arity 2: ℓ₂(a⊗x, b⊗y) = m₂(a, b)⊗[x, y] (unshifted). Arity n ≥ 3:
/// ℓ_n = 2^{1−n} Σ_T Σ_σ ε(σ) m_T(a_σ) ⊗ λ_T(x_σ), where m_T is the scalar
/// tree value and λ_T the nested bracket along T (shifted).
pub fn c_vs_l_consistency(scalar_ctx: &TransferContext, tensor_ctx: &TransferContext, arity: usize) -> Result<ConsistencyReport> {
    let g = tensor_ctx
        .dgla()
        .map(|d| d.coefficients.clone())
        .ok_or_else(|| Error::AmbientMismatch("second retract must carry coefficients".into()))?;
    if scalar_ctx.kind != Kind::Commutative {
        return Err(Error::AmbientMismatch("first retract must be scalar".into()));
    }
    if g.is_graded() {
        return Err(Error::AmbientMismatch("coefficient algebra must be concentrated in degree 0".into()));
    }
    let n_g = g.dim();
    if tensor_ctx.reduced_dim() != scalar_ctx.reduced_dim() * n_g {
        return Err(Error::AmbientMismatch("retracts do not match".into()));
    }
    let split = |w: usize| (w / n_g, w % n_g);
    let tensor = |scalar_part: &SparseVec, lie: &SparseVec| {
        let mut out = SparseVec::new();
        for (a, x) in scalar_part.iter() {
            for (b, y) in lie.iter() {
                out.add_term(a * n_g + b, &(x * y));
            }
        }
        out
    };
    let trees = enumerate_trees(arity)?;
    let scale = Scalar::one() / scalar::int(1i64 << (arity - 1));
    let mut checked = 0;
    let mut mismatches = 0;
    let mut witness = None;
    for tuple in (0..tensor_ctx.reduced_dim()).combinations_with_replacement(arity) {
        checked += 1;
        let inputs: Vec<SparseVec> = tuple.iter().map(|&w| SparseVec::basis(w)).collect();
        let (direct, predicted) = if arity == 2 {
            let (a, x) = split(tuple[0]);
            let (b, y) = split(tuple[1]);
            let m2 = scalar_ctx.c_transfer(&[SparseVec::basis(a), SparseVec::basis(b)])?;
            (tensor_ctx.transferred_bracket_unshifted(&inputs)?, tensor(&m2, &g.bracket(x, y)))
        } else {
            let odd: Vec<bool> = tuple.iter().map(|&w| tensor_ctx.reduced_shifted_odd(w)).collect();
            let mut sum = SparseVec::new();
            for perm in (0..arity).permutations(arity) {
                let sign = scalar::sign(koszul_odd(&odd, &perm));
                let scalars: Vec<SparseVec> = perm.iter().map(|&i| SparseVec::basis(split(tuple[i]).0)).collect();
                let xs: Vec<usize> = perm.iter().map(|&i| split(tuple[i]).1).collect();
                for t in &trees {
                    let lie = lie_tree(&g, t, &xs);
                    if lie.is_zero() {
                        continue;
                    }
                    let m = scalar_ctx.tree_eval(t, &scalars);
                    sum.add_scaled(&sign, &tensor(&m, &lie));
                }
            }
            (tensor_ctx.transferred_bracket(&inputs)?, sum.scaled(&scale))
        };
        if direct != predicted {
            mismatches += 1;
            witness.get_or_insert_with(|| {
                let labels: Vec<String> = tuple.iter().map(|&w| tensor_ctx.basis_label(w)).collect();
                format!("({}) direct {direct:?}, tree-wise {predicted:?}", labels.join(", "))
            });
        }
    }
    Ok(ConsistencyReport { arity, tuples_checked: checked, mismatches, witness })
}
