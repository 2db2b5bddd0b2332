//! Exhaustive evaluation of transferred operations on basis tuples.
//!
//! Tree values φ(t) = H(Σ splits ± b₂(φ(t′), φ(t″))) are tabulated by tuple;
//! only non-zero entries are kept. A tuple can carry a non-zero value only if
//! it splits into two tuples that both do, so each arity only visits merges of
//! stored entries. This makes "zero on every basis tuple" an exact statement
//! without enumerating all tuples.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{catalan, max_abs_numerator, split_sum, unshifted_sign, Kind, TransferContext};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::linalg::SparseVec;
use crate::scalar;
use crate::sign::{koszul_odd, parity};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const BUDGET_ENV: &str = "HPT_BV_BUDGET";

/// Per-arity cap on tree-leaf evaluations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Budget {
    pub per_arity: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { per_arity: DEFAULT_BUDGET }
    }
}

impl Budget {
    /// The default, overridden by `HPT_BV_BUDGET` when it parses.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|per_arity| Self { per_arity })
            .unwrap_or_default()
    }
}

/// Transferred operations on W, shifted convention, stored sparsely.
/// Commutative kind: keyed by words. Lie kind: keyed by sorted tuples.
#[derive(Clone, Debug)]
pub struct Operations {
    pub kind: Kind,
    pub reduced: GradedSpace,
    /// Columns of d_W, which is the arity-one operation.
    pub d_w: Vec<SparseVec>,
    pub ops: Vec<BTreeMap<Vec<usize>, SparseVec>>,
    /// Every arity up to this one is exhaustive.
    pub complete_through: usize,
}

impl Operations {
    pub fn new(kind: Kind, reduced: GradedSpace, d_w: Vec<SparseVec>) -> Self {
        Self { kind, reduced, d_w, ops: vec![BTreeMap::new(), BTreeMap::new()], complete_through: 1 }
    }

    pub fn shifted_odd(&self, w: usize) -> bool {
        parity(self.reduced.degree(w) - 1)
    }

    pub fn table(&self, arity: usize) -> Option<&BTreeMap<Vec<usize>, SparseVec>> {
        self.ops.get(arity)
    }

    pub fn insert(&mut self, key: Vec<usize>, value: SparseVec) {
        let n = key.len();
        while self.ops.len() <= n {
            self.ops.push(BTreeMap::new());
        }
        if !value.is_zero() {
            self.ops[n].insert(key, value);
        }
    }

    /// Shifted operation on a basis tuple in any order.
    pub fn eval_basis(&self, key: &[usize]) -> SparseVec {
        if key.len() == 1 {
            return self.d_w[key[0]].clone();
        }
        let Some(table) = self.ops.get(key.len()) else { return SparseVec::new() };
        match self.kind {
            Kind::Commutative => table.get(key).cloned().unwrap_or_default(),
            Kind::Lie => {
                let mut perm: Vec<usize> = (0..key.len()).collect();
                perm.sort_by_key(|&i| key[i]);
                let sorted: Vec<usize> = perm.iter().map(|&i| key[i]).collect();
                let odd: Vec<bool> = key.iter().map(|&w| self.shifted_odd(w)).collect();
                match table.get(&sorted) {
                    Some(v) => v.scaled(&scalar::sign(koszul_odd(&odd, &perm))),
                    None => SparseVec::new(),
                }
            }
        }
    }

    /// Unshifted value m_n on a word (commutative kind).
    pub fn eval_unshifted(&self, key: &[usize]) -> SparseVec {
        let degrees: Vec<i32> = key.iter().map(|&w| self.reduced.degree(w)).collect();
        self.eval_basis(key).scaled(&scalar::sign(unshifted_sign(&degrees)))
    }

    pub fn nonzero_count(&self, arity: usize) -> usize {
        self.ops.get(arity).map_or(0, |t| t.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Zero,
    Nonzero,
    Truncated,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub inputs: Vec<usize>,
    pub input_labels: Vec<String>,
    pub output: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArityStats {
    pub arity: usize,
    /// Planar trees with this many leaves.
    pub trees: u64,
    pub candidates: usize,
    pub evaluations: u64,
    pub nonzero_tuples: usize,
    pub max_abs_numerator: String,
    pub witness: Option<Witness>,
    pub status: Status,
}

/// Tree values and operations up to some arity.
pub struct TransferTables {
    pub operations: Operations,
    pub stats: Vec<ArityStats>,
    pub truncated_at: Option<usize>,
}

fn candidates(kind: Kind, phi: &[BTreeMap<Vec<usize>, SparseVec>], len: usize, budget: u64) -> Option<BTreeSet<Vec<usize>>> {
    let mut out = BTreeSet::new();
    let mut work: u64 = 0;
    for l1 in 1..len {
        let (left, right) = (&phi[l1], &phi[len - l1]);
        if kind == Kind::Lie && l1 > len - l1 {
            // merges are symmetric
            continue;
        }
        for a in left.keys() {
            for b in right.keys() {
                work += len as u64;
                if work > budget {
                    return None;
                }
                let key = match kind {
                    Kind::Commutative => [a.as_slice(), b.as_slice()].concat(),
                    Kind::Lie => {
                        let mut k = [a.as_slice(), b.as_slice()].concat();
                        k.sort_unstable();
                        k
                    }
                };
                out.insert(key);
            }
        }
    }
    Some(out)
}

/// Tabulates φ and the operations for arities 2..=`max_arity`.
/// Stops at the first arity whose work exceeds the budget.
pub fn build_tables(ctx: &TransferContext, max_arity: usize, budget: Budget) -> Result<TransferTables> {
    if max_arity > ctx.cap {
        return Err(Error::ArityOverCap { arity: max_arity, cap: ctx.cap });
    }
    let w = ctx.reduced_dim();
    let mut operations = Operations::new(ctx.kind, ctx.reduced().clone(), ctx.sdr.d_w.cols.clone());
    let mut phi: Vec<BTreeMap<Vec<usize>, SparseVec>> = vec![BTreeMap::new(), BTreeMap::new()];
    for i in 0..w {
        phi[1].insert(vec![i], ctx.embed(&SparseVec::basis(i)));
    }
    let mut stats = Vec::new();
    let mut truncated_at = None;
    for len in 2..=max_arity {
        phi.push(BTreeMap::new());
        let trees = catalan(len - 1);
        let truncated = |stats: &mut Vec<ArityStats>| {
            stats.push(ArityStats {
                arity: len,
                trees,
                candidates: 0,
                evaluations: 0,
                nonzero_tuples: 0,
                max_abs_numerator: "?".into(),
                witness: None,
                status: Status::Truncated,
            })
        };
        let Some(cands) = candidates(ctx.kind, &phi, len, budget.per_arity) else {
            truncated(&mut stats);
            truncated_at = Some(len);
            break;
        };
        let evaluations = cands.len() as u64 * len as u64;
        if evaluations > budget.per_arity {
            truncated(&mut stats);
            truncated_at = Some(len);
            break;
        }
        let mut max_num = num_bigint::BigInt::from(0);
        let mut witness = None;
        let mut new_phi = BTreeMap::new();
        for t in &cands {
            let sum = match ctx.kind {
                Kind::Commutative => {
                    let mut sum = SparseVec::new();
                    for s in 1..len {
                        if let (Some(a), Some(b)) = (phi[s].get(&t[..s]), phi[len - s].get(&t[s..])) {
                            sum.add(&ctx.product(a, b));
                        }
                    }
                    sum
                }
                Kind::Lie => {
                    let odd: Vec<bool> = t.iter().map(|&x| ctx.reduced_shifted_odd(x)).collect();
                    let sub = |mask: usize| -> Vec<usize> { super::bits(mask).map(|i| t[i]).collect() };
                    split_sum(
                        (1 << len) - 1,
                        &odd,
                        |mask| {
                            let key = sub(mask);
                            phi[key.len()].get(&key)
                        },
                        |a, b| ctx.product(a, b),
                    )
                }
            };
            if sum.is_zero() {
                continue;
            }
            if len < max_arity {
                let h = ctx.homotopy(&sum);
                if !h.is_zero() {
                    new_phi.insert(t.clone(), h);
                }
            }
            let value = ctx.project(&sum);
            if !value.is_zero() {
                let m = max_abs_numerator(&value);
                if m > max_num {
                    max_num = m;
                }
                if witness.is_none() {
                    let shown = match ctx.kind {
                        Kind::Commutative => {
                            let degrees: Vec<i32> = t.iter().map(|&x| ctx.reduced().degree(x)).collect();
                            value.scaled(&scalar::sign(unshifted_sign(&degrees)))
                        }
                        Kind::Lie => value.clone(),
                    };
                    witness = Some(Witness {
                        inputs: t.clone(),
                        input_labels: t.iter().map(|&x| ctx.basis_label(x)).collect(),
                        output: ctx.label(&shown),
                    });
                }
                operations.insert(t.clone(), value);
            }
        }
        phi[len] = new_phi;
        let nonzero = operations.nonzero_count(len);
        stats.push(ArityStats {
            arity: len,
            trees,
            candidates: cands.len(),
            evaluations,
            nonzero_tuples: nonzero,
            max_abs_numerator: max_num.to_string(),
            witness,
            status: if nonzero == 0 { Status::Zero } else { Status::Nonzero },
        });
        operations.complete_through = len;
    }
    while operations.ops.len() <= max_arity {
        operations.ops.push(BTreeMap::new());
    }
    Ok(TransferTables { operations, stats, truncated_at })
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub retract: String,
    pub structure: &'static str,
    pub convention: String,
    pub budget_per_arity: u64,
    pub arities: Vec<ArityStats>,
    pub truncated: bool,
    /// Every requested arity is exactly zero.
    pub vanishing: bool,
}

/// Evaluates every basis tuple (multisets for brackets, words for products)
/// for arities `min..=max` and reports where the operations vanish.
pub fn vanishing_report(ctx: &TransferContext, min_arity: usize, max_arity: usize, budget: Budget) -> Result<VanishingReport> {
    if min_arity < 2 || min_arity > max_arity {
        return Err(Error::ArityOverCap { arity: min_arity, cap: max_arity.max(2) });
    }
    let tables = build_tables(ctx, max_arity, budget)?;
    let mut arities: Vec<ArityStats> = tables.stats.into_iter().filter(|s| s.arity >= min_arity).collect();
    // arities never reached because an earlier one ran out of budget
    for arity in min_arity..=max_arity {
        if !arities.iter().any(|s| s.arity == arity) {
            arities.push(ArityStats {
                arity,
                trees: catalan(arity - 1),
                candidates: 0,
                evaluations: 0,
                nonzero_tuples: 0,
                max_abs_numerator: "?".into(),
                witness: None,
                status: Status::Truncated,
            });
        }
    }
    let truncated = tables.truncated_at.is_some();
    let vanishing = !truncated && arities.iter().all(|s| s.status == Status::Zero);
    Ok(VanishingReport {
        retract: ctx.sdr.label.clone(),
        structure: ctx.kind.name(),
        convention: match ctx.kind {
            Kind::Commutative => "witness values are the unshifted products m_n".into(),
            Kind::Lie => "witness values are the shifted brackets ℓ_n".into(),
        },
        budget_per_arity: budget.per_arity,
        arities,
        truncated,
        vanishing,
    })
}

impl VanishingReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("retract: {}\nstructure: {}\n", self.retract, self.structure);
        for a in &self.arities {
            let status = match a.status {
                Status::Zero => "zero".to_string(),
                Status::Nonzero => format!("NON-ZERO on {} tuples (max |numerator| {})", a.nonzero_tuples, a.max_abs_numerator),
                Status::Truncated => "TRUNCATED (budget exceeded)".to_string(),
            };
            s += &format!("arity {}: {} trees, {} candidate tuples, {status}\n", a.arity, a.trees, a.candidates);
            if let Some(w) = &a.witness {
                s += &format!("  witness ({}) -> {}\n", w.input_labels.join(", "), w.output);
            }
        }
        if self.arities.iter().any(|a| a.status == Status::Truncated) {
            s += &format!("budget per arity: {} (set {BUDGET_ENV} to change)\n", self.budget_per_arity);
        }
        s += &format!("{}\n", if self.vanishing { "certificate: all requested arities vanish" } else { "no vanishing certificate" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce_complex::CeComplex;
    use crate::coefficients::tensor_sdr;
    use crate::lie_algebra::builtin;
    use crate::sdr::{isotrope_sdr, meinrenken_sdr, parse_isotrope};
    use itertools::Itertools;

    fn all_words(w: usize, n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|_| 0..w).multi_cartesian_product().collect()
    }

    #[test]
    fn tables_match_direct_evaluation() {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let s = isotrope_sdr(&ce, &parse_isotrope("e3", 3).unwrap()).unwrap();
        let ctx = TransferContext::new(&s).unwrap();
        let tables = build_tables(&ctx, 4, Budget::default()).unwrap();
        let w = ctx.reduced_dim();
        for n in 2..=4 {
            for word in all_words(w, n) {
                let inputs: Vec<SparseVec> = word.iter().map(|&i| SparseVec::basis(i)).collect();
                assert_eq!(tables.operations.eval_basis(&word), ctx.c_transfer_shifted(&inputs).unwrap(), "{word:?}");
            }
        }
        let g = builtin("su2").unwrap();
        let t = tensor_sdr(&ce, &s, &g).unwrap();
        let ctx = TransferContext::new(&t).unwrap();
        let tables = build_tables(&ctx, 3, Budget::default()).unwrap();
        for word in all_words(ctx.reduced_dim(), 3).into_iter().step_by(7) {
            let inputs: Vec<SparseVec> = word.iter().map(|&i| SparseVec::basis(i)).collect();
            assert_eq!(tables.operations.eval_basis(&word), ctx.transferred_bracket(&inputs).unwrap(), "{word:?}");
        }
    }

    #[test]
    fn minimal_su2_vanishes() {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let s = meinrenken_sdr(&ce).unwrap();
        let t = tensor_sdr(&ce, &s, &builtin("su2").unwrap()).unwrap();
        let ctx = TransferContext::new(&t).unwrap();
        let r = vanishing_report(&ctx, 3, 6, Budget::default()).unwrap();
        assert!(r.vanishing, "{}", r.to_text());
        assert_eq!(r.arities.len(), 4);
    }

    #[test]
    fn partial_su2_witness_and_budget() {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let s = isotrope_sdr(&ce, &parse_isotrope("e3", 3).unwrap()).unwrap();
        let ctx = TransferContext::new(&s).unwrap();
        let r = vanishing_report(&ctx, 3, 6, Budget::default()).unwrap();
        assert_eq!(r.arities[0].status, Status::Nonzero);
        assert!(r.arities[1..].iter().all(|a| a.status == Status::Zero), "{}", r.to_text());
        let tiny = vanishing_report(&ctx, 3, 6, Budget { per_arity: 10 }).unwrap();
        assert!(tiny.truncated && !tiny.vanishing);
        assert!(tiny.to_text().contains("TRUNCATED"));
    }
}
