//! The perturbation-lemma side of the transfer, on polynomial functions.
//!
//! Coordinates are taken in a basis adapted to A = im e ⊕ ker p: η dual to
//! e(W), ζ dual to ker p. On functions,
//!
//! * `Q_S ξ^c = Σ_a (−1)^{|a|} D^c_a ξ^a` is the transpose of the differential,
//! * `δ ξ^c = ½ Σ_{a,b} (−1)^{|a|+|b|+|a||b|} ℓ^c_{ab} ξ^a ξ^b` the transpose of the product,
//! * `K = κ k^♮ / N` on monomials with N ≥ 1 factors ζ, where k^♮ is the odd
//!   derivation extending the transpose of k and κ = ±1 is fixed by
//!   `[Q_S, K] = EΠ − 1`.
//!
//! The perturbed differential on Sym(W*) is `Q' = Q_W + Σ_m Π δ (K δ)^m E`,
//! truncated by polynomial degree. Its degree-n part must reproduce the tree
//! brackets: the coefficient of η^{j₁}⋯η^{j_n} in Q'η^i is
//! `s(j)/Π(mult!) · ℓ_n(j)^i` with `s(j) = (−1)^{Σ_t |j_t|(1 + Σ_{u<t} |j_u|)}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::tables::{build_tables, Budget, Operations};
use super::TransferContext;
use crate::error::{Error, Result};
use crate::graded::{self, Decomposition};
use crate::linalg::SparseVec;
use crate::poly::{Poly, PolyRing};
use crate::scalar::{self, Scalar};
use crate::sign::parity;

pub const DEFAULT_BLOCK_CAP: usize = 1_000_000;

/// The tensor-trick data on Sym(A*) in adapted coordinates.
pub struct HplData {
    pub ring: PolyRing,
    /// Number of η variables (= dim W); ζ variables follow.
    pub reduced_vars: usize,
    q_s: Vec<Poly>,
    delta: Vec<Poly>,
    k0: Vec<Poly>,
    kappa: Scalar,
    pub block_cap: usize,
}

impl HplData {
    pub fn new(ctx: &TransferContext, block_cap: usize) -> Result<Self> {
        let s = ctx.sdr;
        let nw = s.reduced.dim();
        let kernel = graded::kernel(&s.p);
        let mut basis: Vec<SparseVec> = s.e.cols.clone();
        basis.extend(kernel.iter().cloned());
        let dec = Decomposition::new(s.source.dim(), vec![s.e.cols.clone(), kernel])?;
        let n = basis.len();
        let degrees: Vec<i32> = basis
            .iter()
            .map(|b| s.source.degree_of(b).ok_or_else(|| Error::DegreeMismatch("adapted basis is not homogeneous".into())))
            .collect::<Result<_>>()?;
        // coordinate degree is minus the shifted degree
        let names = (0..n).map(|a| if a < nw { format!("η{a}") } else { format!("ζ{}", a - nw) }).collect();
        let ring = PolyRing::new(names, degrees.iter().map(|d| 1 - d).collect());
        let odd: Vec<bool> = degrees.iter().map(|&d| parity(d - 1)).collect();

        let mut q_s = vec![Poly::zero(); n];
        let mut k0 = vec![Poly::zero(); n];
        for a in 0..n {
            let sign = scalar::sign(odd[a]);
            for (c, x) in dec.coordinates(&s.d.apply(&basis[a])).iter() {
                q_s[c].add_term(vec![a as u32], &sign * x);
            }
            for (c, x) in dec.coordinates(&s.k.apply(&basis[a])).iter() {
                k0[c].add_term(vec![a as u32], &sign * x);
            }
        }
        let half = Scalar::one() / scalar::int(2);
        let mut delta = vec![Poly::zero(); n];
        for a in 0..n {
            for b in 0..n {
                let prod = ctx.product(&basis[a], &basis[b]);
                if prod.is_zero() {
                    continue;
                }
                let sign = scalar::sign(odd[a] ^ odd[b] ^ (odd[a] && odd[b]));
                let mono = ring.mul(&ring.var(a as u32), &ring.var(b as u32));
                if mono.is_zero() {
                    continue;
                }
                for (c, x) in dec.coordinates(&prod).iter() {
                    delta[c].add_scaled(&(&half * &sign * x), &mono);
                }
            }
        }
        let mut data = Self { ring, reduced_vars: nw, q_s, delta, k0, kappa: Scalar::one(), block_cap };
        data.kappa = data.calibrate()?;
        Ok(data)
    }

    pub fn is_reduced_var(&self, v: u32) -> bool {
        (v as usize) < self.reduced_vars
    }

    fn zeta_count(&self, m: &[u32]) -> usize {
        m.iter().filter(|&&v| !self.is_reduced_var(v)).count()
    }

    pub fn apply_q_s(&self, p: &Poly) -> Poly {
        self.ring.apply_derivation(p, true, &|v| self.q_s[v as usize].clone())
    }

    pub fn apply_delta(&self, p: &Poly) -> Poly {
        self.ring.apply_derivation(p, true, &|v| self.delta[v as usize].clone())
    }

    pub fn apply_q(&self, p: &Poly) -> Poly {
        self.ring.apply_derivation(p, true, &|v| {
            let mut q = self.q_s[v as usize].clone();
            q.add(&self.delta[v as usize]);
            q
        })
    }

    fn apply_k_with(&self, p: &Poly, kappa: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let n = self.zeta_count(m);
            if n == 0 {
                continue;
            }
            let mut single = Poly::zero();
            single.add_term(m.clone(), c.clone());
            let img = self.ring.apply_derivation(&single, true, &|v| self.k0[v as usize].clone());
            out.add_scaled(&(kappa / scalar::int(n as i64)), &img);
        }
        out
    }

    pub fn apply_k(&self, p: &Poly) -> Poly {
        self.apply_k_with(p, &self.kappa)
    }

    /// Π: restriction to im e, i.e. ζ = 0.
    pub fn project(&self, p: &Poly) -> Poly {
        p.filtered(|m| m.iter().all(|&v| self.is_reduced_var(v)))
    }

    fn calibrate(&self) -> Result<Scalar> {
        let mut found: Option<Scalar> = None;
        for c in self.reduced_vars..self.ring.len() {
            let x = self.ring.var(c as u32);
            let one = Scalar::one();
            let mut comm = self.apply_q_s(&self.apply_k_with(&x, &one));
            comm.add(&self.apply_k_with(&self.apply_q_s(&x), &one));
            let lambda = comm.coefficient(&[c as u32]);
            if comm.len() != 1 || lambda.is_zero() {
                return Err(Error::UnverifiedSdr(format!("[Q_S, k] is not diagonal on {}", self.ring.names[c])));
            }
            // want κλ = −1
            let kappa = -(Scalar::one() / &lambda);
            match &found {
                None => found = Some(kappa),
                Some(k) if *k != kappa => return Err(Error::UnverifiedSdr("[Q_S, k] is not a multiple of the identity".into())),
                _ => {}
            }
        }
        Ok(found.unwrap_or_else(Scalar::one))
    }

    /// [Q_S, K] = EΠ − 1 on every monomial of degree ≤ `max_degree`.
    pub fn homotopy_identity(&self, max_degree: usize) -> bool {
        monomials(self.ring.len(), max_degree, &self.ring).iter().all(|m| {
            let mut p = Poly::zero();
            p.add_term(m.clone(), Scalar::one());
            let mut lhs = self.apply_q_s(&self.apply_k(&p));
            lhs.add(&self.apply_k(&self.apply_q_s(&p)));
            let mut rhs = self.project(&p);
            rhs.add_scaled(&-Scalar::one(), &p);
            lhs == rhs
        })
    }

    /// (Q_S + δ)² = 0 on generators and on quadratic monomials.
    pub fn q_squared_zero(&self) -> bool {
        monomials(self.ring.len(), 2, &self.ring).iter().filter(|m| !m.is_empty()).all(|m| {
            let mut p = Poly::zero();
            p.add_term(m.clone(), Scalar::one());
            self.apply_q(&self.apply_q(&p)).is_zero()
        })
    }

    /// Q'η^i up to polynomial degree `max_word`.
    pub fn perturbed(&self, i: usize, max_word: usize) -> Result<Poly> {
        let eta = self.ring.var(i as u32);
        let mut out = self.project(&self.apply_q_s(&eta));
        let mut current = eta;
        let mut m = 0;
        while m + 2 <= max_word {
            let d = self.apply_delta(&current);
            out.add(&self.project(&d));
            if m + 3 > max_word {
                break;
            }
            current = self.apply_k(&d);
            if current.len() > self.block_cap {
                return Err(Error::BudgetExceeded(format!(
                    "{} terms in word length {} exceed the block cap {}",
                    current.len(),
                    m + 2,
                    self.block_cap
                )));
            }
            m += 1;
        }
        Ok(out)
    }
}

/// All monomials of degree ≤ `max_degree` in `n` variables.
fn monomials(n: usize, max_degree: usize, ring: &PolyRing) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for v in start..n as u32 {
                if m.last() == Some(&v) && ring.is_odd(v) {
                    continue;
                }
                let mut w: Vec<u32> = m.clone();
                w.push(v);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HplArity {
    pub arity: usize,
    pub hpl_terms: usize,
    pub tree_terms: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HplReport {
    pub max_word: usize,
    pub source_variables: usize,
    pub reduced_variables: usize,
    pub q_squared_zero: bool,
    pub homotopy_identity: bool,
    pub arities: Vec<HplArity>,
    pub witness: Option<String>,
    pub equal: bool,
}

impl HplReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "word cap {}; {} source coordinates, {} reduced coordinates\n(Q_S+δ)² = 0: {}\n[Q_S,K] = EΠ − 1: {}\n",
            self.max_word, self.source_variables, self.reduced_variables, self.q_squared_zero, self.homotopy_identity
        );
        for a in &self.arities {
            s += &format!(
                "arity {}: {} perturbed coefficients, {} tree coefficients, {} mismatches\n",
                a.arity, a.hpl_terms, a.tree_terms, a.mismatches
            );
        }
        if let Some(w) = &self.witness {
            s += &format!("first mismatch: {w}\n");
        }
        s += if self.equal { "EQUAL\n" } else { "DIFFERENT\n" };
        s
    }
}

/// s(j) · 1/Π(mult!) for a sorted tuple of W indices.
fn transpose_factor(ops: &Operations, key: &[usize]) -> Scalar {
    let mut odd_sum = false;
    let mut sign = false;
    for &j in key {
        let o = ops.shifted_odd(j);
        if o && !odd_sum {
            sign = !sign;
        }
        odd_sum ^= o;
    }
    let mut f = scalar::sign(sign);
    let mut t = 0;
    while t < key.len() {
        let mult = key[t..].iter().take_while(|&&x| x == key[t]).count();
        for k in 2..=mult {
            f /= scalar::int(k as i64);
        }
        t += mult;
    }
    f
}

/// Runs the perturbation lemma up to word length `max_word` and compares with
/// the tree brackets. A word cap of 0 compares nothing.
pub fn hpl_truncated(ctx: &TransferContext, max_word: usize, budget: Budget, block_cap: usize) -> Result<HplReport> {
    let data = HplData::new(ctx, block_cap)?;
    let nw = data.reduced_vars;
    let q_squared_zero = data.q_squared_zero();
    let homotopy_identity = data.homotopy_identity(2);
    let mut arities = Vec::new();
    let mut witness = None;
    if max_word >= 1 {
        let tables = build_tables(ctx, max_word.max(2), budget)?;
        if tables.truncated_at.is_some() {
            return Err(Error::BudgetExceeded("tree tables did not complete".into()));
        }
        let ops = &tables.operations;
        let perturbed: Vec<Poly> = (0..nw).map(|i| data.perturbed(i, max_word)).collect::<Result<_>>()?;
        for n in 1..=max_word {
            // predicted[(i, monomial)] from the tree side
            let mut predicted: BTreeMap<(usize, Vec<u32>), Scalar> = BTreeMap::new();
            if n == 1 {
                for j in 0..nw {
                    for (i, c) in ops.d_w[j].iter() {
                        predicted.insert((i, vec![j as u32]), scalar::sign(ops.shifted_odd(j)) * c);
                    }
                }
            } else if let Some(table) = ops.table(n) {
                for (key, value) in table {
                    let f = transpose_factor(ops, key);
                    let mono: Vec<u32> = key.iter().map(|&k| k as u32).collect();
                    for (i, c) in value.iter() {
                        predicted.insert((i, mono.clone()), &f * c);
                    }
                }
            }
            let mut actual: BTreeMap<(usize, Vec<u32>), Scalar> = BTreeMap::new();
            for (i, p) in perturbed.iter().enumerate() {
                for (m, c) in &p.homogeneous(n).terms {
                    actual.insert((i, m.clone()), c.clone());
                }
            }
            let mut mismatches = 0;
            let keys: std::collections::BTreeSet<_> = predicted.keys().chain(actual.keys()).cloned().collect();
            for key in keys {
                let (a, b) = (
                    actual.get(&key).cloned().unwrap_or_else(Scalar::zero),
                    predicted.get(&key).cloned().unwrap_or_else(Scalar::zero),
                );
                if a != b {
                    mismatches += 1;
                    witness.get_or_insert_with(|| {
                        format!(
                            "coefficient of {} in Q'η{}: perturbation {}, trees {}",
                            data.ring.monomial_label(&key.1),
                            key.0,
                            scalar::format(&a),
                            scalar::format(&b)
                        )
                    });
                }
            }
            arities.push(HplArity { arity: n, hpl_terms: actual.len(), tree_terms: predicted.len(), mismatches });
        }
    }
    let equal = q_squared_zero && homotopy_identity && arities.iter().all(|a| a.mismatches == 0);
    Ok(HplReport {
        max_word,
        source_variables: data.ring.len(),
        reduced_variables: nw,
        q_squared_zero,
        homotopy_identity,
        arities,
        witness,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce_complex::CeComplex;
    use crate::coefficients::tensor_sdr;
    use crate::lie_algebra::builtin;
    use crate::sdr::{isotrope_sdr, meinrenken_sdr, parse_isotrope};

    #[test]
    fn minimal_su2_agrees() {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let t = tensor_sdr(&ce, &meinrenken_sdr(&ce).unwrap(), &builtin("su2").unwrap()).unwrap();
        let ctx = TransferContext::new(&t).unwrap();
        let r = hpl_truncated(&ctx, 4, Budget::default(), DEFAULT_BLOCK_CAP).unwrap();
        assert!(r.equal, "{}", r.to_text());
        assert!(r.arities[1].tree_terms > 0);
        assert_eq!(r.arities[2].tree_terms, 0);
        let vacuous = hpl_truncated(&ctx, 0, Budget::default(), DEFAULT_BLOCK_CAP).unwrap();
        assert!(vacuous.equal && vacuous.arities.is_empty());
    }

    #[test]
    fn partial_su2_agrees() {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let s = isotrope_sdr(&ce, &parse_isotrope("e3", 3).unwrap()).unwrap();
        let t = tensor_sdr(&ce, &s, &builtin("su2").unwrap()).unwrap();
        let ctx = TransferContext::new(&t).unwrap();
        let r = hpl_truncated(&ctx, 4, Budget::default(), DEFAULT_BLOCK_CAP).unwrap();
        assert!(r.equal, "{}", r.to_text());
        assert!(r.arities[2].tree_terms > 0);
    }

    #[test]
    fn delta_raises_word_length() {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let t = tensor_sdr(&ce, &meinrenken_sdr(&ce).unwrap(), &builtin("su2").unwrap()).unwrap();
        let ctx = TransferContext::new(&t).unwrap();
        let data = HplData::new(&ctx, DEFAULT_BLOCK_CAP).unwrap();
        for v in 0..data.ring.len() as u32 {
            let x = data.ring.var(v);
            assert!(data.apply_delta(&x).terms.keys().all(|m| m.len() == 2));
            let xy = data.ring.mul(&x, &data.ring.var((v + 5) % data.ring.len() as u32));
            assert!(data.apply_delta(&xy).terms.keys().all(|m| m.len() == 3));
        }
    }

    #[test]
    fn block_cap_is_enforced() {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let s = isotrope_sdr(&ce, &parse_isotrope("e3", 3).unwrap()).unwrap();
        let t = tensor_sdr(&ce, &s, &builtin("su2").unwrap()).unwrap();
        let ctx = TransferContext::new(&t).unwrap();
        let tight = HplData::new(&ctx, 0).unwrap();
        let n = tight.reduced_vars;
        assert!((0..n).any(|i| matches!(tight.perturbed(i, 4), Err(Error::BudgetExceeded(_)))));
        assert!((0..n).all(|i| tight.perturbed(i, 2).is_ok()));
    }
}
