//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use hpt_bv::bv_quantum::{named_pairing, no_counterterm_check, qme_obstruction};
use hpt_bv::ce_complex::CeComplex;
use hpt_bv::coefficients::tensor_sdr;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::linalg::{Matrix, SparseVec, Subspace};
use hpt_bv::multivector::BasisIndex;
use hpt_bv::scalar::{self, Scalar};
use hpt_bv::sdr::{
    image_closed_under_wedge, integral_pairing, isotrope_sdr, meinrenken_sdr, parse_isotrope, verify_cyclic,
    verify_sdr, SdrData,
};
use hpt_bv::transfer::checks::{ainf_identities, linf_identities, shuffle_check};
use hpt_bv::transfer::hpl::{hpl_truncated, DEFAULT_BLOCK_CAP};
use hpt_bv::transfer::{build_tables, vanishing_report, Budget, TransferContext, DEFAULT_ARITY_CAP};
use hpt_bv::Result;
use itertools::Itertools;

type Outcome = Result<(bool, String)>;

fn ce(name: &str) -> CeComplex {
    CeComplex::new(&builtin(name).unwrap()).unwrap()
}

fn one_form(i: usize) -> usize {
    BasisIndex::generator(i).0 as usize
}

/// Cohomology dimensions from ranks of d alone.
fn betti_by_rank(c: &CeComplex) -> Vec<usize> {
    let rank = |k: i32| if k < 0 || k > c.dim as i32 { 0 } else { c.d.block(k).0.rank() };
    (0..=c.dim as i32)
        .map(|k| c.space.dims(k, k)[0] - rank(k) - rank(k - 1))
        .collect()
}

fn c1_cohomology() -> Outcome {
    let (su2, su3) = (ce("su2"), ce("su3"));
    let (h2, h3) = (su2.cohomology().dims, su3.cohomology().dims);
    let expected3: Vec<usize> = (0..=8).map(|k| [0, 3, 5, 8].contains(&k) as usize).collect();
    let ok = h2 == vec![1, 0, 0, 1] && h3 == expected3 && betti_by_rank(&su2) == h2 && betti_by_rank(&su3) == h3;
    Ok((ok, format!("su2 {h2:?}, su3 {h3:?}")))
}

fn c2_invariants() -> Outcome {
    let mut ok = true;
    for name in ["su2", "su3"] {
        let c = ce(name);
        let reps = c.cohomology().representatives;
        for (k, inv) in c.invariants().iter().enumerate() {
            let a = Subspace::spanned_by(&reps[k]);
            let b = Subspace::spanned_by(inv);
            ok &= a.dim() == b.dim() && inv.iter().all(|v| a.contains(v)) && reps[k].iter().all(|v| b.contains(v));
        }
    }
    Ok((ok, "span of representatives = invariant forms, degree by degree".into()))
}

fn c3_meinrenken() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["su2", "su3"] {
        let c = ce(name);
        let s = meinrenken_sdr(&c)?;
        let cyc = verify_cyclic(&s, &integral_pairing(&c));
        ok &= verify_sdr(&s).all_pass() && cyc.is_cyclic();
        detail.push(format!("{name}: k† = {:?}k, d† = {:?}d", cyc.k_adjoint_sign, cyc.d_adjoint_sign));
    }
    Ok((ok, detail.join("; ")))
}

fn c4_k_table() -> Outcome {
    let c = ce("su2");
    let s = meinrenken_sdr(&c)?;
    let mono = |gens: &[usize]| BasisIndex::from_generators(gens).0 as usize;
    // e3e1 = −e1e3
    let cases = [(mono(&[0, 1]), one_form(2), 1), (mono(&[1, 2]), one_form(0), 1), (mono(&[0, 2]), one_form(1), -1)];
    let mut lambda: Option<Scalar> = None;
    let mut ok = true;
    for (src, target, sign) in cases {
        let v = s.k.apply(&SparseVec::basis(src)).scaled(&scalar::int(sign));
        let l = v.get(target);
        ok &= v.len() == 1 && !l.is_zero_like();
        match &lambda {
            None => lambda = Some(l),
            Some(x) => ok &= *x == l,
        }
    }
    let lambda = lambda.map(|l| scalar::format(&l)).unwrap_or_default();
    Ok((ok, format!("k(e1e2)=λe3, k(e2e3)=λe1, k(e3e1)=λe2 with λ = {lambda}")))
}

trait ZeroLike {
    fn is_zero_like(&self) -> bool;
}
impl ZeroLike for Scalar {
    fn is_zero_like(&self) -> bool {
        *self == scalar::int(0)
    }
}

/// Literal tree sums on every multiset, independent of the tabulation.
fn literal_brackets_vanish(ctx: &TransferContext, n: usize) -> Result<bool> {
    for key in (0..ctx.reduced_dim()).combinations_with_replacement(n) {
        if !ctx.literal_bracket(&key)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn c5_su2_linf() -> Outcome {
    let c = ce("su2");
    let g = builtin("su2")?;
    let s = tensor_sdr(&c, &meinrenken_sdr(&c)?, &g)?;
    let ctx = TransferContext::new(&s)?;
    let report = vanishing_report(&ctx, 3, 6, Budget::from_env())?;
    let literal = literal_brackets_vanish(&ctx, 3)? && literal_brackets_vanish(&ctx, 4)?;
    // ℓ₂ on degree-0 classes 1⊗x
    let deg0: Vec<usize> = (0..ctx.reduced_dim()).filter(|&w| s.reduced.degree(w) == 0).collect();
    let mut l2 = deg0.len() == 3;
    for &a in &deg0 {
        for &b in &deg0 {
            let got = ctx.embed(&ctx.transferred_bracket_unshifted(&[SparseVec::basis(a), SparseVec::basis(b)])?);
            // e(w) = 1⊗x sits at mask 0, so the coefficient index is x itself
            let (x, y) = (ctx.embed(&SparseVec::basis(a)), ctx.embed(&SparseVec::basis(b)));
            let (x, y) = (x.first_index().unwrap(), y.first_index().unwrap());
            let scale_x = ctx.embed(&SparseVec::basis(a)).get(x);
            let scale_y = ctx.embed(&SparseVec::basis(b)).get(y);
            let expected = g.bracket(x, y).scaled(&(scale_x * scale_y));
            l2 &= got == expected;
        }
    }
    Ok((report.vanishing && literal && l2, format!("ℓ3..ℓ6 = 0 ({} DP, literal trees at 3,4); ℓ2 = 1⊗[,]: {l2}", report.vanishing)))
}

fn c6_su3() -> Outcome {
    let c = ce("su3");
    let m = meinrenken_sdr(&c)?;
    let ctx = TransferContext::new(&m)?;
    let scalar_report = vanishing_report(&ctx, 3, 5, Budget::from_env())?;
    // brute force on all words of arity 3 and 4
    let w = ctx.reduced_dim();
    let mut direct = true;
    for n in 3..=4 {
        for word in (0..n).map(|_| 0..w).multi_cartesian_product() {
            let inputs: Vec<SparseVec> = word.iter().map(|&i| SparseVec::basis(i)).collect();
            direct &= ctx.literal_product(&inputs)?.is_zero();
        }
    }
    let t = tensor_sdr(&c, &m, &builtin("double(su2,5)")?)?;
    let tctx = TransferContext::new(&t)?;
    let tensor_report = vanishing_report(&tctx, 3, 4, Budget::from_env())?;
    let literal = literal_brackets_vanish(&tctx, 3)?;
    let truncated = scalar_report.truncated || tensor_report.truncated;
    Ok((
        scalar_report.vanishing && tensor_report.vanishing && direct && literal,
        format!(
            "m3..m5 = 0 (direct words 3,4: {direct}); ℓ3, ℓ4 = 0 on su3 ⊗ double(su2,5) (literal ℓ3: {literal}); truncated: {truncated}"
        ),
    ))
}

fn partial_su2() -> (CeComplex, SdrData) {
    let c = ce("su2");
    let s = isotrope_sdr(&c, &parse_isotrope("e3", 3).unwrap()).unwrap();
    (c, s)
}

fn w_index(ctx: &TransferContext, label: &str) -> usize {
    (0..ctx.reduced_dim()).find(|&w| ctx.basis_label(w) == label).unwrap()
}

fn c7_partial() -> Outcome {
    let (c, s) = partial_su2();
    let ctx = TransferContext::new(&s)?;
    let g = builtin("su2")?;
    let m3 = |a: usize, b: usize, x: usize| -> Result<SparseVec> {
        let inputs = [a, b, x].map(|i| SparseVec::basis(w_index(&ctx, &format!("e{}", i + 1))));
        Ok(c.hodge_star(&ctx.embed(&ctx.c_transfer(&inputs)?)))
    };
    let value = m3(0, 1, 0)?;
    let two_e2 = SparseVec::basis(one_form(1)).scaled(&scalar::int(2));
    let mut cross = true;
    let as_form = |v: &SparseVec| SparseVec::from_pairs(v.iter().map(|(i, x)| (one_form(i), x.clone())));
    for (a, b, x) in (0..3).map(|_| 0..2usize).multi_cartesian_product().map(|v| (v[0], v[1], v[2])) {
        let ab = g.bracket_vec(&SparseVec::basis(a), &SparseVec::basis(b));
        let bc = g.bracket_vec(&SparseVec::basis(b), &SparseVec::basis(x));
        let mut expected = g.bracket_vec(&ab, &SparseVec::basis(x));
        expected.add(&g.bracket_vec(&SparseVec::basis(a), &bc));
        cross &= m3(a, b, x)? == as_form(&expected);
    }
    let higher = vanishing_report(&ctx, 4, 6, Budget::from_env())?.vanishing;
    let t = tensor_sdr(&c, &s, &g)?;
    let higher_l = vanishing_report(&TransferContext::new(&t)?, 4, 6, Budget::from_env())?.vanishing;
    let ops = build_tables(&ctx, 3, Budget::from_env())?.operations;
    let shuffles = shuffle_check(&ops, 3)?;
    let sh = shuffles.holds() && shuffles.cases.iter().any(|k| (k.p, k.q) == (1, 2)) && shuffles.cases.iter().any(|k| (k.p, k.q) == (2, 1));
    Ok((
        value == two_e2 && cross && higher && higher_l && sh,
        format!(
            "⋆m3(e1,e2,e1) = 2e2: {}; cross-product formula: {cross}; m4..m6 = 0: {higher}; ℓ4..ℓ6 = 0: {higher_l}; shuffles: {sh}",
            value == two_e2
        ),
    ))
}

fn c8_dim_two() -> Outcome {
    let c = ce("su2");
    let s = isotrope_sdr(&c, &parse_isotrope("e1, e2", 3)?)?;
    let ctx = TransferContext::new(&s)?;
    let scalar_ok = vanishing_report(&ctx, 3, 6, Budget::from_env())?.vanishing;
    let t = tensor_sdr(&c, &s, &builtin("su2")?)?;
    let tensor_ok = vanishing_report(&TransferContext::new(&t)?, 3, 6, Budget::from_env())?.vanishing;
    Ok((scalar_ok && tensor_ok, format!("W dims {:?}; m3..m6 = 0: {scalar_ok}; ℓ3..ℓ6 = 0: {tensor_ok}", s.reduced_dims())))
}

fn c9_hpl() -> Outcome {
    let c = ce("su2");
    let g = builtin("su2")?;
    let mut ok = true;
    let mut detail = Vec::new();
    for base in [meinrenken_sdr(&c)?, partial_su2().1] {
        let t = tensor_sdr(&c, &base, &g)?;
        let r = hpl_truncated(&TransferContext::new(&t)?, 4, Budget::from_env(), DEFAULT_BLOCK_CAP)?;
        ok &= r.equal && r.q_squared_zero;
        let compared: usize = r.arities.iter().map(|a| a.tree_terms).sum();
        detail.push(format!("{}: {} coefficients, {}", base.label, compared, if r.equal { "EQUAL" } else { "DIFFERENT" }));
    }
    Ok((ok, detail.join("; ")))
}

fn c10_identities() -> Outcome {
    let su2 = ce("su2");
    let su3 = ce("su3");
    let g = builtin("su2")?;
    let retracts: Vec<(&CeComplex, SdrData)> = vec![
        (&su2, meinrenken_sdr(&su2)?),
        (&su2, partial_su2().1),
        (&su2, isotrope_sdr(&su2, &parse_isotrope("e1, e2", 3)?)?),
        (&su3, meinrenken_sdr(&su3)?),
    ];
    let mut ok = true;
    let mut count = 0;
    for (c, s) in &retracts {
        let coeffs = if c.dim == 8 { builtin("double(su2,5)")? } else { g.clone() };
        let scalar_ops = build_tables(&TransferContext::new(s)?, 4, Budget::from_env())?.operations;
        ok &= ainf_identities(&scalar_ops, 4)?.holds();
        let t = tensor_sdr(c, s, &coeffs)?;
        let ops = build_tables(&TransferContext::new(&t)?, 4, Budget::from_env())?.operations;
        ok &= linf_identities(&ops, 4)?.holds();
        count += 2;
    }
    Ok((ok, format!("{count} structures, L∞ and A∞ relations through arity 4")))
}

fn c11_star() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["su2", "su3"] {
        match ce(name).codifferential_sign_table() {
            Ok(t) => {
                let signs: Vec<String> = t.iter().map(|x| x.map_or("·".into(), |v| format!("{v:+}"))).collect();
                detail.push(format!("{name}: {}", signs.join(" ")));
            }
            Err(k) => {
                ok = false;
                detail.push(format!("{name}: no sign in degree {k}"));
            }
        }
    }
    Ok((ok, detail.join("; ")))
}

fn c12_qme() -> Outcome {
    let su2 = builtin("su2")?;
    let a = qme_obstruction(&su2, &named_pairing(&su2, "killing")?, "killing")?;
    let aff = builtin("affine2")?;
    let id = Matrix::identity(2);
    let b = qme_obstruction(&aff, &id, "identity")?;
    let cterm = no_counterterm_check(&aff, &id)?;
    let ok = a.cme_holds && a.delta_s_zero && !b.delta_s_zero && b.delta_s_u_linear && !cterm.solvable;
    Ok((ok, format!("su2: {{S,S}} = {}, ΔS = {}; affine2: ΔS = {}, counterterm exists: {}", a.cme_residual, a.delta_s, b.delta_s, cterm.solvable)))
}

fn c13_implication() -> Outcome {
    let mut checked = 0;
    let mut closed_count = 0;
    let mut ok = true;
    for (name, specs) in [
        ("su2", vec!["meinrenken", "e1, e2, e3", "e1", "e3", "e1+e2", "e1, e2", "e1+e3, e2", "2e1 - e2, e3"]),
        ("su3", vec!["meinrenken"]),
    ] {
        let c = ce(name);
        for spec in specs {
            let s = if spec == "meinrenken" { meinrenken_sdr(&c)? } else { isotrope_sdr(&c, &parse_isotrope(spec, c.dim)?)? };
            checked += 1;
            if image_closed_under_wedge(&s).0 {
                closed_count += 1;
                ok &= vanishing_report(&TransferContext::new(&s)?, 3, DEFAULT_ARITY_CAP, Budget::from_env())?.vanishing;
            }
        }
    }
    Ok((ok, format!("{checked} retracts, {closed_count} closed under wedge, all of those vanish through arity {DEFAULT_ARITY_CAP}")))
}

fn main() {
    let criteria: Vec<(usize, &str, fn() -> Outcome, Duration)> = vec![
        (1, "cohomology dimensions", c1_cohomology, Duration::from_secs(5)),
        (2, "representatives span the invariants", c2_invariants, Duration::from_secs(10)),
        (3, "minimal retract identities and cyclicity", c3_meinrenken, Duration::from_secs(30)),
        (4, "su2 homotopy table", c4_k_table, Duration::from_secs(5)),
        (5, "su2 brackets vanish beyond ℓ2", c5_su2_linf, Duration::from_secs(120)),
        (6, "su3 products and brackets vanish", c6_su3, Duration::from_secs(900)),
        (7, "partial retract triple product", c7_partial, Duration::from_secs(60)),
        (8, "two-dimensional isotrope", c8_dim_two, Duration::from_secs(60)),
        (9, "perturbation lemma equals trees", c9_hpl, Duration::from_secs(300)),
        (10, "L∞ relations through arity 4", c10_identities, Duration::from_secs(300)),
        (11, "codifferential is ±⋆d⋆", c11_star, Duration::from_secs(30)),
        (12, "master equations and unimodularity", c12_qme, Duration::from_secs(30)),
        (13, "wedge closure implies vanishing", c13_implication, Duration::from_secs(300)),
    ];
    let mut failed = Vec::new();
    for (n, name, f, limit) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok((ok, d)) => (ok && elapsed <= limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {n:>2}: {} {name}: {detail} [{:.2} s, limit {} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
