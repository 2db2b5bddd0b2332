//! Transfer to a partial retract of su(2): a non-zero triple product that
//! reproduces the double cross product, and nothing beyond it.

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::multivector::MultiVector;
use hpt_bv::sdr::{isotrope_sdr, parse_isotrope};
use hpt_bv::transfer::checks::{ainf_identities, shuffle_check};
use hpt_bv::transfer::{build_tables, vanishing_report, Budget, TransferContext};

fn main() -> hpt_bv::Result<()> {
    let ce = CeComplex::new(&builtin("su2")?)?;
    let s = isotrope_sdr(&ce, &parse_isotrope("e3", 3)?)?;
    let ctx = TransferContext::new(&s)?;
    println!("W dims {:?}", s.reduced_dims());

    // degree-1 classes of W, read off through e
    let degree_one: Vec<usize> = (0..ctx.reduced_dim()).filter(|&w| s.reduced.degree(w) == 1).collect();
    for &a in &degree_one {
        for &b in &degree_one {
            for &c in &degree_one {
                let inputs: Vec<_> = [a, b, c].iter().map(|&i| hpt_bv::linalg::SparseVec::basis(i)).collect();
                let m3 = ctx.embed(&ctx.c_transfer(&inputs)?);
                if !m3.is_zero() {
                    println!(
                        "m3({}, {}, {}) = {}   ⋆ = {}",
                        ctx.basis_label(a),
                        ctx.basis_label(b),
                        ctx.basis_label(c),
                        MultiVector::from_coeffs(3, m3.clone()),
                        MultiVector::from_coeffs(3, ce.hodge_star(&m3))
                    );
                }
            }
        }
    }
    println!("\n{}", vanishing_report(&ctx, 3, 6, Budget::default())?.to_text());
    let tables = build_tables(&ctx, 4, Budget::default())?;
    println!("{}", ainf_identities(&tables.operations, 4)?.to_text());
    for n in 2..=4 {
        println!("shuffle relations at arity {n}: {}", shuffle_check(&tables.operations, n)?.holds());
    }
    Ok(())
}
