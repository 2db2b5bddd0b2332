//! Sparse multivectors over exact rationals: wedge signs and graded commutativity.

use hpt_bv::multivector::{mv_wedge, MultiVector};

fn main() -> hpt_bv::Result<()> {
    let e = |i| MultiVector::generator(3, i);
    let e12 = mv_wedge(&e(0), &e(1))?;
    println!("e1 ∧ e2 = {e12}");
    println!("e2 ∧ e1 = {}", mv_wedge(&e(1), &e(0))?);
    println!("e1 ∧ e1 = {}", mv_wedge(&e(0), &e(0))?);
    let a = e(0).plus(&e(2).scaled(&hpt_bv::scalar::frac(1, 3)));
    println!("(e1 + 1/3 e3) ∧ e1_2 = {}", mv_wedge(&a, &e12)?);
    println!("top form: {}", MultiVector::monomial(3, hpt_bv::multivector::BasisIndex::top(3)));
    Ok(())
}
