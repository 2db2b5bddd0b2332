//! Brackets transferred to cohomology with coefficients: only ℓ₂ survives.

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::coefficients::tensor_sdr;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::sdr::meinrenken_sdr;
use hpt_bv::transfer::checks::linf_identities;
use hpt_bv::transfer::{build_tables, vanishing_report, Budget, TransferContext};

fn main() -> hpt_bv::Result<()> {
    for (base, coeffs, max) in [("su2", "su2", 6), ("su3", "double(su2,5)", 4)] {
        let ce = CeComplex::new(&builtin(base)?)?;
        let s = tensor_sdr(&ce, &meinrenken_sdr(&ce)?, &builtin(coeffs)?)?;
        let ctx = TransferContext::new(&s)?;
        println!("{}", vanishing_report(&ctx, 2, max, Budget::from_env())?.to_text());
        let tables = build_tables(&ctx, 4, Budget::from_env())?;
        println!("{}", linf_identities(&tables.operations, 4)?.to_text());
    }
    let ce = CeComplex::new(&builtin("su3")?)?;
    let ctx_s = meinrenken_sdr(&ce)?;
    let ctx = TransferContext::new(&ctx_s)?;
    println!("{}", vanishing_report(&ctx, 3, 5, Budget::from_env())?.to_text());
    Ok(())
}
