//! Chevalley–Eilenberg cohomology, invariant forms and the codifferential as ⋆d⋆.

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::lie_algebra::builtin;

fn main() -> hpt_bv::Result<()> {
    for name in ["su2", "su3", "abelian(2)", "affine2"] {
        let ce = CeComplex::new(&builtin(name)?)?;
        println!("{}", ce.report().to_text());
    }
    Ok(())
}
