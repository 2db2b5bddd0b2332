//! The perturbed differential on symmetric functions against the tree formula.

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::coefficients::tensor_sdr;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::sdr::{isotrope_sdr, meinrenken_sdr, parse_isotrope};
use hpt_bv::transfer::hpl::{hpl_truncated, DEFAULT_BLOCK_CAP};
use hpt_bv::transfer::{Budget, TransferContext};

fn main() -> hpt_bv::Result<()> {
    let g = builtin("su2")?;
    let ce = CeComplex::new(&g)?;
    for base in [meinrenken_sdr(&ce)?, isotrope_sdr(&ce, &parse_isotrope("e3", 3)?)?] {
        let s = tensor_sdr(&ce, &base, &g)?;
        let ctx = TransferContext::new(&s)?;
        println!("{}\n{}", s.label, hpl_truncated(&ctx, 4, Budget::default(), DEFAULT_BLOCK_CAP)?.to_text());
    }
    Ok(())
}
