//! Experiment: which isotropes of su(2) give retracts whose image is closed
//! under the wedge product, and does closure predict vanishing higher products?

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::sdr::{image_closed_under_wedge, isotrope_sdr, parse_isotrope};
use hpt_bv::transfer::{vanishing_report, Budget, TransferContext};

fn main() -> hpt_bv::Result<()> {
    let ce = CeComplex::new(&builtin("su2")?)?;
    let specs = ["e1", "e3", "e1+e2", "e1+e2+e3", "e1, e2", "e1+e3, e2", "e1, e2, e3", "2e1 - e2, e3"];
    println!("{:<14} {:>14} {:>8} {:>10}", "isotrope", "W dims", "closed", "m3..m6 = 0");
    for spec in specs {
        let s = match isotrope_sdr(&ce, &parse_isotrope(spec, 3)?) {
            Ok(s) => s,
            Err(e) => {
                println!("{spec:<14} rejected: {e}");
                continue;
            }
        };
        let (closed, _) = image_closed_under_wedge(&s);
        let ctx = TransferContext::new(&s)?;
        let vanishing = vanishing_report(&ctx, 3, 6, Budget::default())?.vanishing;
        println!("{spec:<14} {:>14} {closed:>8} {vanishing:>10}", format!("{:?}", s.reduced_dims()));
        assert!(!closed || vanishing, "closure without vanishing for {spec}");
    }
    Ok(())
}
