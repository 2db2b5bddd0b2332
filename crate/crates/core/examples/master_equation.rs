//! Classical BV action, master equations and the unimodularity obstruction.

use hpt_bv::bv_quantum::{named_pairing, no_counterterm_check, qme_obstruction};
use hpt_bv::lie_algebra::builtin;

fn main() -> hpt_bv::Result<()> {
    for (name, pairing) in [("su2", "killing"), ("affine2", "identity"), ("abelian(2)", "identity")] {
        let g = builtin(name)?;
        let t = named_pairing(&g, pairing)?;
        print!("{}", qme_obstruction(&g, &t, pairing)?.to_text());
        println!("{}", no_counterterm_check(&g, &t)?.to_text());
    }
    Ok(())
}
