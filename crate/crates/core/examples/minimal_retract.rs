//! The minimal cyclic retract onto invariant forms, and its homotopy k.

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::linalg::SparseVec;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::sdr::{integral_pairing, meinrenken_sdr, verify_cyclic, verify_sdr};

fn main() -> hpt_bv::Result<()> {
    for name in ["su2", "su3"] {
        let ce = CeComplex::new(&builtin(name)?)?;
        let s = meinrenken_sdr(&ce)?;
        let checks = verify_sdr(&s);
        let cyclic = verify_cyclic(&s, &integral_pairing(&ce));
        println!("{}: W dims {:?}, retract identities {}, cyclic {}", s.label, s.reduced_dims(), checks.all_pass(), cyclic.is_cyclic());
        println!("  d† = {:?}·d, k† = {:?}·k", cyclic.d_adjoint_sign, cyclic.k_adjoint_sign);
        if name == "su2" {
            for j in 0..s.source.dim() {
                let v = s.k.apply(&SparseVec::basis(j));
                if !v.is_zero() {
                    println!("  k({}) = {}", s.source_label(&SparseVec::basis(j)), s.source_label(&v));
                }
            }
        }
    }
    Ok(())
}
