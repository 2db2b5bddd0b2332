//! Ghost degrees form − 1 + internal, for ordinary and graded coefficients.

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::coefficients::{ghost_degree_table, reduced_degree_table, tensor_sdr};
use hpt_bv::lie_algebra::builtin;
use hpt_bv::sdr::meinrenken_sdr;

fn main() -> hpt_bv::Result<()> {
    for (forms, g) in [(3, "su2"), (8, "double(su2,5)")] {
        let g = builtin(g)?;
        let ghosts: Vec<String> = ghost_degree_table(forms, &g).iter().map(|r| format!("{}⊗{}:{}", r.forms, r.internal, r.ghost)).collect();
        println!("Λ^{{0..{forms}}} ⊗ {}: {}", g.name, ghosts.join(" "));
    }
    let ce = CeComplex::new(&builtin("su3")?)?;
    let m = meinrenken_sdr(&ce)?;
    let s = tensor_sdr(&ce, &m, &builtin("double(su2,5)")?)?;
    println!("\nreduced classes of su3 ⊗ double(su2,5):");
    for r in reduced_degree_table(&s, &m) {
        println!(
            "  form {} internal {:>2} ghost {:>2}  form − 2 = {:>2}   class {}",
            r.form_degree, r.internal, r.ghost, r.form_shifted_by_two, r.class
        );
    }
    Ok(())
}
