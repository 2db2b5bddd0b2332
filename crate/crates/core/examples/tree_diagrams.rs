//! Catalan many trees per arity, and DOT output decorated by a non-zero evaluation.

use hpt_bv::ce_complex::CeComplex;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::sdr::{isotrope_sdr, parse_isotrope};
use hpt_bv::transfer::dot::{decorate, emit_tree_diagram};
use hpt_bv::transfer::{catalan, enumerate_trees, TransferContext};

fn main() -> hpt_bv::Result<()> {
    for n in 2..=8 {
        let trees = enumerate_trees(n)?;
        println!("{n} leaves: {} trees (C_{} = {}), first {}", trees.len(), n - 1, catalan(n - 1), trees[0]);
    }
    let ce = CeComplex::new(&builtin("su2")?)?;
    let s = isotrope_sdr(&ce, &parse_isotrope("e3", 3)?)?;
    let ctx = TransferContext::new(&s)?;
    let e1 = (0..ctx.reduced_dim()).find(|&w| ctx.basis_label(w) == "e1").unwrap();
    let e2 = (0..ctx.reduced_dim()).find(|&w| ctx.basis_label(w) == "e2").unwrap();
    for tree in enumerate_trees(3)? {
        let d = decorate(&ctx, &tree, &[e1, e2, e1]);
        println!("// tree {tree}\n{}", emit_tree_diagram(&tree, Some(&d)));
    }
    Ok(())
}
