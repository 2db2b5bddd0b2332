//! Built-in and JSON Lie algebras: axioms, Killing form, unimodularity.

use hpt_bv::lie_algebra::{builtin, killing_form, validate_lie, LieAlgebraData};

fn summary(g: &LieAlgebraData) {
    let r = validate_lie(g);
    let k = killing_form(g);
    println!(
        "{:<16} dim {:>2}  valid: {:<5}  Killing degenerate: {:<5}  unimodular: {} [{}]",
        g.name,
        g.dim(),
        r.is_valid(),
        k.degenerate,
        r.unimodular,
        r.trace_vector.join(", ")
    );
}

fn main() -> hpt_bv::Result<()> {
    for name in ["su2", "su3", "affine2", "abelian(2)", "double(su2,5)"] {
        summary(&builtin(name)?);
    }
    // one sign flipped: still a Lie algebra (the split real form)
    let split = r#"{"dim": 3, "basis": ["a","b","c"],
                    "brackets": [[1,2,[[3,"1"]]], [2,3,[[1,"1"]]], [3,1,[[2,"-1"]]]]}"#;
    summary(&LieAlgebraData::from_json_str("split", split)?);
    // [a,b] = c given twice with the same sign breaks antisymmetry
    let broken = r#"{"dim": 3, "basis": ["a","b","c"],
                     "brackets": [[1,2,[[3,"1"]]], [2,1,[[3,"1"]]], [2,3,[[1,"1"]]], [3,1,[[2,"1"]]]]}"#;
    let g = LieAlgebraData::from_json_str("broken", broken)?;
    summary(&g);
    for v in validate_lie(&g).violations.iter().take(2) {
        println!("  violation: {v:?}");
    }
    println!("\nsu2 as JSON:\n{}", serde_json::to_string(&builtin("su2")?.to_json())?);
    Ok(())
}
