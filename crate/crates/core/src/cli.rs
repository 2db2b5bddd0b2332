//! Command-line front end. `run` returns the exit code and the rendered
//! output so that the binary stays a two-liner and tests can drive it.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 input error, 3 budget.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bv_quantum::{named_pairing, no_counterterm_check, qme_obstruction};
use crate::ce_complex::CeComplex;
use crate::coefficients::tensor_sdr;
use crate::error::{Error, Result};
use crate::lie_algebra::{builtin, killing_form, validate_lie, LieAlgebraData, Violation};
use crate::linalg::SparseVec;
use crate::multivector::MultiVector;
use crate::sdr::{
    image_closed_under_wedge, integral_pairing, isotrope_sdr, meinrenken_sdr, parse_isotrope, verify_cyclic,
    verify_sdr, Ambient, SdrData,
};
use crate::transfer::dot::{decorate, emit_tree_diagram};
use crate::transfer::hpl::{hpl_truncated, DEFAULT_BLOCK_CAP};
use crate::transfer::tables::BUDGET_ENV;
use crate::transfer::{enumerate_trees, Kind, vanishing_report, Budget, TransferContext, DEFAULT_ARITY_CAP};

pub const SCHEMA: &str = "hpt-bv/1";

#[derive(Parser, Debug)]
#[command(name = "hpt-bv", version, about = "Exact homotopy transfer and BV checks for Lie algebra cohomology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AlgebraArg {
    /// Built-in name (su2, su3, affine2, abelian(n), double(g,k)) or a JSON file.
    #[arg(long, default_value = "su2")]
    pub algebra: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RetractArgs {
    #[command(flatten)]
    pub algebra: AlgebraArg,
    /// `full`, `meinrenken`, or degree-1 vectors such as "e1+e2, e3".
    #[arg(long, default_value = "meinrenken")]
    pub isotrope: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Lie axioms, the Killing form and unimodularity.
    Validate(AlgebraArg),
    /// Chevalley–Eilenberg cohomology with representatives.
    Cohomology(AlgebraArg),
    /// Build a deformation retract and run its checks.
    Sdr(RetractArgs),
    /// Transferred products or brackets and their vanishing.
    Transfer {
        #[command(flatten)]
        retract: RetractArgs,
        /// Transfer the wedge product (C∞).
        #[arg(long)]
        scalar: bool,
        /// Transfer the bracket of Λ ⊗ 𝔤 (L∞).
        #[arg(long)]
        coefficients: Option<String>,
        /// Inclusive range such as 3..6.
        #[arg(long, default_value = "3..6")]
        arity: String,
        /// Write one DOT file per tree.
        #[arg(long)]
        emit_trees: Option<PathBuf>,
    },
    /// Classical and quantum master equations for the BV action.
    Qme {
        #[arg(long, default_value = "su2")]
        coefficients: String,
        /// identity, killing, or default (the algebra's own pairing, else Killing).
        #[arg(long, default_value = "default")]
        pairing: String,
    },
    /// Compare the perturbation lemma with the tree formula.
    HplCheck {
        #[command(flatten)]
        retract: RetractArgs,
        #[arg(long, default_value = "su2")]
        coefficients: String,
        #[arg(long, default_value_t = 4)]
        words: usize,
    },
}

/// What a command produced.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Rendered {
    code: i32,
    text: String,
    json: Value,
}

impl Rendered {
    fn new(code: i32, text: String, json: Value) -> Self {
        Self { code, text, json }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::UnknownAlgebra(_) | Error::Json(_) | Error::Io(_) | Error::ArityOverCap { .. } => 2,
        Error::BudgetExceeded(_) => 3,
        _ => 1,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (name, config) = describe(&cli.command);
    match dispatch(&cli.command) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Text => r.text,
                Format::Json => {
                    let doc = json!({ "schema": SCHEMA, "command": name, "config": config, "exit_code": r.code, "report": r.json });
                    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
                }
            };
            Outcome { code: r.code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = exit_code(&e);
            let stdout = match cli.format {
                Format::Json => {
                    let doc = json!({ "schema": SCHEMA, "command": name, "config": config, "exit_code": code, "error": e.to_string() });
                    serde_json::to_string_pretty(&doc).expect("error serializes") + "\n"
                }
                Format::Text => String::new(),
            };
            Outcome { code, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn describe(c: &Command) -> (&'static str, Value) {
    match c {
        Command::Validate(a) => ("validate", json!(a)),
        Command::Cohomology(a) => ("cohomology", json!(a)),
        Command::Sdr(r) => ("sdr", json!(r)),
        Command::Transfer { retract, scalar, coefficients, arity, emit_trees } => (
            "transfer",
            json!({ "retract": retract, "scalar": scalar, "coefficients": coefficients, "arity": arity,
                    "emit_trees": emit_trees, "budget_per_arity": Budget::from_env().per_arity }),
        ),
        Command::Qme { coefficients, pairing } => ("qme", json!({ "coefficients": coefficients, "pairing": pairing })),
        Command::HplCheck { retract, coefficients, words } => (
            "hpl-check",
            json!({ "retract": retract, "coefficients": coefficients, "words": words }),
        ),
    }
}

fn dispatch(c: &Command) -> Result<Rendered> {
    match c {
        Command::Validate(a) => cmd_validate(&load_algebra(&a.algebra)?),
        Command::Cohomology(a) => cmd_cohomology(&load_algebra(&a.algebra)?),
        Command::Sdr(r) => cmd_sdr(r),
        Command::Transfer { retract, scalar, coefficients, arity, emit_trees } => {
            cmd_transfer(retract, *scalar, coefficients.as_deref(), arity, emit_trees.as_deref())
        }
        Command::Qme { coefficients, pairing } => cmd_qme(coefficients, pairing),
        Command::HplCheck { retract, coefficients, words } => cmd_hpl_check(retract, coefficients, *words),
    }
}

/// A built-in name, or a path to a JSON file in the `lie_algebra` schema.
pub fn load_algebra(spec: &str) -> Result<LieAlgebraData> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        return LieAlgebraData::from_json_str(name, &text);
    }
    builtin(spec)
}

/// `"3..6"`, `"3..=6"` or `"4"`, within [2, cap].
pub fn parse_arity_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("arity range '{s}' (expected e.g. 3..6)"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo < 2 || lo > hi {
        return Err(bad());
    }
    if hi > DEFAULT_ARITY_CAP {
        return Err(Error::ArityOverCap { arity: hi, cap: DEFAULT_ARITY_CAP });
    }
    Ok((lo, hi))
}

/// The retract named by `--isotrope`.
pub fn build_retract(ce: &CeComplex, isotrope: &str) -> Result<SdrData> {
    match isotrope.trim() {
        "meinrenken" => meinrenken_sdr(ce),
        "full" => {
            let n = ce.algebra.dim();
            isotrope_sdr(ce, &(0..n).map(|i| ce.generator(i)).collect::<Vec<_>>())
        }
        spec => isotrope_sdr(ce, &parse_isotrope(spec, ce.algebra.dim())?),
    }
}

fn violation_text(g: &LieAlgebraData, v: &Violation) -> String {
    let b = |i: &usize| g.basis[*i].clone();
    match v {
        Violation::Antisymmetry { i, j } => format!("[{}, {}] is not graded antisymmetric", b(i), b(j)),
        Violation::DegreeMismatch { i, j, k } => {
            format!("[{}, {}] has a component on {} of the wrong degree", b(i), b(j), b(k))
        }
        Violation::Jacobi { i, j, k, residual } => {
            let r: Vec<String> = residual.iter().map(|(a, c)| format!("{c}·{}", b(a))).collect();
            format!("Jacobi fails on ({}, {}, {}): residual {}", b(i), b(j), b(k), r.join(" + "))
        }
        Violation::PairingShape => "pairing has the wrong shape".into(),
        Violation::PairingAsymmetric { i, j } => format!("pairing is not symmetric at ({}, {})", b(i), b(j)),
        Violation::PairingDegenerate => "pairing is degenerate".into(),
    }
}

fn cmd_validate(g: &LieAlgebraData) -> Result<Rendered> {
    let r = validate_lie(g);
    let killing = killing_form(g);
    let mut text = format!("algebra {} (dim {})\n", g.name, g.dim());
    if r.is_valid() {
        text += "Lie axioms: ok\n";
    } else {
        text += &format!("Lie axioms: {} violations\n", r.violations.len());
        if let Some(v) = r.violations.first() {
            text += &format!("  witness: {}\n", violation_text(g, v));
        }
    }
    text += &format!("Killing form: {}\n", if killing.degenerate { "degenerate" } else { "non-degenerate" });
    if let Some(inv) = r.pairing_invariant {
        text += &format!("given pairing invariant: {}\n", if inv { "yes" } else { "no" });
    }
    text += &format!(
        "{} (trace vector [{}])\n",
        if r.unimodular { "unimodular" } else { "non-unimodular" },
        r.trace_vector.join(", ")
    );
    let code = if r.is_valid() { 0 } else { 1 };
    let json = json!({ "validation": r, "killing_degenerate": killing.degenerate });
    Ok(Rendered::new(code, text, json))
}

fn cmd_cohomology(g: &LieAlgebraData) -> Result<Rendered> {
    let ce = CeComplex::new(g)?;
    let r = ce.report();
    let dims: Vec<String> = r.cohomology_dims.iter().map(|d| d.to_string()).collect();
    let text = format!("{}\n{}", dims.join(","), r.to_text());
    Ok(Rendered::new(0, text, json!(r)))
}

fn k_table(s: &SdrData) -> Vec<(String, String)> {
    (0..s.source.dim())
        .filter_map(|j| {
            let v = s.k.apply(&SparseVec::basis(j));
            (!v.is_zero()).then(|| (s.source_label(&SparseVec::basis(j)), s.source_label(&v)))
        })
        .collect()
}

fn cmd_sdr(r: &RetractArgs) -> Result<Rendered> {
    let g = load_algebra(&r.algebra.algebra)?;
    let ce = CeComplex::new(&g)?;
    let s = build_retract(&ce, &r.isotrope)?;
    let checks = verify_sdr(&s);
    let pairing = s.pairing.clone().unwrap_or_else(|| integral_pairing(&ce));
    let cyclic = verify_cyclic(&s, &pairing);
    let (closed, witness) = image_closed_under_wedge(&s);
    let mut text = format!("retract {}\nW dimensions by degree: {:?}\n", s.label, s.reduced_dims());
    for n in &s.notes {
        text += &format!("note: {n}\n");
    }
    text += "retract identities:\n";
    text += &checks.to_text();
    text += &format!("cyclicity ({}):\n", cyclic.convention);
    for c in &cyclic.checks {
        text += &format!("  [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.name);
        if let Some(w) = &c.witness {
            text += &format!("  (witness: {w})");
        }
        text += "\n";
    }
    let sign = |x: Option<i32>| x.map_or("none".to_string(), |v| format!("{v:+}"));
    text += &format!("d† = {}·d, k† = {}·k\n", sign(cyclic.d_adjoint_sign), sign(cyclic.k_adjoint_sign));
    let witness_text = witness.map(|(a, b)| format!("{} ∧ {}", s.reduced_label(a), s.reduced_label(b)));
    text += &format!("image closed under wedge: {closed}");
    if let Some(w) = &witness_text {
        text += &format!(" (witness: {w} leaves im e)");
    }
    text += "\n";
    let table = k_table(&s);
    if s.source.dim() <= 64 {
        text += "k table:\n";
        for (a, b) in &table {
            let _ = writeln!(text, "  k({a}) = {b}");
        }
    }
    let code = if checks.all_pass() { 0 } else { 1 };
    let json = json!({
        "retract": s.to_json(),
        "identities": checks,
        "cyclic": cyclic,
        "closed_under_wedge": closed,
        "closed_under_wedge_witness": witness_text,
        "k_table": table,
    });
    Ok(Rendered::new(code, text, json))
}

fn cmd_transfer(
    r: &RetractArgs,
    scalar: bool,
    coefficients: Option<&str>,
    arity: &str,
    emit: Option<&Path>,
) -> Result<Rendered> {
    if scalar && coefficients.is_some() {
        return Err(Error::Parse("choose either --scalar or --coefficients".into()));
    }
    let (lo, hi) = parse_arity_range(arity)?;
    let g = load_algebra(&r.algebra.algebra)?;
    let ce = CeComplex::new(&g)?;
    let base = build_retract(&ce, &r.isotrope)?;
    let s = match coefficients {
        Some(c) => tensor_sdr(&ce, &base, &load_algebra(c)?)?,
        None => base,
    };
    let ctx = TransferContext::new(&s)?;
    let budget = Budget::from_env();
    let report = vanishing_report(&ctx, lo, hi, budget)?;
    let mut text = report.to_text();
    if let (Kind::Commutative, Ambient::Forms { dim }) = (ctx.kind, &s.ambient) {
        // on forms the witness is also shown through the orthonormal Hodge star
        for a in &report.arities {
            if let Some(w) = &a.witness {
                let inputs: Vec<SparseVec> = w.inputs.iter().map(|&i| SparseVec::basis(i)).collect();
                let value = ce.hodge_star(&ctx.embed(&ctx.c_transfer(&inputs)?));
                let _ = writeln!(text, "  arity {}: ⋆ of the witness value = {}", a.arity, MultiVector::from_coeffs(*dim, value));
            }
        }
    }
    let mut written = Vec::new();
    if let Some(dir) = emit {
        std::fs::create_dir_all(dir)?;
        for a in &report.arities {
            let trees = enumerate_trees(a.arity)?;
            for (t, tree) in trees.iter().enumerate() {
                let dec = a.witness.as_ref().map(|w| decorate(&ctx, tree, &w.inputs));
                let path = dir.join(format!("arity{}_tree{}.dot", a.arity, t + 1));
                std::fs::write(&path, emit_tree_diagram(tree, dec.as_ref()))?;
                written.push(path.display().to_string());
            }
        }
        text += &format!("wrote {} DOT files to {}\n", written.len(), dir.display());
    }
    let code = if report.truncated { 3 } else { 0 };
    if report.truncated {
        text += &format!("partial report: raise {BUDGET_ENV} to finish\n");
    }
    Ok(Rendered::new(code, text, json!({ "vanishing": report, "dot_files": written })))
}

fn cmd_qme(coefficients: &str, pairing: &str) -> Result<Rendered> {
    let g = load_algebra(coefficients)?;
    let t = named_pairing(&g, pairing)?;
    let q = qme_obstruction(&g, &t, pairing)?;
    let c = no_counterterm_check(&g, &t)?;
    let text = q.to_text() + &c.to_text();
    let code = if q.equivalence_holds { 0 } else { 1 };
    Ok(Rendered::new(code, text, json!({ "master_equations": q, "counterterm": c })))
}

fn cmd_hpl_check(r: &RetractArgs, coefficients: &str, words: usize) -> Result<Rendered> {
    if words > 6 {
        return Err(Error::Parse(format!("word cap {words} outside 0..=6")));
    }
    let g = load_algebra(&r.algebra.algebra)?;
    let ce = CeComplex::new(&g)?;
    let base = build_retract(&ce, &r.isotrope)?;
    let s = tensor_sdr(&ce, &base, &load_algebra(coefficients)?)?;
    let ctx = TransferContext::new(&s)?;
    let report = hpl_truncated(&ctx, words, Budget::from_env(), DEFAULT_BLOCK_CAP)?;
    let text = format!("retract {}\n{}", s.label, report.to_text());
    let code = if report.equal { 0 } else { 1 };
    Ok(Rendered::new(code, text, json!(report)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("hpt-bv").chain(args.iter().copied()))
    }

    #[test]
    fn arity_ranges() {
        assert_eq!(parse_arity_range("3..6").unwrap(), (3, 6));
        assert_eq!(parse_arity_range("3..=5").unwrap(), (3, 5));
        assert_eq!(parse_arity_range("4").unwrap(), (4, 4));
        assert!(parse_arity_range("1..3").is_err());
        assert!(matches!(parse_arity_range("3..9"), Err(Error::ArityOverCap { .. })));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["validate", "--algebra", "nonsense"]).code, 2);
        assert_eq!(go(&["transfer", "--arity", "3..12"]).code, 2);
        assert_eq!(go(&["frobnicate"]).code, 2);
        assert_eq!(go(&["validate", "--algebra", "su3"]).code, 0);
        assert_eq!(go(&["--help"]).code, 0);
    }

    #[test]
    fn json_has_schema() {
        let o = go(&["cohomology", "--algebra", "abelian(2)", "--format", "json"]);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["report"]["cohomology_dims"], json!([1, 2, 1]));
    }
}
