//! The `wha` command line: validate, analyze, deform, generate and compare
//! weak Hopf structures stored as JSON documents.
//!
//! Reports go to stdout as JSON, diagnostics to stderr. Exit codes:
//! 0 success, 1 error, 2 validation failed, 3 provably non-isomorphic.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use wha_core::deform::{
    canonical_element, compare_invariants, deform_verified, kappa_squared_on_base, sample_admissible_with, AdmissibleK,
};
use wha_core::instances::{function_algebra_wha, op_tensor_wha, pair_groupoid_wha, FiniteGroupoid};
use wha_core::io::{load, load_element, save_with, Coordinates, ElementDocument};
use wha_core::weak_hopf::{cartan_source, cartan_target, check_axioms, haar_measure, haar_projection, is_weak_kac};
use wha_core::{default_tol, BlockAlgebra, WeakHopf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_NON_ISOMORPHIC: i32 = 3;

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "WHA_TOL";

#[derive(Parser, Debug)]
#[command(name = "wha", version, about = "Finite weak Hopf C*-algebras: checks, invariants and deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TolArg {
    /// Absolute tolerance; overrides WHA_TOL and the dimension default.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the axiom suite; exit 2 if any axiom fails.
    Validate {
        /// Document path, `-` for stdin.
        #[arg(default_value = "-")]
        file: String,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Cartan subalgebras, Haar projection and measure, canonical element,
    /// spectrum invariant and weak Kac flags.
    Analyze {
        #[arg(default_value = "-")]
        file: String,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Deform by an admissible base element and print the new document.
    Deform {
        #[arg(default_value = "-")]
        file: String,
        #[command(flatten)]
        mode: DeformMode,
        /// Seed for `--sample`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the verification report here instead of stderr.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Print a document for a built-in family.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Compare spectrum invariants; exit 3 when they certify
    /// non-isomorphism.
    Invariant {
        left: String,
        right: String,
        /// Distances above this count as distinct.
        #[arg(long, default_value_t = 1e-6)]
        separation: f64,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DeformMode {
    /// Use k = q, which makes the antipode involutive on the base.
    #[arg(long)]
    canonical: bool,
    /// Element document holding k.
    #[arg(long, value_name = "ELEMENT")]
    k: Option<String>,
    /// Draw k from the seeded sampler.
    #[arg(long)]
    sample: bool,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Matrix algebra of the pair groupoid on n objects.
    PairGroupoid {
        #[arg(long)]
        n: usize,
    },
    /// Function algebra of a groupoid, e.g. `cyclic:3*pair:2`.
    FunctionGroupoid { spec: String },
    /// The structure on B^op ⊗ B for a block algebra B.
    OpTensor {
        #[arg(long, num_args = 1.., required = true)]
        blocks: Vec<usize>,
    },
}

/// Process-level I/O handles, injectable for tests.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Value of `WHA_TOL`, if set.
    pub env_tol: Option<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<wha_core::Error> for Failure {
    fn from(e: wha_core::Error) -> Self {
        Self { code: EXIT_ERROR, message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_ERROR, message: message.into() }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parse `args` (including the program name) and run; returns the exit
/// code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(io.stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> Outcome {
    match cmd {
        Command::Validate { file, tol } => validate(&file, tol.tol, io),
        Command::Analyze { file, tol } => analyze(&file, tol.tol, io),
        Command::Deform { file, mode, seed, report, tol } => deform_cmd(&file, &mode, seed, report, tol.tol, io),
        Command::Generate { family } => generate(family, io),
        Command::Invariant { left, right, separation, tol } => invariant(&left, &right, separation, tol.tol, io),
    }
}

fn read_input(path: &str, io: &mut Io<'_>) -> std::result::Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    if path == "-" {
        io.stdin.read_to_end(&mut buf).map_err(|e| fail(format!("stdin: {e}")))?;
    } else {
        buf = std::fs::read(path).map_err(|e| fail(format!("{path}: {e}")))?;
    }
    Ok(buf)
}

fn read_structure(path: &str, io: &mut Io<'_>) -> std::result::Result<WeakHopf, Failure> {
    let bytes = read_input(path, io)?;
    load(&bytes).map_err(|e| fail(format!("{path}: {e}")))
}

fn resolve_tol(flag: Option<f64>, io: &Io<'_>, dim: usize) -> std::result::Result<f64, Failure> {
    let tol = match (flag, &io.env_tol) {
        (Some(t), _) => t,
        (None, Some(s)) => s.trim().parse::<f64>().map_err(|_| fail(format!("{TOL_ENV}={s:?} is not a number")))?,
        (None, None) => default_tol(dim),
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(fail(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn emit_json(v: &Value, io: &mut Io<'_>) -> std::result::Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    io.stdout.write_all(s.as_bytes()).map_err(|e| fail(format!("stdout: {e}")))
}

fn emit_bytes(b: &[u8], io: &mut Io<'_>) -> std::result::Result<(), Failure> {
    io.stdout.write_all(b).map_err(|e| fail(format!("stdout: {e}")))
}

fn validate(file: &str, tol: Option<f64>, io: &mut Io<'_>) -> Outcome {
    let w = read_structure(file, io)?;
    let tol = resolve_tol(tol, io, w.dim())?;
    let report = check_axioms(&w, tol);
    let failing = report.failing().into_iter().map(str::to_string).collect::<Vec<_>>();
    emit_json(&json!({ "pass": report.pass, "tol": tol, "failing": failing, "residuals": report.residuals }), io)?;
    if report.pass {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(io.stderr, "axioms failing: {}", failing.join(", "));
        Ok(EXIT_FAIL)
    }
}

fn analyze(file: &str, tol: Option<f64>, io: &mut Io<'_>) -> Outcome {
    let w = read_structure(file, io)?;
    let tol = resolve_tol(tol, io, w.dim())?;
    let target = cartan_target(&w, tol)?;
    let source = cartan_source(&w, tol)?;
    let p = haar_projection(&w, tol)?;
    let phi = haar_measure(&w, tol)?;
    let canon = canonical_element(&w, tol)?;
    let kac = is_weak_kac(&w, tol)?;
    let phi_values: Vec<[f64; 2]> = phi.phi.matrix().iter().map(|z| [z.re, z.im]).collect();
    let out = json!({
        "algebra": { "blocks": w.algebra().blocks(), "dim": w.dim() },
        "tol": tol,
        "target_base": { "blocks": target.blocks(), "dim": target.dim() },
        "source_base": { "blocks": source.blocks(), "dim": source.dim() },
        "haar_projection": ElementDocument::new(&p.p, Coordinates::Ambient),
        "haar_measure": { "values": phi_values, "gram_min_eigenvalue": phi.gram_min_eigenvalue },
        "canonical_element": {
            "q": ElementDocument::new(&canon.q, Coordinates::Ambient),
            "q_base": ElementDocument::new(&canon.q_t, Coordinates::Base),
            "cross_check": canon.cross_check,
        },
        "spectrum_invariant": canon.spectrum,
        "kappa_squared_on_base": kappa_squared_on_base(&w, tol)?,
        "weak_kac": kac,
    });
    emit_json(&out, io)?;
    Ok(EXIT_OK)
}

fn deform_cmd(
    file: &str,
    mode: &DeformMode,
    seed: u64,
    report_path: Option<PathBuf>,
    tol: Option<f64>,
    io: &mut Io<'_>,
) -> Outcome {
    let w = read_structure(file, io)?;
    let tol = resolve_tol(tol, io, w.dim())?;
    let canon = canonical_element(&w, tol)?;
    let mut meta = BTreeMap::new();
    meta.insert("operation".to_string(), json!("deform"));
    let k = if mode.canonical {
        meta.insert("mode".into(), json!("canonical"));
        AdmissibleK::new(&w, &canon, canon.q.clone(), tol)?
    } else if let Some(path) = &mode.k {
        meta.insert("mode".into(), json!("element"));
        let bytes = read_input(path, io)?;
        let (x, coords) = load_element(&bytes).map_err(|e| fail(format!("{path}: {e}")))?;
        match coords {
            Coordinates::Ambient => AdmissibleK::new(&w, &canon, x, tol)?,
            Coordinates::Base => AdmissibleK::from_base_coords(&w, &canon, &x, tol)?,
        }
    } else {
        meta.insert("mode".into(), json!("sample"));
        meta.insert("seed".into(), json!(seed));
        sample_admissible_with(&w, &canon, seed, tol)?
    };
    meta.insert("k_inverse_q_spectrum".into(), json!(k.spectrum));
    let d = deform_verified(&w, &k, tol)?;
    let report = json!({ "pass": d.report.pass, "tol": tol, "residuals": d.report.residuals, "spectrum_invariant": d.canonical.spectrum });
    match report_path {
        Some(p) => {
            let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
            s.push('\n');
            std::fs::write(&p, s).map_err(|e| fail(format!("{}: {e}", p.display())))?;
        }
        None => {
            let _ = writeln!(
                io.stderr,
                "deformation verified at tol {tol:.1e}, max residual {:.3e}",
                d.report.max_residual()
            );
        }
    }
    emit_bytes(&save_with(&d.structure, meta), io)?;
    Ok(EXIT_OK)
}

fn generate(family: Family, io: &mut Io<'_>) -> Outcome {
    let mut meta = BTreeMap::new();
    let w = match family {
        Family::PairGroupoid { n } => {
            meta.insert("family".to_string(), json!("pair-groupoid"));
            meta.insert("n".into(), json!(n));
            pair_groupoid_wha(n)?
        }
        Family::FunctionGroupoid { spec } => {
            meta.insert("family".to_string(), json!("function-groupoid"));
            meta.insert("groupoid".into(), json!(spec));
            function_algebra_wha(&FiniteGroupoid::parse(&spec)?)?
        }
        Family::OpTensor { blocks } => {
            meta.insert("family".to_string(), json!("op-tensor"));
            meta.insert("blocks".into(), json!(blocks));
            op_tensor_wha(&BlockAlgebra::new(blocks, "B")?)?
        }
    };
    emit_bytes(&save_with(&w, meta), io)?;
    Ok(EXIT_OK)
}

fn invariant(left: &str, right: &str, separation: f64, tol: Option<f64>, io: &mut Io<'_>) -> Outcome {
    if left == "-" && right == "-" {
        return Err(fail("at most one input may be stdin"));
    }
    let a = read_structure(left, io)?;
    let b = read_structure(right, io)?;
    let tol = resolve_tol(tol, io, a.dim().max(b.dim()))?;
    let cmp = compare_invariants(&a, &b, tol, separation)?;
    emit_json(&json!(cmp), io)?;
    Ok(if cmp.non_isomorphic { EXIT_NON_ISOMORPHIC } else { EXIT_OK })
}
