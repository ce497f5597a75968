//! `qdeform` — build named examples, deform user-supplied (group, torus, S)
//! triples, and verify serialized Hopf algebras.
//!
//! Exit codes: 0 when every recorded check passes, 2 on a verification
//! failure (with a witness in the report), 3 on invalid input (with a
//! machine-readable error on stderr naming the violated invariant).

mod pipeline;
mod render;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use pipeline::{build_report, RunSpec};
use qdeform::abelian::{AbelianGroup, Endomorphism};
use qdeform::analyze::{center_dim, flags, verify_hopf, wedderburn};
use qdeform::deform::DeformationDatum;
use qdeform::error::Error;
use qdeform::groups::{d4_example, general_linear_2, order18_example, FiniteGroup, TorusEmbedding};
use qdeform::hopf::{hopf_from_json, AxiomCheck, HopfJson};

const SCHEMA: &str = "qdeform/1";

#[derive(Parser)]
#[command(
    name = "qdeform",
    version,
    about = "Exact deformation of finite quantum groups by torus twists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deform a named example with the canonical skew twist and report.
    Example {
        /// One of: order18, d4, gl2.
        name: String,
        /// Field size for gl2 (required there, rejected elsewhere).
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Deform a user-supplied (group, torus, S) triple.
    Deform {
        /// Named constructor (order18, d4, gl2) or path to a group JSON file.
        #[arg(long)]
        group: String,
        /// Comma-separated torus invariant factors, cross-checked against
        /// the embedding (e.g. "3,3").
        #[arg(long)]
        torus: Option<String>,
        /// "canonical" (default) or a JSON integer matrix for S.
        #[arg(long = "S")]
        s: Option<String>,
        /// Field size for gl2.
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify a serialized Hopf *-algebra (axioms, flags, blocks).
    Verify {
        /// Path to a JSON file produced by the engine's Hopf serializer.
        path: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Seed for the randomized block decomposition.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to this path (stdout rendering is unaffected).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Skip the floating-point C*-norm battery.
    #[arg(long)]
    skip_norm: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum CliError {
    Lib(Error),
    BadInput(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli, &argv) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(err) => {
            emit_error(&err);
            exit_code_for(&err)
        }
    }
}

fn dispatch(cli: Cli, argv: &[String]) -> Result<bool, CliError> {
    match cli.command {
        Command::Example { name, q, out } => {
            let spec = named_spec(&name, q, &out)?;
            run_deformation(spec, argv, &out)
        }
        Command::Deform {
            group,
            torus,
            s,
            q,
            out,
        } => {
            let spec = deform_spec(&group, torus.as_deref(), s.as_deref(), q, &out)?;
            run_deformation(spec, argv, &out)
        }
        Command::Verify { path, out } => run_verify(&path, argv, &out),
    }
}

// ---------------------------------------------------------------------------
// input assembly

fn named_pair(name: &str, q: Option<usize>) -> Result<(FiniteGroup, TorusEmbedding), CliError> {
    match name {
        "order18" => Ok(order18_example()),
        "d4" => Ok(d4_example()),
        "gl2" => {
            let q = q.ok_or_else(|| CliError::BadInput("gl2 requires --q".into()))?;
            Ok(general_linear_2(q)?)
        }
        other => Err(CliError::BadInput(format!(
            "unknown group '{other}' (expected order18, d4, gl2, or a JSON file path)"
        ))),
    }
}

fn named_spec(name: &str, q: Option<usize>, out: &OutputArgs) -> Result<RunSpec, CliError> {
    if q.is_some() && name != "gl2" {
        return Err(CliError::BadInput(format!("--q is only meaningful for gl2, not '{name}'")));
    }
    let (group, emb) = named_pair(name, q)?;
    let datum = DeformationDatum::canonical(emb.torus.clone())?;
    Ok(RunSpec {
        group,
        emb,
        datum,
        seed: out.seed,
        skip_norm: out.skip_norm,
    })
}

/// On-disk description of a group with an embedded torus: a full Cayley
/// table plus the torus invariant factors and the embedding map.
#[derive(Serialize, Deserialize)]
struct GroupFileJson {
    #[serde(default)]
    schema: String,
    table: Vec<Vec<usize>>,
    torus: TorusFileJson,
}

#[derive(Serialize, Deserialize)]
struct TorusFileJson {
    factors: Vec<u64>,
    map: Vec<usize>,
}

fn load_group_file(path: &Path) -> Result<(FiniteGroup, TorusEmbedding), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let parsed: GroupFileJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Lib(Error::Parse(format!("{}: {e}", path.display()))))?;
    let group = FiniteGroup::new(parsed.table)?;
    let torus = AbelianGroup::new(parsed.torus.factors)?;
    let emb = TorusEmbedding {
        torus,
        map: parsed.torus.map,
    };
    emb.verify(&group)?;
    Ok((group, emb))
}

fn deform_spec(
    group: &str,
    torus: Option<&str>,
    s: Option<&str>,
    q: Option<usize>,
    out: &OutputArgs,
) -> Result<RunSpec, CliError> {
    let (group, emb) = match group {
        "order18" | "d4" | "gl2" => named_pair(group, q)?,
        path => load_group_file(Path::new(path))?,
    };
    if let Some(tspec) = torus {
        let factors = parse_factors(tspec)?;
        if factors != emb.torus.factors() {
            return Err(CliError::BadInput(format!(
                "--torus {:?} does not match the embedded torus {:?}",
                factors,
                emb.torus.factors()
            )));
        }
    }
    let datum = match s {
        None => DeformationDatum::canonical(emb.torus.clone())?,
        Some("canonical") => DeformationDatum::canonical(emb.torus.clone())?,
        Some(rows) => {
            let m: Vec<Vec<i64>> = serde_json::from_str(rows).map_err(|e| {
                CliError::BadInput(format!(
                    "--S must be 'canonical' or a JSON integer matrix: {e}"
                ))
            })?;
            let endo = Endomorphism::new(&emb.torus, &m)?;
            DeformationDatum::new(emb.torus.clone(), endo)?
        }
    };
    Ok(RunSpec {
        group,
        emb,
        datum,
        seed: out.seed,
        skip_norm: out.skip_norm,
    })
}

fn parse_factors(spec: &str) -> Result<Vec<u64>, CliError> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|e| CliError::BadInput(format!("bad torus factor '{p}': {e}")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// command bodies

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: &'static str,
    kind: &'static str,
    provenance: BTreeMap<String, String>,
    report: T,
}

fn provenance(argv: &[String], seed: u64) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("command".into(), argv.join(" "));
    p.insert("seed".into(), seed.to_string());
    p.insert(
        "tool".into(),
        format!("qdeform {}", env!("CARGO_PKG_VERSION")),
    );
    p
}

fn emit<T: Serialize>(
    envelope: &Envelope<T>,
    text: String,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(envelope)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?
        + "\n";
    if let Some(path) = &out.out {
        fs::write(path, &json)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    match out.format {
        Format::Json => print!("{json}"),
        Format::Text => print!("{text}"),
    }
    Ok(())
}

fn run_deformation(spec: RunSpec, argv: &[String], out: &OutputArgs) -> Result<bool, CliError> {
    let report = build_report(&spec)?;
    let pass = report.all_pass();
    let text = render::render_report(&report);
    let envelope = Envelope {
        schema: SCHEMA,
        kind: "deformation",
        provenance: provenance(argv, spec.seed),
        report,
    };
    emit(&envelope, text, out)?;
    Ok(pass)
}

/// Axiom report for a serialized Hopf *-algebra.
#[derive(Serialize)]
struct VerifyReport {
    dim: usize,
    commutative: bool,
    cocommutative: bool,
    axioms: Vec<AxiomCheck>,
    wedderburn_dims: Vec<usize>,
    center_dim: usize,
    notes: Vec<String>,
    all_pass: bool,
}

fn run_verify(path: &Path, argv: &[String], out: &OutputArgs) -> Result<bool, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let parsed: HopfJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Lib(Error::Parse(format!("{}: {e}", path.display()))))?;
    let h = hopf_from_json(&parsed)?;

    let axioms = verify_hopf(&h);
    let (commutative, cocommutative) = flags(&h);
    let n = h.alg.dim();
    let mut notes = Vec::new();
    let (wedderburn_dims, center) = if n <= 200 {
        (wedderburn(&h.alg, out.seed)?, center_dim(&h.alg))
    } else {
        notes.push(format!(
            "block decomposition skipped at dimension {n} (exact-analysis tier is 200)"
        ));
        (Vec::new(), 0)
    };
    let all_pass = axioms.iter().all(|c| c.passed);

    let mut rendered = String::new();
    rendered.push_str(&format!("verification report — dimension {n}\n"));
    rendered.push_str(&format!(
        "  commutative: {:<5}  cocommutative: {}\n",
        commutative, cocommutative
    ));
    if !wedderburn_dims.is_empty() {
        rendered.push_str(&format!(
            "  blocks: {:?}   center dimension: {}\n",
            wedderburn_dims, center
        ));
    }
    render::render_checks(&mut rendered, "axioms", &axioms);
    for note in &notes {
        rendered.push_str(&format!("  note: {note}\n"));
    }
    rendered.push_str(&format!(
        "  overall: {}\n",
        if all_pass { "PASS" } else { "FAIL" }
    ));

    let report = VerifyReport {
        dim: n,
        commutative,
        cocommutative,
        axioms,
        wedderburn_dims,
        center_dim: center,
        notes,
        all_pass,
    };
    let envelope = Envelope {
        schema: SCHEMA,
        kind: "verify",
        provenance: provenance(argv, out.seed),
        report,
    };
    emit(&envelope, rendered, out)?;
    Ok(all_pass)
}

// ---------------------------------------------------------------------------
// error surface

fn variant_name(e: &Error) -> &'static str {
    match e {
        Error::InvalidEndomorphism { .. } => "InvalidEndomorphism",
        Error::NotInvertible { .. } => "NotInvertible",
        Error::InvalidAction { .. } => "InvalidAction",
        Error::InvalidDatum { .. } => "InvalidDatum",
        Error::ActionCheckFailed { .. } => "ActionCheckFailed",
        Error::HopfCheckFailed { .. } => "HopfCheckFailed",
        Error::AlgebraCheckFailed { .. } => "AlgebraCheckFailed",
        Error::NotEquivariant { .. } => "NotEquivariant",
        Error::NotGroupLike { .. } => "NotGroupLike",
        Error::DecompositionUnstable { .. } => "DecompositionUnstable",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::Unsupported(_) => "Unsupported",
        Error::InvalidTable(_) => "InvalidTable",
        Error::InvalidEmbedding(_) => "InvalidEmbedding",
        Error::Parse(_) => "Parse",
    }
}

fn named_check(e: &Error) -> Option<String> {
    match e {
        Error::InvalidDatum { check, .. } => Some(check.clone()),
        Error::HopfCheckFailed { axiom, .. } | Error::AlgebraCheckFailed { axiom, .. } => {
            Some(axiom.clone())
        }
        Error::InvalidEmbedding(_) => Some("torus_embedding".into()),
        Error::InvalidEndomorphism { .. } => Some("endomorphism_matrix".into()),
        _ => None,
    }
}

fn emit_error(err: &CliError) {
    let body = match err {
        CliError::Lib(e) => {
            let mut obj = serde_json::Map::new();
            obj.insert("variant".into(), variant_name(e).into());
            if let Some(check) = named_check(e) {
                obj.insert("check".into(), check.into());
            }
            obj.insert("message".into(), e.to_string().into());
            serde_json::Value::Object(obj)
        }
        CliError::BadInput(msg) => serde_json::json!({
            "variant": "BadInput",
            "message": msg,
        }),
        CliError::Io(msg) => serde_json::json!({
            "variant": "Io",
            "message": msg,
        }),
    };
    let envelope = serde_json::json!({
        "schema": SCHEMA,
        "kind": "error",
        "error": body,
    });
    eprintln!("{}", serde_json::to_string(&envelope).unwrap());
}

fn exit_code_for(err: &CliError) -> i32 {
    match err {
        CliError::Lib(
            Error::HopfCheckFailed { .. }
            | Error::AlgebraCheckFailed { .. }
            | Error::ActionCheckFailed { .. }
            | Error::DecompositionUnstable { .. },
        ) => 2,
        _ => 3,
    }
}
