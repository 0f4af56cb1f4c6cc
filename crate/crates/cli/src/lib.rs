//! Command dispatch for the `pointgb` binary. [`run`] never touches the
//! process: it takes stdin contents and returns the exit code with both
//! output streams, so every command is testable in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pointgb::aoe::{axis_of_evil, reduce_basis, AoeError, AoeOptions, FactoredGroebnerBasis};
use pointgb::cemu::{cemu, CemuError, PointSet};
use pointgb::gen::{generate, GenError, GenSpec};
use pointgb::io::{
    certificate_to_json, factored_to_json, parse_points, polynomial_to_json, render_points_csv, render_points_json,
    BasisDocument, InputError, PointFormat, SchemaError,
};
use pointgb::potexp::{minimal_basis, PotexpError};
use pointgb::verify::{certify, GbCertificate, VerifyError};
use pointgb::{Execution, Field, Polynomial, Term};
use serde::Serialize;

pub const FIELD_ENV: &str = "POINTGB_FIELD";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pointgb", version, about = "Lex Groebner bases of ideals of points")]
pub struct Cli {
    #[command(flatten)]
    pub session: SessionConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SessionConfig {
    /// Coefficient field: `q` for the rationals or `fp:<prime>`.
    #[arg(long, global = true, env = FIELD_ENV, default_value = "q")]
    pub field: Field,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Skip recomputing the escalier and minimal basis before factoring.
    #[arg(long, global = true)]
    pub no_validate: bool,
    /// Factor the basis elements on all cores.
    #[arg(long, global = true)]
    pub parallel: bool,
}

impl SessionConfig {
    fn execution(&self) -> Execution {
        if self.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the point-to-term correspondence in input order.
    Escalier(Input),
    /// Print the minimal generators of the initial ideal, lex ascending.
    Minbasis(Input),
    /// Factor every basis element into linear factors.
    Aoe {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        factored: bool,
        #[arg(long)]
        expanded: bool,
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        certificate: bool,
    },
    /// Check a saved `aoe --format json` document against the points.
    Verify {
        points: PathBuf,
        basis: PathBuf,
    },
    /// Print random distinct points.
    Gen {
        #[arg(long = "n")]
        nvars: usize,
        #[arg(long)]
        points: usize,
        /// Inclusive coordinate range `lo:hi`.
        #[arg(long, default_value = "0:6", value_parser = parse_range, allow_hyphen_values = true)]
        coord_range: (i64, i64),
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// CSV or JSON points; stdin when absent or `-`.
    pub input: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: InputError },
    #[error("{}: {source}", path.display())]
    Schema { path: PathBuf, source: SchemaError },
    #[error("document is over {doc}, points are over {points}")]
    FieldMismatch { doc: Field, points: Field },
    #[error(transparent)]
    Cemu(#[from] CemuError),
    #[error(transparent)]
    Potexp(#[from] PotexpError),
    #[error(transparent)]
    Aoe(#[from] AoeError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command. `stdin` is read only when an input path is absent or `-`.
pub fn run(cli: &Cli, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> Outcome {
    match dispatch(cli, stdin) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read_input(
    path: Option<&Path>,
    stdin: &mut dyn FnMut() -> std::io::Result<String>,
) -> Result<(PathBuf, String), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map(|t| (p.to_owned(), t)).map_err(|source| CliError::Io { path: p.to_owned(), source })
        }
        _ => {
            let path = PathBuf::from("<stdin>");
            stdin().map(|t| (path.clone(), t)).map_err(|source| CliError::Io { path, source })
        }
    }
}

fn load_points(
    input: &Input,
    field: Field,
    stdin: &mut dyn FnMut() -> std::io::Result<String>,
) -> Result<PointSet, CliError> {
    let (path, text) = read_input(input.input.as_deref(), stdin)?;
    parse_points(&text, PointFormat::sniff(&text), field).map_err(|source| CliError::Input { path, source })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn exponents(ts: impl IntoIterator<Item = Term>) -> Vec<Vec<u32>> {
    ts.into_iter().map(|t| t.exponents().to_vec()).collect()
}

fn render_point(p: &[pointgb::Scalar]) -> String {
    let cells: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", cells.join(", "))
}

#[derive(Serialize)]
struct EscalierEntry {
    point: usize,
    coordinates: Vec<String>,
    term: Vec<u32>,
}

#[derive(Serialize)]
struct MinbasisDoc {
    field: String,
    nvars: usize,
    generators: Vec<Vec<u32>>,
}

fn dispatch(cli: &Cli, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> Result<(i32, String), CliError> {
    let cfg = &cli.session;
    let mut out = String::new();
    match &cli.command {
        Command::Escalier(input) => {
            let x = load_points(input, cfg.field, stdin)?;
            let e = cemu(&x)?;
            match cfg.format {
                OutputFormat::Text => {
                    for (k, t) in e.terms().iter().enumerate() {
                        writeln!(out, "P{} → {}", k + 1, t).unwrap();
                    }
                }
                OutputFormat::Json => {
                    let entries: Vec<EscalierEntry> = x
                        .points()
                        .iter()
                        .zip(e.terms())
                        .enumerate()
                        .map(|(k, (p, t))| EscalierEntry {
                            point: k + 1,
                            coordinates: p.iter().map(ToString::to_string).collect(),
                            term: t.exponents().to_vec(),
                        })
                        .collect();
                    out = json(&entries);
                }
            }
        }
        Command::Minbasis(input) => {
            let x = load_points(input, cfg.field, stdin)?;
            let g = minimal_basis(&cemu(&x)?.term_set(), x.nvars())?;
            match cfg.format {
                OutputFormat::Text => {
                    for t in &g {
                        writeln!(out, "{t}").unwrap();
                    }
                }
                OutputFormat::Json => {
                    out = json(&MinbasisDoc { field: cfg.field.to_string(), nvars: x.nvars(), generators: exponents(g) })
                }
            }
        }
        Command::Aoe { input, factored, expanded, reduced, certificate } => {
            let x = load_points(input, cfg.field, stdin)?;
            let e = cemu(&x)?;
            let g = minimal_basis(&e.term_set(), x.nvars())?;
            let gb = axis_of_evil(&x, &e, &g, AoeOptions { validate: !cfg.no_validate, execution: cfg.execution() })?;
            let show_factored = *factored || !(*expanded || *reduced);
            let expanded_polys = gb.expanded();
            let reduced_polys = if *reduced { Some(reduce_basis(&expanded_polys)?) } else { None };
            let cert = if *certificate { Some(certify(&expanded_polys, &x, false)?) } else { None };
            match cfg.format {
                OutputFormat::Text => {
                    if show_factored {
                        out.push_str("[factored]\n");
                        write_factored(&mut out, &gb);
                    }
                    if *expanded {
                        out.push_str("[expanded]\n");
                        write_polys(&mut out, &expanded_polys);
                    }
                    if let Some(r) = &reduced_polys {
                        out.push_str("[reduced]\n");
                        write_polys(&mut out, r);
                    }
                    if let Some(c) = &cert {
                        out.push_str("[certificate]\n");
                        write_certificate(&mut out, c, &x);
                    }
                }
                OutputFormat::Json => {
                    let doc = BasisDocument {
                        field: cfg.field.to_string(),
                        nvars: x.nvars(),
                        factored: show_factored.then(|| gb.elements.iter().map(factored_to_json).collect()),
                        expanded: expanded.then(|| expanded_polys.iter().map(polynomial_to_json).collect()),
                        reduced: reduced_polys.as_ref().map(|r| r.iter().map(polynomial_to_json).collect()),
                        certificate: cert.as_ref().map(certificate_to_json),
                    };
                    out = doc.to_json_pretty();
                    out.push('\n');
                }
            }
        }
        Command::Verify { points, basis } => {
            let (path, text) = read_input(Some(basis), stdin)?;
            let doc = BasisDocument::parse(&text).map_err(|source| CliError::Schema { path: path.clone(), source })?;
            let field = doc.field().map_err(|source| CliError::Schema { path: path.clone(), source })?;
            if field != cfg.field {
                return Err(CliError::FieldMismatch { doc: field, points: cfg.field });
            }
            let polys = doc.polynomials().map_err(|source| CliError::Schema { path, source })?;
            let x = load_points(&Input { input: Some(points.clone()) }, field, stdin)?;
            let cert = certify(&polys, &x, false)?;
            match cfg.format {
                OutputFormat::Text => write_certificate(&mut out, &cert, &x),
                OutputFormat::Json => out = json(&certificate_to_json(&cert)),
            }
            return Ok((if cert.is_valid() { 0 } else { 1 }, out));
        }
        Command::Gen { nvars, points, coord_range: (lo, hi), seed } => {
            let x = generate(cfg.field, GenSpec { nvars: *nvars, points: *points, lo: *lo, hi: *hi, seed: *seed })?;
            out = match cfg.format {
                OutputFormat::Text => render_points_csv(&x),
                OutputFormat::Json => render_points_json(&x) + "\n",
            };
        }
    }
    Ok((0, out))
}

fn write_factored(out: &mut String, gb: &FactoredGroebnerBasis) {
    for el in &gb.elements {
        let factors: Vec<String> = el.factors.iter().map(|f| format!("({})", f.body)).collect();
        writeln!(out, "{}: {}", el.tau, factors.join("*")).unwrap();
    }
}

fn write_polys(out: &mut String, polys: &[Polynomial]) {
    for f in polys {
        writeln!(out, "{f}").unwrap();
    }
}

fn write_certificate(out: &mut String, c: &GbCertificate, x: &PointSet) {
    let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };
    writeln!(out, "vanishing: {}", verdict(c.vanishing.passed())).unwrap();
    for e in &c.vanishing.dimension_mismatches {
        writeln!(out, "  element {} has the wrong number of variables", e + 1).unwrap();
    }
    for w in &c.vanishing.failures {
        writeln!(
            out,
            "  element {} does not vanish at P{} = {}: value {}",
            w.element + 1,
            w.point + 1,
            render_point(x.get(w.point)),
            w.value
        )
        .unwrap();
    }
    let list = |ts: &[Term]| ts.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    writeln!(out, "leading terms: {} [{}]", verdict(c.leading_terms_match()), list(&c.leading_terms)).unwrap();
    if !c.leading_terms_match() {
        writeln!(out, "  expected [{}]", list(&c.expected_leading_terms)).unwrap();
    }
    writeln!(out, "escalier size: {} ({} points)", verdict(c.cardinality_ok()), c.point_count).unwrap();
    writeln!(out, "{}", if c.is_valid() { "valid" } else { "INVALID" }).unwrap();
}
