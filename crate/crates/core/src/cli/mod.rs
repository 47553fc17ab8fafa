//! Command-line front end. [`run`] parses arguments, dispatches, and
//! returns the process exit code: 0 success, 1 verification or axiom
//! failure, 2 usage or hypothesis error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{group_check, AddLaw, AffinePoint, CheckMode, CurveError, CurveParams, Level, Report};
use crate::ffield::{is_prime_u64, PrimeField};
use crate::identities::{certify, verify_certificate, verify_with_seed, CertCache, Certificate, Identity, IdentityError, Verification};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Identity(IdentityError::UnknownIdentity(_)) => EXIT_USAGE,
            CliError::Curve(
                CurveError::HypothesisViolated { .. }
                | CurveError::NotOnCurve(_)
                | CurveError::ModeMismatch(_)
                | CurveError::TauOffDomain(_)
                | CurveError::TooLarge(_),
            ) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "edwards", version, about = "Certificates and finite-field checks for the Edwards group law")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify ideal-membership certificates
    Certify(CertifyArgs),
    /// Check the group axioms over every point of a small curve
    GroupCheck(GroupCheckArgs),
    /// Add two points with one of the addition laws
    Add(AddArgs),
    /// List the points (and gluing classes) of a curve
    Enumerate(EnumerateArgs),
    /// Build one certificate and print or write its JSON
    ExportCert(ExportArgs),
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Field characteristic (odd prime)
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// Selects the rescaled curve c = 1, d = t²
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<i64>,
}

impl CurveArgs {
    fn field(&self) -> Result<PrimeField, CliError> {
        if self.p == 2 || !is_prime_u64(self.p) {
            return Err(CliError::Usage(format!("--p {} is not an odd prime", self.p)));
        }
        PrimeField::new(self.p).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Rescaled when `--t` is given, otherwise general with `c` defaulting to 1.
    fn params(&self) -> Result<CurveParams, CliError> {
        let field = self.field()?;
        match (self.t, self.d) {
            (Some(t), None) if self.c.is_none() => Ok(CurveParams::rescaled(&field, t)?),
            (Some(_), _) => Err(CliError::Usage("--t excludes --c and --d".into())),
            (None, Some(d)) => Ok(CurveParams::general(&field, self.c.unwrap_or(1), d)),
            (None, None) => Err(CliError::Usage("give --d (general curve) or --t (rescaled curve)".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Identity name, family, or name substring
    #[arg(long)]
    pub filter: Option<String>,
    /// Certificates go to <out>/certificates/<name>.json
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Reuse certificates from this directory (they are still verified)
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Seed for the random evaluation points, mixed with each identity name
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GroupCheckArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value = "affine")]
    pub mode: CheckMode,
    #[arg(long, default_value = "full")]
    pub level: Level,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Writes <out>/report.json
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the report JSON instead of the summary
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Layer {
    Affine0,
    Affine1,
    Projective,
}

#[derive(Debug, Args)]
pub struct AddArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// First point as x,y
    #[arg(long = "P", allow_hyphen_values = true)]
    pub p_point: String,
    /// Second point as x,y
    #[arg(long = "Q", allow_hyphen_values = true)]
    pub q_point: String,
    #[arg(long, value_enum, default_value = "affine0")]
    pub layer: Layer,
    /// Copy index of P (projective layer)
    #[arg(long, default_value_t = 0)]
    pub i: u8,
    /// Copy index of Q (projective layer)
    #[arg(long, default_value_t = 0)]
    pub j: u8,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Exact identity name
    pub name: String,
    /// Writes <out>/certificates/<name>.json instead of printing
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        // a closed stdout (e.g. piped into `head`) is not an error
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Curve(CurveError::HypothesisViolated { witness: Some((p, q)), .. }) = &e {
                let _ = writeln!(err, "witness: P = {p}, Q = {q} (delta = 0)");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Certify(a) => cmd_certify(&a, out),
        Command::GroupCheck(a) => cmd_group_check(&a, out),
        Command::Add(a) => cmd_add(&a, out),
        Command::Enumerate(a) => cmd_enumerate(&a, out),
        Command::ExportCert(a) => cmd_export(&a, out),
    }
}

fn write_cert(dir: &Path, cert: &Certificate) -> Result<PathBuf, CliError> {
    let dir = dir.join("certificates");
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{}.json", cert.name));
    fs::write(&path, serde_json::to_string_pretty(&cert.to_json())? + "\n")?;
    Ok(path)
}

#[derive(Serialize)]
struct CertLine {
    name: String,
    passed: bool,
    cofactor_terms: Vec<usize>,
    cofactor_degree: u32,
    multiplier: String,
    cached: bool,
    verification: Option<Verification>,
    error: Option<String>,
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ids: Vec<Identity> = Identity::all()
        .into_iter()
        .filter(|id| a.filter.as_deref().is_none_or(|f| id.matches(f)))
        .collect();
    if ids.is_empty() {
        return Err(CliError::Usage(format!(
            "no identity matches `{}`",
            a.filter.as_deref().unwrap_or_default()
        )));
    }
    let cache = a.cache.as_ref().map(CertCache::new);
    let start = Instant::now();
    let results: Vec<_> = ids
        .par_iter()
        .map(|id| {
            let t0 = Instant::now();
            let built = match &cache {
                Some(c) => c.get_or_insert_with(&id.name(), || certify(*id)),
                None => certify(*id).map(|c| (c, false)),
            };
            let verification = built.as_ref().ok().map(|(c, _)| verify_with_seed(c, a.seed));
            (*id, built, verification, t0.elapsed())
        })
        .collect();

    let mut lines = Vec::new();
    let mut all_ok = true;
    for (id, built, verification, elapsed) in results {
        let line = match built {
            Ok((cert, cached)) => {
                let v = verification.expect("verified");
                write_cert(&a.out, &cert)?;
                if !a.json {
                    let status = if v.passed { "PASS" } else { "FAIL" };
                    writeln!(
                        out,
                        "{status} {:<26} terms={:?} degree={} multiplier={}{} {:.1?}",
                        cert.name,
                        cert.cofactor_terms(),
                        cert.cofactor_degree(),
                        cert.multiplier,
                        if cached { " (cached)" } else { "" },
                        elapsed
                    )?;
                    if let Some(d) = &v.diagnostic {
                        writeln!(out, "     {d}")?;
                    }
                    if a.filter.is_some() {
                        for (k, (q, b)) in cert.cofactors.iter().zip(&cert.basis).enumerate() {
                            writeln!(out, "     r{} = {}    [basis: {}]", k + 1, q.to_text(cert.order), b.to_text(cert.order))?;
                        }
                    }
                }
                CertLine {
                    name: cert.name.clone(),
                    passed: v.passed,
                    cofactor_terms: cert.cofactor_terms(),
                    cofactor_degree: cert.cofactor_degree(),
                    multiplier: cert.multiplier.to_string(),
                    cached,
                    verification: Some(v),
                    error: None,
                }
            }
            Err(e) => {
                if !a.json {
                    writeln!(out, "FAIL {:<26} {e}", id.name())?;
                }
                CertLine {
                    name: id.name(),
                    passed: false,
                    cofactor_terms: Vec::new(),
                    cofactor_degree: 0,
                    multiplier: String::new(),
                    cached: false,
                    verification: None,
                    error: Some(e.to_string()),
                }
            }
        };
        all_ok &= line.passed;
        lines.push(line);
    }
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&lines)?)?;
    } else {
        let passed = lines.iter().filter(|l| l.passed).count();
        writeln!(out, "{passed}/{} certificates verified in {:.2?}", lines.len(), start.elapsed())?;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_group_check(a: &GroupCheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = a.curve.params()?;
    match (a.mode, params.mode()) {
        (CheckMode::Projective, crate::curve::CurveMode::General) => {
            return Err(CliError::Usage("projective mode needs --t".into()))
        }
        (CheckMode::Affine, crate::curve::CurveMode::Rescaled) => {
            return Err(CliError::Usage("affine mode needs --c and --d".into()))
        }
        _ => {}
    }
    let start = Instant::now();
    let report = group_check(&params, a.mode, a.level, a.seed)?;
    let json = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), &json)?;
    }
    if a.json {
        out.write_all(json.as_bytes())?;
    } else {
        print_report(&report, out)?;
        writeln!(out, "elapsed {:.2?}", start.elapsed())?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE })
}

fn print_report(r: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    let c = &r.counts;
    write!(out, "{} check, level {}, p = {}: {} affine points", r.mode, r.level, r.params.p, c.affine_points)?;
    if let (Some(oo), Some(cl)) = (c.e_oo, c.classes) {
        write!(out, ", {oo} in E_oo, {cl} classes")?;
    }
    writeln!(out)?;
    for ch in &r.checks {
        let status = if ch.passed { "PASS" } else { "FAIL" };
        write!(out, "{status} {:<22} {} checked", ch.name, ch.checked)?;
        if let Some(n) = &ch.note {
            write!(out, " ({n})")?;
        }
        writeln!(out)?;
        if let Some(w) = &ch.witness {
            writeln!(out, "     {} failures, first: {}", ch.failures, w.join(" "))?;
        }
    }
    writeln!(out, "{}", if r.passed { "all checks passed" } else { "some checks FAILED" })
}

fn parse_point(params: &CurveParams, s: &str) -> Result<AffinePoint, CliError> {
    let bad = || CliError::Usage(format!("expected a point as x,y but got `{s}`"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: BigInt = x.trim().parse().map_err(|_| bad())?;
    let y: BigInt = y.trim().parse().map_err(|_| bad())?;
    Ok(params.point(x, y)?)
}

#[derive(Serialize)]
struct AddOutput {
    layer: String,
    summable: bool,
    result: Option<String>,
    members: Vec<String>,
    reason: Option<String>,
}

fn cmd_add(a: &AddArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = a.curve.params()?;
    let p = parse_point(&params, &a.p_point)?;
    let q = parse_point(&params, &a.q_point)?;
    let layer = format!("{:?}", a.layer).to_lowercase();
    let res = match a.layer {
        Layer::Affine0 | Layer::Affine1 => {
            let law = if a.layer == Layer::Affine0 { AddLaw::Plus0 } else { AddLaw::Plus1 };
            match params.add(law, &p, &q) {
                Ok(s) => AddOutput {
                    layer,
                    summable: true,
                    result: Some(format!("{},{}", s.x, s.y)),
                    members: Vec::new(),
                    reason: None,
                },
                Err(CurveError::NotSummable { .. }) => AddOutput {
                    layer,
                    summable: false,
                    result: None,
                    members: Vec::new(),
                    reason: Some(format!("delta_{} vanishes at ({p}, {q})", law.index())),
                },
                Err(e) => return Err(e.into()),
            }
        }
        Layer::Projective => {
            let s = params.proj_add(&params.glue(&p, a.i)?, &params.glue(&q, a.j)?)?;
            let r = s.representative();
            AddOutput {
                layer,
                summable: true,
                result: Some(format!("{},{};{}", r.point.x, r.point.y, r.i)),
                members: s.members().iter().map(|m| m.to_string()).collect(),
                reason: None,
            }
        }
    };
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&res)?)?;
    } else if let Some(r) = &res.result {
        writeln!(out, "{r}")?;
        if !res.members.is_empty() {
            writeln!(out, "class {}", res.members.join(" = "))?;
        }
    } else {
        writeln!(out, "not summable: {}", res.reason.as_deref().unwrap_or_default())?;
    }
    Ok(if res.summable { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct Enumeration {
    p: u64,
    c: u64,
    d: u64,
    points: Vec<String>,
    e_oo: Option<usize>,
    classes: Option<Vec<String>>,
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = a.curve.params()?;
    let pts = params.points();
    let mut e = Enumeration {
        p: params.field().modulus_u64(),
        c: params.c().to_u64(),
        d: params.d().to_u64(),
        points: pts.iter().map(ToString::to_string).collect(),
        e_oo: None,
        classes: None,
    };
    if params.t().is_ok() {
        e.e_oo = Some(pts.iter().filter(|p| p.is_oo()).count());
        e.classes = Some(params.classes()?.iter().map(ToString::to_string).collect());
    }
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&e)?)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "curve x^2 + {}*y^2 = 1 + {}*x^2*y^2 over F_{}", e.c, e.d, e.p)?;
    writeln!(out, "points: {}", e.points.len())?;
    for p in &e.points {
        writeln!(out, "  {p}")?;
    }
    if let (Some(oo), Some(classes)) = (e.e_oo, &e.classes) {
        writeln!(out, "E_oo: {oo}")?;
        writeln!(out, "classes: {}", classes.len())?;
        for c in classes {
            writeln!(out, "  {c}")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let id: Identity = a.name.parse()?;
    let cert = certify(id)?;
    let v = verify_certificate(&cert);
    match &a.out {
        Some(dir) => {
            let path = write_cert(dir, &cert)?;
            writeln!(out, "{}", path.display())?;
        }
        None => writeln!(out, "{}", serde_json::to_string_pretty(&cert.to_json())?)?,
    }
    Ok(if v.passed { EXIT_OK } else { EXIT_FAILURE })
}
