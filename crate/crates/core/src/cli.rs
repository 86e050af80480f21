//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 invalid curve, 3 unsupported
//! coefficients or field size, 64 usage, 74 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::assembler::{gl2_homology, verify, AssemblerError, CurveSummary, MainReport, ReportOptions};
use crate::building::{build_building, steinberg_rank, suspension_homology, BuildingError};
use crate::ellcurve::{Curve, CurveError};
use crate::exactlin::DEFAULT_TRUNCATION;
use crate::finitefield::{FieldSpec, FieldTower};
use crate::grouphlgy::{CoeffField, GroupHomologyError};
use crate::heckegraph::{GraphError, HeckeGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CURVE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Parser, Debug)]
#[command(name = "hecke-gl3", version, about = "Hecke graphs, buildings and GL3 homology over elliptic curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Point counts, trace, torsion and closed points.
    CurveInfo {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The coloured Hecke graph (text report, json or dot).
    HeckeGraph {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The spherical building of GL3(F_q) and its homology.
    Building {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Parabolic, quotient and rational homology report.
    Homology {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        coeff: CoeffArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// PGL2 homology from the rank-2 direct-sum formula.
    Gl2 {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        coeff: CoeffArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every invariant check; exit 1 on any failure.
    Verify {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        coeff: CoeffArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Sweep every smooth Weierstrass tuple over F_q (q ≤ 3).
        #[arg(long)]
        all_curves: bool,
        /// Compare the JSON report with this file.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// y² + y = x³ over F₂
    Ss2,
    /// y² = x³ − x over F₃
    Ss3,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    #[arg(long, conflicts_with = "preset")]
    pub p: Option<u32>,
    #[arg(long, conflicts_with = "preset")]
    pub e: Option<u32>,
    /// Coefficients as raw field values (base-p digits of the coordinates).
    #[arg(long, default_value_t = 0, conflicts_with = "preset")]
    pub a1: u32,
    #[arg(long, default_value_t = 0, conflicts_with = "preset")]
    pub a2: u32,
    #[arg(long, default_value_t = 0, conflicts_with = "preset")]
    pub a3: u32,
    #[arg(long, default_value_t = 0, conflicts_with = "preset")]
    pub a4: u32,
    #[arg(long, default_value_t = 0, conflicts_with = "preset")]
    pub a6: u32,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Args, Debug, Clone)]
pub struct CoeffArgs {
    /// Prime ℓ for F_ℓ coefficients; repeatable.
    #[arg(long = "ell")]
    pub ell: Vec<u64>,
    /// Include rational coefficients (the default when no --ell is given).
    #[arg(long)]
    pub rational: bool,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub max_degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add a generation timestamp (reports are otherwise byte-stable).
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: i32, kind: &'static str, message: impl ToString) -> Self {
        CliError {
            code,
            kind,
            message: message.to_string(),
        }
    }

    fn usage(m: impl ToString) -> Self {
        Self::new(EXIT_USAGE, "usage", m)
    }

    fn curve(m: impl ToString) -> Self {
        Self::new(EXIT_CURVE, "invalid-curve", m)
    }

    fn unsupported(m: impl ToString) -> Self {
        Self::new(EXIT_UNSUPPORTED, "unsupported", m)
    }

    /// One line, `error: <kind>: <message>`.
    pub fn line(&self) -> String {
        let msg: String = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error: {}: {}", self.kind, msg)
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        CliError::curve(e)
    }
}

impl From<GroupHomologyError> for CliError {
    fn from(e: GroupHomologyError) -> Self {
        match e {
            GroupHomologyError::Parse(_) => CliError::usage(e),
            _ => CliError::unsupported(e),
        }
    }
}

impl From<BuildingError> for CliError {
    fn from(e: BuildingError) -> Self {
        match e {
            BuildingError::UnsupportedFieldSize(_) => CliError::unsupported(e),
            _ => CliError::new(EXIT_VERIFY, "inconsistent", e),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Curve(c) => c.into(),
            other => CliError::new(EXIT_VERIFY, "graph", other),
        }
    }
}

impl From<AssemblerError> for CliError {
    fn from(e: AssemblerError) -> Self {
        match e {
            AssemblerError::Group(g) => g.into(),
            AssemblerError::Building(b) => b.into(),
            AssemblerError::Graph(g) => g.into(),
            AssemblerError::InternalInconsistency(_) => CliError::new(EXIT_VERIFY, "inconsistent", e),
        }
    }
}

impl CurveArgs {
    fn raw(&self) -> Result<(u32, u32, [u32; 5]), CliError> {
        match self.preset {
            Some(Preset::Ss2) => Ok((2, 1, [0, 0, 1, 0, 0])),
            Some(Preset::Ss3) => Ok((3, 1, [0, 0, 0, 2, 0])),
            None => {
                let p = self.p.ok_or_else(|| CliError::usage("either --p or --preset is required"))?;
                Ok((p, self.e.unwrap_or(1), [self.a1, self.a2, self.a3, self.a4, self.a6]))
            }
        }
    }

    pub fn curve(&self) -> Result<Curve, CliError> {
        let (p, e, raw) = self.raw()?;
        Ok(Curve::from_raw(tower(p, e)?, raw)?)
    }
}

fn tower(p: u32, e: u32) -> Result<Arc<FieldTower>, CliError> {
    if e == 0 {
        return Err(CliError::curve("e must be at least 1"));
    }
    let spec = FieldSpec::new(p, e).map_err(CliError::curve)?;
    Ok(Arc::new(FieldTower::new(spec).map_err(CliError::curve)?))
}

impl CoeffArgs {
    fn fields(&self, q: u64) -> Result<Vec<CoeffField>, CliError> {
        let mut out = Vec::new();
        if self.rational || self.ell.is_empty() {
            out.push(CoeffField::Rational);
        }
        for &l in &self.ell {
            let c = CoeffField::prime(l, q)?;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }
}

fn stamp(on: bool) -> Option<String> {
    on.then(|| {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        format!("unix:{secs}")
    })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn no_dot(f: Format) -> Result<(), CliError> {
    if f == Format::Dot {
        return Err(CliError::usage("--format dot is only available for graphs"));
    }
    Ok(())
}

/// Output document plus exit code.
struct Outcome {
    text: String,
    code: i32,
}

fn ok(text: String) -> Result<Outcome, CliError> {
    Ok(Outcome { text, code: EXIT_OK })
}

fn report_options(coeff: &CoeffArgs, q: u64, stamp_on: bool) -> Result<ReportOptions, CliError> {
    Ok(ReportOptions {
        coefficients: coeff.fields(q)?,
        truncation: coeff.max_degree,
        stamp: stamp(stamp_on),
    })
}

fn render_report(r: &MainReport, f: Format) -> String {
    match f {
        Format::Json => r.to_json(),
        _ => r.to_text(),
    }
}

fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::CurveInfo { curve, output } => {
            no_dot(output.format)?;
            let c = curve.curve()?;
            let s = CurveSummary::of(&c);
            ok(match output.format {
                Format::Json => json(&s),
                _ => s.to_text(),
            })
        }
        Command::HeckeGraph { curve, output } => {
            let g = HeckeGraph::build(&curve.curve()?)?;
            ok(match output.format {
                Format::Text => g.report().to_text(),
                Format::Json => {
                    let mut s = g.to_json();
                    s.push('\n');
                    s
                }
                Format::Dot => g.to_dot(),
            })
        }
        Command::Building { p, e, output } => {
            let q = u64::from(p.checked_pow(*e).ok_or_else(|| CliError::unsupported("field size overflows"))?);
            let b = build_building(q)?;
            let st = steinberg_rank(q)?;
            let susp = suspension_homology(q, 2)?;
            #[derive(Serialize)]
            struct BuildingSummary {
                q: u64,
                lines: usize,
                planes: usize,
                vertices: usize,
                edges: usize,
                steinberg_rank: usize,
                suspension_betti: Vec<usize>,
            }
            let s = BuildingSummary {
                q,
                lines: b.lines.len(),
                planes: b.planes.len(),
                vertices: b.vertex_count(),
                edges: b.edges.len(),
                steinberg_rank: st,
                suspension_betti: susp.betti,
            };
            ok(match output.format {
                Format::Json => json(&s),
                Format::Dot => b.to_dot(),
                Format::Text => format!(
                    "q = {}\nV = {} ({} lines + {} planes)   E = {}\nreduced H1 rank (Steinberg) = {}\nsuspension betti = {:?}\n",
                    s.q, s.vertices, s.lines, s.planes, s.edges, s.steinberg_rank, s.suspension_betti
                ),
            })
        }
        Command::Homology { curve, coeff, output } => {
            no_dot(output.format)?;
            let c = curve.curve()?;
            let opts = report_options(coeff, u64::from(c.q()), output.stamp)?;
            let r = verify(&c, &opts)?;
            Ok(Outcome {
                text: render_report(&r, output.format),
                code: if r.all_passed() { EXIT_OK } else { EXIT_VERIFY },
            })
        }
        Command::Gl2 { curve, coeff, output } => {
            no_dot(output.format)?;
            let c = curve.curve()?;
            let q = u64::from(c.q());
            let reports = coeff
                .fields(q)?
                .into_iter()
                .map(|f| gl2_homology(&c, f, coeff.max_degree))
                .collect::<Result<Vec<_>, _>>()?;
            ok(match output.format {
                Format::Json => json(&reports),
                _ => {
                    let mut s = String::new();
                    for r in &reports {
                        s.push_str(&format!("[{}] H_i(PGL2), i >= 1: {}\n", r.coefficients, r.series));
                        for m in &r.summands {
                            s.push_str(&format!("  ({}) {:?}: {}\n", m.point, m.ty, m.group));
                        }
                    }
                    s
                }
            })
        }
        Command::Verify {
            curve,
            coeff,
            output,
            all_curves,
            golden,
        } => {
            no_dot(output.format)?;
            if *all_curves {
                return sweep(curve, coeff, output);
            }
            let c = curve.curve()?;
            let opts = report_options(coeff, u64::from(c.q()), output.stamp)?;
            let r = verify(&c, &opts)?;
            let mut code = if r.all_passed() { EXIT_OK } else { EXIT_VERIFY };
            let mut text = render_report(&r, output.format);
            if let Some(path) = golden {
                let want = std::fs::read_to_string(path)
                    .map_err(|e| CliError::new(EXIT_IO, "io", format!("{}: {e}", path.display())))?;
                let mut canonical = r.clone();
                canonical.stamp = None;
                if canonical.to_json() == want {
                    text.push_str("golden: match\n");
                } else {
                    text.push_str(&format!("golden: MISMATCH against {}\n", path.display()));
                    code = EXIT_VERIFY;
                }
            }
            Ok(Outcome { text, code })
        }
    }
}

fn sweep(curve: &CurveArgs, coeff: &CoeffArgs, output: &OutputArgs) -> Result<Outcome, CliError> {
    let p = curve.p.ok_or_else(|| CliError::usage("--all-curves needs --p"))?;
    let e = curve.e.unwrap_or(1);
    let t = tower(p, e)?;
    let q = t.q();
    if q > 3 {
        return Err(CliError::unsupported(format!("--all-curves sweeps q ≤ 3, got q = {q}")));
    }
    let opts = report_options(coeff, u64::from(q), output.stamp)?;
    #[derive(Serialize)]
    struct Row {
        coefficients: [u32; 5],
        passed: bool,
        failed_checks: Vec<String>,
    }
    let mut rows = Vec::new();
    let mut singular = 0;
    for v in 0..q.pow(5) {
        let mut raw = [0u32; 5];
        let mut r = v;
        for slot in raw.iter_mut() {
            *slot = r % q;
            r /= q;
        }
        let c = match Curve::from_raw(t.clone(), raw) {
            Ok(c) => c,
            Err(CurveError::Singular) => {
                singular += 1;
                continue;
            }
            Err(other) => return Err(other.into()),
        };
        let rep = verify(&c, &opts)?;
        rows.push(Row {
            coefficients: raw,
            passed: rep.all_passed(),
            failed_checks: rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect(),
        });
    }
    let all = rows.iter().all(|r| r.passed);
    let text = match output.format {
        Format::Json => json(&serde_json::json!({
            "q": q,
            "smooth": rows.len(),
            "singular": singular,
            "passed": all,
            "curves": rows,
        })),
        _ => {
            let mut s = String::new();
            for r in &rows {
                s.push_str(&format!(
                    "{:?} {}{}\n",
                    r.coefficients,
                    if r.passed { "pass" } else { "FAIL" },
                    if r.failed_checks.is_empty() { String::new() } else { format!(" {:?}", r.failed_checks) }
                ));
            }
            s.push_str(&format!("q = {q}: {} smooth, {singular} singular skipped, {}\n", rows.len(), if all { "all pass" } else { "FAILURES" }));
            s
        }
    };
    Ok(Outcome {
        text,
        code: if all { EXIT_OK } else { EXIT_VERIFY },
    })
}

fn output_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::CurveInfo { output, .. }
        | Command::HeckeGraph { output, .. }
        | Command::Building { output, .. }
        | Command::Homology { output, .. }
        | Command::Gl2 { output, .. }
        | Command::Verify { output, .. } => output.out.as_ref(),
    }
}

/// Parses `args` (including the program name), runs the command, writes the
/// document to `out` (or to `--out`) and any error line to `err`; returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let first = e.to_string().lines().next().unwrap_or("bad arguments").to_string();
            let _ = writeln!(err, "{}", CliError::usage(first.trim_start_matches("error: ")).line());
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let written = match output_path(&cli.command) {
                Some(path) => std::fs::write(path, &outcome.text)
                    .map_err(|e| CliError::new(EXIT_IO, "io", format!("{}: {e}", path.display()))),
                None => out.write_all(outcome.text.as_bytes()).map_err(|e| CliError::new(EXIT_IO, "io", e)),
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    let _ = writeln!(err, "{}", e.line());
                    e.code
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.code
        }
    }
}
