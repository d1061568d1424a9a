//! Command-line front end.
//!
//! Exit codes: 0 when every requested check passes, 1 on a configuration or
//! validation error, 2 when a requested check's hypotheses are not met, 3 when
//! hypotheses hold but a residual exceeds its tolerance.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::checks::{self, CheckName, CheckReport, KernelDiagnostics, SpectrumReport, Tolerances};
use crate::error::{Error, Result};
use crate::operators::{Conjugation, SymbolSet};
use crate::series::TruncatedSeries;
use crate::space::{SpaceContext, DEFAULT_DEGREE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

pub const MIN_DEGREE: usize = 8;
pub const MAX_DEGREE: usize = 512;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Json
}

fn default_degree() -> usize {
    DEFAULT_DEGREE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugationConfig {
    pub mu: Complex64,
    pub eta: Complex64,
}

/// Symbol data. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolConfig {
    CanonicalSymmetric {
        /// Weights `c_k`; all ones when omitted.
        #[serde(default)]
        c: Option<Vec<Complex64>>,
        a: Vec<Complex64>,
        b: Complex64,
        c_phi: Complex64,
        #[serde(default = "unit")]
        eta: Complex64,
    },
    CanonicalHermitian {
        #[serde(default)]
        c: Option<Vec<Complex64>>,
        a: Vec<Complex64>,
        b: Complex64,
        c_phi: Complex64,
    },
    Explicit {
        c: Vec<Complex64>,
        psi: Vec<Vec<Complex64>>,
        phi: Vec<Complex64>,
    },
}

fn unit() -> Complex64 {
    ONE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub alpha: f64,
    #[serde(default = "default_degree")]
    pub trunc_degree: usize,
    #[serde(default)]
    pub conjugation: Option<ConjugationConfig>,
    pub symbols: SymbolConfig,
    #[serde(default)]
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn space(&self) -> Result<SpaceContext> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&self.trunc_degree) {
            return Err(Error::Config(format!(
                "trunc_degree {} outside [{MIN_DEGREE}, {MAX_DEGREE}]",
                self.trunc_degree
            )));
        }
        SpaceContext::new(self.alpha, self.trunc_degree)
    }

    pub fn symbol_set(&self, ctx: &SpaceContext) -> Result<SymbolSet> {
        let weights = |c: &Option<Vec<Complex64>>, n: usize| -> Result<Vec<Complex64>> {
            match c {
                Some(w) if w.len() != n => Err(Error::Config(format!(
                    "{} weights for {n} psi coefficients",
                    w.len()
                ))),
                Some(w) => Ok(w.clone()),
                None => Ok(vec![ONE; n]),
            }
        };
        match &self.symbols {
            SymbolConfig::CanonicalSymmetric {
                c,
                a,
                b,
                c_phi,
                eta,
            } => SymbolSet::canonical_symmetric(
                ctx,
                weights(c, a.len())?,
                a.clone(),
                *b,
                *c_phi,
                *eta,
            ),
            SymbolConfig::CanonicalHermitian { c, a, b, c_phi } => {
                if a.iter().any(|x| x.im != 0.0) || c_phi.im != 0.0 {
                    return Err(Error::Config(
                        "canonical_hermitian requires real a_k and c_phi".into(),
                    ));
                }
                let real_a = a.iter().map(|x| x.re).collect();
                SymbolSet::canonical_hermitian(ctx, weights(c, a.len())?, real_a, *b, c_phi.re)
            }
            SymbolConfig::Explicit { c, psi, phi } => {
                let n = ctx.degree();
                let psi = psi
                    .iter()
                    .map(|p| TruncatedSeries::from_coeffs(p, n))
                    .collect();
                SymbolSet::explicit(ctx, c.clone(), psi, TruncatedSeries::from_coeffs(phi, n))
            }
        }
    }

    /// Explicit conjugation, else `C_{1,η}` with the symmetric family's `η`,
    /// else `C_{1,1}`.
    pub fn conjugation(&self) -> Result<Conjugation> {
        match (&self.conjugation, &self.symbols) {
            (Some(c), _) => Conjugation::new(c.mu, c.eta),
            (None, SymbolConfig::CanonicalSymmetric { eta, .. }) => Conjugation::new(ONE, *eta),
            (None, _) => Conjugation::new(ONE, ONE),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bergman",
    version,
    about = "Structural checks for weighted composition-differentiation operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Configuration file (JSON)
    #[arg(long)]
    pub config: PathBuf,
    /// Report path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Truncation degree N
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Uniform tolerance override
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run structural checks and write one report per check
    Check {
        #[command(flatten)]
        common: CommonArgs,
        /// Check to run (repeatable); overrides the config list
        #[arg(long = "check")]
        checks: Vec<String>,
    },
    /// Closed-form versus numerical spectrum table
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Kernel identity residuals at a point w
    KernelEval {
        #[command(flatten)]
        common: CommonArgs,
        /// Point in the disk as "re,im"
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Derivative order
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

struct Prepared {
    config: RunConfig,
    ctx: SpaceContext,
    symbols: SymbolSet,
    conj: Conjugation,
    tol: Tolerances,
    format: Format,
    out: Option<PathBuf>,
}

fn prepare(common: &CommonArgs) -> Result<Prepared> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Error::Config(format!("{}: {e}", common.config.display())))?;
    let mut config = RunConfig::from_json(&text)?;
    if let Some(n) = common.trunc {
        config.trunc_degree = n;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    let ctx = config.space()?;
    let symbols = config.symbol_set(&ctx)?;
    let conj = config.conjugation()?;
    let tol = match common.tol {
        Some(t) => Tolerances::uniform(t),
        None => config.tolerances.unwrap_or_default(),
    };
    let output = config.output.clone();
    let format = common
        .format
        .or(output.as_ref().map(|o| o.format))
        .unwrap_or(Format::Json);
    let out = common.out.clone().or(output.and_then(|o| o.path));
    Ok(Prepared {
        config,
        ctx,
        symbols,
        conj,
        tol,
        format,
        out,
    })
}

fn exit_code(reports: &[&CheckReport]) -> i32 {
    if reports.iter().any(|r| !r.hypothesis_met) {
        EXIT_HYPOTHESIS
    } else if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn emit(out: &Option<PathBuf>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| Error::Config(e.to_string())),
    }
}

pub fn reports_to_json(reports: &[CheckReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut s = String::from("name,residual,tolerance,pass,hypothesis_met\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{},{:e},{:e},{},{}",
            r.name, r.residual, r.tolerance, r.pass, r.hypothesis_met
        );
    }
    s
}

/// One line of the spectrum table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub m: usize,
    pub closed_form: Option<Complex64>,
    pub numerical: Complex64,
    pub pair_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub report: CheckReport,
    pub iterations: usize,
    pub converged: bool,
    pub rows: Vec<SpectrumRow>,
}

pub fn spectrum_rows(r: &SpectrumReport) -> Vec<SpectrumRow> {
    if r.closed_form.is_empty() {
        return r
            .numerical
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(m, v)| SpectrumRow {
                m,
                closed_form: None,
                numerical: *v,
                pair_distance: None,
            })
            .collect();
    }
    r.pairs
        .iter()
        .map(|&(i, j)| {
            let cf = r.closed_form[i];
            let nv = r.numerical.eigenvalues[j];
            SpectrumRow {
                m: i,
                closed_form: Some(cf),
                numerical: nv,
                pair_distance: Some((cf - nv).norm()),
            }
        })
        .collect()
}

pub fn spectrum_to_csv(rows: &[SpectrumRow]) -> String {
    let mut s =
        String::from("m,closed_form_re,closed_form_im,numerical_re,numerical_im,pair_distance\n");
    let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
    for row in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:e},{:e},{}",
            row.m,
            opt(row.closed_form.map(|c| c.re)),
            opt(row.closed_form.map(|c| c.im)),
            row.numerical.re,
            row.numerical.im,
            opt(row.pair_distance)
        );
    }
    s
}

fn parse_point(text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let parse = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| Error::Config(format!("bad number '{p}' in point '{text}'")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(Error::Config(format!("point '{text}' must be 're,im'"))),
    }
}

fn cmd_check(common: &CommonArgs, names: &[String], stdout: &mut dyn Write) -> Result<i32> {
    let p = prepare(common)?;
    let mut checks: Vec<CheckName> = if names.is_empty() {
        p.config.checks.clone()
    } else {
        names.iter().map(|n| n.parse()).collect::<Result<_>>()?
    };
    if checks.is_empty() {
        checks = CheckName::ALL.to_vec();
    }
    let reports = checks::run_checks(&p.ctx, &p.symbols, &p.conj, &checks, &p.tol)?;
    let body = match p.format {
        Format::Json => reports_to_json(&reports),
        Format::Csv => reports_to_csv(&reports),
    };
    emit(&p.out, &body, stdout)?;
    Ok(exit_code(&reports.iter().collect::<Vec<_>>()))
}

fn cmd_spectrum(common: &CommonArgs, stdout: &mut dyn Write) -> Result<i32> {
    let p = prepare(common)?;
    let r = checks::check_spectrum(&p.ctx, &p.symbols, &p.conj, &p.tol)?;
    let rows = spectrum_rows(&r);
    let body = match p.format {
        Format::Json => {
            let out = SpectrumOutput {
                report: r.report.clone(),
                iterations: r.numerical.iterations,
                converged: r.numerical.converged,
                rows,
            };
            let mut s = serde_json::to_string_pretty(&out).expect("spectrum serializes");
            s.push('\n');
            s
        }
        Format::Csv => spectrum_to_csv(&rows),
    };
    emit(&p.out, &body, stdout)?;
    Ok(exit_code(&[&r.report]))
}

fn cmd_kernel_eval(common: &CommonArgs, w: &str, n: usize, stdout: &mut dyn Write) -> Result<i32> {
    let p = prepare(common)?;
    let w = parse_point(w)?;
    let d: KernelDiagnostics =
        checks::kernel_diagnostics(&p.ctx, &p.symbols, w, n, 20, p.config.seed)?;
    let body = match p.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&d).expect("diagnostics serialize");
            s.push('\n');
            s
        }
        Format::Csv => format!(
            "w_re,w_im,order,reproducing_residual,derivative_residual,adjoint_residual\n{:e},{:e},{},{:e},{:e},{:e}\n",
            d.w.re, d.w.im, d.order, d.reproducing_residual, d.derivative_residual, d.adjoint_residual
        ),
    };
    emit(&p.out, &body, stdout)?;
    if p.out.is_some() {
        let _ = writeln!(
            stdout,
            "reproducing residual  {:e}\nderivative residual   {:e}\nadjoint residual      {:e}",
            d.reproducing_residual, d.derivative_residual, d.adjoint_residual
        );
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command. Errors
/// are written to `stderr`; the return value is the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Check { common, checks } => cmd_check(common, checks, stdout),
        Command::Spectrum { common } => cmd_spectrum(common, stdout),
        Command::KernelEval { common, w, n } => cmd_kernel_eval(common, w, *n, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}
