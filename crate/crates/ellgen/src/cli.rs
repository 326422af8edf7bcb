//! Argument definitions and subcommand execution.

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use ellgen_core::genus::{
    self, averaged_genus_numeric, averaged_genus_qexp, conifold_genus_residues, conifold_residue_report,
    default_law_samples, default_t_samples, genus_numeric, genus_qexp, independence_scan,
    reference_genus_numeric, reference_genus_qexp, GenusError, DEFAULT_SEED, GENUS_TOL,
};
use ellgen_core::jacobi::{check_laws, fourier_nonnegative, LawOutcome};
use ellgen_core::series::DEFAULT_TRUNC;
use ellgen_core::theta::{self, ComplexParams};
use ellgen_core::toric::{self, balanced_pairing, euler_characteristic, validate, BUILTIN_NAMES};
use ellgen_core::{QSeries, RatFunc, ToricDiagram};

use crate::complex::{format_complex, format_real, parse_complex};
use crate::format::{parse_diagram, FormatError};
use crate::report::{Check, OutputFormat, Report};

/// Environment variable overriding the default sample seed.
pub const SEED_ENV: &str = "ELLGEN_SEED";

const RESIDUE_TOL: f64 = 1e-8;
const THETA_TOL: f64 = theta::DEFAULT_TOL;

#[derive(Debug, Parser)]
#[command(name = "ellgen", version, about = "Equivariant elliptic genera of toric Calabi-Yau 3-folds")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the balancing conditions of a diagram.
    Validate(DiagramArg),
    /// Evaluate the genus numerically and compare with the reference form.
    GenusEval {
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = GENUS_TOL)]
        tol: f64,
    },
    /// Print the exact q-expansion of the genus.
    GenusQexp {
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        trunc: TruncArg,
    },
    /// Averaged genus, exact or numeric, against the reference form.
    Averaged {
        #[command(flatten)]
        diagram: DiagramArg,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        #[command(flatten)]
        trunc: TruncArg,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = GENUS_TOL)]
        tol: f64,
    },
    /// Exact two-vertex theta identity of the resolved conifold.
    CheckIdentity {
        #[command(flatten)]
        trunc: TruncArg,
    },
    /// Balanced-diagram theorem: pairing, exact expansion and numeric samples.
    CheckBalanced {
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        trunc: TruncArg,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, default_value_t = GENUS_TOL)]
        tol: f64,
    },
    /// The eight transformation laws and Fourier non-negativity.
    CheckJacobi {
        #[command(flatten)]
        diagram: DiagramArg,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        trunc: TruncArg,
        #[arg(long, default_value_t = GENUS_TOL)]
        tol: f64,
    },
    /// Residue and specialization identities of the conifold argument.
    ResidueCheck {
        #[arg(long, default_value = "2i", value_parser = parse_tau, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value = "0.3", value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value = "-0.4+0.23i", value_parser = parse_complex, allow_hyphen_values = true)]
        t2: Complex64,
        /// Checks m in -M..=M.
        #[arg(long, default_value_t = 1)]
        m_max: u8,
        /// Genus residues at n in -N..=N.
        #[arg(long, default_value_t = 1)]
        n_max: u8,
        #[arg(long, default_value_t = RESIDUE_TOL)]
        tol: f64,
    },
    /// Evaluate the genus at several (t1, t2) and report the spread.
    Independence {
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, default_value_t = GENUS_TOL)]
        tol: f64,
    },
    /// List the built-in diagrams.
    ListBuiltins,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Numeric,
}

#[derive(Debug, Args)]
pub struct DiagramArg {
    /// `builtin:<name>` or a path to a diagram file.
    #[arg(long)]
    pub diagram: String,
}

#[derive(Debug, Args)]
pub struct TruncArg {
    /// Expand through q^N.
    #[arg(long = "trunc", default_value_t = DEFAULT_TRUNC - 1)]
    pub through: usize,
}

impl TruncArg {
    fn coefficients(&self) -> usize {
        self.through + 1
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, default_value = "2i", value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: Complex64,
    #[arg(long, default_value = "0.3", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, default_value = "0.17+0.11i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub t1: Complex64,
    #[arg(long, default_value = "-0.4+0.23i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub t2: Complex64,
}

impl PointArgs {
    fn params(&self) -> ComplexParams {
        ComplexParams {
            tau: self.tau,
            z: self.z,
            t1: self.t1,
            t2: self.t2,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value = "2i", value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: Complex64,
    #[arg(long, default_value = "0.3", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, default_value_t = 6)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_tau(s: &str) -> Result<Complex64, String> {
    let tau = parse_complex(s).map_err(|e| e.to_string())?;
    if tau.im > 0.0 {
        Ok(tau)
    } else {
        Err(format!("Im tau must be positive, got `{s}`"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("{0}")]
    Genus(#[from] GenusError),
    #[error("invalid {name}: {value}")]
    BadEnv { name: &'static str, value: String },
}

impl From<toric::ModelError> for CliError {
    fn from(e: toric::ModelError) -> Self {
        CliError::Format(FormatError::Model(e))
    }
}

pub fn load_diagram(source: &str) -> Result<ToricDiagram, CliError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Ok(toric::builtin(name)?);
    }
    let text = std::fs::read_to_string(Path::new(source)).map_err(|e| CliError::Io {
        path: source.to_string(),
        source: e,
    })?;
    Ok(parse_diagram(&text)?)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::BadEnv { name: SEED_ENV, value: v }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn point_fields(r: &mut Report, p: &ComplexParams) {
    r.field("tau", format_complex(p.tau))
        .field("z", format_complex(p.z))
        .field("t1", format_complex(p.t1))
        .field("t2", format_complex(p.t2));
}

/// One exact check per q-coefficient.
fn exact_checks(r: &mut Report, label: &str, got: &QSeries<RatFunc>, want: &QSeries<RatFunc>) {
    let offset_ok = got.offset() == want.offset();
    for (k, (a, b)) in got.coeffs().iter().zip(want.coeffs()).enumerate() {
        r.check(Check::exact(format!("{label} q^{k}"), offset_ok && a == b));
    }
}

fn expect_valid(d: &ToricDiagram) -> Result<i64, CliError> {
    Ok(euler_characteristic(d)?)
}

/// Runs a parsed command. `Ok` reports carry their own pass/fail state;
/// `Err` means the input could not be processed.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Validate(arg) => {
            let d = load_diagram(&arg.diagram)?;
            let mut r = Report::new("validate");
            r.field("diagram", d.name())
                .field("trivalent", d.trivalent().len())
                .field("univalent", d.univalent().len())
                .field("edges", d.edges().len());
            let violations = validate(&d);
            if violations.is_empty() {
                r.field("euler_characteristic", expect_valid(&d)?);
                r.check(Check::exact("balancing conditions", true));
            }
            for v in violations {
                r.check(Check::failed("violation", v.to_string()));
            }
            Ok(r)
        }
        Command::GenusEval { diagram, point, tol } => {
            let d = load_diagram(&diagram.diagram)?;
            let chi = expect_valid(&d)?;
            let p = point.params();
            let value = genus_numeric(&d, &p, THETA_TOL)?.value;
            let reference = reference_genus_numeric(chi, p.tau, p.z, THETA_TOL)?;
            let balanced = balanced_pairing(&d)?.is_some();
            let mut r = Report::new("genus-eval");
            r.field("diagram", d.name());
            point_fields(&mut r, &p);
            r.field("euler_characteristic", chi)
                .field("balanced", balanced)
                .field("value", format_complex(value))
                .field("reference", format_complex(reference));
            let dev = (value - reference).norm();
            if balanced {
                r.check(Check::numeric("value = (chi/2) theta1(2z)/theta1(z)", dev, *tol));
            } else {
                r.field("reference_deviation", format_real(dev));
            }
            Ok(r)
        }
        Command::GenusQexp { diagram, trunc } => {
            let d = load_diagram(&diagram.diagram)?;
            expect_valid(&d)?;
            let g = genus_qexp(&d, trunc.coefficients())?;
            let mut r = Report::new("genus-qexp");
            r.field("diagram", d.name()).field("through", format!("q^{}", trunc.through));
            r.expansion(&g.series);
            Ok(r)
        }
        Command::Averaged {
            diagram,
            backend,
            trunc,
            point,
            tol,
        } => {
            let d = load_diagram(&diagram.diagram)?;
            let chi = expect_valid(&d)?;
            let mut r = Report::new("averaged");
            r.field("diagram", d.name()).field("euler_characteristic", chi);
            match backend {
                Backend::Exact => {
                    let g = averaged_genus_qexp(&d, trunc.coefficients())?;
                    r.field("backend", "exact").field("through", format!("q^{}", trunc.through));
                    r.expansion(&g.series);
                    let reference = reference_genus_qexp(chi, trunc.coefficients());
                    exact_checks(&mut r, "averaged = reference", &g.series, &reference);
                }
                Backend::Numeric => {
                    let p = point.params();
                    let value = averaged_genus_numeric(&d, &p, THETA_TOL)?.value;
                    let reference = reference_genus_numeric(chi, p.tau, p.z, THETA_TOL)?;
                    r.field("backend", "numeric");
                    point_fields(&mut r, &p);
                    r.field("value", format_complex(value)).field("reference", format_complex(reference));
                    r.check(Check::numeric("averaged = reference", (value - reference).norm(), *tol));
                }
            }
            Ok(r)
        }
        Command::CheckIdentity { trunc } => {
            let d = toric::builtin("resolved_conifold")?;
            let g = genus_qexp(&d, trunc.coefficients())?;
            let reference = reference_genus_qexp(2, trunc.coefficients());
            let mut r = Report::new("check-identity");
            r.field("diagram", d.name()).field("through", format!("q^{}", trunc.through));
            exact_checks(&mut r, "two-vertex sum = theta1(2z)/theta1(z)", &g.series, &reference);
            Ok(r)
        }
        Command::CheckBalanced { diagram, trunc, scan, tol } => {
            let d = load_diagram(&diagram.diagram)?;
            let chi = expect_valid(&d)?;
            let mut r = Report::new("check-balanced");
            r.field("diagram", d.name()).field("euler_characteristic", chi);
            let Some(pairs) = balanced_pairing(&d)? else {
                r.check(Check::failed("balanced pairing", "none exists"));
                return Ok(r);
            };
            let listed: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}<->{b}")).collect();
            r.field("pairing", listed.join(" "));
            r.check(Check::exact("balanced pairing", true));
            let g = genus_qexp(&d, trunc.coefficients())?;
            exact_checks(&mut r, "genus = reference", &g.series, &reference_genus_qexp(chi, trunc.coefficients()));
            let seed = resolve_seed(scan.seed)?;
            r.field("seed", seed);
            let reference = reference_genus_numeric(chi, scan.tau, scan.z, THETA_TOL)?;
            for (k, (t1, t2)) in default_t_samples(&d, scan.tau, scan.samples, seed).into_iter().enumerate() {
                let p = ComplexParams { tau: scan.tau, z: scan.z, t1, t2 };
                let label = format!("sample {k} t1={} t2={}", format_complex(t1), format_complex(t2));
                r.check(match genus_numeric(&d, &p, THETA_TOL) {
                    Ok(g) => Check::numeric(label, (g.value - reference).norm(), *tol),
                    Err(e) => Check::failed(label, e.to_string()),
                });
            }
            Ok(r)
        }
        Command::CheckJacobi {
            diagram,
            samples,
            seed,
            trunc,
            tol,
        } => {
            let d = load_diagram(&diagram.diagram)?;
            expect_valid(&d)?;
            let seed = resolve_seed(*seed)?;
            let points = default_law_samples(&d, *samples, seed);
            let mut r = Report::new("check-jacobi");
            r.field("diagram", d.name()).field("index", "3/2").field("seed", seed);
            for (k, p) in points.iter().enumerate() {
                r.field(format!("sample.{k}.tau"), format_complex(p.tau))
                    .field(format!("sample.{k}.z"), format_complex(p.z))
                    .field(format!("sample.{k}.t1"), format_complex(p.t1))
                    .field(format!("sample.{k}.t2"), format_complex(p.t2));
            }
            let reports = check_laws(|p| Ok(genus_numeric(&d, p, THETA_TOL)?.value), 3, &points);
            for (i, rep) in reports.iter().enumerate() {
                let label = format!("{} sample {}", rep.law, i / 8);
                r.check(match &rep.outcome {
                    LawOutcome::Evaluated { deviation, .. } => Check::numeric(label, *deviation, *tol),
                    LawOutcome::Flagged(e) => Check::failed(label, e.to_string()),
                });
            }
            let g = genus_qexp(&d, trunc.coefficients())?;
            r.check(Check::exact("nonnegative powers of q", fourier_nonnegative(&g.series)));
            Ok(r)
        }
        Command::ResidueCheck {
            tau,
            z,
            t2,
            m_max,
            n_max,
            tol,
        } => {
            let (m, n) = (i32::from(*m_max), i32::from(*n_max));
            let mut r = Report::new("residue-check");
            r.field("tau", format_complex(*tau))
                .field("z", format_complex(*z))
                .field("t2", format_complex(*t2));
            let push = |r: &mut Report, checks: Result<Vec<genus::ResidueCheck>, GenusError>, what: &str| match checks {
                Ok(list) => {
                    for c in list {
                        r.check(Check::numeric(format!("{} m={} n={}", c.label, c.m, c.n), c.deviation, *tol));
                    }
                }
                Err(e) => {
                    r.check(Check::failed(what, e.to_string()));
                }
            };
            push(&mut r, conifold_residue_report(*tau, *z, *t2, -m..=m, *tol), "residue identities");
            push(&mut r, conifold_genus_residues(*tau, *z, *t2, -m..=m, -n..=n, *tol), "genus residues");
            Ok(r)
        }
        Command::Independence { diagram, scan, tol } => {
            let d = load_diagram(&diagram.diagram)?;
            expect_valid(&d)?;
            let seed = resolve_seed(scan.seed)?;
            let samples = default_t_samples(&d, scan.tau, scan.samples, seed);
            let rep = independence_scan(&d, scan.tau, scan.z, &samples, THETA_TOL)?;
            let mut r = Report::new("independence");
            r.field("diagram", d.name())
                .field("tau", format_complex(scan.tau))
                .field("z", format_complex(scan.z))
                .field("seed", seed);
            for (k, ((t1, t2), v)) in rep.samples.iter().zip(&rep.values).enumerate() {
                let shown = match v {
                    Ok(v) => format_complex(*v),
                    Err(e) => format!("skipped: {e}"),
                };
                r.field(format!("sample.{k}"), format!("t1={} t2={} value={shown}", format_complex(*t1), format_complex(*t2)));
            }
            r.field("max_deviation", format_real(rep.max_deviation));
            let skipped = rep.values.iter().filter(|v| v.is_err()).count();
            let mut c = Check::numeric("max pairwise deviation", rep.max_deviation, *tol);
            if skipped > 0 {
                c = c.with_note(format!("{skipped} sample(s) skipped"));
            }
            r.check(c);
            Ok(r)
        }
        Command::ListBuiltins => {
            let mut r = Report::new("list-builtins");
            for name in BUILTIN_NAMES {
                let d = toric::builtin(name)?;
                let chi = expect_valid(&d)?;
                let balanced = balanced_pairing(&d)?.is_some();
                r.field(name, format!("euler_characteristic={chi} balanced={balanced}"));
            }
            Ok(r)
        }
    }
}

/// Full command-line run: `(exit code, stdout, stderr)`.
///
/// Exit codes: 0 success, 1 a check failed, 2 usage or input error.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    match execute(&cli.command) {
        Ok(report) => (if report.passed() { 0 } else { 1 }, report.render(cli.format), String::new()),
        Err(e) => (2, String::new(), format!("error: {e}\n")),
    }
}
