//! Command-line front end. Exit codes: 0 success, 1 a verification claim
//! failed, 2 configuration error, 3 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use revolv_core::counterexamples::{
    build_bonnesen_pair, build_klee_body, verify_klee, verify_pair, BonnesenConfig, BonnesenPair, Claim, KleeConfig,
    KleeOptions, VerifyOptions,
};
use revolv_core::functionals::{axis_functionals, central_section, maximal_section, projection};
use revolv_core::{BodyOfRevolution, SlopeGrid};
use serde::Deserialize;

use crate::error::CliError;
use crate::formats::{write_json, write_sections_csv, BodyDoc, KleeReportDoc, PairDoc, ReportDoc, SectionRow};
use crate::parallel::Parallel;

#[derive(Debug, Parser)]
#[command(
    name = "revolv",
    version,
    about = "Section and projection functions of bodies of revolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate A, M, P over a slope grid as CSV.
    Sections(Options),
    /// Build the body in R^4 with constant maximal sections and write it as JSON.
    Klee(Options),
    /// Build the perturbed pair in even dimension and write it as JSON.
    Bonnesen(Options),
    /// Build a counterexample and check all of its claimed properties.
    Verify(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Klee,
    Bonnesen,
}

/// Every setting; each is optional so a JSON config file can fill the gaps.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// JSON file with any of the settings below (flags take precedence).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Ambient dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// ball, klee, bonnesen-plus, bonnesen-minus, or a body JSON file.
    #[arg(long)]
    pub body: Option<String>,
    /// Smallest positive slope
    #[arg(long)]
    pub s_min: Option<f64>,
    /// Largest slope
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Number of slopes, including s = 0 and the cluster.
    #[arg(long)]
    pub n: Option<usize>,
    /// Half-width of the 11-point cluster around √7/3; 0 disables it.
    #[arg(long)]
    pub cluster_threshold: Option<f64>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where verify writes its JSON report
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Recorded in reports
    #[arg(long)]
    pub seed: Option<u64>,
    /// Relative tolerance for A, M, P agreement
    #[arg(long)]
    pub tol_functional: Option<f64>,
    /// Starting perturbation size for the pair construction
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Which construction verify checks
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
}

impl Options {
    /// Fills unset fields from `other`.
    fn or(self, other: Options) -> Options {
        Options {
            config: self.config,
            d: self.d.or(other.d),
            body: self.body.or(other.body),
            s_min: self.s_min.or(other.s_min),
            s_max: self.s_max.or(other.s_max),
            n: self.n.or(other.n),
            cluster_threshold: self.cluster_threshold.or(other.cluster_threshold),
            out: self.out.or(other.out),
            report: self.report.or(other.report),
            seed: self.seed.or(other.seed),
            tol_functional: self.tol_functional.or(other.tol_functional),
            eps0: self.eps0.or(other.eps0),
            mode: self.mode.or(other.mode),
        }
    }
}

/// Validated settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub body: String,
    pub grid: SlopeGrid,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub seed: u64,
    pub tol_functional: f64,
    pub eps0: f64,
    pub mode: Mode,
}

impl RunConfig {
    pub fn resolve(flags: Options, default_dim: usize) -> Result<Self, CliError> {
        let options = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                let file: Options = serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("malformed config {}: {e}", path.display())))?;
                flags.or(file)
            }
            None => flags,
        };
        let mode = options.mode.unwrap_or(Mode::Klee);
        let dim = options.d.unwrap_or(match mode {
            Mode::Klee => default_dim,
            Mode::Bonnesen => 6,
        });
        if dim < 3 {
            return Err(CliError::Config(format!("dimension must be at least 3, got {dim}")));
        }
        let defaults = SlopeGrid::default();
        let cluster = options.cluster_threshold.unwrap_or(0.05);
        if !(cluster >= 0.0 && cluster.is_finite()) {
            return Err(CliError::Config(format!(
                "cluster threshold {cluster} must be non-negative"
            )));
        }
        let grid = SlopeGrid {
            min: options.s_min.unwrap_or(defaults.min),
            max: options.s_max.unwrap_or(defaults.max),
            count: options.n.unwrap_or(defaults.count),
            cluster: (cluster > 0.0).then_some(cluster),
            include_zero: true,
        };
        grid.points()?;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::Config(format!("{name} must be positive, got {v}")))
            }
        };
        Ok(RunConfig {
            dim,
            body: options.body.unwrap_or_else(|| "ball".into()),
            grid,
            out: options.out,
            report: options.report,
            seed: options.seed.unwrap_or(0),
            tol_functional: positive("tol-functional", options.tol_functional.unwrap_or(1e-6))?,
            eps0: positive("eps0", options.eps0.unwrap_or(1e-2))?,
            mode,
        })
    }

    fn bonnesen(&self) -> BonnesenConfig {
        let mut c = BonnesenConfig::new(self.dim);
        c.eps0 = self.eps0;
        c
    }

    fn pair(&self) -> Result<BonnesenPair, CliError> {
        if self.dim % 2 != 0 || self.dim < 4 {
            return Err(CliError::Config(format!(
                "the perturbed pair needs an even dimension >= 4, got {}",
                self.dim
            )));
        }
        Ok(build_bonnesen_pair(&self.bonnesen())?)
    }

    fn klee(&self) -> Result<BodyOfRevolution, CliError> {
        if self.dim != 4 {
            return Err(CliError::Config(format!(
                "the Klee body lives in dimension 4, got {}",
                self.dim
            )));
        }
        Ok(build_klee_body(&KleeConfig::default())?)
    }

    /// The body named by the selector.
    pub fn load_body(&self, explicit_dim: bool) -> Result<BodyOfRevolution, CliError> {
        match self.body.as_str() {
            "ball" => Ok(BodyOfRevolution::ball(self.dim)?),
            "klee" => self.klee(),
            "bonnesen-plus" => Ok(self.pair()?.plus),
            "bonnesen-minus" => Ok(self.pair()?.minus),
            path => {
                let body = BodyDoc::read(Path::new(path))?.to_body()?;
                if explicit_dim && body.dim() != self.dim {
                    return Err(CliError::Config(format!(
                        "--d {} disagrees with the body file dimension {}",
                        self.dim,
                        body.dim()
                    )));
                }
                Ok(body)
            }
        }
    }
}

fn section_row(body: &BodyOfRevolution, s: f64) -> Result<SectionRow, revolv_core::Error> {
    let m = maximal_section(body, s)?;
    Ok(SectionRow {
        slope: Some(s),
        central: central_section(body, s)?,
        maximal: m.volume,
        projection: projection(body, s)?,
        h_star: m.h_star,
        x: m.chord.x(),
        y: m.chord.y(),
    })
}

/// Rows for every grid slope plus the axis row.
pub fn section_table(body: &BodyOfRevolution, grid: &[f64], mapper: &Parallel) -> Result<Vec<SectionRow>, CliError> {
    let mut rows = revolv_core::GridMap::map(mapper, grid, |s| section_row(body, s))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Numerical)?;
    let axis = axis_functionals(body);
    let lam = body.scale();
    let radius = lam * body.profile().peak();
    rows.push(SectionRow {
        slope: None,
        central: axis.central,
        maximal: axis.maximal,
        projection: axis.projection,
        h_star: lam * body.profile().peak_at(),
        x: radius,
        y: radius,
    });
    Ok(rows)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
            println!("{text}");
            Ok(())
        }
    }
}

fn print_claims(claims: &[Claim]) {
    for c in claims {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {:e} (threshold {:e})", c.name, c.value, c.threshold);
    }
}

fn run_sections(flags: Options) -> Result<i32, CliError> {
    let explicit_dim = flags.d.is_some() || flags.config.is_some();
    let config = RunConfig::resolve(flags, 4)?;
    let body = config.load_body(explicit_dim)?;
    let grid = config.grid.points()?;
    let mapper = Parallel::from_env()?;
    let rows = section_table(&body, &grid, &mapper)?;
    emit(config.out.as_deref(), &write_sections_csv(&rows))?;
    Ok(0)
}

fn run_klee(flags: Options) -> Result<i32, CliError> {
    let config = RunConfig::resolve(flags, 4)?;
    let body = config.klee()?;
    emit_json(config.out.as_deref(), &BodyDoc::from(&body))?;
    Ok(0)
}

fn run_bonnesen(mut flags: Options) -> Result<i32, CliError> {
    flags.mode = Some(Mode::Bonnesen);
    let config = RunConfig::resolve(flags, 6)?;
    let pair = config.pair()?;
    eprintln!(
        "built pair in dimension {} with eps = {:e} (rejected {:?})",
        config.dim, pair.eps, pair.rejected
    );
    emit_json(config.out.as_deref(), &PairDoc::from(&pair))?;
    Ok(0)
}

fn run_verify(flags: Options) -> Result<i32, CliError> {
    let config = RunConfig::resolve(flags, 4)?;
    let grid = config.grid.points()?;
    let mapper = Parallel::from_env()?;
    let pass = match config.mode {
        Mode::Klee => {
            let body = config.klee()?;
            let options = KleeOptions {
                tol_maximal: config.tol_functional,
                ..KleeOptions::default()
            };
            let report = verify_klee(&body, &grid, &options, &mapper)?;
            print_claims(&report.claims);
            if let Some(path) = &config.report {
                write_json(path, &KleeReportDoc::new(&report, &body, config.seed))?;
            }
            report.pass
        }
        Mode::Bonnesen => {
            let pair = config.pair()?;
            let options = VerifyOptions {
                tol_functional: config.tol_functional,
                ..VerifyOptions::default()
            };
            let report = verify_pair(
                &pair.plus,
                &pair.minus,
                &grid,
                &pair.solution.full_residuals,
                &options,
                &mapper,
            )?;
            print_claims(&report.claims);
            if let Some(path) = &config.report {
                write_json(path, &ReportDoc::new(&report, Some(&pair), config.seed))?;
            }
            report.pass
        }
    };
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { 1 })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Sections(o) => run_sections(o),
        Command::Klee(o) => run_klee(o),
        Command::Bonnesen(o) => run_bonnesen(o),
        Command::Verify(o) => run_verify(o),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("revolv: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"d": 6, "n": 30, "body": "klee"}"#).unwrap();
        let flags = Options {
            config: Some(path),
            d: Some(4),
            ..Options::default()
        };
        let c = RunConfig::resolve(flags, 4).unwrap();
        assert_eq!(c.dim, 4);
        assert_eq!(c.grid.count, 30);
        assert_eq!(c.body, "klee");
    }

    #[test]
    fn rejects_bad_settings() {
        for o in [
            Options {
                d: Some(2),
                ..Options::default()
            },
            Options {
                n: Some(1),
                ..Options::default()
            },
            Options {
                tol_functional: Some(0.0),
                ..Options::default()
            },
            Options {
                s_min: Some(5.0),
                s_max: Some(1.0),
                ..Options::default()
            },
        ] {
            assert!(matches!(RunConfig::resolve(o, 4), Err(CliError::Config(_))));
        }
    }

    #[test]
    fn unknown_config_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"dimension": 6}"#).unwrap();
        let flags = Options {
            config: Some(path),
            ..Options::default()
        };
        assert!(matches!(RunConfig::resolve(flags, 4), Err(CliError::Config(_))));
    }
}
