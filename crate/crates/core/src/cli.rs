//! The `mixint` command line. Lives in the library so it can be driven
//! in-process by tests; the binary only forwards `argv` and the exit code.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use crate::alpha_core::{self, RadialAlphaProfile, CAMPAIGN_ALPHAS, CLOSURE_ALPHAS};
use crate::convex_body::{mixed_volume, BallApprox, Polytope};
use crate::error::{Error, Result};
use crate::layercake::LayerCake;
use crate::mixed_integral::{self, default_eps_values};
use crate::oracle::mc_volume;
use crate::rearrange;
use crate::report::VerifyReport;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Grid half-width used when an α-sum has to be re-expressed in a smaller α.
const REEXPRESS_R_MAX: f64 = 50.0;

#[derive(Parser, Debug)]
#[command(name = "mixint", version, about = "Mixed integrals of quasi-concave layer cakes and alpha-concave calculus")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Ambient dimension for commands that do not read it from their input.
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,
    /// Facets of the polytopal unit ball (default 64 in the plane, 320 in space).
    #[arg(long, global = true)]
    ball_facets: Option<usize>,
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo samples for oracle cross-checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Volume of a body; with --samples also a Monte Carlo estimate.
    Volume { body: PathBuf },
    /// V(K1, ..., Kn) of a JSON array of n bodies.
    MixedVolume { bodies: PathBuf },
    /// V(f1, ..., fn) of a JSON array of n layer cakes.
    MixedIntegral { cakes: PathBuf },
    /// Quermassintegrals of a cake read off its Steiner polynomial.
    Steiner {
        cake: PathBuf,
        /// Comma separated dilation factors (default 0.25, 0.5, ..., 2).
        #[arg(long, value_delimiter = ',')]
        eps_grid: Option<Vec<f64>>,
    },
    /// Symmetric decreasing rearrangement of a cake.
    Rearrange {
        cake: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// alpha-sum of two radial profiles.
    AlphaSum {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized verification campaign.
    Verify(VerifyArgs),
    /// Worked constructions.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    name: VerifyName,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// alpha values cycled through by the profile campaigns (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyName {
    Isoperimetric,
    BrunnMinkowski,
    AfCorollary,
    Alexandrov,
    MomentLemma,
    Polynomiality,
    VProperties,
    Closure,
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Two-layer planar cakes with unit integral and vanishing surface area.
    ShrinkingSurface {
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
}

enum Outcome {
    Text(String),
    Report(VerifyReport, Option<PathBuf>),
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(Outcome::Text(s)) => {
            let _ = out.write_all(s.as_bytes());
            EXIT_PASS
        }
        Ok(Outcome::Report(report, path)) => {
            let body = match cli.global.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            let written = match &path {
                Some(p) => fs::write(p, &body).map_err(Error::from),
                None => out.write_all(body.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            let _ = writeln!(
                err,
                "{}: {} trials, worst margin {:e}, {} failures -> {}",
                report.inequality.as_str(),
                report.trials,
                report.worst_margin,
                report.failures.len(),
                if report.passed() { "PASS" } else { "FAIL" }
            );
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_VIOLATION
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Input { path: path.display().to_string(), source })
}

fn ball(global: &Global, dim: usize) -> Result<BallApprox> {
    match global.ball_facets {
        Some(m) => BallApprox::new(dim, m),
        None => BallApprox::default_for(dim),
    }
}

/// Shortest decimal that round-trips after 12 significant digits, so that
/// `2.0000000000000004` prints as `2`.
fn scalar(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}\n")
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<Outcome> {
    match out {
        Some(p) => {
            fs::write(p, text)?;
            Ok(Outcome::Text(String::new()))
        }
        None => Ok(Outcome::Text(text)),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Volume { body } => {
            let p: Polytope = read_json(body)?;
            let mut s = scalar(p.volume());
            if let Some(n) = g.samples {
                let mc = mc_volume(&p, n, g.seed)?;
                let _ = writeln!(s, "monte_carlo {} +- {}", mc.estimate, mc.std_error);
            }
            Ok(Outcome::Text(s))
        }
        Command::MixedVolume { bodies } => {
            let ps: Vec<Polytope> = read_json(bodies)?;
            let refs: Vec<&Polytope> = ps.iter().collect();
            Ok(Outcome::Text(scalar(mixed_volume(&refs)?)))
        }
        Command::MixedIntegral { cakes } => {
            let fs: Vec<LayerCake> = read_json(cakes)?;
            let refs: Vec<&LayerCake> = fs.iter().collect();
            let r = mixed_integral::mixed_integral(&refs)?;
            match g.format {
                Format::Json => Ok(Outcome::Text(scalar(r.value))),
                Format::Csv => Ok(Outcome::Text(format!("value,inputs_digest\n{:e},{}\n", r.value, r.inputs_digest))),
            }
        }
        Command::Steiner { cake, eps_grid } => {
            let f: LayerCake = read_json(cake)?;
            let eps = eps_grid.clone().unwrap_or_else(default_eps_values);
            let s = mixed_integral::steiner_expand(&f, &eps, &ball(g, f.dim())?)?;
            Ok(Outcome::Text(pretty(&s)?))
        }
        Command::Rearrange { cake, out } => {
            let f: LayerCake = read_json(cake)?;
            let star = rearrange::rearrange(&f, &ball(g, f.dim())?)?;
            emit(pretty(&star)?, out)
        }
        Command::AlphaSum { first, second, alpha, out } => {
            let mut f: RadialAlphaProfile = read_json(first)?;
            let mut h: RadialAlphaProfile = read_json(second)?;
            if let Some(a) = *alpha {
                // the classes are nested, so a larger alpha can always be re-read in a smaller one
                f = f.reexpress(a, REEXPRESS_R_MAX, g.tol)?;
                h = h.reexpress(a, REEXPRESS_R_MAX, g.tol)?;
            }
            emit(pretty(&f.alpha_sum(&h)?)?, out)
        }
        Command::Verify(v) => verify(g, v).map(|r| Outcome::Report(r, v.out.clone())),
        Command::Demo { demo: Demo::ShrinkingSurface { kmax } } => {
            let seq = rearrange::shrinking_surface_sequence(*kmax, &ball(g, 2)?)?;
            match g.format {
                Format::Json => Ok(Outcome::Text(pretty(&seq)?)),
                Format::Csv => {
                    let mut s = String::from("k,radius,delta,integral,surface_area\n");
                    for p in &seq {
                        let _ = writeln!(s, "{},{},{:e},{},{:e}", p.k, p.radius, p.delta, p.integral, p.surface_area);
                    }
                    Ok(Outcome::Text(s))
                }
            }
        }
    }
}

fn verify(g: &Global, v: &VerifyArgs) -> Result<VerifyReport> {
    if v.trials == 0 {
        return Err(Error::Precondition("--trials must be >= 1".into()));
    }
    let alphas = |default: &[f64]| v.alpha.clone().unwrap_or_else(|| default.to_vec());
    match v.name {
        VerifyName::Isoperimetric => rearrange::verify_isoperimetric(g.seed, v.trials, &ball(g, g.dim)?, g.tol),
        VerifyName::BrunnMinkowski => rearrange::verify_bm(g.seed, v.trials, &ball(g, g.dim)?, g.tol),
        VerifyName::AfCorollary => rearrange::verify_af_corollary(g.seed, v.trials, &ball(g, g.dim)?, g.tol),
        VerifyName::Polynomiality => mixed_integral::verify_polynomiality(g.seed, v.trials, g.tol),
        VerifyName::VProperties => mixed_integral::verify_v_properties(g.seed, v.trials, g.tol),
        VerifyName::Alexandrov => alpha_core::verify_alexandrov(g.seed, v.trials, g.tol, &alphas(&CAMPAIGN_ALPHAS), v.n, v.k, v.m),
        VerifyName::MomentLemma => alpha_core::verify_moment_lemma(g.seed, v.trials, g.tol, &alphas(&CAMPAIGN_ALPHAS)),
        VerifyName::Closure => alpha_core::verify_closure(g.seed, v.trials, g.tol, &alphas(&CLOSURE_ALPHAS)),
    }
}
