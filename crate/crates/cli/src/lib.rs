//! `liealg_report`: runs the symmetry pipeline on a model surface and prints
//! text or JSON reports.

pub mod report;
pub mod text;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use paracr_core::exactalg::rational::parse_rational;
use paracr_core::flows::{VerifyOptions, DEFAULT_SEED};
use paracr_core::normalform::{self, DefiningFunction};
use paracr_core::solver::{self, default_weight_cap};
use paracr_core::{Error, ModelSurface, Poly};

use report::*;
use text::Render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLOSURE: i32 = 2;
pub const EXIT_FLOW: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "liealg_report", version, about = "Infinitesimal para-CR automorphisms of y = a + P(x, b)")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Weighted degree of P.
    #[arg(long)]
    pub k: i64,
    /// gamma_1,...,gamma_{k-1}: comma-separated rationals such as 3,-1/2,0.25.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    /// Floating tolerance for flows involving radicals.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report: case, type, singular locus, algebra, discrete group, flows.
    Analyze {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Highest weight solved (default 3k).
        #[arg(long, allow_hyphen_values = true)]
        weight_cap: Option<i64>,
        #[command(flatten)]
        flow: FlowArgs,
    },
    /// Kernel of the tangency equation at one weight.
    SolveWeight {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: i64,
    },
    /// Type of a defining function y = a + phi(x, a, b).
    FiniteType {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
    /// Zero set of P_xb.
    SingularLocus {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Power series solution of the embedding transport equation.
    Embed {
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[arg(long, default_value_t = paracr_core::embedding::DEFAULT_ORDER)]
        order: u32,
    },
    /// Verification of the admissible named flows.
    Flows {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        flow: FlowArgs,
    },
    /// Discrete sign symmetries.
    Discrete {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
}

/// Result of one invocation: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

/// `msg` followed by the input with a caret under the failing position.
fn annotate(what: &str, src: &str, e: &Error) -> String {
    match e {
        Error::Parse { pos, msg } => {
            let caret = " ".repeat((*pos).min(src.len()));
            format!("error: cannot parse {what} at position {pos}: {msg}\n  {src}\n  {caret}^")
        }
        other => format!("error: invalid {what}: {other}"),
    }
}

pub fn parse_gamma(src: &str) -> Result<Vec<paracr_core::Rational>, String> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in src.split(',') {
        match parse_rational(part) {
            Ok(q) => out.push(q),
            Err(_) => {
                let lead = part.len() - part.trim_start().len();
                let e = Error::Parse {
                    pos: offset + lead,
                    msg: format!("expected a rational, found {:?}", part.trim()),
                };
                return Err(annotate("--gamma", src, &e));
            }
        }
        offset += part.len() + 1;
    }
    Ok(out)
}

fn surface(a: &SurfaceArgs) -> Result<ModelSurface, String> {
    let gamma = parse_gamma(&a.gamma)?;
    ModelSurface::new(a.k, gamma).map_err(|e| format!("error: invalid surface: {e}"))
}

fn poly(what: &str, src: &str) -> Result<Poly, String> {
    src.parse::<Poly>().map_err(|e| annotate(what, src, &e))
}

fn seed() -> Result<u64, String> {
    match std::env::var("PARACR_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("error: PARACR_SEED must be an unsigned integer, got {s:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn verify_options(f: &FlowArgs) -> Result<VerifyOptions, String> {
    let mut opts = VerifyOptions {
        seed: seed()?,
        ..Default::default()
    };
    if let Some(t) = f.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(format!("error: --tolerance must be positive, got {t}"));
        }
        opts.tolerances.surface = t;
    }
    Ok(opts)
}

fn emit<R: Render + Serialize>(r: &R, format: Format, code: i32) -> Outcome {
    let stdout = match format {
        Format::Text => r.render(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s
        }
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn execute(cli: Cli) -> Result<Outcome, String> {
    let fmt = cli.format;
    Ok(match cli.command {
        Command::Analyze {
            surface: sa,
            weight_cap,
            flow,
        } => {
            let s = surface(&sa)?;
            let cap = weight_cap.unwrap_or_else(|| default_weight_cap(&s));
            let opts = verify_options(&flow)?;
            let r = analyze(&s, cap, &opts).map_err(|e| format!("error: {e}"))?;
            let code = if !r.algebra.closure_violations.is_empty() {
                EXIT_CLOSURE
            } else if !r.flow_verification.passed() {
                EXIT_FLOW
            } else {
                EXIT_OK
            };
            emit(&r, fmt, code)
        }
        Command::SolveWeight { surface: sa, weight } => {
            let s = surface(&sa)?;
            emit(&KernelReport::new(&s, &solver::solve_weight(&s, weight)), fmt, EXIT_OK)
        }
        Command::FiniteType { phi } => {
            let p = poly("--phi", &phi)?;
            let d = DefiningFunction::new(p).map_err(|e| format!("error: invalid --phi: {e}"))?;
            let r = FiniteTypeReport {
                phi: d.phi().to_string(),
                result: FiniteTypeInfo::new(&normalform::finite_type(&d)),
            };
            emit(&r, fmt, EXIT_OK)
        }
        Command::SingularLocus { surface: sa } => {
            let s = surface(&sa)?;
            let r = LocusReport {
                surface: SurfaceInfo::new(&s),
                locus: LocusInfo::new(&s, &normalform::singular_locus(&s)),
            };
            emit(&r, fmt, EXIT_OK)
        }
        Command::Embed { psi, order } => {
            let p = poly("--psi", &psi)?;
            let r = embed(&p, order).map_err(|e| format!("error: {e}"))?;
            emit(&r, fmt, EXIT_OK)
        }
        Command::Flows { surface: sa, flow } => {
            let s = surface(&sa)?;
            let opts = verify_options(&flow)?;
            let r = FlowsReport {
                surface: SurfaceInfo::new(&s),
                verification: verify_flows(&s, &opts),
            };
            let code = if r.verification.passed() { EXIT_OK } else { EXIT_FLOW };
            emit(&r, fmt, code)
        }
        Command::Discrete { surface: sa } => {
            let s = surface(&sa)?;
            let r = DiscreteReport {
                surface: SurfaceInfo::new(&s),
                group: DiscreteInfo::new(&s),
            };
            emit(&r, fmt, EXIT_OK)
        }
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(rendered)
            };
        }
    };
    match execute(cli) {
        Ok(o) => o,
        Err(msg) => Outcome::usage(msg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use paracr_core::exactalg::rational::rat;

    #[test]
    fn gamma_lists() {
        assert_eq!(parse_gamma("3, -1/2,0.25").unwrap(), vec![rat(3, 1), rat(-1, 2), rat(1, 4)]);
        let e = parse_gamma("1,2,,3").unwrap_err();
        assert!(e.contains("position 4"), "{e}");
        assert!(e.ends_with("\n      ^"), "{e:?}");
        assert!(parse_gamma("1/0").is_err());
    }

    #[test]
    fn caret_points_at_failure() {
        let e = poly("--phi", "a + * b").unwrap_err();
        let lines: Vec<&str> = e.lines().collect();
        let col = lines[2].find('^').unwrap();
        assert_eq!(&lines[1][col..col + 1], "*");
    }
}
