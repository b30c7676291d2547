//! Command-line surface. Every subcommand reads JSON or `p/q` strings and
//! writes one JSON document.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 mathematical degeneracy.

use std::ffi::OsString;
use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::basis::{kernel_sum, OrthogonalBasis};
use crate::branch::{self, NumericOptions, DEFAULT_DEDUP_RADIUS, DEFAULT_RESIDUAL_TOL};
use crate::constructor::{construct_theorem1, construct_theorem2, AffineFamilySpec, EquationSpec};
use crate::error::Error;
use crate::moments::{MomentFunctional, MomentSequence, WeightSpec};
use crate::poly::{format_rational, parse_rational, Poly, Rational};
use crate::verifier::{ops_check, verify};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "momker",
    version,
    about = "Exact polynomial solutions of a nonlinear integral equation"
)]
pub struct Cli {
    /// Weight as inline JSON or @file.
    #[arg(long, global = true)]
    weight: Option<String>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List moments mu_0..mu_K.
    Moments {
        #[arg(long)]
        upto: usize,
    },
    /// Monic orthogonal basis and norms for L_{m w}.
    Basis {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        modifier: Option<String>,
    },
    /// Kernel polynomial K_n(x; zeta).
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[arg(long)]
        degree: usize,
    },
    /// Bordered-determinant construction.
    Construct {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// beta for theorem1, alpha for theorem2.
        #[arg(long)]
        poly_arg: String,
        #[arg(long)]
        degree: usize,
    },
    /// Residual of a candidate polynomial.
    Verify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        poly: String,
    },
    /// Orthogonality table of a polynomial sequence.
    OpsCheck {
        #[arg(long)]
        modifier: String,
        #[arg(long)]
        polys: String,
    },
    /// Exact and numeric solution branches at a fixed degree.
    Solve {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = DEFAULT_DEDUP_RADIUS)]
        dedup_radius: f64,
        #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
        residual_tol: f64,
    },
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long, conflicts_with_all = ["zeta", "tau", "sigma"])]
    alpha: Option<String>,
    #[arg(long, requires = "alpha")]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["tau", "sigma"])]
    zeta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    Theorem1,
    Theorem2,
}

/// Result of one invocation: exit code plus the JSON document.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub document: Value,
}

impl Outcome {
    fn ok(document: Value) -> Self {
        Outcome {
            code: EXIT_OK,
            document,
        }
    }

    fn error(code: i32, kind: &str, detail: String) -> Self {
        Outcome {
            code,
            document: json!({ "error": { "kind": kind, "detail": detail } }),
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        let code = if e.is_degeneracy() {
            EXIT_DEGENERATE
        } else {
            EXIT_INPUT
        };
        Outcome::error(code, e.kind(), e.to_string())
    }
}

/// Inline text, or the contents of the file after a leading `@`.
fn read_arg(raw: &str) -> Result<String, Error> {
    match raw.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
        }
        None => Ok(raw.to_string()),
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(raw: &str, what: &str) -> Result<T, Error> {
    let text = read_arg(raw)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn parse_poly(raw: &str, what: &str) -> Result<Poly, Error> {
    parse_json(raw, what)
}

fn parse_rat(raw: &str) -> Result<Rational, Error> {
    parse_rational(&read_arg(raw)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyList {
    Bare(Vec<Poly>),
    Wrapped { polys: Vec<Poly> },
}

fn strings(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(format_rational).collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn dispatch(cli: Cli) -> Result<Outcome, Error> {
    let weight: WeightSpec = match &cli.weight {
        Some(w) => WeightSpec::from_json(&read_arg(w)?)?,
        None => return Err(Error::Parse("--weight is required".into())),
    };
    log::debug!("weight: {weight:?}");
    let outcome = match cli.command {
        Command::Moments { upto } => {
            let seq = MomentSequence::new(weight);
            let mus = (0..=upto)
                .map(|k| seq.moment(k))
                .collect::<Result<Vec<_>, _>>()?;
            Outcome::ok(json!({ "moments": strings(&mus) }))
        }
        Command::Basis { degree, modifier } => {
            let m = match modifier {
                Some(m) => parse_poly(&m, "modifier")?,
                None => Poly::one(),
            };
            let f = MomentFunctional::with_modifier(weight, m)?;
            let b = OrthogonalBasis::build(&f, degree)?;
            Outcome::ok(json!({ "polys": to_value(&b.polys()), "norms": strings(b.norms()) }))
        }
        Command::Kernel { zeta, degree } => {
            let k = kernel_sum(&weight, &parse_rat(&zeta)?, degree)?;
            Outcome::ok(to_value(&k.poly))
        }
        Command::Construct {
            case,
            poly_arg,
            degree,
        } => {
            let g = parse_poly(&poly_arg, "poly-arg")?;
            let r = match case {
                CaseArg::Theorem1 => construct_theorem1(&weight, &g, degree)?,
                CaseArg::Theorem2 => construct_theorem2(&weight, &g, degree)?,
            };
            Outcome::ok(to_value(&r))
        }
        Command::Verify { map, poly } => {
            let p = parse_poly(&poly, "poly")?;
            let spec = match (map.alpha, map.beta, map.zeta, map.tau, map.sigma) {
                (Some(a), Some(b), None, None, None) => {
                    EquationSpec::new(weight, parse_poly(&a, "alpha")?, parse_poly(&b, "beta")?)
                }
                (None, None, Some(z), Some(t), Some(s)) => EquationSpec::from_family(
                    weight,
                    &AffineFamilySpec::new(parse_rat(&z)?, parse_rat(&t)?, parse_rat(&s)?),
                ),
                _ => {
                    return Err(Error::Parse(
                        "verify needs either --alpha/--beta or --zeta/--tau/--sigma".into(),
                    ))
                }
            };
            let report = verify(&spec, &p)?;
            Outcome {
                code: if report.is_solution {
                    EXIT_OK
                } else {
                    EXIT_VERIFICATION_FAILED
                },
                document: to_value(&report),
            }
        }
        Command::OpsCheck { modifier, polys } => {
            let m = parse_poly(&modifier, "modifier")?;
            let seq = match parse_json::<PolyList>(&polys, "polys")? {
                PolyList::Bare(v) | PolyList::Wrapped { polys: v } => v,
            };
            let f = MomentFunctional::with_modifier(weight, m)?;
            let report = ops_check(&f, &seq)?;
            Outcome {
                code: if report.is_ops {
                    EXIT_OK
                } else {
                    EXIT_VERIFICATION_FAILED
                },
                document: to_value(&report),
            }
        }
        Command::Solve {
            alpha,
            beta,
            degree,
            seed,
            starts,
            dedup_radius,
            residual_tol,
        } => {
            let spec = EquationSpec::new(
                weight,
                parse_poly(&alpha, "alpha")?,
                parse_poly(&beta, "beta")?,
            );
            let opts = NumericOptions {
                starts,
                seed,
                dedup_radius,
                residual_tol,
                ..NumericOptions::default()
            };
            let set = branch::solve(&spec, degree, &opts)?;
            Outcome::ok(to_value(&set))
        }
    };
    Ok(outcome)
}

/// Parse `args` (including the program name) and run the subcommand.
///
/// `--help` and `--version` come back as exit code 0 with the text under
/// a `"message"` key; usage errors map to exit code 2.
pub fn run<I, T>(args: I) -> (Outcome, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let out = if code == EXIT_OK {
                Outcome::ok(json!({ "message": e.to_string() }))
            } else {
                Outcome::error(code, "usage", e.to_string())
            };
            return (out, None);
        }
    };
    let output = cli.output.clone();
    let outcome = dispatch(cli).unwrap_or_else(Outcome::from);
    (outcome, output)
}
