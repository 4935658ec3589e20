//! The `detrep` command line.
//!
//! Every subcommand prints one JSON document on stdout. Exit status is 0
//! when the command ran (whatever the verdict), 1 for input errors and 2
//! when a witness run found a mismatch.

pub mod input;
pub mod render;

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use detrep::decide::{self, DecideError};
use detrep::degmatrix::{DegreeMatrix, DhbMatrix, MatrixError};
use detrep::resolution::{generic_betti, BettiData, HVector, ResolutionError};
use detrep::series::{self, SeriesQuery, ShiftedProperty};
use detrep::witness::{self, PrimeField, WitnessError, DEFAULT_PRIME};

use input::{
    parse_json, parse_property, EnumeratePayload, Format, Grid, HPayload, HfPayload, InputError,
    MatrixPayload, Options, Request, RequestEnvelope, ScanPayload, SeriesPayload, SubschemePayload,
    WitnessPayload,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TRIALS: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "detrep",
    version,
    about = "Determinantal representations of general plane curves"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Prime for witness computations.
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Largest curve degree for `scan`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    dmax: Option<i64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is a general form the determinant of a matrix with these entry degrees?
    CheckRepresentable {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Does a general curve of degree d contain a scheme with this dHB matrix?
    CheckSubscheme {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// The closed-form answer by the position of d among the shifts.
    Corollary {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// Least d beyond which the answer is always yes.
    Threshold {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Subscheme decisions for d = 1..=dmax.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Hilbert function of the given Betti data.
    Hf {
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        #[arg(long, allow_hyphen_values = true)]
        syz: String,
        #[arg(long, allow_negative_numbers = true)]
        tmax: Option<i64>,
        /// Dimension of the stratum, to report incidence dimensions.
        #[arg(long)]
        stratum_dim: Option<i64>,
    },
    /// Generic Betti numbers of an h-vector.
    BettiFromHf {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Hilbert functions of complete linear series on a general curve.
    Series {
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        divisor_degree: i64,
        #[arg(long)]
        dim: i64,
        /// SHIFT:KIND with KIND nonspecial or effective, for D + SHIFT·H.
        #[arg(long = "property", allow_hyphen_values = true, value_parser = parse_property)]
        properties: Vec<input::PropertySpec>,
    },
    /// Randomized check of a decision over a prime field.
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Curve degree; treats the matrix as a dHB matrix.
        #[arg(long, allow_negative_numbers = true)]
        degree: Option<i64>,
    },
    /// Tally decisions over all well-ordered n x n matrices of a degree.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        #[arg(long)]
        bound: i64,
    },
    /// Read a request envelope {command, payload, options} from stdin.
    Request,
}

/// Exit status and stdout text of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn grid_arg(text: &str, flag: &str) -> Result<Grid, InputError> {
    parse_json(text, flag, "")
}

fn list_arg(text: &str, flag: &str) -> Result<Vec<i64>, InputError> {
    parse_json(text, flag, "")
}

fn into_request(
    cmd: Command,
    stdin: &mut dyn Read,
) -> Result<(Request, Options, bool), InputError> {
    let none = Options::default();
    let req = match cmd {
        Command::CheckRepresentable { matrix } => Request::CheckRepresentable(MatrixPayload {
            matrix: grid_arg(&matrix, "--matrix")?,
        }),
        Command::CheckSubscheme { matrix, degree } => Request::CheckSubscheme(SubschemePayload {
            matrix: grid_arg(&matrix, "--matrix")?,
            degree,
        }),
        Command::Corollary { matrix, degree } => Request::Corollary(SubschemePayload {
            matrix: grid_arg(&matrix, "--matrix")?,
            degree,
        }),
        Command::Threshold { matrix } => Request::Threshold(MatrixPayload {
            matrix: grid_arg(&matrix, "--matrix")?,
        }),
        Command::Scan { matrix } => Request::Scan(ScanPayload {
            matrix: grid_arg(&matrix, "--matrix")?,
            dmax: None,
        }),
        Command::Hf {
            gens,
            syz,
            tmax,
            stratum_dim,
        } => Request::Hf(HfPayload {
            gens: list_arg(&gens, "--gens")?,
            syz: list_arg(&syz, "--syz")?,
            tmax,
            stratum_dim,
        }),
        Command::BettiFromHf { h } => Request::BettiFromHf(HPayload {
            h: list_arg(&h, "--h")?,
        }),
        Command::Series {
            degree,
            divisor_degree,
            dim,
            properties,
        } => Request::Series(SeriesPayload {
            degree,
            divisor_degree,
            dim,
            properties,
        }),
        Command::Witness { matrix, degree } => Request::Witness(WitnessPayload {
            matrix: grid_arg(&matrix, "--matrix")?,
            degree,
        }),
        Command::Enumerate { n, degree, bound } => {
            Request::Enumerate(EnumeratePayload { n, degree, bound })
        }
        Command::Request => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| InputError::new(format!("reading stdin: {e}")))?;
            let env: RequestEnvelope = parse_json(&text, "stdin", "")?;
            let (req, opts) = env.into_request()?;
            return Ok((req, opts, true));
        }
    };
    Ok((req, none, false))
}

/// Settings after layering envelope options over command-line flags.
#[derive(Clone, Copy, Debug)]
struct Settings {
    prime: u64,
    seed: u64,
    trials: usize,
    dmax: Option<i64>,
    format: Format,
    /// The payload came from a stdin envelope rather than flags.
    from_stdin: bool,
}

impl Settings {
    fn resolve(flags: &GlobalArgs, env: &Options, from_stdin: bool) -> Settings {
        Settings {
            prime: env.prime.or(flags.prime).unwrap_or(DEFAULT_PRIME),
            seed: env.seed.or(flags.seed).unwrap_or(DEFAULT_SEED),
            trials: env.trials.or(flags.trials).unwrap_or(DEFAULT_TRIALS),
            dmax: env.dmax.or(flags.dmax),
            format: env.format.or(flags.format).unwrap_or_default(),
            from_stdin,
        }
    }

    fn matrix_error(&self, e: &MatrixError) -> InputError {
        if self.from_stdin {
            input::matrix_error(e, "stdin", "/payload/matrix")
        } else {
            input::matrix_error(e, "--matrix", "")
        }
    }

    fn decide_error(&self, e: DecideError) -> InputError {
        match e {
            DecideError::Matrix(m) => self.matrix_error(&m),
            other => InputError::new(other.to_string()),
        }
    }

    fn square(&self, grid: &Grid) -> Result<DegreeMatrix, InputError> {
        DegreeMatrix::from_rows(grid).map_err(|e| self.matrix_error(&e))
    }

    fn dhb(&self, grid: &Grid) -> Result<DhbMatrix, InputError> {
        DhbMatrix::from_rows(grid).map_err(|e| self.matrix_error(&e))
    }

    fn field(&self) -> Result<PrimeField, InputError> {
        PrimeField::new(self.prime).ok_or_else(|| {
            InputError::new(WitnessError::NotPrime(self.prime).to_string())
                .at("--prime", String::new())
        })
    }
}

struct Body {
    value: Value,
    mismatch: bool,
}

impl From<Value> for Body {
    fn from(value: Value) -> Self {
        Body {
            value,
            mismatch: false,
        }
    }
}

fn resolution_err(e: ResolutionError) -> InputError {
    InputError::new(e.to_string())
}

fn execute(req: Request, s: &Settings) -> Result<Body, InputError> {
    Ok(match req {
        Request::CheckRepresentable(p) => render::decision(
            &decide::representable(&s.square(&p.matrix)?).map_err(|e| s.decide_error(e))?,
        )
        .into(),
        Request::CheckSubscheme(p) => render::decision(
            &decide::contains_subscheme(&s.dhb(&p.matrix)?, p.degree)
                .map_err(|e| s.decide_error(e))?,
        )
        .into(),
        Request::Corollary(p) => {
            let (dec, case) = decide::corollary_case(&s.dhb(&p.matrix)?, p.degree)
                .map_err(|e| s.decide_error(e))?;
            render::corollary(&dec, case).into()
        }
        Request::Threshold(p) => {
            let q = s.dhb(&p.matrix)?;
            let t = decide::stable_threshold(&q).map_err(|e| s.decide_error(e))?;
            json!({"threshold": t, "shifts": q.shifts(), "minorDegrees": q.minor_degrees()}).into()
        }
        Request::Scan(p) => {
            let q = s.dhb(&p.matrix)?;
            let dmax = p
                .dmax
                .or(s.dmax)
                .unwrap_or(q.shifts().first().copied().unwrap_or(0) + 2);
            render::scan(&decide::scan(&q, dmax).map_err(|e| s.decide_error(e))?).into()
        }
        Request::Hf(p) => hf(p)?.into(),
        Request::BettiFromHf(p) => {
            let h = HVector::new(p.h).map_err(resolution_err)?;
            render::betti(&generic_betti(&h).map_err(resolution_err)?).into()
        }
        Request::Series(p) => {
            let query = SeriesQuery {
                curve_degree: p.degree,
                divisor_degree: p.divisor_degree,
                series_dim: p.dim,
                properties: p
                    .properties
                    .into_iter()
                    .map(ShiftedProperty::from)
                    .collect(),
            };
            render::series(&series::analyze(&query).map_err(|e| InputError::new(e.to_string()))?)
                .into()
        }
        Request::Witness(p) => {
            let field = s.field()?;
            let report = match p.degree {
                None => {
                    witness::verify_representable(&s.square(&p.matrix)?, s.trials, &field, s.seed)
                }
                Some(d) => {
                    witness::verify_subscheme(&s.dhb(&p.matrix)?, d, s.trials, &field, s.seed)
                }
            };
            let report = report.map_err(|e| match e {
                WitnessError::Decide(d) => s.decide_error(d),
                other => InputError::new(other.to_string()),
            })?;
            Body {
                mismatch: !report.passed(),
                value: serde_json::to_value(&report).expect("report serializes"),
            }
        }
        Request::Enumerate(p) => {
            if p.n > 6 || !(0..=12).contains(&p.bound) {
                return Err(InputError::new(
                    "enumerate supports n <= 6 and 0 <= bound <= 12",
                ));
            }
            render::census(&decide::census(p.n, p.degree, p.bound)).into()
        }
    })
}

fn hf(p: HfPayload) -> Result<Value, InputError> {
    let betti = BettiData::new(p.gens, p.syz).map_err(resolution_err)?;
    let delta = betti.scheme_degree().map_err(resolution_err)?;
    let tmax = p.tmax.unwrap_or(betti.syz()[0]);
    let ts = 0..=tmax.max(0);
    let mut out = json!({
        "gens": betti.gens(),
        "syz": betti.syz(),
        "degree": delta,
        "stabilizationBound": betti.stabilization_bound(),
        "hf": ts.clone().map(|t| betti.hilbert_function(t)).collect::<Vec<_>>(),
        "h0Ideal": ts.clone().map(|t| betti.h0_ideal(t)).collect::<Vec<_>>(),
        "hvector": betti.hvector().values(),
        "numericallyMinimal": betti.is_numerically_minimal(),
    });
    if !betti.is_numerically_minimal() {
        out["minimal"] = render::betti(&betti.minimalize().map_err(resolution_err)?);
    }
    if let Some(dim) = p.stratum_dim {
        out["incidence"] = ts
            .map(|d| {
                let inc = betti.incidence_dimension(dim, d);
                json!({"d": d, "dimension": inc.dimension, "dominancePossible": inc.dominance_possible})
            })
            .collect();
    }
    Ok(out)
}

fn error_body(e: &InputError) -> Value {
    let mut err = json!({"message": e.message});
    if let Some(src) = &e.source {
        err["source"] = json!(src);
    }
    if let Some(path) = &e.path {
        err["path"] = json!(path);
    }
    json!({ "error": err })
}

fn emit(value: &Value, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string(value).expect("json serializes")
        ),
        Format::Table => render::table(value),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let stdout = if code == EXIT_OK {
                e.to_string()
            } else {
                emit(
                    &error_body(&InputError::new(e.to_string().trim_end())),
                    Format::Json,
                )
            };
            return Outcome { code, stdout };
        }
    };
    let flag_format = cli.global.format.unwrap_or_default();
    let (req, env_opts, from_stdin) = match into_request(cli.command, stdin) {
        Ok(x) => x,
        Err(e) => {
            return Outcome {
                code: EXIT_INPUT,
                stdout: emit(&error_body(&e), flag_format),
            }
        }
    };
    let settings = Settings::resolve(&cli.global, &env_opts, from_stdin);
    match execute(req, &settings) {
        Ok(body) => Outcome {
            code: if body.mismatch {
                EXIT_MISMATCH
            } else {
                EXIT_OK
            },
            stdout: emit(&body.value, settings.format),
        },
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: emit(&error_body(&e), settings.format),
        },
    }
}

/// Convenience for callers that never use `request`.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(args, &mut std::io::empty())
}
