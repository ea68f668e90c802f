//! Command-line front end. [`run`] is the whole program minus process exit,
//! so the integration tests can drive it directly.

use chevalley::arith::{galois_params, galois_params_for_field, gl_params, GaloisParams};
use chevalley::error::{Error, Hypothesis};
use chevalley::oracles::{verify_restricted_chern, OracleLimits, DEFAULT_MONOMIAL_LIMIT};
use chevalley::presentations::{
    chow_gl_presentation, cobordism_presentation, compare_chow_cobordism_gl, poincare_series,
    GradedPresentation, Grading, SCHEMA_VERSION,
};
use chevalley::rootdata::{lookup, Family};
use chevalley::sweep::{verify_all, SweepSpec};
use chevalley::Execution;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Environment variable overriding the oracle monomial limit.
pub const MONOMIAL_LIMIT_ENV: &str = "CHEVALLEY_MONOMIAL_LIMIT";

#[derive(Debug, Parser)]
#[command(
    name = "chevalley",
    version,
    about = "Mod-l cobordism and Chow ring presentations of BG(F_q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Show r, a, h (and m, e for a matrix size) for a field and a prime.
    Params(ParamsArgs),
    /// Present the cobordism or Chow ring of a classifying space.
    Present(PresentArgs),
    /// Poincare series of a presentation up to a cutoff degree.
    Series(PresentArgs),
    /// Compare the Chow and cobordism presentations of BGL_n.
    Compare(CompareArgs),
    /// Run the verification sweeps, or check the restricted Chern classes.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field size, a prime power.
    #[arg(long)]
    pub q: u64,
    /// Coefficient prime.
    #[arg(long)]
    pub l: u64,
    /// Characteristic; inferred from q when omitted.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Cobordism,
    Chow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradingArg {
    Chow,
    Topological,
}

#[derive(Debug, Clone, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Matrix size for the long division n = r m + e.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct PresentArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub rank: u32,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Coefficients mod l^b (Chow ring of GL_n only).
    #[arg(long, default_value_t = 1)]
    pub b: u32,
    #[arg(long, value_enum, default_value = "cobordism")]
    pub theory: TheoryArg,
    /// Defaults to topological for cobordism and chow for the Chow ring.
    #[arg(long, value_enum)]
    pub grading: Option<GradingArg>,
    /// Attach the Poincare series up to this degree.
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Matrix size n of GL_n.
    #[arg(long)]
    pub rank: u64,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Check the restricted Chern classes for this m instead of sweeping
    /// (needs --q and --l).
    #[arg(long)]
    pub chern: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub l: Option<u64>,
    /// Coefficient primes to sweep.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Field sizes used by the presentation clauses.
    #[arg(long, value_delimiter = ',')]
    pub fields: Option<Vec<u64>>,
    /// Residues for the oracle sweeps (default: one per multiplicative order).
    #[arg(long, value_delimiter = ',')]
    pub residues: Option<Vec<u64>>,
    #[arg(long)]
    pub weight_len: Option<usize>,
    #[arg(long)]
    pub weight_max: Option<u32>,
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long)]
    pub wreath_m: Option<usize>,
    #[arg(long)]
    pub chern_m: Option<usize>,
    #[arg(long)]
    pub gl_n: Option<u32>,
    #[arg(long)]
    pub sp_rank: Option<u32>,
    #[arg(long)]
    pub order_rank: Option<u32>,
    #[arg(long)]
    pub order_q: Option<u64>,
    /// Largest monomial count per degree the oracles accept.
    #[arg(long)]
    pub monomial_limit: Option<usize>,
    /// Run every instance on the calling thread.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn from_error(err: &Error) -> Self {
        let code = if err.is_precondition() { 2 } else { 1 };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the request.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(text)
                }
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let limit = match std::env::var(MONOMIAL_LIMIT_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                return Outcome::from_error(&Error::Input(format!(
                    "{MONOMIAL_LIMIT_ENV}={v} is not a number"
                )))
            }
        },
        Err(_) => DEFAULT_MONOMIAL_LIMIT,
    };
    match dispatch(cli.command, limit) {
        Ok(out) => out,
        Err(e) => Outcome::from_error(&e),
    }
}

fn field_params(field: &FieldArgs) -> chevalley::Result<GaloisParams> {
    match field.p {
        Some(p) => galois_params(p, field.q, field.l),
        None => galois_params_for_field(field.q, field.l),
    }
}

fn dispatch(command: Command, monomial_limit: usize) -> chevalley::Result<Outcome> {
    match command {
        Command::Params(a) => params(&a),
        Command::Present(a) => present(&a, false),
        Command::Series(a) => present(&a, true),
        Command::Compare(a) => compare(&a),
        Command::Verify(a) => verify(&a, monomial_limit),
    }
}

fn params(a: &ParamsArgs) -> chevalley::Result<Outcome> {
    let g = field_params(&a.field)?;
    let gl = a.n.map(|n| gl_params(g.clone(), n)).transpose()?;
    let out = match a.format {
        Format::Json => {
            let mut v = json!({
                "schema_version": SCHEMA_VERSION,
                "p": g.p, "q": g.q, "l": g.l, "r": g.r, "a": g.a, "h": g.h.to_string(),
            });
            if let Some(gl) = &gl {
                v["n"] = json!(gl.n);
                v["m"] = json!(gl.m);
                v["e"] = json!(gl.e);
            }
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Text | Format::Latex => {
            let mut s = format!(
                "p={} q={} l={} r={} a={} h={}\nq^r - 1 = {}^{} * {}\n",
                g.p, g.q, g.l, g.r, g.a, g.h, g.l, g.a, g.h
            );
            if let Some(gl) = &gl {
                s.push_str(&format!(
                    "n={} = {}*{} + {} (m={} e={})\n",
                    gl.n, g.r, gl.m, gl.e, gl.m, gl.e
                ));
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn build_presentation(a: &PresentArgs) -> chevalley::Result<GradedPresentation> {
    let family: Family = a.family.parse()?;
    match a.theory {
        TheoryArg::Cobordism => {
            if a.b != 1 {
                return Err(Error::Input(
                    "--b applies to the Chow ring of GL_n only".into(),
                ));
            }
            let datum = lookup(family, a.rank)?;
            cobordism_presentation(&datum, &field_params(&a.field)?)
        }
        TheoryArg::Chow => {
            if family != Family::GL {
                return Err(Error::Input(
                    "the Chow ring is only available for GL".into(),
                ));
            }
            // the odd-prime hypothesis is reported ahead of any other check
            if a.field.l == 2 {
                return Err(Error::Precondition {
                    hypothesis: Hypothesis::OddPrime,
                    detail: "l = 2".into(),
                });
            }
            let gl = gl_params(field_params(&a.field)?, a.rank as u64)?;
            chow_gl_presentation(&gl, a.b)
        }
    }
}

fn present(a: &PresentArgs, series_only: bool) -> chevalley::Result<Outcome> {
    let mut pres = build_presentation(a)?;
    if let Some(g) = a.grading {
        pres = pres.with_grading(match g {
            GradingArg::Chow => Grading::Chow,
            GradingArg::Topological => Grading::Topological,
        });
    }
    let cutoff = match (a.cutoff, series_only) {
        (Some(d), _) => Some(d),
        (None, true) => Some(12),
        (None, false) => None,
    };
    if let Some(d) = cutoff {
        pres = pres.with_series(d);
    }
    let out = if series_only {
        let series = poincare_series(&pres, cutoff.unwrap_or(12), pres.grading);
        match a.format {
            Format::Json => {
                let v = json!({
                    "schema_version": SCHEMA_VERSION,
                    "ring": pres.ring_text(),
                    "grading": pres.grading,
                    "cutoff": series.cutoff(),
                    "series": series,
                });
                serde_json::to_string_pretty(&v).expect("json") + "\n"
            }
            Format::Latex => format!("{}\n", latex_series(&series.coefficients)),
            Format::Text => format!("{series}\n"),
        }
    } else {
        match a.format {
            Format::Json => pres.to_json() + "\n",
            Format::Latex => pres.render_latex() + "\n",
            Format::Text => pres.render_text(),
        }
    };
    Ok(Outcome::ok(out))
}

fn latex_series(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(d, &c)| match (d, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}t"),
            (d, 1) => format!("t^{{{d}}}"),
            (d, c) => format!("{c}t^{{{d}}}"),
        })
        .collect();
    format!("{} + O(t^{{{}}})", terms.join(" + "), coeffs.len())
}

fn compare(a: &CompareArgs) -> chevalley::Result<Outcome> {
    if a.field.l == 2 {
        return Err(Error::Precondition {
            hypothesis: Hypothesis::OddPrime,
            detail: "l = 2".into(),
        });
    }
    let gl = gl_params(field_params(&a.field)?, a.rank)?;
    let rep = compare_chow_cobordism_gl(&gl)?;
    let out = match a.format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("json") + "\n",
        _ => rep.render_text(),
    };
    Ok(Outcome {
        code: if rep.equal { 0 } else { 1 },
        stdout: out,
        stderr: String::new(),
    })
}

fn verify(a: &VerifyArgs, env_limit: usize) -> chevalley::Result<Outcome> {
    if let Some(m) = a.chern {
        let (Some(q), Some(l)) = (a.q, a.l) else {
            return Err(Error::Input("--chern needs --q and --l".into()));
        };
        let rep = verify_restricted_chern(m, &galois_params_for_field(q, l)?)?;
        let out = match a.format {
            Format::Json => serde_json::to_string_pretty(&rep).expect("json") + "\n",
            _ => rep.render_text(),
        };
        return Ok(Outcome {
            code: if rep.passed() { 0 } else { 1 },
            stdout: out,
            stderr: String::new(),
        });
    }
    let mut spec = SweepSpec::default();
    if let Some(v) = &a.primes {
        spec.primes = v.clone();
    }
    if let Some(v) = &a.fields {
        spec.fields = v.clone();
    }
    spec.residues = a.residues.clone();
    macro_rules! set {
        ($($field:ident <- $arg:ident),*) => { $( if let Some(v) = a.$arg { spec.$field = v; } )* };
    }
    set!(weight_len_max <- weight_len, weight_max <- weight_max, cutoff <- cutoff, wreath_m_max <- wreath_m,
         chern_m_max <- chern_m, gl_n_max <- gl_n, sp_rank_max <- sp_rank, order_rank_max <- order_rank,
         order_q_max <- order_q);
    for &l in &spec.primes {
        if !chevalley::arith::is_prime(l) {
            return Err(Error::Input(format!("{l} in --primes is not prime")));
        }
    }
    if let Some(&q) = spec
        .fields
        .iter()
        .find(|&&q| chevalley::arith::prime_power_base(q).is_none())
    {
        return Err(Error::Input(format!(
            "{q} in --fields is not a prime power"
        )));
    }
    spec.limits = OracleLimits {
        max_monomials: a.monomial_limit.unwrap_or(env_limit),
    };
    spec.execution = if a.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let summary = verify_all(&spec)?;
    let out = match a.format {
        Format::Json => summary.to_json() + "\n",
        _ => summary.render_text(),
    };
    Ok(Outcome {
        code: if summary.passed { 0 } else { 1 },
        stdout: out,
        stderr: String::new(),
    })
}
