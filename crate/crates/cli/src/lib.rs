//! Command-line driver: relation computations for the universal formal
//! ternary law, the degree-zero Buchstaber ring, law verification and the
//! functors between formal group laws, 2-valued laws and ternary laws.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ftl_core::fgl::{self, Fgl};
use ftl_core::ftl::{self, Ftl, FtlReport};
use ftl_core::groebner::IncrementalOptions;
use ftl_core::mvseries::MSeries;
use ftl_core::quotient::Quotient;
use ftl_core::relgen::{self, Arity, DegreeWindow, EpsilonMode, RelOptions};
use ftl_core::twofgl::{self, EpsilonCheck, TwoFgl};
use ftl_core::{CoefficientRing, Polynomial, Var};
use log::info;

pub mod lawfile;
pub mod runfile;

pub use lawfile::{LawFile, LawKind};
pub use runfile::{RunFile, Stats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

/// Overrides the pair-reduction budget of the Gröbner computations.
pub const BUDGET_ENV: &str = "FTL_STEP_BUDGET";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ftl_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Json(_) => EXIT_USAGE,
            CliError::Core(ftl_core::Error::BudgetExhausted(_)) => EXIT_BUDGET,
            CliError::Core(ftl_core::Error::Not2Fgl(_) | ftl_core::Error::NotTypeI | ftl_core::Error::NotFgl(_)) => {
                EXIT_VERIFY_FAILED
            }
            CliError::Core(
                ftl_core::Error::Parse(_) | ftl_core::Error::InvalidArgument(_) | ftl_core::Error::InvalidModulus(_),
            ) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) => EXIT_INTERNAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ftl", version, about = "Formal ternary laws and their relation ideals")]
pub struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relations of the universal formal ternary law in a degree window.
    Walter(WalterArgs),
    /// Check the axioms of a formal ternary law.
    Verify(VerifyArgs),
    /// Apply sigma, N, C or W to a law.
    Functor(FunctorArgs),
    /// The degree-zero part of the universal 2-valued formal group law.
    Buchstaber(BuchstaberArgs),
}

#[derive(Debug, Args)]
pub struct WalterArgs {
    /// Z, Q or Zp for a prime p.
    #[arg(long, default_value = "Z")]
    pub ring: String,
    #[arg(long, allow_hyphen_values = true)]
    pub dmin: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub dmax: i32,
    /// free, +1 or -1.
    #[arg(long, default_value = "free", allow_hyphen_values = true)]
    pub epsilon: String,
    #[arg(long = "invert-2")]
    pub invert2: bool,
    /// Reduce incoming relations before adding them.
    #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub prereduce: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// chow, hmw, ko, witt or a law file.
    #[arg(long)]
    pub law: String,
    #[arg(long, default_value_t = 8)]
    pub degree: u32,
}

#[derive(Debug, Args)]
pub struct FunctorArgs {
    /// additive, multiplicative:EXPR, elementary-I, universal-2fgl-deg0,
    /// universal-2fgl-deg0-eps or a law file.
    #[arg(long)]
    pub from: String,
    /// sigma, N, C or W.
    #[arg(long)]
    pub via: String,
    /// Truncation of the output.
    #[arg(long, default_value_t = 6)]
    pub degree: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuchstaberArgs {
    /// free or -1.
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    pub epsilon: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse the arguments, run the command and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // a second initialization (tests calling run twice) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Walter(a) => walter(&a),
        Command::Verify(a) => verify(&a),
        Command::Functor(a) => functor(&a),
        Command::Buchstaber(a) => buchstaber(&a),
    }
}

pub fn gb_options() -> Result<IncrementalOptions, CliError> {
    let mut opts = IncrementalOptions::default();
    if let Ok(s) = std::env::var(BUDGET_ENV) {
        opts.budget = s.trim().parse().map_err(|_| CliError::Usage(format!("{BUDGET_ENV} must be an integer")))?;
    }
    Ok(opts)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn walter(a: &WalterArgs) -> Result<i32, CliError> {
    let ring: CoefficientRing = a.ring.parse()?;
    let window = DegreeWindow::new(a.dmin, a.dmax)?;
    let epsilon: EpsilonMode = a.epsilon.parse()?;
    let options = RelOptions { epsilon, invert2: a.invert2 };
    let gb = IncrementalOptions { prereduce: a.prereduce, ..gb_options()? };
    info!("walter: ring {ring}, window [{}, {}], epsilon {epsilon}, invert 2: {}", a.dmin, a.dmax, a.invert2);
    let run = relgen::solve(window, Arity::Ftl, options, ring, gb)?;
    let file = RunFile::from_run("walter", ring, window, epsilon, a.invert2, &run);
    emit(a.out.as_deref(), &file.to_json())?;
    if a.out.is_some() {
        println!(
            "{} fixed, {} free, {} relations{}",
            file.fixed.len(),
            file.free.len(),
            file.relations.len(),
            if file.incomplete { " (incomplete)" } else { "" }
        );
    }
    Ok(if run.incomplete { EXIT_BUDGET } else { EXIT_OK })
}

fn load_ftl(law: &str, degree: u32) -> Result<Ftl, CliError> {
    if let Some(f) = ftl::named_law(law, degree) {
        return Ok(f);
    }
    let path = Path::new(law);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "`{law}` is neither a built-in law ({}) nor a file",
            ftl::NAMED_LAWS.join(", ")
        )));
    }
    let f = LawFile::from_json(&std::fs::read_to_string(path)?)?.to_ftl()?;
    Ok(Ftl { series: f.series.truncated(degree), ..f })
}

fn report_map(r: &FtlReport) -> std::collections::BTreeMap<String, String> {
    let ok = |b: bool| if b { "ok" } else { "fail" }.to_string();
    [
        ("neutral", ok(r.neutral.is_zero())),
        ("symmetry", ok(r.symmetry.iter().all(MSeries::is_zero))),
        ("associativity", ok(r.associativity.is_zero())),
        ("epsilon-linearity", ok(r.epsilon_linearity.is_zero())),
        ("weak-neutral", ok(r.weak_neutral.is_zero())),
        ("strong-neutral", ok(r.strong_neutral)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let law = load_ftl(&a.law, a.degree)?;
    let report = ftl::verify_ftl(&law)?;
    println!("law {} at D = {}", law.tag, law.series.truncation());
    println!("{report}");
    Ok(if report.passes() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

enum Source {
    Fgl(Fgl, Option<Var>),
    TwoFgl(MSeries, Quotient, EpsilonCheck),
}

fn load_source(from: &str, degree: u32) -> Result<Source, CliError> {
    let zz = CoefficientRing::Integers;
    // N halves the precision, so formal group laws are built at 2D
    let d_in = 2 * degree;
    if from == "additive" {
        return Ok(Source::Fgl(Fgl::additive(zz, d_in), None));
    }
    if let Some(expr) = from.strip_prefix("multiplicative:") {
        let a = Polynomial::parse(zz, expr)?;
        let var = match a.variables().into_iter().collect::<Vec<_>>().as_slice() {
            [v] if a == Polynomial::var(zz, *v) => Some(*v),
            _ => None,
        };
        return Ok(Source::Fgl(Fgl::multiplicative(&a, d_in), var));
    }
    if let Some((s, q, mode)) = twofgl::named_law(from, degree) {
        return Ok(Source::TwoFgl(s, q, mode));
    }
    let path = Path::new(from);
    if !path.exists() {
        return Err(CliError::Usage(format!("unknown law `{from}`")));
    }
    let file = LawFile::from_json(&std::fs::read_to_string(path)?)?;
    match file.kind {
        LawKind::Fgl => Ok(Source::Fgl(file.to_fgl()?, None)),
        LawKind::TwoFgl => {
            let mode = if file.epsilon_value()?.is_none() { EpsilonCheck::Refined } else { EpsilonCheck::MinusOne };
            let q = Quotient::new(file.ring()?, &file.relation_polynomials()?)?;
            Ok(Source::TwoFgl(file.series()?, q, mode))
        }
        LawKind::Ftl => Err(CliError::Usage("functors take a formal group law or a 2-valued law".into())),
    }
}

fn need_fgl(src: Source, via: &str, degree: u32) -> Result<(Fgl, Option<Var>), CliError> {
    match src {
        Source::Fgl(f, v) => {
            let needed = if via == "sigma" { degree } else { 2 * degree };
            if f.truncation() < needed {
                return Err(CliError::Usage(format!(
                    "{via} needs the input law to degree {needed}, it is known to degree {}",
                    f.truncation()
                )));
            }
            Ok((f, v))
        }
        Source::TwoFgl(..) => Err(CliError::Usage(format!("{via} takes a formal group law"))),
    }
}

fn functor(a: &FunctorArgs) -> Result<i32, CliError> {
    let src = load_source(&a.from, a.degree)?;
    let mut code = EXIT_OK;
    let file = match a.via.as_str() {
        "sigma" => {
            let (f, _) = need_fgl(src, "sigma", a.degree)?;
            let f = Fgl::new_unchecked(f.polynomial().clone(), a.degree);
            LawFile::from_two_fgl(&fgl::functor_sigma(&f), Some(-1), &[])
        }
        "N" => {
            let (f, _) = need_fgl(src, "N", a.degree)?;
            LawFile::from_two_fgl(&fgl::functor_n(&f)?.truncated(a.degree), Some(-1), &[])
        }
        "C" => {
            let Source::TwoFgl(s, q, mode) = src else {
                return Err(CliError::Usage("C takes a 2-valued formal group law".into()));
            };
            let law = TwoFgl::new(s.truncated(a.degree), mode, q.clone())?;
            let c = twofgl::functor_c(&law)?;
            let epsilon = if mode == EpsilonCheck::Refined { None } else { Some(-1) };
            let out = Ftl::new(c, epsilon, "C")?.with_relations(q.relations().to_vec());
            let report = ftl::verify_ftl(&out)?;
            let mut file = LawFile::from_ftl(&out);
            file.report = Some(report_map(&report));
            file
        }
        "W" => {
            let (f, var) = need_fgl(src, "W", a.degree)?;
            let w = twofgl::functor_w(&f)?.truncated(a.degree);
            let out = Ftl::new(w, Some(-1), "W")?;
            let report = ftl::verify_ftl(&out)?;
            let mut map = report_map(&report);
            if let Some(v) = var {
                let ko = ftl::ko_at_multiplicative(a.degree, v)?;
                let same = out.series.residual(&ko)?.is_zero();
                map.insert("ko-comparison".into(), if same { "equal" } else { "differs" }.into());
            }
            if !report.passes() {
                code = EXIT_VERIFY_FAILED;
            }
            let mut file = LawFile::from_ftl(&out);
            file.report = Some(map);
            file
        }
        other => return Err(CliError::Usage(format!("unknown functor `{other}`; use sigma, N, C or W"))),
    };
    emit(a.out.as_deref(), &file.to_json())?;
    Ok(code)
}

fn buchstaber(a: &BuchstaberArgs) -> Result<i32, CliError> {
    let refined = match a.epsilon.as_str() {
        "free" => true,
        "-1" => false,
        other => return Err(CliError::Usage(format!("epsilon must be free or -1, not `{other}`"))),
    };
    let b0 = twofgl::compute_b0(refined, gb_options()?)?;
    let epsilon = if refined { EpsilonMode::Free } else { EpsilonMode::Minus };
    let window = DegreeWindow::new(-2, 0)?;
    let file = RunFile::from_run("buchstaber", CoefficientRing::Integers, window, epsilon, false, &b0.run);
    emit(a.out.as_deref(), &file.to_json())?;
    if !refined {
        let g = twofgl::gamma_var();
        let rels = b0.ideal();
        let minus = twofgl::local_multiplicity(&rels, g, -2)?;
        let plus = twofgl::local_multiplicity(&rels, g, 2)?;
        eprintln!("after inverting 2: length {minus} at {} = -2, length {plus} at {} = 2", g.name(), g.name());
    }
    Ok(if b0.run.incomplete { EXIT_BUDGET } else { EXIT_OK })
}
