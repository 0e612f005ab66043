//! Command-line front end.
//!
//! Every command writes a deterministic report to the given writer, either
//! as pretty-printed JSON or as an aligned table. The exit status is `0` when
//! all requested checks pass, `1` when a check fails and `2` on errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::chern::{verify_exterior_recursion, verify_gamma_congruence, ClassCheckReport};
use crate::error::{parse, precondition, Error, Result};
use crate::exponent::{
    flag_diagnostics, tau, ExponentReport, FlagSliceReport, ScalarRing, TauOptions,
};
use crate::fga::FgaContext;
use crate::fgl::{AxiomReport, BuiltinLaw, FormalGroupLaw};
use crate::invariants::{
    theta, theta_count, theta_degree, theta_e_coordinates, GeneratorPool, PoolPolicy,
};
use crate::rootsys::{DynkinType, RootSystem};
use crate::series::{CoeffRing, TruncatedSeries};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "fgalg",
    version,
    about = "Formal group algebras, invariants and exponents"
)]
pub struct Cli {
    /// Report wall time on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a formal group law, its inverse and logarithm, and check the axioms.
    Fgl(FglArgs),
    /// Degrees and e-coordinate expansions of the Θ invariants.
    Theta(ThetaArgs),
    /// The exponent τ_d between two laws.
    Exponent(ExponentArgs),
    /// Rank and torsion of the graded flag model.
    Flag(FlagArgs),
    /// Identities of characteristic classes.
    Chern(ChernArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Args, Debug)]
pub struct FglArgs {
    /// additive, multiplicative, lorentz, elliptic or symbolic.
    #[arg(long)]
    pub law: String,
    /// Weierstrass coefficients a1,a2,a3,a4,a6 (elliptic only; symbolic when omitted).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub a: Option<Vec<i64>>,
    #[arg(long, default_value_t = 6)]
    pub trunc: u32,
    /// Z, Q or Z/<m>.
    #[arg(long, default_value = "Z")]
    pub ring: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ThetaArgs {
    #[arg(long = "type")]
    pub root_type: String,
    /// Law for the expansion in the fundamental-weight classes.
    #[arg(long, default_value = "multiplicative")]
    pub law: String,
    #[arg(long, default_value_t = 4)]
    pub trunc: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ExponentArgs {
    #[arg(long = "type")]
    pub root_type: String,
    /// Source law: a name, `elliptic:a1,a2,a3,a4,a6`.
    #[arg(long, default_value = "multiplicative")]
    pub from: String,
    #[arg(long, default_value = "additive")]
    pub to: String,
    #[arg(long)]
    pub d: u32,
    /// Truncation of the laws; defaults to d + 2.
    #[arg(long)]
    pub trunc: Option<u32>,
    /// Generator policy for both sides; defaults per law and type.
    #[arg(long)]
    pub policy: Option<String>,
    /// JSON generator pool for both sides.
    #[arg(long)]
    pub pool: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FlagArgs {
    #[arg(long = "type")]
    pub root_type: String,
    #[arg(long, default_value = "additive")]
    pub fgl: String,
    /// Z, Q or Z[1/p,...].
    #[arg(long, default_value = "Z")]
    pub ring: String,
    #[arg(long, default_value_t = 0)]
    pub dmin: u32,
    #[arg(long, default_value_t = 3)]
    pub dmax: u32,
    #[arg(long)]
    pub policy: Option<String>,
    #[arg(long)]
    pub pool: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChernCheck {
    Gamma,
    ExteriorRecursion,
}

#[derive(Args, Debug)]
pub struct ChernArgs {
    #[arg(long, value_enum)]
    pub check: ChernCheck,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value = "symbolic")]
    pub law: String,
    /// Class degree; defaults to r + 1.
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// A law named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawSpec {
    Builtin(BuiltinLaw),
    Elliptic(Option<[i64; 5]>),
    Symbolic,
}

impl LawSpec {
    /// Parses `additive`, `multiplicative`, `lorentz`, `symbolic`,
    /// `elliptic` and `elliptic:a1,a2,a3,a4,a6`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("elliptic:") {
            let a: Vec<i64> = rest
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| parse(format!("bad coefficient {t:?} in {spec:?}")))
                })
                .collect::<Result<_>>()?;
            return Self::elliptic(Some(&a));
        }
        match spec.to_ascii_lowercase().as_str() {
            "additive" | "a" => Ok(LawSpec::Builtin(BuiltinLaw::Additive)),
            "multiplicative" | "m" => Ok(LawSpec::Builtin(BuiltinLaw::Multiplicative)),
            "lorentz" => Ok(LawSpec::Builtin(BuiltinLaw::Lorentz)),
            "elliptic" => Ok(LawSpec::Elliptic(None)),
            "symbolic" => Ok(LawSpec::Symbolic),
            _ => Err(parse(format!(
                "unknown law {spec:?}; use additive, multiplicative, lorentz, elliptic[:a1,a2,a3,a4,a6] or symbolic"
            ))),
        }
    }

    pub fn elliptic(a: Option<&[i64]>) -> Result<Self> {
        match a {
            None => Ok(LawSpec::Elliptic(None)),
            Some(a) => {
                let a: [i64; 5] = a.try_into().map_err(|_| {
                    parse(format!(
                        "elliptic laws take 5 coefficients, got {}",
                        a.len()
                    ))
                })?;
                Ok(LawSpec::Elliptic(Some(a)))
            }
        }
    }

    /// Builds the law; builtin and numeric elliptic laws use `ring`, the
    /// symbolic laws live over their own polynomial rings.
    pub fn build(&self, ring: &CoeffRing, trunc: u32) -> Result<FormalGroupLaw> {
        match self {
            LawSpec::Builtin(b) => Ok(FormalGroupLaw::builtin(*b, ring, trunc)),
            LawSpec::Elliptic(Some(a)) => {
                FormalGroupLaw::elliptic(&a.map(|k| ring.from_int(k)), ring, trunc)
            }
            LawSpec::Elliptic(None) => FormalGroupLaw::elliptic_symbolic(trunc),
            LawSpec::Symbolic => Ok(FormalGroupLaw::symbolic(trunc)),
        }
    }
}

fn load_pool(
    policy: &Option<String>,
    pool: &Option<PathBuf>,
    rs: &RootSystem,
) -> Result<Option<GeneratorPool>> {
    let mut out = match pool {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| parse(format!("cannot read pool {}: {e}", path.display())))?;
            Some(GeneratorPool::from_json(&text)?)
        }
        None => None,
    };
    if let Some(name) = policy {
        let p = PoolPolicy::parse(name)?;
        match &mut out {
            Some(pool) => pool.policy = p,
            None => out = Some(GeneratorPool::default_for(rs, p)),
        }
    }
    if let Some(pool) = &out {
        pool.validate(rs)?;
    }
    Ok(out)
}

/// Output of the `fgl` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglReport {
    pub law: String,
    pub ring: String,
    pub trunc: u32,
    pub series: String,
    pub inverse: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logarithm: Option<String>,
    pub axioms: AxiomReport,
}

/// Output of the `theta` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaReport {
    #[serde(rename = "type")]
    pub root_type: String,
    pub law: String,
    pub trunc: u32,
    pub thetas: Vec<ThetaEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaEntry {
    pub index: usize,
    pub degree: u32,
    /// In the classes `x1, …` of the fundamental weights.
    pub expansion: String,
    /// Additive form in the `e`-coordinates, where the type has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_coordinates: Option<String>,
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    value: &T,
    table: impl FnOnce() -> String,
) -> Result<()> {
    let text = match format {
        Format::Json => {
            serde_json::to_string_pretty(value).map_err(|e| parse(e.to_string()))? + "\n"
        }
        Format::Table => table(),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| parse(format!("write failed: {e}")))
}

/// Key/value lines with the keys padded to a common width.
fn kv_table(rows: &[(&str, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<w$}  {v}");
    }
    s
}

/// Columns right-aligned to the widest entry.
fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(header.iter().map(|h| h.to_string()).collect());
    for r in rows {
        s += &line(r.clone());
    }
    s
}

fn check_mark(pass: bool) -> String {
    if pass { "pass" } else { "FAIL" }.to_string()
}

fn list(xs: &[u64]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

pub fn cmd_fgl(args: &FglArgs, out: &mut dyn Write) -> Result<u8> {
    let ring = CoeffRing::parse(&args.ring)?;
    let spec = match LawSpec::parse(&args.law)? {
        LawSpec::Elliptic(_) => LawSpec::elliptic(args.a.as_deref())?,
        other if args.a.is_some() => {
            return Err(parse(format!(
                "--a only applies to elliptic laws, not {other:?}"
            )))
        }
        other => other,
    };
    let f = spec.build(&ring, args.trunc)?;
    let axioms = f.verify_axioms();
    let logarithm = if f.ring().characteristic() == 0 {
        Some(f.logarithm()?.display_with(&["u"]))
    } else {
        None
    };
    let report = FglReport {
        law: f.name().to_string(),
        ring: f.ring().to_string(),
        trunc: f.trunc(),
        series: f.display(),
        inverse: f.formal_inverse().display_with(&["u"]),
        logarithm,
        axioms,
    };
    emit(out, args.format, &report, || {
        let mut rows = vec![
            ("law", report.law.clone()),
            ("ring", report.ring.clone()),
            ("trunc", report.trunc.to_string()),
            ("F(u,v)", report.series.clone()),
            ("inverse", report.inverse.clone()),
        ];
        if let Some(l) = &report.logarithm {
            rows.push(("log", l.clone()));
        }
        for (name, c) in [
            ("unit", &report.axioms.unit),
            ("commutativity", &report.axioms.commutativity),
            ("associativity", &report.axioms.associativity),
        ] {
            let mut v = check_mark(c.pass);
            if let Some(e) = &c.failing_exponent {
                let _ = write!(v, " at exponent {e:?}");
            }
            rows.push((name, v));
        }
        kv_table(&rows)
    })?;
    Ok(if report.axioms.all_pass() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    })
}

fn show_in(s: &TruncatedSeries, prefix: &str) -> String {
    let names: Vec<String> = (1..=s.nvars()).map(|j| format!("{prefix}{j}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    s.display_with(&names)
}

pub fn cmd_theta(args: &ThetaArgs, out: &mut dyn Write) -> Result<u8> {
    let rs = Arc::new(RootSystem::from_label(&args.root_type)?);
    let f = LawSpec::parse(&args.law)?.build(&CoeffRing::Integers, args.trunc)?;
    let ctx = FgaContext::new(Arc::clone(&rs), Arc::new(f), args.trunc)?;
    let thetas = (1..=theta_count(&rs))
        .map(|i| {
            let e_coordinates = if rs.family() == DynkinType::G {
                None
            } else {
                Some(show_in(&theta_e_coordinates(&rs, i, args.trunc)?, "e"))
            };
            Ok(ThetaEntry {
                index: i,
                degree: theta_degree(&rs, i)?,
                expansion: show_in(theta(&ctx, i)?.series(), "x"),
                e_coordinates,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ThetaReport {
        root_type: rs.label(),
        law: ctx.fgl().name().to_string(),
        trunc: args.trunc,
        thetas,
    };
    emit(out, args.format, &report, || {
        let mut s = String::new();
        for t in &report.thetas {
            let _ = writeln!(s, "theta{} (degree {})", t.index, t.degree);
            let _ = writeln!(s, "  {}: {}", report.law, t.expansion);
            if let Some(e) = &t.e_coordinates {
                let _ = writeln!(s, "  e-coordinates: {e}");
            }
        }
        s
    })?;
    Ok(EXIT_PASS)
}

pub fn cmd_exponent(args: &ExponentArgs, out: &mut dyn Write) -> Result<u8> {
    let rs = Arc::new(RootSystem::from_label(&args.root_type)?);
    let trunc = args.trunc.unwrap_or(args.d + 2);
    if trunc < args.d {
        return Err(precondition(format!(
            "truncation {trunc} is below the degree {}",
            args.d
        )));
    }
    let ring = CoeffRing::Integers;
    let from = LawSpec::parse(&args.from)?.build(&ring, trunc)?;
    let to = LawSpec::parse(&args.to)?.build(&ring, trunc)?;
    let pool = load_pool(&args.policy, &args.pool, &rs)?;
    let opts = TauOptions {
        pool_from: pool.clone(),
        pool_to: pool,
    };
    let report: ExponentReport = tau(&rs, &from, &to, args.d, &opts).map_err(|e| match e {
        Error::SpanMismatch { degree, detail } => Error::SpanMismatch {
            degree,
            detail: format!(
                "{detail} (try --policy invariants for an additive side, or a larger --pool)"
            ),
        },
        other => other,
    })?;
    emit(out, args.format, &report, || {
        kv_table(&[
            ("type", report.root_type.clone()),
            ("d", report.d.to_string()),
            (
                "from",
                format!(
                    "{} ({}, {} generators, rank {})",
                    report.fgl_from, report.policy_from, report.generators_from, report.rank_from
                ),
            ),
            (
                "to",
                format!(
                    "{} ({}, {} generators, rank {})",
                    report.fgl_to, report.policy_to, report.generators_to, report.rank_to
                ),
            ),
            ("tau", report.tau.to_string()),
            ("elementary divisors", list(&report.elementary_divisors)),
            ("exactness", report.exactness.to_string()),
        ])
    })?;
    Ok(EXIT_PASS)
}

/// Whether a flag slice agrees with the length count and, where torsion
/// freeness is known, has no torsion.
pub fn flag_slice_ok(r: &FlagSliceReport) -> bool {
    r.rank_matches && (!r.torsion_free_expected || r.torsion_free())
}

pub fn cmd_flag(args: &FlagArgs, out: &mut dyn Write) -> Result<u8> {
    let rs = Arc::new(RootSystem::from_label(&args.root_type)?);
    let scalars: ScalarRing = args.ring.parse()?;
    if args.dmin > args.dmax {
        return Err(precondition(format!(
            "--dmin {} exceeds --dmax {}",
            args.dmin, args.dmax
        )));
    }
    let spec = LawSpec::parse(&args.fgl)?;
    let pool = load_pool(&args.policy, &args.pool, &rs)?;
    let mut reports = Vec::new();
    for d in args.dmin..=args.dmax {
        let f = spec.build(&CoeffRing::Integers, d + 2)?;
        reports.push(flag_diagnostics(&rs, &f, d, &scalars, pool.as_ref())?);
    }
    emit(out, args.format, &reports, || {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                vec![
                    r.d.to_string(),
                    r.dim.to_string(),
                    r.rank.to_string(),
                    r.expected_rank.to_string(),
                    list(&r.torsion),
                    format!("{:?}", r.exactness).to_uppercase(),
                    check_mark(flag_slice_ok(r)),
                ]
            })
            .collect();
        let head = format!(
            "{} {} over {}\n",
            reports
                .first()
                .map_or(String::new(), |r| r.root_type.clone()),
            args.fgl,
            scalars
        );
        head + &grid(
            &[
                "d",
                "dim",
                "rank",
                "expected",
                "torsion",
                "exactness",
                "check",
            ],
            &rows,
        )
    })?;
    Ok(if reports.iter().all(flag_slice_ok) {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    })
}

pub fn cmd_chern(args: &ChernArgs, out: &mut dyn Write) -> Result<u8> {
    let degree = args.degree.unwrap_or(args.r as u32 + 1);
    let spec = LawSpec::parse(&args.law)?;
    let f = spec.build(&CoeffRing::Integers, degree)?;
    let report: ClassCheckReport = match args.check {
        ChernCheck::Gamma => verify_gamma_congruence(&f, args.r, degree)?,
        ChernCheck::ExteriorRecursion => verify_exterior_recursion(&f, args.r, degree)?,
    };
    emit(out, args.format, &report, || {
        let mut rows = vec![
            ("check", report.check.clone()),
            ("law", report.law.clone()),
            ("r", report.r.to_string()),
            ("class degree", report.class_degree.to_string()),
            ("expected", report.expected.clone()),
            ("actual", report.actual.clone()),
            ("result", check_mark(report.pass)),
        ];
        if let Some(e) = &report.failing_exponent {
            rows.push(("failing exponent", format!("{e:?}")));
        }
        kv_table(&rows)
    })?;
    Ok(if report.pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    })
}

/// Runs a parsed command line, returning the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let start = Instant::now();
    let code = match &cli.command {
        Command::Fgl(a) => cmd_fgl(a, out),
        Command::Theta(a) => cmd_theta(a, out),
        Command::Exponent(a) => cmd_exponent(a, out),
        Command::Flag(a) => cmd_flag(a, out),
        Command::Chern(a) => cmd_chern(a, out),
    }?;
    if cli.verbose {
        eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(code)
}

/// Parses `args` (including the program name) and runs the command,
/// reporting errors on stderr.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
