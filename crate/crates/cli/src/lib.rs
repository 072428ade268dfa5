//! `qsm` command-line front end.
//!
//! Every subcommand writes one JSON document (default), CSV rows or a
//! plain-text rendering to standard output. Diagnostics go to standard error.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain error, 3 precision
//! or truncation failure, 4 when `verify-all` records a failed check.

pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsm_core::bc::kms::{gibbs_value, riemann_zeta_partial};
use qsm_core::bc::{
    eisenstein_e1a, eisenstein_lattice_sum, galois_intertwine_check, ground_state_value, kms_condition_residual,
    kms_high_temp_value, kms_low_temp_value, parse_element, BCElement, SymmetryClass,
};
use qsm_core::classfield::hilbert_class_polynomial_auto;
use qsm_core::cm::projection::qualifying_primes;
use qsm_core::cm::{
    cm_ground_state, cm_projection, cm_state_value, cm_symmetry_covariance_check, uniqueness_decay_report,
    CMFunction, TruncatedCMRep,
};
use qsm_core::exact::precision::{complex_abs, parse_real, to_decimal_string};
use qsm_core::exact::{Precision, TorsionLabel};
use qsm_core::quad::zeta::ZetaPartials;
use qsm_core::quad::{ClassGroup, QuadField, QuadIdeal};
use qsm_core::report::StateReport;
use qsm_core::Error;
use rug::{Complex, Float};
use serde_json::{json, Value};

use verify::{verify_all, Mutation, Profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

const CSV_HELP: &str = "\
CSV columns:
  bc-state, bc-ground, bc-eisenstein, zeta, cm-state, cm-projection:
      re,im,tail_bound,exact
  bc-intertwine:    n,mismatches
  bc-kms-check:     lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,holds
  class-group:      index,a,b,c,order
  dedekind-zeta:    dedekind,dedekind_tail,zeta,l,residual,tolerance
  cm-covariance:    lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,holds
  cm-uniqueness:    k,modulus
  hilbert-poly:     degree,coefficient
  verify-all:       name,criterion,passed,residual,tolerance,runtime_ms

Exit codes: 0 ok, 1 usage, 2 domain, 3 precision/truncation, 4 verification failed.
QSM_PRECISION sets the default working precision in decimal digits.";

#[derive(Debug, Parser)]
#[command(name = "qsm", version, about = "Bost-Connes and CM quantum statistical systems", after_help = CSV_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Working precision in decimal digits (default: QSM_PRECISION or 50).
    #[arg(long, global = true)]
    precision: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Gibbs,
    Polylog,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// KMS state of the BC system on e(r) or on an element.
    BcState(BcState),
    /// Ground state (β = ∞) of the BC system.
    BcGround(BcGround),
    /// Galois intertwining of ground states at levels 1..=n.
    BcIntertwine {
        #[arg(long, default_value_t = 60)]
        max_level: u64,
    },
    /// KMS condition residual φ(xy) vs φ(y σ_{iβ}(x)).
    BcKmsCheck(BcKmsCheck),
    /// e_{1,a} via the cyclotomic closed form and the lattice sum.
    BcEisenstein(BcEisenstein),
    /// Riemann zeta partial sum with tail bound.
    Zeta {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 100_000)]
        cutoff: u64,
    },
    /// Class group of a negative fundamental discriminant.
    ClassGroup {
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
    },
    /// Dedekind zeta partial sum and its factorization ζ·L.
    DedekindZeta {
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 100_000)]
        norm_bound: u64,
    },
    /// KMS state of the CM system on a test function.
    CmState(CmState),
    /// Symmetry covariance of CM states under an ideal J_s.
    CmCovariance(CmCovariance),
    /// Projection of a class character onto 𝒥_A.
    CmProjection(CmProjection),
    /// Projection moduli over the first k qualifying primes.
    CmUniqueness(CmProjection),
    /// Hilbert class polynomial.
    HilbertPoly {
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        /// Starting precision in digits (escalates automatically).
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
        profile: ProfileArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inject a deliberate bug to confirm the suite detects it.
        #[arg(long, value_enum)]
        mutate: Option<MutationArg>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MutationArg {
    FlipFWeightSign,
    BreakComposition,
}

#[derive(Debug, Args)]
struct BcState {
    #[arg(long)]
    beta: String,
    /// Torsion label r of e(r).
    #[arg(long, conflicts_with = "element")]
    r: Option<String>,
    /// Element in the text syntax, e.g. "mu(2)*e(1/3)*mu_star(2)".
    #[arg(long)]
    element: Option<String>,
    /// Unit u of the symmetry class (ρ(ζ) = ζ^u).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    rho: i64,
    /// Modulus of the symmetry class (default: level of the input).
    #[arg(long = "mod")]
    modulus: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    cutoff: u64,
    #[arg(long, value_enum, default_value_t = Route::Gibbs)]
    route: Route,
}

#[derive(Debug, Args)]
struct BcGround {
    #[arg(long, conflicts_with = "element")]
    r: Option<String>,
    #[arg(long)]
    element: Option<String>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    rho: i64,
    #[arg(long = "mod")]
    modulus: Option<u64>,
}

#[derive(Debug, Args)]
struct BcKmsCheck {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    beta: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    rho: i64,
    #[arg(long = "mod")]
    modulus: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    cutoff: u64,
}

#[derive(Debug, Args)]
struct BcEisenstein {
    #[arg(long)]
    a: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    rho: i64,
    #[arg(long = "mod")]
    modulus: Option<u64>,
    /// Box size of the symmetric lattice-sum oracle (0 to skip).
    #[arg(long, default_value_t = 0)]
    lattice_m: u64,
}

#[derive(Debug, Args)]
struct CmState {
    #[arg(short = 'D', allow_hyphen_values = true)]
    d: i64,
    /// Inverse temperature, or "inf" for the ground state.
    #[arg(long)]
    beta: String,
    /// Test function, e.g. "eJ(2,2)*chi(1)".
    #[arg(long)]
    f: String,
    /// Index of the base class in the reduced-form list.
    #[arg(long, default_value_t = 0)]
    base: usize,
    #[arg(long, default_value_t = 100_000)]
    norm_bound: u64,
}

#[derive(Debug, Args)]
struct CmCovariance {
    #[arg(short = 'D', allow_hyphen_values = true)]
    d: i64,
    #[arg(long)]
    beta: String,
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = 0)]
    base: usize,
    /// Ideal J_s as "a,b" or "m,a,b".
    #[arg(long)]
    js: String,
    #[arg(long, default_value_t = 100_000)]
    norm_bound: u64,
}

#[derive(Debug, Args)]
struct CmProjection {
    #[arg(short = 'D', allow_hyphen_values = true)]
    d: i64,
    /// Character index.
    #[arg(long)]
    chi: usize,
    /// Number of qualifying primes in A.
    #[arg(long, default_value_t = 25)]
    primes: usize,
    #[arg(long, default_value_t = 0)]
    base: usize,
    #[arg(long, default_value = "1")]
    beta: String,
}

/// Result of a subcommand before formatting.
struct Output {
    command: &'static str,
    params: BTreeMap<String, String>,
    provenance: String,
    result: Value,
    csv_header: &'static str,
    csv_rows: Vec<Vec<String>>,
    exit: i32,
}

impl Output {
    fn new(command: &'static str, csv_header: &'static str) -> Self {
        Output {
            command,
            params: BTreeMap::new(),
            provenance: String::new(),
            result: Value::Null,
            csv_header,
            csv_rows: Vec::new(),
            exit: EXIT_OK,
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

enum Failure {
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        Error::Domain(_) | Error::Level { .. } | Error::Pole(_) => EXIT_DOMAIN,
        Error::Precision(_) | Error::Truncation(_) => EXIT_PRECISION,
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(args, &mut out, &mut err)
}

/// Like [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let prec = cli.precision.map(Precision::digits).unwrap_or_else(Precision::from_env);
    match dispatch(&cli.command, prec) {
        Ok(output) => {
            let text = render(&output, cli.format, prec);
            if writeln!(out, "{text}").is_err() {
                return EXIT_USAGE;
            }
            output.exit
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "qsm: {e}");
            exit_code(&e)
        }
    }
}

fn render(o: &Output, format: Format, prec: Precision) -> String {
    match format {
        Format::Json => {
            let doc = json!({
                "tool": "qsm",
                "version": env!("CARGO_PKG_VERSION"),
                "command": o.command,
                "params": o.params,
                "precision_digits": prec.decimal_digits(),
                "provenance": o.provenance,
                "result": o.result,
            });
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
        Format::Csv => {
            let mut s = String::from(o.csv_header);
            for row in &o.csv_rows {
                s.push('\n');
                s.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{} ({})\n", o.command, o.provenance);
            for (k, v) in &o.params {
                s.push_str(&format!("  {k} = {v}\n"));
            }
            pretty_value(&o.result, 0, &mut s);
            s.trim_end().to_string()
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn pretty_value(v: &Value, indent: usize, s: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object()))) {
                    s.push_str(&format!("{pad}{k}:\n"));
                    pretty_value(x, indent + 1, s);
                } else {
                    s.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                s.push_str(&format!("{pad}[{i}]\n"));
                pretty_value(x, indent + 1, s);
            }
        }
        other => s.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn real(s: &str, prec: Precision) -> Result<Float, Error> {
    parse_real(s, prec)
}

fn label(s: &str) -> Result<TorsionLabel, Error> {
    s.parse::<TorsionLabel>()
}

fn state_row(r: &StateReport, prec: Precision) -> Vec<String> {
    let z = r.complex(prec.bits());
    let d = prec.decimal_digits();
    vec![
        to_decimal_string(z.real(), d),
        to_decimal_string(z.imag(), d),
        to_decimal_string(&r.tail_bound, 6),
        r.exact.to_string(),
    ]
}

fn provenance_of(r: &StateReport) -> String {
    if r.exact {
        "exact formula".into()
    } else {
        "truncated sum with tail bound".into()
    }
}

fn state_output(command: &'static str, r: StateReport, prec: Precision) -> Output {
    let mut o = Output::new(command, "re,im,tail_bound,exact");
    o.provenance = provenance_of(&r);
    o.csv_rows.push(state_row(&r, prec));
    o.result = serde_json::to_value(&r).expect("serializable");
    o
}

fn complex_json(z: &Complex, digits: u32) -> Value {
    json!({ "re": to_decimal_string(z.real(), digits), "im": to_decimal_string(z.imag(), digits) })
}

fn symmetry(rho: i64, modulus: Option<u64>, level: u64) -> Result<SymmetryClass, Error> {
    SymmetryClass::new(modulus.unwrap_or(level.max(1)), rho)
}

fn bc_input(r: &Option<String>, element: &Option<String>) -> Result<(BCElement, Option<TorsionLabel>), Error> {
    match (r, element) {
        (Some(r), None) => {
            let l = label(r)?;
            Ok((BCElement::e(l), Some(l)))
        }
        (None, Some(e)) => Ok((parse_element(e)?, None)),
        _ => Err(Error::Parse("exactly one of --r or --element is required".into())),
    }
}

fn dispatch(cmd: &Command, prec: Precision) -> Result<Output, Failure> {
    let bits = prec.bits();
    let digits = prec.decimal_digits();
    Ok(match cmd {
        Command::BcState(a) => {
            let beta = real(&a.beta, prec)?;
            let (x, r) = bc_input(&a.r, &a.element)?;
            let alpha = symmetry(a.rho, a.modulus, x.level())?;
            let report = if beta <= 1 {
                let r = r.ok_or_else(|| Error::Domain("for β ≤ 1 only e(r) is supported (use --r)".into()))?;
                kms_low_temp_value(r, &beta)?
            } else {
                match (a.route, r) {
                    (Route::Polylog, Some(r)) => kms_high_temp_value(r, &alpha, &beta, a.cutoff)?,
                    (Route::Polylog, None) => return Err(Error::Parse("--route polylog needs --r".into()).into()),
                    (Route::Gibbs, _) => gibbs_value(&x, &alpha, &beta, a.cutoff)?,
                }
            };
            state_output("bc-state", report, prec)
                .param("beta", &a.beta)
                .param("input", a.r.as_deref().map_or_else(|| x.to_string(), |r| format!("e({r})")))
                .param("alpha", alpha)
                .param("cutoff", a.cutoff)
        }
        Command::BcGround(a) => {
            let (x, _) = bc_input(&a.r, &a.element)?;
            let alpha = symmetry(a.rho, a.modulus, x.level())?;
            state_output("bc-ground", ground_state_value(&x, &alpha)?, prec)
                .param("input", x.to_string())
                .param("alpha", alpha)
        }
        Command::BcIntertwine { max_level } => {
            let mut o = Output::new("bc-intertwine", "n,mismatches");
            let mut levels = Vec::new();
            let mut total = 0;
            for n in 1..=*max_level {
                let m = galois_intertwine_check(n)?;
                total += m.len();
                o.csv_rows.push(vec![n.to_string(), m.len().to_string()]);
                let detail: Vec<Value> =
                    m.iter().map(|x| json!({ "unit": x.unit, "label": x.label.to_string(), "base": x.base })).collect();
                levels.push(json!({ "n": n, "mismatches": m.len(), "detail": detail }));
            }
            o.provenance = "exact cyclotomic arithmetic".into();
            o.result = json!({ "total_mismatches": total, "holds": total == 0, "levels": levels });
            o.param("max_level", max_level)
        }
        Command::BcKmsCheck(a) => {
            let beta = real(&a.beta, prec)?;
            let x = parse_element(&a.x)?;
            let y = parse_element(&a.y)?;
            let alpha = symmetry(a.rho, a.modulus, x.level().max(y.level()))?;
            let k = kms_condition_residual(&x, &y, &alpha, &beta, a.cutoff)?;
            let mut o = Output::new("bc-kms-check", "lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,holds");
            let (l, r) = (k.lhs.complex(bits), k.rhs.complex(bits));
            o.csv_rows.push(vec![
                to_decimal_string(l.real(), digits),
                to_decimal_string(l.imag(), digits),
                to_decimal_string(r.real(), digits),
                to_decimal_string(r.imag(), digits),
                to_decimal_string(&k.residual, 6),
                to_decimal_string(&k.tolerance, 6),
                k.holds().to_string(),
            ]);
            o.provenance = "truncated Gibbs sums with tail bounds".into();
            o.result = json!({
                "lhs": k.lhs,
                "rhs": k.rhs,
                "residual": to_decimal_string(&k.residual, 6),
                "tolerance": to_decimal_string(&k.tolerance, 6),
                "holds": k.holds(),
            });
            o.param("x", &a.x).param("y", &a.y).param("beta", &a.beta).param("alpha", alpha).param("cutoff", a.cutoff)
        }
        Command::BcEisenstein(a) => {
            let l = label(&a.a)?;
            let alpha = symmetry(a.rho, a.modulus, l.den())?;
            let report = eisenstein_e1a(l, &alpha)?;
            let mut o = state_output("bc-eisenstein", report.clone(), prec);
            if a.lattice_m > 0 {
                let oracle = eisenstein_lattice_sum(&alpha.act(l).to_rational(), a.lattice_m, bits);
                let diff = complex_abs(&Complex::with_val(bits, report.complex(bits) - &oracle));
                o.result = json!({
                    "closed_form": report,
                    "lattice_sum": complex_json(&oracle, digits),
                    "lattice_m": a.lattice_m,
                    "difference": to_decimal_string(&diff, 6),
                });
            }
            o.param("a", l).param("alpha", alpha)
        }
        Command::Zeta { beta, cutoff } => {
            let b = real(beta, prec)?;
            state_output("zeta", riemann_zeta_partial(&b, *cutoff)?, prec).param("beta", beta).param("cutoff", cutoff)
        }
        Command::ClassGroup { d } => {
            let g = ClassGroup::new(*d)?;
            let mut o = Output::new("class-group", "index,a,b,c,order");
            for (i, f) in g.forms().iter().enumerate() {
                o.csv_rows.push(vec![i.to_string(), f.a.to_string(), f.b.to_string(), f.c.to_string(), g.order_of(i).to_string()]);
            }
            o.provenance = "reduced form enumeration, Gauss composition".into();
            o.result = serde_json::to_value(g.json()).expect("serializable");
            o.param("D", d)
        }
        Command::DedekindZeta { d, beta, norm_bound } => {
            let b = real(beta, prec)?;
            let z = ZetaPartials::new(QuadField::new(*d)?, &b, *norm_bound)?;
            let (res, tol) = z.factorization_residual();
            let mut o = Output::new("dedekind-zeta", "dedekind,dedekind_tail,zeta,l,residual,tolerance");
            let s = |x: &Float| to_decimal_string(x, digits);
            o.csv_rows.push(vec![s(&z.dedekind), to_decimal_string(&z.dedekind_tail, 6), s(&z.zeta), s(&z.l), to_decimal_string(&res, 6), to_decimal_string(&tol, 6)]);
            o.provenance = "truncated sums with tail bounds".into();
            o.result = json!({
                "dedekind": s(&z.dedekind),
                "dedekind_tail": to_decimal_string(&z.dedekind_tail, 6),
                "zeta": s(&z.zeta),
                "zeta_tail": to_decimal_string(&z.zeta_tail, 6),
                "l": s(&z.l),
                "l_tail": to_decimal_string(&z.l_tail, 6),
                "factorization_residual": to_decimal_string(&res, 6),
                "tolerance": to_decimal_string(&tol, 6),
                "holds": res <= tol,
            });
            o.param("D", d).param("beta", beta).param("norm_bound", norm_bound)
        }
        Command::CmState(a) => {
            let g = ClassGroup::new(a.d)?;
            let f = CMFunction::parse(&g, &a.f)?;
            let o = if matches!(a.beta.trim(), "inf" | "infinity" | "∞") {
                let v = cm_ground_state(&g, &f, a.base)?;
                let r = StateReport::exact(v, digits).with_param("beta", "inf");
                state_output("cm-state", r, prec)
            } else {
                let beta = real(&a.beta, prec)?;
                let rep = TruncatedCMRep::new(g, a.norm_bound)?;
                state_output("cm-state", cm_state_value(&rep, &f, a.base, &beta)?, prec)
            };
            o.param("D", a.d).param("beta", &a.beta).param("f", &a.f).param("base", a.base).param("norm_bound", a.norm_bound)
        }
        Command::CmCovariance(a) => {
            let g = ClassGroup::new(a.d)?;
            let f = CMFunction::parse(&g, &a.f)?;
            let js = QuadIdeal::parse(g.field(), &a.js)?;
            let beta = real(&a.beta, prec)?;
            let rep = TruncatedCMRep::new(g, a.norm_bound)?;
            let c = cm_symmetry_covariance_check(&rep, a.base, js, &f, &beta)?;
            let mut o = Output::new("cm-covariance", "lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,holds");
            o.csv_rows.push(vec![
                to_decimal_string(c.lhs.real(), digits),
                to_decimal_string(c.lhs.imag(), digits),
                to_decimal_string(c.rhs.real(), digits),
                to_decimal_string(c.rhs.imag(), digits),
                to_decimal_string(&c.residual, 6),
                to_decimal_string(&c.tolerance, 6),
                c.holds().to_string(),
            ]);
            o.provenance = "truncated sums with tail bounds".into();
            o.result = json!({
                "lhs": complex_json(&c.lhs, digits),
                "rhs": complex_json(&c.rhs, digits),
                "residual": to_decimal_string(&c.residual, 6),
                "tolerance": to_decimal_string(&c.tolerance, 6),
                "holds": c.holds(),
            });
            o.param("D", a.d)
                .param("beta", &a.beta)
                .param("f", &a.f)
                .param("base", a.base)
                .param("js", js)
                .param("norm_bound", a.norm_bound)
        }
        Command::CmProjection(a) => {
            let g = ClassGroup::new(a.d)?;
            let beta = real(&a.beta, prec)?;
            let primes = qualifying_primes(&g, a.chi, a.primes);
            let r = cm_projection(&g, a.chi, &primes, a.base, &beta)?;
            let names: Vec<String> = primes.iter().map(|p| p.ideal.to_string()).collect();
            let mut o = state_output("cm-projection", r, prec);
            o.result["primes"] = json!(names);
            o.param("D", a.d).param("chi", a.chi).param("primes", a.primes).param("base", a.base).param("beta", &a.beta)
        }
        Command::CmUniqueness(a) => {
            let g = ClassGroup::new(a.d)?;
            let beta = real(&a.beta, prec)?;
            let moduli = uniqueness_decay_report(&g, a.chi, &beta, a.primes, a.base)?;
            let mut o = Output::new("cm-uniqueness", "k,modulus");
            let strs: Vec<String> = moduli.iter().map(|m| to_decimal_string(m, digits)).collect();
            for (k, m) in strs.iter().enumerate() {
                o.csv_rows.push(vec![k.to_string(), m.clone()]);
            }
            let decreasing = moduli.windows(2).all(|w| w[1] < w[0]);
            o.provenance = "exact Euler products over A".into();
            o.result = json!({ "moduli": strs, "strictly_decreasing": decreasing });
            o.param("D", a.d).param("chi", a.chi).param("primes", a.primes).param("base", a.base).param("beta", &a.beta)
        }
        Command::HilbertPoly { d, digits } => {
            let p = hilbert_class_polynomial_auto(*d, *digits)?;
            let mut o = Output::new("hilbert-poly", "degree,coefficient");
            for (i, c) in p.poly.coeffs().iter().enumerate() {
                o.csv_rows.push(vec![i.to_string(), c.to_string()]);
            }
            o.provenance = "j-invariants at CM points, rounded to integers".into();
            o.result = serde_json::to_value(p.json()).expect("serializable");
            o.param("D", d)
        }
        Command::VerifyAll { profile, seed, mutate } => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let mutation = match mutate {
                None => Mutation::None,
                Some(MutationArg::FlipFWeightSign) => Mutation::FlipFWeightSign,
                Some(MutationArg::BreakComposition) => Mutation::BreakComposition,
            };
            let r = verify_all(profile, *seed, mutation);
            let mut o = Output::new("verify-all", "name,criterion,passed,residual,tolerance,runtime_ms");
            for c in &r.checks {
                o.csv_rows.push(vec![
                    c.name.to_string(),
                    c.criterion.map_or_else(String::new, |n| n.to_string()),
                    c.passed.to_string(),
                    format!("{:.6e}", c.residual),
                    format!("{:.6e}", c.tolerance),
                    c.runtime_ms.to_string(),
                ]);
            }
            o.provenance = "acceptance suite".into();
            o.exit = if r.passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
            o.result = serde_json::to_value(&r).expect("serializable");
            o.param("profile", format!("{profile:?}").to_lowercase()).param("seed", seed).param("mutate", format!("{mutation:?}"))
        }
    })
}
