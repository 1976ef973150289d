//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain or convergence error, 2 usage error,
//! 3 verification failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::hermite::{chp_eval, EvalPoint};
use crate::kernels::{self, HeatArgs, KernelArgs, TruncationSpec};
use crate::numeric::{format_complex, format_real, parse_complex, rel_err, C64};
use crate::quadrature::{self, IntegralRepParams, QuadratureRule};
use crate::verify::{self, IdentityId, SampleSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Plain values, one per line.
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "chermite", version, about = "Complex Hermite polynomials, Mehler kernels and identity checks")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Significant decimal digits in printed numbers.
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
    #[command(subcommand)]
    pub command: Command,
}

fn complex_arg(s: &str) -> Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate H^nu_{m,n}(z).
    Eval {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        z: C64,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
    },
    /// Evaluate a kernel in closed form, or as a truncated series with --series.
    Kernel {
        #[arg(value_enum)]
        kernel: KernelId,
        #[command(flatten)]
        args: KernelFlags,
        #[command(flatten)]
        trunc: TruncFlags,
        /// Sum the series instead of using the closed form.
        #[arg(long)]
        series: bool,
    },
    /// Tabulate the heat kernel K_nu(t; x+iy, z0) on a rectangular grid.
    HeatGrid {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
        z0: C64,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        y_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        y_max: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
    /// Quadrature oracles compared with their closed forms.
    Quad {
        #[arg(value_enum)]
        which: QuadId,
        #[command(flatten)]
        args: QuadFlags,
    },
    /// Run the identity catalog on seeded samples and print JSON-lines reports.
    Verify {
        /// Run every identity in the catalog.
        #[arg(long, conflicts_with = "id")]
        all: bool,
        /// Run only these identities (repeatable).
        #[arg(long, value_parser = parse_identity)]
        id: Vec<IdentityId>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
        samples: usize,
        /// Override the registered series cutoff of every series-based identity.
        #[arg(long)]
        max_order: Option<usize>,
    },
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelId {
    MehlerReal,
    Egf,
    GfSingle,
    PartialMehler,
    Mehler1,
    Mehler2,
    Heat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadId {
    Gauss,
    IntRep,
    Norm,
    SelfReciprocity,
    FourierEigen,
}

#[derive(Debug, Args)]
pub struct KernelFlags {
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    u: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    v: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    z: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    w: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    z0: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    zeta: C64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    nu_prime: f64,
    /// Real parameter of the classical Mehler kernel, or time for the heat kernel.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    y: f64,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    m_prime: u32,
}

#[derive(Debug, Args)]
pub struct TruncFlags {
    #[arg(long, default_value_t = 80)]
    max_order: usize,
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
}

#[derive(Debug, Args)]
pub struct QuadFlags {
    /// Gauss–Hermite nodes per axis.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    j: u32,
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    z: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    u: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    v: C64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    nu_prime: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gamma: f64,
    /// Defaults to i*sqrt(nu*mu) for int-rep.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    alpha: Option<C64>,
    /// Defaults to -i*sqrt(nu*mu) for int-rep.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    beta: Option<C64>,
}

/// A command failure and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) => EXIT_USAGE,
            Error::Domain(_) | Error::NonConvergence { .. } => EXIT_DOMAIN,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_DOMAIN, message: format!("i/o error: {e}") }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// A named field of one output record.
#[derive(Debug, Clone, Copy)]
enum Field {
    Real(f64),
    Complex(C64),
    Int(u64),
    Str(&'static str),
}

type Record = Vec<(&'static str, Field)>;

struct Printer {
    format: Format,
    digits: usize,
}

impl Printer {
    fn rounded(&self, x: f64) -> Value {
        let s = format_real(x, self.digits);
        s.parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
    }

    fn json_field(&self, f: Field) -> Value {
        match f {
            Field::Real(x) => self.rounded(x),
            Field::Complex(z) => {
                let mut m = Map::new();
                m.insert("re".into(), self.rounded(z.re));
                m.insert("im".into(), self.rounded(z.im));
                Value::Object(m)
            }
            Field::Int(i) => Value::from(i),
            Field::Str(s) => Value::from(s),
        }
    }

    fn text_field(&self, f: Field) -> String {
        match f {
            Field::Real(x) => format_real(x, self.digits),
            Field::Complex(z) => format_complex(z, self.digits),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => s.to_string(),
        }
    }

    fn csv_header(record: &Record) -> String {
        let mut cols = Vec::new();
        for (name, f) in record {
            match (name, f) {
                (&"value", Field::Complex(_)) => cols.extend(["re".to_string(), "im".to_string()]),
                (_, Field::Complex(_)) => cols.extend([format!("{name}_re"), format!("{name}_im")]),
                _ => cols.push(name.to_string()),
            }
        }
        cols.join(",")
    }

    fn csv_row(&self, record: &Record) -> String {
        let mut cols = Vec::new();
        for (_, f) in record {
            match *f {
                Field::Complex(z) => cols.extend([format_real(z.re, self.digits), format_real(z.im, self.digits)]),
                other => cols.push(self.text_field(other)),
            }
        }
        cols.join(",")
    }

    /// A single result: the leading field is the headline value.
    fn single(&self, record: &Record, out: &mut dyn Write) -> io::Result<()> {
        match self.format {
            Format::Text => {
                let (_, first) = record[0];
                writeln!(out, "{}", self.text_field(first))?;
                for (name, f) in &record[1..] {
                    writeln!(out, "{name}: {}", self.text_field(*f))?;
                }
            }
            Format::Json => {
                let obj: Map<String, Value> = record.iter().map(|(k, f)| (k.to_string(), self.json_field(*f))).collect();
                writeln!(out, "{}", Value::Object(obj))?;
            }
            Format::Csv => {
                writeln!(out, "{}", Printer::csv_header(record))?;
                writeln!(out, "{}", self.csv_row(record))?;
            }
        }
        Ok(())
    }

    /// A table: CSV for text and csv formats, one JSON object per line for json.
    fn table(&self, records: &[Record], out: &mut dyn Write) -> io::Result<()> {
        match self.format {
            Format::Json => {
                for r in records {
                    let obj: Map<String, Value> = r.iter().map(|(k, f)| (k.to_string(), self.json_field(*f))).collect();
                    writeln!(out, "{}", Value::Object(obj))?;
                }
            }
            Format::Text | Format::Csv => {
                if let Some(first) = records.first() {
                    writeln!(out, "{}", Printer::csv_header(first))?;
                }
                for r in records {
                    writeln!(out, "{}", self.csv_row(r))?;
                }
            }
        }
        Ok(())
    }
}

fn eval_point(z: C64, nu: f64) -> Result<EvalPoint, Failure> {
    Ok(EvalPoint::new(z, nu)?)
}

fn kernel_record(kernel: KernelId, a: &KernelFlags, trunc: &TruncFlags, series: bool) -> Result<Record, Failure> {
    let t = TruncationSpec::new(trunc.max_order, trunc.tail_tol)?;
    let kargs = KernelArgs { u: a.u, v: a.v, z: a.z, w: a.w, nu: a.nu, nu_prime: a.nu_prime };
    let heat = HeatArgs { t: a.t, z: a.z, z0: a.z0, nu: a.nu };
    let s = if series {
        match kernel {
            KernelId::MehlerReal => kernels::classical_mehler_series(a.t, a.x, a.y, t)?,
            KernelId::Egf => kernels::egf_series(&kargs, t)?,
            KernelId::GfSingle => kernels::gf_single_series(a.m_prime, a.zeta, a.w, a.nu, t)?,
            KernelId::PartialMehler => kernels::partial_mehler_series(a.m, a.m_prime, a.z, a.w, a.nu, t)?,
            KernelId::Mehler1 => kernels::mehler1_series(&kargs, t)?,
            KernelId::Mehler2 => kernels::mehler2_series(&kargs, t)?,
            KernelId::Heat => kernels::heat_kernel_series(&heat, t)?,
        }
    } else {
        let value = match kernel {
            KernelId::MehlerReal => C64::new(kernels::classical_mehler_closed(a.t, a.x, a.y)?, 0.0),
            KernelId::Egf => kernels::egf_closed(&kargs)?,
            KernelId::GfSingle => kernels::gf_single_closed(a.m_prime, a.zeta, a.w, a.nu)?,
            KernelId::PartialMehler => kernels::partial_mehler_closed(a.m, a.m_prime, a.z, a.w, a.nu)?,
            KernelId::Mehler1 => kernels::mehler1_closed(&kargs)?,
            KernelId::Mehler2 => kernels::mehler2_closed(&kargs)?,
            KernelId::Heat => kernels::heat_kernel_closed(&heat)?,
        };
        return Ok(vec![("value", Field::Complex(value))]);
    };
    Ok(vec![
        ("value", Field::Complex(s.value)),
        ("tail", Field::Real(s.tail)),
        ("max_order", Field::Int(s.max_order as u64)),
    ])
}

fn quad_record(which: QuadId, q: &QuadFlags) -> Result<Record, Failure> {
    let rule = QuadratureRule::new(q.nodes, 1.0)?;
    let (quad, closed, extra): (C64, C64, Record) = match which {
        QuadId::Gauss => {
            let (alpha, beta) = (q.alpha.unwrap_or_default(), q.beta.unwrap_or_default());
            let closed = quadrature::gaussian_integral_closed(q.gamma, alpha, beta)?;
            (quadrature::gaussian_integral_quad(q.gamma, alpha, beta, &rule)?, closed, vec![])
        }
        QuadId::IntRep => {
            let ip = match (q.alpha, q.beta) {
                (None, None) => IntegralRepParams::imaginary(q.nu, q.mu)?,
                (Some(a), Some(b)) => IntegralRepParams::new(q.mu, a, b)?,
                _ => return Err(usage("int-rep needs both --alpha and --beta, or neither")),
            };
            let rule = rule.with_scale(ip.mu())?;
            let quad = quadrature::chp_integral_rep(q.m, q.n, q.z, &ip, &rule)?;
            let closed = chp_eval(q.m, q.n, eval_point(q.z, ip.nu())?);
            (quad, closed, vec![("nu", Field::Real(ip.nu()))])
        }
        QuadId::Norm => {
            let rule = rule.with_scale(q.nu)?;
            let quad = quadrature::gram_entry_quad(q.m, q.n, q.j, q.k, q.nu, &rule)?;
            let closed = if (q.m, q.n) == (q.j, q.k) { quadrature::norm_squared_closed(q.m, q.n, q.nu)? } else { 0.0 };
            (quad, C64::new(closed, 0.0), vec![])
        }
        QuadId::SelfReciprocity => {
            let rule = rule.with_scale(quadrature::self_reciprocity_scale(q.u, q.v, q.nu, q.nu_prime)?)?;
            let r = quadrature::self_reciprocity_check(q.j, q.k, q.u, q.v, q.z, q.nu, q.nu_prime, &rule);
            if let Some(msg) = r.meta.get("message").and_then(Value::as_str) {
                return Err(Failure { code: EXIT_DOMAIN, message: msg.to_string() });
            }
            let form = match r.meta.get("exponent_form").and_then(Value::as_str) {
                Some("printed") => "printed",
                _ => "derived",
            };
            (r.lhs, r.rhs, vec![("exponent_form", Field::Str(form))])
        }
        QuadId::FourierEigen => {
            let (lhs, rhs) = quadrature::fourier_eigen_sides(q.j, q.k, q.z, &rule.with_scale(0.5)?);
            (lhs, rhs, vec![])
        }
    };
    let mut record = vec![
        ("value", Field::Complex(quad)),
        ("closed", Field::Complex(closed)),
        ("rel_err", Field::Real(rel_err(quad, closed))),
    ];
    record.extend(extra);
    Ok(record)
}

#[allow(clippy::too_many_arguments)]
fn heat_grid(
    t: f64,
    nu: f64,
    z0: C64,
    (x_min, x_max): (f64, f64),
    (y_min, y_max): (f64, f64),
    steps: usize,
) -> Result<Vec<Record>, Failure> {
    if steps < 2 {
        return Err(usage(format!("--steps must be at least 2, got {steps}")));
    }
    let lerp = |a: f64, b: f64, i: usize| a + (b - a) * i as f64 / (steps - 1) as f64;
    let mut rows = Vec::with_capacity(steps * steps);
    for iy in 0..steps {
        let y = lerp(y_min, y_max, iy);
        for ix in 0..steps {
            let x = lerp(x_min, x_max, ix);
            let k = kernels::heat_kernel_closed(&HeatArgs { t, z: C64::new(x, y), z0, nu })?;
            rows.push(vec![("x", Field::Real(x)), ("y", Field::Real(y)), ("re", Field::Real(k.re)), ("im", Field::Real(k.im))]);
        }
    }
    Ok(rows)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let p = Printer { format: cli.format, digits: cli.precision as usize };
    match &cli.command {
        Command::Eval { m, n, z, nu } => {
            let value = chp_eval(*m, *n, eval_point(*z, *nu)?);
            p.single(&vec![("value", Field::Complex(value))], out)?;
        }
        Command::Kernel { kernel, args, trunc, series } => {
            p.single(&kernel_record(*kernel, args, trunc, *series)?, out)?;
        }
        Command::HeatGrid { t, nu, z0, x_min, x_max, y_min, y_max, steps } => {
            let rows = heat_grid(*t, *nu, *z0, (*x_min, *x_max), (*y_min, *y_max), *steps)?;
            p.table(&rows, out)?;
        }
        Command::Quad { which, args } => {
            p.single(&quad_record(*which, args)?, out)?;
        }
        Command::Verify { all, id, seed, samples, max_order } => {
            if !*all && id.is_empty() {
                return Err(usage("verify needs --all or at least one --id"));
            }
            let ids = if *all { IdentityId::ALL.to_vec() } else { id.clone() };
            if *max_order == Some(0) {
                return Err(usage("--max-order must be positive"));
            }
            let spec = SampleSpec { seed: *seed, samples_per_identity: *samples, ids, max_order: *max_order };
            let result = verify::run_suite(&spec);
            match cli.format {
                Format::Csv => {
                    writeln!(out, "identity_id,sample,pass,expected_outcome,rel_err")?;
                    for r in &result.reports {
                        let sample = r.meta.get("sample").and_then(Value::as_u64).unwrap_or(0);
                        writeln!(
                            out,
                            "{},{sample},{},{},{}",
                            r.identity_id,
                            r.pass,
                            r.is_expected_outcome(),
                            format_real(r.rel_err, p.digits)
                        )?;
                    }
                }
                Format::Text | Format::Json => out.write_all(result.to_json_lines().as_bytes())?,
            }
            let s = result.summary;
            writeln!(
                err,
                "{} reports: {} passed, {} failed ({} expected), {} unexpected",
                s.total, s.passed, s.failed, s.expected_failures, s.unexpected_failures
            )?;
            if !result.all_expected() {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command. Output
/// goes to `stdout` unless `--out` is given. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.out {
        Some(path) => File::create(path)
            .map_err(Failure::from)
            .and_then(|mut f| dispatch(&cli, &mut f, stderr)),
        None => dispatch(&cli, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
