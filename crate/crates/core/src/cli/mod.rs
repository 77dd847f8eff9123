//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the process exit code: 0 on success, 1 when a
//! computation fails, 2 on invalid usage.

pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{
    alpha, alpha_sub, central_value, hill_prob, window_range, MAX_ASYMPTOTIC_POSITION,
};
use crate::audit::{self, ColumnSelector, HeaderMode, IngestOptions, Law};
use crate::digit_core::{pow10, Digit, Position};
use crate::error::{Error, Result};
use crate::exact_law::{
    prob_exact_with_cap, prob_scan, prob_via_recursion, Decimation, ModelParams, DEFAULT_DIRECT_CAP,
};
use crate::oracle::{
    prob_oracle_with_cap, simulate, simulate_with_workers, SimulationConfig, DEFAULT_ORACLE_CAP,
};
use crate::tables;

pub use output::{
    format_significant, Field, Format, OutputRecord, RecordWriter, DEFAULT_PRECISION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "digitlaw",
    version,
    about = "Significant-digit laws of the two-dice uniform model"
)]
pub struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Significant digits for floating-point fields.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u32).range(1..=17).map(|v| v as usize))]
    pub precision: usize,

    /// Largest n the linear-time evaluators accept.
    #[arg(long, global = true, env = "DIGITLAW_ORACLE_CAP")]
    pub cap: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability that the p-th digit equals d, for one bound n.
    Prob(ProbArgs),
    /// Distribution over every digit along a range of n.
    Scan(ScanArgs),
    /// Limit constants next to the finite-n subsequences approaching them.
    Limits(LimitsArgs),
    /// Seeded simulation of the experiment.
    Simulate(SimulateArgs),
    /// Fit the digits of a data column against candidate laws.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed-form block sums.
    Exact,
    /// Cached decade totals plus the tail term.
    Recursion,
    /// Direct summation over every m.
    Oracle,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    #[arg(short)]
    pub n: u64,
    #[arg(short)]
    pub p: u32,
    /// Digit; all ten when omitted.
    #[arg(short)]
    pub d: Option<u32>,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(short)]
    pub p: u32,
    #[arg(long)]
    pub n_max: u64,
    /// `all`, `log`, `log:DENSE_BELOW:PER_DECADE` or `stride:K`.
    #[arg(long, default_value = "log", value_parser = parse_decimation)]
    pub decimate: Decimation,
    /// Write rows here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append a log10(n) column.
    #[arg(long)]
    pub logx: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitSet {
    Alpha,
    AlphaSub,
    Central,
    Hill,
    All,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[arg(short)]
    pub p: u32,
    #[arg(long, value_enum, default_value_t = LimitSet::All)]
    pub kind: LimitSet,
    /// Window index for the windowed limit; defaults to the tabulated one.
    #[arg(short)]
    pub i: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(short)]
    pub n: u64,
    #[arg(short)]
    pub p: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; the result does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeaderArg {
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Delimited text file, or `-` for standard input.
    pub input: PathBuf,
    /// Header name, or zero-based field index.
    #[arg(long, default_value = "0")]
    pub column: String,
    #[arg(short, default_value_t = 2)]
    pub p: u32,
    /// Model bound; the data maximum when omitted.
    #[arg(long)]
    pub n_bound: Option<u64>,
    /// Comma-separated subset of model, hill, uniform, central.
    #[arg(long, default_value = "model,hill,uniform,central")]
    pub laws: String,
    /// Single-byte field delimiter; sniffed when omitted.
    #[arg(long)]
    pub delimiter: Option<char>,
    #[arg(long, value_enum, default_value_t = HeaderArg::Auto)]
    pub header: HeaderArg,
}

fn parse_decimation(s: &str) -> std::result::Result<Decimation, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| {
        t.parse::<u64>()
            .map_err(|_| format!("bad number {t:?} in {s:?}"))
    };
    match parts.as_slice() {
        ["all"] => Ok(Decimation::All),
        ["log"] => Ok(Decimation::default()),
        ["log", dense, per] => {
            let per = num(per)?;
            if per == 0 || per > u64::from(u32::MAX) {
                return Err("per-decade count must be positive".into());
            }
            Ok(Decimation::Log {
                dense_below: num(dense)?,
                per_decade: per as u32,
            })
        }
        ["stride", k] => match num(k)? {
            0 => Err("stride must be positive".into()),
            k => Ok(Decimation::Stride(k)),
        },
        _ => Err(format!(
            "expected all, log, log:DENSE:PER or stride:K, got {s:?}"
        )),
    }
}

/// Runs the tool on `args` (program name first).
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
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let emit = |record: OutputRecord, out: &mut dyn Write| {
        record
            .write_to(out, cli.format, cli.precision)
            .map(|_| ())
            .map_err(io_err)
    };
    match &cli.command {
        Command::Prob(a) => emit(prob(a, cli.cap)?, stdout),
        Command::Scan(a) => scan(a, cli, stdout),
        Command::Limits(a) => emit(limits(a)?, stdout),
        Command::Simulate(a) => emit(simulation(a, cli.cap)?, stdout),
        Command::Audit(a) => {
            let (record, summary) = audit_cmd(a)?;
            emit(record, stdout)?;
            stderr.write_all(summary.as_bytes()).map_err(io_err)
        }
    }
}

fn digits(d: Option<u32>) -> Result<Vec<Digit>> {
    match d {
        Some(d) => Ok(vec![Digit::new(d)?]),
        None => Ok(Digit::all().collect()),
    }
}

pub fn prob(a: &ProbArgs, cap: Option<u64>) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new([
        "n",
        "p",
        "d",
        "method",
        "value",
        "provenance",
        "abs_error_bound",
    ]);
    let method = a.method.to_possible_value().expect("no skipped variants");
    for d in digits(a.d)? {
        let params = ModelParams::from_raw(a.n, a.p, u32::from(d.get()))?;
        let v = match a.method {
            Method::Exact => prob_exact_with_cap(&params, cap.unwrap_or(DEFAULT_DIRECT_CAP))?,
            Method::Recursion => prob_via_recursion(&params),
            Method::Oracle => prob_oracle_with_cap(&params, cap.unwrap_or(DEFAULT_ORACLE_CAP))?,
        };
        rec.push(vec![
            a.n.into(),
            a.p.into(),
            u32::from(d.get()).into(),
            method.get_name().into(),
            v.value.into(),
            v.provenance.as_str().into(),
            v.abs_error_bound.into(),
        ]);
    }
    Ok(rec)
}

fn scan_columns(logx: bool) -> Vec<String> {
    let mut cols = vec!["n".to_string()];
    cols.extend((0..10).map(|d| format!("P_{d}")));
    if logx {
        cols.push("log10_n".into());
    }
    cols
}

fn scan(a: &ScanArgs, cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let p = Position::new(a.p)?;
    let points = prob_scan(a.n_max, p, a.decimate)?;
    let mut sink: Box<dyn Write + '_> = match &a.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(stdout)),
    };
    let mut w = RecordWriter::new(&mut sink, cli.format, cli.precision, scan_columns(a.logx))
        .map_err(io_err)?;
    let mut row = Vec::with_capacity(12);
    for pt in points {
        row.clear();
        row.push(pt.n.into());
        row.extend(pt.probs.iter().map(|&v| Field::Float(v)));
        if a.logx {
            row.push(Field::Float((pt.n as f64).log10()));
        }
        w.write_row(&row).map_err(io_err)?;
    }
    w.finish().map_err(io_err)?;
    sink.flush().map_err(io_err)
}

const LIMIT_COLUMNS: [&str; 9] = [
    "table",
    "quantity",
    "d",
    "m",
    "i",
    "n",
    "value",
    "reference",
    "diff",
];

struct LimitRow {
    table: &'static str,
    quantity: &'static str,
    d: Digit,
    m: Option<u32>,
    i: Option<u64>,
    n: Option<u64>,
    value: f64,
    reference: Option<f64>,
}

impl LimitRow {
    fn fields(&self) -> Vec<Field> {
        vec![
            self.table.into(),
            self.quantity.into(),
            u32::from(self.d.get()).into(),
            self.m.into(),
            self.i.into(),
            self.n.into(),
            self.value.into(),
            self.reference.into(),
            self.reference.map(|r| self.value - r).into(),
        ]
    }
}

/// Exponents `m` the finite-n subsequences are shown at.
fn limit_exponents(p: Position) -> std::ops::RangeInclusive<u32> {
    p.get()..=p.get().max(5)
}

fn value_at(n: u64, p: Position, d: Digit) -> Result<f64> {
    Ok(prob_via_recursion(&ModelParams::new(n, p, d)?).value)
}

pub fn limits(a: &LimitsArgs) -> Result<OutputRecord> {
    let p = Position::new(a.p)?;
    if p.get() > MAX_ASYMPTOTIC_POSITION {
        return Err(Error::PositionTooLarge {
            got: p.get(),
            max: MAX_ASYMPTOTIC_POSITION,
        });
    }
    let want = |k: LimitSet| a.kind == k || a.kind == LimitSet::All;
    let mut rows = Vec::new();

    if want(LimitSet::Alpha) {
        let reference = tables::subsequence(p.get());
        for d in Digit::all() {
            let reference_row = reference.as_ref().map(|(_, r)| &r[d.index()]);
            for (col, m) in limit_exponents(p).enumerate() {
                let n = pow10(m) - 1;
                rows.push(LimitRow {
                    table: "subsequence",
                    quantity: "P",
                    d,
                    m: Some(m),
                    i: None,
                    n: Some(n),
                    value: value_at(n, p, d)?,
                    reference: reference_row.map(|r| r[col]),
                });
            }
            rows.push(LimitRow {
                table: "subsequence",
                quantity: "alpha",
                d,
                m: None,
                i: None,
                n: None,
                value: alpha(d, p)?.value,
                reference: reference_row.and_then(|r| r.last().copied()),
            });
        }
    }

    if want(LimitSet::AlphaSub) {
        let reference = tables::window(p.get());
        let i = match (a.i, &reference) {
            (Some(i), _) => i,
            (None, Some((i, _, _))) => *i,
            (None, None) if a.kind == LimitSet::All => *window_range(p).start(),
            (None, None) => return Err(Error::Usage(format!("-i is required for p = {p}"))),
        };
        let range = window_range(p);
        if !range.contains(&i) {
            return Err(Error::WindowOutOfRange {
                i,
                lo: *range.start(),
                hi: *range.end(),
            });
        }
        let reference = reference.filter(|(ri, _, _)| *ri == i);
        for d in Digit::all() {
            let reference_row = reference.as_ref().map(|(_, _, r)| &r[d.index()]);
            for (col, m) in limit_exponents(p).enumerate() {
                let n = (10 * i + u64::from(d.get()) + 1) * pow10(m + 1 - p.get()) - 1;
                rows.push(LimitRow {
                    table: "window",
                    quantity: "P",
                    d,
                    m: Some(m),
                    i: Some(i),
                    n: Some(n),
                    value: value_at(n, p, d)?,
                    reference: reference_row.map(|r| r[col]),
                });
            }
            rows.push(LimitRow {
                table: "window",
                quantity: "alpha_sub",
                d,
                m: None,
                i: Some(i),
                n: None,
                value: alpha_sub(d, p, i)?.value,
                reference: reference_row.and_then(|r| r.last().copied()),
            });
        }
    }

    if want(LimitSet::Central) || want(LimitSet::Hill) {
        let reference = tables::central(p.get());
        for d in Digit::all() {
            let reference_row = reference.map(|r| r[d.index()]);
            if want(LimitSet::Central) {
                rows.push(LimitRow {
                    table: "central",
                    quantity: "central",
                    d,
                    m: None,
                    i: None,
                    n: None,
                    value: central_value(d, p)?.value,
                    reference: reference_row.map(|r| r[0]),
                });
            }
            rows.push(LimitRow {
                table: "central",
                quantity: "hill",
                d,
                m: None,
                i: None,
                n: None,
                value: hill_prob(d, p)?.value,
                reference: reference_row.map(|r| r[1]),
            });
        }
    }

    let mut rec = OutputRecord::new(LIMIT_COLUMNS);
    for r in rows {
        rec.push(r.fields());
    }
    Ok(rec)
}

pub fn simulation(a: &SimulateArgs, cap: Option<u64>) -> Result<OutputRecord> {
    let p = Position::new(a.p)?;
    let config = SimulationConfig::new(a.n, p, a.trials, a.seed)?;
    let report = match a.workers {
        Some(w) => simulate_with_workers(&config, w)?,
        None => simulate(&config),
    };
    let cap = cap.unwrap_or(DEFAULT_DIRECT_CAP);
    let exact: Option<[f64; 10]> = if a.n <= cap {
        let mut e = [0.0; 10];
        for d in Digit::all() {
            e[d.index()] = prob_exact_with_cap(&ModelParams::new(a.n, p, d)?, cap)?.value;
        }
        Some(e)
    } else {
        None
    };
    let z = exact.map(|e| report.z_scores(&e));
    let mut rec = OutputRecord::new(["d", "count", "frequency", "std_error", "exact", "z"]);
    for d in 0..10 {
        rec.push(vec![
            (d as u32).into(),
            report.counts[d].into(),
            report.frequencies[d].into(),
            report.std_errors[d].into(),
            exact.map(|e| e[d]).into(),
            z.map(|z| z[d]).into(),
        ]);
    }
    Ok(rec)
}

fn parse_laws(s: &str) -> Result<Vec<Law>> {
    let laws: Vec<Law> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(Law::parse)
        .collect::<Result<_>>()?;
    if laws.is_empty() {
        return Err(Error::Usage("no laws requested".into()));
    }
    Ok(laws)
}

pub fn audit_cmd(a: &AuditArgs) -> Result<(OutputRecord, String)> {
    let p = Position::new(a.p)?;
    let laws = parse_laws(&a.laws)?;
    let delimiter = match a.delimiter {
        Some(c) if c.is_ascii() => Some(c as u8),
        Some(c) => {
            return Err(Error::Usage(format!(
                "delimiter {c:?} is not a single byte"
            )))
        }
        None => None,
    };
    let options = IngestOptions {
        delimiter,
        header: match a.header {
            HeaderArg::Auto => HeaderMode::Auto,
            HeaderArg::Present => HeaderMode::Present,
            HeaderArg::Absent => HeaderMode::Absent,
        },
    };
    let column = ColumnSelector::parse(&a.column);
    let ds = if a.input.as_os_str() == "-" {
        audit::ingest_reader(io::stdin().lock(), "<stdin>", &column, &options)?
    } else {
        audit::ingest_path(&a.input, &column, &options)?
    };
    let report = audit::audit(&ds, p, &laws, a.n_bound)?;

    let mut cols = vec!["law".to_string(), "chi_square".into(), "mad".into()];
    cols.extend((0..10).map(|d| format!("expected_{d}")));
    let mut rec = OutputRecord::new(cols);
    for f in &report.ranking {
        let mut row: Vec<Field> = vec![f.law.name().into(), f.chi_square.into(), f.mad.into()];
        row.extend(f.expected.iter().map(|&v| Field::Float(v)));
        rec.push(row);
    }

    let mut summary = format!(
        "{}: {} values read, {} skipped, {} with at least {} digits\n",
        ds.source_label,
        ds.values.len(),
        ds.skipped,
        report.eligible,
        p
    );
    if let Some(b) = report.model_bound {
        let how = if b.inferred {
            "data maximum"
        } else {
            "supplied"
        };
        summary.push_str(&format!("model bound n = {} ({how})\n", b.n));
    }
    summary.push_str(&format!("best fit: {}\n", report.best().law.name()));
    Ok((rec, summary))
}
