//! Fits empirical p-th digit histograms against the model law at a known (or
//! inferred) bound, Hill's law, the uniform law, and the normalized central
//! values.
//!
//! Only positive integers are accepted. Signed, fractional or non-numeric
//! fields are counted as skipped; to audit real-valued data, scale it to
//! integers first (e.g. cents instead of currency units).

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::asymptotics::{central_value, hill_prob};
use crate::digit_core::{pth_digit, Digit, Position};
use crate::error::{Error, Result};
use crate::exact_law::distribution_at;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub values: Vec<u64>,
    pub source_label: String,
    pub skipped: u64,
}

impl Dataset {
    pub fn max_value(&self) -> Option<u64> {
        self.values.iter().copied().max()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    /// Zero-based field index.
    Index(usize),
}

impl ColumnSelector {
    /// All-digit selectors are indices, anything else is a header name.
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// A header is present iff the first record has no numeric field.
    /// Selecting by name always implies a header.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestOptions {
    /// `None` sniffs the first line: tab if it has one, comma otherwise.
    pub delimiter: Option<u8>,
    pub header: HeaderMode,
}

/// A strictly positive integer written with ASCII digits only.
fn parse_positive(field: &str) -> Option<u64> {
    let t = field.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse::<u64>().ok().filter(|&v| v >= 1)
}

fn looks_numeric(field: &str) -> bool {
    field.trim().parse::<f64>().is_ok()
}

/// Reads one column of delimited text.
pub fn ingest_reader<R: Read>(
    reader: R,
    label: &str,
    column: &ColumnSelector,
    options: &IngestOptions,
) -> Result<Dataset> {
    let mut buffered = BufReader::with_capacity(1 << 16, reader);
    let delimiter = match options.delimiter {
        Some(d) => d,
        None => {
            let head = buffered
                .fill_buf()
                .map_err(|e| Error::Io(format!("{label}: {e}")))?;
            let first_line = head.split(|&b| b == b'\n').next().unwrap_or(&[]);
            if first_line.contains(&b'\t') {
                b'\t'
            } else {
                b','
            }
        }
    };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(buffered);
    let mut records = rdr.records();

    let first = match records.next() {
        None => return Err(Error::NoRecords(label.to_string())),
        Some(r) => r.map_err(|e| Error::Io(format!("{label}: {e}")))?,
    };
    let has_header = match (options.header, column) {
        (_, ColumnSelector::Name(_)) | (HeaderMode::Present, _) => true,
        (HeaderMode::Absent, _) => false,
        (HeaderMode::Auto, ColumnSelector::Index(_)) => !first.iter().any(looks_numeric),
    };
    let index = match column {
        ColumnSelector::Index(i) => *i,
        ColumnSelector::Name(name) => {
            first
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::ColumnNotFound {
                    column: name.clone(),
                    available: first.iter().map(str::to_string).collect(),
                })?
        }
    };

    let mut values = Vec::new();
    let mut skipped = 0u64;
    let mut seen = 0u64;
    let mut take = |record: &csv::StringRecord| {
        seen += 1;
        match record.get(index).and_then(parse_positive) {
            Some(v) => values.push(v),
            None => skipped += 1,
        }
    };
    if !has_header {
        take(&first);
    }
    for record in records {
        let record = record.map_err(|e| Error::Io(format!("{label}: {e}")))?;
        take(&record);
    }
    if seen == 0 {
        return Err(Error::NoRecords(label.to_string()));
    }
    Ok(Dataset {
        values,
        source_label: label.to_string(),
        skipped,
    })
}

pub fn ingest_path(
    path: &Path,
    column: &ColumnSelector,
    options: &IngestOptions,
) -> Result<Dataset> {
    let label = path.display().to_string();
    let file = File::open(path).map_err(|e| Error::Io(format!("{label}: {e}")))?;
    ingest_reader(file, &label, column, options)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitHistogram {
    pub p: Position,
    pub counts: [u64; 10],
    /// Values with at least `p` digits.
    pub eligible: u64,
}

impl DigitHistogram {
    pub fn from_counts(p: Position, counts: [u64; 10]) -> Self {
        DigitHistogram {
            p,
            counts,
            eligible: counts.iter().sum(),
        }
    }

    pub fn frequencies(&self) -> [f64; 10] {
        let e = self.eligible as f64;
        self.counts.map(|c| c as f64 / e)
    }

    /// Adds another histogram for the same position.
    pub fn merge(&mut self, other: &DigitHistogram) {
        debug_assert_eq!(self.p, other.p);
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.eligible += other.eligible;
    }
}

pub fn histogram(ds: &Dataset, p: Position) -> Result<DigitHistogram> {
    if ds.values.is_empty() {
        return Err(Error::NoRecords(ds.source_label.clone()));
    }
    let mut counts = [0u64; 10];
    for &v in &ds.values {
        if let Some(d) = pth_digit(v, p) {
            counts[d.index()] += 1;
        }
    }
    let h = DigitHistogram::from_counts(p, counts);
    if h.eligible == 0 {
        return Err(Error::NoEligible { p: p.get() });
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// The two-stage uniform model at the report's bound.
    Model,
    Hill,
    Uniform,
    /// Central values, renormalized to sum to one.
    Central,
}

impl Law {
    pub const ALL: [Law; 4] = [Law::Model, Law::Hill, Law::Uniform, Law::Central];

    pub fn name(self) -> &'static str {
        match self {
            Law::Model => "model",
            Law::Hill => "hill",
            Law::Uniform => "uniform",
            Law::Central => "central",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "model" => Ok(Law::Model),
            "hill" => Ok(Law::Hill),
            "uniform" => Ok(Law::Uniform),
            "central" => Ok(Law::Central),
            other => Err(Error::Usage(format!(
                "unknown law {other:?}; expected model, hill, uniform or central"
            ))),
        }
    }
}

/// The bound fed to the model law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelBound {
    pub n: u64,
    /// Taken from the data maximum rather than supplied.
    pub inferred: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawFit {
    pub law: Law,
    pub expected: [f64; 10],
    pub chi_square: f64,
    pub mad: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub p: Position,
    pub eligible: u64,
    /// Sorted by ascending `mad`; ties keep the requested law order.
    pub ranking: Vec<LawFit>,
    pub model_bound: Option<ModelBound>,
}

impl FitReport {
    pub fn best(&self) -> &LawFit {
        &self.ranking[0]
    }

    pub fn rank_of(&self, law: Law) -> Option<usize> {
        self.ranking.iter().position(|f| f.law == law)
    }

    pub fn get(&self, law: Law) -> Option<&LawFit> {
        self.ranking.iter().find(|f| f.law == law)
    }
}

/// Expected digit distribution of `law` at position `p`.
pub fn expected_distribution(
    law: Law,
    p: Position,
    bound: Option<ModelBound>,
) -> Result<[f64; 10]> {
    let mut out = [0.0; 10];
    match law {
        Law::Model => {
            let bound = bound.ok_or_else(|| Error::Usage("the model law needs a bound".into()))?;
            out = distribution_at(bound.n, p)?;
        }
        Law::Hill => {
            for d in Digit::all() {
                out[d.index()] = hill_prob(d, p)?.value;
            }
        }
        Law::Uniform => out = [0.1; 10],
        Law::Central => {
            for d in Digit::all() {
                out[d.index()] = central_value(d, p)?.value;
            }
            let total: f64 = out.iter().sum();
            out.iter_mut().for_each(|x| *x /= total);
        }
    }
    Ok(out)
}

pub fn chi_square(h: &DigitHistogram, expected: &[f64; 10]) -> f64 {
    let e = h.eligible as f64;
    let mut total = 0.0;
    for (&count, &q) in h.counts.iter().zip(expected) {
        let want = e * q;
        if want > 0.0 {
            let diff = count as f64 - want;
            total += diff * diff / want;
        } else if count > 0 {
            return f64::INFINITY;
        }
    }
    total
}

pub fn mad(h: &DigitHistogram, expected: &[f64; 10]) -> f64 {
    let freq = h.frequencies();
    freq.iter()
        .zip(expected)
        .map(|(f, q)| (f - q).abs())
        .sum::<f64>()
        / 10.0
}

/// Scores `h` against each requested law.
pub fn fit(h: &DigitHistogram, laws: &[Law], bound: Option<ModelBound>) -> Result<FitReport> {
    if h.eligible == 0 {
        return Err(Error::NoEligible { p: h.p.get() });
    }
    if laws.is_empty() {
        return Err(Error::Usage("no laws requested".into()));
    }
    if let Some(b) = bound {
        if b.n < h.p.floor() {
            return Err(Error::BoundTooSmall {
                n: b.n,
                min: h.p.floor(),
            });
        }
    }
    let mut ranking = Vec::with_capacity(laws.len());
    for &law in laws {
        let expected = expected_distribution(law, h.p, bound)?;
        ranking.push(LawFit {
            law,
            expected,
            chi_square: chi_square(h, &expected),
            mad: mad(h, &expected),
        });
    }
    ranking.sort_by(|a, b| a.mad.total_cmp(&b.mad));
    Ok(FitReport {
        p: h.p,
        eligible: h.eligible,
        ranking,
        model_bound: if laws.contains(&Law::Model) {
            bound
        } else {
            None
        },
    })
}

/// Histogram plus fit, with the model bound defaulting to the data maximum.
pub fn audit(ds: &Dataset, p: Position, laws: &[Law], n_bound: Option<u64>) -> Result<FitReport> {
    let h = histogram(ds, p)?;
    let max = ds.max_value().expect("histogram rejects empty datasets");
    let bound = match n_bound {
        Some(n) if n < max => return Err(Error::BoundBelowData { n, max }),
        Some(n) => ModelBound { n, inferred: false },
        None => ModelBound {
            n: max,
            inferred: true,
        },
    };
    fit(&h, laws, Some(bound))
}
