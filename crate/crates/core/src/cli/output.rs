//! Columnar output in three encodings with fixed numeric precision.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Aligned, human-readable columns.
    Table,
    /// Comma-separated with a header line.
    Csv,
    /// One JSON object per row.
    JsonLines,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i128),
    Float(f64),
    Text(String),
    Null,
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(i128::from(v))
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::Int(i128::from(v))
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Null, Into::into)
    }
}

/// `x` rounded to `sig` significant digits, ties to even.
///
/// Positional notation for decimal exponents in `[-5, sig)`, scientific
/// otherwise.
pub fn format_significant(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return format!("{:.*}", sig - 1, 0.0);
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        return sci;
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn render_plain(field: &Field, precision: usize) -> String {
    match field {
        Field::Int(v) => v.to_string(),
        Field::Float(v) => format_significant(*v, precision),
        Field::Text(s) => s.clone(),
        Field::Null => String::new(),
    }
}

fn render_csv(field: &Field, precision: usize) -> String {
    let s = render_plain(field, precision);
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn render_json(field: &Field, precision: usize) -> String {
    match field {
        Field::Int(v) => v.to_string(),
        Field::Float(v) if v.is_finite() => format_significant(*v, precision),
        Field::Float(v) => Value::String(format_significant(*v, precision)).to_string(),
        Field::Text(s) => Value::String(s.clone()).to_string(),
        Field::Null => "null".into(),
    }
}

/// Streams rows; the table encoding buffers until [`finish`](Self::finish)
/// to align columns.
pub struct RecordWriter<W: Write> {
    out: W,
    format: Format,
    precision: usize,
    columns: Vec<String>,
    pending: Vec<Vec<String>>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(
        mut out: W,
        format: Format,
        precision: usize,
        columns: Vec<String>,
    ) -> io::Result<Self> {
        if format == Format::Csv {
            let header: Vec<String> = columns
                .iter()
                .map(|c| render_csv(&Field::Text(c.clone()), 0))
                .collect();
            writeln!(out, "{}", header.join(","))?;
        }
        Ok(RecordWriter {
            out,
            format,
            precision,
            columns,
            pending: Vec::new(),
        })
    }

    pub fn write_row(&mut self, row: &[Field]) -> io::Result<()> {
        debug_assert_eq!(row.len(), self.columns.len());
        match self.format {
            Format::Csv => {
                let cells: Vec<String> =
                    row.iter().map(|f| render_csv(f, self.precision)).collect();
                writeln!(self.out, "{}", cells.join(","))
            }
            Format::JsonLines => {
                let body: Vec<String> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, f)| {
                        format!(
                            "{}:{}",
                            Value::String(c.clone()),
                            render_json(f, self.precision)
                        )
                    })
                    .collect();
                writeln!(self.out, "{{{}}}", body.join(","))
            }
            Format::Table => {
                self.pending.push(
                    row.iter()
                        .map(|f| render_plain(f, self.precision))
                        .collect(),
                );
                Ok(())
            }
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if self.format == Format::Table {
            let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
            for row in &self.pending {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(self.out, "{}", line(&self.columns))?;
            for row in &self.pending {
                writeln!(self.out, "{}", line(row))?;
            }
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

/// A fully materialized table of named fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputRecord {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl OutputRecord {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        OutputRecord {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W, format: Format, precision: usize) -> io::Result<W> {
        let mut w = RecordWriter::new(out, format, precision, self.columns.clone())?;
        for row in &self.rows {
            w.write_row(row)?;
        }
        w.finish()
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        let bytes = self
            .write_to(Vec::new(), format, precision)
            .expect("writing to memory");
        String::from_utf8(bytes).expect("output is UTF-8")
    }

    /// Parses the [`Format::JsonLines`] encoding back.
    pub fn parse_json_lines(text: &str) -> Result<Self> {
        let mut record = OutputRecord::default();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let obj: Map<String, Value> = serde_json::from_str(line)
                .map_err(|e| Error::Io(format!("line {}: {e}", lineno + 1)))?;
            let keys: Vec<String> = obj.keys().cloned().collect();
            if record.columns.is_empty() {
                record.columns = keys;
            } else if keys != record.columns {
                return Err(Error::Io(format!("line {}: column mismatch", lineno + 1)));
            }
            let row = obj
                .into_iter()
                .map(|(_, v)| match v {
                    Value::Null => Field::Null,
                    Value::Number(num) => match (num.as_i64(), num.as_u64(), num.as_f64()) {
                        (Some(i), _, _) => Field::Int(i128::from(i)),
                        (_, Some(u), _) => Field::Int(i128::from(u)),
                        (_, _, Some(f)) => Field::Float(f),
                        _ => Field::Null,
                    },
                    Value::String(s) => match s.as_str() {
                        "inf" => Field::Float(f64::INFINITY),
                        "-inf" => Field::Float(f64::NEG_INFINITY),
                        "nan" => Field::Float(f64::NAN),
                        _ => Field::Text(s),
                    },
                    Value::Bool(b) => Field::Text(b.to_string()),
                    other => Field::Text(other.to_string()),
                })
                .collect();
            record.rows.push(row);
        }
        Ok(record)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.145_833_333, 6), "0.145833");
        assert_eq!(format_significant(1.0, 6), "1.00000");
        assert_eq!(format_significant(0.0, 3), "0.00");
        assert_eq!(format_significant(123_456.7, 6), "123457");
        assert_eq!(format_significant(1_234_567.0, 6), "1.23457e6");
        assert_eq!(format_significant(0.000_012_345_67, 4), "0.00001235");
        assert_eq!(format_significant(1.234e-7, 3), "1.23e-7");
        assert_eq!(format_significant(9.999_999_6, 6), "10.0000");
        assert_eq!(format_significant(-0.5, 2), "-0.50");
        assert_eq!(format_significant(f64::INFINITY, 6), "inf");
    }

    #[test]
    fn ties_round_to_even() {
        // exactly representable ties
        assert_eq!(format_significant(0.125, 2), "0.12");
        assert_eq!(format_significant(0.375, 2), "0.38");
        assert_eq!(format_significant(2.5, 1), "2");
        assert_eq!(format_significant(3.5, 1), "4");
    }

    fn sample() -> OutputRecord {
        let mut r = OutputRecord::new(["law", "n", "mad", "note"]);
        r.push(vec![
            "model".into(),
            212u64.into(),
            0.001_234_5.into(),
            Field::Null,
        ]);
        r.push(vec![
            "hill".into(),
            Field::Null,
            f64::INFINITY.into(),
            "a,\"b\"".into(),
        ]);
        r.push(vec![
            "uniform".into(),
            7u64.into(),
            100_000.0.into(),
            "x".into(),
        ]);
        r
    }

    #[test]
    fn csv_and_table_layout() {
        let csv = sample().render(Format::Csv, 3);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "law,n,mad,note");
        assert_eq!(lines[1], "model,212,0.00123,");
        assert_eq!(lines[2], "hill,,inf,\"a,\"\"b\"\"\"");
        let table = sample().render(Format::Table, 3);
        let widths: Vec<usize> = table.lines().map(str::len).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn json_lines_round_trip_is_byte_identical() {
        for precision in [3, 6, 17] {
            let first = sample().render(Format::JsonLines, precision);
            let parsed = OutputRecord::parse_json_lines(&first).unwrap();
            assert_eq!(parsed.columns, sample().columns);
            assert_eq!(parsed.render(Format::JsonLines, precision), first);
        }
    }
}
