//! CSV and gnuplot data files.

use std::io::{Read, Write};
use std::path::Path;

use hermite_scaling::experiment::ConvergenceRecord;

use crate::error::{CliError, CliResult};

pub const CSV_HEADER: [&str; 6] = ["n", "beta", "error", "e_spatial", "e_frequency", "e_hermite"];

/// Full-precision scientific notation; 17 significant digits round-trip.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(path: &Path, source: csv::Error) -> CliError {
    CliError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_csv<W: Write>(out: W, records: &[ConvergenceRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let b = &r.breakdown;
        w.write_record([
            r.n.to_string(),
            sci(r.beta),
            sci(r.error),
            sci(b.spatial),
            sci(b.frequency),
            sci(b.hermite),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[ConvergenceRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// One CSV row as read back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub n: usize,
    pub beta: f64,
    pub error: f64,
    pub e_spatial: f64,
    pub e_frequency: f64,
    pub e_hermite: f64,
}

impl Row {
    pub fn total(&self) -> f64 {
        self.e_spatial + self.e_frequency + self.e_hermite
    }
}

pub fn read_csv<R: Read>(input: R, path: &Path) -> CliResult<Vec<Row>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Usage(format!(
            "{}: header must be `{}`",
            path.display(),
            CSV_HEADER.join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let bad = |col: &str| {
            CliError::Usage(format!(
                "{}: bad {col} in `{}`",
                path.display(),
                rec.iter().collect::<Vec<_>>().join(",")
            ))
        };
        let f = |i: usize| rec[i].trim().parse::<f64>().map_err(|_| bad(CSV_HEADER[i]));
        rows.push(Row {
            n: rec[0].trim().parse().map_err(|_| bad("n"))?,
            beta: f(1)?,
            error: f(2)?,
            e_spatial: f(3)?,
            e_frequency: f(4)?,
            e_hermite: f(5)?,
        });
    }
    Ok(rows)
}

pub fn read_csv_file(path: &Path) -> CliResult<Vec<Row>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_csv(file, path)
}

pub fn write_csv_file(path: &Path, records: &[ConvergenceRecord]) -> CliResult<()> {
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    write_csv(std::io::BufWriter::new(file), records).map_err(|e| csv_error(path, e))
}

/// Whitespace-separated columns under a `#` header; blocks are separated by
/// two blank lines so gnuplot can address them with `index`.
#[derive(Debug, Default)]
pub struct DataFile {
    text: String,
}

impl DataFile {
    pub fn new(comment: &str, columns: &[&str]) -> Self {
        let mut text = String::new();
        for line in comment.lines() {
            text.push_str("# ");
            text.push_str(line);
            text.push('\n');
        }
        text.push_str("# ");
        text.push_str(&columns.join(" "));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| sci(*v)).collect();
        self.text.push_str(&cells.join(" "));
        self.text.push('\n');
    }

    pub fn block(&mut self, label: &str) {
        if !self.text.ends_with("\n\n\n") {
            self.text.push_str("\n\n");
        }
        self.text.push_str("# ");
        self.text.push_str(label);
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, &self.text).map_err(|e| CliError::io(path, e))
    }
}

/// The records as a data file with one row per `N`.
pub fn records_data(comment: &str, records: &[ConvergenceRecord]) -> DataFile {
    let mut d = DataFile::new(comment, &CSV_HEADER);
    for r in records {
        let b = &r.breakdown;
        d.row(&[r.n as f64, r.beta, r.error, b.spatial, b.frequency, b.hermite]);
    }
    d
}
