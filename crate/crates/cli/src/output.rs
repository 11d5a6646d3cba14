//! Writers for CSV and JSON results.
//!
//! CSV files start with `#` comment lines carrying the schema tag and the
//! effective configuration, followed by a fixed header row. Every float is
//! written with 17 significant digits in scientific notation.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use gsearch_core::io::{format_f64, to_json_string};
use serde::Serialize;

use crate::error::CliResult;

pub fn open(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut w = open(out)?;
    writeln!(w, "{}", to_json_string(value, true)?)?;
    w.flush()?;
    Ok(())
}

/// A CSV table with its preamble.
pub struct CsvTable<'a, C: Serialize> {
    pub schema: &'a str,
    pub config: &'a C,
    pub header: &'a [&'a str],
    pub rows: Vec<Vec<String>>,
}

impl<C: Serialize> CsvTable<'_, C> {
    pub fn write(&self, out: Option<&Path>) -> CliResult<()> {
        let mut w = open(out)?;
        writeln!(w, "# schema: {}", self.schema)?;
        writeln!(w, "# config: {}", to_json_string(self.config, false)?)?;
        {
            let mut csv = csv::WriterBuilder::new().from_writer(&mut w);
            csv.write_record(self.header)?;
            for row in &self.rows {
                csv.write_record(row)?;
            }
            csv.flush()?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn num(x: f64) -> String {
    format_f64(x)
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(format_f64).unwrap_or_default()
}
