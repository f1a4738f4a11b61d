// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::Result;
use std::fmt::Write as _;
use std::path::Path;

/// Formats like C's `%.9g`.
pub fn fmt_g9(x: f64) -> String {
    const P: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // Exponent after rounding to P significant digits.
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= P {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (P - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// In-memory CSV with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&fmt_g9(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Writes `table` to `path` and a gnuplot-style legend to `path.meta`.
pub fn write_csv(path: &Path, table: &CsvTable, description: &str) -> Result<()> {
    std::fs::write(path, table.to_csv_string())?;
    write_meta(path, &table.columns, description)
}

pub fn write_meta(data_path: &Path, columns: &[String], description: &str) -> Result<()> {
    let mut meta = String::new();
    let file = data_path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    writeln!(meta, "# {file}").unwrap();
    writeln!(meta, "# {description}").unwrap();
    for (i, c) in columns.iter().enumerate() {
        writeln!(meta, "# column {}: {c}", i + 1).unwrap();
    }
    let mut p = data_path.as_os_str().to_owned();
    p.push(".meta");
    std::fs::write(p, meta)?;
    Ok(())
}
