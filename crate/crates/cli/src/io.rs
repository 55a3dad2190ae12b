//! Input parsing and JSON/CSV rendering.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use charvar::invariants::InvariantRecord;
use charvar::RepTuple;

use crate::verify::Report;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Reads a file, or standard input for `None` and `-`.
fn read_source(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
            Ok(s)
        }
    }
}

pub fn read_tuple(path: Option<&Path>, tol: f64) -> Result<RepTuple> {
    let s = read_source(path)?;
    Ok(RepTuple::from_json(&s, tol)?)
}

/// A flat invariant record as printed by `invariants`.
pub fn read_record(path: Option<&Path>) -> Result<Map<String, Value>> {
    let s = read_source(path)?;
    match serde_json::from_str(&s).context("parsing invariant record")? {
        Value::Object(m) => Ok(m),
        _ => anyhow::bail!("invariant record must be a JSON object"),
    }
}

pub struct Output {
    path: Option<PathBuf>,
    format: Format,
}

impl Output {
    pub fn new(path: Option<PathBuf>, format: Format) -> Self {
        Output { path, format }
    }

    pub fn text(&self, s: &str) -> Result<()> {
        match &self.path {
            Some(p) => fs::write(p, s).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(s.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }

    pub fn json<T: Serialize + ?Sized>(&self, v: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        self.text(&s)
    }

    pub fn tuple(&self, rho: &RepTuple) -> Result<()> {
        match self.format {
            Format::Json => {
                let mut s = rho.to_json();
                s.push('\n');
                self.text(&s)
            }
            Format::Csv => {
                let mut s = String::from("matrix,row,col,re,im\n");
                let n = rho.n();
                for (k, m) in rho.matrices().iter().enumerate() {
                    for (idx, z) in m.entries().iter().enumerate() {
                        writeln!(s, "{},{},{},{:e},{:e}", k + 1, idx / n, idx % n, z.re, z.im)?;
                    }
                }
                self.text(&s)
            }
        }
    }

    pub fn record(&self, rec: &InvariantRecord) -> Result<()> {
        match self.format {
            Format::Json => self.json(rec),
            Format::Csv => {
                let mut s = String::from("name,re,im\n");
                for (k, v) in &rec.entries {
                    writeln!(s, "{k},{:e},{:e}", v.re, v.im)?;
                }
                self.text(&s)
            }
        }
    }

    /// Numeric table; JSON renders it as an array of objects.
    pub fn table(&self, columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        match self.format {
            Format::Csv => {
                let mut s = columns.join(",");
                s.push('\n');
                for r in rows {
                    let cells: Vec<String> = r.iter().map(|x| format!("{x:e}")).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                self.text(&s)
            }
            Format::Json => {
                let objs: Vec<Map<String, Value>> = rows
                    .iter()
                    .map(|r| {
                        columns
                            .iter()
                            .zip(r)
                            .map(|(c, x)| (c.to_string(), Value::from(*x)))
                            .collect()
                    })
                    .collect();
                self.json(&objs)
            }
        }
    }

    pub fn reports(&self, reports: &[Report]) -> Result<()> {
        match self.format {
            Format::Json => {
                let all: Vec<Value> = reports.iter().map(Report::to_json).collect();
                self.json(&serde_json::json!({
                    "pass": reports.iter().all(|r| r.pass),
                    "suites": all,
                }))
            }
            Format::Csv => {
                let mut s = String::from("suite,pass,data\n");
                for r in reports {
                    // data is compact JSON; quote it and double inner quotes
                    let data = r.data.to_string().replace('"', "\"\"");
                    writeln!(s, "{},{},\"{data}\"", r.suite, r.pass)?;
                }
                self.text(&s)
            }
        }
    }
}
