//! Line-oriented records: one JSON object per line, or CSV with a header
//! row whenever the set of fields changes.

use std::io::{self, BufWriter, ErrorKind, Stdout, Write};

use num_bigint::BigInt;
use serde_json::Value;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Sink {
    format: Format,
    header: Option<Vec<String>>,
    out: BufWriter<Stdout>,
}

/// Integers as decimal strings, so no consumer truncates them.
pub fn ints(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn cell(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items
            .iter()
            .map(|i| match i {
                Value::Array(_) => cell(i).replace(' ', ";"),
                other => cell(other),
            })
            .collect::<Vec<_>>()
            .join(" "),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

fn io_failure(e: io::Error) -> Failure {
    if e.kind() == ErrorKind::BrokenPipe {
        // the reader went away; nothing left to report
        std::process::exit(0);
    }
    Failure::Usage(format!("writing output: {e}"))
}

impl Sink {
    pub fn new(format: Format) -> Self {
        Sink {
            format,
            header: None,
            out: BufWriter::new(io::stdout()),
        }
    }

    pub fn emit(&mut self, record: Value) -> Result<(), Failure> {
        let Value::Object(fields) = &record else {
            unreachable!("records are objects");
        };
        match self.format {
            Format::Json => writeln!(self.out, "{record}").map_err(io_failure),
            Format::Csv => {
                let keys: Vec<String> = fields.keys().cloned().collect();
                if self.header.as_ref() != Some(&keys) {
                    writeln!(self.out, "{}", keys.join(",")).map_err(io_failure)?;
                    self.header = Some(keys);
                }
                let row: Vec<String> = fields.values().map(cell).collect();
                writeln!(self.out, "{}", row.join(",")).map_err(io_failure)
            }
        }
    }

    pub fn finish(&mut self) -> Result<(), Failure> {
        self.out.flush().map_err(io_failure)
    }
}
