//! Versioned output: a header line describing the run, then one record per
//! row, either as CSV or as JSON lines.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::failure::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

enum Body {
    Csv(csv::Writer<Box<dyn Write>>),
    Json(Box<dyn Write>),
}

pub struct Sink {
    body: Body,
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("cannot write output: {e}"))
}

impl Sink {
    /// `header` gets `schema` and `version` keys added in front.
    pub fn open(path: Option<&Path>, format: Format, schema: &str, header: Value) -> Result<Sink, Failure> {
        let mut out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_failure)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let mut full = serde_json::Map::new();
        full.insert("schema".into(), Value::from(format!("fig8.{schema}")));
        full.insert("version".into(), Value::from(SCHEMA_VERSION));
        if let Value::Object(rest) = header {
            full.extend(rest);
        }
        let line = Value::Object(full).to_string();
        let body = match format {
            Format::Csv => {
                writeln!(out, "# {line}").map_err(io_failure)?;
                Body::Csv(csv::Writer::from_writer(out))
            }
            Format::Json => {
                writeln!(out, "{line}").map_err(io_failure)?;
                Body::Json(out)
            }
        };
        Ok(Sink { body })
    }

    pub fn row<S: Serialize>(&mut self, row: &S) -> Result<(), Failure> {
        match &mut self.body {
            Body::Csv(w) => w.serialize(row).map_err(io_failure),
            Body::Json(w) => {
                let line = serde_json::to_string(row).map_err(io_failure)?;
                writeln!(w, "{line}").map_err(io_failure)
            }
        }
    }

    pub fn finish(self) -> Result<(), Failure> {
        match self.body {
            Body::Csv(mut w) => w.flush().map_err(io_failure),
            Body::Json(mut w) => w.flush().map_err(io_failure),
        }
    }
}
