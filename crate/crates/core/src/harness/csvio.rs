//! Instance files: a header row `o1,...,od` and one row per alternative.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Alternative, DominatedPolicy, DuplicatePolicy, Instance};
use crate::number::{format_rational, parse_rational};

/// How strictly an input file is validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Dominated rows are an error naming the offending pair.
    #[default]
    Strict,
    /// Dominated rows are dropped with a warning.
    Lenient,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReadOptions {
    pub strictness: Strictness,
    pub duplicates: DuplicatePolicy,
}

/// Reads alternatives from CSV text. Values may be decimals or `p/q`.
pub fn read_points(reader: impl Read) -> Result<Vec<Alternative>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(Error::Input("empty file: expected a header row o1,...,od".into()));
    }
    let d = header.len();
    for (i, name) in header.iter().enumerate() {
        if name != format!("o{}", i + 1) {
            log::warn!("column {} is named '{name}', expected 'o{}'", i + 1, i + 1);
        }
    }
    let mut points = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != d {
            return Err(Error::Parse {
                line,
                message: format!("expected {d} values, found {}", record.len()),
            });
        }
        let coords = record
            .iter()
            .map(|field| {
                parse_rational(field).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        points.push(Alternative::new(coords));
    }
    if points.is_empty() {
        return Err(Error::Input("file has a header but no alternatives".into()));
    }
    Ok(points)
}

pub fn read_instance(reader: impl Read, name: &str, opts: ReadOptions) -> Result<Instance> {
    let points = read_points(reader)?;
    let dominated = match opts.strictness {
        Strictness::Strict => DominatedPolicy::Reject,
        Strictness::Lenient => DominatedPolicy::Filter,
    };
    Instance::builder(name)
        .dominated(dominated)
        .duplicates(opts.duplicates)
        .build(points)
}

/// Reads an instance file; the file stem becomes the instance name.
pub fn ingest_csv(path: &Path, opts: ReadOptions) -> Result<Instance> {
    let name = path
        .file_stem()
        .map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
    let file = File::open(path)?;
    read_instance(file, &name, opts)
}

/// Writes points with the standard header. Values are exact: terminating
/// decimals where possible, `p/q` otherwise.
pub fn write_points<'a>(writer: impl Write, d: usize, points: impl IntoIterator<Item = &'a Alternative>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record((1..=d).map(|i| format!("o{i}")))?;
    for p in points {
        w.write_record(p.coords().iter().map(format_rational))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_instance(inst: &Instance, writer: impl Write) -> Result<()> {
    write_points(writer, inst.dim(), inst.alternatives())
}

pub fn instance_to_csv(inst: &Instance) -> String {
    let mut buf = Vec::new();
    write_instance(inst, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8")
}
