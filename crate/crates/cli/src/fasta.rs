//! Plain FASTA reader: `>` starts a record, the header's first whitespace
//! token is the id, sequence lines are concatenated with whitespace removed.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use log::warn;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FastaError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    pub description: String,
    pub sequence: Vec<u8>,
}

impl FastaRecord {
    /// Class label: the part of the id after its last `|`, or the first
    /// description token when the id has no `|`.
    pub fn label(&self) -> Option<&str> {
        match self.id.rsplit_once('|') {
            Some((_, l)) if !l.is_empty() => Some(l),
            _ => self.description.split_whitespace().next(),
        }
    }
}

pub fn parse_fasta(path: impl AsRef<Path>) -> Result<Vec<FastaRecord>, FastaError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| FastaError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let records = read_fasta(BufReader::new(file)).map_err(|e| match e {
        FastaError::Io { source, .. } => FastaError::Io {
            path: path.display().to_string(),
            source,
        },
        other => other,
    })?;
    if records.is_empty() {
        warn!("{}: no FASTA records", path.display());
    }
    Ok(records)
}

pub fn read_fasta<R: BufRead>(reader: R) -> Result<Vec<FastaRecord>, FastaError> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (i, line) in reader.split(b'\n').enumerate() {
        let line = line.map_err(|source| FastaError::Io {
            path: String::new(),
            source,
        })?;
        let lineno = i + 1;
        let line = line.strip_suffix(b"\r").unwrap_or(&line);
        if let Some(header) = line.strip_prefix(b">") {
            let header = String::from_utf8_lossy(header);
            let header = header.trim();
            let (id, description) = match header.split_once(char::is_whitespace) {
                Some((id, rest)) => (id, rest.trim()),
                None => (header, ""),
            };
            if id.is_empty() {
                return Err(FastaError::Format {
                    line: lineno,
                    message: "record header has no id",
                });
            }
            records.push(FastaRecord {
                id: id.to_string(),
                description: description.to_string(),
                sequence: Vec::new(),
            });
        } else if let Some(rec) = records.last_mut() {
            rec.sequence
                .extend(line.iter().filter(|c| !c.is_ascii_whitespace()));
        } else if line.iter().any(|c| !c.is_ascii_whitespace()) {
            return Err(FastaError::Format {
                line: lineno,
                message: "sequence data before the first '>' header",
            });
        }
    }
    for r in records.iter().filter(|r| r.sequence.is_empty()) {
        warn!("record `{}` has an empty sequence", r.id);
    }
    Ok(records)
}
