use std::io::Read;

use super::ConceptDatabase;
use crate::error::{Error, Result};
use crate::normalize::Lemmatizer;

const HEADER: [&str; 4] = ["cui", "name", "semantic_type", "abbrev"];

/// Outcome of a CSV import.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportReport {
    pub rows: usize,
    pub rejected: usize,
    /// Line numbers and reasons of rejected rows.
    pub rejections: Vec<(usize, String)>,
}

impl ConceptDatabase {
    /// Builds a database from `cui,name,semantic_type,abbrev` rows.
    ///
    /// Rows whose names fail cleanup are counted, not fatal. A missing
    /// header or a row with the wrong number of columns is fatal.
    pub fn import_csv<R: Read>(source: R, lemmatizer: Lemmatizer) -> Result<(Self, ImportReport)> {
        let mut cdb = ConceptDatabase::new(lemmatizer);
        let report = cdb.extend_from_csv(source)?;
        Ok((cdb, report))
    }

    pub fn extend_from_csv<R: Read>(&mut self, source: R) -> Result<ImportReport> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(false)
            .from_reader(source);
        let mut report = ImportReport::default();
        let mut records = reader.records();
        match records.next() {
            Some(Ok(h)) if h.iter().map(str::trim).eq(HEADER) => {}
            Some(Ok(_)) | None => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("expected header `{}`", HEADER.join(",")),
                })
            }
            Some(Err(e)) => return Err(csv_error(e)),
        }
        for rec in records {
            let rec = rec.map_err(csv_error)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            report.rows += 1;
            let abbrev = match rec[3].trim() {
                "" => None,
                "0" => Some(false),
                "1" => Some(true),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("abbrev must be 0, 1 or empty, found {other:?}"),
                    })
                }
            };
            let sem = Some(rec[2].trim()).filter(|s| !s.is_empty());
            if let Err(e) = self.add_concept(rec[0].trim(), &rec[1], sem, abbrev) {
                report.rejected += 1;
                report.rejections.push((line, e.to_string()));
            }
        }
        Ok(report)
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.kind() {
        csv::ErrorKind::Io(_) => match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            _ => unreachable!(),
        },
        csv::ErrorKind::UnequalLengths { pos, expected_len, len } => Error::Parse {
            line: pos.as_ref().map_or(line, |p| p.line() as usize),
            message: format!("expected {expected_len} columns, found {len}"),
        },
        _ => Error::Parse {
            line,
            message: e.to_string(),
        },
    }
}
