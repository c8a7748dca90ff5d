//! Streaming document sources: a directory of `.txt` files or a JSON-lines
//! file of `{"id": ..., "text": ...}` objects. Documents are read one at a
//! time, so memory does not grow with corpus size.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

/// A per-document read failure. The stream continues after it.
#[derive(Debug)]
pub struct DocumentError {
    /// File path or `path:line` of the failed record.
    pub location: String,
    pub source: io::Error,
}

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.source)
    }
}

impl std::error::Error for DocumentError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

pub type DocumentResult = std::result::Result<Document, DocumentError>;

/// Opens `path` as a corpus. Fails only if the path itself cannot be opened
/// or listed; individual bad documents surface as stream items.
pub fn open(path: &Path) -> io::Result<Box<dyn Iterator<Item = DocumentResult>>> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "txt"))
            .collect();
        files.sort();
        Ok(Box::new(files.into_iter().map(read_text_file)))
    } else {
        let reader = BufReader::new(File::open(path)?);
        Ok(Box::new(JsonLines::new(reader, path.display().to_string())))
    }
}

fn read_text_file(path: PathBuf) -> DocumentResult {
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    fs::read_to_string(&path)
        .map(|text| Document { id, text })
        .map_err(|source| DocumentError {
            location: path.display().to_string(),
            source,
        })
}

#[derive(Deserialize)]
struct RawRecord {
    id: serde_json::Value,
    text: String,
}

/// Iterator over the records of a JSON-lines corpus. Blank lines are skipped.
pub struct JsonLines<R> {
    reader: R,
    name: String,
    line: usize,
    buf: String,
}

impl<R: BufRead> JsonLines<R> {
    pub fn new(reader: R, name: String) -> Self {
        JsonLines {
            reader,
            name,
            line: 0,
            buf: String::new(),
        }
    }

    fn error(&self, source: io::Error) -> DocumentError {
        DocumentError {
            location: format!("{}:{}", self.name, self.line),
            source,
        }
    }
}

impl<R: BufRead> Iterator for JsonLines<R> {
    type Item = DocumentResult;

    fn next(&mut self) -> Option<DocumentResult> {
        loop {
            self.buf.clear();
            self.line += 1;
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(self.error(e))),
            }
            let line = self.buf.trim();
            if line.is_empty() {
                continue;
            }
            let rec = match serde_json::from_str::<RawRecord>(line) {
                Ok(r) => r,
                Err(e) => return Some(Err(self.error(io::Error::new(io::ErrorKind::InvalidData, e)))),
            };
            let id = match rec.id {
                serde_json::Value::String(s) => s,
                serde_json::Value::Number(n) => n.to_string(),
                other => {
                    let msg = format!("id must be a string or number, got {other}");
                    return Some(Err(self.error(io::Error::new(io::ErrorKind::InvalidData, msg))));
                }
            };
            return Some(Ok(Document { id, text: rec.text }));
        }
    }
}
