//! The JSON-lines annotation format:
//! `{"id": str, "annotations": [{"start": int, "end": int, "text": str, "cui": str, "confidence": float}]}`
//! with one document per line, annotations sorted by start and confidences
//! written with six decimals.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::Annotation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanAnnotation {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub cui: String,
    pub confidence: f64,
}

impl From<&Annotation> for SpanAnnotation {
    fn from(a: &Annotation) -> Self {
        SpanAnnotation {
            start: a.start,
            end: a.end,
            text: a.text.clone(),
            cui: a.cui.clone(),
            confidence: a.confidence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedDocument {
    pub id: String,
    pub annotations: Vec<SpanAnnotation>,
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Writes one document line.
pub fn write_document<W: Write>(mut w: W, id: &str, annotations: &[SpanAnnotation]) -> Result<()> {
    write!(w, "{{\"id\":{},\"annotations\":[", json_string(id))?;
    for (i, a) in annotations.iter().enumerate() {
        if i > 0 {
            w.write_all(b",")?;
        }
        write!(
            w,
            "{{\"start\":{},\"end\":{},\"text\":{},\"cui\":{},\"confidence\":{:.6}}}",
            a.start,
            a.end,
            json_string(&a.text),
            json_string(&a.cui),
            a.confidence
        )?;
    }
    w.write_all(b"]}\n")?;
    Ok(())
}

/// Reads every document of an annotation file. Blank lines are skipped.
pub fn read_documents<R: BufRead>(reader: R) -> Result<Vec<AnnotatedDocument>> {
    let mut docs = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: AnnotatedDocument = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: n + 1,
            message: e.to_string(),
        })?;
        docs.push(doc);
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_six_decimals() {
        let anns = vec![SpanAnnotation {
            start: 3,
            end: 5,
            text: "H\"R".into(),
            cui: "C1".into(),
            confidence: 0.123456789,
        }];
        let mut out = Vec::new();
        write_document(&mut out, "d1", &anns).unwrap();
        write_document(&mut out, "d2", &[]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            r#"{"id":"d1","annotations":[{"start":3,"end":5,"text":"H\"R","cui":"C1","confidence":0.123457}]}"#
        );
        let back = read_documents(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].annotations[0].confidence, 0.123457);
        assert!(back[1].annotations.is_empty());
    }

    #[test]
    fn parse_error_has_line() {
        let err = read_documents("{\"id\":\"a\",\"annotations\":[]}\n{bad\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
