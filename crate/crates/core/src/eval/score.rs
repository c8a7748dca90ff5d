use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jsonl::AnnotatedDocument;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CuiScore {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EvalReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of gold annotations.
    pub support: usize,
    pub per_cui: BTreeMap<String, CuiScore>,
}

fn prf(tp: usize, fp: usize, fn_: usize) -> (f64, f64, f64) {
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let p = ratio(tp, tp + fp);
    let r = ratio(tp, tp + fn_);
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

type Key = (usize, usize, String);

/// Scores predictions against gold. A prediction is correct only if both its
/// character span and its CUI equal those of a not yet matched gold entry.
/// Gold documents absent from `predicted` count as fully missed.
pub fn score(gold: &[AnnotatedDocument], predicted: &[AnnotatedDocument]) -> Result<EvalReport> {
    let mut gold_by_doc: HashMap<&str, HashSet<Key>> = HashMap::new();
    for doc in gold {
        let set = gold_by_doc.entry(doc.id.as_str()).or_default();
        for a in &doc.annotations {
            if !set.insert((a.start, a.end, a.cui.clone())) {
                return Err(Error::Format(format!(
                    "duplicate gold annotation {}..{} {} in document {}",
                    a.start, a.end, a.cui, doc.id
                )));
            }
        }
    }
    let mut counts: BTreeMap<String, [usize; 3]> = BTreeMap::new();
    let mut matched: HashMap<&str, HashSet<Key>> = HashMap::new();
    for doc in predicted {
        let Some(g) = gold_by_doc.get(doc.id.as_str()) else {
            return Err(Error::UnknownDocument(doc.id.clone()));
        };
        let m = matched.entry(doc.id.as_str()).or_default();
        let mut anns: Vec<_> = doc.annotations.iter().collect();
        anns.sort_by_key(|a| (a.start, a.end));
        for a in anns {
            let key = (a.start, a.end, a.cui.clone());
            let c = counts.entry(a.cui.clone()).or_default();
            if g.contains(&key) && m.insert(key) {
                c[0] += 1;
            } else {
                c[1] += 1;
            }
        }
    }
    for doc in gold {
        let m = matched.get(doc.id.as_str());
        for a in &doc.annotations {
            if !m.is_some_and(|m| m.contains(&(a.start, a.end, a.cui.clone()))) {
                counts.entry(a.cui.clone()).or_default()[2] += 1;
            }
        }
    }

    let mut report = EvalReport::default();
    for (cui, [tp, fp, fn_]) in counts {
        report.true_positives += tp;
        report.false_positives += fp;
        report.false_negatives += fn_;
        let (precision, recall, f1) = prf(tp, fp, fn_);
        report.per_cui.insert(
            cui,
            CuiScore {
                true_positives: tp,
                false_positives: fp,
                false_negatives: fn_,
                precision,
                recall,
                f1,
                support: tp + fn_,
            },
        );
    }
    let (p, r, f) = prf(report.true_positives, report.false_positives, report.false_negatives);
    report.precision = p;
    report.recall = r;
    report.f1 = f;
    report.support = report.true_positives + report.false_negatives;
    Ok(report)
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.per_cui.keys().map(|k| k.len()).max().unwrap_or(0).max(5);
        writeln!(
            f,
            "{:<width$} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9} {:>8}",
            "cui", "tp", "fp", "fn", "precision", "recall", "f1", "support"
        )?;
        let row = |f: &mut fmt::Formatter<'_>, name: &str, s: &CuiScore| {
            writeln!(
                f,
                "{:<width$} {:>6} {:>6} {:>6} {:>9.4} {:>9.4} {:>9.4} {:>8}",
                name,
                s.true_positives,
                s.false_positives,
                s.false_negatives,
                s.precision,
                s.recall,
                s.f1,
                s.support
            )
        };
        for (cui, s) in &self.per_cui {
            row(f, cui, s)?;
        }
        let total = CuiScore {
            true_positives: self.true_positives,
            false_positives: self.false_positives,
            false_negatives: self.false_negatives,
            precision: self.precision,
            recall: self.recall,
            f1: self.f1,
            support: self.support,
        };
        row(f, "total", &total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jsonl::SpanAnnotation;

    fn doc(id: &str, anns: &[(usize, usize, &str)]) -> AnnotatedDocument {
        AnnotatedDocument {
            id: id.into(),
            annotations: anns
                .iter()
                .map(|&(start, end, cui)| SpanAnnotation {
                    start,
                    end,
                    text: String::new(),
                    cui: cui.into(),
                    confidence: 1.0,
                })
                .collect(),
        }
    }

    #[test]
    fn identical_sets() {
        let g = [doc("a", &[(0, 5, "A"), (6, 8, "B")])];
        let r = score(&g, &g).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn empty_predictions() {
        let g = [doc("a", &[(0, 5, "A")])];
        let r = score(&g, &[]).unwrap();
        assert_eq!((r.precision, r.recall, r.f1, r.false_negatives), (0.0, 0.0, 0.0, 1));
    }

    #[test]
    fn cui_mismatch() {
        let r = score(&[doc("a", &[(0, 5, "A")])], &[doc("a", &[(0, 5, "B")])]).unwrap();
        assert_eq!((r.true_positives, r.false_positives, r.false_negatives), (0, 1, 1));
        assert_eq!(r.per_cui["A"].false_negatives, 1);
        assert_eq!(r.per_cui["B"].false_positives, 1);
    }

    #[test]
    fn duplicate_prediction_counts_once() {
        let r = score(&[doc("a", &[(0, 5, "A")])], &[doc("a", &[(0, 5, "A"), (0, 5, "A")])]).unwrap();
        assert_eq!((r.true_positives, r.false_positives, r.false_negatives), (1, 1, 0));
    }

    #[test]
    fn unknown_document() {
        assert!(matches!(
            score(&[doc("a", &[])], &[doc("z", &[])]),
            Err(Error::UnknownDocument(_))
        ));
    }

    #[test]
    fn duplicate_gold_rejected() {
        let g = [doc("a", &[(0, 5, "A"), (0, 5, "A")])];
        assert!(score(&g, &[]).is_err());
    }

    #[test]
    fn table_lists_total() {
        let g = [doc("a", &[(0, 5, "A")])];
        let text = score(&g, &g).unwrap().to_string();
        assert!(text.lines().last().unwrap().starts_with("total"));
    }
}
