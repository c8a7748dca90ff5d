//! Concept-to-concept similarity over learned context embeddings.

use std::cmp::Ordering;

use super::ConceptDatabase;
use crate::embedding::cosine;
use crate::error::{Error, Result};

impl ConceptDatabase {
    fn combined(&self, cui: &str) -> Result<Vec<f64>> {
        let rec = self
            .get(cui)
            .ok_or_else(|| Error::UnknownConcept(cui.to_owned()))?;
        rec.combined_embedding()
            .ok_or_else(|| Error::Untrained(cui.to_owned()))
    }

    /// Cosine similarity of the two concepts' combined embeddings.
    pub fn concept_similarity(&self, a: &str, b: &str) -> Result<f64> {
        Ok(cosine(&self.combined(a)?, &self.combined(b)?))
    }

    /// The `k` concepts closest to `cui`, optionally restricted to one
    /// semantic type. Descending similarity, ties by CUI.
    pub fn most_similar(
        &self,
        cui: &str,
        k: usize,
        type_filter: Option<&str>,
    ) -> Result<Vec<(String, f64)>> {
        let query = self.combined(cui)?;
        Ok(self.rank(&query, k, type_filter, &[cui]))
    }

    /// Ranks concepts by cosine to `pos1 - neg + pos2`, excluding the inputs.
    pub fn analogy(&self, pos1: &str, neg: &str, pos2: &str, k: usize) -> Result<Vec<(String, f64)>> {
        let a = self.combined(pos1)?;
        let b = self.combined(neg)?;
        let c = self.combined(pos2)?;
        let query: Vec<f64> = a
            .iter()
            .zip(&b)
            .zip(&c)
            .map(|((x, y), z)| (x - y) + z)
            .collect();
        Ok(self.rank(&query, k, None, &[pos1, neg, pos2]))
    }

    fn rank(
        &self,
        query: &[f64],
        k: usize,
        type_filter: Option<&str>,
        exclude: &[&str],
    ) -> Vec<(String, f64)> {
        if k == 0 {
            return Vec::new();
        }
        let mut scored: Vec<(&str, f64)> = crate::parallel::filter_map_slice(&self.concepts, |c| {
            if exclude.contains(&c.cui.as_str()) {
                return None;
            }
            if type_filter.is_some() && c.semantic_type.as_deref() != type_filter {
                return None;
            }
            let emb = c.combined_embedding()?;
            Some((c.cui.as_str(), cosine(query, &emb)))
        });
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.0.cmp(b.0))
        });
        scored.truncate(k);
        scored.into_iter().map(|(c, s)| (c.to_owned(), s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::Lemmatizer;

    fn cdb_with(embs: &[(&str, Vec<f64>, Option<&str>)]) -> ConceptDatabase {
        let mut cdb = ConceptDatabase::new(Lemmatizer::Identity);
        for (cui, e, sem) in embs {
            cdb.add_concept(cui, &format!("name {cui}"), *sem, None).unwrap();
            cdb.set_embeddings(cui, Some(e.clone()), Some(e.clone()), 5).unwrap();
        }
        cdb
    }

    #[test]
    fn self_and_orthogonal() {
        let cdb = cdb_with(&[("A", vec![1.0, 2.0, 0.0], None), ("B", vec![0.0, 0.0, 3.0], None)]);
        assert!((cdb.concept_similarity("A", "A").unwrap() - 1.0).abs() < 1e-9);
        assert!(cdb.concept_similarity("A", "B").unwrap().abs() < 1e-9);
        assert!(
            (cdb.concept_similarity("A", "B").unwrap() - cdb.concept_similarity("B", "A").unwrap())
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn combined_is_mean_of_long_and_short() {
        let mut cdb = cdb_with(&[("A", vec![1.0, 0.0], None), ("B", vec![1.0, 1.0], None)]);
        cdb.set_embeddings("A", Some(vec![2.0, 0.0]), Some(vec![0.0, 2.0]), 3).unwrap();
        assert!((cdb.concept_similarity("A", "B").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn untrained_errors() {
        let mut cdb = cdb_with(&[("A", vec![1.0, 0.0], None)]);
        cdb.add_concept("U", "untrained thing", None, None).unwrap();
        assert!(matches!(cdb.concept_similarity("A", "U"), Err(Error::Untrained(_))));
        assert!(matches!(cdb.most_similar("U", 3, None), Err(Error::Untrained(_))));
        assert!(matches!(cdb.most_similar("nope", 3, None), Err(Error::UnknownConcept(_))));
    }

    #[test]
    fn most_similar_contract() {
        let cdb = cdb_with(&[("A", vec![1.0, 0.0], None), ("B", vec![0.5, 0.5], None)]);
        assert!(cdb.most_similar("A", 0, None).unwrap().is_empty());
        let r = cdb.most_similar("A", 5, None).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, "B");

        let cdb = cdb_with(&[
            ("A", vec![1.0, 2.0, 3.0], Some("T1")),
            ("C", vec![0.0, 1.0, 0.0], Some("T1")),
            ("B", vec![1.0, 2.0, 3.0], Some("T2")),
            ("D", vec![3.0, 2.0, 1.0], Some("T1")),
            ("E", vec![3.0, 2.0, 1.0], Some("T1")),
        ]);
        let r = cdb.most_similar("A", 8, None).unwrap();
        assert_eq!(r[0].0, "B");
        assert!((r[0].1 - 1.0).abs() < 1e-12);
        let order: Vec<&str> = r.iter().map(|(c, _)| c.as_str()).collect();
        assert_eq!(order, ["B", "D", "E", "C"]);
        let r = cdb.most_similar("A", 8, Some("T1")).unwrap();
        let order: Vec<&str> = r.iter().map(|(c, _)| c.as_str()).collect();
        assert_eq!(order, ["D", "E", "C"]);
    }

    #[test]
    fn analogy_kidney_heart() {
        let cdb = cdb_with(&[
            ("KidneyFailure", vec![1.0, 1.0, 0.0], None),
            ("Kidney", vec![1.0, 0.0, 0.0], None),
            ("Heart", vec![0.0, 0.0, 1.0], None),
            ("HeartFailure", vec![0.0, 1.0, 1.0], None),
        ]);
        let r = cdb.analogy("KidneyFailure", "Kidney", "Heart", 3).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, "HeartFailure");
        assert!((r[0].1 - 1.0).abs() < 1e-12);
        assert!(cdb.analogy("KidneyFailure", "Kidney", "Heart", 0).unwrap().is_empty());
    }

    #[test]
    fn analogy_cancellation_matches_most_similar() {
        let cdb = cdb_with(&[
            ("A", vec![0.3, 1.0, -0.2], None),
            ("B", vec![1.0, 0.1, 0.0], None),
            ("C", vec![0.2, 0.2, 0.9], None),
            ("D", vec![-0.5, 0.4, 0.4], None),
            ("E", vec![0.9, 0.9, 0.1], None),
        ]);
        let via_analogy = cdb.analogy("A", "A", "B", 10).unwrap();
        let expected: Vec<(String, f64)> = cdb
            .most_similar("B", 10, None)
            .unwrap()
            .into_iter()
            .filter(|(c, _)| c != "A")
            .collect();
        assert_eq!(via_analogy, expected);
    }
}
