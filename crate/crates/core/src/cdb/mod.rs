//! The concept database: concept records, the name index, learned context
//! embeddings and the co-occurrence matrix.

mod import;
mod index;
mod persist;
pub mod preprocess;
mod similarity;

use std::collections::BTreeSet;

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

pub use import::ImportReport;
pub use index::{NameIndex, NodeId};

use crate::cooc::CoocMatrix;
use crate::error::{Error, RejectReason, Result};
use crate::normalize::{tokenize, Lemmatizer};

pub const DEFAULT_MAX_NAME_WORDS: usize = 6;

/// A normalized concept name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NameKey {
    /// Match keys: lemmas of lowercased tokens, or the raw text for
    /// abbreviation-shaped tokens.
    pub tokens: Vec<String>,
    pub is_abbreviation: bool,
}

impl NameKey {
    pub fn display(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptRecord {
    pub cui: String,
    /// Distinct names in order of first appearance.
    pub names: Vec<NameKey>,
    /// How many source rows supplied each name, parallel to `names`.
    name_votes: Vec<u32>,
    pub semantic_type: Option<String>,
    pub embedding_long: Option<Vec<f64>>,
    pub embedding_short: Option<Vec<f64>>,
    /// Number of training mentions seen.
    pub train_count: u64,
}

impl ConceptRecord {
    fn new(cui: &str) -> Self {
        ConceptRecord {
            cui: cui.to_owned(),
            names: Vec::new(),
            name_votes: Vec::new(),
            semantic_type: None,
            embedding_long: None,
            embedding_short: None,
            train_count: 0,
        }
    }

    /// The name supplied by the most rows, earliest on ties.
    pub fn preferred_name(&self) -> &NameKey {
        let mut best = 0;
        for (i, v) in self.name_votes.iter().enumerate() {
            if *v > self.name_votes[best] {
                best = i;
            }
        }
        &self.names[best]
    }

    pub fn name_votes(&self) -> &[u32] {
        &self.name_votes
    }

    pub fn has_embedding(&self) -> bool {
        self.embedding_long.is_some() || self.embedding_short.is_some()
    }

    /// True when the concept may take part in disambiguation.
    pub fn is_trained(&self, min_train_count: u64) -> bool {
        self.has_embedding() && self.train_count >= min_train_count.max(1)
    }

    /// Mean of the long and short embeddings (whichever exist).
    pub fn combined_embedding(&self) -> Option<Vec<f64>> {
        match (&self.embedding_long, &self.embedding_short) {
            (Some(l), Some(s)) => Some(l.iter().zip(s).map(|(a, b)| 0.5 * (a + b)).collect()),
            (Some(v), None) | (None, Some(v)) => Some(v.clone()),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConceptDatabase {
    concepts: Vec<ConceptRecord>,
    by_cui: HashMap<String, u32>,
    index: NameIndex,
    /// Lowercased surface words of all names; the spell checker's targets.
    words: HashSet<String>,
    alphabet: Vec<char>,
    lemmatizer: Lemmatizer,
    max_name_words: usize,
    /// Embedding dimension, 0 until the first embedding exists.
    dim: usize,
    pub cooc: CoocMatrix,
}

impl Default for ConceptDatabase {
    fn default() -> Self {
        Self::new(Lemmatizer::default())
    }
}

impl ConceptDatabase {
    pub fn new(lemmatizer: Lemmatizer) -> Self {
        ConceptDatabase {
            concepts: Vec::new(),
            by_cui: HashMap::default(),
            index: NameIndex::default(),
            words: HashSet::default(),
            alphabet: Vec::new(),
            lemmatizer,
            max_name_words: DEFAULT_MAX_NAME_WORDS,
            dim: 0,
            cooc: CoocMatrix::default(),
        }
    }

    pub fn with_max_name_words(mut self, max: usize) -> Self {
        self.max_name_words = max;
        self
    }

    pub fn max_name_words(&self) -> usize {
        self.max_name_words
    }

    pub fn lemmatizer(&self) -> &Lemmatizer {
        &self.lemmatizer
    }

    /// Converts a raw name into its index keys (no length check).
    pub fn name_keys(&self, raw_name: &str) -> Vec<String> {
        let cleaned = preprocess::strip_trailing_group(raw_name);
        tokenize(cleaned)
            .into_iter()
            .map(|t| {
                if t.is_abbrev_shape {
                    t.raw
                } else {
                    self.lemmatizer.lemma(&t.form)
                }
            })
            .collect()
    }

    /// Cleans, normalizes and indexes one name of a concept, creating the
    /// concept on first sight.
    pub fn add_concept(
        &mut self,
        cui: &str,
        raw_name: &str,
        semantic_type: Option<&str>,
        abbrev_hint: Option<bool>,
    ) -> Result<()> {
        let cleaned = preprocess::strip_trailing_group(raw_name);
        let tokens = tokenize(cleaned);
        if tokens.is_empty() {
            return Err(reject(raw_name, RejectReason::Empty));
        }
        if tokens.len() > self.max_name_words {
            return Err(reject(
                raw_name,
                RejectReason::TooLong {
                    words: tokens.len(),
                    max: self.max_name_words,
                },
            ));
        }
        let is_abbreviation = preprocess::is_abbreviation(cleaned, abbrev_hint);
        let mut keys = Vec::with_capacity(tokens.len());
        for t in tokens {
            if t.is_abbrev_shape {
                keys.push(t.raw);
            } else {
                keys.push(self.lemmatizer.lemma(&t.form));
                if !self.words.contains(&t.form) {
                    self.alphabet.extend(t.form.chars());
                    self.words.insert(t.form);
                }
            }
        }
        self.alphabet.sort_unstable();
        self.alphabet.dedup();

        let idx = self.ensure_concept(cui);
        let record = &mut self.concepts[idx as usize];
        if record.semantic_type.is_none() {
            record.semantic_type = semantic_type.filter(|s| !s.is_empty()).map(str::to_owned);
        }
        let name = NameKey {
            tokens: keys,
            is_abbreviation,
        };
        match record.names.iter().position(|n| n.tokens == name.tokens) {
            Some(i) => {
                record.name_votes[i] += 1;
                record.names[i].is_abbreviation |= is_abbreviation;
            }
            None => {
                record.names.push(name.clone());
                record.name_votes.push(1);
            }
        }
        self.index.insert(&name.tokens, idx, is_abbreviation);
        Ok(())
    }

    fn ensure_concept(&mut self, cui: &str) -> u32 {
        if let Some(&i) = self.by_cui.get(cui) {
            return i;
        }
        let i = self.concepts.len() as u32;
        self.concepts.push(ConceptRecord::new(cui));
        self.by_cui.insert(cui.to_owned(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[ConceptRecord] {
        &self.concepts
    }

    pub fn concept(&self, idx: u32) -> &ConceptRecord {
        &self.concepts[idx as usize]
    }

    pub(crate) fn concept_mut(&mut self, idx: u32) -> &mut ConceptRecord {
        &mut self.concepts[idx as usize]
    }

    pub fn index_of(&self, cui: &str) -> Option<u32> {
        self.by_cui.get(cui).copied()
    }

    pub fn get(&self, cui: &str) -> Option<&ConceptRecord> {
        self.index_of(cui).map(|i| self.concept(i))
    }

    pub fn name_index(&self) -> &NameIndex {
        &self.index
    }

    /// Number of distinct indexed names.
    pub fn name_count(&self) -> usize {
        self.index.name_count()
    }

    pub fn words(&self) -> &HashSet<String> {
        &self.words
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Fails when the database already holds embeddings of another dimension.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != 0 && self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        Ok(())
    }

    pub(crate) fn set_dim(&mut self, dim: usize) {
        self.dim = dim;
    }

    /// CUIs whose name is exactly `tokens`, sorted.
    pub fn lookup_exact<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<&str> {
        if tokens.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<&str> = match self.index.find(tokens) {
            Some(n) => self
                .index
                .concepts(n)
                .iter()
                .map(|&i| self.concepts[i as usize].cui.as_str())
                .collect(),
            None => Vec::new(),
        };
        out.sort_unstable();
        out
    }

    /// True iff `tokens` is a proper prefix of some indexed name.
    pub fn is_prefix<S: AsRef<str>>(&self, tokens: &[S]) -> bool {
        self.index
            .find(tokens)
            .is_some_and(|n| self.index.has_extensions(n))
    }

    /// A name is unique when it maps to exactly one concept.
    pub fn is_unique<S: AsRef<str>>(&self, tokens: &[S]) -> bool {
        self.index
            .find(tokens)
            .is_some_and(|n| self.index.concepts(n).len() == 1)
    }

    /// Overwrites a concept's embeddings, e.g. from an external source.
    pub fn set_embeddings(
        &mut self,
        cui: &str,
        long: Option<Vec<f64>>,
        short: Option<Vec<f64>>,
        train_count: u64,
    ) -> Result<()> {
        let idx = self
            .index_of(cui)
            .ok_or_else(|| Error::UnknownConcept(cui.to_owned()))?;
        for v in long.iter().chain(short.iter()) {
            self.check_dim(v.len())?;
            self.dim = v.len();
        }
        let rec = self.concept_mut(idx);
        rec.embedding_long = long;
        rec.embedding_short = short;
        rec.train_count = train_count;
        Ok(())
    }

    /// Semantic types present, sorted.
    pub fn semantic_types(&self) -> BTreeSet<&str> {
        self.concepts
            .iter()
            .filter_map(|c| c.semantic_type.as_deref())
            .collect()
    }
}

fn reject(name: &str, reason: RejectReason) -> Error {
    Error::NameRejected {
        name: name.to_owned(),
        reason,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bracket_suffix_stripped() {
        let mut cdb = ConceptDatabase::default();
        cdb.add_concept("C0006826", "Cancer [Process]", None, None).unwrap();
        let c = cdb.get("C0006826").unwrap();
        assert_eq!(c.names[0].tokens, ["cancer"]);
        assert_eq!(c.preferred_name().tokens, ["cancer"]);
    }

    #[test]
    fn short_uppercase_is_abbreviation() {
        let mut cdb = ConceptDatabase::default();
        cdb.add_concept("C1", "HR", None, None).unwrap();
        let c = cdb.get("C1").unwrap();
        assert!(c.names[0].is_abbreviation);
        assert_eq!(c.names[0].tokens, ["HR"]);
    }

    #[test]
    fn too_long_rejected() {
        let mut cdb = ConceptDatabase::default();
        let err = cdb
            .add_concept("C2", "one two three four five six seven", None, None)
            .unwrap_err();
        assert!(matches!(
            err,
            Error::NameRejected {
                reason: RejectReason::TooLong { words: 7, max: 6 },
                ..
            }
        ));
        assert!(cdb.is_empty());
        let err = cdb.add_concept("C3", "--- []", None, None).unwrap_err();
        assert!(matches!(err, Error::NameRejected { reason: RejectReason::Empty, .. }));
    }

    #[test]
    fn lookups() {
        let mut cdb = ConceptDatabase::default();
        cdb.add_concept("C_kf", "kidney failure", None, None).unwrap();
        cdb.add_concept("C_hr", "HR", None, None).unwrap();
        cdb.add_concept("C_hour", "HR", None, None).unwrap();
        assert_eq!(cdb.lookup_exact(&["kidney", "failure"]), ["C_kf"]);
        assert_eq!(cdb.lookup_exact(&["HR"]), ["C_hour", "C_hr"]);
        assert!(cdb.lookup_exact(&["hr"]).is_empty());
        assert!(cdb.lookup_exact(&["zzz"]).is_empty());
        assert!(cdb.is_prefix(&["kidney"]));
        assert!(!cdb.is_prefix(&["kidney", "failure"]));
        assert!(!cdb.is_prefix(&["failure", "kidney"]));
        assert!(cdb.is_unique(&["kidney", "failure"]));
        assert!(!cdb.is_unique(&["HR"]));
    }

    #[test]
    fn names_are_lemmatized() {
        let mut cdb = ConceptDatabase::default();
        cdb.add_concept("C", "Failure of kidneys", None, None).unwrap();
        assert_eq!(cdb.lookup_exact(&["failure", "of", "kidney"]), ["C"]);
        assert!(cdb.words().contains("kidneys"));
    }

    #[test]
    fn preferred_name_votes() {
        let mut cdb = ConceptDatabase::default();
        cdb.add_concept("C", "tumour", None, None).unwrap();
        cdb.add_concept("C", "cancer", None, None).unwrap();
        assert_eq!(cdb.get("C").unwrap().preferred_name().tokens, ["tumour"]);
        cdb.add_concept("C", "Cancer", None, None).unwrap();
        assert_eq!(cdb.get("C").unwrap().preferred_name().tokens, ["cancer"]);
    }

    fn name_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
        (0..5usize, prop::collection::vec(0..4usize, 1..4))
    }

    proptest! {
        #[test]
        fn uniqueness_and_prefix_closure(names in prop::collection::vec(name_strategy(), 1..15)) {
            const WORDS: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
            let mut cdb = ConceptDatabase::new(Lemmatizer::Identity);
            let mut all: Vec<Vec<String>> = Vec::new();
            for (cui, words) in &names {
                let toks: Vec<String> = words.iter().map(|&w| WORDS[w].to_string()).collect();
                cdb.add_concept(&format!("C{cui}"), &toks.join(" "), None, None).unwrap();
                all.push(toks);
            }
            for toks in &all {
                // brute-force: which cuis carry exactly this name
                let owners: BTreeSet<String> = names
                    .iter()
                    .filter(|(_, w)| w.iter().map(|&i| WORDS[i]).eq(toks.iter().map(String::as_str)))
                    .map(|(c, _)| format!("C{c}"))
                    .collect();
                prop_assert_eq!(cdb.lookup_exact(toks).len(), owners.len());
                prop_assert_eq!(cdb.is_unique(toks), owners.len() == 1);
                for l in 1..toks.len() {
                    prop_assert!(cdb.is_prefix(&toks[..l]));
                }
            }
        }
    }
}
