//! Word list with counts and optional dense vectors.
//!
//! The vocabulary serves two purposes: spell checking (is a word known, how
//! frequent is it) and context math (word vectors for context embeddings and
//! the frequency-weighted negative sampler).

mod sampler;

use rustc_hash::FxHashMap as HashMap;
use std::io::{BufRead, Write};

pub use sampler::NegativeSampler;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WordEntry {
    pub word: String,
    pub count: u64,
    pub vector: Option<Vec<f32>>,
}

#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    entries: Vec<WordEntry>,
    index: HashMap<String, usize>,
    dim: usize,
    total_count: u64,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces a word. A replaced word keeps its original position.
    pub fn insert(&mut self, word: &str, count: u64, vector: Option<Vec<f32>>) -> Result<()> {
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(Error::Config(format!("invalid vocabulary word {word:?}")));
        }
        if count == 0 {
            return Err(Error::Config(format!("word {word:?} has zero count")));
        }
        if let Some(v) = &vector {
            if v.is_empty() {
                return Err(Error::Config(format!("word {word:?} has an empty vector")));
            }
            if self.dim == 0 {
                self.dim = v.len();
            } else if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        let entry = WordEntry {
            word: word.to_owned(),
            count,
            vector,
        };
        match self.index.get(word) {
            Some(&i) => {
                self.total_count -= self.entries[i].count;
                self.entries[i] = entry;
            }
            None => {
                self.index.insert(word.to_owned(), self.entries.len());
                self.entries.push(entry);
            }
        }
        self.total_count += count;
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&WordEntry> {
        self.index.get(word).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn count(&self, word: &str) -> u64 {
        self.get(word).map_or(0, |e| e.count)
    }

    pub fn vector(&self, word: &str) -> Option<&[f32]> {
        self.get(word).and_then(|e| e.vector.as_deref())
    }

    /// Vector dimension, 0 when no word carries a vector.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in insertion order.
    pub fn entries(&self) -> &[WordEntry] {
        &self.entries
    }

    /// Reads `word<TAB>count[<TAB>v1 v2 ... vD]` lines.
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut vocab = Vocabulary::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 && fields.len() != 3 {
                return Err(parse_error(
                    line_no,
                    format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
                ));
            }
            let count: u64 = fields[1]
                .trim()
                .parse()
                .map_err(|_| parse_error(line_no, format!("invalid count {:?}", fields[1])))?;
            let vector = match fields.get(2) {
                Some(raw) => Some(
                    raw.split_whitespace()
                        .map(|x| x.parse::<f32>())
                        .collect::<std::result::Result<Vec<f32>, _>>()
                        .map_err(|_| parse_error(line_no, "non-numeric vector component".into()))?,
                ),
                None => None,
            };
            match vocab.insert(fields[0], count, vector) {
                Ok(()) => {}
                Err(Error::DimensionMismatch { expected, found }) => {
                    return Err(parse_error(
                        line_no,
                        format!("vector dimension {found} differs from dimension {expected}"),
                    ))
                }
                Err(e) => return Err(parse_error(line_no, e.to_string())),
            }
        }
        Ok(vocab)
    }

    pub fn save<W: Write>(&self, mut writer: W) -> Result<()> {
        for e in &self.entries {
            write!(writer, "{}\t{}", e.word, e.count)?;
            if let Some(v) = &e.vector {
                writer.write_all(b"\t")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        writer.write_all(b" ")?;
                    }
                    write!(writer, "{x}")?;
                }
            }
            writer.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Relative frequency `count / total_count`; 0 for unknown words.
    pub fn word_frequency(&self, word: &str) -> Result<f64> {
        if self.total_count == 0 {
            return Err(Error::EmptyVocabulary);
        }
        Ok(self.count(word) as f64 / self.total_count as f64)
    }

    /// Probability of drawing `word` as a negative sample: frequency raised
    /// to 3/4, normalized over words that carry vectors.
    pub fn sampling_probability(&self, word: &str) -> Result<f64> {
        let z: f64 = self.sampling_weights().map(|(_, w)| w).sum();
        if z == 0.0 {
            return Err(Error::NoVectoredWords);
        }
        match self.get(word) {
            Some(e) if e.vector.is_some() => Ok(self.sampling_weight(e.count) / z),
            _ => Ok(0.0),
        }
    }

    pub fn negative_sampler(&self, seed: u64) -> Result<NegativeSampler<'_>> {
        NegativeSampler::new(self, seed)
    }

    fn sampling_weight(&self, count: u64) -> f64 {
        (count as f64 / self.total_count as f64).powf(0.75)
    }

    /// (entry index, unnormalized weight) for every vectored word.
    fn sampling_weights(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.vector.is_some())
            .map(|(i, e)| (i, self.sampling_weight(e.count)))
    }
}

fn parse_error(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}
