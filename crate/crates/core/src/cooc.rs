//! Sparse concept co-occurrence counts accumulated per text block.

use std::collections::HashMap;

use rustc_hash::FxHashMap;
use std::io::Write;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoocMode {
    /// Each distinct pair counts once per block.
    #[default]
    PerBlock,
    /// Every pair of mention instances with distinct concepts counts.
    PerOccurrence,
}

/// Symmetric counts keyed by unordered CUI pairs, stored under the smaller
/// CUI. Self-pairs are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoocMatrix {
    counts: FxHashMap<String, FxHashMap<String, u64>>,
    pairs: usize,
    mode: CoocMode,
}

fn ordered<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl CoocMatrix {
    pub fn new(mode: CoocMode) -> Self {
        CoocMatrix {
            counts: FxHashMap::default(),
            pairs: 0,
            mode,
        }
    }

    pub fn mode(&self) -> CoocMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: CoocMode) {
        self.mode = mode;
    }

    /// Number of distinct pairs.
    pub fn len(&self) -> usize {
        self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs == 0
    }

    pub fn add_pair(&mut self, a: &str, b: &str, n: u64) {
        if a == b || n == 0 {
            return;
        }
        let (a, b) = ordered(a, b);
        if !self.counts.contains_key(a) {
            self.counts.insert(a.to_owned(), FxHashMap::default());
        }
        let row = self.counts.get_mut(a).expect("inserted above");
        match row.get_mut(b) {
            Some(c) => *c += n,
            None => {
                row.insert(b.to_owned(), n);
                self.pairs += 1;
            }
        }
    }

    pub fn count(&self, a: &str, b: &str) -> u64 {
        let (a, b) = ordered(a, b);
        self.counts
            .get(a)
            .and_then(|row| row.get(b))
            .copied()
            .unwrap_or(0)
    }

    /// Adds the concepts annotated in one text block.
    pub fn update<S: AsRef<str>>(&mut self, block_cuis: &[S]) {
        match self.mode {
            CoocMode::PerBlock => {
                let mut distinct: Vec<&str> = block_cuis.iter().map(AsRef::as_ref).collect();
                distinct.sort_unstable();
                distinct.dedup();
                for (i, a) in distinct.iter().enumerate() {
                    for b in &distinct[i + 1..] {
                        self.add_pair(a, b, 1);
                    }
                }
            }
            CoocMode::PerOccurrence => {
                let mut tally: HashMap<&str, u64> = HashMap::new();
                for c in block_cuis {
                    *tally.entry(c.as_ref()).or_insert(0) += 1;
                }
                let mut distinct: Vec<(&str, u64)> = tally.into_iter().collect();
                distinct.sort_unstable();
                for (i, (a, na)) in distinct.iter().enumerate() {
                    for (b, nb) in &distinct[i + 1..] {
                        self.add_pair(a, b, na * nb);
                    }
                }
            }
        }
    }

    /// Adds every count of `other` into `self`.
    pub fn merge(&mut self, other: &CoocMatrix) {
        for (a, b, n) in other.iter() {
            self.add_pair(a, b, n);
        }
    }

    /// Partners of `cui` by descending count, ties by CUI, at most `k`.
    pub fn top_cooccurring(&self, cui: &str, k: usize) -> Vec<(String, u64)> {
        let mut out: Vec<(String, u64)> = self
            .iter()
            .filter_map(|(a, b, n)| {
                if a == cui {
                    Some((b.to_owned(), n))
                } else if b == cui {
                    Some((a.to_owned(), n))
                } else {
                    None
                }
            })
            .collect();
        out.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
        out.truncate(k);
        out
    }

    /// All pairs as `(a, b, count)` with `a < b`, in no particular order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.counts
            .iter()
            .flat_map(|(a, row)| row.iter().map(move |(b, n)| (a.as_str(), b.as_str(), *n)))
    }

    /// All pairs as `(a, b, count)` with `a < b`, sorted.
    pub fn sorted_pairs(&self) -> Vec<(&str, &str, u64)> {
        let mut v: Vec<(&str, &str, u64)> = self.iter().collect();
        v.sort_unstable();
        v
    }

    /// Writes `cui_a,cui_b,count` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["cui_a", "cui_b", "count"])
            .map_err(std::io::Error::from)?;
        for (a, b, n) in self.sorted_pairs() {
            w.write_record([a, b, &n.to_string()])
                .map_err(std::io::Error::from)?;
        }
        w.flush()?;
        Ok(())
    }
}
