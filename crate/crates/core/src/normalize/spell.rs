use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpellConfig {
    /// Edit budget for words shorter than `length_threshold`.
    pub max_edits_short: usize,
    pub max_edits_long: usize,
    pub length_threshold: usize,
    /// Maximum number of cached corrections; 0 disables caching.
    pub cache_capacity: usize,
}

impl Default for SpellConfig {
    fn default() -> Self {
        SpellConfig {
            max_edits_short: 1,
            max_edits_long: 2,
            length_threshold: 6,
            cache_capacity: 100_000,
        }
    }
}

impl SpellConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.max_edits_short > self.max_edits_long {
            return Err(crate::Error::Config(
                "max_edits_short must not exceed max_edits_long".into(),
            ));
        }
        if self.length_threshold == 0 {
            return Err(crate::Error::Config("length_threshold must be >= 1".into()));
        }
        Ok(())
    }

    /// Edit budget for a word of `len` characters.
    pub fn budget(&self, len: usize) -> usize {
        if len < self.length_threshold {
            self.max_edits_short
        } else {
            self.max_edits_long
        }
    }
}

/// Bounded memo of corrections keyed by the lowercased input word.
#[derive(Debug, Clone, Default)]
pub struct SpellCache {
    map: HashMap<String, String>,
    capacity: usize,
}

impl SpellCache {
    pub fn new(capacity: usize) -> Self {
        SpellCache {
            map: HashMap::default(),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Norvig-style corrector: words are checked against the vocabulary but only
/// ever corrected to words occurring in concept names.
#[derive(Debug, Clone, Copy)]
pub struct SpellChecker<'a> {
    vocab: &'a Vocabulary,
    targets: &'a HashSet<String>,
    alphabet: &'a [char],
    cfg: &'a SpellConfig,
}

impl<'a> SpellChecker<'a> {
    /// `alphabet` is the character set used for insertions and replacements;
    /// it should cover every character of `targets`.
    pub fn new(
        vocab: &'a Vocabulary,
        targets: &'a HashSet<String>,
        alphabet: &'a [char],
        cfg: &'a SpellConfig,
    ) -> Self {
        SpellChecker {
            vocab,
            targets,
            alphabet,
            cfg,
        }
    }

    /// Returns the corrected form of a lowercased word, or the word itself.
    pub fn correct(&self, word: &str, is_abbrev_shape: bool, cache: &mut SpellCache) -> String {
        if self.is_exempt(word, is_abbrev_shape) {
            return word.to_owned();
        }
        if let Some(hit) = cache.map.get(word) {
            return hit.clone();
        }
        let corrected = self.best_candidate(word).unwrap_or_else(|| word.to_owned());
        if cache.map.len() < cache.capacity {
            cache.map.insert(word.to_owned(), corrected.clone());
        }
        corrected
    }

    fn is_exempt(&self, word: &str, is_abbrev_shape: bool) -> bool {
        is_abbrev_shape
            || word.is_empty()
            || self.vocab.contains(word)
            || self.targets.contains(word)
            || word.chars().any(|c| c.is_numeric())
    }

    fn best_candidate(&self, word: &str) -> Option<String> {
        let budget = self.cfg.budget(word.chars().count());
        if budget == 0 {
            return None;
        }
        // distance at which each target was first reached
        let mut found: HashMap<String, usize> = HashMap::default();
        let mut frontier: HashSet<String> = std::iter::once(word.to_owned()).collect();
        let mut seen: HashSet<String> = frontier.clone();
        for depth in 1..=budget {
            let last = depth == budget;
            let mut next = HashSet::default();
            for w in &frontier {
                for_each_edit(w, self.alphabet, |e| {
                    if self.targets.contains(e) && !found.contains_key(e) {
                        found.insert(e.to_owned(), depth);
                    }
                    if !last && !seen.contains(e) {
                        seen.insert(e.to_owned());
                        next.insert(e.to_owned());
                    }
                });
            }
            frontier = next;
        }
        found.remove(word);
        found
            .into_iter()
            .min_by(|(wa, da), (wb, db)| {
                let ca = self.vocab.count(wa);
                let cb = self.vocab.count(wb);
                cb.cmp(&ca).then(da.cmp(db)).then(wa.cmp(wb))
            })
            .map(|(w, _)| w)
    }
}

/// Calls `f` for every string one deletion, adjacent transposition,
/// replacement or insertion away from `word`.
fn for_each_edit<F: FnMut(&str)>(word: &str, alphabet: &[char], mut f: F) {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let mut buf = String::with_capacity(word.len() + 4);
    let mut emit = |parts: &[&[char]], buf: &mut String| {
        buf.clear();
        for p in parts {
            buf.extend(p.iter());
        }
        f(buf);
    };
    for i in 0..n {
        emit(&[&chars[..i], &chars[i + 1..]], &mut buf);
    }
    for i in 0..n.saturating_sub(1) {
        let swapped = [chars[i + 1], chars[i]];
        emit(&[&chars[..i], &swapped, &chars[i + 2..]], &mut buf);
    }
    for i in 0..n {
        for c in alphabet {
            if *c != chars[i] {
                emit(&[&chars[..i], std::slice::from_ref(c), &chars[i + 1..]], &mut buf);
            }
        }
    }
    for i in 0..=n {
        for c in alphabet {
            emit(&[&chars[..i], std::slice::from_ref(c), &chars[i..]], &mut buf);
        }
    }
}

/// Corrects a single token without a shared cache.
pub fn spell_correct(
    token: &super::Token,
    vocab: &Vocabulary,
    cdb_words: &HashSet<String>,
    cfg: &SpellConfig,
) -> String {
    let mut alphabet: Vec<char> = cdb_words.iter().flat_map(|w| w.chars()).collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    let checker = SpellChecker::new(vocab, cdb_words, &alphabet, cfg);
    checker.correct(&token.form, token.is_abbrev_shape, &mut SpellCache::new(0))
}
