use std::sync::Mutex;

use super::disambiguate::link_candidates;
use super::{Annotation, LinkerConfig};
use crate::cdb::ConceptDatabase;
use crate::detect::detect_candidates;
use crate::error::{Error, Result};
use crate::normalize::{Normalizer, SpellCache, SpellChecker, SpellConfig};
use crate::parallel::ExecMode;
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DocStats {
    pub tokens: usize,
    pub candidates: usize,
    pub emitted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentResult {
    /// Sorted by start offset.
    pub annotations: Vec<Annotation>,
    pub stats: DocStats,
}

/// Normalization, detection and linking over a read-only database.
#[derive(Debug)]
pub struct Annotator<'a> {
    cdb: &'a ConceptDatabase,
    vocab: &'a Vocabulary,
    cfg: LinkerConfig,
    spell: SpellConfig,
    /// Spell caches kept warm between batch calls.
    caches: Mutex<Vec<SpellCache>>,
}

/// A cache borrowed from the annotator's pool, returned on drop.
struct PooledCache<'p> {
    cache: Option<SpellCache>,
    pool: &'p Mutex<Vec<SpellCache>>,
}

impl Drop for PooledCache<'_> {
    fn drop(&mut self) {
        if let (Some(c), Ok(mut pool)) = (self.cache.take(), self.pool.lock()) {
            pool.push(c);
        }
    }
}

impl<'a> Annotator<'a> {
    pub fn new(
        cdb: &'a ConceptDatabase,
        vocab: &'a Vocabulary,
        cfg: LinkerConfig,
        spell: SpellConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        spell.validate()?;
        if cdb.dim() != 0 && vocab.dim() != cdb.dim() {
            return Err(Error::DimensionMismatch {
                expected: cdb.dim(),
                found: vocab.dim(),
            });
        }
        Ok(Annotator {
            cdb,
            vocab,
            cfg,
            spell,
            caches: Mutex::new(Vec::new()),
        })
    }

    pub fn config(&self) -> &LinkerConfig {
        &self.cfg
    }

    pub fn new_cache(&self) -> SpellCache {
        SpellCache::new(self.spell.cache_capacity)
    }

    pub fn annotate(&self, text: &str) -> DocumentResult {
        self.annotate_with_cache(text, &mut self.new_cache())
    }

    pub fn annotate_with_cache(&self, text: &str, cache: &mut SpellCache) -> DocumentResult {
        let checker = SpellChecker::new(self.vocab, self.cdb.words(), self.cdb.alphabet(), &self.spell);
        let normalizer = Normalizer::new(self.cdb.lemmatizer(), Some(checker));
        let tokens = normalizer.normalize(text, cache);
        let candidates = detect_candidates(&tokens, self.cdb, self.cfg.emit_mode);
        let mut annotations = link_candidates(&tokens, &candidates, self.cdb, self.vocab, &self.cfg);
        fill_text(text, &mut annotations);
        annotations.sort_by(|a, b| (a.start, a.end, &a.cui).cmp(&(b.start, b.end, &b.cui)));
        DocumentResult {
            stats: DocStats {
                tokens: tokens.len(),
                candidates: candidates.len(),
                emitted: annotations.len(),
            },
            annotations,
        }
    }

    /// Annotates documents independently; results are in input order and
    /// do not depend on `mode`.
    pub fn annotate_batch<S: AsRef<str> + Sync>(
        &self,
        docs: &[S],
        mode: ExecMode,
    ) -> Result<Vec<DocumentResult>> {
        let take = || PooledCache {
            cache: Some(
                self.caches
                    .lock()
                    .ok()
                    .and_then(|mut p| p.pop())
                    .unwrap_or_else(|| self.new_cache()),
            ),
            pool: &self.caches,
        };
        mode.map_init(docs, take, |pooled, d| {
            let cache = pooled.cache.as_mut().expect("present until drop");
            self.annotate_with_cache(d.as_ref(), cache)
        })
    }
}

/// Replaces token-joined text with the exact document slice.
fn fill_text(text: &str, annotations: &mut [Annotation]) {
    if annotations.is_empty() {
        return;
    }
    let mut bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
    bytes.push(text.len());
    for a in annotations {
        a.text = text[bytes[a.start]..bytes[a.end]].to_owned();
    }
}

/// One-shot convenience around [`Annotator`].
pub fn annotate(
    text: &str,
    cdb: &ConceptDatabase,
    vocab: &Vocabulary,
    cfg: &LinkerConfig,
) -> Result<DocumentResult> {
    Ok(Annotator::new(cdb, vocab, cfg.clone(), SpellConfig::default())?.annotate(text))
}
