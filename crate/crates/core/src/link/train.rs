//! Unsupervised training from unambiguous mentions.
//!
//! Every candidate whose name is unique and not an abbreviation is taken as
//! a correct mention of its single concept. Its long and short contexts are
//! pulled into the concept's embeddings and a frequency-weighted random
//! context is pushed out.

use std::io;

use super::context::{token_vectors, window_mean};
use super::update::{learning_rate, negative_update, positive_update};
use super::LinkerConfig;
use crate::cdb::ConceptDatabase;
use crate::detect::detect_candidates;
use crate::embedding::ContextEmbedding;
use crate::error::{Error, Result};
use crate::normalize::{Normalizer, SpellCache, SpellChecker, SpellConfig};
use crate::vocab::{NegativeSampler, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextKind {
    Long,
    Short,
}

/// One embedding update, reported to an optional observer.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateEvent {
    pub concept: u32,
    pub kind: ContextKind,
    /// Training mentions of the concept including this one.
    pub count: u64,
    pub lr: f64,
    pub positive_sim: f64,
    pub negative_sim: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrainingReport {
    pub documents: usize,
    pub documents_skipped: usize,
    /// Unique, non-abbreviation candidates found.
    pub mentions_seen: usize,
    /// Mentions that produced at least one context and updated a concept.
    pub mentions_used: usize,
    /// Concepts with at least `min_train_count` mentions.
    pub concepts_trained: usize,
    /// Concepts with some, but fewer than `min_train_count`, mentions.
    pub concepts_below_threshold: usize,
    /// Concepts unusable for disambiguation (below threshold or never seen).
    pub concepts_untrained: usize,
}

type Observer<'a> = Box<dyn FnMut(&UpdateEvent) + 'a>;

/// Streams documents into a concept database. Training is sequential and,
/// for a fixed seed and document order, bit-reproducible.
pub struct Trainer<'a> {
    cdb: &'a mut ConceptDatabase,
    vocab: &'a Vocabulary,
    cfg: LinkerConfig,
    spell_cfg: SpellConfig,
    sampler: NegativeSampler<'a>,
    cache: SpellCache,
    report: TrainingReport,
    observer: Option<Observer<'a>>,
}

struct Mention {
    concept: u32,
    long: Option<ContextEmbedding>,
    short: Option<ContextEmbedding>,
}

impl<'a> Trainer<'a> {
    pub fn new(
        cdb: &'a mut ConceptDatabase,
        vocab: &'a Vocabulary,
        cfg: LinkerConfig,
        spell_cfg: SpellConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        spell_cfg.validate()?;
        if vocab.dim() == 0 {
            return Err(Error::NoVectoredWords);
        }
        cdb.check_dim(vocab.dim())?;
        let sampler = vocab.negative_sampler(cfg.seed)?;
        Ok(Trainer {
            cdb,
            vocab,
            cache: SpellCache::new(spell_cfg.cache_capacity),
            cfg,
            spell_cfg,
            sampler,
            report: TrainingReport::default(),
            observer: None,
        })
    }

    pub fn with_observer<F: FnMut(&UpdateEvent) + 'a>(mut self, f: F) -> Self {
        self.observer = Some(Box::new(f));
        self
    }

    /// Records a document that could not be read.
    pub fn skip_document(&mut self) {
        self.report.documents_skipped += 1;
    }

    pub fn train_document(&mut self, text: &str) -> Result<()> {
        let mentions = self.collect_mentions(text);
        self.report.documents += 1;
        self.report.mentions_seen += mentions.len();
        let dim = self.vocab.dim();
        for m in mentions {
            if m.long.is_none() && m.short.is_none() {
                continue;
            }
            if self.cdb.dim() == 0 {
                self.cdb.set_dim(dim);
            }
            self.report.mentions_used += 1;
            let rec = self.cdb.concept_mut(m.concept);
            rec.train_count += 1;
            let count = rec.train_count;
            let lr = learning_rate(count);
            let slots = [
                (ContextKind::Long, m.long, self.cfg.s_long, &mut rec.embedding_long),
                (ContextKind::Short, m.short, self.cfg.s_short, &mut rec.embedding_short),
            ];
            for (kind, ctx, s, slot) in slots {
                let Some(ctx) = ctx else { continue };
                let emb = slot.get_or_insert_with(|| vec![0.0; dim]);
                let positive_sim = positive_update(emb, &ctx.vector, lr);
                let negative = self.sampler.sample_context(self.cfg.negative_k_factor * s)?;
                let negative_sim = negative_update(emb, &negative.vector, lr);
                if let Some(obs) = self.observer.as_mut() {
                    obs(&UpdateEvent {
                        concept: m.concept,
                        kind,
                        count,
                        lr,
                        positive_sim,
                        negative_sim,
                    });
                }
            }
        }
        Ok(())
    }

    fn collect_mentions(&mut self, text: &str) -> Vec<Mention> {
        let cdb: &ConceptDatabase = self.cdb;
        let checker = SpellChecker::new(self.vocab, cdb.words(), cdb.alphabet(), &self.spell_cfg);
        let normalizer = Normalizer::new(cdb.lemmatizer(), Some(checker));
        let tokens = normalizer.normalize(text, &mut self.cache);
        let vectors = token_vectors(&tokens, self.vocab);
        let dim = self.vocab.dim();
        detect_candidates(&tokens, cdb, self.cfg.emit_mode)
            .into_iter()
            .filter(|c| c.is_unique() && !c.is_abbreviation)
            .map(|c| Mention {
                concept: c.concepts[0],
                long: window_mean(&vectors, c.token_span, self.cfg.s_long, dim),
                short: window_mean(&vectors, c.token_span, self.cfg.s_short, dim),
            })
            .collect()
    }

    /// Progress so far (concept tallies are filled in by [`finish`](Self::finish)).
    pub fn report(&self) -> &TrainingReport {
        &self.report
    }

    pub fn finish(mut self) -> TrainingReport {
        let min = self.cfg.min_train_count;
        let mut trained = 0;
        let mut below = 0;
        for c in self.cdb.concepts() {
            if c.is_trained(min) {
                trained += 1;
            } else if c.train_count > 0 {
                below += 1;
            }
        }
        self.report.concepts_trained = trained;
        self.report.concepts_below_threshold = below;
        self.report.concepts_untrained = self.cdb.len() - trained;
        self.report
    }
}

/// Trains on every document of `corpus`. A read failure aborts training;
/// updates made up to that point are kept.
pub fn train_unsupervised<I>(
    cdb: &mut ConceptDatabase,
    vocab: &Vocabulary,
    corpus: I,
    cfg: &LinkerConfig,
) -> Result<TrainingReport>
where
    I: IntoIterator<Item = io::Result<String>>,
{
    let mut trainer = Trainer::new(cdb, vocab, cfg.clone(), SpellConfig::default())?;
    for doc in corpus {
        match doc {
            Ok(text) => trainer.train_document(&text)?,
            Err(source) => {
                return Err(Error::CorpusRead {
                    documents: trainer.report().documents,
                    source,
                })
            }
        }
    }
    Ok(trainer.finish())
}
