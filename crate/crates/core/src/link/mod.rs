//! Context embeddings, unsupervised training and candidate linking.

mod context;
mod disambiguate;
mod pipeline;
mod train;
pub mod update;

pub use context::context_embedding;
pub use disambiguate::link_candidates;
pub use pipeline::{annotate, Annotator, DocStats, DocumentResult};
pub use train::{train_unsupervised, ContextKind, Trainer, TrainingReport, UpdateEvent};

use crate::detect::EmitMode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinkerConfig {
    /// Words taken from each side for the long context.
    pub s_long: usize,
    /// Words taken from each side for the short context.
    pub s_short: usize,
    /// Minimum context similarity for an annotation to be emitted.
    pub similarity_threshold: f64,
    /// Concepts with fewer training mentions do not take part in linking.
    pub min_train_count: u64,
    /// Negative samples per update are `negative_k_factor * s`.
    pub negative_k_factor: usize,
    /// Emit unique names of untrained concepts with confidence 1.
    pub allow_untrained_unique: bool,
    pub emit_mode: EmitMode,
    pub seed: u64,
}

impl Default for LinkerConfig {
    fn default() -> Self {
        LinkerConfig {
            s_long: 9,
            s_short: 2,
            similarity_threshold: 0.1,
            min_train_count: 3,
            negative_k_factor: 2,
            allow_untrained_unique: true,
            emit_mode: EmitMode::Longest,
            seed: 0,
        }
    }
}

impl LinkerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.s_short < 1 || self.s_long <= self.s_short {
            return Err(Error::Config(format!(
                "need s_long > s_short >= 1, got s_long={} s_short={}",
                self.s_long, self.s_short
            )));
        }
        if !(0.0..=1.0).contains(&self.similarity_threshold) {
            return Err(Error::Config(format!(
                "similarity threshold {} outside [0, 1]",
                self.similarity_threshold
            )));
        }
        if self.negative_k_factor == 0 {
            return Err(Error::Config("negative_k_factor must be >= 1".into()));
        }
        Ok(())
    }
}

/// A linked mention.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    /// Character offsets `[start, end)` in the document.
    pub start: usize,
    pub end: usize,
    pub token_span: (usize, usize),
    pub cui: String,
    /// Context similarity of the chosen concept.
    pub confidence: f64,
    pub text: String,
}
