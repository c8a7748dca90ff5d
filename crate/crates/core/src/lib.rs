//! Dictionary-driven concept recognition and linking.
//!
//! Text is tokenized, spell-checked against a word vocabulary and lemmatized,
//! then scanned with a moving, expanding window over the concept name index.
//! Candidates whose names are unique train per-concept context embeddings
//! without supervision; ambiguous candidates are resolved by comparing their
//! context against those embeddings.
//!
//! The main entry points are [`ConceptDatabase`], [`Vocabulary`],
//! [`Trainer`](link::Trainer) and [`Annotator`](link::Annotator).

pub mod cdb;
pub mod cooc;
pub mod corpus;
pub mod detect;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod jsonl;
pub mod link;
pub mod normalize;
pub mod parallel;
pub mod synth;
pub mod vocab;

pub use cdb::{ConceptDatabase, ConceptRecord, NameKey};
pub use cooc::{CoocMatrix, CoocMode};
pub use detect::{detect_candidates, Candidate, EmitMode};
pub use embedding::ContextEmbedding;
pub use error::{Error, Result};
pub use link::{annotate, Annotation, Annotator, LinkerConfig, Trainer, TrainingReport};
pub use normalize::{tokenize, Lemmatizer, SpellConfig, Token};
pub use parallel::ExecMode;
pub use vocab::{NegativeSampler, Vocabulary, WordEntry};
