use super::context::{token_vectors, window_mean};
use super::{Annotation, LinkerConfig};
use crate::cdb::ConceptDatabase;
use crate::detect::Candidate;
use crate::embedding::cosine;
use crate::normalize::Token;
use crate::vocab::Vocabulary;

/// Resolves each candidate to at most one concept.
///
/// Trained concepts are scored by the mean cosine similarity of their long
/// and short embeddings to the matching contexts; the best one is emitted
/// when it reaches the threshold (ties go to the smaller CUI). A candidate
/// without trained concepts is kept only if it is unique and untrained
/// unique names are allowed. `text` of each annotation holds the matched
/// tokens joined by single spaces.
pub fn link_candidates(
    tokens: &[Token],
    candidates: &[Candidate],
    cdb: &ConceptDatabase,
    vocab: &Vocabulary,
    cfg: &LinkerConfig,
) -> Vec<Annotation> {
    let mut vectors = None;
    candidates
        .iter()
        .filter_map(|c| link_one(tokens, c, cdb, vocab, cfg, &mut vectors))
        .collect()
}

fn link_one<'v>(
    tokens: &[Token],
    cand: &Candidate,
    cdb: &ConceptDatabase,
    vocab: &'v Vocabulary,
    cfg: &LinkerConfig,
    vectors: &mut Option<Vec<Option<&'v [f32]>>>,
) -> Option<Annotation> {
    let untrained_fallback = || {
        (cand.is_unique() && cfg.allow_untrained_unique)
            .then(|| annotation(tokens, cand, cdb, cand.concepts[0], 1.0))
    };
    let trained: Vec<u32> = cand
        .concepts
        .iter()
        .copied()
        .filter(|&i| cdb.concept(i).is_trained(cfg.min_train_count))
        .collect();
    if trained.is_empty() {
        return untrained_fallback();
    }
    let vectors = vectors.get_or_insert_with(|| token_vectors(tokens, vocab));
    let long = window_mean(vectors, cand.token_span, cfg.s_long, vocab.dim());
    let short = window_mean(vectors, cand.token_span, cfg.s_short, vocab.dim());

    let mut best: Option<(f64, u32)> = None;
    for idx in trained {
        let rec = cdb.concept(idx);
        let mut sum = 0.0;
        let mut n = 0;
        for (emb, ctx) in [(&rec.embedding_long, &long), (&rec.embedding_short, &short)] {
            if let (Some(e), Some(c)) = (emb, ctx) {
                sum += cosine(e, &c.vector);
                n += 1;
            }
        }
        if n == 0 {
            continue;
        }
        let sim = sum / n as f64;
        let better = match best {
            None => true,
            Some((s, b)) => sim > s || (sim == s && rec.cui < cdb.concept(b).cui),
        };
        if better {
            best = Some((sim, idx));
        }
    }
    match best {
        Some((sim, idx)) if sim >= cfg.similarity_threshold => {
            Some(annotation(tokens, cand, cdb, idx, sim.min(1.0)))
        }
        Some(_) => None,
        // no usable context at all
        None => untrained_fallback(),
    }
}

fn annotation(
    tokens: &[Token],
    cand: &Candidate,
    cdb: &ConceptDatabase,
    idx: u32,
    confidence: f64,
) -> Annotation {
    let (first, last) = cand.token_span;
    let text = tokens[first..=last]
        .iter()
        .map(|t| t.raw.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    Annotation {
        start: cand.char_span.0,
        end: cand.char_span.1,
        token_span: cand.token_span,
        cui: cdb.concept(idx).cui.clone(),
        confidence,
        text,
    }
}
