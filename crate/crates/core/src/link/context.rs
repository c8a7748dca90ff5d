use crate::detect::Candidate;
use crate::embedding::{ContextEmbedding, MeanAccumulator};
use crate::normalize::Token;
use crate::vocab::Vocabulary;

/// Mean word vector of up to `s` tokens on each side of the candidate.
///
/// Tokens without a vector are skipped and the mean is taken over the
/// vectors actually found, so windows cut short by the document boundary
/// are not shrunk. Returns `None` when no vector contributes.
pub fn context_embedding(
    tokens: &[Token],
    candidate: &Candidate,
    vocab: &Vocabulary,
    s: usize,
) -> Option<ContextEmbedding> {
    let (first, last) = candidate.token_span;
    let lo = first.saturating_sub(s);
    let hi = (last + 1 + s).min(tokens.len());
    let window: Vec<Option<&[f32]>> = tokens[lo..hi].iter().map(|t| word_vector(vocab, t)).collect();
    window_mean(&window, (first - lo, last - lo), s, vocab.dim())
}

/// Per-token word vectors of a document, for computing many contexts.
pub(crate) fn token_vectors<'v>(tokens: &[Token], vocab: &'v Vocabulary) -> Vec<Option<&'v [f32]>> {
    tokens.iter().map(|t| word_vector(vocab, t)).collect()
}

/// [`context_embedding`] over precomputed token vectors.
pub(crate) fn window_mean(
    vectors: &[Option<&[f32]>],
    (first, last): (usize, usize),
    s: usize,
    dim: usize,
) -> Option<ContextEmbedding> {
    let left = first.saturating_sub(s)..first;
    let right = (last + 1).min(vectors.len())..(last + 1 + s).min(vectors.len());
    let mut acc = MeanAccumulator::new(dim);
    for v in vectors[left].iter().chain(&vectors[right]).flatten() {
        acc.push(v);
    }
    acc.finish()
}

fn word_vector<'v>(vocab: &'v Vocabulary, t: &Token) -> Option<&'v [f32]> {
    vocab.vector(&t.form).or_else(|| vocab.vector(&t.norm))
}
