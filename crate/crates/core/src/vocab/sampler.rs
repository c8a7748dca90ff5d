use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Vocabulary;
use crate::embedding::{ContextEmbedding, MeanAccumulator};
use crate::error::{Error, Result};

/// Draws words i.i.d. (with replacement) in proportion to `f(w)^(3/4)`
/// using inverse-CDF lookup over a cumulative table.
///
/// The sampler owns its RNG state; use one per worker.
#[derive(Debug, Clone)]
pub struct NegativeSampler<'a> {
    vocab: &'a Vocabulary,
    words: Vec<usize>,
    cumulative: Vec<f64>,
    rng: ChaCha8Rng,
}

impl<'a> NegativeSampler<'a> {
    pub fn new(vocab: &'a Vocabulary, seed: u64) -> Result<Self> {
        let (words, weights): (Vec<usize>, Vec<f64>) = vocab.sampling_weights().unzip();
        let total: f64 = weights.iter().sum();
        if words.is_empty() || total <= 0.0 {
            return Err(Error::NoVectoredWords);
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        *cumulative.last_mut().expect("non-empty") = 1.0;
        Ok(NegativeSampler {
            vocab,
            words,
            cumulative,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// The word at sampler position `i`.
    pub fn word(&self, i: usize) -> &'a str {
        &self.vocab.entries()[self.words[i]].word
    }

    /// Draws one sampler position.
    pub fn draw(&mut self) -> usize {
        let u: f64 = self.rng.random();
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.words.len() - 1)
    }

    /// Mean vector of `k` sampled words.
    pub fn sample_context(&mut self, k: usize) -> Result<ContextEmbedding> {
        if k == 0 {
            return Err(Error::Config("negative sample size must be at least 1".into()));
        }
        let mut acc = MeanAccumulator::new(self.vocab.dim());
        for _ in 0..k {
            let i = self.draw();
            let v = self.vocab.entries()[self.words[i]]
                .vector
                .as_deref()
                .expect("sampler only holds vectored words");
            acc.push(v);
        }
        Ok(acc.finish().expect("k >= 1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_word_support() {
        let mut v = Vocabulary::new();
        v.insert("w", 4, Some(vec![0.5, -1.0, 2.0])).unwrap();
        v.insert("novec", 100, None).unwrap();
        let mut s = v.negative_sampler(1).unwrap();
        let ctx = s.sample_context(5).unwrap();
        assert_eq!(ctx.vector, vec![0.5, -1.0, 2.0]);
        assert_eq!(ctx.words_used, 5);
    }

    #[test]
    fn deterministic_for_seed() {
        let mut v = Vocabulary::new();
        for (i, w) in ["a", "b", "c", "d"].iter().enumerate() {
            v.insert(w, i as u64 + 1, Some(vec![i as f32, 1.0])).unwrap();
        }
        let a = v.negative_sampler(42).unwrap().sample_context(18).unwrap();
        let b = v.negative_sampler(42).unwrap().sample_context(18).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_two_word_mean() {
        let mut v = Vocabulary::new();
        v.insert("a", 5, Some(vec![1.0, 0.0])).unwrap();
        v.insert("b", 5, Some(vec![0.0, 1.0])).unwrap();
        let ctx = v.negative_sampler(7).unwrap().sample_context(10_000).unwrap();
        assert!((ctx.vector[0] - 0.5).abs() < 0.05);
        assert!((ctx.vector[1] - 0.5).abs() < 0.05);
    }

    #[test]
    fn empty_sampler_and_zero_k() {
        let mut v = Vocabulary::new();
        v.insert("a", 5, None).unwrap();
        assert!(matches!(v.negative_sampler(0), Err(Error::NoVectoredWords)));
        v.insert("b", 5, Some(vec![1.0])).unwrap();
        assert!(v.negative_sampler(0).unwrap().sample_context(0).is_err());
    }

    #[test]
    fn cumulative_ends_at_one() {
        let mut v = Vocabulary::new();
        for i in 1..=37u64 {
            v.insert(&format!("w{i}"), i * i, Some(vec![1.0])).unwrap();
        }
        let s = v.negative_sampler(0).unwrap();
        let c = s.cumulative();
        assert!(c.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*c.last().unwrap(), 1.0);
    }
}
