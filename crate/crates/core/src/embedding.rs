//! Dense vector helpers shared by training, linking and similarity queries.

/// Mean of the word vectors found around a candidate (or of sampled words).
#[derive(Debug, Clone, PartialEq)]
pub struct ContextEmbedding {
    pub vector: Vec<f64>,
    /// Number of word vectors that went into the mean.
    pub words_used: usize,
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine similarity; zero when either vector has zero length.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot(a, b) / (na * nb)
}

/// `acc += scale * v`
pub fn add_scaled(acc: &mut [f64], v: &[f64], scale: f64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += scale * x;
    }
}

/// Accumulates `f32` word vectors into an `f64` mean.
#[derive(Debug, Clone)]
pub(crate) struct MeanAccumulator {
    sum: Vec<f64>,
    count: usize,
}

impl MeanAccumulator {
    pub(crate) fn new(dim: usize) -> Self {
        MeanAccumulator {
            sum: vec![0.0; dim],
            count: 0,
        }
    }

    pub(crate) fn push(&mut self, v: &[f32]) {
        for (s, x) in self.sum.iter_mut().zip(v) {
            *s += f64::from(*x);
        }
        self.count += 1;
    }

    pub(crate) fn finish(mut self) -> Option<ContextEmbedding> {
        if self.count == 0 {
            return None;
        }
        let n = self.count as f64;
        self.sum.iter_mut().for_each(|s| *s /= n);
        Some(ContextEmbedding {
            vector: self.sum,
            words_used: self.count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_against_zero_is_zero() {
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn cosine_basic() {
        assert!((cosine(&[1.0, 0.0], &[2.0, 0.0]) - 1.0).abs() < 1e-12);
        assert!(cosine(&[1.0, 0.0], &[0.0, 3.0]).abs() < 1e-12);
        assert!((cosine(&[1.0, 0.0], &[-1.0, 0.0]) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_accumulator_yields_none() {
        assert!(MeanAccumulator::new(3).finish().is_none());
    }
}
