//! The concept embedding update rules.
//!
//! A positive update pulls the concept embedding toward the observed context
//! in proportion to how dissimilar they are; a negative update pushes it away
//! from a randomly sampled context in proportion to how similar they are.
//! Both share the learning rate `1 / n` where `n` counts the concept's
//! training mentions so far.

use crate::embedding::{add_scaled, cosine};

/// Learning rate for the `count`-th training mention (`count >= 1`).
pub fn learning_rate(count: u64) -> f64 {
    assert!(count >= 1, "learning rate is defined from the first mention on");
    1.0 / count as f64
}

/// `concept += lr * (1 - max(0, cos)) * ctx`; returns the clipped similarity.
pub fn positive_update(concept: &mut [f64], ctx: &[f64], lr: f64) -> f64 {
    let sim = cosine(concept, ctx).max(0.0);
    add_scaled(concept, ctx, lr * (1.0 - sim));
    sim
}

/// `concept -= lr * max(0, cos) * negative`; returns the clipped similarity.
pub fn negative_update(concept: &mut [f64], negative: &[f64], lr: f64) -> f64 {
    let sim = cosine(concept, negative).max(0.0);
    add_scaled(concept, negative, -lr * sim);
    sim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::norm;
    use proptest::prelude::*;

    #[test]
    fn first_update_copies_context() {
        let mut c = vec![0.0; 3];
        let ctx = [0.3, -1.0, 2.0];
        let sim = positive_update(&mut c, &ctx, learning_rate(1));
        assert_eq!(sim, 0.0);
        assert_eq!(c, ctx);
    }

    #[test]
    fn aligned_context_is_a_no_op() {
        let mut c = vec![1.0, 1.0];
        positive_update(&mut c, &[2.0, 2.0], 0.5);
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lr_schedule() {
        assert_eq!(learning_rate(1), 1.0);
        assert_eq!(learning_rate(4), 0.25);
    }

    fn vec16() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, 16)
    }

    proptest! {
        #[test]
        fn positive_contracts_and_is_bounded(c in vec16(), x in vec16(), n in 1u64..50) {
            prop_assume!(norm(&c) > 1e-3 && norm(&x) > 1e-3);
            let lr = learning_rate(n);
            let before = cosine(&c, &x);
            let mut after_v = c.clone();
            let sim = positive_update(&mut after_v, &x, lr);
            let delta: Vec<f64> = after_v.iter().zip(&c).map(|(a, b)| a - b).collect();
            prop_assert!(norm(&delta) <= lr * norm(&x) + 1e-12);
            if sim < 1.0 - 1e-9 {
                prop_assert!(cosine(&after_v, &x) > before - 1e-9);
            }
        }

        #[test]
        fn negative_repels(c in vec16(), x in vec16(), n in 1u64..50) {
            prop_assume!(norm(&c) > 1e-3 && norm(&x) > 1e-3);
            let before = cosine(&c, &x);
            let mut v = c.clone();
            let sim = negative_update(&mut v, &x, learning_rate(n));
            if sim > 0.0 {
                prop_assert!(cosine(&v, &x) <= before + 1e-9);
            } else {
                prop_assert_eq!(v, c);
            }
        }
    }
}
