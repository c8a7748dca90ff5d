//! Tokenization, spell correction and lemmatization.
//!
//! Per token the order is: lowercase, spell-correct (never for
//! abbreviation-shaped or numeric tokens), then lemmatize.

mod lemma;
mod spell;
mod token;

pub use lemma::{Lemmatizer, RuleLemmatizer};
pub use spell::{spell_correct, SpellCache, SpellChecker, SpellConfig};
pub use token::{is_abbrev_shape, tokenize, Token};

/// Applies the lemmatizer to every token's `form`, leaving abbreviation-shaped
/// tokens untouched.
pub fn lemmatize(tokens: &mut [Token], lemmatizer: &Lemmatizer) {
    for t in tokens {
        t.norm = if t.is_abbrev_shape {
            t.form.clone()
        } else {
            lemmatizer.lemma(&t.form)
        };
    }
}

/// Full per-document normalization.
#[derive(Debug, Clone, Copy)]
pub struct Normalizer<'a> {
    lemmatizer: &'a Lemmatizer,
    speller: Option<SpellChecker<'a>>,
}

impl<'a> Normalizer<'a> {
    pub fn new(lemmatizer: &'a Lemmatizer, speller: Option<SpellChecker<'a>>) -> Self {
        Normalizer {
            lemmatizer,
            speller,
        }
    }

    pub fn normalize(&self, text: &str, cache: &mut SpellCache) -> Vec<Token> {
        let mut tokens = tokenize(text);
        if let Some(speller) = &self.speller {
            for t in tokens.iter_mut() {
                t.form = speller.correct(&t.form, t.is_abbrev_shape, cache);
            }
        }
        lemmatize(&mut tokens, self.lemmatizer);
        tokens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemmatize_examples() {
        let mut toks = tokenize("kidneys of HR");
        lemmatize(&mut toks, &Lemmatizer::default());
        let norms: Vec<&str> = toks.iter().map(|t| t.norm.as_str()).collect();
        assert_eq!(norms, ["kidney", "of", "hr"]);
        assert_eq!(toks[2].key(), "HR");
    }
}
