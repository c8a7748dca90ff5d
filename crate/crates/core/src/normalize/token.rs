/// One alphanumeric run of a document.
///
/// `start`/`end` are character (not byte) offsets into the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub raw: String,
    /// Lowercased and, when applicable, spell-corrected form. Word vectors are
    /// looked up with this form.
    pub form: String,
    /// Lemma of `form`; the form used for dictionary matching.
    pub norm: String,
    pub start: usize,
    pub end: usize,
    pub is_abbrev_shape: bool,
}

impl Token {
    /// The string matched against the name index. Abbreviation-shaped tokens
    /// match case-sensitively on their raw text.
    pub fn key(&self) -> &str {
        if self.is_abbrev_shape {
            &self.raw
        } else {
            &self.norm
        }
    }

    pub fn has_digit(&self) -> bool {
        self.raw.chars().any(|c| c.is_numeric())
    }
}

/// At most 4 characters, at least one letter, and every letter uppercase.
pub fn is_abbrev_shape(s: &str) -> bool {
    let mut letters = 0;
    for (n, c) in s.chars().enumerate() {
        if n >= 4 {
            return false;
        }
        if c.is_alphabetic() {
            if !c.is_uppercase() {
                return false;
            }
            letters += 1;
        }
    }
    letters > 0
}

/// Splits text into maximal runs of alphanumeric characters. Everything
/// else separates tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    let mut pos = 0;
    for c in text.chars() {
        if c.is_alphanumeric() {
            if current.is_empty() {
                start = pos;
            }
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(make_token(std::mem::take(&mut current), start, pos));
        }
        pos += 1;
    }
    if !current.is_empty() {
        tokens.push(make_token(current, start, pos));
    }
    tokens
}

fn make_token(raw: String, start: usize, end: usize) -> Token {
    let lower = raw.to_lowercase();
    Token {
        is_abbrev_shape: is_abbrev_shape(&raw),
        form: lower.clone(),
        norm: lower,
        raw,
        start,
        end,
    }
}
