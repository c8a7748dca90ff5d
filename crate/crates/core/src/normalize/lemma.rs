use rustc_hash::FxHashMap as HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Irregular forms the suffix rules would otherwise mangle.
const BUILTIN_EXCEPTIONS: &[(&str, &str)] = &[
    ("was", "be"),
    ("were", "be"),
    ("is", "be"),
    ("are", "be"),
    ("has", "have"),
    ("had", "have"),
    ("does", "do"),
    ("this", "this"),
    ("during", "during"),
    ("morning", "morning"),
    ("evening", "evening"),
    ("nothing", "nothing"),
    ("something", "something"),
    ("ceiling", "ceiling"),
    ("string", "string"),
    ("bleeding", "bleeding"),
    ("hundred", "hundred"),
    ("speed", "speed"),
    ("species", "species"),
    ("series", "series"),
    ("diabetes", "diabetes"),
    ("lens", "lens"),
    ("news", "news"),
    ("children", "child"),
    ("women", "woman"),
    ("men", "man"),
    ("feet", "foot"),
    ("teeth", "tooth"),
];

/// Maps a lowercased word to its lemma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lemmatizer {
    Identity,
    Rules(RuleLemmatizer),
}

impl Default for Lemmatizer {
    fn default() -> Self {
        Lemmatizer::Rules(RuleLemmatizer::default())
    }
}

impl Lemmatizer {
    pub fn lemma(&self, word: &str) -> String {
        match self {
            Lemmatizer::Identity => word.to_owned(),
            Lemmatizer::Rules(r) => r.lemma(word),
        }
    }
}

/// English suffix rules plus an exceptions table.
///
/// Rules, first match wins, only for purely alphabetic words of length >= 4:
///
/// | suffix                      | result                          |
/// |-----------------------------|---------------------------------|
/// | `-ies` (len > 4)            | `-y`                            |
/// | `-sses`, `-xes`, `-ches`, `-shes` | drop `es`                 |
/// | `-ss`, `-us`, `-is`         | unchanged                       |
/// | `-s`                        | drop `s`                        |
/// | `-ied` (len > 4)            | `-y`                            |
/// | `-ing` (len >= 6)           | drop `ing`, undouble consonant  |
/// | `-ed` (len >= 5)            | drop `ed`, undouble consonant   |
///
/// `-ing`/`-ed` only apply when the remaining stem has a vowel. Undoubling
/// removes one of a trailing doubled consonant other than `l`, `s`, `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleLemmatizer {
    exceptions: HashMap<String, String>,
    /// Entries added on top of the built-in table, in insertion order.
    extra: Vec<(String, String)>,
}

impl Default for RuleLemmatizer {
    fn default() -> Self {
        RuleLemmatizer {
            exceptions: BUILTIN_EXCEPTIONS
                .iter()
                .map(|(f, l)| (f.to_string(), l.to_string()))
                .collect(),
            extra: Vec::new(),
        }
    }
}

impl RuleLemmatizer {
    pub fn with_exceptions<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut r = RuleLemmatizer::default();
        for (form, lemma) in pairs {
            r.add_exception(form, lemma);
        }
        r
    }

    /// Reads `form<TAB>lemma` lines.
    pub fn load_exceptions<R: BufRead>(reader: R) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            match line.split_once('\t') {
                Some((form, lemma)) if !form.is_empty() && !lemma.is_empty() => {
                    pairs.push((form.to_lowercase(), lemma.to_lowercase()))
                }
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: "expected `form<TAB>lemma`".into(),
                    })
                }
            }
        }
        Ok(Self::with_exceptions(pairs))
    }

    pub fn add_exception(&mut self, form: String, lemma: String) {
        self.exceptions.insert(form.clone(), lemma.clone());
        self.extra.push((form, lemma));
    }

    /// User-supplied exceptions, for persistence.
    pub fn extra_exceptions(&self) -> &[(String, String)] {
        &self.extra
    }

    pub fn lemma(&self, word: &str) -> String {
        if let Some(l) = self.exceptions.get(word) {
            return l.clone();
        }
        let n = word.chars().count();
        if n < 4 || !word.chars().all(char::is_alphabetic) {
            return word.to_owned();
        }
        if n > 4 {
            if let Some(stem) = word.strip_suffix("ies") {
                return format!("{stem}y");
            }
        }
        for suffix in ["sses", "xes", "ches", "shes"] {
            if word.ends_with(suffix) {
                return word[..word.len() - 2].to_owned();
            }
        }
        if word.ends_with("ss") || word.ends_with("us") || word.ends_with("is") {
            return word.to_owned();
        }
        if let Some(stem) = word.strip_suffix('s') {
            return stem.to_owned();
        }
        if n > 4 {
            if let Some(stem) = word.strip_suffix("ied") {
                return format!("{stem}y");
            }
        }
        if n >= 6 {
            if let Some(stem) = word.strip_suffix("ing") {
                if has_vowel(stem) {
                    return undouble(stem);
                }
            }
        }
        if n >= 5 {
            if let Some(stem) = word.strip_suffix("ed") {
                if has_vowel(stem) {
                    return undouble(stem);
                }
            }
        }
        word.to_owned()
    }
}

fn has_vowel(s: &str) -> bool {
    s.chars().any(|c| "aeiouy".contains(c))
}

fn undouble(stem: &str) -> String {
    let chars: Vec<char> = stem.chars().collect();
    if let [.., a, b] = chars[..] {
        if a == b && !"aeioulsz".contains(a) {
            return chars[..chars.len() - 1].iter().collect();
        }
    }
    stem.to_owned()
}
