//! Candidate detection with a moving, expanding window over the name index.
//!
//! Starting at each word position the window grows one token at a time for
//! as long as its text is a name or a proper prefix of a name. Every exact
//! name met along the way is recorded, so nested and overlapping candidates
//! are all found. Scanning then resumes at the next word position.

use crate::cdb::{ConceptDatabase, NodeId};
use crate::normalize::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmitMode {
    /// Keep the longest match per start, and drop matches nested inside an
    /// earlier emitted one.
    #[default]
    Longest,
    /// Every match, nested and overlapping.
    All,
}

impl std::str::FromStr for EmitMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "longest" => Ok(EmitMode::Longest),
            "all" => Ok(EmitMode::All),
            _ => Err(format!("unknown emit mode `{s}` (expected `longest` or `all`)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    /// First and last token index, inclusive.
    pub token_span: (usize, usize),
    /// Character offsets `[start, end)`.
    pub char_span: (usize, usize),
    /// Indices of the concepts carrying the matched name, ascending.
    pub concepts: Vec<u32>,
    pub name_tokens: Vec<String>,
    pub is_abbreviation: bool,
}

impl Candidate {
    pub fn is_unique(&self) -> bool {
        self.concepts.len() == 1
    }

    /// CUIs of the candidate, sorted.
    pub fn cuis<'a>(&self, cdb: &'a ConceptDatabase) -> Vec<&'a str> {
        let mut v: Vec<&str> = self
            .concepts
            .iter()
            .map(|&i| cdb.concept(i).cui.as_str())
            .collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DetectStats {
    /// Window positions examined; bounded by tokens x longest name.
    pub window_checks: usize,
}

pub fn detect_candidates(tokens: &[Token], cdb: &ConceptDatabase, mode: EmitMode) -> Vec<Candidate> {
    detect_candidates_with_stats(tokens, cdb, mode).0
}

pub fn detect_candidates_with_stats(
    tokens: &[Token],
    cdb: &ConceptDatabase,
    mode: EmitMode,
) -> (Vec<Candidate>, DetectStats) {
    let index = cdb.name_index();
    let mut stats = DetectStats::default();
    let mut found = Vec::new();
    for position in 0..tokens.len() {
        let mut node = NodeId::ROOT;
        let mut matches_here: Vec<Candidate> = Vec::new();
        for end in position..tokens.len() {
            stats.window_checks += 1;
            node = match index.step(node, tokens[end].key()) {
                Some(n) => n,
                None => break,
            };
            if !index.concepts(node).is_empty() {
                matches_here.push(Candidate {
                    token_span: (position, end),
                    char_span: (tokens[position].start, tokens[end].end),
                    concepts: index.concepts(node).to_vec(),
                    name_tokens: tokens[position..=end]
                        .iter()
                        .map(|t| t.key().to_owned())
                        .collect(),
                    is_abbreviation: index.is_abbreviation(node),
                });
            }
            if !index.has_extensions(node) {
                break;
            }
        }
        match mode {
            EmitMode::All => found.extend(matches_here),
            EmitMode::Longest => found.extend(matches_here.pop()),
        }
    }
    if mode == EmitMode::Longest {
        let mut reach: Option<usize> = None;
        found.retain(|c: &Candidate| {
            let nested = reach.is_some_and(|r| c.token_span.1 <= r);
            if !nested {
                reach = Some(reach.map_or(c.token_span.1, |r| r.max(c.token_span.1)));
            }
            !nested
        });
    }
    (found, stats)
}
