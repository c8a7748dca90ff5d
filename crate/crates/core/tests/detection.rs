use std::collections::{BTreeSet, HashMap};

use conceptlink::normalize::lemmatize;
use conceptlink::{detect_candidates, tokenize, ConceptDatabase, EmitMode, Lemmatizer};
use proptest::prelude::*;

const WORDS: [&str; 4] = ["ka", "lo", "mi", "nu"];

type Span = ((usize, usize), Vec<String>);

fn build(names: &[(u8, Vec<usize>)]) -> (ConceptDatabase, HashMap<Vec<&'static str>, BTreeSet<String>>) {
    let mut cdb = ConceptDatabase::new(Lemmatizer::Identity);
    let mut table: HashMap<Vec<&str>, BTreeSet<String>> = HashMap::new();
    for (cui, idx) in names {
        let words: Vec<&str> = idx.iter().map(|&i| WORDS[i]).collect();
        let cui = format!("C{cui}");
        cdb.add_concept(&cui, &words.join(" "), None, Some(false)).unwrap();
        table.entry(words).or_default().insert(cui);
    }
    (cdb, table)
}

fn all_spans(words: &[&str], table: &HashMap<Vec<&'static str>, BTreeSet<String>>) -> Vec<Span> {
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i..words.len() {
            if let Some(c) = table.get(&words[i..=j].to_vec()) {
                out.push(((i, j), c.iter().cloned().collect()));
            }
        }
    }
    out
}

/// Longest match per start position, minus matches inside an earlier kept one.
fn longest_spans(all: &[Span]) -> Vec<Span> {
    let mut by_start: Vec<Span> = Vec::new();
    for s in all {
        match by_start.last_mut() {
            Some(last) if last.0 .0 == s.0 .0 => *last = s.clone(),
            _ => by_start.push(s.clone()),
        }
    }
    let mut kept: Vec<Span> = Vec::new();
    for s in by_start {
        if kept.iter().all(|k| s.0 .1 > k.0 .1) {
            kept.push(s);
        }
    }
    kept
}

fn detect(cdb: &ConceptDatabase, words: &[&str], mode: EmitMode) -> Vec<Span> {
    let mut tokens = tokenize(&words.join(" "));
    lemmatize(&mut tokens, cdb.lemmatizer());
    detect_candidates(&tokens, cdb, mode)
        .iter()
        .map(|c| {
            let mut cuis: Vec<String> = c.cuis(cdb).into_iter().map(str::to_owned).collect();
            cuis.sort();
            (c.token_span, cuis)
        })
        .collect()
}

fn instance() -> impl Strategy<Value = (Vec<(u8, Vec<usize>)>, Vec<usize>)> {
    (
        prop::collection::vec((0u8..5, prop::collection::vec(0usize..4, 1..=4)), 1..=12),
        prop::collection::vec(0usize..4, 0..=10),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn all_mode_matches_oracle((names, text) in instance()) {
        let (cdb, table) = build(&names);
        let words: Vec<&str> = text.iter().map(|&i| WORDS[i]).collect();
        let mut got = detect(&cdb, &words, EmitMode::All);
        got.sort();
        prop_assert_eq!(got, all_spans(&words, &table));
    }

    #[test]
    fn longest_mode_matches_oracle((names, text) in instance()) {
        let (cdb, table) = build(&names);
        let words: Vec<&str> = text.iter().map(|&i| WORDS[i]).collect();
        let got = detect(&cdb, &words, EmitMode::Longest);
        prop_assert_eq!(got, longest_spans(&all_spans(&words, &table)));
    }

    #[test]
    fn uniqueness_is_cui_count((names, text) in instance()) {
        let (cdb, _) = build(&names);
        let words: Vec<&str> = text.iter().map(|&i| WORDS[i]).collect();
        let mut tokens = tokenize(&words.join(" "));
        lemmatize(&mut tokens, cdb.lemmatizer());
        for c in detect_candidates(&tokens, &cdb, EmitMode::All) {
            prop_assert_eq!(c.is_unique(), c.concepts.len() == 1);
        }
    }
}

#[test]
fn inflected_synonym_detected_over_full_span() {
    let mut cdb = ConceptDatabase::new(Lemmatizer::default());
    cdb.add_concept("KF", "kidney failure", None, None).unwrap();
    cdb.add_concept("KF", "failure of kidney", None, None).unwrap();
    cdb.add_concept("F", "failure", None, None).unwrap();
    let mut tokens = tokenize("Failure of kidneys.");
    lemmatize(&mut tokens, cdb.lemmatizer());
    let c = detect_candidates(&tokens, &cdb, EmitMode::Longest);
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].char_span, (0, 18));
    assert_eq!(c[0].cuis(&cdb), ["KF"]);
}
