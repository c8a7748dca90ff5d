//! Seeded synthetic data: the HR abbreviation benchmark, an end-to-end
//! fixture with misspellings, abbreviations and inflected names, an analogy
//! fixture with hand-built embeddings, and a large corpus for throughput
//! checks.
//!
//! Word vectors are clustered by topic: each topic has a random direction
//! and every word is its topic direction plus Gaussian noise. Contexts drawn
//! mostly from one topic therefore point in a recognisable direction.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cdb::ConceptDatabase;
use crate::corpus::Document;
use crate::eval::BenchmarkData;
use crate::jsonl::{AnnotatedDocument, SpanAnnotation};
use crate::normalize::Lemmatizer;
use crate::vocab::Vocabulary;

const CARDIAC: &[&str] = &[
    "pulse", "bpm", "tachycardic", "bradycardic", "sinus", "rhythm", "telemetry", "monitor",
    "40s", "50s", "60s", "90s", "irregular", "resting", "palpitations", "atrial", "systolic",
    "beats", "elevated", "dropped", "ectopy", "sinusoidal", "pacing", "amiodarone",
];
const DOSING: &[&str] = &[
    "given", "2mg", "4mg", "5mg", "8mg", "10mg", "morphine", "infusion", "dose", "administered",
    "per", "units", "drip", "titrated", "heparin", "insulin", "started", "bolus", "labetalol",
    "mcg", "every", "weaned", "propofol", "fentanyl",
];
const STATS: &[&str] = &[
    "cox", "regression", "adjusted", "confidence", "interval", "survival", "cohort",
    "mortality", "risk", "proportional", "estimate", "significant", "analysis", "covariates",
    "multivariate", "trial", "outcome", "association", "model", "reported", "randomized",
    "baseline", "stratified", "followup",
];
const RENAL: &[&str] = &[
    "creatinine", "dialysis", "urine", "output", "nephrology", "egfr", "oliguria", "potassium",
    "rising", "acute", "chronic", "electrolytes", "uremia", "fluid", "diuretics", "low",
    "confirmed", "proteinuria", "hemodialysis", "bicarbonate", "anuric", "nephrotoxic",
    "furosemide", "oliguric",
];
const GENERAL: &[&str] = &[
    "the", "was", "in", "and", "of", "during", "night", "with", "on", "for", "to", "a", "at",
    "by", "noted", "patient", "seen", "today", "overnight", "morning", "remained", "stable",
    "team", "plan", "further", "history", "admitted", "ward", "nurse", "family", "discussed",
    "review",
];

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let n = crate::embedding::norm(&v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    v
}

/// Topic direction plus isotropic noise whose expected norm is `noise`.
fn word_vector(rng: &mut ChaCha8Rng, topic: &[f64], noise: f64) -> Vec<f32> {
    let scale = noise / (topic.len() as f64).sqrt();
    topic
        .iter()
        .zip(gaussian(rng, topic.len()))
        .map(|(t, g)| (t + scale * g) as f32)
        .collect()
}

fn add_topic(
    vocab: &mut Vocabulary,
    rng: &mut ChaCha8Rng,
    words: &[&str],
    topic: &[f64],
    noise: f64,
) {
    for w in words {
        let count = rng.random_range(20..2000);
        vocab
            .insert(w, count, Some(word_vector(rng, topic, noise)))
            .expect("fixture words are valid");
    }
}

/// Draws `n` words: from `own` with probability `p_own`, from `other` with
/// probability `p_other`, otherwise from the general list.
fn mixed_words<'w>(
    rng: &mut ChaCha8Rng,
    n: usize,
    own: &[&'w str],
    other: &[&'w str],
    p_own: f64,
    p_other: f64,
) -> Vec<&'w str> {
    (0..n)
        .map(|_| {
            let r: f64 = rng.random();
            let list = if r < p_own {
                own
            } else if r < p_own + p_other {
                other
            } else {
                GENERAL
            };
            *list.choose(rng).expect("lists are nonempty")
        })
        .collect()
}

/// Parameters of the HR benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct HrBenchmarkConfig {
    pub dim: usize,
    pub train_per_concept: usize,
    pub test_mentions: usize,
    pub words_per_side: usize,
    /// Probability that a context word comes from the concept's own topic.
    pub own_topic: f64,
    /// Probability that it comes from the other concept's topic.
    pub other_topic: f64,
    /// Expected norm of the per-word noise (topic directions have norm 1).
    pub word_noise: f64,
}

impl Default for HrBenchmarkConfig {
    fn default() -> Self {
        HrBenchmarkConfig {
            dim: 16,
            train_per_concept: 30,
            test_mentions: 174,
            words_per_side: 9,
            own_topic: 0.5,
            other_topic: 0.15,
            word_noise: 1.0,
        }
    }
}

pub const HEART_RATE: &str = "HEART_RATE";
pub const HAZARD_RATIO: &str = "HAZARD_RATIO";

/// Two concepts with unique full names ("heart rate", "hazard ratio") that
/// share the abbreviation "HR". Training documents mention the full names;
/// every test document holds one "HR" whose gold concept is the one that
/// generated its context.
pub fn hr_benchmark(seed: u64, cfg: &HrBenchmarkConfig) -> BenchmarkData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cardiac = unit(gaussian(&mut rng, cfg.dim));
    let stats = unit(gaussian(&mut rng, cfg.dim));
    let general = unit(gaussian(&mut rng, cfg.dim));
    let mut vocab = Vocabulary::new();
    add_topic(&mut vocab, &mut rng, CARDIAC, &cardiac, cfg.word_noise);
    add_topic(&mut vocab, &mut rng, STATS, &stats, cfg.word_noise);
    add_topic(&mut vocab, &mut rng, GENERAL, &general, cfg.word_noise);

    let mut cdb = ConceptDatabase::new(Lemmatizer::default());
    for (cui, name, sem) in [
        (HEART_RATE, "heart rate", "Clinical Attribute"),
        (HAZARD_RATIO, "hazard ratio", "Quantitative Concept"),
    ] {
        cdb.add_concept(cui, name, Some(sem), Some(false)).expect("valid name");
        cdb.add_concept(cui, "HR", Some(sem), Some(true)).expect("valid name");
    }

    let concepts = [(HEART_RATE, "heart rate", CARDIAC, STATS), (HAZARD_RATIO, "hazard ratio", STATS, CARDIAC)];
    let context = |rng: &mut ChaCha8Rng, own: &[&'static str], other: &[&'static str]| {
        let s = cfg.words_per_side;
        let left = mixed_words(rng, s, own, other, cfg.own_topic, cfg.other_topic).join(" ");
        let right = mixed_words(rng, s, own, other, cfg.own_topic, cfg.other_topic).join(" ");
        (left, right)
    };

    let train_pools = concepts
        .iter()
        .map(|&(_, name, own, other)| {
            (0..cfg.train_per_concept)
                .map(|_| {
                    let (l, r) = context(&mut rng, own, other);
                    format!("{l} {name} {r}.")
                })
                .collect()
        })
        .collect();

    let mut labels: Vec<usize> = (0..cfg.test_mentions).map(|i| i % 2).collect();
    labels.shuffle(&mut rng);
    let mut test_docs = Vec::with_capacity(labels.len());
    let mut test_gold = Vec::with_capacity(labels.len());
    for (i, &c) in labels.iter().enumerate() {
        let (cui, _, own, other) = concepts[c];
        let (l, r) = context(&mut rng, own, other);
        let start = l.chars().count() + 1;
        test_docs.push(format!("{l} HR {r}."));
        test_gold.push(AnnotatedDocument {
            id: i.to_string(),
            annotations: vec![SpanAnnotation {
                start,
                end: start + 2,
                text: "HR".into(),
                cui: cui.into(),
                confidence: 1.0,
            }],
        });
    }

    BenchmarkData {
        cdb,
        vocab,
        train_pools,
        test_docs,
        test_gold,
    }
}

/// End-to-end fixture: abbreviation disambiguation, a misspelling, and an
/// inflected synonym, with a training corpus of unique-name mentions.
#[derive(Debug, Clone)]
pub struct ClinicalFixture {
    pub cdb_csv: String,
    pub vocab: Vocabulary,
    pub corpus: Vec<Document>,
    pub test_docs: Vec<Document>,
}

pub const CLINICAL_TEST_TEXT: &str =
    "During the night HR was in the 40s-50s and the pattient was given 8mg/ HR of morphine infusion.";
pub const CLINICAL_RENAL_TEXT: &str =
    "Failure of kidneys was confirmed by rising creatinine and low urine output.";

/// Paths written by [`ClinicalFixture::write`].
#[derive(Debug, Clone)]
pub struct FixturePaths {
    pub cdb_csv: PathBuf,
    pub vocab: PathBuf,
    pub corpus: PathBuf,
    pub test: PathBuf,
}

impl ClinicalFixture {
    /// Writes `cdb.csv`, `vocab.txt`, `corpus.jsonl` and `test.jsonl`.
    pub fn write(&self, dir: &Path) -> io::Result<FixturePaths> {
        let paths = FixturePaths {
            cdb_csv: dir.join("cdb.csv"),
            vocab: dir.join("vocab.txt"),
            corpus: dir.join("corpus.jsonl"),
            test: dir.join("test.jsonl"),
        };
        fs::write(&paths.cdb_csv, &self.cdb_csv)?;
        let mut v = Vec::new();
        self.vocab.save(&mut v).map_err(io::Error::other)?;
        fs::write(&paths.vocab, v)?;
        fs::write(&paths.corpus, documents_jsonl(&self.corpus))?;
        fs::write(&paths.test, documents_jsonl(&self.test_docs))?;
        Ok(paths)
    }

    pub fn cdb(&self) -> ConceptDatabase {
        ConceptDatabase::import_csv(self.cdb_csv.as_bytes(), Lemmatizer::default())
            .expect("fixture CSV is valid")
            .0
    }
}

/// Serializes documents as a `{"id", "text"}` JSON-lines corpus.
pub fn documents_jsonl(docs: &[Document]) -> String {
    let mut out = String::new();
    for d in docs {
        let line = serde_json::json!({ "id": d.id, "text": d.text });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn clinical_fixture() -> ClinicalFixture {
    let cdb_csv = "\
cui,name,semantic_type,abbrev
HEART_RATE,heart rate,Clinical Attribute,0
HEART_RATE,HR,Clinical Attribute,1
HOUR,hour,Temporal Concept,0
HOUR,HR,Temporal Concept,1
HAZARD_RATIO,hazard ratio,Quantitative Concept,0
HAZARD_RATIO,HR,Quantitative Concept,1
PATIENT,patient,Patient or Disabled Group,0
KIDNEY_FAILURE,kidney failure,Disease or Syndrome,0
KIDNEY_FAILURE,Kidney failure [Disease],Disease or Syndrome,0
KIDNEY_FAILURE,renal failure,Disease or Syndrome,0
KIDNEY_FAILURE,failure of kidney,Disease or Syndrome,0
FAILURE,failure,Functional Concept,0
"
    .to_owned();

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dim = 24;
    let topics: Vec<Vec<f64>> = (0..5).map(|_| unit(gaussian(&mut rng, dim))).collect();
    let mut vocab = Vocabulary::new();
    for (words, topic) in [CARDIAC, DOSING, STATS, RENAL, GENERAL].iter().zip(&topics) {
        add_topic(&mut vocab, &mut rng, words, topic, 0.6);
    }

    let plans: [(&[&str], &[&str], &[&str]); 5] = [
        (&["heart rate", "Heart rate"], CARDIAC, GENERAL),
        (&["hour", "hours"], DOSING, GENERAL),
        (&["hazard ratio"], STATS, GENERAL),
        (&["patient"], GENERAL, RENAL),
        (&["kidney failure", "renal failure", "Renal failure"], RENAL, GENERAL),
    ];
    let mut corpus = Vec::new();
    for (names, own, other) in plans {
        for _ in 0..40 {
            let n_left = rng.random_range(5..=10);
            let n_right = rng.random_range(5..=10);
            let left = mixed_words(&mut rng, n_left, own, other, 0.6, 0.1).join(" ");
            let right = mixed_words(&mut rng, n_right, own, other, 0.6, 0.1).join(" ");
            let name = names.choose(&mut rng).expect("nonempty");
            corpus.push(format!("{left} {name} {right}."));
        }
    }
    corpus.shuffle(&mut rng);
    let corpus = corpus
        .into_iter()
        .enumerate()
        .map(|(i, text)| Document {
            id: format!("train{i:03}"),
            text,
        })
        .collect();
    let test_docs = vec![
        Document {
            id: "night".into(),
            text: CLINICAL_TEST_TEXT.into(),
        },
        Document {
            id: "renal".into(),
            text: CLINICAL_RENAL_TEXT.into(),
        },
    ];
    ClinicalFixture {
        cdb_csv,
        vocab,
        corpus,
        test_docs,
    }
}

/// Concepts with embeddings built from orthogonal organ and condition
/// directions, so that `HEART_FAILURE = KIDNEY_FAILURE - KIDNEY + HEART`
/// holds exactly. Distractors share parts of the composition.
pub fn analogy_fixture() -> ConceptDatabase {
    let dim = 6;
    let e = |i: usize| -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v
    };
    let (kidney, heart, liver, failure, pain, lung) = (e(0), e(1), e(2), e(3), e(4), e(5));
    let add = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let scale = |a: &[f64], s: f64| -> Vec<f64> { a.iter().map(|x| x * s).collect() };
    let concepts: Vec<(&str, &str, &str, Vec<f64>)> = vec![
        ("KIDNEY", "kidney", "Body Part", kidney.clone()),
        ("HEART", "heart", "Body Part", heart.clone()),
        ("LIVER", "liver", "Body Part", liver.clone()),
        ("LUNG", "lung", "Body Part", lung.clone()),
        ("KIDNEY_FAILURE", "kidney failure", "Disease or Syndrome", add(&kidney, &failure)),
        ("HEART_FAILURE", "heart failure", "Disease or Syndrome", add(&heart, &failure)),
        ("LIVER_FAILURE", "liver failure", "Disease or Syndrome", add(&liver, &failure)),
        ("CHEST_PAIN", "chest pain", "Sign or Symptom", add(&add(&heart, &lung), &pain)),
        ("KIDNEY_PAIN", "kidney pain", "Sign or Symptom", add(&kidney, &pain)),
        ("CARDIOMEGALY", "cardiomegaly", "Disease or Syndrome", add(&scale(&heart, 2.0), &lung)),
    ];
    let mut cdb = ConceptDatabase::new(Lemmatizer::default());
    for (cui, name, sem, emb) in concepts {
        cdb.add_concept(cui, name, Some(sem), Some(false)).expect("valid name");
        cdb.set_embeddings(cui, Some(emb.clone()), Some(emb), 10)
            .expect("consistent dimensions");
    }
    cdb
}

/// Size parameters of the throughput corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleConfig {
    pub names: usize,
    pub documents: usize,
    pub tokens_per_document: usize,
    pub words: usize,
    pub dim: usize,
    /// Fraction of names shared by two concepts.
    pub ambiguous_fraction: f64,
    /// Probability that a document position starts a name mention.
    pub mention_rate: f64,
    /// Probability that a filler token is a misspelling.
    pub typo_rate: f64,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            names: 100_000,
            documents: 10_000,
            tokens_per_document: 200,
            words: 20_000,
            dim: 32,
            ambiguous_fraction: 0.05,
            mention_rate: 0.05,
            typo_rate: 0.002,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScaleData {
    pub cdb: ConceptDatabase,
    pub vocab: Vocabulary,
    pub documents: Vec<String>,
}

fn pseudo_words(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    const ONSETS: &[&str] = &[
        "b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "t", "v", "z", "br", "cl",
        "tr", "ph", "st",
    ];
    const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ia", "eo"];
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let syllables = rng.random_range(2..=4);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS.choose(rng).expect("nonempty"));
            w.push_str(VOWELS.choose(rng).expect("nonempty"));
        }
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// A large random CDB with trained-looking embeddings and documents mixing
/// filler words, name mentions and a few misspellings.
pub fn scale_corpus(seed: u64, cfg: &ScaleConfig) -> ScaleData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = pseudo_words(&mut rng, cfg.words);
    let mut vocab = Vocabulary::new();
    for w in &words {
        let count = rng.random_range(1..10_000);
        let v: Vec<f32> = gaussian(&mut rng, cfg.dim).iter().map(|&x| x as f32).collect();
        vocab.insert(w, count, Some(v)).expect("valid word");
    }

    let mut cdb = ConceptDatabase::new(Lemmatizer::default());
    let mut names: Vec<String> = Vec::with_capacity(cfg.names);
    let mut seen = HashSet::new();
    let mut concept = 0usize;
    while names.len() < cfg.names {
        let len = rng.random_range(1..=3);
        let name = (0..len)
            .map(|_| words.choose(&mut rng).expect("nonempty").as_str())
            .collect::<Vec<_>>()
            .join(" ");
        if !seen.insert(name.clone()) {
            continue;
        }
        // most concepts carry two names
        if names.len().is_multiple_of(2) {
            concept += 1;
        }
        cdb.add_concept(&format!("S{concept:06}"), &name, None, Some(false))
            .expect("valid name");
        if rng.random_bool(cfg.ambiguous_fraction) {
            cdb.add_concept(&format!("S{:06}", concept + 1_000_000), &name, None, Some(false))
                .expect("valid name");
        }
        names.push(name);
    }
    let cuis: Vec<String> = cdb.concepts().iter().map(|c| c.cui.clone()).collect();
    for cui in cuis {
        let long = gaussian(&mut rng, cfg.dim);
        let short = gaussian(&mut rng, cfg.dim);
        cdb.set_embeddings(&cui, Some(long), Some(short), 5)
            .expect("consistent dimensions");
    }

    let typos: Vec<String> = words
        .iter()
        .filter(|w| w.len() >= 6)
        .take(50)
        .map(|w| {
            let mut c: Vec<char> = w.chars().collect();
            c.swap(1, 2);
            c.into_iter().collect()
        })
        .collect();
    let documents = (0..cfg.documents)
        .map(|_| {
            let mut toks: Vec<&str> = Vec::with_capacity(cfg.tokens_per_document + 3);
            while toks.len() < cfg.tokens_per_document {
                if rng.random_bool(cfg.mention_rate) {
                    toks.extend(names.choose(&mut rng).expect("nonempty").split(' '));
                } else if rng.random_bool(cfg.typo_rate) {
                    toks.push(typos.choose(&mut rng).expect("nonempty"));
                } else {
                    toks.push(words.choose(&mut rng).expect("nonempty"));
                }
            }
            toks.join(" ")
        })
        .collect();
    ScaleData {
        cdb,
        vocab,
        documents,
    }
}
