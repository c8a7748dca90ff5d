use conceptlink::embedding::cosine;
use conceptlink::eval::{run_disambiguation_benchmark, BenchmarkData};
use conceptlink::jsonl::{AnnotatedDocument, SpanAnnotation};
use conceptlink::link::update::{learning_rate, negative_update, positive_update};
use conceptlink::link::train_unsupervised;
use conceptlink::synth::{clinical_fixture, hr_benchmark, scale_corpus, HrBenchmarkConfig, ScaleConfig};
use conceptlink::{
    Annotator, ConceptDatabase, ExecMode, Lemmatizer, LinkerConfig, SpellConfig, Trainer, Vocabulary,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            let x: f64 = StandardNormal.sample(rng);
            scale * x
        })
        .collect()
}

fn trained_fixture(seed: u64) -> (ConceptDatabase, Vocabulary, LinkerConfig) {
    let f = clinical_fixture();
    let mut cdb = f.cdb();
    let cfg = LinkerConfig {
        seed,
        ..LinkerConfig::default()
    };
    train_unsupervised(&mut cdb, &f.vocab, f.corpus.iter().map(|d| Ok(d.text.clone())), &cfg).unwrap();
    (cdb, f.vocab, cfg)
}

#[test]
fn training_is_bit_reproducible() {
    let (a, _, _) = trained_fixture(42);
    let (b, _, _) = trained_fixture(42);
    let (c, _, _) = trained_fixture(43);
    let mut differs = false;
    for ((x, y), z) in a.concepts().iter().zip(b.concepts()).zip(c.concepts()) {
        assert_eq!(x.embedding_long, y.embedding_long);
        assert_eq!(x.embedding_short, y.embedding_short);
        assert_eq!(x.train_count, y.train_count);
        differs |= x.embedding_long != z.embedding_long;
    }
    assert!(differs, "the seed should drive negative sampling");
}

#[test]
fn self_training_converges_on_a_fixed_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dim = 16;
    let u: Vec<f64> = gaussian(&mut rng, dim, 1.0);
    let mut concept = vec![0.0; dim];
    for n in 1..=50u64 {
        let ctx: Vec<f64> = u
            .iter()
            .zip(gaussian(&mut rng, dim, 0.3))
            .map(|(a, b)| a + b)
            .collect();
        let lr = learning_rate(n);
        positive_update(&mut concept, &ctx, lr);
        let background = gaussian(&mut rng, dim, 0.25);
        negative_update(&mut concept, &background, lr);
    }
    assert!(cosine(&concept, &u) > 0.95, "cosine {}", cosine(&concept, &u));
}

#[test]
fn trainer_converges_on_topic_contexts() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dim = 16;
    let u: Vec<f64> = gaussian(&mut rng, dim, 1.0);
    // topic words are rare so negative samples come mostly from background noise
    let mut vocab = Vocabulary::new();
    let topic: Vec<String> = (0..10).map(|i| format!("topic{}", (b'a' + i) as char)).collect();
    for w in &topic {
        let v: Vec<f32> = u
            .iter()
            .zip(gaussian(&mut rng, dim, 0.1))
            .map(|(a, b)| (a + b) as f32)
            .collect();
        vocab.insert(w, 5, Some(v)).unwrap();
    }
    for i in 0..200 {
        let v: Vec<f32> = gaussian(&mut rng, dim, 0.25).iter().map(|&x| x as f32).collect();
        vocab.insert(&format!("noise{i}"), 100, Some(v)).unwrap();
    }
    let mut cdb = ConceptDatabase::new(Lemmatizer::default());
    cdb.add_concept("C", "target concept", None, None).unwrap();
    let docs = (0..50).map(|_| {
        let pick = |rng: &mut ChaCha8Rng| topic[rng.random_range(0..topic.len())].clone();
        let left: Vec<String> = (0..9).map(|_| pick(&mut rng)).collect();
        let right: Vec<String> = (0..9).map(|_| pick(&mut rng)).collect();
        Ok(format!("{} target concept {}", left.join(" "), right.join(" ")))
    });
    let docs: Vec<_> = docs.collect();
    let report = train_unsupervised(&mut cdb, &vocab, docs, &LinkerConfig::default()).unwrap();
    assert_eq!(report.mentions_used, 50);
    let rec = cdb.get("C").unwrap();
    let long = rec.embedding_long.as_ref().unwrap();
    assert!(cosine(long, &u) > 0.95, "cosine {}", cosine(long, &u));
}

#[test]
fn linking_is_scale_invariant() {
    let (cdb, vocab, cfg) = trained_fixture(0);
    let f = clinical_fixture();
    let mut scaled = cdb.clone();
    for (i, c) in cdb.concepts().iter().enumerate() {
        let k = 0.25 + i as f64 * 1.7;
        let mul = |v: &Option<Vec<f64>>| v.as_ref().map(|v| v.iter().map(|x| x * k).collect());
        scaled
            .set_embeddings(&c.cui, mul(&c.embedding_long), mul(&c.embedding_short), c.train_count)
            .unwrap();
    }
    let a = Annotator::new(&cdb, &vocab, cfg.clone(), SpellConfig::default()).unwrap();
    let b = Annotator::new(&scaled, &vocab, cfg, SpellConfig::default()).unwrap();
    for d in f.corpus.iter().chain(&f.test_docs) {
        let x = a.annotate(&d.text).annotations;
        let y = b.annotate(&d.text).annotations;
        assert_eq!(x.len(), y.len());
        for (p, q) in x.iter().zip(&y) {
            assert_eq!((p.start, p.end, &p.cui), (q.start, q.end, &q.cui));
            assert!((p.confidence - q.confidence).abs() < 1e-9);
        }
    }
}

#[test]
fn batch_annotation_independent_of_mode() {
    let cfg = ScaleConfig {
        names: 2_000,
        documents: 64,
        words: 800,
        ..ScaleConfig::default()
    };
    let data = scale_corpus(5, &cfg);
    let ann = Annotator::new(&data.cdb, &data.vocab, LinkerConfig::default(), SpellConfig::default()).unwrap();
    let seq = ann.annotate_batch(&data.documents, ExecMode::Sequential).unwrap();
    assert_eq!(seq, ann.annotate_batch(&data.documents, ExecMode::Parallel).unwrap());
    assert_eq!(seq, ann.annotate_batch(&data.documents, ExecMode::Workers(3)).unwrap());
    assert!(seq.iter().any(|r| !r.annotations.is_empty()));
}

#[test]
fn trained_model_round_trips_through_the_container() {
    let (cdb, vocab, cfg) = trained_fixture(0);
    let mut bytes = Vec::new();
    cdb.save(&mut bytes).unwrap();
    let loaded = ConceptDatabase::load(bytes.as_slice()).unwrap();
    let mut again = Vec::new();
    loaded.save(&mut again).unwrap();
    assert_eq!(bytes, again);
    let f = clinical_fixture();
    let a = Annotator::new(&cdb, &vocab, cfg.clone(), SpellConfig::default()).unwrap();
    let b = Annotator::new(&loaded, &vocab, cfg, SpellConfig::default()).unwrap();
    for d in &f.test_docs {
        let cuis = |r: Vec<conceptlink::Annotation>| r.into_iter().map(|a| a.cui).collect::<Vec<_>>();
        assert_eq!(cuis(a.annotate(&d.text).annotations), cuis(b.annotate(&d.text).annotations));
    }
}

#[test]
fn minimum_count_marks_concepts_untrained() {
    let f = clinical_fixture();
    let mut cdb = f.cdb();
    let docs: Vec<_> = f
        .corpus
        .iter()
        .filter(|d| d.text.contains("hazard ratio"))
        .take(2)
        .map(|d| Ok(d.text.clone()))
        .collect();
    let report = train_unsupervised(&mut cdb, &f.vocab, docs, &LinkerConfig::default()).unwrap();
    assert_eq!(report.concepts_below_threshold, 1);
    let rec = cdb.get("HAZARD_RATIO").unwrap();
    assert_eq!(rec.train_count, 2);
    assert!(rec.has_embedding() && !rec.is_trained(3));
}

/// Two concepts whose contexts come from disjoint, orthogonal word sets.
fn separable_benchmark() -> BenchmarkData {
    let mut vocab = Vocabulary::new();
    let a_words = ["apex", "atrium", "aorta", "artery"];
    let b_words = ["beta", "bias", "bound", "bayes"];
    for (i, w) in a_words.iter().enumerate() {
        vocab.insert(w, 10 + i as u64, Some(vec![1.0, 0.0, 0.1 * i as f32])).unwrap();
    }
    for (i, w) in b_words.iter().enumerate() {
        vocab.insert(w, 10 + i as u64, Some(vec![0.0, 1.0, 0.1 * i as f32])).unwrap();
    }
    let mut cdb = ConceptDatabase::new(Lemmatizer::default());
    for (cui, name) in [("A", "alpha concept"), ("B", "beta concept")] {
        cdb.add_concept(cui, name, None, Some(false)).unwrap();
        cdb.add_concept(cui, "AB", None, Some(true)).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ctx = |words: &[&str]| -> (String, String) {
        let mut side = || {
            (0..9)
                .map(|_| words[rng.random_range(0..words.len())])
                .collect::<Vec<_>>()
                .join(" ")
        };
        (side(), side())
    };
    let mut pools = vec![Vec::new(), Vec::new()];
    for _ in 0..30 {
        let (l, r) = ctx(&a_words);
        pools[0].push(format!("{l} alpha concept {r}"));
        let (l, r) = ctx(&b_words);
        pools[1].push(format!("{l} beta concept {r}"));
    }
    let mut test_docs = Vec::new();
    let mut test_gold = Vec::new();
    for i in 0..200 {
        let (cui, words) = if i % 2 == 0 { ("A", &a_words) } else { ("B", &b_words) };
        let (l, r) = ctx(words);
        let start = l.len() + 1;
        test_docs.push(format!("{l} AB {r}"));
        test_gold.push(AnnotatedDocument {
            id: i.to_string(),
            annotations: vec![SpanAnnotation {
                start,
                end: start + 2,
                text: "AB".into(),
                cui: cui.into(),
                confidence: 1.0,
            }],
        });
    }
    BenchmarkData {
        cdb,
        vocab,
        train_pools: pools,
        test_docs,
        test_gold,
    }
}

#[test]
fn separable_benchmark_is_perfect_at_full_size() {
    let data = separable_benchmark();
    // every test context points strictly towards its gold concept's words
    for (doc, gold) in data.test_docs.iter().zip(&data.test_gold) {
        let mut sum = [0.0f64; 3];
        for w in doc.split(' ').filter(|w| *w != "AB") {
            for (s, x) in sum.iter_mut().zip(data.vocab.vector(w).unwrap()) {
                *s += f64::from(*x);
            }
        }
        let to_a = cosine(&sum, &[1.0, 0.0, 0.0]);
        let to_b = cosine(&sum, &[0.0, 1.0, 0.0]);
        assert_eq!(to_a > to_b, gold.annotations[0].cui == "A");
    }
    let cfg = LinkerConfig {
        min_train_count: 1,
        ..LinkerConfig::default()
    };
    let rows = run_disambiguation_benchmark(&data, &[1, 30], &cfg, ExecMode::Sequential).unwrap();
    assert_eq!((rows[0].size, rows[0].parts), (1, 30));
    assert_eq!((rows[1].size, rows[1].parts), (30, 1));
    assert_eq!(rows[1].mean_f1, 1.0);
    assert!(run_disambiguation_benchmark(&data, &[31], &cfg, ExecMode::Sequential).is_err());
    assert!(run_disambiguation_benchmark(&data, &[0], &cfg, ExecMode::Sequential).is_err());
}

#[test]
fn hr_pair_trained_on_thirty_mentions_disambiguates() {
    let data = hr_benchmark(0, &HrBenchmarkConfig::default());
    let mut cdb = data.cdb.clone();
    let cfg = LinkerConfig::default();
    let report = {
        let mut t = Trainer::new(&mut cdb, &data.vocab, cfg.clone(), SpellConfig::default()).unwrap();
        for pool in &data.train_pools {
            for d in pool {
                t.train_document(d).unwrap();
            }
        }
        t.finish()
    };
    assert_eq!(report.mentions_used, 60);
    assert_eq!(report.concepts_trained, 2);
    let rows = run_disambiguation_benchmark(&data, &[30], &cfg, ExecMode::Sequential).unwrap();
    assert!(rows[0].mean_f1 >= 0.80, "F1 {}", rows[0].mean_f1);
}
