//! Command-line front end. [`run`] is the whole program; `main` only binds
//! it to the process's arguments and standard streams.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use conceptlink::corpus;
use conceptlink::eval::{run_disambiguation_benchmark, score};
use conceptlink::jsonl::{self, SpanAnnotation};
use conceptlink::normalize::RuleLemmatizer;
use conceptlink::synth::{hr_benchmark, HrBenchmarkConfig};
use conceptlink::{
    Annotator, ConceptDatabase, CoocMatrix, CoocMode, EmitMode, ExecMode, Lemmatizer,
    LinkerConfig, SpellConfig, Trainer, Vocabulary,
};

#[derive(Parser, Debug)]
#[command(name = "conceptlink", version, about = "Concept recognition and linking with unsupervised context embeddings")]
struct Cli {
    /// Worker threads for annotation and benchmarks (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Seed for negative sampling and synthetic data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Import a `cui,name,semantic_type,abbrev` CSV into a CDB file.
    BuildCdb(BuildCdbArgs),
    /// Train concept embeddings on a corpus.
    Train(TrainArgs),
    /// Annotate documents, writing JSON lines.
    Annotate(AnnotateArgs),
    /// Score predicted annotations against gold annotations.
    Eval(EvalArgs),
    /// List the concepts most similar to one concept.
    Similar(SimilarArgs),
    /// Rank concepts by similarity to POS1 - NEG + POS2.
    Analogy(AnalogyArgs),
    /// Run the synthetic HR training-size benchmark.
    Benchmark(BenchmarkArgs),
}

#[derive(Args, Debug)]
struct BuildCdbArgs {
    /// Input CSV.
    csv: PathBuf,
    /// Where to write the CDB.
    #[arg(long)]
    out: PathBuf,
    /// Extra lemma exceptions, one `form<TAB>lemma` per line.
    #[arg(long)]
    lemma_exceptions: Option<PathBuf>,
    /// Match names on lowercased forms only, without lemmatization.
    #[arg(long)]
    no_lemmatize: bool,
    /// Names with more words are rejected.
    #[arg(long, default_value_t = conceptlink::cdb::DEFAULT_MAX_NAME_WORDS)]
    max_name_words: usize,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// CDB file written by `build-cdb` or `train`.
    #[arg(long)]
    cdb: PathBuf,
    /// Vocabulary, one `word<TAB>count[<TAB>vector]` per line.
    #[arg(long)]
    vocab: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct LinkerArgs {
    /// Words on each side for the long context.
    #[arg(long, default_value_t = 9)]
    s_long: usize,
    /// Words on each side for the short context.
    #[arg(long, default_value_t = 2)]
    s_short: usize,
    /// Minimum context similarity for an annotation.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// Minimum training mentions for a concept to take part in linking
    /// [default: 3, or 1 for `benchmark`].
    #[arg(long)]
    min_count: Option<u64>,
    /// `longest` keeps only the longest overlapping names.
    #[arg(long, value_enum, default_value_t = EmitArg::Longest)]
    emit_mode: EmitArg,
    /// Emit unique names of untrained concepts with confidence 1.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    allow_untrained_unique: bool,
    /// Negative samples per update are this factor times the window size.
    #[arg(long, default_value_t = 2)]
    negative_k_factor: usize,
    /// Spelling edit budget for words shorter than `--spell-length-threshold`.
    #[arg(long, default_value_t = 1)]
    spell_max_edits_short: usize,
    /// Spelling edit budget for longer words.
    #[arg(long, default_value_t = 2)]
    spell_max_edits_long: usize,
    /// Word length at which the long edit budget applies.
    #[arg(long, default_value_t = 6)]
    spell_length_threshold: usize,
}

impl LinkerArgs {
    fn linker(&self, seed: u64, default_min_count: u64) -> LinkerConfig {
        LinkerConfig {
            s_long: self.s_long,
            s_short: self.s_short,
            similarity_threshold: self.threshold,
            min_train_count: self.min_count.unwrap_or(default_min_count),
            negative_k_factor: self.negative_k_factor,
            allow_untrained_unique: self.allow_untrained_unique,
            emit_mode: self.emit_mode.into(),
            seed,
        }
    }

    fn spell(&self) -> SpellConfig {
        SpellConfig {
            max_edits_short: self.spell_max_edits_short,
            max_edits_long: self.spell_max_edits_long,
            length_threshold: self.spell_length_threshold,
            ..SpellConfig::default()
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum EmitArg {
    Longest,
    All,
}

impl From<EmitArg> for EmitMode {
    fn from(e: EmitArg) -> Self {
        match e {
            EmitArg::Longest => EmitMode::Longest,
            EmitArg::All => EmitMode::All,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum CoocArg {
    PerBlock,
    PerOccurrence,
}

impl From<CoocArg> for CoocMode {
    fn from(c: CoocArg) -> Self {
        match c {
            CoocArg::PerBlock => CoocMode::PerBlock,
            CoocArg::PerOccurrence => CoocMode::PerOccurrence,
        }
    }
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Directory of `.txt` files or a JSON-lines file of `{"id", "text"}`.
    #[arg(long)]
    corpus: PathBuf,
    /// Where to write the trained CDB.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    linker: LinkerArgs,
}

#[derive(Args, Debug)]
struct AnnotateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Directory of `.txt` files or a JSON-lines file of `{"id", "text"}`.
    #[arg(long)]
    input: PathBuf,
    /// Output JSON-lines file.
    #[arg(long)]
    out: PathBuf,
    /// Write the co-occurrence matrix of the annotations as CSV.
    #[arg(long)]
    cooc_out: Option<PathBuf>,
    /// Count each pair once per document or once per pair of mentions.
    #[arg(long, value_enum, default_value_t = CoocArg::PerBlock)]
    cooc_mode: CoocArg,
    /// Save the CDB with the accumulated co-occurrences.
    #[arg(long)]
    cdb_out: Option<PathBuf>,
    #[command(flatten)]
    linker: LinkerArgs,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Gold annotations as JSON lines.
    #[arg(long)]
    gold: PathBuf,
    /// Predicted annotations as JSON lines.
    #[arg(long)]
    predicted: PathBuf,
    /// Also write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimilarArgs {
    /// Trained CDB file.
    #[arg(long)]
    cdb: PathBuf,
    cui: String,
    /// Number of concepts to list.
    #[arg(long, default_value_t = 8)]
    k: usize,
    /// Only rank concepts of this semantic type.
    #[arg(long = "type")]
    semantic_type: Option<String>,
}

#[derive(Args, Debug)]
struct AnalogyArgs {
    /// Trained CDB file.
    #[arg(long)]
    cdb: PathBuf,
    pos1: String,
    neg: String,
    pos2: String,
    /// Number of concepts to list.
    #[arg(long, default_value_t = 8)]
    k: usize,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    /// Training mentions per concept to evaluate.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 5, 10, 30])]
    sizes: Vec<usize>,
    /// Number of generator seeds, starting at `--seed`, to average over.
    #[arg(long, default_value_t = 1)]
    repeats: u64,
    /// Also write the table as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    linker: LinkerArgs,
}

/// Runs the program and returns its exit status: 0 on success, 1 for
/// domain errors (unknown or untrained concept, bad configuration), 2 for
/// I/O and parse errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<conceptlink::Error>() {
        Some(ce) if ce.is_domain() => 1,
        _ => 2,
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mode = ExecMode::from_workers(cli.workers);
    match cli.command {
        Command::BuildCdb(a) => build_cdb(&a, out),
        Command::Train(a) => train(&a, cli.seed, out, err),
        Command::Annotate(a) => annotate(&a, cli.seed, mode, out, err),
        Command::Eval(a) => eval(&a, out),
        Command::Similar(a) => similar(&a, out),
        Command::Analogy(a) => analogy(&a, out),
        Command::Benchmark(a) => benchmark(&a, cli.seed, mode, out),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("cannot open {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn load_cdb(path: &Path) -> Result<ConceptDatabase> {
    ConceptDatabase::load(open(path)?).with_context(|| format!("cannot read CDB {}", path.display()))
}

fn load_vocab(path: &Path) -> Result<Vocabulary> {
    Vocabulary::load(BufReader::new(open(path)?))
        .with_context(|| format!("cannot read vocabulary {}", path.display()))
}

fn save_cdb(cdb: &ConceptDatabase, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    cdb.save(&mut w)?;
    w.flush()?;
    Ok(())
}

fn build_cdb(a: &BuildCdbArgs, out: &mut dyn Write) -> Result<()> {
    let lemmatizer = match (&a.lemma_exceptions, a.no_lemmatize) {
        (_, true) => Lemmatizer::Identity,
        (Some(p), false) => Lemmatizer::Rules(
            RuleLemmatizer::load_exceptions(BufReader::new(open(p)?))
                .with_context(|| format!("cannot read lemma exceptions {}", p.display()))?,
        ),
        (None, false) => Lemmatizer::default(),
    };
    let mut cdb = ConceptDatabase::new(lemmatizer).with_max_name_words(a.max_name_words);
    let report = cdb
        .extend_from_csv(open(&a.csv)?)
        .with_context(|| format!("cannot import {}", a.csv.display()))?;
    save_cdb(&cdb, &a.out)?;
    writeln!(
        out,
        "{} names, {} concepts, rejected: {}",
        report.rows - report.rejected,
        cdb.len(),
        report.rejected
    )?;
    for (line, reason) in &report.rejections {
        writeln!(out, "  line {line}: {reason}")?;
    }
    Ok(())
}

fn train(a: &TrainArgs, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut cdb = load_cdb(&a.model.cdb)?;
    let vocab = load_vocab(&a.model.vocab)?;
    let docs = corpus::open(&a.corpus).with_context(|| format!("cannot open corpus {}", a.corpus.display()))?;
    let started = Instant::now();
    let mut trainer = Trainer::new(&mut cdb, &vocab, a.linker.linker(seed, 3), a.linker.spell())?;
    for doc in docs {
        match doc {
            Ok(d) => trainer.train_document(&d.text)?,
            Err(e) => {
                writeln!(err, "warning: skipping unreadable document {e}")?;
                trainer.skip_document();
            }
        }
    }
    let report = trainer.finish();
    save_cdb(&cdb, &a.out)?;
    writeln!(out, "documents: {} (skipped: {})", report.documents, report.documents_skipped)?;
    writeln!(out, "mentions used: {}", report.mentions_used)?;
    writeln!(out, "concepts trained: {}", report.concepts_trained)?;
    writeln!(out, "concepts below min count: {}", report.concepts_below_threshold)?;
    writeln!(out, "untrained concepts: {}", report.concepts_untrained)?;
    log_time(err, "training", started)
}

fn log_time(err: &mut dyn Write, what: &str, started: Instant) -> Result<()> {
    if std::env::var_os("CONCEPTLINK_TIMING").is_some() {
        writeln!(err, "{what} took {:.2?}", started.elapsed())?;
    }
    Ok(())
}

/// Documents are annotated in chunks so the input is never fully resident.
const ANNOTATE_CHUNK: usize = 512;

fn annotate(a: &AnnotateArgs, seed: u64, mode: ExecMode, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut cdb = load_cdb(&a.model.cdb)?;
    let vocab = load_vocab(&a.model.vocab)?;
    let cfg = a.linker.linker(seed, 3);
    if !cdb.concepts().iter().any(|c| c.is_trained(cfg.min_train_count)) {
        writeln!(err, "warning: no concept is trained; only unique names can be annotated")?;
    }
    let docs = corpus::open(&a.input).with_context(|| format!("cannot open input {}", a.input.display()))?;
    let mut writer = create(&a.out)?;
    let mut cooc = CoocMatrix::new(a.cooc_mode.into());
    let want_cooc = a.cooc_out.is_some() || a.cdb_out.is_some();
    let started = Instant::now();
    let mut count = 0usize;
    {
        let annotator = Annotator::new(&cdb, &vocab, cfg, a.linker.spell())?;
        let mut chunk = Vec::with_capacity(ANNOTATE_CHUNK);
        let mut docs = docs.peekable();
        while docs.peek().is_some() {
            chunk.clear();
            for doc in docs.by_ref() {
                match doc {
                    Ok(d) => chunk.push(d),
                    Err(e) => writeln!(err, "warning: skipping unreadable document {e}")?,
                }
                if chunk.len() == ANNOTATE_CHUNK {
                    break;
                }
            }
            let texts: Vec<&str> = chunk.iter().map(|d| d.text.as_str()).collect();
            let results = annotator.annotate_batch(&texts, mode)?;
            for (doc, res) in chunk.iter().zip(results) {
                let anns: Vec<SpanAnnotation> = res.annotations.iter().map(SpanAnnotation::from).collect();
                if want_cooc {
                    let cuis: Vec<&str> = anns.iter().map(|x| x.cui.as_str()).collect();
                    cooc.update(&cuis);
                }
                jsonl::write_document(&mut writer, &doc.id, &anns)?;
                count += 1;
            }
        }
    }
    writer.flush()?;
    if let Some(p) = &a.cooc_out {
        let mut w = create(p)?;
        cooc.write_csv(&mut w)?;
        w.flush()?;
    }
    if let Some(p) = &a.cdb_out {
        cdb.cooc.merge(&cooc);
        save_cdb(&cdb, p)?;
    }
    writeln!(out, "annotated {count} documents")?;
    log_time(err, "annotation", started)
}

fn read_annotations(path: &Path) -> Result<Vec<jsonl::AnnotatedDocument>> {
    let reader: Box<dyn BufRead> = Box::new(BufReader::new(open(path)?));
    jsonl::read_documents(reader).with_context(|| format!("cannot parse {}", path.display()))
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let gold = read_annotations(&a.gold)?;
    let predicted = read_annotations(&a.predicted)?;
    let report = score(&gold, &predicted)?;
    write!(out, "{report}")?;
    if let Some(p) = &a.json {
        let mut w = create(p)?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}

fn print_ranking(cdb: &ConceptDatabase, ranking: &[(String, f64)], out: &mut dyn Write) -> io::Result<()> {
    for (i, (cui, sim)) in ranking.iter().enumerate() {
        let name = cdb.get(cui).map(|c| c.preferred_name().display()).unwrap_or_default();
        writeln!(out, "{}\t{cui}\t{sim:.6}\t{name}", i + 1)?;
    }
    Ok(())
}

fn similar(a: &SimilarArgs, out: &mut dyn Write) -> Result<()> {
    let cdb = load_cdb(&a.cdb)?;
    let ranking = cdb.most_similar(&a.cui, a.k, a.semantic_type.as_deref())?;
    print_ranking(&cdb, &ranking, out)?;
    Ok(())
}

fn analogy(a: &AnalogyArgs, out: &mut dyn Write) -> Result<()> {
    let cdb = load_cdb(&a.cdb)?;
    let ranking = cdb.analogy(&a.pos1, &a.neg, &a.pos2, a.k)?;
    print_ranking(&cdb, &ranking, out)?;
    Ok(())
}

fn benchmark(a: &BenchmarkArgs, seed: u64, mode: ExecMode, out: &mut dyn Write) -> Result<()> {
    if a.repeats == 0 {
        return Err(conceptlink::Error::Config("--repeats must be at least 1".into()).into());
    }
    let cfg = a.linker.linker(seed, 1);
    let mut sums = vec![0.0; a.sizes.len()];
    let mut parts = vec![0; a.sizes.len()];
    for s in seed..seed + a.repeats {
        let data = hr_benchmark(s, &HrBenchmarkConfig::default());
        let rows = run_disambiguation_benchmark(&data, &a.sizes, &LinkerConfig { seed: s, ..cfg.clone() }, mode)?;
        for (i, r) in rows.iter().enumerate() {
            sums[i] += r.mean_f1;
            parts[i] = r.parts;
        }
    }
    let table: Vec<(usize, usize, f64)> = a
        .sizes
        .iter()
        .zip(&parts)
        .zip(&sums)
        .map(|((&size, &p), &sum)| (size, p, sum / a.repeats as f64))
        .collect();
    writeln!(out, "{:>6} {:>6} {:>8}", "size", "parts", "mean_f1")?;
    for (size, p, f1) in &table {
        writeln!(out, "{size:>6} {p:>6} {f1:>8.4}")?;
    }
    if let Some(path) = &a.json {
        let rows: Vec<_> = table
            .iter()
            .map(|(size, p, f1)| serde_json::json!({ "size": size, "parts": p, "mean_f1": f1 }))
            .collect();
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &rows)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}
