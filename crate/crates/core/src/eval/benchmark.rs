use serde::Serialize;

use super::score::score;
use crate::cdb::ConceptDatabase;
use crate::error::{Error, Result};
use crate::jsonl::{AnnotatedDocument, SpanAnnotation};
use crate::link::{Annotator, LinkerConfig, Trainer};
use crate::normalize::SpellConfig;
use crate::parallel::ExecMode;
use crate::vocab::Vocabulary;

/// Inputs of the training-size experiment.
#[derive(Debug, Clone)]
pub struct BenchmarkData {
    /// Untrained database holding the benchmark concepts.
    pub cdb: ConceptDatabase,
    pub vocab: Vocabulary,
    /// Per concept, training documents with one unique-name mention each.
    pub train_pools: Vec<Vec<String>>,
    /// Held-out documents; their ids are their positions as strings.
    pub test_docs: Vec<String>,
    pub test_gold: Vec<AnnotatedDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRow {
    pub size: usize,
    pub parts: usize,
    pub mean_f1: f64,
    pub part_f1: Vec<f64>,
}

/// For each size `m`, splits every concept's training pool into disjoint
/// parts of `m` mentions, trains a fresh copy of the database on each part
/// and scores it on the test set. Reports the mean F1 over parts.
pub fn run_disambiguation_benchmark(
    data: &BenchmarkData,
    sizes: &[usize],
    cfg: &LinkerConfig,
    mode: ExecMode,
) -> Result<Vec<BenchmarkRow>> {
    let pool = data.train_pools.iter().map(Vec::len).min().unwrap_or(0);
    for &m in sizes {
        if m == 0 || m > pool {
            return Err(Error::Config(format!(
                "training size {m} outside 1..={pool} (training pool size)"
            )));
        }
    }
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&m| (0..pool / m).map(move |p| (m, p)))
        .collect();
    let f1s = mode.map(&jobs, |&(m, p)| run_part(data, m, p, cfg))?;
    let f1s: Vec<f64> = f1s.into_iter().collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(sizes.len());
    let mut offset = 0;
    for &m in sizes {
        let parts = pool / m;
        let part_f1 = f1s[offset..offset + parts].to_vec();
        offset += parts;
        rows.push(BenchmarkRow {
            size: m,
            parts,
            mean_f1: part_f1.iter().sum::<f64>() / parts as f64,
            part_f1,
        });
    }
    Ok(rows)
}

fn run_part(data: &BenchmarkData, m: usize, part: usize, cfg: &LinkerConfig) -> Result<f64> {
    let mut cdb = data.cdb.clone();
    {
        let mut trainer = Trainer::new(&mut cdb, &data.vocab, cfg.clone(), SpellConfig::default())?;
        // interleave concepts so neither is trained entirely before the other
        for i in part * m..(part + 1) * m {
            for pool in &data.train_pools {
                trainer.train_document(&pool[i])?;
            }
        }
    }
    let annotator = Annotator::new(&cdb, &data.vocab, cfg.clone(), SpellConfig::default())?;
    let predicted: Vec<AnnotatedDocument> = data
        .test_docs
        .iter()
        .enumerate()
        .map(|(i, text)| AnnotatedDocument {
            id: i.to_string(),
            annotations: annotator
                .annotate(text)
                .annotations
                .iter()
                .map(SpanAnnotation::from)
                .collect(),
        })
        .collect();
    Ok(score(&data.test_gold, &predicted)?.f1)
}
