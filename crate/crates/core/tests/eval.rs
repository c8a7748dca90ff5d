use std::collections::BTreeSet;

use conceptlink::eval::score;
use conceptlink::jsonl::{AnnotatedDocument, SpanAnnotation};
use proptest::prelude::*;

fn span(start: usize, end: usize, cui: &str) -> SpanAnnotation {
    SpanAnnotation {
        start,
        end,
        text: String::new(),
        cui: cui.into(),
        confidence: 1.0,
    }
}

fn doc(id: &str, anns: Vec<SpanAnnotation>) -> AnnotatedDocument {
    AnnotatedDocument {
        id: id.into(),
        annotations: anns,
    }
}

fn key() -> impl Strategy<Value = (usize, usize, String)> {
    (0usize..6, 1usize..3, prop::sample::select(vec!["A", "B", "C"]))
        .prop_map(|(s, l, c)| (s, s + l, c.to_string()))
}

proptest! {
    #[test]
    fn counts_partition_both_sides(
        gold in prop::collection::btree_set(key(), 0..12),
        pred in prop::collection::vec(key(), 0..12),
        seed in any::<u64>(),
    ) {
        let gold_doc = doc("d", gold.iter().map(|(s, e, c)| span(*s, *e, c)).collect());
        let pred_doc = doc("d", pred.iter().map(|(s, e, c)| span(*s, *e, c)).collect());
        let r = score(std::slice::from_ref(&gold_doc), std::slice::from_ref(&pred_doc)).unwrap();
        prop_assert_eq!(r.true_positives + r.false_positives, pred.len());
        prop_assert_eq!(r.true_positives + r.false_negatives, gold.len());
        let distinct: BTreeSet<_> = pred.iter().cloned().collect();
        prop_assert_eq!(r.true_positives, distinct.intersection(&gold).count());

        // order of annotations within a document does not matter
        let mut rotated = pred_doc.clone();
        let n = rotated.annotations.len().max(1);
        rotated.annotations.rotate_left(seed as usize % n);
        rotated.annotations.reverse();
        let mut gold_rev = gold_doc.clone();
        gold_rev.annotations.reverse();
        prop_assert_eq!(r, score(&[gold_rev], &[rotated]).unwrap());
    }
}

#[test]
fn hand_counted_fixture() {
    let gold = vec![
        doc("1", vec![span(0, 5, "A"), span(10, 15, "B")]),
        doc("2", vec![span(3, 8, "A"), span(20, 22, "C")]),
    ];
    let pred = vec![
        // exact match, wrong cui
        doc("1", vec![span(0, 5, "A"), span(10, 15, "A")]),
        // boundary off by one, exact match
        doc("2", vec![span(3, 9, "A"), span(20, 22, "C")]),
    ];
    let r = score(&gold, &pred).unwrap();
    assert_eq!((r.true_positives, r.false_positives, r.false_negatives), (2, 2, 2));
    assert_eq!((r.precision, r.recall, r.f1), (0.5, 0.5, 0.5));
    assert_eq!(r.support, 4);
    let a = &r.per_cui["A"];
    assert_eq!((a.true_positives, a.false_positives, a.false_negatives), (1, 2, 1));
    let b = &r.per_cui["B"];
    assert_eq!((b.true_positives, b.false_positives, b.false_negatives, b.recall), (0, 0, 1, 0.0));
    assert_eq!(r.per_cui["C"].f1, 1.0);
}

#[test]
fn missing_prediction_documents_count_as_misses() {
    let gold = vec![doc("1", vec![span(0, 5, "A")]), doc("2", vec![span(1, 2, "B")])];
    let r = score(&gold, &[doc("1", vec![span(0, 5, "A")])]).unwrap();
    assert_eq!((r.true_positives, r.false_negatives), (1, 1));
    assert!(score(&gold, &[doc("3", vec![])]).is_err());
}
