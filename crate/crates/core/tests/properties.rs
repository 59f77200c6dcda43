use std::collections::BTreeMap;

use fahp_core::consistency::consistency_of_crisp;
use fahp_core::extent::{extent_weights, Cell, FuzzyComparisonMatrix};
use fahp_core::fuzzy::{Intensity, LinguisticGrade, TriangularFuzzyNumber};
use fahp_core::model::{aggregate, rank, Aggregation, DecisionMatrix, Node};
use fahp_core::sensitivity::sensitivity_sweep;
use fahp_core::session::{load_from_slice, paper_dataset, to_canonical_bytes, SessionDocument};
use fahp_core::WeightVector;
use proptest::prelude::*;

fn grade() -> impl Strategy<Value = LinguisticGrade> {
    (0usize..5, any::<bool>()).prop_map(|(i, recip)| {
        let intensity = Intensity::ALL[i];
        if recip {
            LinguisticGrade::reciprocal(intensity)
        } else {
            LinguisticGrade::direct(intensity)
        }
    })
}

fn judgment_matrix(max_n: usize) -> impl Strategy<Value = FuzzyComparisonMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(grade(), n * (n - 1) / 2).prop_map(move |grades| {
            let judgments: BTreeMap<Cell, LinguisticGrade> =
                Cell::upper_triangle(n).zip(grades).collect();
            let labels = (0..n).map(|i| format!("x{i}")).collect();
            FuzzyComparisonMatrix::from_judgments(labels, &judgments).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn weights_are_normalized(m in judgment_matrix(9)) {
        let w = extent_weights(&m).unwrap();
        let sum: f64 = w.weights.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        prop_assert!(w.weights.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert!(w.weights.iter().any(|&x| x > 0.0));
    }

    #[test]
    fn permutation_equivariance_is_exact(
        m in judgment_matrix(8),
        seed in any::<u64>(),
    ) {
        let n = m.order();
        let mut perm: Vec<usize> = (0..n).collect();
        // Deterministic shuffle from the seed.
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let w = extent_weights(&m).unwrap();
        let wp = extent_weights(&m.permuted(&perm)).unwrap();
        for (i, &p) in perm.iter().enumerate() {
            prop_assert_eq!(wp.weights[i], w.weights[p]);
        }
    }

    #[test]
    fn duplicate_rows_get_equal_weights(base in judgment_matrix(6)) {
        // Append a twin of element 0: judged like it against every other
        // element and equal to it.
        let n = base.order();
        let one = TriangularFuzzyNumber::ONE;
        let mut entries: Vec<Vec<TriangularFuzzyNumber>> = base.rows().to_vec();
        for (r, row) in entries.iter_mut().enumerate() {
            row.push(if r == 0 { one } else { base.entry(r, 0) });
        }
        let mut twin: Vec<TriangularFuzzyNumber> = base.rows()[0].clone();
        twin.push(one);
        entries.push(twin);
        let labels = (0..=n).map(|i| format!("x{i}")).collect();
        let m = FuzzyComparisonMatrix::from_entries(labels, entries).unwrap();
        let w = extent_weights(&m).unwrap();
        prop_assert!((w.weights[0] - w.weights[n]).abs() < 1e-9);
    }

    #[test]
    fn consistent_matrices_have_zero_ratio(w in proptest::collection::vec(0.01f64..10.0, 1..=9)) {
        let m: Vec<Vec<f64>> = w.iter().map(|a| w.iter().map(|b| a / b).collect()).collect();
        let r = consistency_of_crisp(&m).unwrap();
        prop_assert!(r.consistency_ratio.abs() < 1e-8);
    }

    #[test]
    fn aggregation_modes_rank_identically(
        (weights, values) in (1usize..6, 1usize..10).prop_flat_map(|(c, a)| (
            proptest::collection::vec(0.0f64..1.0, c),
            proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, c), a),
        )),
    ) {
        let crits: Vec<String> = (0..weights.len()).map(|i| format!("c{i}")).collect();
        let alts: Vec<String> = (0..values.len()).map(|i| format!("a{i}")).collect();
        let wv = WeightVector { labels: crits.clone(), weights, diagnostics: vec![] };
        let dm = DecisionMatrix { rows: alts, columns: crits, values };
        let a = rank(&aggregate(&wv, &dm, Aggregation::WeightedSum).unwrap(), Aggregation::WeightedSum);
        let b = rank(&aggregate(&wv, &dm, Aggregation::PaperMean).unwrap(), Aggregation::PaperMean);
        prop_assert_eq!(a.order(), b.order());
    }

    #[test]
    fn sweep_scores_are_affine(
        g in proptest::collection::vec(0.0f64..1.0, 3),
        criterion in 0usize..3,
    ) {
        let doc = paper_dataset();
        let weights = fahp_core::engine::criteria_weights(&doc).unwrap();
        let dm = fahp_core::engine::decision_matrix(&doc).unwrap();
        let id = doc.hierarchy.criteria[criterion].id.clone();
        let baseline = weights.weights[criterion];
        prop_assume!(g.iter().all(|&x| x != baseline));
        prop_assume!((g[0] - g[1]).abs() > 1e-3);
        let report = sensitivity_sweep(&weights, &dm, Aggregation::WeightedSum, &id, &g).unwrap();
        for alt in &dm.rows {
            let s: Vec<f64> = report.points.iter().map(|p| p.ranking.score_of(alt).unwrap()).collect();
            let slope = (s[1] - s[0]) / (g[1] - g[0]);
            prop_assert!((s[0] + slope * (g[2] - g[0]) - s[2]).abs() < 1e-9);
        }
    }

    #[test]
    fn documents_round_trip(doc in document()) {
        let bytes = to_canonical_bytes(&doc);
        let loaded = load_from_slice(&bytes).unwrap();
        prop_assert_eq!(&loaded, &doc);
        prop_assert_eq!(to_canonical_bytes(&loaded), bytes);
    }
}

fn document() -> impl Strategy<Value = SessionDocument> {
    (
        1usize..5,
        1usize..6,
        any::<bool>(),
        any::<bool>(),
        any::<u64>(),
    )
        .prop_map(|(nc, na, pre_criteria, pre_matrix, seed)| {
            let mut s = seed;
            let mut next = move || {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                (s >> 11) as f64 / (1u64 << 53) as f64
            };
            let criteria = (0..nc)
                .map(|i| Node::new(format!("crit-{i}"), format!("Criterion \"{i}\"")))
                .collect();
            let alternatives = (0..na)
                .map(|i| Node::new(format!("alt{i}"), format!("Alt ü{i}")))
                .collect();
            let mut doc = SessionDocument::new("goal", criteria, alternatives);
            let grades: Vec<LinguisticGrade> = LinguisticGrade::all().collect();
            let mut normalized = |k: usize| {
                let raw: Vec<f64> = (0..k).map(|_| next() + 0.01).collect();
                let total: f64 = raw.iter().sum();
                raw.into_iter().map(|x| x / total).collect::<Vec<f64>>()
            };
            if pre_criteria {
                doc.precomputed.criteria_weights = Some(normalized(nc));
            } else {
                for (k, cell) in Cell::upper_triangle(nc).enumerate() {
                    doc.judgments
                        .criteria
                        .insert(cell, grades[(seed as usize + k) % 10]);
                }
            }
            if pre_matrix {
                let columns: Vec<Vec<f64>> = (0..nc).map(|_| normalized(na)).collect();
                doc.precomputed.decision_matrix = Some(
                    (0..na)
                        .map(|r| columns.iter().map(|c| c[r]).collect())
                        .collect(),
                );
            } else {
                for c in 0..nc {
                    let set = doc
                        .judgments
                        .alternatives
                        .entry(format!("crit-{c}"))
                        .or_default();
                    for (k, cell) in Cell::upper_triangle(na).enumerate() {
                        if (k + c) % 3 != 0 {
                            set.insert(cell, grades[(k * 7 + c) % 10]);
                        }
                    }
                }
            }
            if seed % 2 == 0 {
                doc.settings.aggregation = Aggregation::PaperMean;
            }
            if seed % 3 == 0 {
                fahp_core::engine::refresh_results(&mut doc);
            }
            doc
        })
}

#[test]
fn paper_dataset_round_trips() {
    let doc = paper_dataset();
    let bytes = to_canonical_bytes(&doc);
    assert_eq!(load_from_slice(&bytes).unwrap(), doc);
    assert_eq!(
        doc.precomputed.decision_matrix.as_ref().map(Vec::len),
        Some(9)
    );
}
