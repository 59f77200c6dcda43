//! Independent oracles for the numeric core: exact rational extents, a
//! sampled sup-min possibility, and a dense eigenvalue solver.

use std::collections::BTreeMap;

use fahp_core::consistency::{consistency_of_crisp, crisp_matrix, RANDOM_INDEX};
use fahp_core::extent::{analyze, possibility, synthetic_extents, Cell, FuzzyComparisonMatrix};
use fahp_core::fuzzy::{Intensity, LinguisticGrade, TriangularFuzzyNumber};
use nalgebra::DMatrix;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = Rational64;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Synthetic extents computed with exact fractions.
fn rational_extents(m: &[Vec<(Q, Q, Q)>]) -> Vec<(Q, Q, Q)> {
    let zero = (q(0, 1), q(0, 1), q(0, 1));
    let add = |a: (Q, Q, Q), b: &(Q, Q, Q)| (a.0 + b.0, a.1 + b.1, a.2 + b.2);
    let rows: Vec<(Q, Q, Q)> = m.iter().map(|r| r.iter().fold(zero, add)).collect();
    let total = rows.iter().fold(zero, add);
    let inv = (total.2.recip(), total.1.recip(), total.0.recip());
    rows.iter()
        .map(|r| (r.0 * inv.0, r.1 * inv.1, r.2 * inv.2))
        .collect()
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

#[test]
fn strong_pair_extents_match_exact_fractions() {
    let one = (q(1, 1), q(1, 1), q(1, 1));
    let m = vec![
        vec![one, (q(4, 1), q(5, 1), q(6, 1))],
        vec![(q(1, 6), q(1, 5), q(1, 4)), one],
    ];
    let exact = rational_extents(&m);
    assert_eq!(exact[0], (q(20, 33), q(5, 6), q(42, 37)));
    assert_eq!(exact[1], (q(14, 99), q(1, 6), q(15, 74)));

    let judgments = BTreeMap::from([(Cell::new(0, 1), LinguisticGrade::direct(Intensity::Strong))]);
    let fm =
        FuzzyComparisonMatrix::from_judgments(vec!["a".into(), "b".into()], &judgments).unwrap();
    let computed = synthetic_extents(&fm).unwrap();
    for (c, e) in computed.iter().zip(&exact) {
        assert!((c.lower - to_f64(e.0)).abs() < 1e-12);
        assert!((c.middle - to_f64(e.1)).abs() < 1e-12);
        assert!((c.upper - to_f64(e.2)).abs() < 1e-12);
    }
}

fn grade_rational(g: LinguisticGrade) -> (Q, Q, Q) {
    let k = g.intensity.crisp_value() as i64;
    let (l, m, u) = if k == 1 { (1, 1, 2) } else { (k - 1, k, k + 1) };
    match g.direction {
        fahp_core::fuzzy::Direction::Direct => (q(l, 1), q(m, 1), q(u, 1)),
        fahp_core::fuzzy::Direction::Reciprocal => (q(1, u), q(1, m), q(1, l)),
    }
}

#[test]
fn random_grade_matrices_match_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grades: Vec<LinguisticGrade> = LinguisticGrade::all().collect();
    for n in 2..=5 {
        for _ in 0..20 {
            let mut judgments = BTreeMap::new();
            let one = (q(1, 1), q(1, 1), q(1, 1));
            let mut exact = vec![vec![one; n]; n];
            for cell in Cell::upper_triangle(n) {
                let g = grades[rng.random_range(0..grades.len())];
                judgments.insert(cell, g);
                let t = grade_rational(g);
                exact[cell.row][cell.col] = t;
                exact[cell.col][cell.row] = (t.2.recip(), t.1.recip(), t.0.recip());
            }
            let labels = (0..n).map(|i| i.to_string()).collect();
            let fm = FuzzyComparisonMatrix::from_judgments(labels, &judgments).unwrap();
            let computed = synthetic_extents(&fm).unwrap();
            for (c, e) in computed.iter().zip(rational_extents(&exact)) {
                assert!((c.lower - to_f64(e.0)).abs() < 1e-12);
                assert!((c.middle - to_f64(e.1)).abs() < 1e-12);
                assert!((c.upper - to_f64(e.2)).abs() < 1e-12);
            }
        }
    }
}

fn oracle_membership(t: &TriangularFuzzyNumber, x: f64) -> f64 {
    if x < t.lower || x > t.upper {
        0.0
    } else if x <= t.middle {
        if t.middle == t.lower {
            1.0
        } else {
            (x - t.lower) / (t.middle - t.lower)
        }
    } else if t.upper == t.middle {
        1.0
    } else {
        (t.upper - x) / (t.upper - t.middle)
    }
}

/// `sup_{x ≥ y} min(μa(x), μb(y))` on a grid of the given step.
fn grid_possibility(a: &TriangularFuzzyNumber, b: &TriangularFuzzyNumber, step: f64) -> f64 {
    let lo = a.lower.min(b.lower);
    let hi = a.upper.max(b.upper);
    let samples = ((hi - lo) / step).ceil() as usize + 1;
    let mut best_b_so_far: f64 = 0.0;
    let mut best: f64 = 0.0;
    for k in 0..samples {
        let x = (lo + k as f64 * step).min(hi);
        best_b_so_far = best_b_so_far.max(oracle_membership(b, x));
        best = best.max(oracle_membership(a, x).min(best_b_so_far));
    }
    best
}

#[test]
fn possibility_examples_against_grid() {
    let t = |l, m, u| TriangularFuzzyNumber::new(l, m, u).unwrap();
    let cases = [
        (t(2.0, 3.0, 4.0), t(2.0, 3.0, 4.0)),
        (t(1.0, 2.0, 3.0), t(3.0, 4.0, 5.0)),
        (t(2.0, 3.0, 4.0), t(3.0, 4.0, 5.0)),
    ];
    let expected = [1.0, 0.0, 0.5];
    for ((a, b), e) in cases.iter().zip(expected) {
        assert!((grid_possibility(a, b, 1e-4) - e).abs() < 1e-3);
        assert!((possibility(a, b) - e).abs() < 1e-12);
    }
}

#[test]
fn possibility_is_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5000 {
        let mut t = || {
            let l: f64 = rng.random_range(0.01..5.0);
            let m = l + rng.random_range(0.0..3.0);
            TriangularFuzzyNumber::new(l, m, m + rng.random_range(0.0..3.0)).unwrap()
        };
        let (a, b) = (t(), t());
        let (ab, ba) = (possibility(&a, &b), possibility(&b, &a));
        assert!((0.0..=1.0).contains(&ab) && (0.0..=1.0).contains(&ba));
        assert_eq!(ab.max(ba), 1.0);
    }
}

fn dense_lambda_max(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let dm = DMatrix::from_fn(n, n, |r, c| m[r][c]);
    dm.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < 1e-9)
        .map(|z| z.re)
        .fold(f64::MIN, f64::max)
}

#[test]
fn power_iteration_agrees_with_dense_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let grades: Vec<LinguisticGrade> = LinguisticGrade::all().collect();
    for n in 3..=6 {
        for _ in 0..25 {
            let judgments: BTreeMap<_, _> = Cell::upper_triangle(n)
                .map(|c| (c, grades[rng.random_range(0..grades.len())]))
                .collect();
            let labels = (0..n).map(|i| i.to_string()).collect();
            let fm = FuzzyComparisonMatrix::from_judgments(labels, &judgments).unwrap();
            let crisp = crisp_matrix(&fm);
            let report = consistency_of_crisp(&crisp).unwrap();
            let lambda = dense_lambda_max(&crisp);
            assert!(
                (report.lambda_max - lambda).abs() < 1e-7,
                "{} vs {lambda}",
                report.lambda_max
            );
            assert!(report.consistency_ratio >= -1e-12);
            let ci = (lambda - n as f64) / (n as f64 - 1.0);
            assert!((report.consistency_ratio - ci / RANDOM_INDEX[n - 1]).abs() < 1e-7);
        }
    }
}

#[test]
fn argmax_extent_scores_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grades: Vec<LinguisticGrade> = LinguisticGrade::all().collect();
    for n in 2..=7 {
        for _ in 0..30 {
            let judgments: BTreeMap<_, _> = Cell::upper_triangle(n)
                .map(|c| (c, grades[rng.random_range(0..grades.len())]))
                .collect();
            let labels = (0..n).map(|i| i.to_string()).collect();
            let a = analyze(&FuzzyComparisonMatrix::from_judgments(labels, &judgments).unwrap())
                .unwrap();
            let top = (0..n)
                .max_by(|&i, &j| a.extents[i].middle.total_cmp(&a.extents[j].middle))
                .unwrap();
            assert_eq!(a.min_possibility[top], 1.0);
        }
    }
}
