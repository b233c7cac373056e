use super::*;
use crate::assessment::BankDocument;
use crate::mathcore::rational::to_f64;
use crate::psychometrics::correlation_matrix;
use crate::session::{export_matrix, replay, Granularity, Quiz, QuizDocument};

fn demo_quiz() -> Quiz {
    let bank = BankDocument::parse(include_str!("../../banks/determinants.json")).unwrap();
    QuizDocument::parse(include_str!("../../banks/determinants-quiz.json"))
        .unwrap()
        .into_quiz(&[bank])
        .unwrap()
}

fn spec(loadings: &[f64], n: usize, seed: u64) -> CohortSpec {
    CohortSpec {
        n_students: n,
        items: loadings
            .iter()
            .enumerate()
            .map(|(i, &l)| SimItem::new(&format!("T{i}"), l, 0.0, 10.0))
            .collect(),
        seed,
        discretization: Discretization::Continuous,
    }
}

#[test]
fn same_seed_same_matrix() {
    let s = spec(&[0.8, 0.7, 0.6], 50, 3);
    assert_eq!(simulate_matrix(&s).unwrap(), simulate_matrix(&s).unwrap());
    assert_ne!(simulate_matrix(&s).unwrap(), simulate_matrix(&spec(&[0.8, 0.7, 0.6], 50, 4)).unwrap());
}

#[test]
fn zero_loadings_give_uncorrelated_items() {
    let m = simulate_matrix(&spec(&[0.0; 4], 5000, 11)).unwrap();
    let c = correlation_matrix(&m, &m.item_columns()).unwrap();
    for i in 0..4 {
        for j in 0..i {
            assert!(c.values[i][j].unwrap().abs() < 0.05);
        }
    }
}

#[test]
fn sample_correlations_approach_the_model() {
    let lambda = [0.8, 0.7, 0.6, 0.5];
    let m = simulate_matrix(&spec(&lambda, 5000, 5)).unwrap();
    let c = correlation_matrix(&m, &m.item_columns()).unwrap();
    for i in 0..4 {
        for j in 0..i {
            assert!((c.values[i][j].unwrap() - lambda[i] * lambda[j]).abs() < 0.05);
        }
    }
}

#[test]
fn rounded_scores_stay_on_the_point_range() {
    let mut s = spec(&[0.9, 0.3], 500, 8);
    s.discretization = Discretization::RoundedClamped;
    s.items[0].difficulty = 1.0;
    s.items[0].max_points = 2.0;
    let m = simulate_matrix(&s).unwrap();
    for row in &m.cells {
        let b = row[1].unwrap();
        assert!(b.fract() == 0.0 && (0.0..=2.0).contains(&b));
        assert_eq!(row[0].unwrap(), row[1].unwrap() + row[2].unwrap());
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert_eq!(simulate_matrix(&spec(&[0.5], 0, 1)), Err(SimulateError::NoStudents));
    assert!(matches!(simulate_matrix(&spec(&[1.0], 5, 1)), Err(SimulateError::InvalidLoading { .. })));
    let mut s = spec(&[0.5], 5, 1);
    s.items[0].label = "A".into();
    assert!(matches!(simulate_matrix(&s), Err(SimulateError::InvalidLabel(_))));
}

#[test]
fn extreme_abilities_hit_the_bounds() {
    let quiz = demo_quiz();
    let cohort = vec![
        SimStudent { id: "top".into(), ability: f64::INFINITY },
        SimStudent { id: "bottom".into(), ability: f64::NEG_INFINITY },
    ];
    let attempts = replay(&simulate_attempts(&quiz, &cohort, 1).unwrap()).unwrap();
    let totals: Vec<f64> = attempts.values().map(|a| to_f64(&a.summary().total)).collect();
    assert_eq!(totals, [100.0, 0.0]);
}

#[test]
fn simulated_cohort_exports_field_columns() {
    let quiz = demo_quiz();
    let cohort = sample_students(92, 2024);
    let events = simulate_attempts(&quiz, &cohort, 2024).unwrap();
    assert_eq!(events, simulate_attempts(&quiz, &cohort, 2024).unwrap());
    let attempts: Vec<_> = replay(&events).unwrap().into_values().collect();
    let m = export_matrix(&quiz, &attempts, Granularity::WithFieldSubscores).unwrap();
    assert_eq!(m.n_rows(), 92);
    let fields: Vec<&str> = m.field_columns(Some("C")).iter().map(|&c| m.columns[c].short_label()).collect();
    assert_eq!(fields, ["E", "F", "G", "H", "I"]);
    assert!(m.cells.iter().flatten().all(Option::is_some));
}
