use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use wigner_lab::eigen::symmetric_eigenvalues;
use wigner_lab::ensemble::{sample_wigner, EntryDistribution};
use wigner_lab::merge::{check_merge, find_shared_edge, merge_words};
use wigner_lab::spectral::{eigenvalues_sym, trace_power};
use wigner_lab::words::{canonical_form, classify, word_graph, Sentence, Word};

fn closed_word(max_letter: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=max_letter, 2..=10).prop_map(|mut v| {
        v.push(v[0]);
        Word::new(v).unwrap()
    })
}

fn symmetric(max_n: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..10.0, n * n).prop_map(move |raw| {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    a[i * n + j] = raw[i * n + j];
                    a[j * n + i] = raw[i * n + j];
                }
            }
            (n, a)
        })
    })
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent_and_preserves_structure(w in closed_word(6)) {
        let c = canonical_form(&w);
        prop_assert_eq!(&canonical_form(&c), &c);
        prop_assert_eq!(c.len(), w.len());
        prop_assert_eq!(c.weight(), w.weight());
        prop_assert_eq!(c.is_closed(), w.is_closed());
        prop_assert_eq!(classify(&c), classify(&w));
        prop_assert_eq!(c.letters()[0], 1);
    }

    #[test]
    fn closed_word_graphs(w in closed_word(6)) {
        let g = word_graph(&w);
        prop_assert_eq!(g.total_traversals(), w.len() - 1);
        prop_assert!(g.is_connected());
    }

    #[test]
    fn sentence_edges_are_union_of_word_edges(ws in prop::collection::vec(closed_word(8), 1..4)) {
        let s = Sentence::new(ws.clone());
        let union: BTreeSet<_> = ws.iter().flat_map(|w| w.edges()).collect();
        prop_assert_eq!(s.edges(), union);
    }

    #[test]
    fn merge_preserves_invariants(w1 in closed_word(4), w2 in closed_word(4)) {
        prop_assume!(find_shared_edge(&w1, &w2).unwrap().is_some());
        let merged = merge_words(&w1, &w2).unwrap();
        let report = check_merge(&w1, &w2, &merged);
        prop_assert!(report.all_ok(), "{} + {} -> {}: {:?}", w1, w2, merged, report);
        prop_assert_eq!(merge_words(&w1, &w2).unwrap(), merged.clone());
        let t = merged.traversals();
        for (e, c) in w1.traversals().into_iter().chain(w2.traversals()) {
            if c >= 2 {
                prop_assert!(t[&e] >= 2);
            }
        }
    }

    #[test]
    fn eigenvalues_match_nalgebra((n, a) in symmetric(24)) {
        let ours = symmetric_eigenvalues(&a, n).unwrap();
        let mut theirs: Vec<f64> = SymmetricEigen::new(DMatrix::from_row_slice(n, n, &a))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-10 * scale, "{} vs {}", x, y);
        }
    }

    #[test]
    fn spectrum_reconstructs_trace_invariants(n in 1usize..60, seed in any::<u64>()) {
        let w = sample_wigner(n, &EntryDistribution::gaussian(), seed).unwrap();
        let s = eigenvalues_sym(&w).unwrap();
        prop_assert!(s.eigenvalues.windows(2).all(|p| p[0] >= p[1]));
        let tr = w.trace();
        let fro = w.frobenius_sq();
        prop_assert!((trace_power(&s, 1) - tr).abs() <= 1e-10 * fro.sqrt().max(1.0));
        prop_assert!((trace_power(&s, 2) - fro).abs() <= 1e-10 * fro.max(1.0));
    }
}

#[test]
fn non_finite_entries_are_rejected() {
    let mut a = vec![1.0, 0.0, 0.0, 1.0];
    a[1] = f64::NAN;
    a[2] = f64::NAN;
    assert!(symmetric_eigenvalues(&a, 2).is_err());
}

#[test]
fn sampling_is_a_pure_function_of_seed() {
    let d = EntryDistribution::uniform();
    assert_eq!(
        sample_wigner(17, &d, 3).unwrap(),
        sample_wigner(17, &d, 3).unwrap()
    );
    assert_ne!(
        sample_wigner(17, &d, 3).unwrap(),
        sample_wigner(17, &d, 4).unwrap()
    );
    // Entry (i, j) does not depend on n.
    let small = sample_wigner(5, &d, 9).unwrap();
    let big = sample_wigner(8, &d, 9).unwrap();
    let rescale = (8.0f64 / 5.0).sqrt();
    for i in 0..5 {
        for j in 0..5 {
            assert!((small.get(i, j) - big.get(i, j) * rescale).abs() < 1e-15);
        }
    }
}
