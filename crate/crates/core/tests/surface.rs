use std::collections::BTreeSet;

use pinchlab::hyperbolic::MobiusMatrix;
use pinchlab::surface::words::{self, Word};
use pinchlab::surface::{
    assemble, build_pants, length_spectrum, length_spectrum_with, AugmentedGraph, EnumerationBudget,
};
use proptest::prelude::*;

fn evaluate(w: &[i16], gens: &[MobiusMatrix]) -> MobiusMatrix {
    w.iter().fold(MobiusMatrix::IDENTITY, |acc, &l| {
        let m = gens[words::generator_of(l)];
        acc.mul(&if l > 0 { m } else { m.inverse() })
    })
}

/// All cyclically reduced words up to `max_len` whose translation length is
/// at most r, as unoriented class keys.
fn brute_force(gens: &[MobiusMatrix], max_len: usize, r: f64) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let letters: Vec<i16> = (0..gens.len()).flat_map(|g| [words::letter(g, false), words::letter(g, true)]).collect();
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                if v.len() >= 2 && v[0] == -l {
                    next.push(v);
                    continue;
                }
                let m = evaluate(&v, gens);
                if let Ok(len) = m.translation_length() {
                    if len <= r {
                        out.insert(words::unoriented_key(&v));
                    }
                }
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

#[test]
fn pants_spectrum_matches_brute_force() {
    for lengths in [[1.0, 2.0, 3.0], [1.0, 1.0, 1.0], [1.5, 1.2, 2.5]] {
        let (g, l) = AugmentedGraph::pants(lengths);
        let s = assemble(&g, &l).unwrap();
        let r = 3.95;
        let sp = length_spectrum(&s, r, 1e-9).unwrap();
        let gens: Vec<_> = s.components[0].basis.iter().map(|g| g.matrix).collect();
        let found: BTreeSet<Word> = sp
            .entries
            .iter()
            .flat_map(|e| e.words.iter().map(|w| words::parse_word(w).unwrap()))
            .collect();
        let brute = brute_force(&gens, sp.max_word_length + 2, r);
        assert_eq!(found, brute, "lengths {lengths:?}");
    }
}

#[test]
fn pants_spectrum_stable_under_budget_doubling() {
    let (g, l) = AugmentedGraph::pants([1.0, 2.0, 3.0]);
    let s = assemble(&g, &l).unwrap();
    let budget = EnumerationBudget::default();
    let a = length_spectrum_with(&s, 6.0, 1e-9, &budget).unwrap();
    let b = length_spectrum_with(&s, 6.0, 1e-9, &budget.doubled()).unwrap();
    assert_eq!(a, b);
    let c = a.fit_growth_constant(4.0);
    assert!(c > 0.0);
    assert!(a.growth_bound_excess(c, 6.0) <= 0.0);
}

#[test]
fn twist_by_one_preserves_spectrum() {
    let spectrum = |tau: f64| {
        let (g, l) = AugmentedGraph::once_punctured_torus(1.0, tau, 0.5).unwrap();
        let s = assemble(&g, &l).unwrap();
        length_spectrum(&s, 6.0, 1e-9).unwrap()
    };
    for tau in [0.0, 0.3] {
        let split = |mut v: Vec<(f64, usize, bool)>| {
            v.sort_by(|x, y| y.2.cmp(&x.2).then(x.0.total_cmp(&y.0)));
            v
        };
        let a = split(spectrum(tau).signature());
        let b = split(spectrum(tau + 1.0).signature());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.0 - y.0).abs() < 1e-8);
            assert_eq!((x.1, x.2), (y.1, y.2));
        }
    }
}

#[test]
fn spectrum_is_deterministic() {
    let (g, l) = AugmentedGraph::once_punctured_torus(0.8, 0.2, 0.0).unwrap();
    let s = assemble(&g, &l).unwrap();
    let a = length_spectrum(&s, 5.0, 1e-9).unwrap();
    let b = length_spectrum(&s, 5.0, 1e-9).unwrap();
    assert_eq!(a, b);
    assert!(a.powers_consistent(1e-8));
}

#[test]
fn two_vertex_surface() {
    let text = r#"{
        "vertices": ["p", "q"],
        "edges": [
            {"id": "e0", "from_vertex": "p", "slot": 0, "pair": "f0"},
            {"id": "e1", "from_vertex": "p", "slot": 1, "pair": null},
            {"id": "e2", "from_vertex": "p", "slot": 2, "pair": null},
            {"id": "f0", "from_vertex": "q", "slot": 0, "pair": "e0"},
            {"id": "f1", "from_vertex": "q", "slot": 1, "pair": null},
            {"id": "f2", "from_vertex": "q", "slot": 2, "pair": null}
        ],
        "labels": {
            "e0": {"ell": 1.2, "tau": 0.1},
            "e1": {"ell": 1.0, "tau": 0.0}, "e2": {"ell": 1.5, "tau": 0.0},
            "f1": {"ell": 2.0, "tau": 0.0}, "f2": {"ell": 1.1, "tau": 0.0}
        }
    }"#;
    let (g, l) = AugmentedGraph::from_json(text).unwrap();
    assert_eq!(g.signature().unwrap(), (0, 4));
    let s = assemble(&g, &l).unwrap();
    assert_eq!(s.components[0].basis.len(), 3);
    let sp = length_spectrum(&s, 3.0, 1e-9).unwrap();
    let prim: Vec<f64> = sp.entries.iter().filter(|e| e.primitive).map(|e| e.length).collect();
    for want in [1.0, 1.1, 1.2, 1.5, 2.0] {
        assert!(prim.iter().any(|x| (x - want).abs() < 1e-9), "{want} missing from {prim:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn pants_invariants(l1 in 0.0f64..4.0, l2 in 0.0f64..4.0, l3 in 0.0f64..4.0) {
        let p = build_pants(l1, l2, l3).unwrap();
        prop_assert!(p.relation_residual() < 1e-9);
        for r in p.hexagon.recursion_residuals().unwrap() {
            prop_assert!(r.abs() < 1e-10);
        }
        for (i, l) in [l1, l2, l3].iter().enumerate() {
            if *l > 1e-3 {
                prop_assert!((p.gamma[i].translation_length().unwrap() - l).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn class_keys_are_conjugation_invariant(w in proptest::collection::vec(prop_oneof![Just(1i16), Just(-1), Just(2), Just(-2)], 1..12),
                                            c in proptest::collection::vec(prop_oneof![Just(1i16), Just(-1), Just(2), Just(-2)], 0..6)) {
        let mut conj = c.clone();
        conj.extend(&w);
        conj.extend(words::inverse(&c));
        prop_assert_eq!(words::conjugacy_key(&w), words::conjugacy_key(&conj));
        prop_assert_eq!(words::unoriented_key(&w), words::unoriented_key(&words::inverse(&w)));
    }
}
