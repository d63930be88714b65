//! Property tests for the parsing round-trips and the kernel invariants.

use proptest::prelude::*;
use srank_core::kernel::{complete, find_grading, Finiteness, DEFAULT_COMPLETION_BUDGET};
use srank_core::presentation::{
    parse_element, parse_presentation, pretty_element, ExponentVector, MonoidPresentation,
};

fn arb_vector(k: usize) -> impl Strategy<Value = ExponentVector> {
    prop::collection::vec(0u64..=3, k).prop_map(ExponentVector)
}

fn arb_presentation() -> impl Strategy<Value = MonoidPresentation> {
    (1usize..=3).prop_flat_map(|k| {
        prop::collection::vec((arb_vector(k), arb_vector(k)), 0..=4).prop_map(move |relations| {
            let names = ["a", "b", "c"];
            MonoidPresentation {
                name: String::new(),
                generators: names[..k].iter().map(|s| s.to_string()).collect(),
                relations: relations.into_iter().filter(|(u, v)| u != v).collect(),
            }
        })
    })
}

proptest! {
    /// Pretty-printing a presentation and re-parsing it is the identity.
    #[test]
    fn presentation_round_trip(p in arb_presentation()) {
        let (reparsed, warnings) = parse_presentation(&p.to_dsl()).unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(reparsed, p);
    }

    /// parse_element inverts pretty_element for every exponent vector.
    #[test]
    fn element_round_trip(p in arb_presentation(), coords in prop::collection::vec(0u64..=9, 1..=3)) {
        let k = p.generator_count();
        let v = ExponentVector(coords.into_iter().cycle().take(k).collect());
        let text = pretty_element(&v, &p);
        prop_assert_eq!(parse_element(&text, &p).unwrap(), v);
    }

    /// Parsing is total: fuzzed input yields a value or a positioned error,
    /// never a crash.
    #[test]
    fn parsing_never_panics(text in "\\PC*") {
        let _ = parse_presentation(&text);
    }

    /// Same, over inputs biased toward near-valid syntax.
    #[test]
    fn near_valid_parsing_never_panics(text in "(gens|rel|[a-c0-9+*=;# ._-]){0,40}") {
        let _ = parse_presentation(&text);
        let (p, _) = parse_presentation("gens a b;").unwrap();
        let _ = parse_element(&text, &p);
    }

    /// Completion always yields a verified confluent, inter-reduced system.
    #[test]
    fn completion_is_confluent(p in arb_presentation()) {
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        prop_assert!(rs.confluence_checked);
        prop_assert!(rs.verify_confluence());
        prop_assert!(rs.verify_rules());
    }

    /// Normal forms are homomorphic: nf(u + v) = nf(nf(u) + nf(v)).
    #[test]
    fn normal_form_is_homomorphic(p in arb_presentation(), u in arb_vector(3), v in arb_vector(3)) {
        let k = p.generator_count();
        let u = ExponentVector(u.0[..k].to_vec());
        let v = ExponentVector(v.0[..k].to_vec());
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        let direct = rs.normal_form(&u.add(&v));
        let via = rs.normal_form(&rs.normal_form(&u).add(&rs.normal_form(&v)));
        prop_assert_eq!(direct, via);
    }

    /// Any returned grading is constant on congruence classes.
    #[test]
    fn grading_is_sound(p in arb_presentation(), v in arb_vector(3)) {
        let k = p.generator_count();
        let v = ExponentVector(v.0[..k].to_vec());
        if let Some(g) = find_grading(&p) {
            prop_assert!(g.validates(&p));
            let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
            prop_assert_eq!(g.grade(&v), g.grade(&rs.normal_form(&v)));
        }
    }

    /// When the monoid closes into a finite table, window sizes stabilize
    /// beyond the largest element degree.
    #[test]
    fn finite_detection_stabilizes_windows(p in arb_presentation()) {
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        if let Finiteness::Finite(real) = rs.detect_finite(64) {
            let max_degree = real
                .elements
                .iter()
                .map(|e| e.degree())
                .max()
                .unwrap_or(0) as u32;
            let base = rs.enumerate_window(max_degree).len();
            prop_assert_eq!(base, real.elements.len());
            for extra in 1..=3 {
                prop_assert_eq!(rs.enumerate_window(max_degree + extra).len(), base);
            }
        }
    }
}
