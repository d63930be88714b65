//! Differential soundness tests: the windowed rank engine against exact
//! computation on finite carriers, and certified condition failures against
//! brute-force searches in much larger windows.

use srank_core::finite::{sr_exact_finite, Rank};
use srank_core::harness::oracle::random_presentations;
use srank_core::kernel::{complete, Finiteness, DEFAULT_COMPLETION_BUDGET};
use srank_core::presentation::ExponentVector;
use srank_core::rank::{Analyzer, RadiusPolicy, Verdict};

/// On presentations that close into finite tables, brackets must pin and
/// agree with the exact stable rank of every realized element.
#[test]
fn brackets_agree_with_exact_ranks_on_finite_closures() {
    let mut finite_seen = 0;
    for p in random_presentations(300, 0xf1717e) {
        let Ok(rs) = complete(&p, DEFAULT_COMPLETION_BUDGET) else {
            continue;
        };
        let Finiteness::Finite(real) = rs.detect_finite(24) else {
            continue;
        };
        finite_seen += 1;
        let an = Analyzer::new(&rs);
        for (idx, element) in real.elements.iter().enumerate() {
            let bracket = an.sr_bracket(element, RadiusPolicy::default());
            let exact = sr_exact_finite(&real.monoid, idx);
            assert_eq!(
                bracket.pinned(),
                Some(exact.rank),
                "presentation {:?}, element {element:?}",
                p.relations
            );
            let strong = an.sr_plus_bracket(element, RadiusPolicy::default());
            let expected_strong = if real.monoid.is_unit(idx) {
                Rank::Finite(1)
            } else {
                Rank::Infinite
            };
            assert_eq!(strong.pinned(), Some(expected_strong));
        }
    }
    assert!(
        finite_seen >= 20,
        "only {finite_seen} finite closures sampled"
    );
}

/// Whenever a condition check certifies a failing pair, a brute-force search
/// for `e` in a much larger window must also come up empty.
#[test]
fn certified_failures_survive_larger_windows() {
    let mut certified = 0;
    for p in random_presentations(200, 0xd1ff) {
        let Ok(rs) = complete(&p, DEFAULT_COMPLETION_BUDGET) else {
            continue;
        };
        if matches!(rs.detect_finite(64), Finiteness::Finite(_)) {
            continue;
        }
        let an = Analyzer::new(&rs);
        let k = rs.generator_count();
        for g in 0..k {
            let a = ExponentVector::unit(k, g);
            for n in 1..=3u32 {
                let report = an.sr_condition_window(&a, n, 6, 12);
                let Verdict::Fails(fw) = &report.verdict else {
                    continue;
                };
                certified += 1;
                let x = &fw.elements[0].1;
                let y = &fw.elements[1].1;
                let na = rs.normal_form(&a.scale(n as u64));
                let a_nf = rs.normal_form(&a);
                assert_eq!(
                    rs.normal_form(&na.add(x)),
                    rs.normal_form(&a_nf.add(y)),
                    "failing pair must satisfy its equation"
                );
                let ynf = rs.normal_form(y);
                for e in rs.enumerate_window(30) {
                    let solves =
                        rs.normal_form(&a_nf.add(&e)) == na && rs.normal_form(&e.add(x)) == ynf;
                    assert!(
                        !solves,
                        "certified failure refuted by e = {e:?} (presentation {:?}, n = {n})",
                        p.relations
                    );
                }
            }
        }
    }
    assert!(
        certified >= 30,
        "only {certified} certified failures sampled"
    );
}

/// Empirical upper bounds never undercut reality on finite closures: the
/// level reported clean is exactly where the exact condition starts holding.
#[test]
fn clean_levels_match_exact_conditions_on_finite_closures() {
    for p in random_presentations(120, 0xc1ea) {
        let Ok(rs) = complete(&p, DEFAULT_COMPLETION_BUDGET) else {
            continue;
        };
        let Finiteness::Finite(real) = rs.detect_finite(16) else {
            continue;
        };
        let an = Analyzer::new(&rs);
        for (idx, element) in real.elements.iter().enumerate() {
            for n in 1..=3u32 {
                let report = an.sr_condition_window(element, n, 8, 16);
                let exact = real.monoid.stable_rank_condition_holds(idx, n as u64);
                match report.verdict {
                    Verdict::Holds(_) => assert!(exact),
                    Verdict::Fails(_) => assert!(!exact),
                    Verdict::UnknownUpTo { .. } => {
                        panic!("finite carriers must decide exactly")
                    }
                }
            }
        }
    }
}
