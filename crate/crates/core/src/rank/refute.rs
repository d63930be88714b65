//! Finite-quotient refutations: a homomorphism into a small monoid where the
//! required element provably cannot exist certifies non-existence in the
//! source.

use super::{Certificate, NonUnitEvidence, RefTarget};
use crate::finite::{cyclic_monoid, truncated_naturals, with_absorber, FiniteMonoid};
use crate::kernel::{image_of, RewriteSystem};
use crate::presentation::ExponentVector;

/// Built-in library of small absorbing monoids, sizes two through six:
/// truncated naturals with infinity and cyclic groups with an absorber.
pub fn default_refuters() -> Vec<(String, FiniteMonoid)> {
    vec![
        ("trunc_nat_0".to_string(), truncated_naturals(0)),
        ("trunc_nat_1".to_string(), truncated_naturals(1)),
        ("trunc_nat_2".to_string(), truncated_naturals(2)),
        ("trunc_nat_3".to_string(), truncated_naturals(3)),
        ("trunc_nat_4".to_string(), truncated_naturals(4)),
        ("z2_inf".to_string(), with_absorber(&cyclic_monoid(0, 2))),
        ("z3_inf".to_string(), with_absorber(&cyclic_monoid(0, 3))),
        ("z4_inf".to_string(), with_absorber(&cyclic_monoid(0, 4))),
        ("z5_inf".to_string(), with_absorber(&cyclic_monoid(0, 5))),
    ]
}

fn assignments(target_size: usize, generators: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = target_size
        .checked_pow(generators as u32)
        .unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut a = vec![0usize; generators];
        for slot in a.iter_mut() {
            *slot = code % target_size;
            code /= target_size;
        }
        a
    })
}

fn is_hom(rs: &RewriteSystem, target: &FiniteMonoid, assignment: &[usize]) -> bool {
    rs.presentation
        .relations
        .iter()
        .all(|(u, v)| image_of(target, assignment, u) == image_of(target, assignment, v))
}

/// Search the library for a homomorphism under which no element of the target
/// can play the role of `e` in `ka = la + e`, `e + x = y`. Such a map proves
/// no `e` exists in the source either.
pub fn search_condition_refutation(
    rs: &RewriteSystem,
    refuters: &[(String, FiniteMonoid)],
    a: &ExponentVector,
    k: u32,
    l: u32,
    x: &ExponentVector,
    y: &ExponentVector,
) -> Option<Certificate> {
    let gens = rs.generator_count();
    for (name, target) in refuters {
        for assignment in assignments(target.n(), gens) {
            if !is_hom(rs, target, &assignment) {
                continue;
            }
            let ika = image_of(target, &assignment, &a.scale(k as u64));
            let ila = image_of(target, &assignment, &a.scale(l as u64));
            let ix = image_of(target, &assignment, x);
            let iy = image_of(target, &assignment, y);
            let solvable = target
                .elements()
                .any(|e| target.add(ila, e) == ika && target.add(e, ix) == iy);
            if !solvable {
                return Some(Certificate::Refutation {
                    a: a.clone(),
                    k,
                    l,
                    x: x.clone(),
                    y: y.clone(),
                    target: RefTarget {
                        name: name.clone(),
                        document: target.to_cayley_document(),
                    },
                    assignment,
                });
            }
        }
    }
    None
}

/// Evidence that `a` is not a unit: a grading with positive grade on `a`, or
/// a homomorphism sending `a` to a non-unit of a finite monoid.
pub fn non_unit_evidence(
    rs: &RewriteSystem,
    grading: Option<&crate::kernel::Grading>,
    refuters: &[(String, FiniteMonoid)],
    a: &ExponentVector,
) -> Option<NonUnitEvidence> {
    if let Some(g) = grading {
        if g.grade(a) > 0 {
            return Some(NonUnitEvidence::Grading {
                weights: g.weights.clone(),
            });
        }
    }
    let gens = rs.generator_count();
    for (name, target) in refuters {
        for assignment in assignments(target.n(), gens) {
            if !is_hom(rs, target, &assignment) {
                continue;
            }
            let ia = image_of(target, &assignment, a);
            if !target.is_unit(ia) {
                return Some(NonUnitEvidence::Hom {
                    target: RefTarget {
                        name: name.clone(),
                        document: target.to_cayley_document(),
                    },
                    assignment,
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::complete;
    use crate::presentation::parse_presentation;

    fn rs_of(text: &str) -> RewriteSystem {
        let (p, _) = parse_presentation(text).unwrap();
        complete(&p, 10_000).unwrap()
    }

    fn ev(coords: &[u64]) -> ExponentVector {
        ExponentVector(coords.to_vec())
    }

    #[test]
    fn refutes_first_condition_for_absorbing_relation() {
        // a + b = a: the pair (b, 0) satisfies a + b = a + 0 but no e solves
        // a = a + e, e + b = 0; seen in {0, 1, inf} under a -> inf, b -> 1
        let rs = rs_of("gens a b; rel a + b = a;");
        let cert = search_condition_refutation(
            &rs,
            &default_refuters(),
            &ev(&[1, 0]),
            1,
            1,
            &ev(&[0, 1]),
            &ev(&[0, 0]),
        )
        .expect("refutation exists");
        crate::rank::verify_certificate(&rs, &cert).expect("refutation verifies");
        match cert {
            Certificate::Refutation {
                target, assignment, ..
            } => {
                // both generators land on the absorber of {0, inf}; then no
                // candidate can reach 0 past the image of b
                assert_eq!(target.name, "trunc_nat_0");
                assert_eq!(assignment, vec![1, 1]);
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn no_refutation_when_e_exists() {
        // free monoid: a + x = a + y forces x = y, e = 0 always works
        let rs = rs_of("gens a b;");
        assert!(search_condition_refutation(
            &rs,
            &default_refuters(),
            &ev(&[1, 0]),
            1,
            1,
            &ev(&[0, 1]),
            &ev(&[0, 1]),
        )
        .is_none());
    }

    #[test]
    fn non_unit_evidence_prefers_grading() {
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        let g = crate::kernel::find_grading(&rs.presentation);
        match non_unit_evidence(&rs, g.as_ref(), &default_refuters(), &ev(&[1, 0])) {
            Some(NonUnitEvidence::Grading { weights }) => assert_eq!(weights, vec![1, 2]),
            other => panic!("expected grading evidence, got {other:?}"),
        }
    }

    #[test]
    fn non_unit_evidence_falls_back_to_hom() {
        // g + w = w, 2w = w: no grading at all, but {0, inf} sees w as non-unit
        let rs = rs_of("gens g w; rel g + w = w; rel 2 w = w;");
        let g = crate::kernel::find_grading(&rs.presentation);
        assert!(g.is_none());
        match non_unit_evidence(&rs, None, &default_refuters(), &ev(&[0, 1])) {
            Some(NonUnitEvidence::Hom { .. }) => {}
            other => panic!("expected hom evidence, got {other:?}"),
        }
    }

    #[test]
    fn units_admit_no_non_unit_evidence() {
        // 2u = 0 makes u a unit
        let rs = rs_of("gens u g; rel 2 u = 0; rel u + g = g;");
        assert!(non_unit_evidence(
            &rs,
            crate::kernel::find_grading(&rs.presentation).as_ref(),
            &default_refuters(),
            &ev(&[1, 0])
        )
        .is_none());
    }
}
