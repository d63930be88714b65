//! Word problem for finitely presented commutative monoids.
//!
//! Relations are oriented into rewrite rules over exponent vectors and closed
//! under critical pairs. Overlaps of two left sides meet at their componentwise
//! maximum, and completion of pure-difference systems stays pure-difference, so
//! every element keeps a single-vector canonical form. Termination is a
//! Dickson's-lemma argument; the step budget is a safety valve only.

use crate::finite::FiniteMonoid;
use crate::presentation::{pretty_element, ExponentVector, MonoidPresentation};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

pub mod grading;

pub use grading::{find_grading, Grading};

/// An oriented rule `lhs -> rhs` with `lhs > rhs` in the term order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub lhs: ExponentVector,
    pub rhs: ExponentVector,
}

/// A confluent, terminating rewrite system presenting the same congruence as
/// the presentation it was completed from. Immutable once constructed.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub presentation: MonoidPresentation,
    pub rules: Vec<Rule>,
    pub confluence_checked: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CompletionError {
    #[error("completion budget of {budget} rule insertions exhausted ({rules} partial rules); exact claims refuse to run")]
    BudgetExhausted { budget: usize, rules: usize },
}

pub const DEFAULT_COMPLETION_BUDGET: usize = 100_000;

fn reduce_once(rules: &[Rule], v: &ExponentVector) -> Option<ExponentVector> {
    for rule in rules {
        if rule.lhs.divides(v) {
            return Some(rule.lhs.sub_from(v).add(&rule.rhs));
        }
    }
    None
}

fn reduce(rules: &[Rule], v: &ExponentVector) -> ExponentVector {
    let mut cur = v.clone();
    while let Some(next) = reduce_once(rules, &cur) {
        cur = next;
    }
    cur
}

/// Complete a presentation into a confluent rewrite system.
pub fn complete(
    presentation: &MonoidPresentation,
    budget: usize,
) -> Result<RewriteSystem, CompletionError> {
    let mut rules: Vec<Rule> = Vec::new();
    let mut pending: VecDeque<(ExponentVector, ExponentVector)> =
        presentation.relations.iter().cloned().collect();
    let mut insertions = 0usize;

    while let Some((u, v)) = pending.pop_front() {
        let nu = reduce(&rules, &u);
        let nv = reduce(&rules, &v);
        if nu == nv {
            continue;
        }
        let (lhs, rhs) = if nu > nv { (nu, nv) } else { (nv, nu) };

        // Keep left sides an antichain: anything the new rule reduces is
        // requeued as a pending equation.
        let mut kept = Vec::with_capacity(rules.len());
        for rule in rules.drain(..) {
            if lhs.divides(&rule.lhs) {
                pending.push_back((rule.lhs, rule.rhs));
            } else {
                kept.push(rule);
            }
        }
        rules = kept;

        for rule in &rules {
            let overlap = rule.lhs.join(&lhs);
            let left = rule.lhs.sub_from(&overlap).add(&rule.rhs);
            let right = lhs.sub_from(&overlap).add(&rhs);
            pending.push_back((left, right));
        }

        rules.push(Rule { lhs, rhs });
        insertions += 1;
        if insertions > budget {
            return Err(CompletionError::BudgetExhausted {
                budget,
                rules: rules.len(),
            });
        }
    }

    // Normalize right-hand sides against the final rule set.
    loop {
        let mut changed = false;
        for i in 0..rules.len() {
            let nf = reduce(&rules, &rules[i].rhs.clone());
            if nf != rules[i].rhs {
                rules[i].rhs = nf;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));

    let rs = RewriteSystem {
        presentation: presentation.clone(),
        rules,
        confluence_checked: false,
    };
    debug_assert!(rs.verify_rules());
    assert!(
        rs.verify_confluence(),
        "completion produced a non-confluent system"
    );
    Ok(RewriteSystem {
        confluence_checked: true,
        ..rs
    })
}

impl RewriteSystem {
    /// The unique irreducible vector congruent to `v`.
    pub fn normal_form(&self, v: &ExponentVector) -> ExponentVector {
        reduce(&self.rules, v)
    }

    pub fn is_irreducible(&self, v: &ExponentVector) -> bool {
        self.rules.iter().all(|r| !r.lhs.divides(v))
    }

    /// Equality in the presented monoid.
    pub fn equal(&self, u: &ExponentVector, v: &ExponentVector) -> bool {
        self.normal_form(u) == self.normal_form(v)
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generator_count()
    }

    /// Every rule decreases in the order and no left side divides another.
    pub fn verify_rules(&self) -> bool {
        self.rules.iter().all(|r| r.lhs > r.rhs)
            && self.rules.iter().enumerate().all(|(i, r)| {
                self.rules
                    .iter()
                    .enumerate()
                    .all(|(j, s)| i == j || !s.lhs.divides(&r.lhs))
            })
    }

    /// Exhaustive critical-pair check: every overlap joins to one normal form.
    pub fn verify_confluence(&self) -> bool {
        for (i, a) in self.rules.iter().enumerate() {
            for b in &self.rules[i + 1..] {
                let overlap = a.lhs.join(&b.lhs);
                let via_a = a.lhs.sub_from(&overlap).add(&a.rhs);
                let via_b = b.lhs.sub_from(&overlap).add(&b.rhs);
                if reduce(&self.rules, &via_a) != reduce(&self.rules, &via_b) {
                    return false;
                }
            }
        }
        true
    }

    /// All normal forms of total degree at most `radius`, in term order.
    pub fn enumerate_window(&self, radius: u32) -> Vec<ExponentVector> {
        let k = self.generator_count();
        let mut out = Vec::new();
        let mut cur = vec![0u64; k];
        enumerate_rec(&mut cur, 0, radius as u64, &mut |coords| {
            let v = ExponentVector(coords.to_vec());
            if self.is_irreducible(&v) {
                out.push(v);
            }
        });
        out.sort();
        out
    }

    /// Search for `z` with `u + z = v`, certifying `u <= v` in the algebraic
    /// order. `UnknownUpTo` makes no claim.
    pub fn leq_witness(&self, u: &ExponentVector, v: &ExponentVector, radius: u32) -> LeqResult {
        let target = self.normal_form(v);
        for z in self.enumerate_window(radius) {
            if self.normal_form(&u.add(&z)) == target {
                return LeqResult::Witness(z);
            }
        }
        LeqResult::UnknownUpTo(radius)
    }

    /// Breadth-first closure of `{0}` under generator addition over normal
    /// forms. A strictly positive weight on any generator certifies that the
    /// monoid is infinite.
    pub fn detect_finite(&self, cap: usize) -> Finiteness {
        let k = self.generator_count();
        let zero = ExponentVector::zero(k);
        let mut index: HashMap<ExponentVector, usize> = HashMap::new();
        let mut elements = vec![zero.clone()];
        index.insert(zero, 0);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for g in 0..k {
                let next = self.normal_form(&elements[i].add(&ExponentVector::unit(k, g)));
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        let certified_infinite = find_grading(&self.presentation)
                            .filter(|w| w.weights.iter().any(|&c| c > 0));
                        return Finiteness::NotClosedWithin {
                            cap,
                            certified_infinite,
                        };
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }

        let n = elements.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in i..n {
                let sum = self.normal_form(&elements[i].add(&elements[j]));
                let idx = index[&sum];
                table[i][j] = idx;
                table[j][i] = idx;
            }
        }
        let labels = elements
            .iter()
            .map(|v| pretty_element(v, &self.presentation))
            .collect();
        // Associativity and identity are inherited from the free monoid, so
        // the table does not need the O(n^3) re-check.
        let monoid = FiniteMonoid::from_parts_unchecked(labels, 0, table);
        Finiteness::Finite(FiniteRealization { monoid, elements })
    }

    /// Verify a generator assignment into a finite monoid and, on success,
    /// report window unitarity data for the induced map.
    pub fn check_hom(
        &self,
        target: &FiniteMonoid,
        assignment: &[usize],
    ) -> Result<Hom, HomViolation> {
        if assignment.len() != self.generator_count() {
            return Err(HomViolation::MissingGenerator {
                expected: self.generator_count(),
                got: assignment.len(),
            });
        }
        if let Some(&bad) = assignment.iter().find(|&&e| e >= target.n()) {
            return Err(HomViolation::ElementOutOfRange {
                element: bad,
                size: target.n(),
            });
        }
        for (idx, (u, v)) in self.presentation.relations.iter().enumerate() {
            let iu = image_of(target, assignment, u);
            let iv = image_of(target, assignment, v);
            if iu != iv {
                return Err(HomViolation::RelationBroken {
                    relation: idx,
                    lhs: iu,
                    rhs: iv,
                });
            }
        }
        Ok(Hom {
            assignment: assignment.to_vec(),
        })
    }
}

/// Image of an exponent vector under a generator assignment into a finite monoid.
pub fn image_of(target: &FiniteMonoid, assignment: &[usize], v: &ExponentVector) -> usize {
    let mut acc = target.zero();
    for (i, &c) in v.0.iter().enumerate() {
        acc = target.add(acc, target.scalar_mul(c, assignment[i]));
    }
    acc
}

fn enumerate_rec(cur: &mut Vec<u64>, pos: usize, remaining: u64, f: &mut impl FnMut(&[u64])) {
    if pos == cur.len() {
        f(cur);
        return;
    }
    if pos == cur.len() - 1 {
        for c in 0..=remaining {
            cur[pos] = c;
            f(cur);
        }
        cur[pos] = 0;
        return;
    }
    for c in 0..=remaining {
        cur[pos] = c;
        enumerate_rec(cur, pos + 1, remaining - c, f);
    }
    cur[pos] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeqResult {
    Witness(ExponentVector),
    UnknownUpTo(u32),
}

#[derive(Clone, Debug)]
pub enum Finiteness {
    Finite(FiniteRealization),
    NotClosedWithin {
        cap: usize,
        certified_infinite: Option<Grading>,
    },
}

/// A finite monoid realized as the set of normal forms of a rewrite system.
#[derive(Clone, Debug)]
pub struct FiniteRealization {
    pub monoid: FiniteMonoid,
    pub elements: Vec<ExponentVector>,
}

impl FiniteRealization {
    pub fn index_of(&self, rs: &RewriteSystem, v: &ExponentVector) -> usize {
        let nf = rs.normal_form(v);
        self.elements
            .iter()
            .position(|e| e == &nf)
            .expect("normal form is an element of the realized monoid")
    }
}

/// A verified homomorphism from a presented monoid into a finite monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hom {
    pub assignment: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HomViolation {
    #[error("assignment covers {got} generators, presentation has {expected}")]
    MissingGenerator { expected: usize, got: usize },
    #[error("assigned element {element} out of range for target of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("relation {relation} maps to distinct elements {lhs} and {rhs}")]
    RelationBroken {
        relation: usize,
        lhs: usize,
        rhs: usize,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn ev(coords: &[u64]) -> ExponentVector {
        ExponentVector(coords.to_vec())
    }

    fn rs_of(text: &str) -> RewriteSystem {
        let (p, _) = parse_presentation(text).unwrap();
        complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap()
    }

    #[test]
    fn single_relation_completes_to_single_rule() {
        let rs = rs_of("gens a b; rel a + b = a;");
        assert_eq!(
            rs.rules,
            vec![Rule {
                lhs: ev(&[1, 1]),
                rhs: ev(&[1, 0])
            }]
        );
        // normal forms are multiples of a and multiples of b
        let w = rs.enumerate_window(2);
        assert_eq!(
            w,
            vec![
                ev(&[0, 0]),
                ev(&[0, 1]),
                ev(&[1, 0]),
                ev(&[0, 2]),
                ev(&[2, 0])
            ]
        );
    }

    #[test]
    fn free_monoid_has_no_rules() {
        let (p, _) = parse_presentation("gens a b c;").unwrap();
        let rs = complete(&p, 100).unwrap();
        assert!(rs.rules.is_empty());
        assert!(rs.confluence_checked);
    }

    #[test]
    fn two_generator_example_identifies_relation_sides() {
        // n = 3: relations 3a = a+b and 4a = 2b
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        assert!(rs.equal(&ev(&[3, 0]), &ev(&[1, 1])));
        assert!(rs.equal(&ev(&[5, 0]), &ev(&[1, 2])));
        assert!(!rs.equal(&ev(&[0, 1]), &ev(&[2, 0])));
        assert_eq!(
            rs.normal_form(&ExponentVector::zero(2)),
            ExponentVector::zero(2)
        );
    }

    #[test]
    fn window_of_free_monoid_on_one_generator() {
        let rs = rs_of("gens a;");
        assert_eq!(
            rs.enumerate_window(3),
            vec![ev(&[0]), ev(&[1]), ev(&[2]), ev(&[3])]
        );
        assert_eq!(rs.enumerate_window(0), vec![ev(&[0])]);
    }

    #[test]
    fn detects_three_element_monoid() {
        let rs = rs_of("gens a; rel 3 a = a;");
        match rs.detect_finite(100) {
            Finiteness::Finite(real) => {
                assert_eq!(real.monoid.n(), 3);
                assert_eq!(real.elements, vec![ev(&[0]), ev(&[1]), ev(&[2])]);
                // 2a + 2a = 4a = 2a
                assert_eq!(real.monoid.add(2, 2), 2);
                // 2a + a = 3a = a
                assert_eq!(real.monoid.add(2, 1), 1);
            }
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn certifies_infinite_via_grading() {
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        match rs.detect_finite(64) {
            Finiteness::NotClosedWithin {
                certified_infinite, ..
            } => {
                let g = certified_infinite.expect("grading certificate");
                assert_eq!(g.weights, vec![1, 2]);
            }
            other => panic!("expected not closed, got {other:?}"),
        }
    }

    #[test]
    fn collapses_to_trivial_monoid() {
        let rs = rs_of("gens a; rel a = 0;");
        match rs.detect_finite(100) {
            Finiteness::Finite(real) => assert_eq!(real.monoid.n(), 1),
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn leq_witnesses() {
        let rs = rs_of("gens a; rel 3 a = a;");
        // 3a + a = 4a = 2a, so 3a <= 2a with witness a
        assert_eq!(
            rs.leq_witness(&ev(&[3]), &ev(&[2]), 4),
            LeqResult::Witness(ev(&[1]))
        );
        // 0 <= v with witness v
        assert_eq!(
            rs.leq_witness(&ev(&[0]), &ev(&[2]), 4),
            LeqResult::Witness(ev(&[2]))
        );

        let rs2 = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        // b <= a fails: the grading a -> 1, b -> 2 makes b's grade exceed a's
        assert_eq!(
            rs2.leq_witness(&ev(&[0, 1]), &ev(&[1, 0]), 8),
            LeqResult::UnknownUpTo(8)
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let (p, _) = parse_presentation("gens a b; rel 3 a = a + b; rel 4 a = 2 b;").unwrap();
        assert!(matches!(
            complete(&p, 0),
            Err(CompletionError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn hom_checking() {
        use crate::finite::{truncated_naturals, validate};

        // n = 3 example into {0, x, inf} with 2x = inf: a -> inf, b -> x
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        let target = truncated_naturals(1);
        assert!(rs.check_hom(&target, &[2, 1]).is_ok());
        // a -> 1, b -> 0 breaks 3a = a + b: images inf and 1
        assert!(matches!(
            rs.check_hom(&target, &[1, 0]),
            Err(HomViolation::RelationBroken { relation: 0, .. })
        ));

        // absorbing example into {0, 1, inf}: a -> inf, b -> 1
        let rs2 = rs_of("gens a b; rel a + b = a;");
        assert!(rs2.check_hom(&target, &[2, 1]).is_ok());

        // identity assignment of a finite monoid into itself
        let rs3 = rs_of("gens a; rel 3 a = a;");
        let Finiteness::Finite(real) = rs3.detect_finite(10) else {
            panic!()
        };
        assert!(rs3.check_hom(&real.monoid, &[1]).is_ok());

        // arity errors
        assert_eq!(
            rs3.check_hom(&real.monoid, &[]),
            Err(HomViolation::MissingGenerator {
                expected: 1,
                got: 0
            })
        );
        let doc = real.monoid.to_cayley_document();
        let m = validate(&doc).unwrap();
        assert_eq!(
            rs3.check_hom(&m, &[7]),
            Err(HomViolation::ElementOutOfRange {
                element: 7,
                size: 3
            })
        );
    }

    #[test]
    fn normal_form_is_homomorphic() {
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        let w = rs.enumerate_window(5);
        for u in &w {
            for v in &w {
                let direct = rs.normal_form(&u.add(v));
                let via_nf = rs.normal_form(&rs.normal_form(u).add(&rs.normal_form(v)));
                assert_eq!(direct, via_nf);
            }
        }
    }
}
