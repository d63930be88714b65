//! Congruences and the quotient constructions: o-ideal quotients, the maximal
//! antisymmetric quotient, and the two power congruences.

use super::FiniteMonoid;
use num_integer::Integer;
use serde::Serialize;

/// A partition of element indices, maintained as a union-find forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    parent: Vec<usize>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.find(x) == self.find(y)
    }

    /// Merge the classes of `x` and `y`; true when something changed.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        // smaller index wins, keeping representatives canonical
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }

    pub fn is_identity(&self) -> bool {
        (0..self.parent.len()).all(|x| self.find(x) == x)
    }

    /// Classes sorted by smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            by_root[self.find(x)].push(x);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }

    /// Close under additivity: x = y forces x + z = y + z.
    pub fn close_additively(&mut self, m: &FiniteMonoid) {
        loop {
            let mut changed = false;
            for x in m.elements() {
                for y in (x + 1)..m.n() {
                    if !self.same(x, y) {
                        continue;
                    }
                    for z in m.elements() {
                        changed |= self.union(m.add(x, z), m.add(y, z));
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Exhaustive additivity check.
    pub fn is_congruence(&self, m: &FiniteMonoid) -> bool {
        for x in m.elements() {
            for y in m.elements() {
                if !self.same(x, y) {
                    continue;
                }
                for z in m.elements() {
                    if !self.same(m.add(x, z), m.add(y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum QuotientKind {
    /// Collapse modulo an o-ideal: x = y iff x + a = y + b for some a, b in I.
    OIdeal(Vec<usize>),
    /// x = y iff x <= y <= x in the algebraic order.
    MaxAntisym,
    /// x = y iff mx = my for some m in S, where S is the set of positive
    /// multiples of the given generators (so Zpos . S = S).
    PowerSome(Vec<u64>),
    /// x = y iff mx = my for every m in the given finite set S, S a subset of
    /// the integers >= 2.
    PowerAll(Vec<u64>),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("parameter set is not an o-ideal (violating element {0})")]
    NotAnOIdeal(usize),
    #[error("power congruence needs a nonempty multiplier set")]
    EmptyMultiplierSet,
    #[error("multiplier {0} < 2 not allowed for the for-all power congruence")]
    MultiplierTooSmall(u64),
    #[error("o-ideal parameter element {0} out of range")]
    ElementOutOfRange(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientResult {
    pub monoid: FiniteMonoid,
    /// element index -> class index
    pub projection: Vec<usize>,
    pub congruence: Congruence,
    /// Whether recomputing the defining relation on the quotient yields the
    /// identity congruence. This is a theorem for the o-ideal, maximal
    /// antisymmetric, and for-some power quotients; the for-all power
    /// congruence does not have it in general.
    pub idempotent: bool,
}

/// Check that `members` (given as a membership mask) is an o-ideal: a
/// submonoid that is downward closed in the algebraic order.
pub fn is_o_ideal(m: &FiniteMonoid, members: &[bool]) -> Result<(), usize> {
    if !members[m.zero()] {
        return Err(m.zero());
    }
    for x in m.elements() {
        for y in m.elements() {
            if members[x] && members[y] && !members[m.add(x, y)] {
                return Err(m.add(x, y));
            }
        }
    }
    for x in m.elements() {
        for y in m.elements() {
            if members[y] && m.leq(x, y) && !members[x] {
                return Err(x);
            }
        }
    }
    Ok(())
}

fn defining_relation(m: &FiniteMonoid, kind: &QuotientKind, x: usize, y: usize) -> bool {
    match kind {
        QuotientKind::OIdeal(ideal) => ideal
            .iter()
            .any(|&a| ideal.iter().any(|&b| m.add(x, a) == m.add(y, b))),
        QuotientKind::MaxAntisym => m.leq(x, y) && m.leq(y, x),
        QuotientKind::PowerSome(gens) => power_some_related(m, gens, x, y),
        QuotientKind::PowerAll(set) => set
            .iter()
            .all(|&s| m.scalar_mul(s, x) == m.scalar_mul(s, y)),
    }
}

/// Decide `exists m in Zpos.gens with mx = my` exactly. The pair sequence
/// `(mx, my)` is periodic with period lcm of the orbit periods once m passes
/// both orbit indices, so multiples of each generator need only be scanned up
/// to index + generator * lcm.
fn power_some_related(m: &FiniteMonoid, gens: &[u64], x: usize, y: usize) -> bool {
    if x == y {
        return true;
    }
    let (ix, px) = m.orbit(x);
    let (iy, py) = m.orbit(y);
    let index = ix.max(iy);
    let period = px.lcm(&py);
    for &s in gens {
        let d_max = index.div_ceil(s) + period;
        for d in 1..=d_max {
            let mult = d.saturating_mul(s);
            if m.scalar_mul(mult, x) == m.scalar_mul(mult, y) {
                return true;
            }
        }
    }
    false
}

/// Quotient by one of the defining congruence kinds, with the projection map.
/// The construction is verified: the projection is a surjective homomorphism
/// and the defining relation matches equality of classes exactly.
pub fn quotient(m: &FiniteMonoid, kind: &QuotientKind) -> Result<QuotientResult, QuotientError> {
    match kind {
        QuotientKind::OIdeal(ideal) => {
            let mut members = vec![false; m.n()];
            for &e in ideal {
                if e >= m.n() {
                    return Err(QuotientError::ElementOutOfRange(e));
                }
                members[e] = true;
            }
            if let Err(e) = is_o_ideal(m, &members) {
                return Err(QuotientError::NotAnOIdeal(e));
            }
        }
        QuotientKind::PowerSome(gens) => {
            if gens.is_empty() || gens.contains(&0) {
                return Err(QuotientError::EmptyMultiplierSet);
            }
        }
        QuotientKind::PowerAll(set) => {
            if set.is_empty() {
                return Err(QuotientError::EmptyMultiplierSet);
            }
            if let Some(&s) = set.iter().find(|&&s| s < 2) {
                return Err(QuotientError::MultiplierTooSmall(s));
            }
        }
        QuotientKind::MaxAntisym => {}
    }

    let mut cong = Congruence::identity(m.n());
    for x in m.elements() {
        for y in (x + 1)..m.n() {
            if defining_relation(m, kind, x, y) {
                cong.union(x, y);
            }
        }
    }
    assert!(
        cong.is_congruence(m),
        "defining relation generated a non-additive partition"
    );
    // the defining rule must match class equality in both directions
    for x in m.elements() {
        for y in m.elements() {
            assert_eq!(
                cong.same(x, y),
                defining_relation(m, kind, x, y),
                "defining relation is not transitive as stated"
            );
        }
    }

    let q = build_quotient(m, &cong);
    let idempotent = quotient_relation_is_trivial(&q.0, kind);

    Ok(QuotientResult {
        monoid: q.0,
        projection: q.1,
        congruence: cong,
        idempotent,
    })
}

/// Build the quotient monoid of a verified congruence.
pub fn build_quotient(m: &FiniteMonoid, cong: &Congruence) -> (FiniteMonoid, Vec<usize>) {
    let classes = cong.classes();
    let mut projection = vec![0usize; m.n()];
    for (ci, class) in classes.iter().enumerate() {
        for &x in class {
            projection[x] = ci;
        }
    }
    let zero = projection[m.zero()];
    let labels: Vec<String> = classes
        .iter()
        .map(|class| format!("[{}]", m.label(class[0])))
        .collect();
    let mut table = vec![vec![usize::MAX; classes.len()]; classes.len()];
    for x in m.elements() {
        for y in m.elements() {
            let (cx, cy, cs) = (projection[x], projection[y], projection[m.add(x, y)]);
            if table[cx][cy] == usize::MAX {
                table[cx][cy] = cs;
            } else {
                assert_eq!(table[cx][cy], cs, "quotient addition is not well defined");
            }
        }
    }
    (
        FiniteMonoid::from_parts_unchecked(labels, zero, table),
        projection,
    )
}

/// Recompute the defining relation on the quotient and test whether it only
/// relates equal classes.
fn quotient_relation_is_trivial(q: &FiniteMonoid, kind: &QuotientKind) -> bool {
    let kind_on_q = match kind {
        // the image of the ideal is the class of zero
        QuotientKind::OIdeal(_) => QuotientKind::OIdeal(vec![q.zero()]),
        other => other.clone(),
    };
    for x in q.elements() {
        for y in q.elements() {
            if x != y && defining_relation(q, &kind_on_q, x, y) {
                return false;
            }
        }
    }
    true
}

/// The least congruence whose quotient gives every target element `b` strong
/// stable rank at most `m`: merge forced pairs and re-close until no
/// violation remains. Every merge is forced, so the fixpoint is the least
/// satisfying congruence.
pub fn smallest_sr_plus_congruence(monoid: &FiniteMonoid, targets: &[(usize, u64)]) -> Congruence {
    assert!(targets.iter().all(|&(_, m)| m >= 1));
    let mut cong = Congruence::identity(monoid.n());
    'outer: loop {
        for &(b, m) in targets {
            let mb = monoid.scalar_mul(m, b);
            let prev = monoid.scalar_mul(m - 1, b);
            for x in monoid.elements() {
                for y in monoid.elements() {
                    if cong.same(monoid.add(mb, x), monoid.add(b, y))
                        && !cong.same(monoid.add(prev, x), y)
                    {
                        cong.union(monoid.add(prev, x), y);
                        cong.close_additively(monoid);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    debug_assert!(cong.is_congruence(monoid));
    cong
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{cyclic_monoid, sr_exact_finite, validate, Rank};
    use crate::presentation::parse_cayley;

    fn three_element_fixture() -> FiniteMonoid {
        validate(
            &parse_cayley(
                r#"{"elements": ["0","a","2a"], "zero": "0",
                    "table": [["0","a","2a"],["a","2a","a"],["2a","a","2a"]]}"#,
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn power_some_identifies_a_with_2a() {
        let m = three_element_fixture();
        let q = quotient(&m, &QuotientKind::PowerSome(vec![2])).unwrap();
        assert_eq!(q.monoid.n(), 2);
        assert_eq!(q.projection, vec![0, 1, 1]);
        // [a] + [a] = [2a] = [a]
        assert_eq!(q.monoid.add(1, 1), 1);
        assert!(q.idempotent);
    }

    #[test]
    fn max_antisym_collapses_mutually_comparable() {
        let m = three_element_fixture();
        let q = quotient(&m, &QuotientKind::MaxAntisym).unwrap();
        assert_eq!(q.monoid.n(), 2);
        assert_eq!(q.projection, vec![0, 1, 1]);
        assert!(q.idempotent);
    }

    #[test]
    fn full_o_ideal_gives_trivial_quotient() {
        let m = three_element_fixture();
        let q = quotient(&m, &QuotientKind::OIdeal(vec![0, 1, 2])).unwrap();
        assert_eq!(q.monoid.n(), 1);
        assert!(q.idempotent);
    }

    #[test]
    fn o_ideal_parameter_is_checked() {
        let m = three_element_fixture();
        // {0, a} is not an o-ideal: a + a = 2a escapes
        assert_eq!(
            quotient(&m, &QuotientKind::OIdeal(vec![0, 1])).unwrap_err(),
            QuotientError::NotAnOIdeal(2)
        );
        assert_eq!(
            quotient(&m, &QuotientKind::PowerSome(vec![])).unwrap_err(),
            QuotientError::EmptyMultiplierSet
        );
        assert_eq!(
            quotient(&m, &QuotientKind::PowerAll(vec![1])).unwrap_err(),
            QuotientError::MultiplierTooSmall(1)
        );
    }

    #[test]
    fn power_all_on_z4_halves_the_group() {
        // for-all with S = {2} on Z/4 identifies 0 with 2, and the quotient
        // Z/2 still collapses under the same rule: idempotency fails here
        let z4 = cyclic_monoid(0, 4);
        let q = quotient(&z4, &QuotientKind::PowerAll(vec![2])).unwrap();
        assert_eq!(q.monoid.n(), 2);
        assert!(!q.idempotent);
    }

    #[test]
    fn smallest_congruence_for_cancellative_target() {
        let m = three_element_fixture();
        let cong = smallest_sr_plus_congruence(&m, &[(1, 1)]);
        // the least congruence making a cancel merges {0, 2a}; the quotient is
        // the two-element group
        assert_eq!(cong.classes(), vec![vec![0, 2], vec![1]]);
        let (q, proj) = build_quotient(&m, &cong);
        assert_eq!(q.n(), 2);
        assert!(q.strong_condition_holds(proj[1], 1));
        assert_eq!(sr_exact_finite(&q, proj[1]).rank, Rank::Finite(1));
    }

    #[test]
    fn satisfied_target_needs_no_merging() {
        let z2 = cyclic_monoid(0, 2);
        let cong = smallest_sr_plus_congruence(&z2, &[(1, 1)]);
        assert!(cong.is_identity());
    }

    #[test]
    fn trivial_monoid_target() {
        let m = cyclic_monoid(0, 1);
        let cong = smallest_sr_plus_congruence(&m, &[(0, 3)]);
        assert!(cong.is_identity());
    }
}
