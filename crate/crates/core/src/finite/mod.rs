//! Exact decision procedures on finite commutative monoids.
//!
//! Everything here is decided by exhaustive search over an explicit addition
//! table, so answers are exact values with concrete witnesses, never windowed
//! verdicts.

use crate::presentation::CayleyDocument;
use serde::Serialize;
use std::fmt;

pub mod congruence;
pub mod properties;

pub use congruence::{
    build_quotient, is_o_ideal, quotient, smallest_sr_plus_congruence, Congruence, QuotientError,
    QuotientKind, QuotientResult,
};
pub use properties::{
    property_report, sr_exact_finite, structure_report, PropertyReport, SrExact, StructureReport,
};

/// Stable rank value: a positive integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rank {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => write!(f, "∞"),
        }
    }
}

/// A validated finite commutative monoid given by its addition table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteMonoid {
    labels: Vec<String>,
    zero: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AxiomError {
    #[error("identity axiom violated: 0 + `{x}` != `{x}`")]
    Identity { x: String },
    #[error("commutativity violated at (`{x}`, `{y}`)")]
    Commutativity { x: String, y: String },
    #[error("associativity violated at (`{x}`, `{y}`, `{z}`)")]
    Associativity { x: String, y: String, z: String },
}

/// Verify all monoid axioms on a structurally parsed table.
pub fn validate(doc: &CayleyDocument) -> Result<FiniteMonoid, AxiomError> {
    let n = doc.labels.len();
    let t = &doc.table;
    for x in 0..n {
        if t[doc.zero][x] != x || t[x][doc.zero] != x {
            return Err(AxiomError::Identity {
                x: doc.labels[x].clone(),
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if t[x][y] != t[y][x] {
                return Err(AxiomError::Commutativity {
                    x: doc.labels[x].clone(),
                    y: doc.labels[y].clone(),
                });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if t[t[x][y]][z] != t[x][t[y][z]] {
                    return Err(AxiomError::Associativity {
                        x: doc.labels[x].clone(),
                        y: doc.labels[y].clone(),
                        z: doc.labels[z].clone(),
                    });
                }
            }
        }
    }
    Ok(FiniteMonoid {
        labels: doc.labels.clone(),
        zero: doc.zero,
        table: doc.table.clone(),
    })
}

impl FiniteMonoid {
    /// Build without re-verifying axioms. Callers must supply a table that is
    /// a monoid by construction (e.g. a quotient of a verified monoid).
    pub fn from_parts_unchecked(labels: Vec<String>, zero: usize, table: Vec<Vec<usize>>) -> Self {
        FiniteMonoid {
            labels,
            zero,
            table,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    /// `c * x` by binary addition chains.
    pub fn scalar_mul(&self, c: u64, x: usize) -> usize {
        let mut acc = self.zero;
        let mut base = x;
        let mut c = c;
        while c > 0 {
            if c & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            c >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    /// Witness `z` with `x + z = y`, if the algebraic order relates them.
    pub fn leq_witness(&self, x: usize, y: usize) -> Option<usize> {
        self.elements().find(|&z| self.add(x, z) == y)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq_witness(x, y).is_some()
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.elements().any(|y| self.add(x, y) == self.zero)
    }

    pub fn units(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.is_unit(x)).collect()
    }

    /// Index and period of the multiple sequence `x, 2x, 3x, ...`:
    /// `(index + period) * x = index * x` with both minimal, index >= 1.
    pub fn orbit(&self, x: usize) -> (u64, u64) {
        let mut seen: Vec<(usize, u64)> = Vec::new();
        let mut cur = x;
        let mut m = 1u64;
        loop {
            if let Some(&(_, first)) = seen.iter().find(|&&(e, _)| e == cur) {
                return (first, m - first);
            }
            seen.push((cur, m));
            cur = self.add(cur, x);
            m += 1;
        }
    }

    /// The o-ideal generated by `x`: everything below some multiple of `x`.
    pub fn o_ideal_of(&self, x: usize) -> Vec<bool> {
        let mut multiples = Vec::new();
        let (i, p) = self.orbit(x);
        let mut cur = x;
        for _ in 0..(i + p) {
            if !multiples.contains(&cur) {
                multiples.push(cur);
            }
            cur = self.add(cur, x);
        }
        let mut member = vec![false; self.n()];
        for y in self.elements() {
            if multiples.iter().any(|&m| self.leq(y, m)) {
                member[y] = true;
            }
        }
        member
    }

    /// Exhaustive check of the n-stable-rank condition for `a`:
    /// `na + x = a + y` always admits `e` with `na = a + e` and `e + x = y`.
    pub fn stable_rank_condition_holds(&self, a: usize, n: u64) -> bool {
        self.rank_condition_holds(a, n, 1)
    }

    /// The (k,l)-condition: `k a + x = l a + y` admits `e` with
    /// `k a = l a + e` and `e + x = y`.
    pub fn rank_condition_holds(&self, a: usize, k: u64, l: u64) -> bool {
        let ka = self.scalar_mul(k, a);
        let la = self.scalar_mul(l, a);
        for x in self.elements() {
            for y in self.elements() {
                if self.add(ka, x) != self.add(la, y) {
                    continue;
                }
                let ok = self
                    .elements()
                    .any(|e| self.add(la, e) == ka && self.add(e, x) == y);
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// The strong m-condition: `m a + x = a + y` forces `(m-1) a + x = y`.
    pub fn strong_condition_holds(&self, a: usize, m: u64) -> bool {
        let ma = self.scalar_mul(m, a);
        let prev = self.scalar_mul(m - 1, a);
        for x in self.elements() {
            for y in self.elements() {
                if self.add(ma, x) == self.add(a, y) && self.add(prev, x) != y {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_cayley_document(&self) -> CayleyDocument {
        CayleyDocument {
            labels: self.labels.clone(),
            zero: self.zero,
            table: self.table.clone(),
        }
    }
}

/// Direct product, labels joined with `|`.
pub fn direct_product(a: &FiniteMonoid, b: &FiniteMonoid) -> FiniteMonoid {
    let n = a.n() * b.n();
    let idx = |x: usize, y: usize| x * b.n() + y;
    let mut table = vec![vec![0usize; n]; n];
    let mut labels = Vec::with_capacity(n);
    for x in a.elements() {
        for y in b.elements() {
            labels.push(format!("{}|{}", a.label(x), b.label(y)));
        }
    }
    for x1 in a.elements() {
        for y1 in b.elements() {
            for x2 in a.elements() {
                for y2 in b.elements() {
                    table[idx(x1, y1)][idx(x2, y2)] = idx(a.add(x1, x2), b.add(y1, y2));
                }
            }
        }
    }
    FiniteMonoid::from_parts_unchecked(labels, idx(a.zero(), b.zero()), table)
}

/// Cyclic monoid with the given index and period: `0, a, ..., (i+p-1)a` and
/// `(i+p)a = ia`. Index 0 gives the cyclic group Z/p.
pub fn cyclic_monoid(index: u64, period: u64) -> FiniteMonoid {
    let n = (index + period) as usize;
    assert!(period >= 1 && n >= 1);
    let reduce = |m: u64| -> usize {
        if m < index + period {
            m as usize
        } else {
            (index + (m - index) % period) as usize
        }
    };
    let labels = (0..n).map(|m| format!("{m}a")).collect();
    let table = (0..n)
        .map(|x| (0..n).map(|y| reduce(x as u64 + y as u64)).collect())
        .collect();
    FiniteMonoid::from_parts_unchecked(labels, 0, table)
}

/// Adjoin an absorbing element to a monoid.
pub fn with_absorber(m: &FiniteMonoid) -> FiniteMonoid {
    let n = m.n();
    let mut labels: Vec<String> = m.labels().to_vec();
    labels.push("inf".to_string());
    let mut table = vec![vec![0usize; n + 1]; n + 1];
    for x in 0..n {
        for y in 0..n {
            table[x][y] = m.add(x, y);
        }
    }
    for x in 0..=n {
        table[x][n] = n;
        table[n][x] = n;
    }
    FiniteMonoid::from_parts_unchecked(labels, m.zero(), table)
}

/// Truncated naturals `{0, 1, ..., d, inf}`: sums above `d` collapse to `inf`.
pub fn truncated_naturals(d: u64) -> FiniteMonoid {
    let n = d as usize + 2;
    let mut labels: Vec<String> = (0..=d).map(|m| m.to_string()).collect();
    labels.push("inf".to_string());
    let inf = n - 1;
    let table = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == inf || y == inf || (x + y) as u64 > d {
                        inf
                    } else {
                        x + y
                    }
                })
                .collect()
        })
        .collect();
    FiniteMonoid::from_parts_unchecked(labels, 0, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_cayley;

    pub(crate) fn three_element_fixture() -> FiniteMonoid {
        // {0, a, 2a} with 3a = a
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
    fn validates_three_element_fixture() {
        let m = three_element_fixture();
        assert_eq!(m.n(), 3);
        assert_eq!(m.scalar_mul(3, 1), 1);
        assert_eq!(m.scalar_mul(17, 1), 1);
        assert_eq!(m.scalar_mul(16, 1), 2);
    }

    #[test]
    fn validates_trivial_monoid() {
        let doc = parse_cayley(r#"{"elements": ["0"], "zero": "0", "table": [["0"]]}"#).unwrap();
        assert!(validate(&doc).is_ok());
    }

    #[test]
    fn reports_associativity_counterexample() {
        // commutative and unital but not associative
        let doc = parse_cayley(
            r#"{"elements": ["0","a","b"], "zero": "0",
                "table": [["0","a","b"],["a","0","a"],["b","a","b"]]}"#,
        )
        .unwrap();
        match validate(&doc) {
            Err(AxiomError::Associativity { .. }) => {}
            other => panic!("expected associativity error, got {other:?}"),
        }
    }

    #[test]
    fn orbit_of_torsion_element() {
        let m = three_element_fixture();
        assert_eq!(m.orbit(1), (1, 2)); // a, 2a, 3a=a
        assert_eq!(m.orbit(0), (1, 1));
    }

    #[test]
    fn units_and_order() {
        let m = three_element_fixture();
        assert_eq!(m.units(), vec![0]);
        assert!(m.leq(1, 2)); // a + a = 2a
        assert!(m.leq(2, 1)); // 2a + a = a
        let z2 = cyclic_monoid(0, 2);
        assert_eq!(z2.units(), vec![0, 1]);
    }

    #[test]
    fn builders_are_monoids() {
        for m in [
            cyclic_monoid(1, 2),
            cyclic_monoid(0, 4),
            truncated_naturals(3),
            with_absorber(&cyclic_monoid(0, 2)),
            direct_product(&cyclic_monoid(0, 2), &truncated_naturals(1)),
        ] {
            assert!(validate(&m.to_cayley_document()).is_ok());
        }
    }
}
