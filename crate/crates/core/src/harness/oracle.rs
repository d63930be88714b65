//! Deliberately naive reference implementations used only for cross-checks:
//! a breadth-first congruence closure over a bounded universe of exponent
//! vectors, a brute-force congruence enumerator for small finite monoids, and
//! seeded random generators for presentations and finite monoids.

use crate::finite::{
    cyclic_monoid, direct_product, truncated_naturals, validate, with_absorber, Congruence,
    FiniteMonoid,
};
use crate::presentation::{ExponentVector, MonoidPresentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Congruence closure of the relations over all vectors of degree at most
/// `degree_cap`, by single relation applications in both directions. Classes
/// that never tried to step outside the universe are complete congruence
/// classes, so the oracle is conclusive about them.
pub struct ClosureOracle {
    universe: Vec<ExponentVector>,
    index: HashMap<ExponentVector, usize>,
    parent: Vec<usize>,
    class_pruned: Vec<bool>,
}

impl ClosureOracle {
    pub fn new(p: &MonoidPresentation, degree_cap: u64) -> Self {
        let k = p.generator_count();
        let mut universe = Vec::new();
        let mut cur = vec![0u64; k];
        collect_vectors(&mut cur, 0, degree_cap, &mut universe);
        universe.sort();
        let index: HashMap<ExponentVector, usize> = universe
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut parent: Vec<usize> = (0..universe.len()).collect();
        let mut pruned = vec![false; universe.len()];

        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }

        for i in 0..universe.len() {
            for (u, v) in &p.relations {
                for (from, to) in [(u, v), (v, u)] {
                    if from.divides(&universe[i]) {
                        let stepped = from.sub_from(&universe[i]).add(to);
                        match index.get(&stepped) {
                            Some(&j) => {
                                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                                if ri != rj {
                                    parent[ri.max(rj)] = ri.min(rj);
                                }
                            }
                            None => pruned[i] = true,
                        }
                    }
                }
            }
        }

        let mut class_pruned = vec![false; universe.len()];
        for i in 0..universe.len() {
            if pruned[i] {
                let r = find(&mut parent, i);
                class_pruned[r] = true;
            }
        }
        ClosureOracle {
            universe,
            index,
            parent,
            class_pruned,
        }
    }

    fn root(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// `Some(true)`: a rewrite chain inside the universe relates them.
    /// `Some(false)`: at least one side has a complete class excluding the
    /// other. `None`: inconclusive at this degree cap.
    pub fn related(&self, u: &ExponentVector, v: &ExponentVector) -> Option<bool> {
        let (iu, iv) = (self.index.get(u)?, self.index.get(v)?);
        let (ru, rv) = (self.root(*iu), self.root(*iv));
        if ru == rv {
            return Some(true);
        }
        if !self.class_pruned[ru] || !self.class_pruned[rv] {
            return Some(false);
        }
        None
    }

    pub fn universe(&self) -> &[ExponentVector] {
        &self.universe
    }
}

fn collect_vectors(cur: &mut Vec<u64>, pos: usize, remaining: u64, out: &mut Vec<ExponentVector>) {
    if pos == cur.len() {
        out.push(ExponentVector(cur.clone()));
        return;
    }
    for c in 0..=remaining {
        cur[pos] = c;
        collect_vectors(cur, pos + 1, remaining - c, out);
    }
    cur[pos] = 0;
}

/// Random presentations with up to 3 generators and 4 relations, relation
/// sides of total degree at most 4.
pub fn random_presentations(count: usize, seed: u64) -> Vec<MonoidPresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["a", "b", "c"];
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3usize);
            let rels = rng.gen_range(0..=4usize);
            let relations = (0..rels)
                .map(|_| (random_vector(&mut rng, k, 4), random_vector(&mut rng, k, 4)))
                .filter(|(u, v)| u != v)
                .collect();
            MonoidPresentation {
                name: String::new(),
                generators: names[..k].iter().map(|s| s.to_string()).collect(),
                relations,
            }
        })
        .collect()
}

fn random_vector(rng: &mut ChaCha8Rng, k: usize, max_degree: u64) -> ExponentVector {
    let degree = rng.gen_range(0..=max_degree);
    let mut v = vec![0u64; k];
    for _ in 0..degree {
        v[rng.gen_range(0..k)] += 1;
    }
    ExponentVector(v)
}

/// Random validated finite monoids with at most `max_n` elements, composed
/// from cyclic monoids, groups, truncations, absorbers, and direct products.
pub fn random_finite_monoids(count: usize, max_n: usize, seed: u64) -> Vec<FiniteMonoid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = match rng.gen_range(0..5u8) {
            0 => {
                let index = rng.gen_range(0..=(max_n as u64 - 1));
                let period = rng.gen_range(1..=(max_n as u64 - index));
                cyclic_monoid(index, period)
            }
            1 => cyclic_monoid(0, rng.gen_range(1..=max_n as u64)),
            2 => truncated_naturals(rng.gen_range(0..=(max_n as u64).saturating_sub(2))),
            3 => {
                let inner = cyclic_monoid(0, rng.gen_range(1..=(max_n as u64 - 1)));
                with_absorber(&inner)
            }
            _ => {
                let left = cyclic_monoid(rng.gen_range(0..=1u64), rng.gen_range(1..=2u64));
                let right_period = rng.gen_range(1..=2u64);
                let right = cyclic_monoid(rng.gen_range(0..=1u64), right_period);
                direct_product(&left, &right)
            }
        };
        if m.n() <= max_n {
            debug_assert!(validate(&m.to_cayley_document()).is_ok());
            out.push(m);
        }
    }
    out
}

/// Every congruence of a small finite monoid, by filtering all set
/// partitions for additivity. Exponential; callers keep n at 6 or below.
pub fn enumerate_congruences(m: &FiniteMonoid) -> Vec<Congruence> {
    let n = m.n();
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    enumerate_partitions(&mut assignment, 1, 1, &mut |assignment| {
        let mut cong = Congruence::identity(n);
        for x in 0..n {
            for y in (x + 1)..n {
                if assignment[x] == assignment[y] {
                    cong.union(x, y);
                }
            }
        }
        if cong.is_congruence(m) {
            out.push(cong);
        }
    });
    out
}

/// The lattice meet of every congruence whose quotient gives each target
/// element the requested strong stable rank bound. Brute force over all set
/// partitions; the independent check for the fixpoint construction.
pub fn congruence_meet_for_strong_rank(m: &FiniteMonoid, targets: &[(usize, u64)]) -> Congruence {
    let satisfying: Vec<Congruence> = enumerate_congruences(m)
        .into_iter()
        .filter(|c| {
            let (q, proj) = crate::finite::build_quotient(m, c);
            targets
                .iter()
                .all(|&(b, bound)| q.strong_condition_holds(proj[b], bound))
        })
        .collect();
    let mut meet = Congruence::identity(m.n());
    for x in 0..m.n() {
        for y in (x + 1)..m.n() {
            if satisfying.iter().all(|c| c.same(x, y)) {
                meet.union(x, y);
            }
        }
    }
    meet
}

fn enumerate_partitions(
    assignment: &mut Vec<usize>,
    pos: usize,
    blocks: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == assignment.len() {
        f(assignment);
        return;
    }
    for b in 0..=blocks {
        assignment[pos] = b;
        let next = if b == blocks { blocks + 1 } else { blocks };
        enumerate_partitions(assignment, pos + 1, next, f);
    }
}
