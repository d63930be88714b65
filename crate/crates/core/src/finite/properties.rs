//! Exact property reports, order structure, and stable rank on finite monoids.

use super::{FiniteMonoid, Rank};
use serde::Serialize;

/// An exact boolean with a violating witness when false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl Outcome {
    fn holds() -> Self {
        Outcome {
            holds: true,
            witness: None,
        }
    }

    fn fails(witness: Vec<usize>) -> Self {
        Outcome {
            holds: false,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub units: Vec<usize>,
    pub conical: Outcome,
    pub stably_finite: Outcome,
    pub separative: Outcome,
    /// Characterizations (a), (b), (d); these agree on every monoid.
    pub separative_routes: [bool; 3],
    pub strongly_separative: Outcome,
    /// Characterizations (a), (b), (c), (d).
    pub strongly_separative_routes: [bool; 4],
    pub refinement: Outcome,
    pub irreducibles: Vec<usize>,
}

pub fn property_report(m: &FiniteMonoid) -> PropertyReport {
    let units = m.units();

    let conical = match units.iter().find(|&&u| u != m.zero()) {
        Some(&u) => {
            let inv = m.elements().find(|&v| m.add(u, v) == m.zero()).unwrap();
            Outcome::fails(vec![u, inv])
        }
        None => Outcome::holds(),
    };

    let stably_finite = 'sf: {
        for a in m.elements() {
            for x in m.elements() {
                if x != m.zero() && m.add(a, x) == a {
                    break 'sf Outcome::fails(vec![a, x]);
                }
            }
        }
        Outcome::holds()
    };

    let ideals: Vec<Vec<bool>> = m.elements().map(|x| m.o_ideal_of(x)).collect();

    let sep_a = separative_a(m);
    let sep_b = separative_b(m);
    let sep_d = separative_d(m, &ideals);
    let separative_routes = [sep_a.holds, sep_b.holds, sep_d.holds];
    debug_assert!(sep_a.holds == sep_b.holds && sep_b.holds == sep_d.holds);

    let ss_a = strongly_separative_a(m);
    let ss_b = strongly_separative_b(m);
    let ss_c = strongly_separative_c(m, &ideals);
    let ss_d = strongly_separative_d(m);
    let strongly_separative_routes = [ss_a.holds, ss_b.holds, ss_c.holds, ss_d.holds];
    debug_assert!(strongly_separative_routes.iter().all(|&r| r == ss_a.holds));

    let refinement = refinement_outcome(m);

    let irreducibles = m
        .elements()
        .filter(|&a| {
            if m.is_unit(a) {
                return false;
            }
            m.elements().all(|b| {
                m.elements()
                    .all(|c| m.add(b, c) != a || m.is_unit(b) || m.is_unit(c))
            })
        })
        .collect();

    PropertyReport {
        units,
        conical,
        stably_finite,
        separative: sep_a,
        separative_routes,
        strongly_separative: ss_a,
        strongly_separative_routes,
        refinement,
        irreducibles,
    }
}

/// 2x = x + y = 2y forces x = y.
fn separative_a(m: &FiniteMonoid) -> Outcome {
    for x in m.elements() {
        for y in m.elements() {
            if x != y && m.add(x, x) == m.add(x, y) && m.add(x, y) == m.add(y, y) {
                return Outcome::fails(vec![x, y]);
            }
        }
    }
    Outcome::holds()
}

/// 2x = 2y and 3x = 3y force x = y.
fn separative_b(m: &FiniteMonoid) -> Outcome {
    for x in m.elements() {
        for y in m.elements() {
            if x != y
                && m.scalar_mul(2, x) == m.scalar_mul(2, y)
                && m.scalar_mul(3, x) == m.scalar_mul(3, y)
            {
                return Outcome::fails(vec![x, y]);
            }
        }
    }
    Outcome::holds()
}

/// x + z = y + z with z in <x> n <y> forces x = y.
fn separative_d(m: &FiniteMonoid, ideals: &[Vec<bool>]) -> Outcome {
    for x in m.elements() {
        for y in m.elements() {
            if x == y {
                continue;
            }
            for z in m.elements() {
                if ideals[x][z] && ideals[y][z] && m.add(x, z) == m.add(y, z) {
                    return Outcome::fails(vec![x, y, z]);
                }
            }
        }
    }
    Outcome::holds()
}

/// 2x = x + y forces x = y.
fn strongly_separative_a(m: &FiniteMonoid) -> Outcome {
    for x in m.elements() {
        for y in m.elements() {
            if x != y && m.add(x, x) == m.add(x, y) {
                return Outcome::fails(vec![x, y]);
            }
        }
    }
    Outcome::holds()
}

/// (n+1)x = nx + y forces x = y, for every n. The pair ((n+1)x, nx) cycles with
/// the orbit of x, so n up to index + period covers all cases.
fn strongly_separative_b(m: &FiniteMonoid) -> Outcome {
    for x in m.elements() {
        let (i, p) = m.orbit(x);
        for n in 1..=(i + p) {
            let nx = m.scalar_mul(n, x);
            let nx1 = m.scalar_mul(n + 1, x);
            for y in m.elements() {
                if x != y && nx1 == m.add(nx, y) {
                    return Outcome::fails(vec![x, y]);
                }
            }
        }
    }
    Outcome::holds()
}

/// x + z = y + z with z in <x> forces x = y.
fn strongly_separative_c(m: &FiniteMonoid, ideals: &[Vec<bool>]) -> Outcome {
    for x in m.elements() {
        for y in m.elements() {
            if x == y {
                continue;
            }
            for z in m.elements() {
                if ideals[x][z] && m.add(x, z) == m.add(y, z) {
                    return Outcome::fails(vec![x, y, z]);
                }
            }
        }
    }
    Outcome::holds()
}

/// x + 2z = y + z forces x + z = y.
fn strongly_separative_d(m: &FiniteMonoid) -> Outcome {
    for x in m.elements() {
        for y in m.elements() {
            for z in m.elements() {
                if m.add(x, m.scalar_mul(2, z)) == m.add(y, z) && m.add(x, z) != y {
                    return Outcome::fails(vec![x, y, z]);
                }
            }
        }
    }
    Outcome::holds()
}

fn refinement_outcome(m: &FiniteMonoid) -> Outcome {
    // solutions[u][w] = all t with u + t = w
    let n = m.n();
    let mut solutions = vec![vec![Vec::new(); n]; n];
    for u in m.elements() {
        for t in m.elements() {
            solutions[u][m.add(u, t)].push(t);
        }
    }
    for x1 in m.elements() {
        for x2 in m.elements() {
            let s = m.add(x1, x2);
            for y1 in m.elements() {
                for y2 in m.elements() {
                    if m.add(y1, y2) != s {
                        continue;
                    }
                    let mut found = false;
                    'grid: for z11 in m.elements() {
                        for &z12 in &solutions[z11][x1] {
                            for &z21 in &solutions[z11][y1] {
                                for &z22 in &solutions[z12][y2] {
                                    if m.add(z21, z22) == x2 {
                                        found = true;
                                        break 'grid;
                                    }
                                }
                            }
                        }
                    }
                    if !found {
                        return Outcome::fails(vec![x1, x2, y1, y2]);
                    }
                }
            }
        }
    }
    Outcome::holds()
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    /// For each element, the members of the o-ideal it generates.
    pub o_ideals: Vec<Vec<usize>>,
    /// Archimedean components (classes of mutual o-ideal equality), sorted by
    /// smallest member.
    pub components: Vec<Vec<usize>>,
    pub simple: bool,
}

pub fn structure_report(m: &FiniteMonoid) -> StructureReport {
    let ideal_sets: Vec<Vec<bool>> = m.elements().map(|x| m.o_ideal_of(x)).collect();
    let o_ideals: Vec<Vec<usize>> = ideal_sets
        .iter()
        .map(|member| (0..m.n()).filter(|&y| member[y]).collect())
        .collect();

    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; m.n()];
    for x in m.elements() {
        if assigned[x] {
            continue;
        }
        let class: Vec<usize> = m
            .elements()
            .filter(|&y| ideal_sets[x] == ideal_sets[y])
            .collect();
        for &y in &class {
            assigned[y] = true;
        }
        components.push(class);
    }

    let non_units: Vec<usize> = m.elements().filter(|&x| !m.is_unit(x)).collect();
    let simple =
        !non_units.is_empty() && non_units.iter().all(|&x| ideal_sets[x].iter().all(|&b| b));

    StructureReport {
        o_ideals,
        components,
        simple,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SrExact {
    pub rank: Rank,
    pub hermite: Outcome,
    pub self_cancellative: Outcome,
    /// For infinite rank: (k, z) with (k+1)a + z = ka, plus non-unit status.
    pub infinite_witness: Option<(u64, usize)>,
}

/// Exact stable rank of `a`: raise n until the n-condition holds exhaustively,
/// or stop at infinity once a multiple collapse `(k+1)a <= ka` is found for a
/// non-unit (always reached because the orbit of `a` is eventually periodic).
pub fn sr_exact_finite(m: &FiniteMonoid, a: usize) -> SrExact {
    let hermite = hermite_outcome(m, a);
    let self_cancellative = self_cancellative_outcome(m, a);
    let (index, period) = m.orbit(a);
    let orbit_len = index + period;
    let is_unit = m.is_unit(a);

    let mut n = 1u64;
    loop {
        if m.stable_rank_condition_holds(a, n) {
            return SrExact {
                rank: Rank::Finite(u32::try_from(n).expect("rank fits u32")),
                hermite,
                self_cancellative,
                infinite_witness: None,
            };
        }
        if !is_unit {
            let bound = n.saturating_mul(orbit_len);
            for k in 1..=bound {
                let ka = m.scalar_mul(k, a);
                let ka1 = m.scalar_mul(k + 1, a);
                if let Some(z) = m.elements().find(|&z| m.add(ka1, z) == ka) {
                    return SrExact {
                        rank: Rank::Infinite,
                        hermite,
                        self_cancellative,
                        infinite_witness: Some((k, z)),
                    };
                }
            }
        }
        n += 1;
        assert!(
            n <= orbit_len + 2,
            "stable rank search must resolve within the orbit bound"
        );
    }
}

fn hermite_outcome(m: &FiniteMonoid, a: usize) -> Outcome {
    let a2 = m.scalar_mul(2, a);
    for x in m.elements() {
        for y in m.elements() {
            if m.add(a2, x) == m.add(a, y) && m.add(a, x) != y {
                return Outcome::fails(vec![x, y]);
            }
        }
    }
    Outcome::holds()
}

fn self_cancellative_outcome(m: &FiniteMonoid, a: usize) -> Outcome {
    let a2 = m.scalar_mul(2, a);
    for y in m.elements() {
        if m.add(a, y) == a2 && y != a {
            return Outcome::fails(vec![y]);
        }
    }
    Outcome::holds()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{cyclic_monoid, validate};
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
    fn three_element_fixture_properties() {
        let m = three_element_fixture();
        let r = property_report(&m);
        assert!(r.conical.holds);
        assert!(r.separative.holds);
        assert!(r.refinement.holds);
        assert!(!r.stably_finite.holds);
        // a + 2a = a
        assert_eq!(r.stably_finite.witness, Some(vec![1, 2]));
        assert_eq!(r.units, vec![0]);
        assert!(r.irreducibles.is_empty());
    }

    #[test]
    fn trivial_monoid_properties_hold_vacuously() {
        let m = cyclic_monoid(0, 1);
        let r = property_report(&m);
        assert!(r.conical.holds && r.stably_finite.holds && r.separative.holds);
        assert!(r.strongly_separative.holds && r.refinement.holds);
    }

    #[test]
    fn two_element_group_properties() {
        let m = cyclic_monoid(0, 2);
        let r = property_report(&m);
        assert_eq!(r.units, vec![0, 1]);
        assert!(!r.conical.holds);
        assert!(r.separative.holds);
    }

    #[test]
    fn three_element_fixture_structure() {
        let m = three_element_fixture();
        let s = structure_report(&m);
        assert_eq!(s.components, vec![vec![0], vec![1, 2]]);
        assert!(s.simple);
        assert_eq!(s.o_ideals[1], vec![0, 1, 2]);
    }

    #[test]
    fn trivial_monoid_is_not_simple() {
        let s = structure_report(&cyclic_monoid(0, 1));
        assert_eq!(s.components.len(), 1);
        assert!(!s.simple);
    }

    #[test]
    fn group_is_not_simple() {
        let s = structure_report(&cyclic_monoid(0, 2));
        assert_eq!(s.components.len(), 1);
        assert!(!s.simple);
    }

    #[test]
    fn stable_rank_of_torsion_element_is_infinite() {
        let m = three_element_fixture();
        let sr = sr_exact_finite(&m, 1);
        assert_eq!(sr.rank, Rank::Infinite);
        assert!(sr.self_cancellative.holds);
        assert!(!sr.hermite.holds);
        // 2a + a = a + 0 while a + a != 0
        assert_eq!(sr.hermite.witness, Some(vec![1, 0]));
        let (k, z) = sr.infinite_witness.unwrap();
        assert_eq!(m.add(m.scalar_mul(k + 1, 1), z), m.scalar_mul(k, 1));
    }

    #[test]
    fn units_have_rank_one() {
        let m = cyclic_monoid(0, 4);
        for u in m.elements() {
            assert_eq!(sr_exact_finite(&m, u).rank, Rank::Finite(1));
        }
    }
}
