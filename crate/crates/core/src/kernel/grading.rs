//! Exact search for gradings: nonnegative integer weight vectors that agree on
//! both sides of every relation, giving a homomorphism into `(N, +)`.
//!
//! The solver computes the rational kernel of the relation-difference matrix,
//! scales a basis to integers, and enumerates the extreme rays of the
//! nonnegativity cone in kernel coordinates. The sum of all extreme rays has
//! maximal support, and no rays means the only nonnegative solution is zero.

use crate::presentation::{ExponentVector, MonoidPresentation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Generator weights inducing a homomorphism into the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub weights: Vec<u64>,
}

impl Grading {
    pub fn grade(&self, v: &ExponentVector) -> u64 {
        v.0.iter().zip(&self.weights).map(|(c, w)| c * w).sum()
    }

    /// Every generator carries positive weight; grades then bound degrees,
    /// which makes windowed existential searches complete.
    pub fn is_strictly_positive(&self) -> bool {
        self.weights.iter().all(|&w| w > 0)
    }

    pub fn min_positive_weight(&self) -> Option<u64> {
        self.weights.iter().copied().filter(|&w| w > 0).min()
    }

    /// Check `u . w = v . w` for every relation.
    pub fn validates(&self, p: &MonoidPresentation) -> bool {
        self.weights.len() == p.generator_count()
            && p.relations
                .iter()
                .all(|(u, v)| self.grade(u) == self.grade(v))
    }
}

/// Find a nonnegative integer grading with maximal support, or `None` when the
/// zero vector is the only nonnegative solution.
pub fn find_grading(p: &MonoidPresentation) -> Option<Grading> {
    let k = p.generator_count();
    let diffs: Vec<Vec<BigInt>> = p
        .relations
        .iter()
        .map(|(u, v)| {
            (0..k)
                .map(|i| BigInt::from(u.0[i]) - BigInt::from(v.0[i]))
                .collect()
        })
        .collect();

    let basis = integer_kernel_basis(&diffs, k);
    if basis.is_empty() {
        return None;
    }
    let m = basis.len();

    // Cone of kernel coordinates t with (B t)_j >= 0 for every generator j,
    // where column i of B is the i-th basis vector. The basis is linearly
    // independent, so B t = 0 forces t = 0 and the cone is pointed.
    let b_rows: Vec<Vec<BigInt>> = (0..k)
        .map(|j| (0..m).map(|i| basis[i][j].clone()).collect())
        .collect();

    let rays = extreme_rays(&b_rows, m);
    if rays.is_empty() {
        return None;
    }

    let mut total = vec![BigInt::zero(); m];
    for ray in &rays {
        for (acc, c) in total.iter_mut().zip(ray) {
            *acc += c;
        }
    }
    let mut weights: Vec<BigInt> = b_rows
        .iter()
        .map(|row| row.iter().zip(&total).map(|(a, t)| a * t).sum())
        .collect();
    debug_assert!(weights.iter().all(|w| !w.is_negative()));
    let g = weights.iter().fold(BigInt::zero(), |acc, w| acc.gcd(w));
    if !g.is_zero() && !g.is_one() {
        for w in &mut weights {
            *w /= &g;
        }
    }
    let weights: Option<Vec<u64>> = weights.iter().map(|w| u64::try_from(w).ok()).collect();
    let grading = Grading { weights: weights? };
    debug_assert!(grading.validates(p));
    Some(grading)
}

/// Primitive integer basis of the rational kernel of `rows` (each of width n).
fn integer_kernel_basis(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from(c.clone())).collect())
        .collect();
    rational_nullspace(&mat, n)
        .into_iter()
        .map(|v| primitive_integer(&v))
        .collect()
}

/// Null space basis of a rational matrix via Gauss-Jordan elimination.
fn rational_nullspace(rows: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut mat: Vec<Vec<BigRational>> = rows.to_vec();
    let m = mat.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].clone();
        for c in 0..n {
            mat[row][c] = &mat[row][c] / &inv;
        }
        for r in 0..m {
            if r != row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in 0..n {
                    let delta = &f * &mat[row][c];
                    mat[r][c] = &mat[r][c] - delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }

    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -mat[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scale a rational vector to a primitive integer vector (gcd one), keeping
/// direction.
fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut ints {
            *c /= &g;
        }
    }
    ints
}

/// Extreme rays of the pointed cone `{ t : row . t >= 0 for every row }`.
/// Each ray is supported on m-1 linearly independent tight constraints.
fn extreme_rays(rows: &[Vec<BigInt>], m: usize) -> Vec<Vec<BigInt>> {
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let idx: Vec<usize> = (0..rows.len()).collect();
    for subset in subsets_of_size(&idx, m.saturating_sub(1)) {
        let sub: Vec<Vec<BigRational>> = subset
            .iter()
            .map(|&r| {
                rows[r]
                    .iter()
                    .map(|c| BigRational::from(c.clone()))
                    .collect()
            })
            .collect();
        let null = rational_nullspace(&sub, m);
        if null.len() != 1 {
            continue;
        }
        let cand = primitive_integer(&null[0]);
        for dir in [1i8, -1] {
            let ray: Vec<BigInt> = cand
                .iter()
                .map(|c| if dir == 1 { c.clone() } else { -c.clone() })
                .collect();
            let feasible = rows.iter().all(|row| {
                let dot: BigInt = row.iter().zip(&ray).map(|(a, t)| a * t).sum();
                !dot.is_negative()
            });
            if feasible && !rays.contains(&ray) {
                rays.push(ray);
            }
        }
    }
    rays
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size == 0 {
        out.push(Vec::new());
        return out;
    }
    if items.len() < size {
        return out;
    }
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((start, acc)) = stack.pop() {
        if acc.len() == size {
            out.push(acc);
            continue;
        }
        for i in start..items.len() {
            let mut next = acc.clone();
            next.push(items[i]);
            stack.push((i + 1, next));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn grading_of(text: &str) -> Option<Grading> {
        let (p, _) = parse_presentation(text).unwrap();
        find_grading(&p)
    }

    #[test]
    fn two_generator_example_grading() {
        // n = 3: weights a -> 1, b -> 2
        let g = grading_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;").unwrap();
        assert_eq!(g.weights, vec![1, 2]);
        assert!(g.is_strictly_positive());
    }

    #[test]
    fn absorbing_relation_forces_zero_weight() {
        let g = grading_of("gens a b; rel a + b = a;").unwrap();
        assert_eq!(g.weights, vec![1, 0]);
        assert!(!g.is_strictly_positive());
    }

    #[test]
    fn free_monoid_gets_all_ones() {
        let g = grading_of("gens a b c;").unwrap();
        assert_eq!(g.weights, vec![1, 1, 1]);
    }

    #[test]
    fn no_grading_when_kernel_trivial() {
        // g + w = w and 2w = w force both weights to zero
        assert_eq!(grading_of("gens g w; rel g + w = w; rel 2 w = w;"), None);
    }

    #[test]
    fn torsion_relation_kills_weight() {
        // 3a = a forces weight(a) = 0
        assert_eq!(grading_of("gens a; rel 3 a = a;"), None);
    }

    #[test]
    fn gradings_validate_their_presentations() {
        for text in [
            "gens a b; rel 5 a = a + b; rel 8 a = 2 b;",
            "gens a b; rel a + b = a;",
            "gens a b; rel 4 a = 2 a + b; rel 2 a + b = 2 b;",
            "gens a b c; rel a + b = 2 c;",
        ] {
            let (p, _) = parse_presentation(text).unwrap();
            if let Some(g) = find_grading(&p) {
                assert!(g.validates(&p), "invalid grading for {text}");
            }
        }
    }
}
