//! Independent certificate verification. Every certificate is re-checked from
//! its stated data: normal-form equalities against the rewrite system, target
//! monoid axioms from the shipped table, homomorphism conditions, and the
//! exhaustive searches the certificate claims to have settled.

use super::{Certificate, NonUnitEvidence, RefTarget};
use crate::finite::{validate, FiniteMonoid};
use crate::kernel::{image_of, Grading, RewriteSystem};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("claimed equality does not hold: {0}")]
    EqualityBroken(String),
    #[error("claimed inequality does not hold: {0}")]
    InequalityBroken(String),
    #[error("refutation target is not a monoid: {0}")]
    BadTarget(String),
    #[error("assignment is not a homomorphism (relation {0})")]
    NotAHom(usize),
    #[error("target admits a solution, refuting nothing")]
    TargetSolvable,
    #[error("grading does not validate the presentation")]
    BadGrading,
    #[error("grading is not strictly positive, search incompleteness")]
    GradingNotPositive,
    #[error("grade of the element is zero, no non-unit evidence")]
    GradeZero,
    #[error("image of the element is a unit in the target")]
    ImageIsUnit,
    #[error("grade-bounded search found a solution, refuting nothing")]
    BoundedSearchSolvable,
    #[error("certificate degree bound {claimed} below the required {required}")]
    BoundTooSmall { claimed: u64, required: u64 },
}

fn check_target(target: &RefTarget) -> Result<FiniteMonoid, VerifyError> {
    validate(&target.document).map_err(|e| VerifyError::BadTarget(e.to_string()))
}

fn check_hom(
    rs: &RewriteSystem,
    target: &FiniteMonoid,
    assignment: &[usize],
) -> Result<(), VerifyError> {
    for (i, (u, v)) in rs.presentation.relations.iter().enumerate() {
        if image_of(target, assignment, u) != image_of(target, assignment, v) {
            return Err(VerifyError::NotAHom(i));
        }
    }
    Ok(())
}

fn check_grading(rs: &RewriteSystem, weights: &[u64]) -> Result<Grading, VerifyError> {
    let g = Grading {
        weights: weights.to_vec(),
    };
    if !g.validates(&rs.presentation) {
        return Err(VerifyError::BadGrading);
    }
    Ok(g)
}

/// Re-check a certificate from scratch against the rewrite system it was
/// issued for.
pub fn verify_certificate(rs: &RewriteSystem, cert: &Certificate) -> Result<(), VerifyError> {
    match cert {
        Certificate::Cancellation { a, n, b, c } => {
            let lhs = rs.normal_form(&a.scale(*n as u64 + 1).add(b));
            let rhs = rs.normal_form(&a.add(c));
            if lhs != rhs {
                return Err(VerifyError::EqualityBroken(format!(
                    "({}+1)a + b = a + c",
                    n
                )));
            }
            if rs.normal_form(&a.scale(*n as u64).add(b)) == rs.normal_form(c) {
                return Err(VerifyError::InequalityBroken(format!("{n}a + b != c")));
            }
            Ok(())
        }
        Certificate::PurelyInfinite { a, k, z, non_unit } => {
            let lhs = rs.normal_form(&a.scale(*k as u64 + 1).add(z));
            let rhs = rs.normal_form(&a.scale(*k as u64));
            if lhs != rhs {
                return Err(VerifyError::EqualityBroken(format!("({k}+1)a + z = {k}a")));
            }
            match non_unit {
                NonUnitEvidence::Grading { weights } => {
                    let g = check_grading(rs, weights)?;
                    if g.grade(a) == 0 {
                        return Err(VerifyError::GradeZero);
                    }
                    Ok(())
                }
                NonUnitEvidence::Hom { target, assignment } => {
                    let m = check_target(target)?;
                    check_hom(rs, &m, assignment)?;
                    if m.is_unit(image_of(&m, assignment, a)) {
                        return Err(VerifyError::ImageIsUnit);
                    }
                    Ok(())
                }
            }
        }
        Certificate::Refutation {
            a,
            k,
            l,
            x,
            y,
            target,
            assignment,
        } => {
            let ka = a.scale(*k as u64);
            let la = a.scale(*l as u64);
            if rs.normal_form(&ka.add(x)) != rs.normal_form(&la.add(y)) {
                return Err(VerifyError::EqualityBroken(format!("{k}a + x = {l}a + y")));
            }
            let m = check_target(target)?;
            check_hom(rs, &m, assignment)?;
            let ika = image_of(&m, assignment, &ka);
            let ila = image_of(&m, assignment, &la);
            let ix = image_of(&m, assignment, x);
            let iy = image_of(&m, assignment, y);
            if m.elements()
                .any(|e| m.add(ila, e) == ika && m.add(e, ix) == iy)
            {
                return Err(VerifyError::TargetSolvable);
            }
            Ok(())
        }
        Certificate::GradeBound {
            a,
            k,
            l,
            x,
            y,
            weights,
            degree_bound,
        } => {
            let g = check_grading(rs, weights)?;
            if !g.is_strictly_positive() {
                return Err(VerifyError::GradingNotPositive);
            }
            let ka = rs.normal_form(&a.scale(*k as u64));
            let la = rs.normal_form(&a.scale(*l as u64));
            if rs.normal_form(&ka.add(x)) != rs.normal_form(&la.add(y)) {
                return Err(VerifyError::EqualityBroken(format!("{k}a + x = {l}a + y")));
            }
            let (gka, gla) = (g.grade(&ka), g.grade(&la));
            if gka >= gla {
                let grade_e = gka - gla;
                let required = grade_e / g.min_positive_weight().expect("positive");
                if *degree_bound < required {
                    return Err(VerifyError::BoundTooSmall {
                        claimed: *degree_bound,
                        required,
                    });
                }
                let ynf = rs.normal_form(y);
                for e in rs.enumerate_window(required as u32) {
                    if g.grade(&e) == grade_e
                        && rs.normal_form(&la.add(&e)) == ka
                        && rs.normal_form(&e.add(x)) == ynf
                    {
                        return Err(VerifyError::BoundedSearchSolvable);
                    }
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::complete;
    use crate::presentation::{parse_presentation, ExponentVector};
    use crate::rank::{Analyzer, RadiusPolicy};

    fn ev(coords: &[u64]) -> ExponentVector {
        ExponentVector(coords.to_vec())
    }

    fn rs_of(text: &str) -> RewriteSystem {
        let (p, _) = parse_presentation(text).unwrap();
        complete(&p, 10_000).unwrap()
    }

    #[test]
    fn emitted_certificates_verify() {
        for text in [
            "gens a b; rel 3 a = a + b; rel 4 a = 2 b;",
            "gens a b; rel a + b = a;",
            "gens g w; rel g + w = w; rel 2 w = w;",
            "gens a; rel 3 a = a;",
            "gens a b; rel 4 a = 2 a + b; rel 2 a + b = 2 b;",
        ] {
            let rs = rs_of(text);
            let an = Analyzer::new(&rs);
            for gen in 0..rs.generator_count() {
                let a = ExponentVector::unit(rs.generator_count(), gen);
                let bracket = an.sr_bracket(&a, RadiusPolicy::default());
                for fw in &bracket.lo_evidence {
                    if let Some(cert) = &fw.certificate {
                        verify_certificate(&rs, cert).unwrap_or_else(|e| {
                            panic!("certificate for {text} gen {gen} rejected: {e}")
                        });
                    }
                }
                if let Some(cert) = &bracket.infinite {
                    verify_certificate(&rs, cert).expect("infinite certificate verifies");
                }
            }
        }
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        // false cancellation claim: 2a + 0 = a + a holds but a + 0 = a is equal
        let bad = Certificate::Cancellation {
            a: ev(&[1, 0]),
            n: 1,
            b: ev(&[0, 0]),
            c: ev(&[1, 0]),
        };
        assert_eq!(
            verify_certificate(&rs, &bad),
            Err(VerifyError::InequalityBroken("1a + b != c".to_string()))
        );

        // a is not idempotent, so this collapse equality is false
        let bad2 = Certificate::PurelyInfinite {
            a: ev(&[1, 0]),
            k: 1,
            z: ev(&[0, 0]),
            non_unit: NonUnitEvidence::Grading {
                weights: vec![1, 2],
            },
        };
        assert!(matches!(
            verify_certificate(&rs, &bad2),
            Err(VerifyError::EqualityBroken(_))
        ));

        // wrong weights: not a grading of this presentation
        let bad3 = Certificate::PurelyInfinite {
            a: ev(&[1, 0]),
            k: 1,
            z: ev(&[0, 0]),
            non_unit: NonUnitEvidence::Grading {
                weights: vec![1, 1],
            },
        };
        let rs2 = rs_of("gens a; rel 3 a = a;");
        let _ = rs2;
        assert!(matches!(
            verify_certificate(&rs, &bad3),
            Err(VerifyError::EqualityBroken(_)) | Err(VerifyError::BadGrading)
        ));
    }
}
