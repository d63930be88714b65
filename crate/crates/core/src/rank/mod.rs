//! Stable-rank analysis on finitely presented monoids.
//!
//! Universal statements over an infinite carrier are never reported as bare
//! facts: a `Verdict` either holds with evidence, fails with a re-checkable
//! witness, or is `UnknownUpTo` the searched radius. Lower bounds and infinite
//! rank are certified through finitely checkable devices: cancellation
//! witnesses, multiple collapses, finite-quotient refutations, and existential
//! searches made complete by a strictly positive grading.

use crate::finite::{FiniteMonoid, Rank};
use crate::kernel::{FiniteRealization, Finiteness, Grading, RewriteSystem};
use crate::presentation::{CayleyDocument, ExponentVector};
use serde::Serialize;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

pub mod refute;
pub mod verify;
mod window;

pub use verify::{verify_certificate, VerifyError};
pub use window::unitarity_report;

/// Three-valued outcome for a universally quantified statement.
// verdicts are report values, not hot-loop state, so the size skew from the
// witness payload is fine
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds(HoldsEvidence),
    Fails(FailWitness),
    UnknownUpTo { radius: u32 },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum HoldsEvidence {
    /// The carrier is finite and every instance was checked.
    Exhaustive { domain: usize },
    /// Certified by a grading argument (e.g. conicality under strictly
    /// positive weights).
    Grading { weights: Vec<u64> },
    /// Forced because the element in question is the identity.
    Identity,
    /// Finitely many instances, each with a recorded witness.
    Witnessed,
}

/// A failing instance. The elements carry role labels; `certificate` is
/// present when an inner existential had to be refuted, and `search` records
/// a grading-complete existential search.
#[derive(Clone, Debug, Serialize)]
pub struct FailWitness {
    pub elements: Vec<(String, ExponentVector)>,
    pub certificate: Option<Certificate>,
    pub search: Option<SearchBound>,
}

impl FailWitness {
    pub fn plain(elements: Vec<(&str, ExponentVector)>) -> Self {
        FailWitness {
            elements: elements
                .into_iter()
                .map(|(r, v)| (r.to_string(), v))
                .collect(),
            certificate: None,
            search: None,
        }
    }
}

/// Marks an existential search as complete: under strictly positive weights
/// every candidate has total degree at most `degree_bound`.
#[derive(Clone, Debug, Serialize)]
pub struct SearchBound {
    pub weights: Vec<u64>,
    pub degree_bound: u64,
}

/// A finite monoid used as a refutation target, shipped in re-verifiable form.
#[derive(Clone, Debug, Serialize)]
pub struct RefTarget {
    pub name: String,
    pub document: CayleyDocument,
}

/// Evidence that an element is not a unit.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "via", rename_all = "snake_case")]
pub enum NonUnitEvidence {
    /// Positive grade: `a + e = 0` would force grade zero.
    Grading { weights: Vec<u64> },
    /// The image of `a` in a finite quotient has no inverse there.
    Hom {
        target: RefTarget,
        assignment: Vec<usize>,
    },
}

/// Machine-checkable certificates. Each kind re-verifies from normal-form
/// equalities plus, where a target is involved, exhaustive search in it.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `(n+1)a + b = a + c` while `na + b != c`: cancellation would force the
    /// equality, so sr(a) > n.
    Cancellation {
        a: ExponentVector,
        n: u32,
        b: ExponentVector,
        c: ExponentVector,
    },
    /// `(k+1)a + z = ka` for a non-unit `a`: sr(a) is infinite.
    PurelyInfinite {
        a: ExponentVector,
        k: u32,
        z: ExponentVector,
        non_unit: NonUnitEvidence,
    },
    /// `ka + x = la + y` holds, and in the finite target no element plays the
    /// role of `e` with `ka = la + e`, `e + x = y`: the (k,l)-condition fails.
    Refutation {
        a: ExponentVector,
        k: u32,
        l: u32,
        x: ExponentVector,
        y: ExponentVector,
        target: RefTarget,
        assignment: Vec<usize>,
    },
    /// Same failing pair, with the e-search complete by grade bound.
    GradeBound {
        a: ExponentVector,
        k: u32,
        l: u32,
        x: ExponentVector,
        y: ExponentVector,
        weights: Vec<u64>,
        degree_bound: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalHi {
    pub n: u32,
    pub radius: u32,
}

/// Certified lower bound, optional infinity certificate, and the empirical
/// upper bound with its search radius.
#[derive(Clone, Debug, Serialize)]
pub struct SrBracket {
    pub certified_lo: u32,
    /// One failing instance per certified level, in ascending order. Weak
    /// condition failures carry certificates; strong condition failures are
    /// the witness pair itself.
    pub lo_evidence: Vec<FailWitness>,
    pub infinite: Option<Certificate>,
    pub empirical_hi: Option<EmpiricalHi>,
    pub consistent: bool,
    /// True when this brackets the strong stable rank.
    pub strong: bool,
}

impl SrBracket {
    /// Exact value when both sides meet, or infinity when certified.
    pub fn pinned(&self) -> Option<Rank> {
        if self.infinite.is_some() {
            return Some(Rank::Infinite);
        }
        match self.empirical_hi {
            Some(hi) if hi.n == self.certified_lo => Some(Rank::Finite(hi.n)),
            _ => None,
        }
    }
}

/// Result of checking one (k,l)-condition over a window.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// No uncertified candidate failures were left over.
    pub clean: bool,
    pub pairs_checked: usize,
    pub radius: u32,
    pub witness_radius: u32,
}

/// Exact two-valued outcome of a check that ranges over a finite target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TargetVerdict {
    Holds,
    Fails { witness: Vec<String> },
}

/// Window report for a homomorphism into a finite monoid: injectivity is a
/// windowed verdict, while cofinality and weak unitarity of the (exactly
/// computed) image submonoid are decided outright.
#[derive(Clone, Debug, Serialize)]
pub struct UnitarityReport {
    pub injective_on_window: Verdict,
    pub cofinal: TargetVerdict,
    pub weakly_unitary: TargetVerdict,
    pub image_size: usize,
    pub radius: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementPredicates {
    pub cancellative: Verdict,
    pub hermite: Verdict,
    pub self_cancellative: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowPropertyReport {
    pub conical: Verdict,
    pub stably_finite: Verdict,
    pub separative: Verdict,
    pub strongly_separative: Verdict,
    pub refinement: Verdict,
    pub simplicity: Verdict,
    /// Partition of the window by mutual-domination witnesses. A refinement
    /// of the true archimedean partition: classes may merge beyond the radius.
    pub components: Vec<Vec<ExponentVector>>,
    pub radius: u32,
    pub witness_radius: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SrklEntry {
    pub k: u32,
    pub l: u32,
    pub holds: Option<bool>,
    pub clean: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SrklProfile {
    pub entries: Vec<SrklEntry>,
    /// Certified lower bound for the stability gap invariant of the element.
    pub gap_lower: u32,
    /// Empirical upper bound, present when some clean condition pins it.
    pub gap_upper_empirical: Option<u32>,
    /// Upper bound from the pinned stable rank, when available.
    pub gap_upper_theorem: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum RankError {
    #[error("refinement mode requested but refinement is not declared for this system")]
    RefinementNotDeclared,
}

/// Radius defaults: `R = 4 * (max relation degree + requested level)` unless
/// overridden, witness searches at `2R`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RadiusPolicy {
    pub explicit: Option<u32>,
    /// Highest condition level scanned when bracketing.
    pub level_cap: u32,
    /// Highest k searched for a multiple collapse.
    pub collapse_cap: u32,
}

impl Default for RadiusPolicy {
    fn default() -> Self {
        RadiusPolicy {
            explicit: None,
            level_cap: 12,
            collapse_cap: 8,
        }
    }
}

impl RadiusPolicy {
    pub fn with_radius(radius: u32) -> Self {
        RadiusPolicy {
            explicit: Some(radius),
            ..Default::default()
        }
    }

    pub fn radius_for(&self, rs: &RewriteSystem, level: u32) -> u32 {
        self.explicit
            .unwrap_or_else(|| 4 * (rs.presentation.max_relation_degree() as u32 + level))
    }
}

/// Analysis context for one rewrite system: grading, finiteness, and the
/// refutation target library are computed once and shared by every check.
pub struct Analyzer<'a> {
    pub rs: &'a RewriteSystem,
    pub grading: Option<Grading>,
    pub finite: Option<FiniteRealization>,
    pub refinement_declared: bool,
    refuters: Vec<(String, FiniteMonoid)>,
    windows: RefCell<BTreeMap<u32, Rc<Vec<ExponentVector>>>>,
}

pub const DEFAULT_FINITE_PROBE_CAP: usize = 512;

impl<'a> Analyzer<'a> {
    pub fn new(rs: &'a RewriteSystem) -> Self {
        assert!(
            rs.confluence_checked,
            "exact claims need a confluent system"
        );
        let grading = crate::kernel::find_grading(&rs.presentation);
        let finite = match rs.detect_finite(DEFAULT_FINITE_PROBE_CAP) {
            Finiteness::Finite(real) => Some(real),
            Finiteness::NotClosedWithin { .. } => None,
        };
        Analyzer {
            rs,
            grading,
            finite,
            refinement_declared: false,
            refuters: refute::default_refuters(),
            windows: RefCell::new(BTreeMap::new()),
        }
    }

    /// Add a user-supplied refutation target, tried after the built-in
    /// library.
    pub fn with_refuter(mut self, name: &str, monoid: FiniteMonoid) -> Self {
        self.refuters.push((name.to_string(), monoid));
        self
    }

    pub fn declare_refinement(mut self) -> Self {
        self.refinement_declared = true;
        self
    }

    pub fn refuters(&self) -> &[(String, FiniteMonoid)] {
        &self.refuters
    }

    /// Strictly positive grading, when one exists: the lever that makes
    /// windowed existential searches complete.
    pub fn positive_grading(&self) -> Option<&Grading> {
        self.grading.as_ref().filter(|g| g.is_strictly_positive())
    }

    pub fn window(&self, radius: u32) -> Rc<Vec<ExponentVector>> {
        let mut cache = self.windows.borrow_mut();
        cache
            .entry(radius)
            .or_insert_with(|| Rc::new(self.rs.enumerate_window(radius)))
            .clone()
    }

    pub fn nf(&self, v: &ExponentVector) -> ExponentVector {
        self.rs.normal_form(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::complete;
    use crate::presentation::parse_presentation;

    #[test]
    fn analyzer_probes_finiteness_and_grading() {
        let (p, _) = parse_presentation("gens a b; rel 3 a = a + b; rel 4 a = 2 b;").unwrap();
        let rs = complete(&p, 10_000).unwrap();
        let an = Analyzer::new(&rs);
        assert!(an.finite.is_none());
        assert_eq!(an.positive_grading().unwrap().weights, vec![1, 2]);

        let (p2, _) = parse_presentation("gens a; rel 3 a = a;").unwrap();
        let rs2 = complete(&p2, 10_000).unwrap();
        let an2 = Analyzer::new(&rs2);
        assert_eq!(an2.finite.as_ref().unwrap().monoid.n(), 3);
        assert!(an2.grading.is_none());
    }
}
