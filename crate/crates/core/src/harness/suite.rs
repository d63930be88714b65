//! The executable claim suite: fixture facts, cross-fixture theorem
//! assertions, law batteries over random finite monoids, oracle
//! cross-validation, and the certificate audit.

use super::fixtures::{fixture, fixture_ids, Claim, Fixture, FixtureBody, MonoidProperty};
use super::oracle;
use super::oracle::congruence_meet_for_strong_rank;
use crate::finite::{
    build_quotient, property_report, quotient, smallest_sr_plus_congruence, sr_exact_finite,
    structure_report, validate, FiniteMonoid, QuotientKind, Rank,
};
use crate::kernel::{complete, RewriteSystem, DEFAULT_COMPLETION_BUDGET};
use crate::presentation::{parse_cayley, parse_element, parse_presentation, ExponentVector};
use crate::rank::{
    unitarity_report, verify_certificate, Analyzer, RadiusPolicy, SrBracket, TargetVerdict, Verdict,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub fixture: String,
    pub claim: String,
    pub ok: bool,
    pub detail: String,
}

impl ClaimResult {
    fn new(fixture: &str, claim: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        ClaimResult {
            fixture: fixture.to_string(),
            claim: claim.into(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub results: Vec<ClaimResult>,
    pub certificates_audited: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub radius_override: Option<u32>,
    pub fixture_filter: Option<String>,
    /// Skip the random-sample law batteries (fixture runs only).
    pub fixtures_only: bool,
}

const LAW_MONOIDS: usize = 500;
const LAW_SEED: u64 = 0x5eed_cafe;
const ORACLE_PRESENTATIONS: usize = 1000;
const ORACLE_SEED: u64 = 0x0dd_ba11;
const QUOTIENT_MONOIDS: usize = 200;
const QUOTIENT_SEED: u64 = 0x0_b5e55;

pub fn claim_suite(options: &SuiteOptions) -> SuiteReport {
    let ids: Vec<&str> = match &options.fixture_filter {
        Some(f) => fixture_ids().into_iter().filter(|id| *id == f).collect(),
        None => fixture_ids(),
    };
    let mut runs: Vec<(Vec<ClaimResult>, usize)> = ids
        .par_iter()
        .map(|id| {
            let fx = fixture(id).expect("catalog fixture");
            run_fixture(&fx, options.radius_override)
        })
        .collect();

    let mut results = Vec::new();
    let mut audited = 0usize;
    for (rs, n) in runs.drain(..) {
        results.extend(rs);
        audited += n;
    }

    if options.fixture_filter.is_none() && !options.fixtures_only {
        let (theorem_results, theorem_audited) = theorem_assertions(options.radius_override);
        results.extend(theorem_results);
        audited += theorem_audited;
        results.extend(finite_laws(LAW_MONOIDS, LAW_SEED));
        results.extend(oracle_cross_validation(ORACLE_PRESENTATIONS, ORACLE_SEED));
        results.extend(quotient_laws(QUOTIENT_MONOIDS, QUOTIENT_SEED));
    }

    let ok = results.iter().all(|r| r.ok);
    SuiteReport {
        results,
        certificates_audited: audited,
        ok,
    }
}

struct PresentationRun<'a> {
    fixture: &'a Fixture,
    rs: RewriteSystem,
    radius: u32,
}

impl<'a> PresentationRun<'a> {
    fn analyzer(&self) -> Analyzer<'_> {
        let mut an = Analyzer::new(&self.rs);
        if self.fixture.declared_refinement {
            an = an.declare_refinement();
        }
        for (name, m) in &self.fixture.extra_refuters {
            an = an.with_refuter(name, m.clone());
        }
        an
    }

    fn policy(&self) -> RadiusPolicy {
        RadiusPolicy::with_radius(self.radius)
    }

    fn element(&self, expr: &str) -> ExponentVector {
        parse_element(expr, &self.rs.presentation).expect("fixture element parses")
    }
}

/// Verify and count every certificate attached to a bracket.
fn audit_bracket(rs: &RewriteSystem, bracket: &SrBracket, out: &mut Vec<String>) -> usize {
    let mut n = 0;
    for fw in &bracket.lo_evidence {
        if let Some(cert) = &fw.certificate {
            if let Err(e) = verify_certificate(rs, cert) {
                out.push(format!("certificate rejected: {e}"));
            }
            n += 1;
        }
    }
    if let Some(cert) = &bracket.infinite {
        if let Err(e) = verify_certificate(rs, cert) {
            out.push(format!("infinite certificate rejected: {e}"));
        }
        n += 1;
    }
    n
}

fn audit_verdict(rs: &RewriteSystem, verdict: &Verdict, out: &mut Vec<String>) -> usize {
    if let Verdict::Fails(fw) = verdict {
        if let Some(cert) = &fw.certificate {
            if let Err(e) = verify_certificate(rs, cert) {
                out.push(format!("verdict certificate rejected: {e}"));
            }
            return 1;
        }
    }
    0
}

fn run_fixture(fx: &Fixture, radius_override: Option<u32>) -> (Vec<ClaimResult>, usize) {
    match &fx.body {
        FixtureBody::Presentation(text) => run_presentation_fixture(fx, text, radius_override),
        FixtureBody::Cayley(text) => (run_cayley_fixture(fx, text), 0),
    }
}

fn run_presentation_fixture(
    fx: &Fixture,
    text: &str,
    radius_override: Option<u32>,
) -> (Vec<ClaimResult>, usize) {
    let (p, _) = parse_presentation(text).expect("fixture parses");
    let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).expect("fixture completes");
    let radius = radius_override.unwrap_or(fx.radius);
    let run = PresentationRun {
        fixture: fx,
        rs,
        radius,
    };
    let an = run.analyzer();
    let policy = run.policy();

    let mut results = Vec::new();
    let mut audited = 0usize;
    let mut audit_errors: Vec<String> = Vec::new();
    let mut brackets: BTreeMap<String, SrBracket> = BTreeMap::new();
    let mut bracket_of = |an: &Analyzer, expr: &str| -> SrBracket {
        brackets
            .entry(expr.to_string())
            .or_insert_with(|| an.sr_bracket(&run.element(expr), policy))
            .clone()
    };

    for claim in &fx.facts {
        let id = claim.id();
        let result = match claim {
            Claim::SrPinned { element, rank } => {
                let bracket = bracket_of(&an, element);
                audited += audit_bracket(&run.rs, &bracket, &mut audit_errors);
                let pinned = bracket.pinned();
                ClaimResult::new(
                    fx.id,
                    &id,
                    pinned == Some(*rank) && bracket.consistent,
                    format!(
                        "lo={} hi={:?} infinite={}",
                        bracket.certified_lo,
                        bracket.empirical_hi.map(|h| h.n),
                        bracket.infinite.is_some()
                    ),
                )
            }
            Claim::SrEmpirical { element, n } => {
                let bracket = bracket_of(&an, element);
                audited += audit_bracket(&run.rs, &bracket, &mut audit_errors);
                let ok = bracket.empirical_hi.map(|h| h.n) == Some(*n)
                    && bracket.certified_lo <= *n
                    && bracket.infinite.is_none();
                ClaimResult::new(
                    fx.id,
                    &id,
                    ok,
                    format!(
                        "lo={} hi={:?}",
                        bracket.certified_lo,
                        bracket.empirical_hi.map(|h| h.n)
                    ),
                )
            }
            Claim::SrPlusPinned { element, rank } => {
                let bracket = an.sr_plus_bracket(&run.element(element), policy);
                audited += audit_bracket(&run.rs, &bracket, &mut audit_errors);
                ClaimResult::new(
                    fx.id,
                    &id,
                    bracket.pinned() == Some(*rank),
                    format!(
                        "lo={} hi={:?}",
                        bracket.certified_lo,
                        bracket.empirical_hi.map(|h| h.n)
                    ),
                )
            }
            Claim::SelfCancellative { element, holds }
            | Claim::Hermite { element, holds }
            | Claim::Cancellative { element, holds } => {
                let preds = an.element_predicates(&run.element(element), radius);
                let verdict = match claim {
                    Claim::SelfCancellative { .. } => &preds.self_cancellative,
                    Claim::Hermite { .. } => &preds.hermite,
                    _ => &preds.cancellative,
                };
                audited += audit_verdict(&run.rs, verdict, &mut audit_errors);
                let ok = if *holds {
                    !verdict.fails()
                } else {
                    verdict.fails()
                };
                ClaimResult::new(fx.id, &id, ok, format!("{verdict:?}"))
            }
            Claim::Property { property, holds } => {
                let report = an.window_property_report(radius, 2 * radius);
                let verdict = match property {
                    MonoidProperty::Conical => &report.conical,
                    MonoidProperty::StablyFinite => &report.stably_finite,
                    MonoidProperty::Separative => &report.separative,
                    MonoidProperty::StronglySeparative => &report.strongly_separative,
                    MonoidProperty::Refinement => &report.refinement,
                };
                audited += audit_verdict(&run.rs, verdict, &mut audit_errors);
                let ok = if *holds {
                    !verdict.fails()
                } else {
                    verdict.fails()
                };
                ClaimResult::new(fx.id, &id, ok, format!("{verdict:?}"))
            }
            Claim::UnitsWindow { elements } => {
                let expected: BTreeSet<ExponentVector> = elements
                    .iter()
                    .map(|e| run.rs.normal_form(&run.element(e)))
                    .collect();
                let got = units_in_window(&run.rs, radius);
                ClaimResult::new(
                    fx.id,
                    &id,
                    got == expected,
                    format!("window units: {got:?}"),
                )
            }
            Claim::SrSet { elements, expected } => {
                let mut set = BTreeSet::new();
                let mut all_pinned = true;
                for e in elements {
                    let bracket = bracket_of(&an, e);
                    audited += audit_bracket(&run.rs, &bracket, &mut audit_errors);
                    match bracket.pinned() {
                        Some(rank) => {
                            set.insert(rank);
                        }
                        None => all_pinned = false,
                    }
                }
                let want: BTreeSet<Rank> = expected.iter().copied().collect();
                ClaimResult::new(
                    fx.id,
                    &id,
                    all_pinned && set == want,
                    format!("pinned set {set:?}, all_pinned={all_pinned}"),
                )
            }
        };
        results.push(result);
    }

    if !audit_errors.is_empty() {
        results.push(ClaimResult::new(
            fx.id,
            "certificate_audit",
            false,
            audit_errors.join("; "),
        ));
    }
    (results, audited)
}

fn units_in_window(rs: &RewriteSystem, radius: u32) -> BTreeSet<ExponentVector> {
    let w = rs.enumerate_window(radius);
    let mut units = BTreeSet::new();
    for x in &w {
        if w.iter().any(|y| rs.normal_form(&x.add(y)).is_zero()) {
            units.insert(x.clone());
        }
    }
    units
}

fn run_cayley_fixture(fx: &Fixture, text: &str) -> Vec<ClaimResult> {
    let doc = parse_cayley(text).expect("fixture table parses");
    let m = validate(&doc).expect("fixture table is a monoid");
    let index = |label: &str| -> usize {
        m.labels()
            .iter()
            .position(|l| l == label)
            .expect("fixture element label")
    };
    let report = property_report(&m);
    let mut results = Vec::new();
    for claim in &fx.facts {
        let id = claim.id();
        let result = match claim {
            Claim::SrPinned { element, rank } => {
                let exact = sr_exact_finite(&m, index(element));
                ClaimResult::new(
                    fx.id,
                    &id,
                    exact.rank == *rank,
                    format!("exact {}", exact.rank),
                )
            }
            Claim::SrEmpirical { element, n } => {
                let exact = sr_exact_finite(&m, index(element));
                ClaimResult::new(
                    fx.id,
                    &id,
                    exact.rank == Rank::Finite(*n),
                    format!("exact {}", exact.rank),
                )
            }
            Claim::SrPlusPinned { element, rank } => {
                let e = index(element);
                let exact = if m.is_unit(e) {
                    Rank::Finite(1)
                } else {
                    Rank::Infinite
                };
                ClaimResult::new(fx.id, &id, exact == *rank, format!("exact {exact}"))
            }
            Claim::SelfCancellative { element, holds } => {
                let exact = sr_exact_finite(&m, index(element));
                ClaimResult::new(
                    fx.id,
                    &id,
                    exact.self_cancellative.holds == *holds,
                    format!("{:?}", exact.self_cancellative),
                )
            }
            Claim::Hermite { element, holds } => {
                let exact = sr_exact_finite(&m, index(element));
                ClaimResult::new(
                    fx.id,
                    &id,
                    exact.hermite.holds == *holds,
                    format!("{:?}", exact.hermite),
                )
            }
            Claim::Cancellative { element, holds } => {
                let e = index(element);
                let cancellative = m
                    .elements()
                    .all(|x| m.elements().all(|y| m.add(e, x) != m.add(e, y) || x == y));
                ClaimResult::new(fx.id, &id, cancellative == *holds, String::new())
            }
            Claim::Property { property, holds } => {
                let outcome = match property {
                    MonoidProperty::Conical => &report.conical,
                    MonoidProperty::StablyFinite => &report.stably_finite,
                    MonoidProperty::Separative => &report.separative,
                    MonoidProperty::StronglySeparative => &report.strongly_separative,
                    MonoidProperty::Refinement => &report.refinement,
                };
                ClaimResult::new(fx.id, &id, outcome.holds == *holds, format!("{outcome:?}"))
            }
            Claim::UnitsWindow { elements } => {
                let expected: BTreeSet<usize> = elements.iter().map(|e| index(e)).collect();
                let got: BTreeSet<usize> = m.units().into_iter().collect();
                ClaimResult::new(fx.id, &id, got == expected, format!("units {got:?}"))
            }
            Claim::SrSet { elements, expected } => {
                let got: BTreeSet<Rank> = elements
                    .iter()
                    .map(|e| sr_exact_finite(&m, index(e)).rank)
                    .collect();
                let want: BTreeSet<Rank> = expected.iter().copied().collect();
                ClaimResult::new(fx.id, &id, got == want, format!("{got:?}"))
            }
        };
        results.push(result);
    }
    results
}

/// Per-multiple brackets and predicate verdicts, with the theorem assertions
/// that tie them together: monotonicity of the empirical bounds, the floor
/// and ceiling bounds on pinned values, the refinement equality where
/// declared, and eventual Hermite behavior.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplesProfile {
    pub fixture: String,
    pub element: String,
    pub rows: Vec<ProfileRow>,
    pub assertions: Vec<ClaimResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub l: u32,
    pub bracket: SrBracket,
    pub hermite: Verdict,
    pub self_cancellative: Verdict,
}

pub fn multiples_profile(
    fixture_id: &str,
    element: &str,
    l_max: u32,
    radius_override: Option<u32>,
) -> (MultiplesProfile, usize) {
    let fx = fixture(fixture_id).expect("known fixture");
    let FixtureBody::Presentation(text) = &fx.body else {
        panic!("multiples profile runs on presentation fixtures");
    };
    let (p, _) = parse_presentation(text).expect("fixture parses");
    let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).expect("fixture completes");
    let radius = radius_override.unwrap_or(fx.radius);
    let run = PresentationRun {
        fixture: &fx,
        rs,
        radius,
    };
    let an = run.analyzer();
    let policy = run.policy();
    let base = run.element(element);

    let mut rows = Vec::new();
    let mut audited = 0usize;
    let mut audit_errors = Vec::new();
    for l in 1..=l_max {
        let v = ExponentVector(base.0.iter().map(|c| c * l as u64).collect());
        let bracket = an.sr_bracket(&v, policy);
        audited += audit_bracket(&run.rs, &bracket, &mut audit_errors);
        let preds = an.element_predicates(&v, radius);
        rows.push(ProfileRow {
            l,
            bracket,
            hermite: preds.hermite,
            self_cancellative: preds.self_cancellative,
        });
    }

    let mut assertions = Vec::new();
    let push = |assertions: &mut Vec<ClaimResult>, claim: String, ok: bool, detail: String| {
        assertions.push(ClaimResult::new(fixture_id, claim, ok, detail));
    };

    // empirical upper bounds never increase with l (checked at equal radii)
    let his: Vec<Option<u32>> = rows
        .iter()
        .map(|r| r.bracket.empirical_hi.map(|h| h.n))
        .collect();
    let mono = his.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b <= a,
        _ => true,
    });
    push(
        &mut assertions,
        format!("multiples({element}).monotone"),
        mono,
        format!("{his:?}"),
    );

    if let Some(Rank::Finite(n)) = rows[0].bracket.pinned() {
        for row in &rows {
            if let Some(Rank::Finite(p)) = row.bracket.pinned() {
                let l = row.l;
                let lower = 1 + (n - 1) / l;
                let upper = 1 + (n - 1).div_ceil(l);
                push(
                    &mut assertions,
                    format!("multiples({element}).bounds[l={l}]"),
                    lower <= p && p <= upper,
                    format!("{lower} <= {p} <= {upper}"),
                );
                if fx.declared_refinement {
                    push(
                        &mut assertions,
                        format!("multiples({element}).refinement_equality[l={l}]"),
                        p == upper,
                        format!("{p} == {upper}"),
                    );
                }
                if (n - 1) % l == 0 {
                    push(
                        &mut assertions,
                        format!("multiples({element}).divisibility[l={l}]"),
                        p == 1 + (n - 1) / l,
                        format!("{p} == 1 + {}", (n - 1) / l),
                    );
                }
                // reading the pinned pair backwards: p = sr(la) traps sr(a)
                // inside [lp - 2l + 2, lp]
                if l >= 2 {
                    let (lo, hi) = ((l * p).saturating_sub(2 * l) + 2, l * p);
                    push(
                        &mut assertions,
                        format!("multiples({element}).interval[l={l}]"),
                        lo <= n && n <= hi,
                        format!("{lo} <= {n} <= {hi}"),
                    );
                }
            }
        }
        // multiples at and above the stable rank are Hermite, so no certified
        // Hermite failure may appear there
        for row in rows.iter().filter(|r| r.l >= n) {
            push(
                &mut assertions,
                format!("multiples({element}).hermite_beyond_rank[l={}]", row.l),
                !row.hermite.fails(),
                String::new(),
            );
        }
    }

    if !audit_errors.is_empty() {
        push(
            &mut assertions,
            format!("multiples({element}).audit"),
            false,
            audit_errors.join("; "),
        );
    }

    (
        MultiplesProfile {
            fixture: fixture_id.to_string(),
            element: element.to_string(),
            rows,
            assertions,
        },
        audited,
    )
}

fn pinned_rank(profile: &MultiplesProfile, l: u32) -> Option<Rank> {
    profile
        .rows
        .iter()
        .find(|r| r.l == l)
        .and_then(|r| r.bracket.pinned())
}

fn theorem_assertions(radius_override: Option<u32>) -> (Vec<ClaimResult>, usize) {
    let mut results = Vec::new();
    let mut audited = 0usize;

    let mut profiles: BTreeMap<&str, MultiplesProfile> = BTreeMap::new();
    for (id, lmax) in [("F2_3", 3), ("F2_5", 5), ("F2_7", 7), ("F3", 4), ("F5", 2)] {
        let (profile, n) = multiples_profile(id, "a", lmax, radius_override);
        audited += n;
        results.extend(profile.assertions.clone());
        profiles.insert(id, profile);
    }

    // interval bound on the universal fixture: p = sr(2a) = 2 at l = 2 traps
    // sr(a) in [l p - 2l + 2, l p] = [2, 4]
    if let (Some(Rank::Finite(sra)), Some(Rank::Finite(p))) = (
        pinned_rank(&profiles["F5"], 1),
        pinned_rank(&profiles["F5"], 2),
    ) {
        let (l, lo, hi) = (2u32, 2 * p - 2 * 2 + 2, 2 * p);
        results.push(ClaimResult::new(
            "theorems",
            "interval_bound(F5:a,2a)",
            lo <= sra && sra <= hi,
            format!("{lo} <= {sra} <= {hi} (l={l})"),
        ));
    } else {
        results.push(ClaimResult::new(
            "theorems",
            "interval_bound(F5:a,2a)",
            false,
            "values not pinned".to_string(),
        ));
    }

    // unit translation and subadditivity on the unit-tail fixture
    {
        let fx = fixture("F4_5").unwrap();
        let FixtureBody::Presentation(text) = &fx.body else {
            unreachable!()
        };
        let (p, _) = parse_presentation(text).unwrap();
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        let radius = radius_override.unwrap_or(fx.radius);
        let run = PresentationRun {
            fixture: &fx,
            rs,
            radius,
        };
        let an = run.analyzer();
        let policy = run.policy();
        let sr_a = an.sr_bracket(&run.element("a"), policy);
        let sr_ab = an.sr_bracket(&run.element("a + b"), policy);
        let sr_b = an.sr_bracket(&run.element("b"), policy);
        audited += audit_bracket(&run.rs, &sr_a, &mut Vec::new());
        audited += audit_bracket(&run.rs, &sr_ab, &mut Vec::new());
        results.push(ClaimResult::new(
            "theorems",
            "unit_translation(F4_5:a+b)",
            sr_a.pinned().is_some() && sr_a.pinned() == sr_ab.pinned(),
            format!("sr(a)={:?} sr(a+b)={:?}", sr_a.pinned(), sr_ab.pinned()),
        ));
        let sub_ok = match (sr_ab.pinned(), sr_a.pinned(), sr_b.pinned()) {
            (Some(ab), Some(a), Some(b)) => ab <= a.max(b),
            _ => false,
        };
        results.push(ClaimResult::new(
            "theorems",
            "subadditivity(F4_5:a+b)",
            sub_ok,
            format!(
                "sr(a+b)={:?} vs max(sr(a)={:?}, sr(b)={:?})",
                sr_ab.pinned(),
                sr_a.pinned(),
                sr_b.pinned()
            ),
        ));
        // adding the order-two unit never moves the rank of any multiple
        for m in 2..=4u32 {
            let ma = an.sr_bracket(&run.element(&format!("{m} a")), policy);
            let mab = an.sr_bracket(&run.element(&format!("{m} a + b")), policy);
            audited += audit_bracket(&run.rs, &mab, &mut Vec::new());
            results.push(ClaimResult::new(
                "theorems",
                format!("unit_translation(F4_5:{m}a+b)"),
                ma.pinned().is_some() && ma.pinned() == mab.pinned(),
                format!("sr({m}a)={:?} sr({m}a+b)={:?}", ma.pinned(), mab.pinned()),
            ));
        }
    }

    // separative trichotomy: pinned values on declared-separative fixtures
    for id in ["F1", "F3", "F6"] {
        let fx = fixture(id).unwrap();
        let pinned = pinned_fact_ranks(&fx, radius_override);
        let ok = pinned
            .iter()
            .all(|r| matches!(r, Rank::Finite(1) | Rank::Finite(2) | Rank::Infinite));
        results.push(ClaimResult::new(
            "theorems",
            format!("separative_trichotomy({id})"),
            ok,
            format!("{pinned:?}"),
        ));
    }

    // strong/weak consistency on every pinned fixture element
    for id in fixture_ids() {
        let fx = fixture(id).unwrap();
        for claim in &fx.facts {
            let Claim::SrPinned { element, rank } = claim else {
                continue;
            };
            let (sr, srp) = brackets_for(&fx, element, radius_override);
            let ok = match (sr, srp) {
                (Some(Rank::Infinite), Some(Rank::Infinite)) => true,
                (Some(Rank::Finite(n)), Some(Rank::Finite(m))) => n <= m && m <= n + 1,
                _ => false,
            };
            let _ = rank;
            results.push(ClaimResult::new(
                "theorems",
                format!("strong_weak_consistency({id}:{element})"),
                ok,
                format!("sr={sr:?} sr+={srp:?}"),
            ));
        }
    }

    // low rank chains downward: wherever sr pins to 1 on a conical fixture,
    // cancellativity has no certified failure, and a cancellative element
    // never has a certified Hermite failure
    for (id, element) in [("F1", "g"), ("F3", "b"), ("F3", "2b"), ("F4_5", "5a")] {
        let fx = fixture(id).unwrap();
        let FixtureBody::Presentation(text) = &fx.body else {
            unreachable!()
        };
        let (p, _) = parse_presentation(text).unwrap();
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        let radius = radius_override.unwrap_or(fx.radius);
        let run = PresentationRun {
            fixture: &fx,
            rs,
            radius,
        };
        let an = run.analyzer();
        let v = run.element(element);
        let bracket = an.sr_bracket(&v, run.policy());
        let preds = an.element_predicates(&v, radius);
        let conical_declared = fx.facts.iter().any(|c| {
            matches!(
                c,
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true
                }
            )
        });
        let rank_is_one = bracket.pinned() == Some(Rank::Finite(1));
        let ok = !rank_is_one
            || !conical_declared
            || (!preds.cancellative.fails() && !preds.hermite.fails());
        results.push(ClaimResult::new(
            "theorems",
            format!("low_rank_chain({id}:{element})"),
            ok,
            format!(
                "sr pinned {:?}, cancellative fails: {}, hermite fails: {}",
                bracket.pinned(),
                preds.cancellative.fails(),
                preds.hermite.fails()
            ),
        ));
    }

    // the (k,1) verdict pattern coincides with the bracket, and the stability
    // gap of the absorbing fixture pins to one
    {
        let fx = fixture("F3").unwrap();
        let FixtureBody::Presentation(text) = &fx.body else {
            unreachable!()
        };
        let (p, _) = parse_presentation(text).unwrap();
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        let run = PresentationRun {
            fixture: &fx,
            rs,
            radius: radius_override.unwrap_or(fx.radius),
        };
        let an = run.analyzer();
        let profile = an.srkl_profile(&run.element("a"), 3, run.policy());
        let k1_pattern_ok = profile.entries.iter().filter(|e| e.l == 1).all(|e| {
            if e.k < 2 {
                e.holds == Some(false)
            } else {
                e.holds != Some(false) && e.clean
            }
        });
        results.push(ClaimResult::new(
            "theorems",
            "srkl_first_column_matches_bracket(F3:a)",
            k1_pattern_ok,
            format!("{:?}", profile.entries),
        ));
        results.push(ClaimResult::new(
            "theorems",
            "srkl_gap_bracket(F3:a)",
            profile.gap_lower == 1 && profile.gap_upper_empirical == Some(1),
            format!(
                "gap in [{}, {:?}], theorem cap {:?}",
                profile.gap_lower, profile.gap_upper_empirical, profile.gap_upper_theorem
            ),
        ));
    }

    // the height-three fixture has the widest possible stability gap: the
    // (k,l)-conditions only hold once k - l reaches sr(a) - 1 = 2
    {
        let fx = fixture("F2_3").unwrap();
        let FixtureBody::Presentation(text) = &fx.body else {
            unreachable!()
        };
        let (p, _) = parse_presentation(text).unwrap();
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        let run = PresentationRun {
            fixture: &fx,
            rs,
            radius: radius_override.unwrap_or(fx.radius),
        };
        let an = run.analyzer();
        let profile = an.srkl_profile(&run.element("a"), 4, run.policy());
        results.push(ClaimResult::new(
            "theorems",
            "srkl_gap_bracket(F2_3:a)",
            profile.gap_lower == 2
                && profile.gap_upper_empirical == Some(2)
                && profile.gap_upper_theorem == Some(2),
            format!(
                "gap in [{}, {:?}], theorem cap {:?}",
                profile.gap_lower, profile.gap_upper_empirical, profile.gap_upper_theorem
            ),
        ));
    }

    // torsion fixture: structure, irreducibles, component values, and the
    // least congruence forcing the generator to cancel
    {
        let doc = parse_cayley(include_str!("../../../../fixtures/F6.ctab")).unwrap();
        let m = validate(&doc).unwrap();
        let report = property_report(&m);
        let structure = structure_report(&m);
        results.push(ClaimResult::new(
            "theorems",
            "torsion_fixture_structure(F6)",
            structure.simple
                && structure.components == vec![vec![0], vec![1, 2]]
                && report.irreducibles.is_empty(),
            format!("components {:?}", structure.components),
        ));
        // the nonzero component satisfies C = C + C, so its value set must be
        // a singleton {1} or {infinity}: here every element has infinite rank
        let component = &structure.components[1];
        let c_plus_c = component.iter().all(|&c| {
            component
                .iter()
                .any(|&x| component.iter().any(|&y| m.add(x, y) == c))
        });
        let ranks: BTreeSet<Rank> = component
            .iter()
            .map(|&c| sr_exact_finite(&m, c).rank)
            .collect();
        results.push(ClaimResult::new(
            "theorems",
            "component_value_set(F6)",
            c_plus_c && ranks.len() == 1 && ranks.contains(&Rank::Infinite),
            format!("C=C+C: {c_plus_c}, ranks {ranks:?}"),
        ));

        let cong = smallest_sr_plus_congruence(&m, &[(1, 1)]);
        let (q, proj) = build_quotient(&m, &cong);
        let meet = congruence_meet_for_strong_rank(&m, &[(1, 1)]);
        results.push(ClaimResult::new(
            "theorems",
            "smallest_strong_rank_congruence(F6:a,1)",
            cong.classes() == vec![vec![0, 2], vec![1]]
                && q.strong_condition_holds(proj[1], 1)
                && meet.classes() == cong.classes(),
            format!("classes {:?}", cong.classes()),
        ));
    }

    // unitarity window data for the canonical refuting map of the height-three
    // fixture: cofinal and weakly unitary, but not injective
    {
        let fx = fixture("F2_3").unwrap();
        let FixtureBody::Presentation(text) = &fx.body else {
            unreachable!()
        };
        let (p, _) = parse_presentation(text).unwrap();
        let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
        let target = crate::finite::truncated_naturals(1);
        let assignment = vec![2usize, 1usize];
        let hom_ok = rs.check_hom(&target, &assignment).is_ok();
        let report = unitarity_report(&rs, &target, &assignment, 8);
        results.push(ClaimResult::new(
            "theorems",
            "unitarity_window(F2_3->trunc_nat_1)",
            hom_ok
                && report.cofinal == TargetVerdict::Holds
                && report.weakly_unitary == TargetVerdict::Holds
                && report.injective_on_window.fails(),
            format!(
                "cofinal {:?}, weakly_unitary {:?}",
                report.cofinal, report.weakly_unitary
            ),
        ));
    }

    (results, audited)
}

fn brackets_for(
    fx: &Fixture,
    element: &str,
    radius_override: Option<u32>,
) -> (Option<Rank>, Option<Rank>) {
    match &fx.body {
        FixtureBody::Presentation(text) => {
            let (p, _) = parse_presentation(text).unwrap();
            let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
            let run = PresentationRun {
                fixture: fx,
                rs,
                radius: radius_override.unwrap_or(fx.radius),
            };
            let an = run.analyzer();
            let v = run.element(element);
            (
                an.sr_bracket(&v, run.policy()).pinned(),
                an.sr_plus_bracket(&v, run.policy()).pinned(),
            )
        }
        FixtureBody::Cayley(text) => {
            let m = validate(&parse_cayley(text).unwrap()).unwrap();
            let idx = m.labels().iter().position(|l| l == element).unwrap();
            let sr = sr_exact_finite(&m, idx).rank;
            let srp = if m.is_unit(idx) {
                Rank::Finite(1)
            } else {
                Rank::Infinite
            };
            (Some(sr), Some(srp))
        }
    }
}

fn pinned_fact_ranks(fx: &Fixture, radius_override: Option<u32>) -> Vec<Rank> {
    let mut out = Vec::new();
    for claim in &fx.facts {
        let (element, expected_empirical) = match claim {
            Claim::SrPinned { element, .. } => (element, None),
            Claim::SrEmpirical { element, n } => (element, Some(*n)),
            _ => continue,
        };
        let (sr, _) = brackets_for(fx, element, radius_override);
        match (sr, expected_empirical) {
            (Some(r), _) => out.push(r),
            (None, Some(n)) => out.push(Rank::Finite(n)),
            (None, None) => {}
        }
    }
    out
}

fn law(results: &mut Vec<ClaimResult>, claim: &str, failures: Vec<String>, checked: usize) {
    results.push(ClaimResult::new(
        "laws",
        claim,
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} instances checked")
        } else {
            failures.join("; ")
        },
    ));
}

/// Exact laws over random validated finite monoids.
pub fn finite_laws(count: usize, seed: u64) -> Vec<ClaimResult> {
    let monoids = oracle::random_finite_monoids(count, 8, seed);
    let mut results = Vec::new();

    let mut rank_failures = Vec::new();
    let mut route_failures = Vec::new();
    let mut quotient_failures = Vec::new();
    let mut sr_quotient_failures = Vec::new();
    let mut trichotomy_failures = Vec::new();
    let mut irreducible_failures = Vec::new();
    let mut component_failures = Vec::new();
    let mut checked = 0usize;

    for (mi, m) in monoids.iter().enumerate() {
        checked += 1;
        let report = property_report(m);

        for a in m.elements() {
            let exact = sr_exact_finite(m, a);
            let law_rank = if m.is_unit(a) {
                Rank::Finite(1)
            } else {
                Rank::Infinite
            };
            if exact.rank != law_rank {
                rank_failures.push(format!(
                    "monoid {mi} element {a}: search {} vs law {law_rank}",
                    exact.rank
                ));
            }
        }

        if report
            .separative_routes
            .iter()
            .any(|&r| r != report.separative_routes[0])
        {
            route_failures.push(format!(
                "monoid {mi}: separative routes {:?}",
                report.separative_routes
            ));
        }
        if report
            .strongly_separative_routes
            .iter()
            .any(|&r| r != report.strongly_separative_routes[0])
        {
            route_failures.push(format!(
                "monoid {mi}: strong routes {:?}",
                report.strongly_separative_routes
            ));
        }

        // every o-ideal: quotient is a valid monoid, the defining relation is
        // trivialized, and class ranks never exceed source ranks
        for ideal in all_o_ideals(m) {
            match quotient(m, &QuotientKind::OIdeal(ideal.clone())) {
                Ok(q) => {
                    if validate(&q.monoid.to_cayley_document()).is_err() {
                        quotient_failures.push(format!("monoid {mi}: o-ideal quotient invalid"));
                    }
                    if !q.idempotent {
                        quotient_failures
                            .push(format!("monoid {mi}: o-ideal quotient not trivialized"));
                    }
                    for a in m.elements() {
                        let src = sr_exact_finite(m, a).rank;
                        let dst = sr_exact_finite(&q.monoid, q.projection[a]).rank;
                        if dst > src {
                            sr_quotient_failures.push(format!(
                                "monoid {mi} ideal {ideal:?} element {a}: {dst} > {src}"
                            ));
                        }
                    }
                }
                Err(e) => quotient_failures.push(format!("monoid {mi}: {e}")),
            }
        }
        for kind in [
            QuotientKind::MaxAntisym,
            QuotientKind::PowerSome(vec![2]),
            QuotientKind::PowerSome(vec![2, 3]),
            QuotientKind::PowerAll(vec![2]),
            QuotientKind::PowerAll(vec![2, 3]),
        ] {
            match quotient(m, &kind) {
                Ok(q) => {
                    if validate(&q.monoid.to_cayley_document()).is_err() {
                        quotient_failures.push(format!("monoid {mi}: {kind:?} quotient invalid"));
                    }
                    if !matches!(kind, QuotientKind::PowerAll(_)) && !q.idempotent {
                        quotient_failures
                            .push(format!("monoid {mi}: {kind:?} quotient not trivialized"));
                    }
                }
                Err(e) => quotient_failures.push(format!("monoid {mi}: {kind:?}: {e}")),
            }
        }

        if report.separative.holds {
            for a in m.elements() {
                let r = sr_exact_finite(m, a).rank;
                if !matches!(r, Rank::Finite(1) | Rank::Infinite) {
                    trichotomy_failures.push(format!("monoid {mi} element {a}: rank {r}"));
                }
            }
        }

        if report.conical.holds && report.refinement.holds {
            for &a in &report.irreducibles {
                let cancellative = m
                    .elements()
                    .all(|x| m.elements().all(|y| m.add(a, x) != m.add(a, y) || x == y));
                if !cancellative {
                    irreducible_failures
                        .push(format!("monoid {mi}: irreducible {a} not cancellative"));
                }
            }
            let structure = structure_report(m);
            for component in &structure.components {
                let c_plus_c = component.iter().all(|&c| {
                    component
                        .iter()
                        .any(|&x| component.iter().any(|&y| m.add(x, y) == c))
                });
                if !c_plus_c {
                    continue;
                }
                let ranks: BTreeSet<Rank> = component
                    .iter()
                    .map(|&c| sr_exact_finite(m, c).rank)
                    .collect();
                if ranks.len() > 1 {
                    component_failures.push(format!("monoid {mi}: component ranks {ranks:?}"));
                }
            }
        }
    }

    law(&mut results, "finite_rank_law", rank_failures, checked);
    law(
        &mut results,
        "separativity_routes_agree",
        route_failures,
        checked,
    );
    law(
        &mut results,
        "quotients_sound_and_trivialized",
        quotient_failures,
        checked,
    );
    law(
        &mut results,
        "quotient_rank_never_increases",
        sr_quotient_failures,
        checked,
    );
    law(
        &mut results,
        "separative_trichotomy_random",
        trichotomy_failures,
        checked,
    );
    law(
        &mut results,
        "irreducibles_cancellative",
        irreducible_failures,
        checked,
    );
    law(
        &mut results,
        "component_value_sets",
        component_failures,
        checked,
    );

    // least-congruence minimality against the brute-force lattice meet
    let small = oracle::random_finite_monoids(40, 5, seed ^ 0x55);
    let mut meet_failures = Vec::new();
    for (mi, m) in small.iter().enumerate() {
        let b = mi % m.n();
        let target_m = (mi % 2 + 1) as u64;
        let fix = smallest_sr_plus_congruence(m, &[(b, target_m)]);
        let meet = congruence_meet_for_strong_rank(m, &[(b, target_m)]);
        if fix.classes() != meet.classes() {
            meet_failures.push(format!(
                "monoid {mi} target ({b},{target_m}): fixpoint {:?} vs meet {:?}",
                fix.classes(),
                meet.classes()
            ));
        }
    }
    law(
        &mut results,
        "least_congruence_is_lattice_meet",
        meet_failures,
        small.len(),
    );

    results
}

fn all_o_ideals(m: &FiniteMonoid) -> Vec<Vec<usize>> {
    let n = m.n();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let members: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if crate::finite::is_o_ideal(m, &members).is_ok() {
            out.push((0..n).filter(|&i| members[i]).collect());
        }
    }
    out
}

/// Completion-based equality against the naive congruence-closure oracle.
pub fn oracle_cross_validation(count: usize, seed: u64) -> Vec<ClaimResult> {
    let presentations = oracle::random_presentations(count, seed);
    let mut failures = Vec::new();
    let mut conclusive = 0usize;
    for (pi, p) in presentations.iter().enumerate() {
        let Ok(rs) = complete(p, DEFAULT_COMPLETION_BUDGET) else {
            failures.push(format!("presentation {pi}: completion budget exhausted"));
            continue;
        };
        let oracle = oracle::ClosureOracle::new(p, 10);
        let mut pairs = Vec::new();
        let mut cur = vec![0u64; p.generator_count()];
        collect_upto(&mut cur, 0, 6, &mut pairs);
        for (i, u) in pairs.iter().enumerate() {
            for v in &pairs[i + 1..] {
                match oracle.related(u, v) {
                    Some(true) => {
                        conclusive += 1;
                        if !rs.equal(u, v) {
                            failures.push(format!(
                                "presentation {pi}: oracle relates {u:?} ~ {v:?}, completion disagrees"
                            ));
                        }
                    }
                    Some(false) => {
                        conclusive += 1;
                        if rs.equal(u, v) {
                            failures.push(format!(
                                "presentation {pi}: oracle separates {u:?} / {v:?}, completion merges"
                            ));
                        }
                    }
                    None => {}
                }
            }
        }
    }
    let mut results = Vec::new();
    results.push(ClaimResult::new(
        "laws",
        "oracle_equivalence",
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} presentations, {conclusive} conclusive pairs, zero disagreements",
                presentations.len()
            )
        } else {
            failures.truncate(5);
            failures.join("; ")
        },
    ));
    results
}

fn collect_upto(cur: &mut Vec<u64>, pos: usize, remaining: u64, out: &mut Vec<ExponentVector>) {
    if pos == cur.len() {
        out.push(ExponentVector(cur.clone()));
        return;
    }
    for c in 0..=remaining {
        cur[pos] = c;
        collect_upto(cur, pos + 1, remaining - c, out);
    }
    cur[pos] = 0;
}

/// Quotient propositions at desk scale: the maximal antisymmetric quotient of
/// a stably finite refinement monoid keeps both properties and every rank;
/// power quotients of conical monoids stay conical.
pub fn quotient_laws(count: usize, seed: u64) -> Vec<ClaimResult> {
    let monoids = oracle::random_finite_monoids(count, 8, seed);
    let mut antisym_failures = Vec::new();
    let mut conical_failures = Vec::new();
    let mut antisym_checked = 0usize;
    let mut conical_checked = 0usize;

    for (mi, m) in monoids.iter().enumerate() {
        let report = property_report(m);
        if report.stably_finite.holds && report.refinement.holds {
            antisym_checked += 1;
            match quotient(m, &QuotientKind::MaxAntisym) {
                Ok(q) => {
                    let qr = property_report(&q.monoid);
                    if !qr.stably_finite.holds || !qr.refinement.holds {
                        antisym_failures.push(format!("monoid {mi}: quotient loses properties"));
                    }
                    for a in m.elements() {
                        let src = sr_exact_finite(m, a).rank;
                        let dst = sr_exact_finite(&q.monoid, q.projection[a]).rank;
                        if src != dst {
                            antisym_failures
                                .push(format!("monoid {mi} element {a}: rank {src} became {dst}"));
                        }
                    }
                }
                Err(e) => antisym_failures.push(format!("monoid {mi}: {e}")),
            }
        }
        if report.conical.holds {
            conical_checked += 1;
            for kind in [
                QuotientKind::PowerSome(vec![2]),
                QuotientKind::PowerSome(vec![3]),
                QuotientKind::PowerAll(vec![2]),
                QuotientKind::PowerAll(vec![2, 5]),
            ] {
                match quotient(m, &kind) {
                    Ok(q) => {
                        if !property_report(&q.monoid).conical.holds {
                            conical_failures
                                .push(format!("monoid {mi}: {kind:?} quotient not conical"));
                        }
                    }
                    Err(e) => conical_failures.push(format!("monoid {mi}: {kind:?}: {e}")),
                }
            }
        }
    }

    let mut results = Vec::new();
    law(
        &mut results,
        "antisym_quotient_preserves_rank",
        antisym_failures,
        antisym_checked,
    );
    law(
        &mut results,
        "power_quotients_stay_conical",
        conical_failures,
        conical_checked,
    );
    results
}
