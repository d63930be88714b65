//! Windowed searches: rank conditions, brackets, element predicates, and
//! monoid-level property reports over the set of normal forms of bounded
//! degree.

use super::refute;
use super::{
    Analyzer, Certificate, ConditionReport, ElementPredicates, EmpiricalHi, FailWitness,
    HoldsEvidence, NonUnitEvidence, RadiusPolicy, RankError, RefTarget, SearchBound, SrBracket,
    SrklEntry, SrklProfile, Verdict, WindowPropertyReport,
};
use crate::finite::{property_report, structure_report, FiniteMonoid};
use crate::kernel::FiniteRealization;
use crate::presentation::ExponentVector;
use std::collections::BTreeMap;

enum ESearch {
    Found,
    CertifiedEmpty {
        weights: Vec<u64>,
        degree_bound: u64,
    },
    Exhausted,
}

impl<'a> Analyzer<'a> {
    fn identity_target(&self, real: &FiniteRealization) -> (RefTarget, Vec<usize>) {
        let k = self.rs.generator_count();
        let assignment: Vec<usize> = (0..k)
            .map(|g| real.index_of(self.rs, &ExponentVector::unit(k, g)))
            .collect();
        (
            RefTarget {
                name: "self".to_string(),
                document: real.monoid.to_cayley_document(),
            },
            assignment,
        )
    }

    /// Search for `e` with `la + e = ka` and `e + x = y`. Under a strictly
    /// positive grading the search is complete: `e` must have grade
    /// `grade(ka) - grade(la)`, which bounds its degree.
    fn search_condition_e(
        &self,
        ka: &ExponentVector,
        la: &ExponentVector,
        x: &ExponentVector,
        y: &ExponentVector,
        witness_radius: u32,
    ) -> ESearch {
        if let Some(g) = self.positive_grading() {
            let weights = g.weights.clone();
            let (gka, gla) = (g.grade(ka), g.grade(la));
            if gka < gla {
                return ESearch::CertifiedEmpty {
                    weights,
                    degree_bound: 0,
                };
            }
            let grade_e = gka - gla;
            let degree_bound = grade_e / g.min_positive_weight().expect("positive weights");
            let bound = u32::try_from(degree_bound).expect("degree bound fits u32");
            for e in self.window(bound).iter() {
                if g.grade(e) == grade_e && self.nf(&la.add(e)) == *ka && self.nf(&e.add(x)) == *y {
                    return ESearch::Found;
                }
            }
            ESearch::CertifiedEmpty {
                weights,
                degree_bound,
            }
        } else {
            for e in self.window(witness_radius).iter() {
                if self.nf(&la.add(e)) == *ka && self.nf(&e.add(x)) == *y {
                    return ESearch::Found;
                }
            }
            ESearch::Exhausted
        }
    }

    /// The (k,l)-condition for `a` over the window: `ka + x = la + y` must
    /// admit `e` with `ka = la + e` and `e + x = y`. Fails only with a
    /// certificate; exhaustive only on finite monoids.
    pub fn rank_condition_window(
        &self,
        a: &ExponentVector,
        k: u32,
        l: u32,
        radius: u32,
        witness_radius: u32,
    ) -> ConditionReport {
        if let Some(real) = &self.finite {
            let m = &real.monoid;
            let ai = real.index_of(self.rs, a);
            let (ka, la) = (m.scalar_mul(k as u64, ai), m.scalar_mul(l as u64, ai));
            for x in m.elements() {
                for y in m.elements() {
                    if m.add(ka, x) != m.add(la, y) {
                        continue;
                    }
                    let solvable = m.elements().any(|e| m.add(la, e) == ka && m.add(e, x) == y);
                    if !solvable {
                        let (target, assignment) = self.identity_target(real);
                        let (xv, yv) = (real.elements[x].clone(), real.elements[y].clone());
                        let cert = Certificate::Refutation {
                            a: a.clone(),
                            k,
                            l,
                            x: xv.clone(),
                            y: yv.clone(),
                            target,
                            assignment,
                        };
                        return ConditionReport {
                            verdict: Verdict::Fails(FailWitness {
                                elements: vec![("x".to_string(), xv), ("y".to_string(), yv)],
                                certificate: Some(cert),
                                search: None,
                            }),
                            clean: true,
                            pairs_checked: m.n() * m.n(),
                            radius,
                            witness_radius,
                        };
                    }
                }
            }
            return ConditionReport {
                verdict: Verdict::Holds(HoldsEvidence::Exhaustive { domain: m.n() }),
                clean: true,
                pairs_checked: m.n() * m.n(),
                radius,
                witness_radius,
            };
        }

        let w = self.window(radius);
        let ka = self.nf(&a.scale(k as u64));
        let la = self.nf(&a.scale(l as u64));
        let mut by_key: BTreeMap<ExponentVector, Vec<usize>> = BTreeMap::new();
        for (yi, y) in w.iter().enumerate() {
            by_key.entry(self.nf(&la.add(y))).or_default().push(yi);
        }

        let mut pairs = 0usize;
        let mut dirty = false;
        for x in w.iter() {
            let key = self.nf(&ka.add(x));
            let Some(ys) = by_key.get(&key) else { continue };
            for &yi in ys {
                let y = &w[yi];
                pairs += 1;
                match self.search_condition_e(&ka, &la, x, y, witness_radius) {
                    ESearch::Found => {}
                    outcome => {
                        if let Some(cert) = refute::search_condition_refutation(
                            self.rs,
                            self.refuters(),
                            a,
                            k,
                            l,
                            x,
                            y,
                        ) {
                            return ConditionReport {
                                verdict: Verdict::Fails(FailWitness {
                                    elements: vec![
                                        ("x".to_string(), x.clone()),
                                        ("y".to_string(), y.clone()),
                                    ],
                                    certificate: Some(cert),
                                    search: None,
                                }),
                                clean: true,
                                pairs_checked: pairs,
                                radius,
                                witness_radius,
                            };
                        }
                        if let ESearch::CertifiedEmpty {
                            weights,
                            degree_bound,
                        } = outcome
                        {
                            let cert = Certificate::GradeBound {
                                a: a.clone(),
                                k,
                                l,
                                x: x.clone(),
                                y: y.clone(),
                                weights: weights.clone(),
                                degree_bound,
                            };
                            return ConditionReport {
                                verdict: Verdict::Fails(FailWitness {
                                    elements: vec![
                                        ("x".to_string(), x.clone()),
                                        ("y".to_string(), y.clone()),
                                    ],
                                    certificate: Some(cert),
                                    search: Some(SearchBound {
                                        weights,
                                        degree_bound,
                                    }),
                                }),
                                clean: true,
                                pairs_checked: pairs,
                                radius,
                                witness_radius,
                            };
                        }
                        dirty = true;
                    }
                }
            }
        }
        ConditionReport {
            verdict: Verdict::UnknownUpTo { radius },
            clean: !dirty,
            pairs_checked: pairs,
            radius,
            witness_radius,
        }
    }

    /// The n-stable-rank condition for `a` over the window.
    pub fn sr_condition_window(
        &self,
        a: &ExponentVector,
        n: u32,
        radius: u32,
        witness_radius: u32,
    ) -> ConditionReport {
        self.rank_condition_window(a, n, 1, radius, witness_radius)
    }

    /// Reduced check available on refinement monoids: whenever `na = u + v`
    /// and `a = u + w`, then `w <= v`. Errors unless refinement was declared.
    pub fn sr_condition_window_refinement(
        &self,
        a: &ExponentVector,
        n: u32,
        radius: u32,
        witness_radius: u32,
    ) -> Result<ConditionReport, RankError> {
        if !self.refinement_declared {
            return Err(RankError::RefinementNotDeclared);
        }
        let w = self.window(radius);
        let na = self.nf(&a.scale(n as u64));
        let a_nf = self.nf(a);
        let mut pairs = 0usize;
        let mut dirty = false;
        for u in w.iter() {
            for v in w.iter() {
                if self.nf(&u.add(v)) != na {
                    continue;
                }
                for ww in w.iter() {
                    if self.nf(&u.add(ww)) != a_nf {
                        continue;
                    }
                    pairs += 1;
                    match self.search_leq(ww, v, witness_radius) {
                        ESearch::Found => {}
                        ESearch::CertifiedEmpty {
                            weights,
                            degree_bound,
                        } => {
                            return Ok(ConditionReport {
                                verdict: Verdict::Fails(FailWitness {
                                    elements: vec![
                                        ("u".to_string(), u.clone()),
                                        ("v".to_string(), v.clone()),
                                        ("w".to_string(), ww.clone()),
                                    ],
                                    certificate: None,
                                    search: Some(SearchBound {
                                        weights,
                                        degree_bound,
                                    }),
                                }),
                                clean: true,
                                pairs_checked: pairs,
                                radius,
                                witness_radius,
                            });
                        }
                        ESearch::Exhausted => dirty = true,
                    }
                }
            }
        }
        Ok(ConditionReport {
            verdict: Verdict::UnknownUpTo { radius },
            clean: !dirty,
            pairs_checked: pairs,
            radius,
            witness_radius,
        })
    }

    /// Search for `z` with `x + z = y`, complete under a positive grading.
    fn search_leq(&self, x: &ExponentVector, y: &ExponentVector, witness_radius: u32) -> ESearch {
        let ynf = self.nf(y);
        if let Some(g) = self.positive_grading() {
            let weights = g.weights.clone();
            let (gx, gy) = (g.grade(&self.nf(x)), g.grade(&ynf));
            if gy < gx {
                return ESearch::CertifiedEmpty {
                    weights,
                    degree_bound: 0,
                };
            }
            let grade_z = gy - gx;
            let degree_bound = grade_z / g.min_positive_weight().expect("positive weights");
            for z in self.window(degree_bound as u32).iter() {
                if g.grade(z) == grade_z && self.nf(&x.add(z)) == ynf {
                    return ESearch::Found;
                }
            }
            ESearch::CertifiedEmpty {
                weights,
                degree_bound,
            }
        } else {
            for z in self.window(witness_radius).iter() {
                if self.nf(&x.add(z)) == ynf {
                    return ESearch::Found;
                }
            }
            ESearch::Exhausted
        }
    }

    /// A cancellation witness at level n: `(n+1)a + b = a + c` while
    /// `na + b != c`, which certifies sr(a) > n.
    pub fn cancellation_witness(
        &self,
        a: &ExponentVector,
        n: u32,
        radius: u32,
    ) -> Option<Certificate> {
        let w = self.window(radius);
        let n1a = self.nf(&a.scale(n as u64 + 1));
        let na = self.nf(&a.scale(n as u64));
        let a_nf = self.nf(a);
        let mut by_key: BTreeMap<ExponentVector, Vec<usize>> = BTreeMap::new();
        for (ci, c) in w.iter().enumerate() {
            by_key.entry(self.nf(&a_nf.add(c))).or_default().push(ci);
        }
        for b in w.iter() {
            let key = self.nf(&n1a.add(b));
            let Some(cs) = by_key.get(&key) else { continue };
            for &ci in cs {
                let c = &w[ci];
                if self.nf(&na.add(b)) != *c {
                    return Some(Certificate::Cancellation {
                        a: a.clone(),
                        n,
                        b: b.clone(),
                        c: c.clone(),
                    });
                }
            }
        }
        None
    }

    /// A certificate that sr(a) >= n + 1: either a cancellation witness at
    /// level n, or a certified failure of the n-condition.
    pub fn certify_sr_lower(&self, a: &ExponentVector, n: u32, radius: u32) -> Option<Certificate> {
        if self.finite.is_none() {
            if let Some(cert) = self.cancellation_witness(a, n, radius) {
                return Some(cert);
            }
        }
        match self
            .rank_condition_window(a, n, 1, radius, 2 * radius)
            .verdict
        {
            Verdict::Fails(fw) => fw.certificate,
            _ => None,
        }
    }

    /// A certificate that sr(a) is infinite: a multiple collapse
    /// `(k+1)a + z = ka` together with evidence that `a` is not a unit.
    pub fn certify_sr_infinite(
        &self,
        a: &ExponentVector,
        k_max: u32,
        radius: u32,
    ) -> Option<Certificate> {
        if let Some(real) = &self.finite {
            let m = &real.monoid;
            let ai = real.index_of(self.rs, a);
            if m.is_unit(ai) {
                return None;
            }
            let (index, period) = m.orbit(ai);
            for k in 1..=(index + period) {
                let ka = m.scalar_mul(k, ai);
                let k1a = m.scalar_mul(k + 1, ai);
                if let Some(z) = m.elements().find(|&z| m.add(k1a, z) == ka) {
                    let (target, assignment) = self.identity_target(real);
                    return Some(Certificate::PurelyInfinite {
                        a: a.clone(),
                        k: u32::try_from(k).expect("collapse level fits u32"),
                        z: real.elements[z].clone(),
                        non_unit: NonUnitEvidence::Hom { target, assignment },
                    });
                }
            }
            return None;
        }

        let w = self.window(radius);
        for k in 1..=k_max {
            let ka = self.nf(&a.scale(k as u64));
            let k1a = self.nf(&a.scale(k as u64 + 1));
            for z in w.iter() {
                if self.nf(&k1a.add(z)) == ka {
                    let evidence = refute::non_unit_evidence(
                        self.rs,
                        self.grading.as_ref(),
                        self.refuters(),
                        a,
                    )?;
                    return Some(Certificate::PurelyInfinite {
                        a: a.clone(),
                        k,
                        z: z.clone(),
                        non_unit: evidence,
                    });
                }
            }
        }
        None
    }

    /// Bracket the stable rank of `a`: infinity certificate, certified lower
    /// bound by ascending level, and the smallest level whose condition check
    /// comes back clean as the empirical upper bound.
    pub fn sr_bracket(&self, a: &ExponentVector, policy: RadiusPolicy) -> SrBracket {
        let inf_radius = policy.radius_for(self.rs, 1);
        let infinite = self.certify_sr_infinite(a, policy.collapse_cap, inf_radius);
        let mut lo = 1u32;
        let mut evidence: Vec<FailWitness> = Vec::new();
        let mut hi = None;
        if infinite.is_none() {
            for n in 1..=policy.level_cap {
                let radius = policy.radius_for(self.rs, n);
                let report = self.rank_condition_window(a, n, 1, radius, 2 * radius);
                match report.verdict {
                    Verdict::Fails(fw) => {
                        lo = n + 1;
                        evidence.push(fw);
                    }
                    Verdict::Holds(_) => {
                        hi = Some(EmpiricalHi { n, radius });
                        break;
                    }
                    Verdict::UnknownUpTo { .. } if report.clean => {
                        hi = Some(EmpiricalHi { n, radius });
                        break;
                    }
                    Verdict::UnknownUpTo { .. } => {
                        if let Some(cert) = self.cancellation_witness(a, n, radius) {
                            lo = n + 1;
                            evidence.push(FailWitness {
                                elements: Vec::new(),
                                certificate: Some(cert),
                                search: None,
                            });
                        }
                    }
                }
            }
        }
        let consistent = infinite.is_some() || hi.is_none_or(|h| lo <= h.n);
        let empirical_hi = if infinite.is_some() { None } else { hi };
        SrBracket {
            certified_lo: lo,
            lo_evidence: evidence,
            infinite,
            empirical_hi,
            consistent,
            strong: false,
        }
    }

    /// The strong m-condition for `a` over the window: `ma + x = a + y`
    /// forces `(m-1)a + x = y`. Failures are certified directly by the
    /// normal-form inequality.
    pub fn strong_condition_window(
        &self,
        a: &ExponentVector,
        m: u32,
        radius: u32,
    ) -> ConditionReport {
        assert!(m >= 1);
        if let Some(real) = &self.finite {
            let fm = &real.monoid;
            let ai = real.index_of(self.rs, a);
            let ma = fm.scalar_mul(m as u64, ai);
            let prev = fm.scalar_mul(m as u64 - 1, ai);
            for x in fm.elements() {
                for y in fm.elements() {
                    if fm.add(ma, x) == fm.add(ai, y) && fm.add(prev, x) != y {
                        return ConditionReport {
                            verdict: Verdict::Fails(FailWitness::plain(vec![
                                ("x", real.elements[x].clone()),
                                ("y", real.elements[y].clone()),
                            ])),
                            clean: true,
                            pairs_checked: fm.n() * fm.n(),
                            radius,
                            witness_radius: radius,
                        };
                    }
                }
            }
            return ConditionReport {
                verdict: Verdict::Holds(HoldsEvidence::Exhaustive { domain: fm.n() }),
                clean: true,
                pairs_checked: fm.n() * fm.n(),
                radius,
                witness_radius: radius,
            };
        }

        let w = self.window(radius);
        let ma = self.nf(&a.scale(m as u64));
        let a_nf = self.nf(a);
        let prev = self.nf(&a.scale(m as u64 - 1));
        let mut by_key: BTreeMap<ExponentVector, Vec<usize>> = BTreeMap::new();
        for (yi, y) in w.iter().enumerate() {
            by_key.entry(self.nf(&a_nf.add(y))).or_default().push(yi);
        }
        let mut pairs = 0usize;
        for x in w.iter() {
            let key = self.nf(&ma.add(x));
            let Some(ys) = by_key.get(&key) else { continue };
            for &yi in ys {
                let y = &w[yi];
                pairs += 1;
                if self.nf(&prev.add(x)) != *y {
                    return ConditionReport {
                        verdict: Verdict::Fails(FailWitness::plain(vec![
                            ("x", x.clone()),
                            ("y", y.clone()),
                        ])),
                        clean: true,
                        pairs_checked: pairs,
                        radius,
                        witness_radius: radius,
                    };
                }
            }
        }
        ConditionReport {
            verdict: Verdict::UnknownUpTo { radius },
            clean: true,
            pairs_checked: pairs,
            radius,
            witness_radius: radius,
        }
    }

    /// Bracket the strong stable rank. The strong condition has no inner
    /// existential, so every failure is certified by its witness pair.
    pub fn sr_plus_bracket(&self, a: &ExponentVector, policy: RadiusPolicy) -> SrBracket {
        let inf_radius = policy.radius_for(self.rs, 1);
        let infinite = self.certify_sr_infinite(a, policy.collapse_cap, inf_radius);
        let mut lo = 1u32;
        let mut evidence = Vec::new();
        let mut hi = None;
        if infinite.is_none() {
            for m in 1..=policy.level_cap {
                let radius = policy.radius_for(self.rs, m);
                let report = self.strong_condition_window(a, m, radius);
                match report.verdict {
                    Verdict::Fails(fw) => {
                        lo = m + 1;
                        evidence.push(fw);
                    }
                    _ => {
                        hi = Some(EmpiricalHi { n: m, radius });
                        break;
                    }
                }
            }
        }
        let consistent = infinite.is_some() || hi.is_none_or(|h| lo <= h.n);
        let empirical_hi = if infinite.is_some() { None } else { hi };
        SrBracket {
            certified_lo: lo,
            lo_evidence: evidence,
            infinite,
            empirical_hi,
            consistent,
            strong: true,
        }
    }

    /// Verdicts for the (k,l)-conditions with 1 <= l <= k <= k_max, plus a
    /// bracket for the stability gap invariant: the least k - l (at k at
    /// least the stable rank) for which the condition still holds.
    pub fn srkl_profile(
        &self,
        a: &ExponentVector,
        k_max: u32,
        policy: RadiusPolicy,
    ) -> SrklProfile {
        let mut entries = Vec::new();
        for k in 1..=k_max {
            for l in 1..=k {
                let radius = policy.radius_for(self.rs, k);
                let report = self.rank_condition_window(a, k, l, radius, 2 * radius);
                let holds = match &report.verdict {
                    Verdict::Holds(_) => Some(true),
                    Verdict::Fails(_) => Some(false),
                    Verdict::UnknownUpTo { .. } => None,
                };
                entries.push(SrklEntry {
                    k,
                    l,
                    holds,
                    clean: report.clean,
                });
            }
        }
        let bracket = self.sr_bracket(a, policy);
        let sr_pin = bracket.pinned().and_then(|r| match r {
            crate::finite::Rank::Finite(n) => Some(n),
            crate::finite::Rank::Infinite => None,
        });
        let mut gap_lower = 0u32;
        let mut gap_upper = None;
        if let Some(n) = sr_pin {
            for e in &entries {
                if e.k >= n {
                    if e.holds == Some(false) {
                        gap_lower = gap_lower.max(e.k - e.l + 1);
                    }
                    if (e.holds == Some(true) || (e.holds.is_none() && e.clean))
                        && gap_upper.is_none_or(|g| e.k - e.l < g)
                    {
                        gap_upper = Some(e.k - e.l);
                    }
                }
            }
        }
        SrklProfile {
            entries,
            gap_lower,
            gap_upper_empirical: gap_upper,
            gap_upper_theorem: sr_pin.map(|n| n - 1),
        }
    }

    /// Cancellative / Hermite / self-cancellative verdicts for one element.
    pub fn element_predicates(&self, a: &ExponentVector, radius: u32) -> ElementPredicates {
        let a_nf = self.nf(a);
        if a_nf.is_zero() {
            return ElementPredicates {
                cancellative: Verdict::Holds(HoldsEvidence::Identity),
                hermite: Verdict::Holds(HoldsEvidence::Identity),
                self_cancellative: Verdict::Holds(HoldsEvidence::Identity),
            };
        }

        if let Some(real) = &self.finite {
            let m = &real.monoid;
            let ai = real.index_of(self.rs, a);
            let exact = crate::finite::sr_exact_finite(m, ai);
            let to_verdict = |outcome: &crate::finite::properties::Outcome| match &outcome.witness {
                None => Verdict::Holds(HoldsEvidence::Exhaustive { domain: m.n() }),
                Some(wit) => Verdict::Fails(FailWitness::plain(
                    wit.iter()
                        .map(|&e| ("witness", real.elements[e].clone()))
                        .collect(),
                )),
            };
            let cancellative = {
                let mut verdict = Verdict::Holds(HoldsEvidence::Exhaustive { domain: m.n() });
                'search: for x in m.elements() {
                    for y in m.elements() {
                        if x != y && m.add(ai, x) == m.add(ai, y) {
                            verdict = Verdict::Fails(FailWitness::plain(vec![
                                ("x", real.elements[x].clone()),
                                ("y", real.elements[y].clone()),
                            ]));
                            break 'search;
                        }
                    }
                }
                verdict
            };
            return ElementPredicates {
                cancellative,
                hermite: to_verdict(&exact.hermite),
                self_cancellative: to_verdict(&exact.self_cancellative),
            };
        }

        let w = self.window(radius);
        let mut by_key: BTreeMap<ExponentVector, Vec<usize>> = BTreeMap::new();
        for (yi, y) in w.iter().enumerate() {
            by_key.entry(self.nf(&a_nf.add(y))).or_default().push(yi);
        }

        let mut cancellative = Verdict::UnknownUpTo { radius };
        'canc: for x in w.iter() {
            let key = self.nf(&a_nf.add(x));
            if let Some(ys) = by_key.get(&key) {
                for &yi in ys {
                    if w[yi] != *x {
                        cancellative = Verdict::Fails(FailWitness::plain(vec![
                            ("x", x.clone()),
                            ("y", w[yi].clone()),
                        ]));
                        break 'canc;
                    }
                }
            }
        }

        let aa = self.nf(&a_nf.add(&a_nf));
        let mut hermite = Verdict::UnknownUpTo { radius };
        'herm: for x in w.iter() {
            let key = self.nf(&aa.add(x));
            if let Some(ys) = by_key.get(&key) {
                for &yi in ys {
                    let y = &w[yi];
                    if self.nf(&a_nf.add(x)) != *y {
                        hermite = Verdict::Fails(FailWitness::plain(vec![
                            ("x", x.clone()),
                            ("y", y.clone()),
                        ]));
                        break 'herm;
                    }
                }
            }
        }

        let mut self_cancellative = Verdict::UnknownUpTo { radius };
        if let Some(ys) = by_key.get(&aa) {
            for &yi in ys {
                if w[yi] != a_nf {
                    self_cancellative =
                        Verdict::Fails(FailWitness::plain(vec![("y", w[yi].clone())]));
                    break;
                }
            }
        }

        ElementPredicates {
            cancellative,
            hermite,
            self_cancellative,
        }
    }

    /// Monoid-level properties over the window, plus the component partition.
    pub fn window_property_report(&self, radius: u32, witness_radius: u32) -> WindowPropertyReport {
        if let Some(real) = &self.finite {
            return self.finite_property_report(real, radius, witness_radius);
        }

        let w = self.window(radius);
        let grading_holds = || -> Option<Verdict> {
            self.positive_grading().map(|g| {
                Verdict::Holds(HoldsEvidence::Grading {
                    weights: g.weights.clone(),
                })
            })
        };

        let mut conical = None;
        'con: for x in w.iter() {
            for y in w.iter() {
                if (x.is_zero() && y.is_zero()) || !self.nf(&x.add(y)).is_zero() {
                    continue;
                }
                conical = Some(Verdict::Fails(FailWitness::plain(vec![
                    ("x", x.clone()),
                    ("y", y.clone()),
                ])));
                break 'con;
            }
        }
        let conical = conical
            .or_else(grading_holds)
            .unwrap_or(Verdict::UnknownUpTo { radius });

        let mut stably_finite = None;
        'sf: for a in w.iter() {
            for x in w.iter() {
                if !x.is_zero() && self.nf(&a.add(x)) == *a {
                    stably_finite = Some(Verdict::Fails(FailWitness::plain(vec![
                        ("a", a.clone()),
                        ("x", x.clone()),
                    ])));
                    break 'sf;
                }
            }
        }
        let stably_finite = stably_finite
            .or_else(grading_holds)
            .unwrap_or(Verdict::UnknownUpTo { radius });

        let mut separative = Verdict::UnknownUpTo { radius };
        'sep: for x in w.iter() {
            for y in w.iter() {
                if x != y
                    && self.nf(&x.add(x)) == self.nf(&x.add(y))
                    && self.nf(&x.add(y)) == self.nf(&y.add(y))
                {
                    separative = Verdict::Fails(FailWitness::plain(vec![
                        ("x", x.clone()),
                        ("y", y.clone()),
                    ]));
                    break 'sep;
                }
            }
        }

        let mut strongly_separative = Verdict::UnknownUpTo { radius };
        'ssep: for x in w.iter() {
            for y in w.iter() {
                if x != y && self.nf(&x.add(x)) == self.nf(&x.add(y)) {
                    strongly_separative = Verdict::Fails(FailWitness::plain(vec![
                        ("x", x.clone()),
                        ("y", y.clone()),
                    ]));
                    break 'ssep;
                }
            }
        }

        let refinement = self.refinement_window(&w, radius, witness_radius);
        let simplicity = self.simplicity_window(&w, radius);
        let components = self.components_window(&w, witness_radius);

        WindowPropertyReport {
            conical,
            stably_finite,
            separative,
            strongly_separative,
            refinement,
            simplicity,
            components,
            radius,
            witness_radius,
        }
    }

    fn finite_property_report(
        &self,
        real: &FiniteRealization,
        radius: u32,
        witness_radius: u32,
    ) -> WindowPropertyReport {
        let m = &real.monoid;
        let report = property_report(m);
        let structure = structure_report(m);
        let to_verdict = |outcome: &crate::finite::properties::Outcome| match &outcome.witness {
            None => Verdict::Holds(HoldsEvidence::Exhaustive { domain: m.n() }),
            Some(wit) => Verdict::Fails(FailWitness::plain(
                wit.iter()
                    .map(|&e| ("witness", real.elements[e].clone()))
                    .collect(),
            )),
        };
        let simplicity = if structure.simple {
            Verdict::Holds(HoldsEvidence::Exhaustive { domain: m.n() })
        } else {
            Verdict::Fails(FailWitness::plain(Vec::new()))
        };
        WindowPropertyReport {
            conical: to_verdict(&report.conical),
            stably_finite: to_verdict(&report.stably_finite),
            separative: to_verdict(&report.separative),
            strongly_separative: to_verdict(&report.strongly_separative),
            refinement: to_verdict(&report.refinement),
            simplicity,
            components: structure
                .components
                .iter()
                .map(|class| class.iter().map(|&e| real.elements[e].clone()).collect())
                .collect(),
            radius,
            witness_radius,
        }
    }

    fn refinement_window(&self, w: &[ExponentVector], radius: u32, witness_radius: u32) -> Verdict {
        let mut by_sum: BTreeMap<ExponentVector, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, x1) in w.iter().enumerate() {
            for (j, x2) in w.iter().enumerate() {
                by_sum.entry(self.nf(&x1.add(x2))).or_default().push((i, j));
            }
        }
        for pairs in by_sum.values() {
            for &(i1, i2) in pairs {
                for &(j1, j2) in pairs {
                    let (x1, x2, y1, y2) = (&w[i1], &w[i2], &w[j1], &w[j2]);
                    match self.refinement_grid(x1, x2, y1, y2, witness_radius) {
                        GridSearch::Found => {}
                        GridSearch::CertifiedEmpty {
                            weights,
                            degree_bound,
                        } => {
                            return Verdict::Fails(FailWitness {
                                elements: vec![
                                    ("x1".to_string(), x1.clone()),
                                    ("x2".to_string(), x2.clone()),
                                    ("y1".to_string(), y1.clone()),
                                    ("y2".to_string(), y2.clone()),
                                ],
                                certificate: None,
                                search: Some(SearchBound {
                                    weights,
                                    degree_bound,
                                }),
                            });
                        }
                        GridSearch::Exhausted => {
                            // no certificate available; stay unknown
                        }
                    }
                }
            }
        }
        Verdict::UnknownUpTo { radius }
    }

    /// Search for a refinement grid z11, z12, z21, z22. Complete under a
    /// positive grading, which bounds all four entries by the corner grades.
    fn refinement_grid(
        &self,
        x1: &ExponentVector,
        x2: &ExponentVector,
        y1: &ExponentVector,
        y2: &ExponentVector,
        witness_radius: u32,
    ) -> GridSearch {
        let (nx1, nx2, ny1, ny2) = (self.nf(x1), self.nf(x2), self.nf(y1), self.nf(y2));
        let candidates: Vec<ExponentVector>;
        let complete: Option<(Vec<u64>, u64)>;
        if let Some(g) = self.positive_grading() {
            let bound = g.grade(&nx1).min(g.grade(&ny1))
                / g.min_positive_weight().expect("positive weights");
            candidates = self.window(bound as u32).to_vec();
            complete = Some((g.weights.clone(), bound));
        } else {
            candidates = self.window(witness_radius).to_vec();
            complete = None;
        }
        for z11 in &candidates {
            for z12 in &candidates {
                if self.nf(&z11.add(z12)) != nx1 {
                    continue;
                }
                for z21 in &candidates {
                    if self.nf(&z11.add(z21)) != ny1 {
                        continue;
                    }
                    for z22 in &candidates {
                        if self.nf(&z12.add(z22)) == ny2 && self.nf(&z21.add(z22)) == nx2 {
                            return GridSearch::Found;
                        }
                    }
                }
            }
        }
        match complete {
            Some((weights, degree_bound)) => GridSearch::CertifiedEmpty {
                weights,
                degree_bound,
            },
            None => GridSearch::Exhausted,
        }
    }

    fn simplicity_window(&self, w: &[ExponentVector], radius: u32) -> Verdict {
        // a nonzero element of grade zero cannot dominate anything of
        // positive grade, so any grading separating the two refutes
        // simplicity outright
        if let Some(g) = &self.grading {
            let flat = w.iter().find(|x| !x.is_zero() && g.grade(x) == 0);
            let tall = w.iter().find(|y| g.grade(y) > 0);
            if let (Some(x), Some(y)) = (flat, tall) {
                return Verdict::Fails(FailWitness {
                    elements: vec![("x".to_string(), x.clone()), ("y".to_string(), y.clone())],
                    certificate: None,
                    search: Some(SearchBound {
                        weights: g.weights.clone(),
                        degree_bound: 0,
                    }),
                });
            }
        }
        Verdict::UnknownUpTo { radius }
    }

    /// Partition the window by mutual domination witnesses. The result is a
    /// refinement of the true archimedean partition: merges beyond the
    /// witness radius are not visible.
    fn components_window(
        &self,
        w: &[ExponentVector],
        witness_radius: u32,
    ) -> Vec<Vec<ExponentVector>> {
        let n = w.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let m_cap = 2 * witness_radius.max(2) as u64;
        for i in 0..n {
            for j in (i + 1)..n {
                if find(&mut parent, i) == find(&mut parent, j) {
                    continue;
                }
                if self.dominates(&w[i], &w[j], m_cap, witness_radius)
                    && self.dominates(&w[j], &w[i], m_cap, witness_radius)
                {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<ExponentVector>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(w[i].clone());
        }
        classes.into_values().collect()
    }

    /// Does some multiple of `y` dominate `x` (i.e. x <= m y) within bounds?
    fn dominates(
        &self,
        x: &ExponentVector,
        y: &ExponentVector,
        m_cap: u64,
        witness_radius: u32,
    ) -> bool {
        for m in 1..=m_cap {
            let target = self.nf(&y.scale(m));
            if matches!(self.search_leq(x, &target, witness_radius), ESearch::Found) {
                return true;
            }
        }
        false
    }
}

enum GridSearch {
    Found,
    CertifiedEmpty {
        weights: Vec<u64>,
        degree_bound: u64,
    },
    Exhausted,
}

/// Window unitarity data for a verified homomorphism into a finite monoid.
/// The image is the submonoid generated by the assigned elements, computed
/// exactly, so cofinality and weak unitarity are decided outright.
pub fn unitarity_report(
    rs: &crate::kernel::RewriteSystem,
    target: &FiniteMonoid,
    assignment: &[usize],
    radius: u32,
) -> super::UnitarityReport {
    use super::{TargetVerdict, UnitarityReport};

    let mut image = vec![false; target.n()];
    image[target.zero()] = true;
    loop {
        let mut changed = false;
        for s in target.elements() {
            if !image[s] {
                continue;
            }
            for &g in assignment {
                let next = target.add(s, g);
                if !image[next] {
                    image[next] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let members: Vec<usize> = target.elements().filter(|&s| image[s]).collect();

    let mut injective = Verdict::UnknownUpTo { radius };
    let window = rs.enumerate_window(radius);
    let mut seen: BTreeMap<usize, &ExponentVector> = BTreeMap::new();
    for v in &window {
        let iv = crate::kernel::image_of(target, assignment, v);
        match seen.get(&iv) {
            Some(prev) => {
                injective = Verdict::Fails(FailWitness::plain(vec![
                    ("u", (*prev).clone()),
                    ("v", v.clone()),
                ]));
                break;
            }
            None => {
                seen.insert(iv, v);
            }
        }
    }

    let cofinal = match target
        .elements()
        .find(|&z| !members.iter().any(|&s| target.leq(z, s)))
    {
        None => TargetVerdict::Holds,
        Some(z) => TargetVerdict::Fails {
            witness: vec![target.label(z).to_string()],
        },
    };

    let mut weakly_unitary = TargetVerdict::Holds;
    'wu: for &s1 in &members {
        for z in target.elements() {
            let s2 = target.add(s1, z);
            if image[s2] && !image[z] {
                weakly_unitary = TargetVerdict::Fails {
                    witness: vec![
                        target.label(s1).to_string(),
                        target.label(z).to_string(),
                        target.label(s2).to_string(),
                    ],
                };
                break 'wu;
            }
        }
    }

    UnitarityReport {
        injective_on_window: injective,
        cofinal,
        weakly_unitary,
        image_size: members.len(),
        radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::complete;
    use crate::presentation::parse_presentation;

    fn ev(coords: &[u64]) -> ExponentVector {
        ExponentVector(coords.to_vec())
    }

    fn rs_of(text: &str) -> crate::kernel::RewriteSystem {
        let (p, _) = parse_presentation(text).unwrap();
        complete(&p, 10_000).unwrap()
    }

    #[test]
    fn condition_fails_with_refutation_on_two_generator_example() {
        // n = 3 example: the 2-condition for a fails at the pair (a, b)
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        let an = Analyzer::new(&rs);
        let report = an.sr_condition_window(&ev(&[1, 0]), 2, 12, 24);
        match report.verdict {
            Verdict::Fails(fw) => {
                assert_eq!(fw.elements[0].1, ev(&[1, 0]));
                assert_eq!(fw.elements[1].1, ev(&[0, 1]));
                assert!(fw.certificate.is_some());
            }
            other => panic!("expected certified failure, got {other:?}"),
        }
        // and the 3-condition is clean
        let report3 = an.sr_condition_window(&ev(&[1, 0]), 3, 12, 24);
        assert!(report3.clean);
        assert!(matches!(report3.verdict, Verdict::UnknownUpTo { .. }));
    }

    #[test]
    fn absorbing_relation_level_two_is_unknown_but_clean() {
        // the 2-condition for a truly holds; the window can only report a
        // clean unknown since the monoid is infinite
        let rs = rs_of("gens a b; rel a + b = a;");
        let an = Analyzer::new(&rs);
        let report = an.sr_condition_window(&ev(&[1, 0]), 2, 6, 12);
        assert!(matches!(report.verdict, Verdict::UnknownUpTo { radius: 6 }));
        assert!(report.clean);
    }

    #[test]
    fn zero_at_level_one_is_clean() {
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        let an = Analyzer::new(&rs);
        let report = an.sr_condition_window(&ev(&[0, 0]), 1, 8, 16);
        assert!(report.clean);
    }

    #[test]
    fn brackets_pin_the_two_generator_example() {
        // sr(a) = 3, sr(b) = 2 at n = 3
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        let an = Analyzer::new(&rs);
        let bracket_a = an.sr_bracket(&ev(&[1, 0]), RadiusPolicy::default());
        assert_eq!(bracket_a.pinned(), Some(crate::finite::Rank::Finite(3)));
        let bracket_b = an.sr_bracket(&ev(&[0, 1]), RadiusPolicy::default());
        assert_eq!(bracket_b.pinned(), Some(crate::finite::Rank::Finite(2)));
    }

    #[test]
    fn absorbing_relation_has_rank_two_multiples() {
        // sr(ma) = 2 for every m; lower bound needs the refutation device
        let rs = rs_of("gens a b; rel a + b = a;");
        let an = Analyzer::new(&rs);
        for m in 1..=3u64 {
            let bracket = an.sr_bracket(&ev(&[m, 0]), RadiusPolicy::default());
            assert_eq!(
                bracket.pinned(),
                Some(crate::finite::Rank::Finite(2)),
                "multiple {m}"
            );
        }
        let bracket_b = an.sr_bracket(&ev(&[0, 1]), RadiusPolicy::default());
        assert_eq!(bracket_b.pinned(), Some(crate::finite::Rank::Finite(1)));
    }

    #[test]
    fn cancellation_witnesses_on_height_five() {
        // n = 5: the relation 5a = a + b gives witnesses at every level below
        let rs = rs_of("gens a b; rel 5 a = a + b; rel 8 a = 2 b;");
        let an = Analyzer::new(&rs);
        for n in 1..=4u32 {
            let cert = an
                .cancellation_witness(&ev(&[1, 0]), n, 16)
                .unwrap_or_else(|| panic!("cancellation witness at level {n}"));
            crate::rank::verify_certificate(&rs, &cert).expect("witness verifies");
        }
        assert!(an.cancellation_witness(&ev(&[1, 0]), 5, 16).is_none());
    }

    #[test]
    fn free_generator_is_cancellative() {
        let rs = rs_of("gens a;");
        let an = Analyzer::new(&rs);
        let bracket = an.sr_bracket(&ev(&[1]), RadiusPolicy::default());
        assert_eq!(bracket.certified_lo, 1);
        assert_eq!(bracket.empirical_hi.map(|h| h.n), Some(1));
        assert!(an.certify_sr_lower(&ev(&[1]), 1, 8).is_none());
    }

    #[test]
    fn torsion_presentation_is_certified_infinite() {
        let rs = rs_of("gens a; rel 3 a = a;");
        let an = Analyzer::new(&rs);
        let bracket = an.sr_bracket(&ev(&[1]), RadiusPolicy::default());
        assert_eq!(bracket.pinned(), Some(crate::finite::Rank::Infinite));
        assert!(bracket.empirical_hi.is_none());
    }

    #[test]
    fn nat_with_infinity_ranks() {
        // g + w = w, 2w = w: sr(g) = 1 empirically, sr(w) infinite
        let rs = rs_of("gens g w; rel g + w = w; rel 2 w = w;");
        let an = Analyzer::new(&rs);
        let g = an.sr_bracket(&ev(&[1, 0]), RadiusPolicy::default());
        assert_eq!(g.certified_lo, 1);
        assert_eq!(g.empirical_hi.map(|h| h.n), Some(1));
        let w = an.sr_bracket(&ev(&[0, 1]), RadiusPolicy::default());
        assert_eq!(w.pinned(), Some(crate::finite::Rank::Infinite));
        match &w.infinite {
            Some(Certificate::PurelyInfinite { k, non_unit, .. }) => {
                assert_eq!(*k, 1);
                assert!(matches!(non_unit, NonUnitEvidence::Hom { .. }));
            }
            other => panic!("expected purely infinite certificate, got {other:?}"),
        }
    }

    #[test]
    fn strong_rank_is_within_one_of_rank() {
        let rs = rs_of("gens a b; rel 3 a = a + b; rel 4 a = 2 b;");
        let an = Analyzer::new(&rs);
        let sr = an.sr_bracket(&ev(&[1, 0]), RadiusPolicy::default());
        let srp = an.sr_plus_bracket(&ev(&[1, 0]), RadiusPolicy::default());
        let n = match sr.pinned().unwrap() {
            crate::finite::Rank::Finite(n) => n,
            _ => unreachable!(),
        };
        let m = match srp.pinned().unwrap() {
            crate::finite::Rank::Finite(m) => m,
            _ => unreachable!(),
        };
        assert!(n <= m && m <= n + 1, "sr = {n}, sr+ = {m}");
    }

    #[test]
    fn element_predicates_on_absorbing_example() {
        let rs = rs_of("gens a b; rel a + b = a;");
        let an = Analyzer::new(&rs);
        let preds = an.element_predicates(&ev(&[1, 0]), 8);
        // a + b = a + 0 with b != 0
        assert!(preds.cancellative.fails());
        let zero = an.element_predicates(&ev(&[0, 0]), 8);
        assert!(zero.self_cancellative.holds());
    }

    #[test]
    fn refinement_mode_needs_declaration() {
        let rs = rs_of("gens a b; rel a + b = a;");
        let an = Analyzer::new(&rs);
        assert!(an
            .sr_condition_window_refinement(&ev(&[1, 0]), 2, 8, 16)
            .is_err());
        let an = Analyzer::new(&rs).declare_refinement();
        let report = an
            .sr_condition_window_refinement(&ev(&[1, 0]), 2, 8, 16)
            .unwrap();
        assert!(matches!(report.verdict, Verdict::UnknownUpTo { .. }));
    }

    #[test]
    fn window_report_on_universal_counterexample() {
        // 4a = 2a + b = 2b: separativity and refinement certified to fail
        let rs = rs_of("gens a b; rel 4 a = 2 a + b; rel 2 a + b = 2 b;");
        let an = Analyzer::new(&rs);
        let report = an.window_property_report(8, 16);
        assert!(report.separative.fails());
        assert!(report.refinement.fails());
        assert!(report.conical.holds());
        match &report.separative {
            Verdict::Fails(fw) => {
                // the witness pair is {2a, b}: 2(2a) = 2a + b = 2b, 2a != b
                let pair: Vec<&ExponentVector> = fw.elements.iter().map(|(_, v)| v).collect();
                assert!(pair.contains(&&ev(&[2, 0])) && pair.contains(&&ev(&[0, 1])));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn components_split_units_from_tail() {
        // na + b = na, 2b = 0 with n = 3: components {0, b} and the a-tail
        let rs = rs_of("gens a b; rel 3 a + b = 3 a; rel 2 b = 0;");
        let an = Analyzer::new(&rs);
        let report = an.window_property_report(5, 10);
        let zero_class = report
            .components
            .iter()
            .find(|c| c.contains(&ev(&[0, 0])))
            .unwrap();
        assert!(zero_class.contains(&ev(&[0, 1])));
        assert!(!zero_class.contains(&ev(&[1, 0])));
        // b + b = 0 with b nonzero: conicality certified to fail
        assert!(report.conical.fails());
    }
}
