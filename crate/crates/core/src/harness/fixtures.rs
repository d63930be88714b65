//! The built-in fixture catalog. Every fixture ships its source in the standard
//! file formats, a recommended analysis radius (the smallest at which every
//! declared value pins), and the list of declared facts the suite checks.

use crate::finite::{validate, FiniteMonoid, Rank};
use crate::presentation::parse_cayley;
use serde::Serialize;

#[derive(Clone, Debug)]
pub enum FixtureBody {
    Presentation(&'static str),
    Cayley(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MonoidProperty {
    Conical,
    StablyFinite,
    Separative,
    StronglySeparative,
    Refinement,
}

/// One declared fact about a fixture. Elements are given as DSL expressions.
#[derive(Clone, Debug, Serialize)]
pub enum Claim {
    /// Certified lower bound and clean empirical window agree on this value
    /// (or infinity is certified).
    SrPinned {
        element: String,
        rank: Rank,
    },
    /// Empirical upper bound at the recommended radius, lower bound trivial.
    SrEmpirical {
        element: String,
        n: u32,
    },
    SrPlusPinned {
        element: String,
        rank: Rank,
    },
    SelfCancellative {
        element: String,
        holds: bool,
    },
    Hermite {
        element: String,
        holds: bool,
    },
    Cancellative {
        element: String,
        holds: bool,
    },
    Property {
        property: MonoidProperty,
        holds: bool,
    },
    /// Units visible in the window are exactly these elements.
    UnitsWindow {
        elements: Vec<String>,
    },
    /// The set of pinned ranks over these elements.
    SrSet {
        elements: Vec<String>,
        expected: Vec<Rank>,
    },
}

impl Claim {
    pub fn id(&self) -> String {
        match self {
            Claim::SrPinned { element, rank } => format!("sr({element})={rank}"),
            Claim::SrEmpirical { element, n } => format!("sr({element})={n}~empirical"),
            Claim::SrPlusPinned { element, rank } => format!("sr+({element})={rank}"),
            Claim::SelfCancellative { element, holds } => {
                format!("self_cancellative({element})={holds}")
            }
            Claim::Hermite { element, holds } => format!("hermite({element})={holds}"),
            Claim::Cancellative { element, holds } => format!("cancellative({element})={holds}"),
            Claim::Property { property, holds } => format!("{property:?}={holds}"),
            Claim::UnitsWindow { elements } => format!("units_window={}", elements.join(",")),
            Claim::SrSet { expected, .. } => {
                let vals: Vec<String> = expected.iter().map(|r| r.to_string()).collect();
                format!("sr_set={{{}}}", vals.join(","))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: &'static str,
    pub name: &'static str,
    pub body: FixtureBody,
    /// Smallest radius at which every declared value pins.
    pub radius: u32,
    pub declared_refinement: bool,
    pub facts: Vec<Claim>,
    /// Extra refutation targets shipped with the fixture.
    pub extra_refuters: Vec<(String, FiniteMonoid)>,
}

pub fn fixture_ids() -> Vec<&'static str> {
    vec!["F1", "F2_3", "F2_5", "F2_7", "F3", "F4_5", "F5", "F6", "F7"]
}

fn rk(n: u32) -> Rank {
    Rank::Finite(n)
}

pub fn fixture(id: &str) -> Option<Fixture> {
    let fx = match id {
        "F1" => Fixture {
            id: "F1",
            name: "naturals with absorbing top",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F1.cmon")),
            radius: 2,
            declared_refinement: false,
            facts: vec![
                Claim::SrEmpirical {
                    element: "g".into(),
                    n: 1,
                },
                Claim::SrPinned {
                    element: "w".into(),
                    rank: Rank::Infinite,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true,
                },
                Claim::Property {
                    property: MonoidProperty::Separative,
                    holds: true,
                },
            ],
            extra_refuters: Vec::new(),
        },
        "F2_3" => Fixture {
            id: "F2_3",
            name: "two generators, height three",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F2_3.cmon")),
            radius: 2,
            declared_refinement: false,
            facts: vec![
                Claim::SrPinned {
                    element: "a".into(),
                    rank: rk(3),
                },
                Claim::SrPinned {
                    element: "b".into(),
                    rank: rk(2),
                },
                Claim::SelfCancellative {
                    element: "2a".into(),
                    holds: false,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true,
                },
            ],
            extra_refuters: Vec::new(),
        },
        "F2_5" => Fixture {
            id: "F2_5",
            name: "two generators, height five",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F2_5.cmon")),
            radius: 4,
            declared_refinement: false,
            facts: vec![
                Claim::SrPinned {
                    element: "a".into(),
                    rank: rk(5),
                },
                Claim::SrPinned {
                    element: "2a".into(),
                    rank: rk(3),
                },
                Claim::SrPinned {
                    element: "4a".into(),
                    rank: rk(2),
                },
                Claim::SrPinned {
                    element: "b".into(),
                    rank: rk(2),
                },
                Claim::SelfCancellative {
                    element: "4a".into(),
                    holds: false,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true,
                },
                Claim::SrSet {
                    elements: vec![
                        "a".into(),
                        "2a".into(),
                        "3a".into(),
                        "4a".into(),
                        "5a".into(),
                        "b".into(),
                    ],
                    expected: vec![rk(2), rk(3), rk(5)],
                },
            ],
            extra_refuters: Vec::new(),
        },
        "F2_7" => Fixture {
            id: "F2_7",
            name: "two generators, height seven",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F2_7.cmon")),
            radius: 6,
            declared_refinement: false,
            facts: vec![
                Claim::SrPinned {
                    element: "a".into(),
                    rank: rk(7),
                },
                Claim::SrPinned {
                    element: "b".into(),
                    rank: rk(2),
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true,
                },
                Claim::SrSet {
                    elements: vec![
                        "a".into(),
                        "2a".into(),
                        "3a".into(),
                        "4a".into(),
                        "5a".into(),
                        "6a".into(),
                        "7a".into(),
                        "b".into(),
                    ],
                    expected: vec![rk(2), rk(3), rk(4), rk(7)],
                },
            ],
            extra_refuters: Vec::new(),
        },
        "F3" => Fixture {
            id: "F3",
            name: "one absorbing relation",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F3.cmon")),
            radius: 2,
            declared_refinement: true,
            facts: vec![
                Claim::SrPinned {
                    element: "a".into(),
                    rank: rk(2),
                },
                Claim::SrPinned {
                    element: "2a".into(),
                    rank: rk(2),
                },
                Claim::SrPinned {
                    element: "3a".into(),
                    rank: rk(2),
                },
                Claim::SrPinned {
                    element: "4a".into(),
                    rank: rk(2),
                },
                Claim::SrEmpirical {
                    element: "b".into(),
                    n: 1,
                },
                Claim::SrEmpirical {
                    element: "2b".into(),
                    n: 1,
                },
                Claim::SrEmpirical {
                    element: "3b".into(),
                    n: 1,
                },
                Claim::SrEmpirical {
                    element: "4b".into(),
                    n: 1,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true,
                },
                Claim::Property {
                    property: MonoidProperty::Separative,
                    holds: true,
                },
                Claim::Property {
                    property: MonoidProperty::StronglySeparative,
                    holds: true,
                },
                Claim::Property {
                    property: MonoidProperty::Refinement,
                    holds: true,
                },
            ],
            extra_refuters: Vec::new(),
        },
        "F4_5" => Fixture {
            id: "F4_5",
            name: "unit tail, height five",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F4_5.cmon")),
            radius: 5,
            declared_refinement: false,
            facts: vec![
                Claim::SrPinned {
                    element: "a".into(),
                    rank: rk(5),
                },
                Claim::SrEmpirical {
                    element: "5a".into(),
                    n: 1,
                },
                Claim::SrPinned {
                    element: "2a".into(),
                    rank: rk(3),
                },
                Claim::SrPinned {
                    element: "3a".into(),
                    rank: rk(2),
                },
                Claim::SrEmpirical {
                    element: "b".into(),
                    n: 1,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: false,
                },
                Claim::SrSet {
                    elements: vec![
                        "a".into(),
                        "2a".into(),
                        "3a".into(),
                        "4a".into(),
                        "5a".into(),
                        "b".into(),
                    ],
                    expected: vec![rk(1), rk(2), rk(3), rk(5)],
                },
            ],
            extra_refuters: vec![(
                "unit_tail_truncation_5".to_string(),
                validate(
                    &parse_cayley(include_str!("../../../../fixtures/F4_5_refuter.ctab"))
                        .expect("refuter table parses"),
                )
                .expect("refuter table is a monoid"),
            )],
        },
        "F5" => Fixture {
            id: "F5",
            name: "rank four with rank two double",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F5.cmon")),
            radius: 3,
            declared_refinement: false,
            facts: vec![
                Claim::SrPinned {
                    element: "a".into(),
                    rank: rk(4),
                },
                Claim::SrPinned {
                    element: "2a".into(),
                    rank: rk(2),
                },
                Claim::SrPlusPinned {
                    element: "a".into(),
                    rank: rk(5),
                },
                Claim::Property {
                    property: MonoidProperty::Separative,
                    holds: false,
                },
                Claim::Property {
                    property: MonoidProperty::Refinement,
                    holds: false,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true,
                },
            ],
            extra_refuters: Vec::new(),
        },
        "F6" => Fixture {
            id: "F6",
            name: "three-element torsion monoid",
            body: FixtureBody::Cayley(include_str!("../../../../fixtures/F6.ctab")),
            radius: 6,
            declared_refinement: true,
            facts: vec![
                Claim::SrPinned {
                    element: "a".into(),
                    rank: Rank::Infinite,
                },
                Claim::SelfCancellative {
                    element: "a".into(),
                    holds: true,
                },
                Claim::Hermite {
                    element: "a".into(),
                    holds: false,
                },
                Claim::Property {
                    property: MonoidProperty::Separative,
                    holds: true,
                },
                Claim::Property {
                    property: MonoidProperty::Refinement,
                    holds: true,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: true,
                },
                Claim::Property {
                    property: MonoidProperty::StablyFinite,
                    holds: false,
                },
            ],
            extra_refuters: Vec::new(),
        },
        "F7" => Fixture {
            id: "F7",
            name: "group tail",
            body: FixtureBody::Presentation(include_str!("../../../../fixtures/F7.cmon")),
            radius: 2,
            declared_refinement: false,
            facts: vec![
                Claim::SrEmpirical {
                    element: "g".into(),
                    n: 1,
                },
                Claim::Cancellative {
                    element: "g".into(),
                    holds: false,
                },
                Claim::Property {
                    property: MonoidProperty::Conical,
                    holds: false,
                },
                Claim::UnitsWindow {
                    elements: vec!["0".into(), "u".into()],
                },
            ],
            extra_refuters: Vec::new(),
        },
        _ => return None,
    };
    Some(fx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::complete;
    use crate::presentation::parse_presentation;

    #[test]
    fn all_fixture_bodies_load() {
        for id in fixture_ids() {
            let fx = fixture(id).unwrap();
            match fx.body {
                FixtureBody::Presentation(text) => {
                    let (p, _) = parse_presentation(text).unwrap();
                    complete(&p, 10_000).unwrap();
                }
                FixtureBody::Cayley(text) => {
                    validate(&parse_cayley(text).unwrap()).unwrap();
                }
            }
        }
        assert!(fixture("F99").is_none());
    }
}
