//! Fixture catalog and the executable claim suite: every quantitative claim
//! the workbench reproduces is pinned here, with certificates attached.

pub mod fixtures;
pub mod oracle;
pub mod suite;

pub use fixtures::{fixture, fixture_ids, Fixture, FixtureBody};
pub use suite::{claim_suite, multiples_profile, ClaimResult, MultiplesProfile, SuiteReport};
