//! Fixtures, suite runner, report emitters and oracle generation.

pub mod emit;
pub mod fixture;
pub mod oracles;
pub mod run;

pub use emit::{emit, Format};
pub use fixture::{Expected, Fixture, FixtureSet, Input, Provenance, Suite};
pub use oracles::{make_oracles, round_trip_eo, round_trip_words, RoundTrip};
pub use run::{evaluate, run_suite, FixtureResult, RunReport};
