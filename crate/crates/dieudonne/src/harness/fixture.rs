//! Fixture files: inputs plus expected values, each tagged with where the
//! value comes from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Etale data of unramified `Z/3` covers of genus-3 curves.
    EtaleTable,
    /// Local-local EO types and twisted etale invariant factors, genus 4.
    TwistTable,
    /// `a_Y` of three covers over `F_5`.
    P5Table,
    /// Kernels of `V - 1` on `H^0(Omega_Y(T))` for six fibers `T`.
    FiberTable,
    /// Classification, parity and large-`a` statements for odd `p`.
    TheoremsOdd,
    /// Census of symmetric `D = delta D_1` in characteristic two.
    TheoremsP2,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::EtaleTable,
        Suite::TwistTable,
        Suite::P5Table,
        Suite::FiberTable,
        Suite::TheoremsOdd,
        Suite::TheoremsP2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::EtaleTable => "etale-table",
            Suite::TwistTable => "twist-table",
            Suite::P5Table => "p5-table",
            Suite::FiberTable => "fiber-table",
            Suite::TheoremsOdd => "theorems-odd",
            Suite::TheoremsP2 => "theorems-p2",
        }
    }

    /// Suites whose expected values come from brute-force oracles.
    pub fn is_derived(self) -> bool {
        matches!(self, Suite::TheoremsOdd | Suite::TheoremsP2)
    }

    fn builtin_text(self) -> &'static str {
        match self {
            Suite::EtaleTable => include_str!("../../fixtures/etale-table.json"),
            Suite::TwistTable => include_str!("../../fixtures/twist-table.json"),
            Suite::P5Table => include_str!("../../fixtures/p5-table.json"),
            Suite::FiberTable => include_str!("../../fixtures/fiber-table.json"),
            Suite::TheoremsOdd => include_str!("../../fixtures/theorems-odd.json"),
            Suite::TheoremsP2 => include_str!("../../fixtures/theorems-p2.json"),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Printed in the source tables or theorem statements.
    Published,
    /// Follows from the input by inspection.
    Trivial,
    /// Produced by a brute-force oracle and frozen by `make-oracles`.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub value: Value,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
}

impl Expected {
    pub fn published(value: Value) -> Expected {
        Expected {
            value,
            provenance: Provenance::Published,
            oracle: None,
        }
    }

    pub fn trivial(value: Value) -> Expected {
        Expected {
            value,
            provenance: Provenance::Trivial,
            oracle: None,
        }
    }

    pub fn derived(value: Value, oracle: &str) -> Expected {
        Expected {
            value,
            provenance: Provenance::Derived,
            oracle: Some(oracle.to_string()),
        }
    }
}

/// What to compute. Curves and covers are over `F_p`, given as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Input {
    /// `nu_X`, `nu_Y`, the two splitting answers, `d1`, `d2`, `mu`.
    EtaleRow {
        p: u64,
        curve: String,
        cover: String,
    },
    /// EO type of the local-local part and etale invariant factors per twist.
    LlType {
        p: u64,
        curve: String,
        cover: String,
        twists: Vec<i64>,
    },
    /// `a_Y`.
    ANumber {
        p: u64,
        curve: String,
        cover: String,
    },
    /// `dim ker(V - 1)` and `dim ker(V - 1)^3` for the fiber over `point`.
    FiberKernels {
        p: u64,
        curve: String,
        cover: String,
        point: (i64, i64),
    },
    /// Words of every rank-one superspecial-mod-delta module against the
    /// closed-form classification. `samples: None` means exhaustive.
    H1Classes {
        p: u64,
        r: u32,
        samples: Option<usize>,
    },
    /// Parity statements on the superspecial family of rank `h`.
    Parity {
        p: u64,
        r: u32,
        h: usize,
        samples: Option<usize>,
    },
    /// EO types and words for `a = ph` and `a = ph - 1`.
    LargeA {
        p: u64,
        r: u32,
        h: usize,
        samples: Option<usize>,
    },
    /// Every symmetric `D_1` over `F_(2^r)` with `D = delta D_1`.
    P2Census { r: u32, h: usize },
    /// One `D = delta D_1` in characteristic two.
    P2Module { r: u32, d1: Vec<Vec<u64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub citation: String,
    pub input: Input,
    pub expected: BTreeMap<String, Expected>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureSet {
    pub suite: Suite,
    pub description: String,
    pub fixtures: Vec<Fixture>,
}

impl FixtureSet {
    pub fn parse(text: &str) -> Result<FixtureSet> {
        let set: FixtureSet = serde_json::from_str(text)?;
        set.validate()?;
        Ok(set)
    }

    /// The copy compiled into the library.
    pub fn builtin(suite: Suite) -> Result<FixtureSet> {
        FixtureSet::parse(suite.builtin_text())
    }

    /// `<dir>/<suite>.json`.
    pub fn load(dir: &Path, suite: Suite) -> Result<FixtureSet> {
        let path = dir.join(format!("{}.json", suite.name()));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
        let set = FixtureSet::parse(&text)?;
        if set.suite != suite {
            return Err(Error::Fixture(format!(
                "{} holds suite {}",
                path.display(),
                set.suite
            )));
        }
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for f in &self.fixtures {
            if !ids.insert(f.id.as_str()) {
                return Err(Error::Fixture(format!("duplicate fixture id {}", f.id)));
            }
            if f.expected.is_empty() {
                return Err(Error::Fixture(format!("{} has no expected values", f.id)));
            }
            if f.citation.trim().is_empty() {
                return Err(Error::Fixture(format!("{} has no citation", f.id)));
            }
            for (k, e) in &f.expected {
                let named = e.oracle.as_deref().is_some_and(|o| !o.trim().is_empty());
                if e.provenance == Provenance::Derived && !named {
                    return Err(Error::Fixture(format!(
                        "{}: derived value {k} does not name its oracle",
                        f.id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let v = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sets_parse() {
        for s in Suite::ALL {
            let set = FixtureSet::builtin(s).unwrap();
            assert_eq!(set.suite, s);
            assert!(!set.fixtures.is_empty());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn derived_values_need_an_oracle() {
        let text = r#"{"suite": "theorems-odd", "description": "", "fixtures": [
            {"id": "a", "citation": "c", "input": {"kind": "h1_classes", "p": 3, "r": 1, "samples": null},
             "expected": {"mismatches": {"value": 0, "provenance": "derived"}}}]}"#;
        assert!(matches!(FixtureSet::parse(text), Err(Error::Fixture(_))));
    }
}
