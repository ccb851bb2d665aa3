//! Evaluating fixtures and collecting a report.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::fixture::{Fixture, FixtureSet, Input, Suite};
use crate::admissible::{
    enumerate_p2, verify_h1_classification, verify_large_a, verify_parity_theorems,
    words_are_p2_shaped, AdmissibleCoords, ParityMode,
};
use crate::curve::{ny_kernel_dims, ASCover, CoverAnalysis, HyperellipticCurve};
use crate::dmodule::WordMultiset;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gring::RMatrix;
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureResult {
    pub id: String,
    pub citation: String,
    pub pass: bool,
    pub computed: BTreeMap<String, Value>,
    pub expected: BTreeMap<String, Value>,
    /// Expected keys whose computed value differs or is missing.
    pub mismatched: Vec<String>,
    pub error: Option<String>,
    #[serde(default)]
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<FixtureResult>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }

    pub fn result(&self, id: &str) -> Option<&FixtureResult> {
        self.results.iter().find(|r| r.id == id)
    }
}

fn mode(samples: Option<usize>, seed: u64) -> ParityMode {
    match samples {
        None => ParityMode::Exhaustive,
        Some(samples) => ParityMode::Sampled { samples, seed },
    }
}

fn cover(p: u64, curve: &str, g: &str) -> Result<ASCover> {
    let x = HyperellipticCurve::parse(p, curve)?;
    ASCover::parse(&x, g)
}

fn counts<K: ToString>(m: &BTreeMap<K, usize>) -> Value {
    let o: serde_json::Map<String, Value> =
        m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Value::Object(o)
}

fn violations(a: &CoverAnalysis) -> Value {
    json!(a.invariants.violations())
}

/// Computed values for one input, keyed like the fixture's expectations.
pub fn evaluate(input: &Input, seed: u64) -> Result<BTreeMap<String, Value>> {
    let mut out = BTreeMap::new();
    let mut put = |k: &str, v: Value| {
        out.insert(k.to_string(), v);
    };
    match input {
        Input::EtaleRow { p, curve, cover: g } => {
            let a = cover(*p, curve, g)?.analysis()?;
            let e = &a.etale;
            put("nu_X", json!(e.nu_X));
            put("nu_Y", json!(e.nu_Y));
            put("split_ker", json!(e.split_ker));
            put("split_coker", json!(e.split_coker));
            put("d1", json!(e.d1));
            put("d2", json!(e.d2));
            put("mu", json!(e.mu));
            put("structural_violations", violations(&a));
        }
        Input::LlType {
            p,
            curve,
            cover: g,
            twists,
        } => {
            let c = cover(*p, curve, g)?;
            let base = c.analysis()?;
            put("eo", json!(base.ll_eo));
            let mut factors = serde_json::Map::new();
            let mut bad: Vec<String> = base
                .invariants
                .violations()
                .iter()
                .map(|s| s.to_string())
                .collect();
            for &t in twists {
                let a = if t == 0 {
                    base.clone()
                } else {
                    c.twisted(t).analysis()?
                };
                factors.insert(t.to_string(), json!(a.etale_factors));
                bad.extend(
                    a.invariants
                        .violations()
                        .iter()
                        .map(|s| format!("twist {t}: {s}")),
                );
            }
            bad.sort();
            bad.dedup();
            put("invariant_factors", Value::Object(factors));
            put("structural_violations", json!(bad));
        }
        Input::ANumber { p, curve, cover: g } => {
            let a = cover(*p, curve, g)?.analysis()?;
            put("a_Y", json!(a.invariants.a_y));
            put("structural_violations", violations(&a));
        }
        Input::FiberKernels {
            p,
            curve,
            cover: g,
            point,
        } => {
            let pkg = cover(*p, curve, g)?.ny_module(*point)?;
            let (k1, k3) = ny_kernel_dims(&pkg);
            put("ker_v_minus_1", json!(k1));
            put("ker_v_minus_1_cubed", json!(k3));
            put("module_checks_pass", json!(pkg.module.verify().all_pass()));
        }
        Input::H1Classes { p, r, samples } => {
            let k = Field::new(*p, *r)?;
            let rep = verify_h1_classification(&k, mode(*samples, seed))?;
            put("checked", json!(rep.checked));
            put("a_counts", counts(&rep.a_counts));
            put("mismatches", json!(rep.violations.len()));
            put("first_mismatch", json!(rep.violations.first()));
        }
        Input::Parity { p, r, h, samples } => {
            let k = Field::new(*p, *r)?;
            let rep = verify_parity_theorems(&k, *h, mode(*samples, seed))?;
            put("checked", json!(rep.checked));
            put("a_counts", counts(&rep.a_counts));
            put("violations", json!(rep.violations.len()));
            put("first_violation", json!(rep.violations.first()));
        }
        Input::LargeA { p, r, h, samples } => {
            let k = Field::new(*p, *r)?;
            let rep = verify_large_a(&k, *h, mode(*samples, seed))?;
            put("classes", counts(&rep.classes));
            put("mismatches", json!(rep.mismatches.len()));
            put("first_mismatch", json!(rep.mismatches.first()));
        }
        Input::P2Census { r, h } => {
            let k = Field::new(2, *r)?;
            let rows = enumerate_p2(&k, *h)?;
            let mut eo_counts = BTreeMap::new();
            let mut shape = 0;
            let mut prefix = 0;
            for row in &rows {
                *eo_counts.entry(row.eo.clone()).or_insert(0) += 1;
                if !words_are_p2_shaped(&WordMultiset::parse(&row.words)?) {
                    shape += 1;
                }
                let eo: Vec<usize> = serde_json::from_str(&row.eo)?;
                if eo.len() != 2 * h || eo[..*h].iter().any(|&x| x != 0) {
                    prefix += 1;
                }
            }
            put("modules", json!(rows.len()));
            put("eo_counts", counts(&eo_counts));
            put("shape_violations", json!(shape));
            put("eo_prefix_violations", json!(prefix));
        }
        Input::P2Module { r, d1 } => {
            let k = Field::new(2, *r)?;
            let h = d1.len();
            if d1.iter().any(|row| row.len() != h) {
                return Err(Error::Dimension("D_1 must be square".into()));
            }
            let mut m1 = Matrix::zeros(&k, h, h);
            for (i, row) in d1.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    if x >= k.order() {
                        return Err(Error::Invalid(format!(
                            "{x} is not an element of F_{}",
                            k.order()
                        )));
                    }
                    m1.set(i, j, x);
                }
            }
            let d = RMatrix::from_expansion(&k, &[Matrix::zeros(&k, h, h), m1]);
            let c = AdmissibleCoords::superspecial(d)?;
            let m = c.build()?;
            put("a", json!(c.a_from_d()));
            put("eo", json!(m.eo_sequence()?));
            put("words", json!(m.kraft_words()?.to_string()));
        }
    }
    Ok(out)
}

fn run_one(f: &Fixture, seed: u64) -> FixtureResult {
    let t = Instant::now();
    let expected: BTreeMap<String, Value> = f
        .expected
        .iter()
        .map(|(k, e)| (k.clone(), e.value.clone()))
        .collect();
    let (computed, error) = match evaluate(&f.input, seed) {
        Ok(c) => (c, None),
        Err(e) => (BTreeMap::new(), Some(e.to_string())),
    };
    let mismatched: Vec<String> = expected
        .iter()
        .filter(|(k, v)| computed.get(*k) != Some(*v))
        .map(|(k, _)| k.clone())
        .collect();
    FixtureResult {
        id: f.id.clone(),
        citation: f.citation.clone(),
        pass: error.is_none() && mismatched.is_empty(),
        computed,
        expected,
        mismatched,
        error,
        millis: t.elapsed().as_millis() as u64,
    }
}

/// Evaluate every fixture of `set` (in parallel) and compare.
pub fn run_suite(suite: Suite, set: &FixtureSet, seed: u64) -> Result<RunReport> {
    if set.suite != suite {
        return Err(Error::Fixture(format!(
            "fixture set is for {}, not {suite}",
            set.suite
        )));
    }
    if set.fixtures.is_empty() {
        return Err(Error::Fixture(format!("no fixtures for {suite}")));
    }
    set.validate()?;
    let results: Vec<FixtureResult> = set.fixtures.par_iter().map(|f| run_one(f, seed)).collect();
    let passed = results.iter().filter(|r| r.pass).count();
    Ok(RunReport {
        suite,
        seed,
        passed,
        failed: results.len() - passed,
        results,
    })
}
