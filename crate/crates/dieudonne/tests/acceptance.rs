//! One pass/fail line per acceptance criterion; exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use dieudonne::harness::{
    round_trip_eo, round_trip_words, run_suite, FixtureSet, Input, RunReport, Suite,
};
use dieudonne::Field;

struct Line {
    n: usize,
    what: &'static str,
    ok: bool,
    detail: String,
    took: Duration,
}

fn suite(s: Suite) -> Result<RunReport, String> {
    let set = FixtureSet::builtin(s).map_err(|e| e.to_string())?;
    run_suite(s, &set, 0).map_err(|e| e.to_string())
}

fn failures(rep: &RunReport, pick: impl Fn(&str) -> bool) -> (usize, Vec<String>) {
    let picked: Vec<_> = rep.results.iter().filter(|r| pick(&r.id)).collect();
    let bad = picked
        .iter()
        .filter(|r| !r.pass)
        .map(|r| match &r.error {
            Some(e) => format!("{}: {e}", r.id),
            None => format!("{}: {}", r.id, r.mismatched.join(",")),
        })
        .collect();
    (picked.len(), bad)
}

fn table_line(
    n: usize,
    what: &'static str,
    s: Suite,
    budget: Duration,
) -> (Line, Option<RunReport>) {
    let t = Instant::now();
    match suite(s) {
        Ok(rep) => {
            let took = t.elapsed();
            let (total, bad) = failures(&rep, |_| true);
            let ok = bad.is_empty() && total > 0 && took < budget;
            let detail = if bad.is_empty() {
                format!("{total}/{total} rows")
            } else {
                format!("{} of {total} rows fail: {}", bad.len(), bad.join("; "))
            };
            (
                Line {
                    n,
                    what,
                    ok,
                    detail,
                    took,
                },
                Some(rep),
            )
        }
        Err(e) => (
            Line {
                n,
                what,
                ok: false,
                detail: e,
                took: t.elapsed(),
            },
            None,
        ),
    }
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut covers = Vec::new();

    let minutes = |m: u64| Duration::from_secs(60 * m);
    for (n, what, s, budget) in [
        (
            1,
            "etale table (10 covers over F_3)",
            Suite::EtaleTable,
            minutes(5),
        ),
        (
            2,
            "genus-4 EO types and twisted invariant factors",
            Suite::TwistTable,
            minutes(10),
        ),
        (
            3,
            "a_Y of the three covers over F_5",
            Suite::P5Table,
            minutes(10),
        ),
        (
            4,
            "kernels of V - 1 on the six fibers",
            Suite::FiberTable,
            minutes(10),
        ),
    ] {
        let (line, rep) = table_line(n, what, s, budget);
        lines.push(line);
        covers.extend(rep);
    }

    let t = Instant::now();
    let odd = suite(Suite::TheoremsOdd);
    let took_odd = t.elapsed();
    match &odd {
        Ok(rep) => {
            let (total, bad) = failures(rep, |id| id.starts_with("h1-"));
            let set = FixtureSet::builtin(Suite::TheoremsOdd).unwrap();
            let p3_exhaustive = set.fixtures.iter().any(|f| {
                matches!(
                    f.input,
                    Input::H1Classes {
                        p: 3,
                        samples: None,
                        ..
                    }
                )
            });
            let p5_sampled = set.fixtures.iter().any(
                |f| matches!(f.input, Input::H1Classes { p: 5, samples: Some(s), .. } if s >= 500),
            );
            let checked: u64 = rep
                .results
                .iter()
                .filter(|r| r.id.starts_with("h1-"))
                .filter_map(|r| r.computed.get("checked").and_then(Value::as_u64))
                .sum();
            lines.push(Line {
                n: 5,
                what: "rank-one classification equals the built module's words",
                ok: bad.is_empty() && total > 0 && p3_exhaustive && p5_sampled,
                detail: format!("{total} domains, {checked} modules; {}", bad.join("; ")),
                took: took_odd,
            });
            let (total, bad) = failures(rep, |id| {
                id.starts_with("parity-") || id.starts_with("large-a-")
            });
            lines.push(Line {
                n: 6,
                what: "parity and large-a statements",
                ok: bad.is_empty() && total > 0,
                detail: format!("{total} domains; {}", bad.join("; ")),
                took: took_odd,
            });
        }
        Err(e) => {
            for (n, what) in [
                (5, "rank-one classification"),
                (6, "parity and large-a statements"),
            ] {
                lines.push(Line {
                    n,
                    what,
                    ok: false,
                    detail: e.clone(),
                    took: took_odd,
                });
            }
        }
    }

    let t = Instant::now();
    let line7 = match suite(Suite::TheoremsP2) {
        Ok(rep) => {
            let (total, bad) = failures(&rep, |_| true);
            let example = rep.result("indecomposable-h2").is_some_and(|r| {
                r.pass
                    && r.computed.get("eo") == Some(&json!([0, 0, 0, 1]))
                    && r.computed.get("words") == Some(&json!("{f^2v^2:1, fv:2}"))
            });
            let f4_h2 = rep.result("census-h2-f4").is_some_and(|r| r.pass);
            Line {
                n: 7,
                what: "characteristic two census and the indecomposable example",
                ok: bad.is_empty() && total > 0 && example && f4_h2,
                detail: format!("{total} fixtures; {}", bad.join("; ")),
                took: t.elapsed(),
            }
        }
        Err(e) => Line {
            n: 7,
            what: "characteristic two census",
            ok: false,
            detail: e,
            took: t.elapsed(),
        },
    };
    lines.push(line7);

    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for rep in &covers {
        for r in &rep.results {
            if let Some(v) = r.computed.get("structural_violations") {
                // one row per twist in the genus-4 table
                checked += r
                    .computed
                    .get("invariant_factors")
                    .and_then(Value::as_object)
                    .map_or(1, |o| o.len());
                if v != &json!([]) {
                    bad.push(format!("{}/{}: {v}", rep.suite, r.id));
                }
            }
            if let Some(v) = r.computed.get("module_checks_pass") {
                checked += 1;
                if v != &json!(true) {
                    bad.push(format!("{}/{}: module checks", rep.suite, r.id));
                }
            }
            if r.error.is_some() {
                bad.push(format!("{}/{}: not computed", rep.suite, r.id));
            }
        }
    }
    lines.push(Line {
        n: 8,
        what: "structural identities on every computed cover",
        ok: bad.is_empty() && checked >= 31,
        detail: format!("{checked} covers and fiber modules; {}", bad.join("; ")),
        took: t.elapsed(),
    });

    let t = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for p in [2, 3, 5] {
        let k = Field::prime(p).unwrap();
        let eo = round_trip_eo(&k, 6);
        let words = round_trip_words(&k, 12);
        ok &= eo.ok() && words.ok();
        detail.push(format!(
            "p={p}: {} EO, {} word multisets",
            eo.checked, words.checked
        ));
        for f in eo.failures.iter().chain(&words.failures).take(3) {
            detail.push(f.clone());
        }
    }
    lines.push(Line {
        n: 9,
        what: "EO and word round trips",
        ok,
        detail: detail.join("; "),
        took: t.elapsed(),
    });

    lines.sort_by_key(|l| l.n);
    let mut all = true;
    for l in &lines {
        all &= l.ok;
        let tag = if l.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {tag}  {}  [{}] ({:.1}s)",
            l.n,
            l.what,
            l.detail.trim_end_matches("; "),
            l.took.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
