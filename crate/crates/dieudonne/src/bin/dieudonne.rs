use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dieudonne::admissible::{
    admissible_report, census_csv, enumerate_p2, verify_parity_theorems, AdmissibleCoords,
    ParityMode,
};
use dieudonne::curve::{de_rham_base, ny_kernel_dims, ASCover, HyperellipticCurve};
use dieudonne::dmodule::{
    module_from_eo, module_from_words, module_from_words_paired, DModule, DModuleJson, WordMultiset,
};
use dieudonne::gring::{RElement, RMatrix};
use dieudonne::harness::{emit, make_oracles, run_suite, FixtureSet, Format, RunReport, Suite};
use dieudonne::{Error, Field, FieldRef, Result};

#[derive(Parser)]
#[command(
    name = "dieudonne",
    version,
    about = "Dieudonne modules with a group action, and the covers they come from"
)]
struct Cli {
    /// Seed for every sampled computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format: json, csv or text.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Extend scalars by this degree before reading off EO types and words.
    #[arg(long, global = true, default_value_t = 1)]
    extend_scalars: u32,
    /// Include per-fixture timings in suite reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants of `y^2 = f(x)` over `F_p`.
    AnalyzeCurve {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: String,
    },
    /// Invariants of the cover `z^p - z = g` of `y^2 = curve`.
    AnalyzeCover {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        g: String,
        /// Replace `g` by `g + a`.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i64,
        /// Rational point `x0,y0`: report `V` on `H^0(Omega_Y(T))` for its fiber.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Read, classify and synthesize Dieudonne modules.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Modules built from superspecial-mod-delta coordinates.
    #[command(subcommand)]
    Admissible(AdmissibleCmd),
    /// Run a table suite and print its rows.
    Table {
        /// Suite name, or a path to a fixture file.
        #[arg(long)]
        fixtures: String,
    },
    /// Run one suite (or `all`) and fail on any mismatch.
    Suite {
        name: String,
        /// Directory holding `<suite>.json`; defaults to the built-in copies.
        #[arg(long)]
        fixtures_dir: Option<PathBuf>,
    },
    /// Regenerate the oracle-derived fixture files.
    MakeOracles {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Decomposition, a-number, p-rank, EO type and words of a module file.
    Classify { input: PathBuf },
    /// Ekedahl-Oort sequence of a module file.
    Eo { input: PathBuf },
    /// Kraft word multiset of a module file.
    Words { input: PathBuf },
    /// Standard module of a word multiset, e.g. `"f^2v^2:1, fv:2"`.
    FromWords {
        words: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Attach a compatible alternating pairing.
        #[arg(long)]
        paired: bool,
    },
    /// Standard module of an elementary sequence, e.g. `0,0,1`.
    FromEo {
        eo: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
}

#[derive(Subcommand)]
enum AdmissibleCmd {
    /// Build the module of `B = I` and a superspecial-mod-delta `D`.
    Build {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// `D` as JSON `[[[a_0, a_1, ...], ...], ...]` in powers of delta.
        #[arg(long, conflicts_with = "random")]
        d: Option<String>,
        /// Draw `D` from the superspecial family of rank `h`.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Census for `p = 2`, parity sweep for odd `p`.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        h: usize,
        /// Sample instead of enumerating (odd `p` only).
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn render(v: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(v)? + "\n"),
        Format::Text => {
            let mut s = String::new();
            if let Value::Object(o) = v {
                for (k, x) in o {
                    s += &format!("{k}: {}\n", dieudonne::harness::emit::cell(x));
                }
            } else {
                s += &format!("{}\n", dieudonne::harness::emit::cell(v));
            }
            Ok(s)
        }
        Format::Csv => {
            let o = v
                .as_object()
                .ok_or_else(|| Error::Invalid("csv needs a record".into()))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let err = |e: csv::Error| Error::Fixture(e.to_string());
            w.write_record(o.keys()).map_err(err)?;
            w.write_record(o.values().map(dieudonne::harness::emit::cell))
                .map_err(err)?;
            let bytes = w.into_inner().map_err(|e| Error::Fixture(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Fixture(e.to_string()))
        }
    }
}

fn extended(m: &DModule, s: u32) -> Result<DModule> {
    if s <= 1 {
        Ok(m.clone())
    } else {
        m.extend_scalars(s)
    }
}

fn module_summary(m: &DModule, s: u32) -> Result<Value> {
    let m = extended(m, s)?;
    let d = m.decompose()?;
    Ok(json!({
        "field": format!("F_{}", m.field.order()),
        "dimension": m.n,
        "a_number": m.a_number(),
        "p_rank": m.p_rank(),
        "bt1": m.is_bt1(),
        "etale_dim": d.etale.n,
        "multiplicative_dim": d.multiplicative.n,
        "local_local_dim": d.local_local.n,
        "eo": m.eo_sequence()?,
        "words": m.kraft_words()?.to_string(),
        "checks": m.verify(),
    }))
}

fn read_module(path: &Path) -> Result<DModule> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    let j: DModuleJson = serde_json::from_str(&text)?;
    DModule::from_json(&j)
}

fn parse_point(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("expected x0,y0, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_d(k: &FieldRef, s: &str) -> Result<RMatrix> {
    let rows: Vec<Vec<Vec<u64>>> = serde_json::from_str(s)?;
    let h = rows.len();
    let mut d = RMatrix::zeros(k, h, h);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != h {
            return Err(Error::Dimension("D must be square".into()));
        }
        for (j, c) in row.iter().enumerate() {
            if c.iter().any(|&x| x >= k.order()) {
                return Err(Error::Invalid(format!(
                    "entry ({i},{j}) has coefficients outside F_{}",
                    k.order()
                )));
            }
            d.e[i][j] = RElement::new(k, c.clone());
        }
    }
    Ok(d)
}

/// Module files are JSON whatever `--format` says.
fn print_module(m: &DModule) -> Result<bool> {
    print!(
        "{}",
        serde_json::to_string_pretty(&serde_json::to_value(m.to_json())?)? + "\n"
    );
    Ok(true)
}

fn print_report(rep: &RunReport, cli: &Cli) -> Result<bool> {
    print!("{}", emit(rep, cli.format, cli.timing)?);
    Ok(rep.ok())
}

fn run(cli: &Cli) -> Result<bool> {
    let s = cli.extend_scalars.max(1);
    let out = match &cli.cmd {
        Cmd::AnalyzeCurve { p, f } => {
            let x = HyperellipticCurve::parse(*p, f)?;
            let pkg = de_rham_base(&x)?;
            let mut v = serde_json::to_value(x.summary())?;
            v["points"] = json!(x.count_points(1)?);
            v["de_rham"] = module_summary(&pkg.module, s)?;
            v
        }
        Cmd::AnalyzeCover {
            p,
            curve,
            g,
            twist,
            point,
        } => {
            let x = HyperellipticCurve::parse(*p, curve)?;
            let c = ASCover::parse(&x, g)?.twisted(*twist);
            let unram = c.check_unramified()?;
            if !unram.unramified {
                let v =
                    json!({"cover": c.describe(), "unramified": false, "failure": unram.failure});
                print!("{}", render(&v, cli.format)?);
                return Ok(false);
            }
            let mut v = json!({"cover": c.describe(), "unramified": true, "g_X": x.genus, "g_Y": c.genus()});
            match point {
                Some(pt) => {
                    let pkg = c.ny_module(parse_point(pt)?)?;
                    let (k1, k3) = ny_kernel_dims(&pkg);
                    v["h0_dim"] = json!(pkg.h0);
                    v["ker_v_minus_1"] = json!(k1);
                    v["ker_v_minus_1_cubed"] = json!(k3);
                    v["checks"] = serde_json::to_value(pkg.module.verify())?;
                }
                None => {
                    let a = c.analysis()?;
                    v["etale"] = serde_json::to_value(&a.etale)?;
                    v["etale_factors"] = json!(a.etale_factors);
                    v["invariants"] = serde_json::to_value(&a.invariants)?;
                    v["violations"] = json!(a.invariants.violations());
                    if s > 1 {
                        let ll = c.de_rham_with_g()?.module.local_local()?;
                        let ll = ll.extend_scalars(s)?;
                        v["ll_eo"] = json!(ll.eo_sequence()?);
                        v["ll_words"] = json!(ll.kraft_words()?.to_string());
                    } else {
                        v["ll_eo"] = json!(a.ll_eo);
                        v["ll_words"] = json!(a.ll_words.to_string());
                    }
                }
            }
            v
        }
        Cmd::Module(mc) => match mc {
            ModuleCmd::Classify { input } => module_summary(&read_module(input)?, s)?,
            ModuleCmd::Eo { input } => {
                json!({"eo": extended(&read_module(input)?, s)?.eo_sequence()?})
            }
            ModuleCmd::Words { input } => {
                json!({"words": extended(&read_module(input)?, s)?.kraft_words()?.to_string()})
            }
            ModuleCmd::FromWords {
                words,
                p,
                r,
                paired,
            } => {
                let k = Field::new(*p, *r)?;
                let w = WordMultiset::parse(words)?;
                let m = if *paired {
                    module_from_words_paired(&w, &k)?
                } else {
                    module_from_words(&w, &k)
                };
                return print_module(&m);
            }
            ModuleCmd::FromEo { eo, p, r } => {
                let k = Field::new(*p, *r)?;
                let psi: Vec<usize> = eo
                    .trim_matches(|c| c == '[' || c == ']')
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad EO entry {x:?}")))
                    })
                    .collect::<Result<_>>()?;
                return print_module(&module_from_eo(&psi, &k)?);
            }
        },
        Cmd::Admissible(ac) => match ac {
            AdmissibleCmd::Build { p, r, d, random } => {
                let k = Field::new(*p, *r)?;
                let c = match (d, random) {
                    (Some(d), _) => AdmissibleCoords::superspecial(parse_d(&k, d)?)?,
                    (None, Some(h)) => {
                        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                        AdmissibleCoords::random_superspecial(&k, *h, &mut rng)?
                    }
                    (None, None) => return Err(Error::Invalid("give --d or --random".into())),
                };
                let m = c.build()?;
                let mut v = module_summary(&m, s)?;
                v["a_from_d"] = json!(c.a_from_d());
                v["admissible"] = serde_json::to_value(admissible_report(&m, c.h)?)?;
                v["module"] = serde_json::to_value(m.to_json())?;
                v
            }
            AdmissibleCmd::Census { p, r, h, samples } => {
                let k = Field::new(*p, *r)?;
                if *p == 2 {
                    let rows = enumerate_p2(&k, *h)?;
                    match cli.format {
                        Format::Csv => print!("{}", census_csv(&rows)?),
                        Format::Json => {
                            print!("{}", render(&json!({ "rows": rows }), Format::Json)?)
                        }
                        Format::Text => {
                            for r in &rows {
                                println!("{}  a={} eo={} words={}", r.d, r.a, r.eo, r.words);
                            }
                        }
                    }
                    return Ok(true);
                } else {
                    let mode = match samples {
                        Some(n) => ParityMode::Sampled {
                            samples: *n,
                            seed: cli.seed,
                        },
                        None => ParityMode::Exhaustive,
                    };
                    let rep = verify_parity_theorems(&k, *h, mode)?;
                    let ok = rep.ok();
                    print!("{}", render(&serde_json::to_value(&rep)?, cli.format)?);
                    return Ok(ok);
                }
            }
        },
        Cmd::Table { fixtures } => {
            let set = match fixtures.parse::<Suite>() {
                Ok(suite) => FixtureSet::builtin(suite)?,
                Err(_) => FixtureSet::parse(&std::fs::read_to_string(fixtures)?)?,
            };
            return print_report(&run_suite(set.suite, &set, cli.seed)?, cli);
        }
        Cmd::Suite { name, fixtures_dir } => {
            let suites: Vec<Suite> = if name == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![name.parse()?]
            };
            let mut ok = true;
            for suite in suites {
                let set = match fixtures_dir {
                    Some(dir) => FixtureSet::load(dir, suite)?,
                    None => FixtureSet::builtin(suite)?,
                };
                ok &= print_report(&run_suite(suite, &set, cli.seed)?, cli)?;
            }
            return Ok(ok);
        }
        Cmd::MakeOracles { out } => {
            std::fs::create_dir_all(out)?;
            for set in make_oracles(cli.seed)? {
                let path = out.join(format!("{}.json", set.suite));
                std::fs::write(&path, set.to_json()?)?;
                eprintln!("wrote {} ({} fixtures)", path.display(), set.fixtures.len());
            }
            return Ok(true);
        }
    };
    print!("{}", render(&out, cli.format)?);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
