use clap::{Args, Parser, Subcommand};
use mvcl_core::algebra::{enumerate_subuniverses, is_semiprimal, parse_builtin, Algebra, FiniteAlgebra, SemiPrimal};
use mvcl_core::duality::{
    coend_reconstruct, epsilon_prime_check, eta_prime_check, homomorphisms, p_prime, s_prime, SetDObject,
};
use mvcl_core::lift::{lift_via_coend, SetFunctor, SizeCaps};
use mvcl_core::logic::{
    bisim_certificate, evaluate, hml_harness, parse_formula, render_partition, theory_partition, Model,
};
use mvcl_core::verify::{verify_all, CorpusConfig, Theorem};
use mvcl_core::Error;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Largest product printed in full by `dual --object`.
const PRINT_LIMIT: usize = 4096;

#[derive(Parser)]
#[command(name = "mvcl", version, about = "Semi-primal algebras, their duality and many-valued coalgebraic modal logic")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Base algebra D for marked sets, models and checks: a builtin name or a JSON file.
    #[arg(long, global = true, default_value = "luk:2")]
    base: String,
    /// Lift the default size caps on functor applications.
    #[arg(long, global = true)]
    unsafe_size: bool,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct AlgebraArg {
    /// Algebra JSON file.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Builtin algebra: luk:N, moisil:N, bool, chain:N, diamond or godel:N.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide semi-primality.
    CheckSemiprimal {
        #[command(flatten)]
        alg: AlgebraArg,
    },
    /// List the subuniverses.
    Subalgebras {
        #[command(flatten)]
        alg: AlgebraArg,
    },
    /// Enumerate homomorphisms between two algebras (files or builtin names).
    Homs {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// The dual of an algebra over the base, or the product algebra of a marked set.
    Dual {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, conflicts_with_all = ["algebra", "builtin"])]
        object: Option<PathBuf>,
    },
    /// Check unit, counit and coend reconstruction on a marked set.
    Roundtrip {
        #[arg(long)]
        object: PathBuf,
    },
    /// Lift a set functor to a marked set and compare with the coend construction.
    Lift {
        #[arg(long)]
        functor: SetFunctor,
        #[arg(long)]
        object: PathBuf,
    },
    /// Evaluate a formula at every point of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Behavioral equivalence between two models, with certificate and theory comparison.
    Bisim {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        model2: PathBuf,
    },
    /// Compare theory equivalence and bisimilarity over small and random Kripke models.
    Hml {
        #[arg(long, default_value_t = 0)]
        corpus_seed: u64,
        /// All models up to this many states are paired.
        #[arg(long, default_value_t = 2)]
        states: usize,
        #[arg(long, default_value_t = 500)]
        pairs: usize,
        #[arg(long, default_value_t = 4)]
        random_states: usize,
    },
    /// Run the executable theorem checks over a corpus of marked sets.
    Verify {
        /// lemma-tau, presentation-box, presentation-diamond, lemma-isos, vhat-coend, one-step,
        /// expressivity or all.
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        functor: Option<SetFunctor>,
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value_t = 2)]
        max_points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidObject { path: path.display().to_string(), message: e.to_string() })
}

/// A builtin name, or a path to a JSON file.
fn load_algebra(spec: &str) -> Result<FiniteAlgebra, Error> {
    let path = Path::new(spec);
    if path.exists() {
        FiniteAlgebra::from_json_str(&read(path)?)
    } else {
        parse_builtin(spec)
    }
}

impl AlgebraArg {
    fn load(&self, fallback: &str) -> Result<(FiniteAlgebra, String), Error> {
        match (&self.algebra, &self.builtin) {
            (Some(p), _) => Ok((FiniteAlgebra::from_json_str(&read(p)?)?, format!("--algebra {}", p.display()))),
            (None, Some(b)) => Ok((parse_builtin(b)?, format!("--builtin {b}"))),
            (None, None) => Ok((load_algebra(fallback)?, format!("--base {fallback}"))),
        }
    }
}

fn base(common: &Common) -> Result<SemiPrimal, Error> {
    SemiPrimal::new(load_algebra(&common.base)?)
}

fn caps(common: &Common) -> SizeCaps {
    if common.unsafe_size {
        SizeCaps::relaxed()
    } else {
        SizeCaps::default()
    }
}

fn load_object(d: &SemiPrimal, path: &Path) -> Result<SetDObject, Error> {
    SetDObject::from_json_str(d, &read(path)?)
}

fn load_model(d: &SemiPrimal, path: &Path) -> Result<Model, Error> {
    Model::from_json_str(d, &read(path)?)
}

fn emit(json_mode: bool, value: Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).expect("values serialize"));
    } else {
        print!("{}", text());
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let c = &cli.common;
    match &cli.command {
        Command::CheckSemiprimal { alg } => {
            let (alg, _) = alg.load(&c.base)?;
            let v = is_semiprimal(&alg)?;
            emit(c.json, serde_json::to_value(&v)?, || {
                let mut s = format!("semi-primal: {}\n", v.semiprimal);
                for cert in &v.certificates {
                    match cert.depth {
                        Some(depth) => s.push_str(&format!("  T_{}: term of depth {depth}\n", alg.label(cert.element))),
                        None => s.push_str(&format!("  T_{}: not a term function\n", alg.label(cert.element))),
                    }
                }
                s.push_str(&format!("unary clone: {} functions\n", v.clone_size));
                s
            });
            Ok(if v.semiprimal { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Subalgebras { alg } => {
            let (alg, _) = alg.load(&c.base)?;
            let lat = enumerate_subuniverses(&alg);
            let rendered: Vec<String> = (0..lat.len()).map(|i| lat.render(i, |x| alg.label(x))).collect();
            emit(c.json, json!({ "subuniverses": rendered }), || {
                rendered.iter().map(|r| format!("{r}\n")).collect()
            });
            Ok(Outcome::Pass)
        }
        Command::Homs { from, to } => {
            let (src, dst) = (load_algebra(from)?, load_algebra(to)?);
            let homs = homomorphisms(&src, &dst)?;
            let rendered: Vec<Vec<String>> =
                homs.iter().map(|h| h.iter().map(|&v| dst.label(v)).collect()).collect();
            emit(c.json, json!({ "count": homs.len(), "homs": rendered }), || {
                let mut s = format!("{} homomorphisms\n", homs.len());
                for h in &rendered {
                    s.push_str(&format!("  [{}]\n", h.join(", ")));
                }
                s
            });
            Ok(Outcome::Pass)
        }
        Command::Dual { alg, object } => {
            let d = base(c)?;
            if let Some(path) = object {
                let obj = load_object(&d, path)?;
                let prod = p_prime(&d, &obj)?;
                let value = prod.to_json(PRINT_LIMIT)?;
                emit(c.json, value, || {
                    let mut s = format!("P' has {} elements\n", prod.size());
                    for a in 0..prod.size() {
                        s.push_str(&format!("  {}\n", prod.render(a)));
                    }
                    s
                });
            } else {
                let (alg, _) = alg.load(&c.base)?;
                let dual = s_prime(&d, &alg)?;
                let homs: Vec<Vec<String>> =
                    dual.homs.iter().map(|h| h.iter().map(|&v| d.label(v)).collect()).collect();
                emit(c.json, json!({ "object": dual.object.to_json(), "homs": homs }), || {
                    let mut s = format!("S' has {} points\n", dual.object.len());
                    for (i, h) in homs.iter().enumerate() {
                        s.push_str(&format!(
                            "  {} marked {}: [{}]\n",
                            dual.object.point(i),
                            d.render_sub(dual.object.mark(i)),
                            h.join(", ")
                        ));
                    }
                    s
                });
            }
            Ok(Outcome::Pass)
        }
        Command::Roundtrip { object } => {
            let d = base(c)?;
            let obj = load_object(&d, object)?;
            let prod = p_prime(&d, &obj)?;
            let unit = eta_prime_check(&d, &prod)?;
            let counit = epsilon_prime_check(&d, &obj)?;
            let (_, coend) = coend_reconstruct(&d, &obj)?;
            emit(
                c.json,
                json!({ "unit": unit.map, "counit": counit.map, "coend_classes": coend.classes.len(), "pass": true }),
                || {
                    format!(
                        "unit: isomorphism on {} elements\ncounit: isomorphism on {} points\ncoend: {} classes, object recovered\n",
                        unit.map.len(),
                        counit.map.len(),
                        coend.classes.len()
                    )
                },
            );
            Ok(Outcome::Pass)
        }
        Command::Lift { functor, object } => {
            let d = base(c)?;
            let obj = load_object(&d, object)?;
            let (lifted, _) = lift_via_coend(&d, *functor, &obj, &caps(c))?;
            emit(c.json, json!({ "functor": functor.name(), "object": lifted.object.to_json(), "coend_agrees": true }), || {
                let mut s = format!("{functor} lifts to {} points (coend agrees)\n", lifted.object.len());
                for i in 0..lifted.object.len() {
                    s.push_str(&format!("  {} : {}\n", lifted.object.point(i), d.render_sub(lifted.object.mark(i))));
                }
                s
            });
            Ok(Outcome::Pass)
        }
        Command::Eval { model, formula } => {
            let d = base(c)?;
            let m = load_model(&d, model)?;
            let f = parse_formula(formula, d.algebra())?;
            let vals = evaluate(&d, &m, &f)?;
            let pairs: serde_json::Map<String, Value> =
                (0..m.len()).map(|x| (m.obj().point(x).to_string(), json!(d.label(vals[x])))).collect();
            emit(c.json, json!({ "values": pairs }), || {
                (0..m.len()).map(|x| format!("{}: {}\n", m.obj().point(x), d.label(vals[x]))).collect()
            });
            Ok(Outcome::Pass)
        }
        Command::Bisim { model, model2 } => {
            let d = base(c)?;
            let (m1, m2) = (load_model(&d, model)?, load_model(&d, model2)?);
            let cert = bisim_certificate(&d, &m1, &m2)?;
            let theory = theory_partition(&d, &m1, &m2)?;
            let union = m1.disjoint_union(&d, &m2)?;
            let blocks = render_partition(&union, &cert.partition);
            let agree = theory == cert.partition;
            emit(
                c.json,
                json!({ "classes": blocks, "quotient": cert.quotient.to_json(&d), "theories_agree": agree }),
                || {
                    let mut s = format!("{} behavioral classes\n", blocks.len());
                    for b in &blocks {
                        s.push_str(&format!("  {{{}}}\n", b.join(", ")));
                    }
                    s.push_str(&format!("quotient: {} points, projections verified\n", cert.quotient.len()));
                    s.push_str(&format!("theory partition agrees: {agree}\n"));
                    s
                },
            );
            Ok(if agree { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Hml { corpus_seed, states, pairs, random_states } => {
            let d = base(c)?;
            let r = hml_harness(&d, *corpus_seed, *states, *pairs, *random_states)?;
            emit(c.json, serde_json::to_value(&r)?, || {
                let mut s = format!(
                    "{} exhaustive pairs, {} random pairs, {} disagreements\n",
                    r.exhaustive_pairs,
                    r.random_pairs,
                    r.failures.len()
                );
                for f in &r.failures {
                    s.push_str(&format!("  {f}\n"));
                }
                s
            });
            Ok(if r.failures.is_empty() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Verify { theorem, functor, alg, max_points, seed } => {
            let theorems = if theorem == "all" {
                Theorem::ALL.to_vec()
            } else {
                vec![theorem.parse::<Theorem>().map_err(|e| Error::InvalidObject { path: "--theorem".into(), message: e })?]
            };
            let (alg, source) = alg.load(&c.base)?;
            let cfg = CorpusConfig {
                theorems,
                functors: functor.map_or_else(|| SetFunctor::ALL.to_vec(), |f| vec![f]),
                max_points: *max_points,
                seed: *seed,
                caps: caps(c),
                source,
                ..CorpusConfig::default()
            };
            let report = verify_all(&alg, &cfg);
            let pass = report.iter().all(|v| v.pass);
            emit(c.json, json!({ "pass": pass, "verdicts": report }), || {
                let mut s = String::new();
                for v in &report {
                    let status = if v.skipped { "SKIP" } else if v.pass { "PASS" } else { "FAIL" };
                    s.push_str(&format!("{status} {} {}", v.check, v.instance));
                    if let Some(detail) = &v.detail {
                        s.push_str(&format!(" ({detail})"));
                    }
                    s.push('\n');
                    if let Some(ce) = &v.counterexample {
                        s.push_str(&format!("    {ce}\n"));
                    }
                    if !v.pass {
                        s.push_str(&format!("    reproduce: {}\n", v.reproduce));
                    }
                }
                let failed = report.iter().filter(|v| !v.pass).count();
                s.push_str(&format!("{} checks, {failed} failed\n", report.len()));
                s
            });
            Ok(if pass { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

/// Check failures exit with 1, everything else wrong with the input exits with 2.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CheckFailed { .. } | Error::NotIso(_) | Error::NotABisimulation(_) | Error::DepthTooSmall { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => {
            eprintln!("reproduce: {}", std::env::args().collect::<Vec<_>>().join(" "));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == 1 {
                eprintln!("reproduce: {}", std::env::args().collect::<Vec<_>>().join(" "));
            }
            ExitCode::from(code)
        }
    }
}
