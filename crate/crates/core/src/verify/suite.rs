use super::delta::{
    component_is_homomorphism, delta_classical, delta_generator_check, delta_prime, delta_top, naturality_check,
    one_step_injectivity_check, skeleton_agreement_check,
};
use super::presentation::{presentation_bijection_check, PresentationMode};
use super::tau::lemma_tau_check;
use super::transpose::transpose_expressivity_check;
use crate::algebra::{Algebra, FiniteAlgebra, SemiPrimal};
use crate::duality::{
    coend_reconstruct, epsilon_prime_check, eta_prime_check, lemma_isos_check, p_prime, SetDMorphism, SetDObject,
};
use crate::error::Result;
use crate::lift::{lift_via_coend, SetFunctor, SizeCaps};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    LemmaTau,
    PresentationBox,
    PresentationDiamond,
    LemmaIsos,
    VhatCoend,
    OneStep,
    Expressivity,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::LemmaTau,
        Theorem::LemmaIsos,
        Theorem::VhatCoend,
        Theorem::OneStep,
        Theorem::Expressivity,
        Theorem::PresentationBox,
        Theorem::PresentationDiamond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::LemmaTau => "lemma-tau",
            Theorem::PresentationBox => "presentation-box",
            Theorem::PresentationDiamond => "presentation-diamond",
            Theorem::LemmaIsos => "lemma-isos",
            Theorem::VhatCoend => "vhat-coend",
            Theorem::OneStep => "one-step",
            Theorem::Expressivity => "expressivity",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Theorem::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown theorem {s:?}"))
    }
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub instance: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub reproduce: String,
}

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub theorems: Vec<Theorem>,
    pub functors: Vec<SetFunctor>,
    /// Objects with up to this many points, over every marking.
    pub max_points: usize,
    /// The neighborhood functor is run on fewer points.
    pub max_neighborhood_points: usize,
    /// Seeds the random morphisms used for naturality.
    pub seed: u64,
    pub morphisms: usize,
    pub caps: SizeCaps,
    /// How the base algebra was given on the command line, for reproduction commands.
    pub source: String,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            theorems: Theorem::ALL.to_vec(),
            functors: SetFunctor::ALL.to_vec(),
            max_points: 2,
            max_neighborhood_points: 1,
            seed: 0,
            morphisms: 8,
            caps: SizeCaps::default(),
            source: "--builtin luk:2".into(),
        }
    }
}

impl CorpusConfig {
    fn reproduce(&self, t: Theorem, f: Option<SetFunctor>) -> String {
        let mut cmd = format!("mvcl verify --theorem {t} {} --max-points {} --seed {}", self.source, self.max_points, self.seed);
        if let Some(f) = f {
            cmd.push_str(&format!(" --functor {}", f.name()));
        }
        cmd
    }

    fn points_for(&self, f: SetFunctor) -> usize {
        if f == SetFunctor::Neighborhood {
            self.max_points.min(self.max_neighborhood_points)
        } else {
            self.max_points
        }
    }
}

/// Every object with at most `max_points` points, over every marking.
pub fn corpus_objects(d: &SemiPrimal, max_points: usize) -> Vec<SetDObject> {
    let subs = d.subalgebras().len();
    let mut out = Vec::new();
    for n in 0..=max_points {
        let total = subs.pow(n as u32);
        for code in 0..total {
            let marks = (0..n).map(|i| code / subs.pow((n - 1 - i) as u32) % subs).collect();
            out.push(SetDObject::with_marks(d, marks).expect("corpus markings are valid"));
        }
    }
    out
}

fn describe(obj: &SetDObject) -> String {
    obj.to_json().to_string()
}

struct Report<'a> {
    cfg: &'a CorpusConfig,
    out: Vec<Verdict>,
}

impl Report<'_> {
    fn record<T>(&mut self, t: Theorem, f: Option<SetFunctor>, instance: String, r: Result<T>, pass: impl FnOnce(&T) -> std::result::Result<(), String>) {
        let (pass, counterexample) = match r {
            Ok(v) => match pass(&v) {
                Ok(()) => (true, None),
                Err(e) => (false, Some(e)),
            },
            Err(e) => (false, Some(e.to_string())),
        };
        self.out.push(Verdict {
            check: t.name().into(),
            instance,
            pass,
            counterexample,
            skipped: false,
            detail: None,
            reproduce: self.cfg.reproduce(t, f),
        });
    }

    fn annotate(&mut self, detail: String) {
        if let Some(v) = self.out.last_mut() {
            v.detail = Some(detail);
        }
    }

    fn skip(&mut self, t: Theorem, f: Option<SetFunctor>, instance: String, why: &str) {
        self.out.push(Verdict {
            check: t.name().into(),
            instance,
            pass: true,
            counterexample: Some(why.into()),
            skipped: true,
            detail: None,
            reproduce: self.cfg.reproduce(t, f),
        });
    }
}

fn ok<T>(_: &T) -> std::result::Result<(), String> {
    Ok(())
}

/// Runs the selected checks over the corpus and reports one verdict per instance, in a fixed
/// order. A base that is not semi-primal gets a single failing gate verdict; only the
/// lattice-level `lemma-tau` still runs.
pub fn verify_all(alg: &FiniteAlgebra, cfg: &CorpusConfig) -> Vec<Verdict> {
    let mut rep = Report { cfg, out: Vec::new() };
    let mut theorems = cfg.theorems.clone();
    theorems.sort();
    theorems.dedup();
    if theorems.is_empty() {
        return rep.out;
    }
    if theorems.contains(&Theorem::LemmaTau) {
        let r = lemma_tau_check(alg);
        let valid = r.as_ref().map(|r| r.valid.len()).ok();
        rep.record(Theorem::LemmaTau, None, alg.name().into(), r, |r| {
            if r.bijective {
                Ok(())
            } else {
                Err(format!("{} valid maps for {} elements", r.valid.len(), alg.size()))
            }
        });
        if let Some(n) = valid {
            rep.annotate(format!("{n} valid maps"));
        }
    }
    let d = match SemiPrimal::new(alg.clone()) {
        Ok(d) => d,
        Err(e) => {
            rep.out.push(Verdict {
                check: "semi-primal".into(),
                instance: alg.name().into(),
                pass: false,
                counterexample: Some(e.to_string()),
                skipped: false,
                detail: None,
                reproduce: format!("mvcl check-semiprimal {}", cfg.source),
            });
            return rep.out;
        }
    };
    let objects = corpus_objects(&d, cfg.max_points);
    for t in theorems {
        match t {
            Theorem::LemmaTau => {}
            Theorem::LemmaIsos => {
                for obj in &objects {
                    let inst = describe(obj);
                    rep.record(t, None, format!("{inst} unit"), p_prime(&d, obj).and_then(|a| eta_prime_check(&d, &a)), ok);
                    rep.record(t, None, format!("{inst} counit"), epsilon_prime_check(&d, obj), ok);
                    rep.record(t, None, format!("{inst} coend"), coend_reconstruct(&d, obj), ok);
                    rep.record(t, None, format!("{inst} isomorphisms"), p_prime(&d, obj).and_then(|a| lemma_isos_check(&d, obj, &a)), ok);
                }
            }
            Theorem::VhatCoend => {
                for &f in &cfg.functors {
                    for obj in objects.iter().filter(|o| o.len() <= cfg.points_for(f)) {
                        rep.record(t, Some(f), format!("{f} {}", describe(obj)), lift_via_coend(&d, f, obj, &cfg.caps), ok);
                    }
                }
            }
            Theorem::OneStep => one_step(&mut rep, &d, &objects),
            Theorem::Expressivity => {
                for &f in &cfg.functors {
                    rep.record(t, Some(f), format!("{f} base"), transpose_expressivity_check(&d, f, d.algebra(), &cfg.caps), |v| {
                        if v.injective { Ok(()) } else { Err(format!("{:?}", v.collision)) }
                    });
                    for obj in objects.iter().filter(|o| o.len() <= cfg.points_for(f).min(2)) {
                        let r = p_prime(&d, obj).and_then(|a| transpose_expressivity_check(&d, f, &a, &cfg.caps));
                        rep.record(t, Some(f), format!("{f} free {}", describe(obj)), r, |v| {
                            if v.injective { Ok(()) } else { Err(format!("{:?}", v.collision)) }
                        });
                    }
                }
            }
            Theorem::PresentationBox | Theorem::PresentationDiamond => {
                let mode = if t == Theorem::PresentationBox { PresentationMode::BoxTau } else { PresentationMode::DiamondKappa };
                for &f in &cfg.functors {
                    if f == SetFunctor::Neighborhood {
                        rep.skip(t, Some(f), f.to_string(), "no presentation is known for the lifted neighborhood functor");
                        continue;
                    }
                    for obj in objects.iter().filter(|o| o.len() <= 2) {
                        for s in 0..d.subalgebras().len() {
                            let inst = format!("{f} {} S={}", describe(obj), d.render_sub(s));
                            let r = presentation_bijection_check(&d, f, obj, s, mode, &cfg.caps);
                            let size = r.as_ref().map(|r| r.expected).ok();
                            rep.record(t, Some(f), inst, r, ok);
                            if let Some(n) = size {
                                rep.annotate(format!("{n} functions on each side"));
                            }
                        }
                    }
                }
            }
        }
    }
    rep.out
}

fn one_step(rep: &mut Report<'_>, d: &SemiPrimal, objects: &[SetDObject]) {
    let cfg = rep.cfg;
    let t = Theorem::OneStep;
    let injective = |v: &super::delta::InjectivityVerdict| {
        if v.injective { Ok(()) } else { Err(format!("collision {:?} ({})", v.collision, v.method)) }
    };
    for &f in &cfg.functors {
        let max = cfg.points_for(f);
        for n in 0..=max {
            rep.record(t, Some(f), format!("{f} classical {n} points"), delta_classical(f, n, &cfg.caps).map(|c| one_step_injectivity_check(&c)), injective);
            rep.record(t, Some(f), format!("{f} top {n} points"), delta_top(d, f, n, &cfg.caps).map(|c| one_step_injectivity_check(&c)), injective);
        }
        for obj in objects.iter().filter(|o| o.len() <= max) {
            let inst = format!("{f} {}", describe(obj));
            let c = match delta_prime(d, f, obj, &cfg.caps) {
                Ok(c) => c,
                Err(e) => {
                    rep.record::<()>(t, Some(f), inst, Err(e), ok);
                    continue;
                }
            };
            rep.record(t, Some(f), format!("{inst} injective"), Ok(one_step_injectivity_check(&c)), injective);
            rep.record(t, Some(f), format!("{inst} generators"), delta_generator_check(d, &c), ok);
            rep.record(t, Some(f), format!("{inst} skeleton"), skeleton_agreement_check(d, &c, &cfg.caps), ok);
            if c.domain.size() <= 4096 {
                rep.record(t, Some(f), format!("{inst} homomorphism"), component_is_homomorphism(&c), |&h| {
                    if h { Ok(()) } else { Err("not a homomorphism".into()) }
                });
            }
        }
        // naturality along seeded random morphisms between corpus objects
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let pool: Vec<&SetDObject> = objects.iter().filter(|o| o.len() <= max && !o.is_empty()).collect();
        for _ in 0..cfg.morphisms {
            let (Some(&src), Some(&dst)) = (pool.choose(&mut rng), pool.choose(&mut rng)) else { break };
            let map: Vec<usize> = (0..src.len()).map(|_| rng.gen_range(0..dst.len())).collect();
            let Ok(h) = SetDMorphism::new(d, src.clone(), dst.clone(), map) else { continue };
            let inst = format!("{f} naturality {} -> {} via {:?}", describe(src), describe(dst), h.map);
            rep.record(t, Some(f), inst, naturality_check(d, f, &h, &cfg.caps), ok);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_bounded_chain, make_lukasiewicz};

    #[test]
    fn empty_corpus() {
        let cfg = CorpusConfig { theorems: vec![], ..CorpusConfig::default() };
        assert!(verify_all(&make_lukasiewicz(2), &cfg).is_empty());
    }

    #[test]
    fn default_run_passes() {
        let cfg = CorpusConfig { max_points: 1, ..CorpusConfig::default() };
        let report = verify_all(&make_lukasiewicz(2), &cfg);
        let failed: Vec<_> = report.iter().filter(|v| !v.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(report.iter().any(|v| v.skipped));
    }

    #[test]
    fn gate_on_non_semiprimal() {
        let report = verify_all(&make_bounded_chain(3), &CorpusConfig::default());
        assert!(report.iter().any(|v| v.check == "semi-primal" && !v.pass));
        assert!(report.iter().all(|v| v.check == "semi-primal" || v.check == "lemma-tau"));
    }

    #[test]
    fn corpus_sizes() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        // two subuniverses: 1 + 2 + 4 objects
        assert_eq!(corpus_objects(&d, 2).len(), 7);
    }
}
