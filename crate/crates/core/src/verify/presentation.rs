use crate::algebra::{Algebra, SemiPrimal};
use crate::duality::{c_s, p_prime, SetDObject, VarietyAlgebra};
use crate::error::{Error, Result};
use crate::lift::{apply_functor, SetFunctor, SizeCaps};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// Largest product `P'(obj)` whose generators are enumerated.
pub const PRESENTATION_ELEMENT_LIMIT: usize = 64;
/// Largest target subalgebra.
pub const PRESENTATION_TARGET_LIMIT: usize = 8;
/// Largest `C^S(obj)`: the classical side ranges over `2^(2^k)` functions.
pub const PRESENTATION_POINT_LIMIT: usize = 4;
const SOLUTION_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PresentationMode {
    /// Box with the `tau_d` equations.
    BoxTau,
    /// Diamond with the `kappa_d` equations.
    DiamondKappa,
}

impl fmt::Display for PresentationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresentationMode::BoxTau => "box-tau",
            PresentationMode::DiamondKappa => "diamond-kappa",
        })
    }
}

impl FromStr for PresentationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "box-tau" | "box" => Ok(PresentationMode::BoxTau),
            "diamond-kappa" | "diamond" => Ok(PresentationMode::DiamondKappa),
            _ => Err(format!("unknown mode {s:?} (expected box-tau or diamond-kappa)")),
        }
    }
}

/// All functions from a generator set into a target satisfying a fixed equation set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentedFunctionSpace {
    pub generators: Vec<String>,
    pub target: Vec<String>,
    /// One table per function, indexed like `generators`, values are indices into `target`.
    pub functions: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub mode: PresentationMode,
    pub functor: SetFunctor,
    /// Points of the object whose mark lies below the target.
    pub carrier: Vec<String>,
    pub lifted: PresentedFunctionSpace,
    pub classical: PresentedFunctionSpace,
    /// `|T(C^S(obj))|`.
    pub expected: usize,
}

#[derive(Debug, Clone, Copy)]
enum Constraint {
    Fixed { a: usize, value: usize },
    /// `f(c) = f(a) op f(b)` for the lattice operation of the mode.
    Binary { a: usize, b: usize, c: usize },
    /// `f(c) = thr_e(f(a))` for the threshold operation of the mode.
    Unary { e: usize, a: usize, c: usize },
}

struct Lifted<'a> {
    d: &'a SemiPrimal,
    mode: PresentationMode,
    targets: Vec<usize>,
    order: Vec<usize>,
    buckets: Vec<Vec<Constraint>>,
}

impl Lifted<'_> {
    fn op(&self, x: usize, y: usize) -> usize {
        match self.mode {
            PresentationMode::BoxTau => self.d.meet(x, y),
            PresentationMode::DiamondKappa => self.d.join(x, y),
        }
    }

    fn thr(&self, e: usize, x: usize) -> usize {
        match self.mode {
            PresentationMode::BoxTau => self.d.tau(e, x),
            PresentationMode::DiamondKappa => self.d.kappa(e, x),
        }
    }

    fn holds(&self, c: &Constraint, vals: &[usize]) -> bool {
        match *c {
            Constraint::Fixed { a, value } => vals[a] == value,
            Constraint::Binary { a, b, c } => vals[c] == self.op(vals[a], vals[b]),
            Constraint::Unary { e, a, c } => vals[c] == self.thr(e, vals[a]),
        }
    }

    fn search(&self, i: usize, vals: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
        if i == self.order.len() {
            if out.len() == SOLUTION_LIMIT {
                return Err(Error::SizeBound { what: "presented functions".into(), needed: SOLUTION_LIMIT as u128 + 1, limit: SOLUTION_LIMIT as u128 });
            }
            out.push(vals.clone());
            return Ok(());
        }
        let a = self.order[i];
        for &v in &self.targets {
            vals[a] = v;
            if self.buckets[i].iter().all(|c| self.holds(c, vals)) {
                self.search(i + 1, vals, out)?;
            }
        }
        Ok(())
    }
}

fn lifted_space(d: &SemiPrimal, f: SetFunctor, pa: &VarietyAlgebra, s: usize, mode: PresentationMode) -> Result<Vec<Vec<usize>>> {
    let n = pa.size();
    // crisp generators first: they pin down most of the rest
    let mut order: Vec<usize> = (0..n).filter(|&a| pa.is_crisp(a)).collect();
    order.extend((0..n).filter(|&a| !pa.is_crisp(a)));
    let mut pos = vec![0; n];
    for (i, &a) in order.iter().enumerate() {
        pos[a] = i;
    }
    let mut constraints = Vec::new();
    if f == SetFunctor::Powerset {
        constraints.push(match mode {
            PresentationMode::BoxTau => Constraint::Fixed { a: pa.top(), value: d.top() },
            PresentationMode::DiamondKappa => Constraint::Fixed { a: pa.bottom(), value: d.bottom() },
        });
    }
    for a in 0..n {
        for b in a + 1..n {
            let c = match mode {
                PresentationMode::BoxTau => pa.meet(a, b),
                PresentationMode::DiamondKappa => pa.join(a, b),
            };
            constraints.push(Constraint::Binary { a, b, c });
        }
    }
    let thresholds = match mode {
        PresentationMode::BoxTau => d.d_plus(),
        PresentationMode::DiamondKappa => d.d_minus(),
    };
    for &e in thresholds {
        for a in 0..n {
            let t: Vec<usize> = pa
                .tuple(a)
                .into_iter()
                .map(|v| match mode {
                    PresentationMode::BoxTau => d.tau(e, v),
                    PresentationMode::DiamondKappa => d.kappa(e, v),
                })
                .collect();
            let c = pa.index_of(&t).expect("crisp tuples lie in every product");
            constraints.push(Constraint::Unary { e, a, c });
        }
    }
    let mut buckets = vec![Vec::new(); n];
    for c in constraints {
        let last = match c {
            Constraint::Fixed { a, .. } => pos[a],
            Constraint::Binary { a, b, c } => pos[a].max(pos[b]).max(pos[c]),
            Constraint::Unary { a, c, .. } => pos[a].max(pos[c]),
        };
        buckets[last].push(c);
    }
    let search = Lifted { d, mode, targets: d.subalgebras().elements(s), order, buckets };
    let mut out = Vec::new();
    if n > 0 {
        search.search(0, &mut vec![0; n], &mut out)?;
    }
    out.sort();
    Ok(out)
}

/// Classical functions on `2^k` as bitmasks over the subsets of `k` points.
fn classical_space(f: SetFunctor, k: usize, mode: PresentationMode) -> Vec<u64> {
    let subsets = 1u64 << k;
    let full = subsets - 1;
    let bit = |g: u64, b: u64| g >> b & 1 == 1;
    (0..1u64 << subsets)
        .filter(|&g| match mode {
            PresentationMode::BoxTau => {
                (f != SetFunctor::Powerset || bit(g, full))
                    && (0..subsets).all(|b| (0..subsets).all(|c| bit(g, b & c) == (bit(g, b) && bit(g, c))))
            }
            PresentationMode::DiamondKappa => {
                (f != SetFunctor::Powerset || !bit(g, 0))
                    && (0..subsets).all(|b| (0..subsets).all(|c| bit(g, b | c) == (bit(g, b) || bit(g, c))))
            }
        })
        .collect()
}

/// Builds both function spaces, maps each across with the two translation formulas and
/// checks they are mutually inverse bijections of the expected size.
///
/// `g_f(b) = f(b0)` where `b0` is the crisp tuple of `b`, zero off the carrier. Box:
/// `f_g(a)` is the join of all `d` above the bottom with `g(tau_d(a) on the carrier) = 1`.
/// Diamond: the meet of all `d` below the top with `g(kappa_d(a) on the carrier) = 0`.
pub fn presentation_bijection_check(
    d: &SemiPrimal,
    f: SetFunctor,
    obj: &SetDObject,
    s: usize,
    mode: PresentationMode,
    caps: &SizeCaps,
) -> Result<PresentationReport> {
    if f == SetFunctor::Neighborhood {
        return Err(Error::check("presentation", "no presentation is known for the lifted neighborhood functor"));
    }
    let pa = p_prime(d, obj)?;
    if pa.size() > PRESENTATION_ELEMENT_LIMIT {
        return Err(Error::SizeBound { what: "generators".into(), needed: pa.size() as u128, limit: PRESENTATION_ELEMENT_LIMIT as u128 });
    }
    let targets = d.subalgebras().elements(s);
    if targets.len() > PRESENTATION_TARGET_LIMIT {
        return Err(Error::SizeBound { what: "target subalgebra".into(), needed: targets.len() as u128, limit: PRESENTATION_TARGET_LIMIT as u128 });
    }
    let carrier = c_s(d, s, obj);
    let k = carrier.len();
    if k > PRESENTATION_POINT_LIMIT {
        return Err(Error::SizeBound { what: "carrier points".into(), needed: k as u128, limit: PRESENTATION_POINT_LIMIT as u128 });
    }
    let fs = lifted_space(d, f, &pa, s, mode)?;
    let gs = classical_space(f, k, mode);
    let expected = apply_functor(f, k, caps)?.len();

    let zero_extend = |b: u64| -> usize {
        let mut t = vec![d.bottom(); obj.len()];
        for (i, &x) in carrier.iter().enumerate() {
            if b >> i & 1 == 1 {
                t[x] = d.top();
            }
        }
        pa.index_of(&t).expect("crisp tuples lie in every product")
    };
    let restrict_cut = |a: usize, e: usize| -> u64 {
        carrier.iter().enumerate().fold(0u64, |m, (i, &x)| {
            let v = pa.coord(a, x);
            let inside = match mode {
                PresentationMode::BoxTau => d.leq(e, v),
                PresentationMode::DiamondKappa => !d.leq(v, e),
            };
            m | (inside as u64) << i
        })
    };
    let g_of = |table: &[usize]| -> Result<u64> {
        let mut g = 0u64;
        for b in 0..1u64 << k {
            let v = table[zero_extend(b)];
            if !d.is_crisp(v) {
                return Err(Error::check("presentation", format!("f {table:?} sends a crisp generator to {}", d.label(v))));
            }
            g |= ((v == d.top()) as u64) << b;
        }
        Ok(g)
    };
    let f_of = |g: u64| -> Vec<usize> {
        (0..pa.size())
            .map(|a| match mode {
                PresentationMode::BoxTau => {
                    d.algebra().join_all(d.d_plus().iter().copied().filter(|&e| g >> restrict_cut(a, e) & 1 == 1))
                }
                PresentationMode::DiamondKappa => {
                    d.algebra().meet_all(d.d_minus().iter().copied().filter(|&e| g >> restrict_cut(a, e) & 1 == 0))
                }
            })
            .collect()
    };

    let f_set: HashSet<&Vec<usize>> = fs.iter().collect();
    let g_set: HashSet<u64> = gs.iter().copied().collect();
    for table in &fs {
        let g = g_of(table)?;
        if !g_set.contains(&g) {
            return Err(Error::check("presentation", format!("g_f of {table:?} violates the classical equations")));
        }
        if f_of(g) != *table {
            return Err(Error::check("presentation", format!("f_(g_f) differs from f = {table:?}")));
        }
    }
    for &g in &gs {
        let table = f_of(g);
        if !f_set.contains(&table) {
            return Err(Error::check("presentation", format!("f_g for g = {g:#b} is {table:?}, outside the lifted space")));
        }
        if g_of(&table)? != g {
            return Err(Error::check("presentation", format!("g_(f_g) differs from g = {g:#b}")));
        }
    }
    if fs.len() != expected || gs.len() != expected {
        return Err(Error::check(
            "presentation",
            format!("{} lifted and {} classical functions, expected {expected}", fs.len(), gs.len()),
        ));
    }

    let sym = match mode {
        PresentationMode::BoxTau => "box",
        PresentationMode::DiamondKappa => "diamond",
    };
    let target_pos = |v: usize| targets.iter().position(|&t| t == v).expect("values lie in the target");
    let lifted = PresentedFunctionSpace {
        generators: (0..pa.size()).map(|a| format!("{sym}' {}", pa.render(a))).collect(),
        target: targets.iter().map(|&t| d.label(t)).collect(),
        functions: fs.iter().map(|t| t.iter().map(|&v| target_pos(v)).collect()).collect(),
    };
    let classical = PresentedFunctionSpace {
        generators: (0..1u64 << k)
            .map(|b| {
                let names: Vec<&str> = (0..k).filter(|i| b >> i & 1 == 1).map(|i| obj.point(carrier[i])).collect();
                format!("{sym} {{{}}}", names.join(","))
            })
            .collect(),
        target: vec!["0".into(), "1".into()],
        functions: gs.iter().map(|&g| (0..1u64 << k).map(|b| (g >> b & 1) as usize).collect()).collect(),
    };
    Ok(PresentationReport {
        mode,
        functor: f,
        carrier: carrier.iter().map(|&x| obj.point(x).to_string()).collect(),
        lifted,
        classical,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_lukasiewicz;

    fn setup() -> (SemiPrimal, SetDObject) {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let full = d.subalgebras().full();
        let obj = SetDObject::with_marks(&d, vec![full]).unwrap();
        (d, obj)
    }

    #[test]
    fn singleton_box() {
        let (d, obj) = setup();
        let full = d.subalgebras().full();
        let r = presentation_bijection_check(&d, SetFunctor::Powerset, &obj, full, PresentationMode::BoxTau, &SizeCaps::default()).unwrap();
        // targets are [0, 1/2, 1] in carrier order, generators in element order 0, 1/2, 1
        assert_eq!(r.lifted.functions, vec![vec![0, 1, 2], vec![2, 2, 2]]);
        assert_eq!(r.classical.functions.len(), 2);
    }

    #[test]
    fn crisp_target_collapses() {
        let (d, obj) = setup();
        let two = d.subalgebras().least().unwrap();
        let r = presentation_bijection_check(&d, SetFunctor::Powerset, &obj, two, PresentationMode::BoxTau, &SizeCaps::default()).unwrap();
        assert!(r.carrier.is_empty());
        assert_eq!((r.lifted.functions.len(), r.classical.functions.len()), (1, 1));
    }

    #[test]
    fn singleton_diamond() {
        let (d, obj) = setup();
        let full = d.subalgebras().full();
        let r = presentation_bijection_check(&d, SetFunctor::Powerset, &obj, full, PresentationMode::DiamondKappa, &SizeCaps::default())
            .unwrap();
        assert_eq!(r.lifted.functions, vec![vec![0, 0, 0], vec![0, 1, 2]]);
    }

    #[test]
    fn filter_two_points() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let subs = d.subalgebras();
        let obj = SetDObject::with_marks(&d, vec![subs.full(), subs.least().unwrap()]).unwrap();
        for s in 0..subs.len() {
            for mode in [PresentationMode::BoxTau, PresentationMode::DiamondKappa] {
                presentation_bijection_check(&d, SetFunctor::Filter, &obj, s, mode, &SizeCaps::default()).unwrap();
            }
        }
    }

    #[test]
    fn neighborhood_is_refused() {
        let (d, obj) = setup();
        let full = d.subalgebras().full();
        assert!(presentation_bijection_check(&d, SetFunctor::Neighborhood, &obj, full, PresentationMode::BoxTau, &SizeCaps::default()).is_err());
    }
}
