use super::{enumerate_subuniverses, Algebra, CloneSearch, FiniteAlgebra, SubalgebraLattice, UnaryClone, UnaryTerm};
use crate::error::{Error, Result};
use serde::Serialize;

/// Threshold truth tables `tau_d`, `T_d` and `kappa_d`, indexed by `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thresholds {
    tau: Vec<Vec<usize>>,
    big_t: Vec<Vec<usize>>,
    kappa: Vec<Vec<usize>>,
    d_plus: Vec<usize>,
    d_minus: Vec<usize>,
}

impl Thresholds {
    /// `tau_d(x) = 1` iff `x >= d`. Meant for `d` in `D+`.
    pub fn tau(&self, d: usize) -> &[usize] {
        &self.tau[d]
    }

    /// `T_d(x) = 1` iff `x = d`.
    pub fn big_t(&self, d: usize) -> &[usize] {
        &self.big_t[d]
    }

    /// `kappa_d(x) = 0` iff `x <= d`. Meant for `d` in `D-`.
    pub fn kappa(&self, d: usize) -> &[usize] {
        &self.kappa[d]
    }

    /// Elements other than the bottom.
    pub fn d_plus(&self) -> &[usize] {
        &self.d_plus
    }

    /// Elements other than the top.
    pub fn d_minus(&self) -> &[usize] {
        &self.d_minus
    }
}

/// Builds the threshold tables from the lattice order.
pub fn threshold_tables(alg: &FiniteAlgebra) -> Result<Thresholds> {
    alg.require_lattice()?;
    let n = alg.size();
    let (bot, top) = (alg.bottom(), alg.top());
    let tau = (0..n)
        .map(|d| (0..n).map(|x| if alg.leq(d, x) { top } else { bot }).collect())
        .collect();
    let big_t = (0..n)
        .map(|d| (0..n).map(|x| if x == d { top } else { bot }).collect())
        .collect();
    let kappa = (0..n)
        .map(|d| (0..n).map(|x| if alg.leq(x, d) { bot } else { top }).collect())
        .collect();
    Ok(Thresholds {
        tau,
        big_t,
        kappa,
        d_plus: (0..n).filter(|&d| d != bot).collect(),
        d_minus: (0..n).filter(|&d| d != top).collect(),
    })
}

/// Membership evidence for one `T_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TdCertificate {
    pub element: usize,
    pub table: Vec<usize>,
    /// Generation round in which the table first appeared, if it did.
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiprimalVerdict {
    pub semiprimal: bool,
    pub certificates: Vec<TdCertificate>,
    /// Elements whose `T_d` is absent from the unary clone.
    pub missing: Vec<usize>,
    /// Whether `T_0` and every `tau_d` are term functions.
    pub tau_characterization: bool,
    pub clone_size: usize,
    pub clone_complete: bool,
}

fn decide(alg: &FiniteAlgebra, thr: &Thresholds) -> Result<(SemiprimalVerdict, UnaryClone)> {
    let n = alg.size();
    let mut targets: Vec<Vec<usize>> = (0..n).map(|d| thr.big_t(d).to_vec()).collect();
    targets.extend(thr.d_plus().iter().map(|&d| thr.tau(d).to_vec()));
    let clone = UnaryClone::search(alg, &CloneSearch { targets })?;
    let certificates: Vec<TdCertificate> = (0..n)
        .map(|d| {
            let table = thr.big_t(d).to_vec();
            let depth = clone.find(&table).map(|i| clone.depth_of(i));
            TdCertificate { element: d, table, depth }
        })
        .collect();
    let missing: Vec<usize> = certificates.iter().filter(|c| c.depth.is_none()).map(|c| c.element).collect();
    let tau_characterization = clone.contains(thr.big_t(alg.bottom()))
        && thr.d_plus().iter().all(|&d| clone.contains(thr.tau(d)));
    let verdict = SemiprimalVerdict {
        semiprimal: n >= 2 && missing.is_empty(),
        certificates,
        missing,
        tau_characterization,
        clone_size: clone.len(),
        clone_complete: clone.is_complete(),
    };
    Ok((verdict, clone))
}

/// Decides semi-primality through term-definability of every `T_d`.
pub fn is_semiprimal(alg: &FiniteAlgebra) -> Result<SemiprimalVerdict> {
    let thr = threshold_tables(alg)?;
    Ok(decide(alg, &thr)?.0)
}

/// A verified semi-primal algebra of truth degrees with its derived structure.
#[derive(Debug, Clone)]
pub struct SemiPrimal {
    alg: FiniteAlgebra,
    subs: SubalgebraLattice,
    thr: Thresholds,
    t_terms: Vec<UnaryTerm>,
    verdict: SemiprimalVerdict,
}

impl SemiPrimal {
    pub fn new(alg: FiniteAlgebra) -> Result<Self> {
        let thr = threshold_tables(&alg)?;
        if alg.size() < 2 {
            return Err(Error::NotSemiPrimal(format!("{} has a single element", alg.name())));
        }
        let (verdict, clone) = decide(&alg, &thr)?;
        if !verdict.semiprimal {
            let labels: Vec<String> = verdict.missing.iter().map(|&d| alg.label(d)).collect();
            return Err(Error::NotSemiPrimal(format!(
                "{}: T_d is not a term function for d in {{{}}}",
                alg.name(),
                labels.join(", ")
            )));
        }
        let t_terms = (0..alg.size())
            .map(|d| clone.term(clone.find(thr.big_t(d)).expect("T_d present")))
            .collect();
        let subs = enumerate_subuniverses(&alg);
        Ok(SemiPrimal { alg, subs, thr, t_terms, verdict })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    pub fn subalgebras(&self) -> &SubalgebraLattice {
        &self.subs
    }

    pub fn thresholds(&self) -> &Thresholds {
        &self.thr
    }

    pub fn verdict(&self) -> &SemiprimalVerdict {
        &self.verdict
    }

    /// A term computing `T_d`, usable in any algebra of the same signature.
    pub fn t_term(&self, d: usize) -> &UnaryTerm {
        &self.t_terms[d]
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn bottom(&self) -> usize {
        self.alg.bottom()
    }

    pub fn top(&self) -> usize {
        self.alg.top()
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.alg.meet(x, y)
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.alg.join(x, y)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.alg.leq(x, y)
    }

    pub fn tau(&self, d: usize, x: usize) -> usize {
        self.thr.tau[d][x]
    }

    pub fn big_t(&self, d: usize, x: usize) -> usize {
        self.thr.big_t[d][x]
    }

    pub fn kappa(&self, d: usize, x: usize) -> usize {
        self.thr.kappa[d][x]
    }

    pub fn d_plus(&self) -> &[usize] {
        self.thr.d_plus()
    }

    pub fn d_minus(&self) -> &[usize] {
        self.thr.d_minus()
    }

    pub fn is_crisp(&self, x: usize) -> bool {
        x == self.bottom() || x == self.top()
    }

    pub fn label(&self, x: usize) -> String {
        self.alg.label(x)
    }

    pub fn name(&self) -> &str {
        self.alg.name()
    }

    /// The least subuniverse containing `x`.
    pub fn sub_of_element(&self, x: usize) -> usize {
        (0..self.subs.len()).find(|&s| self.subs.contains(s, x)).expect("full carrier contains x")
    }

    pub fn render_sub(&self, id: usize) -> String {
        self.subs.render(id, |x| self.alg.label(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;

    #[test]
    fn luk2_threshold_tables() {
        let t = threshold_tables(&make_lukasiewicz(2)).unwrap();
        assert_eq!(t.tau(2), &[0, 0, 2]);
        assert_eq!(t.big_t(1), &[0, 2, 0]);
        assert_eq!(t.kappa(0), &[0, 2, 2]);
        assert_eq!(t.d_plus(), &[1, 2]);
        assert_eq!(t.d_minus(), &[0, 1]);
    }

    #[test]
    fn no_lattice_is_an_error() {
        let a = FiniteAlgebra::new(
            "bare",
            2,
            None,
            vec![Operation { name: "f".into(), arity: 1, table: vec![1, 0] }],
            None,
        )
        .unwrap();
        assert_eq!(threshold_tables(&a).unwrap_err(), Error::NoLattice);
        assert_eq!(is_semiprimal(&a).unwrap_err(), Error::NoLattice);
    }

    #[test]
    fn known_verdicts() {
        assert!(is_semiprimal(&make_lukasiewicz(4)).unwrap().semiprimal);
        assert!(is_semiprimal(&make_moisil(3)).unwrap().semiprimal);
        let v = is_semiprimal(&make_bounded_chain(3)).unwrap();
        assert!(!v.semiprimal);
        assert!(v.missing.contains(&1));
        assert!(!v.tau_characterization);
        assert!(!is_semiprimal(&make_diamond()).unwrap().semiprimal);
    }

    #[test]
    fn t_terms_evaluate_correctly() {
        let d = SemiPrimal::new(make_lukasiewicz(3)).unwrap();
        for x in 0..4 {
            assert_eq!(d.t_term(x).table_in(d.algebra()), d.thresholds().big_t(x));
        }
    }

    #[test]
    fn wrapper_rejects_chain() {
        assert!(matches!(SemiPrimal::new(make_bounded_chain(3)), Err(Error::NotSemiPrimal(_))));
    }
}
