use crate::algebra::{Algebra, FiniteAlgebra};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauLemmaReport {
    pub candidates: usize,
    /// For each valid map, the element `e` it comes from.
    pub valid: Vec<usize>,
    /// Valid maps correspond one to one with the carrier.
    pub bijective: bool,
}

/// Enumerates every map from the non-bottom elements to `{0, 1}` that turns binary joins into
/// meets, and checks each one is `d -> [d <= e]` for `e` the join of the elements it sends to 1.
pub fn lemma_tau_check(alg: &FiniteAlgebra) -> Result<TauLemmaReport> {
    alg.require_lattice()?;
    let bot = alg.bottom();
    let plus: Vec<usize> = (0..alg.size()).filter(|&x| x != bot).collect();
    if plus.len() > 20 {
        return Err(Error::SizeBound { what: "maps on the non-bottom elements".into(), needed: 1 << plus.len(), limit: 1 << 20 });
    }
    let pos = |x: usize| plus.iter().position(|&y| y == x).expect("joins of non-bottom elements are non-bottom");
    let mut valid = Vec::new();
    for code in 0u64..1 << plus.len() {
        let bit = |x: usize| code >> pos(x) & 1 == 1;
        let respects = plus.iter().all(|&a| plus.iter().all(|&b| bit(alg.join(a, b)) == (bit(a) && bit(b))));
        if !respects {
            continue;
        }
        let e = alg.join_all(plus.iter().copied().filter(|&x| bit(x)));
        if let Some(&x) = plus.iter().find(|&&x| bit(x) != alg.leq(x, e)) {
            return Err(Error::check(
                "tau lemma",
                format!("map {code:#b} differs from the threshold map of {} at {}", alg.label(e), alg.label(x)),
            ));
        }
        valid.push(e);
    }
    let mut sorted = valid.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let bijective = sorted.len() == valid.len() && valid.len() == alg.size();
    Ok(TauLemmaReport { candidates: 1 << plus.len(), valid, bijective })
}
