use super::{enumerate_subuniverses, Algebra};
use serde::Serialize;

/// An isomorphism between two subalgebras of the same algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InternalIso {
    pub domain: u64,
    pub codomain: u64,
    /// `map[x]` for `x` in the domain, `None` elsewhere.
    pub map: Vec<Option<usize>>,
}

impl InternalIso {
    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(x, m)| m.is_none_or(|y| y == x))
    }
}

/// All isomorphisms between pairs of subuniverses, found by backtracking.
pub fn internal_isomorphisms(alg: &dyn Algebra) -> Vec<InternalIso> {
    let subs = enumerate_subuniverses(alg);
    let n = alg.size();
    let mut out = Vec::new();
    for &dom in subs.masks() {
        for &cod in subs.masks() {
            if dom.count_ones() != cod.count_ones() {
                continue;
            }
            let dom_elems: Vec<usize> = (0..n).filter(|&x| dom >> x & 1 == 1).collect();
            let cod_elems: Vec<usize> = (0..n).filter(|&x| cod >> x & 1 == 1).collect();
            let mut map = vec![None; n];
            let mut used = vec![false; n];
            search(alg, &dom_elems, &cod_elems, 0, &mut map, &mut used, &mut |m| {
                out.push(InternalIso { domain: dom, codomain: cod, map: m.to_vec() })
            });
        }
    }
    out
}

fn consistent(alg: &dyn Algebra, dom: &[usize], map: &[Option<usize>]) -> bool {
    // every instance with all arguments and the result mapped must commute
    for op in 0..alg.op_count() {
        let k = alg.arity(op);
        let mut idx = vec![0usize; k];
        let mut args = vec![0usize; k];
        let mut imgs = vec![0usize; k];
        'tuples: loop {
            let mut ok = true;
            for j in 0..k {
                args[j] = dom[idx[j]];
                match map[args[j]] {
                    Some(y) => imgs[j] = y,
                    None => ok = false,
                }
            }
            if ok {
                if let Some(r) = map[alg.apply(op, &args)] {
                    if r != alg.apply(op, &imgs) {
                        return false;
                    }
                }
            }
            for j in (0..k).rev() {
                idx[j] += 1;
                if idx[j] < dom.len() {
                    continue 'tuples;
                }
                idx[j] = 0;
            }
            break;
        }
    }
    true
}

fn search(
    alg: &dyn Algebra,
    dom: &[usize],
    cod: &[usize],
    pos: usize,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    emit: &mut dyn FnMut(&[Option<usize>]),
) {
    if pos == dom.len() {
        emit(map);
        return;
    }
    for &y in cod {
        if used[y] {
            continue;
        }
        map[dom[pos]] = Some(y);
        used[y] = true;
        if consistent(alg, dom, map) {
            search(alg, dom, cod, pos + 1, map, used, emit);
        }
        used[y] = false;
        map[dom[pos]] = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;

    #[test]
    fn luk2_only_identities() {
        let isos = internal_isomorphisms(&make_lukasiewicz(2));
        assert_eq!(isos.len(), 2);
        assert!(isos.iter().all(InternalIso::is_identity));
    }

    #[test]
    fn boolean_only_identity() {
        let isos = internal_isomorphisms(&make_boolean());
        assert_eq!(isos.len(), 1);
        assert!(isos[0].is_identity());
    }

    #[test]
    fn diamond_swaps_atoms() {
        let isos = internal_isomorphisms(&make_diamond());
        let swap = isos
            .iter()
            .find(|i| i.domain == 0b1111 && i.codomain == 0b1111 && !i.is_identity())
            .expect("nontrivial automorphism");
        assert_eq!(swap.map[1], Some(2));
        assert_eq!(swap.map[2], Some(1));
    }
}
