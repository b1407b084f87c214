use super::Algebra;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Smallest subuniverse containing `seed` (bitmask over the carrier).
pub fn generated_subuniverse(alg: &dyn Algebra, seed: u64) -> u64 {
    let n = alg.size();
    assert!(n <= 64, "subuniverse masks need a carrier of at most 64 elements");
    let mut set = seed;
    loop {
        let members: Vec<usize> = (0..n).filter(|&x| set >> x & 1 == 1).collect();
        let mut next = set;
        for op in 0..alg.op_count() {
            let k = alg.arity(op);
            if k == 0 {
                next |= 1 << alg.apply(op, &[]);
                continue;
            }
            if members.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; k];
            let mut args = vec![0usize; k];
            'tuples: loop {
                for j in 0..k {
                    args[j] = members[idx[j]];
                }
                next |= 1 << alg.apply(op, &args);
                for j in (0..k).rev() {
                    idx[j] += 1;
                    if idx[j] < members.len() {
                        continue 'tuples;
                    }
                    idx[j] = 0;
                }
                break;
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// The nonempty subuniverses of an algebra, ordered by size and then by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraLattice {
    size: usize,
    subs: Vec<u64>,
    index: HashMap<u64, usize>,
    meet: Vec<Option<usize>>,
    join: Vec<usize>,
}

/// Enumerates all nonempty subuniverses.
pub fn enumerate_subuniverses(alg: &dyn Algebra) -> SubalgebraLattice {
    let n = alg.size();
    let mut found = BTreeSet::new();
    let mut queue = VecDeque::new();
    let least = generated_subuniverse(alg, 0);
    if least != 0 {
        queue.push_back(least);
    } else {
        for x in 0..n {
            queue.push_back(generated_subuniverse(alg, 1 << x));
        }
    }
    while let Some(s) = queue.pop_front() {
        if !found.insert(s) {
            continue;
        }
        for x in 0..n {
            if s >> x & 1 == 0 {
                let t = generated_subuniverse(alg, s | 1 << x);
                if !found.contains(&t) {
                    queue.push_back(t);
                }
            }
        }
    }
    let mut subs: Vec<u64> = found.into_iter().collect();
    subs.sort_by_key(|&m| (m.count_ones(), m));
    SubalgebraLattice::from_masks(alg, subs)
}

impl SubalgebraLattice {
    fn from_masks(alg: &dyn Algebra, subs: Vec<u64>) -> Self {
        let index: HashMap<u64, usize> = subs.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let k = subs.len();
        let mut meet = vec![None; k * k];
        let mut join = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                meet[i * k + j] = index.get(&(subs[i] & subs[j])).copied();
                let g = generated_subuniverse(alg, subs[i] | subs[j]);
                join[i * k + j] = index[&g];
            }
        }
        SubalgebraLattice { size: alg.size(), subs, index, meet, join }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn mask(&self, id: usize) -> u64 {
        self.subs[id]
    }

    pub fn masks(&self) -> &[u64] {
        &self.subs
    }

    pub fn id_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn elements(&self, id: usize) -> Vec<usize> {
        (0..self.size).filter(|&x| self.subs[id] >> x & 1 == 1).collect()
    }

    pub fn contains(&self, id: usize, x: usize) -> bool {
        self.subs[id] >> x & 1 == 1
    }

    pub fn card(&self, id: usize) -> usize {
        self.subs[id].count_ones() as usize
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.subs[a] & !self.subs[b] == 0
    }

    /// Intersection, if nonempty.
    pub fn try_meet(&self, a: usize, b: usize) -> Option<usize> {
        self.meet[a * self.subs.len() + b]
    }

    /// Intersection. Panics if it is empty, which cannot happen when constants exist.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.try_meet(a, b).expect("subuniverses intersect")
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.subs.len() + b]
    }

    pub fn full(&self) -> usize {
        self.subs.len() - 1
    }

    /// The least subuniverse, when intersections never vanish.
    pub fn least(&self) -> Option<usize> {
        if self.meet.iter().all(Option::is_some) {
            Some(0)
        } else {
            None
        }
    }

    pub fn meet_all(&self, ids: impl IntoIterator<Item = usize>) -> usize {
        ids.into_iter().fold(self.full(), |acc, s| self.meet(acc, s))
    }

    pub fn join_all(&self, ids: impl IntoIterator<Item = usize>) -> usize {
        let mut it = ids.into_iter();
        match it.next() {
            None => self.least().expect("least subuniverse exists"),
            Some(first) => it.fold(first, |acc, s| self.join(acc, s)),
        }
    }

    /// Curly-brace rendering using element labels.
    pub fn render(&self, id: usize, label: impl Fn(usize) -> String) -> String {
        let parts: Vec<String> = self.elements(id).into_iter().map(label).collect();
        format!("{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;

    fn brute_force(alg: &dyn Algebra) -> Vec<u64> {
        let n = alg.size();
        let mut out: Vec<u64> = (1u64..1 << n).filter(|&m| generated_subuniverse(alg, m) == m).collect();
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }

    #[test]
    fn luk2_subuniverses() {
        let l2 = make_lukasiewicz(2);
        let s = enumerate_subuniverses(&l2);
        assert_eq!(s.masks(), &[0b101, 0b111]);
    }

    #[test]
    fn luk3_subuniverses() {
        let s = enumerate_subuniverses(&make_lukasiewicz(3));
        assert_eq!(s.masks(), &[0b1001, 0b1111]);
    }

    #[test]
    fn luk6_divisors() {
        let s = enumerate_subuniverses(&make_lukasiewicz(6));
        let sizes: Vec<usize> = (0..s.len()).map(|i| s.card(i)).collect();
        assert_eq!(sizes, vec![2, 3, 4, 7]);
    }

    #[test]
    fn boolean_has_one() {
        let s = enumerate_subuniverses(&make_boolean());
        assert_eq!(s.masks(), &[0b11]);
    }

    #[test]
    fn moisil2_matches_closure_oracle() {
        let m2 = make_moisil(2);
        let s = enumerate_subuniverses(&m2);
        assert_eq!(s.masks(), brute_force(&m2).as_slice());
        assert_eq!(s.masks(), &[0b101, 0b111]);
    }

    #[test]
    fn matches_brute_force_on_builtins() {
        for alg in [make_moisil(4), make_lukasiewicz(5), make_diamond(), make_bounded_chain(4)] {
            assert_eq!(enumerate_subuniverses(&alg).masks(), brute_force(&alg).as_slice(), "{}", alg.name());
        }
    }

    #[test]
    fn meet_and_join() {
        let s = enumerate_subuniverses(&make_lukasiewicz(6));
        // {0,1/2,1} join {0,1/3,2/3,1} is everything
        assert_eq!(s.join(1, 2), s.full());
        assert_eq!(s.meet(1, 2), 0);
    }
}
