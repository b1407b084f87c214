use crate::algebra::{is_homomorphism, Algebra};
use crate::error::{Error, Result};

/// Largest domain accepted by [`homomorphisms`].
pub const HOM_DOMAIN_LIMIT: usize = 4096;
const CANDIDATE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone)]
enum Step {
    Gen(usize),
    Op(usize, Vec<usize>),
}

/// A generating set of an algebra with a derivation for every element.
///
/// Each element in `order` is either a generator or an operation applied to earlier elements,
/// so a hom is fixed by the images of the generators.
#[derive(Debug, Clone)]
pub struct Generators {
    pub gens: Vec<usize>,
    order: Vec<usize>,
    steps: Vec<Step>,
}

impl Generators {
    /// Greedy: add the least unreached element until the closure is everything.
    pub fn find(alg: &dyn Algebra) -> Generators {
        let n = alg.size();
        let mut g = Generators { gens: Vec::new(), order: Vec::new(), steps: Vec::new() };
        let mut reached = vec![false; n];
        for op in (0..alg.op_count()).filter(|&op| alg.arity(op) == 0) {
            let c = alg.apply(op, &[]);
            if !reached[c] {
                reached[c] = true;
                g.order.push(c);
                g.steps.push(Step::Op(op, Vec::new()));
            }
        }
        let mut processed = 0;
        loop {
            processed = g.close(alg, &mut reached, processed);
            match reached.iter().position(|r| !r) {
                None => break,
                Some(x) => {
                    reached[x] = true;
                    g.steps.push(Step::Gen(g.gens.len()));
                    g.gens.push(x);
                    g.order.push(x);
                }
            }
        }
        g
    }

    // semi-naive closure: only tuples touching an element past `processed`
    fn close(&mut self, alg: &dyn Algebra, reached: &mut [bool], mut processed: usize) -> usize {
        while processed < self.order.len() {
            let old = processed;
            let end = self.order.len();
            for op in 0..alg.op_count() {
                let k = alg.arity(op);
                if k == 0 {
                    continue;
                }
                let mut args = vec![0usize; k];
                for p in 0..k {
                    // positions < p range over [0, old), position p over [old, end), rest over [0, end)
                    let lo = |j: usize| if j == p { old } else { 0 };
                    let hi = |j: usize| if j < p { old } else { end };
                    if (0..k).any(|j| lo(j) >= hi(j)) {
                        continue;
                    }
                    let mut idx: Vec<usize> = (0..k).map(lo).collect();
                    'tuples: loop {
                        for j in 0..k {
                            args[j] = self.order[idx[j]];
                        }
                        let r = alg.apply(op, &args);
                        if !reached[r] {
                            reached[r] = true;
                            self.order.push(r);
                            self.steps.push(Step::Op(op, args.clone()));
                        }
                        for j in (0..k).rev() {
                            idx[j] += 1;
                            if idx[j] < hi(j) {
                                continue 'tuples;
                            }
                            idx[j] = lo(j);
                        }
                        break;
                    }
                }
            }
            processed = end;
        }
        processed
    }

    /// The map determined by sending generator `i` to `images[i]`, evaluated in `dst`.
    pub fn extend(&self, dst: &dyn Algebra, images: &[usize], n: usize) -> Vec<usize> {
        let mut map = vec![0usize; n];
        let mut buf = Vec::new();
        for (&x, step) in self.order.iter().zip(&self.steps) {
            map[x] = match step {
                Step::Gen(i) => images[*i],
                Step::Op(op, args) => {
                    buf.clear();
                    buf.extend(args.iter().map(|&a| map[a]));
                    dst.apply(*op, &buf)
                }
            };
        }
        map
    }
}

pub(crate) fn check_signature(src: &dyn Algebra, dst: &dyn Algebra) -> Result<()> {
    if src.op_count() != dst.op_count() {
        return Err(Error::SignatureMismatch(format!(
            "{} operations versus {}",
            src.op_count(),
            dst.op_count()
        )));
    }
    for op in 0..src.op_count() {
        if src.op_name(op) != dst.op_name(op) || src.arity(op) != dst.arity(op) {
            return Err(Error::SignatureMismatch(format!(
                "operation {op} is {}/{} versus {}/{}",
                src.op_name(op),
                src.arity(op),
                dst.op_name(op),
                dst.arity(op)
            )));
        }
    }
    Ok(())
}

/// Every homomorphism `src -> dst`, as tables sorted lexicographically.
///
/// Tries each assignment of generator images and keeps the ones that verify exhaustively.
pub fn homomorphisms(src: &dyn Algebra, dst: &dyn Algebra) -> Result<Vec<Vec<usize>>> {
    check_signature(src, dst)?;
    let n = src.size();
    if n > HOM_DOMAIN_LIMIT {
        return Err(Error::SizeBound {
            what: "hom domain".into(),
            needed: n as u128,
            limit: HOM_DOMAIN_LIMIT as u128,
        });
    }
    let gens = Generators::find(src);
    let m = dst.size();
    let k = gens.gens.len();
    let candidates = (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if candidates > CANDIDATE_LIMIT {
        return Err(Error::SizeBound { what: "generator image assignments".into(), needed: candidates, limit: CANDIDATE_LIMIT });
    }
    let mut out = Vec::new();
    if m == 0 {
        return Ok(out);
    }
    let mut images = vec![0usize; k];
    loop {
        let map = gens.extend(dst, &images, n);
        if is_homomorphism(src, dst, &map) {
            out.push(map);
        }
        let mut j = k;
        loop {
            if j == 0 {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            j -= 1;
            images[j] += 1;
            if images[j] < m {
                break;
            }
            images[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;

    // every map checked one by one
    fn brute(src: &FiniteAlgebra, dst: &FiniteAlgebra) -> Vec<Vec<usize>> {
        let (n, m) = (src.size(), dst.size());
        let mut out = Vec::new();
        for code in 0..m.pow(n as u32) {
            let map: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
            if is_homomorphism(src, dst, &map) {
                out.push(map);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn agrees_with_brute_force() {
        for (a, b) in [
            (make_lukasiewicz(2), make_lukasiewicz(2)),
            (make_lukasiewicz(3), make_lukasiewicz(3)),
            (make_moisil(2), make_moisil(2)),
            (make_bounded_chain(4), make_bounded_chain(3)),
            (make_diamond(), make_diamond()),
        ] {
            assert_eq!(homomorphisms(&a, &b).unwrap(), brute(&a, &b), "{}", a.name());
        }
    }

    #[test]
    fn generators_cover() {
        let d = make_bounded_chain(5);
        let g = Generators::find(&d);
        // lattice ops on a chain generate nothing new, so the three middle elements are needed
        assert_eq!(g.gens, vec![1, 2, 3]);
    }

    #[test]
    fn signature_mismatch() {
        assert!(matches!(
            homomorphisms(&make_lukasiewicz(2), &make_boolean()),
            Err(Error::SignatureMismatch(_))
        ));
    }
}
