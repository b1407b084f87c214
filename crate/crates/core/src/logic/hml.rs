use super::bisim::{bisim_certificate, partition_difference, theory_partition, Partition};
use super::frame::{Frame, KripkeFrame, Model};
use crate::algebra::SemiPrimal;
use crate::duality::SetDObject;
use crate::error::Result;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of comparing theory equivalence with behavioral equivalence on one pair of models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HmlVerdict {
    pub agree: bool,
    pub theory: Partition,
    pub bisim: Partition,
    /// Names of two points on which the partitions disagree.
    pub counterexample: Option<(String, String)>,
}

/// Checks that equal theories coincide with behavioral equivalence on `m1 + m2`.
pub fn hennessy_milner_check(d: &SemiPrimal, m1: &Model, m2: &Model) -> Result<HmlVerdict> {
    let cert = bisim_certificate(d, m1, m2)?;
    let theory = theory_partition(d, m1, m2)?;
    let diff = partition_difference(&theory, &cert.partition);
    let union = m1.disjoint_union(d, m2)?;
    let counterexample = diff
        .first()
        .map(|&(i, j)| (union.obj().point(i).to_string(), union.obj().point(j).to_string()));
    Ok(HmlVerdict { agree: diff.is_empty(), theory, bisim: cert.partition, counterexample })
}

fn kripke_model(d: &SemiPrimal, marks: Vec<usize>, relation: &[(usize, usize)], props: &[(String, Vec<usize>)]) -> Result<Model> {
    let obj = SetDObject::with_marks(d, marks)?;
    let frame = KripkeFrame::new(d, obj, relation)?;
    Model::new(d, Frame::Kripke(frame), props.to_vec())
}

/// Every Kripke model with `1..=max_states` points: all markings, compatible relations and
/// valuations inside the marks.
pub fn small_kripke_models(d: &SemiPrimal, max_states: usize, props: &[&str]) -> Result<Vec<Model>> {
    let subs = d.subalgebras();
    let mut out = Vec::new();
    for n in 1..=max_states {
        let mut marks = vec![0usize; n];
        loop {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| subs.leq(marks[y], marks[x]))
                .collect();
            let choices: Vec<Vec<usize>> = marks.iter().map(|&s| subs.elements(s)).collect();
            for rel_code in 0u64..1 << pairs.len() {
                let relation: Vec<(usize, usize)> =
                    (0..pairs.len()).filter(|&i| rel_code >> i & 1 == 1).map(|i| pairs[i]).collect();
                // odometer over all (prop, point) value choices
                let slots = props.len() * n;
                let mut pick = vec![0usize; slots];
                loop {
                    let vals: Vec<(String, Vec<usize>)> = props
                        .iter()
                        .enumerate()
                        .map(|(pi, name)| (name.to_string(), (0..n).map(|x| choices[x][pick[pi * n + x]]).collect()))
                        .collect();
                    out.push(kripke_model(d, marks.clone(), &relation, &vals)?);
                    let mut j = slots;
                    let mut done = true;
                    while j > 0 {
                        j -= 1;
                        pick[j] += 1;
                        if pick[j] < choices[j % n].len() {
                            done = false;
                            break;
                        }
                        pick[j] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
            let mut j = n;
            let mut done = true;
            while j > 0 {
                j -= 1;
                marks[j] += 1;
                if marks[j] < subs.len() {
                    done = false;
                    break;
                }
                marks[j] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(out)
}

/// A random compatible Kripke model with `1..=max_states` points.
pub fn random_kripke_model(d: &SemiPrimal, rng: &mut impl Rng, max_states: usize, props: &[&str]) -> Result<Model> {
    let subs = d.subalgebras();
    let n = rng.gen_range(1..=max_states);
    let marks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..subs.len())).collect();
    let mut relation = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if subs.leq(marks[y], marks[x]) && rng.gen_bool(0.35) {
                relation.push((x, y));
            }
        }
    }
    let vals = props
        .iter()
        .map(|name| {
            let row = (0..n)
                .map(|x| {
                    let elems = subs.elements(marks[x]);
                    elems[rng.gen_range(0..elems.len())]
                })
                .collect();
            (name.to_string(), row)
        })
        .collect::<Vec<_>>();
    kripke_model(d, marks, &relation, &vals)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HmlReport {
    pub exhaustive_pairs: usize,
    pub random_pairs: usize,
    /// One line per disagreeing pair.
    pub failures: Vec<String>,
}

/// All unordered pairs of models with at most `exhaustive_states` points, then `random_pairs`
/// seeded random pairs with at most `random_states` points, over one proposition `p`.
pub fn hml_harness(
    d: &SemiPrimal,
    seed: u64,
    exhaustive_states: usize,
    random_pairs: usize,
    random_states: usize,
) -> Result<HmlReport> {
    let models = small_kripke_models(d, exhaustive_states, &["p"])?;
    let mut failures = Vec::new();
    let mut exhaustive_pairs = 0;
    for i in 0..models.len() {
        for j in i..models.len() {
            exhaustive_pairs += 1;
            let v = hennessy_milner_check(d, &models[i], &models[j])?;
            if !v.agree {
                failures.push(format!("exhaustive pair ({i}, {j}): {:?}", v.counterexample));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random_pairs {
        let a = random_kripke_model(d, &mut rng, random_states, &["p"])?;
        let b = random_kripke_model(d, &mut rng, random_states, &["p"])?;
        let v = hennessy_milner_check(d, &a, &b)?;
        if !v.agree {
            failures.push(format!("random pair {k} (seed {seed}): {:?}", v.counterexample));
        }
    }
    Ok(HmlReport { exhaustive_pairs, random_pairs, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_lukasiewicz;

    #[test]
    fn one_state_models() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let ms = small_kripke_models(&d, 1, &["p"]).unwrap();
        // mark {0,1}: 2 relations x 2 values; full mark: 2 relations x 3 values
        assert_eq!(ms.len(), 10);
    }

    #[test]
    fn deadlock_versus_loop() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let dead = kripke_model(&d, vec![1], &[], &[("p".into(), vec![0])]).unwrap();
        let lp = kripke_model(&d, vec![1], &[(0, 0)], &[("p".into(), vec![0])]).unwrap();
        let v = hennessy_milner_check(&d, &dead, &lp).unwrap();
        assert!(v.agree);
        assert!(!v.bisim.same(0, 1));
    }

    #[test]
    fn small_harness() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let r = hml_harness(&d, 7, 1, 20, 3).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }
}
