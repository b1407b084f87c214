use super::eval::{modal_step, modalities_for};
use super::frame::{is_model_morphism, Frame, KripkeFrame, Model, NeighborhoodFrame};
use crate::algebra::{Algebra, SemiPrimal};
use crate::duality::SetDObject;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

/// An equivalence relation on points, blocks numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    block: Vec<usize>,
}

impl Partition {
    /// Groups points with equal keys.
    pub fn from_keys<K: Eq + Hash>(keys: impl IntoIterator<Item = K>) -> Partition {
        let mut ids = HashMap::new();
        let block = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition { block }
    }

    pub fn discrete(n: usize) -> Partition {
        Partition { block: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn block_count(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block[x] == self.block[y]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (x, &b) in self.block.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let mut seen = HashMap::new();
        self.block.iter().zip(&coarser.block).all(|(&a, &b)| *seen.entry(a).or_insert(b) == b)
    }
}

fn prop_partition(m: &Model) -> Partition {
    Partition::from_keys((0..m.len()).map(|x| (0..m.props().len()).map(|p| m.values(p)[x]).collect::<Vec<_>>()))
}

/// Bit mask of points in the blocks listed in `v`.
fn union_of(blocks: &[Vec<usize>], v: u64) -> u64 {
    (0..blocks.len()).filter(|&b| v >> b & 1 == 1).flat_map(|b| blocks[b].iter()).fold(0, |m, &x| m | 1 << x)
}

/// One refinement step: split by successor blocks, or by the block unions that are neighborhoods.
fn refine_step(m: &Model, p: &Partition) -> Partition {
    match m.frame() {
        Frame::Kripke(k) => Partition::from_keys((0..m.len()).map(|x| {
            let mut succ: Vec<usize> = k.successors(x).iter().map(|&y| p.block_of(y)).collect();
            succ.sort_unstable();
            succ.dedup();
            (p.block_of(x), succ)
        })),
        Frame::Neighborhood(nf) => {
            let blocks = p.blocks();
            let unions: Vec<u64> = (0..1u64 << blocks.len()).map(|v| union_of(&blocks, v)).collect();
            Partition::from_keys((0..m.len()).map(|x| {
                let sig: Vec<u64> = (0..unions.len() as u64).filter(|&v| nf.contains(x, unions[v as usize])).collect();
                (p.block_of(x), sig)
            }))
        }
    }
}

fn refine_to_fixpoint(m: &Model, mut p: Partition, step: impl Fn(&Model, &Partition) -> Result<Partition>) -> Result<Partition> {
    loop {
        let next = step(m, &p)?;
        if next.block_count() == p.block_count() {
            return Ok(p);
        }
        p = next;
    }
}

/// Coarsest partition of one model that respects propositions and the frame structure.
pub fn bisimilarity_on(m: &Model) -> Partition {
    refine_to_fixpoint(m, prop_partition(m), |m, p| Ok(refine_step(m, p))).expect("refinement is infallible")
}

/// Behavioral equivalence on the disjoint union; points of `m2` come after those of `m1`.
///
/// Marks play no part: equivalent points of different marks are glued in the quotient, which
/// carries the meet of their marks.
pub fn bisimilarity(d: &SemiPrimal, m1: &Model, m2: &Model) -> Result<Partition> {
    Ok(bisimilarity_on(&m1.disjoint_union(d, m2)?))
}

/// A quotient model and the projection onto it.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub model: Model,
    pub projection: Vec<usize>,
}

/// Collapses each block to one point marked with the meet of the member marks and checks the
/// projection is a morphism of models.
pub fn behavioral_quotient(d: &SemiPrimal, m: &Model, p: &Partition) -> Result<Quotient> {
    if p.len() != m.len() {
        return Err(Error::NotABisimulation(format!("partition has {} points, model has {}", p.len(), m.len())));
    }
    let obj = m.obj();
    let blocks = p.blocks();
    let rep = |b: usize| blocks[b][0];
    for p_idx in 0..m.props().len() {
        for (b, members) in blocks.iter().enumerate() {
            if members.iter().any(|&x| m.values(p_idx)[x] != m.values(p_idx)[rep(b)]) {
                return Err(Error::NotABisimulation(format!(
                    "{} differs inside the block of {}",
                    m.props()[p_idx],
                    obj.point(rep(b))
                )));
            }
        }
    }
    let subs = d.subalgebras();
    let points = blocks.iter().map(|bl| format!("[{}]", obj.point(bl[0]))).collect();
    let marking = blocks.iter().map(|bl| subs.meet_all(bl.iter().map(|&x| obj.mark(x)))).collect();
    let qobj = SetDObject::new(d, points, marking)?;
    let frame = match m.frame() {
        Frame::Kripke(k) => {
            let succ_blocks = |x: usize| {
                let mut s: Vec<usize> = k.successors(x).iter().map(|&y| p.block_of(y)).collect();
                s.sort_unstable();
                s.dedup();
                s
            };
            let mut relation = Vec::new();
            for (b, members) in blocks.iter().enumerate() {
                let s = succ_blocks(rep(b));
                if let Some(&x) = members.iter().find(|&&x| succ_blocks(x) != s) {
                    return Err(Error::NotABisimulation(format!(
                        "{} and {} reach different blocks",
                        obj.point(rep(b)),
                        obj.point(x)
                    )));
                }
                relation.extend(s.into_iter().map(|c| (b, c)));
            }
            Frame::Kripke(
                KripkeFrame::new(d, qobj, &relation)
                    .map_err(|e| Error::check("behavioral_quotient", format!("quotient frame rejected: {e}")))?,
            )
        }
        Frame::Neighborhood(nf) => {
            let sig = |x: usize| -> Vec<u64> {
                (0..1u64 << blocks.len()).filter(|&v| nf.contains(x, union_of(&blocks, v))).collect()
            };
            let mut nbhd = Vec::new();
            for (b, members) in blocks.iter().enumerate() {
                let s = sig(rep(b));
                if let Some(&x) = members.iter().find(|&&x| sig(x) != s) {
                    return Err(Error::NotABisimulation(format!(
                        "{} and {} have different neighborhoods up to the blocks",
                        obj.point(rep(b)),
                        obj.point(x)
                    )));
                }
                nbhd.push(s);
            }
            Frame::Neighborhood(
                NeighborhoodFrame::new(d, qobj, nbhd, nf.is_filter_frame())
                    .map_err(|e| Error::check("behavioral_quotient", format!("quotient frame rejected: {e}")))?,
            )
        }
    };
    let props = (0..m.props().len())
        .map(|pi| (m.props()[pi].clone(), (0..blocks.len()).map(|b| m.values(pi)[rep(b)]).collect()))
        .collect();
    let model = Model::new(d, frame, props)?;
    let projection: Vec<usize> = (0..m.len()).map(|x| p.block_of(x)).collect();
    if !is_model_morphism(d, &projection, m, &model) {
        return Err(Error::check("behavioral_quotient", "projection is not a morphism"));
    }
    Ok(Quotient { model, projection })
}

/// Morphisms from both models into one quotient that identify exactly the equivalent points.
#[derive(Debug, Clone)]
pub struct BisimCertificate {
    pub partition: Partition,
    pub quotient: Model,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Computes bisimilarity and certifies it with a pair of verified morphisms.
pub fn bisim_certificate(d: &SemiPrimal, m1: &Model, m2: &Model) -> Result<BisimCertificate> {
    let union = m1.disjoint_union(d, m2)?;
    let partition = bisimilarity_on(&union);
    let q = behavioral_quotient(d, &union, &partition)?;
    let n1 = m1.len();
    let left = q.projection[..n1].to_vec();
    let right = q.projection[n1..].to_vec();
    if !is_model_morphism(d, &left, m1, &q.model) || !is_model_morphism(d, &right, m2, &q.model) {
        return Err(Error::check("bisimilarity", "restricted projection is not a morphism"));
    }
    Ok(BisimCertificate { partition, quotient: q.model, left, right })
}

fn crisp_vector(d: &SemiPrimal, n: usize, members: u64) -> Vec<usize> {
    (0..n).map(|x| if members >> x & 1 == 1 { d.top() } else { d.bottom() }).collect()
}

/// Semantic theories: start from the propositions and split by the modal values of the
/// characteristic vectors of blocks (of unions of blocks on neighborhood frames).
pub fn theory_partition_on(d: &SemiPrimal, m: &Model) -> Result<Partition> {
    let n = m.len();
    let mods = modalities_for(m.frame());
    refine_to_fixpoint(m, prop_partition(m), |m, p| {
        let blocks = p.blocks();
        let sets: Vec<u64> = match m.frame() {
            Frame::Kripke(_) => (0..blocks.len()).map(|b| union_of(&blocks, 1 << b)).collect(),
            Frame::Neighborhood(_) => (0..1u64 << blocks.len()).map(|v| union_of(&blocks, v)).collect(),
        };
        let mut columns: Vec<Vec<usize>> = (0..n).map(|x| vec![p.block_of(x)]).collect();
        for &s in &sets {
            let chi = crisp_vector(d, n, s);
            for &md in mods {
                let vals = modal_step(d, m.frame(), md, &chi)?;
                for (c, v) in columns.iter_mut().zip(vals) {
                    c.push(v);
                }
            }
        }
        Ok(Partition::from_keys(columns))
    })
}

pub fn theory_partition(d: &SemiPrimal, m1: &Model, m2: &Model) -> Result<Partition> {
    theory_partition_on(d, &m1.disjoint_union(d, m2)?)
}

/// Limit on distinct value vectors kept by [`formula_theory_crosscheck`].
pub const FORMULA_VECTOR_LIMIT: usize = 60_000;

struct VectorClosure<'a> {
    d: &'a SemiPrimal,
    list: Vec<Vec<usize>>,
    seen: HashSet<Vec<usize>>,
    processed: usize,
}

impl VectorClosure<'_> {
    fn push(&mut self, v: Vec<usize>) -> Result<bool> {
        if self.seen.contains(&v) {
            return Ok(false);
        }
        if self.list.len() >= FORMULA_VECTOR_LIMIT {
            return Err(Error::SizeBound {
                what: "distinct formula value vectors".into(),
                needed: self.list.len() as u128 + 1,
                limit: FORMULA_VECTOR_LIMIT as u128,
            });
        }
        self.seen.insert(v.clone());
        self.list.push(v);
        Ok(true)
    }

    // every operation and threshold connective, on tuples that touch a vector not yet processed
    fn close(&mut self) -> Result<()> {
        let alg = self.d.algebra();
        let d = self.d;
        while self.processed < self.list.len() {
            let old = self.processed;
            let end = self.list.len();
            for i in old..end {
                let v = self.list[i].clone();
                for &e in d.d_plus() {
                    self.push(v.iter().map(|&a| d.tau(e, a)).collect())?;
                }
                for e in 0..d.size() {
                    self.push(v.iter().map(|&a| d.big_t(e, a)).collect())?;
                }
                for &e in d.d_minus() {
                    self.push(v.iter().map(|&a| d.kappa(e, a)).collect())?;
                }
            }
            for op in 0..alg.op_count() {
                let k = alg.arity(op);
                if k == 0 {
                    continue;
                }
                let mut args = vec![0usize; k];
                for p in 0..k {
                    let lo = |j: usize| if j == p { old } else { 0 };
                    let hi = |j: usize| if j < p { old } else { end };
                    if (0..k).any(|j| lo(j) >= hi(j)) {
                        continue;
                    }
                    let mut idx: Vec<usize> = (0..k).map(lo).collect();
                    'tuples: loop {
                        let len = self.list[idx[0]].len();
                        let v: Vec<usize> = (0..len)
                            .map(|x| {
                                for j in 0..k {
                                    args[j] = self.list[idx[j]][x];
                                }
                                alg.apply(op, &args)
                            })
                            .collect();
                        self.push(v)?;
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
            self.processed = end;
        }
        Ok(())
    }
}

/// Partitions points by the values of all formulas up to a modal depth, deduplicated by value
/// vector. Fails with `DepthTooSmall` unless one more modal layer adds no new vector within
/// the bound. The default depth is the number of points.
pub fn formula_theory_crosscheck(d: &SemiPrimal, m1: &Model, m2: &Model, depth: Option<usize>) -> Result<Partition> {
    let m = m1.disjoint_union(d, m2)?;
    let n = m.len();
    let depth = depth.unwrap_or(n);
    let alg = d.algebra();
    let mut vc = VectorClosure { d, list: Vec::new(), seen: HashSet::new(), processed: 0 };
    for p in 0..m.props().len() {
        vc.push(m.values(p).to_vec())?;
    }
    for op in (0..alg.op_count()).filter(|&op| alg.arity(op) == 0) {
        vc.push(vec![alg.apply(op, &[]); n])?;
    }
    for c in 0..d.size() {
        if (0..n).all(|x| d.subalgebras().contains(m.obj().mark(x), c)) {
            vc.push(vec![c; n])?;
        }
    }
    vc.close()?;
    let mods = modalities_for(m.frame());
    for _level in 0..=depth {
        let current = vc.list.len();
        let mut grew = false;
        for i in 0..current {
            for &md in mods {
                let v = modal_step(d, m.frame(), md, &vc.list[i].clone())?;
                grew |= vc.push(v)?;
            }
        }
        if !grew {
            let columns: Vec<Vec<usize>> = (0..n).map(|x| vc.list.iter().map(|v| v[x]).collect()).collect();
            return Ok(Partition::from_keys(columns));
        }
        vc.close()?;
    }
    Err(Error::DepthTooSmall { depth })
}

/// Sorted list of point pairs `(i, j)`, `i < j`, that one partition joins and the other splits.
pub fn partition_difference(a: &Partition, b: &Partition) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a.same(i, j) != b.same(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Blocks as point names, for reports.
pub fn render_partition(m: &Model, p: &Partition) -> Vec<Vec<String>> {
    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for x in 0..m.len() {
        groups.entry(p.block_of(x)).or_default().push(m.obj().point(x).to_string());
    }
    groups.into_values().collect()
}
