use super::adjunction::v_s;
use super::homs::check_signature;
use super::variety::{p_prime, s_prime, VarietyAlgebra};
use crate::algebra::{Algebra, FiniteAlgebra, LatticeDesignation, Operation, SemiPrimal};
use crate::error::{Error, Result};

const POWERSET_LIMIT: usize = 20;
const SKELETON_LIMIT: usize = 4096;

/// The Boolean algebra of all subsets of `{0, .., n-1}`, held as bit masks.
///
/// Signature `meet, join, not, bot, top`, the same as the two-element Boolean algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowersetAlgebra {
    points: usize,
}

impl PowersetAlgebra {
    pub fn new(points: usize) -> Result<Self> {
        if points > POWERSET_LIMIT {
            return Err(Error::SizeBound {
                what: "powerset algebra".into(),
                needed: 1u128 << points.min(127),
                limit: 1 << POWERSET_LIMIT,
            });
        }
        Ok(PowersetAlgebra { points })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn full(&self) -> usize {
        (1 << self.points) - 1
    }

    pub fn to_finite(&self) -> Result<FiniteAlgebra> {
        let n = self.size();
        if n > SKELETON_LIMIT {
            return Err(Error::SizeBound { what: "powerset table".into(), needed: n as u128, limit: SKELETON_LIMIT as u128 });
        }
        let ops = (0..5)
            .map(|op| Operation {
                name: self.op_name(op).into(),
                arity: self.arity(op),
                table: crate::algebra::tabulate(n, self.arity(op), |a| self.apply(op, a)),
            })
            .collect();
        let lat = LatticeDesignation { meet: "meet".into(), join: "join".into(), bottom: 0, top: self.full() };
        FiniteAlgebra::new(format!("P({})", self.points), n, None, ops, Some(lat))
    }
}

impl Algebra for PowersetAlgebra {
    fn size(&self) -> usize {
        1 << self.points
    }

    fn op_count(&self) -> usize {
        5
    }

    fn op_name(&self, op: usize) -> &str {
        ["meet", "join", "not", "bot", "top"][op]
    }

    fn arity(&self, op: usize) -> usize {
        [2, 2, 1, 0, 0][op]
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        match op {
            0 => args[0] & args[1],
            1 => args[0] | args[1],
            2 => self.full() & !args[0],
            3 => 0,
            _ => self.full(),
        }
    }
}

/// Checks distributivity and the existence of complements.
pub fn is_boolean(alg: &FiniteAlgebra) -> Result<()> {
    alg.require_lattice().map_err(|_| Error::NotBoolean("no designated lattice".into()))?;
    let n = alg.size();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if alg.meet(x, alg.join(y, z)) != alg.join(alg.meet(x, y), alg.meet(x, z)) {
                    return Err(Error::NotBoolean(format!(
                        "distributivity fails at ({}, {}, {})",
                        alg.label(x),
                        alg.label(y),
                        alg.label(z)
                    )));
                }
            }
        }
        let has_complement =
            (0..n).any(|y| alg.meet(x, y) == alg.bottom() && alg.join(x, y) == alg.top());
        if !has_complement {
            return Err(Error::NotBoolean(format!("{} has no complement", alg.label(x))));
        }
    }
    Ok(())
}

fn atoms(alg: &FiniteAlgebra) -> Vec<usize> {
    let bot = alg.bottom();
    (0..alg.size())
        .filter(|&a| a != bot && (0..alg.size()).all(|b| b == bot || b == a || !alg.leq(b, a)))
        .collect()
}

/// The fixed points of `T_1` inside an algebra, with the Boolean structure they inherit.
#[derive(Debug, Clone)]
pub struct BooleanSkeleton {
    pub algebra: FiniteAlgebra,
    /// Skeleton element `i` is element `embedding[i]` of the ambient algebra.
    pub embedding: Vec<usize>,
}

impl BooleanSkeleton {
    pub fn position(&self, a: usize) -> Option<usize> {
        self.embedding.binary_search(&a).ok()
    }
}

/// `{a : T_1(a) = a}` with meet, join and negation `T_0`, verified Boolean.
pub fn boolean_skeleton(d: &SemiPrimal, alg: &dyn Algebra) -> Result<BooleanSkeleton> {
    check_signature(alg, d.algebra())?;
    let t1 = d.t_term(d.top()).table_in(alg);
    let t0 = d.t_term(d.bottom()).table_in(alg);
    let embedding: Vec<usize> = (0..alg.size()).filter(|&a| t1[a] == a).collect();
    let k = embedding.len();
    if k > SKELETON_LIMIT {
        return Err(Error::SizeBound { what: "Boolean skeleton".into(), needed: k as u128, limit: SKELETON_LIMIT as u128 });
    }
    let pos = |a: usize| embedding.binary_search(&a).ok();
    let (meet, join) = (d.algebra().meet_op(), d.algebra().join_op());
    let mut tables = [Vec::with_capacity(k * k), Vec::with_capacity(k * k), Vec::with_capacity(k)];
    for i in 0..k {
        let a = embedding[i];
        let neg = pos(t0[a]).ok_or_else(|| Error::NotBoolean("T_0 leaves the skeleton".into()))?;
        tables[2].push(neg);
        for &b in &embedding {
            for (t, op) in [(0, meet), (1, join)] {
                let r = pos(alg.apply(op, &[a, b]))
                    .ok_or_else(|| Error::NotBoolean("skeleton not closed under the lattice operations".into()))?;
                tables[t].push(r);
            }
        }
    }
    let bottom = (0..k)
        .find(|&i| (0..k).all(|j| tables[0][i * k + j] == i))
        .ok_or_else(|| Error::NotBoolean("skeleton has no least element".into()))?;
    let top = (0..k)
        .find(|&i| (0..k).all(|j| tables[1][i * k + j] == i))
        .ok_or_else(|| Error::NotBoolean("skeleton has no greatest element".into()))?;
    let [tm, tj, tn] = tables;
    let ops = vec![
        Operation { name: "meet".into(), arity: 2, table: tm },
        Operation { name: "join".into(), arity: 2, table: tj },
        Operation { name: "not".into(), arity: 1, table: tn },
        Operation { name: "bot".into(), arity: 0, table: vec![bottom] },
        Operation { name: "top".into(), arity: 0, table: vec![top] },
    ];
    let labels = embedding.iter().map(|a| format!("#{a}")).collect();
    let lat = LatticeDesignation { meet: "meet".into(), join: "join".into(), bottom, top };
    let algebra = FiniteAlgebra::new("skeleton", k, Some(labels), ops, Some(lat))
        .map_err(|e| Error::NotBoolean(e.to_string()))?;
    is_boolean(&algebra)?;
    for (i, &orig) in embedding.iter().enumerate().take(k) {
        let c = algebra.table(2)[i];
        if algebra.meet(i, c) != bottom || algebra.join(i, c) != top {
            return Err(Error::NotBoolean(format!("T_0 is not the complement of #{orig}")));
        }
    }
    Ok(BooleanSkeleton { algebra, embedding })
}

/// The Boolean power of subuniverse `s` by `b`, realized as all maps from the atoms of `b` into `s`.
pub fn boolean_power(d: &SemiPrimal, s: usize, b: &FiniteAlgebra) -> Result<VarietyAlgebra> {
    is_boolean(b)?;
    let names = atoms(b).into_iter().map(|a| format!("atom {}", b.label(a))).collect();
    p_prime(d, &v_s(d, s, names))
}

/// The power-set algebra over the points of `S'(A)` whose mark lies below `s`.
pub fn k_s(d: &SemiPrimal, s: usize, alg: &dyn Algebra) -> Result<PowersetAlgebra> {
    let dual = s_prime(d, alg)?;
    let subs = d.subalgebras();
    let count = dual.object.marking().iter().filter(|&&m| subs.leq(m, s)).count();
    PowersetAlgebra::new(count)
}

/// All partitions of `n` points indexed by `s_elems`, as lists of blocks (bit masks).
///
/// Every list of masks is generated and the partitions are filtered out.
pub fn partition_form_elements(s_elems: &[usize], n: usize) -> Result<Vec<Vec<u64>>> {
    let m = s_elems.len();
    let bits = n * m;
    if bits > 24 {
        return Err(Error::SizeBound { what: "partition candidates".into(), needed: 1u128 << bits, limit: 1 << 24 });
    }
    let full = (1u64 << n) - 1;
    let mut out = Vec::new();
    for code in 0u64..1 << bits {
        let blocks: Vec<u64> = (0..m).map(|i| code >> (i * n) & full).collect();
        let disjoint = (0..m).all(|i| (i + 1..m).all(|j| blocks[i] & blocks[j] == 0));
        let cover = blocks.iter().fold(0, |a, b| a | b) == full;
        if disjoint && cover {
            out.push(blocks);
        }
    }
    Ok(out)
}

/// An operation of `D` acting on partitions: block `s` of the result is the union over all
/// argument tuples `(s1, .., sk)` with `g(s1, .., sk) = s` of the intersected argument blocks.
pub fn partition_form_op(d: &SemiPrimal, s_elems: &[usize], n: usize, op: usize, args: &[Vec<u64>]) -> Vec<u64> {
    let m = s_elems.len();
    let full = (1u64 << n) - 1;
    let alg = d.algebra();
    let k = alg.arity(op);
    let mut out = vec![0u64; m];
    let mut idx = vec![0usize; k];
    let mut vals = vec![0usize; k];
    loop {
        let mut meet = full;
        for j in 0..k {
            vals[j] = s_elems[idx[j]];
            meet &= args[j][idx[j]];
        }
        let r = alg.apply(op, &vals);
        let slot = s_elems.iter().position(|&e| e == r).expect("subuniverse is closed");
        out[slot] |= meet;
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
        }
    }
}
