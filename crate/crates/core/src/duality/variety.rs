use super::homs::{check_signature, homomorphisms};
use super::object::SetDObject;
use crate::algebra::{Algebra, FiniteAlgebra, LatticeDesignation, Operation, SemiPrimal};
use crate::error::{Error, Result};

const PRODUCT_LIMIT: u128 = 1 << 48;
const MATERIALIZE_LIMIT: u128 = 1 << 22;

/// The product of the marked subalgebras of `D` over the points of an object.
///
/// Elements are tuples `a` with `a(x)` in the mark of `x`. They are numbered in mixed radix
/// with the first point most significant and factor elements in increasing order, so the
/// numbering agrees with lexicographic order on tuples.
#[derive(Debug, Clone)]
pub struct VarietyAlgebra {
    base: FiniteAlgebra,
    index: SetDObject,
    factors: Vec<Vec<usize>>,
    pos: Vec<Vec<usize>>,
    strides: Vec<usize>,
    size: usize,
}

/// Builds `P'(obj)`.
pub fn p_prime(d: &SemiPrimal, obj: &SetDObject) -> Result<VarietyAlgebra> {
    VarietyAlgebra::new(d, obj)
}

impl VarietyAlgebra {
    pub fn new(d: &SemiPrimal, obj: &SetDObject) -> Result<Self> {
        let subs = d.subalgebras();
        let factors: Vec<Vec<usize>> = obj.marking().iter().map(|&s| subs.elements(s)).collect();
        let mut size: u128 = 1;
        for f in &factors {
            size *= f.len() as u128;
            if size > PRODUCT_LIMIT {
                return Err(Error::SizeBound { what: "product algebra".into(), needed: size, limit: PRODUCT_LIMIT });
            }
        }
        let n = d.size();
        let pos = factors
            .iter()
            .map(|f| {
                let mut p = vec![usize::MAX; n];
                for (i, &e) in f.iter().enumerate() {
                    p[e] = i;
                }
                p
            })
            .collect();
        let mut strides = vec![1usize; factors.len()];
        for x in (0..factors.len().saturating_sub(1)).rev() {
            strides[x] = strides[x + 1] * factors[x + 1].len();
        }
        Ok(VarietyAlgebra { base: d.algebra().clone(), index: obj.clone(), factors, pos, strides, size: size as usize })
    }

    pub fn index(&self) -> &SetDObject {
        &self.index
    }

    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    /// The elements of the factor at point `x`.
    pub fn factor(&self, x: usize) -> &[usize] {
        &self.factors[x]
    }

    /// Value of element `idx` at point `x`.
    pub fn coord(&self, idx: usize, x: usize) -> usize {
        let f = &self.factors[x];
        f[idx / self.strides[x] % f.len()]
    }

    pub fn tuple(&self, idx: usize) -> Vec<usize> {
        (0..self.factors.len()).map(|x| self.coord(idx, x)).collect()
    }

    /// Number of a tuple, if every entry lies in its factor.
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.factors.len() {
            return None;
        }
        let mut idx = 0;
        for (x, &v) in tuple.iter().enumerate() {
            let p = *self.pos[x].get(v)?;
            if p == usize::MAX {
                return None;
            }
            idx += p * self.strides[x];
        }
        Some(idx)
    }

    /// The constant tuple with value `v`, if `v` lies in every factor.
    pub fn constant(&self, v: usize) -> Option<usize> {
        self.index_of(&vec![v; self.factors.len()])
    }

    pub fn bottom(&self) -> usize {
        self.constant(self.base.bottom()).expect("bottom lies in every subuniverse")
    }

    pub fn top(&self) -> usize {
        self.constant(self.base.top()).expect("top lies in every subuniverse")
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.apply(self.base.meet_op(), &[a, b])
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.apply(self.base.join_op(), &[a, b])
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        (0..self.factors.len()).all(|x| self.base.leq(self.coord(a, x), self.coord(b, x)))
    }

    /// Whether every coordinate is the bottom or the top.
    pub fn is_crisp(&self, idx: usize) -> bool {
        let (b, t) = (self.base.bottom(), self.base.top());
        (0..self.factors.len()).all(|x| {
            let v = self.coord(idx, x);
            v == b || v == t
        })
    }

    /// The crisp tuple that is top exactly on the points in `mask`.
    pub fn characteristic(&self, mask: u64) -> usize {
        let (b, t) = (self.base.bottom(), self.base.top());
        let tuple: Vec<usize> = (0..self.factors.len()).map(|x| if mask >> x & 1 == 1 { t } else { b }).collect();
        self.index_of(&tuple).expect("crisp tuples exist")
    }

    pub fn render(&self, idx: usize) -> String {
        let parts: Vec<String> = self.tuple(idx).iter().map(|&v| self.base.label(v)).collect();
        format!("({})", parts.join(", "))
    }

    /// Explicit tables, for small products only.
    pub fn to_finite(&self) -> Result<FiniteAlgebra> {
        let n = self.size;
        let mut ops = Vec::new();
        for op in 0..self.base.op_count() {
            let k = self.base.arity(op);
            let cells = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            if cells > MATERIALIZE_LIMIT {
                return Err(Error::SizeBound { what: "operation table".into(), needed: cells, limit: MATERIALIZE_LIMIT });
            }
            let table = crate::algebra::tabulate(n, k, |args| self.apply(op, args));
            ops.push(Operation { name: self.base.op_name(op).to_string(), arity: k, table });
        }
        let labels = (0..n)
            .map(|i| {
                let parts: Vec<String> = self.tuple(i).iter().map(|&v| self.base.label(v)).collect();
                format!("[{}]", parts.join(","))
            })
            .collect();
        let lat = self.base.lattice().map(|l| LatticeDesignation {
            meet: l.meet.clone(),
            join: l.join.clone(),
            bottom: self.bottom(),
            top: self.top(),
        });
        FiniteAlgebra::new(format!("P'({} points)", self.index.len()), n, Some(labels), ops, lat)
    }

    /// The index object plus the tuple list.
    pub fn to_json(&self, limit: usize) -> Result<serde_json::Value> {
        if self.size > limit {
            return Err(Error::SizeBound {
                what: "serialized product".into(),
                needed: self.size as u128,
                limit: limit as u128,
            });
        }
        let elements: Vec<Vec<String>> = (0..self.size)
            .map(|i| self.tuple(i).iter().map(|&v| self.base.label(v)).collect())
            .collect();
        Ok(serde_json::json!({ "index": self.index.to_json(), "elements": elements }))
    }
}

impl Algebra for VarietyAlgebra {
    fn size(&self) -> usize {
        self.size
    }

    fn op_count(&self) -> usize {
        self.base.op_count()
    }

    fn op_name(&self, op: usize) -> &str {
        self.base.op_name(op)
    }

    fn arity(&self, op: usize) -> usize {
        self.base.arity(op)
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        let mut vals = vec![0usize; args.len()];
        let mut idx = 0;
        for x in 0..self.factors.len() {
            for (v, &a) in vals.iter_mut().zip(args) {
                *v = self.coord(a, x);
            }
            let r = self.base.apply(op, &vals);
            idx += self.pos[x][r] * self.strides[x];
        }
        idx
    }
}

/// The dual object of an algebra together with the homs that its points stand for.
#[derive(Debug, Clone)]
pub struct Dual {
    pub object: SetDObject,
    /// `homs[i]` is the table of the hom named by point `i`.
    pub homs: Vec<Vec<usize>>,
}

impl Dual {
    /// The point whose hom has this table.
    pub fn point_of(&self, table: &[usize]) -> Option<usize> {
        self.homs.binary_search_by(|h| h.as_slice().cmp(table)).ok()
    }
}

/// Builds `S'(A)`: all homs `A -> D`, each marked by its image.
pub fn s_prime(d: &SemiPrimal, alg: &dyn Algebra) -> Result<Dual> {
    check_signature(alg, d.algebra())?;
    let homs = homomorphisms(alg, d.algebra())?;
    let subs = d.subalgebras();
    let mut marking = Vec::with_capacity(homs.len());
    for (i, h) in homs.iter().enumerate() {
        let mask = h.iter().fold(0u64, |m, &v| m | 1 << v);
        let id = subs
            .id_of(mask)
            .ok_or_else(|| Error::check("S'", format!("image of hom u{i} is not a subuniverse")))?;
        marking.push(id);
    }
    let points = (0..homs.len()).map(|i| format!("u{i}")).collect();
    Ok(Dual { object: SetDObject::from_raw(points, marking), homs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;

    fn l2() -> SemiPrimal {
        SemiPrimal::new(make_lukasiewicz(2)).unwrap()
    }

    #[test]
    fn product_sizes() {
        let d = l2();
        let one = SetDObject::with_marks(&d, vec![0]).unwrap();
        assert_eq!(p_prime(&d, &one).unwrap().size(), 2);
        let two = SetDObject::with_marks(&d, vec![1, 1]).unwrap();
        assert_eq!(p_prime(&d, &two).unwrap().size(), 9);
        assert_eq!(p_prime(&d, &SetDObject::empty()).unwrap().size(), 1);
    }

    #[test]
    fn product_is_closed_and_ordered() {
        let d = l2();
        let obj = SetDObject::with_marks(&d, vec![1, 0]).unwrap();
        let p = p_prime(&d, &obj).unwrap();
        let tuples: Vec<Vec<usize>> = (0..p.size()).map(|i| p.tuple(i)).collect();
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
        for (i, t) in tuples.iter().enumerate() {
            assert_eq!(p.index_of(t), Some(i));
        }
        let fin = p.to_finite().unwrap();
        assert_eq!(fin.size(), 6);
    }

    #[test]
    fn dual_of_d_is_identity() {
        let d = l2();
        let dual = s_prime(&d, d.algebra()).unwrap();
        assert_eq!(dual.homs, vec![vec![0, 1, 2]]);
        assert_eq!(dual.object.marking(), &[d.subalgebras().full()]);
    }

    #[test]
    fn dual_of_trivial_algebra_is_empty() {
        let d = l2();
        let p = p_prime(&d, &SetDObject::empty()).unwrap();
        assert!(s_prime(&d, &p).unwrap().object.is_empty());
    }

    #[test]
    fn dual_of_mixed_product() {
        let d = l2();
        let obj = SetDObject::with_marks(&d, vec![1, 0]).unwrap();
        let p = p_prime(&d, &obj).unwrap();
        let dual = s_prime(&d, &p).unwrap();
        let mut marks = dual.object.marking().to_vec();
        marks.sort();
        assert_eq!(marks, vec![0, 1]);
    }
}
