//! Finite algebras given by operation tables.

mod builtin;
mod clone;
mod flew;
mod iso;
mod semiprimal;
mod subalgebra;

pub use builtin::{
    make_boolean, make_bounded_chain, make_diamond, make_godel, make_lukasiewicz, make_moisil,
    parse_builtin, with_residuum,
};
pub use clone::{unary_term_clone, CloneSearch, UnaryClone, UnaryTerm};
pub use flew::{flew_quasiprimality_probe, FlewProbe};
pub use iso::{internal_isomorphisms, InternalIso};
pub use semiprimal::{
    is_semiprimal, threshold_tables, SemiPrimal, SemiprimalVerdict, TdCertificate, Thresholds,
};
pub use subalgebra::{enumerate_subuniverses, generated_subuniverse, SubalgebraLattice};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Anything with a finite carrier `0..size` and indexed operations.
pub trait Algebra {
    fn size(&self) -> usize;
    fn op_count(&self) -> usize;
    fn op_name(&self, op: usize) -> &str;
    fn arity(&self, op: usize) -> usize;
    fn apply(&self, op: usize, args: &[usize]) -> usize;

    fn op_index(&self, name: &str) -> Option<usize> {
        (0..self.op_count()).find(|&i| self.op_name(i) == name)
    }
}

/// One named operation with a flat row-major table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

/// Names the bounded-lattice reduct of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDesignation {
    pub meet: String,
    pub join: String,
    pub bottom: usize,
    pub top: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LatticeIdx {
    meet: usize,
    join: usize,
    bottom: usize,
    top: usize,
}

#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    name: String,
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    operations: Vec<Operation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice: Option<LatticeDesignation>,
}

/// A finite algebra on the carrier `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    labels: Option<Vec<String>>,
    operations: Vec<Operation>,
    lattice: Option<LatticeDesignation>,
    lat: Option<LatticeIdx>,
}

impl FiniteAlgebra {
    /// Validates and builds an algebra. Lattice laws are checked exhaustively.
    pub fn new(
        name: impl Into<String>,
        size: usize,
        labels: Option<Vec<String>>,
        operations: Vec<Operation>,
        lattice: Option<LatticeDesignation>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("size", "carrier must be nonempty"));
        }
        let mut seen = HashSet::new();
        for (i, op) in operations.iter().enumerate() {
            if !seen.insert(op.name.as_str()) {
                return Err(Error::invalid(
                    format!("operations[{i}].name"),
                    format!("duplicate operation name {:?}", op.name),
                ));
            }
            let expected = size
                .checked_pow(op.arity as u32)
                .filter(|&n| n <= 1 << 24)
                .ok_or_else(|| {
                    Error::invalid(format!("operations[{i}].arity"), "table would be too large")
                })?;
            if op.table.len() != expected {
                return Err(Error::invalid(
                    format!("operations[{i}].table"),
                    format!("expected {expected} entries, found {}", op.table.len()),
                ));
            }
            if let Some(j) = op.table.iter().position(|&v| v >= size) {
                return Err(Error::invalid(
                    format!("operations[{i}].table[{j}]"),
                    format!("entry {} is not a carrier index below {size}", op.table[j]),
                ));
            }
        }
        if let Some(ls) = &labels {
            if ls.len() != size {
                return Err(Error::invalid(
                    "labels",
                    format!("expected {size} labels, found {}", ls.len()),
                ));
            }
            let mut seen = HashSet::new();
            for (i, l) in ls.iter().enumerate() {
                if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
                    return Err(Error::invalid(format!("labels[{i}]"), format!("bad label {l:?}")));
                }
                if !seen.insert(l.as_str()) {
                    return Err(Error::invalid(format!("labels[{i}]"), format!("duplicate label {l:?}")));
                }
            }
        }
        let mut alg = FiniteAlgebra {
            name: name.into(),
            size,
            labels,
            operations,
            lattice: None,
            lat: None,
        };
        if let Some(des) = lattice {
            alg.lat = Some(alg.check_lattice(&des)?);
            alg.lattice = Some(des);
        }
        Ok(alg)
    }

    fn check_lattice(&self, des: &LatticeDesignation) -> Result<LatticeIdx> {
        let find = |field: &str, name: &str| -> Result<usize> {
            let i = self.op_index(name).ok_or_else(|| {
                Error::invalid(format!("lattice.{field}"), format!("no operation named {name:?}"))
            })?;
            if self.operations[i].arity != 2 {
                return Err(Error::invalid(format!("lattice.{field}"), format!("{name:?} is not binary")));
            }
            Ok(i)
        };
        let meet = find("meet", &des.meet)?;
        let join = find("join", &des.join)?;
        for (field, v) in [("bottom", des.bottom), ("top", des.top)] {
            if v >= self.size {
                return Err(Error::invalid(format!("lattice.{field}"), format!("{v} is not a carrier index")));
            }
        }
        let n = self.size;
        let m = |x: usize, y: usize| self.operations[meet].table[x * n + y];
        let j = |x: usize, y: usize| self.operations[join].table[x * n + y];
        let fail = |law: &str, xs: &[usize]| {
            Err(Error::invalid("lattice", format!("{law} fails at {xs:?}")))
        };
        for x in 0..n {
            if m(x, x) != x || j(x, x) != x {
                return fail("idempotence", &[x]);
            }
            if m(x, des.top) != x || j(x, des.bottom) != x {
                return fail("bounds", &[x]);
            }
            for y in 0..n {
                if m(x, y) != m(y, x) || j(x, y) != j(y, x) {
                    return fail("commutativity", &[x, y]);
                }
                if m(x, j(x, y)) != x || j(x, m(x, y)) != x {
                    return fail("absorption", &[x, y]);
                }
                for z in 0..n {
                    if m(m(x, y), z) != m(x, m(y, z)) || j(j(x, y), z) != j(x, j(y, z)) {
                        return fail("associativity", &[x, y, z]);
                    }
                }
            }
        }
        Ok(LatticeIdx { meet, join, bottom: des.bottom, top: des.top })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn operations(&self) -> &[Operation] {
        &self.operations
    }

    pub fn lattice(&self) -> Option<&LatticeDesignation> {
        self.lattice.as_ref()
    }

    pub fn has_lattice(&self) -> bool {
        self.lat.is_some()
    }

    fn lat(&self) -> &LatticeIdx {
        self.lat.as_ref().expect("algebra has no designated lattice")
    }

    pub fn require_lattice(&self) -> Result<()> {
        self.lat.map(|_| ()).ok_or(Error::NoLattice)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.operations[self.lat().meet].table[x * self.size + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.operations[self.lat().join].table[x * self.size + y]
    }

    pub fn bottom(&self) -> usize {
        self.lat().bottom
    }

    pub fn top(&self) -> usize {
        self.lat().top
    }

    pub fn meet_op(&self) -> usize {
        self.lat().meet
    }

    pub fn join_op(&self) -> usize {
        self.lat().join
    }

    /// Lattice order read off the meet table.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) == x
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(ls) => ls[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(ls) => ls.iter().position(|l| l == label),
            None => label.parse().ok().filter(|&x| x < self.size),
        }
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.operations[op].table
    }

    /// Same algebra with operations permuted to match `names`.
    pub fn reorder_to(&self, signature: &[(String, usize)]) -> Result<FiniteAlgebra> {
        if signature.len() != self.operations.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} has {} operations, expected {}",
                self.name,
                self.operations.len(),
                signature.len()
            )));
        }
        let mut ops = Vec::with_capacity(signature.len());
        for (name, arity) in signature {
            let i = self.op_index(name).ok_or_else(|| {
                Error::SignatureMismatch(format!("{} lacks operation {name:?}", self.name))
            })?;
            if self.operations[i].arity != *arity {
                return Err(Error::SignatureMismatch(format!(
                    "operation {name:?} has arity {} in {}, expected {arity}",
                    self.operations[i].arity, self.name
                )));
            }
            ops.push(self.operations[i].clone());
        }
        FiniteAlgebra::new(self.name.clone(), self.size, self.labels.clone(), ops, self.lattice.clone())
    }

    pub fn signature(&self) -> Vec<(String, usize)> {
        self.operations.iter().map(|o| (o.name.clone(), o.arity)).collect()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawAlgebra = serde_json::from_str(text)?;
        FiniteAlgebra::new(raw.name, raw.size, raw.labels, raw.operations, raw.lattice)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawAlgebra {
            name: self.name.clone(),
            size: self.size,
            labels: self.labels.clone(),
            operations: self.operations.clone(),
            lattice: self.lattice.clone(),
        };
        serde_json::to_value(raw).expect("algebra serializes")
    }
}

impl Algebra for FiniteAlgebra {
    fn size(&self) -> usize {
        self.size
    }

    fn op_count(&self) -> usize {
        self.operations.len()
    }

    fn op_name(&self, op: usize) -> &str {
        &self.operations[op].name
    }

    fn arity(&self, op: usize) -> usize {
        self.operations[op].arity
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        let mut idx = 0;
        for &a in args {
            idx = idx * self.size + a;
        }
        self.operations[op].table[idx]
    }
}

/// Builds a table for an `arity`-ary operation from a closure.
pub(crate) fn tabulate(size: usize, arity: usize, f: impl Fn(&[usize]) -> usize) -> Vec<usize> {
    let total = size.pow(arity as u32);
    let mut args = vec![0; arity];
    let mut table = Vec::with_capacity(total);
    for mut i in 0..total {
        for slot in args.iter_mut().rev() {
            *slot = i % size;
            i /= size;
        }
        table.push(f(&args));
    }
    table
}

/// Checks that `map` (defined on all of `src`) commutes with every operation.
pub fn is_homomorphism(src: &dyn Algebra, dst: &dyn Algebra, map: &[usize]) -> bool {
    if src.op_count() != dst.op_count() || map.len() != src.size() {
        return false;
    }
    let n = src.size();
    for op in 0..src.op_count() {
        let k = src.arity(op);
        if dst.arity(op) != k {
            return false;
        }
        let total = match n.checked_pow(k as u32) {
            Some(t) => t,
            None => return false,
        };
        let mut args = vec![0; k];
        let mut imgs = vec![0; k];
        for mut i in 0..total {
            for j in (0..k).rev() {
                args[j] = i % n;
                imgs[j] = map[args[j]];
                i /= n;
            }
            if map[src.apply(op, &args)] != dst.apply(op, &imgs) {
                return false;
            }
        }
    }
    true
}
