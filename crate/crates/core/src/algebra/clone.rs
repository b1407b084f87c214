use super::Algebra;
use crate::error::{Error, Result};
use std::collections::HashMap;

const DENSE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Derivation {
    Identity,
    Apply { op: usize, args: Vec<usize> },
}

enum Seen {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl Seen {
    fn get(&self, code: u64) -> Option<usize> {
        match self {
            Seen::Dense(v) => match v[code as usize] {
                0 => None,
                i => Some(i as usize - 1),
            },
            Seen::Sparse(m) => m.get(&code).map(|&i| i as usize),
        }
    }

    fn insert(&mut self, code: u64, idx: usize) {
        match self {
            Seen::Dense(v) => v[code as usize] = idx as u32 + 1,
            Seen::Sparse(m) => {
                m.insert(code, idx as u32);
            }
        }
    }
}

/// A unary term as a DAG of operation applications over the variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryTerm {
    // nodes[0] is the variable; later nodes only reference earlier ones; the last is the root
    nodes: Vec<Derivation>,
}

impl UnaryTerm {
    /// Evaluates the term at every element of `alg`, which must share the signature order.
    pub fn table_in(&self, alg: &dyn Algebra) -> Vec<usize> {
        let n = alg.size();
        let mut tables: Vec<Vec<usize>> = Vec::with_capacity(self.nodes.len());
        let mut args = Vec::new();
        for node in &self.nodes {
            let t = match node {
                Derivation::Identity => (0..n).collect(),
                Derivation::Apply { op, args: a } => (0..n)
                    .map(|x| {
                        args.clear();
                        args.extend(a.iter().map(|&i| tables[i][x]));
                        alg.apply(*op, &args)
                    })
                    .collect(),
            };
            tables.push(t);
        }
        tables.pop().expect("term has a root")
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// The result of a breadth-first unary clone search.
pub struct UnaryClone {
    size: usize,
    funcs: Vec<Vec<u8>>,
    depth: Vec<u32>,
    deriv: Vec<Derivation>,
    seen: Seen,
    complete: bool,
}

impl std::fmt::Debug for UnaryClone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnaryClone")
            .field("size", &self.size)
            .field("functions", &self.funcs.len())
            .field("complete", &self.complete)
            .finish()
    }
}

/// Controls when the search may stop.
#[derive(Debug, Clone, Default)]
pub struct CloneSearch {
    /// Stop as soon as every one of these tables has been generated.
    pub targets: Vec<Vec<usize>>,
}

fn encode(table: &[u8], n: u64) -> u64 {
    table.iter().rev().fold(0u64, |acc, &v| acc * n + v as u64)
}

/// Computes the full unary term clone.
pub fn unary_term_clone(alg: &dyn Algebra) -> Result<UnaryClone> {
    UnaryClone::search(alg, &CloneSearch::default())
}

impl UnaryClone {
    pub fn search(alg: &dyn Algebra, opts: &CloneSearch) -> Result<UnaryClone> {
        let n = alg.size();
        if n > 15 {
            return Err(Error::SizeBound {
                what: "unary clone search".into(),
                needed: n as u128,
                limit: 15,
            });
        }
        let space = (n as u64).pow(n as u32);
        let seen = if space <= DENSE_LIMIT {
            Seen::Dense(vec![0; space as usize])
        } else {
            Seen::Sparse(HashMap::new())
        };
        let mut clone = UnaryClone {
            size: n,
            funcs: Vec::new(),
            depth: Vec::new(),
            deriv: Vec::new(),
            seen,
            complete: false,
        };
        let id: Vec<u8> = (0..n as u8).collect();
        clone.push(id, 0, Derivation::Identity);

        let target_codes: Vec<u64> = opts
            .targets
            .iter()
            .map(|t| encode(&t.iter().map(|&v| v as u8).collect::<Vec<_>>(), n as u64))
            .collect();
        let all_found = |c: &UnaryClone| !target_codes.is_empty() && target_codes.iter().all(|&t| c.seen.get(t).is_some());

        let mut level_start = 0;
        let mut round = 0u32;
        loop {
            if all_found(&clone) {
                break;
            }
            let level_end = clone.funcs.len();
            round += 1;
            let mut tab = vec![0u8; n];
            for op in 0..alg.op_count() {
                let k = alg.arity(op);
                if k == 0 {
                    if round == 1 {
                        let c = alg.apply(op, &[]) as u8;
                        clone.try_add(vec![c; n], round, Derivation::Apply { op, args: vec![] });
                    }
                    continue;
                }
                if k == 1 {
                    for i in level_start..level_end {
                        for (t, &v) in tab.iter_mut().zip(&clone.funcs[i]) {
                            *t = alg.apply(op, &[v as usize]) as u8;
                        }
                        clone.try_add(tab.clone(), round, Derivation::Apply { op, args: vec![i] });
                    }
                    continue;
                }
                if k == 2 {
                    // precompute the binary table for speed
                    let mut table = vec![0u8; n * n];
                    for a in 0..n {
                        for b in 0..n {
                            table[a * n + b] = alg.apply(op, &[a, b]) as u8;
                        }
                    }
                    for i in 0..level_end {
                        let j_start = if i < level_start { level_start } else { 0 };
                        for j in j_start..level_end {
                            let (fi, fj) = (&clone.funcs[i], &clone.funcs[j]);
                            for x in 0..n {
                                tab[x] = table[fi[x] as usize * n + fj[x] as usize];
                            }
                            if clone.lookup(&tab).is_none() {
                                clone.push(tab.clone(), round, Derivation::Apply { op, args: vec![i, j] });
                            }
                        }
                    }
                    continue;
                }
                // general arity: the first frontier argument sits at position p
                let mut args = vec![0usize; k];
                let mut vals = vec![0usize; k];
                for p in 0..k {
                    let ranges: Vec<(usize, usize)> = (0..k)
                        .map(|q| match q.cmp(&p) {
                            std::cmp::Ordering::Less => (0, level_start),
                            std::cmp::Ordering::Equal => (level_start, level_end),
                            std::cmp::Ordering::Greater => (0, level_end),
                        })
                        .collect();
                    if ranges.iter().any(|&(lo, hi)| lo >= hi) {
                        continue;
                    }
                    for (q, r) in ranges.iter().enumerate() {
                        args[q] = r.0;
                    }
                    'tuples: loop {
                        for (x, t) in tab.iter_mut().enumerate() {
                            for (v, &a) in vals.iter_mut().zip(&args) {
                                *v = clone.funcs[a][x] as usize;
                            }
                            *t = alg.apply(op, &vals) as u8;
                        }
                        clone.try_add(tab.clone(), round, Derivation::Apply { op, args: args.clone() });
                        for q in (0..k).rev() {
                            args[q] += 1;
                            if args[q] < ranges[q].1 {
                                continue 'tuples;
                            }
                            args[q] = ranges[q].0;
                        }
                        break;
                    }
                }
            }
            if clone.funcs.len() == level_end {
                clone.complete = true;
                break;
            }
            level_start = level_end;
        }
        Ok(clone)
    }

    fn lookup(&self, table: &[u8]) -> Option<usize> {
        self.seen.get(encode(table, self.size as u64))
    }

    fn push(&mut self, table: Vec<u8>, depth: u32, d: Derivation) {
        let code = encode(&table, self.size as u64);
        self.seen.insert(code, self.funcs.len());
        self.funcs.push(table);
        self.depth.push(depth);
        self.deriv.push(d);
    }

    fn try_add(&mut self, table: Vec<u8>, depth: u32, d: Derivation) {
        if self.lookup(&table).is_none() {
            self.push(table, depth, d);
        }
    }

    /// True once no basic operation produces anything new.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    /// Position of `table` among the generated functions.
    pub fn find(&self, table: &[usize]) -> Option<usize> {
        if table.len() != self.size || table.iter().any(|&v| v >= self.size) {
            return None;
        }
        let t: Vec<u8> = table.iter().map(|&v| v as u8).collect();
        self.lookup(&t)
    }

    pub fn contains(&self, table: &[usize]) -> bool {
        self.find(table).is_some()
    }

    pub fn depth_of(&self, idx: usize) -> u32 {
        self.depth[idx]
    }

    pub fn table(&self, idx: usize) -> Vec<usize> {
        self.funcs[idx].iter().map(|&v| v as usize).collect()
    }

    /// All generated tables in lexicographic order.
    pub fn sorted_tables(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.funcs.len()).map(|i| self.table(i)).collect();
        out.sort();
        out
    }

    /// Extracts a term computing function `idx`.
    pub fn term(&self, idx: usize) -> UnaryTerm {
        let mut order = Vec::new();
        let mut mark: HashMap<usize, usize> = HashMap::new();
        let mut stack = vec![(idx, false)];
        while let Some((i, done)) = stack.pop() {
            if mark.contains_key(&i) {
                continue;
            }
            if done {
                mark.insert(i, order.len());
                order.push(i);
                continue;
            }
            stack.push((i, true));
            if let Derivation::Apply { args, .. } = &self.deriv[i] {
                for &a in args {
                    if !mark.contains_key(&a) {
                        stack.push((a, false));
                    }
                }
            }
        }
        let mut nodes = vec![Derivation::Identity];
        let mut remap: HashMap<usize, usize> = HashMap::new();
        for &i in &order {
            match &self.deriv[i] {
                Derivation::Identity => {
                    remap.insert(i, 0);
                }
                Derivation::Apply { op, args } => {
                    remap.insert(i, nodes.len());
                    nodes.push(Derivation::Apply { op: *op, args: args.iter().map(|a| remap[a]).collect() });
                }
            }
        }
        debug_assert_eq!(remap[&idx], nodes.len() - 1);
        UnaryTerm { nodes }
    }
}
