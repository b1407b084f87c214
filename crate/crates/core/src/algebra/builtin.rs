use super::{tabulate, Algebra, FiniteAlgebra, LatticeDesignation, Operation};
use crate::error::{Error, Result};

fn op(name: &str, arity: usize, table: Vec<usize>) -> Operation {
    Operation { name: name.to_string(), arity, table }
}

fn lattice(bottom: usize, top: usize) -> Option<LatticeDesignation> {
    Some(LatticeDesignation { meet: "meet".into(), join: "join".into(), bottom, top })
}

fn chain_labels(n: usize) -> Vec<String> {
    (0..=n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == n => "1".to_string(),
            i => format!("{i}/{n}"),
        })
        .collect()
}

fn chain_lattice_ops(size: usize) -> Vec<Operation> {
    vec![
        op("meet", 2, tabulate(size, 2, |a| a[0].min(a[1]))),
        op("join", 2, tabulate(size, 2, |a| a[0].max(a[1]))),
    ]
}

/// The Łukasiewicz chain on `{0, 1/n, ..., 1}`.
pub fn make_lukasiewicz(n: usize) -> FiniteAlgebra {
    assert!(n >= 1, "Łukasiewicz chain needs n >= 1");
    let size = n + 1;
    let mut ops = chain_lattice_ops(size);
    ops.push(op("oplus", 2, tabulate(size, 2, |a| (a[0] + a[1]).min(n))));
    ops.push(op("odot", 2, tabulate(size, 2, |a| (a[0] + a[1]).saturating_sub(n))));
    ops.push(op("neg", 1, tabulate(size, 1, |a| n - a[0])));
    ops.push(op("bot", 0, vec![0]));
    ops.push(op("top", 0, vec![n]));
    FiniteAlgebra::new(format!("Ł{n}"), size, Some(chain_labels(n)), ops, lattice(0, n))
        .expect("Łukasiewicz chain is well formed")
}

/// The Łukasiewicz-Moisil chain: lattice, involution, constants and every threshold `tau_i/n`.
pub fn make_moisil(n: usize) -> FiniteAlgebra {
    assert!(n >= 1, "Moisil chain needs n >= 1");
    let size = n + 1;
    let mut ops = chain_lattice_ops(size);
    ops.push(op("neg", 1, tabulate(size, 1, |a| n - a[0])));
    ops.push(op("bot", 0, vec![0]));
    ops.push(op("top", 0, vec![n]));
    for i in 1..=n {
        ops.push(op(&format!("tau{i}"), 1, tabulate(size, 1, |a| if a[0] >= i { n } else { 0 })));
    }
    FiniteAlgebra::new(format!("M{n}"), size, Some(chain_labels(n)), ops, lattice(0, n))
        .expect("Moisil chain is well formed")
}

/// A bare bounded chain with `size` elements.
pub fn make_bounded_chain(size: usize) -> FiniteAlgebra {
    assert!(size >= 2, "bounded chain needs at least two elements");
    let mut ops = chain_lattice_ops(size);
    ops.push(op("bot", 0, vec![0]));
    ops.push(op("top", 0, vec![size - 1]));
    let labels = (0..size)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == size - 1 => "1".to_string(),
            i => format!("c{i}"),
        })
        .collect();
    FiniteAlgebra::new(format!("C{size}"), size, Some(labels), ops, lattice(0, size - 1))
        .expect("bounded chain is well formed")
}

/// The two-element Boolean algebra.
pub fn make_boolean() -> FiniteAlgebra {
    let mut ops = chain_lattice_ops(2);
    ops.push(op("not", 1, vec![1, 0]));
    ops.push(op("bot", 0, vec![0]));
    ops.push(op("top", 0, vec![1]));
    FiniteAlgebra::new("2", 2, Some(vec!["0".into(), "1".into()]), ops, lattice(0, 1))
        .expect("2 is well formed")
}

/// The four-element diamond lattice `{0, a, b, 1}` with constants.
pub fn make_diamond() -> FiniteAlgebra {
    // 0 = bottom, 1 = a, 2 = b, 3 = top
    let rank = |x: usize| match x {
        0 => 0,
        3 => 2,
        _ => 1,
    };
    let meet = |x: usize, y: usize| {
        if x == y {
            x
        } else if rank(x) == 1 && rank(y) == 1 {
            0
        } else if rank(x) < rank(y) {
            x
        } else {
            y
        }
    };
    let join = |x: usize, y: usize| {
        if x == y {
            x
        } else if rank(x) == 1 && rank(y) == 1 {
            3
        } else if rank(x) > rank(y) {
            x
        } else {
            y
        }
    };
    let ops = vec![
        op("meet", 2, tabulate(4, 2, |a| meet(a[0], a[1]))),
        op("join", 2, tabulate(4, 2, |a| join(a[0], a[1]))),
        op("bot", 0, vec![0]),
        op("top", 0, vec![3]),
    ];
    let labels = ["0", "a", "b", "1"].iter().map(|s| s.to_string()).collect();
    FiniteAlgebra::new("diamond", 4, Some(labels), ops, lattice(0, 3)).expect("diamond is well formed")
}

/// The Gödel chain with `size` elements: monoid is meet, `imp` its residuum.
pub fn make_godel(size: usize) -> FiniteAlgebra {
    assert!(size >= 2, "Gödel chain needs at least two elements");
    let top = size - 1;
    let mut ops = chain_lattice_ops(size);
    ops.push(op("odot", 2, tabulate(size, 2, |a| a[0].min(a[1]))));
    ops.push(op("imp", 2, tabulate(size, 2, |a| if a[0] <= a[1] { top } else { a[1] })));
    ops.push(op("bot", 0, vec![0]));
    ops.push(op("top", 0, vec![top]));
    FiniteAlgebra::new(format!("G{size}"), size, Some(chain_labels(top)), ops, lattice(0, top))
        .expect("Gödel chain is well formed")
}

/// Adds the residuum of `monoid` under the name `residual`, computed as the largest `z`
/// with `z ⊙ x ≤ y`. Fails if some such largest element does not exist.
pub fn with_residuum(alg: &FiniteAlgebra, monoid: &str, residual: &str) -> Result<FiniteAlgebra> {
    alg.require_lattice()?;
    let m = alg
        .op_index(monoid)
        .ok_or_else(|| Error::NotFLew(format!("no operation named {monoid:?}")))?;
    if alg.op_index(residual).is_some() {
        return Ok(alg.clone());
    }
    let n = alg.size();
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let below: Vec<usize> = (0..n).filter(|&z| alg.leq(alg.apply(m, &[z, x]), y)).collect();
            let best = alg.join_all(below.iter().copied());
            if !below.contains(&best) {
                return Err(Error::NotFLew(format!("no residuum for x={x}, y={y}")));
            }
            table.push(best);
        }
    }
    let mut ops = alg.operations().to_vec();
    ops.push(op(residual, 2, table));
    FiniteAlgebra::new(alg.name(), n, alg.labels().map(|l| l.to_vec()), ops, alg.lattice().cloned())
}

/// Parses `luk:N`, `moisil:N`, `bool`, `chain:N`, `diamond` or `godel:N`.
pub fn parse_builtin(spec: &str) -> Result<FiniteAlgebra> {
    let bad = |msg: &str| Error::invalid("builtin", format!("{spec:?}: {msg}"));
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let num = |lo: usize| -> Result<usize> {
        let a = arg.ok_or_else(|| bad("missing size"))?;
        let n: usize = a.parse().map_err(|_| bad("size is not a number"))?;
        if n < lo || n > 14 {
            return Err(bad(&format!("size must lie in {lo}..=14")));
        }
        Ok(n)
    };
    match kind {
        "luk" => Ok(make_lukasiewicz(num(1)?)),
        "moisil" => Ok(make_moisil(num(1)?)),
        "chain" => Ok(make_bounded_chain(num(2)?)),
        "godel" => Ok(make_godel(num(2)?)),
        "bool" if arg.is_none() => Ok(make_boolean()),
        "diamond" if arg.is_none() => Ok(make_diamond()),
        _ => Err(bad("unknown builtin")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luk1_negation_swaps() {
        let l1 = make_lukasiewicz(1);
        let neg = l1.op_index("neg").unwrap();
        assert_eq!(l1.size(), 2);
        assert_eq!(l1.apply(neg, &[0]), 1);
        assert_eq!(l1.apply(neg, &[1]), 0);
    }

    #[test]
    fn luk2_tables() {
        let l2 = make_lukasiewicz(2);
        let half = l2.element_by_label("1/2").unwrap();
        let oplus = l2.op_index("oplus").unwrap();
        let odot = l2.op_index("odot").unwrap();
        assert_eq!(l2.apply(oplus, &[half, half]), l2.top());
        assert_eq!(l2.apply(odot, &[half, half]), l2.bottom());
    }

    #[test]
    fn moisil_thresholds() {
        let m2 = make_moisil(2);
        let t = m2.op_index("tau1").unwrap();
        assert_eq!(m2.table(t), &[0, 2, 2]);
        let m3 = make_moisil(3);
        let t = m3.op_index("tau1").unwrap();
        assert_eq!(m3.apply(t, &[2]), 3);
    }

    #[test]
    fn residuum_of_luk_matches_formula() {
        let l3 = with_residuum(&make_lukasiewicz(3), "odot", "imp").unwrap();
        let imp = l3.op_index("imp").unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(l3.apply(imp, &[x, y]), (3 - x + y).min(3));
            }
        }
    }

    #[test]
    fn builtin_specs() {
        assert_eq!(parse_builtin("luk:3").unwrap().size(), 4);
        assert_eq!(parse_builtin("bool").unwrap().size(), 2);
        assert_eq!(parse_builtin("chain:3").unwrap().size(), 3);
        assert!(parse_builtin("luk:0").is_err());
        assert!(parse_builtin("nope").is_err());
    }
}
