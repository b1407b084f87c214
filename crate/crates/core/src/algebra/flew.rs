use super::{Algebra, FiniteAlgebra};
use crate::error::{Error, Result};
use serde::Serialize;

/// Outcome of the two quasi-primality tests for FLew-algebras.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlewProbe {
    /// Least `n <= size` with `x ∨ ¬(x^n) = 1` everywhere.
    pub crit_i: Option<usize>,
    /// Idempotents of the monoid other than bottom and top.
    pub crit_iii: Vec<usize>,
}

/// Checks the FLew axioms for the named monoid and residual, then runs both probes.
pub fn flew_quasiprimality_probe(alg: &FiniteAlgebra, monoid: &str, residual: &str) -> Result<FlewProbe> {
    alg.require_lattice()?;
    let find = |name: &str| {
        alg.op_index(name)
            .filter(|&i| alg.arity(i) == 2)
            .ok_or_else(|| Error::NotFLew(format!("no binary operation named {name:?}")))
    };
    let m = find(monoid)?;
    let r = find(residual)?;
    let n = alg.size();
    let mul = |x: usize, y: usize| alg.apply(m, &[x, y]);
    let imp = |x: usize, y: usize| alg.apply(r, &[x, y]);
    let (bot, top) = (alg.bottom(), alg.top());
    for x in 0..n {
        if mul(x, top) != x {
            return Err(Error::NotFLew(format!("unit law fails: {} {monoid} 1", alg.label(x))));
        }
        for y in 0..n {
            if mul(x, y) != mul(y, x) {
                return Err(Error::NotFLew(format!(
                    "commutativity fails at ({}, {})",
                    alg.label(x),
                    alg.label(y)
                )));
            }
            for z in 0..n {
                if mul(mul(x, y), z) != mul(x, mul(y, z)) {
                    return Err(Error::NotFLew(format!(
                        "associativity fails at ({}, {}, {})",
                        alg.label(x),
                        alg.label(y),
                        alg.label(z)
                    )));
                }
                if alg.leq(mul(x, y), z) != alg.leq(x, imp(y, z)) {
                    return Err(Error::NotFLew(format!(
                        "residuation fails at x={}, y={}, z={}",
                        alg.label(x),
                        alg.label(y),
                        alg.label(z)
                    )));
                }
            }
        }
    }
    let neg = |x: usize| imp(x, bot);
    let mut crit_i = None;
    for k in 1..=n {
        let holds = (0..n).all(|x| {
            let power = (1..k).fold(x, |acc, _| mul(acc, x));
            alg.join(x, neg(power)) == top
        });
        if holds {
            crit_i = Some(k);
            break;
        }
    }
    let crit_iii = (0..n).filter(|&a| a != bot && a != top && mul(a, a) == a).collect();
    Ok(FlewProbe { crit_i, crit_iii })
}
