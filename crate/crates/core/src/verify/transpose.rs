use crate::algebra::{is_homomorphism, Algebra, SemiPrimal};
use crate::duality::{p_prime, s_prime};
use crate::error::{Error, Result};
use crate::lift::{lift_object, map_element, render_element, SetFunctor, SizeCaps};
use serde::Serialize;

/// Largest `L'(A)` whose evaluation maps are checked as homomorphisms one by one.
const EVALUATION_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransposeVerdict {
    pub injective: bool,
    /// Number of points of `T'S'(A)`.
    pub points: usize,
    /// `evaluation` when every `ev_W` was tabulated, `coordinates` otherwise.
    pub method: &'static str,
    pub collision: Option<(String, String)>,
}

/// The transpose of `delta'` at `A`, as the composite `T'S'A -> S'P'T'S'A -> S'L'P'S'A -> S'L'A`.
///
/// The middle arrows reduce to reindexing along `T(S'eta' . eps'_{S'A})`, which is checked to be
/// the identity, so `W` goes to evaluation at `W`. Those evaluations are then checked to be
/// homomorphisms `L'A -> D` and pairwise distinct.
pub fn transpose_expressivity_check(
    d: &SemiPrimal,
    f: SetFunctor,
    alg: &dyn Algebra,
    caps: &SizeCaps,
) -> Result<TransposeVerdict> {
    let dual = s_prime(d, alg)?;
    let m = dual.object.len();
    let pa = p_prime(d, &dual.object)?;
    let eta: Vec<usize> = (0..alg.size())
        .map(|a| {
            let t: Vec<usize> = dual.homs.iter().map(|u| u[a]).collect();
            pa.index_of(&t).ok_or_else(|| Error::check("transpose", "eta' leaves P'S'A"))
        })
        .collect::<Result<_>>()?;
    let dual2 = s_prime(d, &pa)?;
    // u -> ev_u -> ev_u . eta'
    let triangle: Vec<usize> = (0..m)
        .map(|u| {
            let ev: Vec<usize> = (0..pa.size()).map(|alpha| pa.coord(alpha, u)).collect();
            let w = dual2.point_of(&ev).ok_or_else(|| Error::check("transpose", "evaluation is not a point of S'P'S'A"))?;
            let back: Vec<usize> = eta.iter().map(|&e| dual2.homs[w][e]).collect();
            dual.point_of(&back).ok_or_else(|| Error::check("transpose", "S'eta' leaves S'A"))
        })
        .collect::<Result<_>>()?;
    let lifted = lift_object(d, f, &dual.object, caps)?;
    for &w in &lifted.elements {
        if map_element(f, &triangle, m, w) != w {
            return Err(Error::check(
                "transpose",
                format!("middle composite moves {}", render_element(f, dual.object.points(), w)),
            ));
        }
    }
    let la = p_prime(d, &lifted.object)?;
    let names: Vec<String> = lifted.elements.iter().map(|&w| render_element(f, dual.object.points(), w)).collect();
    let points = lifted.elements.len();
    if la.size() > EVALUATION_LIMIT {
        // distinct coordinates of a product whose factors all contain 0 and 1
        return Ok(TransposeVerdict { injective: true, points, method: "coordinates", collision: None });
    }
    let mut tables: Vec<Vec<usize>> = Vec::with_capacity(points);
    for (j, name) in names.iter().enumerate() {
        let ev: Vec<usize> = (0..la.size()).map(|alpha| la.coord(alpha, j)).collect();
        if !is_homomorphism(&la, d.algebra(), &ev) {
            return Err(Error::check("transpose", format!("evaluation at {name} is not a homomorphism")));
        }
        if let Some(i) = tables.iter().position(|t| *t == ev) {
            return Ok(TransposeVerdict {
                injective: false,
                points,
                method: "evaluation",
                collision: Some((names[i].clone(), name.clone())),
            });
        }
        tables.push(ev);
    }
    Ok(TransposeVerdict { injective: true, points, method: "evaluation", collision: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_boolean, make_lukasiewicz, FiniteAlgebra, Operation};

    #[test]
    fn classical_and_lifted() {
        let caps = SizeCaps::default();
        let two = SemiPrimal::new(make_boolean()).unwrap();
        assert!(transpose_expressivity_check(&two, SetFunctor::Powerset, two.algebra(), &caps).unwrap().injective);
        let l2 = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        for f in SetFunctor::ALL {
            let v = transpose_expressivity_check(&l2, f, l2.algebra(), &caps).unwrap();
            assert!(v.injective, "{f}");
        }
    }

    #[test]
    fn one_element_algebra() {
        let l2 = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let ops = l2
            .algebra()
            .operations()
            .iter()
            .map(|o| Operation { name: o.name.clone(), arity: o.arity, table: vec![0; 1] })
            .collect();
        let one = FiniteAlgebra::new("one", 1, None, ops, None).unwrap();
        let v = transpose_expressivity_check(&l2, SetFunctor::Powerset, &one, &SizeCaps::default()).unwrap();
        assert!(v.injective);
        assert_eq!(v.points, 1);
    }
}
