use super::functor::{apply_functor, in_inclusion_image, map_element, render_element, SetFunctor, SizeCaps};
use crate::algebra::{make_boolean, Algebra, FiniteAlgebra, SemiPrimal};
use crate::duality::{c_s, homomorphisms, is_boolean, p_prime, s_prime, PowersetAlgebra, SetDMorphism, SetDObject, VarietyAlgebra};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// `T(X)` with the lifted marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedObject {
    pub functor: SetFunctor,
    /// Canonical codes of the elements of `T(X)`, sorted.
    pub elements: Vec<u64>,
    /// Points named by rendered elements, marked by the lifted marking.
    pub object: SetDObject,
}

impl LiftedObject {
    pub fn position(&self, z: u64) -> Option<usize> {
        self.elements.binary_search(&z).ok()
    }

    pub fn mark_of(&self, z: u64) -> Option<usize> {
        self.position(z).map(|i| self.object.mark(i))
    }
}

fn mask_of(points: &[usize]) -> u64 {
    points.iter().fold(0, |m, &x| m | 1 << x)
}

/// Marks each element of `T(X)` with the meet of all `S` whose part `T(C^S)` contains it.
///
/// For the powerset this is checked against the join of the marks of the members.
pub fn lift_object(d: &SemiPrimal, f: SetFunctor, obj: &SetDObject, caps: &SizeCaps) -> Result<LiftedObject> {
    let n = obj.len();
    let elements = apply_functor(f, n, caps)?;
    let subs = d.subalgebras();
    let parts: Vec<u64> = (0..subs.len()).map(|s| mask_of(&c_s(d, s, obj))).collect();
    let mut marking = Vec::with_capacity(elements.len());
    for &z in &elements {
        let mark = subs.meet_all((0..subs.len()).filter(|&s| in_inclusion_image(f, parts[s], n, z)));
        if f == SetFunctor::Powerset {
            let joined = subs.join_all((0..n).filter(|&x| z >> x & 1 == 1).map(|x| obj.mark(x)));
            if joined != mark {
                return Err(Error::check(
                    "lift_object",
                    format!(
                        "meet form gives {} but join form gives {} at {}",
                        d.render_sub(mark),
                        d.render_sub(joined),
                        render_element(f, obj.points(), z)
                    ),
                ));
            }
        }
        marking.push(mark);
    }
    let points = elements.iter().map(|&z| render_element(f, obj.points(), z)).collect();
    Ok(LiftedObject { functor: f, elements, object: SetDObject::new(d, points, marking)? })
}

/// `T(f)` between the lifted objects, validated as a marked-set morphism.
pub fn lift_morphism(d: &SemiPrimal, f: SetFunctor, mor: &SetDMorphism, caps: &SizeCaps) -> Result<SetDMorphism> {
    let src = lift_object(d, f, &mor.source, caps)?;
    let dst = lift_object(d, f, &mor.target, caps)?;
    let target = mor.target.len();
    let map = src
        .elements
        .iter()
        .map(|&z| dst.position(map_element(f, &mor.map, target, z)).expect("T(f) lands in T(Y)"))
        .collect();
    SetDMorphism::new(d, src.object, dst.object, map)
        .map_err(|e| Error::check("lift_morphism", format!("lifted map violates the marking condition: {e}")))
}

/// Colimit classes of the coend, keyed by the element of `T(X)` they represent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoendAgreement {
    /// For each element of `T(X)`, the subuniverses whose copy contributes to its class.
    pub classes: Vec<Vec<usize>>,
}

/// Builds the coend of the copies `V^S T(C^S X)` as an explicit colimit and checks it agrees
/// with [`lift_object`].
pub fn lift_via_coend(
    d: &SemiPrimal,
    f: SetFunctor,
    obj: &SetDObject,
    caps: &SizeCaps,
) -> Result<(LiftedObject, CoendAgreement)> {
    let subs = d.subalgebras();
    let n = obj.len();
    let parts: Vec<Vec<usize>> = (0..subs.len()).map(|s| c_s(d, s, obj)).collect();
    let local: Vec<Vec<u64>> = parts.iter().map(|p| apply_functor(f, p.len(), caps)).collect::<Result<_>>()?;
    let mut offset = vec![0usize; subs.len() + 1];
    for s in 0..subs.len() {
        offset[s + 1] = offset[s] + local[s].len();
    }
    let mut parent: Vec<usize> = (0..offset[subs.len()]).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for s1 in 0..subs.len() {
        for s2 in 0..subs.len() {
            if s1 == s2 || !subs.leq(s1, s2) {
                continue;
            }
            // inclusion C^{s1} -> C^{s2} in local coordinates
            let incl: Vec<usize> = parts[s1]
                .iter()
                .map(|x| parts[s2].iter().position(|y| y == x).expect("C^S is monotone in S"))
                .collect();
            for (i, &z) in local[s1].iter().enumerate() {
                let w = map_element(f, &incl, parts[s2].len(), z);
                let j = local[s2].binary_search(&w).expect("T preserves the element kind");
                let (a, b) = (find(&mut parent, offset[s1] + i), find(&mut parent, offset[s2] + j));
                parent[a] = b;
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for s in 0..subs.len() {
        for (i, &z) in local[s].iter().enumerate() {
            let r = find(&mut parent, offset[s] + i);
            classes.entry(r).or_default().push((s, map_element(f, &parts[s], n, z)));
        }
    }
    let lifted = lift_object(d, f, obj, caps)?;
    let mut seen: Vec<Option<Vec<usize>>> = vec![None; lifted.elements.len()];
    for members in classes.values() {
        let z = members[0].1;
        if members.iter().any(|&(_, w)| w != z) {
            return Err(Error::check("lift_via_coend", "a colimit class represents two elements of T(X)"));
        }
        let i = lifted.position(z).expect("global images lie in T(X)");
        if seen[i].is_some() {
            return Err(Error::check(
                "lift_via_coend",
                format!("two classes represent {}", lifted.object.point(i)),
            ));
        }
        let ss: Vec<usize> = members.iter().map(|&(s, _)| s).collect();
        let mark = subs.meet_all(ss.iter().copied());
        if mark != lifted.object.mark(i) {
            return Err(Error::check(
                "lift_via_coend",
                format!(
                    "colimit marks {} with {} but the meet formula gives {}",
                    lifted.object.point(i),
                    d.render_sub(mark),
                    d.render_sub(lifted.object.mark(i))
                ),
            ));
        }
        seen[i] = Some(ss);
    }
    let classes = seen
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| Error::check("lift_via_coend", format!("{} has no class", lifted.object.point(i))))
        })
        .collect::<Result<_>>()?;
    Ok((lifted, CoendAgreement { classes }))
}

/// `L'(A) = P'(T'(S'(A)))`.
pub fn lifted_l(d: &SemiPrimal, f: SetFunctor, alg: &dyn Algebra, caps: &SizeCaps) -> Result<VarietyAlgebra> {
    let dual = s_prime(d, alg)?;
    let lifted = lift_object(d, f, &dual.object, caps)?;
    p_prime(d, &lifted.object)
}

/// The classical `L(B) = P(T(S(B)))` for a finite Boolean algebra.
///
/// `S(B)` is the set of homs into the two-element algebra when the signature matches,
/// otherwise the atoms, which are in bijection with them.
pub fn classical_l(f: SetFunctor, b: &FiniteAlgebra, caps: &SizeCaps) -> Result<PowersetAlgebra> {
    is_boolean(b)?;
    let two = make_boolean();
    let points = if b.signature() == two.signature() {
        homomorphisms(b, &two)?.len()
    } else {
        let bot = b.bottom();
        (0..b.size())
            .filter(|&a| a != bot && (0..b.size()).all(|c| c == bot || c == a || !b.leq(c, a)))
            .count()
    };
    let t = apply_functor(f, points, caps)?;
    PowersetAlgebra::new(t.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;
    use crate::duality::boolean_skeleton;

    fn l2() -> SemiPrimal {
        SemiPrimal::new(make_lukasiewicz(2)).unwrap()
    }

    #[test]
    fn powerset_marks() {
        let d = l2();
        let caps = SizeCaps::default();
        let obj = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
        let l = lift_object(&d, SetFunctor::Powerset, &obj, &caps).unwrap();
        assert_eq!(l.mark_of(0), d.subalgebras().least());
        assert_eq!(l.mark_of(0b11), Some(1));
        assert_eq!(l.mark_of(0b01), Some(0));
    }

    #[test]
    fn neighborhood_trace_mark() {
        let d = l2();
        let caps = SizeCaps::default();
        let obj = SetDObject::with_marks(&d, vec![0]).unwrap();
        let l = lift_object(&d, SetFunctor::Neighborhood, &obj, &caps).unwrap();
        assert_eq!(l.mark_of(0b11), Some(0));
    }

    #[test]
    fn coend_agrees() {
        let d = l2();
        let caps = SizeCaps::default();
        for f in SetFunctor::ALL {
            let obj = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
            lift_via_coend(&d, f, &obj, &caps).unwrap();
        }
    }

    #[test]
    fn lifted_l_of_d() {
        let d = l2();
        let caps = SizeCaps::default();
        assert_eq!(lifted_l(&d, SetFunctor::Powerset, d.algebra(), &caps).unwrap().size(), 6);
        assert_eq!(classical_l(SetFunctor::Powerset, &make_boolean(), &caps).unwrap().size(), 4);
    }

    #[test]
    fn skeleton_matches_classical() {
        let d = l2();
        let caps = SizeCaps::default();
        let l = lifted_l(&d, SetFunctor::Powerset, d.algebra(), &caps).unwrap();
        let sk = boolean_skeleton(&d, &l).unwrap();
        let base = boolean_skeleton(&d, d.algebra()).unwrap();
        let classical = classical_l(SetFunctor::Powerset, &base.algebra, &caps).unwrap();
        assert_eq!(sk.algebra.size(), classical.size());
    }

    #[test]
    fn lifted_morphism_respects_marks() {
        let d = l2();
        let caps = SizeCaps::default();
        let src = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
        let dst = SetDObject::with_marks(&d, vec![0]).unwrap();
        let mor = SetDMorphism::new(&d, src, dst, vec![0, 0]).unwrap();
        for f in SetFunctor::ALL {
            lift_morphism(&d, f, &mor, &caps).unwrap();
        }
    }
}
