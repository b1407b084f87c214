use super::object::SetDObject;
use super::variety::{p_prime, s_prime};
use crate::algebra::{is_homomorphism, Algebra, SemiPrimal};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Marks every point of a plain set with `s`.
pub fn v_s(_d: &SemiPrimal, s: usize, points: Vec<String>) -> SetDObject {
    let marking = vec![s; points.len()];
    SetDObject::from_raw(points, marking)
}

/// Indices of the points whose mark lies below `s`, in order.
pub fn c_s(d: &SemiPrimal, s: usize, obj: &SetDObject) -> Vec<usize> {
    let subs = d.subalgebras();
    (0..obj.len()).filter(|&x| subs.leq(obj.mark(x), s)).collect()
}

/// The forgetful functor: every point.
pub fn u_points(obj: &SetDObject) -> Vec<usize> {
    (0..obj.len()).collect()
}

/// An explicit bijection found by a unit or counit check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub map: Vec<usize>,
}

fn first_collision(map: &[usize]) -> Option<(usize, usize)> {
    let mut seen = BTreeMap::new();
    for (i, &y) in map.iter().enumerate() {
        if let Some(&j) = seen.get(&y) {
            return Some((j, i));
        }
        seen.insert(y, i);
    }
    None
}

/// Evaluation `a -> (u(a))_u` into `P'S'(A)`, verified to be a bijective hom.
pub fn eta_prime_check(d: &SemiPrimal, alg: &dyn Algebra) -> Result<IsoWitness> {
    let dual = s_prime(d, alg)?;
    let p = p_prime(d, &dual.object)?;
    let mut map = Vec::with_capacity(alg.size());
    for a in 0..alg.size() {
        let tuple: Vec<usize> = dual.homs.iter().map(|h| h[a]).collect();
        let idx = p
            .index_of(&tuple)
            .ok_or_else(|| Error::NotIso(format!("evaluation at element {a} leaves the product")))?;
        map.push(idx);
    }
    if let Some((a, b)) = first_collision(&map) {
        return Err(Error::NotIso(format!("elements {a} and {b} have the same evaluations")));
    }
    if map.len() != p.size() {
        return Err(Error::NotIso(format!("{} elements but {} evaluation tuples", map.len(), p.size())));
    }
    if !is_homomorphism(alg, &p, &map) {
        return Err(Error::NotIso("evaluation map is not a homomorphism".into()));
    }
    Ok(IsoWitness { map })
}

/// Evaluation `x -> ev_x` into `S'P'(obj)`, verified bijective with equal marks.
pub fn epsilon_prime_check(d: &SemiPrimal, obj: &SetDObject) -> Result<IsoWitness> {
    let p = p_prime(d, obj)?;
    let dual = s_prime(d, &p)?;
    let mut map = Vec::with_capacity(obj.len());
    for x in 0..obj.len() {
        let table: Vec<usize> = (0..p.size()).map(|a| p.coord(a, x)).collect();
        let j = dual
            .point_of(&table)
            .ok_or_else(|| Error::NotIso(format!("ev_{} is not among the homs", obj.point(x))))?;
        if dual.object.mark(j) != obj.mark(x) {
            return Err(Error::NotIso(format!(
                "mark of {} is {} but ev has image {}",
                obj.point(x),
                d.render_sub(obj.mark(x)),
                d.render_sub(dual.object.mark(j))
            )));
        }
        map.push(j);
    }
    if let Some((x, y)) = first_collision(&map) {
        return Err(Error::NotIso(format!("{} and {} evaluate alike", obj.point(x), obj.point(y))));
    }
    if map.len() != dual.object.len() {
        return Err(Error::NotIso(format!("{} points but {} homs", map.len(), dual.object.len())));
    }
    Ok(IsoWitness { map })
}

/// The colimit classes and which original point each one corresponds to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoendWitness {
    /// Members `(subuniverse, point)` of every class.
    pub classes: Vec<Vec<(usize, usize)>>,
    pub point_of_class: Vec<usize>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Glues the copies `V^S C^S(obj)` along the inclusions `S1 <= S2` and marks each class with
/// the meet of its subuniverses. Fails unless the result is the original object.
pub fn coend_reconstruct(d: &SemiPrimal, obj: &SetDObject) -> Result<(SetDObject, CoendWitness)> {
    let subs = d.subalgebras();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut node_id = BTreeMap::new();
    for s in 0..subs.len() {
        for x in c_s(d, s, obj) {
            node_id.insert((s, x), nodes.len());
            nodes.push((s, x));
        }
    }
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    for s1 in 0..subs.len() {
        for s2 in 0..subs.len() {
            if s1 == s2 || !subs.leq(s1, s2) {
                continue;
            }
            // the inclusion C^{s1} -> C^{s2} is the identity on points
            for x in c_s(d, s1, obj) {
                let (a, b) = (node_id[&(s1, x)], node_id[&(s2, x)]);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, &node) in nodes.iter().enumerate() {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(node);
    }
    let mut classes: Vec<Vec<(usize, usize)>> = by_root.into_values().collect();
    classes.sort_by_key(|c| c[0].1);
    let mut point_of_class = Vec::with_capacity(classes.len());
    let mut marking = Vec::with_capacity(classes.len());
    for class in &classes {
        let x = class[0].1;
        if class.iter().any(|&(_, y)| y != x) {
            return Err(Error::check("coend", format!("class of {} mixes points", obj.point(x))));
        }
        let mark = subs.meet_all(class.iter().map(|&(s, _)| s));
        if mark != obj.mark(x) {
            return Err(Error::check(
                "coend",
                format!("class of {} has mark {} instead of {}", obj.point(x), d.render_sub(mark), d.render_sub(obj.mark(x))),
            ));
        }
        point_of_class.push(x);
        marking.push(mark);
    }
    if point_of_class != (0..obj.len()).collect::<Vec<_>>() {
        return Err(Error::check(
            "coend",
            format!("{} classes for {} points", point_of_class.len(), obj.len()),
        ));
    }
    let rebuilt = SetDObject::from_raw(obj.points().to_vec(), marking);
    Ok((rebuilt, CoendWitness { classes, point_of_class }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;

    #[test]
    fn c_s_examples() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let obj = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
        assert_eq!(c_s(&d, 0, &obj), vec![0]);
        assert_eq!(c_s(&d, d.subalgebras().full(), &obj), u_points(&obj));
        let names = vec!["a".to_string(), "b".to_string()];
        let v = v_s(&d, 0, names);
        assert_eq!(c_s(&d, 0, &v), vec![0, 1]);
    }

    #[test]
    fn unit_and_counit_small() {
        let d = SemiPrimal::new(make_lukasiewicz(3)).unwrap();
        let obj = SetDObject::with_marks(&d, vec![0, 1, 0]).unwrap();
        assert_eq!(epsilon_prime_check(&d, &obj).unwrap().map.len(), 3);
        let w = eta_prime_check(&d, d.algebra()).unwrap();
        assert_eq!(w.map, vec![0, 1, 2, 3]);
        assert!(epsilon_prime_check(&d, &SetDObject::empty()).unwrap().map.is_empty());
    }

    #[test]
    fn coend_mixed_marks() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let obj = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
        let (back, w) = coend_reconstruct(&d, &obj).unwrap();
        assert_eq!(back, obj);
        // the low point appears in both copies, the high one only in the full copy
        assert_eq!(w.classes[0].len(), 2);
        assert_eq!(w.classes[1].len(), 1);
        assert!(coend_reconstruct(&d, &SetDObject::empty()).unwrap().0.is_empty());
    }
}
