use super::adjunction::{c_s, epsilon_prime_check, eta_prime_check, v_s};
use super::boolean::{boolean_skeleton, partition_form_elements, partition_form_op, BooleanSkeleton, PowersetAlgebra};
use super::homs::homomorphisms;
use super::object::SetDObject;
use super::variety::{p_prime, s_prime, Dual};
use crate::algebra::{make_boolean, Algebra, SemiPrimal};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

const TUPLE_LIMIT: u128 = 1 << 22;

/// Sizes of everything the isomorphism checks went through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaIsosReport {
    /// `(subuniverse, elements)` for each `Theta^S`.
    pub theta: Vec<(usize, usize)>,
    /// `(subuniverse, subsets)` for each `Psi^S`.
    pub psi: Vec<(usize, usize)>,
    pub phi_points: usize,
    pub counit_identity_points: usize,
    pub unit_identity_elements: usize,
}

/// Builds `Theta^S`, `Psi^S` and `Phi` explicitly, checks each is a bijective hom, and checks
/// both composite identities pointwise. `obj` drives `Theta`, `Psi` and the counit identity;
/// `alg` drives `Phi` and the unit identity.
pub fn lemma_isos_check(d: &SemiPrimal, obj: &SetDObject, alg: &dyn Algebra) -> Result<LemmaIsosReport> {
    let subs = d.subalgebras();
    let mut theta = Vec::new();
    let mut psi = Vec::new();
    for s in 0..subs.len() {
        theta.push((s, check_theta(d, s, obj.len())?));
        psi.push((s, check_psi(d, s, obj)?));
    }
    let phi = PhiData::build(d, alg)?;
    let counit_identity_points = check_counit_identity(d, obj)?;
    let unit_identity_elements = check_unit_identity(d, alg, &phi)?;
    Ok(LemmaIsosReport { theta, psi, phi_points: phi.dual.object.len(), counit_identity_points, unit_identity_elements })
}

fn check_theta(d: &SemiPrimal, s: usize, n: usize) -> Result<usize> {
    let s_elems = d.subalgebras().elements(s);
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let dom = p_prime(d, &v_s(d, s, names))?;
    let parts = partition_form_elements(&s_elems, n)?;
    let part_index: HashMap<&[u64], usize> = parts.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let top = d.top();
    let theta_of = |a: usize| -> Vec<u64> {
        s_elems
            .iter()
            .map(|&e| (0..n).filter(|&x| d.big_t(e, dom.coord(a, x)) == top).fold(0u64, |m, x| m | 1 << x))
            .collect()
    };
    let images: Vec<Vec<u64>> = (0..dom.size()).map(theta_of).collect();
    let mut hit = vec![false; parts.len()];
    for (a, img) in images.iter().enumerate() {
        let j = *part_index.get(img.as_slice()).ok_or_else(|| {
            Error::check(format!("Theta^{}", d.render_sub(s)), format!("image of {} is not a partition", dom.render(a)))
        })?;
        if hit[j] {
            return Err(Error::check(format!("Theta^{}", d.render_sub(s)), format!("{} collides", dom.render(a))));
        }
        hit[j] = true;
    }
    if images.len() != parts.len() {
        return Err(Error::check(
            format!("Theta^{}", d.render_sub(s)),
            format!("{} elements but {} partitions", images.len(), parts.len()),
        ));
    }
    let size = dom.size();
    for op in 0..dom.op_count() {
        let k = dom.arity(op);
        let total = (size as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if total > TUPLE_LIMIT {
            return Err(Error::SizeBound { what: "Theta hom check".into(), needed: total, limit: TUPLE_LIMIT });
        }
        let mut args = vec![0usize; k];
        for mut code in 0..total as usize {
            for j in (0..k).rev() {
                args[j] = code % size;
                code /= size;
            }
            let lhs = &images[dom.apply(op, &args)];
            let blocks: Vec<Vec<u64>> = args.iter().map(|&a| images[a].clone()).collect();
            let rhs = partition_form_op(d, &s_elems, n, op, &blocks);
            if *lhs != rhs {
                let shown: Vec<String> = args.iter().map(|&a| dom.render(a)).collect();
                return Err(Error::check(
                    format!("Theta^{}", d.render_sub(s)),
                    format!("{} not preserved at [{}]", dom.op_name(op), shown.join(", ")),
                ));
            }
        }
    }
    Ok(size)
}

fn check_psi(d: &SemiPrimal, s: usize, obj: &SetDObject) -> Result<usize> {
    let name = format!("Psi^{}", d.render_sub(s));
    let p = p_prime(d, obj)?;
    let dual = s_prime(d, &p)?;
    let cs = c_s(d, s, obj);
    let cu = c_s(d, s, &dual.object);
    let k = cs.len();
    if cu.len() != k {
        return Err(Error::check(&name, format!("{} points below S but {} dual points", k, cu.len())));
    }
    if k > 12 {
        return Err(Error::SizeBound { what: "Psi subsets".into(), needed: 1 << k, limit: 1 << 12 });
    }
    let top = d.top();
    let full = (1usize << k) - 1;
    let psi: Vec<usize> = (0..=full)
        .map(|y| {
            let mask = (0..k).filter(|&i| y >> i & 1 == 1).fold(0u64, |m, i| m | 1 << cs[i]);
            let chi = p.characteristic(mask);
            (0..k).filter(|&j| dual.homs[cu[j]][chi] == top).fold(0, |m, j| m | 1 << j)
        })
        .collect();
    let mut seen = vec![false; full + 1];
    for (y, &img) in psi.iter().enumerate() {
        if seen[img] {
            return Err(Error::check(&name, format!("subset {y:#b} collides")));
        }
        seen[img] = true;
    }
    if psi[0] != 0 || psi[full] != full {
        return Err(Error::check(&name, "bounds not preserved"));
    }
    for y in 0..=full {
        if psi[full & !y] != full & !psi[y] {
            return Err(Error::check(&name, format!("complement not preserved at {y:#b}")));
        }
        for z in 0..=full {
            if psi[y & z] != psi[y] & psi[z] || psi[y | z] != psi[y] | psi[z] {
                return Err(Error::check(&name, format!("lattice operations not preserved at {y:#b}, {z:#b}")));
            }
        }
    }
    Ok(full + 1)
}

/// The restriction map from `S'(A)` onto the homs `Sk(A) -> 2`.
struct PhiData {
    skeleton: BooleanSkeleton,
    dual: Dual,
    /// Independently enumerated Boolean homs from the skeleton.
    ultra: Vec<Vec<usize>>,
    /// `phi[u]` indexes `ultra`.
    phi: Vec<usize>,
}

impl PhiData {
    fn build(d: &SemiPrimal, alg: &dyn Algebra) -> Result<PhiData> {
        let skeleton = boolean_skeleton(d, alg)?;
        let dual = s_prime(d, alg)?;
        let ultra = homomorphisms(&skeleton.algebra, &make_boolean())?;
        let mut phi = Vec::with_capacity(dual.homs.len());
        for (u, h) in dual.homs.iter().enumerate() {
            let mut restricted = Vec::with_capacity(skeleton.embedding.len());
            for &a in &skeleton.embedding {
                let v = h[a];
                if !d.is_crisp(v) {
                    return Err(Error::check("Phi", format!("u{u} takes value {} on the skeleton", d.label(v))));
                }
                restricted.push(usize::from(v == d.top()));
            }
            let w = ultra
                .binary_search(&restricted)
                .map_err(|_| Error::check("Phi", format!("restriction of u{u} is not a Boolean hom")))?;
            if phi.contains(&w) {
                return Err(Error::check("Phi", format!("restriction of u{u} collides")));
            }
            phi.push(w);
        }
        if phi.len() != ultra.len() {
            return Err(Error::check("Phi", format!("{} homs but {} ultrafilters", phi.len(), ultra.len())));
        }
        Ok(PhiData { skeleton, dual, ultra, phi })
    }
}

// counit of the Stone side against the composite through Psi and Phi
fn check_counit_identity(d: &SemiPrimal, obj: &SetDObject) -> Result<usize> {
    let n = obj.len();
    let pow = PowersetAlgebra::new(n)?;
    let ultra = homomorphisms(&pow, &make_boolean())?;
    let p = p_prime(d, obj)?;
    let dual = s_prime(d, &p)?;
    let eps = epsilon_prime_check(d, obj)?;
    for x in 0..n {
        let principal: Vec<&Vec<usize>> = ultra.iter().filter(|h| h[1 << x] == 1).collect();
        if principal.len() != 1 {
            return Err(Error::check("counit identity", format!("{} ultrafilters contain {{{}}}", principal.len(), obj.point(x))));
        }
        let u = &dual.homs[eps.map[x]];
        for y in 0..pow.size() {
            let rhs = usize::from(u[p.characteristic(y as u64)] == d.top());
            if principal[0][y] != rhs {
                return Err(Error::check(
                    "counit identity",
                    format!("at {} the sides differ on subset {y:#b}", obj.point(x)),
                ));
            }
        }
    }
    Ok(n)
}

// skeleton of the unit against the composite through the Stone unit, Phi and Psi
fn check_unit_identity(d: &SemiPrimal, alg: &dyn Algebra, phi: &PhiData) -> Result<usize> {
    let eta = eta_prime_check(d, alg)?;
    let p = p_prime(d, &phi.dual.object)?;
    let sk_p = boolean_skeleton(d, &p)?;
    for (i, &a) in phi.skeleton.embedding.iter().enumerate() {
        let lhs = sk_p
            .position(eta.map[a])
            .ok_or_else(|| Error::check("unit identity", format!("eta of #{a} is not crisp")))?;
        let y = (0..phi.dual.homs.len())
            .filter(|&u| phi.ultra[phi.phi[u]][i] == 1)
            .fold(0u64, |m, u| m | 1 << u);
        let rhs = sk_p.position(p.characteristic(y)).expect("characteristic tuples are crisp");
        if lhs != rhs {
            return Err(Error::check("unit identity", format!("sides differ at #{a}")));
        }
    }
    Ok(phi.skeleton.embedding.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::*;

    #[test]
    fn luk2_mixed_pair() {
        let d = SemiPrimal::new(make_lukasiewicz(2)).unwrap();
        let obj = SetDObject::with_marks(&d, vec![1, 0]).unwrap();
        let p = p_prime(&d, &obj).unwrap();
        let r = lemma_isos_check(&d, &obj, &p).unwrap();
        assert_eq!(r.phi_points, 2);
        assert_eq!(r.unit_identity_elements, 4);
        // Theta at the full subuniverse covers 3^2 functions
        assert_eq!(r.theta.last().unwrap().1, 9);
    }

    #[test]
    fn boolean_base_degenerates() {
        let d = SemiPrimal::new(make_boolean()).unwrap();
        let obj = SetDObject::with_marks(&d, vec![0, 0]).unwrap();
        let p = p_prime(&d, &obj).unwrap();
        let r = lemma_isos_check(&d, &obj, &p).unwrap();
        assert_eq!(r.theta, vec![(0, 4)]);
        assert_eq!(r.psi, vec![(0, 4)]);
    }

    #[test]
    fn luk3_singleton() {
        let d = SemiPrimal::new(make_lukasiewicz(3)).unwrap();
        let obj = SetDObject::with_marks(&d, vec![d.subalgebras().full()]).unwrap();
        lemma_isos_check(&d, &obj, d.algebra()).unwrap();
    }
}
