use crate::algebra::{is_homomorphism, make_boolean, Algebra, SemiPrimal};
use crate::duality::{epsilon_prime_check, p_prime, s_prime, v_s, Dual, SetDMorphism, SetDObject, VarietyAlgebra};
use crate::error::{Error, Result};
use crate::lift::{lift_object, map_element, LiftedObject, SetFunctor, SizeCaps};
use serde::Serialize;
use std::collections::HashMap;

/// Domains up to this size are checked element by element.
pub const EXHAUSTIVE_DOMAIN_LIMIT: usize = 1 << 20;

/// The classical rule deciding whether `z` lies in the one-step image of the box of `y`.
///
/// Powerset: `z ⊆ y`. Neighborhood and filter: `y ∈ z`.
pub fn box_rule(f: SetFunctor, y: u64, z: u64) -> bool {
    match f {
        SetFunctor::Powerset => z & !y == 0,
        SetFunctor::Neighborhood | SetFunctor::Filter => z >> y & 1 == 1,
    }
}

/// A one-step component between two products, acting by reindexing.
///
/// `map(a)` at codomain point `j` is `a` at domain point `index_map[j]`.
#[derive(Debug, Clone)]
pub struct OneStepComponent {
    pub name: String,
    pub functor: SetFunctor,
    pub domain: VarietyAlgebra,
    pub codomain: VarietyAlgebra,
    pub index_map: Vec<usize>,
    /// `P'(obj)`.
    pub base: VarietyAlgebra,
    /// `S'(P'(obj))`.
    pub dual: Dual,
    /// `T'S'P'(obj)` and `T'(obj)`.
    pub lifted_dual: LiftedObject,
    pub lifted_obj: LiftedObject,
}

impl OneStepComponent {
    pub fn apply(&self, a: usize) -> usize {
        let tuple: Vec<usize> = self.index_map.iter().map(|&i| self.domain.coord(a, i)).collect();
        self.codomain.index_of(&tuple).expect("reindexing along a marked-set morphism stays in the product")
    }

    /// The generator `box' a` of the domain, for `a` in `P'(obj)`: at `W` it is the join of
    /// all `d` above the bottom whose cut `{u : u(a) >= d}` passes the box rule.
    pub fn generator(&self, d: &SemiPrimal, a: usize) -> Result<usize> {
        let cuts: Vec<(usize, u64)> = d
            .d_plus()
            .iter()
            .map(|&e| {
                let cut = (0..self.dual.homs.len()).filter(|&u| d.leq(e, self.dual.homs[u][a])).fold(0u64, |m, u| m | 1 << u);
                (e, cut)
            })
            .collect();
        let tuple: Vec<usize> = self
            .lifted_dual
            .elements
            .iter()
            .map(|&w| d.algebra().join_all(cuts.iter().filter(|(_, c)| box_rule(self.functor, *c, w)).map(|&(e, _)| e)))
            .collect();
        self.domain.index_of(&tuple).ok_or_else(|| {
            Error::check(&self.name, format!("box' of {} has a value outside the lifted marking", self.base.render(a)))
        })
    }
}

/// `delta'` at `P'(obj)`: reindexing along `T(eps')`, from `L'P'(obj) = P'T'S'P'(obj)` to `P'T'(obj)`.
pub fn delta_prime(d: &SemiPrimal, f: SetFunctor, obj: &SetDObject, caps: &SizeCaps) -> Result<OneStepComponent> {
    let base = p_prime(d, obj)?;
    let dual = s_prime(d, &base)?;
    let eps = epsilon_prime_check(d, obj)?;
    let lifted_dual = lift_object(d, f, &dual.object, caps)?;
    let lifted_obj = lift_object(d, f, obj, caps)?;
    let domain = p_prime(d, &lifted_dual.object)?;
    let codomain = p_prime(d, &lifted_obj.object)?;
    let index_map = lifted_obj
        .elements
        .iter()
        .map(|&z| lifted_dual.position(map_element(f, &eps.map, dual.object.len(), z)).expect("T(eps') lands in T'S'P'"))
        .collect::<Vec<_>>();
    // T(eps') must be a marked-set morphism for the reindexing to be well defined
    SetDMorphism::new(d, lifted_obj.object.clone(), lifted_dual.object.clone(), index_map.clone())
        .map_err(|e| Error::check("delta'", format!("T(eps') is not a morphism: {e}")))?;
    Ok(OneStepComponent {
        name: format!("delta' ({f}, {} points)", obj.len()),
        functor: f,
        domain,
        codomain,
        index_map,
        base,
        dual,
        lifted_dual,
        lifted_obj,
    })
}

/// The classical component: the two-element base with `n` points.
pub fn delta_classical(f: SetFunctor, n: usize, caps: &SizeCaps) -> Result<OneStepComponent> {
    let two = SemiPrimal::new(make_boolean())?;
    let obj = SetDObject::with_marks(&two, vec![two.subalgebras().full(); n])?;
    let mut c = delta_prime(&two, f, &obj, caps)?;
    c.name = format!("delta ({f}, {n} points)");
    Ok(c)
}

/// `delta'` at the constant top marking of a plain `n`-point set.
pub fn delta_top(d: &SemiPrimal, f: SetFunctor, n: usize, caps: &SizeCaps) -> Result<OneStepComponent> {
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let obj = v_s(d, d.subalgebras().full(), names);
    let mut c = delta_prime(d, f, &obj, caps)?;
    c.name = format!("delta-top ({f}, {n} points)");
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub injective: bool,
    /// `exhaustive` or `coordinates`.
    pub method: &'static str,
    pub domain_size: usize,
    /// Two domain elements with the same image.
    pub collision: Option<(usize, usize)>,
}

/// Injectivity over the whole domain when it is small enough. Larger domains use the exact
/// criterion for reindexing maps: every domain point must be hit, since all factors have at
/// least two elements.
pub fn one_step_injectivity_check(c: &OneStepComponent) -> InjectivityVerdict {
    let size = c.domain.size();
    if size <= EXHAUSTIVE_DOMAIN_LIMIT {
        let mut seen = HashMap::with_capacity(size);
        for a in 0..size {
            if let Some(&b) = seen.get(&c.apply(a)) {
                return InjectivityVerdict { injective: false, method: "exhaustive", domain_size: size, collision: Some((b, a)) };
            }
            seen.insert(c.apply(a), a);
        }
        return InjectivityVerdict { injective: true, method: "exhaustive", domain_size: size, collision: None };
    }
    let mut hit = vec![false; c.lifted_dual.elements.len()];
    for &i in &c.index_map {
        hit[i] = true;
    }
    let collision = hit.iter().position(|h| !h).map(|missed| {
        let bot = c.domain.bottom();
        let mut t = c.domain.tuple(bot);
        t[missed] = c.domain.base().top();
        (bot, c.domain.index_of(&t).expect("top lies in every factor"))
    });
    InjectivityVerdict { injective: collision.is_none(), method: "coordinates", domain_size: size, collision }
}

/// Checks `delta'(box' a)` at every `Z` against the threshold formula on `a` itself and, for
/// the powerset, against the meet of `a` over `Z`. Returns the number of generators checked.
pub fn delta_generator_check(d: &SemiPrimal, c: &OneStepComponent) -> Result<usize> {
    let f = c.functor;
    let n = c.base.index().len();
    for a in 0..c.base.size() {
        let image = c.apply(c.generator(d, a)?);
        for (j, &z) in c.lifted_obj.elements.iter().enumerate() {
            let got = c.codomain.coord(image, j);
            let by_threshold = d.algebra().join_all(d.d_plus().iter().copied().filter(|&e| {
                let cut = (0..n).filter(|&x| d.leq(e, c.base.coord(a, x))).fold(0u64, |m, x| m | 1 << x);
                box_rule(f, cut, z)
            }));
            if got != by_threshold {
                return Err(Error::check(
                    &c.name,
                    format!("at a = {}, Z = {}: {} versus threshold form {}", c.base.render(a), c.lifted_obj.object.point(j), d.label(got), d.label(by_threshold)),
                ));
            }
            if f == SetFunctor::Powerset {
                let by_meet = d.algebra().meet_all((0..n).filter(|&x| z >> x & 1 == 1).map(|x| c.base.coord(a, x)));
                if got != by_meet {
                    return Err(Error::check(
                        &c.name,
                        format!("at a = {}, Z = {}: {} versus meet form {}", c.base.render(a), c.lifted_obj.object.point(j), d.label(got), d.label(by_meet)),
                    ));
                }
            }
        }
    }
    Ok(c.base.size())
}

/// Exhaustive hom check, for small domains.
pub fn component_is_homomorphism(c: &OneStepComponent) -> Result<bool> {
    let n = c.domain.size();
    let cells = (n as u128).pow(2);
    if cells > 1 << 24 {
        return Err(Error::SizeBound { what: "hom check of a component".into(), needed: cells, limit: 1 << 24 });
    }
    let map: Vec<usize> = (0..n).map(|a| c.apply(a)).collect();
    Ok(is_homomorphism(&c.domain, &c.codomain, &map))
}

/// On crisp generators `delta'` agrees with the classical component for the same points:
/// `delta'(box' chi_Y)` is crisp and equals `chi` of `{Z : rule(Y, Z)}`, which is also what the
/// classical component (computed over the two-element base) gives.
pub fn skeleton_agreement_check(d: &SemiPrimal, c: &OneStepComponent, caps: &SizeCaps) -> Result<usize> {
    let n = c.base.index().len();
    let classical = delta_classical(c.functor, n, caps)?;
    let two = SemiPrimal::new(make_boolean())?;
    if classical.lifted_obj.elements != c.lifted_obj.elements {
        return Err(Error::check(&c.name, "T(X) differs between the lifted and classical components"));
    }
    for y in 0..1u64 << n {
        let chi = c.base.characteristic(y);
        let image = c.apply(c.generator(d, chi)?);
        let classical_image = classical.apply(classical.generator(&two, classical.base.characteristic(y))?);
        for (j, &z) in c.lifted_obj.elements.iter().enumerate() {
            let v = c.codomain.coord(image, j);
            if !d.is_crisp(v) {
                return Err(Error::check(&c.name, format!("image of a crisp generator is {} at {}", d.label(v), c.lifted_obj.object.point(j))));
            }
            let lifted_bit = v == d.top();
            let classical_bit = classical.codomain.coord(classical_image, j) == two.top();
            if lifted_bit != box_rule(c.functor, y, z) || lifted_bit != classical_bit {
                return Err(Error::check(
                    &c.name,
                    format!("skeleton disagreement at Y = {y:#b}, Z = {}", c.lifted_obj.object.point(j)),
                ));
            }
        }
    }
    Ok(1 << n)
}

/// Naturality along a morphism `h: obj1 -> obj2`: both paths around the square reindex along
/// maps `T(obj1) -> T'S'P'(obj2)`, which must coincide. Small domains are also compared
/// element by element.
pub fn naturality_check(d: &SemiPrimal, f: SetFunctor, h: &SetDMorphism, caps: &SizeCaps) -> Result<()> {
    let c1 = delta_prime(d, f, &h.source, caps)?;
    let c2 = delta_prime(d, f, &h.target, caps)?;
    let (p1, p2) = (&c1.base, &c2.base);
    // P'h: P'(obj2) -> P'(obj1) as a table
    let ph: Vec<usize> = (0..p2.size())
        .map(|b| {
            let t: Vec<usize> = h.map.iter().map(|&y| p2.coord(b, y)).collect();
            p1.index_of(&t).expect("precomposition with a morphism stays in the product")
        })
        .collect();
    // S'P'h: S'P'(obj1) -> S'P'(obj2), u -> u . P'h
    let sph: Vec<usize> = c1
        .dual
        .homs
        .iter()
        .map(|u| {
            let table: Vec<usize> = ph.iter().map(|&a| u[a]).collect();
            c2.dual.point_of(&table).ok_or_else(|| Error::check("naturality", "u . P'h is not a hom"))
        })
        .collect::<Result<_>>()?;
    let eps1 = epsilon_prime_check(d, &h.source)?;
    let eps2 = epsilon_prime_check(d, &h.target)?;
    let m2 = c2.dual.object.len();
    let left: Vec<usize> = eps1.map.iter().map(|&u| sph[u]).collect();
    let right: Vec<usize> = h.map.iter().map(|&y| eps2.map[y]).collect();
    for &z in &c1.lifted_obj.elements {
        let (l, r) = (map_element(f, &left, m2, z), map_element(f, &right, m2, z));
        if l != r {
            return Err(Error::check("naturality", format!("paths differ at {}", crate::lift::render_element(f, h.source.points(), z))));
        }
    }
    // element-wise on small instances: delta1 . L'P'h = P'T'h . delta2
    if c2.domain.size() <= 4096 {
        // L'P'h reindexes along T(S'P'h): T'S'P'(obj1) -> T'S'P'(obj2)
        let tsph: Vec<usize> = c1
            .lifted_dual
            .elements
            .iter()
            .map(|&w| c2.lifted_dual.position(map_element(f, &sph, m2, w)).expect("T maps into T"))
            .collect();
        // P'T'h reindexes along T(h): T(obj1) -> T(obj2)
        let th: Vec<usize> = c1
            .lifted_obj
            .elements
            .iter()
            .map(|&z| c2.lifted_obj.position(map_element(f, &h.map, h.target.len(), z)).expect("T maps into T"))
            .collect();
        for alpha in 0..c2.domain.size() {
            let moved: Vec<usize> = tsph.iter().map(|&i| c2.domain.coord(alpha, i)).collect();
            let lhs = c1.apply(c1.domain.index_of(&moved).ok_or_else(|| Error::check("naturality", "L'P'h leaves L'P'(obj1)"))?);
            let beta = c2.apply(alpha);
            let moved: Vec<usize> = th.iter().map(|&i| c2.codomain.coord(beta, i)).collect();
            let rhs = c1.codomain.index_of(&moved).ok_or_else(|| Error::check("naturality", "P'T'h leaves P'T'(obj1)"))?;
            if lhs != rhs {
                return Err(Error::check("naturality", format!("square fails at element {alpha}")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_lukasiewicz;

    fn l2() -> SemiPrimal {
        SemiPrimal::new(make_lukasiewicz(2)).unwrap()
    }

    #[test]
    fn classical_powerset_one_point() {
        let caps = SizeCaps::default();
        let c = delta_classical(SetFunctor::Powerset, 1, &caps).unwrap();
        let two = SemiPrimal::new(make_boolean()).unwrap();
        // box {x}: both subsets of {x}; box {}: only the empty set
        let full = c.apply(c.generator(&two, c.base.characteristic(1)).unwrap());
        assert_eq!(c.codomain.tuple(full), vec![1, 1]);
        let empty = c.apply(c.generator(&two, c.base.characteristic(0)).unwrap());
        assert_eq!(c.codomain.tuple(empty), vec![1, 0]);
    }

    #[test]
    fn classical_neighborhood_one_point() {
        let caps = SizeCaps::default();
        let c = delta_classical(SetFunctor::Neighborhood, 1, &caps).unwrap();
        let two = SemiPrimal::new(make_boolean()).unwrap();
        let img = c.apply(c.generator(&two, c.base.characteristic(1)).unwrap());
        assert_eq!(c.codomain.tuple(img).iter().filter(|&&v| v == 1).count(), 2);
    }

    #[test]
    fn powerset_singleton_half() {
        let d = l2();
        let caps = SizeCaps::default();
        let c = delta_top(&d, SetFunctor::Powerset, 1, &caps).unwrap();
        assert_eq!(c.domain.size(), 6);
        let half = c.base.index_of(&[1]).unwrap();
        let img = c.apply(c.generator(&d, half).unwrap());
        // Z = {} gives the top, Z = {x} gives 1/2
        assert_eq!(c.codomain.tuple(img), vec![2, 1]);
        assert!(one_step_injectivity_check(&c).injective);
        assert!(component_is_homomorphism(&c).unwrap());
        delta_generator_check(&d, &c).unwrap();
        skeleton_agreement_check(&d, &c, &caps).unwrap();
    }

    #[test]
    fn empty_set_component() {
        let d = l2();
        let c = delta_top(&d, SetFunctor::Powerset, 0, &SizeCaps::default()).unwrap();
        assert!(one_step_injectivity_check(&c).injective);
    }

    #[test]
    fn filter_matches_frame_semantics() {
        // x sees the filter of supersets of {y}; phi = (0, 1/2)
        let d = l2();
        let caps = SizeCaps::default();
        let c = delta_top(&d, SetFunctor::Filter, 2, &caps).unwrap();
        let a = c.base.index_of(&[0, 1]).unwrap();
        let img = c.apply(c.generator(&d, a).unwrap());
        let up_y = (0..4u64).filter(|&y| y & 0b10 == 0b10).fold(0u64, |m, y| m | 1 << y);
        let j = c.lifted_obj.position(up_y).unwrap();
        assert_eq!(c.codomain.coord(img, j), 1);
    }

    #[test]
    fn naturality_on_a_collapse() {
        let d = l2();
        let caps = SizeCaps::default();
        let src = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
        let dst = SetDObject::with_marks(&d, vec![0]).unwrap();
        let h = SetDMorphism::new(&d, src, dst, vec![0, 0]).unwrap();
        for f in SetFunctor::ALL {
            naturality_check(&d, f, &h, &caps).unwrap();
        }
    }
}
