use mvcl_core::algebra::{make_boolean, make_lukasiewicz, make_moisil, Algebra, FiniteAlgebra, SemiPrimal};
use mvcl_core::duality::{p_prime, SetDObject};
use mvcl_core::lift::{SetFunctor, SizeCaps};
use mvcl_core::verify::{
    corpus_objects, delta_classical, delta_prime, delta_top, lemma_tau_check, one_step_injectivity_check,
    presentation_bijection_check, transpose_expressivity_check, verify_all, CorpusConfig, PresentationMode,
};

fn semi(alg: FiniteAlgebra) -> SemiPrimal {
    SemiPrimal::new(alg).unwrap()
}

#[test]
fn classical_box_of_the_whole_set_is_top() {
    let two = semi(make_boolean());
    let caps = SizeCaps::default();
    for n in 0..=3 {
        let c = delta_classical(SetFunctor::Powerset, n, &caps).unwrap();
        let whole = c.base.characteristic((1 << n) - 1);
        assert_eq!(c.apply(c.generator(&two, whole).unwrap()), c.codomain.top());
    }
}

#[test]
fn classical_neighborhood_box_hits_half_the_collections() {
    let two = semi(make_boolean());
    let c = delta_classical(SetFunctor::Neighborhood, 1, &SizeCaps::default()).unwrap();
    let img = c.apply(c.generator(&two, c.base.characteristic(1)).unwrap());
    // oracle: collections over P({x}) containing {x}, i.e. bit 1 set
    let expected: Vec<usize> = c.lifted_obj.elements.iter().map(|&z| (z >> 1 & 1) as usize).collect();
    assert_eq!(c.codomain.tuple(img), expected);
    assert_eq!(expected.iter().sum::<usize>(), 2);
}

#[test]
fn empty_neighborhood_gives_top() {
    let d = semi(make_lukasiewicz(2));
    let c = delta_top(&d, SetFunctor::Powerset, 2, &SizeCaps::default()).unwrap();
    let empty = c.lifted_obj.position(0).unwrap();
    for a in 0..c.base.size() {
        let img = c.apply(c.generator(&d, a).unwrap());
        assert_eq!(c.codomain.coord(img, empty), d.top());
    }
}

#[test]
fn powerset_component_is_the_pointwise_meet() {
    // oracle computed straight from the tuples of a
    let d = semi(make_lukasiewicz(2));
    let subs = d.subalgebras();
    let obj = SetDObject::with_marks(&d, vec![subs.full(), subs.least().unwrap(), subs.full()]).unwrap();
    let c = delta_prime(&d, SetFunctor::Powerset, &obj, &SizeCaps::default()).unwrap();
    for a in 0..c.base.size() {
        let t = c.base.tuple(a);
        let img = c.codomain.tuple(c.apply(c.generator(&d, a).unwrap()));
        for (j, &z) in c.lifted_obj.elements.iter().enumerate() {
            let meet = (0..3).filter(|&x| z >> x & 1 == 1).map(|x| t[x]).min().unwrap_or(2);
            assert_eq!(img[j], meet);
        }
    }
}

#[test]
fn lifted_components_are_injective() {
    let caps = SizeCaps::default();
    let l2 = semi(make_lukasiewicz(2));
    let l3 = semi(make_lukasiewicz(3));
    for obj in corpus_objects(&l2, 3) {
        assert!(one_step_injectivity_check(&delta_prime(&l2, SetFunctor::Powerset, &obj, &caps).unwrap()).injective);
    }
    for obj in corpus_objects(&l3, 2) {
        assert!(one_step_injectivity_check(&delta_prime(&l3, SetFunctor::Filter, &obj, &caps).unwrap()).injective);
    }
    let top = delta_top(&l3, SetFunctor::Powerset, 2, &caps).unwrap();
    let v = one_step_injectivity_check(&top);
    assert!(v.injective);
    assert_eq!(v.method, "exhaustive");
}

#[test]
fn neighborhood_injectivity_on_large_domains_uses_coordinates() {
    let d = semi(make_lukasiewicz(2));
    let c = delta_top(&d, SetFunctor::Neighborhood, 2, &SizeCaps::default()).unwrap();
    let v = one_step_injectivity_check(&c);
    assert_eq!(v.method, "coordinates");
    assert!(v.injective);
}

#[test]
fn transpose_on_products() {
    let d = semi(make_lukasiewicz(2));
    let caps = SizeCaps::default();
    for obj in corpus_objects(&d, 2) {
        let a = p_prime(&d, &obj).unwrap();
        for f in [SetFunctor::Powerset, SetFunctor::Filter] {
            assert!(transpose_expressivity_check(&d, f, &a, &caps).unwrap().injective);
        }
    }
}

#[test]
fn tau_lemma_matches_brute_force() {
    for alg in [make_lukasiewicz(2), make_lukasiewicz(4), make_moisil(3), make_boolean()] {
        // oracle: a map is valid iff it is the indicator of a principal down-set of D+
        let bot = alg.bottom();
        let plus: Vec<usize> = (0..alg.size()).filter(|&x| x != bot).collect();
        let principal = (0..alg.size())
            .filter(|&e| {
                let set: Vec<bool> = plus.iter().map(|&d| alg.leq(d, e)).collect();
                // distinct e give distinct down-sets
                (0..alg.size()).filter(|&e2| plus.iter().map(|&d| alg.leq(d, e2)).collect::<Vec<_>>() == set).count() == 1
            })
            .count();
        let r = lemma_tau_check(&alg).unwrap();
        assert_eq!(r.valid.len(), principal);
        assert_eq!(r.valid.len(), alg.size());
    }
}

/// Every function from the three generators into Ł2 checked against the box-tau equations.
#[test]
fn presentation_matches_brute_force() {
    let d = semi(make_lukasiewicz(2));
    let full = d.subalgebras().full();
    let obj = SetDObject::with_marks(&d, vec![full]).unwrap();
    let tau = |e: usize, v: usize| if v >= e { 2 } else { 0 };
    let mut brute = Vec::new();
    for code in 0..27usize {
        let f = [code / 9, code / 3 % 3, code % 3];
        let top_ok = f[2] == 2;
        let meet_ok = (0..3).all(|a| (0..3).all(|b| f[a.min(b)] == f[a].min(f[b])));
        let tau_ok = [1, 2].iter().all(|&e| (0..3).all(|a| f[tau(e, a)] == tau(e, f[a])));
        if top_ok && meet_ok && tau_ok {
            brute.push(f.to_vec());
        }
    }
    let r = presentation_bijection_check(&d, SetFunctor::Powerset, &obj, full, PresentationMode::BoxTau, &SizeCaps::default()).unwrap();
    assert_eq!(r.lifted.functions, brute);
    assert_eq!(r.expected, 2);
}

#[test]
fn diamond_functions_mirror_box_functions() {
    let d = semi(make_lukasiewicz(2));
    let full = d.subalgebras().full();
    let obj = SetDObject::with_marks(&d, vec![full]).unwrap();
    let caps = SizeCaps::default();
    let boxes = presentation_bijection_check(&d, SetFunctor::Powerset, &obj, full, PresentationMode::BoxTau, &caps).unwrap();
    let diamonds =
        presentation_bijection_check(&d, SetFunctor::Powerset, &obj, full, PresentationMode::DiamondKappa, &caps).unwrap();
    // f -> neg . f . neg
    let mut mirrored: Vec<Vec<usize>> =
        boxes.lifted.functions.iter().map(|f| (0..3).map(|a| 2 - f[2 - a]).collect()).collect();
    mirrored.sort();
    assert_eq!(diamonds.lifted.functions, mirrored);
}

#[test]
fn default_corpus_passes() {
    let report = verify_all(&make_lukasiewicz(2), &CorpusConfig::default());
    let failed: Vec<_> = report.iter().filter(|v| !v.pass).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert!(report.len() > 100);
}
