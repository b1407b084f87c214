use mvcl_core::algebra::{
    is_homomorphism, make_lukasiewicz, make_moisil, Algebra, FiniteAlgebra, SemiPrimal,
};
use mvcl_core::duality::{
    boolean_skeleton, coend_reconstruct, epsilon_prime_check, eta_prime_check, homomorphisms, k_s, p_prime,
    s_prime, SetDObject,
};
use mvcl_core::lift::{apply_functor, lift_object, map_element, SetFunctor, SizeCaps};
use mvcl_core::logic::{
    behavioral_quotient, bisimilarity_on, evaluate, parse_formula, print_formula, random_kripke_model,
    theory_partition_on, Formula,
};
use mvcl_core::verify::{delta_prime, one_step_injectivity_check};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn bases() -> &'static [SemiPrimal] {
    static BASES: OnceLock<Vec<SemiPrimal>> = OnceLock::new();
    BASES.get_or_init(|| {
        [make_lukasiewicz(2), make_lukasiewicz(3), make_moisil(2)]
            .into_iter()
            .map(|a| SemiPrimal::new(a).unwrap())
            .collect()
    })
}

fn l2() -> &'static SemiPrimal {
    &bases()[0]
}

/// (base index, marking) with at most `max` points.
fn object(max: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..bases().len()).prop_flat_map(move |b| {
        let subs = bases()[b].subalgebras().len();
        (Just(b), prop::collection::vec(0..subs, 0..=max))
    })
}

fn formula(d: &'static SemiPrimal) -> impl Strategy<Value = Formula> {
    let alg: &'static FiniteAlgebra = d.algebra();
    let leaf = prop_oneof![
        prop::sample::select(vec!["p", "q"]).prop_map(Formula::var),
        prop::sample::select(vec![d.bottom(), d.top()]).prop_map(Formula::Const),
    ];
    leaf.prop_recursive(5, 48, 2, move |inner| {
        let unary: Vec<usize> = (0..alg.operations().len()).filter(|&o| alg.arity(o) == 1).collect();
        let binary: Vec<usize> = (0..alg.operations().len()).filter(|&o| alg.arity(o) == 2).collect();
        prop_oneof![
            (prop::sample::select(unary), inner.clone()).prop_map(|(o, g)| Formula::Op(o, vec![g])),
            (prop::sample::select(binary), inner.clone(), inner.clone()).prop_map(|(o, g, h)| Formula::Op(o, vec![g, h])),
            (prop::sample::select(d.d_plus().to_vec()), inner.clone()).prop_map(|(e, g)| Formula::Tau(e, Box::new(g))),
            (prop::sample::select(d.d_minus().to_vec()), inner.clone()).prop_map(|(e, g)| Formula::Kappa(e, Box::new(g))),
            (0..d.size(), inner.clone()).prop_map(|(e, g)| Formula::Tcap(e, Box::new(g))),
            inner.clone().prop_map(|g| Formula::Box(Box::new(g))),
            inner.clone().prop_map(|g| Formula::Diamond(Box::new(g))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_and_counit_are_isomorphisms((b, marks) in object(3)) {
        let d = &bases()[b];
        let obj = SetDObject::with_marks(d, marks).unwrap();
        let a = p_prime(d, &obj).unwrap();
        prop_assert!(eta_prime_check(d, &a).is_ok());
        prop_assert!(epsilon_prime_check(d, &obj).is_ok());
        prop_assert_eq!(s_prime(d, &a).unwrap().object.len(), obj.len());
    }

    #[test]
    fn skeleton_is_the_powerset((b, marks) in object(3)) {
        let d = &bases()[b];
        let obj = SetDObject::with_marks(d, marks).unwrap();
        let a = p_prime(d, &obj).unwrap();
        let sk = boolean_skeleton(d, &a).unwrap();
        prop_assert_eq!(sk.algebra.size(), 1 << obj.len());
        // the full-mark part of the dual has one point per point of the object
        let k = k_s(d, d.subalgebras().full(), &a).unwrap();
        prop_assert_eq!(1usize << k.points(), sk.algebra.size());
    }

    #[test]
    fn coend_recovers_the_object((b, marks) in object(3)) {
        let d = &bases()[b];
        let obj = SetDObject::with_marks(d, marks).unwrap();
        let (back, _) = coend_reconstruct(d, &obj).unwrap();
        prop_assert_eq!(back.marking(), obj.marking());
    }

    #[test]
    fn hom_composites_are_homs((b, marks) in object(2)) {
        let d = &bases()[b];
        let obj = SetDObject::with_marks(d, marks).unwrap();
        let a = p_prime(d, &obj).unwrap();
        let to_d = homomorphisms(&a, d.algebra()).unwrap();
        let ends = homomorphisms(d.algebra(), d.algebra()).unwrap();
        for h in &to_d {
            for e in &ends {
                let comp: Vec<usize> = h.iter().map(|&v| e[v]).collect();
                prop_assert!(is_homomorphism(&a, d.algebra(), &comp));
            }
        }
    }

    #[test]
    fn functor_laws(n in 0usize..4, m in 1usize..4, f_idx in 0usize..3, seed: u64) {
        let f = SetFunctor::ALL[f_idx];
        prop_assume!(f != SetFunctor::Neighborhood || (n <= 3 && m <= 3));
        let caps = SizeCaps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<usize> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..m)).collect();
        let h: Vec<usize> = (0..m).map(|_| rand::Rng::gen_range(&mut rng, 0..m)).collect();
        let id: Vec<usize> = (0..n).collect();
        let hg: Vec<usize> = g.iter().map(|&x| h[x]).collect();
        for z in apply_functor(f, n, &caps).unwrap() {
            prop_assert_eq!(map_element(f, &id, n, z), z);
            prop_assert_eq!(map_element(f, &hg, m, z), map_element(f, &h, m, map_element(f, &g, m, z)));
        }
    }

    #[test]
    fn lifted_marks_are_monotone((b, marks) in object(2), f_idx in 0usize..3) {
        let d = &bases()[b];
        let obj = SetDObject::with_marks(d, marks.clone()).unwrap();
        let lifted = lift_object(d, SetFunctor::ALL[f_idx], &obj, &SizeCaps::default()).unwrap();
        // raising every mark to the top can only raise lifted marks
        let top = SetDObject::with_marks(d, vec![d.subalgebras().full(); marks.len()]).unwrap();
        let lifted_top = lift_object(d, SetFunctor::ALL[f_idx], &top, &SizeCaps::default()).unwrap();
        for i in 0..lifted.elements.len() {
            prop_assert!(d.subalgebras().leq(lifted.object.mark(i), lifted_top.object.mark(i)));
        }
    }

    #[test]
    fn one_step_components_are_injective((b, marks) in object(2), f_idx in 0usize..3) {
        let d = &bases()[b];
        let f = SetFunctor::ALL[f_idx];
        prop_assume!(f != SetFunctor::Neighborhood || marks.len() <= 1);
        let obj = SetDObject::with_marks(d, marks).unwrap();
        let c = delta_prime(d, f, &obj, &SizeCaps::default()).unwrap();
        prop_assert!(one_step_injectivity_check(&c).injective);
    }

    #[test]
    fn print_then_parse(f in formula(l2())) {
        let alg = l2().algebra();
        prop_assert_eq!(parse_formula(&print_formula(&f, alg), alg).unwrap(), f);
    }

    #[test]
    fn values_stay_inside_marks(f in formula(l2()), seed: u64) {
        let d = l2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_kripke_model(d, &mut rng, 4, &["p", "q"]).unwrap();
        let vals = evaluate(d, &m, &f).unwrap();
        for (x, &v) in vals.iter().enumerate() {
            prop_assert!(d.subalgebras().contains(m.obj().mark(x), v));
        }
    }

    #[test]
    fn box_is_dual_to_diamond(f in formula(l2()), seed: u64) {
        let d = l2();
        let alg = d.algebra();
        let neg = (0..alg.operations().len()).find(|&o| alg.op_name(o) == "neg").unwrap();
        let not = |g: Formula| Formula::Op(neg, vec![g]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_kripke_model(d, &mut rng, 4, &["p", "q"]).unwrap();
        let lhs = evaluate(d, &m, &Formula::Box(Box::new(f.clone()))).unwrap();
        let rhs = evaluate(d, &m, &not(Formula::Diamond(Box::new(not(f))))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bisimilarity_is_a_certified_fixpoint(seed: u64) {
        let d = l2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_kripke_model(d, &mut rng, 5, &["p"]).unwrap();
        let p = bisimilarity_on(&m);
        let q = behavioral_quotient(d, &m, &p).unwrap();
        // the quotient has no further behavioral identifications
        prop_assert_eq!(bisimilarity_on(&q.model).block_count(), q.model.len());
        prop_assert_eq!(theory_partition_on(d, &m).unwrap(), p);
    }
}
