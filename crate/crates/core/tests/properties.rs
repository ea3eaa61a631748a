use proptest::prelude::*;

use z2z4q8::algebra::{AmbientSpace, GroupElement, Q8Element};

fn element(space: AmbientSpace) -> impl Strategy<Value = GroupElement> {
    (
        proptest::collection::vec(0u8..2, space.k1),
        proptest::collection::vec(0u8..4, space.k2),
        proptest::collection::vec(0usize..8, space.k3),
    )
        .prop_map(move |(z2, z4, q)| {
            let q: Vec<Q8Element> = q.into_iter().map(|i| Q8Element::all()[i]).collect();
            GroupElement::from_parts(space, &z2, &z4, &q).unwrap()
        })
}

fn triple() -> impl Strategy<Value = (GroupElement, GroupElement, GroupElement)> {
    (0usize..3, 0usize..3, 0usize..4).prop_flat_map(|(k1, k2, k3)| {
        let space = AmbientSpace::new(k1, k2, k3);
        (element(space), element(space), element(space))
    })
}

proptest! {
    #[test]
    fn group_axioms((a, b, c) in triple()) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.mul(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn swapper_defining_property((a, b, _c) in triple()) {
        let lhs = a.swapper(&b).unwrap().mul(&a.mul(&b).unwrap()).unwrap().gray();
        prop_assert_eq!(lhs, a.gray().xor(&b.gray()).unwrap());
    }

    #[test]
    fn commutator_defining_property((a, b, _c) in triple()) {
        let ba = b.mul(&a).unwrap();
        prop_assert_eq!(a.mul(&b).unwrap(), a.commutator(&b).unwrap().mul(&ba).unwrap());
    }

    #[test]
    fn text_round_trip((a, _b, _c) in triple()) {
        let back: GroupElement = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn gray_weight_of_torsion_is_twice_m_set_on_q8(q in proptest::collection::vec(prop::bool::ANY, 1..8)) {
        let x: Vec<Q8Element> = q.iter().map(|&on| if on { Q8Element::A2 } else { Q8Element::ONE }).collect();
        let x = GroupElement::quaternionic(&x);
        prop_assert_eq!(x.gray().weight(), 4 * x.m_set().unwrap().len());
    }
}
