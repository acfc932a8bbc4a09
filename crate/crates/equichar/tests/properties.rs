//! Randomized property tests for the exact cyclotomic arithmetic layer.

use equichar::cyclotomic::{parse_cyclo, CycloElem, FieldAut, Rat};
use num_bigint::BigInt;
use proptest::prelude::*;

const CONDUCTORS: [u64; 6] = [1, 3, 4, 5, 8, 12];

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=5).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn elem_strategy(conductor: u64) -> impl Strategy<Value = CycloElem> {
    // raw coefficients longer than the reduced degree exercise reduction
    proptest::collection::vec(rat_strategy(), 1..=conductor as usize + 2)
        .prop_map(move |raw| CycloElem::from_raw(conductor, &raw).unwrap())
}

fn conducted_triple() -> impl Strategy<Value = (u64, CycloElem, CycloElem, CycloElem)> {
    proptest::sample::select(&CONDUCTORS[..]).prop_flat_map(|n| {
        (
            Just(n),
            elem_strategy(n),
            elem_strategy(n),
            elem_strategy(n),
        )
    })
}

proptest! {
    #[test]
    fn field_axioms_hold_exactly((n, a, b, c) in conducted_triple()) {
        let ab = a.checked_mul(&b).unwrap();
        let bc = b.checked_mul(&c).unwrap();
        prop_assert_eq!(ab.checked_mul(&c).unwrap(), a.checked_mul(&bc).unwrap());

        let b_plus_c = b.checked_add(&c).unwrap();
        let lhs = a.checked_mul(&b_plus_c).unwrap();
        let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);

        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!(a.checked_mul(&inv).unwrap().is_one());
        }
        let _ = n;
    }

    #[test]
    fn display_and_parse_are_inverse((n, a, _b, _c) in conducted_triple()) {
        let text = a.to_string();
        prop_assert_eq!(parse_cyclo(n, &text).unwrap(), a);
    }

    #[test]
    fn automorphisms_are_ring_homomorphisms((n, a, b, _c) in conducted_triple()) {
        for e in 1..n.max(2) {
            let sigma = match FieldAut::new(n, e) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let sum = sigma.apply(&a.checked_add(&b).unwrap()).unwrap();
            prop_assert_eq!(
                &sum,
                &sigma.apply(&a).unwrap().checked_add(&sigma.apply(&b).unwrap()).unwrap()
            );
            let prod = sigma.apply(&a.checked_mul(&b).unwrap()).unwrap();
            prop_assert_eq!(
                &prod,
                &sigma.apply(&a).unwrap().checked_mul(&sigma.apply(&b).unwrap()).unwrap()
            );
            // the inverse automorphism undoes it
            prop_assert_eq!(&sigma.inverse().apply(&sigma.apply(&a).unwrap()).unwrap(), &a);
        }
    }
}
