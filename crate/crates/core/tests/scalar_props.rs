use proptest::prelude::*;

use qdc_core::expr::parse_scalar;
use qdc_core::scalar::Scalar;

/// Small rational functions in q, p and j built from a handful of atoms.
fn scalar() -> impl Strategy<Value = Scalar> {
    let atom = prop_oneof![
        (-4i64..=4).prop_map(Scalar::from_int),
        Just(Scalar::q()),
        Just(Scalar::p()),
        Just(Scalar::j()),
        (1i64..=3).prop_map(|n| Scalar::from_frac(1, n + 1)),
    ];
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| b.inv().map(|bi| &a * &bi).unwrap_or(a)),
            inner.prop_map(|a| -&a),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverses(a in scalar()) {
        match a.inv() {
            Some(ai) => prop_assert!((&a * &ai).is_one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn printed_form_parses_back(a in scalar()) {
        let text = a.to_string();
        prop_assert_eq!(parse_scalar(&text).unwrap(), a, "{}", text);
    }

    #[test]
    fn j_is_a_primitive_cube_root(a in scalar()) {
        let j = Scalar::j();
        let one_j_j2 = &(&Scalar::one() + &j) + &(&j * &j);
        prop_assert!((&a * &one_j_j2).is_zero());
    }
}

#[test]
fn canonical_forms_are_unique() {
    let a = parse_scalar("(q^2 - p^2)/(q - p)").unwrap();
    assert_eq!(a, parse_scalar("q + p").unwrap());
    assert_eq!(a.to_string(), parse_scalar("p + q").unwrap().to_string());
    assert_eq!(parse_scalar("j^2").unwrap(), parse_scalar("-1 - j").unwrap());
}
