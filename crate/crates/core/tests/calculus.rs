use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdc_core::covariance::CovarianceSetup;
use qdc_core::differential::{check_leibniz, check_nilpotency, CalculusSpec};
use qdc_core::expr::parse_expr;
use qdc_core::presets::PresetId;

#[test]
fn d_of_the_plane_relation_vanishes() {
    let c = CalculusSpec::for_preset(PresetId::PlanePqD2);
    let p = &c.presentation;
    let rel = parse_expr("x*y - q*y*x", p).unwrap();
    assert!(p.normalize(&c.d(&rel)).is_zero());
    let dxy = p.normalize(&c.d(&parse_expr("x*y", p).unwrap()));
    assert_eq!(p.show(&dxy), "dx*y + (1/p)*dy*x");
}

#[test]
fn second_order_calculi_square_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for id in [PresetId::PlanePqD2, PresetId::SplaneQD2, PresetId::SplanePqD2] {
        let c = CalculusSpec::for_preset(id);
        let r = check_nilpotency(&c, 3, 40, &mut rng);
        assert!(r.passed, "{id}: {}", r.to_text(&c.presentation));
        assert!(check_leibniz(&c, 40, &mut rng).passed, "{id}");
    }
}

#[test]
fn third_order_plane_keeps_d2_nonzero() {
    let c = CalculusSpec::for_preset(PresetId::PlanePqD3);
    let p = &c.presentation;
    let x = parse_expr("x", p).unwrap();
    assert!(!p.normalize(&c.d_times(&x, 2)).is_zero());
    assert!(p.normalize(&c.d_times(&x, 3)).is_zero());
}

#[test]
fn superplane_relations_are_covariant() {
    let setup = CovarianceSetup::for_preset(PresetId::SplanePqD2).unwrap();
    for r in setup.check().unwrap() {
        assert!(r.covariant(), "{}", r.to_text(&setup.combined.presentation));
    }
}
