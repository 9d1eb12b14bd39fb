use polarized::lattes::{
    catalog, catalog_entries, lattes_double, lattes_multiply, predict_profile, ramification_profile, verify_lattes, EllipticCurveCM,
    Multiplier,
};
use polarized::{QuadElem, QuadField};

#[test]
fn degree_is_the_norm_of_the_multiplier() {
    for e in catalog_entries() {
        if let Some(lambda) = &e.lambda {
            assert_eq!(lambda.norm(), polarized::BigRational::from_integer(e.map.degree().into()), "{}", e.name);
        }
    }
}

#[test]
fn conjugate_pairs_commute() {
    for (a, b) in [("phi_1+i", "phi_1-i"), ("phi_1+2i", "phi_1-2i"), ("phi_2+i", "phi_2-i"), ("phi_sqrt-3", "phi_sqrt-3*rho@E2")] {
        assert!(catalog(a).unwrap().commutes_with(&catalog(b).unwrap()).unwrap(), "{a} {b}");
    }
}

#[test]
fn critical_values_lie_over_two_torsion() {
    for e in catalog_entries().into_iter().filter(|e| e.lattes) {
        verify_lattes(&e.map, &e.curve().unwrap()).unwrap_or_else(|err| panic!("{}: {err}", e.name));
    }
}

#[test]
fn composite_of_the_gaussian_pair_is_doubling() {
    let composite = catalog("phi_1+i").unwrap().compose(&catalog("phi_1-i").unwrap()).unwrap();
    assert!(composite.equals(&lattes_double(&EllipticCurveCM::e1())).unwrap());
}

#[test]
fn predicted_profiles_match_for_integer_multipliers() {
    for curve in [EllipticCurveCM::e1(), EllipticCurveCM::e2()] {
        for n in 2..=5u32 {
            let map = lattes_multiply(&curve, n).unwrap();
            assert_eq!(map.degree(), (n * n) as usize);
            let lambda = QuadElem::from_int(curve.field(), n as i64);
            let predicted = predict_profile(&Multiplier::new(lambda, curve.clone()).unwrap()).unwrap();
            let computed = ramification_profile(&map, &curve).unwrap();
            assert!(computed.same_multiset(&predicted), "{} n={n}: {computed} vs {predicted}", curve.name());
        }
    }
}

#[test]
fn predicted_profiles_match_for_catalog_multipliers() {
    for e in catalog_entries().into_iter().filter(|e| e.lattes) {
        let curve = e.curve().unwrap();
        let Ok(predicted) = predict_profile(&Multiplier::new(e.lambda.clone().unwrap(), curve.clone()).unwrap()) else {
            continue;
        };
        let computed = ramification_profile(&e.map, &curve).unwrap();
        assert!(computed.same_multiset(&predicted), "{}: {computed} vs {predicted}", e.name);
    }
}

#[test]
fn half_integral_multipliers_have_no_row() {
    let e2 = EllipticCurveCM::e2();
    let rho = polarized::arith::parse_coefficient("1/2+1/2*w", QuadField::Eisenstein).unwrap();
    assert!(predict_profile(&Multiplier::new(rho, e2).unwrap()).is_err());
}
