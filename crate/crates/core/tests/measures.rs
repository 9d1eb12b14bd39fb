use num_complex::Complex64;
use polarized::lattes::catalog;
use polarized::measures::{
    compare_l1, green_field, green_homogeneous, lattes_density, measure_from_green, preimage_sample, DensityGrid, Lift, SpherePoint,
    StartMetric, Window,
};
use polarized::lattes::EllipticCurveCM;
use polarized::{QuadField, RationalMap};
use proptest::prelude::*;

fn z2() -> RationalMap {
    RationalMap::power(QuadField::Rational, 2).unwrap()
}

#[test]
fn green_of_squaring_is_log_plus() {
    let lift = Lift::from_map(&z2()).unwrap();
    for z in [Complex64::new(0.3, 0.1), Complex64::new(1.5, -2.0), Complex64::new(0.0, 1.0)] {
        let g = green_homogeneous(&lift, z, Complex64::new(1.0, 0.0), 40, StartMetric::Sup).unwrap();
        assert!((g - z.norm().ln().max(0.0)).abs() <= 1e-12, "{z}");
    }
}

#[test]
fn scaled_lifts_differ_by_the_predicted_constant() {
    let lift = Lift::from_map(&catalog("phi_1+i").unwrap()).unwrap();
    let scale = 3.0;
    let scaled = lift.scaled(Complex64::new(scale, 0.0)).unwrap();
    let w = Window::square(2.0);
    let a = green_field(&lift, w, 32, 32, 30, StartMetric::Sup).unwrap();
    let b = green_field(&scaled, w, 32, 32, 30, StartMetric::Sup).unwrap();
    // G_{cF} = G_F + log|c|/(d − 1), up to the n = 30 tail.
    for d in b.difference(&a).unwrap() {
        assert!((d - scale.ln() / (2.0 - 1.0)).abs() <= 1e-8, "{d}");
    }
    // From a scaled starting metric the n-th approximant moves by log(s)/dⁿ.
    let z = Complex64::new(0.4, 0.7);
    let one = Complex64::new(1.0, 0.0);
    for n in 1..8 {
        let g = green_homogeneous(&lift, z, one, n, StartMetric::Sup).unwrap();
        let gs = green_homogeneous(&lift, z, one, n, StartMetric::ScaledSup(5.0)).unwrap();
        assert!((gs - g - 5f64.ln() / 2f64.powi(n as i32)).abs() <= 1e-12);
    }
}

#[test]
fn green_measure_and_preimages_of_squaring_agree() {
    let w = Window::square(1.5);
    let field = green_field(&Lift::from_map(&z2()).unwrap(), w, 128, 128, 30, StartMetric::Sup).unwrap();
    let from_green = measure_from_green(&field).unwrap().coarsen(4).unwrap();
    let sample = preimage_sample(&z2(), SpherePoint::Finite(Complex64::new(0.3, 0.4)), 14, 1).unwrap();
    let from_samples = DensityGrid::from_samples(&sample.points, w, 32, 32).unwrap();
    let l1 = compare_l1(&from_green, &from_samples).unwrap();
    assert!(l1 <= 0.1, "{l1}");
}

#[test]
fn sampled_measure_is_invariant_under_pushforward() {
    let map = catalog("phi_2@E1").unwrap();
    let w = Window::square(3.0);
    let sample = preimage_sample(&map, SpherePoint::Finite(Complex64::new(0.5, 0.25)), 9, 2).unwrap();
    let lift = Lift::from_map(&map).unwrap();
    let pushed: Vec<Complex64> = sample
        .points
        .iter()
        .filter_map(|&z| {
            let (x, y) = lift.apply(z, Complex64::new(1.0, 0.0));
            (y.norm() > 1e-300).then(|| x / y)
        })
        .collect();
    let a = DensityGrid::from_samples(&sample.points, w, 32, 32).unwrap();
    let b = DensityGrid::from_samples(&pushed, w, 32, 32).unwrap();
    let l1 = compare_l1(&a, &b).unwrap();
    assert!(l1 <= 0.05, "{l1}");
}

#[test]
fn lattes_grids_have_unit_mass() {
    for (curve, r) in [(EllipticCurveCM::e1(), 2.0), (EllipticCurveCM::e2(), 2.5)] {
        let grid = lattes_density(&curve, Window::square(r), 40, 40).unwrap();
        assert!((grid.total() - 1.0).abs() <= 1e-9);
        assert!(grid.mass.iter().all(|&m| m >= 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn histogram_mass_is_one(pts in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..200), n in 1usize..20) {
        let points: Vec<Complex64> = pts.into_iter().map(|(x, y)| Complex64::new(x, y)).collect();
        let grid = DensityGrid::from_samples(&points, Window::square(2.0), n, n).unwrap();
        prop_assert!((grid.total() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn green_functional_equation(re in -2.0f64..2.0, im in -2.0f64..2.0, which in 0usize..3) {
        let name = ["phi_1+i", "phi_2@E1", "phi_sqrt-3"][which];
        let lift = Lift::from_map(&catalog(name).unwrap()).unwrap();
        let d = lift.degree() as f64;
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(re, im);
        let (fx, fy) = lift.apply(z, one);
        let g = green_homogeneous(&lift, z, one, 30, StartMetric::Sup).unwrap();
        let gf = green_homogeneous(&lift, fx, fy, 30, StartMetric::Sup).unwrap();
        prop_assert!((gf / d - g).abs() <= 1e-4);
    }
}
