use bilinear_control::foliation::{
    arc_family, example_distribution, first_return, phi_constancy, theta_samples,
    FirstReturnConfig, PlanarSection, RadialDistribution,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn return_scales_with_start(c in -0.5f64..0.5, lambda in 0.1f64..10.0, k in 0usize..16) {
        let d = RadialDistribution::radial_graph(3, c).unwrap();
        let theta = theta_samples(3, 16, 4)[k].clone();
        let s = PlanarSection::new(theta).unwrap();
        let base = first_return(&d, &s, &FirstReturnConfig::default()).unwrap();
        let cfg = FirstReturnConfig { start_scale: lambda, ..Default::default() };
        let big = first_return(&d, &s, &cfg).unwrap();
        prop_assert!((big.scale - lambda * base.scale).abs() <= 1e-8 * lambda * base.scale);
        // ray condition and closed form e^{-2c}
        prop_assert!(base.event_offset.abs() <= 1e-10);
        prop_assert!(base.p_theta.dot(&s.p) < 0.0);
        prop_assert!((base.scale - (-2.0 * c).exp()).abs() <= 1e-8);
    }
}

#[test]
fn arcs_stay_planar_and_on_the_leaf() {
    let cfg = FirstReturnConfig::default();
    for n in [3, 4] {
        let d = RadialDistribution::radial_graph(n, 0.3).unwrap();
        let fam = arc_family(&d, 12, 2, 40, &cfg).unwrap();
        assert!(fam.planarity_residual <= 1e-10);
        assert!(fam.tangency_residual <= 1e-8);
        assert!(fam.leaf_residual.unwrap() <= 1e-8);
        assert!(fam.min_norm > 0.5 && fam.max_norm < 1.5);
        for arc in &fam.arcs {
            assert!((arc[0][n - 1] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn flat_graph_is_the_sphere() {
    let cfg = FirstReturnConfig::default();
    let flat = phi_constancy(
        &example_distribution("flat_radial_graph", 3).unwrap(),
        16,
        0,
        1e-6,
        &cfg,
    )
    .unwrap();
    let sphere = phi_constancy(
        &example_distribution("sphere", 3).unwrap(),
        16,
        0,
        1e-6,
        &cfg,
    )
    .unwrap();
    for (a, b) in flat.values.iter().zip(&sphere.values) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(flat
        .windings
        .iter()
        .all(|w| (w.abs() - std::f64::consts::PI).abs() < 1e-9));
}

#[test]
fn orbit_leaves_close_up() {
    let d = example_distribution("so3_orbits", 3).unwrap();
    let rep = phi_constancy(&d, 16, 0, 1e-6, &FirstReturnConfig::default()).unwrap();
    assert!(rep.constant && (rep.mean - 1.0).abs() < 1e-9);
    assert!(rep.leaf_residual.is_none());
}

#[test]
fn csv_exports_have_headers() {
    let d = RadialDistribution::sphere(3).unwrap();
    let cfg = FirstReturnConfig::default();
    let mut buf = Vec::new();
    phi_constancy(&d, 4, 0, 1e-6, &cfg)
        .unwrap()
        .write_csv(&mut buf)
        .unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("theta_index,theta0,theta1,theta2,p_theta_norm,winding\n"));
    assert_eq!(text.lines().count(), 5);
    let mut buf = Vec::new();
    arc_family(&d, 2, 0, 5, &cfg)
        .unwrap()
        .write_csv(&mut buf)
        .unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 11);
}
