use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn unit_square() -> Polytope {
    Polytope::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
}

fn ind(p: Polytope) -> LayerCake {
    LayerCake::indicator(p).unwrap()
}

fn ngon_area(m: usize) -> f64 {
    m as f64 / 2.0 * (std::f64::consts::TAU / m as f64).sin()
}

fn ball64() -> BallApprox {
    BallApprox::new(2, 64).unwrap()
}

#[test]
fn helpers() {
    assert_eq!(binomial(3, 1), 3.0);
    assert_eq!(binomial(4, 2), 6.0);
    assert_eq!(binomial(2, 3), 0.0);
    assert_eq!(factorial(3), 6.0);
    assert_eq!(linspace(0.25, 2.0, 5), vec![0.25, 0.6875, 1.125, 1.5625, 2.0]);
    assert_eq!(product_grid(&[1.0, 2.0], 2), vec![vec![1.0, 1.0], vec![1.0, 2.0], vec![2.0, 1.0], vec![2.0, 2.0]]);
    assert_eq!(homogeneous_exponents(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    assert_eq!(homogeneous_exponents(3, 3).len(), 10);
    assert_eq!(default_eps_values().len(), 8);
}

#[test]
fn indicators_reduce_to_mixed_volume() {
    let k = unit_square();
    let l = Polytope::hull(&[[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]], 2).unwrap();
    let v = mixed_integral(&[&ind(k.clone()), &ind(l.clone())]).unwrap();
    assert_eq!(v.value, mixed_volume(&[&k, &l]).unwrap());
    assert_eq!(v.method, Method::RepresentationFormula);
    let big = k.scale(2.0).unwrap();
    assert!((mixed_integral(&[&ind(k.clone()), &ind(big)]).unwrap().value - 2.0).abs() < 1e-12);
}

#[test]
fn diagonal_is_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dim in [2, 3] {
        for _ in 0..5 {
            let f = random_cake(&mut rng, dim, 3).unwrap();
            let fs: Vec<&LayerCake> = vec![&f; dim];
            assert!((mixed_integral(&fs).unwrap().value - f.integral()).abs() < 1e-12);
        }
    }
}

#[test]
fn arity_errors() {
    let f = ind(unit_square());
    assert!(matches!(mixed_integral(&[&f]), Err(Error::Arity { .. })));
    assert!(matches!(mixed_integral(&[&f, &f, &f]), Err(Error::Arity { .. })));
    let g = ind(Polytope::axis_box(&[0.0; 3], &[1.0; 3]).unwrap());
    assert!(matches!(mixed_integral(&[&f, &g]), Err(Error::DimensionMismatch { .. })));
    assert!(mixed_integral(&[]).is_err());
}

#[test]
fn three_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let f = random_cake(&mut rng, 2, 3).unwrap();
        let g = random_cake(&mut rng, 2, 3).unwrap();
        let rep = mixed_integral(&[&f, &g]).unwrap().value;
        let pol = mixed_integral_polarized(&[&f, &g]).unwrap().value;
        let fit = mixed_integral_fitted(&[&f, &g]).unwrap();
        assert!((rep - pol).abs() < 1e-8 * rep, "{rep} {pol}");
        assert!((rep - fit.value).abs() < 1e-8 * rep, "{rep} {}", fit.value);
        assert!(fit.residual < 1e-9);
    }
}

#[test]
fn three_dimensional_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let fs: Vec<LayerCake> = (0..3).map(|_| random_cake(&mut rng, 3, 2).unwrap()).collect();
    let refs: Vec<&LayerCake> = fs.iter().collect();
    let rep = mixed_integral(&refs).unwrap().value;
    let pol = mixed_integral_polarized(&refs).unwrap().value;
    assert!((rep - pol).abs() < 1e-8 * rep, "{rep} {pol}");
}

#[test]
fn symmetric_under_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let fs: Vec<LayerCake> = (0..3).map(|_| random_cake(&mut rng, 3, 2).unwrap()).collect();
    let v = |a: usize, b: usize, c: usize| mixed_integral(&[&fs[a], &fs[b], &fs[c]]).unwrap().value;
    let base = v(0, 1, 2);
    for (a, b, c) in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        assert_eq!(v(a, b, c), base);
    }
}

#[test]
fn fit_examples() {
    let sq = ind(unit_square());
    let fit = minkowski_fit(&[&sq], &[vec![0.5], vec![1.0], vec![2.0]]).unwrap();
    assert_eq!(fit.exponents, vec![vec![2]]);
    assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
    let fit = minkowski_fit(&[&sq, &sq], &product_grid(&default_eps_values(), 2)).unwrap();
    for (c, e) in fit.coefficients.iter().zip([1.0, 2.0, 1.0]) {
        assert!((c - e).abs() < 1e-12);
    }
    assert!(matches!(minkowski_fit(&[&sq, &sq], &[vec![1.0, 1.0], vec![1.0, 2.0]]), Err(Error::Underdetermined { .. })));
    assert!(matches!(minkowski_fit(&[&sq], &[vec![1.0], vec![0.0], vec![2.0]]), Err(Error::NonPositiveScale(_))));
}

#[test]
fn quermassintegral_examples() {
    let d = ball64();
    let sq = ind(unit_square());
    assert!((quermassintegral(&sq, 0, &d).unwrap() - 1.0).abs() < 1e-15);
    assert!((quermassintegral(&sq, 1, &d).unwrap() - 2.0).abs() < 0.01);
    assert!((quermassintegral(&sq, 2, &d).unwrap() - ngon_area(64)).abs() < 1e-12);
    assert!(quermassintegral(&sq, 3, &d).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let f = random_cake(&mut rng, 2, 3).unwrap();
    assert!((quermassintegral(&f, 2, &d).unwrap() - ngon_area(64)).abs() < 1e-12);
    assert!((ngon_area(4096) - std::f64::consts::PI).abs() < 1e-5);
}

#[test]
fn quermassintegral_matches_two_dimensional_identity() {
    // 2V(K,D) = Vol(K+D) − Vol(K) − Vol(D)
    let d = ball64();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10 {
        let k = crate::sample::random_body(&mut rng, &[0.0, 0.0], 1.5, 7).unwrap();
        let direct = (k.minkowski_sum(d.polytope()).unwrap().volume() - k.volume() - d.volume()) / 2.0;
        let w1 = quermassintegral(&ind(k), 1, &d).unwrap();
        assert!((w1 - direct).abs() < 1e-9 * direct);
    }
}

#[test]
fn surface_area_examples() {
    let d = ball64();
    assert!((surface_area(&ind(unit_square()), &d).unwrap() - 4.0).abs() < 0.02);
    let disc = ind(d.polytope().clone());
    let perimeter = 2.0 * 64.0 * (std::f64::consts::PI / 64.0).sin();
    assert!((surface_area(&disc, &d).unwrap() - perimeter).abs() < 0.02);
    assert!((perimeter - std::f64::consts::TAU).abs() < 0.02);
}

#[test]
fn classical_isoperimetric_on_polygons() {
    let d = ball64();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let k = crate::sample::random_body(&mut rng, &[0.0, 0.0], 2.0, 9).unwrap();
        let s = surface_area(&ind(k.clone()), &d).unwrap();
        assert!(s >= 2.0 * d.volume().sqrt() * k.volume().sqrt() - 1e-9);
    }
}

#[test]
fn steiner_anchor() {
    let d = ball64();
    let sc = steiner_expand(&ind(unit_square()), &default_eps_values(), &d).unwrap();
    assert_eq!(sc.n, 2);
    assert_eq!(sc.ball_facets, 64);
    assert!((sc.coefficients[0] - 1.0).abs() < 1e-9);
    assert!((2.0 * sc.coefficients[1] - 4.0).abs() < 0.01);
    assert!((sc.coefficients[2] - 3.1365).abs() < 0.01);
    assert!((sc.coefficients[2] - ngon_area(64)).abs() < 1e-9);
    assert!(sc.residual < 1e-9);
    assert!(sc.discrepancy < 1e-9);
}

#[test]
fn steiner_of_point_is_ball_volume() {
    let d = ball64();
    let sc = steiner_expand(&ind(Polytope::origin(2)), &default_eps_values(), &d).unwrap();
    assert!(sc.coefficients[0].abs() < 1e-9);
    assert!(sc.coefficients[1].abs() < 1e-9);
    assert!((sc.coefficients[2] - d.volume()).abs() < 1e-9);
}

#[test]
fn steiner_fit_matches_direct_on_random_cakes() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let d2 = ball64();
    for _ in 0..5 {
        let f = random_cake(&mut rng, 2, 3).unwrap();
        let sc = steiner_expand(&f, &default_eps_values(), &d2).unwrap();
        assert!(sc.discrepancy < 1e-9, "{sc:?}");
        assert!(sc.coefficients.iter().all(|&c| c >= -1e-9));
    }
    let d3 = BallApprox::new(3, 80).unwrap();
    let f = random_cake(&mut rng, 3, 2).unwrap();
    let sc = steiner_expand(&f, &default_eps_values(), &d3).unwrap();
    assert!(sc.discrepancy < 1e-9, "{sc:?}");
    assert!(matches!(steiner_expand(&f, &[1.0, 2.0], &d3), Err(Error::Underdetermined { .. })));
}

#[test]
fn multilinear_in_quasi_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..10 {
        let center = |f: &LayerCake| {
            let c = f.layers()[0].body.vertex_centroid().unwrap();
            f.translate(&[-c[0], -c[1]]).unwrap()
        };
        let f = center(&random_cake(&mut rng, 2, 3).unwrap());
        let g = center(&random_cake(&mut rng, 2, 3).unwrap());
        let h = random_cake(&mut rng, 2, 3).unwrap();
        let lhs = mixed_integral(&[&f.quasi_sum(&g).unwrap(), &h]).unwrap().value;
        let rhs = mixed_integral(&[&f, &h]).unwrap().value + mixed_integral(&[&g, &h]).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-9 * rhs);
    }
}

#[test]
fn det_scaling_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let f = random_cake(&mut rng, 2, 3).unwrap();
    let g = random_cake(&mut rng, 2, 3).unwrap();
    let u = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
    let z = [0.0, 0.0];
    let v = mixed_integral(&[&f, &g]).unwrap().value;
    let w = mixed_integral(&[&f.affine_map(&u, &z).unwrap(), &g.affine_map(&u, &z).unwrap()]).unwrap().value;
    assert!((w - 4.0 * v).abs() < 1e-9 * w);
}

#[test]
fn parallel_segments_vanish() {
    let a = ind(Polytope::hull(&[[0.0, 0.0], [1.0, 0.0]], 2).unwrap());
    let b = ind(Polytope::hull(&[[0.0, 1.0], [3.0, 1.0]], 2).unwrap());
    let c = ind(Polytope::hull(&[[0.0, 0.0], [0.0, 1.0]], 2).unwrap());
    assert_eq!(mixed_integral(&[&a, &b]).unwrap().value, 0.0);
    assert!((mixed_integral(&[&a, &c]).unwrap().value - 0.5).abs() < 1e-12);
}

#[test]
fn aligned_box_valuation() {
    let a = ind(Polytope::axis_box(&[0.0, 0.0], &[2.0, 1.0]).unwrap());
    let b = ind(Polytope::axis_box(&[1.0, 0.0], &[3.0, 1.0]).unwrap());
    let MaxOutcome::QuasiConcave(mx) = a.lattice_max(&b).unwrap() else { panic!() };
    let mn = a.lattice_min(&b).unwrap();
    let h = ind(ball64().polytope().clone());
    let phi = |f: &LayerCake| mixed_integral(&[f, &h]).unwrap().value;
    assert!((phi(&mx) + phi(&mn) - phi(&a) - phi(&b)).abs() < 1e-9);
}

#[test]
fn polynomiality_campaign_small() {
    let r = verify_polynomiality(7, 8, 1e-12).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert!(r.metrics["max_residual"] < 1e-9);
    assert!(r.metrics["max_swap_asymmetry"] < 1e-9);
    assert_eq!(r.to_json(), verify_polynomiality(7, 8, 1e-12).unwrap().to_json());
}

#[test]
fn v_properties_campaign_small() {
    let r = verify_v_properties(3, 10, 1e-9).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert_eq!(r.metrics.len(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn representation_equals_polarization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_cake(&mut rng, 2, 4).unwrap();
        let g = random_cake(&mut rng, 2, 4).unwrap();
        let rep = mixed_integral(&[&f, &g]).unwrap().value;
        let pol = mixed_integral_polarized(&[&f, &g]).unwrap().value;
        prop_assert!((rep - pol).abs() < 1e-8 * rep);
    }

    #[test]
    fn fitted_coefficients_nonnegative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_cake(&mut rng, 2, 3).unwrap();
        let g = random_cake(&mut rng, 2, 3).unwrap();
        let fit = minkowski_fit(&[&f, &g], &polynomiality_grid()).unwrap();
        prop_assert!(fit.min_coefficient() >= -1e-12);
        prop_assert!(fit.residual < 1e-9);
    }
}
