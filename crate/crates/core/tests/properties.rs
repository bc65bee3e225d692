use neumann_bounds::constants::{
    convex_poincare_bound, exact_mu1, m_rs, m_sup, payne_weinberger, szego_weinberger_upper,
};
use neumann_bounds::geometry::DEFAULT_SEED;
use neumann_bounds::mappings::{admissible_a_range, frobenius_bound_cusp, operator_norm, DilatationMethod};
use neumann_bounds::transfer::{auto_pipeline, theorem_a_bound, theorem_b_bound, theorem_c_bound, Variant};
use neumann_bounds::{DomainSpec, Error, MappingSpec};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(DEFAULT_SEED),
        ..ProptestConfig::default()
    }
}

/// Source domain with an exact first eigenvalue, and a matching diagonal map.
fn convex_case() -> impl Strategy<Value = (DomainSpec, Vec<f64>)> {
    (2usize..=4, any::<bool>(), 0.3f64..3.0).prop_flat_map(|(n, ball, size)| {
        let d = if ball { DomainSpec::ball(n, size).unwrap() } else { DomainSpec::new_box(vec![size; n]).unwrap() };
        (Just(d), prop::collection::vec(0.2f64..5.0, n))
    })
}

#[test]
fn monte_carlo_volume_within_three_standard_errors() {
    let domains = [
        DomainSpec::new_box(vec![2.0, 0.5, 1.0]).unwrap(),
        DomainSpec::ball(2, 1.5).unwrap(),
        DomainSpec::ball(3, 1.0).unwrap(),
        DomainSpec::ellipsoid(vec![2.0, 1.0, 0.5]).unwrap(),
        DomainSpec::simplex(3).unwrap(),
        DomainSpec::simplex(4).unwrap(),
        DomainSpec::holder_cusp(vec![2.0, 2.0]).unwrap(),
        DomainSpec::holder_cusp(vec![1.5, 3.0]).unwrap(),
        DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let samples = 200_000;
    for d in &domains {
        let (lo, hi) = d.bounding_box();
        let bbox: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        let mut hits = 0usize;
        let mut x = vec![0.0; d.dim()];
        for _ in 0..samples {
            for i in 0..x.len() {
                x[i] = rng.random_range(lo[i]..hi[i]);
            }
            hits += d.contains(&x).unwrap() as usize;
        }
        let f = hits as f64 / samples as f64;
        let se = bbox * (f * (1.0 - f) / samples as f64).sqrt();
        let est = f * bbox;
        assert!((est - d.volume()).abs() <= 3.0 * se, "{}: {est} vs {} (se {se})", d.label(), d.volume());
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn cusp_geometry(n in 3usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<f64> = (0..n - 1).map(|_| rng.random_range(1.0..6.0)).collect();
        let cusp = DomainSpec::holder_cusp(g.clone()).unwrap();
        let simplex = DomainSpec::simplex(n).unwrap();
        prop_assert_eq!(cusp.diameter(), simplex.diameter());
        prop_assert!(cusp.volume() < simplex.volume());
        let ones = DomainSpec::holder_cusp(vec![1.0; n - 1]).unwrap();
        prop_assert!(rel(ones.volume(), simplex.volume()) < 1e-14);
    }

    #[test]
    fn ball_equal_volume_radius(n in 2usize..=6, r in 0.01f64..100.0) {
        prop_assert_eq!(DomainSpec::ball(n, r).unwrap().equal_volume_ball_radius(), r);
    }

    #[test]
    fn diagonal_dilatation_is_constant((d, c) in convex_case(), p in 1.2f64..4.0) {
        let m = MappingSpec::diagonal(c).unwrap();
        let sup = m.dilatation_sup(&d, p, DilatationMethod::Analytic).unwrap().value;
        for x in d.sample_points(4).iter().take(50) {
            prop_assert_eq!(m.pointwise_dilatation(x, p).unwrap(), sup);
        }
    }

    #[test]
    fn cusp_dilatation_dominates_pointwise(n in 3usize..=4, seed in any::<u64>(), t in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<f64> = (0..n - 1).map(|_| rng.random_range(1.0..3.0)).collect();
        let gamma = 1.0 + g.iter().sum::<f64>();
        let p = 2.0;
        // the widest admissible range sits at the top of the r interval
        let r = 2.0 * n as f64 / (n as f64 - 2.0) - 1e-3;
        let range = admissible_a_range(p, r, n, gamma).unwrap();
        prop_assume!(!range.is_empty());
        let a = range.lower + t * (range.upper - range.lower) + 1e-9;
        let m = MappingSpec::cusp(a, g.clone()).unwrap();
        let h1 = DomainSpec::simplex(n).unwrap();
        let sup = m.dilatation_sup(&h1, p, DilatationMethod::Analytic).unwrap().value;
        let frob = frobenius_bound_cusp(a, &g, n);
        for x in h1.sample_points(6) {
            if x[n - 1] <= 0.0 {
                continue;
            }
            let k = m.pointwise_dilatation(&x, p).unwrap();
            prop_assert!(k <= sup * (1.0 + 1e-12), "{} > {}", k, sup);
            let d = m.differential(&x).unwrap();
            let factored = operator_norm(&d.matrix).unwrap() / x[n - 1].powf(a - 1.0);
            prop_assert!(factored <= frob * (1.0 + 1e-12));
            let closed = a * x[n - 1].powf(a * gamma - n as f64);
            prop_assert!(rel(d.matrix.determinant(), closed) < 1e-12);
        }
    }

    #[test]
    fn operator_norm_is_a_lower_witness(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = nalgebra::DMatrix::from_fn(n, n, |_, _| rng.random_range(-3.0..3.0));
        let norm = operator_norm(&m).unwrap();
        for _ in 0..100 {
            let v = nalgebra::DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            prop_assert!((&m * &v).norm() <= norm * v.norm() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn constant_jacobian_norms((d, c) in convex_case(), s in 1.2f64..3.0) {
        let m = MappingSpec::diagonal(c).unwrap();
        let sup = m_sup(&m, &d, s).unwrap().value;
        let mut prev: Option<f64> = None;
        for r in [s + 0.5, s + 1.0, 2.0 * s + 1.0, 4.0 * s + 3.0] {
            let v = m_rs(&m, &d, r, s).unwrap().value;
            let expected = sup * d.volume().powf((r - s) / (r * s));
            prop_assert!(rel(v, expected) < 1e-13);
            // M_{r,s} -> M_s |D|^{1/s} monotonically: the volume factor moves toward it
            if let Some(pv) = prev {
                let limit = sup * d.volume().powf(1.0 / s);
                prop_assert!((v - limit).abs() <= (pv - limit).abs() * (1.0 + 1e-12));
            }
            prev = Some(v);
        }
    }

    #[test]
    fn classical_bounds_sandwich_exact((d, _) in convex_case()) {
        let mu = exact_mu1(&d).unwrap();
        prop_assert!(szego_weinberger_upper(&d).unwrap() >= mu * (1.0 - 1e-12));
        prop_assert!(payne_weinberger(&d).unwrap() <= mu);
        if let DomainSpec::Ball { .. } = d {
            prop_assert!(rel(szego_weinberger_upper(&d).unwrap(), mu) < 1e-10);
        }
    }

    #[test]
    fn uniform_dilation_scales_as_t_minus_two((d, _) in convex_case(), t in 0.1f64..10.0) {
        let n = d.dim();
        let m = MappingSpec::diagonal(vec![t; n]).unwrap();
        let c = auto_pipeline(&d, &m, 2.0, &[]).unwrap();
        let mu = exact_mu1(&d).unwrap();
        prop_assert!(rel(c.bound_value, mu / (t * t)) < 8.0 * f64::EPSILON);
    }

    #[test]
    fn theorem_a_beats_theorem_c((d, c) in convex_case(), r_off in 0.05f64..0.95) {
        let n = d.dim();
        let m = MappingSpec::diagonal(c).unwrap();
        let k = m.dilatation_sup(&d, 2.0, DilatationMethod::Analytic).unwrap();
        let ms = m_sup(&m, &d, 2.0).unwrap();
        let a = theorem_a_bound(k.value_pow_p, ms.value_pow_s, exact_mu1(&d).unwrap()).unwrap();
        // r with 1/2 - 1/r < 1/n keeps the convex estimate valid
        let r_max = if n == 2 { 40.0 } else { 2.0 * n as f64 / (n as f64 - 2.0) };
        let r = 2.0 + r_off * (r_max - 2.0);
        let b = convex_poincare_bound(&d, r, 2.0).unwrap();
        let cc = theorem_c_bound(k.value, m_rs(&m, &d, r, 2.0).unwrap().value, b.value).unwrap();
        prop_assert!(a.bound_value >= cc.bound_value);
    }

    #[test]
    fn certificates_stay_below_szego_weinberger((d, c) in convex_case()) {
        let m = MappingSpec::diagonal(c).unwrap();
        let cert = auto_pipeline(&d, &m, 2.0, &[]).unwrap();
        let u = cert.upper_bound.unwrap();
        prop_assert!(cert.bound_value <= u, "{} > {}", cert.bound_value, u);
    }

    #[test]
    fn theorem_b_monotone_in_each_exponent(seed in any::<u64>(), i in 0usize..2, bump in 0.1f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<f64> = (0..2).map(|_| rng.random_range(1.0..3.0)).collect();
        let mut h = g.clone();
        h[i] += bump;
        let r = [4.5];
        // an empty a-range at this r means no bound at all, i.e. zero
        let bound = |g: &[f64]| match theorem_b_bound(3, g, &r, Variant::Rigorous) {
            Ok(c) => c.bound_value,
            Err(Error::EmptyAdmissibleRange { .. }) => 0.0,
            Err(e) => panic!("{e}"),
        };
        let (b0, b1) = (bound(&g), bound(&h));
        prop_assert!(b1 <= b0 * (1.0 + 1e-12), "{:?}: {} -> {:?}: {}", g, b0, h, b1);
    }
}

#[test]
fn theorem_b_flat_cusp_positive_in_every_dimension() {
    for n in 3..=6 {
        let c = theorem_b_bound(n, &vec![1.0; n - 1], &[], Variant::Rigorous).unwrap();
        assert!(c.bound_value.is_finite() && c.bound_value > 0.0, "n={n}");
    }
}
