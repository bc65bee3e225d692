use std::f64::consts::PI;

use neumann_bounds::constants::bessel_first_zero;
use neumann_bounds::oracle::{estimate_mu1, fd_box, fd_voxel_3d, fem_p1_2d, observed_order, Resolution};
use neumann_bounds::DomainSpec;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn unit_square_converges_monotonically() {
    let sq = DomainSpec::unit_box(2).unwrap();
    let mus: Vec<f64> = [32, 64, 128].iter().map(|&c| fd_box(&sq, c, 1).unwrap().mu1().unwrap()).collect();
    assert!(mus[0] < mus[1] && mus[1] < mus[2] && mus[2] < PI * PI, "{mus:?}");
    assert!(rel(mus[2], PI * PI) < 2e-3);
}

#[test]
fn anisotropic_box_first_mode() {
    let b = DomainSpec::new_box(vec![2.0, 1.0, 1.0]).unwrap();
    let r = fd_box(&b, 32, 3).unwrap();
    assert!(rel(r.mu1().unwrap(), PI * PI / 4.0) < 1e-2);
    // next modes: (pi)^2 twice, from the two unit sides and the second long mode
    for v in &r.eigenvalues[2..4] {
        assert!(rel(*v, PI * PI) < 1e-2, "{:?}", r.eigenvalues);
    }
    assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn disc_fem_is_second_order() {
    let disc = DomainSpec::ball(2, 1.0).unwrap();
    let exact = bessel_first_zero(2).unwrap().value.powi(2);
    let e: Vec<f64> = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]
        .iter()
        .map(|&h| fem_p1_2d(&disc, h, 1).unwrap().mu1().unwrap() - exact)
        .collect();
    assert!(e.iter().all(|x| *x > 0.0), "P1 conforming FEM overestimates: {e:?}");
    assert!(observed_order(e[1], e[2]) >= 1.8, "{e:?}");
}

#[test]
fn square_polygon_matches_fd_box() {
    let poly = DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    let fem = fem_p1_2d(&poly, 1.0 / 64.0, 1).unwrap().mu1().unwrap();
    let fd = fd_box(&DomainSpec::unit_box(2).unwrap(), 64, 1).unwrap().mu1().unwrap();
    assert!(rel(fem, fd) < 5e-3, "{fem} vs {fd}");
}

#[test]
fn l_shape_estimate_carries_slack() {
    let l = DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap();
    let est = estimate_mu1(&l, Resolution { cells: None, h: Some(0.1) }).unwrap();
    assert!(est.slack > 0.0 && est.extrapolated.is_some());
    assert!(!est.indicative);
    assert!(est.mu1 > 0.0 && est.mu1 < PI * PI / 4.0 + 1.0);
}

#[test]
fn simplex_voxels_agree_between_resolutions() {
    let s = DomainSpec::simplex(3).unwrap();
    let a = fd_voxel_3d(&s, 48, 1).unwrap();
    let b = fd_voxel_3d(&s, 96, 1).unwrap();
    assert!(a.indicative && b.indicative);
    assert!(rel(a.mu1().unwrap(), b.mu1().unwrap()) < 0.1, "{} vs {}", a.mu1().unwrap(), b.mu1().unwrap());
}

#[test]
fn unsupported_domains_are_reported() {
    let e = estimate_mu1(&DomainSpec::ball(4, 1.0).unwrap(), Resolution::default()).unwrap_err();
    assert_eq!(e.tag(), "unsupported-oracle");
}
