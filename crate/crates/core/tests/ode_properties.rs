use monopole_core::ode::problem::{EigenSolver, SturmLiouvilleProblem};
use monopole_core::ode::spectra::{
    cylindrical_problem, kepler_angular_problem, kepler_radial_problem, kepler_radial_spectrum, oscillator_radial_problem,
    parabolic_quantization, DEFAULT_KAPPA_RANGE,
};
use monopole_core::ode::tridiag::sturm_count;
use monopole_core::{HalfInt, ModelParams};

fn h(twice: u32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn coulomb(c0: f64, hbar: f64, d: f64) -> f64 {
    -c0 * c0 / (2.0 * hbar * hbar * d * d)
}

/// Problems with their first six exact eigenvalues.
fn cases() -> Vec<(&'static str, SturmLiouvilleProblem, Vec<f64>)> {
    let p = ModelParams::natural(1.0, 0.0, 0.0).unwrap();
    let pd = ModelParams::natural(1.0, 1.5, 0.5).unwrap();
    // delta = sqrt(4c + (2z+1)^2) - 1 - z
    let (d1, d2) = (7f64.sqrt() - 1.0, 3f64.sqrt() - 1.0);
    let ell = 0.5 * (d1 + d2);
    vec![
        (
            "kepler-radial",
            kepler_radial_problem(0.0, &p, 6, 4000).unwrap(),
            (0..6).map(|n| coulomb(1.0, 1.0, n as f64 + 2.0)).collect(),
        ),
        (
            "kepler-angular",
            kepler_angular_problem(h(0), h(0), &pd, 2000).unwrap(),
            (0..6).map(|k| (k as f64 + ell) * (k as f64 + ell + 3.0)).collect(),
        ),
        (
            "osc-radial",
            oscillator_radial_problem(16.0, 1.0, 1.0, 6, 2000).unwrap(),
            (0..6).map(|n| 2.0 * (n as f64 + 3.0)).collect(),
        ),
        (
            "cylindrical",
            cylindrical_problem(h(2), 0.0, 1.0, 1.0, 6, 2000).unwrap(),
            (0..6).map(|n| 2.0 * (n as f64 + 2.0)).collect(),
        ),
    ]
}

#[test]
fn level_counts_below_thresholds() {
    for (name, problem, exact) in cases() {
        let (d, e) = problem.discretize(2 * problem.mesh_size + 1);
        let map = problem.eigenvalue_map;
        for i in 0..exact.len() - 1 {
            let threshold = 0.5 * (exact[i] + exact[i + 1]);
            let mu = (threshold - map.shift) / map.scale;
            assert_eq!(sturm_count(&d, &e, mu), i + 1, "{name} below {threshold}");
        }
    }
}

#[test]
fn second_order_convergence() {
    for (name, problem, exact) in cases() {
        let n = problem.mesh_size / 4;
        let coarse = problem.eigenvalues_on(n, 3, EigenSolver::Ql);
        let fine = problem.eigenvalues_on(2 * n + 1, 3, EigenSolver::Ql);
        for i in 0..3 {
            let order = ((coarse[i] - exact[i]).abs() / (fine[i] - exact[i]).abs()).log2();
            assert!((order - 2.0).abs() <= 0.4, "{name} level {i}: order {order}");
        }
    }
}

#[test]
fn parabolic_matches_radial_levels() {
    // n + lambda = n1 + n2 + (J+L)/2 with lambda the lowest angular label
    let p = ModelParams::natural(1.0, 0.5, 1.5).unwrap();
    let (d1, d2) = (3f64.sqrt() - 1.0, 7f64.sqrt() - 1.0);
    let ell = 0.5 * (d1 + d2);
    let radial = kepler_radial_spectrum(ell * (ell + 3.0), &p, 3, 4000).unwrap();
    let pairs = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
    let levels = parabolic_quantization(h(0), h(0), &p, DEFAULT_KAPPA_RANGE, &pairs, 2000).unwrap();
    for lv in levels {
        let e = radial.richardson[(lv.n1 + lv.n2) as usize];
        assert!((lv.energy - e).abs() <= 1e-6 * e.abs(), "{lv:?} vs {e}");
    }
}

#[test]
fn parabolic_separation_constant_sums() {
    // the two equations share nu: mu-side eigenvalue = 2 c0/hbar^2 + 4 nu
    let p = ModelParams::natural(1.0, 0.0, 0.0).unwrap();
    let lv = parabolic_quantization(h(0), h(0), &p, DEFAULT_KAPPA_RANGE, &[(1, 0)], 2000).unwrap()[0];
    // closed form: kappa = 1/3, nu = kappa (n1 + 1) - 1/2
    assert!((lv.kappa - 1.0 / 3.0).abs() < 1e-6);
    assert!((lv.lambda_tilde - 2.0 * (2.0 / 3.0 - 0.5)).abs() < 1e-5);
}

#[test]
fn hbar_scaling_of_radial_levels() {
    let p = ModelParams::new(1.3, 0.0, 0.0, 0.7).unwrap();
    let r = kepler_radial_spectrum(4.0, &p, 3, 4000).unwrap();
    for (n, v) in r.richardson.iter().enumerate() {
        let e = coulomb(1.3, 0.7, n as f64 + 1.0 + 2.0);
        assert!((v - e).abs() <= 1e-6 * e.abs(), "{n}: {v} vs {e}");
    }
}
