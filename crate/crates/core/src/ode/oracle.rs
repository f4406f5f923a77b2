//! Closed-form values the numerical spectra are compared against.

use crate::params::{HalfInt, ModelParams};
use crate::special::{delta_exponents, parabolic_closed_form, DeltaVariant};

/// `ell` with `ell (ell + 3) = x`, `ell >= 0`.
pub fn ell_from_separation(x: f64) -> f64 {
    0.5 * (-3.0 + (9.0 + 4.0 * x).sqrt())
}

/// `E_n = -c0^2 / (2 hbar^2 (n + ell + 2)^2)` with `Lambda = ell (ell + 3)`.
pub fn kepler_radial(lambda: f64, params: &ModelParams, k: usize) -> Vec<f64> {
    let ell = ell_from_separation(lambda);
    let h2 = params.hbar * params.hbar;
    (0..k)
        .map(|n| {
            let d = n as f64 + ell + 2.0;
            -params.c0 * params.c0 / (2.0 * h2 * d * d)
        })
        .collect()
}

fn angular_ladder(dbar: f64, base: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| {
            let l = base + i as f64 + dbar;
            l * (l + 3.0)
        })
        .collect()
}

/// `Lambda = (lambda + dbar)(lambda + dbar + 3)`, `lambda = (J+L)/2, (J+L)/2 + 1, ...`.
pub fn kepler_angular(j: HalfInt, l: HalfInt, params: &ModelParams, k: usize) -> Vec<f64> {
    let d = delta_exponents(DeltaVariant::Kepler, (params.c1, params.c2), j, l, params.hbar);
    angular_ladder(d.mean(), 0.5 * (j.value() + l.value()), k)
}

/// `eps_n = 2 hbar omega (n + ell + 2)` with `Gamma = 4 ell (ell + 3)`.
pub fn oscillator_radial(gamma: f64, omega: f64, hbar: f64, k: usize) -> Vec<f64> {
    let ell = ell_from_separation(gamma / 4.0);
    (0..k).map(|n| 2.0 * hbar * omega * (n as f64 + ell + 2.0)).collect()
}

/// `Gamma = 4 (lambda + dbar)(lambda + dbar + 3)`.
pub fn oscillator_angular(t: HalfInt, kk: HalfInt, lambdas: (f64, f64), hbar: f64, k: usize) -> Vec<f64> {
    let d = delta_exponents(DeltaVariant::Oscillator, lambdas, t, kk, hbar);
    angular_ladder(d.mean(), 0.5 * (t.value() + kk.value()), k)
        .into_iter()
        .map(|v| 4.0 * v)
        .collect()
}

/// `eps_i = 2 hbar omega (n + (delta + z + 2)/2)`.
pub fn cylindrical(z: HalfInt, coupling: f64, omega: f64, hbar: f64, k: usize) -> Vec<f64> {
    let d = delta_exponents(DeltaVariant::Oscillator, (coupling, coupling), z, z, hbar);
    (0..k)
        .map(|n| 2.0 * hbar * omega * (n as f64 + 0.5 * (d.delta1 + z.value() + 2.0)))
        .collect()
}

/// Energy of the parabolic pair `(n1, n2)`.
pub fn parabolic(n1: u32, n2: u32, j: HalfInt, l: HalfInt, params: &ModelParams) -> f64 {
    parabolic_closed_form(n1, n2, j, l, params).2
}
