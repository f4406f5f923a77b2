//! Benchmark inputs shared by the criterion targets in `benches/`.

use monopole_core::ode::spectra::kepler_radial_problem;
use monopole_core::{HalfInt, ModelParams, QuantumNumbers};

/// A deformed, half-integral parameter point admissible up to `p = 12`.
pub fn deformed_point() -> (ModelParams, QuantumNumbers) {
    (
        ModelParams { c0: 1.0, c1: 0.5, c2: 1.5, hbar: 1.0 },
        QuantumNumbers { l4: 1.0, t: HalfInt::HALF },
    )
}

/// Tridiagonal discretization of the 5D radial equation with `n` nodes.
pub fn radial_tridiagonal(n: usize) -> (Vec<f64>, Vec<f64>) {
    let params = ModelParams { c0: 1.0, c1: 0.0, c2: 0.0, hbar: 1.0 };
    kepler_radial_problem(0.0, &params, 5, n)
        .expect("valid radial problem")
        .discretize(n)
}
