//! Finite-difference eigenvalues of the separated equations.

pub mod oracle;
pub mod problem;
pub mod spectra;
pub mod tridiag;

pub use problem::{EigenResult, EigenSolver, EigenvalueMap, Potential, SturmLiouvilleProblem, Transform};
pub use spectra::{
    cylindrical_spectrum, kepler_angular_spectrum, kepler_radial_spectrum, oscillator_angular_spectrum,
    oscillator_radial_spectrum, parabolic_quantization, parabolic_spectrum, ParabolicLevel,
};
