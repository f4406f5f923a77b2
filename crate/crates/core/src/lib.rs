//! Spectra of the deformed 5D Kepler-monopole system and its dual 8D singular
//! oscillator: the quadratic-algebra construction, closed-form wavefunctions,
//! finite-difference eigenvalues of the separated equations, and the maps
//! between pictures.

pub mod algebra;
pub mod duality;
pub mod error;
pub mod fock;
pub mod ode;
pub mod params;
pub mod special;

pub use algebra::{AuxExponents, RootChoice, UnirrepSolution};
pub use duality::{DualityMap, IdentityCase, IdentityReport, KeplerSide, OscillatorParams, OscillatorSide, Picture};
pub use error::{Result, SpectraError};
pub use fock::{AlgebraReport, DeformedOscillatorRep, GeneratorMatrices};
pub use ode::{EigenResult, ParabolicLevel, SturmLiouvilleProblem};
pub use params::{Convention, HalfInt, ModelParams, QuantumNumbers, So6Labels};
pub use special::{AngularCase, AngularPicture, DeltaExponents, DeltaVariant, RadialCase};
