//! Parameter records and quantum-number labels shared by every module.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which form of a formula with a known misprint is evaluated.
///
/// `AsPrinted` follows the published expressions literally. `Consistent` uses
/// the corrected forms that satisfy the equations they are meant to solve:
///
/// * generators: the diagonal part of `B` fixed by the `[A,C]` relation,
///   `rho(n)^2 = 1 / (3 * 2^20 y (y+1) (1+2y)^2)` with `y = n + u`, and the
///   Casimir coefficients that make it central;
/// * angular wavefunctions: Jacobi degree `lambda - (z1+z2)/2` and parameters
///   `(delta2 + z2 + 1, delta1 + z1 + 1)`;
/// * parabolic wavefunctions: power `(kappa mu)^((delta + z)/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    AsPrinted,
    Consistent,
}

/// A non-negative integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct HalfInt(u32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: u32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: u32) -> Self {
        HalfInt(2 * n)
    }

    /// Accepts only values that are exact multiples of 1/2.
    pub fn new(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !value.is_finite() || value < 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(invalid(
                "half-integer",
                format!("{value} is not a non-negative multiple of 1/2"),
            ));
        }
        Ok(HalfInt(twice as u32))
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Smallest integer not below the value.
    pub const fn ceil(self) -> u32 {
        self.0.div_ceil(2)
    }

    /// `j(j+1)`.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl From<HalfInt> for f64 {
    fn from(h: HalfInt) -> f64 {
        h.value()
    }
}

impl TryFrom<f64> for HalfInt {
    type Error = crate::error::SpectraError;
    fn try_from(v: f64) -> Result<Self> {
        HalfInt::new(v)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Couplings of the deformed 5D Kepler Hamiltonian.
///
/// `c0` is the Coulomb strength, `c1`/`c2` the non-central couplings attached to
/// `1/(r(r+x0))` and `1/(r(r-x0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub hbar: f64,
}

impl ModelParams {
    pub fn new(c0: f64, c1: f64, c2: f64, hbar: f64) -> Result<Self> {
        let p = ModelParams { c0, c1, c2, hbar };
        p.validate()?;
        Ok(p)
    }

    /// `hbar = 1`.
    pub fn natural(c0: f64, c1: f64, c2: f64) -> Result<Self> {
        Self::new(c0, c1, c2, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c0", self.c0), ("c1", self.c1), ("c2", self.c2), ("hbar", self.hbar)] {
            if !v.is_finite() {
                return Err(invalid(name, format!("{v} is not finite")));
            }
        }
        if self.c0 <= 0.0 {
            return Err(invalid("c0", format!("must be > 0, got {}", self.c0)));
        }
        if self.c1 < 0.0 {
            return Err(invalid("c1", format!("must be >= 0, got {}", self.c1)));
        }
        if self.c2 < 0.0 {
            return Err(invalid("c2", format!("must be >= 0, got {}", self.c2)));
        }
        if self.hbar <= 0.0 {
            return Err(invalid("hbar", format!("must be > 0, got {}", self.hbar)));
        }
        Ok(())
    }

    /// Coulomb strength in the units the quadratic algebra is written in.
    pub fn reduced_c0(&self) -> f64 {
        self.c0 / self.hbar
    }
}

/// so(4) and su(2) labels of a sector of the algebraic spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub l4: f64,
    pub t: HalfInt,
}

impl QuantumNumbers {
    pub fn new(l4: f64, t: HalfInt) -> Result<Self> {
        if !l4.is_finite() || l4 < 0.0 {
            return Err(invalid("l4", format!("must be finite and >= 0, got {l4}")));
        }
        Ok(QuantumNumbers { l4, t })
    }

    /// Eigenvalue of the so(4) Casimir, `hbar^2 l4 (l4 + 2)`.
    pub fn l_squared(&self, hbar: f64) -> f64 {
        hbar * hbar * self.l4 * (self.l4 + 2.0)
    }

    /// Eigenvalue of the su(2) Casimir, `hbar^2 T (T + 1)`.
    pub fn t_squared(&self, hbar: f64) -> f64 {
        hbar * hbar * self.t.casimir()
    }
}

/// Highest-weight labels of an so(6) irrep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct So6Labels {
    pub mu1: HalfInt,
    pub mu2: HalfInt,
    pub mu3: HalfInt,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_int_parsing() {
        assert_eq!(HalfInt::new(1.5).unwrap().twice(), 3);
        assert!(HalfInt::new(0.25).is_err());
        assert!(HalfInt::new(-0.5).is_err());
        assert!(HalfInt::new(f64::NAN).is_err());
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
    }

    #[test]
    fn half_int_ceil() {
        assert_eq!(HalfInt::from_twice(0).ceil(), 0);
        assert_eq!(HalfInt::from_twice(1).ceil(), 1);
        assert_eq!(HalfInt::from_twice(2).ceil(), 1);
        assert_eq!(HalfInt::from_twice(5).ceil(), 3);
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::natural(1.0, 0.0, 0.0).is_ok());
        assert!(ModelParams::natural(0.0, 0.0, 0.0).is_err());
        assert!(ModelParams::natural(1.0, -0.1, 0.0).is_err());
        assert!(ModelParams::natural(1.0, 0.0, f64::INFINITY).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.0, 0.0).is_err());
    }
}
