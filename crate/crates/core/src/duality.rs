//! The 5D Kepler / 8D oscillator parameter map and the cross-picture spectrum identities.

use serde::{Deserialize, Serialize};

use crate::algebra::{aux_exponents, aux_radicands, coulomb_level, energy_level, AuxExponents};
use crate::error::{invalid, Result, SpectraError};
use crate::params::{HalfInt, ModelParams, QuantumNumbers};
use crate::special::{delta_exponents, parabolic_closed_form, DeltaVariant};

/// Kepler side: Coulomb strength, bound-state energy and non-central couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeplerSide {
    pub c0: f64,
    pub energy: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Oscillator side: energy, frequency and the two singular couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSide {
    pub epsilon: f64,
    pub omega: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    KeplerFromOscillator,
    OscillatorFromKepler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityMap {
    pub direction: Direction,
    pub kepler: KeplerSide,
    pub oscillator: OscillatorSide,
}

/// `c0 = eps/4`, `E = -omega^2/8`, `c_i = lambda_i/2`. Expects `omega > 0`.
pub fn kepler_from_oscillator(epsilon: f64, omega: f64, lambda1: f64, lambda2: f64) -> KeplerSide {
    KeplerSide {
        c0: epsilon / 4.0,
        energy: -omega * omega / 8.0,
        c1: lambda1 / 2.0,
        c2: lambda2 / 2.0,
    }
}

/// Inverse map, defined for bound states only.
pub fn oscillator_from_kepler(c0: f64, energy: f64, c1: f64, c2: f64) -> Result<OscillatorSide> {
    if energy.is_nan() || energy >= 0.0 {
        return Err(SpectraError::NonNegativeEnergy(energy));
    }
    Ok(OscillatorSide {
        epsilon: 4.0 * c0,
        omega: (-8.0 * energy).sqrt(),
        lambda1: 2.0 * c1,
        lambda2: 2.0 * c2,
    })
}

impl DualityMap {
    pub fn from_oscillator(osc: OscillatorSide) -> Self {
        DualityMap {
            direction: Direction::KeplerFromOscillator,
            kepler: kepler_from_oscillator(osc.epsilon, osc.omega, osc.lambda1, osc.lambda2),
            oscillator: osc,
        }
    }

    pub fn from_kepler(kep: KeplerSide) -> Result<Self> {
        Ok(DualityMap {
            direction: Direction::OscillatorFromKepler,
            kepler: kep,
            oscillator: oscillator_from_kepler(kep.c0, kep.energy, kep.c1, kep.c2)?,
        })
    }
}

/// Oscillator frequency, couplings and `hbar`; the energy is what a spectrum yields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub omega: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega", self.omega), ("hbar", self.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Degree of the angular Jacobi polynomial; `lambda - (z1 + z2)/2` must be a
/// non-negative integer.
pub fn angular_degree(lambda: f64, z1: HalfInt, z2: HalfInt) -> Result<u32> {
    let k = lambda - 0.5 * (z1.value() + z2.value());
    if !(k >= -1e-12 && (k - k.round()).abs() <= 1e-12) {
        return Err(SpectraError::IndexError { index: k });
    }
    Ok(k.round() as u32)
}

/// `E = -c0^2 / (2 hbar^2 (n + lambda + dbar + 2)^2)`.
pub fn hyperspherical_energy(n: u32, lambda: f64, j: HalfInt, l: HalfInt, params: &ModelParams) -> f64 {
    let d = delta_exponents(DeltaVariant::Kepler, (params.c1, params.c2), j, l, params.hbar);
    coulomb_level(params, n as f64 + lambda + d.mean() + 2.0)
}

pub fn parabolic_energy(n1: u32, n2: u32, j: HalfInt, l: HalfInt, params: &ModelParams) -> f64 {
    parabolic_closed_form(n1, n2, j, l, params).2
}

/// `eps = 2 hbar omega (n + lambda + dbar + 2)`.
pub fn euler_energy(n: u32, lambda: f64, t: HalfInt, k: HalfInt, osc: &OscillatorParams) -> f64 {
    let d = delta_exponents(DeltaVariant::Oscillator, (osc.lambda1, osc.lambda2), t, k, osc.hbar);
    2.0 * osc.hbar * osc.omega * (n as f64 + lambda + d.mean() + 2.0)
}

/// `eps = eps_1 + eps_2`, `eps_i = 2 hbar omega (n_i + (delta_i + z_i + 2)/2)`.
pub fn cylindrical_energy(n1: u32, n2: u32, t: HalfInt, k: HalfInt, osc: &OscillatorParams) -> f64 {
    let d = delta_exponents(DeltaVariant::Oscillator, (osc.lambda1, osc.lambda2), t, k, osc.hbar);
    let sector = |n: u32, delta: f64, z: HalfInt| 2.0 * osc.hbar * osc.omega * (n as f64 + 0.5 * (delta + z.value() + 2.0));
    sector(n1, d.delta1, t) + sector(n2, d.delta2, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Picture {
    Hyperspherical,
    Parabolic,
    Euler,
    Cylindrical,
}

/// A state in one picture together with that picture's parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "picture", rename_all = "snake_case")]
pub enum IdentityCase {
    Hyperspherical {
        n: u32,
        lambda: f64,
        j: HalfInt,
        l: HalfInt,
        params: ModelParams,
    },
    Parabolic {
        n1: u32,
        n2: u32,
        j: HalfInt,
        l: HalfInt,
        params: ModelParams,
    },
    Euler {
        n: u32,
        lambda: f64,
        t: HalfInt,
        k: HalfInt,
        osc: OscillatorParams,
    },
    Cylindrical {
        n1: u32,
        n2: u32,
        t: HalfInt,
        k: HalfInt,
        osc: OscillatorParams,
    },
}

impl IdentityCase {
    pub fn picture(&self) -> Picture {
        match self {
            IdentityCase::Hyperspherical { .. } => Picture::Hyperspherical,
            IdentityCase::Parabolic { .. } => Picture::Parabolic,
            IdentityCase::Euler { .. } => Picture::Euler,
            IdentityCase::Cylindrical { .. } => Picture::Cylindrical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub case: IdentityCase,
    /// Kepler-side energy of the state; oscillator pictures go through the duality map.
    pub picture_energy: f64,
    /// `p` of the identification; half-integral when `(z1 + z2)/2` is.
    pub p: f64,
    /// The algebraic level at that `p` with `m_i = delta_i`.
    pub algebraic_energy: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

/// Kepler energy of a picture's state against the algebraic level under the
/// identification `p = n + lambda + 1` (or `n1 + n2 + (z1+z2)/2 + 1`), `m_i = delta_i`.
pub fn spectrum_identity_check(case: &IdentityCase) -> Result<IdentityReport> {
    let (picture_energy, p, c0, deltas, hbar) = match *case {
        IdentityCase::Hyperspherical { n, lambda, j, l, params } => {
            params.validate()?;
            angular_degree(lambda, j, l)?;
            let d = delta_exponents(DeltaVariant::Kepler, (params.c1, params.c2), j, l, params.hbar);
            (
                hyperspherical_energy(n, lambda, j, l, &params),
                n as f64 + lambda + 1.0,
                params.c0,
                d,
                params.hbar,
            )
        }
        IdentityCase::Parabolic { n1, n2, j, l, params } => {
            params.validate()?;
            let d = delta_exponents(DeltaVariant::Kepler, (params.c1, params.c2), j, l, params.hbar);
            (
                parabolic_energy(n1, n2, j, l, &params),
                (n1 + n2) as f64 + 0.5 * (j.value() + l.value()) + 1.0,
                params.c0,
                d,
                params.hbar,
            )
        }
        IdentityCase::Euler { n, lambda, t, k, osc } => {
            osc.validate()?;
            angular_degree(lambda, t, k)?;
            let eps = euler_energy(n, lambda, t, k, &osc);
            let kep = kepler_from_oscillator(eps, osc.omega, osc.lambda1, osc.lambda2);
            let d = delta_exponents(DeltaVariant::Kepler, (kep.c1, kep.c2), t, k, osc.hbar);
            (kep.energy, n as f64 + lambda + 1.0, kep.c0, d, osc.hbar)
        }
        IdentityCase::Cylindrical { n1, n2, t, k, osc } => {
            osc.validate()?;
            let eps = cylindrical_energy(n1, n2, t, k, &osc);
            let kep = kepler_from_oscillator(eps, osc.omega, osc.lambda1, osc.lambda2);
            let d = delta_exponents(DeltaVariant::Kepler, (kep.c1, kep.c2), t, k, osc.hbar);
            (
                kep.energy,
                (n1 + n2) as f64 + 0.5 * (t.value() + k.value()) + 1.0,
                kep.c0,
                d,
                osc.hbar,
            )
        }
    };
    let m = AuxExponents {
        m1: deltas.delta1,
        m2: deltas.delta2,
    };
    let params = ModelParams {
        c0,
        c1: 0.0,
        c2: 0.0,
        hbar,
    };
    let algebraic_energy = coulomb_level(&params, p + 1.0 + 0.5 * (m.m1 + m.m2));
    let abs_diff = (picture_energy - algebraic_energy).abs();
    Ok(IdentityReport {
        case: *case,
        picture_energy,
        p,
        algebraic_energy,
        abs_diff,
        rel_diff: abs_diff / algebraic_energy.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSize {
    Small,
    Full,
}

fn half_ints(max_twice: u32) -> Vec<HalfInt> {
    (0..=max_twice).map(HalfInt::from_twice).collect()
}

/// Every picture over `n, n1, n2, k <= 5` (`<= 2` for `Small`), labels in
/// `{0, 1/2, 1}` and couplings in `{0, 0.5, 1.5}`, at `c0 = omega = hbar = 1`.
pub fn identity_grid(size: GridSize) -> Vec<IdentityCase> {
    let nmax = match size {
        GridSize::Small => 2,
        GridSize::Full => 5,
    };
    let couplings = [0.0, 0.5, 1.5];
    let labels = half_ints(2);
    let mut out = Vec::new();
    for &c1 in &couplings {
        for &c2 in &couplings {
            let params = ModelParams {
                c0: 1.0,
                c1,
                c2,
                hbar: 1.0,
            };
            let osc = OscillatorParams {
                omega: 1.0,
                lambda1: c1,
                lambda2: c2,
                hbar: 1.0,
            };
            for &z1 in &labels {
                for &z2 in &labels {
                    let base = 0.5 * (z1.value() + z2.value());
                    for a in 0..=nmax {
                        for b in 0..=nmax {
                            let lambda = base + b as f64;
                            out.push(IdentityCase::Hyperspherical { n: a, lambda, j: z1, l: z2, params });
                            out.push(IdentityCase::Parabolic { n1: a, n2: b, j: z1, l: z2, params });
                            out.push(IdentityCase::Euler { n: a, lambda, t: z1, k: z2, osc });
                            out.push(IdentityCase::Cylindrical { n1: a, n2: b, t: z1, k: z2, osc });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether the squared exponents of the separated solutions coincide with
/// those of the algebra for one `(J, L, l4, T)` tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaMatch {
    pub j: HalfInt,
    pub l: HalfInt,
    pub l4: f64,
    pub t: HalfInt,
    pub c1: f64,
    pub c2: f64,
    /// `4 c_i / hbar^2 + (2 z_i + 1)^2`.
    pub delta_radicands: (f64, f64),
    /// `m1^2`, `m2^2` of the algebra.
    pub m_radicands: (f64, f64),
    pub admissible: bool,
    /// For admissible tuples: worst relative difference over `n, k <= 5` between
    /// the hyperspherical level and the algebraic level of dimension `n + k + 1`
    /// with the algebra's own `m_i`.
    pub max_rel_diff: Option<f64>,
}

/// Radicands agree to this relative tolerance.
pub const MATCH_TOLERANCE: f64 = 1e-12;

/// Enumerates `(J, L, l4, T)` and couplings and reports where the squared
/// exponents agree; only those tuples carry an energy comparison.
pub fn delta_m_matching(hbar: f64) -> Vec<DeltaMatch> {
    let couplings = [0.0, 0.5, 1.5];
    let labels = half_ints(2);
    let l4s = [0.0, 0.5, 1.0, 1.5, 2.0];
    let h2 = hbar * hbar;
    let mut out = Vec::new();
    for &c1 in &couplings {
        for &c2 in &couplings {
            let params = ModelParams { c0: 1.0, c1, c2, hbar };
            for &j in &labels {
                for &l in &labels {
                    for &l4 in &l4s {
                        for &t in &labels {
                            let qn = QuantumNumbers { l4, t };
                            let dr = (
                                4.0 * c1 / h2 + (2.0 * j.value() + 1.0).powi(2),
                                4.0 * c2 / h2 + (2.0 * l.value() + 1.0).powi(2),
                            );
                            let mr = aux_radicands(&params, &qn);
                            let close = |a: f64, b: f64| (a - b).abs() <= MATCH_TOLERANCE * a.abs().max(b.abs());
                            let admissible = close(dr.0, mr.0) && close(dr.1, mr.1);
                            let max_rel_diff = if admissible {
                                aux_exponents(&params, &qn).ok().map(|m| {
                                    let mut worst = 0.0_f64;
                                    for n in 0..=5u32 {
                                        for k in 0..=5u32 {
                                            let lambda = 0.5 * (j.value() + l.value()) + k as f64;
                                            let e = hyperspherical_energy(n, lambda, j, l, &params);
                                            let a = energy_level(n + k, &m, &params);
                                            worst = worst.max((e - a).abs() / a.abs());
                                        }
                                    }
                                    worst
                                })
                            } else {
                                None
                            };
                            out.push(DeltaMatch {
                                j,
                                l,
                                l4,
                                t,
                                c1,
                                c2,
                                delta_radicands: dr,
                                m_radicands: mr,
                                admissible,
                                max_rel_diff,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: u32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn map_examples() {
        let k = kepler_from_oscillator(4.0, 1.0, 0.0, 0.0);
        assert_eq!(k, KeplerSide { c0: 1.0, energy: -0.125, c1: 0.0, c2: 0.0 });
        assert_eq!(kepler_from_oscillator(0.0, 1.0, 0.0, 0.0).c0, 0.0);
        let o = oscillator_from_kepler(1.0, -0.125, 0.0, 0.0).unwrap();
        assert_eq!((o.epsilon, o.omega), (4.0, 1.0));
        let o = oscillator_from_kepler(1.0, -1.0 / 18.0, 0.0, 0.0).unwrap();
        assert!((o.omega - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            oscillator_from_kepler(1.0, 0.0, 0.0, 0.0),
            Err(SpectraError::NonNegativeEnergy(0.0))
        );
        assert!(oscillator_from_kepler(1.0, f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn identity_examples() {
        let params = ModelParams::natural(1.0, 0.0, 0.0).unwrap();
        let osc = OscillatorParams { omega: 1.0, lambda1: 0.0, lambda2: 0.0, hbar: 1.0 };
        let cases = [
            IdentityCase::Hyperspherical { n: 0, lambda: 0.0, j: h(0), l: h(0), params },
            IdentityCase::Euler { n: 0, lambda: 0.0, t: h(0), k: h(0), osc },
            IdentityCase::Cylindrical { n1: 0, n2: 0, t: h(0), k: h(0), osc },
            IdentityCase::Parabolic { n1: 0, n2: 0, j: h(0), l: h(0), params },
        ];
        for c in cases {
            let r = spectrum_identity_check(&c).unwrap();
            assert_eq!(r.picture_energy, -0.125, "{c:?}");
            assert_eq!(r.rel_diff, 0.0);
        }
        assert_eq!(euler_energy(0, 0.0, h(0), h(0), &osc), 4.0);
        assert_eq!(cylindrical_energy(0, 0, h(0), h(0), &osc), 4.0);
    }

    #[test]
    fn inadmissible_lambda() {
        let params = ModelParams::natural(1.0, 0.0, 0.0).unwrap();
        let c = IdentityCase::Hyperspherical { n: 0, lambda: 1.0, j: h(1), l: h(0), params };
        assert!(matches!(spectrum_identity_check(&c), Err(SpectraError::IndexError { .. })));
    }

    #[test]
    fn small_grid_agrees() {
        for c in identity_grid(GridSize::Small) {
            let r = spectrum_identity_check(&c).unwrap();
            assert!(r.rel_diff <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn matching_at_zero_labels() {
        let rows = delta_m_matching(1.0);
        let row = rows
            .iter()
            .find(|r| r.c1 == 0.0 && r.c2 == 0.0 && r.j == h(0) && r.l == h(0) && r.l4 == 0.0 && r.t == h(0))
            .unwrap();
        assert!(row.admissible);
        assert!(row.max_rel_diff.unwrap() < 1e-12);
    }
}
