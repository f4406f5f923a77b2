//! Closed-form layer of the quadratic algebra: the structure function of the
//! deformed-oscillator realization, the finite-dimensional unirrep constraints
//! and the analytic energy formulas.
//!
//! The algebra is written with `hbar = 1` in its Coulomb term; every function
//! here substitutes `c0 -> c0 / hbar` (see [`ModelParams::reduced_c0`]) so that
//! the algebraic spectrum coincides with the separated-coordinate spectra for
//! any `hbar`. The Casimir eigenvalues `L^2`, `T^2` keep their explicit `hbar^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::params::{HalfInt, ModelParams, QuantumNumbers, So6Labels};

/// Leading-coefficient ratio between the raw and the monic structure function:
/// `98304 * 4 * 16`.
pub const RAW_TO_MONIC_SCALE: f64 = 6_291_456.0;

/// Prefactor of the raw structure function, `3 * 2^15`.
const RAW_PREFACTOR: f64 = 98_304.0;

/// Relative tolerance for the boundary zeros `Phi(0)` and `Phi(p+1)`.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Margin (relative to the structure-function scale) below which an interior
/// value is not accepted as positive.
pub const POSITIVITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxExponents {
    pub m1: f64,
    pub m2: f64,
}

impl AuxExponents {
    /// The six roots of the monic structure function, as values of `x + u`.
    /// The first two are the Coulomb pair.
    pub fn roots(&self, c0_over_sqrt: f64) -> [f64; 6] {
        let (m1, m2) = (self.m1, self.m2);
        [
            0.5 - c0_over_sqrt,
            0.5 + c0_over_sqrt,
            0.5 * (1.0 + m1 + m2),
            0.5 * (1.0 + m1 - m2),
            0.5 * (1.0 - m1 + m2),
            0.5 * (1.0 - m1 - m2),
        ]
    }
}

/// Squares of the auxiliary exponents, before the square root is taken.
pub fn aux_radicands(params: &ModelParams, qn: &QuantumNumbers) -> (f64, f64) {
    let l2 = qn.l_squared(params.hbar);
    let t2 = qn.t_squared(params.hbar);
    (1.0 + 2.0 * params.c1 + l2 + 2.0 * t2, 1.0 + 2.0 * params.c2 + l2 - 2.0 * t2)
}

pub fn aux_exponents(params: &ModelParams, qn: &QuantumNumbers) -> Result<AuxExponents> {
    let (m1_sq, m2_sq) = aux_radicands(params, qn);
    if m1_sq < 0.0 {
        return Err(SpectraError::NegativeRadicand { which: "m1^2", value: m1_sq });
    }
    if m2_sq < 0.0 {
        return Err(SpectraError::NegativeRadicand { which: "m2^2", value: m2_sq });
    }
    Ok(AuxExponents {
        m1: m1_sq.sqrt(),
        m2: m2_sq.sqrt(),
    })
}

/// The structure function in its expanded form, a degree-6 polynomial in `x`,
/// with the Hamiltonian replaced by the energy `e` and the Casimirs by their
/// eigenvalues.
pub fn structure_function_raw(x: f64, u: f64, e: f64, params: &ModelParams, qn: &QuantumNumbers) -> f64 {
    let c0 = params.reduced_c0();
    let (c1, c2) = (params.c1, params.c2);
    let l2 = qn.l_squared(params.hbar);
    let t2 = qn.t_squared(params.hbar);
    let y = x + u;
    let s = (1.0 - 2.0 * y) * (1.0 - 2.0 * y);

    let coulomb = 2.0 * c0 * c0 + e * s;
    let angular = 4.0 * c1 * c1 + 4.0 * c2 * c2 + s * (4.0 * y * (y - 1.0) - 4.0 * l2 - 3.0)
        - 4.0 * c1 * (2.0 * c2 + s - 4.0 * t2)
        + 16.0 * t2 * t2
        - 4.0 * c2 * (s + 4.0 * t2);
    RAW_PREFACTOR * coulomb * angular
}

/// The structure function as a monic product of six linear factors in `x + u`.
pub fn structure_function_factored(
    x: f64,
    u: f64,
    e: f64,
    m: &AuxExponents,
    params: &ModelParams,
) -> Result<f64> {
    if e >= 0.0 {
        return Err(SpectraError::NonNegativeEnergy(e));
    }
    let y = x + u;
    let coulomb = params.reduced_c0() / (-2.0 * e).sqrt();
    Ok(m.roots(coulomb).iter().map(|r| y - r).product())
}

/// `-c0^2 / (2 hbar^2 d^2)` for a given effective principal number `d`.
pub fn coulomb_level(params: &ModelParams, d: f64) -> f64 {
    -params.c0 * params.c0 / (2.0 * params.hbar * params.hbar * d * d)
}

/// Energy of the `(p+1)`-dimensional unirrep.
pub fn energy_level(p: u32, m: &AuxExponents, params: &ModelParams) -> f64 {
    coulomb_level(params, p as f64 + 1.0 + 0.5 * (m.m1 + m.m2))
}

/// Which root of the monic structure function is placed at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootChoice {
    /// `u = (1 + m1 + m2) / 2`, the branch that yields the physical spectrum.
    Principal,
    /// `u = (1 + m1 - m2) / 2`.
    PlusMinus,
    /// `u = (1 - m1 + m2) / 2`.
    MinusPlus,
    /// `u = (1 - m1 - m2) / 2`.
    MinusMinus,
}

impl RootChoice {
    pub const ALL: [RootChoice; 4] = [
        RootChoice::Principal,
        RootChoice::PlusMinus,
        RootChoice::MinusPlus,
        RootChoice::MinusMinus,
    ];

    fn shift(self, m: &AuxExponents) -> f64 {
        match self {
            RootChoice::Principal => 0.5 * (1.0 + m.m1 + m.m2),
            RootChoice::PlusMinus => 0.5 * (1.0 + m.m1 - m.m2),
            RootChoice::MinusPlus => 0.5 * (1.0 - m.m1 + m.m2),
            RootChoice::MinusMinus => 0.5 * (1.0 - m.m1 - m.m2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnirrepSolution {
    /// The representation has dimension `p + 1`.
    pub p: u32,
    pub u: f64,
    pub energy: f64,
    pub aux: AuxExponents,
    /// Raw structure function at `x = 1..=p`.
    pub phi_interior: Vec<f64>,
    pub phi_at_zero: f64,
    pub phi_at_top: f64,
}

impl UnirrepSolution {
    pub fn dim(&self) -> usize {
        self.p as usize + 1
    }
}

pub fn solve_unirrep(p: u32, params: &ModelParams, qn: &QuantumNumbers) -> Result<UnirrepSolution> {
    solve_unirrep_with(p, params, qn, RootChoice::Principal)
}

/// Solves `Phi(0) = Phi(p+1) = 0` with `Phi(0)` vanishing through the chosen root
/// and `Phi(p+1)` through the upper Coulomb root, then checks positivity of the
/// raw form on `x = 1..=p`.
pub fn solve_unirrep_with(
    p: u32,
    params: &ModelParams,
    qn: &QuantumNumbers,
    choice: RootChoice,
) -> Result<UnirrepSolution> {
    params.validate()?;
    let aux = aux_exponents(params, qn)?;
    let u = choice.shift(&aux);
    // p + 1 + u = 1/2 + c0 / (hbar sqrt(-2E))
    let d = p as f64 + 0.5 + u;
    if d <= 0.0 {
        return Err(SpectraError::PositivityViolation {
            x: p as f64 + 1.0,
            value: d,
        });
    }
    let energy = coulomb_level(params, d);

    let phi = |x: f64| structure_function_raw(x, u, energy, params, qn);
    let scale = (0..=p)
        .flat_map(|k| [k as f64 + 0.5, k as f64 + 1.0])
        .map(|x| phi(x).abs())
        .fold(0.0_f64, f64::max);

    let phi_at_zero = phi(0.0);
    let phi_at_top = phi(p as f64 + 1.0);
    for (x, v) in [(0.0, phi_at_zero), (p as f64 + 1.0, phi_at_top)] {
        if v.abs() > BOUNDARY_TOL * scale {
            return Err(SpectraError::PositivityViolation { x, value: v });
        }
    }

    let phi_interior: Vec<f64> = (1..=p).map(|n| phi(n as f64)).collect();
    for (n, &v) in phi_interior.iter().enumerate() {
        if v <= POSITIVITY_MARGIN * scale {
            return Err(SpectraError::PositivityViolation {
                x: (n + 1) as f64,
                value: v,
            });
        }
    }

    Ok(UnirrepSolution {
        p,
        u,
        energy,
        aux,
        phi_interior,
        phi_at_zero,
        phi_at_top,
    })
}

/// Energy at which the raw structure function vanishes at `x = p + 1`, with `u`
/// fixed by `Phi(0) = 0` on the principal branch.
///
/// The raw polynomial is affine in the energy, so two evaluations determine the
/// root; nothing from [`energy_level`] is used.
pub fn boundary_energy(p: u32, params: &ModelParams, qn: &QuantumNumbers) -> Result<f64> {
    let aux = aux_exponents(params, qn)?;
    let u = RootChoice::Principal.shift(&aux);
    let x = p as f64 + 1.0;
    let at_zero = structure_function_raw(x, u, 0.0, params, qn);
    let slope = structure_function_raw(x, u, 1.0, params, qn) - at_zero;
    Ok(-at_zero / slope)
}

/// Eigenvalues of the three so(6) Casimir operators on the irrep `(mu1, mu2, mu3)`.
pub fn so6_casimir_eigenvalues(labels: &So6Labels) -> Result<(f64, f64, f64)> {
    let (m1, m2, m3) = (labels.mu1.value(), labels.mu2.value(), labels.mu3.value());
    if !(labels.mu1 >= labels.mu2 && labels.mu2 >= labels.mu3) {
        return Err(SpectraError::OrderingViolation { mu1: m1, mu2: m2, mu3: m3 });
    }
    let k1 = m1 * (m1 + 4.0) + m2 * (m2 + 2.0) + m3 * m3;
    let k2 = 48.0 * (m1 + 2.0) * (m2 + 1.0) * m3;
    let k3 = m1 * m1 * (m1 + 4.0).powi(2) + 6.0 * m1 * (m1 + 4.0) + m2 * m2 * (m2 + 2.0).powi(2)
        + m3.powi(4)
        - 2.0 * m3 * m3;
    Ok((k1, k2, k3))
}

/// Levels of the undeformed Yang-Coulomb monopole system, `mu1 = n/2`.
///
/// The Coulomb strength enters linearly here, unlike in [`energy_level`].
pub fn ycm_energy(n: u32, params: &ModelParams) -> f64 {
    let d = n as f64 / 2.0 + 2.0;
    -params.c0 / (2.0 * params.hbar * params.hbar * d * d)
}

/// Number of `(n, lambda)` pairs with `n >= 0`, integer `lambda >= J + L` and
/// `n + lambda + 1 = p`.
pub fn degeneracy_count(p: u32, j: HalfInt, l: HalfInt) -> u32 {
    p.saturating_sub((j + l).ceil())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(c0: f64, c1: f64, c2: f64) -> ModelParams {
        ModelParams::natural(c0, c1, c2).unwrap()
    }

    fn qn(l4: f64, t2: u32) -> QuantumNumbers {
        QuantumNumbers::new(l4, HalfInt::from_twice(t2)).unwrap()
    }

    #[test]
    fn aux_exponents_zero_couplings() {
        let m = aux_exponents(&unit(1.0, 0.0, 0.0), &qn(0.0, 0)).unwrap();
        assert_eq!((m.m1, m.m2), (1.0, 1.0));
    }

    #[test]
    fn aux_exponents_deformed() {
        let m = aux_exponents(&unit(1.0, 1.5, 0.5), &qn(1.0, 1)).unwrap();
        assert!((m.m1 - 8.5_f64.sqrt()).abs() < 1e-15);
        assert!((m.m2 - 3.5_f64.sqrt()).abs() < 1e-15);
        assert!((m.m1 - 2.915476).abs() < 1e-6);
        assert!((m.m2 - 1.870829).abs() < 1e-6);
    }

    #[test]
    fn aux_exponents_unphysical_sector() {
        let err = aux_exponents(&unit(1.0, 0.0, 0.0), &qn(0.0, 2)).unwrap_err();
        assert_eq!(err, SpectraError::NegativeRadicand { which: "m2^2", value: -3.0 });
    }

    #[test]
    fn raw_structure_function_examples() {
        let p = unit(1.0, 0.0, 0.0);
        let q = qn(0.0, 0);
        let e = -1.0 / 18.0;
        // (2 - 16/18) * 192 * 98304
        let v = structure_function_raw(1.0, 1.5, e, &p, &q);
        assert!((v - 20_971_520.0).abs() < 1e-6, "{v}");
        assert!(structure_function_raw(0.0, 1.5, e, &p, &q).abs() < 1e-9);
    }

    #[test]
    fn raw_structure_function_degenerate_couplings() {
        let p = ModelParams { c0: 0.0, c1: 0.0, c2: 0.0, hbar: 1.0 };
        assert_eq!(structure_function_raw(0.0, 0.5, 0.0, &p, &qn(0.0, 0)), 0.0);
    }

    #[test]
    fn factored_structure_function_examples() {
        let p = unit(1.0, 0.0, 0.0);
        let m = AuxExponents { m1: 1.0, m2: 1.0 };
        let e = -1.0 / 18.0;
        let at = |x| structure_function_factored(x, 1.5, e, &m, &p).unwrap();
        assert!((at(1.0) + 60.0).abs() < 1e-12);
        assert_eq!(at(0.0), 0.0);
        assert!(at(2.0).abs() < 1e-12);
        assert_eq!(
            structure_function_factored(1.0, 1.5, 0.0, &m, &p),
            Err(SpectraError::NonNegativeEnergy(0.0))
        );
    }

    #[test]
    fn unirrep_examples() {
        let p = unit(1.0, 0.0, 0.0);
        let q = qn(0.0, 0);
        let s0 = solve_unirrep(0, &p, &q).unwrap();
        assert_eq!(s0.u, 1.5);
        assert_eq!(s0.energy, -0.125);
        assert!(s0.phi_interior.is_empty());

        let s1 = solve_unirrep(1, &p, &q).unwrap();
        assert!((s1.energy + 1.0 / 18.0).abs() < 1e-16);
        assert_eq!(s1.phi_interior.len(), 1);
        assert!((s1.phi_interior[0] - 20_971_520.0).abs() < 1e-6);

        let s2 = solve_unirrep(2, &p, &q).unwrap();
        assert_eq!(s2.energy, -1.0 / 32.0);
    }

    #[test]
    fn unirrep_propagates_radicand_error() {
        let err = solve_unirrep(1, &unit(1.0, 0.0, 0.0), &qn(0.0, 2)).unwrap_err();
        assert!(matches!(err, SpectraError::NegativeRadicand { .. }));
    }

    #[test]
    fn alternative_root_pairings_fail_positivity() {
        let p = unit(1.0, 0.5, 1.5);
        let q = qn(1.0, 1);
        for choice in [RootChoice::PlusMinus, RootChoice::MinusPlus, RootChoice::MinusMinus] {
            for n in 1..6 {
                let r = solve_unirrep_with(n, &p, &q, choice);
                assert!(
                    matches!(r, Err(SpectraError::PositivityViolation { .. })),
                    "{choice:?} p={n}: {r:?}"
                );
            }
        }
    }

    #[test]
    fn energy_level_examples() {
        let p = unit(1.0, 0.0, 0.0);
        let m = AuxExponents { m1: 1.0, m2: 1.0 };
        assert_eq!(energy_level(0, &m, &p), -0.125);
        assert_eq!(energy_level(2, &m, &p), -0.03125);
        let levels: Vec<f64> = (0..20).map(|n| energy_level(n, &m, &p)).collect();
        assert!(levels.windows(2).all(|w| w[0] < w[1] && w[1] < 0.0));
    }

    #[test]
    fn energy_level_carries_hbar() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 2.0).unwrap();
        let m = AuxExponents { m1: 1.0, m2: 1.0 };
        assert_eq!(energy_level(0, &m, &p), -0.125 / 4.0);
        // The boundary constraints still hold with hbar != 1.
        assert!(solve_unirrep(3, &p, &qn(1.0, 1)).is_ok());
    }

    #[test]
    fn boundary_energy_matches_closed_form() {
        let p = unit(1.3, 0.5, 1.5);
        let q = qn(2.0, 2);
        for n in 0..8 {
            let s = solve_unirrep(n, &p, &q).unwrap();
            let b = boundary_energy(n, &p, &q).unwrap();
            assert!(((b - s.energy) / s.energy).abs() < 1e-12);
        }
    }

    #[test]
    fn so6_examples() {
        let h = |t| HalfInt::from_twice(t);
        let l = |a, b, c| So6Labels { mu1: h(a), mu2: h(b), mu3: h(c) };
        assert_eq!(so6_casimir_eigenvalues(&l(0, 0, 0)).unwrap(), (0.0, 0.0, 0.0));
        assert_eq!(so6_casimir_eigenvalues(&l(2, 2, 2)).unwrap(), (9.0, 288.0, 63.0));
        let (k1, k2, k3) = so6_casimir_eigenvalues(&l(1, 1, 1)).unwrap();
        assert_eq!(k1, 15.0 / 4.0);
        assert_eq!(k2, 90.0);
        // 0.25*20.25 + 6*2.25 + 0.25*6.25 + 0.0625 - 0.5
        assert_eq!(k3, 5.0625 + 13.5 + 1.5625 + 0.0625 - 0.5);
        assert!(matches!(
            so6_casimir_eigenvalues(&l(1, 2, 0)),
            Err(SpectraError::OrderingViolation { .. })
        ));
    }

    #[test]
    fn ycm_examples() {
        let p = unit(1.0, 0.0, 0.0);
        assert_eq!(ycm_energy(0, &p), -0.125);
        assert!((ycm_energy(2, &p) + 1.0 / 18.0).abs() < 1e-17);
        let levels: Vec<f64> = (0..50).map(|n| ycm_energy(n, &p)).collect();
        assert!(levels.windows(2).all(|w| w[0] < w[1] && w[1] < 0.0));
    }

    #[test]
    fn degeneracy_examples() {
        let h = HalfInt::from_twice;
        assert_eq!(degeneracy_count(3, h(0), h(0)), 3);
        assert_eq!(degeneracy_count(1, h(1), h(1)), 0);
        assert_eq!(degeneracy_count(2, h(0), h(2)), 1);
    }
}
