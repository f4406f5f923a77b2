//! The separated equations of each picture, set up as symmetrized problems.

use serde::{Deserialize, Serialize};

use super::problem::{
    richardson, EigenResult, EigenvalueMap, Potential, SturmLiouvilleProblem, Transform, RICHARDSON_TOLERANCE,
};
use crate::error::{invalid, Result, SpectraError};
use crate::params::{HalfInt, ModelParams};

/// Truncation point: the envelope has fallen by this factor from its peak.
pub const ENVELOPE_DROP: f64 = 1e-14;
/// Left end in units of the natural length.
pub const X_MIN_FACTOR: f64 = 1e-6;
/// Default `(lo, hi)` multipliers of `c0 / hbar^2` for the parabolic scan.
pub const DEFAULT_KAPPA_RANGE: (f64, f64) = (1e-3, 1e3);

const SCAN_POINTS: usize = 16;

/// Exponent `s` of the regular solution `x^s` at a `c / x^2` singularity.
fn origin_power(inv_x2: f64) -> f64 {
    0.5 + (inv_x2 + 0.25).sqrt()
}

/// Largest `t` with `t^a e^{-t/2}` (or `e^{-t^2/2}` when `gaussian`) still above
/// `ENVELOPE_DROP` times its peak.
fn envelope_cutoff(a: f64, gaussian: bool) -> f64 {
    let log_env = |t: f64| {
        if gaussian {
            a * t.ln() - 0.5 * t * t
        } else {
            a * t.ln() - 0.5 * t
        }
    };
    let peak = if gaussian { a.sqrt() } else { 2.0 * a }.max(1.0);
    let target = log_env(peak) + ENVELOPE_DROP.ln();
    let (mut lo, mut hi) = (peak, 2.0 * peak + 10.0);
    while log_env(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_env(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn check_levels(k: usize) -> Result<()> {
    if k == 0 {
        return Err(invalid("levels", "at least one level is required"));
    }
    Ok(())
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
    }
    Ok(())
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

fn radial(inv_x2: f64, inv_x: f64, x2: f64) -> Potential {
    Potential::Radial {
        inv_x2,
        inv_x,
        x_coef: 0.0,
        x2,
        constant: 0.0,
    }
}

/// `-g'' + [2 a1/(1+cos) + 2 a2/(1-cos) + (3/4) cot^2 - 3/2] g = Lambda g`,
/// from `F = g / sin^{3/2}`.
fn angular_problem(a1: f64, a2: f64, scale: f64, mesh: usize) -> Result<SturmLiouvilleProblem> {
    let v = Potential::Angular {
        inv_one_plus_cos: 2.0 * a1,
        inv_one_minus_cos: 2.0 * a2,
        cot2: 0.75,
        constant: -1.5,
    };
    SturmLiouvilleProblem::new(
        v,
        (X_MIN_FACTOR, std::f64::consts::PI - X_MIN_FACTOR),
        Transform::SinePower { power: 1.5 },
        EigenvalueMap { scale, shift: 0.0 },
        mesh,
    )
}

/// `-chi'' + [(Lambda+2)/r^2 - 2 c0/(hbar^2 r)] chi = (2E/hbar^2) chi`, `R = chi / r^2`.
/// The domain holds the `k` lowest levels.
pub fn kepler_radial_problem(lambda: f64, params: &ModelParams, k: usize, mesh: usize) -> Result<SturmLiouvilleProblem> {
    params.validate()?;
    check_nonneg("Lambda", lambda)?;
    check_levels(k)?;
    let h2 = params.hbar * params.hbar;
    let inv_x2 = lambda + 2.0;
    // chi ~ t^(s + k - 1) e^{-t/2} with t = kappa r at the top level
    let a = origin_power(inv_x2) + (k - 1) as f64;
    let kappa = 2.0 * params.c0 / (h2 * a);
    SturmLiouvilleProblem::new(
        radial(inv_x2, -2.0 * params.c0 / h2, 0.0),
        (X_MIN_FACTOR / kappa, envelope_cutoff(a, false) / kappa),
        Transform::Power { power: 2.0 },
        EigenvalueMap { scale: 0.5 * h2, shift: 0.0 },
        mesh,
    )
}

/// Lowest `k` energies of the 5D radial equation.
pub fn kepler_radial_spectrum(lambda: f64, params: &ModelParams, k: usize, mesh: usize) -> Result<EigenResult> {
    kepler_radial_problem(lambda, params, k, mesh)?.solve(k)
}

pub fn kepler_angular_problem(j: HalfInt, l: HalfInt, params: &ModelParams, mesh: usize) -> Result<SturmLiouvilleProblem> {
    params.validate()?;
    let h2 = params.hbar * params.hbar;
    angular_problem(j.casimir() + params.c1 / h2, l.casimir() + params.c2 / h2, 1.0, mesh)
}

/// Lowest `k` separation constants `Lambda` of the hyperspherical angular equation.
pub fn kepler_angular_spectrum(
    j: HalfInt,
    l: HalfInt,
    params: &ModelParams,
    k: usize,
    mesh: usize,
) -> Result<EigenResult> {
    check_levels(k)?;
    kepler_angular_problem(j, l, params, mesh)?.solve(k)
}

/// `-chi'' + [(Gamma + 35/4)/u^2 + omega^2 u^2/hbar^2] chi = (2 eps/hbar^2) chi`,
/// `R = chi / u^{7/2}`.
pub fn oscillator_radial_problem(
    gamma: f64,
    omega: f64,
    hbar: f64,
    k: usize,
    mesh: usize,
) -> Result<SturmLiouvilleProblem> {
    check_nonneg("Gamma", gamma)?;
    check_positive("omega", omega)?;
    check_positive("hbar", hbar)?;
    check_levels(k)?;
    let inv_x2 = gamma + 35.0 / 4.0;
    let a = origin_power(inv_x2) + 2.0 * (k - 1) as f64;
    let len = (hbar / omega).sqrt();
    SturmLiouvilleProblem::new(
        radial(inv_x2, 0.0, omega * omega / (hbar * hbar)),
        (X_MIN_FACTOR * len, envelope_cutoff(a, true) * len),
        Transform::Power { power: 3.5 },
        EigenvalueMap {
            scale: 0.5 * hbar * hbar,
            shift: 0.0,
        },
        mesh,
    )
}

/// Lowest `k` energies of the 8D radial equation.
pub fn oscillator_radial_spectrum(gamma: f64, omega: f64, hbar: f64, k: usize, mesh: usize) -> Result<EigenResult> {
    oscillator_radial_problem(gamma, omega, hbar, k, mesh)?.solve(k)
}

pub fn oscillator_angular_problem(
    t: HalfInt,
    kk: HalfInt,
    lambdas: (f64, f64),
    hbar: f64,
    mesh: usize,
) -> Result<SturmLiouvilleProblem> {
    check_nonneg("lambda1", lambdas.0)?;
    check_nonneg("lambda2", lambdas.1)?;
    check_positive("hbar", hbar)?;
    let h2 = hbar * hbar;
    angular_problem(
        t.casimir() + lambdas.0 / (2.0 * h2),
        kk.casimir() + lambdas.1 / (2.0 * h2),
        4.0,
        mesh,
    )
}

/// Lowest `k` values of `Gamma` for the Euler-angle equation.
pub fn oscillator_angular_spectrum(
    t: HalfInt,
    kk: HalfInt,
    lambdas: (f64, f64),
    hbar: f64,
    k: usize,
    mesh: usize,
) -> Result<EigenResult> {
    check_levels(k)?;
    oscillator_angular_problem(t, kk, lambdas, hbar, mesh)?.solve(k)
}

/// One 4D factor in `x = t^2` (natural units): `-chi'' + [(4A + 3/4)/t^2 + t^2] chi = 4 eta chi`
/// with `A = z(z+1) + lambda/(2 hbar^2)` and `eps = 2 hbar omega eta`.
pub fn cylindrical_problem(
    z: HalfInt,
    coupling: f64,
    omega: f64,
    hbar: f64,
    k: usize,
    mesh: usize,
) -> Result<SturmLiouvilleProblem> {
    check_nonneg("lambda", coupling)?;
    check_positive("omega", omega)?;
    check_positive("hbar", hbar)?;
    check_levels(k)?;
    let inv_x2 = 4.0 * (z.casimir() + coupling / (2.0 * hbar * hbar)) + 0.75;
    let a = origin_power(inv_x2) + 2.0 * (k - 1) as f64;
    SturmLiouvilleProblem::new(
        radial(inv_x2, 0.0, 1.0),
        (X_MIN_FACTOR, envelope_cutoff(a, true)),
        Transform::SquaredVariable { power: 1.5 },
        EigenvalueMap {
            scale: 0.5 * hbar * omega,
            shift: 0.0,
        },
        mesh,
    )
}

/// Lowest `k` single-sector energies `eps_i`.
pub fn cylindrical_spectrum(
    z: HalfInt,
    coupling: f64,
    omega: f64,
    hbar: f64,
    k: usize,
    mesh: usize,
) -> Result<EigenResult> {
    cylindrical_problem(z, coupling, omega, hbar, k, mesh)?.solve(k)
}

/// One parabolic equation at fixed `kappa`, in `mu = t^2`:
/// `-chi'' + [(4A + 3/4)/t^2 + kappa^2 t^2] chi = (2 c0/hbar^2 + 4 nu) chi`
/// on the `mu` side and the same with `-nu` on the other.
fn parabolic_side(z: HalfInt, coupling: f64, kappa: f64, level: u32, hbar: f64, mesh: usize) -> Result<SturmLiouvilleProblem> {
    let inv_x2 = 4.0 * (z.casimir() + coupling / (hbar * hbar)) + 0.75;
    let a = origin_power(inv_x2) + 2.0 * level as f64;
    let len = 1.0 / kappa.sqrt();
    SturmLiouvilleProblem::new(
        radial(inv_x2, 0.0, kappa * kappa),
        (X_MIN_FACTOR * len, envelope_cutoff(a, true) * len),
        Transform::SquaredVariable { power: 1.5 },
        EigenvalueMap::IDENTITY,
        mesh,
    )
}

/// `(coarse, fine)` eigenvalue of index `level`.
fn side_eigenvalue(problem: &SturmLiouvilleProblem, level: u32) -> (f64, f64) {
    let n = problem.mesh_size;
    (
        problem.eigenvalue_at(n, level as usize),
        problem.eigenvalue_at(2 * n + 1, level as usize),
    )
}

/// A parabolic state found by matching the two separated equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolicLevel {
    /// Eigenvalue index of the `mu` equation, equal to its node count.
    pub n1: u32,
    /// Eigenvalue index of the `nu` equation.
    pub n2: u32,
    pub kappa: f64,
    /// `Lambda~` with `hbar Lambda~ / 2` the shared separation constant.
    pub lambda_tilde: f64,
    /// `-hbar^2 kappa^2 / 2`.
    pub energy: f64,
    pub converged: bool,
}

/// Finds `kappa` in `kappa_range` where eigenvalue `n1` of the `mu` equation and
/// eigenvalue `n2` of the `nu` equation share one separation constant: a coarse
/// logarithmic scan brackets a sign change of the mismatch and bisection refines it.
pub fn parabolic_level(
    n1: u32,
    n2: u32,
    j: HalfInt,
    l: HalfInt,
    params: &ModelParams,
    kappa_range: (f64, f64),
    mesh: usize,
) -> Result<ParabolicLevel> {
    params.validate()?;
    let (lo, hi) = kappa_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(invalid("kappa range", format!("need 0 < lo < hi, got ({lo}, {hi})")));
    }
    let h2 = params.hbar * params.hbar;
    let total = 4.0 * params.c0 / h2;
    let sides = |kappa: f64| -> Result<((f64, f64), (f64, f64))> {
        let mu = parabolic_side(j, params.c1, kappa, n1, params.hbar, mesh)?;
        let nu = parabolic_side(l, params.c2, kappa, n2, params.hbar, mesh)?;
        Ok((side_eigenvalue(&mu, n1), side_eigenvalue(&nu, n2)))
    };
    let mismatch = |kappa: f64| -> Result<f64> {
        let ((c1, f1), (c2, f2)) = sides(kappa)?;
        Ok(richardson(c1, f1) + richardson(c2, f2) - total)
    };

    let no_root = SpectraError::NoIntersection {
        n1: n1 as usize,
        n2: n2 as usize,
        lo,
        hi,
    };
    let ratio = (hi / lo).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let mut a = lo;
    let mut ga = mismatch(a)?;
    let mut bracket = None;
    for i in 1..SCAN_POINTS {
        let b = if i == SCAN_POINTS - 1 { hi } else { lo * ratio.powi(i as i32) };
        let gb = mismatch(b)?;
        if ga == 0.0 {
            bracket = Some((a, a, ga));
            break;
        }
        if ga.signum() != gb.signum() {
            bracket = Some((a, b, ga));
            break;
        }
        a = b;
        ga = gb;
    }
    let (mut a, mut b, ga) = bracket.ok_or(no_root)?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if mismatch(mid)?.signum() == ga.signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    let kappa = 0.5 * (a + b);

    let ((c1, f1), (c2, f2)) = sides(kappa)?;
    let (r1, r2) = (richardson(c1, f1), richardson(c2, f2));
    let converged = (r1 - f1).abs() <= RICHARDSON_TOLERANCE * r1.abs().max(1.0)
        && (r2 - f2).abs() <= RICHARDSON_TOLERANCE * r2.abs().max(1.0);
    let nu = 0.25 * (r1 - 2.0 * params.c0 / h2);
    Ok(ParabolicLevel {
        n1,
        n2,
        kappa,
        lambda_tilde: 2.0 * nu / params.hbar,
        energy: -0.5 * h2 * kappa * kappa,
        converged,
    })
}

/// Quantizes every pair in `pairs`, in order. The scan range is given in units
/// of `c0 / hbar^2`.
pub fn parabolic_quantization(
    j: HalfInt,
    l: HalfInt,
    params: &ModelParams,
    kappa_range: (f64, f64),
    pairs: &[(u32, u32)],
    mesh: usize,
) -> Result<Vec<ParabolicLevel>> {
    params.validate()?;
    let unit = params.c0 / (params.hbar * params.hbar);
    let range = (kappa_range.0 * unit, kappa_range.1 * unit);
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(n1, n2))| {
            let level = parabolic_level(n1, n2, j, l, params, range, mesh)?;
            if !level.converged {
                return Err(SpectraError::ConvergenceFailure {
                    level: i,
                    fine: level.energy,
                    extrapolated: level.energy,
                });
            }
            Ok(level)
        })
        .collect()
}

/// Lowest `k` parabolic levels, ordered by energy then `(n1, n2)`. The energy
/// decreases in `kappa`, which falls with `n1 + n2`, so all pairs up to the
/// smallest total holding `k` of them are enough.
pub fn parabolic_spectrum(
    j: HalfInt,
    l: HalfInt,
    params: &ModelParams,
    k: usize,
    mesh: usize,
) -> Result<Vec<ParabolicLevel>> {
    check_levels(k)?;
    let mut pairs = Vec::new();
    let mut total = 0;
    while pairs.len() < k {
        pairs.extend((0..=total).map(|n1| (n1, total - n1)));
        total += 1;
    }
    let mut levels = parabolic_quantization(j, l, params, DEFAULT_KAPPA_RANGE, &pairs, mesh)?;
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then((a.n1, a.n2).cmp(&(b.n1, b.n2))));
    levels.truncate(k);
    Ok(levels)
}
