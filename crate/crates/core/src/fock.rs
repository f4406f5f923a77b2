//! Finite-dimensional matrix realization of the deformed oscillator and of the
//! generators `A`, `B`, `C`, with numerical checks of the quadratic algebra and
//! of the cubic Casimir.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{structure_function_raw, UnirrepSolution};
use crate::error::{invalid, Result, SpectraError};
use crate::params::{Convention, ModelParams, QuantumNumbers};

/// `3 * 2^20`.
const RHO_SCALE: f64 = 3_145_728.0;

/// Scalars substituted for the central elements `H`, `L^2`, `T^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralValues {
    pub energy: f64,
    pub l_squared: f64,
    pub t_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformedOscillatorRep {
    pub dim: usize,
    pub number_diag: Vec<f64>,
    /// `sqrt(Phi(n))` for `n = 1..=p`; the matrix element `<n-1| b |n>`.
    pub ladder_sub: Vec<f64>,
    pub u: f64,
    pub central: CentralValues,
}

impl DeformedOscillatorRep {
    pub fn p(&self) -> usize {
        self.dim - 1
    }

    /// The lowering operator `b` as a matrix.
    pub fn lowering(&self) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(self.dim, self.dim);
        for (k, &l) in self.ladder_sub.iter().enumerate() {
            b[(k, k + 1)] = l;
        }
        b
    }

    pub fn number(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.number_diag))
    }
}

pub fn build_rep(sol: &UnirrepSolution, qn: &QuantumNumbers, params: &ModelParams) -> Result<DeformedOscillatorRep> {
    let p = sol.p as usize;
    let mut ladder_sub = Vec::with_capacity(p);
    for n in 1..=p {
        let phi = structure_function_raw(n as f64, sol.u, sol.energy, params, qn);
        if phi <= 0.0 || !phi.is_finite() {
            return Err(SpectraError::PositivityViolation { x: n as f64, value: phi });
        }
        ladder_sub.push(phi.sqrt());
    }
    Ok(DeformedOscillatorRep {
        dim: p + 1,
        number_diag: (0..=p).map(|n| n as f64).collect(),
        ladder_sub,
        u: sol.u,
        central: CentralValues {
            energy: sol.energy,
            l_squared: qn.l_squared(params.hbar),
            t_squared: qn.t_squared(params.hbar),
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrices {
    pub convention: Convention,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

impl GeneratorMatrices {
    /// Diagonal and off-diagonal parts of `B`.
    fn split_b(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let d = DMatrix::from_diagonal(&self.b.diagonal());
        let o = &self.b - &d;
        (d, o)
    }
}

/// Coefficients entering the algebra relations and the Casimir for a given
/// convention.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Coefficients {
    /// Constant term of `[A,C]` (printed form).
    eps: f64,
    /// Constant term of `[A,C]` implied by the printed Casimir.
    eps_alt: f64,
    /// Constant term of `[B,C]`.
    zeta: f64,
    /// Summands of `eps` and `zeta`, kept apart so that a constant that cancels
    /// to rounding is still measured against the size of its parts.
    eps_parts: [f64; 2],
    eps_alt_parts: [f64; 2],
    zeta_parts: [f64; 3],
    /// Coefficient of `B` in the Casimir.
    k_b: f64,
    /// Coefficient of `A` in the Casimir.
    k_a: f64,
    /// The scalar value of the Casimir.
    k: f64,
    /// Largest summand of `k`.
    k_scale: f64,
}

fn coefficients(convention: Convention, central: &CentralValues, params: &ModelParams) -> Coefficients {
    let c0 = params.reduced_c0();
    let (c1, c2) = (params.c1, params.c2);
    let CentralValues {
        energy: h,
        l_squared: l2,
        t_squared: t2,
    } = *central;

    let eps_parts = [-2.0 * c0 * (c1 - c2), -4.0 * c0 * t2];
    let zeta_parts = [-4.0 * l2 * h, (16.0 - 4.0 * c1 - 4.0 * c2) * h, 2.0 * c0 * c0];
    let eps_alt_parts = [-4.0 * c0 * (c1 - c2), -4.0 * c0 * t2];
    let eps = eps_parts.iter().sum::<f64>();
    let zeta = zeta_parts.iter().sum::<f64>();
    let (k_b, k_a) = match convention {
        Convention::AsPrinted => (
            -2.0 * (4.0 * c0 * (c2 - c1) - 4.0 * c0 * t2),
            2.0 * ((16.0 - 8.0 * c1 - 8.0 * c2) * h - 4.0 * l2 * h + 2.0 * c0 * c0),
        ),
        Convention::Consistent => (-2.0 * eps, 2.0 * zeta),
    };
    let k_parts = [
        -8.0 * h * t2 * t2,
        16.0 * l2 * h,
        -8.0 * (c1 - c2) * t2 * h,
        -2.0 * ((c1 - c2).powi(2) + 8.0 * (2.0 - c1 - c2)) * h,
        4.0 * c0 * c0 * l2,
        4.0 * c0 * c0 * (c1 + c2 - 1.0),
    ];
    Coefficients {
        eps,
        eps_alt: eps_alt_parts.iter().sum(),
        zeta,
        eps_parts,
        eps_alt_parts,
        zeta_parts,
        k_b,
        k_a,
        k: k_parts.iter().sum(),
        k_scale: k_parts.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
    }
}

fn diag_part(convention: Convention, y: f64, central: &CentralValues, params: &ModelParams) -> f64 {
    let c0 = params.reduced_c0();
    let split = match convention {
        Convention::AsPrinted => c0 * (params.c1 - params.c2),
        Convention::Consistent => 0.5 * c0 * (params.c1 - params.c2),
    };
    (split + c0 * central.t_squared) / (y * y - 0.25)
}

fn rho(convention: Convention, y: f64) -> f64 {
    match convention {
        Convention::AsPrinted => 1.0 / (RHO_SCALE * y * (1.0 + y) * (1.0 + 2.0 * y * y)),
        Convention::Consistent => 1.0 / ((1.0 + 2.0 * y) * (RHO_SCALE * y * (1.0 + y)).sqrt()),
    }
}

pub fn build_generators(
    rep: &DeformedOscillatorRep,
    params: &ModelParams,
    convention: Convention,
) -> Result<GeneratorMatrices> {
    let dim = rep.dim;
    let ys: Vec<f64> = rep.number_diag.iter().map(|n| n + rep.u).collect();
    for (n, &y) in ys.iter().enumerate() {
        if (y * y - 0.25).abs() <= 1e-14 {
            return Err(SpectraError::DiagonalPole { n });
        }
        if y <= 0.0 {
            return Err(invalid("u", format!("n + u must be positive, got {y} at n = {n}")));
        }
    }

    let a = DMatrix::from_fn(dim, dim, |i, j| if i == j { ys[i] * ys[i] - 2.25 } else { 0.0 });
    let mut b = DMatrix::zeros(dim, dim);
    for (n, &y) in ys.iter().enumerate() {
        b[(n, n)] = diag_part(convention, y, &rep.central, params);
    }
    for (n, &l) in rep.ladder_sub.iter().enumerate() {
        let t = rho(convention, ys[n]) * l;
        b[(n, n + 1)] = t;
        b[(n + 1, n)] = t;
    }
    let c = &a * &b - &b * &a;
    Ok(GeneratorMatrices { convention, a, b, c })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub convention: Convention,
    pub residual_q1: f64,
    /// `[A,C]` relation with its printed constant term.
    pub residual_q2: f64,
    /// `[A,C]` relation with the constant term implied by the printed Casimir.
    pub residual_q2_alt: f64,
    /// `[B,C]` relation at `rho` as given by the convention.
    pub residual_q3_raw: f64,
    /// `[B,C]` relation after rescaling `rho -> s rho`.
    pub residual_q3: f64,
    /// Fitted `s`; `None` when the representation has no off-diagonal part.
    pub rho_calibration: Option<f64>,
    pub casimir_offdiag: f64,
    pub casimir_scalar_mismatch: f64,
    pub casimir_commutator_a: f64,
    pub casimir_commutator_b: f64,
}

impl AlgebraReport {
    pub fn calibration_or_one(&self) -> f64 {
        self.rho_calibration.unwrap_or(1.0)
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.amax()
}

fn anticomm(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y + y * x
}

fn comm(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y - y * x
}

/// Residual of a relation `sum(terms) = 0`, relative to the largest term.
fn relative(terms: &[DMatrix<f64>]) -> f64 {
    let scale = terms.iter().map(max_abs).fold(0.0, f64::max);
    let total = terms.iter().skip(1).fold(terms[0].clone(), |acc, t| acc + t);
    if scale == 0.0 {
        0.0
    } else {
        max_abs(&total) / scale
    }
}

fn identity_times(dim: usize, v: f64) -> DMatrix<f64> {
    DMatrix::identity(dim, dim) * v
}

fn q2_terms(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, eps: &[f64]) -> Vec<DMatrix<f64>> {
    let mut terms = vec![comm(a, c), -2.0 * anticomm(a, b), -8.0 * b];
    terms.extend(eps.iter().map(|&e| identity_times(a.nrows(), -e)));
    terms
}

fn q3_terms(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, energy: f64, zeta: &[f64]) -> Vec<DMatrix<f64>> {
    let mut terms = vec![comm(b, c), 2.0 * b * b, -8.0 * energy * a];
    terms.extend(zeta.iter().map(|&z| identity_times(a.nrows(), -z)));
    terms
}

/// Generators with the off-diagonal part of `B` scaled by `s`.
fn rescaled(gen: &GeneratorMatrices, s: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let (d, o) = gen.split_b();
    let b = d + o * s;
    let c = comm(&gen.a, &b);
    (b, c)
}

fn q3_residual_matrix(gen: &GeneratorMatrices, s: f64, energy: f64, zeta: f64) -> DMatrix<f64> {
    let (b, c) = rescaled(gen, s);
    let terms = q3_terms(&gen.a, &b, &c, energy, &[zeta]);
    terms.iter().skip(1).fold(terms[0].clone(), |acc, t| acc + t)
}

/// Minimizes the Frobenius norm of the `[B,C]` residual over `s > 0`.
///
/// The residual is a quadratic matrix polynomial `R0 + s R1 + s^2 R2`, so its
/// squared norm is a quartic whose stationary points solve a cubic.
fn fit_rho_scale(gen: &GeneratorMatrices, energy: f64, zeta: f64) -> Option<f64> {
    if gen.a.nrows() < 2 {
        return None;
    }
    let r0 = q3_residual_matrix(gen, 0.0, energy, zeta);
    let rp = q3_residual_matrix(gen, 1.0, energy, zeta);
    let rm = q3_residual_matrix(gen, -1.0, energy, zeta);
    let r1 = (&rp - &rm) * 0.5;
    let r2 = (&rp + &rm) * 0.5 - &r0;

    let dot = |x: &DMatrix<f64>, y: &DMatrix<f64>| x.dot(y);
    // |R|^2 = a4 s^4 + a3 s^3 + a2 s^2 + a1 s + a0
    let a4 = dot(&r2, &r2);
    let a3 = 2.0 * dot(&r1, &r2);
    let a2 = dot(&r1, &r1) + 2.0 * dot(&r0, &r2);
    let a1 = 2.0 * dot(&r0, &r1);
    let a0 = dot(&r0, &r0);
    let norm2 = |s: f64| (((a4 * s + a3) * s + a2) * s + a1) * s + a0;

    let roots = cubic_real_roots(4.0 * a4, 3.0 * a3, 2.0 * a2, a1);
    roots
        .into_iter()
        .filter(|s| *s > 0.0 && s.is_finite())
        .map(|s| polish_stationary(s, a4, a3, a2, a1))
        .min_by(|x, y| norm2(*x).total_cmp(&norm2(*y)))
}

/// Newton steps on the derivative of the quartic.
fn polish_stationary(mut s: f64, a4: f64, a3: f64, a2: f64, a1: f64) -> f64 {
    for _ in 0..4 {
        let d1 = ((4.0 * a4 * s + 3.0 * a3) * s + 2.0 * a2) * s + a1;
        let d2 = (12.0 * a4 * s + 6.0 * a3) * s + 2.0 * a2;
        if d2 == 0.0 {
            break;
        }
        let step = d1 / d2;
        s -= step;
        if step.abs() <= 1e-16 * s.abs() {
            break;
        }
    }
    s
}

/// Real roots of `a x^3 + b x^2 + c x + d`.
fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return if c == 0.0 { vec![] } else { vec![-d / c] };
        }
        let disc = c * c - 4.0 * b * d;
        if disc < 0.0 {
            return vec![];
        }
        let q = -0.5 * (c + c.signum() * disc.sqrt());
        let mut out = vec![q / b];
        if q != 0.0 {
            out.push(d / q);
        }
        return out;
    }
    let (b, c, d) = (b / a, c / a, d / a);
    let q = (b * b - 3.0 * c) / 9.0;
    let r = (2.0 * b * b * b - 9.0 * b * c + 27.0 * d) / 54.0;
    if r * r < q * q * q {
        let theta = (r / q.powf(1.5)).clamp(-1.0, 1.0).acos();
        let sq = -2.0 * q.sqrt();
        (0..3)
            .map(|k| sq * ((theta + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() - b / 3.0)
            .collect()
    } else {
        let big_a = -r.signum() * (r.abs() + (r * r - q * q * q).sqrt()).cbrt();
        let big_b = if big_a == 0.0 { 0.0 } else { q / big_a };
        vec![big_a + big_b - b / 3.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CasimirCheck {
    /// Largest off-diagonal entry over the largest diagonal entry.
    pub offdiag: f64,
    /// Largest deviation of the diagonal from the scalar value, over the largest
    /// summand of the scalar expression.
    pub scalar_mismatch: f64,
    /// `|[K, A]|` over `|K| |A|`.
    pub commutator_a: f64,
    /// `|[K, B]|` over `|K| |B|`.
    pub commutator_b: f64,
}

/// The Casimir matrix built from `B` with its off-diagonal part scaled by `s`.
pub fn casimir_matrix(gen: &GeneratorMatrices, rep: &DeformedOscillatorRep, params: &ModelParams, s: f64) -> DMatrix<f64> {
    let co = coefficients(gen.convention, &rep.central, params);
    let (b, c) = rescaled(gen, s);
    let a = &gen.a;
    let b2 = &b * &b;
    &c * &c - 2.0 * anticomm(a, &b2) - 4.0 * &b2 + co.k_b * &b + 8.0 * rep.central.energy * a * a + co.k_a * a
}

/// The scalar the Casimir takes on the representation.
pub fn casimir_scalar(central: &CentralValues, params: &ModelParams) -> f64 {
    coefficients(Convention::Consistent, central, params).k
}

pub fn casimir_check(gen: &GeneratorMatrices, rep: &DeformedOscillatorRep, params: &ModelParams, s: f64) -> CasimirCheck {
    let k = casimir_matrix(gen, rep, params, s);
    let dim = rep.dim;
    let diag_scale = k.diagonal().amax();
    let mut off = 0.0_f64;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                off = off.max(k[(i, j)].abs());
            }
        }
    }
    let co = coefficients(Convention::Consistent, &rep.central, params);
    let scalar = co.k;
    let mismatch = k.diagonal().iter().map(|v| (v - scalar).abs()).fold(0.0, f64::max);
    let ratio = |num: f64, den: f64| if den == 0.0 { num } else { num / den };

    let (b, _) = rescaled(gen, s);
    let k_norm = max_abs(&k);
    CasimirCheck {
        offdiag: ratio(off, diag_scale),
        scalar_mismatch: ratio(mismatch, co.k_scale),
        commutator_a: ratio(max_abs(&comm(&k, &gen.a)), k_norm * max_abs(&gen.a)),
        commutator_b: ratio(max_abs(&comm(&k, &b)), k_norm * max_abs(&b)),
    }
}

pub fn verify_algebra(gen: &GeneratorMatrices, rep: &DeformedOscillatorRep, params: &ModelParams) -> AlgebraReport {
    let co = coefficients(gen.convention, &rep.central, params);
    let energy = rep.central.energy;
    let (a, b, c) = (&gen.a, &gen.b, &gen.c);

    let q1 = relative(&[c.clone(), -comm(a, b)]);
    let q2 = relative(&q2_terms(a, b, c, &co.eps_parts));
    let q2_alt = relative(&q2_terms(a, b, c, &co.eps_alt_parts));
    let q3_raw = relative(&q3_terms(a, b, c, energy, &co.zeta_parts));

    let rho_calibration = fit_rho_scale(gen, energy, co.zeta);
    let s = rho_calibration.unwrap_or(1.0);
    let (bs, cs) = rescaled(gen, s);
    let q3 = relative(&q3_terms(a, &bs, &cs, energy, &co.zeta_parts));
    let cas = casimir_check(gen, rep, params, s);

    AlgebraReport {
        convention: gen.convention,
        residual_q1: q1,
        residual_q2: q2,
        residual_q2_alt: q2_alt,
        residual_q3_raw: q3_raw,
        residual_q3: q3,
        rho_calibration,
        casimir_offdiag: cas.offdiag,
        casimir_scalar_mismatch: cas.scalar_mismatch,
        casimir_commutator_a: cas.commutator_a,
        casimir_commutator_b: cas.commutator_b,
    }
}

/// Builds the unirrep, its generators and the report in one go.
pub fn analyze(p: u32, params: &ModelParams, qn: &QuantumNumbers, convention: Convention) -> Result<AlgebraReport> {
    let sol = crate::algebra::solve_unirrep(p, params, qn)?;
    let rep = build_rep(&sol, qn, params)?;
    let gen = build_generators(&rep, params, convention)?;
    Ok(verify_algebra(&gen, &rep, params))
}
