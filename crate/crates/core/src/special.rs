//! Jacobi and confluent hypergeometric polynomials, the delta exponents of the
//! separated solutions, and finite-difference residuals of the closed-form
//! wavefunctions in their ODEs.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::params::{Convention, HalfInt, ModelParams};

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the three-term recurrence.
pub fn jacobi_p(n: u32, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > -1.0 && b > -1.0) {
        return Err(SpectraError::DomainError { a, b });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * ((a + b + 2.0) * x + (a - b));
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `1F1(-n, b; x)`, a polynomial of degree `n`, by its finite sum.
pub fn kummer_poly(n: u32, b: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        if b + kf == 0.0 {
            return Err(SpectraError::ParameterPole { n: n as usize, b });
        }
        term *= (kf - n as f64) / ((b + kf) * (kf + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaVariant {
    /// `4 c / hbar^2` under the root, labels `(J, L)`.
    Kepler,
    /// `2 lambda / hbar^2` under the root, labels `(T, K)`.
    Oscillator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaExponents {
    pub delta1: f64,
    pub delta2: f64,
    pub variant: DeltaVariant,
}

impl DeltaExponents {
    pub fn mean(&self) -> f64 {
        0.5 * (self.delta1 + self.delta2)
    }
}

/// `-1 + sqrt(k c / hbar^2 + (2z+1)^2) - z` with `k = 4` or `k = 2`.
pub fn delta(variant: DeltaVariant, coupling: f64, z: HalfInt, hbar: f64) -> f64 {
    let k = match variant {
        DeltaVariant::Kepler => 4.0,
        DeltaVariant::Oscillator => 2.0,
    };
    let z = z.value();
    -1.0 + (k * coupling / (hbar * hbar) + (2.0 * z + 1.0).powi(2)).sqrt() - z
}

pub fn delta_exponents(
    variant: DeltaVariant,
    couplings: (f64, f64),
    z1: HalfInt,
    z2: HalfInt,
    hbar: f64,
) -> DeltaExponents {
    DeltaExponents {
        delta1: delta(variant, couplings.0, z1, hbar),
        delta2: delta(variant, couplings.1, z2, hbar),
        variant,
    }
}

/// Coordinate map `x(s)` used to place residual grids; both maps resolve the
/// singular end points geometrically.
#[derive(Debug, Clone, Copy, PartialEq)]
enum GridMap {
    /// `theta = 2 atan(e^s)`.
    Angular,
    /// `x = c ln(1 + e^s)`.
    Softplus(f64),
    /// `x = c sqrt(ln(1 + e^s))`, linear in `s` for `x^2`; suits Gaussian tails.
    SqrtSoftplus(f64),
}

impl GridMap {
    fn x(self, s: f64) -> f64 {
        match self {
            GridMap::Angular => 2.0 * s.exp().atan(),
            GridMap::Softplus(c) => c * softplus(s),
            GridMap::SqrtSoftplus(c) => c * softplus(s).sqrt(),
        }
    }

    fn dx(self, s: f64) -> f64 {
        match self {
            GridMap::Angular => self.x(s).sin(),
            GridMap::Softplus(c) => c * logistic(s),
            GridMap::SqrtSoftplus(c) => 0.5 * c * logistic(s) / softplus(s).sqrt(),
        }
    }

    fn d2x(self, s: f64) -> f64 {
        match self {
            GridMap::Angular => {
                let t = self.x(s);
                t.sin() * t.cos()
            }
            GridMap::Softplus(c) => {
                let g = logistic(s);
                c * g * (1.0 - g)
            }
            GridMap::SqrtSoftplus(c) => {
                let (g, sp) = (logistic(s), softplus(s));
                c * (0.5 * g * (1.0 - g) / sp.sqrt() - 0.25 * g * g / (sp * sp.sqrt()))
            }
        }
    }

    fn s(self, x: f64) -> f64 {
        match self {
            GridMap::Angular => (0.5 * x).tan().ln(),
            GridMap::Softplus(c) => (x / c).exp_m1().ln(),
            GridMap::SqrtSoftplus(c) => (x / c).powi(2).exp_m1().ln(),
        }
    }
}

fn logistic(s: f64) -> f64 {
    1.0 / (1.0 + (-s).exp())
}

fn softplus(s: f64) -> f64 {
    if s > 30.0 {
        s + (-s).exp()
    } else {
        s.exp().ln_1p()
    }
}

/// Points excluded at each end of a residual grid.
pub const RESIDUAL_MARGIN: usize = 5;

/// Residual normalization window, as a fraction of the grid.
pub const RESIDUAL_WINDOW_FRACTION: usize = 40;

/// Distance of the angular grid from the poles.
pub const ANGULAR_EPS: f64 = 1e-2;

/// Maximum over interior grid points of `|sum(terms)|`, relative to the largest
/// `sum(|terms|)` within a window of `points / RESIDUAL_WINDOW_FRACTION` nodes.
/// Derivatives are 4th-order centered differences in the stretched variable `s`.
///
/// The window keeps isolated points where every term vanishes at once (nodes of
/// symmetric solutions) from turning rounding noise into an order-one ratio.
fn max_relative_residual<F, T, const K: usize>(map: GridMap, lo: f64, hi: f64, points: usize, f: F, terms: T) -> f64
where
    F: Fn(f64) -> f64,
    T: Fn(f64, f64, f64, f64) -> [f64; K],
{
    assert!(points > 2 * RESIDUAL_MARGIN + 1, "grid too small");
    let (s0, s1) = (map.s(lo), map.s(hi));
    let h = (s1 - s0) / (points - 1) as f64;
    let s_at = |i: usize| s0 + h * i as f64;
    let vals: Vec<f64> = (0..points).map(|i| f(map.x(s_at(i)))).collect();

    let interior = RESIDUAL_MARGIN..points - RESIDUAL_MARGIN;
    let (net, size): (Vec<f64>, Vec<f64>) = interior
        .clone()
        .map(|i| {
            let (m2, m1, c, p1, p2) = (vals[i - 2], vals[i - 1], vals[i], vals[i + 1], vals[i + 2]);
            let fs = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
            let fss = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
            let s = s_at(i);
            let (x, dx, d2x) = (map.x(s), map.dx(s), map.d2x(s));
            let fx = fs / dx;
            let fxx = (fss - d2x * fx) / (dx * dx);
            let t = terms(x, c, fx, fxx);
            (t.iter().sum::<f64>().abs(), t.iter().map(|v| v.abs()).sum::<f64>())
        })
        .unzip();

    let w = (points / RESIDUAL_WINDOW_FRACTION).max(2);
    let mut worst = 0.0_f64;
    for (k, r) in net.iter().enumerate() {
        let lo = k.saturating_sub(w);
        let hi = (k + w + 1).min(size.len());
        let scale = size[lo..hi].iter().cloned().fold(0.0, f64::max);
        if scale > 0.0 {
            worst = worst.max(r / scale);
        }
    }
    worst
}

/// Largest `x` (on a log-spaced scan) where `|f|` is still above `1e-12` of its
/// peak.
fn decay_cutoff(f: impl Fn(f64) -> f64, scale: f64) -> f64 {
    let n = 4000;
    let (lo, hi) = ((scale * 1e-3).ln(), (scale * 1e5).ln());
    let xs: Vec<f64> = (0..=n).map(|k| (lo + (hi - lo) * k as f64 / n as f64).exp()).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x).abs()).map(|v| if v.is_finite() { v } else { 0.0 }).collect();
    let peak = vals.iter().cloned().fold(0.0, f64::max);
    let last = vals.iter().rposition(|&v| v >= 1e-12 * peak).unwrap_or(n);
    xs[(last + 1).min(n)]
}

/// `(1 + cos t, 1 - cos t)` without cancellation near the poles.
pub(crate) fn one_plus_minus_cos(t: f64) -> (f64, f64) {
    let (s, c) = (0.5 * t).sin_cos();
    (2.0 * c * c, 2.0 * s * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularPicture {
    KeplerHyperspherical,
    OscillatorEuler,
}

/// An angular equation together with the solution label `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularCase {
    pub picture: AngularPicture,
    /// Half-integer in the consistent reading (`lambda - (z1+z2)/2` is the
    /// Jacobi degree), integer `>= z1 + z2` as printed.
    pub lambda: f64,
    /// `J` or `T`, attached to the `1 + cos(theta)` side.
    pub z1: HalfInt,
    /// `L` or `K`, attached to the `1 - cos(theta)` side.
    pub z2: HalfInt,
    pub couplings: (f64, f64),
    pub hbar: f64,
}

impl AngularCase {
    pub fn deltas(&self) -> DeltaExponents {
        let variant = match self.picture {
            AngularPicture::KeplerHyperspherical => DeltaVariant::Kepler,
            AngularPicture::OscillatorEuler => DeltaVariant::Oscillator,
        };
        delta_exponents(variant, self.couplings, self.z1, self.z2, self.hbar)
    }

    /// Coefficients of `1/(1+cos)` and `1/(1-cos)` divided by 2.
    fn strengths(&self) -> (f64, f64) {
        let h2 = self.hbar * self.hbar;
        let k = match self.picture {
            AngularPicture::KeplerHyperspherical => 1.0,
            AngularPicture::OscillatorEuler => 0.5,
        };
        (
            self.z1.casimir() + k * self.couplings.0 / h2,
            self.z2.casimir() + k * self.couplings.1 / h2,
        )
    }

    /// `Lambda = (lambda + dbar)(lambda + dbar + 3)`; in the Euler picture this
    /// is `Gamma / 4`.
    pub fn separation_constant(&self) -> f64 {
        let l = self.lambda + self.deltas().mean();
        l * (l + 3.0)
    }

    fn jacobi_degree(&self, convention: Convention) -> Result<u32> {
        let idx = match convention {
            Convention::AsPrinted => self.lambda - self.z1.value() - self.z2.value(),
            Convention::Consistent => self.lambda - 0.5 * (self.z1.value() + self.z2.value()),
        };
        let rounded = idx.round();
        if idx < -1e-9 || (idx - rounded).abs() > 1e-9 {
            return Err(SpectraError::IndexError { index: idx });
        }
        Ok(rounded as u32)
    }

    /// The closed-form `F(theta)`, without normalization.
    pub fn wavefunction(&self, convention: Convention) -> Result<impl Fn(f64) -> f64> {
        let k = self.jacobi_degree(convention)?;
        let d = self.deltas();
        let s1 = d.delta1 + self.z1.value();
        let s2 = d.delta2 + self.z2.value();
        let shift = match convention {
            Convention::AsPrinted => 0.0,
            Convention::Consistent => 1.0,
        };
        let (a, b) = (s2 + shift, s1 + shift);
        jacobi_p(0, a, b, 0.0)?;
        Ok(move |t: f64| {
            let (plus, minus) = one_plus_minus_cos(t);
            plus.powf(0.5 * s1) * minus.powf(0.5 * s2) * jacobi_p(k, a, b, t.cos()).unwrap_or(f64::NAN)
        })
    }
}

/// Pointwise-relative residual of the angular equation on `points` grid points
/// in `[eps, pi - eps]`.
pub fn angular_residual(case: &AngularCase, convention: Convention, points: usize) -> Result<f64> {
    let f = case.wavefunction(convention)?;
    let (a1, a2) = case.strengths();
    let lam = case.separation_constant();
    let terms = |t: f64, v: f64, d1: f64, d2: f64| {
        let (plus, minus) = one_plus_minus_cos(t);
        [
            d2,
            3.0 / t.tan() * d1,
            -2.0 * a2 / minus * v,
            -2.0 * a1 / plus * v,
            lam * v,
        ]
    };
    Ok(max_relative_residual(
        GridMap::Angular,
        ANGULAR_EPS,
        std::f64::consts::PI - ANGULAR_EPS,
        points,
        f,
        terms,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParabolicSide {
    Mu,
    Nu,
}

/// A radial-type equation with the quantum numbers of its closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "picture", rename_all = "snake_case")]
pub enum RadialCase {
    /// 5D radial equation; `ell = lambda + (delta1 + delta2)/2`.
    Kepler { n: u32, ell: f64, c0: f64, hbar: f64 },
    /// 8D radial equation; `Gamma = 4 ell (ell + 3)`.
    Oscillator8d { n: u32, ell: f64, omega: f64, hbar: f64 },
    Parabolic {
        side: ParabolicSide,
        n1: u32,
        n2: u32,
        j: HalfInt,
        l: HalfInt,
        params: ModelParams,
    },
    /// One 4D factor of the cylindrical separation, in `x = (omega/hbar) rho^2`.
    Cylindrical { n: u32, z: HalfInt, coupling: f64, hbar: f64 },
}

impl RadialCase {
    pub fn kepler(n: u32, lambda: f64, deltas: &DeltaExponents, params: &ModelParams) -> Self {
        RadialCase::Kepler {
            n,
            ell: lambda + deltas.mean(),
            c0: params.c0,
            hbar: params.hbar,
        }
    }

    pub fn oscillator(n: u32, lambda: f64, deltas: &DeltaExponents, omega: f64, hbar: f64) -> Self {
        RadialCase::Oscillator8d {
            n,
            ell: lambda + deltas.mean(),
            omega,
            hbar,
        }
    }
}

/// `kappa`, the separation constant `nu = hbar Lambda~ / 2` and the energy of
/// a parabolic state.
pub fn parabolic_closed_form(n1: u32, n2: u32, j: HalfInt, l: HalfInt, params: &ModelParams) -> (f64, f64, f64) {
    let d = delta_exponents(DeltaVariant::Kepler, (params.c1, params.c2), j, l, params.hbar);
    let s1 = d.delta1 + j.value();
    let s2 = d.delta2 + l.value();
    let h2 = params.hbar * params.hbar;
    let kappa = params.c0 / (h2 * (n1 as f64 + n2 as f64 + 0.5 * (s1 + s2) + 2.0));
    let nu = kappa * (n1 as f64 + 0.5 * s1 + 1.0) - params.c0 / (2.0 * h2);
    (kappa, nu, -h2 * kappa * kappa / 2.0)
}

/// Pointwise-relative residual of a radial-type equation on its closed-form
/// solution, over `points` grid points from near the origin to the point where the
/// solution has decayed by `1e-12`, both in natural units of the equation.
pub fn radial_residual(case: &RadialCase, convention: Convention, points: usize) -> Result<f64> {
    match *case {
        RadialCase::Kepler { n, ell, c0, hbar } => {
            let h2 = hbar * hbar;
            let kappa = 2.0 * c0 / (h2 * (n as f64 + ell + 2.0));
            let e = -kappa * kappa * h2 / 8.0;
            let lam = ell * (ell + 3.0);
            let b = 4.0 + 2.0 * ell;
            kummer_poly(n, b, 0.0)?;
            let f = move |r: f64| {
                let t = kappa * r;
                (-0.5 * t).exp() * t.powf(ell) * kummer_poly(n, b, t).unwrap_or(f64::NAN)
            };
            let terms = |r: f64, v: f64, d1: f64, d2: f64| {
                [d2, 4.0 / r * d1, 2.0 * e / h2 * v, 2.0 * c0 / (h2 * r) * v, -lam / (r * r) * v]
            };
            Ok(residual_to_decay(false, 1.0 / kappa, points, f, terms))
        }
        RadialCase::Oscillator8d { n, ell, omega, hbar } => {
            let h2 = hbar * hbar;
            let kappa = omega / hbar;
            let eps = 2.0 * hbar * omega * (n as f64 + ell + 2.0);
            let gamma = 4.0 * ell * (ell + 3.0);
            let b = 4.0 + 2.0 * ell;
            kummer_poly(n, b, 0.0)?;
            let f = move |u: f64| {
                let t = kappa * u * u;
                (-0.5 * t).exp() * t.powf(ell) * kummer_poly(n, b, t).unwrap_or(f64::NAN)
            };
            let terms = |u: f64, v: f64, d1: f64, d2: f64| {
                [
                    d2,
                    7.0 / u * d1,
                    -gamma / (u * u) * v,
                    2.0 * eps / h2 * v,
                    -omega * omega * u * u / h2 * v,
                ]
            };
            Ok(residual_to_decay(true, 1.0 / kappa.sqrt(), points, f, terms))
        }
        RadialCase::Parabolic {
            side,
            n1,
            n2,
            j,
            l,
            params,
        } => {
            let h2 = params.hbar * params.hbar;
            let (kappa, nu, e) = parabolic_closed_form(n1, n2, j, l, &params);
            let (n, z, c, sep) = match side {
                ParabolicSide::Mu => (n1, j, params.c1, nu),
                ParabolicSide::Nu => (n2, l, params.c2, -nu),
            };
            let sigma = delta(DeltaVariant::Kepler, c, z, params.hbar) + z.value();
            let strength = z.casimir() + c / h2;
            let power = match convention {
                Convention::AsPrinted => sigma,
                Convention::Consistent => 0.5 * sigma,
            };
            let b = sigma + 2.0;
            kummer_poly(n, b, 0.0)?;
            let f = move |m: f64| {
                let t = kappa * m;
                (-0.5 * t).exp() * t.powf(power) * kummer_poly(n, b, t).unwrap_or(f64::NAN)
            };
            let constant = params.c0 / (2.0 * h2) + sep;
            let terms = |m: f64, v: f64, d1: f64, d2: f64| {
                [m * d2, 2.0 * d1, e * m / (2.0 * h2) * v, -strength / m * v, constant * v]
            };
            Ok(residual_to_decay(false, 1.0 / kappa, points, f, terms))
        }
        RadialCase::Cylindrical { n, z, coupling, hbar } => {
            let sigma = delta(DeltaVariant::Oscillator, coupling, z, hbar) + z.value();
            let strength = z.casimir() + coupling / (2.0 * hbar * hbar);
            let eta = n as f64 + 0.5 * sigma + 1.0;
            let b = sigma + 2.0;
            kummer_poly(n, b, 0.0)?;
            let f = move |x: f64| (-0.5 * x).exp() * x.powf(0.5 * sigma) * kummer_poly(n, b, x).unwrap_or(f64::NAN);
            let terms = |x: f64, v: f64, d1: f64, d2: f64| [x * d2, 2.0 * d1, -strength / x * v, -0.25 * x * v, eta * v];
            Ok(residual_to_decay(false, 1.0, points, f, terms))
        }
    }
}

/// Residual on `[lo * scale, cutoff]`. Exponential tails use a softplus map
/// with stretch `SOFTPLUS_STRETCH * scale`, Gaussian tails its square-root
/// variant with `SQRT_SOFTPLUS_STRETCH * scale`.
fn residual_to_decay<F, T, const K: usize>(gaussian: bool, scale: f64, points: usize, f: F, terms: T) -> f64
where
    F: Fn(f64) -> f64,
    T: Fn(f64, f64, f64, f64) -> [f64; K],
{
    let hi = decay_cutoff(&f, scale);
    let (map, lo) = if gaussian {
        (GridMap::SqrtSoftplus(SQRT_SOFTPLUS_STRETCH * scale), 1e-2 * scale)
    } else {
        (GridMap::Softplus(SOFTPLUS_STRETCH * scale), 1e-3 * scale)
    };
    max_relative_residual(map, lo, hi, points, f, terms)
}

const SOFTPLUS_STRETCH: f64 = 4.0;
const SQRT_SOFTPLUS_STRETCH: f64 = 2.0;

/// Observed order `log2(r_coarse / r_fine)` between grids of `points` and
/// `2 points - 1` nodes, i.e. a halved step.
pub fn convergence_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}
