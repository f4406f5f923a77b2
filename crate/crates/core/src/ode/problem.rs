use serde::{Deserialize, Serialize};

use super::tridiag::{bisect_eigenvalue, ql_eigenvalues};
use crate::error::{invalid, Result, SpectraError};
use crate::special::one_plus_minus_cos;

/// Relative tolerance on `|richardson - fine|` for a level to count as converged.
pub const RICHARDSON_TOLERANCE: f64 = 1e-3;

/// `V(x)` in `-chi'' + V chi = mu chi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `inv_x2 / x^2 + inv_x / x + x_coef x + x2 x^2 + constant`.
    Radial {
        inv_x2: f64,
        inv_x: f64,
        x_coef: f64,
        x2: f64,
        constant: f64,
    },
    /// `a / (1 + cos x) + b / (1 - cos x) + cot2 cot^2 x + constant` on `(0, pi)`.
    Angular {
        inv_one_plus_cos: f64,
        inv_one_minus_cos: f64,
        cot2: f64,
        constant: f64,
    },
}

impl Potential {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Potential::Radial {
                inv_x2,
                inv_x,
                x_coef,
                x2,
                constant,
            } => inv_x2 / (x * x) + inv_x / x + x_coef * x + x2 * x * x + constant,
            Potential::Angular {
                inv_one_plus_cos,
                inv_one_minus_cos,
                cot2,
                constant,
            } => {
                let (plus, minus) = one_plus_minus_cos(x);
                let cot = 1.0 / x.tan();
                inv_one_plus_cos / plus + inv_one_minus_cos / minus + cot2 * cot * cot + constant
            }
        }
    }
}

/// The substitution that brought the original equation to `-chi'' + V chi = mu chi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    /// `R(x) = chi(x) / x^power`.
    Power { power: f64 },
    /// `F(theta) = g(theta) / sin(theta)^power`.
    SinePower { power: f64 },
    /// Original variable `t^2`, and `f = chi(t) / t^power`.
    SquaredVariable { power: f64 },
}

/// `physical = scale * mu + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueMap {
    pub scale: f64,
    pub shift: f64,
}

impl EigenvalueMap {
    pub const IDENTITY: EigenvalueMap = EigenvalueMap { scale: 1.0, shift: 0.0 };

    pub fn apply(&self, mu: f64) -> f64 {
        self.scale * mu + self.shift
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenSolver {
    /// Full spectrum by implicit QL.
    #[default]
    Ql,
    /// Only the requested levels, by Sturm-count bisection.
    Bisection,
}

/// A symmetrized Sturm-Liouville problem with Dirichlet ends, discretized by
/// second-order differences on a uniform grid of `mesh_size` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SturmLiouvilleProblem {
    pub potential: Potential,
    pub domain: (f64, f64),
    pub transform: Transform,
    pub eigenvalue_map: EigenvalueMap,
    pub mesh_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Values on the fine mesh, ascending.
    pub eigenvalues: Vec<f64>,
    /// Coarse mesh; the fine mesh has `2 mesh_size + 1` nodes, i.e. half the step.
    pub mesh_size: usize,
    pub richardson: Vec<f64>,
    pub converged: Vec<bool>,
    pub tolerance: f64,
}

impl EigenResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    /// The first level that missed the tolerance, as an error.
    pub fn check(self) -> Result<Self> {
        match self.converged.iter().position(|&c| !c) {
            Some(level) => Err(SpectraError::ConvergenceFailure {
                level,
                fine: self.eigenvalues[level],
                extrapolated: self.richardson[level],
            }),
            None => Ok(self),
        }
    }
}

impl SturmLiouvilleProblem {
    pub fn new(
        potential: Potential,
        domain: (f64, f64),
        transform: Transform,
        eigenvalue_map: EigenvalueMap,
        mesh_size: usize,
    ) -> Result<Self> {
        let p = SturmLiouvilleProblem {
            potential,
            domain,
            transform,
            eigenvalue_map,
            mesh_size,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.domain;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(invalid("domain", format!("need 0 < x_min < x_max, got ({lo}, {hi})")));
        }
        if self.mesh_size < 3 {
            return Err(invalid("mesh", format!("need at least 3 nodes, got {}", self.mesh_size)));
        }
        if self.eigenvalue_map.scale == 0.0 || !self.eigenvalue_map.scale.is_finite() {
            return Err(invalid("eigenvalue_map", "scale must be finite and non-zero"));
        }
        Ok(())
    }

    /// Diagonal and off-diagonal of the difference operator on `n` interior nodes.
    pub fn discretize(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let (lo, hi) = self.domain;
        let h = (hi - lo) / (n as f64 + 1.0);
        let inv_h2 = 1.0 / (h * h);
        let diag = (1..=n)
            .map(|i| 2.0 * inv_h2 + self.potential.eval(lo + i as f64 * h))
            .collect();
        (diag, vec![-inv_h2; n - 1])
    }

    /// The lowest `k` physical eigenvalues on `n` interior nodes.
    pub fn eigenvalues_on(&self, n: usize, k: usize, solver: EigenSolver) -> Vec<f64> {
        let (d, e) = self.discretize(n);
        let k = k.min(n);
        let mu: Vec<f64> = match solver {
            EigenSolver::Ql => ql_eigenvalues(&d, &e).into_iter().take(k).collect(),
            EigenSolver::Bisection => (0..k).map(|i| bisect_eigenvalue(&d, &e, i)).collect(),
        };
        let mut out: Vec<f64> = mu.into_iter().map(|m| self.eigenvalue_map.apply(m)).collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// The `index`-th physical eigenvalue on `n` interior nodes, by bisection.
    pub fn eigenvalue_at(&self, n: usize, index: usize) -> f64 {
        let (d, e) = self.discretize(n);
        self.eigenvalue_map.apply(bisect_eigenvalue(&d, &e, index))
    }

    /// Solves on `mesh_size` and `2 mesh_size + 1` nodes and extrapolates,
    /// flagging levels whose correction exceeds `tolerance`.
    pub fn solve_unchecked(&self, k: usize, solver: EigenSolver, tolerance: f64) -> EigenResult {
        let n = self.mesh_size;
        let coarse = self.eigenvalues_on(n, k, solver);
        let fine = self.eigenvalues_on(2 * n + 1, k, solver);
        let richardson: Vec<f64> = fine.iter().zip(&coarse).map(|(f, c)| richardson(*c, *f)).collect();
        let floor = self.eigenvalue_map.scale.abs();
        let converged = fine
            .iter()
            .zip(&richardson)
            .map(|(f, r)| (r - f).abs() <= tolerance * r.abs().max(floor))
            .collect();
        EigenResult {
            eigenvalues: fine,
            mesh_size: n,
            richardson,
            converged,
            tolerance,
        }
    }

    /// Lowest `k` levels by QL with the default tolerance.
    pub fn solve(&self, k: usize) -> Result<EigenResult> {
        self.validate()?;
        self.solve_unchecked(k, EigenSolver::Ql, RICHARDSON_TOLERANCE).check()
    }
}

/// Second-order Richardson step for a halved mesh width.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_problem(n: usize) -> SturmLiouvilleProblem {
        let v = Potential::Radial {
            inv_x2: 0.0,
            inv_x: 0.0,
            x_coef: 0.0,
            x2: 0.0,
            constant: 0.0,
        };
        SturmLiouvilleProblem::new(
            v,
            (1.0, 1.0 + std::f64::consts::PI),
            Transform::Power { power: 0.0 },
            EigenvalueMap::IDENTITY,
            n,
        )
        .unwrap()
    }

    #[test]
    fn particle_in_a_box() {
        let r = box_problem(200).solve(4).unwrap();
        for (i, v) in r.richardson.iter().enumerate() {
            let exact = ((i + 1) * (i + 1)) as f64;
            assert!((v - exact).abs() / exact < 1e-7, "{i}: {v}");
        }
        assert_eq!(r.eigenvalues.len(), 4);
    }

    #[test]
    fn solvers_agree() {
        let p = box_problem(300);
        let a = p.eigenvalues_on(300, 5, EigenSolver::Ql);
        let b = p.eigenvalues_on(300, 5, EigenSolver::Bisection);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn coarse_mesh_fails_convergence() {
        let r = box_problem(3).solve_unchecked(3, EigenSolver::Ql, 1e-6);
        assert!(!r.all_converged());
        assert!(matches!(r.check(), Err(SpectraError::ConvergenceFailure { .. })));
    }

    #[test]
    fn rejects_bad_domain() {
        let mut p = box_problem(10);
        p.domain = (0.0, 1.0);
        assert!(p.validate().is_err());
        p.domain = (1.0, 2.0);
        p.mesh_size = 2;
        assert!(p.validate().is_err());
    }

    #[test]
    fn angular_potential_limits() {
        let v = Potential::Angular {
            inv_one_plus_cos: 2.0,
            inv_one_minus_cos: 4.0,
            cot2: 0.75,
            constant: -1.5,
        };
        let t = 1.1_f64;
        let direct = 2.0 / (1.0 + t.cos()) + 4.0 / (1.0 - t.cos()) + 0.75 / t.tan().powi(2) - 1.5;
        assert!((v.eval(t) - direct).abs() < 1e-12);
    }
}
