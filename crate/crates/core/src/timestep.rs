//! Implicit time stepping of `u' + P(A) u = 0` in closed form.
//!
//! Both schemes multiply mode `k` by a fixed factor `g_k` per step, so step
//! `tau` is reached directly by scaling the expansion coefficients of `u0`
//! with `g_k^tau`. The cost does not depend on `tau`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::oracle::{assemble_laplacian, assemble_poly, DenseMatrix, LuFactors};
use crate::polynomial::MatrixPolynomial;
use crate::spectrum::Spectrum;
use crate::transform::{analyze, synthesize};

/// Denominators `1 + c dt P(lambda)` at or below this size relative to
/// `1 + c dt |P(lambda)|` count as zero.
const DENOM_REL_TOL: f64 = 1e-12;

/// Largest step count accepted by [`binomial_expansion_check`].
pub const MAX_BINOMIAL_STEPS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `(I + dt P(A)) u^{t+1} = u^t`.
    BackwardEuler,
    /// `(I + dt P(A)/2) u^{t+1} = (I - dt P(A)/2) u^t` (Crank-Nicolson).
    Trapezoidal,
}

impl Scheme {
    /// Weight of `dt P(A)` in the implicit operator.
    fn implicit_weight(self) -> f64 {
        match self {
            Scheme::BackwardEuler => 1.0,
            Scheme::Trapezoidal => 0.5,
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "be" | "backward-euler" | "backward_euler" => Ok(Scheme::BackwardEuler),
            "trapezoidal" | "cn" | "crank-nicolson" => Ok(Scheme::Trapezoidal),
            other => Err(Error::InvalidInput(format!("unknown time scheme {other:?}"))),
        }
    }
}

/// Per-step amplification factor of a mode with `mu = P(lambda)`.
pub fn amplification(scheme: Scheme, dt: f64, mu: f64) -> Result<f64> {
    let c = scheme.implicit_weight() * dt * mu;
    let denom = 1.0 + c;
    if denom.abs() <= DENOM_REL_TOL * (1.0 + c.abs()) {
        return Err(Error::Domain(format!("amplification denominator vanishes for dt*P = {}", dt * mu)));
    }
    Ok(match scheme {
        Scheme::BackwardEuler => 1.0 / denom,
        Scheme::Trapezoidal => (1.0 - c) / denom,
    })
}

/// `g^n` by repeated squaring.
pub fn int_pow(mut g: f64, mut n: u64) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= g;
        }
        g *= g;
        n >>= 1;
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSpec {
    pub scheme: Scheme,
    pub dt: f64,
    pub steps: u64,
    /// Spatial operator of `u' + P(A) u = 0`.
    pub operator: MatrixPolynomial,
}

impl EvolutionSpec {
    pub fn new(scheme: Scheme, dt: f64, steps: u64, operator: MatrixPolynomial) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
        }
        Ok(EvolutionSpec { scheme, dt, steps, operator })
    }

    /// Checks that every mode has a finite amplification factor.
    pub fn certify(&self, spectrum: &Spectrum) -> Result<()> {
        let weight = self.scheme.implicit_weight();
        for k in spectrum.grid().multi_indices() {
            let mu = self.operator.eval(spectrum.eigenvalue_unchecked(&k));
            let c = weight * self.dt * mu;
            if (1.0 + c).abs() <= DENOM_REL_TOL * (1.0 + c.abs()) {
                return Err(Error::SingularOperator { mode: k, value: 1.0 + c });
            }
        }
        Ok(())
    }
}

/// Sorted step indices at which [`evolve`] emits a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotPlan {
    steps: Vec<u64>,
}

impl SnapshotPlan {
    pub fn new(steps: Vec<u64>) -> Result<Self> {
        if steps.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("snapshot steps must be sorted".into()));
        }
        Ok(SnapshotPlan { steps })
    }

    /// Only the final step.
    pub fn last(spec: &EvolutionSpec) -> Self {
        SnapshotPlan { steps: vec![spec.steps] }
    }

    pub fn steps(&self) -> &[u64] {
        &self.steps
    }
}

/// Fields at every step of `plan`, each computed directly from `u0`.
pub fn evolve(spectrum: &Spectrum, spec: &EvolutionSpec, u0: &Field, plan: &SnapshotPlan) -> Result<Vec<Field>> {
    u0.check_grid(spectrum.grid())?;
    if let Some(&s) = plan.steps.iter().find(|&&s| s > spec.steps) {
        return Err(Error::InvalidInput(format!("snapshot {s} beyond final step {}", spec.steps)));
    }
    spec.certify(spectrum)?;
    let base = analyze(u0, spectrum)?;
    plan.steps
        .iter()
        .map(|&s| {
            if s == 0 {
                return Ok(u0.clone());
            }
            let mut coeffs = base.clone();
            coeffs.scale_by_eigenvalue(spectrum, |lam| {
                let g = amplification(spec.scheme, spec.dt, spec.operator.eval(lam))
                    .expect("certified spectrum");
                int_pow(g, s)
            });
            synthesize(&coeffs, spectrum)
        })
        .collect()
}

/// Literal step-by-step integration with dense matrices.
///
/// The implicit matrix is factored once; every step is then one dense
/// forward/back substitution (plus a dense product for the trapezoidal
/// right-hand side), so the cost grows linearly with the step count.
#[derive(Debug, Clone)]
pub struct IterativeOracle {
    grid: Grid,
    lhs: LuFactors,
    rhs: Option<DenseMatrix>,
}

impl IterativeOracle {
    pub fn new(grid: &Grid, spec: &EvolutionSpec) -> Result<Self> {
        let p = assemble_poly(&assemble_laplacian(grid)?, &spec.operator)?;
        let c = spec.scheme.implicit_weight() * spec.dt;
        let lhs = LuFactors::new(&p.scaled_plus_identity(c, 1.0))?;
        let rhs = match spec.scheme {
            Scheme::BackwardEuler => None,
            Scheme::Trapezoidal => Some(p.scaled_plus_identity(-c, 1.0)),
        };
        Ok(IterativeOracle { grid: grid.clone(), lhs, rhs })
    }

    /// Advances `u0` by `steps` steps.
    pub fn run(&self, u0: &Field, steps: u64) -> Result<Field> {
        u0.check_grid(&self.grid)?;
        let mut u = u0.values().to_vec();
        for _ in 0..steps {
            if let Some(rhs) = &self.rhs {
                u = rhs.matvec(&u)?;
            }
            u = self.lhs.solve(&u)?;
        }
        Field::new(&self.grid, u)
    }
}

/// Ground truth for [`evolve`] at the final step of `spec`.
pub fn evolve_iterative_oracle(grid: &Grid, spec: &EvolutionSpec, u0: &Field) -> Result<Field> {
    if spec.steps == 0 {
        return Err(Error::InvalidInput("iterative oracle needs at least one step".into()));
    }
    IterativeOracle::new(grid, spec)?.run(u0, spec.steps)
}

/// `(1 + dt lambda)^tau` written as `sum_i C(tau, i) (dt lambda)^i`.
pub fn binomial_expansion_check(dt: f64, lambda: f64, tau: u32) -> Result<f64> {
    if tau > MAX_BINOMIAL_STEPS {
        return Err(Error::InvalidInput(format!(
            "binomial expansion limited to tau <= {MAX_BINOMIAL_STEPS}"
        )));
    }
    let x = dt * lambda;
    let mut binom = 1.0;
    let mut power = 1.0;
    let mut sum = 0.0;
    for i in 0..=tau {
        sum += binom * power;
        binom = binom * f64::from(tau - i) / f64::from(i + 1);
        power *= x;
    }
    Ok(sum)
}
