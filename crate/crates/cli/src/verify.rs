//! Oracle-equivalence presets: every spectral result against dense elimination.

use std::io::Write;

use clap::{Args, ValueEnum};
use lapoly::oracle::PolyOperatorOracle;
use lapoly::timestep::{evolve, IterativeOracle};
use lapoly::{
    inverse_1d_closed_form, make_grid, BoundaryKind, EvolutionSpec, Field, Grid, MatrixPolynomial, Scheme,
    SnapshotPlan, SpectralSolver, Spectrum,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, Problem, ProblemArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, open};

const CLOSED_FORM_TOL: f64 = 1e-12;
const POISSON_TOL: f64 = 1e-12;
const EVOLVE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    All,
    ClosedForm,
    Poisson,
    Evolve,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub preset: Preset,
    /// Largest N of the 1D closed-form sweep
    #[arg(long, default_value_t = 100)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: u64,
}

#[derive(Debug, Serialize)]
struct Check {
    check: String,
    detail: String,
    max_error: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn new(check: &str, detail: String, max_error: f64, tolerance: f64) -> Self {
        // NaN must not pass
        let passed = max_error <= tolerance;
        Check { check: check.into(), detail, max_error, tolerance, passed }
    }
}

fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    // f64::max drops NaN, so catch it up front
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return f64::NAN;
    }
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Spectral inverse entries against the 1D closed form, error in units of h^2.
fn closed_form_sweep(max_n: usize) -> CliResult<Check> {
    if max_n == 0 {
        return Err(CliError::invalid("--max-n must be at least 1"));
    }
    let worst = (1..=max_n)
        .into_par_iter()
        .map(|n| -> CliResult<f64> {
            let grid = Grid::dirichlet(&[n])?;
            let solver = SpectralSolver::new(&grid, MatrixPolynomial::laplacian())?;
            let h2 = grid.spacing()[0].powi(2);
            let mut worst = 0.0f64;
            for i in 1..=n {
                for k in 1..=n {
                    let err = (solver.inverse_entry(i, k)? - inverse_1d_closed_form(n, i, k)?).abs();
                    worst = worst.max(err / h2);
                }
            }
            Ok(worst)
        })
        .collect::<CliResult<Vec<f64>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    Ok(Check::new("closed-form", format!("N=1..{max_n}, all entries, error/h^2"), worst, CLOSED_FORM_TOL))
}

fn poisson(pb: &Problem) -> CliResult<Vec<Check>> {
    let polys = if pb.poly_given {
        vec![pb.poly.clone()]
    } else {
        vec![MatrixPolynomial::laplacian(), "1,1,1".parse::<MatrixPolynomial>()?]
    };
    let shape = pb.grid.shape().iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x");
    polys
        .into_iter()
        .map(|p| {
            let solver = SpectralSolver::new(&pb.grid, p.clone())?;
            let b = pb.rhs.materialize(solver.spectrum())?;
            let x = solver.solve(&b)?;
            let dense = PolyOperatorOracle::new(&pb.grid, &p)?.solve(b.values())?;
            let err = max_rel_diff(x.values(), &dense);
            Ok(Check::new("poisson", format!("grid {shape}, P={p}, relative"), err, POISSON_TOL))
        })
        .collect()
}

fn evolve_vs_iterative(grid: &Grid, pb: &Problem, dt: f64, steps: u64) -> CliResult<Vec<Check>> {
    let spectrum = Spectrum::new(grid)?;
    let u0 = pb.rhs.materialize(&spectrum)?;
    let snaps: Vec<u64> = [1, 10, steps].into_iter().filter(|&s| s <= steps).collect();
    let mut snaps = snaps;
    snaps.dedup();
    let plan = SnapshotPlan::new(snaps.clone())?;
    [Scheme::BackwardEuler, Scheme::Trapezoidal]
        .into_iter()
        .map(|scheme| {
            let spec = EvolutionSpec::new(scheme, dt, steps, pb.poly.clone())?;
            let fast = evolve(&spectrum, &spec, &u0, &plan)?;
            let oracle = IterativeOracle::new(grid, &spec)?;
            let mut worst = 0.0f64;
            for (&s, f) in snaps.iter().zip(&fast) {
                let slow: Field = oracle.run(&u0, s)?;
                worst = worst.max(max_rel_diff(f.values(), slow.values()));
            }
            Ok(Check::new(
                "evolve",
                format!("{scheme:?}, n={}, dt={dt}, steps {snaps:?}, relative", grid.len()),
                worst,
                EVOLVE_TOL,
            ))
        })
        .collect()
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let default_grid = Grid::dirichlet(&[16, 16])?;
    let pb = args.problem.resolve(Some(default_grid))?;
    let run = |p: Preset| args.preset == Preset::All || args.preset == p;

    let mut checks = Vec::new();
    if run(Preset::ClosedForm) {
        checks.push(closed_form_sweep(args.max_n)?);
    }
    if run(Preset::Poisson) {
        checks.extend(poisson(&pb)?);
    }
    if run(Preset::Evolve) {
        let grid = if pb.grid_given {
            pb.grid.clone()
        } else {
            make_grid(1, &[63], &[BoundaryKind::DirichletBoth])?
        };
        checks.extend(evolve_vs_iterative(&grid, &pb, args.dt, args.steps)?);
    }

    let mut w = open(pb.output.as_deref())?;
    match pb.format {
        Format::Csv => {
            writeln!(w, "check,detail,max_error,tolerance,status")?;
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                writeln!(w, "{},\"{}\",{},{},{status}", c.check, c.detail, num(c.max_error), num(c.tolerance))?;
            }
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string(&checks).map_err(std::io::Error::from)?)?,
    }
    w.flush()?;
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
