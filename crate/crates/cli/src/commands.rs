use std::io::Write;

use clap::Args;
use lapoly::oracle::MAX_DENSE_LEN;
use lapoly::timestep::evolve;
use lapoly::{EvolutionSpec, Scheme, SnapshotPlan, SpectralSolver, Spectrum};
use serde_json::json;

use crate::config::{parse_scheme, Format, Problem, ProblemArgs};
use crate::error::{CliError, CliResult};
use crate::output::{field_json, num, open, write_field_csv};

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
}

pub fn solve(args: &SolveArgs) -> CliResult<()> {
    let pb = args.problem.resolve(None)?;
    let solver = SpectralSolver::new(&pb.grid, pb.poly.clone())?;
    let b = pb.rhs.materialize(solver.spectrum())?;
    let x = solver.solve(&b)?;
    let mut w = open(pb.output.as_deref())?;
    match pb.format {
        Format::Csv => write_field_csv(&mut *w, &x)?,
        Format::Json => {
            let mut doc = field_json(&x);
            doc["polynomial"] = json!(pb.poly.to_string());
            serde_json::to_writer(&mut *w, &doc).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Single entry "i,k" (1-based flat indices)
    #[arg(long, value_delimiter = ',', conflicts_with = "full", required_unless_present = "full")]
    pub entry: Option<Vec<usize>>,
    /// Whole inverse as i,k,value rows
    #[arg(long)]
    pub full: bool,
}

pub fn inverse(args: &InverseArgs) -> CliResult<()> {
    let pb = args.problem.resolve(None)?;
    let n = pb.grid.len();
    if args.full && n > MAX_DENSE_LEN {
        return Err(CliError::invalid(format!(
            "--full is limited to n <= {MAX_DENSE_LEN} unknowns, grid has {n}; use --entry"
        )));
    }
    let solver = SpectralSolver::new(&pb.grid, pb.poly.clone())?;
    let mut w = open(pb.output.as_deref())?;
    if let Some(e) = &args.entry {
        let &[i, k] = e.as_slice() else {
            return Err(CliError::invalid("--entry takes two indices: i,k"));
        };
        let v = solver.inverse_entry(i, k)?;
        match pb.format {
            Format::Csv => writeln!(w, "{v}")?,
            Format::Json => writeln!(w, "{}", json!({ "i": i, "k": k, "value": v }))?,
        }
    } else {
        let inv = solver.inverse_matrix()?;
        match pb.format {
            Format::Csv => {
                writeln!(w, "i,k,value")?;
                for i in 0..n {
                    for (k, v) in inv.row(i).iter().enumerate() {
                        writeln!(w, "{},{},{}", i + 1, k + 1, num(*v))?;
                    }
                }
            }
            Format::Json => {
                let rows: Vec<&[f64]> = (0..n).map(|i| inv.row(i)).collect();
                writeln!(w, "{}", json!({ "n": n, "polynomial": pb.poly.to_string(), "rows": rows }))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// be (backward Euler) or trapezoidal
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final step (defaults to the last snapshot)
    #[arg(long)]
    pub steps: Option<u64>,
    /// Steps to emit, ascending and comma separated (defaults to the final step)
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<u64>>,
}

/// Merged time-stepping parameters of an evolve run.
pub fn evolution_spec(args: &EvolveArgs, pb: &Problem) -> CliResult<(EvolutionSpec, SnapshotPlan)> {
    let cfg = &pb.evolution;
    let scheme = match args.scheme.as_deref().or(cfg.scheme.as_deref()) {
        Some(s) => parse_scheme(s)?,
        None => Scheme::BackwardEuler,
    };
    let dt = args
        .dt
        .or(cfg.dt)
        .ok_or_else(|| CliError::invalid("evolve needs --dt"))?;
    let snapshots = args.snapshots.clone().or_else(|| cfg.snapshots.clone());
    let steps = match (args.steps.or(cfg.steps), &snapshots) {
        (Some(s), _) => s,
        (None, Some(snaps)) => snaps.iter().copied().max().unwrap_or(0),
        (None, None) => return Err(CliError::invalid("evolve needs --steps or --snapshots")),
    };
    let spec = EvolutionSpec::new(scheme, dt, steps, pb.poly.clone())?;
    let plan = match snapshots {
        Some(s) if !s.is_empty() => SnapshotPlan::new(s)?,
        _ => SnapshotPlan::last(&spec),
    };
    Ok((spec, plan))
}

pub fn evolve_cmd(args: &EvolveArgs) -> CliResult<()> {
    let pb = args.problem.resolve(None)?;
    let (spec, plan) = evolution_spec(args, &pb)?;
    let spectrum = Spectrum::new(&pb.grid)?;
    let u0 = pb.rhs.materialize(&spectrum)?;
    let fields = evolve(&spectrum, &spec, &u0, &plan)?;
    let mut w = open(pb.output.as_deref())?;
    match pb.format {
        Format::Csv => {
            for (step, field) in plan.steps().iter().zip(&fields) {
                writeln!(w, "# step={step} time={}", num(*step as f64 * spec.dt))?;
                write_field_csv(&mut *w, field)?;
            }
        }
        Format::Json => {
            let snaps: Vec<_> = plan
                .steps()
                .iter()
                .zip(&fields)
                .map(|(step, f)| json!({ "step": step, "time": *step as f64 * spec.dt, "values": f.values() }))
                .collect();
            let mut doc = field_json(&u0);
            doc.as_object_mut().unwrap().remove("values");
            doc["operator"] = json!(spec.operator.to_string());
            doc["scheme"] = json!(format!("{:?}", spec.scheme));
            doc["dt"] = json!(spec.dt);
            doc["snapshots"] = json!(snaps);
            writeln!(w, "{doc}")?;
        }
    }
    w.flush()?;
    Ok(())
}
