//! Wall-clock cost of reaching step tau: direct jump vs step-by-step.

use std::io::Write;
use std::time::Instant;

use clap::Args;
use lapoly::timestep::{evolve, IterativeOracle};
use lapoly::{EvolutionSpec, Grid, MatrixPolynomial, SnapshotPlan, Spectrum};
use serde::Serialize;

use crate::config::{parse_scheme, Format, ProblemArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, open};

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000,10000")]
    pub taus: Vec<u64>,
    /// Leave the iterative column empty for tau above this
    #[arg(long, value_name = "TAU")]
    pub skip_iterative_above: Option<u64>,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[arg(long, default_value = "be")]
    pub scheme: String,
    /// Spectral timings keep the fastest of this many runs
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
}

#[derive(Debug, Serialize)]
struct Row {
    operator: String,
    tau: u64,
    spectral_seconds: f64,
    iterative_seconds: Option<f64>,
}

fn seconds(f: impl FnOnce() -> CliResult<()>) -> CliResult<f64> {
    let t = Instant::now();
    f()?;
    Ok(t.elapsed().as_secs_f64())
}

pub fn bench(args: &BenchArgs) -> CliResult<()> {
    if args.repeats == 0 {
        return Err(CliError::invalid("--repeats must be at least 1"));
    }
    let pb = args.problem.resolve(Some(Grid::dirichlet(&[1024])?))?;
    let scheme = parse_scheme(&args.scheme)?;
    // second and fourth order by default: same spectral cost
    let operators = if pb.poly_given {
        vec![pb.poly.clone()]
    } else {
        vec![MatrixPolynomial::laplacian(), "0,0,1".parse()?]
    };

    let mut rows = Vec::new();
    for op in &operators {
        for &tau in &args.taus {
            let spec = EvolutionSpec::new(scheme, args.dt, tau, op.clone())?;
            let plan = SnapshotPlan::last(&spec);
            let mut spectral = f64::INFINITY;
            for _ in 0..args.repeats {
                let t = seconds(|| {
                    let spectrum = Spectrum::new(&pb.grid)?;
                    let u0 = pb.rhs.materialize(&spectrum)?;
                    evolve(&spectrum, &spec, &u0, &plan)?;
                    Ok(())
                })?;
                spectral = spectral.min(t);
            }
            let iterative = match args.skip_iterative_above {
                Some(limit) if tau > limit => None,
                _ => Some(seconds(|| {
                    let spectrum = Spectrum::new(&pb.grid)?;
                    let u0 = pb.rhs.materialize(&spectrum)?;
                    IterativeOracle::new(&pb.grid, &spec)?.run(&u0, tau)?;
                    Ok(())
                })?),
            };
            rows.push(Row { operator: op.to_string(), tau, spectral_seconds: spectral, iterative_seconds: iterative });
        }
    }

    let mut w = open(pb.output.as_deref())?;
    match pb.format {
        Format::Json => writeln!(w, "{}", serde_json::to_string(&rows).map_err(std::io::Error::from)?)?,
        Format::Csv => {
            writeln!(w, "operator,tau,spectral_seconds,iterative_seconds")?;
            for r in &rows {
                let it = r.iterative_seconds.map(num).unwrap_or_default();
                writeln!(w, "\"{}\",{},{},{it}", r.operator, r.tau, num(r.spectral_seconds))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
