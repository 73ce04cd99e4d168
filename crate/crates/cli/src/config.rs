//! Problem description: JSON config file merged with command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use lapoly::{make_grid, BoundaryKind, Field, Grid, MatrixPolynomial, Scheme, Spectrum};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub scheme: Option<String>,
    pub dt: Option<f64>,
    pub steps: Option<u64>,
    pub snapshots: Option<Vec<u64>>,
}

/// Contents of a `--config` file. Every key is optional; flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub grid: Option<Grid>,
    pub polynomial: Option<String>,
    pub rhs: Option<String>,
    pub evolution: Option<EvolutionConfig>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ProblemConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Read { path: path.to_owned(), source })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// JSON problem description; flags override its entries
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of axes (defaults to the length of --n)
    #[arg(long)]
    pub dim: Option<usize>,
    /// Unknowns per axis, comma separated; a single value is used for every axis
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Boundary per axis: dirichlet or dirichlet-neumann, comma separated
    #[arg(long, value_delimiter = ',')]
    pub bc: Option<Vec<String>>,
    /// Ascending polynomial coefficients, e.g. "0,1" for A or "1,1,1" for I + A + A^2
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Right-hand side or initial state: ones, file:<path> or mode:<k>
    #[arg(long)]
    pub rhs: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhsSpec {
    Ones,
    File(PathBuf),
    Mode(usize),
}

impl FromStr for RhsSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s == "ones" {
            return Ok(RhsSpec::Ones);
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(RhsSpec::File(PathBuf::from(path)));
        }
        if let Some(k) = s.strip_prefix("mode:") {
            let k = k
                .trim()
                .parse()
                .map_err(|_| CliError::invalid(format!("bad mode index in rhs {s:?}")))?;
            return Ok(RhsSpec::Mode(k));
        }
        Err(CliError::invalid(format!("rhs must be ones, file:<path> or mode:<k>, got {s:?}")))
    }
}

impl RhsSpec {
    pub fn materialize(&self, spectrum: &Spectrum) -> CliResult<Field> {
        let grid = spectrum.grid();
        match self {
            RhsSpec::Ones => Ok(Field::constant(grid, 1.0)),
            RhsSpec::Mode(k) => Ok(Field::eigenmode(spectrum, *k)?),
            RhsSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Read { path: path.clone(), source })?;
                let values = parse_values(&text)
                    .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
                if values.len() != grid.len() {
                    return Err(CliError::invalid(format!(
                        "{}: expected {} values, found {}",
                        path.display(),
                        grid.len(),
                        values.len()
                    )));
                }
                Ok(Field::new(grid, values)?)
            }
        }
    }
}

/// One finite value per non-blank line.
fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| match l.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("line {}: not a finite number: {:?}", i + 1, l.trim())),
        })
        .collect()
}

/// Fully validated problem after merging config and flags.
#[derive(Debug, Clone)]
pub struct Problem {
    pub grid: Grid,
    /// False when `grid` came from the caller's default.
    pub grid_given: bool,
    pub poly: MatrixPolynomial,
    pub poly_given: bool,
    pub rhs: RhsSpec,
    pub evolution: EvolutionConfig,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ProblemArgs {
    /// Merges flags over the config file. `default_grid` is used when neither
    /// names a grid; without one a grid is required.
    pub fn resolve(&self, default_grid: Option<Grid>) -> CliResult<Problem> {
        let cfg = match &self.config {
            Some(path) => ProblemConfig::load(path)?,
            None => ProblemConfig::default(),
        };
        let (grid, grid_given) = match (self.grid_from_flags()?, cfg.grid) {
            (Some(g), _) | (None, Some(g)) => (g, true),
            (None, None) => (
                default_grid.ok_or_else(|| CliError::invalid("no grid given: use --n or a config file"))?,
                false,
            ),
        };
        let poly_text = self.poly.clone().or(cfg.polynomial);
        let poly_given = poly_text.is_some();
        let poly = poly_text
            .as_deref()
            .unwrap_or("0,1")
            .parse::<MatrixPolynomial>()?;
        let rhs = self.rhs.clone().or(cfg.rhs).unwrap_or_else(|| "ones".into()).parse()?;
        Ok(Problem {
            grid,
            grid_given,
            poly,
            poly_given,
            rhs,
            evolution: cfg.evolution.unwrap_or_default(),
            output: self.output.clone().or(cfg.output),
            format: self.format.or(cfg.format).unwrap_or_default(),
        })
    }

    fn grid_from_flags(&self) -> CliResult<Option<Grid>> {
        let Some(n) = &self.n else {
            if self.dim.is_some() || self.bc.is_some() {
                return Err(CliError::invalid("--dim and --bc need --n"));
            }
            return Ok(None);
        };
        let dim = self.dim.unwrap_or(n.len());
        let n = broadcast(n, dim, "--n")?;
        let bc = match &self.bc {
            None => vec![BoundaryKind::DirichletBoth; dim],
            Some(names) => {
                let kinds = names.iter().map(|s| parse_bc(s)).collect::<CliResult<Vec<_>>>()?;
                broadcast(&kinds, dim, "--bc")?
            }
        };
        Ok(Some(make_grid(dim, &n, &bc)?))
    }
}

fn broadcast<T: Clone>(v: &[T], dim: usize, flag: &str) -> CliResult<Vec<T>> {
    match v.len() {
        1 => Ok(vec![v[0].clone(); dim]),
        len if len == dim => Ok(v.to_vec()),
        len => Err(CliError::invalid(format!("{flag} has {len} entries for {dim} axes"))),
    }
}

fn parse_bc(s: &str) -> CliResult<BoundaryKind> {
    match s.trim() {
        "dirichlet" => Ok(BoundaryKind::DirichletBoth),
        "dirichlet-neumann" => Ok(BoundaryKind::DirichletLeftNeumannRight),
        other => Err(CliError::invalid(format!(
            "unknown boundary {other:?}: expected dirichlet or dirichlet-neumann"
        ))),
    }
}

pub fn parse_scheme(s: &str) -> CliResult<Scheme> {
    Ok(s.parse::<Scheme>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_specs() {
        assert_eq!("ones".parse::<RhsSpec>().unwrap(), RhsSpec::Ones);
        assert_eq!("mode:3".parse::<RhsSpec>().unwrap(), RhsSpec::Mode(3));
        assert_eq!("file:a.txt".parse::<RhsSpec>().unwrap(), RhsSpec::File("a.txt".into()));
        assert!("twos".parse::<RhsSpec>().is_err());
        assert!("mode:x".parse::<RhsSpec>().is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let ok = r#"{"grid": {"dim": 1, "n_per_axis": [4]}, "polynomial": "0,1", "format": "json"}"#;
        let cfg: ProblemConfig = serde_json::from_str(ok).unwrap();
        assert_eq!(cfg.grid.unwrap().shape(), &[4]);
        assert_eq!(cfg.format, Some(Format::Json));
        assert!(serde_json::from_str::<ProblemConfig>(r#"{"polynomail": "0,1"}"#).is_err());
        assert!(serde_json::from_str::<ProblemConfig>(r#"{"evolution": {"dt": 1, "step": 2}}"#).is_err());
    }

    #[test]
    fn single_n_is_broadcast() {
        let args = ProblemArgs { dim: Some(3), n: Some(vec![4]), ..Default::default() };
        let p = args.resolve(None).unwrap();
        assert_eq!(p.grid.shape(), &[4, 4, 4]);
        let bad = ProblemArgs { dim: Some(3), n: Some(vec![4, 5]), ..Default::default() };
        assert!(bad.resolve(None).is_err());
    }

    #[test]
    fn values_file_parsing() {
        assert_eq!(parse_values("1\n\n2.5\n").unwrap(), vec![1.0, 2.5]);
        assert!(parse_values("1\nnan\n").is_err());
        assert!(parse_values("1\nabc\n").is_err());
    }
}
