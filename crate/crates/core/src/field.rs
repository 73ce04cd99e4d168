use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spectrum::Spectrum;

/// Grid function stored in flat order (axis 1 fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(Field { grid: grid.clone(), values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Field { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Field { grid: grid.clone(), values: vec![value; grid.len()] }
    }

    /// `e_k` for a 1-based flat index `k`.
    pub fn unit(grid: &Grid, k: usize) -> Result<Self> {
        if k == 0 || k > grid.len() {
            return Err(Error::IndexOutOfRange { index: k, max: grid.len() });
        }
        let mut f = Field::zeros(grid);
        f.values[k - 1] = 1.0;
        Ok(f)
    }

    /// Samples `f(x)` at every node.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = grid.multi_indices().map(|j| f(&grid.coords(&j))).collect();
        Field { grid: grid.clone(), values }
    }

    /// Normalized eigenvector of mode `k` (1-based flat mode index).
    pub fn eigenmode(spectrum: &Spectrum, k: usize) -> Result<Self> {
        let grid = spectrum.grid();
        let mode = grid.unflatten(k)?;
        Ok(Field { grid: grid.clone(), values: spectrum.eigvec_nd(&mode)? })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if &self.grid == grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}
