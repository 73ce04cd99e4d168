//! Solutions of `P(A) x = b` and entries of `P(A)^{-1}` from the eigenvector
//! expansion `x = sum_k (b, v_k) / P(lambda_k) v_k`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::oracle::{DenseMatrix, MAX_DENSE_LEN};
use crate::polynomial::MatrixPolynomial;
use crate::spectrum::Spectrum;
use crate::transform::{analyze, synthesize};

/// A certified-invertible `P(A)` on a fixed grid.
#[derive(Debug, Clone)]
pub struct SpectralSolver {
    spectrum: Spectrum,
    poly: MatrixPolynomial,
}

impl SpectralSolver {
    /// Fails with [`Error::SingularOperator`] if some `P(lambda_k)` vanishes.
    pub fn new(grid: &Grid, poly: MatrixPolynomial) -> Result<Self> {
        Self::with_spectrum(Spectrum::new(grid)?, poly)
    }

    pub fn with_spectrum(spectrum: Spectrum, poly: MatrixPolynomial) -> Result<Self> {
        poly.require_invertible(&spectrum)?;
        Ok(SpectralSolver { spectrum, poly })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn grid(&self) -> &Grid {
        self.spectrum.grid()
    }

    pub fn polynomial(&self) -> &MatrixPolynomial {
        &self.poly
    }

    /// Analyze, divide mode `k` by `P(lambda_k)`, synthesize.
    pub fn solve(&self, b: &Field) -> Result<Field> {
        let mut coeffs = analyze(b, &self.spectrum)?;
        coeffs.scale_by_eigenvalue(&self.spectrum, |lam| 1.0 / self.poly.eval(lam));
        synthesize(&coeffs, &self.spectrum)
    }

    /// `(P(A)^{-1})_{ik}` for 1-based flat indices.
    ///
    /// Sums `v_m(i) v_m(k) w_k / P(lambda_m)` over all modes; `w_k` is the
    /// node weight, 1 on pure Dirichlet grids.
    pub fn inverse_entry(&self, i: usize, k: usize) -> Result<f64> {
        let grid = self.grid();
        let ji = grid.unflatten(i)?;
        let jk = grid.unflatten(k)?;
        let weight = self.spectrum.weight_unchecked(&jk);
        let mut acc = 0.0;
        for mode in grid.multi_indices() {
            let vi = self.spectrum.entry_unchecked(&mode, &ji);
            if vi == 0.0 {
                continue;
            }
            let vk = self.spectrum.entry_unchecked(&mode, &jk);
            acc += vi * vk / self.poly.eval(self.spectrum.eigenvalue_unchecked(&mode));
        }
        Ok(acc * weight)
    }

    /// Column `k` of `P(A)^{-1}`, i.e. the solution for `b = e_k`.
    pub fn inverse_column(&self, k: usize) -> Result<Field> {
        self.solve(&Field::unit(self.grid(), k)?)
    }

    /// The full inverse, column by column. Limited to `n <= 4096`.
    pub fn inverse_matrix(&self) -> Result<DenseMatrix> {
        let n = self.grid().len();
        if n > MAX_DENSE_LEN {
            return Err(Error::OracleSizeExceeded { n, limit: MAX_DENSE_LEN });
        }
        let mut inv = DenseMatrix::zeros(n)?;
        for k in 1..=n {
            let col = self.inverse_column(k)?;
            for (i, &v) in col.values().iter().enumerate() {
                inv[(i, k - 1)] = v;
            }
        }
        Ok(inv)
    }
}

/// One-shot `P(A) x = b`.
pub fn solve(grid: &Grid, poly: &MatrixPolynomial, b: &Field) -> Result<Field> {
    b.check_grid(grid)?;
    SpectralSolver::new(grid, poly.clone())?.solve(b)
}

pub fn inverse_entry(grid: &Grid, poly: &MatrixPolynomial, i: usize, k: usize) -> Result<f64> {
    SpectralSolver::new(grid, poly.clone())?.inverse_entry(i, k)
}

pub fn inverse_column(grid: &Grid, poly: &MatrixPolynomial, k: usize) -> Result<Field> {
    SpectralSolver::new(grid, poly.clone())?.inverse_column(k)
}

/// Entry `(i, k)` of the inverse of the 1D Dirichlet matrix with `n`
/// unknowns: `h^2 ((n+1-k)/(n+1) i - (i-k)_+)`.
pub fn inverse_1d_closed_form(n: usize, i: usize, k: usize) -> Result<f64> {
    for idx in [i, k] {
        if idx == 0 || idx > n {
            return Err(Error::IndexOutOfRange { index: idx, max: n });
        }
    }
    let np1 = n as f64 + 1.0;
    let h = 1.0 / np1;
    let ramp = i.saturating_sub(k) as f64;
    Ok(h * h * ((np1 - k as f64) / np1 * i as f64 - ramp))
}
