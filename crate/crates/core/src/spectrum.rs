//! Closed-form eigenpairs of the discrete Laplace matrix.
//!
//! On a Dirichlet axis with `N` unknowns and `h = 1/(N+1)` the 1D matrix
//! `tridiag(-1, 2, -1)/h^2` has eigenvalues `4/h^2 sin^2(k pi h/2)` and
//! eigenvectors `sqrt(2/(N+1)) sin(k pi j h)`, orthonormal under the plain
//! dot product.
//!
//! On a Dirichlet-Neumann axis (`h = 1/N`, the node `x = 1` is an unknown)
//! the last matrix row comes from ghost-point reflection, `(-2, 2)/h^2`. The
//! eigenvalues are `4/h^2 sin^2((2k-1) pi h/4)` with eigenvectors
//! `sqrt(2/N) sin((2k-1) pi j h/2)`. That matrix is not symmetric; the
//! eigenvectors are orthonormal under the inner product that weights the
//! Neumann node by 1/2.
//!
//! In `d` dimensions the Laplacian is a Kronecker sum, so eigenvalues add and
//! eigenvector entries multiply across axes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, Grid};

/// Eigenvalue `k` (1-based) of the 1D matrix with `n` unknowns and spacing `h`.
pub fn axis_eigenvalue(k: usize, n: usize, h: f64, bc: BoundaryKind) -> Result<f64> {
    check_index(k, n)?;
    let s = (mode_frequency(k, bc) * PI * h / 2.0).sin();
    Ok(4.0 / (h * h) * s * s)
}

/// Entry `j` of the normalized eigenvector `k` (both 1-based).
pub fn axis_eigvec_entry(k: usize, j: usize, n: usize, h: f64, bc: BoundaryKind) -> Result<f64> {
    check_index(k, n)?;
    check_index(j, n)?;
    Ok(norm_factor(n, bc) * (mode_frequency(k, bc) * PI * j as f64 * h).sin())
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::IndexOutOfRange { index: k, max: n })
    } else {
        Ok(())
    }
}

/// `k` for Dirichlet modes, `k - 1/2` for Dirichlet-Neumann modes.
fn mode_frequency(k: usize, bc: BoundaryKind) -> f64 {
    match bc {
        BoundaryKind::DirichletBoth => k as f64,
        BoundaryKind::DirichletLeftNeumannRight => k as f64 - 0.5,
    }
}

fn norm_factor(n: usize, bc: BoundaryKind) -> f64 {
    match bc {
        BoundaryKind::DirichletBoth => (2.0 / (n as f64 + 1.0)).sqrt(),
        BoundaryKind::DirichletLeftNeumannRight => (2.0 / n as f64).sqrt(),
    }
}

/// Eigenvalues and eigenvector rule for one axis.
///
/// Sines are read from a table indexed by an integer phase so that
/// `sin(k pi j h)` is evaluated at a reduced argument for every `(k, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpectrum {
    n: usize,
    bc: BoundaryKind,
    eigenvalues: Vec<f64>,
    norm: f64,
    weights: Vec<f64>,
    /// `sin(2 pi m / period)` for `m` in `0..period`.
    sines: Vec<f64>,
    period: usize,
}

impl AxisSpectrum {
    pub fn new(n: usize, bc: BoundaryKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroAxis { axis: 1 });
        }
        let h = bc.spacing(n);
        let eigenvalues = (1..=n)
            .map(|k| axis_eigenvalue(k, n, h, bc))
            .collect::<Result<Vec<_>>>()?;
        let mut weights = vec![1.0; n];
        let period = match bc {
            BoundaryKind::DirichletBoth => 2 * (n + 1),
            BoundaryKind::DirichletLeftNeumannRight => {
                weights[n - 1] = 0.5;
                4 * n
            }
        };
        let sines = (0..period)
            .map(|m| sine_of_fraction(m, period))
            .collect();
        Ok(AxisSpectrum {
            n,
            bc,
            eigenvalues,
            norm: norm_factor(n, bc),
            weights,
            sines,
            period,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn boundary(&self) -> BoundaryKind {
        self.bc
    }

    /// Ascending eigenvalues, `eigenvalues()[k - 1]` for mode `k`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn norm_factor(&self) -> f64 {
        self.norm
    }

    /// Inner-product weights: 1, except 1/2 at a Neumann node.
    pub fn node_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integer phase `p` such that the sine factor of `v_{k,j}` is `sin(2 pi p / period)`.
    #[inline]
    pub(crate) fn phase(&self, k: usize, j: usize) -> usize {
        match self.bc {
            BoundaryKind::DirichletBoth => k * j,
            BoundaryKind::DirichletLeftNeumannRight => (2 * k - 1) * j,
        }
    }

    /// Frequency index used by the FFT path; `phase(k, j) = frequency(k) * j`.
    #[inline]
    pub(crate) fn frequency(&self, k: usize) -> usize {
        self.phase(k, 1)
    }

    pub(crate) fn period(&self) -> usize {
        self.period
    }

    /// `v_{k,j}` for 1-based `k`, `j` without bounds checks.
    #[inline]
    pub(crate) fn entry_unchecked(&self, k: usize, j: usize) -> f64 {
        self.norm * self.sines[self.phase(k, j) % self.period]
    }

    /// Entry `j` of eigenvector `k`, both 1-based.
    pub fn eigvec_entry(&self, k: usize, j: usize) -> Result<f64> {
        check_index(k, self.n)?;
        check_index(j, self.n)?;
        Ok(self.entry_unchecked(k, j))
    }

    /// Eigenvector `k` as a dense vector.
    pub fn eigvec(&self, k: usize) -> Result<Vec<f64>> {
        check_index(k, self.n)?;
        Ok((1..=self.n).map(|j| self.entry_unchecked(k, j)).collect())
    }
}

/// `sin(2 pi m / period)` using the octant symmetry of the sine so the
/// argument handed to `sin` never exceeds `pi/4`.
fn sine_of_fraction(m: usize, period: usize) -> f64 {
    let m = m % period;
    // work in units of period/8 via 8*m compared against multiples of period
    let eight_m = 8 * m;
    let p = period;
    let angle = |num: usize| 2.0 * PI * num as f64 / (8 * p) as f64;
    match eight_m {
        x if x <= p => angle(x).sin(),
        x if x <= 2 * p => angle(2 * p - x).cos(),
        x if x <= 3 * p => angle(x - 2 * p).cos(),
        x if x <= 4 * p => angle(4 * p - x).sin(),
        x if x <= 5 * p => -angle(x - 4 * p).sin(),
        x if x <= 6 * p => -angle(6 * p - x).cos(),
        x if x <= 7 * p => -angle(x - 6 * p).cos(),
        x => -angle(8 * p - x).sin(),
    }
}

/// Per-axis spectra of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    axes: Vec<AxisSpectrum>,
}

impl Spectrum {
    pub fn new(grid: &Grid) -> Result<Self> {
        let axes = grid
            .shape()
            .iter()
            .zip(grid.boundaries())
            .map(|(&n, &bc)| AxisSpectrum::new(n, bc))
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum { grid: grid.clone(), axes })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn axes(&self) -> &[AxisSpectrum] {
        &self.axes
    }

    /// Eigenvalue of mode `k` (1-based multi-index): the sum of the axis eigenvalues.
    pub fn eigenvalue_nd(&self, k: &[usize]) -> Result<f64> {
        self.check_multi(k)?;
        Ok(self.eigenvalue_unchecked(k))
    }

    pub(crate) fn eigenvalue_unchecked(&self, k: &[usize]) -> f64 {
        k.iter()
            .zip(&self.axes)
            .map(|(&kp, axis)| axis.eigenvalues[kp - 1])
            .sum()
    }

    /// Entry at node `j` of eigenvector `k`: the product of the axis entries.
    pub fn eigvec_entry_nd(&self, k: &[usize], j: &[usize]) -> Result<f64> {
        self.check_multi(k)?;
        self.check_multi(j)?;
        Ok(self.entry_unchecked(k, j))
    }

    pub(crate) fn entry_unchecked(&self, k: &[usize], j: &[usize]) -> f64 {
        k.iter()
            .zip(j)
            .zip(&self.axes)
            .map(|((&kp, &jp), axis)| axis.entry_unchecked(kp, jp))
            .product()
    }

    /// Inner-product weight of node `j`.
    pub fn node_weight(&self, j: &[usize]) -> Result<f64> {
        self.check_multi(j)?;
        Ok(self.weight_unchecked(j))
    }

    pub(crate) fn weight_unchecked(&self, j: &[usize]) -> f64 {
        j.iter()
            .zip(&self.axes)
            .map(|(&jp, axis)| axis.weights[jp - 1])
            .product()
    }

    /// Eigenvector of mode `k` sampled on the whole grid, in flat order.
    pub fn eigvec_nd(&self, k: &[usize]) -> Result<Vec<f64>> {
        self.check_multi(k)?;
        Ok(self
            .grid
            .multi_indices()
            .map(|j| self.entry_unchecked(k, &j))
            .collect())
    }

    /// Smallest and largest eigenvalue of the d-dimensional operator.
    pub fn eigenvalue_bounds(&self) -> (f64, f64) {
        let lo = self.axes.iter().map(|a| a.eigenvalues[0]).sum();
        let hi = self.axes.iter().map(|a| a.eigenvalues[a.n - 1]).sum();
        (lo, hi)
    }

    fn check_multi(&self, k: &[usize]) -> Result<()> {
        if k.len() != self.axes.len() {
            return Err(Error::DimensionMismatch { expected: self.axes.len(), found: k.len() });
        }
        for (&kp, axis) in k.iter().zip(&self.axes) {
            check_index(kp, axis.n)?;
        }
        Ok(())
    }
}
