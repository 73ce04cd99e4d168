//! Expansion coefficients in the Laplacian eigenbasis and synthesis back to
//! nodal values.
//!
//! Both directions are separable: a 1D sine transform is applied along every
//! grid line of every axis in turn. Each line is reduced in ascending index
//! order and lines are only distributed across threads as whole units, so
//! results do not depend on the thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::spectrum::{AxisSpectrum, Spectrum};

/// Axis lengths from which [`TransformPath::Auto`] switches to the FFT path.
pub const FAST_PATH_MIN_LEN: usize = 64;

/// Coefficients of a field in the eigenbasis, indexed by flattened mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor {
    grid: Grid,
    values: Vec<f64>,
}

impl CoefficientTensor {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(CoefficientTensor { grid: grid.clone(), values })
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

    /// Multiplies the coefficient of every mode by `factor(lambda_k)`.
    pub fn scale_by_eigenvalue(&mut self, spectrum: &Spectrum, factor: impl Fn(f64) -> f64) {
        for (c, k) in self.values.iter_mut().zip(spectrum.grid().multi_indices()) {
            *c *= factor(spectrum.eigenvalue_unchecked(&k));
        }
    }
}

/// Which 1D kernel to run along each line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformPath {
    /// Direct `O(N^2)` sums.
    Naive,
    /// FFT-based sine transform; falls back to naive without the
    /// `fast-transform` feature.
    Fast,
    /// Fast for axes of at least [`FAST_PATH_MIN_LEN`] unknowns.
    #[default]
    Auto,
}

impl TransformPath {
    fn use_fast(self, n: usize) -> bool {
        cfg!(feature = "fast-transform")
            && match self {
                TransformPath::Naive => false,
                TransformPath::Fast => true,
                TransformPath::Auto => n >= FAST_PATH_MIN_LEN,
            }
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Analyze,
    Synthesize,
}

/// `beta_k = sum_j w_j b_j v_{k,j}` for every mode `k`.
pub fn analyze(field: &Field, spectrum: &Spectrum) -> Result<CoefficientTensor> {
    analyze_with(field, spectrum, TransformPath::Auto)
}

pub fn analyze_with(field: &Field, spectrum: &Spectrum, path: TransformPath) -> Result<CoefficientTensor> {
    field.check_grid(spectrum.grid())?;
    let values = separable(field.values(), spectrum, path, Direction::Analyze);
    Ok(CoefficientTensor { grid: spectrum.grid().clone(), values })
}

/// `x_j = sum_k c_k v_{k,j}`, the inverse of [`analyze`].
pub fn synthesize(coeffs: &CoefficientTensor, spectrum: &Spectrum) -> Result<Field> {
    synthesize_with(coeffs, spectrum, TransformPath::Auto)
}

pub fn synthesize_with(coeffs: &CoefficientTensor, spectrum: &Spectrum, path: TransformPath) -> Result<Field> {
    if coeffs.grid() != spectrum.grid() {
        return Err(Error::GridMismatch);
    }
    let values = separable(&coeffs.values, spectrum, path, Direction::Synthesize);
    Field::new(spectrum.grid(), values)
}

fn separable(input: &[f64], spectrum: &Spectrum, path: TransformPath, dir: Direction) -> Vec<f64> {
    let grid = spectrum.grid();
    let mut current = input.to_vec();
    for (p, axis) in spectrum.axes().iter().enumerate() {
        let kernel = LineKernel::new(axis, path.use_fast(axis.len()), dir);
        current = apply_along_axis(&current, grid.stride(p), axis.len(), &kernel);
    }
    current
}

/// Applies `kernel` to every line along one axis. `stride` is the flat
/// distance between neighbours on a line, `n` the line length.
fn apply_along_axis(input: &[f64], stride: usize, n: usize, kernel: &LineKernel<'_>) -> Vec<f64> {
    let block = stride * n;
    let mut out = vec![0.0; input.len()];
    if input.len() > block {
        out.par_chunks_mut(block)
            .zip(input.par_chunks(block))
            .for_each(|(dst, src)| transform_block(src, dst, stride, n, kernel));
    } else if stride > 1 {
        // one block only: spread its lines across threads instead
        let lines: Vec<Vec<f64>> = (0..stride)
            .into_par_iter()
            .map(|offset| {
                let line: Vec<f64> = (0..n).map(|j| input[offset + j * stride]).collect();
                let mut res = vec![0.0; n];
                kernel.apply(&line, &mut res);
                res
            })
            .collect();
        for (offset, res) in lines.iter().enumerate() {
            for (j, v) in res.iter().enumerate() {
                out[offset + j * stride] = *v;
            }
        }
    } else {
        kernel.apply(input, &mut out);
    }
    out
}

fn transform_block(src: &[f64], dst: &mut [f64], stride: usize, n: usize, kernel: &LineKernel<'_>) {
    let mut line = vec![0.0; n];
    let mut res = vec![0.0; n];
    for offset in 0..stride {
        for (j, slot) in line.iter_mut().enumerate() {
            *slot = src[offset + j * stride];
        }
        kernel.apply(&line, &mut res);
        for (j, v) in res.iter().enumerate() {
            dst[offset + j * stride] = *v;
        }
    }
}

struct LineKernel<'a> {
    axis: &'a AxisSpectrum,
    dir: Direction,
    #[cfg(feature = "fast-transform")]
    fft: Option<std::sync::Arc<dyn rustfft::Fft<f64>>>,
}

impl<'a> LineKernel<'a> {
    #[allow(unused_variables)]
    fn new(axis: &'a AxisSpectrum, fast: bool, dir: Direction) -> Self {
        LineKernel {
            axis,
            dir,
            #[cfg(feature = "fast-transform")]
            fft: fast.then(|| rustfft::FftPlanner::new().plan_fft_forward(axis.period())),
        }
    }

    fn apply(&self, input: &[f64], out: &mut [f64]) {
        #[cfg(feature = "fast-transform")]
        if let Some(fft) = &self.fft {
            return fast_line(self.axis, fft.as_ref(), self.dir, input, out);
        }
        naive_line(self.axis, self.dir, input, out)
    }
}

fn naive_line(axis: &AxisSpectrum, dir: Direction, input: &[f64], out: &mut [f64]) {
    let n = axis.len();
    let weights = axis.node_weights();
    match dir {
        Direction::Analyze => {
            for (k, o) in (1..=n).zip(out.iter_mut()) {
                let mut acc = 0.0;
                for j in 1..=n {
                    acc += weights[j - 1] * input[j - 1] * axis.entry_unchecked(k, j);
                }
                *o = acc;
            }
        }
        Direction::Synthesize => {
            for (j, o) in (1..=n).zip(out.iter_mut()) {
                let mut acc = 0.0;
                for k in 1..=n {
                    acc += input[k - 1] * axis.entry_unchecked(k, j);
                }
                *o = acc;
            }
        }
    }
}

/// Sine sums through one complex FFT of length `period`:
/// `-Im(FFT(y))_m = sum_q y_q sin(2 pi q m / period)`.
#[cfg(feature = "fast-transform")]
fn fast_line(
    axis: &AxisSpectrum,
    fft: &dyn rustfft::Fft<f64>,
    dir: Direction,
    input: &[f64],
    out: &mut [f64],
) {
    use rustfft::num_complex::Complex;

    let n = axis.len();
    let mut buf = vec![Complex::new(0.0, 0.0); axis.period()];
    match dir {
        Direction::Analyze => {
            for (j, (&b, &w)) in input.iter().zip(axis.node_weights()).enumerate() {
                buf[j + 1].re = w * b;
            }
        }
        Direction::Synthesize => {
            for (k, &c) in input.iter().enumerate() {
                buf[axis.frequency(k + 1)].re = c;
            }
        }
    }
    fft.process(&mut buf);
    let norm = axis.norm_factor();
    for (i, o) in out.iter_mut().enumerate().take(n) {
        let m = match dir {
            Direction::Analyze => axis.frequency(i + 1),
            Direction::Synthesize => i + 1,
        };
        *o = -norm * buf[m].im;
    }
}
