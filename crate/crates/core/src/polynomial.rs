//! Polynomials `P(x) = c_0 + c_1 x + ... + c_m x^m` applied to the Laplace matrix.
//!
//! `P(A)` shares the eigenvectors of `A` and has eigenvalues `P(lambda)`, so
//! invertibility is decided entirely on the spectrum.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// `|P(lambda)|` at or below this times `sum |c_i| lambda^i` counts as zero.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// Ascending coefficients with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<f64>,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("no coefficients".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        let last = coeffs
            .iter()
            .rposition(|&c| c != 0.0)
            .ok_or_else(|| Error::InvalidPolynomial("all coefficients are zero".into()))?;
        let mut coeffs = coeffs;
        coeffs.truncate(last + 1);
        Ok(MatrixPolynomial { coeffs })
    }

    /// `P(A) = A`.
    pub fn laplacian() -> Self {
        MatrixPolynomial { coeffs: vec![0.0, 1.0] }
    }

    pub fn identity() -> Self {
        MatrixPolynomial { coeffs: vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `sum |c_i| x^i`, the scale of the rounding error in [`Self::eval`].
    pub fn eval_abs(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c.abs())
    }

    /// All coefficients non-negative and at least one positive: then
    /// `P(lambda) > 0` for every positive eigenvalue.
    pub fn has_positive_coefficients(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0.0) && self.coeffs.iter().any(|&c| c > 0.0)
    }

    /// Checks that `P(A)` is invertible over the given spectrum.
    ///
    /// The operator is declared singular at the first mode whose `|P(lambda)|`
    /// is lost in the cancellation of its terms, i.e. at most
    /// [`SINGULAR_REL_TOL`] times `sum |c_i| lambda^i`.
    pub fn certify_invertible(&self, spectrum: &Spectrum) -> Certificate {
        let grid = spectrum.grid();
        let mut min = f64::INFINITY;
        let mut max = 0.0f64;
        let mut singular: Option<(Vec<usize>, f64)> = None;
        for k in grid.multi_indices() {
            let lam = spectrum.eigenvalue_unchecked(&k);
            let value = self.eval(lam);
            let magnitude = value.abs();
            max = max.max(magnitude);
            min = min.min(magnitude);
            // zero up to the cancellation in evaluating P at this mode
            if singular.is_none() && magnitude <= SINGULAR_REL_TOL * self.eval_abs(lam.abs()) {
                singular = Some((k, value));
            }
        }
        match singular {
            None => Certificate::Invertible {
                positive_coefficients: self.has_positive_coefficients(),
                min_abs: min,
                max_abs: max,
            },
            Some((mode, value)) => Certificate::Singular { mode, value },
        }
    }

    /// Like [`MatrixPolynomial::certify_invertible`] but as a `Result`.
    pub fn require_invertible(&self, spectrum: &Spectrum) -> Result<()> {
        match self.certify_invertible(spectrum) {
            Certificate::Invertible { .. } => Ok(()),
            Certificate::Singular { mode, value } => Err(Error::SingularOperator { mode, value }),
        }
    }
}

/// Outcome of [`MatrixPolynomial::certify_invertible`].
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Invertible {
        /// The all-non-negative-coefficients sufficient condition holds.
        positive_coefficients: bool,
        min_abs: f64,
        max_abs: f64,
    },
    Singular {
        /// 1-based multi-index of the offending mode.
        mode: Vec<usize>,
        value: f64,
    },
}

impl Certificate {
    pub fn is_invertible(&self) -> bool {
        matches!(self, Certificate::Invertible { .. })
    }
}

impl FromStr for MatrixPolynomial {
    type Err = Error;

    /// Comma-separated ascending coefficients: `"1,1,1"` is `I + A + A^2`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<f64>()
                    .map_err(|_| Error::InvalidPolynomial(format!("cannot parse coefficient {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixPolynomial::new(coeffs)
    }
}

impl fmt::Display for MatrixPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
