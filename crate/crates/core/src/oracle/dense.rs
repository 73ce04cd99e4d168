use std::fmt;

use super::scalar::{Dd, Scalar};
use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, Grid};
use crate::polynomial::MatrixPolynomial;

/// Largest `n` for which a dense `n x n` matrix may be assembled.
pub const MAX_DENSE_LEN: usize = 4096;

/// Pivots below this fraction of the infinity norm count as zero.
const PIVOT_REL_TOL: f64 = 1e-13;

/// Refinement stops once the correction is below this fraction of the solution.
const REFINE_TOL: f64 = 1e-17;
const MAX_REFINE_STEPS: usize = 20;

/// Square row-major matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n.max(1))).finish()
    }
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_DENSE_LEN {
        Err(Error::OracleSizeExceeded { n, limit: MAX_DENSE_LEN })
    } else {
        Ok(())
    }
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Result<Self> {
        guard(n)?;
        Ok(DenseMatrix { n, data: vec![T::zero(); n * n] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = DenseMatrix::zeros(n)?;
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut m = DenseMatrix::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.iter().map(|v| v.to_f64().abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok((0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    /// `self * other`; zero entries of `self` are skipped, so a sparse left
    /// factor costs `O(nnz * n)`.
    pub fn matmul(&self, other: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut out = DenseMatrix::zeros(n)?;
        for i in 0..n {
            let dst = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in self.data[i * n..(i + 1) * n].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `alpha * self + beta * I`.
    pub fn scaled_plus_identity(&self, alpha: f64, beta: f64) -> DenseMatrix<T> {
        let (alpha, beta) = (T::from_f64(alpha), T::from_f64(beta));
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v = *v * alpha);
        for i in 0..self.n {
            out[(i, i)] += beta;
        }
        out
    }

    pub fn to_f64(&self) -> DenseMatrix<f64> {
        DenseMatrix { n: self.n, data: self.data.iter().map(|v| v.to_f64()).collect() }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).to_f64().abs() <= tol))
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Finite-difference matrix of `-Laplace` on the grid, rows in flat order.
///
/// Interior rows carry `(-1, 2, -1)/h^2` per axis; a Neumann node uses the
/// ghost-point row `(-2, 2)/h^2`. The d-dimensional matrix is the Kronecker
/// sum of the axis matrices.
pub fn assemble_laplacian(grid: &Grid) -> Result<DenseMatrix> {
    assemble_laplacian_as(grid)
}

/// [`assemble_laplacian`] in any scalar type. `1/h^2` is formed from the
/// integer `1/h`, so the entries are exact.
pub fn assemble_laplacian_as<T: Scalar>(grid: &Grid) -> Result<DenseMatrix<T>> {
    let n = grid.len();
    let mut a = DenseMatrix::<T>::zeros(n)?;
    for (row, j) in grid.multi_indices().enumerate() {
        for (p, ((&jp, &np), &bc)) in j.iter().zip(grid.shape()).zip(grid.boundaries()).enumerate() {
            let inv_h = match bc {
                BoundaryKind::DirichletBoth => np + 1,
                BoundaryKind::DirichletLeftNeumannRight => np,
            } as f64;
            let inv_h2 = T::from_f64(inv_h * inv_h);
            let stride = grid.stride(p);
            a[(row, row)] += T::from_f64(2.0) * inv_h2;
            let neumann_end = bc == BoundaryKind::DirichletLeftNeumannRight && jp == np;
            if jp > 1 {
                let w = if neumann_end { 2.0 } else { 1.0 };
                a[(row, row - stride)] -= T::from_f64(w) * inv_h2;
            }
            if jp < np {
                a[(row, row + stride)] -= inv_h2;
            }
        }
    }
    Ok(a)
}

/// `P(A)` by Horner's scheme on matrices: `c_m A + c_{m-1} I`, then
/// repeatedly multiplied by `A` with the next coefficient added.
pub fn assemble_poly<T: Scalar>(a: &DenseMatrix<T>, p: &MatrixPolynomial) -> Result<DenseMatrix<T>> {
    let c = p.coeffs();
    let m = c.len() - 1;
    if m == 0 {
        return Ok(DenseMatrix::<T>::identity(a.len())?.scaled_plus_identity(c[0], 0.0));
    }
    let mut acc = a.scaled_plus_identity(c[m], c[m - 1]);
    for &ci in c[..m - 1].iter().rev() {
        // A commutes with every polynomial in A; keep the sparse factor on the left
        acc = a.matmul(&acc)?;
        for i in 0..a.len() {
            acc[(i, i)] += T::from_f64(ci);
        }
    }
    Ok(acc)
}

/// LU factorization with partial (row) pivoting, `P M = L U`.
#[derive(Debug, Clone)]
pub struct LuFactors<T = f64> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactors<T> {
    pub fn new(m: &DenseMatrix<T>) -> Result<Self> {
        let n = m.len();
        let tol = PIVOT_REL_TOL * m.norm_inf();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, lu[(r, col)].to_f64().abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs <= tol || pivot_abs == 0.0 {
                return Err(Error::SingularMatrix { pivot: col + 1 });
            }
            if pivot_row != col {
                perm.swap(pivot_row, col);
                for c in 0..n {
                    lu.data.swap(pivot_row * n + c, col * n + c);
                }
            }
            let pivot = lu[(col, col)];
            let (upper, lower) = lu.data.split_at_mut((col + 1) * n);
            let pivot_row_tail = &upper[col * n + col + 1..(col + 1) * n];
            for r in lower.chunks_mut(n) {
                let factor = r[col] / pivot;
                r[col] = factor;
                if !factor.is_zero() {
                    for (x, &u) in r[col + 1..].iter_mut().zip(pivot_row_tail) {
                        *x -= factor * u;
                    }
                }
            }
        }
        Ok(LuFactors { lu, perm })
    }

    pub fn len(&self) -> usize {
        self.lu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lu.is_empty()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.len();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s = row[..i].iter().zip(&x[..i]).fold(T::zero(), |acc, (&l, &y)| acc + l * y);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = row[i + 1..].iter().zip(&x[i + 1..]).fold(T::zero(), |acc, (&u, &y)| acc + u * y);
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }
}

pub fn dense_solve<T: Scalar>(m: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    LuFactors::new(m)?.solve(b)
}

/// Inverse by solving against every basis vector.
pub fn dense_invert<T: Scalar>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let n = m.len();
    let lu = LuFactors::new(m)?;
    let mut inv = DenseMatrix::zeros(n)?;
    let mut e = vec![T::zero(); n];
    for k in 0..n {
        e[k] = T::one();
        let col = lu.solve(&e)?;
        e[k] = T::zero();
        for (i, v) in col.into_iter().enumerate() {
            inv[(i, k)] = v;
        }
    }
    Ok(inv)
}

/// Dense `P(A)` on a grid, solved to full `f64` accuracy.
///
/// `P(A)` is assembled in double-double arithmetic from the exact stencil;
/// an `f64` LU of the rounded matrix drives iterative refinement with
/// double-double residuals. Assembling high powers of `A` directly in `f64`
/// loses roughly `log10(cond(A)^m)` digits, which would make the oracle less
/// accurate than the method it checks.
#[derive(Debug, Clone)]
pub struct PolyOperatorOracle {
    exact: DenseMatrix<Dd>,
    lu: LuFactors<f64>,
}

impl PolyOperatorOracle {
    pub fn new(grid: &Grid, p: &MatrixPolynomial) -> Result<Self> {
        let exact = assemble_poly(&assemble_laplacian_as::<Dd>(grid)?, p)?;
        let lu = LuFactors::new(&exact.to_f64())?;
        Ok(PolyOperatorOracle { exact, lu })
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    /// The assembled matrix rounded to `f64`.
    pub fn matrix(&self) -> DenseMatrix<f64> {
        self.exact.to_f64()
    }

    /// `P(A) x` evaluated in double-double and rounded.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let xd: Vec<Dd> = x.iter().map(|&v| Dd::from_f64(v)).collect();
        Ok(self.exact.matvec(&xd)?.into_iter().map(Dd::to_f64).collect())
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x: Vec<Dd> = self.lu.solve(b)?.into_iter().map(Dd::from_f64).collect();
        let bd: Vec<Dd> = b.iter().map(|&v| Dd::from_f64(v)).collect();
        for _ in 0..MAX_REFINE_STEPS {
            let ax = self.exact.matvec(&x)?;
            let r: Vec<f64> = bd.iter().zip(&ax).map(|(&bi, &ai)| (bi - ai).to_f64()).collect();
            let dx = self.lu.solve(&r)?;
            let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.to_f64().abs()));
            let dx_norm = dx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (xi, d) in x.iter_mut().zip(dx) {
                *xi += Dd::from_f64(d);
            }
            if dx_norm <= REFINE_TOL * x_norm {
                return Ok(x.into_iter().map(Dd::to_f64).collect());
            }
        }
        Err(Error::InvalidInput("iterative refinement did not converge".into()))
    }
}
