//! Tensor-product grids on the unit hyperbox.
//!
//! Every axis carries its own unknown count and boundary kind. Node `j` on an
//! axis sits at `x = j h`; boundary nodes carrying a Dirichlet value are not
//! unknowns. Multi-indices and flat indices are 1-based in the public API,
//! with axis 1 varying fastest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary conditions imposed at the two ends of one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BoundaryKind {
    /// `u = 0` at both ends.
    #[default]
    #[serde(rename = "dirichlet")]
    DirichletBoth,
    /// `u = 0` at `x = 0`, `du/dx = 0` at `x = 1`.
    #[serde(rename = "dirichlet-neumann")]
    DirichletLeftNeumannRight,
}

impl BoundaryKind {
    /// Mesh width for `n` unknowns on the unit interval.
    pub fn spacing(self, n: usize) -> f64 {
        match self {
            BoundaryKind::DirichletBoth => 1.0 / (n as f64 + 1.0),
            // the Neumann node x = 1 is itself an unknown
            BoundaryKind::DirichletLeftNeumannRight => 1.0 / n as f64,
        }
    }
}

/// Discrete domain: per-axis unknown counts, boundary kinds and spacings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridConfig", into = "GridConfig")]
pub struct Grid {
    n: Vec<usize>,
    bc: Vec<BoundaryKind>,
    h: Vec<f64>,
    strides: Vec<usize>,
    len: usize,
}

/// JSON shape of a grid as accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub n_per_axis: Vec<usize>,
    #[serde(default)]
    pub bc_per_axis: Option<Vec<BoundaryKind>>,
}

impl TryFrom<GridConfig> for Grid {
    type Error = Error;

    fn try_from(cfg: GridConfig) -> Result<Self> {
        let bc = cfg
            .bc_per_axis
            .unwrap_or_else(|| vec![BoundaryKind::DirichletBoth; cfg.n_per_axis.len()]);
        make_grid(cfg.dim, &cfg.n_per_axis, &bc)
    }
}

impl From<Grid> for GridConfig {
    fn from(grid: Grid) -> Self {
        GridConfig {
            dim: grid.dim(),
            n_per_axis: grid.n,
            bc_per_axis: Some(grid.bc),
        }
    }
}

/// Builds a grid after checking that `n` and `bc` both have `d` entries.
pub fn make_grid(d: usize, n: &[usize], bc: &[BoundaryKind]) -> Result<Grid> {
    if d == 0 {
        return Err(Error::EmptyGrid);
    }
    if n.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: n.len() });
    }
    if bc.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: bc.len() });
    }
    if let Some(axis) = n.iter().position(|&np| np == 0) {
        return Err(Error::ZeroAxis { axis: axis + 1 });
    }
    let mut strides = Vec::with_capacity(d);
    let mut len = 1usize;
    for &np in n {
        strides.push(len);
        len = len
            .checked_mul(np)
            .ok_or_else(|| Error::InvalidInput("grid size overflows usize".into()))?;
    }
    let h = n.iter().zip(bc).map(|(&np, &kind)| kind.spacing(np)).collect();
    Ok(Grid {
        n: n.to_vec(),
        bc: bc.to_vec(),
        h,
        strides,
        len,
    })
}

impl Grid {
    /// Grid with Dirichlet conditions on every axis.
    pub fn dirichlet(n: &[usize]) -> Result<Grid> {
        make_grid(n.len(), n, &vec![BoundaryKind::DirichletBoth; n.len()])
    }

    /// `d`-dimensional grid with `n` unknowns and Dirichlet conditions on every axis.
    pub fn uniform(d: usize, n: usize) -> Result<Grid> {
        make_grid(d, &vec![n; d], &vec![BoundaryKind::DirichletBoth; d])
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    /// Unknowns per axis.
    pub fn shape(&self) -> &[usize] {
        &self.n
    }

    pub fn boundaries(&self) -> &[BoundaryKind] {
        &self.bc
    }

    pub fn spacing(&self) -> &[f64] {
        &self.h
    }

    /// Total number of unknowns, the product of the per-axis counts.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Distance between consecutive flat (0-based) entries along `axis` (0-based).
    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn is_all_dirichlet(&self) -> bool {
        self.bc.iter().all(|&b| b == BoundaryKind::DirichletBoth)
    }

    /// Maps a 1-based multi-index to its 1-based flat index.
    pub fn flatten(&self, j: &[usize]) -> Result<usize> {
        if j.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: j.len() });
        }
        let mut flat = 0;
        for ((&jp, &np), &stride) in j.iter().zip(&self.n).zip(&self.strides) {
            if jp == 0 || jp > np {
                return Err(Error::IndexOutOfRange { index: jp, max: np });
            }
            flat += (jp - 1) * stride;
        }
        Ok(flat + 1)
    }

    /// Inverse of [`Grid::flatten`].
    pub fn unflatten(&self, flat: usize) -> Result<Vec<usize>> {
        if flat == 0 || flat > self.len {
            return Err(Error::IndexOutOfRange { index: flat, max: self.len });
        }
        let mut rest = flat - 1;
        Ok(self
            .n
            .iter()
            .map(|&np| {
                let jp = rest % np + 1;
                rest /= np;
                jp
            })
            .collect())
    }

    /// Node coordinates of a 1-based multi-index.
    pub fn coords(&self, j: &[usize]) -> Vec<f64> {
        j.iter().zip(&self.h).map(|(&jp, &h)| jp as f64 * h).collect()
    }

    /// Iterates over all multi-indices (1-based) in flat order.
    pub fn multi_indices(&self) -> MultiIndexIter<'_> {
        MultiIndexIter {
            shape: &self.n,
            current: vec![1; self.dim()],
            remaining: self.len,
        }
    }
}

/// Odometer over the multi-indices of a grid, axis 1 fastest.
pub struct MultiIndexIter<'a> {
    shape: &'a [usize],
    current: Vec<usize>,
    remaining: usize,
}

impl Iterator for MultiIndexIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current.clone();
        for (jp, &np) in self.current.iter_mut().zip(self.shape) {
            if *jp < np {
                *jp += 1;
                break;
            }
            *jp = 1;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for MultiIndexIter<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryKind::*;

    #[test]
    fn spacing_follows_boundary_kind() {
        let g = make_grid(1, &[2], &[DirichletBoth]).unwrap();
        assert_eq!(g.spacing(), &[1.0 / 3.0]);

        let g = make_grid(2, &[4, 4], &[DirichletBoth; 2]).unwrap();
        assert_eq!(g.len(), 16);
        assert_eq!(g.spacing(), &[0.2, 0.2]);

        let g = make_grid(1, &[4], &[DirichletLeftNeumannRight]).unwrap();
        assert_eq!(g.spacing(), &[0.25]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(make_grid(0, &[], &[]), Err(Error::EmptyGrid));
        assert!(matches!(
            make_grid(2, &[3], &[DirichletBoth]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            make_grid(2, &[3, 3], &[DirichletBoth]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            make_grid(2, &[3, 0], &[DirichletBoth; 2]),
            Err(Error::ZeroAxis { axis: 2 })
        );
    }

    #[test]
    fn flatten_examples() {
        let g = Grid::uniform(2, 4).unwrap();
        assert_eq!(g.flatten(&[1, 1]).unwrap(), 1);
        assert_eq!(g.flatten(&[2, 3]).unwrap(), 10);
        assert_eq!(g.flatten(&[4, 2]).unwrap(), 8);
        assert!(g.flatten(&[5, 1]).is_err());
        assert!(g.flatten(&[0, 1]).is_err());
        assert!(g.flatten(&[1]).is_err());
    }

    #[test]
    fn unflatten_examples() {
        let g = Grid::uniform(2, 4).unwrap();
        assert_eq!(g.unflatten(10).unwrap(), vec![2, 3]);
        assert_eq!(g.unflatten(8).unwrap(), vec![4, 2]);
        assert!(g.unflatten(0).is_err());
        assert!(g.unflatten(17).is_err());
        let g = Grid::uniform(1, 3).unwrap();
        assert_eq!(g.unflatten(2).unwrap(), vec![2]);
    }

    #[test]
    fn flatten_is_a_bijection() {
        for shape in [vec![7], vec![4, 4], vec![3, 5, 2], vec![10, 10, 10, 10]] {
            let g = Grid::dirichlet(&shape).unwrap();
            let mut seen = vec![false; g.len()];
            for (pos, j) in g.multi_indices().enumerate() {
                let flat = g.flatten(&j).unwrap();
                assert_eq!(flat, pos + 1);
                assert!(!seen[flat - 1]);
                seen[flat - 1] = true;
                assert_eq!(g.unflatten(flat).unwrap(), j);
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn json_round_trip_uses_cli_keys() {
        let text = r#"{"dim":2,"n_per_axis":[3,4],"bc_per_axis":["dirichlet","dirichlet-neumann"]}"#;
        let g: Grid = serde_json::from_str(text).unwrap();
        assert_eq!(g.boundaries(), &[DirichletBoth, DirichletLeftNeumannRight]);
        assert_eq!(g.spacing(), &[0.25, 0.25]);
        assert_eq!(serde_json::to_string(&g).unwrap(), text);

        let bad = r#"{"dim":1,"n_per_axis":[3],"extra":1}"#;
        assert!(serde_json::from_str::<Grid>(bad).is_err());
        let mismatch = r#"{"dim":2,"n_per_axis":[3]}"#;
        assert!(serde_json::from_str::<Grid>(mismatch).is_err());
    }
}
