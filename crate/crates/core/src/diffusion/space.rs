use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform node grid on `(0, L)` or `(0, Lx) × (0, Ly)`, boundary included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceGrid {
    Interval { length: f64, cells: usize },
    Rectangle { lengths: [f64; 2], cells: [usize; 2] },
}

impl SpaceGrid {
    pub fn interval(length: f64, cells: usize) -> Result<Self> {
        let g = SpaceGrid::Interval { length, cells };
        g.validate()?;
        Ok(g)
    }

    pub fn rectangle(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = SpaceGrid::Rectangle {
            lengths: [lx, ly],
            cells: [nx, ny],
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |l: f64, n: usize| l > 0.0 && l.is_finite() && n >= 2;
        let valid = match *self {
            SpaceGrid::Interval { length, cells } => ok(length, cells),
            SpaceGrid::Rectangle { lengths, cells } => ok(lengths[0], cells[0]) && ok(lengths[1], cells[1]),
        };
        if valid {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!("bad space grid {self:?}")))
        }
    }

    pub fn dims(&self) -> usize {
        match self {
            SpaceGrid::Interval { .. } => 1,
            SpaceGrid::Rectangle { .. } => 2,
        }
    }

    /// Cells per axis; the second entry is 1 on an interval.
    pub fn cells(&self) -> [usize; 2] {
        match *self {
            SpaceGrid::Interval { cells, .. } => [cells, 0],
            SpaceGrid::Rectangle { cells, .. } => cells,
        }
    }

    pub fn steps(&self) -> [f64; 2] {
        match *self {
            SpaceGrid::Interval { length, cells } => [length / cells as f64, f64::INFINITY],
            SpaceGrid::Rectangle { lengths, cells } => [lengths[0] / cells[0] as f64, lengths[1] / cells[1] as f64],
        }
    }

    pub fn max_step(&self) -> f64 {
        let [hx, hy] = self.steps();
        if self.dims() == 1 {
            hx
        } else {
            hx.max(hy)
        }
    }

    pub fn len(&self) -> usize {
        let [nx, ny] = self.cells();
        (nx + 1) * (ny + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row stride in the flattened node array.
    fn stride(&self) -> usize {
        self.cells()[0] + 1
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i + self.stride() * j
    }

    pub fn ij(&self, node: usize) -> (usize, usize) {
        (node % self.stride(), node / self.stride())
    }

    pub fn coords(&self, node: usize) -> [f64; 2] {
        let (i, j) = self.ij(node);
        let [hx, hy] = self.steps();
        match self {
            SpaceGrid::Interval { .. } => [i as f64 * hx, 0.0],
            SpaceGrid::Rectangle { .. } => [i as f64 * hx, j as f64 * hy],
        }
    }

    /// Coordinates as a slice of length `dims()`.
    pub fn point(&self, node: usize) -> Vec<f64> {
        self.coords(node)[..self.dims()].to_vec()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        let (i, j) = self.ij(node);
        let [nx, ny] = self.cells();
        i == 0 || i == nx || (self.dims() == 2 && (j == 0 || j == ny))
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&n| !self.is_boundary(n))
    }

    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&n| self.is_boundary(n))
    }

    /// Standard 3-point / 5-point Laplacian at an interior node.
    pub fn laplacian_at(&self, v: &[f64], node: usize) -> f64 {
        let [hx, hy] = self.steps();
        let s = self.stride();
        let mut lap = (v[node - 1] - 2.0 * v[node] + v[node + 1]) / (hx * hx);
        if self.dims() == 2 {
            lap += (v[node - s] - 2.0 * v[node] + v[node + s]) / (hy * hy);
        }
        lap
    }

    /// Laplacian at interior nodes, zero on the boundary.
    pub fn laplacian(&self, v: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|n| if self.is_boundary(n) { 0.0 } else { self.laplacian_at(v, n) })
            .collect()
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|n| f(&self.point(n))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_boundary() {
        let g = SpaceGrid::rectangle(1.0, 2.0, 4, 8).unwrap();
        assert_eq!(g.len(), 45);
        assert_eq!(g.boundary().count(), 45 - 3 * 7);
        let n = g.index(2, 3);
        assert_eq!(g.ij(n), (2, 3));
        assert_eq!(g.coords(n), [0.5, 0.75]);
        let i = SpaceGrid::interval(1.0, 10).unwrap();
        assert_eq!(i.interior().count(), 9);
        assert!(SpaceGrid::interval(0.0, 10).is_err());
    }

    #[test]
    fn laplacian_exact_on_quadratics() {
        let g = SpaceGrid::rectangle(1.0, 1.0, 6, 5).unwrap();
        let v = g.sample(|p| p[0] * p[0] + 3.0 * p[1] * p[1] - p[0] * p[1]);
        for n in g.interior() {
            assert!((g.laplacian_at(&v, n) - 8.0).abs() < 1e-10);
        }
    }
}
