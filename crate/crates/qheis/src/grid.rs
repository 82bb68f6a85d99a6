//! Uniform grids on ℝ⁴ × ℝ³ and the matching frequency lattices.

use std::f64::consts::PI;

use qheis_core::{GroupPoint, ImQuaternion, Quaternion};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tensor grid with `n_x` nodes on each x-axis and `n_t` on each t-axis.
///
/// Nodes are `x_j = (j − n/2)·h` with `h = 2·half_extent/n`. The conjugate
/// frequency nodes are `y_k = 2π(k − n/2)/(n·h)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_extent_x: f64,
    pub n_x: usize,
    pub half_extent_t: f64,
    pub n_t: usize,
}

impl GridSpec {
    pub fn new(half_extent_x: f64, n_x: usize, half_extent_t: f64, n_t: usize) -> Result<Self> {
        let ok_ext = |e: f64| e > 0.0 && e.is_finite();
        let ok_n = |n: usize| n >= 4 && n.is_multiple_of(2);
        if !ok_ext(half_extent_x) || !ok_ext(half_extent_t) {
            return Err(Error::BadParams("grid extents must be positive".into()));
        }
        if !ok_n(n_x) || !ok_n(n_t) {
            return Err(Error::BadParams("grid counts must be even and at least 4".into()));
        }
        Ok(GridSpec { half_extent_x, n_x, half_extent_t, n_t })
    }

    /// 12⁴ × 4³ grid; the central period 2π√2 puts the frequency lattice at
    /// spacing 1/√2, so shells |a| = 1/√2 and |a| = 1 are lattice nodes.
    pub fn default_grid() -> Self {
        GridSpec { half_extent_x: 3.75, n_x: 12, half_extent_t: PI * 2f64.sqrt(), n_t: 4 }
    }

    /// Default grid with the x-spacing reduced from 0.625 to 0.469.
    pub fn refined() -> Self {
        GridSpec { n_x: 16, ..Self::default_grid() }
    }

    /// Resolves Gaussians in t as well as in x: 12⁴ × 10³ nodes on [−4, 4)⁷.
    pub fn t_resolved() -> Self {
        GridSpec { half_extent_x: 4.0, n_x: 12, half_extent_t: 4.0, n_t: 10 }
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.half_extent_x / self.n_x as f64
    }

    pub fn ht(&self) -> f64 {
        2.0 * self.half_extent_t / self.n_t as f64
    }

    /// Frequency spacing conjugate to the x-axes.
    pub fn dy(&self) -> f64 {
        2.0 * PI / (self.n_x as f64 * self.hx())
    }

    /// Frequency spacing conjugate to the t-axes.
    pub fn da(&self) -> f64 {
        2.0 * PI / (self.n_t as f64 * self.ht())
    }

    pub fn x_node(&self, j: usize) -> f64 {
        (j as f64 - (self.n_x / 2) as f64) * self.hx()
    }

    pub fn t_node(&self, j: usize) -> f64 {
        (j as f64 - (self.n_t / 2) as f64) * self.ht()
    }

    pub fn y_node(&self, k: usize) -> f64 {
        (k as f64 - (self.n_x / 2) as f64) * self.dy()
    }

    pub fn a_node(&self, k: usize) -> f64 {
        (k as f64 - (self.n_t / 2) as f64) * self.da()
    }

    /// Number of nodes in one x-slice (n_x⁴).
    pub fn slice_len(&self) -> usize {
        self.n_x.pow(4)
    }

    /// Number of t-nodes (n_t³).
    pub fn n_slices(&self) -> usize {
        self.n_t.pow(3)
    }

    pub fn len(&self) -> usize {
        self.slice_len() * self.n_slices()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of `(x-multi-index, t-multi-index)` in row-major
    /// (x0, x1, x2, x3, t1, t2, t3) order.
    pub fn flat(&self, xi: usize, ti: usize) -> usize {
        xi * self.n_slices() + ti
    }

    pub fn split(&self, flat: usize) -> (usize, usize) {
        (flat / self.n_slices(), flat % self.n_slices())
    }

    pub fn x_multi(&self, xi: usize) -> [usize; 4] {
        let n = self.n_x;
        [xi / (n * n * n), (xi / (n * n)) % n, (xi / n) % n, xi % n]
    }

    pub fn t_multi(&self, ti: usize) -> [usize; 3] {
        let n = self.n_t;
        [ti / (n * n), (ti / n) % n, ti % n]
    }

    pub fn x_flat(&self, m: [usize; 4]) -> usize {
        let n = self.n_x;
        ((m[0] * n + m[1]) * n + m[2]) * n + m[3]
    }

    pub fn t_flat(&self, m: [usize; 3]) -> usize {
        let n = self.n_t;
        (m[0] * n + m[1]) * n + m[2]
    }

    pub fn x_point(&self, xi: usize) -> Quaternion {
        let m = self.x_multi(xi);
        Quaternion::new(self.x_node(m[0]), self.x_node(m[1]), self.x_node(m[2]), self.x_node(m[3]))
    }

    pub fn t_point(&self, ti: usize) -> ImQuaternion {
        let m = self.t_multi(ti);
        ImQuaternion::new(self.t_node(m[0]), self.t_node(m[1]), self.t_node(m[2]))
    }

    pub fn y_point(&self, xi: usize) -> Quaternion {
        let m = self.x_multi(xi);
        Quaternion::new(self.y_node(m[0]), self.y_node(m[1]), self.y_node(m[2]), self.y_node(m[3]))
    }

    pub fn a_point(&self, ti: usize) -> ImQuaternion {
        let m = self.t_multi(ti);
        ImQuaternion::new(self.a_node(m[0]), self.a_node(m[1]), self.a_node(m[2]))
    }

    pub fn point(&self, flat: usize) -> GroupPoint {
        let (xi, ti) = self.split(flat);
        GroupPoint::new(self.x_point(xi), self.t_point(ti))
    }

    /// Slice index of the zero central frequency.
    pub fn zero_slice(&self) -> usize {
        let h = self.n_t / 2;
        self.t_flat([h, h, h])
    }

    /// Volume of the central period box, (2·half_extent_t)³.
    pub fn period_volume(&self) -> f64 {
        (2.0 * self.half_extent_t).powi(3)
    }

    /// Riemann weight h_x⁴.
    pub fn x_cell(&self) -> f64 {
        self.hx().powi(4)
    }

    /// Riemann weight h_t³.
    pub fn t_cell(&self) -> f64 {
        self.ht().powi(3)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::default_grid()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_contains_unit_shell() {
        let g = GridSpec::default_grid();
        assert!((g.da() - 0.5f64.sqrt()).abs() < 1e-14);
        let shells: Vec<f64> = (0..g.n_slices()).map(|s| g.a_point(s).norm()).collect();
        assert_eq!(shells.iter().filter(|r| (*r - 1.0).abs() < 1e-12).count(), 12);
        assert_eq!(shells.iter().filter(|r| (*r - 0.5f64.sqrt()).abs() < 1e-12).count(), 6);
        assert_eq!(g.a_point(g.zero_slice()), ImQuaternion::ZERO);
    }

    #[test]
    fn index_round_trip() {
        let g = GridSpec::default_grid();
        for flat in [0, 17, 4095, g.len() - 1] {
            let (xi, ti) = g.split(flat);
            assert_eq!(g.flat(xi, ti), flat);
            assert_eq!(g.x_flat(g.x_multi(xi)), xi);
            assert_eq!(g.t_flat(g.t_multi(ti)), ti);
        }
        assert_eq!(g.x_node(6), 0.0);
    }

    #[test]
    fn validation() {
        assert!(GridSpec::new(1.0, 5, 1.0, 4).is_err());
        assert!(GridSpec::new(1.0, 2, 1.0, 4).is_err());
        assert!(GridSpec::new(0.0, 8, 1.0, 4).is_err());
        assert!(GridSpec::new(1.0, 8, 1.0, 4).is_ok());
    }
}
