//! Product-integration weights for the kernel `(u_k - s)^(p-1)` on one
//! interval `[u_j, u_{j+1}]`.
//!
//! Interval geometry is passed as `(near, h)`: `near = u_k - u_{j+1} ≥ 0` is
//! the distance from the evaluation node to the interval's right end and
//! `h = u_{j+1} - u_j` its width. Far-field intervals (`near ≥ 4h`) use a
//! binomial series to avoid the cancellation of the closed forms.

use crate::grid::LogGrid;

const SERIES_SWITCH: f64 = 4.0;
const SERIES_TERMS: usize = 64;

/// `(near + h)^p - near^p` for `p > 0`.
#[inline]
pub fn power_diff(near: f64, h: f64, p: f64) -> f64 {
    if near == 0.0 {
        return h.powf(p);
    }
    let far = near + h;
    // far^p * (1 - (near/far)^p), with log1p for the ratio
    -far.powf(p) * (p * (-h / far).ln_1p()).exp_m1()
}

/// L1 weight: `∫_{u_j}^{u_{j+1}} (u_k - s)^(-order) ds`.
#[inline]
pub fn slope_weight(near: f64, h: f64, order: f64) -> f64 {
    let p = 1.0 - order;
    power_diff(near, h, p) / p
}

/// Weights `(left, right)` of the hat functions attached to `u_j` and
/// `u_{j+1}` against the kernel `(u_k - s)^(mu-1)`.
pub fn hat_weights(near: f64, h: f64, mu: f64) -> (f64, f64) {
    let q = near / h;
    if q >= SERIES_SWITCH {
        // (near + h z)^(mu-1) = near^(mu-1) Σ C(mu-1, m) (z/q)^m
        let scale = h * near.powf(mu - 1.0);
        let mut coeff = 1.0;
        let mut qpow = 1.0;
        let mut left = 0.0;
        let mut right = 0.0;
        for m in 0..SERIES_TERMS {
            let mf = m as f64;
            let term = coeff * qpow;
            left += term / (mf + 2.0);
            right += term / ((mf + 1.0) * (mf + 2.0));
            if term.abs() < 1e-18 * left.abs() {
                break;
            }
            coeff *= (mu - 1.0 - mf) / (mf + 1.0);
            qpow /= q;
        }
        (scale * left, scale * right)
    } else {
        let m0 = power_diff(near, h, mu) / mu;
        let left = if near == 0.0 {
            h.powf(mu) / (mu + 1.0)
        } else {
            (power_diff(near, h, mu + 1.0) / (mu + 1.0) - near * m0) / h
        };
        (left, m0 - left)
    }
}
/// L1 weights `b_{k,j}` for a fixed order, tabulated by lag on uniform grids.
pub(crate) struct SlopeWeights<'g> {
    grid: &'g LogGrid,
    order: f64,
    table: Option<Vec<f64>>,
}

impl<'g> SlopeWeights<'g> {
    pub fn new(grid: &'g LogGrid, order: f64) -> Self {
        let table = grid.is_uniform().then(|| {
            let h = grid.step(0);
            (0..grid.intervals())
                .map(|lag| slope_weight(lag as f64 * h, h, order))
                .collect()
        });
        Self { grid, order, table }
    }

    /// Per-pair evaluation, for callers that only need a few nodes.
    pub fn untabulated(grid: &'g LogGrid, order: f64) -> Self {
        Self { grid, order, table: None }
    }

    /// Weight of slope `j` when evaluating at node `k > j`.
    #[inline]
    pub fn get(&self, k: usize, j: usize) -> f64 {
        match &self.table {
            Some(t) => t[k - j - 1],
            None => slope_weight(self.grid.gap(k, j + 1), self.grid.step(j), self.order),
        }
    }
}

/// Hat-function product-integration weights for kernel exponent `mu - 1`.
pub(crate) struct HatWeights<'g> {
    grid: &'g LogGrid,
    mu: f64,
    table: Option<Vec<(f64, f64)>>,
}

impl<'g> HatWeights<'g> {
    pub fn new(grid: &'g LogGrid, mu: f64) -> Self {
        let table = grid.is_uniform().then(|| {
            let h = grid.step(0);
            (0..grid.intervals())
                .map(|lag| hat_weights(lag as f64 * h, h, mu))
                .collect()
        });
        Self { grid, mu, table }
    }

    #[inline]
    pub fn get(&self, k: usize, j: usize) -> (f64, f64) {
        match &self.table {
            Some(t) => t[k - j - 1],
            None => hat_weights(self.grid.gap(k, j + 1), self.grid.step(j), self.mu),
        }
    }
}
