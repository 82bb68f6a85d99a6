//! Separable interpolation on uniform tensor grids with zero extension.

use qheis_core::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    /// Two-tap linear interpolation per axis.
    #[default]
    Linear,
    /// Four-tap Catmull–Rom (Keys, a = −1/2) per axis.
    Cubic,
}

const HULL_SLACK: f64 = 1e-9;

/// Taps `(index, weight)` for fractional index `u` on an axis of `n` nodes,
/// or `None` when `u` lies outside `[0, n − 1]`.
pub fn axis_weights(u: f64, n: usize, method: Interp) -> Option<Vec<(usize, f64)>> {
    let top = (n - 1) as f64;
    if !(u >= -HULL_SLACK && u <= top + HULL_SLACK) {
        return None;
    }
    let u = u.clamp(0.0, top);
    let lo = (u.floor() as usize).min(n - 2);
    let t = u - lo as f64;
    match method {
        Interp::Linear => Some(vec![(lo, 1.0 - t), (lo + 1, t)]),
        Interp::Cubic => {
            let w = keys(t);
            Some(
                (0..4)
                    .filter_map(|k| {
                        let i = lo as isize + k as isize - 1;
                        (i >= 0 && (i as usize) < n).then_some((i as usize, w[k]))
                    })
                    .collect(),
            )
        }
    }
}

/// Catmull–Rom weights for the taps at offsets −1, 0, 1, 2.
fn keys(t: f64) -> [f64; 4] {
    [
        ((-0.5 * t + 1.0) * t - 0.5) * t,
        (1.5 * t - 2.5) * t * t + 1.0,
        ((-1.5 * t + 2.0) * t + 0.5) * t,
        (0.5 * t - 0.5) * t * t,
    ]
}

/// Interpolates a row-major n⁴ array at fractional indices `u`.
pub fn interp4(data: &[Complex64], n: usize, u: [f64; 4], method: Interp) -> Option<Complex64> {
    let w0 = axis_weights(u[0], n, method)?;
    let w1 = axis_weights(u[1], n, method)?;
    let w2 = axis_weights(u[2], n, method)?;
    let w3 = axis_weights(u[3], n, method)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(i0, a0) in &w0 {
        for &(i1, a1) in &w1 {
            let b = a0 * a1;
            let base = (i0 * n + i1) * n;
            for &(i2, a2) in &w2 {
                let c = b * a2;
                let base2 = (base + i2) * n;
                for &(i3, a3) in &w3 {
                    acc += data[base2 + i3] * (c * a3);
                }
            }
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_partition_unity() {
        for method in [Interp::Linear, Interp::Cubic] {
            for u in [0.0, 0.3, 2.5, 6.99, 7.0] {
                let w = axis_weights(u, 8, method).unwrap();
                if (1.0..=6.0).contains(&u) {
                    let s: f64 = w.iter().map(|p| p.1).sum();
                    assert!((s - 1.0).abs() < 1e-14);
                }
            }
            assert!(axis_weights(-0.1, 8, method).is_none());
            assert!(axis_weights(7.1, 8, method).is_none());
        }
    }

    #[test]
    fn cubic_reproduces_quadratics() {
        let n: usize = 8;
        let f = |i: f64| 0.5 * i * i - 2.0 * i + 1.0;
        let data: Vec<Complex64> =
            (0..n * n * n * n).map(|k| Complex64::new(f(((k / (n * n * n)) % n) as f64), 0.0)).collect();
        let v = interp4(&data, n, [3.4, 2.0, 2.0, 2.0], Interp::Cubic).unwrap();
        assert!((v.re - f(3.4)).abs() < 1e-12);
    }
}
