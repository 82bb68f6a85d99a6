//! Centered discrete Fourier transforms on tensor arrays.
//!
//! Along one axis of length n the transform is
//! `F_k = scale · Σ_j f_j e^{sign·2πi(j − n/2)(k − n/2)/n}`, which is the
//! Riemann sum of a continuous Fourier integral when nodes sit at
//! `(j − n/2)h` and frequencies at `2π(k − n/2)/(nh)`.

use std::sync::Arc;

use qheis_core::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// e^{+i…}: the forward transforms of this crate.
    Plus,
    /// e^{−i…}: their inverses.
    Minus,
}

fn plan(n: usize, sign: Sign) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    // rustfft's inverse uses e^{+2πi jk/n}
    let dir = match sign {
        Sign::Plus => FftDirection::Inverse,
        Sign::Minus => FftDirection::Forward,
    };
    planner.plan_fft(n, dir)
}

/// Applies the centered transform along `axis` of a row-major array with
/// shape `dims`.
pub fn cdft_axis(data: &mut [Complex64], dims: &[usize], axis: usize, sign: Sign, scale: f64) {
    let n = dims[axis];
    let stride: usize = dims[axis + 1..].iter().product();
    let block = n * stride;
    assert_eq!(data.len() % block, 0);
    let fft = plan(n, sign);
    let half_phase = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre: Vec<f64> = (0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let post: Vec<f64> = pre.iter().map(|p| p * half_phase * scale).collect();
    data.par_chunks_mut(block).for_each(|chunk| {
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for inner in 0..stride {
            for j in 0..n {
                line[j] = chunk[j * stride + inner] * pre[j];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for k in 0..n {
                chunk[k * stride + inner] = line[k] * post[k];
            }
        }
    });
}

pub fn cdft_axes(data: &mut [Complex64], dims: &[usize], axes: &[usize], sign: Sign, scales: &[f64]) {
    for (&ax, &s) in axes.iter().zip(scales) {
        cdft_axis(data, dims, ax, sign, s);
    }
}

/// Embeds an n⁴ array in the centre of an m⁴ zero array (m ≥ n, same parity).
pub fn pad4(data: &[Complex64], n: usize, m: usize) -> Vec<Complex64> {
    let off = (m - n) / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); m.pow(4)];
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                let src = ((i0 * n + i1) * n + i2) * n;
                let dst = (((i0 + off) * m + i1 + off) * m + i2 + off) * m + off;
                out[dst..dst + n].copy_from_slice(&data[src..src + n]);
            }
        }
    }
    out
}

/// 4-D centered transform with the same scale on each axis.
pub fn cdft4(data: &mut [Complex64], n: usize, sign: Sign, scale: f64) {
    cdft_axes(data, &[n; 4], &[0, 1, 2, 3], sign, &[scale; 4]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_direct_sum() {
        let n = 6;
        let h = 0.7;
        let f: Vec<Complex64> = (0..n).map(|j| Complex64::new((j as f64).sin(), 0.3 * j as f64)).collect();
        let mut g = f.clone();
        cdft_axis(&mut g, &[n], 0, Sign::Plus, h);
        for (k, gk) in g.iter().enumerate() {
            let y = 2.0 * PI * (k as f64 - 3.0) / (n as f64 * h);
            let want: Complex64 =
                f.iter().enumerate().map(|(j, fj)| fj * Complex64::from_polar(h, (j as f64 - 3.0) * h * y)).sum();
            assert!((gk - want).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip() {
        let dims = [4, 6, 8];
        let len: usize = dims.iter().product();
        let f: Vec<Complex64> =
            (0..len).map(|j| Complex64::new((0.37 * j as f64).cos(), (0.11 * j as f64).sin())).collect();
        let mut g = f.clone();
        let hs = [0.5, 1.0, 0.25];
        let fwd: Vec<f64> = hs.to_vec();
        let inv: Vec<f64> = dims.iter().zip(&hs).map(|(n, h)| 1.0 / (*n as f64 * h)).collect();
        cdft_axes(&mut g, &dims, &[0, 1, 2], Sign::Plus, &fwd);
        cdft_axes(&mut g, &dims, &[0, 1, 2], Sign::Minus, &inv);
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
