//! Euclidean Fourier analysis on ℝ⁴ × ℝ³ with forward kernel
//! e^{i⟨x,y⟩}e^{i⟨t,a⟩}, the mixing map Ψ and the central multiplier 𝓛^μ.

use std::f64::consts::PI;

use qheis_core::{Complex64, Quaternion};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fft::{cdft4, cdft_axes, pad4, Sign};
use crate::field::{Domain, Field};
use crate::grid::GridSpec;
use crate::interp::{interp4, Interp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

const DIMS: usize = 7;
const X_AXES: [usize; 4] = [0, 1, 2, 3];
const T_AXES: [usize; 3] = [4, 5, 6];

fn dims(g: &GridSpec) -> [usize; DIMS] {
    [g.n_x, g.n_x, g.n_x, g.n_x, g.n_t, g.n_t, g.n_t]
}

fn transform(f: &Field, axes: &[usize], dir: Direction, from: Domain, to: Domain) -> Result<Field> {
    f.expect_domain(from)?;
    let g = *f.grid();
    let mut v = f.values()?.to_vec();
    let scale = |ax: usize| -> f64 {
        let x = ax < 4;
        match (dir, x) {
            (Direction::Forward, true) => g.hx(),
            (Direction::Forward, false) => g.ht(),
            (Direction::Inverse, true) => g.dy() / (2.0 * PI),
            (Direction::Inverse, false) => g.da() / (2.0 * PI),
        }
    };
    let scales: Vec<f64> = axes.iter().map(|&a| scale(a)).collect();
    let sign = if dir == Direction::Forward { Sign::Plus } else { Sign::Minus };
    cdft_axes(&mut v, &dims(&g), axes, sign, &scales);
    Field::from_values(g, v, to)
}

/// ℱf(y,a) = ∫ f(x,t) e^{i⟨x,y⟩} e^{i⟨t,a⟩} dx dt, or its inverse.
pub fn fourier_full(f: &Field, dir: Direction) -> Result<Field> {
    let axes = [0, 1, 2, 3, 4, 5, 6];
    match dir {
        Direction::Forward => transform(f, &axes, dir, Domain::Spatial, Domain::Frequency),
        Direction::Inverse => transform(f, &axes, dir, Domain::Frequency, Domain::Spatial),
    }
}

/// ℱ₂f(x,a) = ∫ f(x,t) e^{i⟨t,a⟩} dt, or its inverse.
pub fn fourier_central(f: &Field, dir: Direction) -> Result<Field> {
    match dir {
        Direction::Forward => transform(f, &T_AXES, dir, Domain::Spatial, Domain::Mixed),
        Direction::Inverse => transform(f, &T_AXES, dir, Domain::Mixed, Domain::Spatial),
    }
}

/// Transform over the four x-axes only: (x,a) ↔ (y,a).
pub fn fourier_x(f: &Field, dir: Direction) -> Result<Field> {
    match dir {
        Direction::Forward => transform(f, &X_AXES, dir, Domain::Mixed, Domain::Frequency),
        Direction::Inverse => transform(f, &X_AXES, dir, Domain::Frequency, Domain::Mixed),
    }
}

/// Resampling options for Ψ and Ψ⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiOptions {
    pub interp: Interp,
    /// Spectral oversampling factor applied to each slice before
    /// interpolating (1 = none).
    pub oversample: usize,
}

impl Default for PsiOptions {
    fn default() -> Self {
        PsiOptions { interp: Interp::Linear, oversample: 1 }
    }
}

impl PsiOptions {
    /// Catmull–Rom on a 2× spectrally refined slice.
    pub fn accurate() -> Self {
        PsiOptions { interp: Interp::Cubic, oversample: 2 }
    }
}

/// Slices whose energy is below this fraction of the largest are skipped.
pub const NEGLIGIBLE_SLICE: f64 = 1e-24;

/// Indices of slices carrying non-negligible energy.
pub fn active_slices(f: &Field) -> Result<Vec<usize>> {
    let e = f.slice_energies()?;
    let top = e.iter().cloned().fold(0.0, f64::max);
    Ok((0..e.len()).filter(|&k| top > 0.0 && e[k] > NEGLIGIBLE_SLICE * top).collect())
}

/// f with every central slice at |a| outside [lo, hi] set to zero.
pub fn restrict_shell(f: &Field, lo: f64, hi: f64) -> Result<Field> {
    let g = *f.grid();
    let mut m = fourier_central(f, Direction::Forward)?;
    let zero = vec![Complex64::new(0.0, 0.0); g.slice_len()];
    for ti in 0..g.n_slices() {
        let r = g.a_point(ti).norm();
        if r < lo || r > hi {
            m.set_slice(ti, &zero)?;
        }
    }
    fourier_central(&m, Direction::Inverse)
}

/// The smallest nonzero |a| on the central lattice.
pub fn innermost_radius(g: &GridSpec) -> f64 {
    (0..g.n_slices()).map(|ti| g.a_point(ti).norm()).filter(|r| *r > 0.0).fold(f64::INFINITY, f64::min)
}

/// Applies `op` to every active slice in parallel and assembles the result.
pub(crate) fn map_slices<F>(f: &Field, to: Domain, op: F) -> Result<Field>
where
    F: Fn(usize, Vec<Complex64>) -> Result<(Vec<Complex64>, u64)> + Sync,
{
    let g = *f.grid();
    let active = active_slices(f)?;
    let outs: Result<Vec<(usize, Vec<Complex64>, u64)>> = active
        .par_iter()
        .map(|&ti| {
            let (v, ood) = op(ti, f.slice(ti)?)?;
            Ok((ti, v, ood))
        })
        .collect();
    let mut out = Field::zeros(g, to);
    let mut total_ood = 0;
    for (ti, v, ood) in outs? {
        out.set_slice(ti, &v)?;
        total_ood += ood;
    }
    out.add_ood(total_ood);
    Ok(out)
}

/// Samples an x-slice given on the spatial x-grid at arbitrary points,
/// after optional spectral refinement.
struct SpatialSampler {
    data: Vec<Complex64>,
    n: usize,
    origin: f64,
    step: f64,
    interp: Interp,
}

impl SpatialSampler {
    fn new(g: &GridSpec, slice: Vec<Complex64>, opts: PsiOptions) -> Self {
        let n = g.n_x;
        let p = opts.oversample.max(1);
        if p == 1 {
            return SpatialSampler { data: slice, n, origin: g.x_node(0), step: g.hx(), interp: opts.interp };
        }
        // trigonometric refinement: spectrum on the y-grid, zero-padded, back
        // onto a grid p times finer over the same box
        let mut spec = slice;
        cdft4(&mut spec, n, Sign::Plus, g.hx());
        let m = p * n;
        let mut fine = pad4(&spec, n, m);
        cdft4(&mut fine, m, Sign::Minus, g.dy() / (2.0 * PI));
        let step = g.hx() / p as f64;
        SpatialSampler { data: fine, n: m, origin: -((m / 2) as f64) * step, step, interp: opts.interp }
    }

    fn at(&self, x: &Quaternion) -> Option<Complex64> {
        let u = x.to_array().map(|c| (c - self.origin) / self.step);
        interp4(&self.data, self.n, u, self.interp)
    }
}

/// Samples a y-slice (frequency side) at arbitrary frequencies.
struct SpectralSampler {
    data: Vec<Complex64>,
    n: usize,
    origin: f64,
    step: f64,
    interp: Interp,
}

impl SpectralSampler {
    fn new(g: &GridSpec, slice: Vec<Complex64>, opts: PsiOptions) -> Self {
        let n = g.n_x;
        let p = opts.oversample.max(1);
        if p == 1 {
            return SpectralSampler { data: slice, n, origin: g.y_node(0), step: g.dy(), interp: opts.interp };
        }
        // back to x, zero-pad the box p-fold, forward onto a p-fold finer y-grid
        let mut sp = slice;
        cdft4(&mut sp, n, Sign::Minus, g.dy() / (2.0 * PI));
        let m = p * n;
        let mut fine = pad4(&sp, n, m);
        cdft4(&mut fine, m, Sign::Plus, g.hx());
        let step = g.dy() / p as f64;
        SpectralSampler { data: fine, n: m, origin: -((m / 2) as f64) * step, step, interp: opts.interp }
    }

    fn at(&self, y: &Quaternion) -> Option<Complex64> {
        let u = y.to_array().map(|c| (c - self.origin) / self.step);
        interp4(&self.data, self.n, u, self.interp)
    }
}

/// Ψ(F)(x,a) = F(−2xa, a) on a frequency-domain field (forward), or
/// Ψ⁻¹(G)(y,a) = G(ya/(2|a|²), a) on a mixed-domain field (inverse), with
/// the a = 0 slice of Ψ⁻¹ set to zero.
pub fn mixing_psi(f: &Field, dir: Direction, opts: PsiOptions) -> Result<Field> {
    let g = *f.grid();
    match dir {
        Direction::Forward => {
            f.expect_domain(Domain::Frequency)?;
            map_slices(f, Domain::Mixed, |ti, slice| {
                let a = g.a_point(ti).to_quat();
                let s = SpectralSampler::new(&g, slice, opts);
                let mut ood = 0;
                let v = (0..g.slice_len())
                    .map(|xi| {
                        let y = g.x_point(xi) * a * -2.0;
                        s.at(&y).unwrap_or_else(|| {
                            ood += 1;
                            Complex64::new(0.0, 0.0)
                        })
                    })
                    .collect();
                Ok((v, ood))
            })
        }
        Direction::Inverse => {
            f.expect_domain(Domain::Mixed)?;
            let zero = g.zero_slice();
            map_slices(f, Domain::Frequency, |ti, slice| {
                if ti == zero {
                    return Ok((vec![Complex64::new(0.0, 0.0); g.slice_len()], 0));
                }
                let a = g.a_point(ti);
                let aq = a.to_quat() * (1.0 / (2.0 * a.norm_sqr()));
                let s = SpatialSampler::new(&g, slice, opts);
                let mut ood = 0;
                let v = (0..g.slice_len())
                    .map(|yi| {
                        let x = g.y_point(yi) * aq;
                        s.at(&x).unwrap_or_else(|| {
                            ood += 1;
                            Complex64::new(0.0, 0.0)
                        })
                    })
                    .collect();
                Ok((v, ood))
            })
        }
    }
}

/// Output of the central multiplier.
#[derive(Debug)]
pub struct MultiplierOutput {
    pub field: Field,
    /// Set when μ < 0 and the undefined a = 0 factor was replaced by 0.
    pub zero_slice_flag: bool,
}

/// 𝓛^μ: multiply ℱ₂f by (|a|/π)^{2μ}. The a = 0 factor is 0 for μ ≠ 0.
pub fn multiplier_l(f: &Field, mu: f64) -> Result<MultiplierOutput> {
    let mixed = if f.domain() == Domain::Mixed { f.clone() } else { fourier_central(f, Direction::Forward)? };
    let scaled = multiply_mixed(&mixed, mu)?;
    let field = if f.domain() == Domain::Mixed { scaled } else { fourier_central(&scaled, Direction::Inverse)? };
    Ok(MultiplierOutput { field, zero_slice_flag: mu < 0.0 })
}

/// The multiplier applied directly to a mixed-domain field.
pub fn multiply_mixed(f: &Field, mu: f64) -> Result<Field> {
    f.expect_domain(Domain::Mixed)?;
    let g = *f.grid();
    let ns = g.n_slices();
    let factors: Vec<f64> = (0..ns)
        .map(|ti| {
            let r = g.a_point(ti).norm();
            if mu == 0.0 {
                1.0
            } else if r == 0.0 {
                0.0
            } else {
                (r / PI).powf(2.0 * mu)
            }
        })
        .collect();
    let v: Vec<Complex64> = f.values()?.iter().enumerate().map(|(k, z)| z * factors[k % ns]).collect();
    Field::from_values(g, v, Domain::Mixed)
}
