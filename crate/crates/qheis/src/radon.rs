//! The Radon transform ℛf(x,t) = ∫ f(y, t − 2Im(ȳx)) dy and its inversions.
//!
//! On frequency slices ℱ₂ℛf(x,a) = ℱf(−2xa, a), so ℛ = ℱ₂⁻¹ Ψ ℱ and
//! ℛ⁻¹ = ℱ⁻¹ Ψ⁻¹ ℱ₂. The second route inverts through the central
//! multiplier: ℛ⁻¹ = 𝓛^μ ℛ 𝓛^ν with μ + ν = 2.

use std::f64::consts::PI;

use qheis_core::{Complex64, Form, GroupPoint, ImQuaternion, Quaternion};
use rayon::prelude::*;
use serde::Serialize;

use crate::efourier::{fourier_central, fourier_full, mixing_psi, multiplier_l, Direction, PsiOptions};
use crate::error::{Error, Result};
use crate::field::{Domain, Field};
use crate::gft::{self, GroupSpectrum};
use crate::grid::GridSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RadonMethod {
    Direct,
    Fft,
}

/// ℛf on the spatial grid, with the number of Ψ lookups that fell outside
/// the sampled frequency box.
#[derive(Clone, Debug)]
pub struct RadonResult {
    pub field: Field,
    pub method: RadonMethod,
    pub ood: u64,
}

impl RadonResult {
    pub fn grid(&self) -> &GridSpec {
        self.field.grid()
    }
}

/// ℛf at `points` by a trapezoid rule over y on the x-grid of `grid`,
/// closed by the node at +half_extent so the node set is symmetric.
pub fn radon_direct(f: &dyn Form, grid: &GridSpec, points: &[GroupPoint]) -> Vec<Complex64> {
    let n = grid.n_x;
    let h = grid.hx();
    let axis: Vec<(f64, f64)> =
        (0..=n).map(|j| ((j as f64 - (n / 2) as f64) * h, if j == 0 || j == n { 0.5 * h } else { h })).collect();
    let m = axis.len();
    points
        .par_iter()
        .map(|p| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i0 in 0..m {
                for i1 in 0..m {
                    for i2 in 0..m {
                        for i3 in 0..m {
                            let y = Quaternion::new(axis[i0].0, axis[i1].0, axis[i2].0, axis[i3].0);
                            let w = axis[i0].1 * axis[i1].1 * axis[i2].1 * axis[i3].1;
                            let s = (y.conj() * p.x).im();
                            let t = p.t - s * 2.0;
                            acc += f.eval(&GroupPoint::new(y, t)) * w;
                        }
                    }
                }
            }
            acc
        })
        .collect()
}

/// ℛf = ℱ₂⁻¹ Ψ ℱ f on the grid of `f`.
pub fn radon_fft(f: &Field, opts: PsiOptions) -> Result<RadonResult> {
    f.expect_domain(Domain::Spatial)?;
    let big = fourier_full(f, Direction::Forward)?;
    let mixed = mixing_psi(&big, Direction::Forward, opts)?;
    let ood = mixed.ood_count();
    let field = fourier_central(&mixed, Direction::Inverse)?;
    field.add_ood(ood);
    Ok(RadonResult { field, method: RadonMethod::Fft, ood })
}

/// ℛ⁻¹g = ℱ⁻¹ Ψ⁻¹ ℱ₂ g, with the a = 0 slice of Ψ⁻¹ set to zero.
pub fn inv_radon_thm7(g: &Field, opts: PsiOptions) -> Result<Field> {
    g.expect_domain(Domain::Spatial)?;
    let mixed = fourier_central(g, Direction::Forward)?;
    let big = mixing_psi(&mixed, Direction::Inverse, opts)?;
    let ood = big.ood_count();
    let out = fourier_full(&big, Direction::Inverse)?;
    out.add_ood(ood);
    Ok(out)
}

/// ℛ⁻¹g = 𝓛^μ ℛ 𝓛^ν g.
pub fn inv_radon_lrl(g: &Field, mu: f64, nu: f64, opts: PsiOptions) -> Result<Field> {
    if (mu + nu - 2.0).abs() > 1e-12 || !mu.is_finite() || !nu.is_finite() {
        return Err(Error::BadExponents { mu, nu });
    }
    let inner = multiplier_l(g, nu)?.field;
    let r = radon_fft(&inner, opts)?;
    Ok(multiplier_l(&r.field, mu)?.field)
}

fn check_nonzero(a: &ImQuaternion) -> Result<()> {
    if a.norm() == 0.0 {
        Err(Error::Core(qheis_core::CoreError::ZeroFrequency))
    } else {
        Ok(())
    }
}

/// Relative HS residual of ℛ̂f(a) against (π/|a|)² f̂(a) S, with `rf = ℛf`.
pub fn spectral_radon_residual(f: &Field, rf: &Field, a: &ImQuaternion, l_max: usize) -> Result<f64> {
    check_nonzero(a)?;
    let lhs = gft::gft_matrix(rf, a, l_max)?;
    let spec = GroupSpectrum::new(l_max, vec![*a], vec![gft::gft_matrix(f, a, l_max)?])?;
    let rhs = &spec.apply_s().mats[0] * Complex64::new((PI / a.norm()).powi(2), 0.0);
    let den = rhs.norm();
    if den == 0.0 {
        return Ok(if lhs.norm() == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((lhs - &rhs).norm() / den)
}

/// [`spectral_radon_residual`] with ℛf computed by [`radon_fft`].
pub fn spectral_radon_check(f: &Field, a: &ImQuaternion, l_max: usize, opts: PsiOptions) -> Result<f64> {
    check_nonzero(a)?;
    let rf = radon_fft(f, opts)?;
    spectral_radon_residual(f, &rf.field, a, l_max)
}

/// Slice energies of ℛf against f on the smallest nonzero active shell.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SmoothingGain {
    pub radius: f64,
    pub measured: f64,
    /// (π/|a|)⁴
    pub expected: f64,
}

pub fn smoothing_gain(f: &Field, rf: &Field) -> Result<SmoothingGain> {
    f.check_compatible(rf)?;
    let g = *f.grid();
    let ef = fourier_central(f, Direction::Forward)?.slice_energies()?;
    let er = fourier_central(rf, Direction::Forward)?.slice_energies()?;
    let top = ef.iter().cloned().fold(0.0, f64::max);
    let radius = (0..g.n_slices())
        .map(|k| g.a_point(k).norm())
        .zip(&ef)
        .filter(|(r, e)| *r > 0.0 && **e > 1e-6 * top)
        .map(|(r, _)| r)
        .fold(f64::INFINITY, f64::min);
    if !radius.is_finite() {
        return Err(Error::BadParams("no energy away from a = 0".into()));
    }
    let on_shell = |e: &[f64]| -> f64 {
        (0..g.n_slices()).filter(|&k| (g.a_point(k).norm() - radius).abs() < 1e-9).map(|k| e[k]).sum()
    };
    Ok(SmoothingGain { radius, measured: on_shell(&er) / on_shell(&ef), expected: (PI / radius).powi(4) })
}

/// Share of the central spectrum carried by the a = 0 slice.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LizorkinGate {
    pub zero_fraction: f64,
    pub tol: f64,
    pub flagged: bool,
}

/// Inversion is only meaningful when the a = 0 slice of ℱ₂f is negligible.
pub fn lizorkin_gate(f: &Field, tol: f64) -> Result<LizorkinGate> {
    let e = fourier_central(f, Direction::Forward)?.slice_energies()?;
    let total: f64 = e.iter().sum();
    let zero_fraction = if total > 0.0 { e[f.grid().zero_slice()] / total } else { 0.0 };
    Ok(LizorkinGate { zero_fraction, tol, flagged: zero_fraction > tol })
}
