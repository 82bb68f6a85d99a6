//! Radial admissible wavelets φ_η with f̂(a) = Σ_l η((l+1)|a|) P_{a,l}, the
//! continuous wavelet transform W_φf(x,t,ρ) = ⟨f, U(x,t,ρ)φ⟩ and the
//! reconstruction and Radon-inversion formulas built on it.
//!
//! Coefficients and reconstructions run per frequency slice: on slice a the
//! transform at scale ρ right-multiplies f̂(a) by ρ^{5/2} φ̂(ρa)^*, and the
//! synthesis multiplies by ρ^{5/2} φ̂(ρa) again.

use std::f64::consts::PI;
use std::sync::Arc;

use qheis_core::form::{Dilated, Involution, Rotated};
use qheis_core::group::{ginv, gmul};
use qheis_core::quad::{gauss_legendre, integrate_dr_over_r};
use qheis_core::radial::RadialProfile;
use qheis_core::{fock, AffinePoint, Complex64, CoreError, Form, GroupPoint, UnitQuaternion};
use rayon::prelude::*;
use serde::Serialize;

use crate::efourier::{active_slices, fourier_central, Direction};
use crate::error::{Error, Result};
use crate::field::{sample, Domain, Field, SharedForm};
use crate::gft::{self, Matrix, RadialCoeffs, RadialSynthesis};
use crate::grid::GridSpec;

/// Fock truncation for the slice-wise paths. Degree-8 basis functions are
/// under-resolved by 12 nodes per x-axis; degree 4 keeps the slice round
/// trip near 1e-2.
pub const WAVELET_DEGREE: usize = 4;
pub const RHO_NODES: usize = 32;
pub const RHO_RANGE: [f64; 2] = [0.01, 50.0];

const SYNTH_NODES: usize = 128;
const SYNTH_TAIL: f64 = 1e-10;

/// Which spectrum a wavelet carries on top of its profile η.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// η((l+1)|a|)
    Plain,
    /// (|a|/π)² (−1)^l η((l+1)|a|), the spectrum of 𝓛ℛ𝓛φ_η.
    Lrl,
}

/// A radial wavelet given by its spectrum B(r,l), truncated at degree `l_max`.
#[derive(Clone)]
pub struct Wavelet {
    pub profile: RadialProfile,
    pub variant: Variant,
    pub l_max: usize,
    /// Restricts the spectrum to one degree.
    pub only_degree: Option<usize>,
    /// 4π∫|B(r,l)|² dr/r for l = 0..=l_max.
    pub per_degree_admissibility: Vec<f64>,
    phi: Arc<RadialSynthesis>,
}

impl std::fmt::Debug for Wavelet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Wavelet")
            .field("profile", &self.profile.kind())
            .field("variant", &self.variant)
            .field("l_max", &self.l_max)
            .field("only_degree", &self.only_degree)
            .finish()
    }
}

fn spectrum(profile: &RadialProfile, variant: Variant, only: Option<usize>, r: f64, l: usize) -> f64 {
    if only.is_some_and(|d| d != l) {
        return 0.0;
    }
    let e = profile.eta((l + 1) as f64 * r);
    match variant {
        Variant::Plain => e,
        Variant::Lrl => {
            let s = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
            s * e * (r / PI).powi(2)
        }
    }
}

/// Named profile families: `power-exp` with [k, c] gives rᵏe^{−cr};
/// `bump` with [lo, hi] gives a smooth bump on [lo, hi].
pub fn make_profile(kind: &str, params: &[f64]) -> Result<RadialProfile> {
    let bad = || Error::BadParams(format!("profile {kind} expects two parameters"));
    let p = match (kind, params) {
        ("power-exp", [k, c]) => {
            if k.fract() != 0.0 || *k < 0.0 {
                return Err(Error::BadParams("power-exp needs an integer k ≥ 0".into()));
            }
            RadialProfile::power_exp(*k as u32, *c)?
        }
        ("bump", [lo, hi]) => RadialProfile::bump(*lo, *hi)?,
        ("power-exp" | "bump", _) => return Err(bad()),
        _ => return Err(Error::BadParams(format!("unknown profile family {kind}"))),
    };
    Ok(p)
}

impl Wavelet {
    fn build(profile: RadialProfile, variant: Variant, only_degree: Option<usize>, l_max: usize) -> Result<Self> {
        let per_degree_admissibility = (0..=l_max)
            .map(|l| {
                let [r0, r1] = profile.support();
                let sc = (l + 1) as f64;
                let (v, _) = integrate_dr_over_r(
                    |r| spectrum(&profile, variant, only_degree, r, l).powi(2),
                    (r0 / sc).ln(),
                    r1.ln(),
                    1e-13,
                )?;
                Ok(4.0 * PI * v)
            })
            .collect::<Result<Vec<f64>>>()?;
        if per_degree_admissibility.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NotAdmissible("a degree integral diverges").into());
        }
        let (p2, v2) = (profile.clone(), variant);
        let coeffs: RadialCoeffs = Arc::new(move |r, l| Complex64::new(spectrum(&p2, v2, only_degree, r, l), 0.0));
        let r_max = synthesis_range(&profile, variant, only_degree, l_max);
        let phi = RadialSynthesis::new(coeffs, l_max, r_max, SYNTH_NODES, 1e-8)?;
        Ok(Wavelet { profile, variant, l_max, only_degree, per_degree_admissibility, phi: Arc::new(phi) })
    }

    /// B(r,l), the spectrum on degree l at |a| = r.
    pub fn coeff(&self, r: f64, l: usize) -> f64 {
        if l > self.l_max {
            return 0.0;
        }
        spectrum(&self.profile, self.variant, self.only_degree, r, l)
    }

    pub fn c_eta(&self) -> f64 {
        self.profile.c_eta()
    }

    /// The same wavelet restricted to degree `l`.
    pub fn single_degree(&self, l: usize) -> Result<Self> {
        Self::build(self.profile.clone(), self.variant, Some(l), self.l_max)
    }

    /// Closed-form evaluator of φ.
    pub fn form(&self) -> SharedForm {
        self.phi.clone()
    }

    pub fn synthesis(&self) -> &RadialSynthesis {
        &self.phi
    }

    /// φ sampled pointwise on `grid`.
    pub fn sample(&self, grid: GridSpec) -> Result<Field> {
        sample(self.form(), grid)
    }

    /// φ periodised over the t-box of `grid`: the exact central transform
    /// placed on the frequency lattice and inverted.
    pub fn lattice_field(&self, grid: GridSpec) -> Result<Field> {
        let ns = grid.n_slices();
        let values: Vec<Complex64> = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (xi, ti) = (k / ns, k % ns);
                let a = grid.a_point(ti);
                let r = a.norm();
                if r == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let b: Vec<Complex64> = (0..=self.l_max).map(|l| Complex64::new(self.coeff(r, l), 0.0)).collect();
                gft::radial_mixed(&b, r, grid.x_point(xi).norm())
            })
            .collect();
        fourier_central(&Field::from_values(grid, values, Domain::Mixed)?, Direction::Inverse)
    }

    /// ‖φ‖² from the closed-form central transform: Plancherel in t and the
    /// radial x-integral done by quadrature in u = 2r|x|².
    pub fn norm_sq_quadrature(&self) -> f64 {
        let r_max = synthesis_range(&self.profile, self.variant, self.only_degree, self.l_max);
        let (xr, wr) = gauss_legendre(200);
        let (xu, wu) = gauss_legendre(160);
        let u_max = 80.0 + 8.0 * self.l_max as f64;
        xr.iter()
            .zip(&wr)
            .map(|(x, w)| {
                let r = 0.5 * r_max * (x + 1.0);
                let b: Vec<Complex64> = (0..=self.l_max).map(|l| Complex64::new(self.coeff(r, l), 0.0)).collect();
                // ∫ s³ |ℱ₂φ(s,r)|² ds with s = √(u/2r)
                let inner: f64 = xu
                    .iter()
                    .zip(&wu)
                    .map(|(y, v)| {
                        let u = 0.5 * u_max * (y + 1.0);
                        let s = (u / (2.0 * r)).sqrt();
                        0.5 * u_max * v * gft::radial_mixed(&b, r, s).norm_sqr() * u / (8.0 * r * r)
                    })
                    .sum();
                // (2π)⁻³ · 4πr² · 2π²
                0.5 * r_max * w * r * r * inner
            })
            .sum()
    }
}

/// Smallest r beyond which r⁴Σ(l+1)|B(r,l)| stays below SYNTH_TAIL of its peak.
fn synthesis_range(profile: &RadialProfile, variant: Variant, only: Option<usize>, l_max: usize) -> f64 {
    let top = profile.support()[1];
    let weight = |r: f64| -> f64 {
        r.powi(4) * (0..=l_max).map(|l| (l + 1) as f64 * spectrum(profile, variant, only, r, l).abs()).sum::<f64>()
    };
    let n = 4000;
    let rs: Vec<f64> = (0..=n).map(|k| top * (1e-6f64).powf(1.0 - k as f64 / n as f64)).collect();
    let w: Vec<f64> = rs.iter().map(|&r| weight(r)).collect();
    let peak = w.iter().cloned().fold(0.0, f64::max);
    let mut cut = top;
    for k in (0..=n).rev() {
        if w[k] > SYNTH_TAIL * peak {
            cut = rs[(k + 1).min(n)];
            break;
        }
    }
    cut
}

/// φ_η truncated at degree `l_max`.
pub fn build_phi_eta(profile: RadialProfile, l_max: usize) -> Result<Wavelet> {
    Wavelet::build(profile, Variant::Plain, None, l_max)
}

/// 𝓛ℛ𝓛φ for a radial φ: the spectrum gains (|a|/π)²·S.
pub fn lrl_wavelet(phi: &Wavelet) -> Result<Wavelet> {
    if phi.variant != Variant::Plain {
        return Err(Error::BadParams("lrl_wavelet expects a plain wavelet".into()));
    }
    Wavelet::build(phi.profile.clone(), Variant::Lrl, phi.only_degree, phi.l_max)
}

/// Per-degree Calderón values of a sampled function, from gft blocks on the
/// lattice slices: (1/(l+1)) Σ_a ‖f̂(a)P_l‖² |a|⁻³ Δa.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub per_degree: Vec<f64>,
    /// Share of each degree's value carried by the innermost nonzero shell.
    pub lowest_shell_share: Vec<f64>,
    pub lowest_shell_radius: f64,
    /// Fraction of the central spectrum sitting on a = 0.
    pub zero_slice_fraction: f64,
    /// Set when the a = 0 slice carries energy, so the integrals diverge as
    /// the lattice is refined.
    pub diverging: bool,
}

pub fn admissibility(f: &Field, l_max: usize) -> Result<AdmissibilityReport> {
    let g = *f.grid();
    let mixed = fourier_central(f, Direction::Forward)?;
    let e = mixed.slice_energies()?;
    let total: f64 = e.iter().sum();
    let zero_slice_fraction = if total > 0.0 { e[g.zero_slice()] / total } else { 0.0 };
    let da3 = g.da().powi(3);
    let degs = fock::degrees(l_max);
    let mut per_degree = vec![0.0; l_max + 1];
    let mut shells: Vec<(f64, Vec<f64>)> = Vec::new();
    for ti in active_slices(&mixed)? {
        let a = g.a_point(ti);
        let r = a.norm();
        if r == 0.0 {
            continue;
        }
        let m = gft::gft_slices(&g, &[&mixed.slice(ti)?], &a, l_max)?.remove(0);
        let mut contrib = vec![0.0; l_max + 1];
        for (j, &l) in degs.iter().enumerate() {
            contrib[l] += m.column(j).norm_squared() / (l + 1) as f64 * da3 / r.powi(3);
        }
        for l in 0..=l_max {
            per_degree[l] += contrib[l];
        }
        match shells.iter_mut().find(|(s, _)| (s - r).abs() < 1e-9) {
            Some((_, c)) => c.iter_mut().zip(&contrib).for_each(|(x, y)| *x += y),
            None => shells.push((r, contrib)),
        }
    }
    shells.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (lowest_shell_radius, low) = shells.first().cloned().unwrap_or((0.0, vec![0.0; l_max + 1]));
    let lowest_shell_share = low.iter().zip(&per_degree).map(|(x, t)| if *t > 0.0 { x / t } else { 0.0 }).collect();
    Ok(AdmissibilityReport {
        per_degree,
        lowest_shell_share,
        lowest_shell_radius,
        zero_slice_fraction,
        diverging: zero_slice_fraction > 1e-8,
    })
}

/// How W_φf is evaluated at a single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Σ f(p) conj(U(g)φ(p)) over the grid.
    Inner,
    /// ρ^{5/2} (f ∗ φ̃_{ρ,u,v})(x,t) over the grid.
    Conv,
}

/// W_φf(g) by grid quadrature, with φ evaluated in closed form.
pub fn wtransform(f: &Field, phi: &Wavelet, g: &AffinePoint, method: Method) -> Result<Complex64> {
    f.expect_domain(Domain::Spatial)?;
    let grid = *f.grid();
    let v = f.values()?;
    let form = phi.synthesis();
    let terms: Vec<Complex64> = match method {
        Method::Inner => {
            let u = qheis_core::form::rep_u(*g, form);
            (0..grid.len()).into_par_iter().map(|k| v[k] * u.eval(&grid.point(k)).conj()).collect()
        }
        Method::Conv => {
            let kernel = Involution(Dilated::new(Rotated::new(form, g.u, g.v), g.rho())?);
            let at = g.translation_part();
            let amp = g.rho().powf(2.5);
            (0..grid.len()).into_par_iter().map(|k| v[k] * kernel.eval(&gmul(ginv(grid.point(k)), at)) * amp).collect()
        }
    };
    Ok(terms.iter().sum::<Complex64>() * grid.x_cell() * grid.t_cell())
}

/// Log-spaced scales with trapezoid weights for ∫ g(ρ) dρ.
#[derive(Clone, Debug, Serialize)]
pub struct RhoGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RhoGrid {
    pub fn log(n: usize, lo: f64, hi: f64) -> Result<Self> {
        if n < 2 || !(lo > 0.0 && hi > lo) {
            return Err(Error::BadParams("scale grid needs n ≥ 2 and 0 < lo < hi".into()));
        }
        let h = (hi / lo).ln() / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|k| lo * (h * k as f64).exp()).collect();
        let weights =
            nodes.iter().enumerate().map(|(k, r)| if k == 0 || k == n - 1 { 0.5 * h * r } else { h * r }).collect();
        Ok(RhoGrid { nodes, weights })
    }

    pub fn standard() -> Self {
        Self::log(RHO_NODES, RHO_RANGE[0], RHO_RANGE[1]).expect("valid defaults")
    }
}

/// W_φf on the full (y,s) grid at each scale node, held as central
/// transforms on the slices where f has energy.
#[derive(Clone, Debug)]
pub struct WaveletCoefficients {
    grid: GridSpec,
    pub l_max: usize,
    pub rho: RhoGrid,
    pub slices: Vec<usize>,
    /// data[k][j] = ℱ₂W(·, ρ_k) on slice `slices[j]`
    data: Vec<Vec<Vec<Complex64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRecord {
    pub y: [f64; 4],
    pub s: [f64; 3],
    pub rho: f64,
    pub re: f64,
    pub im: f64,
}

impl WaveletCoefficients {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// All-zero coefficients on `slices`.
    pub fn zeros(grid: GridSpec, l_max: usize, rho: RhoGrid, slices: Vec<usize>) -> Self {
        let data = vec![vec![vec![Complex64::new(0.0, 0.0); grid.slice_len()]; slices.len()]; rho.nodes.len()];
        WaveletCoefficients { grid, l_max, rho, slices, data }
    }

    /// W(·,·,ρ_k) on the spatial grid.
    pub fn field(&self, k: usize) -> Result<Field> {
        let mut m = Field::zeros(self.grid, Domain::Mixed);
        for (j, &ti) in self.slices.iter().enumerate() {
            m.set_slice(ti, &self.data[k][j])?;
        }
        fourier_central(&m, Direction::Inverse)
    }

    /// Σ_k w_k ρ_k⁻⁶ ‖W(·,·,ρ_k)‖².
    pub fn energy(&self) -> f64 {
        let vol = self.grid.period_volume();
        self.data
            .iter()
            .zip(self.rho.nodes.iter().zip(&self.rho.weights))
            .map(|(slices, (r, w))| {
                let e: f64 = slices.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.x_cell() / vol;
                w * r.powi(-6) * e
            })
            .sum()
    }

    /// Coefficient records at grid nodes `flats` for every scale.
    pub fn records(&self, flats: &[usize]) -> Result<Vec<CoefficientRecord>> {
        let mut out = Vec::with_capacity(flats.len() * self.rho.nodes.len());
        for k in 0..self.rho.nodes.len() {
            let f = self.field(k)?;
            let v = f.values()?;
            for &i in flats {
                let p = self.grid.point(i);
                out.push(CoefficientRecord {
                    y: p.x.to_array(),
                    s: [p.t.t1, p.t.t2, p.t.t3],
                    rho: self.rho.nodes[k],
                    re: v[i].re,
                    im: v[i].im,
                });
            }
        }
        Ok(out)
    }
}

/// Right multiplication by diag(c_l) over the degree blocks.
fn scale_degrees(m: &Matrix, l_max: usize, c: impl Fn(usize) -> Complex64) -> Matrix {
    let mut out = m.clone();
    for (j, l) in fock::degrees(l_max).into_iter().enumerate() {
        let s = c(l);
        for z in out.column_mut(j).iter_mut() {
            *z *= s;
        }
    }
    out
}

/// Nonzero-frequency active slices of ℱ₂f with their gft matrices.
fn slice_spectra(f: &Field, l_max: usize) -> Result<(Field, Vec<(usize, Matrix)>)> {
    let g = *f.grid();
    let mixed = if f.domain() == Domain::Mixed { f.clone() } else { fourier_central(f, Direction::Forward)? };
    let mut out = Vec::new();
    for ti in active_slices(&mixed)? {
        let a = g.a_point(ti);
        if a.norm() == 0.0 {
            continue;
        }
        let m = gft::gft_slices(&g, &[&mixed.slice(ti)?], &a, l_max)?.remove(0);
        out.push((ti, m));
    }
    Ok((mixed, out))
}

/// W_φf at every scale node.
pub fn coefficients(f: &Field, phi: &Wavelet, rho: &RhoGrid) -> Result<WaveletCoefficients> {
    let g = *f.grid();
    let (_, spectra) = slice_spectra(f, phi.l_max)?;
    let slices: Vec<usize> = spectra.iter().map(|(ti, _)| *ti).collect();
    let mut out = WaveletCoefficients::zeros(g, phi.l_max, rho.clone(), slices);
    for (j, (ti, m)) in spectra.iter().enumerate() {
        let a = g.a_point(*ti);
        let r = a.norm();
        let mats: Vec<Matrix> = rho
            .nodes
            .iter()
            .map(|&s| scale_degrees(m, phi.l_max, |l| Complex64::new(s.powf(2.5) * phi.coeff(s * r, l), 0.0)))
            .collect();
        for (k, v) in gft::synth_slices(&g, &mats, &a, phi.l_max)?.into_iter().enumerate() {
            out.data[k][j] = v;
        }
    }
    Ok(out)
}

fn reconstruct_with(coeffs: &WaveletCoefficients, phi: &Wavelet, kappa: f64, power: i32) -> Result<Field> {
    if !(kappa > 0.0) {
        return Err(Error::BadParams("kappa must be positive".into()));
    }
    let g = coeffs.grid;
    let norm = kappa * phi.c_eta();
    let mut mixed = Field::zeros(g, Domain::Mixed);
    for (j, &ti) in coeffs.slices.iter().enumerate() {
        let a = g.a_point(ti);
        let r = a.norm();
        let views: Vec<&[Complex64]> = coeffs.data.iter().map(|d| d[j].as_slice()).collect();
        if views.iter().all(|v| v.iter().all(|z| z.norm_sqr() == 0.0)) {
            continue;
        }
        let mats = gft::gft_slices(&g, &views, &a, phi.l_max)?;
        let d = fock::dim(phi.l_max);
        let mut acc = Matrix::zeros(d, d);
        for (k, m) in mats.iter().enumerate() {
            let s = coeffs.rho.nodes[k];
            let w = coeffs.rho.weights[k] * s.powi(-power) * s.powf(2.5) / norm;
            acc += scale_degrees(m, phi.l_max, |l| Complex64::new(w * phi.coeff(s * r, l), 0.0));
        }
        let v = gft::synth_slices(&g, &[acc], &a, phi.l_max)?.remove(0);
        mixed.set_slice(ti, &v)?;
    }
    fourier_central(&mixed, Direction::Inverse)
}

/// f = (κC_η)⁻¹ ∫ W_φf(y,s,ρ) U(y,s,ρ)φ dy ds dρ/ρ⁶, with the measured
/// constant κ.
pub fn reconstruct(coeffs: &WaveletCoefficients, phi: &Wavelet, kappa: f64) -> Result<Field> {
    reconstruct_with(coeffs, phi, kappa, 6)
}

/// κ̂ = ∫|W_φf|² dx dt dρ/ρ⁶ / (C_η‖f‖²) from per-degree slice energies.
pub fn calibrate_kappa(phi: &Wavelet, f: &Field, rho: &RhoGrid) -> Result<f64> {
    let g = *f.grid();
    let (_, spectra) = slice_spectra(f, phi.l_max)?;
    let vol = g.period_volume();
    let mut num = 0.0;
    for (ti, m) in &spectra {
        let r = g.a_point(*ti).norm();
        let dens = gft::plancherel_density(r);
        for (j, l) in fock::degrees(phi.l_max).into_iter().enumerate() {
            let e = dens * m.column(j).norm_squared() / vol;
            let weight: f64 =
                rho.nodes.iter().zip(&rho.weights).map(|(s, w)| w / s * phi.coeff(s * r, l).powi(2)).sum();
            num += e * weight;
        }
    }
    let fn2 = f.l2norm()?.powi(2);
    Ok(num / (phi.c_eta() * fn2))
}

/// ℛ⁻¹g = (κC_η)⁻¹ ∫ W_{𝓛ℛ𝓛φ}g(y,s,ρ) U(y,s,ρ)φ dy ds dρ/ρ⁸.
pub fn radon_inv_wavelet(g: &Field, phi: &Wavelet, kappa: f64, rho: &RhoGrid) -> Result<Field> {
    let psi = lrl_wavelet(phi)?;
    let c = coefficients(g, &psi, rho)?;
    reconstruct_with(&c, phi, kappa, 8)
}

/// Group element (x, t, ρ, u, v) built from plain parts.
pub fn affine(p: GroupPoint, rho: f64, u: UnitQuaternion, v: UnitQuaternion) -> Result<AffinePoint> {
    Ok(AffinePoint::new(p.x, p.t, rho, u, v)?)
}
