//! The operator-valued group Fourier transform on a truncated Fock basis.
//!
//! For a frequency a ≠ 0 the spectrum f̂(a) is a D×D matrix with entries
//! `f̂[β,α] = ∫ ℱ₂f(x,a) ⟨π_a(x,0)E_α, E_β⟩ dx`, D = (L+1)(L+2)/2.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use qheis_core::fock::{self, AdaptedFrame};
use qheis_core::math::laguerre;
use qheis_core::quad::gauss_legendre;
use qheis_core::sublap::sublaplacian;
use qheis_core::{Complex64, Form, GroupPoint, ImQuaternion, Quaternion, UnitQuaternion};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Domain, Field};
use crate::grid::GridSpec;

pub type Matrix = DMatrix<Complex64>;

/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 8;

/// Points per parallel chunk in slice quadratures; fixed so that partial
/// sums are combined in the same order on every run.
const CHUNK: usize = 512;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Looks up the lattice slice holding frequency `a`.
pub fn lattice_slice(g: &GridSpec, a: &ImQuaternion) -> Result<usize> {
    let tol = 1e-9 * g.da();
    (0..g.n_slices())
        .find(|&ti| (g.a_point(ti) - *a).norm() < tol)
        .ok_or_else(|| Error::BadParams(format!("frequency {a:?} is not a lattice node")))
}

/// ℱ₂f(·, a) on the x-grid.
///
/// A closed-form central transform is used when the field carries one;
/// otherwise the t-integral is a Riemann sum over the t-grid (sampled values
/// or form evaluations). Mixed-domain fields need `a` on the lattice.
pub fn central_slice(f: &Field, a: &ImQuaternion) -> Result<Vec<Complex64>> {
    let g = *f.grid();
    match f.domain() {
        Domain::Mixed => f.slice(lattice_slice(&g, a)?),
        Domain::Frequency => Err(Error::WrongDomain { expected: "spatial", found: "frequency" }),
        Domain::Spatial => {
            if let Some(form) = f.form() {
                if form.central(&Quaternion::ZERO, a).is_some() {
                    return Ok((0..g.slice_len())
                        .into_par_iter()
                        .map(|xi| form.central(&g.x_point(xi), a).unwrap_or_default())
                        .collect());
                }
            }
            let phases: Vec<Complex64> =
                (0..g.n_slices()).map(|ti| Complex64::from_polar(g.t_cell(), a.dot(g.t_point(ti)))).collect();
            let ns = g.n_slices();
            if f.has_values() {
                let v = f.values()?;
                Ok((0..g.slice_len())
                    .into_par_iter()
                    .map(|xi| v[xi * ns..(xi + 1) * ns].iter().zip(&phases).map(|(z, p)| z * p).sum())
                    .collect())
            } else {
                let form = f.form().ok_or(Error::MissingValues)?;
                Ok((0..g.slice_len())
                    .into_par_iter()
                    .map(|xi| {
                        let x = g.x_point(xi);
                        (0..ns).map(|ti| form.eval(&GroupPoint::new(x, g.t_point(ti))) * phases[ti]).sum()
                    })
                    .collect())
            }
        }
    }
}

/// f̂(a) from ℱ₂f(·, a) sampled on the x-grid of `g`.
pub fn gft_slice(g: &GridSpec, slice: &[Complex64], a: &ImQuaternion, l_max: usize) -> Result<Matrix> {
    if slice.len() != g.slice_len() {
        return Err(Error::GridMismatch);
    }
    let frame = AdaptedFrame::new(*a)?;
    let d = fock::dim(l_max);
    let partials: Vec<Vec<Complex64>> = slice
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            let mut acc = vec![zero(); d * d];
            for (k, z) in chunk.iter().enumerate() {
                if z.norm_sqr() == 0.0 {
                    continue;
                }
                let m = fock::pi_matrix(&frame, &g.x_point(c * CHUNK + k), &ImQuaternion::ZERO, l_max);
                for (s, mv) in acc.iter_mut().zip(&m) {
                    *s += z * mv;
                }
            }
            acc
        })
        .collect();
    let mut total = vec![zero(); d * d];
    for p in &partials {
        for (s, v) in total.iter_mut().zip(p) {
            *s += v;
        }
    }
    let w = g.x_cell();
    Ok(Matrix::from_row_iterator(d, d, total.into_iter().map(|z| z * w)))
}

/// Tensor trapezoid rule in the coordinates of the a-adapted frame, used
/// when ℱ₂f(·,a) is available in closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameQuad {
    pub half: f64,
    pub n: usize,
}

/// Largest node count per axis of a [`FrameQuad`].
const FRAME_QUAD_MAX_N: usize = 64;

impl FrameQuad {
    /// Spacing resolves both the test functions (scale ~1) and the matrix
    /// coefficients, which vary on the scale 1/√(2|a|).
    pub fn for_freq(r: f64) -> Self {
        let half = 5.0f64.max(2.5 / (2.0 * r).sqrt()).min(12.0);
        let h = 0.36f64.min(0.5 / (2.0 * r).sqrt());
        let n = (2 * (half / h).ceil() as usize).min(FRAME_QUAD_MAX_N);
        FrameQuad { half, n }
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half / self.n as f64
    }

    fn node(&self, k: usize) -> f64 {
        (k as f64 - 0.5 * (self.n as f64 - 1.0)) * self.step()
    }
}

/// f̂(a) and ∫|F|² for a slice F given pointwise, by [`FrameQuad`].
///
/// With x = c₀e₀ + c₁e₁ + c₂e₂ + c₃e₃ in the adapted frame, the coefficient
/// factors as T(c₀+ic₁)·T(c₂+ic₃), so the sum runs as two nested contractions.
pub fn gft_pointwise(
    slice: impl Fn(&Quaternion) -> Complex64 + Sync,
    a: &ImQuaternion,
    l_max: usize,
    quad: FrameQuad,
) -> Result<(Matrix, f64)> {
    let frame = AdaptedFrame::new(*a)?;
    let lam = frame.lambda();
    let n = quad.n;
    let n1 = l_max + 1;
    let tsz = n1 * n1;
    let nodes: Vec<f64> = (0..n).map(|k| quad.node(k)).collect();
    let tables: Vec<Vec<Complex64>> = (0..n * n)
        .into_par_iter()
        .map(|k| fock::displacement_table(l_max, lam, Complex64::new(nodes[k / n], nodes[k % n])))
        .collect();
    // inner[(i0,i1)][α₂β₂] = Σ_{i2,i3} F · T(w₂)
    let inner: Vec<(Vec<Complex64>, f64)> = (0..n * n)
        .into_par_iter()
        .map(|k1| {
            let w1 = Complex64::new(nodes[k1 / n], nodes[k1 % n]);
            let mut acc = vec![zero(); tsz];
            let mut mass = 0.0;
            for (k2, t2) in tables.iter().enumerate() {
                let w2 = Complex64::new(nodes[k2 / n], nodes[k2 % n]);
                let fx = slice(&frame.from_coords(w1, w2));
                if fx.norm_sqr() == 0.0 {
                    continue;
                }
                mass += fx.norm_sqr();
                for (s, t) in acc.iter_mut().zip(t2) {
                    *s += fx * t;
                }
            }
            (acc, mass)
        })
        .collect();
    let mut outer = vec![zero(); tsz * tsz];
    let mut mass = 0.0;
    for ((g, m), t1) in inner.iter().zip(&tables) {
        mass += m;
        for (i, t) in t1.iter().enumerate() {
            let row = &mut outer[i * tsz..(i + 1) * tsz];
            for (s, gv) in row.iter_mut().zip(g) {
                *s += t * gv;
            }
        }
    }
    let w = quad.step().powi(4);
    let idx = fock::basis(l_max);
    let d = idx.len();
    let mat = Matrix::from_fn(d, d, |bi, ai| {
        let (al, be) = (idx[ai], idx[bi]);
        outer[(al.a1 * n1 + be.a1) * tsz + al.a2 * n1 + be.a2] * w
    });
    Ok((mat, mass * w))
}

fn closed_central(f: &Field, a: &ImQuaternion) -> Option<crate::field::SharedForm> {
    if f.domain() != Domain::Spatial {
        return None;
    }
    let form = f.form()?;
    form.central(&Quaternion::ZERO, a).map(|_| form.clone())
}

/// f̂(a) for a field: closed-form central transforms go through
/// [`gft_pointwise`], everything else through the field's own x-grid.
pub fn gft_matrix(f: &Field, a: &ImQuaternion, l_max: usize) -> Result<Matrix> {
    if let Some(form) = closed_central(f, a) {
        let q = FrameQuad::for_freq(a.norm());
        return Ok(gft_pointwise(|x| form.central(x, a).unwrap_or_default(), a, l_max, q)?.0);
    }
    let slice = central_slice(f, a)?;
    gft_slice(f.grid(), &slice, a, l_max)
}

/// Inverse per-slice synthesis: F^a(x) = (2|a|/π)² tr(π_a(x,0)^* f̂(a)).
pub fn synth_slice(g: &GridSpec, mat: &Matrix, a: &ImQuaternion, l_max: usize) -> Result<Vec<Complex64>> {
    let frame = AdaptedFrame::new(*a)?;
    let d = fock::dim(l_max);
    if mat.nrows() != d || mat.ncols() != d {
        return Err(Error::BadParams(format!("expected a {d}×{d} matrix")));
    }
    let dens = plancherel_density(a.norm());
    Ok((0..g.slice_len())
        .into_par_iter()
        .map(|xi| {
            let m = fock::pi_matrix(&frame, &g.x_point(xi), &ImQuaternion::ZERO, l_max);
            let mut s = zero();
            for b in 0..d {
                for al in 0..d {
                    s += mat[(b, al)] * m[b * d + al].conj();
                }
            }
            s * dens
        })
        .collect())
}

/// [`gft_slice`] for several slices at the same frequency, sharing the
/// evaluation of π_a(x,0) across them.
pub fn gft_slices(g: &GridSpec, slices: &[&[Complex64]], a: &ImQuaternion, l_max: usize) -> Result<Vec<Matrix>> {
    if slices.iter().any(|s| s.len() != g.slice_len()) {
        return Err(Error::GridMismatch);
    }
    let frame = AdaptedFrame::new(*a)?;
    let d = fock::dim(l_max);
    let k = slices.len();
    let n_chunks = g.slice_len().div_ceil(CHUNK);
    let partials: Vec<Vec<Complex64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![zero(); k * d * d];
            for xi in c * CHUNK..((c + 1) * CHUNK).min(g.slice_len()) {
                if slices.iter().all(|s| s[xi].norm_sqr() == 0.0) {
                    continue;
                }
                let m = fock::pi_matrix(&frame, &g.x_point(xi), &ImQuaternion::ZERO, l_max);
                for (j, s) in slices.iter().enumerate() {
                    let z = s[xi];
                    if z.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (t, mv) in acc[j * d * d..(j + 1) * d * d].iter_mut().zip(&m) {
                        *t += z * mv;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![zero(); k * d * d];
    for p in &partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let w = g.x_cell();
    Ok(total.chunks(d * d).map(|c| Matrix::from_row_iterator(d, d, c.iter().map(|z| z * w))).collect())
}

/// [`synth_slice`] for several matrices at the same frequency.
pub fn synth_slices(g: &GridSpec, mats: &[Matrix], a: &ImQuaternion, l_max: usize) -> Result<Vec<Vec<Complex64>>> {
    let frame = AdaptedFrame::new(*a)?;
    let d = fock::dim(l_max);
    if mats.iter().any(|m| m.nrows() != d || m.ncols() != d) {
        return Err(Error::BadParams(format!("expected {d}×{d} matrices")));
    }
    let dens = plancherel_density(a.norm());
    // row-major copies so the inner loop runs over contiguous memory
    let rows: Vec<Vec<Complex64>> = mats.iter().map(|m| m.transpose().iter().copied().collect()).collect();
    let per_x: Vec<Vec<Complex64>> = (0..g.slice_len())
        .into_par_iter()
        .map(|xi| {
            let m = fock::pi_matrix(&frame, &g.x_point(xi), &ImQuaternion::ZERO, l_max);
            rows.iter().map(|r| r.iter().zip(&m).map(|(c, v)| c * v.conj()).sum::<Complex64>() * dens).collect()
        })
        .collect();
    Ok((0..mats.len()).map(|j| per_x.iter().map(|v| v[j]).collect()).collect())
}

/// (2|a|/π)²: the factor relating ‖f̂(a)‖²_HS to ‖ℱ₂f(·,a)‖².
pub fn plancherel_density(r: f64) -> f64 {
    (2.0 * r / PI).powi(2)
}

/// The truncated matrix of π_a(x,t) as an operator.
pub fn pi_operator(a: &ImQuaternion, x: &Quaternion, t: &ImQuaternion, l_max: usize) -> Result<Matrix> {
    let frame = AdaptedFrame::new(*a)?;
    let d = fock::dim(l_max);
    Ok(Matrix::from_row_slice(d, d, &fock::pi_matrix(&frame, x, t, l_max)))
}

/// Matrix of γ_{u,v}: 𝓗_a → 𝓗_b with b = v̄av. Returns `(b, Γ)`.
pub fn intertwiner(
    u: UnitQuaternion,
    v: UnitQuaternion,
    a: &ImQuaternion,
    l_max: usize,
) -> Result<(ImQuaternion, Matrix)> {
    let (b, m) = fock::intertwiner_gamma(u, v, a, l_max)?;
    let d = fock::dim(l_max);
    Ok((b, Matrix::from_row_slice(d, d, &m)))
}

/// Spectra of one function at a list of frequencies.
#[derive(Clone, Debug)]
pub struct GroupSpectrum {
    pub l_max: usize,
    pub nodes: Vec<ImQuaternion>,
    pub mats: Vec<Matrix>,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    l_max: usize,
    dim: usize,
    nodes: Vec<[f64; 3]>,
    matrices: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
}

impl GroupSpectrum {
    pub fn new(l_max: usize, nodes: Vec<ImQuaternion>, mats: Vec<Matrix>) -> Result<Self> {
        let d = fock::dim(l_max);
        if nodes.len() != mats.len() {
            return Err(Error::BadParams("one matrix per node".into()));
        }
        for (a, m) in nodes.iter().zip(&mats) {
            if a.norm() == 0.0 {
                return Err(qheis_core::CoreError::ZeroFrequency.into());
            }
            if m.nrows() != d || m.ncols() != d || m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::BadParams("spectrum matrices must be finite and D×D".into()));
            }
        }
        Ok(GroupSpectrum { l_max, nodes, mats })
    }

    pub fn dim(&self) -> usize {
        fock::dim(self.l_max)
    }

    pub fn hs_norms(&self) -> Vec<f64> {
        self.mats.iter().map(|m| m.norm()).collect()
    }

    fn map(&self, f: impl Fn(&Matrix) -> Matrix) -> GroupSpectrum {
        GroupSpectrum { l_max: self.l_max, nodes: self.nodes.clone(), mats: self.mats.iter().map(f).collect() }
    }

    /// Right multiplication by S = Σ (−1)^l P_l.
    pub fn apply_s(&self) -> GroupSpectrum {
        let signs = degree_diag(self.l_max, |l| if l % 2 == 0 { 1.0 } else { -1.0 });
        self.map(|m| scale_columns(m, &signs))
    }

    /// Right multiplication by P_l.
    pub fn project_pl(&self, l: usize) -> GroupSpectrum {
        let mask = degree_diag(self.l_max, |k| if k == l { 1.0 } else { 0.0 });
        self.map(|m| scale_columns(m, &mask))
    }

    /// B(a,l) = tr(block_l)/(l+1) per node, or `NotRadial` when some matrix
    /// differs from Σ B(a,l) P_l by more than `tol` relative HS.
    pub fn radial_coeff(&self, l: usize, tol: f64) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        for m in &self.mats {
            let (b, residual) = radial_decomposition(m, self.l_max);
            if residual > tol {
                return Err(Error::NotRadial { residual, tol });
            }
            out.push(b[l]);
        }
        Ok(out)
    }

    pub fn to_json(&self, label: Option<&str>) -> Result<String> {
        let j = SpectrumJson {
            l_max: self.l_max,
            dim: self.dim(),
            nodes: self.nodes.iter().map(|a| [a.t1, a.t2, a.t3]).collect(),
            matrices: self
                .mats
                .iter()
                .map(|m| {
                    let d = m.nrows();
                    (0..d * d).map(|k| m[(k / d, k % d)]).map(|z| [z.re, z.im]).collect()
                })
                .collect(),
            label,
        };
        Ok(serde_json::to_string(&j)?)
    }
}

fn degree_diag(l_max: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
    fock::degrees(l_max).into_iter().map(f).collect()
}

fn scale_columns(m: &Matrix, s: &[f64]) -> Matrix {
    let mut out = m.clone();
    for (j, &c) in s.iter().enumerate() {
        out.column_mut(j).scale_mut(c);
    }
    out
}

/// Per-degree block traces divided by l+1, and the relative HS residual of
/// the matrix against Σ B_l P_l.
pub fn radial_decomposition(m: &Matrix, l_max: usize) -> (Vec<Complex64>, f64) {
    let mut b = vec![zero(); l_max + 1];
    for (l, bl) in b.iter_mut().enumerate() {
        let tr: Complex64 = fock::block(l).map(|k| m[(k, k)]).sum();
        *bl = tr / (l + 1) as f64;
    }
    let degs = fock::degrees(l_max);
    let mut res = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let want = if i == j { b[degs[i]] } else { zero() };
            res += (m[(i, j)] - want).norm_sqr();
        }
    }
    let n = m.norm();
    (b, if n > 0.0 { res.sqrt() / n } else { 0.0 })
}

/// Spectra at each node.
pub fn gft(f: &Field, nodes: &[ImQuaternion], l_max: usize) -> Result<GroupSpectrum> {
    let mats: Result<Vec<Matrix>> = nodes.iter().map(|a| gft_matrix(f, a, l_max)).collect();
    GroupSpectrum::new(l_max, nodes.to_vec(), mats?)
}

/// Returns ((2|a|/π)²‖f̂(a)‖²_HS, ∫|ℱ₂f(x,a)|² dx), both from the same
/// quadrature.
pub fn hs_cross_check(f: &Field, a: &ImQuaternion, l_max: usize) -> Result<(f64, f64)> {
    let dens = plancherel_density(a.norm());
    if let Some(form) = closed_central(f, a) {
        let q = FrameQuad::for_freq(a.norm());
        let (m, mass) = gft_pointwise(|x| form.central(x, a).unwrap_or_default(), a, l_max, q)?;
        return Ok((dens * m.norm_squared(), mass));
    }
    let slice = central_slice(f, a)?;
    let m = gft_slice(f.grid(), &slice, a, l_max)?;
    let rhs = f.grid().x_cell() * slice.iter().map(|z| z.norm_sqr()).sum::<f64>();
    Ok((dens * m.norm_squared(), rhs))
}

/// χ_l(r, |x|) = tr(π_a(x,0)P_l) for |a| = r, in Laguerre form.
pub fn radial_character(r: f64, x_norm: f64, l: usize) -> f64 {
    let s = 2.0 * r * x_norm * x_norm;
    (-0.5 * s).exp() * laguerre(l, 1.0, s)
}

/// Result of the subLaplacian eigen-relation check at one frequency.
#[derive(Clone, Debug)]
pub struct EigenCheck {
    pub degree: usize,
    pub expected: f64,
    /// ⟨gft(Δf), gft(f)⟩_HS / ‖gft(f)‖²_HS
    pub measured: Complex64,
    /// ‖gft(Δf) − expected·gft(f)‖ / ‖expected·gft(f)‖
    pub rel_error: f64,
}

/// Checks gft(Δf)(a₀) = −8(l+1)|a₀| gft(f)(a₀) for f = e^{−i⟨a₀,t⟩}χ_l(|a₀|,|x|),
/// whose spectrum at a₀ lives in degree l.
pub fn sublaplacian_eigen_check(a0: ImQuaternion, l: usize, l_max: usize) -> Result<EigenCheck> {
    let r = a0.norm();
    let f = qheis_core::form::FnForm(move |p: &GroupPoint| {
        Complex64::from_polar(radial_character(r, p.x.norm(), l), -a0.dot(p.t))
    });
    let lap = sublaplacian(&f);
    let q = FrameQuad::for_freq(r);
    let at0 = |form: &dyn Form| gft_pointwise(|x| form.eval(&GroupPoint::new(*x, ImQuaternion::ZERO)), &a0, l_max, q);
    let base = at0(&f)?.0;
    let applied = at0(&lap)?.0;
    let expected = -8.0 * (l as f64 + 1.0) * r;
    let num: Complex64 = applied.iter().zip(base.iter()).map(|(p, q)| p * q.conj()).sum();
    let measured = num / base.norm_squared();
    let rel_error = (&applied - &base * Complex64::new(expected, 0.0)).norm() / (expected.abs() * base.norm());
    Ok(EigenCheck { degree: l, expected, measured, rel_error })
}

/// Radial spectral profile B(r, l).
pub type RadialCoeffs = Arc<dyn Fn(f64, usize) -> Complex64 + Send + Sync>;

/// A radial spectrum B(r,l) synthesised back to a function on the group:
/// `f(x,t) = (2/π⁴) ∫ sinc(r|t|) Σ_l B(r,l) χ_l(r,|x|) r⁴ dr`, by
/// Gauss–Legendre quadrature on [0, r_max]. The central transform is exact:
/// ℱ₂f(x,a) = (2|a|/π)² Σ_l B(|a|,l) χ_l(|a|,|x|).
pub struct RadialSynthesis {
    coeffs: RadialCoeffs,
    l_max: usize,
    r: Vec<f64>,
    /// quadrature weight · r⁴ · 2/π⁴
    w: Vec<f64>,
    /// B(r_k, l) at [k·(L+1) + l]
    b: Vec<Complex64>,
}

impl RadialSynthesis {
    /// Tabulates `coeffs` at `n` Gauss–Legendre nodes on [0, r_max]. Fails
    /// with `TruncationBudgetExceeded` when r⁴Σ_l(l+1)|B(r,l)| at the last
    /// node exceeds `tail_tol` times its peak.
    pub fn new(coeffs: RadialCoeffs, l_max: usize, r_max: f64, n: usize, tail_tol: f64) -> Result<Self> {
        if !(r_max > 0.0) || n == 0 {
            return Err(Error::BadParams("radial synthesis needs r_max > 0 and nodes".into()));
        }
        let (x, wq) = gauss_legendre(n);
        let r: Vec<f64> = x.iter().map(|x| 0.5 * r_max * (x + 1.0)).collect();
        let w: Vec<f64> = wq.iter().zip(&r).map(|(w, r)| 0.5 * r_max * w * r.powi(4) * 2.0 / PI.powi(4)).collect();
        let b: Vec<Complex64> =
            r.par_iter().flat_map_iter(|&rk| (0..=l_max).map(move |l| (rk, l))).map(|(rk, l)| coeffs(rk, l)).collect();
        let weight = |k: usize| -> f64 {
            let row = &b[k * (l_max + 1)..(k + 1) * (l_max + 1)];
            r[k].powi(4) * row.iter().enumerate().map(|(l, z)| (l + 1) as f64 * z.norm()).sum::<f64>()
        };
        let tail = weight(n - 1);
        let peak = (0..n).map(weight).fold(0.0, f64::max);
        if peak > 0.0 && tail > tail_tol * peak {
            return Err(Error::TruncationBudgetExceeded { tail: tail / peak, tol: tail_tol });
        }
        Ok(RadialSynthesis { coeffs, l_max, r, w, b })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }
}

impl Form for RadialSynthesis {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        let xn = p.x.norm();
        let tn = p.t.norm();
        let mut acc = zero();
        for (k, (&r, &w)) in self.r.iter().zip(&self.w).enumerate() {
            let mut s = zero();
            for l in 0..=self.l_max {
                s += self.b[k * (self.l_max + 1) + l] * radial_character(r, xn, l);
            }
            acc += s * (w * qheis_core::math::sinc(r * tn));
        }
        acc
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        let r = a.norm();
        let b: Vec<Complex64> = (0..=self.l_max).map(|l| (self.coeffs)(r, l)).collect();
        Some(radial_mixed(&b, r, x.norm()))
    }
}

/// Closed form of ℱ₂ for a radial spectrum: (2|a|/π)² Σ_l B(|a|,l) χ_l(|a|,|x|).
pub fn radial_mixed(b: &[Complex64], r: f64, x_norm: f64) -> Complex64 {
    let dens = plancherel_density(r);
    b.iter().enumerate().map(|(l, z)| z * radial_character(r, x_norm, l)).sum::<Complex64>() * dens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_and_projections() {
        let d = fock::dim(3);
        let m = Matrix::from_fn(d, d, |i, j| Complex64::new(i as f64 + 0.5, j as f64 - 1.0));
        let s = GroupSpectrum::new(3, vec![ImQuaternion::new(0.0, 0.0, 1.0)], vec![m.clone()]).unwrap();
        assert!((&s.apply_s().apply_s().mats[0] - &m).norm() < 1e-15);
        let total = (0..=3).fold(Matrix::zeros(d, d), |acc, l| acc + &s.project_pl(l).mats[0]);
        assert!((total - &m).norm() < 1e-15);
        let pp = s.project_pl(1).project_pl(2);
        assert_eq!(pp.mats[0].norm(), 0.0);
    }

    #[test]
    fn radial_coefficients_of_identity_and_s() {
        let l_max = 4;
        let d = fock::dim(l_max);
        let id =
            GroupSpectrum::new(l_max, vec![ImQuaternion::new(1.0, 0.0, 0.0)], vec![Matrix::identity(d, d)]).unwrap();
        for l in 0..=l_max {
            assert_eq!(id.radial_coeff(l, 1e-12).unwrap()[0], Complex64::new(1.0, 0.0));
            let s = id.apply_s().radial_coeff(l, 1e-12).unwrap()[0];
            assert_eq!(s.re, if l % 2 == 0 { 1.0 } else { -1.0 });
        }
        let mut m = Matrix::identity(d, d);
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        let bad = GroupSpectrum::new(l_max, vec![ImQuaternion::new(1.0, 0.0, 0.0)], vec![m]).unwrap();
        assert!(matches!(bad.radial_coeff(0, 1e-6), Err(Error::NotRadial { .. })));
    }

    #[test]
    fn rejects_zero_frequency() {
        let d = fock::dim(1);
        assert!(GroupSpectrum::new(1, vec![ImQuaternion::ZERO], vec![Matrix::identity(d, d)]).is_err());
    }

    #[test]
    fn json_layout() {
        let d = fock::dim(1);
        let s = GroupSpectrum::new(1, vec![ImQuaternion::new(0.0, 1.0, 0.0)], vec![Matrix::identity(d, d)]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json(None).unwrap()).unwrap();
        assert_eq!(v["dim"], 3);
        assert_eq!(v["matrices"][0].as_array().unwrap().len(), 9);
        assert_eq!(v["matrices"][0][4][0], 1.0);
    }
}
