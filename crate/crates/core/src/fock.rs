//! The Fock model of the Schrödinger-type representations π_a: adapted frames,
//! the truncated monomial basis, closed-form matrix coefficients and the
//! Sp(1)×Sp(1) intertwiners.

use core::ops::Range;

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::math::{abs, binomial, exp, factorial, sqrt, PI};
use crate::quad::gauss_hermite;
use crate::quat::{ImQuaternion, Quaternion, UnitQuaternion};

/// Multi-index α = (α₁, α₂) of the monomial z₁^{α₁} z₂^{α₂}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockIndex {
    pub a1: usize,
    pub a2: usize,
}

impl FockIndex {
    pub const fn new(a1: usize, a2: usize) -> Self {
        FockIndex { a1, a2 }
    }

    pub fn degree(self) -> usize {
        self.a1 + self.a2
    }

    /// Position in the degree-major, α₁-descending enumeration.
    pub fn position(self) -> usize {
        let l = self.degree();
        l * (l + 1) / 2 + self.a2
    }
}

/// Number of basis functions of degree ≤ `l_max`.
pub fn dim(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 2) / 2
}

/// Index range of the degree-`l` block.
pub fn block(l: usize) -> Range<usize> {
    l * (l + 1) / 2..(l + 1) * (l + 2) / 2
}

pub fn basis(l_max: usize) -> Vec<FockIndex> {
    (0..=l_max).flat_map(|l| (0..=l).map(move |a2| FockIndex::new(l - a2, a2))).collect()
}

/// Degree of every basis position, in enumeration order.
pub fn degrees(l_max: usize) -> Vec<usize> {
    basis(l_max).into_iter().map(FockIndex::degree).collect()
}

/// Orthonormal frame {1, ã, e₂, e₂ã} of ℚ adapted to a ∈ Im ℚ ∖ {0}.
///
/// Right multiplication by ã acts as multiplication by i on the complex
/// coordinates (w₁, w₂) = (⟨x,1⟩ + i⟨x,ã⟩, ⟨x,e₂⟩ + i⟨x,e₂ã⟩).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptedFrame {
    a: ImQuaternion,
    norm: f64,
    e: [Quaternion; 4],
}

impl AdaptedFrame {
    pub fn new(a: ImQuaternion) -> Result<Self> {
        let norm = a.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(CoreError::ZeroFrequency);
        }
        let at = a * (1.0 / norm);
        // the coordinate axis least aligned with ã gives a well-conditioned e₂
        let c = [abs(at.t1), abs(at.t2), abs(at.t3)];
        let k = (0..3).fold(0, |m, i| if c[i] < c[m] { i } else { m });
        let mut axis = [0.0; 3];
        axis[k] = 1.0;
        let pick = ImQuaternion::from_array(axis);
        let e2 = pick - at * pick.dot(at);
        let e2 = e2 * (1.0 / e2.norm());
        let e3 = (e2.to_quat() * at.to_quat()).im();
        Ok(AdaptedFrame { a, norm, e: [Quaternion::ONE, at.to_quat(), e2.to_quat(), e3.to_quat()] })
    }

    pub fn freq(&self) -> ImQuaternion {
        self.a
    }

    pub fn freq_norm(&self) -> f64 {
        self.norm
    }

    /// λ = 2|a|, the Gaussian parameter of the Fock weight e^{-λ|q|²}.
    pub fn lambda(&self) -> f64 {
        2.0 * self.norm
    }

    pub fn axes(&self) -> [Quaternion; 4] {
        self.e
    }

    pub fn coords(&self, x: &Quaternion) -> (Complex64, Complex64) {
        let c = |k: usize| x.dot(self.e[k]);
        (Complex64::new(c(0), c(1)), Complex64::new(c(2), c(3)))
    }

    pub fn from_coords(&self, w1: Complex64, w2: Complex64) -> Quaternion {
        self.e[0] * w1.re + self.e[1] * w1.im + self.e[2] * w2.re + self.e[3] * w2.im
    }
}

/// Table of one-variable displacement coefficients
/// m(n, m) = ⟨e^{-λ|w|²/2 - λzw̄} φ_n(z + w), φ_m⟩ for n, m ≤ `l_max`, where
/// φ_n = (λⁿ/n!)^{1/2} zⁿ. Stored row-major as `[n * (l_max + 1) + m]`.
pub fn displacement_table(l_max: usize, lambda: f64, w: Complex64) -> Vec<Complex64> {
    let n1 = l_max + 1;
    let big_w = w * sqrt(lambda);
    let neg_bar = -big_w.conj();
    let mut pw = alloc::vec![Complex64::new(1.0, 0.0); n1];
    let mut pb = alloc::vec![Complex64::new(1.0, 0.0); n1];
    for k in 1..n1 {
        pw[k] = pw[k - 1] * big_w;
        pb[k] = pb[k - 1] * neg_bar;
    }
    let fact: Vec<f64> = (0..n1).map(factorial).collect();
    let g = exp(-0.5 * big_w.norm_sqr());
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); n1 * n1];
    for n in 0..n1 {
        for m in 0..n1 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..=n.min(m) {
                s += pw[n - k] * pb[m - k] * (binomial(n, k) / fact[m - k]);
            }
            out[n * n1 + m] = s * (g * sqrt(fact[m] / fact[n]));
        }
    }
    out
}

/// ⟨π_a(x,t) E_α, E_β⟩ from precomputed displacement tables.
#[inline]
fn coef_from_tables(t1: &[Complex64], t2: &[Complex64], n1: usize, alpha: FockIndex, beta: FockIndex) -> Complex64 {
    t1[alpha.a1 * n1 + beta.a1] * t2[alpha.a2 * n1 + beta.a2]
}

/// Matrix coefficient ⟨π_a(x,t) E_α, E_β⟩ in the a-adapted basis.
pub fn matcoef(
    a: &ImQuaternion,
    x: &Quaternion,
    t: &ImQuaternion,
    alpha: FockIndex,
    beta: FockIndex,
) -> Result<Complex64> {
    let frame = AdaptedFrame::new(*a)?;
    let l_max = alpha.degree().max(beta.degree());
    let (w1, w2) = frame.coords(x);
    let t1 = displacement_table(l_max, frame.lambda(), w1);
    let t2 = displacement_table(l_max, frame.lambda(), w2);
    let phase = Complex64::from_polar(1.0, a.dot(*t));
    Ok(phase * coef_from_tables(&t1, &t2, l_max + 1, alpha, beta))
}

/// Full truncated matrix of π_a(x,t): entry `[β * D + α]` is
/// ⟨π_a(x,t) E_α, E_β⟩.
pub fn pi_matrix(frame: &AdaptedFrame, x: &Quaternion, t: &ImQuaternion, l_max: usize) -> Vec<Complex64> {
    let (w1, w2) = frame.coords(x);
    let t1 = displacement_table(l_max, frame.lambda(), w1);
    let t2 = displacement_table(l_max, frame.lambda(), w2);
    let phase = Complex64::from_polar(1.0, frame.freq().dot(*t));
    let idx = basis(l_max);
    let d = idx.len();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); d * d];
    for (bi, &beta) in idx.iter().enumerate() {
        for (ai, &alpha) in idx.iter().enumerate() {
            out[bi * d + ai] = phase * coef_from_tables(&t1, &t2, l_max + 1, alpha, beta);
        }
    }
    out
}

/// Trace of π_a(x,t) restricted to the degree-`l` subspace.
pub fn projection_character(a: &ImQuaternion, x: &Quaternion, t: &ImQuaternion, l: usize) -> Result<Complex64> {
    let frame = AdaptedFrame::new(*a)?;
    Ok(projection_character_in(&frame, x, t, l))
}

pub fn projection_character_in(frame: &AdaptedFrame, x: &Quaternion, t: &ImQuaternion, l: usize) -> Complex64 {
    let (w1, w2) = frame.coords(x);
    let t1 = displacement_table(l, frame.lambda(), w1);
    let t2 = displacement_table(l, frame.lambda(), w2);
    let mut s = Complex64::new(0.0, 0.0);
    for a2 in 0..=l {
        let al = FockIndex::new(l - a2, a2);
        s += coef_from_tables(&t1, &t2, l + 1, al, al);
    }
    s * Complex64::from_polar(1.0, frame.freq().dot(*t))
}

/// E_α(q) = π⁻¹ (α₁!α₂!)^{-1/2} λ^{|α|/2+1} z₁^{α₁} z₂^{α₂}, orthonormal for
/// the weight e^{-λ|q|²}.
pub fn basis_eval(frame: &AdaptedFrame, alpha: FockIndex, q: &Quaternion) -> Complex64 {
    let (z1, z2) = frame.coords(q);
    let lam = frame.lambda();
    let c = sqrt(crate::math::powi(lam, alpha.degree() as i32 + 2) / (factorial(alpha.a1) * factorial(alpha.a2))) / PI;
    z1.powu(alpha.a1 as u32) * z2.powu(alpha.a2 as u32) * c
}

/// Gauss–Hermite points per axis used for Fock inner products. Exact for
/// polynomial integrands up to degree 17 per axis, so for L ≤ 8.
pub const FOCK_GH_POINTS: usize = 9;

/// Inner product ⟨F, G⟩ = ∫ F(q) conj G(q) e^{-λ|q|²} dq by tensor
/// Gauss–Hermite quadrature with `n` points per axis.
pub fn fock_inner<F, G>(lambda: f64, n: usize, f: F, g: G) -> Complex64
where
    F: Fn(&Quaternion) -> Complex64,
    G: Fn(&Quaternion) -> Complex64,
{
    let (x, w) = gauss_hermite(n);
    let s = 1.0 / sqrt(lambda);
    let mut acc = Complex64::new(0.0, 0.0);
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    let q = Quaternion::new(x[i0], x[i1], x[i2], x[i3]) * s;
                    let wt = w[i0] * w[i1] * w[i2] * w[i3];
                    acc += f(&q) * g(&q).conj() * wt;
                }
            }
        }
    }
    acc / (lambda * lambda)
}

/// Matrix of γ_{u,v}: F ↦ F(u q v̄), mapping 𝓗_a onto 𝓗_b with b = v̄ a v.
///
/// Entry `[β * D + α]` is ⟨γ E^a_α, E^b_β⟩. Returns `(b, matrix)`.
pub fn intertwiner_gamma(
    u: UnitQuaternion,
    v: UnitQuaternion,
    a: &ImQuaternion,
    l_max: usize,
) -> Result<(ImQuaternion, Vec<Complex64>)> {
    let fa = AdaptedFrame::new(*a)?;
    let b = v.unrotate_im(*a);
    let fb = AdaptedFrame::new(b)?;
    let lam = fa.lambda();
    let idx = basis(l_max);
    let d = idx.len();
    let (x, w) = gauss_hermite(FOCK_GH_POINTS);
    let n = x.len();
    let s = 1.0 / sqrt(lam);
    let (uq, vb) = (u.quat(), v.quat().conj());
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); d * d];
    let mut ea = alloc::vec![Complex64::new(0.0, 0.0); d];
    let mut eb = alloc::vec![Complex64::new(0.0, 0.0); d];
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    let q = Quaternion::new(x[i0], x[i1], x[i2], x[i3]) * s;
                    let wt = w[i0] * w[i1] * w[i2] * w[i3];
                    let moved = uq * q * vb;
                    for (k, &al) in idx.iter().enumerate() {
                        ea[k] = basis_eval(&fa, al, &moved);
                        eb[k] = basis_eval(&fb, al, &q).conj() * wt;
                    }
                    for l in 0..=l_max {
                        for bi in block(l) {
                            for ai in block(l) {
                                out[bi * d + ai] += ea[ai] * eb[bi];
                            }
                        }
                    }
                }
            }
        }
    }
    let norm = 1.0 / (lam * lam);
    for z in out.iter_mut() {
        *z *= norm;
    }
    Ok((b, out))
}
