//! Closed-form evaluators on the group and the representation U acting on them.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::group::{pinv, AffinePoint, GroupPoint};
use crate::math::{powf, sqrt};
use crate::quat::{ImQuaternion, Quaternion, UnitQuaternion};

/// A function on the group given pointwise.
///
/// `central` optionally returns the partial Fourier transform in the central
/// variable, `∫ f(x,t) e^{i⟨a,t⟩} dt`, when a closed form is known. Numeric
/// code prefers it over quadrature in t.
pub trait Form: Send + Sync {
    fn eval(&self, p: &GroupPoint) -> Complex64;

    fn central(&self, _x: &Quaternion, _a: &ImQuaternion) -> Option<Complex64> {
        None
    }
}

impl<F: Form + ?Sized> Form for &F {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        (**self).eval(p)
    }
    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        (**self).central(x, a)
    }
}

impl<F: Form + ?Sized> Form for Box<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        (**self).eval(p)
    }
    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        (**self).central(x, a)
    }
}

impl<F: Form + ?Sized> Form for Arc<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        (**self).eval(p)
    }
    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        (**self).central(x, a)
    }
}

/// A plain closure as a form without a known central transform.
pub struct FnForm<F>(pub F);

impl<F> Form for FnForm<F>
where
    F: Fn(&GroupPoint) -> Complex64 + Send + Sync,
{
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        (self.0)(p)
    }
}

/// U(g)φ (p) = ρ^{-5/2} φ(g⁻¹·p).
pub struct RepU<F> {
    g: AffinePoint,
    ginv: AffinePoint,
    amp: f64,
    inner: F,
}

impl<F: Form> RepU<F> {
    pub fn new(g: AffinePoint, inner: F) -> Self {
        RepU { g, ginv: pinv(&g), amp: powf(g.rho(), -2.5), inner }
    }

    pub fn element(&self) -> &AffinePoint {
        &self.g
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

/// Evaluator of U(g)φ.
pub fn rep_u<F: Form>(g: AffinePoint, phi: F) -> RepU<F> {
    RepU::new(g, phi)
}

impl<F: Form> Form for RepU<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        self.inner.eval(&crate::group::paction(&self.ginv, *p)) * self.amp
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        let g = &self.g;
        let rho = g.rho();
        let y = g.u.quat().conj() * (*x - g.x) * g.v.quat() * (1.0 / sqrt(rho));
        let b = g.v.unrotate_im(*a) * rho;
        let inner = self.inner.central(&y, &b)?;
        let c = g.t - (x.conj() * g.x).im() * 2.0;
        Some(inner * Complex64::from_polar(sqrt(rho), a.dot(c)))
    }
}

/// f̃(x,t) = conj f(−x,−t).
pub struct Involution<F>(pub F);

impl<F: Form> Form for Involution<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        self.0.eval(&crate::group::ginv(*p)).conj()
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        self.0.central(&-*x, a).map(|z| z.conj())
    }
}

/// f_ρ(x,t) = ρ⁻⁵ f(x/√ρ, t/ρ), the L¹-normalised dilate.
pub struct Dilated<F> {
    inner: F,
    rho: f64,
}

impl<F: Form> Dilated<F> {
    pub fn new(inner: F, rho: f64) -> crate::error::Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(crate::error::CoreError::NonPositiveScale(rho));
        }
        Ok(Dilated { inner, rho })
    }
}

impl<F: Form> Form for Dilated<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        let r = self.rho;
        let q = GroupPoint::new(p.x * (1.0 / sqrt(r)), p.t * (1.0 / r));
        self.inner.eval(&q) * crate::math::powi(r, -5)
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        let r = self.rho;
        self.inner.central(&(*x * (1.0 / sqrt(r))), &(*a * r)).map(|z| z / (r * r))
    }
}

/// f_{u,v}(x,t) = f(ū x v, v̄ t v).
pub struct Rotated<F> {
    inner: F,
    u: UnitQuaternion,
    v: UnitQuaternion,
}

impl<F: Form> Rotated<F> {
    pub fn new(inner: F, u: UnitQuaternion, v: UnitQuaternion) -> Self {
        Rotated { inner, u, v }
    }
}

impl<F: Form> Form for Rotated<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        let x = self.u.quat().conj() * p.x * self.v.quat();
        self.inner.eval(&GroupPoint::new(x, self.v.unrotate_im(p.t)))
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        let y = self.u.quat().conj() * *x * self.v.quat();
        self.inner.central(&y, &self.v.unrotate_im(*a))
    }
}

/// Linear combination Σ c_k f_k of forms.
pub struct Combination<F> {
    terms: Vec<(Complex64, F)>,
}

impl<F: Form> Combination<F> {
    pub fn new(terms: Vec<(Complex64, F)>) -> Self {
        Combination { terms }
    }
}

impl<F: Form> Form for Combination<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        self.terms.iter().map(|(c, f)| c * f.eval(p)).sum()
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for (c, f) in &self.terms {
            s += c * f.central(x, a)?;
        }
        Some(s)
    }
}
