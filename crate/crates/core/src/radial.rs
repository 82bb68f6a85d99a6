//! Radial profiles η on ℝ₊ generating radial wavelets, with their Calderón
//! constant C_η = 4π∫|η(r)|² dr/r and fourth moment m₄ = ∫|η(r)|² r⁴ dr.

use alloc::sync::Arc;
use core::fmt;

use crate::error::{CoreError, Result};
use crate::math::{exp, gamma_int, ln, powi, PI};
use crate::quad::{integrate, integrate_dr_over_r};

/// Named families of profiles.
#[derive(Clone)]
pub enum ProfileKind {
    /// η(r) = rᵏ e^{-cr}.
    PowerExp { k: u32, c: f64 },
    /// Smooth bump exp(1 − 1/(1 − s²)) supported on [lo, hi], where s maps
    /// [lo, hi] affinely onto [−1, 1].
    Bump { lo: f64, hi: f64 },
    /// Any user-supplied η; `support` bounds the quadrature window.
    Custom { eta: Arc<dyn Fn(f64) -> f64 + Send + Sync>, support: [f64; 2] },
}

impl fmt::Debug for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::PowerExp { k, c } => write!(f, "PowerExp {{ k: {k}, c: {c} }}"),
            ProfileKind::Bump { lo, hi } => write!(f, "Bump {{ lo: {lo}, hi: {hi} }}"),
            ProfileKind::Custom { support, .. } => write!(f, "Custom {{ support: {support:?} }}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RadialProfile {
    kind: ProfileKind,
    amp: f64,
    c_eta: f64,
    m4: f64,
    support: [f64; 2],
}

const DEFAULT_SUPPORT: [f64; 2] = [1e-10, 1e4];
/// Relative size of |η|² at the window ends above which an integral is
/// declared divergent.
const TAIL_TOL: f64 = 1e-10;

fn bump(lo: f64, hi: f64, r: f64) -> f64 {
    let s = (2.0 * r - lo - hi) / (hi - lo);
    if s.abs() >= 1.0 {
        0.0
    } else {
        exp(1.0 - 1.0 / (1.0 - s * s))
    }
}

impl RadialProfile {
    pub fn power_exp(k: u32, c: f64) -> Result<Self> {
        if k == 0 {
            return Err(CoreError::NotAdmissible("η(0) ≠ 0 makes ∫|η|²dr/r diverge"));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(CoreError::NotAdmissible("η must decay at infinity"));
        }
        Self::build(ProfileKind::PowerExp { k, c })
    }

    pub fn bump(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(CoreError::BadParams("bump needs 0 < lo < hi"));
        }
        Self::build(ProfileKind::Bump { lo, hi })
    }

    pub fn custom<F>(eta: F, support: Option<[f64; 2]>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let support = support.unwrap_or(DEFAULT_SUPPORT);
        if !(support[0] > 0.0 && support[1] > support[0]) {
            return Err(CoreError::BadParams("support must satisfy 0 < r_min < r_max"));
        }
        Self::build(ProfileKind::Custom { eta: Arc::new(eta), support })
    }

    fn build(kind: ProfileKind) -> Result<Self> {
        let support = match &kind {
            ProfileKind::PowerExp { k, c } => [1e-8_f64.min(1e-3 / c), (60.0 + 4.0 * *k as f64) / c],
            ProfileKind::Bump { lo, hi } => [*lo, *hi],
            ProfileKind::Custom { support, .. } => *support,
        };
        let mut p = RadialProfile { kind, amp: 1.0, c_eta: 0.0, m4: 0.0, support };
        let (c, m) = p.quadrature_constants()?;
        let (c, m) = p.closed_form().unwrap_or((c, m));
        p.c_eta = c;
        p.m4 = m;
        Ok(p)
    }

    /// The same profile multiplied by a constant factor.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut p = self.clone();
        p.amp *= factor;
        p.c_eta *= factor * factor;
        p.m4 *= factor * factor;
        p
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn eta(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let v = match &self.kind {
            ProfileKind::PowerExp { k, c } => powi(r, *k as i32) * exp(-c * r),
            ProfileKind::Bump { lo, hi } => bump(*lo, *hi, r),
            ProfileKind::Custom { eta, .. } => eta(r),
        };
        self.amp * v
    }

    /// Stored C_η (closed form when available).
    pub fn c_eta(&self) -> f64 {
        self.c_eta
    }

    /// Stored ∫|η|² r⁴ dr.
    pub fn m4(&self) -> f64 {
        self.m4
    }

    pub fn support(&self) -> [f64; 2] {
        self.support
    }

    pub fn closed_form(&self) -> Option<(f64, f64)> {
        match self.kind {
            ProfileKind::PowerExp { k, c } => {
                let k2 = 2 * k as usize;
                let a2 = self.amp * self.amp;
                let c_eta = 4.0 * PI * a2 * gamma_int(k2) / powi(2.0 * c, k2 as i32);
                let m4 = a2 * gamma_int(k2 + 5) / powi(2.0 * c, k2 as i32 + 5);
                Some((c_eta, m4))
            }
            _ => None,
        }
    }

    /// C_η and m₄ by adaptive quadrature, with divergence detection at the
    /// ends of the support window.
    pub fn quadrature_constants(&self) -> Result<(f64, f64)> {
        let [r0, r1] = self.support;
        let e2 = |r: f64| {
            let v = self.eta(r);
            v * v
        };
        let (s0, s1) = (ln(r0), ln(r1));
        let (ci, tails) = integrate_dr_over_r(e2, s0, s1, 1e-13)?;
        let (mi, _) = integrate(
            |s| {
                let r = exp(s);
                e2(r) * powi(r, 5)
            },
            s0,
            s1,
            1e-13,
            1e-11,
            4000,
        )?;
        let peak = ci.max(mi).max(f64::MIN_POSITIVE);
        if !(ci > 0.0) || tails[0] > TAIL_TOL * peak.max(1.0) {
            return Err(CoreError::NotAdmissible("∫|η|² dr/r diverges at 0"));
        }
        if tails[1] * powi(r1, 4) > TAIL_TOL * peak.max(1.0) {
            return Err(CoreError::NotAdmissible("∫|η|² r⁴ dr diverges at ∞"));
        }
        Ok((4.0 * PI * ci, mi))
    }

    /// 4π∫|η((l+1)r)|² dr/r, the degree-l admissibility integral of φ_η.
    pub fn degree_admissibility(&self, l: usize) -> Result<f64> {
        let sc = (l + 1) as f64;
        let [r0, r1] = self.support;
        let (v, _) = integrate_dr_over_r(
            |r| {
                let e = self.eta(sc * r);
                e * e
            },
            ln(r0 / sc),
            ln(r1 / sc),
            1e-13,
        )?;
        Ok(4.0 * PI * v)
    }
}
