//! Closed-form test functions g(x)·h(t), including Lizorkin-type members
//! whose central spectrum vanishes near a = 0.

use std::f64::consts::PI;
use std::sync::Arc;

use qheis_core::quad::gauss_legendre;
use qheis_core::{Complex64, Form, GroupPoint, ImQuaternion, Quaternion};

use crate::error::{Error, Result};
use crate::field::{sample, Field, SharedForm};
use crate::grid::GridSpec;

/// The x-factor g(x).
#[derive(Clone, Debug, PartialEq)]
pub enum XProfile {
    /// e^{−p|x|²}
    Gaussian { p: f64 },
    /// x₀^{m₀}x₁^{m₁}x₂^{m₂}x₃^{m₃} e^{−p|x|²}
    PolyGaussian { p: f64, m: [u32; 4] },
    /// max(0, 1 − |x|/radius): Lipschitz but not smooth.
    Tent { radius: f64 },
}

impl XProfile {
    pub fn eval(&self, x: &Quaternion) -> f64 {
        match *self {
            XProfile::Gaussian { p } => (-p * x.norm_sqr()).exp(),
            XProfile::PolyGaussian { p, m } => {
                let c = x.to_array();
                let mono: f64 = (0..4).map(|k| c[k].powi(m[k] as i32)).product();
                mono * (-p * x.norm_sqr()).exp()
            }
            XProfile::Tent { radius } => (1.0 - x.norm() / radius).max(0.0),
        }
    }

    /// ∫ g(x) e^{i⟨x,y⟩} dx when a closed form is known.
    pub fn fourier(&self, y: &Quaternion) -> Option<Complex64> {
        match *self {
            XProfile::Gaussian { p } => Some(Complex64::new((PI / p).powi(2) * (-y.norm_sqr() / (4.0 * p)).exp(), 0.0)),
            _ => None,
        }
    }
}

/// A radial smooth bump on [lo, hi], zero outside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shell {
    pub lo: f64,
    pub hi: f64,
}

impl Shell {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::BadParams("shell needs 0 < lo < hi".into()));
        }
        Ok(Shell { lo, hi })
    }

    pub fn eval(&self, r: f64) -> f64 {
        let s = (2.0 * r - self.lo - self.hi) / (self.hi - self.lo);
        if s.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        }
    }
}

/// The t-factor h(t), always given with its central transform ĥ(a).
#[derive(Clone, Debug, PartialEq)]
pub enum TProfile {
    /// e^{−q|t|²}, ĥ(a) = (π/q)^{3/2} e^{−|a|²/4q}.
    Gaussian { q: f64 },
    /// e^{i⟨a₀,t⟩}·c, whose transform is concentrated at a = −a₀.
    Plane { a0: ImQuaternion },
    /// Trigonometric polynomial on the periodic t-box of a grid:
    /// h(t) = V⁻¹ Σ_m ĥ(a_m) e^{−i⟨a_m,t⟩} over the lattice nodes a_m, with
    /// ĥ = shell bump. Its grid central transform is exactly ĥ on the lattice
    /// and every moment over the period vanishes at a = 0.
    LatticeShell { shell: Shell, nodes: Arc<Vec<(ImQuaternion, f64)>>, volume: f64 },
    /// h(t) = (2π²|t|)⁻¹ ∫ ĥ(r) r sin(r|t|) dr with ĥ = shell bump: the
    /// inverse transform on ℝ³, evaluated by Gauss–Legendre quadrature.
    RadialShell { shell: Shell, r: Arc<Vec<f64>>, w: Arc<Vec<f64>> },
}

const RADIAL_SHELL_NODES: usize = 96;

impl TProfile {
    pub fn lattice_shell(shell: Shell, grid: &GridSpec) -> Self {
        let nodes: Vec<(ImQuaternion, f64)> = (0..grid.n_slices())
            .map(|k| grid.a_point(k))
            .map(|a| (a, shell.eval(a.norm())))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        TProfile::LatticeShell { shell, nodes: Arc::new(nodes), volume: grid.period_volume() }
    }

    pub fn radial_shell(shell: Shell) -> Self {
        let (x, w) = gauss_legendre(RADIAL_SHELL_NODES);
        let half = 0.5 * (shell.hi - shell.lo);
        let mid = 0.5 * (shell.hi + shell.lo);
        let r: Vec<f64> = x.iter().map(|x| mid + half * x).collect();
        let w: Vec<f64> = w.iter().zip(&r).map(|(w, r)| w * half * shell.eval(*r) * r).collect();
        TProfile::RadialShell { shell, r: Arc::new(r), w: Arc::new(w) }
    }

    pub fn eval(&self, t: &ImQuaternion) -> Complex64 {
        match self {
            TProfile::Gaussian { q } => Complex64::new((-q * t.norm_sqr()).exp(), 0.0),
            TProfile::Plane { a0 } => Complex64::from_polar(1.0, a0.dot(*t)),
            TProfile::LatticeShell { nodes, volume, .. } => {
                nodes.iter().map(|(a, v)| Complex64::from_polar(*v, -a.dot(*t))).sum::<Complex64>() / *volume
            }
            TProfile::RadialShell { r, w, .. } => {
                let tn = t.norm();
                let s: f64 = r.iter().zip(w.iter()).map(|(r, w)| w * r * qheis_core::math::sinc(r * tn)).sum();
                Complex64::new(s / (2.0 * PI * PI), 0.0)
            }
        }
    }

    /// ĥ(a) = ∫ h(t) e^{i⟨a,t⟩} dt. For lattice profiles this is the value on
    /// the periodic grid, i.e. the bump itself.
    pub fn central(&self, a: &ImQuaternion) -> Option<Complex64> {
        match self {
            TProfile::Gaussian { q } => {
                Some(Complex64::new((PI / q).powf(1.5) * (-a.norm_sqr() / (4.0 * q)).exp(), 0.0))
            }
            TProfile::Plane { .. } => None,
            TProfile::LatticeShell { shell, .. } | TProfile::RadialShell { shell, .. } => {
                Some(Complex64::new(shell.eval(a.norm()), 0.0))
            }
        }
    }

    pub fn shell(&self) -> Option<Shell> {
        match self {
            TProfile::LatticeShell { shell, .. } | TProfile::RadialShell { shell, .. } => Some(*shell),
            _ => None,
        }
    }
}

/// f(x,t) = c · g(x) · h(t).
#[derive(Clone, Debug, PartialEq)]
pub struct Separable {
    pub x: XProfile,
    pub t: TProfile,
    pub scale: f64,
}

impl Form for Separable {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        self.t.eval(&p.t) * (self.scale * self.x.eval(&p.x))
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        Some(self.t.central(a)? * (self.scale * self.x.eval(x)))
    }
}

/// A closed-form test function plus its metadata.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub form: Arc<Separable>,
    /// The central spectrum vanishes for |a| below this radius.
    pub lizorkin_gap: Option<f64>,
}

impl TestFunction {
    pub fn shared(&self) -> SharedForm {
        self.form.clone()
    }

    pub fn sample(&self, grid: GridSpec) -> Result<Field> {
        sample(self.shared(), grid)
    }

    pub fn is_lizorkin(&self) -> bool {
        self.lizorkin_gap.is_some()
    }

    /// Full Euclidean transform when both factors have closed forms.
    pub fn fourier(&self, y: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        Some(self.form.x.fourier(y)? * self.form.t.central(a)? * self.form.scale)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParams(format!("{name} must be positive, got {v}")))
    }
}

/// e^{−p|x|²−q|t|²}.
pub fn gaussian(p: f64, q: f64) -> Result<TestFunction> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    Ok(TestFunction {
        form: Arc::new(Separable { x: XProfile::Gaussian { p }, t: TProfile::Gaussian { q }, scale: 1.0 }),
        lizorkin_gap: None,
    })
}

/// x^m e^{−p|x|²−q|t|²}.
pub fn poly_gaussian(p: f64, q: f64, m: [u32; 4]) -> Result<TestFunction> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    Ok(TestFunction {
        form: Arc::new(Separable { x: XProfile::PolyGaussian { p, m }, t: TProfile::Gaussian { q }, scale: 1.0 }),
        lizorkin_gap: None,
    })
}

/// g(x)·h(t) with ĥ a bump on the shell [a_min, a_max].
pub fn lizorkin(x: XProfile, central: TProfile) -> Result<TestFunction> {
    let shell = central.shell().ok_or_else(|| Error::BadParams("lizorkin needs a shell profile".into()))?;
    match x {
        XProfile::Gaussian { p } | XProfile::PolyGaussian { p, .. } => check_positive("p", p)?,
        XProfile::Tent { radius } => check_positive("radius", radius)?,
    }
    Ok(TestFunction { form: Arc::new(Separable { x, t: central, scale: 1.0 }), lizorkin_gap: Some(shell.lo) })
}

/// Default Lizorkin test function on `grid`: e^{−0.75|x|²} times the lattice
/// shell [0.6, 1.1].
pub fn default_lizorkin(grid: &GridSpec) -> TestFunction {
    let shell = Shell { lo: 0.6, hi: 1.1 };
    lizorkin(XProfile::Gaussian { p: 0.75 }, TProfile::lattice_shell(shell, grid)).expect("valid defaults")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_at_origin() {
        let f = gaussian(1.0, 1.0).unwrap();
        assert_eq!(f.form.eval(&GroupPoint::IDENTITY), Complex64::new(1.0, 0.0));
        assert!(gaussian(-1.0, 1.0).is_err());
    }

    #[test]
    fn lattice_shell_has_exact_transform() {
        let g = GridSpec::default_grid();
        let h = TProfile::lattice_shell(Shell { lo: 0.6, hi: 1.1 }, &g);
        for k in 0..g.n_slices() {
            let a = g.a_point(k);
            let s: Complex64 = (0..g.n_slices())
                .map(|j| {
                    let t = g.t_point(j);
                    h.eval(&t) * Complex64::from_polar(g.t_cell(), a.dot(t))
                })
                .sum();
            let want = Shell { lo: 0.6, hi: 1.1 }.eval(a.norm());
            assert!((s - want).norm() < 1e-12, "slice {k}: {s} vs {want}");
        }
    }

    #[test]
    fn radial_shell_inverts_the_bump() {
        // h(0) = (2π²)⁻¹ ∫ ĥ(r) r² dr
        let shell = Shell { lo: 0.6, hi: 1.1 };
        let h = TProfile::radial_shell(shell);
        let (x, w) = gauss_legendre(200);
        let direct: f64 = x
            .iter()
            .zip(&w)
            .map(|(x, w)| {
                let r = 0.85 + 0.25 * x;
                0.25 * w * shell.eval(r) * r * r
            })
            .sum::<f64>()
            / (2.0 * PI * PI);
        assert!((h.eval(&ImQuaternion::ZERO).re - direct).abs() < 1e-10 * direct);
    }
}
