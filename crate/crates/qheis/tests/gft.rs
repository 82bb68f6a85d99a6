use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use qheis::core::form::rep_u;
use qheis::core::quad::gauss_legendre;
use qheis::core::quat::random_unit;
use qheis::core::{AffinePoint, Complex64, Form, GroupPoint, ImQuaternion, Quaternion, UnitQuaternion};
use qheis::factory::{self, Separable, TProfile, XProfile};
use qheis::field::SharedForm;
use qheis::gft::{self, GroupSpectrum, Matrix, RadialSynthesis};
use qheis::{Field, GridSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const L: usize = 8;

fn closed(form: impl Form + 'static) -> Field {
    Field::from_form(Arc::new(form), GridSpec::default_grid())
}

fn gauss(p: f64, q: f64) -> Separable {
    Separable { x: XProfile::Gaussian { p }, t: TProfile::Gaussian { q }, scale: 1.0 }
}

fn poly(p: f64, q: f64, m: [u32; 4]) -> Separable {
    Separable { x: XProfile::PolyGaussian { p, m }, t: TProfile::Gaussian { q }, scale: 1.0 }
}

fn rel(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / b.norm()
}

fn a_dir(r: f64, d: [f64; 3]) -> ImQuaternion {
    let a = ImQuaternion::new(d[0], d[1], d[2]);
    a * (r / a.norm())
}

#[test]
fn gaussian_spectrum_is_radial_with_known_coefficients() {
    // e^{−p|x|²}: B_l = π²(p−r)^l/(p+r)^{l+2}, times ĥ(a) from the t-factor
    let (p, q) = (1.3, 0.8);
    let f = closed(gauss(p, q));
    let a = a_dir(0.7, [0.3, -0.5, 0.8]);
    let r = a.norm();
    let m = gft::gft_matrix(&f, &a, L).unwrap();
    let (b, residual) = gft::radial_decomposition(&m, L);
    assert!(residual < 1e-8, "off-radial residual {residual}");
    let h = (PI / q).powf(1.5) * (-r * r / (4.0 * q)).exp();
    for (l, bl) in b.iter().enumerate() {
        let want = h * PI * PI * (p - r).powi(l as i32) / (p + r).powi(l as i32 + 2);
        assert!((bl.re - want).abs() < 1e-6 * h && bl.im.abs() < 1e-10, "l={l}: {bl} vs {want}");
    }
}

#[test]
fn degree_zero_coefficient_matches_radial_integral() {
    // B(a,0) = ∫ ℱ₂f(x,a) e^{−|a||x|²} dx; for radial g(|x|) this is
    // 2π² ∫ g(s) e^{−|a|s²} s³ ds by Gauss–Legendre on [0, 8]
    let f = closed(Separable {
        x: XProfile::PolyGaussian { p: 0.9, m: [0; 4] },
        t: TProfile::Gaussian { q: 1.0 },
        scale: 1.0,
    });
    let a = a_dir(1.1, [0.0, 1.0, 1.0]);
    let r = a.norm();
    let m = gft::gft_matrix(&f, &a, 2).unwrap();
    let (x, w) = gauss_legendre(80);
    let radial: f64 = x
        .iter()
        .zip(&w)
        .map(|(x, w)| {
            let s = 4.0 * (x + 1.0);
            4.0 * w * (-0.9 * s * s).exp() * (-r * s * s).exp() * s.powi(3)
        })
        .sum::<f64>()
        * 2.0
        * PI
        * PI;
    let h = PI.powf(1.5) * (-r * r / 4.0).exp();
    assert!((m[(0, 0)].re - h * radial).abs() < 1e-4 * h * radial);
}

#[test]
fn convolution_theorem_on_gaussian_pair() {
    // f = e^{−p|x|²}h₁, g = e^{−q|x|²}h₂ with twisted convolution slice
    // (π/(p+q))² exp(−|x|²(pq+|a|²)/(p+q)) ĥ₁ĥ₂
    struct Conv {
        p: f64,
        q: f64,
        h1: TProfile,
        h2: TProfile,
    }
    impl Form for Conv {
        fn eval(&self, _: &GroupPoint) -> Complex64 {
            unimplemented!("spectral test only")
        }
        fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
            let (p, q) = (self.p, self.q);
            let s = (PI / (p + q)).powi(2) * (-x.norm_sqr() * (p * q + a.norm_sqr()) / (p + q)).exp();
            Some(self.h1.central(a)? * self.h2.central(a)? * s)
        }
    }
    let (p, q) = (0.9, 1.6);
    let h1 = TProfile::Gaussian { q: 0.7 };
    let h2 = TProfile::Gaussian { q: 1.2 };
    let f = closed(Separable { x: XProfile::Gaussian { p }, t: h1.clone(), scale: 1.0 });
    let g = closed(Separable { x: XProfile::Gaussian { p: q }, t: h2.clone(), scale: 1.0 });
    let fg = closed(Conv { p, q, h1, h2 });
    for a in [a_dir(0.5, [1.0, 0.0, 0.0]), a_dir(1.4, [0.2, 0.9, -0.4])] {
        let lhs = gft::gft_matrix(&fg, &a, L).unwrap();
        let rhs = gft::gft_matrix(&f, &a, L).unwrap() * gft::gft_matrix(&g, &a, L).unwrap();
        let e = rel(&lhs, &rhs);
        assert!(e < 1e-4, "|a|={}: {e}", a.norm());
    }
}

#[test]
fn twisted_convolution_closed_form_matches_quadrature() {
    // direct 4-D quadrature of ∫F(y)G(x−y)e^{−2i⟨a,Im(x̄y)⟩}dy at a few x
    let (p, q) = (0.9, 1.6);
    let a = ImQuaternion::new(0.3, -0.6, 0.5);
    let (nodes, w) = gauss_legendre(32);
    let half = 4.0;
    for x in [Quaternion::new(0.4, -0.3, 0.2, 0.5), Quaternion::new(-1.0, 0.1, 0.6, 0.0)] {
        let mut acc = Complex64::new(0.0, 0.0);
        for i0 in 0..32 {
            for i1 in 0..32 {
                for i2 in 0..32 {
                    for i3 in 0..32 {
                        let y = Quaternion::new(nodes[i0], nodes[i1], nodes[i2], nodes[i3]) * half;
                        let wt = w[i0] * w[i1] * w[i2] * w[i3] * half.powi(4);
                        let im = (x.conj() * y).im();
                        let val = (-p * y.norm_sqr() - q * (x - y).norm_sqr()).exp();
                        acc += Complex64::from_polar(wt * val, -2.0 * a.dot(im));
                    }
                }
            }
        }
        let want = (PI / (p + q)).powi(2) * (-x.norm_sqr() * (p * q + a.norm_sqr()) / (p + q)).exp();
        assert!((acc - want).norm() < 1e-8 * want, "{acc} vs {want}");
    }
}

#[test]
fn involution_gives_adjoint() {
    let f = closed(poly(1.1, 0.9, [1, 0, 2, 0]));
    let ft = f.involution_tilde().unwrap();
    let a = a_dir(0.8, [0.5, 0.5, -0.7]);
    let m = gft::gft_matrix(&f, &a, L).unwrap();
    let mt = gft::gft_matrix(&ft, &a, L).unwrap();
    assert!(rel(&mt, &m.adjoint()) < 1e-6);
}

#[test]
fn scaling_covariance() {
    let f = closed(poly(1.0, 1.0, [0, 1, 1, 0]));
    let a = a_dir(0.6, [0.1, -0.9, 0.3]);
    let rho = 1.7;
    let fd = f.func_dilate(rho).unwrap();
    let lhs = gft::gft_matrix(&fd, &a, L).unwrap();
    let rhs = gft::gft_matrix(&f, &(a * rho), L).unwrap();
    assert!(rel(&lhs, &rhs) < 1e-3, "{}", rel(&lhs, &rhs));
}

#[test]
fn rotation_covariance_through_intertwiner() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (u, v) = (random_unit(&mut rng), random_unit(&mut rng));
    let f = closed(poly(1.2, 1.0, [1, 1, 0, 0]));
    let a = a_dir(0.9, [0.6, -0.2, 0.4]);
    let lhs = gft::gft_matrix(&f.func_rotate(u, v).unwrap(), &a, L).unwrap();
    let (b, gamma) = gft::intertwiner(u, v, &a, L).unwrap();
    let rhs = gamma.adjoint() * gft::gft_matrix(&f, &b, L).unwrap() * &gamma;
    assert!(rel(&lhs, &rhs) < 1e-3, "{}", rel(&lhs, &rhs));
}

#[test]
fn intertwiner_identity_and_unitarity() {
    let a = a_dir(1.3, [0.2, 0.4, 0.9]);
    let d = qheis::core::fock::dim(L);
    let (b, id) = gft::intertwiner(UnitQuaternion::IDENTITY, UnitQuaternion::IDENTITY, &a, L).unwrap();
    assert!((b - a).norm() < 1e-15);
    assert!((id - Matrix::identity(d, d)).norm() < 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (_, g) = gft::intertwiner(random_unit(&mut rng), random_unit(&mut rng), &a, L).unwrap();
    assert!((g.adjoint() * &g - Matrix::identity(d, d)).norm() < 1e-8);
}

#[test]
fn representation_covariance() {
    // gft(U(g)f)(a) = ρ^{5/2} π_a(x,t) Γ^* f̂(b) Γ with (b, Γ) for ρa; p = ρ|a|
    // keeps f̂(b) in low degrees so the truncated product is accurate
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (u, v) = (random_unit(&mut rng), random_unit(&mut rng));
    let a = a_dir(0.7, [0.4, 0.8, -0.1]);
    let rho = 1.4;
    let base = poly(rho * a.norm(), 1.0, [1, 0, 0, 0]);
    let g =
        AffinePoint::new(Quaternion::new(0.15, -0.1, 0.05, 0.1), ImQuaternion::new(0.3, -0.2, 0.4), rho, u, v).unwrap();
    let moved = closed(rep_u(g, base.clone()));
    let lhs = gft::gft_matrix(&moved, &a, L).unwrap();
    let (b, gamma) = gft::intertwiner(u, v, &(a * rho), L).unwrap();
    let fb = gft::gft_matrix(&closed(base), &b, L).unwrap();
    let pi = gft::pi_operator(&a, &g.x, &g.t, L).unwrap();
    let rhs = pi * (gamma.adjoint() * fb * &gamma) * Complex64::new(rho.powf(2.5), 0.0);
    assert!(rel(&lhs, &rhs) < 1e-3, "{}", rel(&lhs, &rhs));
}

fn bump_coeffs(degree: usize, lo: f64, hi: f64) -> gft::RadialCoeffs {
    let shell = factory::Shell::new(lo, hi).unwrap();
    Arc::new(move |r, l| Complex64::new(if l == degree { shell.eval(r) } else { 0.0 }, 0.0))
}

#[test]
fn degree_subspace_is_invariant() {
    let l = 2;
    let f: SharedForm = Arc::new(RadialSynthesis::new(bump_coeffs(l, 0.5, 1.6), L, 1.6, 32, 1e-6).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = AffinePoint::new(
        Quaternion::new(0.2, 0.1, -0.3, 0.0),
        ImQuaternion::new(0.5, 0.0, -0.2),
        1.2,
        random_unit(&mut rng),
        random_unit(&mut rng),
    )
    .unwrap();
    let moved = closed(rep_u(g, f));
    let a = a_dir(0.8, [0.0, 0.6, 0.8]);
    let m = gft::gft_matrix(&moved, &a, L).unwrap();
    let inside = GroupSpectrum::new(L, vec![a], vec![m.clone()]).unwrap().project_pl(l).mats[0].norm();
    let outside = (m.norm_squared() - inside * inside).max(0.0).sqrt();
    assert!(outside / m.norm() < 1e-2, "leak {}", outside / m.norm());
}

#[test]
fn hs_identity() {
    let f = closed(gauss(1.0, 1.0));
    let a = a_dir(0.9, [1.0, 1.0, 0.0]);
    let (l8, r8) = gft::hs_cross_check(&f, &a, 8).unwrap();
    let (l4, r4) = gft::hs_cross_check(&f, &a, 4).unwrap();
    assert!((l8 - r8).abs() < 0.02 * r8, "{l8} vs {r8}");
    assert!((l8 - r8).abs() <= (l4 - r4).abs());

    let d0: SharedForm = Arc::new(RadialSynthesis::new(bump_coeffs(0, 0.4, 1.5), 0, 1.5, 24, 1e-6).unwrap());
    let (l0, r0) = gft::hs_cross_check(&closed(d0), &a, 0).unwrap();
    assert!((l0 - r0).abs() < 1e-4 * r0, "{l0} vs {r0}");
}

#[test]
fn sublaplacian_eigenvalues() {
    for l in 0..=2 {
        let c = gft::sublaplacian_eigen_check(a_dir(1.0, [0.3, 0.4, 0.5]), l, L).unwrap();
        assert!(c.rel_error < 0.03, "l={l}: {c:?}");
    }
}

#[test]
fn synthesis_round_trip_and_values() {
    let (p, q) = (1.0, 0.25);
    let f = closed(gauss(p, q));
    // one matrix per radius, shared across degrees
    let cache: Mutex<Vec<(f64, Vec<Complex64>)>> = Mutex::new(Vec::new());
    let coeffs: gft::RadialCoeffs = Arc::new(move |r, l| {
        let mut c = cache.lock().unwrap();
        if let Some((_, b)) = c.iter().find(|(s, _)| *s == r) {
            return b[l];
        }
        let m = gft::gft_matrix(&f, &ImQuaternion::new(r.max(1e-9), 0.0, 0.0), L).unwrap();
        let b = gft::radial_decomposition(&m, L).0;
        let out = b[l];
        c.push((r, b));
        out
    });
    let syn = RadialSynthesis::new(coeffs, L, 6.0, 40, 1e-6).unwrap();
    let target = gauss(p, q);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut num, mut den) = (0.0, 0.0);
    for _ in 0..200 {
        let c: [f64; 7] = std::array::from_fn(|_| rand::Rng::gen_range(&mut rng, -1.5..1.5));
        let pt = GroupPoint::from_coords(c);
        num += (syn.eval(&pt) - target.eval(&pt)).norm_sqr();
        den += target.eval(&pt).norm_sqr();
    }
    let e = (num / den).sqrt();
    assert!(e < 0.02, "round trip {e}");
}

#[test]
fn degree_zero_synthesis_is_real_with_known_origin_value() {
    let shell = factory::Shell::new(0.4, 1.5).unwrap();
    let syn = RadialSynthesis::new(bump_coeffs(0, 0.4, 1.5), 3, 1.5, 48, 1e-6).unwrap();
    let pts = [
        GroupPoint::from_coords([0.3, -0.2, 0.5, 0.1, 1.0, -0.4, 0.2]),
        GroupPoint::from_coords([1.2, 0.0, 0.0, -0.7, 0.0, 2.5, 0.0]),
    ];
    let scale = syn.eval(&GroupPoint::IDENTITY).norm();
    for p in pts {
        assert!(syn.eval(&p).im.abs() < 1e-8 * scale);
    }
    // f(0,0) = (2/π⁴) ∫ B(r,0) r⁴ dr
    let (x, w) = gauss_legendre(200);
    let direct: f64 = x
        .iter()
        .zip(&w)
        .map(|(x, w)| {
            let r = 0.95 + 0.55 * x;
            0.55 * w * shell.eval(r) * r.powi(4)
        })
        .sum::<f64>()
        * 2.0
        / PI.powi(4);
    assert!((syn.eval(&GroupPoint::IDENTITY).re - direct).abs() < 1e-6 * direct);
}

#[test]
fn truncation_budget_is_enforced() {
    let slow: gft::RadialCoeffs = Arc::new(|r, _| Complex64::new((-0.1 * r).exp(), 0.0));
    assert!(matches!(RadialSynthesis::new(slow, 2, 5.0, 16, 1e-6), Err(qheis::Error::TruncationBudgetExceeded { .. })));
}

#[test]
fn spectrum_dump_is_deterministic() {
    let f = closed(poly(1.0, 1.0, [1, 0, 0, 1]));
    let nodes = vec![a_dir(0.5, [1.0, 0.0, 0.0]), a_dir(1.0, [0.0, 0.0, 1.0])];
    let s1 = gft::gft(&f, &nodes, 4).unwrap().to_json(None).unwrap();
    let s2 = gft::gft(&f, &nodes, 4).unwrap().to_json(None).unwrap();
    assert_eq!(s1, s2);
}
