//! Self-test suites. Each acceptance criterion becomes a group of report
//! records with pinned tolerances, scaled by the run configuration.

use std::f64::consts::PI;
use std::sync::Arc;

use qheis_core::form::{rep_u, Form};
use qheis_core::group::{ginv, gmul, paction, pinv, pmul};
use qheis_core::quat::random_unit;
use qheis_core::{fock, AffinePoint, Complex64, GroupPoint, ImQuaternion, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::efourier::{
    active_slices, fourier_central, fourier_full, innermost_radius, multiplier_l, restrict_shell, Direction, PsiOptions,
};
use crate::error::Result;
use crate::factory::{self, Separable, Shell, TProfile, TestFunction, XProfile};
use crate::field::Field;
use crate::gft::{self, Matrix};
use crate::grid::GridSpec;
use crate::radon::{inv_radon_lrl, inv_radon_thm7, radon_direct, radon_fft, spectral_radon_check};
use crate::report::{Mode, Record, Report};
use crate::wavelet::{self, Wavelet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Fourier,
    Gft,
    Radon,
    Wavelet,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Fourier => "fourier",
            Suite::Gft => "gft",
            Suite::Radon => "radon",
            Suite::Wavelet => "wavelet",
            Suite::All => "all",
        }
    }
}

/// Runs `suite` and returns the finished report.
pub fn run_selftest(cfg: &RunConfig, suite: Suite) -> Result<Report> {
    cfg.validate()?;
    let mut rep = Report::new(&format!("selftest {}", suite.name()), cfg);
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Algebra) {
        rep.timed("algebra", 1, Some(10.0), |r| algebra(cfg, r));
    }
    if want(Suite::Fourier) {
        rep.timed("fourier", 2, Some(30.0), |r| fourier(cfg, r))?;
    }
    if want(Suite::Gft) {
        rep.timed("gft", 3, Some(300.0), |r| group_fourier(cfg, r))?;
    }
    if want(Suite::Radon) {
        rep.timed("radon core", 4, Some(120.0), |r| radon_core(cfg, r))?;
        rep.timed("radon inversion", 5, Some(300.0), |r| radon_inversion(cfg, r))?;
    }
    if want(Suite::Wavelet) {
        rep.timed("wavelet constants", 6, Some(120.0), |r| wavelet_constants(cfg, r))?;
        let phi = wavelet::build_phi_eta(default_profile(), cfg.wavelet_degree)?;
        let kappas = wavelet_isometry(cfg, &phi, &mut rep)?;
        rep.timed("wavelet radon", 9, Some(600.0), |r| wavelet_radon(cfg, &phi, &kappas, r))?;
    }
    if suite == Suite::All {
        determinism(cfg, &mut rep)?;
    }
    rep.finish();
    Ok(rep)
}

fn default_profile() -> qheis_core::radial::RadialProfile {
    wavelet::make_profile("power-exp", &[1.0, 1.0]).expect("valid profile")
}

fn shell() -> Shell {
    Shell::new(0.6, 1.1).expect("valid shell")
}

/// Lizorkin functions used by the inversion checks.
pub fn lizorkin_set(g: &GridSpec) -> Vec<TestFunction> {
    let h = TProfile::lattice_shell(shell(), g);
    vec![
        factory::default_lizorkin(g),
        factory::lizorkin(XProfile::PolyGaussian { p: 0.9, m: [1, 0, 1, 0] }, h).expect("valid profile"),
    ]
}

/// [`lizorkin_set`] plus a wide Gaussian in x, for the isometry checks.
pub fn isometry_set(g: &GridSpec) -> Vec<TestFunction> {
    let mut v = lizorkin_set(g);
    let h = TProfile::lattice_shell(shell(), g);
    v.push(factory::lizorkin(XProfile::Gaussian { p: 0.5 }, h).expect("valid profile"));
    v
}

fn rel_vec(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn rel_mat(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / b.norm()
}

fn rand_quat(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
    )
}

fn rand_point(rng: &mut ChaCha8Rng) -> GroupPoint {
    let t = ImQuaternion::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    GroupPoint::new(rand_quat(rng), t)
}

fn rand_affine(rng: &mut ChaCha8Rng) -> AffinePoint {
    let p = rand_point(rng);
    let rho = rng.gen_range(0.2..5.0);
    AffinePoint::new(p.x, p.t, rho, random_unit(rng), random_unit(rng)).expect("valid element")
}

fn dist(p: GroupPoint, q: GroupPoint) -> f64 {
    (p.x - q.x).norm() + (p.t - q.t).norm()
}

fn size(p: GroupPoint) -> f64 {
    1.0 + p.x.norm() + p.t.norm()
}

/// Decaying probe with a phase mixing x and t.
struct Probe;

impl Form for Probe {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        let c = p.coords();
        Complex64::from_polar((-p.x.norm_sqr() - 0.5 * p.t.norm_sqr()).exp(), 0.2 * c[4] + 0.3 * c[0] * c[5])
    }
}

fn algebra(cfg: &RunConfig, rep: &mut Report) {
    let tol = 1e-10 * cfg.tol("algebra");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = [0.0f64; 10];
    let mut bump = |i: usize, e: f64| worst[i] = worst[i].max(if e.is_nan() { f64::INFINITY } else { e });
    for _ in 0..cfg.cases {
        let (q, h, k) = (rand_quat(&mut rng), rand_quat(&mut rng), rand_quat(&mut rng));
        bump(0, ((q * h).norm() - q.norm() * h.norm()).abs() / (1.0 + q.norm() * h.norm()));
        bump(1, ((q * h) * k - q * (h * k)).norm() / (1.0 + q.norm() * h.norm() * k.norm()));
        bump(2, ((q * h).conj() - h.conj() * q.conj()).norm() / (1.0 + q.norm() * h.norm()));

        let (p, r, s) = (rand_point(&mut rng), rand_point(&mut rng), rand_point(&mut rng));
        let sc = size(p) * size(r) * size(s);
        bump(3, dist(gmul(gmul(p, r), s), gmul(p, gmul(r, s))) / sc);
        let inv = dist(gmul(p, ginv(p)), GroupPoint::IDENTITY).max(dist(gmul(ginv(p), p), GroupPoint::IDENTITY));
        bump(4, inv / size(p));
        bump(5, dist(gmul(p, GroupPoint::IDENTITY), p) / size(p));

        let (g1, g2, g3) = (rand_affine(&mut rng), rand_affine(&mut rng), rand_affine(&mut rng));
        let sc = size(g1.translation_part()) * size(g2.translation_part()) * size(g3.translation_part()) * size(p);
        let (a, b) = (pmul(&pmul(&g1, &g2), &g3), pmul(&g1, &pmul(&g2, &g3)));
        bump(6, (dist(a.translation_part(), b.translation_part()) + (a.rho() - b.rho()).abs()) / sc);
        let e = pmul(&g1, &pinv(&g1));
        bump(7, (dist(e.translation_part(), GroupPoint::IDENTITY) + (e.rho() - 1.0).abs()) / sc);
        bump(8, dist(paction(&g1, paction(&g2, p)), paction(&pmul(&g1, &g2), p)) / sc);

        let lhs = rep_u(g1, rep_u(g2, Probe)).eval(&p);
        let rhs = rep_u(pmul(&g1, &g2), Probe).eval(&p);
        bump(9, (lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    let names = [
        ("quaternion norm is multiplicative", "|qh| = |q||h|"),
        ("quaternion product is associative", "(qh)g = q(hg)"),
        ("conjugation reverses products", "conj(qh) = conj(h)conj(q)"),
        ("group product is associative", "group law"),
        ("group inverse", "group law"),
        ("group identity", "group law"),
        ("affine product is associative", "affine group law"),
        ("affine inverse", "affine group law"),
        ("affine action is compatible", "g1·(g2·p) = (g1g2)·p"),
        ("U is a homomorphism", "U(g1)U(g2) = U(g1g2)"),
    ];
    for ((name, anchor), w) in names.iter().zip(worst) {
        rep.push(Record::bound(1, name, anchor, w, tol));
    }
}

fn fourier(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let s = cfg.tol("fourier");
    // widths matched to the spacing of the t-resolved grid
    let g = GridSpec::t_resolved();
    let (p, q) = (0.59, 0.49);
    let tf = factory::gaussian(p, q)?;
    let big = fourier_full(&tf.sample(g)?, Direction::Forward)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (k, z) in big.values()?.iter().enumerate() {
        let (yi, ai) = g.split(k);
        let want = tf.fourier(&g.y_point(yi), &g.a_point(ai)).expect("closed form");
        num += (z - want).norm_sqr();
        den += want.norm_sqr();
    }
    drop(big);
    rep.push(Record::bound(
        2,
        "gaussian transform vs closed form",
        "Gaussian Fourier pair",
        (num / den).sqrt(),
        1e-3 * s,
    ));

    let g = cfg.grid()?;
    let f = factory::poly_gaussian(0.8, 0.7, [1, 0, 2, 0])?.sample(g)?;
    let big = fourier_full(&f, Direction::Forward)?;
    let back = fourier_full(&big, Direction::Inverse)?;
    rep.push(Record::bound(2, "fourier round trip", "F⁻¹F = id", back.rel_l2_error(&f)?, 1e-12 * s));
    let lhs = big.l2norm()?.powi(2);
    let rhs = (2.0 * PI).powi(7) * f.l2norm()?.powi(2);
    rep.push(Record::bound(2, "parseval", "‖Ff‖² = (2π)⁷‖f‖²", (lhs - rhs).abs() / rhs, 1e-10 * s));
    Ok(())
}

/// Twisted convolution of e^{−p|x|²}h₁ and e^{−q|x|²}h₂, central transform only.
struct GaussConv {
    p: f64,
    q: f64,
    h1: TProfile,
    h2: TProfile,
}

impl Form for GaussConv {
    fn eval(&self, _: &GroupPoint) -> Complex64 {
        unimplemented!("spectral use only")
    }

    fn central(&self, x: &Quaternion, a: &ImQuaternion) -> Option<Complex64> {
        let (p, q) = (self.p, self.q);
        let s = (PI / (p + q)).powi(2) * (-x.norm_sqr() * (p * q + a.norm_sqr()) / (p + q)).exp();
        Some(self.h1.central(a)? * self.h2.central(a)? * s)
    }
}

fn closed(form: impl Form + 'static, g: GridSpec) -> Field {
    Field::from_form(Arc::new(form), g)
}

fn along(r: f64, d: [f64; 3]) -> ImQuaternion {
    let a = ImQuaternion::new(d[0], d[1], d[2]);
    a * (r / a.norm())
}

fn group_fourier(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let s = cfg.tol("gft");
    let l = cfg.fock_degree;
    let g = cfg.grid()?;
    let sep = |x: XProfile, t: TProfile| Separable { x, t, scale: 1.0 };

    let frame = fock::AdaptedFrame::new(ImQuaternion::new(0.4, 0.2, -0.7))?;
    let idx = fock::basis(4);
    let mut orth: f64 = 0.0;
    for &a in &idx {
        for &b in &idx {
            let ip = fock::fock_inner(
                frame.lambda(),
                9,
                |q| fock::basis_eval(&frame, a, q),
                |q| fock::basis_eval(&frame, b, q),
            );
            orth = orth.max((ip - if a == b { 1.0 } else { 0.0 }).norm());
        }
    }
    rep.push(Record::bound(3, "fock basis orthonormality", "⟨E_α, E_β⟩ = δ", orth, 1e-10 * s));

    let (p, q) = (0.9, 1.6);
    let (h1, h2) = (TProfile::Gaussian { q: 0.7 }, TProfile::Gaussian { q: 1.2 });
    let f = closed(sep(XProfile::Gaussian { p }, h1.clone()), g);
    let k = closed(sep(XProfile::Gaussian { p: q }, h2.clone()), g);
    let fk = closed(GaussConv { p, q, h1, h2 }, g);
    let mut conv: f64 = 0.0;
    for a in [along(0.5, [1.0, 0.0, 0.0]), along(1.4, [0.2, 0.9, -0.4])] {
        let rhs = gft::gft_matrix(&f, &a, l)? * gft::gft_matrix(&k, &a, l)?;
        conv = conv.max(rel_mat(&gft::gft_matrix(&fk, &a, l)?, &rhs));
    }
    rep.push(Record::bound(3, "convolution theorem", "(f∗g)^ = f̂ ĝ", conv, 1e-4 * s));

    let f = closed(sep(XProfile::PolyGaussian { p: 1.1, m: [1, 0, 2, 0] }, TProfile::Gaussian { q: 0.9 }), g);
    let a = along(0.8, [0.5, 0.5, -0.7]);
    let m = gft::gft_matrix(&f, &a, l)?;
    let mt = gft::gft_matrix(&f.involution_tilde()?, &a, l)?;
    rep.push(Record::bound(3, "involution gives adjoint", "(f̃)^ = f̂*", rel_mat(&mt, &m.adjoint()), 1e-6 * s));

    let f = closed(sep(XProfile::PolyGaussian { p: 1.0, m: [0, 1, 1, 0] }, TProfile::Gaussian { q: 1.0 }), g);
    let a = along(0.6, [0.1, -0.9, 0.3]);
    let rho = 1.7;
    let lhs = gft::gft_matrix(&f.func_dilate(rho)?, &a, l)?;
    let rhs = gft::gft_matrix(&f, &(a * rho), l)?;
    rep.push(Record::bound(3, "scaling covariance", "(f_ρ)^(a) = f̂(ρa)", rel_mat(&lhs, &rhs), 1e-3 * s));

    let f = closed(sep(XProfile::Gaussian { p: 1.0 }, TProfile::Gaussian { q: 1.0 }), g);
    let (hs, slice) = gft::hs_cross_check(&f, &along(0.9, [1.0, 1.0, 0.0]), l)?;
    rep.push(Record::new(
        3,
        "hilbert-schmidt cross-check",
        "(2|a|/π)²‖f̂‖²_HS = ‖f^a‖²",
        Mode::Rel,
        hs,
        slice,
        2e-2 * s,
    ));

    for deg in 0..=2 {
        let c = gft::sublaplacian_eigen_check(along(1.0, [0.3, 0.4, 0.5]), deg, l)?;
        rep.push(Record::bound(
            3,
            &format!("sublaplacian eigenvalue, degree {deg}"),
            "Δ acts as −8(l+1)|a|",
            c.rel_error,
            3e-2 * s,
        ));
    }
    Ok(())
}

fn radon_core(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let s = cfg.tol("radon");
    let g = cfg.grid()?;
    let tf = factory::default_lizorkin(&g);
    let f = tf.sample(g)?;
    let r = radon_fft(&f, PsiOptions::accurate())?.field;
    let v = r.values()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut idx = Vec::new();
    while idx.len() < 32 {
        let k = rng.gen_range(0..g.len());
        if g.point(k).x.norm() <= 1.5 {
            idx.push(k);
        }
    }
    let pts: Vec<GroupPoint> = idx.iter().map(|&k| g.point(k)).collect();
    let want = radon_direct(tf.form.as_ref(), &g, &pts);
    let got: Vec<Complex64> = idx.iter().map(|&k| v[k]).collect();
    rep.push(Record::bound(4, "fft route vs direct quadrature", "R = F₂⁻¹ Ψ F", rel_vec(&got, &want), 5e-2 * s));

    let fine = GridSpec { n_x: g.n_x.max(GridSpec::refined().n_x), ..g };
    let a = along(1.0, [1.0, 1.0, 0.0]);
    let lf = factory::default_lizorkin(&fine).sample(fine)?;
    let res = spectral_radon_check(&lf, &a, 8, PsiOptions::accurate())?;
    rep.push(Record::bound(4, "spectral identity at |a| = 1", "(Rf)^(a) = (π/|a|)² f̂(a) S", res, 5e-2 * s));

    let h = TProfile::lattice_shell(shell(), &g);
    let f0 = factory::lizorkin(XProfile::Gaussian { p: 1.0 }, h.clone())?.sample(g)?;
    let r0 = radon_fft(&f0, PsiOptions::accurate())?.field;
    let x0 = g.x_flat([g.n_x / 2; 4]);
    let got: Vec<Complex64> =
        (0..g.n_slices()).map(|ti| r0.values().map(|v| v[g.flat(x0, ti)])).collect::<Result<_>>()?;
    let want: Vec<Complex64> = (0..g.n_slices()).map(|ti| h.eval(&g.t_point(ti)) * PI * PI).collect();
    rep.push(Record::bound(4, "value on x = 0", "Rf(0,t) = π² h(t)", rel_vec(&got, &want), 1e-2 * s));
    Ok(())
}

/// Round trips of every inversion route on the Lizorkin set; returns the
/// worst error.
fn inversion_errors(
    g: GridSpec,
    rep: &mut Report,
    tol: f64,
    pairwise_tol: f64,
    norm_tol: f64,
    label: &str,
) -> Result<f64> {
    let opts = PsiOptions::accurate();
    let (mut worst, mut pair, mut norm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for tf in lizorkin_set(&g) {
        let f = tf.sample(g)?;
        let rf = radon_fft(&f, opts)?.field;
        let mut routes = vec![inv_radon_thm7(&rf, opts)?];
        for (mu, nu) in [(1.0, 1.0), (2.0, 0.0), (0.0, 2.0)] {
            routes.push(inv_radon_lrl(&rf, mu, nu, opts)?);
        }
        for r in &routes {
            worst = worst.max(r.rel_l2_error(&f)?);
        }
        for i in 0..routes.len() {
            for j in i + 1..routes.len() {
                pair = pair.max(routes[i].rel_l2_error(&routes[j])?);
            }
        }
        let ratio = multiplier_l(&rf, 1.0)?.field.l2norm()? / f.l2norm()?;
        norm = norm.max((ratio - 1.0).abs());
    }
    rep.push(Record::bound(5, &format!("inversion round trip, {label} grid"), "R⁻¹R = id", worst, tol));
    rep.push(Record::bound(
        5,
        &format!("inversion routes agree, {label} grid"),
        "all routes equal",
        pair,
        pairwise_tol,
    ));
    rep.push(Record::bound(5, &format!("norm identity, {label} grid"), "‖LRf‖ = ‖f‖", norm, norm_tol));
    Ok(worst)
}

fn radon_inversion(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let s = cfg.tol("radon");
    inversion_errors(cfg.grid()?, rep, 0.1 * s, 5e-2 * s, 5e-2 * s, "configured")?;
    inversion_errors(GridSpec { n_x: 16, ..cfg.grid()? }, rep, 5e-2 * s, 5e-2 * s, 5e-2 * s, "refined")?;
    Ok(())
}

fn wavelet_constants(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let s = cfg.tol("wavelet");
    let p = default_profile();
    let (c, _) = p.quadrature_constants()?;
    rep.push(Record::new(6, "C_eta by quadrature", "C_η(re^{−r}) = π", Mode::Abs, c, PI, 1e-6 * s));
    let (_, m4) = p.closed_form().expect("power-exp has a closed form");
    let w8 = wavelet::build_phi_eta(p, 8)?;
    rep.push(Record::new(6, "wavelet norm", "‖φ_η‖² = m4/45", Mode::Rel, w8.norm_sq_quadrature(), m4 / 45.0, 2e-2 * s));
    let spread = w8.per_degree_admissibility.iter().map(|v| (v - PI).abs()).fold(0.0, f64::max);
    rep.push(Record::bound(6, "per-degree admissibility", "every degree gives C_η", spread, 1e-6 * s));
    Ok(())
}

/// Criteria 7 and 8; returns κ̂ per isometry-set function.
fn wavelet_isometry(cfg: &RunConfig, phi: &Wavelet, rep: &mut Report) -> Result<Vec<f64>> {
    let s = cfg.tol("wavelet");
    let g = cfg.grid()?;
    let rho = cfg.rho_grid()?;
    let (mut kappas, mut ratios, mut rec) = (Vec::new(), Vec::new(), 0.0f64);
    for (i, tf) in isometry_set(&g).iter().enumerate() {
        let f = tf.sample(g)?;
        let k = wavelet::calibrate_kappa(phi, &f, &rho)?;
        rep.push(Record::new(7, &format!("kappa, function {i}"), "κ = 1/(4π)", Mode::Rel, k, 0.25 / PI, 5e-2 * s));
        let c = wavelet::coefficients(&f, phi, &rho)?;
        ratios.push(c.energy() / f.l2norm()?.powi(2));
        rec = rec.max(wavelet::reconstruct(&c, phi, k)?.rel_l2_error(&f)?);
        kappas.push(k);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    rep.push(Record::bound(7, "energy ratio spread", "‖Wf‖² / ‖f‖² constant", hi / lo - 1.0, 3e-2 * s));
    rep.push(Record::bound(8, "reconstruction round trip", "f = (κC_η)⁻¹ ∫ W U φ", rec, 0.1 * s));

    // degree 2 on the innermost shell, where the lattice resolves degrees ≤ 4
    let r0 = innermost_radius(&g);
    let f = restrict_shell(&phi.single_degree(2)?.lattice_field(g)?, 0.0, 1.15 * r0)?;
    let k = wavelet::calibrate_kappa(phi, &f, &rho)?;
    let back = wavelet::reconstruct(&wavelet::coefficients(&f, phi, &rho)?, phi, k)?;
    let m = fourier_central(&back, Direction::Forward)?;
    let mut e = vec![0.0; phi.l_max + 1];
    for ti in active_slices(&m)? {
        let a = g.a_point(ti);
        if a.norm() == 0.0 {
            continue;
        }
        let mat = gft::gft_slices(&g, &[&m.slice(ti)?], &a, phi.l_max)?.remove(0);
        for (j, l) in fock::degrees(phi.l_max).into_iter().enumerate() {
            e[l] += mat.column(j).norm_squared();
        }
    }
    let total: f64 = e.iter().sum();
    rep.push(Record::bound(8, "degree leakage", "reconstruction keeps P_l", (total - e[2]) / total, 2e-2 * s));
    Ok(kappas)
}

fn wavelet_radon(cfg: &RunConfig, phi: &Wavelet, kappas: &[f64], rep: &mut Report) -> Result<()> {
    let s = cfg.tol("wavelet");
    let g = cfg.grid()?;
    let psi = wavelet::lrl_wavelet(phi)?;
    let small = wavelet::RhoGrid { nodes: vec![0.5, 1.0, 2.0], weights: vec![1.0; 3] };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x3a7);
    let (mut inter, mut rt, mut vs): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (tf, k) in lizorkin_set(&g).iter().zip(kappas) {
        let f = tf.sample(g)?;
        let rf = radon_fft(&f, PsiOptions::accurate())?.field;
        let a = wavelet::coefficients(&rf, &psi, &small)?;
        let b = wavelet::coefficients(&f, phi, &small)?;
        let fa: Vec<Field> = (0..3).map(|i| a.field(i)).collect::<Result<_>>()?;
        let fb: Vec<Field> = (0..3).map(|i| b.field(i)).collect::<Result<_>>()?;
        let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
        while lhs.len() < 16 {
            let i = rng.gen_range(0..g.len());
            if g.point(i).x.norm() > 1.5 {
                continue;
            }
            let j = rng.gen_range(0..3);
            lhs.push(fa[j].values()?[i]);
            rhs.push(fb[j].values()?[i] * small.nodes[j].powi(2));
        }
        inter = inter.max(rel_vec(&lhs, &rhs));
        let inv = wavelet::radon_inv_wavelet(&rf, phi, *k, &cfg.rho_grid()?)?;
        rt = rt.max(inv.rel_l2_error(&f)?);
        vs = vs.max(inv.rel_l2_error(&inv_radon_lrl(&rf, 1.0, 1.0, PsiOptions::accurate())?)?);
    }
    rep.push(Record::bound(9, "intertwining at 16 points", "W_{LRLφ}Rf = ρ² W_φ f", inter, 5e-2 * s));
    rep.push(Record::bound(9, "wavelet radon inversion", "R⁻¹ through wavelets", rt, 0.12 * s));
    rep.push(Record::bound(9, "wavelet vs LRL route", "two inversions agree", vs, 0.1 * s));
    Ok(())
}

fn determinism(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let once = || -> Result<String> {
        let mut r = Report::new("determinism probe", cfg);
        algebra(cfg, &mut r);
        radon_core(cfg, &mut r)?;
        r.finish();
        r.numeric_json()
    };
    let (a, b) = (once()?, once()?);
    let differing = a.bytes().zip(b.bytes()).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len());
    rep.push(Record::bound(10, "repeat run differs in bytes", "fixed seed ⇒ identical output", differing as f64, 0.0));
    Ok(())
}
