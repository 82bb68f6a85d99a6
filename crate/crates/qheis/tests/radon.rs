use std::f64::consts::PI;

use qheis::core::{Complex64, GroupPoint, ImQuaternion, Quaternion};
use qheis::efourier::{multiplier_l, PsiOptions};
use qheis::factory::{self, Separable, Shell, TProfile, TestFunction, XProfile};
use qheis::radon::{
    inv_radon_lrl, inv_radon_thm7, lizorkin_gate, radon_direct, radon_fft, smoothing_gain, spectral_radon_check,
    spectral_radon_residual,
};
use qheis::{Domain, Error, Field, GridSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shell() -> Shell {
    Shell::new(0.6, 1.1).unwrap()
}

fn lizorkin_set(g: &GridSpec) -> Vec<TestFunction> {
    let h = TProfile::lattice_shell(shell(), g);
    vec![
        factory::default_lizorkin(g),
        factory::lizorkin(XProfile::PolyGaussian { p: 0.9, m: [1, 0, 1, 0] }, h).unwrap(),
    ]
}

fn unit_gaussian_x(t: TProfile) -> Separable {
    Separable { x: XProfile::Gaussian { p: 1.0 }, t, scale: 1.0 }
}

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn roll_t(f: &Field, shift: [usize; 3]) -> Field {
    let g = *f.grid();
    let v = f.values().unwrap();
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (k, z) in v.iter().enumerate() {
        let (xi, ti) = g.split(k);
        let m = g.t_multi(ti);
        let s = [0, 1, 2].map(|i| (m[i] + shift[i]) % g.n_t);
        out[g.flat(xi, g.t_flat(s))] = *z;
    }
    Field::from_values(g, out, f.domain()).unwrap()
}

#[test]
fn direct_at_origin_is_gaussian_mass_times_h() {
    let g = GridSpec::default_grid();
    let f = unit_gaussian_x(TProfile::lattice_shell(shell(), &g));
    let pts: Vec<GroupPoint> = [[0.0, 0.0, 0.0], [0.4, -1.0, 2.2], [3.0, 0.1, -0.7]]
        .iter()
        .map(|t| GroupPoint::new(Quaternion::ZERO, ImQuaternion::new(t[0], t[1], t[2])))
        .collect();
    let got = radon_direct(&f, &g, &pts);
    for (p, z) in pts.iter().zip(&got) {
        let want = f.t.eval(&p.t) * PI * PI;
        assert!((z - want).norm() <= 1e-3 * want.norm(), "{z} vs {want}");
    }
}

#[test]
fn direct_on_plane_wave_matches_gaussian_integral() {
    let g = GridSpec::default_grid();
    let a0 = ImQuaternion::new(0.5, -0.3, 0.4);
    let f = unit_gaussian_x(TProfile::Plane { a0 });
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pts: Vec<GroupPoint> = (0..8)
        .map(|_| {
            let x = Quaternion::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), 0.3);
            GroupPoint::new(x, ImQuaternion::new(rng.gen_range(-2.0..2.0), 0.5, -1.0))
        })
        .collect();
    for (p, z) in pts.iter().zip(radon_direct(&f, &g, &pts)) {
        let want = Complex64::from_polar(PI * PI * (-p.x.norm_sqr() * a0.norm_sqr()).exp(), a0.dot(p.t));
        assert!((z - want).norm() <= 1e-3 * want.norm(), "{p:?}: {z} vs {want}");
    }
}

#[test]
fn direct_vanishes_on_odd_functions() {
    let g = GridSpec::default_grid();
    let f = Separable {
        x: XProfile::PolyGaussian { p: 1.0, m: [1, 0, 0, 0] },
        t: TProfile::Gaussian { q: 0.5 },
        scale: 1.0,
    };
    let pts = [
        GroupPoint::new(Quaternion::new(0.3, -0.8, 1.1, 0.2), ImQuaternion::ZERO),
        GroupPoint::new(Quaternion::ZERO, ImQuaternion::new(0.7, 0.2, -1.3)),
    ];
    for z in radon_direct(&f, &g, &pts) {
        assert!(z.norm() <= 1e-14, "{z}");
    }
}

#[test]
fn fft_route_matches_direct_quadrature() {
    let g = GridSpec::default_grid();
    let tf = factory::default_lizorkin(&g);
    let r = radon_fft(&tf.sample(g).unwrap(), PsiOptions::accurate()).unwrap();
    let v = r.field.values().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
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
    let e = rel(&got, &want);
    assert!(e <= 5e-2, "rel {e}");
}

#[test]
fn fft_route_origin_slice_and_linearity() {
    let g = GridSpec::default_grid();
    let h = TProfile::lattice_shell(shell(), &g);
    let f = factory::lizorkin(XProfile::Gaussian { p: 1.0 }, h.clone()).unwrap().sample(g).unwrap();
    let r = radon_fft(&f, PsiOptions::accurate()).unwrap().field;
    let x0 = g.x_flat([g.n_x / 2; 4]);
    let got: Vec<Complex64> = (0..g.n_slices()).map(|ti| r.values().unwrap()[g.flat(x0, ti)]).collect();
    let want: Vec<Complex64> = (0..g.n_slices()).map(|ti| h.eval(&g.t_point(ti)) * PI * PI).collect();
    assert!(rel(&got, &want) <= 1e-2);

    let f2 = lizorkin_set(&g)[1].sample(g).unwrap();
    let (al, be) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
    let combo = radon_fft(&f.axpby(al, &f2, be).unwrap(), PsiOptions::default()).unwrap().field;
    let r1 = radon_fft(&f, PsiOptions::default()).unwrap().field;
    let r2 = radon_fft(&f2, PsiOptions::default()).unwrap().field;
    let sep = r1.axpby(al, &r2, be).unwrap();
    assert!(combo.rel_l2_error(&sep).unwrap() <= 1e-12);
}

fn round_trips(g: GridSpec, tol: f64) {
    let opts = PsiOptions::accurate();
    for tf in lizorkin_set(&g) {
        let f = tf.sample(g).unwrap();
        let rf = radon_fft(&f, opts).unwrap().field;
        let thm7 = inv_radon_thm7(&rf, opts).unwrap();
        let mut routes = vec![thm7];
        for (mu, nu) in [(1.0, 1.0), (2.0, 0.0), (0.0, 2.0)] {
            routes.push(inv_radon_lrl(&rf, mu, nu, opts).unwrap());
        }
        for r in &routes {
            let e = r.rel_l2_error(&f).unwrap();
            assert!(e <= tol, "round trip {e} > {tol}");
        }
        for i in 0..routes.len() {
            for j in i + 1..routes.len() {
                let e = routes[i].rel_l2_error(&routes[j]).unwrap();
                assert!(e <= 5e-2, "routes {i},{j} differ by {e}");
            }
        }
        let lr = multiplier_l(&rf, 1.0).unwrap().field;
        let ratio = lr.l2norm().unwrap() / f.l2norm().unwrap();
        assert!((ratio - 1.0).abs() <= 5e-2, "norm ratio {ratio}");
    }
}

#[test]
fn inversions_recover_lizorkin_functions() {
    round_trips(GridSpec::default_grid(), 0.1);
}

#[test]
fn inversions_recover_lizorkin_functions_on_refined_grid() {
    round_trips(GridSpec::refined(), 0.05);
}

#[test]
fn thm7_annihilates_zero_frequency_and_commutes_with_t_shifts() {
    let g = GridSpec::default_grid();
    let flat = Field::from_form(
        std::sync::Arc::new(Separable {
            x: XProfile::Gaussian { p: 1.0 },
            t: TProfile::Plane { a0: ImQuaternion::ZERO },
            scale: 1.0,
        }),
        g,
    )
    .ensure_sampled()
    .unwrap();
    let out = inv_radon_thm7(&flat, PsiOptions::default()).unwrap();
    assert_eq!(out.l2norm().unwrap(), 0.0);

    let rf = radon_fft(&factory::default_lizorkin(&g).sample(g).unwrap(), PsiOptions::default()).unwrap().field;
    let shift = [1, 3, 2];
    let a = inv_radon_thm7(&roll_t(&rf, shift), PsiOptions::default()).unwrap();
    let b = roll_t(&inv_radon_thm7(&rf, PsiOptions::default()).unwrap(), shift);
    assert!(a.rel_l2_error(&b).unwrap() <= 1e-10);
}

#[test]
fn bad_exponents_are_rejected() {
    let g = GridSpec::default_grid();
    let f = factory::default_lizorkin(&g).sample(g).unwrap();
    assert!(matches!(inv_radon_lrl(&f, 1.0, 0.5, PsiOptions::default()), Err(Error::BadExponents { .. })));
}

#[test]
fn spectral_identity_at_unit_frequency() {
    let a = ImQuaternion::new(1.0, 1.0, 0.0) * (1.0 / 2f64.sqrt());
    let mut prev = f64::INFINITY;
    for g in [GridSpec::default_grid(), GridSpec::refined()] {
        let f = factory::default_lizorkin(&g).sample(g).unwrap();
        let res = spectral_radon_check(&f, &a, 8, PsiOptions::accurate()).unwrap();
        assert!(res < prev, "residual {res} did not decrease from {prev}");
        prev = res;
    }
    assert!(prev <= 5e-2, "residual {prev}");

    let g = GridSpec::default_grid();
    let zero = Field::zeros(g, Domain::Spatial);
    assert_eq!(spectral_radon_residual(&zero, &zero, &a, 4).unwrap(), 0.0);
    assert!(spectral_radon_check(&zero, &ImQuaternion::ZERO, 4, PsiOptions::default()).is_err());
}

#[test]
fn radon_gains_energy_at_low_frequency() {
    let g = GridSpec::default_grid();
    let f = factory::default_lizorkin(&g).sample(g).unwrap();
    let rf = radon_fft(&f, PsiOptions::accurate()).unwrap().field;
    let s = smoothing_gain(&f, &rf).unwrap();
    assert!((s.measured / s.expected - 1.0).abs() <= 0.2, "{s:?}");
}

#[test]
fn gate_flags_non_lizorkin_input() {
    let g = GridSpec::default_grid();
    let gauss = factory::gaussian(1.0, 0.5).unwrap().sample(g).unwrap();
    assert!(lizorkin_gate(&gauss, 1e-6).unwrap().flagged);
    let liz = factory::default_lizorkin(&g).sample(g).unwrap();
    let gate = lizorkin_gate(&liz, 1e-6).unwrap();
    assert!(!gate.flagged, "{gate:?}");
}
