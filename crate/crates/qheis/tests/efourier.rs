use std::f64::consts::PI;

use qheis::core::ImQuaternion;
use qheis::efourier::{fourier_central, fourier_full, fourier_x, mixing_psi, multiplier_l, Direction, PsiOptions};
use qheis::factory::{self, gaussian};
use qheis::{Domain, Field, GridSpec};

fn gauss_field(g: GridSpec, p: f64, q: f64) -> Field {
    gaussian(p, q).unwrap().sample(g).unwrap()
}

#[test]
fn gaussian_transform_matches_closed_form() {
    let g = GridSpec::t_resolved();
    // widths matched to the spacing so aliasing and truncation balance
    let (p, q) = (0.59, 0.49);
    let f = gauss_field(g, p, q);
    let tf = gaussian(p, q).unwrap();
    let big = fourier_full(&f, Direction::Forward).unwrap();
    let v = big.values().unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for (k, z) in v.iter().enumerate() {
        let (yi, ai) = g.split(k);
        let want = tf.fourier(&g.y_point(yi), &g.a_point(ai)).unwrap();
        num += (z - want).norm_sqr();
        den += want.norm_sqr();
    }
    let rel = (num / den).sqrt();
    assert!(rel < 1e-3, "rel {rel}");
}

#[test]
fn round_trip_and_parseval() {
    let g = GridSpec::t_resolved();
    let f = factory::poly_gaussian(0.8, 0.7, [1, 0, 2, 0]).unwrap().sample(g).unwrap();
    let big = fourier_full(&f, Direction::Forward).unwrap();
    let back = fourier_full(&big, Direction::Inverse).unwrap();
    assert!(back.rel_l2_error(&f).unwrap() < 1e-12);
    let lhs = big.l2norm().unwrap().powi(2);
    let rhs = (2.0 * PI).powi(7) * f.l2norm().unwrap().powi(2);
    assert!((lhs - rhs).abs() < 1e-10 * rhs);

    let mixed = fourier_central(&f, Direction::Forward).unwrap();
    let via_x = fourier_x(&mixed, Direction::Forward).unwrap();
    assert!(via_x.rel_l2_error(&big).unwrap() < 1e-12);
}

#[test]
fn wrong_domain_is_rejected() {
    let g = GridSpec::t_resolved();
    let f = gauss_field(g, 1.0, 1.0);
    assert!(fourier_full(&f, Direction::Inverse).is_err());
    assert!(mixing_psi(&f, Direction::Forward, PsiOptions::default()).is_err());
}

#[test]
fn psi_matches_closed_form_on_lizorkin_function() {
    // ℱf(−2xa, a) for f = e^{−p|x|²} h(t): (π/p)² e^{−|x|²|a|²/p} ĥ(a)
    let g = GridSpec::default_grid();
    let p = 0.75;
    let tf = factory::default_lizorkin(&g);
    let f = tf.sample(g).unwrap();
    let big = fourier_full(&f, Direction::Forward).unwrap();
    for opts in [PsiOptions::accurate(), PsiOptions::default()] {
        let psi = mixing_psi(&big, Direction::Forward, opts).unwrap();
        assert_eq!(psi.domain(), Domain::Mixed);
        let (mut num, mut den) = (0.0, 0.0);
        for (k, z) in psi.values().unwrap().iter().enumerate() {
            let (xi, ai) = g.split(k);
            let a = g.a_point(ai);
            let x = g.x_point(xi);
            let h = tf.form.t.central(&a).unwrap();
            let want = h * ((PI / p).powi(2) * (-x.norm_sqr() * a.norm_sqr() / p).exp());
            num += (z - want).norm_sqr();
            den += want.norm_sqr();
        }
        let rel = (num / den).sqrt();
        let tol = if opts.oversample > 1 { 2e-2 } else { 0.1 };
        assert!(rel < tol, "{opts:?}: rel {rel}");
    }
}

#[test]
fn multiplier_scales_slices() {
    let g = GridSpec::default_grid();
    let f = factory::default_lizorkin(&g).sample(g).unwrap();
    let out = multiplier_l(&f, 1.0).unwrap();
    assert!(!out.zero_slice_flag);
    let mixed = fourier_central(&out.field, Direction::Forward).unwrap();
    let orig = fourier_central(&f, Direction::Forward).unwrap();
    let ns = g.n_slices();
    for (k, (a, b)) in mixed.values().unwrap().iter().zip(orig.values().unwrap()).enumerate() {
        let r = g.a_point(k % ns).norm();
        assert!((a - b * (r / PI).powi(2)).norm() < 1e-12);
    }
    let back = multiplier_l(&out.field, -1.0).unwrap();
    assert!(back.zero_slice_flag);
    assert!(back.field.rel_l2_error(&f).unwrap() < 1e-12);
}

#[test]
fn central_transform_of_plane_wave() {
    let g = GridSpec::default_grid();
    let a0 = g.a_point(g.t_flat([2, 2, 3]));
    let form = factory::Separable {
        x: factory::XProfile::Gaussian { p: 1.0 },
        t: factory::TProfile::Plane { a0 },
        scale: 1.0,
    };
    let f = qheis::field::sample(std::sync::Arc::new(form), g).unwrap();
    let m = fourier_central(&f, Direction::Forward).unwrap();
    let ns = g.n_slices();
    let x0 = g.flat(g.x_flat([6, 6, 6, 6]), 0);
    let v = m.values().unwrap();
    let peak = (0..ns).max_by(|&i, &j| v[x0 + i].norm().total_cmp(&v[x0 + j].norm())).unwrap();
    let a = g.a_point(peak);
    let neg = ImQuaternion::new(-a0.t1, -a0.t2, -a0.t3);
    assert!((a - neg).norm() < 1e-12, "{a:?} vs {neg:?}");
}
