//! Closed-form Fock matrix coefficients against brute-force quadrature of
//! the Fock inner product.

use qheis_core::fock::{
    basis, basis_eval, block, dim, fock_inner, intertwiner_gamma, matcoef, projection_character, AdaptedFrame,
    FockIndex,
};
use qheis_core::quat::sp1_haar_nodes;
use qheis_core::{Complex64, ImQuaternion, Quaternion, UnitQuaternion};

/// π_a(x,t)F(q) = F(q + x) e^{i⟨a,t⟩ − |a|(|x|² + 2⟨q,x⟩ − 2i⟨qã,x⟩)}.
fn pi_apply(frame: &AdaptedFrame, alpha: FockIndex, x: Quaternion, t: ImQuaternion, q: &Quaternion) -> Complex64 {
    let a = frame.freq();
    let na = a.norm();
    let at = a.to_quat() * (1.0 / na);
    let expo = Complex64::new(-na * (x.norm_sqr() + 2.0 * q.dot(x)), a.dot(t) + 2.0 * na * (*q * at).dot(x));
    basis_eval(frame, alpha, &(*q + x)) * expo.exp()
}

#[test]
fn basis_is_orthonormal() {
    let frame = AdaptedFrame::new(ImQuaternion::new(0.4, 0.2, -0.7)).unwrap();
    let idx = basis(4);
    for &a in &idx {
        for &b in &idx {
            let ip = fock_inner(frame.lambda(), 9, |q| basis_eval(&frame, a, q), |q| basis_eval(&frame, b, q));
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((ip - want).norm() < 1e-10, "{a:?} {b:?}: {ip}");
        }
    }
}

#[test]
fn matcoef_matches_quadrature() {
    let a = ImQuaternion::new(0.3, -0.6, 0.2);
    let frame = AdaptedFrame::new(a).unwrap();
    let x = Quaternion::new(0.25, -0.15, 0.3, 0.1);
    let t = ImQuaternion::new(0.5, 0.2, -1.0);
    let pairs = [
        (FockIndex::new(0, 0), FockIndex::new(0, 0)),
        (FockIndex::new(1, 0), FockIndex::new(0, 1)),
        (FockIndex::new(2, 1), FockIndex::new(1, 1)),
        (FockIndex::new(0, 2), FockIndex::new(3, 0)),
        (FockIndex::new(1, 2), FockIndex::new(1, 2)),
    ];
    for (al, be) in pairs {
        let oracle = fock_inner(frame.lambda(), 20, |q| pi_apply(&frame, al, x, t, q), |q| basis_eval(&frame, be, q));
        let fast = matcoef(&a, &x, &t, al, be).unwrap();
        assert!((oracle - fast).norm() < 1e-9, "{al:?}->{be:?}: {oracle} vs {fast}");
    }
}

#[test]
fn ground_state_is_gaussian_by_quadrature() {
    let a = ImQuaternion::new(0.0, 0.9, 0.0);
    let frame = AdaptedFrame::new(a).unwrap();
    let x = Quaternion::new(-0.3, 0.4, 0.2, 0.5);
    let e0 = FockIndex::new(0, 0);
    let oracle = fock_inner(
        frame.lambda(),
        20,
        |q| pi_apply(&frame, e0, x, ImQuaternion::ZERO, q),
        |q| basis_eval(&frame, e0, q),
    );
    assert!((oracle - (-a.norm() * x.norm_sqr()).exp()).norm() < 1e-10);
}

#[test]
fn characters_are_rotation_invariant() {
    let a = ImQuaternion::new(0.5, 0.1, -0.3);
    let x = Quaternion::new(0.3, 0.6, -0.2, 0.4);
    let nodes = sp1_haar_nodes(20, 5);
    for l in 0..=8 {
        let base = projection_character(&a, &x, &ImQuaternion::ZERO, l).unwrap();
        for w in nodes.windows(2) {
            let (u, v) = (w[0].0, w[1].0);
            let b = v.rotate_im(a);
            let y = u.quat() * x * v.quat().conj();
            let c = projection_character(&b, &y, &ImQuaternion::ZERO, l).unwrap();
            assert!((c - base).norm() <= 1e-10);
        }
    }
}

#[test]
fn intertwiner_is_unitary() {
    let nodes = sp1_haar_nodes(2, 17);
    let (u, v) = (nodes[0].0, nodes[1].0);
    let a = ImQuaternion::new(0.7, -0.2, 0.4);
    let l_max = 6;
    let (_, g) = intertwiner_gamma(u, v, &a, l_max).unwrap();
    let d = dim(l_max);
    for i in 0..d {
        for j in 0..d {
            let s: Complex64 = (0..d).map(|k| g[k * d + i].conj() * g[k * d + j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((s - want).norm() < 1e-8, "({i},{j}) {s}");
        }
    }
    // off-degree entries vanish by construction; diagonal blocks carry it all
    for l in 0..=l_max {
        let mass: f64 =
            block(l).flat_map(|i| block(l).map(move |j| (i, j))).map(|(i, j)| g[i * d + j].norm_sqr()).sum();
        assert!((mass - (l + 1) as f64).abs() < 1e-8);
    }
}

#[test]
fn intertwiner_of_identity_rotation() {
    let id = UnitQuaternion::IDENTITY;
    let (_, g) = intertwiner_gamma(id, id, &ImQuaternion::new(0.0, 0.0, 1.0), 4).unwrap();
    let d = dim(4);
    for i in 0..d {
        assert!((g[i * d + i] - 1.0).norm() < 1e-10);
    }
}
