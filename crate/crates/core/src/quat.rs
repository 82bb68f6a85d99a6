//! Quaternions, pure-imaginary quaternions and the unit group Sp(1).

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{CoreError, Result};
use crate::math::sqrt;

/// q = q0 + q1 i + q2 j + q3 k.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

/// A pure-imaginary quaternion t1 i + t2 j + t3 k, identified with ℝ³.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ImQuaternion {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Quaternion { q0, q1, q2, q3 }
    }

    pub const fn real(s: f64) -> Self {
        Quaternion::new(s, 0.0, 0.0, 0.0)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn re(self) -> f64 {
        self.q0
    }

    pub fn im(self) -> ImQuaternion {
        ImQuaternion::new(self.q1, self.q2, self.q3)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    pub fn norm(self) -> f64 {
        sqrt(self.norm_sqr())
    }

    /// Euclidean inner product ⟨q,h⟩ = Re(q̄h).
    pub fn dot(self, h: Quaternion) -> f64 {
        self.q0 * h.q0 + self.q1 * h.q1 + self.q2 * h.q2 + self.q3 * h.q3
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    /// q⁻¹ = q̄/|q|².
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(CoreError::ZeroQuaternion);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn is_finite(self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite() && self.q3.is_finite()
    }
}

/// Hamilton product.
pub fn qmul(q: Quaternion, h: Quaternion) -> Quaternion {
    q * h
}

pub fn qconj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn qinv(q: Quaternion) -> Result<Quaternion> {
    q.inv()
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, h: Quaternion) -> Quaternion {
        let q = self;
        Quaternion::new(
            q.q0 * h.q0 - q.q1 * h.q1 - q.q2 * h.q2 - q.q3 * h.q3,
            q.q0 * h.q1 + q.q1 * h.q0 + q.q2 * h.q3 - q.q3 * h.q2,
            q.q0 * h.q2 - q.q1 * h.q3 + q.q2 * h.q0 + q.q3 * h.q1,
            q.q0 * h.q3 + q.q1 * h.q2 - q.q2 * h.q1 + q.q3 * h.q0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, h: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 + h.q0, self.q1 + h.q1, self.q2 + h.q2, self.q3 + h.q3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, h: Quaternion) {
        *self = *self + h;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, h: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 - h.q0, self.q1 - h.q1, self.q2 - h.q2, self.q3 - h.q3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl ImQuaternion {
    pub const ZERO: ImQuaternion = ImQuaternion::new(0.0, 0.0, 0.0);

    pub const fn new(t1: f64, t2: f64, t3: f64) -> Self {
        ImQuaternion { t1, t2, t3 }
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        ImQuaternion::new(c[0], c[1], c[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.t1, self.t2, self.t3]
    }

    pub fn to_quat(self) -> Quaternion {
        Quaternion::new(0.0, self.t1, self.t2, self.t3)
    }

    pub fn dot(self, o: ImQuaternion) -> f64 {
        self.t1 * o.t1 + self.t2 * o.t2 + self.t3 * o.t3
    }

    pub fn cross(self, o: ImQuaternion) -> ImQuaternion {
        ImQuaternion::new(
            self.t2 * o.t3 - self.t3 * o.t2,
            self.t3 * o.t1 - self.t1 * o.t3,
            self.t1 * o.t2 - self.t2 * o.t1,
        )
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        sqrt(self.norm_sqr())
    }

    pub fn scale(self, s: f64) -> Self {
        ImQuaternion::new(self.t1 * s, self.t2 * s, self.t3 * s)
    }

    pub fn is_finite(self) -> bool {
        self.t1.is_finite() && self.t2.is_finite() && self.t3.is_finite()
    }
}

impl From<ImQuaternion> for Quaternion {
    fn from(t: ImQuaternion) -> Quaternion {
        t.to_quat()
    }
}

impl Add for ImQuaternion {
    type Output = ImQuaternion;
    fn add(self, o: ImQuaternion) -> ImQuaternion {
        ImQuaternion::new(self.t1 + o.t1, self.t2 + o.t2, self.t3 + o.t3)
    }
}

impl Sub for ImQuaternion {
    type Output = ImQuaternion;
    fn sub(self, o: ImQuaternion) -> ImQuaternion {
        ImQuaternion::new(self.t1 - o.t1, self.t2 - o.t2, self.t3 - o.t3)
    }
}

impl Neg for ImQuaternion {
    type Output = ImQuaternion;
    fn neg(self) -> ImQuaternion {
        self.scale(-1.0)
    }
}

impl Mul<f64> for ImQuaternion {
    type Output = ImQuaternion;
    fn mul(self, s: f64) -> ImQuaternion {
        self.scale(s)
    }
}

/// Unit-norm tolerance accepted by [`UnitQuaternion::new`].
pub const UNIT_TOL: f64 = 1e-12;

/// Products longer than this are renormalised onto S³.
pub const RENORM_CHAIN: u32 = 32;

/// An element of Sp(1) = {u ∈ ℚ : |u| = 1}.
#[derive(Clone, Copy, Debug)]
pub struct UnitQuaternion {
    q: Quaternion,
    chain: u32,
}

impl PartialEq for UnitQuaternion {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion { q: Quaternion::ONE, chain: 0 };

    /// Accepts `q` only if `||q| − 1| ≤ 1e-12`.
    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(CoreError::NotUnit(n));
        }
        Ok(UnitQuaternion { q, chain: 0 })
    }

    pub fn normalize(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(CoreError::ZeroQuaternion);
        }
        Ok(UnitQuaternion { q: q.scale(1.0 / n), chain: 0 })
    }

    pub fn quat(self) -> Quaternion {
        self.q
    }

    pub fn conj(self) -> Self {
        UnitQuaternion { q: self.q.conj(), chain: self.chain }
    }

    /// Length of the multiplication chain since the last renormalisation.
    pub fn chain_len(self) -> u32 {
        self.chain
    }

    /// Rotation of Im ℚ: t ↦ u t ū.
    pub fn rotate_im(self, t: ImQuaternion) -> ImQuaternion {
        (self.q * t.to_quat() * self.q.conj()).im()
    }

    /// Rotation of Im ℚ by the inverse: t ↦ ū t u.
    pub fn unrotate_im(self, t: ImQuaternion) -> ImQuaternion {
        (self.q.conj() * t.to_quat() * self.q).im()
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        let q = self.q * o.q;
        let chain = self.chain.max(o.chain) + 1;
        if chain > RENORM_CHAIN {
            UnitQuaternion { q: q.scale(1.0 / q.norm()), chain: 0 }
        } else {
            UnitQuaternion { q, chain }
        }
    }
}

impl Mul<Quaternion> for UnitQuaternion {
    type Output = Quaternion;
    fn mul(self, h: Quaternion) -> Quaternion {
        self.q * h
    }
}

/// A_{u,v}(q) = u q v̄; B_v is `act_pair(v, v, r)` on pure-imaginary r.
pub fn act_pair(u: UnitQuaternion, v: UnitQuaternion, q: Quaternion) -> Quaternion {
    u.q * q * v.q.conj()
}

/// A uniform point of S³ by Marsaglia's two-disc method.
pub fn random_unit<R: RngCore>(rng: &mut R) -> UnitQuaternion {
    let disc = |rng: &mut R| loop {
        let a = 2.0 * unit_f64(rng) - 1.0;
        let b = 2.0 * unit_f64(rng) - 1.0;
        let s = a * a + b * b;
        if s < 1.0 && s > 0.0 {
            return (a, b, s);
        }
    };
    let (x1, x2, s1) = disc(rng);
    let (x3, x4, s2) = disc(rng);
    let f = sqrt((1.0 - s1) / s2);
    let q = Quaternion::new(x1, x2, x3 * f, x4 * f);
    // |q| = 1 up to rounding; normalise to keep the 1e-12 contract
    UnitQuaternion { q: q.scale(1.0 / q.norm()), chain: 0 }
}

/// Uniform double in [0, 1) from the top 53 bits.
pub fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Monte-Carlo nodes for the normalised Haar measure of Sp(1): `n` uniform
/// points on S³, each of weight 1/n. Deterministic for a fixed seed.
pub fn sp1_haar_nodes(n: usize, seed: u64) -> Vec<(UnitQuaternion, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 1.0 / n.max(1) as f64;
    (0..n.max(1)).map(|_| (random_unit(&mut rng), w)).collect()
}

/// Weighted mean of `f` over Haar nodes together with its Monte-Carlo
/// standard error.
pub fn sp1_mean<F: Fn(UnitQuaternion) -> f64>(nodes: &[(UnitQuaternion, f64)], f: F) -> (f64, f64) {
    let n = nodes.len() as f64;
    let mut mean = 0.0;
    let mut sq = 0.0;
    for &(u, w) in nodes {
        let v = f(u);
        mean += w * v;
        sq += w * v * v;
    }
    let var = (sq - mean * mean).max(0.0);
    let se = if n > 1.0 { sqrt(var / (n - 1.0)) } else { 0.0 };
    (mean, se)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn basis_products() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(i * i, Quaternion::real(-1.0));
        assert_eq!(j * j, Quaternion::real(-1.0));
        assert_eq!(k * k, Quaternion::real(-1.0));
        assert_eq!(i * j * k, Quaternion::real(-1.0));
    }

    #[test]
    fn hamilton_expansion() {
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let h = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(q * h, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_eq!(q * Quaternion::ONE, q);
    }

    #[test]
    fn re_im_formula() {
        // Re(qh) = q0h0 − q·h, Im(qh) = q0 h + h0 q + q × h
        let q = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        let h = Quaternion::new(-0.5, 0.4, 1.1, -0.9);
        let p = q * h;
        let (qi, hi) = (q.im(), h.im());
        assert!((p.re() - (q.q0 * h.q0 - qi.dot(hi))).abs() < 1e-14);
        let im = hi * q.q0 + qi * h.q0 + qi.cross(hi);
        assert!((p.im() - im).norm() < 1e-14);
    }

    #[test]
    fn conj_and_inverse() {
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(q.conj(), Quaternion::new(1.0, -1.0, 0.0, 0.0));
        assert_eq!(q.inv().unwrap(), Quaternion::new(0.5, -0.5, 0.0, 0.0));
        assert!(close(q * q.inv().unwrap(), Quaternion::ONE, 1e-15));
        assert_eq!(Quaternion::ZERO.inv(), Err(CoreError::ZeroQuaternion));
    }

    #[test]
    fn unit_construction() {
        assert!(UnitQuaternion::new(Quaternion::new(1.0, 1.0, 0.0, 0.0)).is_err());
        let u = UnitQuaternion::normalize(Quaternion::new(1.0, 1.0, 0.0, 0.0)).unwrap();
        assert!((u.quat().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn long_chains_are_renormalised() {
        let u = UnitQuaternion::normalize(Quaternion::new(0.3, 0.5, -0.2, 0.7)).unwrap();
        let mut p = UnitQuaternion::IDENTITY;
        for _ in 0..1000 {
            p = p * u;
            assert!(p.chain_len() <= RENORM_CHAIN);
        }
        assert!((p.quat().norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn haar_nodes_basics() {
        let one = sp1_haar_nodes(1, 7);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].1, 1.0);
        assert_eq!(sp1_haar_nodes(50, 3), sp1_haar_nodes(50, 3));
        let s: f64 = sp1_haar_nodes(100, 3).iter().map(|n| n.1).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_second_moment() {
        // E[u0²] = 1/4 by symmetry of the four coordinates on S³
        let nodes = sp1_haar_nodes(100_000, 11);
        let (m, se) = sp1_mean(&nodes, |u| u.quat().q0 * u.quat().q0);
        assert!((m - 0.25).abs() <= 3.0 * se, "mean {m} se {se}");
    }
}
