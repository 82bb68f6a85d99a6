//! The quaternion Heisenberg group and its affine extension by dilations and
//! Sp(1)×Sp(1) rotations.

use crate::error::{CoreError, Result};
use crate::math::sqrt;
use crate::quat::{ImQuaternion, Quaternion, UnitQuaternion};

/// (x, t) ∈ ℚ × Im ℚ.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GroupPoint {
    pub x: Quaternion,
    pub t: ImQuaternion,
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint { x: Quaternion::ZERO, t: ImQuaternion::ZERO };

    pub const fn new(x: Quaternion, t: ImQuaternion) -> Self {
        GroupPoint { x, t }
    }

    pub fn from_coords(c: [f64; 7]) -> Self {
        GroupPoint { x: Quaternion::new(c[0], c[1], c[2], c[3]), t: ImQuaternion::new(c[4], c[5], c[6]) }
    }

    pub fn coords(self) -> [f64; 7] {
        let [x0, x1, x2, x3] = self.x.to_array();
        let [t1, t2, t3] = self.t.to_array();
        [x0, x1, x2, x3, t1, t2, t3]
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.t.is_finite()
    }
}

/// (x, t, ρ, u, v) with ρ > 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffinePoint {
    pub x: Quaternion,
    pub t: ImQuaternion,
    rho: f64,
    pub u: UnitQuaternion,
    pub v: UnitQuaternion,
}

impl AffinePoint {
    pub const IDENTITY: AffinePoint = AffinePoint {
        x: Quaternion::ZERO,
        t: ImQuaternion::ZERO,
        rho: 1.0,
        u: UnitQuaternion::IDENTITY,
        v: UnitQuaternion::IDENTITY,
    };

    pub fn new(x: Quaternion, t: ImQuaternion, rho: f64, u: UnitQuaternion, v: UnitQuaternion) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(CoreError::NonPositiveScale(rho));
        }
        Ok(AffinePoint { x, t, rho, u, v })
    }

    /// Pure translation by a group element.
    pub fn translation(p: GroupPoint) -> Self {
        AffinePoint { x: p.x, t: p.t, ..AffinePoint::IDENTITY }
    }

    /// Pure dilation (0, 0, ρ, 1, 1).
    pub fn scaling(rho: f64) -> Result<Self> {
        AffinePoint::new(Quaternion::ZERO, ImQuaternion::ZERO, rho, UnitQuaternion::IDENTITY, UnitQuaternion::IDENTITY)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn translation_part(&self) -> GroupPoint {
        GroupPoint::new(self.x, self.t)
    }
}

/// Im(x̄′ x) as a pure-imaginary quaternion.
#[inline]
fn twist(xp: Quaternion, x: Quaternion) -> ImQuaternion {
    (xp.conj() * x).im()
}

/// (x, t)(x′, t′) = (x + x′, t + t′ − 2 Im(x̄′x)).
pub fn gmul(p: GroupPoint, q: GroupPoint) -> GroupPoint {
    GroupPoint { x: p.x + q.x, t: p.t + q.t - twist(q.x, p.x) * 2.0 }
}

pub fn ginv(p: GroupPoint) -> GroupPoint {
    GroupPoint { x: -p.x, t: -p.t }
}

pub fn dilate(rho: f64, p: GroupPoint) -> Result<GroupPoint> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(CoreError::NonPositiveScale(rho));
    }
    Ok(GroupPoint { x: p.x * sqrt(rho), t: p.t * rho })
}

/// (x, t) ↦ (u x v̄, v t v̄).
pub fn rotate(u: UnitQuaternion, v: UnitQuaternion, p: GroupPoint) -> GroupPoint {
    GroupPoint { x: u.quat() * p.x * v.quat().conj(), t: v.rotate_im(p.t) }
}

pub fn pmul(g1: &AffinePoint, g2: &AffinePoint) -> AffinePoint {
    let moved = paction(g1, GroupPoint::new(g2.x, g2.t));
    AffinePoint { x: moved.x, t: moved.t, rho: g1.rho * g2.rho, u: g1.u * g2.u, v: g1.v * g2.v }
}

/// Inverse in the affine group.
pub fn pinv(g: &AffinePoint) -> AffinePoint {
    let (uc, vc) = (g.u.conj(), g.v.conj());
    let s = 1.0 / sqrt(g.rho);
    AffinePoint {
        x: -(uc.quat() * g.x * g.v.quat()) * s,
        t: -vc.rotate_im(g.t) * (s * s),
        rho: 1.0 / g.rho,
        u: uc,
        v: vc,
    }
}

/// g·(x′, t′) = (x + √ρ u x′ v̄, t + ρ v t′ v̄ − 2√ρ Im(v x̄′ ū x)).
pub fn paction(g: &AffinePoint, p: GroupPoint) -> GroupPoint {
    let sr = sqrt(g.rho);
    let (u, v) = (g.u.quat(), g.v.quat());
    let x = g.x + u * p.x * v.conj() * sr;
    let tw = (v * p.x.conj() * u.conj() * g.x).im();
    let t = g.t + g.v.rotate_im(p.t) * g.rho - tw * (2.0 * sr);
    GroupPoint { x, t }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Density of the left (ρ⁻⁶) or right (ρ⁻¹) Haar measure with respect to
/// dx dt dρ du dv.
pub fn haar_density(g: &AffinePoint, side: Side) -> f64 {
    match side {
        Side::Left => crate::math::powi(g.rho, -6),
        Side::Right => 1.0 / g.rho,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(x: [f64; 4], t: [f64; 3]) -> GroupPoint {
        GroupPoint::new(Quaternion::from_array(x), ImQuaternion::from_array(t))
    }

    #[test]
    fn group_law_examples() {
        let p = gp([1.0, 0.0, 0.0, 0.0], [0.0; 3]);
        let q = gp([0.0, 1.0, 0.0, 0.0], [0.0; 3]);
        assert_eq!(gmul(p, q), gp([1.0, 1.0, 0.0, 0.0], [2.0, 0.0, 0.0]));
        assert_eq!(gmul(GroupPoint::IDENTITY, q), q);
        let r = gp([1.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
        assert_eq!(ginv(r), gp([-1.0, -1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]));
        assert_eq!(gmul(r, ginv(r)), GroupPoint::IDENTITY);
    }

    #[test]
    fn dilate_examples() {
        let p = gp([1.0, 2.0, -1.0, 0.5], [0.3, 0.1, -2.0]);
        assert_eq!(dilate(1.0, p).unwrap(), p);
        assert_eq!(dilate(4.0, p).unwrap(), gp([2.0, 4.0, -2.0, 1.0], [1.2, 0.4, -8.0]));
        assert_eq!(dilate(0.0, p), Err(CoreError::NonPositiveScale(0.0)));
        assert!(dilate(-1.0, p).is_err());
    }

    #[test]
    fn haar_densities() {
        let g = AffinePoint::scaling(2.0).unwrap();
        assert_eq!(haar_density(&g, Side::Left), 1.0 / 64.0);
        assert_eq!(haar_density(&g, Side::Right), 0.5);
        assert_eq!(haar_density(&AffinePoint::IDENTITY, Side::Left), 1.0);
        assert_eq!(haar_density(&AffinePoint::IDENTITY, Side::Right), 1.0);
    }

    #[test]
    fn affine_examples() {
        let a = AffinePoint::scaling(2.0).unwrap();
        let b = AffinePoint::scaling(3.0).unwrap();
        let c = pmul(&a, &b);
        assert_eq!(c.rho(), 6.0);
        assert_eq!(c.translation_part(), GroupPoint::IDENTITY);
        let p = gp([0.5, -1.0, 0.2, 0.3], [0.4, 0.0, 1.0]);
        let tr = AffinePoint::translation(p);
        assert_eq!(paction(&tr, GroupPoint::IDENTITY), p);
        assert_eq!(paction(&AffinePoint::IDENTITY, p), p);
    }
}
