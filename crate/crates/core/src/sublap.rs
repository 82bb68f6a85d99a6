//! The subLaplacian Δ = X₀² + X₁² + X₂² + X₃² built from the left-invariant
//! fields X_j f(p) = d/ds f(p·(s e_j, 0)) at s = 0.

use num_complex::Complex64;

use crate::form::Form;
use crate::group::{gmul, GroupPoint};
use crate::quat::Quaternion;

/// Default step for the second differences along group flows.
pub const DEFAULT_STEP: f64 = 1e-4;

const AXES: [Quaternion; 4] = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];

/// Pointwise Δ f by central second differences along the four flows
/// s ↦ p·(s e_j, 0).
pub struct SubLaplacian<F> {
    inner: F,
    step: f64,
}

impl<F: Form> SubLaplacian<F> {
    pub fn new(inner: F) -> Self {
        SubLaplacian { inner, step: DEFAULT_STEP }
    }

    pub fn with_step(inner: F, step: f64) -> Self {
        SubLaplacian { inner, step }
    }
}

pub fn sublaplacian<F: Form>(f: F) -> SubLaplacian<F> {
    SubLaplacian::new(f)
}

impl<F: Form> Form for SubLaplacian<F> {
    fn eval(&self, p: &GroupPoint) -> Complex64 {
        let h = self.step;
        let f0 = self.inner.eval(p) * 2.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for e in AXES {
            let fwd = gmul(*p, GroupPoint::new(e * h, Default::default()));
            let bwd = gmul(*p, GroupPoint::new(e * -h, Default::default()));
            acc += self.inner.eval(&fwd) + self.inner.eval(&bwd) - f0;
        }
        acc / (h * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::FnForm;
    use crate::math::exp;
    use crate::quat::ImQuaternion;

    #[test]
    fn t_independent_reduces_to_euclidean() {
        // Δ e^{-|x|²} = (4|x|² − 8) e^{-|x|²} in four dimensions
        let f = FnForm(|p: &GroupPoint| Complex64::new(exp(-p.x.norm_sqr()), 0.0));
        let lap = sublaplacian(f);
        let p = GroupPoint::from_coords([0.3, -0.4, 0.1, 0.7, 1.0, 2.0, -3.0]);
        let r2 = p.x.norm_sqr();
        let want = (4.0 * r2 - 8.0) * exp(-r2);
        assert!((lap.eval(&p).re - want).abs() < 1e-6);
    }

    #[test]
    fn central_character() {
        // Δ e^{i⟨a,t⟩} = −4|a|²|x|² e^{i⟨a,t⟩}
        let a = ImQuaternion::new(0.4, -0.2, 0.5);
        let f = FnForm(move |p: &GroupPoint| Complex64::from_polar(1.0, a.dot(p.t)));
        let lap = sublaplacian(f);
        let p = GroupPoint::from_coords([0.5, 0.2, -0.3, 0.1, 0.4, -0.8, 0.6]);
        let want = Complex64::from_polar(1.0, a.dot(p.t)) * (-4.0 * a.norm_sqr() * p.x.norm_sqr());
        assert!((lap.eval(&p) - want).norm() < 1e-6);
    }
}
