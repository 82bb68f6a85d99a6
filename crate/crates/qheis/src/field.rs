//! Functions on 𝒬 held as closed forms, sampled grids, or both.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use qheis_core::form::{Dilated, Involution, Rotated};
use qheis_core::{Complex64, Form, GroupPoint, UnitQuaternion};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::interp::{axis_weights, Interp};

/// Which variables the grid axes carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// (x, t)
    Spatial,
    /// (x, a): after the central transform.
    Mixed,
    /// (y, a): after the full transform.
    Frequency,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Spatial => "spatial",
            Domain::Mixed => "mixed",
            Domain::Frequency => "frequency",
        }
    }

    fn tag(self) -> u32 {
        match self {
            Domain::Spatial => 0,
            Domain::Mixed => 1,
            Domain::Frequency => 2,
        }
    }

    fn from_tag(t: u32) -> Result<Self> {
        Ok(match t {
            0 => Domain::Spatial,
            1 => Domain::Mixed,
            2 => Domain::Frequency,
            _ => return Err(Error::Format(format!("unknown domain tag {t}"))),
        })
    }
}

pub type SharedForm = Arc<dyn Form>;

pub struct Field {
    grid: GridSpec,
    values: Option<Vec<Complex64>>,
    form: Option<SharedForm>,
    domain: Domain,
    ood: AtomicU64,
}

impl Clone for Field {
    fn clone(&self) -> Self {
        Field {
            grid: self.grid,
            values: self.values.clone(),
            form: self.form.clone(),
            domain: self.domain,
            ood: AtomicU64::new(self.ood.load(Ordering::Relaxed)),
        }
    }
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("grid", &self.grid)
            .field("domain", &self.domain)
            .field("sampled", &self.values.is_some())
            .field("closed_form", &self.form.is_some())
            .finish()
    }
}

/// Evaluates `form` at every spatial node of `grid`.
pub fn sample(form: SharedForm, grid: GridSpec) -> Result<Field> {
    let values: Vec<Complex64> = (0..grid.len()).into_par_iter().map(|k| form.eval(&grid.point(k))).collect();
    if let Some(k) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFiniteSample(k));
    }
    Ok(Field { grid, values: Some(values), form: Some(form), domain: Domain::Spatial, ood: AtomicU64::new(0) })
}

impl Field {
    /// A closed-form field with no samples yet.
    pub fn from_form(form: SharedForm, grid: GridSpec) -> Self {
        Field { grid, values: None, form: Some(form), domain: Domain::Spatial, ood: AtomicU64::new(0) }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::BadParams(format!("expected {} values, got {}", grid.len(), values.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteSample(k));
        }
        Ok(Field { grid, values: Some(values), form: None, domain, ood: AtomicU64::new(0) })
    }

    pub fn zeros(grid: GridSpec, domain: Domain) -> Self {
        Field {
            grid,
            values: Some(vec![Complex64::new(0.0, 0.0); grid.len()]),
            form: None,
            domain,
            ood: AtomicU64::new(0),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn form(&self) -> Option<&SharedForm> {
        self.form.as_ref()
    }

    pub fn has_values(&self) -> bool {
        self.values.is_some()
    }

    pub fn values(&self) -> Result<&[Complex64]> {
        self.values.as_deref().ok_or(Error::MissingValues)
    }

    pub fn values_mut(&mut self) -> Result<&mut [Complex64]> {
        self.values.as_deref_mut().ok_or(Error::MissingValues)
    }

    pub fn into_values(self) -> Result<Vec<Complex64>> {
        self.values.ok_or(Error::MissingValues)
    }

    /// Samples the closed form if no values are held yet.
    pub fn ensure_sampled(self) -> Result<Field> {
        if self.values.is_some() {
            return Ok(self);
        }
        let form = self.form.ok_or(Error::MissingValues)?;
        sample(form, self.grid)
    }

    pub fn expect_domain(&self, d: Domain) -> Result<()> {
        if self.domain != d {
            return Err(Error::WrongDomain { expected: d.name(), found: self.domain.name() });
        }
        Ok(())
    }

    /// Number of interpolation queries that fell outside the grid hull.
    pub fn ood_count(&self) -> u64 {
        self.ood.load(Ordering::Relaxed)
    }

    pub fn add_ood(&self, n: u64) {
        self.ood.fetch_add(n, Ordering::Relaxed);
    }

    /// The 4-D x-slice at central index `ti`.
    pub fn slice(&self, ti: usize) -> Result<Vec<Complex64>> {
        let v = self.values()?;
        let ns = self.grid.n_slices();
        Ok((0..self.grid.slice_len()).map(|xi| v[xi * ns + ti]).collect())
    }

    pub fn set_slice(&mut self, ti: usize, data: &[Complex64]) -> Result<()> {
        let ns = self.grid.n_slices();
        let v = self.values_mut()?;
        for (xi, z) in data.iter().enumerate() {
            v[xi * ns + ti] = *z;
        }
        Ok(())
    }

    /// Squared L² norm of each x-slice with weight h_x⁴, indexed by slice.
    pub fn slice_energies(&self) -> Result<Vec<f64>> {
        let v = self.values()?;
        let ns = self.grid.n_slices();
        let mut e = vec![0.0; ns];
        for (k, z) in v.iter().enumerate() {
            e[k % ns] += z.norm_sqr();
        }
        let w = self.grid.x_cell();
        Ok(e.into_iter().map(|s| s * w).collect())
    }

    /// Axis origins and spacings for the 7 axes in this field's domain.
    fn axes(&self) -> ([f64; 7], [f64; 7]) {
        let g = &self.grid;
        let (x0, dx) = match self.domain {
            Domain::Frequency => (g.y_node(0), g.dy()),
            _ => (g.x_node(0), g.hx()),
        };
        let (t0, dt) = match self.domain {
            Domain::Spatial => (g.t_node(0), g.ht()),
            _ => (g.a_node(0), g.da()),
        };
        ([x0, x0, x0, x0, t0, t0, t0], [dx, dx, dx, dx, dt, dt, dt])
    }

    /// Separable multilinear interpolation; zero outside the grid hull.
    pub fn interp_eval(&self, p: &GroupPoint) -> Result<Complex64> {
        self.interp_eval_with(p, Interp::Linear)
    }

    pub fn interp_eval_with(&self, p: &GroupPoint, method: Interp) -> Result<Complex64> {
        let v = self.values()?;
        let (org, step) = self.axes();
        let c = p.coords();
        let g = &self.grid;
        let dims = [g.n_x, g.n_x, g.n_x, g.n_x, g.n_t, g.n_t, g.n_t];
        let mut taps: [Vec<(usize, f64)>; 7] = Default::default();
        for d in 0..7 {
            match axis_weights((c[d] - org[d]) / step[d], dims[d], method) {
                Some(w) => taps[d] = w,
                None => {
                    self.add_ood(1);
                    return Ok(Complex64::new(0.0, 0.0));
                }
            }
        }
        let strides = {
            let mut s = [1usize; 7];
            for d in (0..6).rev() {
                s[d] = s[d + 1] * dims[d + 1];
            }
            s
        };
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = [0usize; 7];
        loop {
            let mut w = 1.0;
            let mut off = 0;
            for d in 0..7 {
                let (i, wd) = taps[d][idx[d]];
                w *= wd;
                off += i * strides[d];
            }
            if w != 0.0 {
                acc += v[off] * w;
            }
            let mut d = 6;
            loop {
                idx[d] += 1;
                if idx[d] < taps[d].len() {
                    break;
                }
                idx[d] = 0;
                if d == 0 {
                    return Ok(acc);
                }
                d -= 1;
            }
        }
    }

    /// Riemann weight of one grid cell in this field's domain.
    pub fn cell_volume(&self) -> f64 {
        let g = &self.grid;
        match self.domain {
            Domain::Spatial => g.x_cell() * g.t_cell(),
            Domain::Mixed => g.x_cell() * g.da().powi(3),
            Domain::Frequency => g.dy().powi(4) * g.da().powi(3),
        }
    }

    pub fn integrate(&self) -> Result<Complex64> {
        let s: Complex64 = self.values()?.iter().sum();
        Ok(s * self.cell_volume())
    }

    /// ⟨f, g⟩ = ∫ f ḡ.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        self.check_compatible(other)?;
        let s: Complex64 = self.values()?.iter().zip(other.values()?).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.cell_volume())
    }

    pub fn l2norm(&self) -> Result<f64> {
        let s: f64 = self.values()?.iter().map(|z| z.norm_sqr()).sum();
        Ok((s * self.cell_volume()).sqrt())
    }

    pub fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Relative L² distance ‖f − g‖/‖g‖.
    pub fn rel_l2_error(&self, reference: &Field) -> Result<f64> {
        self.check_compatible(reference)?;
        let (mut num, mut den) = (0.0, 0.0);
        for (a, b) in self.values()?.iter().zip(reference.values()?) {
            num += (a - b).norm_sqr();
            den += b.norm_sqr();
        }
        Ok(if den > 0.0 { (num / den).sqrt() } else { num.sqrt() })
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Result<Field> {
        let v: Vec<Complex64> = self.values()?.par_iter().map(|z| f(*z)).collect();
        Ok(Field { grid: self.grid, values: Some(v), form: None, domain: self.domain, ood: AtomicU64::new(0) })
    }

    /// α·self + β·other.
    pub fn axpby(&self, alpha: Complex64, other: &Field, beta: Complex64) -> Result<Field> {
        self.check_compatible(other)?;
        let v = self.values()?.iter().zip(other.values()?).map(|(a, b)| alpha * a + beta * b).collect();
        Field::from_values(self.grid, v, self.domain)
    }

    /// Resamples a spatial field through a point map, by closed form when
    /// available and by interpolation otherwise.
    fn transformed(
        &self,
        form: Option<SharedForm>,
        pullback: impl Fn(&GroupPoint) -> (GroupPoint, Complex64) + Sync,
    ) -> Result<Field> {
        self.expect_domain(Domain::Spatial)?;
        if let Some(form) = form {
            return if self.values.is_some() { sample(form, self.grid) } else { Ok(Field::from_form(form, self.grid)) };
        }
        let g = self.grid;
        let vals: Result<Vec<Complex64>> = (0..g.len())
            .into_par_iter()
            .map(|k| {
                let (q, c) = pullback(&g.point(k));
                Ok(self.interp_eval(&q)? * c)
            })
            .collect();
        Field::from_values(g, vals?, Domain::Spatial)
    }

    /// f̃(x,t) = conj f(−x,−t).
    pub fn involution_tilde(&self) -> Result<Field> {
        let form = self.form.clone().map(|f| Arc::new(Involution(f)) as SharedForm);
        self.transformed(form, |p| (qheis_core::group::ginv(*p), Complex64::new(1.0, 0.0))).and_then(|f| {
            if self.form.is_none() {
                f.map_values(|z| z.conj())
            } else {
                Ok(f)
            }
        })
    }

    /// f_ρ(x,t) = ρ⁻⁵ f(x/√ρ, t/ρ).
    pub fn func_dilate(&self, rho: f64) -> Result<Field> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(qheis_core::CoreError::NonPositiveScale(rho).into());
        }
        let form = match &self.form {
            Some(f) => Some(Arc::new(Dilated::new(f.clone(), rho)?) as SharedForm),
            None => None,
        };
        let s = 1.0 / rho.sqrt();
        self.transformed(form, |p| (GroupPoint::new(p.x * s, p.t * (1.0 / rho)), Complex64::new(rho.powi(-5), 0.0)))
    }

    /// f_{u,v}(x,t) = f(ū x v, v̄ t v).
    pub fn func_rotate(&self, u: UnitQuaternion, v: UnitQuaternion) -> Result<Field> {
        let form = self.form.clone().map(|f| Arc::new(Rotated::new(f, u, v)) as SharedForm);
        self.transformed(form, |p| {
            let x = u.quat().conj() * p.x * v.quat();
            (GroupPoint::new(x, v.unrotate_im(p.t)), Complex64::new(1.0, 0.0))
        })
    }

    /// Writes the 64-byte `QHF1` header followed by little-endian (re, im)
    /// pairs in row-major (x0, x1, x2, x3, t1, t2, t3) order.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let v = self.values()?;
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&self.header())?;
        for z in v {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    fn header(&self) -> [u8; HEADER_LEN] {
        let g = &self.grid;
        let mut h = [0u8; HEADER_LEN];
        h[0..4].copy_from_slice(MAGIC);
        h[4..8].copy_from_slice(&self.domain.tag().to_le_bytes());
        h[8..16].copy_from_slice(&g.half_extent_x.to_le_bytes());
        h[16..24].copy_from_slice(&(g.n_x as u64).to_le_bytes());
        h[24..32].copy_from_slice(&g.half_extent_t.to_le_bytes());
        h[32..40].copy_from_slice(&(g.n_t as u64).to_le_bytes());
        h
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Field> {
        let mut r = BufReader::new(File::open(path)?);
        let mut h = [0u8; HEADER_LEN];
        r.read_exact(&mut h)?;
        if &h[0..4] != MAGIC {
            return Err(Error::Format("missing QHF1 magic".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(h[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(h[o..o + 8].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(h[o..o + 8].try_into().unwrap());
        let domain = Domain::from_tag(u32_at(4))?;
        let grid = GridSpec::new(f64_at(8), u64_at(16) as usize, f64_at(24), u64_at(32) as usize)?;
        let mut buf = vec![0u8; grid.len() * 16];
        r.read_exact(&mut buf)?;
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after field data".into()));
        }
        let values = buf
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[0..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..16].try_into().unwrap()),
                )
            })
            .collect();
        Field::from_values(grid, values, domain)
    }
}

const MAGIC: &[u8; 4] = b"QHF1";
pub const HEADER_LEN: usize = 64;
