//! Immersed patches in S⁶ and their local differential geometry.

mod curvature;
mod diagnostics;

pub use curvature::*;
pub use diagnostics::*;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use thiserror::Error;

use crate::cubic_lab::{HarmonicCubic, Tensor3};
use crate::nk6_forms::{im_omega_raw, SpherePoint};
use crate::octonion::{cross, phi0, ImOctonion};
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("patch point is off the unit sphere by {0:e}")]
    OffSphere(f64),
    #[error("immersion degenerates: singular value ratio {0:e}")]
    Degenerate(f64),
    #[error("expected a {expected}-dimensional patch, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("patch is not Lagrangian at this point (|ω| = {0:e})")]
    NotLagrangian(f64),
    #[error("frame is not orthonormal and tangent (residual {0:e})")]
    BadFrame(f64),
    #[error("curvature finite differences disagree across steps by {0:e}")]
    RichardsonBreakdown(f64),
}

pub type PointMap = dyn Fn(&[f64]) -> ImOctonion + Send + Sync;
pub type FirstMap = dyn Fn(&[f64]) -> Vec<ImOctonion> + Send + Sync;
pub type SecondMap = dyn Fn(&[f64]) -> Vec<Vec<ImOctonion>> + Send + Sync;

/// A map from a parameter box into S⁶ with optional analytic derivatives.
#[derive(Clone)]
pub struct ImmersionPatch {
    name: String,
    domain: Vec<[f64; 2]>,
    map: Arc<PointMap>,
    first: Option<Arc<FirstMap>>,
    second: Option<Arc<SecondMap>>,
    step: f64,
    step_second: f64,
    flip: bool,
}

impl fmt::Debug for ImmersionPatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImmersionPatch")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("analytic_first", &self.first.is_some())
            .field("analytic_second", &self.second.is_some())
            .field("flip", &self.flip)
            .finish()
    }
}

impl ImmersionPatch {
    pub fn new(
        name: impl Into<String>,
        domain: Vec<[f64; 2]>,
        map: impl Fn(&[f64]) -> ImOctonion + Send + Sync + 'static,
    ) -> Self {
        assert!(domain.len() == 2 || domain.len() == 3, "patches are 2- or 3-dimensional");
        ImmersionPatch {
            name: name.into(),
            domain,
            map: Arc::new(map),
            first: None,
            second: None,
            step: tol::FD_STEP,
            step_second: tol::FD_STEP_SECOND,
            flip: false,
        }
    }

    pub fn with_first(mut self, f: impl Fn(&[f64]) -> Vec<ImOctonion> + Send + Sync + 'static) -> Self {
        self.first = Some(Arc::new(f));
        self
    }

    pub fn with_second(mut self, f: impl Fn(&[f64]) -> Vec<Vec<ImOctonion>> + Send + Sync + 'static) -> Self {
        self.second = Some(Arc::new(f));
        self
    }

    pub fn with_steps(mut self, first: f64, second: f64) -> Self {
        self.step = first;
        self.step_second = second;
        self
    }

    /// Drops analytic derivatives so every jet comes from finite differences.
    pub fn finite_difference_only(mut self) -> Self {
        self.first = None;
        self.second = None;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Reverse the orientation (negates the last frame vector).
    pub fn flipped(mut self) -> Self {
        self.flip = !self.flip;
        self
    }

    /// Orient a 3-dimensional patch so that `−ImΩ` is positive on its frames.
    pub fn oriented(self) -> Self {
        if self.dim() != 3 {
            return self;
        }
        match phase(&self, &self.center()) {
            Ok(v) if v < 0.0 => self.flipped(),
            _ => self,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[[f64; 2]] {
        &self.domain
    }

    pub fn has_analytic_first(&self) -> bool {
        self.first.is_some()
    }

    pub fn center(&self) -> Vec<f64> {
        self.domain.iter().map(|[a, b]| 0.5 * (a + b)).collect()
    }

    /// Cell centres of an `n`-per-axis grid over the domain.
    pub fn grid(&self, n: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .domain
            .iter()
            .map(|[a, b]| (0..n).map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64).collect())
            .collect();
        let total = n.pow(self.dim() as u32);
        (0..total)
            .map(|mut idx| {
                axes.iter()
                    .map(|ax| {
                        let v = ax[idx % n];
                        idx /= n;
                        v
                    })
                    .collect()
            })
            .collect()
    }

    pub fn eval(&self, params: &[f64]) -> ImOctonion {
        (self.map)(params)
    }

    pub fn point(&self, params: &[f64]) -> Result<SpherePoint, JetError> {
        let p = self.eval(params);
        let off = (p.norm() - 1.0).abs();
        if off > tol::TANGENCY {
            return Err(JetError::OffSphere(off));
        }
        Ok(SpherePoint::normalized(p))
    }

    fn shifted(params: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
        let mut q = params.to_vec();
        for &(a, h) in moves {
            q[a] += h;
        }
        q
    }

    fn central_first(&self, params: &[f64], a: usize, h: f64) -> ImOctonion {
        (self.eval(&Self::shifted(params, &[(a, h)])) - self.eval(&Self::shifted(params, &[(a, -h)]))) / (2.0 * h)
    }

    /// Coordinate tangent vectors `∂_a x`.
    pub fn first(&self, params: &[f64]) -> Vec<ImOctonion> {
        if let Some(f) = &self.first {
            return f(params);
        }
        (0..self.dim())
            .map(|a| {
                let coarse = self.central_first(params, a, self.step);
                let fine = self.central_first(params, a, 0.5 * self.step);
                fine + (fine - coarse) / 3.0
            })
            .collect()
    }

    fn second_at_step(&self, params: &[f64], h: f64) -> Vec<Vec<ImOctonion>> {
        let n = self.dim();
        let mut out = vec![vec![ImOctonion::zero(); n]; n];
        if let Some(f) = &self.first {
            for b in 0..n {
                let plus = f(&Self::shifted(params, &[(b, h)]));
                let minus = f(&Self::shifted(params, &[(b, -h)]));
                for a in 0..n {
                    out[a][b] = (plus[a] - minus[a]) / (2.0 * h);
                }
            }
            for a in 0..n {
                for b in 0..a {
                    let avg = (out[a][b] + out[b][a]) * 0.5;
                    out[a][b] = avg;
                    out[b][a] = avg;
                }
            }
            return out;
        }
        let x0 = self.eval(params);
        for a in 0..n {
            let p = self.eval(&Self::shifted(params, &[(a, h)]));
            let m = self.eval(&Self::shifted(params, &[(a, -h)]));
            out[a][a] = (p - x0 * 2.0 + m) / (h * h);
            for b in 0..a {
                let pp = self.eval(&Self::shifted(params, &[(a, h), (b, h)]));
                let pm = self.eval(&Self::shifted(params, &[(a, h), (b, -h)]));
                let mp = self.eval(&Self::shifted(params, &[(a, -h), (b, h)]));
                let mm = self.eval(&Self::shifted(params, &[(a, -h), (b, -h)]));
                let v = (pp - pm - mp + mm) / (4.0 * h * h);
                out[a][b] = v;
                out[b][a] = v;
            }
        }
        out
    }

    /// Second partials `∂_a∂_b x`.
    pub fn second(&self, params: &[f64]) -> Vec<Vec<ImOctonion>> {
        if let Some(f) = &self.second {
            return f(params);
        }
        let coarse = self.second_at_step(params, self.step_second);
        let fine = self.second_at_step(params, 0.5 * self.step_second);
        fine.iter()
            .zip(&coarse)
            .map(|(rf, rc)| rf.iter().zip(rc).map(|(f, c)| *f + (*f - *c) / 3.0).collect())
            .collect()
    }

    /// Induced metric `g_ab = ⟨∂_a x, ∂_b x⟩`.
    pub fn metric_from(d1: &[ImOctonion]) -> DMatrix<f64> {
        DMatrix::from_fn(d1.len(), d1.len(), |a, b| d1[a].dot(&d1[b]))
    }

    pub fn frame(&self, params: &[f64]) -> Result<FrameAtPoint, JetError> {
        let point = self.point(params)?;
        let d1 = self.first(params);
        FrameAtPoint::from_coordinate_tangents(point, &d1, self.flip)
    }

    /// Run `f` over the grid in parallel and return the largest value.
    pub fn max_over_grid<F>(&self, n: usize, f: F) -> Result<f64, JetError>
    where
        F: Fn(&[f64]) -> Result<f64, JetError> + Sync,
    {
        let vals: Result<Vec<f64>, JetError> = self.grid(n).par_iter().map(|q| f(q)).collect();
        Ok(vals?.into_iter().fold(0.0, f64::max))
    }
}

pub fn induced_metric(patch: &ImmersionPatch, params: &[f64]) -> Result<DMatrix<f64>, JetError> {
    let d1 = patch.first(params);
    check_rank(&d1)?;
    Ok(ImmersionPatch::metric_from(&d1))
}

fn jacobian(d1: &[ImOctonion]) -> DMatrix<f64> {
    DMatrix::from_fn(7, d1.len(), |r, c| d1[c][r])
}

fn check_rank(d1: &[ImOctonion]) -> Result<(), JetError> {
    let sv = jacobian(d1).singular_values();
    let (max, min) = (sv.max(), sv.min());
    if max == 0.0 || min <= tol::RANK * max {
        return Err(JetError::Degenerate(if max == 0.0 { 0.0 } else { min / max }));
    }
    Ok(())
}

/// An orthonormal tangent frame together with its expression in coordinate tangents:
/// `e_i = Σ_a coeff[(a, i)] ∂_a x`.
#[derive(Clone, Debug)]
pub struct FrameAtPoint {
    pub point: SpherePoint,
    pub e: Vec<ImOctonion>,
    pub coeff: DMatrix<f64>,
}

impl FrameAtPoint {
    /// Gram–Schmidt in coordinate order, optionally negating the last vector.
    pub fn from_coordinate_tangents(point: SpherePoint, d1: &[ImOctonion], flip: bool) -> Result<Self, JetError> {
        check_rank(d1)?;
        let g = ImmersionPatch::metric_from(d1);
        let n = d1.len();
        let chol = g.clone().cholesky().ok_or(JetError::Degenerate(0.0))?;
        let l = chol.l();
        let mut coeff = l.transpose().try_inverse().ok_or(JetError::Degenerate(0.0))?;
        if flip {
            for a in 0..n {
                coeff[(a, n - 1)] = -coeff[(a, n - 1)];
            }
        }
        let e = (0..n)
            .map(|i| (0..n).fold(ImOctonion::zero(), |acc, a| acc + d1[a] * coeff[(a, i)]))
            .collect();
        Ok(FrameAtPoint { point, e, coeff })
    }

    /// Any orthonormal tangent frame of the patch at `params`.
    pub fn from_vectors(patch: &ImmersionPatch, params: &[f64], e: Vec<ImOctonion>) -> Result<Self, JetError> {
        let point = patch.point(params)?;
        let d1 = patch.first(params);
        check_rank(&d1)?;
        let n = d1.len();
        if e.len() != n {
            return Err(JetError::WrongDimension { expected: n, got: e.len() });
        }
        let g = ImmersionPatch::metric_from(&d1);
        let ginv = g.try_inverse().ok_or(JetError::Degenerate(0.0))?;
        let dt = jacobian(&d1).transpose();
        let mut coeff = DMatrix::zeros(n, n);
        let mut residual: f64 = 0.0;
        for (i, ei) in e.iter().enumerate() {
            let c = &ginv * (&dt * DMatrix::from_column_slice(7, 1, ei.0.as_slice()));
            let back = (0..n).fold(ImOctonion::zero(), |acc, a| acc + d1[a] * c[a]);
            residual = residual.max((back - *ei).norm());
            for a in 0..n {
                coeff[(a, i)] = c[a];
            }
            for (j, ej) in e.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((ei.dot(ej) - target).abs());
            }
        }
        if residual > tol::TANGENCY {
            return Err(JetError::BadFrame(residual));
        }
        Ok(FrameAtPoint { point, e, coeff })
    }

    /// `e'_i = Σ_j ρ_ji e_j`.
    pub fn rotated(&self, rho: &DMatrix<f64>) -> FrameAtPoint {
        let n = self.e.len();
        let e = (0..n)
            .map(|i| (0..n).fold(ImOctonion::zero(), |acc, j| acc + self.e[j] * rho[(j, i)]))
            .collect();
        FrameAtPoint { point: self.point, e, coeff: &self.coeff * rho }
    }

    pub fn p(&self) -> &ImOctonion {
        self.point.get()
    }

    /// Remove the radial and tangential parts.
    pub fn normal_part(&self, v: &ImOctonion) -> ImOctonion {
        let p = *self.p();
        let mut w = *v - p * p.dot(v);
        for e in &self.e {
            w -= *e * e.dot(&w);
        }
        w
    }

    /// Largest `|ω(e_i, e_j)|`.
    pub fn omega_residual(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.e.len() {
            for j in i + 1..self.e.len() {
                m = m.max(phi0(self.p(), &self.e[i], &self.e[j]).abs());
            }
        }
        m
    }
}

/// `II(e_i, e_j)` for a frame of the patch at `params`.
pub fn second_fundamental_form(
    patch: &ImmersionPatch,
    params: &[f64],
    frame: &FrameAtPoint,
) -> Vec<Vec<ImOctonion>> {
    let d2 = patch.second(params);
    let n = frame.e.len();
    let c = &frame.coeff;
    let mut ii = vec![vec![ImOctonion::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut amb = ImOctonion::zero();
            for a in 0..n {
                for b in 0..n {
                    amb += d2[a][b] * (c[(a, i)] * c[(b, j)]);
                }
            }
            ii[i][j] = frame.normal_part(&amb);
        }
    }
    ii
}

/// `ĥ_ijk = ⟨II(e_i,e_j), Je_k⟩` in a given frame.
#[derive(Clone, Debug)]
pub struct CubicTensor {
    pub frame: FrameAtPoint,
    pub h: Tensor3,
}

impl CubicTensor {
    /// Symmetric trace-free part; the second value is the norm of what was removed.
    pub fn harmonic(&self) -> (HarmonicCubic, f64) {
        HarmonicCubic::project(&self.h)
    }

    /// Asymmetry under swapping the last two slots.
    pub fn symmetry_residual(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m = m.max((self.h[i][j][k] - self.h[i][k][j]).abs());
                }
            }
        }
        m
    }
}

pub fn fundamental_cubic_in(
    patch: &ImmersionPatch,
    params: &[f64],
    frame: &FrameAtPoint,
) -> Result<CubicTensor, JetError> {
    if frame.e.len() != 3 {
        return Err(JetError::WrongDimension { expected: 3, got: frame.e.len() });
    }
    let lag = frame.omega_residual();
    if lag > tol::CUBIC_LAGRANGIAN_GATE {
        return Err(JetError::NotLagrangian(lag));
    }
    let ii = second_fundamental_form(patch, params, frame);
    let je: Vec<ImOctonion> = frame.e.iter().map(|e| cross(frame.p(), e)).collect();
    let h = std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| ii[i][j].dot(&je[k]))));
    Ok(CubicTensor { frame: frame.clone(), h })
}

pub fn fundamental_cubic(patch: &ImmersionPatch, params: &[f64]) -> Result<CubicTensor, JetError> {
    if patch.dim() != 3 {
        return Err(JetError::WrongDimension { expected: 3, got: patch.dim() });
    }
    let frame = patch.frame(params)?;
    fundamental_cubic_in(patch, params, &frame)
}

/// `−ImΩ(e1,e2,e3)` on the patch frame.
pub fn phase(patch: &ImmersionPatch, params: &[f64]) -> Result<f64, JetError> {
    if patch.dim() != 3 {
        return Err(JetError::WrongDimension { expected: 3, got: patch.dim() });
    }
    let f = patch.frame(params)?;
    Ok(-im_omega_raw(f.p(), &f.e[0], &f.e[1], &f.e[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Round S² ⊂ span(ε1, ε2, ε3) in polar coordinates.
    pub(crate) fn assoc_sphere_fd() -> ImmersionPatch {
        ImmersionPatch::new("s2", vec![[0.3, 2.8], [0.0, 6.0]], |q: &[f64]| {
            let (t, p) = (q[0], q[1]);
            ImOctonion::e(1) * (t.sin() * p.cos()) + ImOctonion::e(2) * (t.sin() * p.sin()) + ImOctonion::e(3) * t.cos()
        })
    }

    pub(crate) fn assoc_sphere() -> ImmersionPatch {
        assoc_sphere_fd().with_first(|q: &[f64]| {
            let (t, p) = (q[0], q[1]);
            let e = ImOctonion::e;
            vec![
                e(1) * (t.cos() * p.cos()) + e(2) * (t.cos() * p.sin()) - e(3) * t.sin(),
                e(1) * (-t.sin() * p.sin()) + e(2) * (t.sin() * p.cos()),
            ]
        })
    }

    #[test]
    fn grid_covers_domain_interior() {
        let g = assoc_sphere().grid(4);
        assert_eq!(g.len(), 16);
        assert!(g.iter().all(|q| q[0] > 0.3 && q[0] < 2.8 && q[1] > 0.0 && q[1] < 6.0));
    }

    #[test]
    fn fd_jets_match_closed_form() {
        let s = assoc_sphere_fd();
        let q = [1.1, 0.7];
        let d1 = s.first(&q);
        let want0 = ImOctonion::e(1) * (q[0].cos() * q[1].cos()) + ImOctonion::e(2) * (q[0].cos() * q[1].sin())
            - ImOctonion::e(3) * q[0].sin();
        assert!((d1[0] - want0).norm() < 1e-10);
        let d2 = s.second(&q);
        // ∂θ∂θ x = −x for fixed φ.
        assert!((d2[0][0] + s.eval(&q)).norm() < 1e-8);
    }

    #[test]
    fn frame_is_orthonormal() {
        let s = assoc_sphere();
        let f = s.frame(&[1.0, 2.0]).unwrap();
        assert!((f.e[0].dot(&f.e[1])).abs() < 1e-12);
        assert!((f.e[0].norm() - 1.0).abs() < 1e-12);
        assert!(f.e[0].dot(f.p()).abs() < 1e-12);
    }

    #[test]
    fn constant_map_is_degenerate() {
        let c = ImmersionPatch::new("const", vec![[0.0, 1.0], [0.0, 1.0]], |_| ImOctonion::e(1));
        assert!(matches!(c.frame(&[0.5, 0.5]), Err(JetError::Degenerate(_))));
    }
}
