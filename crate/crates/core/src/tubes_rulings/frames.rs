//! Adapted frames along pseudoholomorphic curves and their Maurer–Cartan forms.

use std::sync::Arc;

use nalgebra::{Matrix3, SMatrix};
use num_complex::Complex64;
use rayon::prelude::*;

use super::TubeError;
use crate::geometry_jet::{lagrangian_residual, second_fundamental_form, FrameAtPoint, ImmersionPatch};
use crate::octonion::{cross, cross_c, CVec7, ImOctonion};
use crate::tol;

pub type CMat7 = SMatrix<Complex64, 7, 7>;

/// `|h|` below which a point of a curve counts as totally geodesic.
pub const TOTALLY_GEODESIC: f64 = 1e-6;

/// Smallest admissible `Σ_a |θ1(∂_a)|²` for reading off torsion.
pub const MIN_THETA: f64 = 1e-12;

/// Largest modulus of the entries.
fn cmax<'a>(it: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    it.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn cplx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn cvec(v: &ImOctonion) -> CVec7 {
    v.0.map(|x| Complex64::new(x, 0.0))
}

/// `½(a − i b)`.
fn half_complex(a: &ImOctonion, b: &ImOctonion) -> CVec7 {
    CVec7::from_fn(|k, _| Complex64::new(0.5 * a[k], -0.5 * b[k]))
}

fn real_part(v: &CVec7) -> ImOctonion {
    ImOctonion(v.map(|z| z.re))
}

fn imag_part(v: &CVec7) -> ImOctonion {
    ImOctonion(v.map(|z| z.im))
}

/// The real frame `(u, t1, t2, n1, n2, b1, b2)` of a pseudoholomorphic curve at a point,
/// with `|h| = ‖II(t1, t1)‖`.
#[derive(Clone, Copy, Debug)]
pub struct PholoFrame {
    pub u: ImOctonion,
    pub t1: ImOctonion,
    pub t2: ImOctonion,
    pub n1: ImOctonion,
    pub n2: ImOctonion,
    pub b1: ImOctonion,
    pub b2: ImOctonion,
    pub h_norm: f64,
}

impl PholoFrame {
    pub fn t(&self) -> CVec7 {
        half_complex(&self.t1, &self.t2)
    }

    pub fn n(&self) -> CVec7 {
        half_complex(&self.n1, &self.n2)
    }

    pub fn b(&self) -> CVec7 {
        half_complex(&self.b1, &self.b2)
    }

    pub fn vectors(&self) -> [ImOctonion; 7] {
        [self.u, self.t1, self.t2, self.n1, self.n2, self.b1, self.b2]
    }

    /// Largest deviation of the seven vectors from an orthonormal basis.
    pub fn orthonormality_residual(&self) -> f64 {
        let v = self.vectors();
        let mut m: f64 = 0.0;
        for i in 0..7 {
            for j in 0..7 {
                let target = if i == j { 1.0 } else { 0.0 };
                m = m.max((v[i].dot(&v[j]) - target).abs());
            }
        }
        m
    }

    /// `(u; t, n, b)`.
    pub fn unitary(&self) -> UnitaryFrame {
        UnitaryFrame { u: self.u, f: [self.t(), self.n(), self.b()] }
    }
}

/// `n1 = h(t1,t1)/|h|`, `n2 = h(t1,t2)/|h|`, `b1 = t1×n1`,
/// `b2 = t2×h(t2,t2)/|h|`, where `t1` is the first patch tangent rotated by `tangent_angle`.
pub fn pholo_frame(sigma: &ImmersionPatch, params: &[f64], tangent_angle: f64) -> Result<PholoFrame, TubeError> {
    if sigma.dim() != 2 {
        return Err(TubeError::Jet(crate::geometry_jet::JetError::WrongDimension { expected: 2, got: sigma.dim() }));
    }
    let base = sigma.frame(params)?;
    let u = *base.p();
    let t1 = base.e[0] * tangent_angle.cos() + base.e[1] * tangent_angle.sin();
    let t2 = cross(&u, &t1);
    let frame = FrameAtPoint::from_vectors(sigma, params, vec![t1, t2])?;
    let ii = second_fundamental_form(sigma, params, &frame);
    let h_norm = ii[0][0].norm();
    if h_norm <= TOTALLY_GEODESIC {
        return Err(TubeError::TotallyGeodesic(h_norm));
    }
    let n1 = ii[0][0] / h_norm;
    let n2 = ii[0][1] / h_norm;
    let b1 = cross(&t1, &n1);
    let b2 = cross(&t2, &(ii[1][1] / h_norm));
    Ok(PholoFrame { u, t1, t2, n1, n2, b1, b2, h_norm })
}

/// A point `u` of S⁶ and three complex vectors spanning `T^{1,0}_u`, each of norm `1/√2`.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryFrame {
    pub u: ImOctonion,
    pub f: [CVec7; 3],
}

impl UnitaryFrame {
    /// Columns `(u, f1, f2, f3, f̄1, f̄2, f̄3)`.
    pub fn matrix(&self) -> CMat7 {
        let mut g = CMat7::zeros();
        g.set_column(0, &cvec(&self.u));
        for i in 0..3 {
            g.set_column(1 + i, &self.f[i]);
            g.set_column(4 + i, &self.f[i].map(|z| z.conj()));
        }
        g
    }

    /// `g⁻¹ = diag(1, 2, …, 2) gᴴ`, valid because the columns are orthogonal.
    pub fn inverse(&self) -> CMat7 {
        let mut gi = self.matrix().adjoint();
        for r in 1..7 {
            gi.row_mut(r).scale_mut(2.0);
        }
        gi
    }

    /// Hermitian orthogonality with `|f_i|² = 1/2`, `f_i ⊥ u`, and `u × f_i = i f_i`.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.matrix();
        let gram = g.adjoint() * g;
        let mut m: f64 = 0.0;
        for i in 0..7 {
            for j in 0..7 {
                let target = match (i, j) {
                    (0, 0) => 1.0,
                    _ if i == j => 0.5,
                    _ => 0.0,
                };
                m = m.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        let u = cvec(&self.u);
        for f in &self.f {
            m = m.max(cmax(&(cross_c(&u, f) - f * Complex64::i())));
        }
        m
    }

    /// `f1×f̄1 = (i/2)u`, `f2×f3 = f̄1`, `f3×f1 = f̄2`, `f1×f2 = f̄3`.
    pub fn cross_residual(&self) -> f64 {
        let [f1, f2, f3] = &self.f;
        let bar = |v: &CVec7| v.map(|z| z.conj());
        let half_i_u = cvec(&self.u) * Complex64::new(0.0, 0.5);
        [
            cross_c(f1, &bar(f1)) - half_i_u,
            cross_c(f2, f3) - bar(f1),
            cross_c(f3, f1) - bar(f2),
            cross_c(f1, f2) - bar(f3),
        ]
        .iter()
        .map(cmax)
        .fold(0.0, f64::max)
    }
}

pub type FrameRule = dyn Fn(&[f64]) -> Result<UnitaryFrame, TubeError> + Send + Sync;

/// A unitary frame as a function on a 2D parameter box.
#[derive(Clone)]
pub struct UnitaryFramePath {
    domain: Vec<[f64; 2]>,
    rule: Arc<FrameRule>,
    step: f64,
}

impl std::fmt::Debug for UnitaryFramePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitaryFramePath").field("domain", &self.domain).field("step", &self.step).finish()
    }
}

impl UnitaryFramePath {
    pub fn new(
        domain: Vec<[f64; 2]>,
        rule: impl Fn(&[f64]) -> Result<UnitaryFrame, TubeError> + Send + Sync + 'static,
    ) -> Self {
        UnitaryFramePath { domain, rule: Arc::new(rule), step: tol::FD_STEP_SECOND }
    }

    pub fn constant(frame: UnitaryFrame) -> Self {
        Self::new(vec![[0.0, 1.0], [0.0, 1.0]], move |_| Ok(frame))
    }

    /// The adapted frame `(t, n, b)` of [`pholo_frame`] along `sigma`.
    pub fn adapted(sigma: &ImmersionPatch) -> Self {
        let s = sigma.clone();
        Self::new(sigma.domain().to_vec(), move |q| Ok(pholo_frame(&s, q, 0.0)?.unitary()))
    }

    /// `(t, cosψ n − sinψ b, sinψ n + cosψ b)` along `sigma`.
    pub fn gauged(sigma: &ImmersionPatch, gauge: &FiberGauge) -> Self {
        let s = sigma.clone();
        let psi = gauge.psi.clone();
        Self::new(sigma.domain().to_vec(), move |q| {
            let pf = pholo_frame(&s, q, 0.0)?;
            let (c, sn) = (psi(q).cos(), psi(q).sin());
            let (n, b) = (pf.n(), pf.b());
            Ok(UnitaryFrame { u: pf.u, f: [pf.t(), n * cplx(c) - b * cplx(sn), n * cplx(sn) + b * cplx(c)] })
        })
    }

    pub fn domain(&self) -> &[[f64; 2]] {
        &self.domain
    }

    pub fn frame(&self, params: &[f64]) -> Result<UnitaryFrame, TubeError> {
        (self.rule)(params)
    }

    /// Cell-center grid, `n` points per axis.
    pub fn grid(&self, n: usize) -> Vec<[f64; 2]> {
        let at = |a: usize, i: usize| {
            let [lo, hi] = self.domain[a];
            lo + (hi - lo) * (i as f64 + 0.5) / n as f64
        };
        (0..n).flat_map(|i| (0..n).map(move |j| [at(0, i), at(1, j)])).collect()
    }

    fn dg(&self, params: &[f64], a: usize, h: f64) -> Result<CMat7, TubeError> {
        let mut p = params.to_vec();
        p[a] += h;
        let plus = self.frame(&p)?.matrix();
        p[a] -= 2.0 * h;
        let minus = self.frame(&p)?.matrix();
        Ok((plus - minus) / Complex64::new(2.0 * h, 0.0))
    }
}

/// `θ(∂_a)` and `κ(∂_a)` for the two coordinate directions at one point.
#[derive(Clone, Copy, Debug)]
pub struct MCComponents {
    pub theta: [[Complex64; 3]; 2],
    pub kappa: [Matrix3<Complex64>; 2],
    /// Largest `|κ + κᴴ|` and `|tr κ|`.
    pub skew_residual: f64,
}

impl MCComponents {
    pub fn zero_like(&self) -> bool {
        self.theta.iter().flatten().all(|z| z.norm() == 0.0) && self.kappa.iter().all(|k| cmax(k) == 0.0)
    }
}

/// Solves `dg = gφ` by central differences with Richardson extrapolation and reads off
/// `θ = (i/2)φ_{f,u}` and `κ = φ_{f,f}`.
pub fn maurer_cartan_extract(path: &UnitaryFramePath, params: &[f64]) -> Result<MCComponents, TubeError> {
    let frame = path.frame(params)?;
    let bad = frame.unitarity_residual();
    if bad > tol::FRAME {
        return Err(TubeError::NotUnitary(bad));
    }
    let gi = frame.inverse();
    let mut theta = [[Complex64::new(0.0, 0.0); 3]; 2];
    let mut kappa = [Matrix3::zeros(); 2];
    let mut skew: f64 = 0.0;
    for a in 0..2 {
        let coarse = path.dg(params, a, path.step)?;
        let fine = path.dg(params, a, 0.5 * path.step)?;
        let dg = fine + (fine - coarse) / Complex64::new(3.0, 0.0);
        let phi = gi * dg;
        for i in 0..3 {
            theta[a][i] = Complex64::new(0.0, 0.5) * phi[(1 + i, 0)];
        }
        kappa[a] = phi.fixed_view::<3, 3>(1, 1).into_owned();
        skew = skew.max(cmax(&(kappa[a] + kappa[a].adjoint()))).max(kappa[a].trace().norm());
    }
    Ok(MCComponents { theta, kappa, skew_residual: skew })
}

fn wedge(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> Complex64 {
    a1 * b2 - a2 * b1
}

/// `[v]_ij = ε_ijk v_k`.
fn bracket(v: &[Complex64; 3]) -> Matrix3<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    Matrix3::new(z, v[2], -v[1], -v[2], z, v[0], v[1], -v[0], z)
}

/// Residuals of `dθ = −κ∧θ + [θ̄]∧θ̄` and `dκ = −κ∧κ + 3θ∧θ̄ᵀ − (θᵀ∧θ̄) I` on `(∂1, ∂2)`.
#[derive(Clone, Copy, Debug)]
pub struct StructureResiduals {
    pub d_theta: f64,
    pub d_kappa: f64,
}

/// θ and κ evaluated on two coordinate directions.
type FormPair = ([[Complex64; 3]; 2], [Matrix3<Complex64>; 2]);

pub fn structure_residuals(path: &UnitaryFramePath, params: &[f64]) -> Result<StructureResiduals, TubeError> {
    let mc = maurer_cartan_extract(path, params)?;
    let h = path.step;
    // ∂_b of θ(∂_a) and κ(∂_a), Richardson over steps h and h/2.
    let deriv = |b: usize, step: f64| -> Result<FormPair, TubeError> {
        let mut p = params.to_vec();
        p[b] += step;
        let plus = maurer_cartan_extract(path, &p)?;
        p[b] -= 2.0 * step;
        let minus = maurer_cartan_extract(path, &p)?;
        let s = Complex64::new(2.0 * step, 0.0);
        let th = std::array::from_fn(|a| std::array::from_fn(|i| (plus.theta[a][i] - minus.theta[a][i]) / s));
        let ka = std::array::from_fn(|a| (plus.kappa[a] - minus.kappa[a]) / s);
        Ok((th, ka))
    };
    // d_th[b] = ∂_b θ(∂_a) and d_ka[b] = ∂_b κ(∂_a) for the other index a.
    let mut d_th = [[Complex64::new(0.0, 0.0); 3]; 2];
    let mut d_ka = [Matrix3::zeros(); 2];
    for b in 0..2 {
        let a = 1 - b;
        let (tc, kc) = deriv(b, h)?;
        let (tf, kf) = deriv(b, 0.5 * h)?;
        d_th[b] = std::array::from_fn(|i| tf[a][i] + (tf[a][i] - tc[a][i]) / 3.0);
        d_ka[b] = kf[a] + (kf[a] - kc[a]) / Complex64::new(3.0, 0.0);
    }
    // dα(∂1,∂2) = ∂1 α(∂2) − ∂2 α(∂1).
    let (th, ka) = (&mc.theta, &mc.kappa);
    let bar = |v: &[Complex64; 3]| v.map(|z| z.conj());
    let (tb1, tb2) = (bar(&th[0]), bar(&th[1]));
    let (br1, br2) = (bracket(&tb1), bracket(&tb2));
    let mut r_theta: f64 = 0.0;
    for i in 0..3 {
        let lhs = d_th[0][i] - d_th[1][i];
        let mut rhs = Complex64::new(0.0, 0.0);
        for j in 0..3 {
            rhs -= wedge(ka[0][(i, j)], ka[1][(i, j)], th[0][j], th[1][j]);
            rhs += wedge(br1[(i, j)], br2[(i, j)], tb1[j], tb2[j]);
        }
        r_theta = r_theta.max((lhs - rhs).norm());
    }
    let trace_term: Complex64 = (0..3).map(|k| wedge(th[0][k], th[1][k], tb1[k], tb2[k])).sum();
    let mut r_kappa: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let lhs = d_ka[0][(i, j)] - d_ka[1][(i, j)];
            let mut rhs = Complex64::new(0.0, 0.0);
            for k in 0..3 {
                rhs -= wedge(ka[0][(i, k)], ka[1][(i, k)], ka[0][(k, j)], ka[1][(k, j)]);
            }
            rhs += wedge(th[0][i], th[1][i], tb1[j], tb2[j]) * 3.0;
            if i == j {
                rhs -= trace_term;
            }
            r_kappa = r_kappa.max((lhs - rhs).norm());
        }
    }
    Ok(StructureResiduals { d_theta: r_theta, d_kappa: r_kappa })
}

/// Torsion `k1` with `κ32 = k1 θ1` and `k2` with `κ21 = k2 θ1`, in the adapted frame.
#[derive(Clone, Copy, Debug)]
pub struct Torsion {
    pub k1: Complex64,
    pub k2: Complex64,
    /// Largest misfit of the two proportionalities.
    pub residual: f64,
    /// Largest `|θ2|`, `|θ3|`; these vanish for a frame adapted to the curve.
    pub theta_normal: f64,
}

fn proportionality(theta1: [Complex64; 2], form: [Complex64; 2]) -> Result<(Complex64, f64), TubeError> {
    let den: f64 = theta1.iter().map(|z| z.norm_sqr()).sum();
    if den < MIN_THETA {
        return Err(TubeError::SmallTheta(den.sqrt()));
    }
    let k = (theta1[0].conj() * form[0] + theta1[1].conj() * form[1]) / den;
    let res = (0..2).map(|a| (form[a] - k * theta1[a]).norm()).fold(0.0, f64::max);
    Ok((k, res))
}

pub fn torsion(sigma: &ImmersionPatch, params: &[f64]) -> Result<Torsion, TubeError> {
    let mc = maurer_cartan_extract(&UnitaryFramePath::adapted(sigma), params)?;
    let t1 = [mc.theta[0][0], mc.theta[1][0]];
    let (k1, r1) = proportionality(t1, [mc.kappa[0][(2, 1)], mc.kappa[1][(2, 1)]])?;
    let (k2, r2) = proportionality(t1, [mc.kappa[0][(1, 0)], mc.kappa[1][(1, 0)]])?;
    let theta_normal = mc.theta.iter().flat_map(|t| [t[1].norm(), t[2].norm()]).fold(0.0, f64::max);
    Ok(Torsion { k1, k2, residual: r1.max(r2), theta_normal })
}

pub type GaugeAngle = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A rotation angle `ψ` mixing `n` and `b` over the curve.
#[derive(Clone)]
pub struct FiberGauge {
    pub name: String,
    pub psi: Arc<GaugeAngle>,
}

impl std::fmt::Debug for FiberGauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiberGauge").field("name", &self.name).finish()
    }
}

impl FiberGauge {
    pub fn new(name: impl Into<String>, psi: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        FiberGauge { name: name.into(), psi: Arc::new(psi) }
    }

    /// `f3 = b`: the lift traces the `N2` tube of radius `π/2`.
    pub fn n2() -> Self {
        Self::new("N2", |_| 0.0)
    }

    /// `f3 = n`: the lift traces the `N1` tube of radius `π/2`.
    pub fn n1() -> Self {
        Self::new("N1", |_| std::f64::consts::FRAC_PI_2)
    }

    /// `ψ = size · sin(s1 + 2 s2)` on top of the `N2` gauge.
    pub fn perturbed(size: f64) -> Self {
        Self::new(format!("N2+{size}"), move |q| size * (q[0] + 2.0 * q[1]).sin())
    }
}

/// The 3-fold `(s1, s2, τ) ↦ 2 Re(e^{iτ} f3(s))` swept by a gauge.
pub fn gauge_lift(sigma: &ImmersionPatch, gauge: &FiberGauge) -> ImmersionPatch {
    let path = UnitaryFramePath::gauged(sigma, gauge);
    let mut domain = sigma.domain().to_vec();
    domain.push([0.1, 6.1]);
    ImmersionPatch::new(format!("lift:{}:{}", sigma.name(), gauge.name), domain, move |q: &[f64]| {
        // A frame failure here is reported through the sphere check of the lift.
        let f3 = path.frame(&q[..2]).map(|f| f.f[2]).unwrap_or_else(|_| CVec7::zeros());
        (real_part(&f3) * q[2].cos() - imag_part(&f3) * q[2].sin()) * 2.0
    })
}

/// Maxima over the grid of the normalized `|Ω̌(∂1,∂2)|` on the gauge section and of the
/// Lagrangian residual of the swept 3-fold.
#[derive(Clone, Copy, Debug)]
pub struct OmegaCheck {
    pub omega_check: f64,
    pub lagrangian: f64,
}

/// `Ω̌ = κ32 ∧ κ31`, divided by `|θ1 ∧ θ̄1|`, is evaluated on an `n × n` grid of the curve;
/// the lift's Lagrangian residual uses a `lift_grid³` grid.
pub fn omega_check_residual(
    sigma: &ImmersionPatch,
    gauge: &FiberGauge,
    n: usize,
    lift_grid: usize,
) -> Result<OmegaCheck, TubeError> {
    let path = UnitaryFramePath::gauged(sigma, gauge);
    let vals: Result<Vec<f64>, TubeError> = path
        .grid(n)
        .par_iter()
        .map(|q| {
            let mc = maurer_cartan_extract(&path, q)?;
            let (k, t) = (&mc.kappa, &mc.theta);
            let om = wedge(k[0][(2, 1)], k[1][(2, 1)], k[0][(2, 0)], k[1][(2, 0)]);
            let area = wedge(t[0][0], t[1][0], t[0][0].conj(), t[1][0].conj()).norm();
            if area < MIN_THETA {
                return Err(TubeError::SmallTheta(area));
            }
            Ok(om.norm() / area)
        })
        .collect();
    let omega_check = vals?.into_iter().fold(0.0, f64::max);
    let lagrangian = lagrangian_residual(&gauge_lift(sigma, gauge), lift_grid)?;
    Ok(OmegaCheck { omega_check, lagrangian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{make_associative_sphere, make_boruvka, make_clifford_legendrian_curve};

    #[test]
    fn boruvka_frame_is_orthonormal_and_h_is_angle_independent() {
        let s = make_boruvka();
        let q = s.center();
        let h0 = pholo_frame(&s, &q, 0.0).unwrap().h_norm;
        assert!((h0 - (5.0f64 / 12.0).sqrt()).abs() < 1e-8);
        for k in 0..16 {
            let pf = pholo_frame(&s, &q, k as f64 * std::f64::consts::TAU / 16.0).unwrap();
            assert!(pf.orthonormality_residual() < 1e-8);
            assert!((pf.h_norm - h0).abs() < 1e-8);
            let uf = pf.unitary();
            assert!(uf.unitarity_residual() < 1e-8);
            assert!(uf.cross_residual() < 1e-8);
        }
    }

    #[test]
    fn totally_geodesic_sphere_is_refused() {
        let s = make_associative_sphere();
        assert!(matches!(pholo_frame(&s, &s.center(), 0.0), Err(TubeError::TotallyGeodesic(_))));
        assert!(torsion(&s, &s.center()).is_err());
    }

    #[test]
    fn constant_frame_has_zero_forms() {
        let pf = pholo_frame(&make_boruvka(), &[0.4, 0.7], 0.0).unwrap();
        let path = UnitaryFramePath::constant(pf.unitary());
        let mc = maurer_cartan_extract(&path, &[0.5, 0.5]).unwrap();
        assert!(mc.zero_like());
    }

    #[test]
    fn non_unitary_frame_is_refused() {
        let pf = pholo_frame(&make_boruvka(), &[0.4, 0.7], 0.0).unwrap();
        let mut uf = pf.unitary();
        uf.f[1] *= Complex64::new(1.1, 0.0);
        let path = UnitaryFramePath::constant(uf);
        assert!(matches!(maurer_cartan_extract(&path, &[0.5, 0.5]), Err(TubeError::NotUnitary(_))));
    }

    #[test]
    fn boruvka_structure_equations() {
        let s = make_boruvka();
        let path = UnitaryFramePath::adapted(&s);
        for q in [[0.4, 0.7], [1.9, 1.1]] {
            let mc = maurer_cartan_extract(&path, &q).unwrap();
            assert!(mc.skew_residual < 1e-8, "{}", mc.skew_residual);
            let r = structure_residuals(&path, &q).unwrap();
            assert!(r.d_theta < 1e-6 && r.d_kappa < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn torsion_of_test_curves() {
        let s = make_boruvka();
        let t = torsion(&s, &[0.4, 0.7]).unwrap();
        assert!(t.k1.norm() < 1e-6, "{t:?}");
        assert!(t.theta_normal < 1e-8);
        let (c, _) = make_clifford_legendrian_curve().unwrap();
        let t = torsion(&c, &[0.3, 0.5]).unwrap();
        assert!((t.k1.norm() - 1.0).abs() < 1e-6, "{t:?}");
    }

    #[test]
    fn omega_check_tracks_the_lagrangian_condition() {
        let s = make_boruvka();
        for gauge in [FiberGauge::n2(), FiberGauge::n1()] {
            let r = omega_check_residual(&s, &gauge, 12, 5).unwrap();
            assert!(r.omega_check < 1e-6 && r.lagrangian < 1e-6, "{}: {r:?}", gauge.name);
        }
        let r = omega_check_residual(&s, &FiberGauge::perturbed(0.2), 12, 5).unwrap();
        assert!(r.omega_check > 1e-3 && r.lagrangian > 1e-3, "{r:?}");
    }
}
