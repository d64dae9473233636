//! Homogeneous harmonic cubics on R³: the Gauss map `h ↦ K(h)`, its image, the
//! explicit fibre over a generic point, and SO(3)-stabilizer classification.
//!
//! A cubic is stored as its symmetric tensor, so the polynomial is `h_ijk x_i x_j x_k`.
//! The normal form is
//! `C(r,s,a,b) = r ω1(2ω1²−3ω2²−3ω3²) + 3s ω1(ω2²−ω3²) + a ω2(ω2²−3ω3²) + b ω3(3ω2²−ω3²)`
//! with `C = 8 h_ijk ω_i ω_j ω_k`.

use std::fmt;

use nalgebra::{Matrix2, Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::SymMat3;
use crate::tol;

pub type Tensor3 = [[[f64; 3]; 3]; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CubicError {
    #[error("tensor is not fully symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("cubic is not harmonic (trace {0:e})")]
    NotHarmonic(f64),
    #[error("K is not in the image of the Gauss map")]
    NotInImage,
    #[error("K has repeated eigenvalues {0:?}; use repeated_fiber_representative")]
    RepeatedEigenvalues([f64; 3]),
    #[error("r = {r} is outside the admissible bracket: need {lo:e} <= {mid:e} <= {hi:e}")]
    OutOfBracket { r: f64, lo: f64, mid: f64, hi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicCubic(Tensor3);

fn tensor_norm(h: &Tensor3) -> f64 {
    h.iter().flatten().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn symmetrize(h: &Tensor3) -> Tensor3 {
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] =
                    (h[i][j][k] + h[i][k][j] + h[j][i][k] + h[j][k][i] + h[k][i][j] + h[k][j][i]) / 6.0;
            }
        }
    }
    out
}

fn trace_vector(h: &Tensor3) -> [f64; 3] {
    std::array::from_fn(|k| (0..3).map(|q| h[q][q][k]).sum())
}

impl HarmonicCubic {
    /// Accepts a fully symmetric, trace-free tensor (tolerance `1e-12·max(1,‖h‖)`).
    pub fn new(h: Tensor3) -> Result<Self, CubicError> {
        let scale = tensor_norm(&h).max(1.0);
        let sym = symmetrize(&h);
        let asym = (0..27)
            .map(|n| (h[n / 9][(n / 3) % 3][n % 3] - sym[n / 9][(n / 3) % 3][n % 3]).abs())
            .fold(0.0, f64::max);
        if asym > tol::CUBIC_CONSTRUCTION * scale {
            return Err(CubicError::NotSymmetric(asym));
        }
        let tr = trace_vector(&h).iter().map(|t| t.abs()).fold(0.0, f64::max);
        if tr > tol::CUBIC_CONSTRUCTION * scale {
            return Err(CubicError::NotHarmonic(tr));
        }
        Ok(HarmonicCubic(h))
    }

    /// Symmetrize and remove the trace part. Returns the cubic and the norm of what was removed.
    pub fn project(h: &Tensor3) -> (Self, f64) {
        let sym = symmetrize(h);
        let t = trace_vector(&sym);
        let mut out = sym;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                    out[i][j][k] -= (d(i, j) * t[k] + d(i, k) * t[j] + d(j, k) * t[i]) / 5.0;
                }
            }
        }
        let mut removed = 0.0;
        for n in 0..27 {
            let (i, j, k) = (n / 9, (n / 3) % 3, n % 3);
            removed += (h[i][j][k] - out[i][j][k]).powi(2);
        }
        (HarmonicCubic(out), removed.sqrt())
    }

    pub fn zero() -> Self {
        HarmonicCubic([[[0.0; 3]; 3]; 3])
    }

    /// Build from monomial coefficients `(exponents of x,y,z, coefficient)`.
    pub fn from_polynomial(terms: &[([u32; 3], f64)]) -> Result<Self, CubicError> {
        let mut h = [[[0.0; 3]; 3]; 3];
        let fact = |n: u32| -> f64 { (1..=n).product::<u32>() as f64 };
        for (exp, c) in terms {
            assert_eq!(exp.iter().sum::<u32>(), 3, "monomial must be cubic");
            let multiplicity = 6.0 / (fact(exp[0]) * fact(exp[1]) * fact(exp[2]));
            let mut idx = Vec::new();
            for (var, &e) in exp.iter().enumerate() {
                idx.extend(std::iter::repeat_n(var, e as usize));
            }
            for p in permutations3(&[idx[0], idx[1], idx[2]]) {
                h[p[0]][p[1]][p[2]] = c / multiplicity;
            }
        }
        HarmonicCubic::new(h)
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        tensor_norm(&self.0)
    }

    pub fn scale(&self, t: f64) -> Self {
        HarmonicCubic(self.0.map(|a| a.map(|b| b.map(|x| x * t))))
    }

    pub fn add(&self, other: &HarmonicCubic) -> Self {
        let mut h = self.0;
        for n in 0..27 {
            let (i, j, k) = (n / 9, (n / 3) % 3, n % 3);
            h[i][j][k] += other.0[i][j][k];
        }
        HarmonicCubic(h)
    }

    pub fn max_abs_diff(&self, other: &HarmonicCubic) -> f64 {
        (0..27)
            .map(|n| (self.0[n / 9][(n / 3) % 3][n % 3] - other.0[n / 9][(n / 3) % 3][n % 3]).abs())
            .fold(0.0, f64::max)
    }

    /// `h(x,x,x)`.
    pub fn eval(&self, x: &Vector3<f64>) -> f64 {
        self.contract2(x).dot(x)
    }

    /// `h(x,x,·)`.
    pub fn contract2(&self, x: &Vector3<f64>) -> Vector3<f64> {
        Vector3::from_fn(|k, _| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += self.0[i][j][k] * x[i] * x[j];
                }
            }
            s
        })
    }

    /// `h(x,·,·)`.
    pub fn contract1(&self, x: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::from_fn(|j, k| (0..3).map(|i| self.0[i][j][k] * x[i]).sum())
    }

    /// The components in the frame whose vectors are the columns of `frame`.
    pub fn in_frame(&self, frame: &Matrix3<f64>) -> HarmonicCubic {
        so3_act(&frame.transpose(), self)
    }
}

impl fmt::Display for HarmonicCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = &self.0;
        write!(
            f,
            "h111={:.6} h112={:.6} h113={:.6} h122={:.6} h123={:.6} h133={:.6} h222={:.6} h223={:.6} h233={:.6} h333={:.6}",
            h[0][0][0], h[0][0][1], h[0][0][2], h[0][1][1], h[0][1][2], h[0][2][2], h[1][1][1], h[1][1][2], h[1][2][2], h[2][2][2]
        )
    }
}

fn permutations3(v: &[usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = *v;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

fn sym_set(h: &mut Tensor3, idx: [usize; 3], value: f64) {
    for p in permutations3(&idx) {
        h[p[0]][p[1]][p[2]] = value;
    }
}

/// Tensor of `C(r,s,a,b)/8`.
pub fn normal_form_eval(r: f64, s: f64, a: f64, b: f64) -> HarmonicCubic {
    let mut h = [[[0.0; 3]; 3]; 3];
    sym_set(&mut h, [0, 0, 0], r / 4.0);
    sym_set(&mut h, [0, 1, 1], (s - r) / 8.0);
    sym_set(&mut h, [0, 2, 2], -(r + s) / 8.0);
    sym_set(&mut h, [1, 1, 1], a / 8.0);
    sym_set(&mut h, [1, 2, 2], -a / 8.0);
    sym_set(&mut h, [1, 1, 2], b / 8.0);
    sym_set(&mut h, [2, 2, 2], -b / 8.0);
    HarmonicCubic(h)
}

/// Rotate all three slots: `(ρ·h)_ijk = ρ_ia ρ_jb ρ_kc h_abc`.
pub fn so3_act(rho: &Matrix3<f64>, h: &HarmonicCubic) -> HarmonicCubic {
    let mut t1 = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                t1[i][b][c] = (0..3).map(|a| rho[(i, a)] * h.0[a][b][c]).sum();
            }
        }
    }
    let mut t2 = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for c in 0..3 {
                t2[i][j][c] = (0..3).map(|b| rho[(j, b)] * t1[i][b][c]).sum();
            }
        }
    }
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = (0..3).map(|c| rho[(k, c)] * t2[i][j][c]).sum();
            }
        }
    }
    HarmonicCubic(out)
}

pub fn gauss_map(h: &HarmonicCubic) -> SymMat3 {
    let t = &h.0;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        let (j, l) = ((i + 1) % 3, (i + 2) % 3);
        k[i][i] = (0..3).map(|q| t[j][j][q] * t[l][l][q] - t[j][l][q] * t[j][l][q]).sum();
        let off: f64 = (0..3).map(|q| t[i][l][q] * t[l][j][q] - t[i][j][q] * t[l][l][q]).sum();
        k[i][j] = off;
        k[j][i] = off;
    }
    SymMat3(k)
}

/// `((Tr K)² − Tr K²)/6`.
pub fn sigma(k: &SymMat3) -> f64 {
    let tr = k.trace();
    let m = k.to_matrix();
    (tr * tr - (m * m).trace()) / 6.0
}

#[derive(Clone, Copy, Debug)]
pub struct ImageTest {
    pub trace: f64,
    pub sigma: f64,
    pub lambda1: f64,
    pub slack: f64,
    pub inside: bool,
}

pub fn gauss_image_test(k: &SymMat3) -> ImageTest {
    let n = k.norm();
    let slack = 1e-10 * (1.0 + n * n);
    let trace = k.trace();
    let sig = sigma(k);
    let lambda1 = k.eigen().values[0];
    let inside = trace <= slack && sig >= -slack && lambda1 * lambda1 <= sig + slack;
    ImageTest { trace, sigma: sig, lambda1, slack, inside }
}

pub fn in_gauss_image(k: &SymMat3) -> bool {
    gauss_image_test(k).inside
}

/// Signs of the two square roots in the generic fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSigns {
    pub h112_positive: bool,
    pub h113_positive: bool,
}

impl Default for FiberSigns {
    fn default() -> Self {
        FiberSigns { h112_positive: true, h113_positive: true }
    }
}

impl FiberSigns {
    pub fn all() -> [FiberSigns; 4] {
        [(true, true), (true, false), (false, true), (false, false)]
            .map(|(a, b)| FiberSigns { h112_positive: a, h113_positive: b })
    }
}

/// Admissible interval for `r` given distinct eigenvalues `λ1 > λ2 > λ3`.
pub fn fiber_bracket(lambda: [f64; 3]) -> (f64, f64) {
    let [l1, l2, l3] = lambda;
    let sig = ((l1 + l2 + l3).powi(2) - (l1 * l1 + l2 * l2 + l3 * l3)) / 6.0;
    let denom = 2.0 * (l1 - l3).powi(3) * (l1 - l2);
    let lo = (l1 - l3).powi(3) * (l2 * l2 - sig) / denom;
    let hi = (l1 - l2).powi(3) * (l3 * l3 - sig) / denom;
    (lo.max(0.0).sqrt(), hi.max(0.0).sqrt())
}

pub fn fiber_solve(k: &SymMat3, r: f64) -> Result<HarmonicCubic, CubicError> {
    fiber_solve_with_signs(k, r, FiberSigns::default())
}

pub fn fiber_solve_with_signs(k: &SymMat3, r: f64, signs: FiberSigns) -> Result<HarmonicCubic, CubicError> {
    if !in_gauss_image(k) {
        return Err(CubicError::NotInImage);
    }
    let eig = k.eigen();
    let [l1, l2, l3] = eig.values;
    let gap = tol::EIG_EQUAL * k.norm().max(1.0);
    if l1 - l2 < gap || l2 - l3 < gap {
        return Err(CubicError::RepeatedEigenvalues(eig.values));
    }
    let sig = sigma(k);
    let lo = (l1 - l3).powi(3) * (l2 * l2 - sig);
    let mid = 2.0 * (l1 - l3).powi(3) * (l1 - l2) * r * r;
    let hi = (l1 - l2).powi(3) * (l3 * l3 - sig);
    let slack = 1e-12 * (lo.abs() + hi.abs()).max(1e-300);
    if mid < lo - slack || mid > hi + slack {
        return Err(CubicError::OutOfBracket { r, lo, mid, hi });
    }
    let rad112 = ((l1 - l2).powi(2) * (l3 * l3 - sig) - 2.0 * (l1 - l3).powi(3) * r * r)
        / (2.0 * (l1 - l2).powi(2) * (l2 - l3));
    let rad113 = ((sig - l2 * l2) + 2.0 * (l1 - l2) * r * r) / (2.0 * (l2 - l3));
    let sign = |p: bool| if p { 1.0 } else { -1.0 };
    let h331 = r;
    let h221 = (l1 - l3) / (l1 - l2) * r;
    let h112 = sign(signs.h112_positive) * rad112.max(0.0).sqrt();
    let h332 = -(l1 - l2) / (l2 - l3) * h112;
    let h113 = sign(signs.h113_positive) * rad113.max(0.0).sqrt();
    let h223 = (l1 - l3) / (l2 - l3) * h113;
    let mut h = [[[0.0; 3]; 3]; 3];
    sym_set(&mut h, [2, 2, 0], h331);
    sym_set(&mut h, [1, 1, 0], h221);
    sym_set(&mut h, [0, 0, 0], -(h221 + h331));
    sym_set(&mut h, [0, 0, 1], h112);
    sym_set(&mut h, [2, 2, 1], h332);
    sym_set(&mut h, [1, 1, 1], -(h112 + h332));
    sym_set(&mut h, [0, 0, 2], h113);
    sym_set(&mut h, [1, 1, 2], h223);
    sym_set(&mut h, [2, 2, 2], -(h113 + h223));
    Ok(so3_act(&eig.vectors, &HarmonicCubic(h)))
}

/// A cubic over a `K` with a repeated eigenvalue, from the family `C(r,0,a,0)`; the ω1
/// axis is sent to the simple eigenvector. Covers the SO3, SO2, A4, S3 and Z3 fibres.
pub fn repeated_fiber_representative(k: &SymMat3) -> Result<HarmonicCubic, CubicError> {
    if !in_gauss_image(k) {
        return Err(CubicError::NotInImage);
    }
    let eig = k.eigen();
    let [l1, l2, l3] = eig.values;
    let gap = tol::EIG_EQUAL * k.norm().max(1.0);
    let (mu, nu, axis) = if l1 - l2 < gap {
        (0.5 * (l1 + l2), l3, 2)
    } else if l2 - l3 < gap {
        (0.5 * (l2 + l3), l1, 0)
    } else {
        return Err(CubicError::NotInImage);
    };
    let r2 = (-64.0 * mu / 3.0).max(0.0);
    let a2 = (r2 / 2.0 - 32.0 * nu).max(0.0);
    let base = normal_form_eval(r2.sqrt(), 0.0, a2.sqrt(), 0.0);
    let e1 = eig.vectors.column(axis).into_owned();
    let helper = if e1.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e2 = e1.cross(&helper).normalize();
    let e3 = e1.cross(&e2);
    let frame = Matrix3::from_columns(&[e1, e2, e3]);
    Ok(so3_act(&frame, &base))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StabilizerClass {
    SO3,
    SO2,
    A4,
    S3,
    Z3,
    Z2,
    Trivial,
}

impl fmt::Display for StabilizerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StabilizerClass::SO3 => "SO3",
            StabilizerClass::SO2 => "SO2",
            StabilizerClass::A4 => "A4",
            StabilizerClass::S3 => "S3",
            StabilizerClass::Z3 => "Z3",
            StabilizerClass::Z2 => "Z2",
            StabilizerClass::Trivial => "Trivial",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyTol {
    /// Eigenvalue equality after scaling to `Tr K = −1/2`.
    pub eig: f64,
    /// Relative snapping for `λ² = σ`.
    pub boundary: f64,
    /// Absolute norm below which `h = 0`.
    pub zero: f64,
}

impl Default for ClassifyTol {
    fn default() -> Self {
        ClassifyTol { eig: tol::EIG_EQUAL, boundary: tol::BOUNDARY, zero: tol::ZERO_CUBIC }
    }
}

pub fn classify_stabilizer(h: &HarmonicCubic) -> StabilizerClass {
    classify_stabilizer_with(h, &ClassifyTol::default())
}

pub fn classify_stabilizer_with(h: &HarmonicCubic, t: &ClassifyTol) -> StabilizerClass {
    let n = h.norm();
    if n <= t.zero {
        return StabilizerClass::SO3;
    }
    let k = gauss_map(h).scale(1.0 / (n * n));
    let [l1, l2, l3] = k.eigen().values;
    let sig = sigma(&k);
    let on_boundary = |l: f64| (l * l - sig).abs() <= t.boundary * sig.abs().max(t.eig);
    let eq12 = l1 - l2 <= t.eig;
    let eq23 = l2 - l3 <= t.eig;
    match (eq12, eq23) {
        (true, true) => StabilizerClass::A4,
        (true, false) => {
            if l1.abs() <= t.eig {
                StabilizerClass::S3
            } else {
                StabilizerClass::Z3
            }
        }
        (false, true) => {
            if on_boundary(l1) {
                StabilizerClass::SO2
            } else {
                StabilizerClass::Z3
            }
        }
        (false, false) => {
            if on_boundary(l1) || on_boundary(l2) {
                StabilizerClass::Z2
            } else {
                StabilizerClass::Trivial
            }
        }
    }
}

/// Harmonic projection of a tensor with entries uniform in `[-1, 1]`.
pub fn random_harmonic_cubic<R: Rng + ?Sized>(rng: &mut R) -> HarmonicCubic {
    let raw: Tensor3 =
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0)));
    HarmonicCubic::project(&raw).0
}

/// One representative of each row of the classification table.
pub fn table_representatives() -> Vec<(StabilizerClass, HarmonicCubic)> {
    let poly = |terms: &[([u32; 3], f64)]| HarmonicCubic::from_polynomial(terms).expect("harmonic");
    // x(2x²−3y²−3z²), 3x(y²−z²), y(y²−3z²)
    let so2 = poly(&[([3, 0, 0], 2.0), ([1, 2, 0], -3.0), ([1, 0, 2], -3.0)]);
    let a4 = poly(&[([1, 2, 0], 3.0), ([1, 0, 2], -3.0)]);
    let s3 = poly(&[([0, 3, 0], 1.0), ([0, 1, 2], -3.0)]);
    vec![
        (StabilizerClass::SO3, HarmonicCubic::zero()),
        (StabilizerClass::SO2, so2.scale(1.3)),
        (StabilizerClass::A4, a4.scale(0.7)),
        (StabilizerClass::S3, s3.scale(1.1)),
        (StabilizerClass::Z3, so2.add(&s3.scale(0.9))),
        (StabilizerClass::Z2, so2.add(&a4.scale(0.4))),
        (StabilizerClass::Trivial, normal_form_eval(1.0, 0.3, 0.7, 0.2)),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalDirection {
    pub e: Vector3<f64>,
    /// `h(e,e,e)`.
    pub value: f64,
    pub isolated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSet {
    /// Isolated directions up to sign, plus one representative per non-isolated family.
    pub directions: Vec<CriticalDirection>,
    /// The cubic vanishes, so every direction is critical.
    pub everything: bool,
}

fn tangent_basis(e: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if e.x.abs() < 0.6 { Vector3::x() } else if e.y.abs() < 0.6 { Vector3::y() } else { Vector3::z() };
    let t1 = (helper - e * e.dot(&helper)).normalize();
    let t2 = e.cross(&t1);
    (t1, t2)
}

/// Riemannian gradient components and Hessian of `f(e) = h(e,e,e)` on S².
fn sphere_derivatives(h: &HarmonicCubic, e: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>, [f64; 2], Matrix2<f64>) {
    let (t1, t2) = tangent_basis(e);
    let grad = h.contract2(e) * 3.0;
    let f = grad.dot(e) / 3.0;
    let m = h.contract1(e) * 6.0;
    let g = [grad.dot(&t1), grad.dot(&t2)];
    let hess = Matrix2::new(
        t1.dot(&(m * t1)) - 3.0 * f,
        t1.dot(&(m * t2)),
        t2.dot(&(m * t1)),
        t2.dot(&(m * t2)) - 3.0 * f,
    );
    (t1, t2, g, hess)
}

/// Newton iteration (pseudo-inverse step) towards a critical point of `h` on S².
pub fn refine_critical_direction(h: &HarmonicCubic, start: &Vector3<f64>) -> Vector3<f64> {
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let mut e = start.normalize();
    for _ in 0..60 {
        let (t1, t2, g, hess) = sphere_derivatives(h, &e);
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
        if gn <= 1e-15 * scale {
            break;
        }
        let sym = nalgebra::SymmetricEigen::new(hess);
        let mut step = [0.0; 2];
        let cutoff = 1e-8 * sym.eigenvalues.amax().max(1e-300);
        for k in 0..2 {
            let lam = sym.eigenvalues[k];
            if lam.abs() > cutoff {
                let v = sym.eigenvectors.column(k);
                let coef = -(v[0] * g[0] + v[1] * g[1]) / lam;
                step[0] += coef * v[0];
                step[1] += coef * v[1];
            }
        }
        let len = (step[0] * step[0] + step[1] * step[1]).sqrt();
        if len > 0.3 {
            step[0] *= 0.3 / len;
            step[1] *= 0.3 / len;
        }
        e = (e + t1 * step[0] + t2 * step[1]).normalize();
    }
    e
}

/// Fibonacci lattice on the unit sphere.
fn sphere_seeds(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

/// Critical points of `e ↦ h(e,e,e)` on the unit sphere, i.e. directions with
/// `h(e,e,·) ∥ e`.
pub fn critical_directions(h: &HarmonicCubic) -> CriticalSet {
    let scale = h.norm();
    if scale <= 1e-9 {
        return CriticalSet {
            directions: vec![CriticalDirection { e: Vector3::x(), value: 0.0, isolated: false }],
            everything: true,
        };
    }
    let mut found: Vec<CriticalDirection> = Vec::new();
    for seed in sphere_seeds(400) {
        let e = refine_critical_direction(h, &seed);
        let (_, _, g, hess) = sphere_derivatives(h, &e);
        if (g[0] * g[0] + g[1] * g[1]).sqrt() > 1e-10 * scale {
            continue;
        }
        let sym = nalgebra::SymmetricEigen::new(hess);
        // A degenerate critical point sits on a critical curve when Newton, started a
        // short step along a null direction, settles nearby instead of returning.
        let (t1, t2) = tangent_basis(&e);
        let probe_len = 1e-2;
        let isolated = (0..2).all(|k| {
            if sym.eigenvalues[k].abs() > 1e-6 * scale {
                return true;
            }
            let v = sym.eigenvectors.column(k);
            let probe = (e + (t1 * v[0] + t2 * v[1]) * probe_len).normalize();
            let settled = refine_critical_direction(h, &probe);
            let dist = (settled - e).norm();
            !(dist > 0.5 * probe_len && dist < 2.0 * probe_len)
        });
        let value = h.eval(&e);
        let (e, value) = if value < 0.0 { (-e, -value) } else { (e, value) };
        let duplicate = found.iter().any(|d| {
            if isolated {
                d.isolated && d.e.dot(&e).abs() > 1.0 - 1e-8
            } else {
                !d.isolated && (d.value - value).abs() <= 1e-8 * scale
            }
        });
        if !duplicate {
            found.push(CriticalDirection { e, value, isolated });
        }
    }
    found.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(std::cmp::Ordering::Equal));
    CriticalSet { directions: found, everything: false }
}

/// A frame in which `h` takes the normal form `C(r,s,a,b)/8`.
#[derive(Clone, Copy, Debug)]
pub struct NormalFormFrame {
    /// Columns `e1, e2, e3`; `e1` is a critical direction with `h(e1,e1,e1) ≥ 0`.
    pub frame: Matrix3<f64>,
    pub r: f64,
    pub s: f64,
    pub a: f64,
    pub b: f64,
    /// Residual of the entries the normal form forces to vanish.
    pub residual: f64,
}

fn frame_about(e1: &Vector3<f64>, phi: f64) -> Matrix3<f64> {
    let (t1, t2) = tangent_basis(e1);
    let e2 = t1 * phi.cos() + t2 * phi.sin();
    let e3 = e1.cross(&e2);
    Matrix3::from_columns(&[*e1, e2, e3])
}

fn read_normal_form(h: &HarmonicCubic, frame: Matrix3<f64>) -> NormalFormFrame {
    let t = h.in_frame(&frame).0;
    let s = 4.0 * (t[0][1][1] - t[0][2][2]);
    let residual = [t[0][0][1], t[0][0][2], t[0][1][2]].iter().map(|x| x.abs()).fold(0.0, f64::max);
    NormalFormFrame { frame, r: 4.0 * t[0][0][0], s, a: 8.0 * t[1][1][1], b: 8.0 * t[1][1][2], residual }
}

/// Every normal-form frame based at a critical direction, with `s ≥ 0`, and `b = 0`,
/// `a ≥ 0` whenever `s = 0`.
pub fn normal_form_frames(h: &HarmonicCubic) -> Vec<NormalFormFrame> {
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let crit = critical_directions(h);
    if crit.everything {
        return vec![NormalFormFrame { frame: Matrix3::identity(), r: 0.0, s: 0.0, a: 0.0, b: 0.0, residual: 0.0 }];
    }
    let mut out = Vec::new();
    for d in &crit.directions {
        let base = read_normal_form(h, frame_about(&d.e, 0.0));
        let t = h.in_frame(&base.frame).0;
        let (aa, bb) = (t[0][1][1] - t[0][2][2], 2.0 * t[0][1][2]);
        let candidates: Vec<f64> = if (aa * aa + bb * bb).sqrt() > 1e-9 * scale {
            let phi0 = 0.5 * bb.atan2(aa);
            vec![phi0, -phi0, phi0 + std::f64::consts::FRAC_PI_2, -phi0 + std::f64::consts::FRAC_PI_2]
        } else {
            let (a3, b3) = (t[1][1][1], t[1][1][2]);
            let phi0 = b3.atan2(a3) / 3.0;
            let third = std::f64::consts::TAU / 3.0;
            (0..3).flat_map(|k| [phi0 + k as f64 * third, -phi0 + k as f64 * third]).collect()
        };
        let mut best: Option<NormalFormFrame> = None;
        for phi in candidates {
            let nf = read_normal_form(h, frame_about(&d.e, phi));
            let t = h.in_frame(&nf.frame).0;
            let s_zero = nf.s.abs() <= 1e-9 * scale;
            let off = if s_zero { nf.b.abs() } else { (2.0 * t[0][1][2]).abs() };
            let sign_ok = if s_zero { nf.a >= -1e-12 * scale } else { nf.s >= 0.0 };
            if sign_ok && off <= 1e-9 * scale && best.is_none_or(|b| nf.residual < b.residual) {
                best = Some(nf);
            }
        }
        if let Some(b) = best {
            out.push(b);
        }
    }
    out
}
