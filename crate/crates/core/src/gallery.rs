//! Explicit examples: the coassociative sphere `L0`, the SU(2)-orbit `L1`, orbits of
//! the irreducible SO(3)-action on `Im O ≅ H³(R³)`, complex cone links and Hopf lifts,
//! and the flat Clifford torus curve.

use std::sync::Arc;

use nalgebra::Matrix3;
use num_complex::Complex64;
use thiserror::Error;

use crate::cubic_lab::{so3_act, HarmonicCubic};
use crate::geometry_jet::{pseudoholomorphic_residual, ImmersionPatch, JetError};
use crate::octonion::{e_ij, is_g2_derivation, ImOctonion, Mat7, Octonion};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error("unknown example `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("could not find a phase making the curve pseudoholomorphic (best residual {0:e})")]
    NoPhase(f64),
}

/// Three generators of an SO(3)- or SU(2)-action on `Im O`.
#[derive(Clone, Debug)]
pub struct OrbitAction {
    pub name: &'static str,
    pub generators: [Mat7; 3],
}

impl OrbitAction {
    pub fn exp(&self, k: usize, t: f64) -> Mat7 {
        (self.generators[k] * t).exp()
    }

    /// Coefficients of `[U_i, U_j]` in the generators, with the least-squares residual.
    pub fn bracket_in_span(&self, i: usize, j: usize) -> ([f64; 3], f64) {
        let (a, b) = (&self.generators[i], &self.generators[j]);
        let br = a * b - b * a;
        let cols: Vec<f64> = self.generators.iter().flat_map(|g| g.iter().copied()).collect();
        let m = nalgebra::DMatrix::from_column_slice(49, 3, &cols);
        let rhs = nalgebra::DVector::from_iterator(49, br.iter().copied());
        let sol = m.clone().svd(true, true).solve(&rhs, 1e-12).expect("svd solve");
        let residual = (&m * &sol - rhs).amax();
        ([sol[0], sol[1], sol[2]], residual)
    }

    /// Largest derivation residual among the generators.
    pub fn derivation_residual(&self) -> f64 {
        self.generators.iter().map(|g| is_g2_derivation(g).1).fold(0.0, f64::max)
    }

    /// `U1 + U2 + U3` normalized by `1/√3`.
    pub fn diagonal(&self) -> Mat7 {
        (self.generators[0] + self.generators[1] + self.generators[2]) / 3f64.sqrt()
    }
}

pub fn su2_action() -> OrbitAction {
    OrbitAction {
        name: "su2",
        generators: [
            e_ij(2, 3) * -2.0 + e_ij(4, 5) + e_ij(6, 7),
            e_ij(3, 1) * -2.0 + e_ij(4, 6) - e_ij(5, 7),
            e_ij(1, 2) * -2.0 - e_ij(4, 7) - e_ij(5, 6),
        ],
    }
}

/// The irreducible action, read off from rotations of harmonic cubics.
pub fn irreducible_action() -> OrbitAction {
    let id = CubicIdentification::new();
    OrbitAction { name: "irreducible", generators: std::array::from_fn(|k| id.generator(k)) }
}

pub fn orbit_actions() -> (OrbitAction, OrbitAction) {
    (su2_action(), irreducible_action())
}

/// The isometry `Im O → H³(R³)`. The seventh basis cubic is `+½ z(z²−3y²)`; this is
/// the sign for which rotations of the variables act through `G₂`.
#[derive(Clone, Debug)]
pub struct CubicIdentification {
    basis: [HarmonicCubic; 7],
}

impl Default for CubicIdentification {
    fn default() -> Self {
        Self::new()
    }
}

impl CubicIdentification {
    pub fn new() -> Self {
        let (r6, r10, r15) = (6f64.sqrt(), 10f64.sqrt(), 15f64.sqrt());
        let poly = |t: &[([u32; 3], f64)]| HarmonicCubic::from_polynomial(t).expect("harmonic");
        let basis = [
            // √10/10 · x(2x²−3y²−3z²)
            poly(&[([3, 0, 0], 2.0 * r10 / 10.0), ([1, 2, 0], -3.0 * r10 / 10.0), ([1, 0, 2], -3.0 * r10 / 10.0)]),
            // −√6 · xyz
            poly(&[([1, 1, 1], -r6)]),
            // √6/2 · x(y²−z²)
            poly(&[([1, 2, 0], r6 / 2.0), ([1, 0, 2], -r6 / 2.0)]),
            // −√15/10 · y(4x²−y²−z²)
            poly(&[([2, 1, 0], -4.0 * r15 / 10.0), ([0, 3, 0], r15 / 10.0), ([0, 1, 2], r15 / 10.0)]),
            // −√15/10 · z(4x²−y²−z²)
            poly(&[([2, 0, 1], -4.0 * r15 / 10.0), ([0, 2, 1], r15 / 10.0), ([0, 0, 3], r15 / 10.0)]),
            // ½ · y(y²−3z²)
            poly(&[([0, 3, 0], 0.5), ([0, 1, 2], -1.5)]),
            // ½ · z(z²−3y²)
            poly(&[([0, 0, 3], 0.5), ([0, 2, 1], -1.5)]),
        ];
        CubicIdentification { basis }
    }

    pub fn basis(&self) -> &[HarmonicCubic; 7] {
        &self.basis
    }

    pub fn to_cubic(&self, v: &ImOctonion) -> HarmonicCubic {
        (0..7).fold(HarmonicCubic::zero(), |acc, k| acc.add(&self.basis[k].scale(v[k])))
    }

    pub fn from_cubic(&self, h: &HarmonicCubic) -> ImOctonion {
        ImOctonion::from_array(std::array::from_fn(|k| inner(&self.basis[k], h)))
    }

    /// Matrix of the derivation `p ↦ (Mx)·∇p` in the basis.
    pub fn rotation_generator(&self, m: &Matrix3<f64>) -> Mat7 {
        let images: Vec<HarmonicCubic> = self.basis.iter().map(|c| vector_field_derivative(c, m)).collect();
        Mat7::from_fn(|i, j| inner(&self.basis[i], &images[j]))
    }

    /// Generator `k` of the irreducible action: twice the infinitesimal rotation
    /// about axis `k`, so `G3` acts as `2(x∂y − y∂x)`.
    pub fn generator(&self, k: usize) -> Mat7 {
        self.rotation_generator(&rotation_field(k))
    }
}

/// Skew matrix `M` with `(Mx)·∇ = 2(x_j∂_i − x_i∂_j)` for the cyclic pair after axis `k`.
pub fn rotation_field(k: usize) -> Matrix3<f64> {
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let mut m = Matrix3::zeros();
    m[(j, i)] = 2.0;
    m[(i, j)] = -2.0;
    m
}

fn inner(a: &HarmonicCubic, b: &HarmonicCubic) -> f64 {
    let (ta, tb) = (a.tensor(), b.tensor());
    (0..27).map(|n| ta[n / 9][(n / 3) % 3][n % 3] * tb[n / 9][(n / 3) % 3][n % 3]).sum()
}

fn vector_field_derivative(h: &HarmonicCubic, m: &Matrix3<f64>) -> HarmonicCubic {
    let t = h.tensor();
    let mut raw = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                raw[i][j][l] = 3.0 * (0..3).map(|k| t[i][j][k] * m[(k, l)]).sum::<f64>();
            }
        }
    }
    HarmonicCubic::project(&raw).0
}

/// `x(t) = exp(t1 A1) ⋯ exp(tn An) x0` with analytic first and second derivatives.
#[derive(Clone)]
struct ExpChart {
    gens: Vec<Mat7>,
    x0: ImOctonion,
}

impl ExpChart {
    fn factors(&self, t: &[f64]) -> Vec<Mat7> {
        self.gens.iter().zip(t).map(|(g, s)| (g * *s).exp()).collect()
    }

    /// Product of all factors applied to `x0`, with `A_k` inserted next to factor `k`
    /// for each `k` in `marks`.
    fn product(&self, f: &[Mat7], marks: &[usize]) -> ImOctonion {
        let mut v = self.x0.0;
        for k in (0..f.len()).rev() {
            v = f[k] * v;
            for &m in marks {
                if m == k {
                    v = self.gens[k] * v;
                }
            }
        }
        ImOctonion(v)
    }

    fn eval(&self, t: &[f64]) -> ImOctonion {
        self.product(&self.factors(t), &[])
    }

    fn first(&self, t: &[f64]) -> Vec<ImOctonion> {
        let f = self.factors(t);
        (0..t.len()).map(|k| self.product(&f, &[k])).collect()
    }

    fn second(&self, t: &[f64]) -> Vec<Vec<ImOctonion>> {
        let f = self.factors(t);
        let n = t.len();
        (0..n).map(|a| (0..n).map(|b| self.product(&f, &[a, b])).collect()).collect()
    }

    fn patch(self, name: &str, domain: Vec<[f64; 2]>) -> ImmersionPatch {
        let (c1, c2, c3) = (self.clone(), self.clone(), self);
        ImmersionPatch::new(name, domain, move |t: &[f64]| c1.eval(t))
            .with_first(move |t: &[f64]| c2.first(t))
            .with_second(move |t: &[f64]| c3.second(t))
    }
}

/// Point of `L0` with coordinates `(y1, y3, y5, y7)`.
pub fn l0_point(y: [f64; 4]) -> ImOctonion {
    ImOctonion::e(1) * y[0] + ImOctonion::e(3) * y[1] + ImOctonion::e(5) * y[2] + ImOctonion::e(7) * y[3]
}

fn hyperspherical(c: &[f64]) -> ([f64; 4], [[f64; 4]; 3]) {
    let (chi, th, ph) = (c[0], c[1], c[2]);
    let (sc, cc, st, ct, sp, cp) = (chi.sin(), chi.cos(), th.sin(), th.cos(), ph.sin(), ph.cos());
    let y = [cc, sc * ct, sc * st * cp, sc * st * sp];
    let d = [
        [-sc, cc * ct, cc * st * cp, cc * st * sp],
        [0.0, -sc * st, sc * ct * cp, sc * ct * sp],
        [0.0, 0.0, -sc * st * sp, sc * st * cp],
    ];
    (y, d)
}

/// The totally geodesic coassociative sphere through `ε1, ε3, ε5, ε7`.
pub fn make_l0() -> ImmersionPatch {
    ImmersionPatch::new("L0", vec![[0.3, 2.8], [0.3, 2.8], [0.0, 6.0]], |c: &[f64]| l0_point(hyperspherical(c).0))
        .with_first(|c: &[f64]| hyperspherical(c).1.iter().map(|d| l0_point(*d)).collect())
        .oriented()
}

fn quaternion(x: [f64; 4]) -> Octonion {
    Octonion([x[0], x[1], x[2], x[3], 0.0, 0.0, 0.0, 0.0])
}

/// `(√5/3) q̄ε1q + (2/3) qε5` for a quaternion `q = x1 + x2ε1 + x3ε2 + x4ε3`.
pub fn l1_map(q: &Octonion) -> ImOctonion {
    let s5 = 5f64.sqrt();
    let e1 = Octonion::basis(1);
    let e5 = Octonion::basis(5);
    q.conj().mul(&e1).mul(q).scale(s5 / 3.0).add(&q.mul(&e5).scale(2.0 / 3.0)).im()
}

/// Derivative of [`l1_map`] at `q` along `w`.
pub fn l1_differential(q: &Octonion, w: &Octonion) -> ImOctonion {
    let s5 = 5f64.sqrt();
    let e1 = Octonion::basis(1);
    let e5 = Octonion::basis(5);
    let a = w.conj().mul(&e1).mul(q).add(&q.conj().mul(&e1).mul(w));
    a.scale(s5 / 3.0).add(&w.mul(&e5).scale(2.0 / 3.0)).im()
}

/// Gram matrix of the `L1` differential on the three quaternion directions
/// `w1 = (x2,−x1,x4,−x3)`, `w2 = (x3,−x4,−x1,x2)`, `w3 = (x4,x3,−x2,−x1)` at a unit `x`.
pub fn l1_w_metric(x: [f64; 4]) -> [[f64; 3]; 3] {
    let [x1, x2, x3, x4] = x;
    let w = [[x2, -x1, x4, -x3], [x3, -x4, -x1, x2], [x4, x3, -x2, -x1]];
    let q = quaternion(x);
    let d: Vec<ImOctonion> = w.iter().map(|wi| l1_differential(&q, &quaternion(*wi))).collect();
    std::array::from_fn(|i| std::array::from_fn(|j| d[i].dot(&d[j])))
}

fn unit_exp(k: usize, t: f64) -> Octonion {
    let mut o = Octonion::zero();
    o.0[0] = t.cos();
    o.0[k] = t.sin();
    o
}

/// Euler chart `q = e^{αε1} e^{βε2} e^{γε1}`; the `α`-lines are the ruling circles.
pub fn l1_chart(c: &[f64]) -> (Octonion, [Octonion; 3]) {
    let (a, b, g) = (unit_exp(1, c[0]), unit_exp(2, c[1]), unit_exp(1, c[2]));
    let q = a.mul(&b).mul(&g);
    let e1 = Octonion::basis(1);
    let e2 = Octonion::basis(2);
    let dq = [e1.mul(&q), a.mul(&e2).mul(&b).mul(&g), q.mul(&e1)];
    (q, dq)
}

pub fn make_l1() -> ImmersionPatch {
    ImmersionPatch::new("L1", vec![[0.1, 3.0], [0.1, 1.45], [0.1, 3.0]], |c: &[f64]| l1_map(&l1_chart(c).0))
        .with_first(|c: &[f64]| {
            let (q, dq) = l1_chart(c);
            dq.iter().map(|w| l1_differential(&q, w)).collect()
        })
        .oriented()
}

/// Chart `exp(aG3) exp(bG1) exp(cV) ε2` of the orbit of `−√6 xyz`, where `V` is the
/// normalized diagonal generator; the `c`-lines are the ruling circles.
pub fn make_l2() -> ImmersionPatch {
    let act = irreducible_action();
    let gens = vec![act.generators[2], act.generators[0], act.diagonal()];
    ExpChart { gens, x0: ImOctonion::e(2) }
        .patch("L2", vec![[0.1, 1.2], [0.1, 1.2], [0.05, 1.0]])
        .oriented()
}

/// Chart `exp(aG1) exp(bG3) ε1` of the orbit of `x(2x²−3y²−3z²)`; `G1` fixes `ε1`.
pub fn make_boruvka() -> ImmersionPatch {
    let act = irreducible_action();
    let gens = vec![act.generators[0], act.generators[2]];
    ExpChart { gens, x0: ImOctonion::e(1) }.patch("boruvka", vec![[0.05, 3.05], [0.1, 1.45]])
}

/// Orbit of `ε6` under the irreducible action, computed numerically.
pub fn make_e6_orbit() -> ImmersionPatch {
    let act = irreducible_action();
    // ZXZ-type chart; `exp(aG3) exp(bG1) exp(cG2)` folds inside the box.
    let gens = vec![act.generators[2], act.generators[0], act.generators[2]];
    ExpChart { gens, x0: ImOctonion::e(6) }
        .patch("e6_orbit", vec![[0.1, 1.5], [0.1, 1.45], [0.1, 1.5]])
        .oriented()
}

/// `(x1, z1, z2, z3) ↦ x1 ε1 + Σ (Re z_k ε_{2k} + Im z_k ε_{2k+1})`. In these coordinates
/// `ε1×` acts on `C³` as multiplication by `i`.
pub fn from_c3(x1: f64, z: &[Complex64; 3]) -> ImOctonion {
    ImOctonion::from_array([x1, z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im])
}

pub type HoloFn = dyn Fn(Complex64) -> [Complex64; 3] + Send + Sync;

/// A holomorphic map `C ⊃ U → C³∖{0}` with its derivative.
#[derive(Clone)]
pub struct HolomorphicCurve {
    pub name: String,
    pub c: Arc<HoloFn>,
    pub dc: Arc<HoloFn>,
}

impl HolomorphicCurve {
    pub fn new(
        name: impl Into<String>,
        c: impl Fn(Complex64) -> [Complex64; 3] + Send + Sync + 'static,
        dc: impl Fn(Complex64) -> [Complex64; 3] + Send + Sync + 'static,
    ) -> Self {
        HolomorphicCurve { name: name.into(), c: Arc::new(c), dc: Arc::new(dc) }
    }

    /// Named presets: `normal` `(1,w,w²)`, `cubic` `(1,w,w³)`, `plane` `(1,w,0)`,
    /// `veronese` `(1−w², i(1+w²), 2w)`.
    pub fn preset(name: &str) -> Option<Self> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::i();
        Some(match name {
            "normal" => Self::new(name, move |w| [one, w, w * w], move |w| [zero, one, w * 2.0]),
            "cubic" => Self::new(name, move |w| [one, w, w * w * w], move |w| [zero, one, w * w * 3.0]),
            "plane" => Self::new(name, move |w| [one, w, zero], move |_| [zero, one, zero]),
            "veronese" => Self::new(
                name,
                move |w| [one - w * w, i * (one + w * w), w * 2.0],
                move |w| [-w * 2.0, i * w * 2.0, one * 2.0],
            ),
            _ => return None,
        })
    }
}

fn hermitian(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    (0..3).map(|k| a[k].conj() * b[k]).sum()
}

/// Cone link `(u, v, θ) ↦ e^{iθ} c(w)/|c(w)|` with `w = u + iv`.
pub fn make_holomorphic_cone_link(
    curve: &HolomorphicCurve,
    domain: Vec<[f64; 2]>,
) -> Result<ImmersionPatch, GalleryError> {
    let (c1, c2) = (curve.c.clone(), curve.c.clone());
    let dc = curve.dc.clone();
    let map = move |p: &[f64]| {
        let w = Complex64::new(p[0], p[1]);
        let c = c1(w);
        let n = hermitian(&c, &c).re.sqrt();
        let ph = Complex64::from_polar(1.0 / n, p[2]);
        from_c3(0.0, &c.map(|z| z * ph))
    };
    let first = move |p: &[f64]| {
        let w = Complex64::new(p[0], p[1]);
        let c = c2(w);
        let d = dc(w);
        let n = hermitian(&c, &c).re.sqrt();
        let ph = Complex64::from_polar(1.0, p[2]);
        let along = |dv: [Complex64; 3]| {
            let radial = hermitian(&c, &dv).re / (n * n * n);
            from_c3(0.0, &std::array::from_fn(|k| ph * (dv[k] / n - c[k] * radial)))
        };
        let i = Complex64::i();
        vec![along(d), along(d.map(|z| z * i)), from_c3(0.0, &c.map(|z| z * ph * i / n))]
    };
    let patch = ImmersionPatch::new(format!("cone_link:{}", curve.name), domain, map).with_first(first);
    for q in patch.grid(2).iter().chain(std::iter::once(&patch.center())) {
        patch.frame(q)?;
    }
    Ok(patch.oriented())
}

pub fn cone_link_domain() -> Vec<[f64; 2]> {
    vec![[-0.7, 0.7], [-0.7, 0.7], [0.1, 6.1]]
}

/// Hopf lift of the Veronese conic `{z1² + z2² + z3² = 0}`.
pub fn make_veronese_hopf_lift() -> ImmersionPatch {
    let curve = HolomorphicCurve::preset("veronese").expect("preset");
    make_holomorphic_cone_link(&curve, cone_link_domain()).expect("veronese lift is immersed").renamed("veronese")
}

/// `(θ1, θ2) ↦ (e^{iα}e^{iθ1}, e^{iθ2}, e^{−i(θ1+θ2)})/√3` in `C³ ⊂ Im O`.
pub fn clifford_curve(alpha: f64) -> ImmersionPatch {
    let s = 1.0 / 3f64.sqrt();
    let pt = move |t: &[f64]| {
        [
            Complex64::from_polar(s, alpha + t[0]),
            Complex64::from_polar(s, t[1]),
            Complex64::from_polar(s, -(t[0] + t[1])),
        ]
    };
    let pt2 = pt;
    ImmersionPatch::new("clifford", vec![[0.0, 6.0], [0.0, 6.0]], move |t: &[f64]| from_c3(0.0, &pt(t))).with_first(
        move |t: &[f64]| {
            let z = pt2(t);
            let i = Complex64::i();
            vec![
                from_c3(0.0, &[i * z[0], Complex64::new(0.0, 0.0), -i * z[2]]),
                from_c3(0.0, &[Complex64::new(0.0, 0.0), i * z[1], -i * z[2]]),
            ]
        },
    )
}

/// The Clifford curve with its phase chosen by a 1D search so that it is pseudoholomorphic.
pub fn make_clifford_legendrian_curve() -> Result<(ImmersionPatch, f64), GalleryError> {
    let score = |a: f64| pseudoholomorphic_residual(&clifford_curve(a), 3).unwrap_or(f64::INFINITY);
    let samples = 72;
    let step = std::f64::consts::TAU / samples as f64;
    let (mut best_a, mut best) = (0.0, f64::INFINITY);
    for k in 0..samples {
        let a = k as f64 * step;
        let v = score(a);
        if v < best {
            (best_a, best) = (a, v);
        }
    }
    // Golden-section refinement on the bracketing interval.
    let (mut lo, mut hi) = (best_a - step, best_a + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if score(m1) <= score(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let mid = 0.5 * (lo + hi);
    let (alpha, res) = if score(mid) < best { (mid, score(mid)) } else { (best_a, best) };
    // Report the phase in (−π, π] so that a phase of 0 is not printed as 2π.
    let alpha = alpha.rem_euclid(std::f64::consts::TAU);
    let alpha = if alpha > std::f64::consts::PI { alpha - std::f64::consts::TAU } else { alpha };
    if res > 1e-8 {
        return Err(GalleryError::NoPhase(res));
    }
    Ok((clifford_curve(alpha), alpha))
}

/// Round sphere in `span(ε_i, ε_j, ε_k)` (1-based), polar coordinates about `ε_k`.
pub fn coordinate_sphere(name: &str, idx: [usize; 3]) -> ImmersionPatch {
    let [i, j, k] = idx.map(ImOctonion::e);
    ImmersionPatch::new(name, vec![[0.3, 2.8], [0.0, 6.0]], move |q: &[f64]| {
        i * (q[0].sin() * q[1].cos()) + j * (q[0].sin() * q[1].sin()) + k * q[0].cos()
    })
    .with_first(move |q: &[f64]| {
        vec![
            i * (q[0].cos() * q[1].cos()) + j * (q[0].cos() * q[1].sin()) - k * q[0].sin(),
            i * (-q[0].sin() * q[1].sin()) + j * (q[0].sin() * q[1].cos()),
        ]
    })
}

/// Totally geodesic pseudoholomorphic sphere in the associative 3-plane `span(ε1,ε2,ε3)`.
pub fn make_associative_sphere() -> ImmersionPatch {
    coordinate_sphere("associative_s2", [1, 2, 3])
}

/// A totally real great sphere inside `L0`.
pub fn make_totally_real_sphere() -> ImmersionPatch {
    coordinate_sphere("totally_real_s2", [1, 3, 5])
}

/// Rotation of `R³` matching `exp(t G_k)` on cubics: `exp(tG_k)` sends the cubic `p` to
/// `x ↦ p(exp(t M_k)x)`.
pub fn rotation_for(k: usize, t: f64) -> Matrix3<f64> {
    (rotation_field(k) * -t).exp()
}

/// Applies the rotation picture: `so3_act(exp(−tM_k), C(v))`.
pub fn rotate_cubic(k: usize, t: f64, h: &HarmonicCubic) -> HarmonicCubic {
    so3_act(&rotation_for(k, t), h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry_jet::lagrangian_residual;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_derivations_closing_into_their_span() {
        for act in [su2_action(), irreducible_action()] {
            assert!(act.derivation_residual() < 1e-12, "{}", act.name);
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                let (c, res) = act.bracket_in_span(i, j);
                assert!(res < 1e-12, "{} [{i},{j}]", act.name);
                for x in c {
                    assert!((x - x.round()).abs() < 1e-12, "{} non-integer {x}", act.name);
                }
            }
        }
    }

    #[test]
    fn printed_irreducible_u1_is_not_a_derivation() {
        let printed = e_ij(3, 2) * 4.0 + e_ij(5, 4) * 2.0 + e_ij(7, 6) * 6.0;
        let (ok, res) = is_g2_derivation(&printed);
        assert!(!ok && res > 0.5, "{res}");
    }

    #[test]
    fn identification_is_an_isometry() {
        let id = CubicIdentification::new();
        for i in 0..7 {
            for j in 0..7 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&id.basis()[i], &id.basis()[j]) - want).abs() < 1e-14);
            }
        }
        let v = ImOctonion::from_array([0.3, -1.0, 0.2, 0.7, 0.0, -0.4, 1.1]);
        assert!((id.from_cubic(&id.to_cubic(&v)) - v).norm() < 1e-14);
    }

    #[test]
    fn exponentials_intertwine_rotations_of_cubics() {
        let id = CubicIdentification::new();
        let act = irreducible_action();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let v = ImOctonion::from_array(std::array::from_fn(|_| rng.random::<f64>() - 0.5));
            let k = rng.random_range(0..3);
            let t = rng.random::<f64>() * 3.0;
            let moved = id.to_cubic(&v.transform(&act.exp(k, t)));
            assert!(moved.max_abs_diff(&rotate_cubic(k, t, &id.to_cubic(&v))) < 1e-12);
            let m = act.exp(k, t);
            assert!((m.transpose() * m - Mat7::identity()).amax() < 1e-12);
        }
    }

    #[test]
    fn analytic_derivatives_agree_with_finite_differences() {
        for p in [make_l0(), make_l1(), make_l2(), make_boruvka(), make_e6_orbit(), make_veronese_hopf_lift()] {
            let fd = p.clone().finite_difference_only();
            for q in p.grid(2) {
                for (a, b) in p.first(&q).iter().zip(fd.first(&q)) {
                    assert!((*a - b).norm() < 1e-7, "{}", p.name());
                }
            }
        }
    }

    #[test]
    fn l0_spans_the_coassociative_four_plane() {
        let l0 = make_l0();
        for q in l0.grid(3) {
            let x = l0.eval(&q);
            assert!(x[1].abs() + x[3].abs() + x[5].abs() < 1e-15);
            assert!((x.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn l1_w_metric_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let x: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() - 0.5);
            let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let g = l1_w_metric(x.map(|v| v / n));
            let want = [4.0 / 9.0, 8.0 / 3.0, 8.0 / 3.0];
            for i in 0..3 {
                for j in 0..3 {
                    assert!((g[i][j] - if i == j { want[i] } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn clifford_phase_is_zero() {
        let (curve, alpha) = make_clifford_legendrian_curve().unwrap();
        assert!(alpha.abs() < 1e-6, "{alpha}");
        assert!(pseudoholomorphic_residual(&curve, 8).unwrap() < 1e-8);
        assert!(pseudoholomorphic_residual(&clifford_curve(1.0), 4).unwrap() > 0.1);
    }

    #[test]
    fn cone_links() {
        assert!(HolomorphicCurve::preset("quartic").is_none());
        for name in ["normal", "cubic", "plane", "veronese"] {
            let c = HolomorphicCurve::preset(name).unwrap();
            let w = Complex64::new(0.2, -0.3);
            let h = 1e-6;
            let fd = (c.c)(w + h);
            let (f0, d) = ((c.c)(w), (c.dc)(w));
            for k in 0..3 {
                assert!(((fd[k] - f0[k]) / h - d[k]).norm() < 1e-5, "{name}");
            }
            let l = make_holomorphic_cone_link(&c, cone_link_domain()).unwrap();
            assert!(lagrangian_residual(&l, 5).unwrap() < 1e-12, "{name}");
        }
    }

    #[test]
    fn boruvka_is_pseudoholomorphic() {
        assert!(pseudoholomorphic_residual(&make_boruvka(), 8).unwrap() < 1e-10);
        assert!(pseudoholomorphic_residual(&make_totally_real_sphere(), 4).unwrap() > 0.5);
        assert!(pseudoholomorphic_residual(&make_associative_sphere(), 4).unwrap() < 1e-12);
    }
}
