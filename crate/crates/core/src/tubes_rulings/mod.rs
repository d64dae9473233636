//! Tubes over pseudoholomorphic curves, ruling detection, circle fits and the fiber ODE,
//! plus adapted frames and torsion (in [`frames`]) and G₂ alignment (in [`alignment`]).

mod alignment;
mod frames;

pub use alignment::*;
pub use frames::*;

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, Vector3};
use thiserror::Error;

use crate::cubic_lab::{critical_directions, refine_critical_direction};
use crate::gallery::make_boruvka;
use crate::geometry_jet::{fundamental_cubic, ImmersionPatch, JetError};
use crate::linalg::gram_schmidt;
use crate::octonion::{cross, ImOctonion, Mat7};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TubeError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("curve is totally geodesic here (|h| = {0:e})")]
    TotallyGeodesic(f64),
    #[error("frame fails unitarity by {0:e}")]
    NotUnitary(f64),
    #[error("θ1 is too small to read off torsion ({0:e})")]
    SmallTheta(f64),
    #[error("tube radius {0} is outside (0, π/2]")]
    BadRadius(f64),
    #[error("base curve leaves the equatorial S⁵ by {0:e}")]
    NotInS5(f64),
    #[error("circle fit needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("points are rank deficient (singular value ratio {0:e})")]
    RankDeficient(f64),
    #[error("fiber ODE fails to close by {0:e}")]
    OdeClosure(f64),
    #[error("no ruling direction near the start point")]
    NoRuling,
}

/// Which 2-plane bundle along the curve the tube is built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneBundle {
    /// `span(n1, n2)`, the image of the second fundamental form.
    N1,
    /// `span(b1, b2)`.
    N2,
    /// `span(ε1, ε1 × u)`, for curves in the S⁵ orthogonal to `ε1`.
    Hopf,
}

impl std::fmt::Display for PlaneBundle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PlaneBundle::N1 => "N1",
            PlaneBundle::N2 => "N2",
            PlaneBundle::Hopf => "hopf",
        })
    }
}

impl std::str::FromStr for PlaneBundle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "N1" | "n1" => Ok(PlaneBundle::N1),
            "N2" | "n2" => Ok(PlaneBundle::N2),
            "hopf" | "Hopf" => Ok(PlaneBundle::Hopf),
            _ => Err(format!("unknown bundle `{s}` (expected N1, N2 or hopf)")),
        }
    }
}

/// Accepts `pi/2`, `asin(2/3)` or a plain number of radians.
pub fn parse_gamma(s: &str) -> Result<f64, String> {
    match s.trim() {
        "pi/2" => Ok(FRAC_PI_2),
        "asin(2/3)" => Ok((2.0f64 / 3.0).asin()),
        other => other.parse::<f64>().map_err(|e| format!("bad tube radius `{other}`: {e}")),
    }
}

#[derive(Clone, Debug)]
pub struct TubeSpec {
    pub base: ImmersionPatch,
    pub bundle: PlaneBundle,
    pub gamma: f64,
}

/// Orthonormal `(v1, v2)` spanning the bundle at `params`.
pub fn bundle_frame(
    base: &ImmersionPatch,
    bundle: PlaneBundle,
    params: &[f64],
) -> Result<(ImOctonion, ImOctonion, ImOctonion), TubeError> {
    // Finite-difference second derivatives leave the plane orthonormal only to ~1e-12;
    // re-orthonormalize so tube points lie on the sphere to rounding.
    let clean = |u: ImOctonion, v1: ImOctonion, v2: ImOctonion| {
        let on = gram_schmidt(&[u, v1, v2], crate::tol::RANK).map_err(TubeError::RankDeficient)?;
        Ok((on[0], on[1], on[2]))
    };
    match bundle {
        PlaneBundle::N1 => {
            let f = pholo_frame(base, params, 0.0)?;
            clean(f.u, f.n1, f.n2)
        }
        PlaneBundle::N2 => {
            let f = pholo_frame(base, params, 0.0)?;
            clean(f.u, f.b1, f.b2)
        }
        PlaneBundle::Hopf => {
            let u = *base.point(params)?.get();
            let e1 = ImOctonion::e(1);
            let off = u.dot(&e1).abs();
            if off > 1e-8 {
                return Err(TubeError::NotInS5(off));
            }
            Ok((u, e1, cross(&e1, &u)))
        }
    }
}

/// `(s, t) ↦ cos γ u(s) + sin γ (cos t v1(s) + sin t v2(s))` with `t ∈ [0.1, 6.1]`.
pub fn make_tube(tube: &TubeSpec) -> Result<ImmersionPatch, TubeError> {
    let TubeSpec { base, bundle, gamma } = tube.clone();
    if !(gamma > 0.0 && gamma <= FRAC_PI_2 + 1e-15) {
        return Err(TubeError::BadRadius(gamma));
    }
    if base.dim() != 2 {
        return Err(JetError::WrongDimension { expected: 2, got: base.dim() }.into());
    }
    bundle_frame(&base, bundle, &base.center())?;
    let mut domain = base.domain().to_vec();
    domain.push([0.1, 6.1]);
    let name = format!("tube:{}:{}:{:.6}", base.name(), bundle, gamma);
    let (cg, sg) = (gamma.cos(), gamma.sin());
    let tube = ImmersionPatch::new(name, domain, move |q: &[f64]| match bundle_frame(&base, bundle, &q[..2]) {
        Ok((u, v1, v2)) => u * cg + (v1 * q[2].cos() + v2 * q[2].sin()) * sg,
        // Off-sphere value; surfaces as an error from any checked evaluation.
        Err(_) => ImOctonion::zero(),
    });
    for q in tube.grid(2).iter().chain(std::iter::once(&tube.center())) {
        tube.frame(q)?;
    }
    Ok(tube.oriented())
}

fn boruvka_tube(bundle: PlaneBundle, gamma: f64, name: &str) -> ImmersionPatch {
    make_tube(&TubeSpec { base: make_boruvka(), bundle, gamma })
        .expect("tubes over the Borůvka sphere are immersed")
        .renamed(name)
}

/// Tube of radius `π/2` in `N2` over the Borůvka sphere.
pub fn make_l4_boruvka() -> ImmersionPatch {
    boruvka_tube(PlaneBundle::N2, FRAC_PI_2, "L4_boruvka")
}

/// Tube of radius `asin(2/3)` in `N2` over the Borůvka sphere.
pub fn make_l5_boruvka() -> ImmersionPatch {
    boruvka_tube(PlaneBundle::N2, (2.0f64 / 3.0).asin(), "L5_boruvka")
}

/// Tube of radius `π/2` in `N1` over the Borůvka sphere.
pub fn make_n1_boruvka() -> ImmersionPatch {
    boruvka_tube(PlaneBundle::N1, FRAC_PI_2, "N1_boruvka")
}

/// `λ = 4(16 + r²)^{-1/2}`.
pub fn ruling_radius(r: f64) -> f64 {
    4.0 / (16.0 + r * r).sqrt()
}

/// A unit tangent direction `e` with `II(e,e) ∥ Je`, and the radius of its circle.
#[derive(Clone, Copy, Debug)]
pub struct Ruling {
    pub direction: ImOctonion,
    /// Components of `direction` in the patch frame.
    pub coords: Vector3<f64>,
    /// `r = 4 ĥ(e,e,e) ≥ 0`.
    pub r: f64,
    pub lambda: f64,
    pub isolated: bool,
}

#[derive(Clone, Debug)]
pub struct RulingSet {
    pub rulings: Vec<Ruling>,
    /// The cubic vanishes, so every direction qualifies (with `λ = 1`).
    pub everything: bool,
}

impl RulingSet {
    pub fn with_lambda(&self, lambda: f64, tol: f64) -> Vec<&Ruling> {
        self.rulings.iter().filter(|r| (r.lambda - lambda).abs() <= tol).collect()
    }

    pub fn has_non_isolated(&self) -> bool {
        self.everything || self.rulings.iter().any(|r| !r.isolated)
    }
}

/// Pointwise candidates: critical directions of the fundamental cubic, up to sign.
pub fn detect_ruling(l: &ImmersionPatch, params: &[f64]) -> Result<RulingSet, TubeError> {
    let cubic = fundamental_cubic(l, params)?;
    let h = cubic.harmonic().0;
    let crit = critical_directions(&h);
    let e = &cubic.frame.e;
    let rulings = crit
        .directions
        .iter()
        .map(|d| {
            let r = 4.0 * d.value;
            Ruling {
                direction: e[0] * d.e[0] + e[1] * d.e[1] + e[2] * d.e[2],
                coords: d.e,
                r,
                lambda: ruling_radius(r),
                isolated: d.isolated,
            }
        })
        .collect();
    Ok(RulingSet { rulings, everything: crit.everything })
}

/// Points along a coordinate line through `params`, `n` samples over `span`.
pub fn coordinate_fiber(patch: &ImmersionPatch, params: &[f64], axis: usize, span: f64, n: usize) -> Vec<ImOctonion> {
    (0..n)
        .map(|k| {
            let mut q = params.to_vec();
            q[axis] += span * k as f64 / n as f64;
            patch.eval(&q)
        })
        .collect()
}

/// Parameter velocity of the critical direction nearest to `prev`, and that direction.
fn ruling_velocity(l: &ImmersionPatch, q: &[f64], prev: &ImOctonion) -> Result<(Vec<f64>, ImOctonion), TubeError> {
    let cubic = fundamental_cubic(l, q)?;
    let h = cubic.harmonic().0;
    let e = &cubic.frame.e;
    let c = Vector3::new(e[0].dot(prev), e[1].dot(prev), e[2].dot(prev));
    let mut d = refine_critical_direction(&h, &c);
    if d.dot(&c) < 0.0 {
        d = -d;
    }
    let v = &cubic.frame.coeff * DMatrix::from_column_slice(3, 1, d.as_slice());
    Ok((v.iter().copied().collect(), e[0] * d[0] + e[1] * d[1] + e[2] * d[2]))
}

/// Follows the ruling with radius nearest `lambda` by RK4 in arc length.
pub fn trace_ruling(
    l: &ImmersionPatch,
    params: &[f64],
    lambda: f64,
    ds: f64,
    steps: usize,
) -> Result<Vec<ImOctonion>, TubeError> {
    let set = detect_ruling(l, params)?;
    let start = set
        .rulings
        .iter()
        .filter(|r| r.isolated)
        .min_by(|a, b| (a.lambda - lambda).abs().total_cmp(&(b.lambda - lambda).abs()))
        .ok_or(TubeError::NoRuling)?;
    let mut q = params.to_vec();
    let mut dir = start.direction;
    let mut out = vec![l.eval(&q)];
    let axpy = |q: &[f64], k: &[f64], s: f64| q.iter().zip(k).map(|(a, b)| a + s * b).collect::<Vec<_>>();
    for _ in 0..steps {
        let (k1, d1) = ruling_velocity(l, &q, &dir)?;
        let (k2, d2) = ruling_velocity(l, &axpy(&q, &k1, 0.5 * ds), &d1)?;
        let (k3, d3) = ruling_velocity(l, &axpy(&q, &k2, 0.5 * ds), &d2)?;
        let (k4, d4) = ruling_velocity(l, &axpy(&q, &k3, ds), &d3)?;
        q = (0..q.len()).map(|a| q[a] + ds / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])).collect();
        dir = d4;
        out.push(l.eval(&q));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct CircleFit {
    pub center: ImOctonion,
    pub radius: f64,
    /// Orthonormal basis of the fitted plane.
    pub plane: [ImOctonion; 2],
    /// Largest distance of a point from the fitted circle.
    pub residual: f64,
}

/// Least-squares 2-plane through the centroid, then an algebraic (Kåsa) circle fit in it.
pub fn fit_circle(points: &[ImOctonion]) -> Result<CircleFit, TubeError> {
    let n = points.len();
    if n < 4 {
        return Err(TubeError::TooFewPoints(n));
    }
    let centroid = points.iter().fold(ImOctonion::zero(), |acc, p| acc + *p) / n as f64;
    // Principal axes from the 7×7 scatter matrix. nalgebra's SVD of the rank-2 point
    // matrix can return singular vectors tilted out of the plane.
    let scatter = points.iter().fold(Mat7::zeros(), |acc, p| {
        let d = (*p - centroid).0;
        acc + d * d.transpose()
    });
    let eig = scatter.symmetric_eigen();
    let mut order: Vec<usize> = (0..7).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let (s0, s1) = (eig.eigenvalues[order[0]].max(0.0).sqrt(), eig.eigenvalues[order[1]].max(0.0).sqrt());
    if s0 == 0.0 || s1 <= 1e-9 * s0 {
        return Err(TubeError::RankDeficient(if s0 == 0.0 { 0.0 } else { s1 / s0 }));
    }
    let axis = |k: usize| ImOctonion(eig.eigenvectors.column(order[k]).into_owned());
    let (a1, a2) = (axis(0), axis(1));
    let xy: Vec<(f64, f64)> = points.iter().map(|p| ((*p - centroid).dot(&a1), (*p - centroid).dot(&a2))).collect();
    let m = DMatrix::from_fn(n, 3, |i, c| [xy[i].0, xy[i].1, 1.0][c]);
    let rhs = DMatrix::from_fn(n, 1, |i, _| -(xy[i].0 * xy[i].0 + xy[i].1 * xy[i].1));
    let sol = m.svd(true, true).solve(&rhs, 1e-14).map_err(|_| TubeError::RankDeficient(0.0))?;
    let (cx, cy) = (-0.5 * sol[0], -0.5 * sol[1]);
    let radius = (cx * cx + cy * cy - sol[2]).max(0.0).sqrt();
    let center = centroid + a1 * cx + a2 * cy;
    let residual = points
        .iter()
        .map(|p| {
            let d = *p - center;
            let (x, y) = (d.dot(&a1), d.dot(&a2));
            let out = (d - a1 * x - a2 * y).norm();
            (((x * x + y * y).sqrt() - radius).powi(2) + out * out).sqrt()
        })
        .fold(0.0, f64::max);
    Ok(CircleFit { center, radius, plane: [a1, a2], residual })
}

#[derive(Clone, Debug)]
pub struct CircleOde {
    pub points: Vec<ImOctonion>,
    pub radius: f64,
    /// `4(16 + r²)^{-1/2}`.
    pub expected: f64,
    pub closure: f64,
    pub fit_residual: f64,
}

/// Integrates `x' = e, e' = −x + κN, N' = −κe` with `κ = r/4` over one period.
pub fn circle_frame_ode(r: f64) -> Result<CircleOde, TubeError> {
    const STEPS: usize = 4096;
    const SAMPLES: usize = 64;
    let kappa = r / 4.0;
    let period = std::f64::consts::TAU / (1.0 + kappa * kappa).sqrt();
    let h = period / STEPS as f64;
    type State = [ImOctonion; 3];
    let rhs = |s: &State| -> State { [s[1], -s[0] + s[2] * kappa, -s[1] * kappa] };
    let comb = |s: &State, k: &State, t: f64| -> State { std::array::from_fn(|i| s[i] + k[i] * t) };
    let start: State = [ImOctonion::e(1), ImOctonion::e(2), ImOctonion::e(3)];
    let mut s = start;
    let mut points = Vec::with_capacity(SAMPLES);
    for step in 0..STEPS {
        if step % (STEPS / SAMPLES) == 0 {
            points.push(s[0]);
        }
        let k1 = rhs(&s);
        let k2 = rhs(&comb(&s, &k1, 0.5 * h));
        let k3 = rhs(&comb(&s, &k2, 0.5 * h));
        let k4 = rhs(&comb(&s, &k3, h));
        s = std::array::from_fn(|i| s[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0));
    }
    let closure = (s[0] - start[0]).norm().max((s[1] - start[1]).norm());
    if closure > 1e-8 {
        return Err(TubeError::OdeClosure(closure));
    }
    let fit = fit_circle(&points)?;
    Ok(CircleOde { points, radius: fit.radius, expected: ruling_radius(r), closure, fit_residual: fit.residual })
}
