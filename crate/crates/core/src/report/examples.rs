//! Named examples and the checks each one certifies.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::cubic_lab::{classify_stabilizer_with, ClassifyTol, StabilizerClass};
use crate::gallery::{
    cone_link_domain, l1_w_metric, make_boruvka, make_clifford_legendrian_curve, make_e6_orbit,
    make_holomorphic_cone_link, make_l0, make_l1, make_l2, make_veronese_hopf_lift, HolomorphicCurve,
};
use crate::geometry_jet::{
    chen_delta_from, cubic_symmetry_residual, fundamental_cubic, gauss_consistency, gauss_curvature,
    is_austere, is_quasi_einstein, lagrangian_residual, minimality_residual, phase_residual,
    pseudoholomorphic_residual, riemann, ImmersionPatch,
};
use crate::linalg::SymMat3;
use crate::octonion::ImOctonion;
use crate::tubes_rulings::{
    align_onto_orbit, coordinate_fiber, detect_ruling, fit_circle, make_l4_boruvka, make_l5_boruvka,
    make_n1_boruvka, make_tube, omega_check_residual, structure_residuals, torsion, FiberGauge, PlaneBundle,
    TubeSpec, UnitaryFramePath,
};

use super::{Check, JetMode, ReportError, RunConfig};

/// Every id accepted by [`Example::lookup`], apart from further `cone_link:` presets.
pub const EXAMPLE_IDS: &[&str] = &[
    "L0",
    "L1",
    "L2",
    "L4_boruvka",
    "L5_boruvka",
    "N1_boruvka",
    "N1_clifford",
    "boruvka",
    "clifford",
    "cone_link:normal",
    "e6_orbit",
    "veronese",
];

pub const CONE_PRESETS: &[&str] = &["normal", "cubic", "plane", "veronese"];

/// Grid for the Ω̌ evaluation on curves.
pub const OMEGA_GRID: usize = 64;

/// Fixed tolerances for checks whose targets are exact.
const MINIMALITY_TOL: f64 = 1e-6;
const PHASE_TOL: f64 = 1e-6;
const SYMMETRY_TOL: f64 = 1e-6;
const RULING_TOL: f64 = 1e-6;
const CHEN_TOL: f64 = 1e-4;
const TORSION_TOL: f64 = 1e-6;
const FRAME_TOL: f64 = 1e-8;
const OMEGA_TOL: f64 = 1e-6;
const PERTURBED_FLOOR: f64 = 1e-3;
const NEGATIVE_FLOOR: f64 = 1e-2;
const ALIGN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
struct RulingExpect {
    lambda: f64,
    count: Option<usize>,
    r: Option<f64>,
    non_isolated: bool,
    anchor: &'static str,
}

#[derive(Clone, Copy, Debug)]
struct LagrangianExpect {
    /// Admissible stabilizer classes at every sample.
    class: Option<&'static [StabilizerClass]>,
    austere: Option<bool>,
    chen_equality: bool,
    chen_target: Option<f64>,
    /// Eigenvalues of `K`, descending, with tolerance and anchor.
    curvature: Option<([f64; 3], f64, &'static str)>,
    quasi_einstein: Option<bool>,
    ruling: Option<RulingExpect>,
    /// Coordinate axis and span of a fiber circle, with its radius.
    fiber: Option<(usize, f64, f64)>,
    /// Example id and orbit point of a G₂-equivalent orbit.
    alignment: Option<(&'static str, usize)>,
    w_metric: bool,
}

impl LagrangianExpect {
    const fn basic() -> Self {
        LagrangianExpect {
            class: None,
            austere: None,
            chen_equality: false,
            chen_target: None,
            curvature: None,
            quasi_einstein: None,
            ruling: None,
            fiber: None,
            alignment: None,
            w_metric: false,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum CurveKind {
    Boruvka,
    Clifford,
}

#[derive(Clone, Debug)]
enum Kind {
    Lagrangian(Box<LagrangianExpect>),
    Curve(CurveKind),
    /// A 3-fold that must fail to be Lagrangian.
    NegativeControl,
}

/// A resolved example id.
#[derive(Clone, Debug)]
pub struct Example {
    pub id: String,
    kind: Kind,
}

const TWO_THIRDS: f64 = 2.0 / 3.0;

fn two_sqrt5() -> f64 {
    2.0 * 5f64.sqrt()
}

fn a4_expect(alignment: Option<(&'static str, usize)>, anchor: &'static str) -> LagrangianExpect {
    LagrangianExpect {
        class: Some(&[StabilizerClass::A4]),
        austere: Some(true),
        chen_target: Some(0.125),
        curvature: Some(([-15.0 / 16.0; 3], 1e-4, anchor)),
        quasi_einstein: Some(true),
        alignment,
        ..LagrangianExpect::basic()
    }
}

fn s3_tube_expect() -> LagrangianExpect {
    LagrangianExpect {
        class: Some(&[StabilizerClass::S3]),
        austere: Some(true),
        chen_equality: true,
        curvature: Some(([0.0, 0.0, -10.0 / 3.0], 1e-4, "S3-type orbit: K has eigenvalues 0, 0, -10/3")),
        quasi_einstein: Some(true),
        ruling: Some(RulingExpect {
            lambda: 1.0,
            count: None,
            r: None,
            non_isolated: false,
            anchor: "tube of radius pi/2 is ruled by great circles",
        }),
        ..LagrangianExpect::basic()
    }
}

impl Example {
    pub fn lookup(id: &str) -> Result<Self, ReportError> {
        let lag = |e: LagrangianExpect| Kind::Lagrangian(Box::new(e));
        let kind = match id {
            "L0" => lag(LagrangianExpect {
                class: Some(&[StabilizerClass::SO3]),
                austere: Some(true),
                chen_equality: true,
                curvature: Some(([0.0; 3], 1e-6, "coassociative sphere is totally geodesic, curvature 1")),
                quasi_einstein: Some(true),
                ruling: Some(RulingExpect {
                    lambda: 1.0,
                    count: None,
                    r: None,
                    non_isolated: true,
                    anchor: "totally geodesic sphere is ruled along every direction",
                }),
                ..LagrangianExpect::basic()
            }),
            "L1" => lag(LagrangianExpect {
                class: Some(&[StabilizerClass::SO2]),
                austere: Some(false),
                chen_target: Some(1.375),
                curvature: Some((
                    [5.0 / 16.0, -15.0 / 16.0, -15.0 / 16.0],
                    1e-4,
                    "SU(2)-orbit: K is the Gauss image of the SO(2) cubic with r = 2 sqrt 5",
                )),
                quasi_einstein: Some(true),
                ruling: Some(RulingExpect {
                    lambda: TWO_THIRDS,
                    count: Some(1),
                    r: Some(two_sqrt5()),
                    non_isolated: false,
                    anchor: "SU(2)-orbit has a unique 2/3-ruling",
                }),
                fiber: Some((0, PI, TWO_THIRDS)),
                w_metric: true,
                ..LagrangianExpect::basic()
            }),
            "L2" => lag(LagrangianExpect {
                ruling: Some(RulingExpect {
                    lambda: TWO_THIRDS,
                    count: Some(4),
                    r: Some(two_sqrt5()),
                    non_isolated: false,
                    anchor: "A4 orbit is 2/3-ruled along its four vertex directions",
                }),
                fiber: Some((2, PI / 3.0, TWO_THIRDS)),
                ..a4_expect(None, "orbit of -sqrt6 xyz has constant curvature 1/16")
            }),
            "L5_boruvka" => lag(LagrangianExpect {
                ruling: Some(RulingExpect {
                    lambda: TWO_THIRDS,
                    count: Some(4),
                    r: Some(two_sqrt5()),
                    non_isolated: false,
                    anchor: "tube of radius asin(2/3) is 2/3-ruled",
                }),
                fiber: Some((2, 0.9 * TAU, TWO_THIRDS)),
                ..a4_expect(Some(("L2", 2)), "tube of radius asin(2/3) over the Boruvka sphere is the A4 orbit")
            }),
            "N1_boruvka" => lag(LagrangianExpect {
                ruling: Some(RulingExpect {
                    lambda: 1.0,
                    count: None,
                    r: None,
                    non_isolated: false,
                    anchor: "tube of radius pi/2 is ruled by great circles",
                }),
                fiber: Some((2, 0.9 * TAU, 1.0)),
                ..a4_expect(None, "N1 tube over a null-torsion curve: curvature 1/16")
            }),
            "L4_boruvka" => lag(LagrangianExpect {
                fiber: Some((2, 0.9 * TAU, 1.0)),
                alignment: Some(("e6_orbit", 6)),
                ..s3_tube_expect()
            }),
            "e6_orbit" => lag(s3_tube_expect()),
            "veronese" => lag(LagrangianExpect {
                class: Some(&[StabilizerClass::S3]),
                austere: Some(true),
                chen_equality: true,
                ..LagrangianExpect::basic()
            }),
            "N1_clifford" => Kind::NegativeControl,
            "boruvka" => Kind::Curve(CurveKind::Boruvka),
            "clifford" => Kind::Curve(CurveKind::Clifford),
            other => match other.strip_prefix("cone_link:") {
                Some(p) if CONE_PRESETS.contains(&p) => {
                    // (1, w, w³) has an inflection at w = 0 where the cubic vanishes.
                    let class: &'static [StabilizerClass] = match p {
                        "plane" => &[StabilizerClass::SO3],
                        "cubic" => &[StabilizerClass::S3, StabilizerClass::SO3],
                        _ => &[StabilizerClass::S3],
                    };
                    lag(LagrangianExpect {
                        class: Some(class),
                        austere: Some(true),
                        chen_equality: true,
                        ..LagrangianExpect::basic()
                    })
                }
                _ => return Err(ReportError::UnknownExample(id.to_string())),
            },
        };
        Ok(Example { id: id.to_string(), kind })
    }

    /// The patch behind the example.
    pub fn patch(&self, mode: JetMode) -> Result<ImmersionPatch, String> {
        let p = example_patch(&self.id)?;
        Ok(match mode {
            JetMode::Analytic => p,
            JetMode::FiniteDifference => p.finite_difference_only(),
        })
    }

    pub fn checks(&self, cfg: &RunConfig) -> Vec<Check> {
        let patch = match self.patch(cfg.jet_mode) {
            Ok(p) => p,
            Err(e) => return vec![Check::failed("construct", "example is constructible", 0.0, e)],
        };
        let mut out = vec![on_sphere(&patch, cfg)];
        match &self.kind {
            Kind::Lagrangian(e) => lagrangian_checks(&patch, e, cfg, &mut out),
            Kind::Curve(k) => curve_checks(&patch, *k, cfg, &mut out),
            Kind::NegativeControl => out.push(Check::from_result(
                "lagrangian",
                "N1 tube over a curve with nonzero torsion is not Lagrangian",
                lagrangian_residual(&patch, cfg.grid),
                NEGATIVE_FLOOR,
                true,
            )),
        }
        out
    }
}

/// Checks for a tube built on demand: the shared Lagrangian battery plus the
/// `λ = sin γ` ruling and its fibre circles.
pub fn tube_checks(tube: &TubeSpec, cfg: &RunConfig) -> Vec<Check> {
    let patch = match make_tube(tube) {
        Ok(p) => match cfg.jet_mode {
            JetMode::Analytic => p,
            JetMode::FiniteDifference => p.finite_difference_only(),
        },
        Err(e) => return vec![Check::failed("construct", "tube is an immersion", 0.0, e)],
    };
    let lambda = tube.gamma.sin();
    let expect = LagrangianExpect {
        ruling: Some(RulingExpect {
            lambda,
            count: None,
            r: None,
            non_isolated: false,
            anchor: "tube of radius gamma is ruled by circles of radius sin gamma",
        }),
        fiber: Some((2, 0.9 * TAU, lambda)),
        ..LagrangianExpect::basic()
    };
    let mut out = vec![on_sphere(&patch, cfg)];
    lagrangian_checks(&patch, &expect, cfg, &mut out);
    out
}

/// Builds the patch for an id; see [`EXAMPLE_IDS`].
pub fn example_patch(id: &str) -> Result<ImmersionPatch, String> {
    let clifford = || make_clifford_legendrian_curve().map(|(c, _)| c).map_err(|e| e.to_string());
    Ok(match id {
        "L0" => make_l0(),
        "L1" => make_l1(),
        "L2" => make_l2(),
        "L4_boruvka" => make_l4_boruvka(),
        "L5_boruvka" => make_l5_boruvka(),
        "N1_boruvka" => make_n1_boruvka(),
        "N1_clifford" => make_tube(&TubeSpec { base: clifford()?, bundle: PlaneBundle::N1, gamma: FRAC_PI_2 })
            .map_err(|e| e.to_string())?
            .renamed("N1_clifford"),
        "boruvka" => make_boruvka(),
        "clifford" => clifford()?,
        "e6_orbit" => make_e6_orbit(),
        "veronese" => make_veronese_hopf_lift(),
        other => {
            let preset = other.strip_prefix("cone_link:").ok_or_else(|| format!("unknown example `{other}`"))?;
            let curve = HolomorphicCurve::preset(preset).ok_or_else(|| format!("unknown cone preset `{preset}`"))?;
            make_holomorphic_cone_link(&curve, cone_link_domain()).map_err(|e| e.to_string())?
        }
    })
}

/// Center plus a 2-per-axis grid: the points used for curvature-level checks.
fn sample_points(patch: &ImmersionPatch) -> Vec<Vec<f64>> {
    let mut pts = vec![patch.center()];
    pts.extend(patch.grid(2));
    pts
}

fn max_over<E: std::fmt::Display>(
    pts: &[Vec<f64>],
    f: impl Fn(&[f64]) -> Result<f64, E>,
) -> Result<f64, String> {
    pts.iter().try_fold(0.0f64, |m, q| f(q).map(|v| m.max(v)).map_err(|e| e.to_string()))
}

fn on_sphere(patch: &ImmersionPatch, cfg: &RunConfig) -> Check {
    let off = patch.grid(cfg.grid).iter().map(|q| (patch.eval(q).norm() - 1.0).abs()).fold(0.0, f64::max);
    Check::within("on_sphere", "samples lie on the unit sphere", off, cfg.tolerances.tangency)
}

fn eigen_gap(k: &SymMat3, target: &[f64; 3]) -> f64 {
    let v = k.eigen().values;
    (0..3).map(|i| (v[i] - target[i]).abs()).fold(0.0, f64::max)
}

fn lagrangian_checks(patch: &ImmersionPatch, e: &LagrangianExpect, cfg: &RunConfig, out: &mut Vec<Check>) {
    let n = cfg.grid;
    let t = &cfg.tolerances;
    out.push(Check::from_result(
        "lagrangian",
        "omega vanishes on the tangent space",
        lagrangian_residual(patch, n),
        t.lagrangian,
        false,
    ));
    out.push(Check::from_result(
        "minimality",
        "Lagrangians in the nearly Kahler S6 are minimal",
        minimality_residual(patch, n.min(8)),
        MINIMALITY_TOL,
        false,
    ));
    out.push(Check::from_result(
        "phase",
        "-Im Omega restricts to the volume form",
        phase_residual(patch, n),
        PHASE_TOL,
        false,
    ));
    out.push(Check::from_result(
        "cubic_symmetry",
        "<II(X,Y),JZ> is totally symmetric",
        cubic_symmetry_residual(patch, n.min(8)),
        SYMMETRY_TOL,
        false,
    ));
    let pts = sample_points(patch);
    out.push(Check::from_result(
        "gauss_equation",
        "curvature equals the Gauss image of the fundamental cubic",
        max_over(&pts, |q| gauss_consistency(patch, q)),
        t.curvature,
        false,
    ));
    let curvatures: Result<Vec<_>, String> = pts.iter().map(|q| riemann(patch, q).map_err(|e| e.to_string())).collect();
    let chen: Result<Vec<f64>, String> = curvatures
        .as_ref()
        .map_err(|e| e.clone())
        .and_then(|cs| cs.iter().map(|c| chen_delta_from(c).map_err(|e| e.to_string())).collect());
    let chen_max: Result<f64, String> = chen.as_ref().map(|v| v.iter().fold(f64::MIN, |a, b| a.max(*b))).map_err(|e| e.clone());
    out.push(Check::from_result(
        "chen_bound",
        "Chen's inequality delta <= 2 for minimal 3-folds in S6",
        chen_max.map(|d| (d - 2.0).max(0.0)),
        1e-6,
        false,
    ));
    if e.chen_equality || e.chen_target.is_some() {
        let target = if e.chen_equality { 2.0 } else { e.chen_target.unwrap_or(2.0) };
        let anchor = if e.chen_equality { "S3-type cubic attains Chen's equality" } else { "Chen invariant of the cubic type" };
        out.push(Check::from_result(
            "chen_delta",
            anchor,
            chen.as_ref().map(|v| v.iter().map(|d| (d - target).abs()).fold(0.0, f64::max)).map_err(|e| e.clone()),
            CHEN_TOL,
            false,
        ));
    }
    if let Some((target, tol, anchor)) = e.curvature {
        let gap = curvatures.as_ref().map_err(|e| e.clone()).and_then(|cs| {
            cs.iter().try_fold(0.0f64, |m, c| c.k_tensor().map(|k| m.max(eigen_gap(&k, &target))).map_err(|e| e.to_string()))
        });
        out.push(Check::from_result("curvature", anchor, gap, tol, false));
    }
    if let Some(want) = e.quasi_einstein {
        let got = curvatures.as_ref().map(|cs| cs.iter().all(|c| c.k_tensor().map(|k| is_quasi_einstein(&k)).unwrap_or(false)));
        out.push(match got {
            Ok(g) => Check::flag("quasi_einstein", "Ricci tensor has a repeated eigenvalue", g == want, format!("{g}")),
            Err(err) => Check::failed("quasi_einstein", "Ricci tensor has a repeated eigenvalue", 0.0, err),
        });
    }
    let classify = ClassifyTol { eig: t.classification, ..ClassifyTol::default() };
    let cubics: Result<Vec<_>, String> =
        pts.iter().map(|q| fundamental_cubic(patch, q).map(|c| c.harmonic().0).map_err(|e| e.to_string())).collect();
    if let Some(want) = e.class {
        out.push(match &cubics {
            Ok(cs) => {
                let got: Vec<StabilizerClass> = cs.iter().map(|h| classify_stabilizer_with(h, &classify)).collect();
                let ok = got.iter().all(|c| want.contains(c));
                let note = got.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                let names = want.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" or ");
                Check::flag("cubic_class", format!("fundamental cubic has stabilizer {names}"), ok, note)
            }
            Err(err) => Check::failed("cubic_class", "fundamental cubic stabilizer", 0.0, err),
        });
    }
    if let Some(want) = e.austere {
        out.push(match &cubics {
            Ok(cs) => {
                let ok = cs.iter().all(|h| is_austere(h) == want);
                Check::flag("austere", "shape operators have eigenvalues {0, +-lambda}", ok, format!("expected {want}"))
            }
            Err(err) => Check::failed("austere", "shape operators have eigenvalues {0, +-lambda}", 0.0, err),
        });
    }
    if let Some(r) = e.ruling {
        out.extend(ruling_checks(patch, &r));
    }
    if let Some((axis, span, radius)) = e.fiber {
        let fit = fit_circle(&coordinate_fiber(patch, &patch.center(), axis, span, 24));
        out.push(Check::from_result(
            "fiber_circle",
            "ruling fibers are circles of the ruling radius",
            fit.map(|f| (f.radius - radius).abs().max(f.residual)),
            RULING_TOL,
            false,
        ));
    }
    if let Some((target, point)) = e.alignment {
        let res = example_patch(target).map_err(|e| e.to_string()).and_then(|tp| {
            align_onto_orbit(patch, &tp, &ImOctonion::e(point), 4)
                .map(|a| a.max_distance.max(a.g2_residual))
                .map_err(|e| e.to_string())
        });
        out.push(Check::from_result(
            &format!("g2_alignment:{target}"),
            "equal to the homogeneous orbit after one G2 motion",
            res,
            ALIGN_TOL,
            false,
        ));
    }
    if e.w_metric {
        let want = [4.0 / 9.0, 8.0 / 3.0, 8.0 / 3.0];
        let xs = [[1.0, 0.0, 0.0, 0.0], [0.5, 0.5, 0.5, 0.5], [0.6, 0.0, 0.8, 0.0], [0.1, 0.7, 0.1, 0.7]];
        let gap = xs
            .iter()
            .map(|x| {
                let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let g = l1_w_metric(x.map(|v| v / len));
                (0..3)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .map(|(i, j)| (g[i][j] - if i == j { want[i] } else { 0.0 }).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        out.push(Check::within("metric_w", "SU(2)-orbit metric is diag(4/9, 8/3, 8/3)", gap, 1e-9));
    }
}

fn ruling_checks(patch: &ImmersionPatch, r: &RulingExpect) -> Vec<Check> {
    let set = match detect_ruling(patch, &patch.center()) {
        Ok(s) => s,
        Err(e) => return vec![Check::failed("ruling", r.anchor, RULING_TOL, e)],
    };
    let mut out = Vec::new();
    let near = set.with_lambda(r.lambda, RULING_TOL);
    let best = set.rulings.iter().map(|x| (x.lambda - r.lambda).abs()).fold(f64::INFINITY, f64::min);
    let note = format!(
        "lambdas: {}",
        set.rulings.iter().map(|x| format!("{:.9}{}", x.lambda, if x.isolated { "" } else { "*" })).collect::<Vec<_>>().join(",")
    );
    out.push(Check::within("ruling_lambda", r.anchor, best, RULING_TOL).with_note(note));
    if let Some(count) = r.count {
        let isolated = near.iter().filter(|x| x.isolated).count();
        out.push(Check::flag("ruling_count", r.anchor, isolated == count, format!("{isolated} isolated, expected {count}")));
    }
    if r.non_isolated {
        out.push(Check::flag("ruling_non_isolated", r.anchor, set.has_non_isolated(), format!("{}", set.everything)));
    }
    if let Some(want) = r.r {
        let gap = near.iter().map(|x| (x.r - want).abs()).fold(if near.is_empty() { f64::INFINITY } else { 0.0 }, f64::max);
        out.push(Check::within("ruling_r", "r = 4 h(e,e,e) along the ruling", gap, RULING_TOL));
    }
    out
}

fn curve_checks(patch: &ImmersionPatch, kind: CurveKind, cfg: &RunConfig, out: &mut Vec<Check>) {
    let n = cfg.grid;
    out.push(Check::from_result(
        "pseudoholomorphic",
        "tangent planes are J-invariant",
        pseudoholomorphic_residual(patch, n),
        cfg.tolerances.lagrangian,
        false,
    ));
    out.push(Check::from_result(
        "minimality",
        "pseudoholomorphic curves are minimal",
        minimality_residual(patch, n),
        MINIMALITY_TOL,
        false,
    ));
    let pts = sample_points(patch);
    let (k_target, k_tol, k_anchor, torsion_target, torsion_anchor) = match kind {
        CurveKind::Boruvka => (1.0 / 6.0, 1e-4, "Boruvka sphere has curvature 1/6", 0.0, "Boruvka sphere has null torsion"),
        CurveKind::Clifford => (0.0, 1e-6, "Clifford torus curve is flat", 1.0, "Clifford torus curve has |k1| = 1"),
    };
    out.push(Check::from_result(
        "gauss_curvature",
        k_anchor,
        max_over(&pts, |q| gauss_curvature(patch, q).map(|k| (k - k_target).abs())),
        k_tol,
        false,
    ));
    out.push(Check::from_result(
        "torsion",
        torsion_anchor,
        max_over(&pts, |q| torsion(patch, q).map(|t| (t.k1.norm() - torsion_target).abs())),
        TORSION_TOL,
        false,
    ));
    let path = UnitaryFramePath::adapted(patch);
    out.push(Check::from_result(
        "frame_identities",
        "adapted unitary frame satisfies the cross-product relations",
        max_over(&patch.grid(n), |q| path.frame(q).map(|f| f.unitarity_residual().max(f.cross_residual()))),
        FRAME_TOL,
        false,
    ));
    out.push(Check::from_result(
        "structure_equations",
        "Maurer-Cartan forms satisfy the G2 structure equations",
        max_over(&pts, |q| structure_residuals(&path, q).map(|r| r.d_theta.max(r.d_kappa))),
        OMEGA_TOL,
        false,
    ));
    if let CurveKind::Boruvka = kind {
        for (gauge, expect_fail) in
            [(FiberGauge::n1(), false), (FiberGauge::n2(), false), (FiberGauge::perturbed(0.2), true)]
        {
            let label = if expect_fail { "perturbed".to_string() } else { gauge.name.clone() };
            let tol = if expect_fail { PERTURBED_FLOOR } else { OMEGA_TOL };
            let anchor = "holomorphic lift iff the swept 3-fold is a ruled Lagrangian";
            match omega_check_residual(patch, &gauge, OMEGA_GRID, n) {
                Ok(r) => {
                    out.push(Check::from_result::<String>(&format!("omega_check:{label}"), anchor, Ok(r.omega_check), tol, expect_fail));
                    out.push(Check::from_result::<String>(&format!("lift_lagrangian:{label}"), anchor, Ok(r.lagrangian), tol, expect_fail));
                }
                Err(e) => {
                    out.push(Check::failed(format!("omega_check:{label}"), anchor, tol, &e));
                    out.push(Check::failed(format!("lift_lagrangian:{label}"), anchor, tol, &e));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_id_resolves() {
        for id in EXAMPLE_IDS {
            assert!(Example::lookup(id).is_ok(), "{id}");
        }
        for p in CONE_PRESETS {
            assert!(Example::lookup(&format!("cone_link:{p}")).is_ok());
        }
        assert!(Example::lookup("cone_link:quartic").is_err());
    }
}
