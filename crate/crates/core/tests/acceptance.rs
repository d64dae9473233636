//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#![allow(clippy::needless_range_loop)]

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use s6lag::cubic_lab::{
    classify_stabilizer, fiber_bracket, fiber_solve, gauss_map, in_gauss_image, normal_form_eval,
    random_harmonic_cubic, so3_act, table_representatives, HarmonicCubic, StabilizerClass,
};
use s6lag::gallery::{
    l1_w_metric, make_boruvka, make_clifford_legendrian_curve, make_l0, make_l1, make_l2, make_veronese_hopf_lift,
};
use s6lag::geometry_jet::{
    chen_delta, fundamental_cubic, gauss_consistency, gauss_curvature, is_austere, lagrangian_residual,
    minimality_residual, phase_residual, pseudoholomorphic_residual, riemann, ImmersionPatch,
};
use s6lag::linalg::{random_rotation, SymMat3};
use s6lag::octonion::{cross, Octonion};
use s6lag::report::{example_patch, run_sweep, Suite};
use s6lag::tubes_rulings::{
    circle_frame_ode, coordinate_fiber, detect_ruling, fit_circle, make_l4_boruvka, make_l5_boruvka, make_n1_boruvka,
    omega_check_residual, torsion, FiberGauge,
};

type Outcome = Result<String, String>;

/// Rows of the multiplication table, `ε_a ε_b` for `b = 1..7`, transcribed by hand.
const TABLE: [&str; 7] = [
    "-1   e3  -e2   e5  -e4   e7  -e6",
    "-e3  -1   e1   e6  -e7  -e4   e5",
    "e2  -e1  -1   -e7  -e6   e5   e4",
    "-e5  -e6   e7  -1    e1   e2  -e3",
    "e4   e7   e6  -e1  -1   -e3  -e2",
    "-e7   e4  -e5  -e2   e3  -1    e1",
    "e6  -e5  -e4   e3   e2  -e1  -1",
];

fn parse_entry(s: &str) -> (f64, usize) {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    match body {
        "1" => (sign, 0),
        _ => (sign, body.trim_start_matches('e').parse().expect("basis label")),
    }
}

fn samples(p: &ImmersionPatch) -> Vec<Vec<f64>> {
    let mut v = vec![p.center()];
    v.extend(p.grid(2));
    v
}

fn lagrangians() -> Vec<ImmersionPatch> {
    ["L0", "L1", "L2", "L4_boruvka", "L5_boruvka", "N1_boruvka", "veronese", "e6_orbit"]
        .iter()
        .map(|id| example_patch(id).unwrap())
        .chain(["normal", "cubic", "plane", "veronese"].iter().map(|p| example_patch(&format!("cone_link:{p}")).unwrap()))
        .collect()
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn octonion_core() -> Outcome {
    let mut mismatches = 0;
    for (a, row) in TABLE.iter().enumerate() {
        for (b, entry) in row.split_whitespace().enumerate() {
            let (sign, k) = parse_entry(entry);
            let got = Octonion::basis(a + 1).mul(&Octonion::basis(b + 1));
            if got.max_abs_diff(&Octonion::basis(k).scale(sign)) != 0.0 {
                mismatches += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let x = Octonion(std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0));
        let y = Octonion(std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0));
        worst = worst.max(x.mul(&x).mul(&y).max_abs_diff(&x.mul(&x.mul(&y))));
        worst = worst.max(y.mul(&x).mul(&x).max_abs_diff(&y.mul(&x.mul(&x))));
        let (u, v) = (x.im(), y.im());
        let lagrange = u.norm_squared() * v.norm_squared() - u.dot(&v).powi(2);
        worst = worst.max((cross(&u, &v).norm_squared() - lagrange).abs());
    }
    ensure(mismatches == 0 && worst < 1e-12, format!("{mismatches} table mismatches of 49; identities {worst:.1e}"))
}

/// Largest deviation of coordinate-plane sectional curvatures from `target`.
fn sectional_gap(p: &ImmersionPatch, target: f64) -> Result<f64, String> {
    let mut gap: f64 = 0.0;
    let planes = [([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]), ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]), ([1.0, 1.0, 0.0], [0.0, 1.0, 1.0])];
    for q in samples(p) {
        let c = riemann(p, &q).map_err(|e| e.to_string())?;
        for (a, b) in &planes {
            gap = gap.max((c.sectional(a, b) - target).abs());
        }
    }
    Ok(gap)
}

fn gallery_constants() -> Outcome {
    let l0 = sectional_gap(&make_l0(), 1.0)?;
    let l2 = sectional_gap(&make_l2(), 1.0 / 16.0)?;
    let curve_gap = |p: &ImmersionPatch, k: f64| -> Result<f64, String> {
        p.grid(32).iter().try_fold(0.0f64, |m, q| Ok(m.max((gauss_curvature(p, q).map_err(|e| e.to_string())? - k).abs())))
    };
    let boruvka = curve_gap(&make_boruvka(), 1.0 / 6.0)?;
    let clifford = curve_gap(&make_clifford_legendrian_curve().map_err(|e| e.to_string())?.0, 0.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut metric: f64 = 0.0;
    for _ in 0..100 {
        let x: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() - 0.5);
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let g = l1_w_metric(x.map(|v| v / n));
        let want = [4.0 / 9.0, 8.0 / 3.0, 8.0 / 3.0];
        for i in 0..3 {
            for j in 0..3 {
                metric = metric.max((g[i][j] - if i == j { want[i] } else { 0.0 }).abs());
            }
        }
    }
    ensure(
        l0 < 1e-6 && l2 < 1e-4 && boruvka < 1e-4 && clifford < 1e-6 && metric < 1e-9,
        format!("L0 {l0:.1e}, L2 {l2:.1e}, Boruvka {boruvka:.1e}, Clifford {clifford:.1e}, L1 metric {metric:.1e}"),
    )
}

fn lagrangian_residuals() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut names = Vec::new();
    let positive = [make_l0(), make_l1(), make_l2(), make_veronese_hopf_lift(), example_patch("cone_link:normal")?, make_l4_boruvka(), make_l5_boruvka(), make_n1_boruvka()];
    for p in &positive {
        let r = lagrangian_residual(p, 8).map_err(|e| e.to_string())?;
        if r >= 1e-8 {
            names.push(p.name().to_string());
        }
        worst = worst.max(r);
    }
    let clifford = make_clifford_legendrian_curve().map_err(|e| e.to_string())?.0;
    let holo = [make_boruvka(), clifford]
        .iter()
        .map(|c| pseudoholomorphic_residual(c, 8))
        .try_fold(0.0f64, |m, r| r.map(|v| m.max(v)))
        .map_err(|e| e.to_string())?;
    let negative = lagrangian_residual(&example_patch("N1_clifford")?, 8).map_err(|e| e.to_string())?;
    ensure(
        names.is_empty() && holo < 1e-8 && negative > 1e-2,
        format!("Lagrangian max {worst:.1e} {names:?}, pseudoholomorphic {holo:.1e}, N1 over Clifford {negative:.2}"),
    )
}

fn minimality_and_phase() -> Outcome {
    let (mut mean, mut phase): (f64, f64) = (0.0, 0.0);
    for p in lagrangians() {
        mean = mean.max(minimality_residual(&p, 6).map_err(|e| e.to_string())?);
        phase = phase.max(phase_residual(&p, 6).map_err(|e| e.to_string())?);
    }
    ensure(mean < 1e-6 && phase < 1e-6, format!("|H| {mean:.1e}, phase {phase:.1e}"))
}

/// `K(h)` assembled from the Gauss equation `R_ijkl = δ_ik δ_jl − δ_il δ_jk + Σ h_ikq h_jlq − h_ilq h_jkq`.
fn k_oracle(h: &HarmonicCubic) -> SymMat3 {
    let t = h.tensor();
    let r = |i: usize, j: usize, k: usize, l: usize| -> f64 {
        (0..3).map(|q| t[i][k][q] * t[j][l][q] - t[i][l][q] * t[j][k][q]).sum()
    };
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        let (j, l) = ((i + 1) % 3, (i + 2) % 3);
        k[i][i] = r(j, l, j, l);
        k[i][j] = r(j, l, l, i);
        k[j][i] = k[i][j];
    }
    SymMat3(k)
}

fn gauss_map_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut trace, mut oracle, mut outside): (f64, f64, usize) = (0.0, 0.0, 0);
    for _ in 0..1000 {
        let h = random_harmonic_cubic(&mut rng);
        let k = gauss_map(&h);
        let norm2: f64 = h.tensor().iter().flatten().flatten().map(|x| x * x).sum();
        trace = trace.max((k.trace() + 0.5 * norm2).abs());
        oracle = oracle.max(k.max_abs_diff(&k_oracle(&h)));
        outside += usize::from(!in_gauss_image(&k));
    }
    let (mut fiber, mut done, mut failed): (f64, usize, usize) = (0.0, 0, 0);
    while done < 100 {
        let k = gauss_map(&random_harmonic_cubic(&mut rng)).conjugate(&random_rotation(&mut rng));
        let lam = k.eigen().values;
        if lam[0] - lam[1] < 1e-3 || lam[1] - lam[2] < 1e-3 {
            continue;
        }
        done += 1;
        let (lo, hi) = fiber_bracket(lam);
        match fiber_solve(&k, lo + rng.random_range(0.1..0.9) * (hi - lo)) {
            Ok(h) => fiber = fiber.max(gauss_map(&h).max_abs_diff(&k)),
            Err(_) => failed += 1,
        }
    }
    ensure(
        trace < 1e-12 && oracle < 1e-12 && outside == 0 && failed == 0 && fiber < 1e-9,
        format!("trace {trace:.1e}, vs Gauss equation {oracle:.1e}, {outside} outside image, fibre round trip {fiber:.1e} ({failed} failures)"),
    )
}

fn classification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut wrong = 0;
    for (class, h) in table_representatives() {
        for _ in 0..100 {
            wrong += usize::from(classify_stabilizer(&so3_act(&random_rotation(&mut rng), &h)) != class);
        }
    }
    let r = 0.8;
    let a4 = classify_stabilizer(&normal_form_eval(8.0 * r, 0.0, 8.0 * r * 2f64.sqrt(), 0.0));
    let s3 = classify_stabilizer(&normal_form_eval(r, r, 0.0, 0.0));
    ensure(
        wrong == 0 && a4 == StabilizerClass::A4 && s3 == StabilizerClass::S3,
        format!("{wrong} of 700 misclassified; a = r sqrt2 gives {a4}, s = r gives {s3}"),
    )
}

fn rulings() -> Outcome {
    let near = |x: f64, y: f64| (x - y).abs() < 1e-6;
    let l1 = detect_ruling(&make_l1(), &make_l1().center()).map_err(|e| e.to_string())?;
    let l1_iso: Vec<_> = l1.rulings.iter().filter(|r| r.isolated && near(r.lambda, 2.0 / 3.0)).collect();
    let l1_ok = l1_iso.len() == 1 && l1.rulings.iter().filter(|r| r.isolated).count() == 1;
    let l2 = detect_ruling(&make_l2(), &make_l2().center()).map_err(|e| e.to_string())?;
    let l2_ok = !l2.with_lambda(2.0 / 3.0, 1e-6).is_empty();
    let l0 = detect_ruling(&make_l0(), &make_l0().center()).map_err(|e| e.to_string())?;
    let l0_ok = l0.has_non_isolated() && l0.rulings.iter().any(|r| !r.isolated && near(r.lambda, 1.0));
    let mut ode: f64 = 0.0;
    for r in [0.0, 2.0 * 5f64.sqrt(), 4.0 * 3f64.sqrt()] {
        let o = circle_frame_ode(r).map_err(|e| e.to_string())?;
        ode = ode.max((o.radius - 4.0 / (16.0 + r * r).sqrt()).abs());
    }
    let fit = |p: ImmersionPatch, axis: usize, span: f64| -> Result<f64, String> {
        let f = fit_circle(&coordinate_fiber(&p, &p.center(), axis, span, 24)).map_err(|e| e.to_string())?;
        Ok((f.radius - 2.0 / 3.0).abs().max(f.residual))
    };
    let fits = fit(make_l1(), 0, std::f64::consts::PI)?.max(fit(make_l2(), 2, std::f64::consts::PI / 3.0)?);
    ensure(
        l1_ok && l2_ok && l0_ok && ode < 1e-8 && fits < 1e-6,
        format!("L1 unique 2/3: {l1_ok}, L2 2/3: {l2_ok}, L0 non-isolated 1: {l0_ok}, ODE radius {ode:.1e}, fibre fits {fits:.1e}"),
    )
}

fn torsion_suite() -> Outcome {
    let k1 = |p: &ImmersionPatch, target: f64| -> Result<f64, String> {
        samples(p).iter().try_fold(0.0f64, |m, q| {
            torsion(p, q).map(|t| m.max((t.k1.norm() - target).abs())).map_err(|e| e.to_string())
        })
    };
    let b = k1(&make_boruvka(), 0.0)?;
    let c = k1(&make_clifford_legendrian_curve().map_err(|e| e.to_string())?.0, 1.0)?;
    ensure(b < 1e-6 && c < 1e-6, format!("Boruvka |k1| {b:.1e}, Clifford ||k1| - 1| {c:.1e}"))
}

fn holomorphic_lifts() -> Outcome {
    let sigma = make_boruvka();
    let run = |g: FiberGauge| omega_check_residual(&sigma, &g, 64, 8).map_err(|e| e.to_string());
    let (n1, n2, pert) = (run(FiberGauge::n1())?, run(FiberGauge::n2())?, run(FiberGauge::perturbed(0.2))?);
    let ok = n1.omega_check < 1e-6
        && n1.lagrangian < 1e-6
        && n2.omega_check < 1e-6
        && n2.lagrangian < 1e-6
        && pert.omega_check > 1e-3
        && pert.lagrangian > 1e-3;
    ensure(
        ok,
        format!(
            "N1 ({:.1e}, {:.1e}), N2 ({:.1e}, {:.1e}), perturbed ({:.2}, {:.2})",
            n1.omega_check, n1.lagrangian, n2.omega_check, n2.lagrangian, pert.omega_check, pert.lagrangian
        ),
    )
}

fn gauss_equation() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in lagrangians() {
        for q in samples(&p) {
            worst = worst.max(gauss_consistency(&p, &q).map_err(|e| format!("{}: {e}", p.name()))?);
        }
    }
    ensure(worst < 1e-4, format!("max |K_R - K(h)| {worst:.1e}"))
}

fn cross_checks() -> Outcome {
    use StabilizerClass::*;
    let expected = [
        ("L0", SO3, true),
        ("L1", SO2, false),
        ("L2", A4, true),
        ("veronese", S3, true),
        ("cone_link:normal", S3, true),
        ("L5_boruvka", A4, true),
    ];
    let mut bad = Vec::new();
    let (mut equality, mut bound): (f64, f64) = (0.0, 0.0);
    for (id, class, austere) in expected {
        let p = example_patch(id)?;
        for q in samples(&p) {
            let h = fundamental_cubic(&p, &q).map_err(|e| e.to_string())?.harmonic().0;
            if classify_stabilizer(&h) != class || is_austere(&h) != austere {
                bad.push(id);
                break;
            }
        }
    }
    for p in lagrangians() {
        let s3 = classify_stabilizer(&fundamental_cubic(&p, &p.center()).map_err(|e| e.to_string())?.harmonic().0) == S3;
        for q in samples(&p) {
            let d = chen_delta(&p, &q).map_err(|e| e.to_string())?;
            bound = bound.max(d - 2.0);
            if s3 {
                equality = equality.max((d - 2.0).abs());
            }
        }
    }
    ensure(
        bad.is_empty() && equality < 1e-4 && bound <= 1e-6,
        format!("class/austere mismatches {bad:?}; S3 Chen |delta - 2| {equality:.1e}; max delta - 2 = {bound:.1e}"),
    )
}

fn full_sweep() -> Outcome {
    let t = Instant::now();
    let a = run_sweep(Suite::All, 2024, 8).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let b = run_sweep(Suite::All, 2024, 8).map_err(|e| e.to_string())?;
    let stable = a.to_json() == b.to_json();
    let rows: usize = a.reports.iter().map(|r| r.checks.len()).sum();
    ensure(a.pass && stable && secs < 300.0, format!("{rows} rows, pass {}, byte-stable {stable}, {secs:.1}s", a.pass))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("octonion core", octonion_core),
        ("gallery constants", gallery_constants),
        ("Lagrangian and pseudoholomorphic residuals", lagrangian_residuals),
        ("minimality and phase", minimality_and_phase),
        ("Gauss map and fibres", gauss_map_suite),
        ("stabilizer classification", classification),
        ("rulings", rulings),
        ("torsion", torsion_suite),
        ("holomorphic lifts and ruled Lagrangians", holomorphic_lifts),
        ("Gauss equation", gauss_equation),
        ("example cross-checks", cross_checks),
        ("full sweep", full_sweep),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail} [{:.1}s]", i + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
