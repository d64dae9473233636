//! G₂ alignment of Lagrangians and distance to an orbit of the irreducible action.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::TubeError;
use crate::cubic_lab::normal_form_frames;
use crate::gallery::irreducible_action;
use crate::geometry_jet::{fundamental_cubic, ImmersionPatch};
use crate::octonion::{cross, phi0, ImOctonion, Mat7, Vec7};

/// The G₂ matrix sending `ε1, ε2, ε4` to `p, e1, e2`. Requires `(p, e1, e2)` orthonormal
/// with `e2 ⊥ p × e1`.
pub fn g2_frame(p: &ImOctonion, e1: &ImOctonion, e2: &ImOctonion) -> Mat7 {
    let e3 = cross(p, e1);
    let cols = [*p, *e1, e3, *e2, cross(p, e2), cross(e1, e2), -cross(&e3, e2)];
    Mat7::from_fn(|r, c| cols[c][r])
}

/// Orthogonal `A` minimizing `Σ |A from_i − to_i|²`.
pub fn procrustes(from: &[ImOctonion], to: &[ImOctonion]) -> Mat7 {
    let m = from.iter().zip(to).fold(Mat7::zeros(), |acc, (f, t)| acc + t.0 * f.0.transpose());
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.expect("U"), svd.v_t.expect("V"));
    let mut a = u * vt;
    if a.determinant() < 0.0 {
        let k = svd.singular_values.imin();
        let mut u2 = u;
        u2.set_column(k, &(-u.column(k)));
        a = u2 * vt;
    }
    a
}

/// Largest change of `φ0` on basis triples under `a`.
pub fn g2_residual(a: &Mat7) -> f64 {
    let mut m: f64 = 0.0;
    for i in 1..=7 {
        for j in i + 1..=7 {
            for k in j + 1..=7 {
                let (x, y, z) = (ImOctonion::e(i), ImOctonion::e(j), ImOctonion::e(k));
                let moved = phi0(&x.transform(a), &y.transform(a), &z.transform(a));
                m = m.max((moved - phi0(&x, &y, &z)).abs());
            }
        }
    }
    m
}

/// G₂ frame at the patch center built on the normal-form frame of the fundamental cubic
/// with the largest `r`.
pub fn cubic_adapted_g2_frame(l: &ImmersionPatch, params: &[f64]) -> Result<Mat7, TubeError> {
    let cubic = fundamental_cubic(l, params)?;
    let h = cubic.harmonic().0;
    let nf = normal_form_frames(&h)
        .into_iter()
        .max_by(|a, b| a.r.total_cmp(&b.r))
        .ok_or(TubeError::NoRuling)?;
    let e = &cubic.frame.e;
    let t = |k: usize| e[0] * nf.frame[(0, k)] + e[1] * nf.frame[(1, k)] + e[2] * nf.frame[(2, k)];
    Ok(g2_frame(cubic.frame.p(), &t(0), &t(1)))
}

/// Nearest-point projection onto `SO(3)·x0` for the irreducible action: a coarse
/// Euler-angle table followed by Gauss–Newton.
pub struct OrbitProjector {
    gens: [Mat7; 3],
    seeds: Vec<Vec7>,
}

impl OrbitProjector {
    pub fn new(x0: &ImOctonion, per_axis: usize) -> Self {
        let gens = irreducible_action().generators;
        let pi = std::f64::consts::PI;
        let angles = |n: usize, top: f64| (0..n).map(move |k| top * k as f64 / n as f64);
        let outer: Vec<Mat7> = angles(per_axis, pi).map(|a| (gens[2] * a).exp()).collect();
        let middle: Vec<Mat7> = angles(per_axis / 2 + 1, 0.5 * pi).map(|b| (gens[0] * b).exp()).collect();
        let mut seeds = Vec::new();
        for a in &outer {
            for b in &middle {
                for c in &outer {
                    seeds.push(a * b * c * x0.0);
                }
            }
        }
        OrbitProjector { gens, seeds }
    }

    pub fn distance(&self, y: &ImOctonion) -> f64 {
        let mut x = *self
            .seeds
            .iter()
            .min_by(|a, b| (*a - y.0).norm().total_cmp(&(*b - y.0).norm()))
            .expect("seeds");
        for _ in 0..40 {
            let jac = DMatrix::from_fn(7, 3, |r, c| (self.gens[c] * x)[r]);
            let rhs = DVector::from_iterator(7, (y.0 - x).iter().copied());
            let Ok(t) = jac.svd(true, true).solve(&rhs, 1e-14) else { break };
            let step = self.gens[0] * t[0] + self.gens[1] * t[1] + self.gens[2] * t[2];
            x = step.exp() * x;
            if t.norm() < 1e-15 {
                break;
            }
        }
        (x - y.0).norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Alignment {
    pub transform: Mat7,
    pub g2_residual: f64,
    /// Largest distance of an aligned sample from the target orbit.
    pub max_distance: f64,
}

/// Aligns `l` with the orbit `SO(3)·target_point` by one G₂ transformation matching
/// cubic-adapted frames at the two centers, then measures every grid sample of `l`.
pub fn align_onto_orbit(
    l: &ImmersionPatch,
    target: &ImmersionPatch,
    orbit_point: &ImOctonion,
    grid: usize,
) -> Result<Alignment, TubeError> {
    let from = cubic_adapted_g2_frame(l, &l.center())?;
    let to = cubic_adapted_g2_frame(target, &target.center())?;
    let cols = |m: &Mat7| (0..7).map(|c| ImOctonion(m.column(c).into_owned())).collect::<Vec<_>>();
    let transform = procrustes(&cols(&from), &cols(&to));
    let projector = OrbitProjector::new(orbit_point, 24);
    let samples = l.grid(grid);
    let dists: Vec<f64> = samples.par_iter().map(|q| projector.distance(&l.eval(q).transform(&transform))).collect();
    Ok(Alignment {
        transform,
        g2_residual: g2_residual(&transform),
        max_distance: dists.into_iter().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::make_l2;
    use crate::tubes_rulings::make_l5_boruvka;

    #[test]
    fn g2_frame_of_the_standard_triple_is_identity() {
        let m = g2_frame(&ImOctonion::e(1), &ImOctonion::e(2), &ImOctonion::e(4));
        assert!((m - Mat7::identity()).amax() < 1e-15);
        assert!(g2_residual(&m) < 1e-15);
    }

    #[test]
    fn projector_sees_the_orbit() {
        let p = OrbitProjector::new(&ImOctonion::e(2), 24);
        let l2 = make_l2();
        for q in l2.grid(3) {
            assert!(p.distance(&l2.eval(&q)) < 1e-10);
        }
        assert!(p.distance(&ImOctonion::e(1)) > 0.1);
    }

    #[test]
    fn l5_over_boruvka_is_l2() {
        let al = align_onto_orbit(&make_l5_boruvka(), &make_l2(), &ImOctonion::e(2), 4).unwrap();
        assert!(al.g2_residual < 1e-8, "{}", al.g2_residual);
        assert!(al.max_distance < 1e-6, "{}", al.max_distance);
    }
}
