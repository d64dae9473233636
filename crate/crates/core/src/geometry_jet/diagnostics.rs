//! Scalar certificates over patches: Lagrangian and pseudoholomorphic residuals,
//! minimality, phase, Gauss consistency, Chen's invariant, austerity, quasi-Einstein.

use super::curvature::{riemann, ricci, Curvature};
use super::{fundamental_cubic, phase, second_fundamental_form, ImmersionPatch, JetError};
use crate::cubic_lab::{gauss_map, normal_form_frames, HarmonicCubic};
use crate::linalg::SymMat3;
use crate::octonion::{cross, ImOctonion};

fn require_dim(patch: &ImmersionPatch, d: usize) -> Result<(), JetError> {
    if patch.dim() != d {
        return Err(JetError::WrongDimension { expected: d, got: patch.dim() });
    }
    Ok(())
}

/// Largest `|ω(e_i, e_j)|` over the grid.
pub fn lagrangian_residual(patch: &ImmersionPatch, n: usize) -> Result<f64, JetError> {
    require_dim(patch, 3)?;
    patch.max_over_grid(n, |q| Ok(patch.frame(q)?.omega_residual()))
}

/// Largest component of `J e1` orthogonal to the tangent plane.
pub fn pseudoholomorphic_residual(patch: &ImmersionPatch, n: usize) -> Result<f64, JetError> {
    require_dim(patch, 2)?;
    patch.max_over_grid(n, |q| {
        let f = patch.frame(q)?;
        let je1 = cross(f.p(), &f.e[0]);
        let off = je1 - f.e[0] * f.e[0].dot(&je1) - f.e[1] * f.e[1].dot(&je1);
        Ok(off.norm())
    })
}

/// `|Σ_i II(e_i, e_i)|` at one point.
pub fn mean_curvature_norm(patch: &ImmersionPatch, params: &[f64]) -> Result<f64, JetError> {
    let f = patch.frame(params)?;
    let ii = second_fundamental_form(patch, params, &f);
    Ok((0..ii.len()).fold(ImOctonion::zero(), |acc, i| acc + ii[i][i]).norm())
}

pub fn minimality_residual(patch: &ImmersionPatch, n: usize) -> Result<f64, JetError> {
    patch.max_over_grid(n, |q| mean_curvature_norm(patch, q))
}

/// Largest `|−ImΩ(e1,e2,e3) − 1|`.
pub fn phase_residual(patch: &ImmersionPatch, n: usize) -> Result<f64, JetError> {
    require_dim(patch, 3)?;
    patch.max_over_grid(n, |q| Ok((phase(patch, q)? - 1.0).abs()))
}

/// Largest asymmetry of `ĥ` in its last two slots.
pub fn cubic_symmetry_residual(patch: &ImmersionPatch, n: usize) -> Result<f64, JetError> {
    patch.max_over_grid(n, |q| Ok(fundamental_cubic(patch, q)?.symmetry_residual()))
}

/// `‖K from curvature − K(ĥ)‖` at one point, in the same frame.
pub fn gauss_consistency(patch: &ImmersionPatch, params: &[f64]) -> Result<f64, JetError> {
    let curv = riemann(patch, params)?;
    let cubic = super::fundamental_cubic_in(patch, params, &curv.frame)?;
    let k_curv = curv.k_tensor()?;
    Ok(k_curv.sub(&gauss_map(&cubic.harmonic().0)).norm())
}

fn unit_normal(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

fn plane_sectional(curv: &Curvature, theta: f64, phi: f64) -> f64 {
    let n = unit_normal(theta, phi);
    let helper = if n[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = n[0] * helper[0] + n[1] * helper[1] + n[2] * helper[2];
    let mut a = [helper[0] - d * n[0], helper[1] - d * n[1], helper[2] - d * n[2]];
    let la = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    a.iter_mut().for_each(|x| *x /= la);
    let b = [n[1] * a[2] - n[2] * a[1], n[2] * a[0] - n[0] * a[2], n[0] * a[1] - n[1] * a[0]];
    curv.eval(&a, &b)
}

/// Smallest sectional curvature: 32×32 sweep over plane normals, then compass search.
pub fn min_sectional(curv: &Curvature) -> f64 {
    const GRID: usize = 32;
    let (dt, dp) = (std::f64::consts::FRAC_PI_2 / GRID as f64, std::f64::consts::TAU / GRID as f64);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=GRID {
        for j in 0..GRID {
            let (t, p) = (i as f64 * dt, j as f64 * dp);
            let v = plane_sectional(curv, t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    let (mut val, mut t, mut p) = best;
    let (mut st, mut sp) = (dt, dp);
    let mut halvings = 0;
    while halvings < 20 {
        let mut moved = false;
        for (ct, cp) in [(t + st, p), (t - st, p), (t, p + sp), (t, p - sp)] {
            let v = plane_sectional(curv, ct, cp);
            if v < val {
                (val, t, p) = (v, ct, cp);
                moved = true;
                break;
            }
        }
        if !moved {
            st *= 0.5;
            sp *= 0.5;
            halvings += 1;
        }
    }
    val
}

/// `Σ_{i<j} sec(e_i, e_j) − min sec`.
pub fn chen_delta_from(curv: &Curvature) -> Result<f64, JetError> {
    if curv.dim() != 3 {
        return Err(JetError::WrongDimension { expected: 3, got: curv.dim() });
    }
    let sum = curv.get(0, 1, 0, 1) + curv.get(1, 2, 1, 2) + curv.get(0, 2, 0, 2);
    Ok(sum - min_sectional(curv))
}

pub fn chen_delta(patch: &ImmersionPatch, params: &[f64]) -> Result<f64, JetError> {
    require_dim(patch, 3)?;
    chen_delta_from(&riemann(patch, params)?)
}

/// Relative tolerance for the `{0, ±λ}` pattern.
pub const AUSTERE_TOL: f64 = 1e-6;

/// Whether some frame built on a critical direction makes every `q_i = ĥ_i··` have
/// eigenvalues of the form `{0, ±λ_i}`.
pub fn is_austere(h: &HarmonicCubic) -> bool {
    is_austere_with(h, AUSTERE_TOL)
}

pub fn is_austere_with(h: &HarmonicCubic, tol: f64) -> bool {
    let scale = h.norm();
    if scale <= crate::tol::ZERO_CUBIC {
        return true;
    }
    normal_form_frames(h).iter().any(|nf| {
        let t = h.in_frame(&nf.frame);
        (0..3).all(|i| {
            let q = SymMat3(t.tensor()[i]);
            let [a, b, c] = q.eigen().values;
            b.abs() <= tol * scale && (a + c).abs() <= tol * scale
        })
    })
}

/// Relative tolerance for repeated Ricci eigenvalues.
pub const QUASI_EINSTEIN_TOL: f64 = 1e-5;

pub fn is_quasi_einstein(k: &SymMat3) -> bool {
    is_quasi_einstein_with(k, QUASI_EINSTEIN_TOL)
}

pub fn is_quasi_einstein_with(k: &SymMat3, tol: f64) -> bool {
    let [a, b, c] = ricci(k).eigen().values;
    let scale = a.abs().max(c.abs()).max(1.0);
    a - b <= tol * scale || b - c <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::super::tests::assoc_sphere;
    use super::*;
    use crate::cubic_lab::{normal_form_eval, table_representatives, StabilizerClass};

    #[test]
    fn associative_sphere_is_pseudoholomorphic() {
        assert!(pseudoholomorphic_residual(&assoc_sphere(), 8).unwrap() < 1e-12);
        assert!(minimality_residual(&assoc_sphere(), 4).unwrap() < 1e-6);
    }

    #[test]
    fn austere_flags() {
        assert!(is_austere(&HarmonicCubic::zero()));
        assert!(!is_austere(&normal_form_eval(2.0 * 5f64.sqrt(), 0.0, 0.0, 0.0)));
        for (class, h) in table_representatives() {
            let want = matches!(class, StabilizerClass::SO3 | StabilizerClass::A4 | StabilizerClass::S3);
            assert_eq!(is_austere(&h), want, "{class}");
        }
    }

    #[test]
    fn quasi_einstein_flags() {
        assert!(is_quasi_einstein(&SymMat3::diag(1.0, -3.0, -3.0)));
        assert!(is_quasi_einstein(&SymMat3::diag(-0.9, -0.9, -0.9)));
        assert!(!is_quasi_einstein(&SymMat3::diag(0.0, -1.0, -4.0)));
    }
}
