//! Pointwise nearly Kähler structure of the unit sphere `S⁶ ⊂ Im O`.
//!
//! `J_p(u) = p×u`, `ω_p(u,v) = φ0(p,u,v)`, `Υ_p = φ0` on tangent vectors and
//! `ImΩ_p(u,v,w) = −*φ0(p,u,v,w)`. With this sign `−ImΩ` restricts to the volume
//! form on the oriented coassociative sphere `L0`.

use thiserror::Error;

use crate::octonion::{cross, phi0, star_phi0, ImOctonion};
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormsError {
    #[error("point is not on the unit sphere (|p| = {norm})")]
    NotUnit { norm: f64 },
    #[error("vector is not tangent at the base point (|<v,p>| = {residual:e})")]
    NotTangent { residual: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint(ImOctonion);

impl SpherePoint {
    pub fn new(p: ImOctonion) -> Result<Self, FormsError> {
        let norm = p.norm();
        if (norm - 1.0).abs() > tol::UNIT {
            return Err(FormsError::NotUnit { norm });
        }
        Ok(SpherePoint(p))
    }

    /// Radial projection of a nonzero vector.
    pub fn normalized(p: ImOctonion) -> Self {
        SpherePoint(p.normalize())
    }

    pub fn e(k: usize) -> Self {
        SpherePoint(ImOctonion::e(k))
    }

    pub fn get(&self) -> &ImOctonion {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub base: SpherePoint,
    pub v: ImOctonion,
}

impl TangentVector {
    pub fn new(base: SpherePoint, v: ImOctonion) -> Result<Self, FormsError> {
        check_tangent(&base, &v)?;
        Ok(TangentVector { base, v })
    }
}

fn check_tangent(p: &SpherePoint, v: &ImOctonion) -> Result<(), FormsError> {
    let residual = p.0.dot(v).abs();
    if residual > tol::TANGENCY {
        Err(FormsError::NotTangent { residual })
    } else {
        Ok(())
    }
}

/// Orthogonal projection onto `T_pS⁶`.
pub fn project_tangent(p: &SpherePoint, v: &ImOctonion) -> TangentVector {
    TangentVector { base: *p, v: *v - p.0 * p.0.dot(v) }
}

pub fn almost_complex_j(p: &SpherePoint, v: &ImOctonion) -> Result<TangentVector, FormsError> {
    check_tangent(p, v)?;
    Ok(TangentVector { base: *p, v: cross(&p.0, v) })
}

pub fn omega_at(p: &SpherePoint, u: &ImOctonion, v: &ImOctonion) -> Result<f64, FormsError> {
    check_tangent(p, u)?;
    check_tangent(p, v)?;
    Ok(phi0(&p.0, u, v))
}

pub fn upsilon_at(
    p: &SpherePoint,
    u: &ImOctonion,
    v: &ImOctonion,
    w: &ImOctonion,
) -> Result<f64, FormsError> {
    for x in [u, v, w] {
        check_tangent(p, x)?;
    }
    Ok(phi0(u, v, w))
}

pub fn im_omega_at(
    p: &SpherePoint,
    u: &ImOctonion,
    v: &ImOctonion,
    w: &ImOctonion,
) -> Result<f64, FormsError> {
    for x in [u, v, w] {
        check_tangent(p, x)?;
    }
    Ok(im_omega_raw(&p.0, u, v, w))
}

/// `ImΩ` without tangency checks; callers guarantee the arguments are tangent.
pub fn im_omega_raw(p: &ImOctonion, u: &ImOctonion, v: &ImOctonion, w: &ImOctonion) -> f64 {
    -star_phi0(p, u, v, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gram_schmidt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut ChaCha8Rng) -> ImOctonion {
        ImOctonion::from_array(std::array::from_fn(|_| rng.random::<f64>() - 0.5)).normalize()
    }

    fn random_tangent(rng: &mut ChaCha8Rng, p: &SpherePoint) -> ImOctonion {
        let v = ImOctonion::from_array(std::array::from_fn(|_| rng.random::<f64>() - 0.5));
        project_tangent(p, &v).v
    }

    #[test]
    fn j_examples() {
        let p = SpherePoint::e(1);
        assert_eq!(almost_complex_j(&p, &ImOctonion::e(2)).unwrap().v, ImOctonion::e(3));
        assert_eq!(almost_complex_j(&p, &ImOctonion::e(3)).unwrap().v, -ImOctonion::e(2));
        assert_eq!(almost_complex_j(&p, &ImOctonion::zero()).unwrap().v, ImOctonion::zero());
        assert!(matches!(
            almost_complex_j(&p, &ImOctonion::e(1)),
            Err(FormsError::NotTangent { .. })
        ));
    }

    #[test]
    fn j_squares_to_minus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = SpherePoint::normalized(random_unit(&mut rng));
            let v = random_tangent(&mut rng, &p);
            let jv = almost_complex_j(&p, &v).unwrap().v;
            let jjv = almost_complex_j(&p, &jv).unwrap().v;
            assert!((jjv + v).0.amax() < 1e-12);
        }
    }

    #[test]
    fn omega_is_j_invariant_and_nondegenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p0 = SpherePoint::e(1);
        assert_eq!(omega_at(&p0, &ImOctonion::e(2), &ImOctonion::e(3)).unwrap(), 1.0);
        for _ in 0..1000 {
            let p = SpherePoint::normalized(random_unit(&mut rng));
            let u = random_tangent(&mut rng, &p);
            let v = random_tangent(&mut rng, &p);
            let ju = almost_complex_j(&p, &u).unwrap().v;
            let jv = almost_complex_j(&p, &v).unwrap().v;
            let a = omega_at(&p, &u, &v).unwrap();
            let b = omega_at(&p, &ju, &jv).unwrap();
            assert!((a - b).abs() < 1e-12);
            assert!(omega_at(&p, &u, &u).unwrap().abs() < 1e-15);
        }
        // Gram matrix of ω on an orthonormal tangent basis is orthogonal, so |det| = 1.
        let p = SpherePoint::normalized(random_unit(&mut rng));
        let raw: Vec<ImOctonion> = (1..=7).map(|k| project_tangent(&p, &ImOctonion::e(k)).v).collect();
        let basis = gram_schmidt(&raw[..6], 1e-6)
            .or_else(|_| gram_schmidt(&raw[1..], 1e-6))
            .unwrap();
        let m = nalgebra::DMatrix::from_fn(6, 6, |i, j| omega_at(&p, &basis[i], &basis[j]).unwrap());
        assert!((m.determinant().abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn upsilon_and_im_omega() {
        let p = SpherePoint::e(1);
        let e = ImOctonion::e;
        assert_eq!(upsilon_at(&p, &e(2), &e(4), &e(6)).unwrap(), phi0(&e(2), &e(4), &e(6)));
        assert_eq!(upsilon_at(&p, &e(2), &e(2), &e(6)).unwrap(), 0.0);
        assert_eq!(im_omega_at(&p, &e(3), &e(5), &e(5)).unwrap(), 0.0);
        // L0 at ε1 with the frame (ε3, ε5, ε7).
        assert_eq!(-im_omega_at(&p, &e(3), &e(5), &e(7)).unwrap(), 1.0);
    }

    #[test]
    fn minus_im_omega_is_calibrated() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let p = SpherePoint::normalized(random_unit(&mut rng));
            let raw: Vec<ImOctonion> = (0..3).map(|_| random_tangent(&mut rng, &p)).collect();
            let f = gram_schmidt(&raw, 1e-8).unwrap();
            let val = -im_omega_at(&p, &f[0], &f[1], &f[2]).unwrap();
            assert!(val <= 1.0 + 1e-12);
        }
    }
}
