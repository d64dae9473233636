//! Small dense helpers: symmetric 3×3 matrices with a cyclic Jacobi eigensolver,
//! rotation sampling, and Gram–Schmidt.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::octonion::ImOctonion;

/// Off-diagonal threshold at which Jacobi sweeps stop, relative to the Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymMat3(pub [[f64; 3]; 3]);

#[derive(Clone, Copy, Debug)]
pub struct Eigen3 {
    /// Sorted in decreasing order.
    pub values: [f64; 3],
    /// Column `k` is the unit eigenvector for `values[k]`; the matrix has determinant +1.
    pub vectors: Matrix3<f64>,
}

impl SymMat3 {
    pub fn zero() -> Self {
        SymMat3([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        SymMat3::diag(1.0, 1.0, 1.0)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        SymMat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// Symmetrize an arbitrary matrix.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let mut a = [[0.0; 3]; 3];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = 0.5 * (m[(i, j)] + m[(j, i)]);
            }
        }
        SymMat3(a)
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.0[i][j])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        SymMat3(self.0.map(|r| r.map(|x| x * t)))
    }

    pub fn sub(&self, other: &SymMat3) -> Self {
        let mut a = self.0;
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] -= other.0[i][j];
            }
        }
        SymMat3(a)
    }

    /// `ρ K ρᵀ`.
    pub fn conjugate(&self, rho: &Matrix3<f64>) -> Self {
        SymMat3::from_matrix(&(rho * self.to_matrix() * rho.transpose()))
    }

    pub fn max_abs_diff(&self, other: &SymMat3) -> f64 {
        self.sub(other).0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn eigen(&self) -> Eigen3 {
        jacobi_eigen(self)
    }
}

/// Cyclic Jacobi rotations until the off-diagonal mass drops below `JACOBI_TOL`.
pub fn jacobi_eigen(m: &SymMat3) -> Eigen3 {
    let mut a = m.0;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale = m.norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2)).sqrt();
        if off <= JACOBI_TOL * scale || off == 0.0 {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for row in a.iter_mut() {
                let (x, y) = (row[p], row[q]);
                row[p] = c * x - s * y;
                row[q] = s * x + c * y;
            }
            for k in 0..3 {
                let (x, y) = (a[p][k], a[q][k]);
                a[p][k] = c * x - s * y;
                a[q][k] = s * x + c * y;
            }
            for row in v.iter_mut() {
                let (x, y) = (row[p], row[q]);
                row[p] = c * x - s * y;
                row[q] = s * x + c * y;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.map(|i| a[i][i]);
    let mut vectors = Matrix3::from_fn(|r, c| v[r][order[c]]);
    if vectors.determinant() < 0.0 {
        for r in 0..3 {
            vectors[(r, 2)] = -vectors[(r, 2)];
        }
    }
    Eigen3 { values, vectors }
}

/// Uniform random rotation (Shoemake's subgroup algorithm).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let tau = std::f64::consts::TAU;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let q = [a * (tau * u2).sin(), a * (tau * u2).cos(), b * (tau * u3).sin(), b * (tau * u3).cos()];
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    )
}

/// Rotation by `angle` about the unit `axis`.
pub fn axis_rotation(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(*axis), angle).into_inner()
}

/// Modified Gram–Schmidt (two passes). Returns `None` when a vector is dependent on
/// its predecessors to within `tol`, together with the smallest residual norm seen.
pub fn gram_schmidt(vectors: &[ImOctonion], tol: f64) -> Result<Vec<ImOctonion>, f64> {
    let mut out: Vec<ImOctonion> = Vec::with_capacity(vectors.len());
    let mut smallest = f64::INFINITY;
    for v in vectors {
        let mut w = *v;
        for _ in 0..2 {
            for e in &out {
                w -= *e * e.dot(&w);
            }
        }
        let n = w.norm();
        smallest = smallest.min(n / v.norm().max(f64::MIN_POSITIVE));
        if n <= tol * v.norm().max(1.0) {
            return Err(smallest);
        }
        out.push(w / n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn jacobi_diagonalizes() {
        let m = SymMat3([[2.0, 1.0, 0.5], [1.0, -1.0, 0.3], [0.5, 0.3, 4.0]]);
        let e = m.eigen();
        assert!(e.values[0] >= e.values[1] && e.values[1] >= e.values[2]);
        let d = e.vectors.transpose() * m.to_matrix() * e.vectors;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { e.values[i] } else { 0.0 };
                assert!((d[(i, j)] - target).abs() < 1e-12);
            }
        }
        assert!((e.vectors.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_handles_degenerate_input() {
        let e = SymMat3::diag(-3.0, 1.0, -3.0).eigen();
        assert_eq!(e.values, [1.0, -3.0, -3.0]);
        let z = SymMat3::zero().eigen();
        assert_eq!(z.values, [0.0; 3]);
    }

    #[test]
    fn random_rotations_are_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let r = random_rotation(&mut rng);
            assert!((r.transpose() * r - Matrix3::identity()).amax() < 1e-12);
            assert!((r.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_schmidt_rejects_dependent_sets() {
        let a = ImOctonion::e(1);
        let b = ImOctonion::e(1) * 2.0 + ImOctonion::e(2) * 1e-14;
        assert!(gram_schmidt(&[a, b], 1e-10).is_err());
        let q = gram_schmidt(&[a, ImOctonion::e(1) + ImOctonion::e(3)], 1e-10).unwrap();
        assert!((q[1].dot(&ImOctonion::e(3)) - 1.0).abs() < 1e-15);
    }
}
