//! Intrinsic curvature from finite differences of the induced metric.

use nalgebra::DMatrix;

use super::{FrameAtPoint, ImmersionPatch, JetError};
use crate::linalg::SymMat3;
use crate::tol;

/// Riemann tensor `R_ijkl` in an orthonormal frame, with `R_1212` the sectional
/// curvature of `e1 ∧ e2`.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub frame: FrameAtPoint,
    n: usize,
    r: Vec<f64>,
    /// Size of the Richardson correction, relative to `max(1, |R|)`.
    pub richardson_gap: f64,
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((i * n + j) * n + k) * n + l]
    }

    /// `R(a, b, a, b)` for frame-coordinate vectors; divide by `|a∧b|²` for the sectional curvature.
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        s += self.get(i, j, k, l) * a[i] * b[j] * a[k] * b[l];
                    }
                }
            }
        }
        s
    }

    pub fn sectional(&self, a: &[f64], b: &[f64]) -> f64 {
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
        let area = dot(a, a) * dot(b, b) - dot(a, b).powi(2);
        self.eval(a, b) / area
    }

    /// `K_ii = R_jkjk − 1`, `K_ij = R_jkki` for cyclic `(i j k)`.
    pub fn k_tensor(&self) -> Result<SymMat3, JetError> {
        if self.n != 3 {
            return Err(JetError::WrongDimension { expected: 3, got: self.n });
        }
        let mut k = [[0.0; 3]; 3];
        for i in 0..3 {
            let (j, l) = ((i + 1) % 3, (i + 2) % 3);
            k[i][i] = self.get(j, l, j, l) - 1.0;
            k[i][j] = 0.5 * (self.get(j, l, l, i) + self.get(l, j, i, l));
            k[j][i] = k[i][j];
        }
        Ok(SymMat3(k))
    }

    pub fn gauss_curvature(&self) -> Result<f64, JetError> {
        if self.n != 2 {
            return Err(JetError::WrongDimension { expected: 2, got: self.n });
        }
        Ok(self.get(0, 1, 0, 1))
    }
}

struct MetricJet {
    g: DMatrix<f64>,
    dg: Vec<DMatrix<f64>>,
    ddg: Vec<Vec<DMatrix<f64>>>,
}

fn metric_at(patch: &ImmersionPatch, params: &[f64], moves: &[(usize, f64)]) -> DMatrix<f64> {
    let mut q = params.to_vec();
    for &(a, h) in moves {
        q[a] += h;
    }
    ImmersionPatch::metric_from(&patch.first(&q))
}

fn metric_jet(patch: &ImmersionPatch, params: &[f64], h: f64) -> MetricJet {
    let n = patch.dim();
    let g = metric_at(patch, params, &[]);
    let plus: Vec<_> = (0..n).map(|c| metric_at(patch, params, &[(c, h)])).collect();
    let minus: Vec<_> = (0..n).map(|c| metric_at(patch, params, &[(c, -h)])).collect();
    let dg = (0..n).map(|c| (&plus[c] - &minus[c]) / (2.0 * h)).collect();
    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for c in 0..n {
        ddg[c][c] = (&plus[c] - &g * 2.0 + &minus[c]) / (h * h);
        for d in 0..c {
            let pp = metric_at(patch, params, &[(c, h), (d, h)]);
            let pm = metric_at(patch, params, &[(c, h), (d, -h)]);
            let mp = metric_at(patch, params, &[(c, -h), (d, h)]);
            let mm = metric_at(patch, params, &[(c, -h), (d, -h)]);
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            ddg[c][d] = v.clone();
            ddg[d][c] = v;
        }
    }
    MetricJet { g, dg, ddg }
}

fn extrapolate(fine: &MetricJet, coarse: &MetricJet) -> MetricJet {
    let rich = |f: &DMatrix<f64>, c: &DMatrix<f64>| f + (f - c) / 3.0;
    MetricJet {
        g: fine.g.clone(),
        dg: fine.dg.iter().zip(&coarse.dg).map(|(f, c)| rich(f, c)).collect(),
        ddg: fine
            .ddg
            .iter()
            .zip(&coarse.ddg)
            .map(|(rf, rc)| rf.iter().zip(rc).map(|(f, c)| rich(f, c)).collect())
            .collect(),
    }
}

/// Coordinate components `R_abcd`, flattened.
fn riemann_coords(m: &MetricJet) -> Vec<f64> {
    let n = m.g.nrows();
    let ginv = m.g.clone().try_inverse().expect("metric is positive definite");
    let dg = |k: usize, i: usize, j: usize| m.dg[k][(i, j)];
    let gamma = |k: usize, i: usize, j: usize| 0.5 * (dg(i, j, k) + dg(j, i, k) - dg(k, i, j));
    let mut r = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let dd = |x: usize, y: usize, i: usize, j: usize| m.ddg[x][y][(i, j)];
                    let mut v = 0.5 * (dd(b, c, a, d) + dd(a, d, b, c) - dd(a, c, b, d) - dd(b, d, a, c));
                    for p in 0..n {
                        for q in 0..n {
                            v += ginv[(p, q)] * (gamma(p, b, c) * gamma(q, a, d) - gamma(p, b, d) * gamma(q, a, c));
                        }
                    }
                    r[((a * n + b) * n + c) * n + d] = v;
                }
            }
        }
    }
    r
}

fn to_frame(r: &[f64], c: &DMatrix<f64>) -> Vec<f64> {
    let n = c.nrows();
    let idx = |a: usize, b: usize, x: usize, y: usize| ((a * n + b) * n + x) * n + y;
    // Contract one slot at a time.
    let mut cur = r.to_vec();
    for slot in 0..4 {
        let mut next = vec![0.0; cur.len()];
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    for i3 in 0..n {
                        let mut s = 0.0;
                        for a in 0..n {
                            let mut k = [i0, i1, i2, i3];
                            let out = k[slot];
                            k[slot] = a;
                            s += c[(a, out)] * cur[idx(k[0], k[1], k[2], k[3])];
                        }
                        next[idx(i0, i1, i2, i3)] = s;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

pub fn riemann(patch: &ImmersionPatch, params: &[f64]) -> Result<Curvature, JetError> {
    riemann_with_step(patch, params, tol::METRIC_STEP)
}

/// Curvature from metric differences at steps `eta` and `eta/2`, Richardson-extrapolated.
pub fn riemann_with_step(patch: &ImmersionPatch, params: &[f64], eta: f64) -> Result<Curvature, JetError> {
    let frame = patch.frame(params)?;
    let coarse = metric_jet(patch, params, eta);
    let fine = metric_jet(patch, params, 0.5 * eta);
    let raw = to_frame(&riemann_coords(&fine), &frame.coeff);
    let r = to_frame(&riemann_coords(&extrapolate(&fine, &coarse)), &frame.coeff);
    let gap = r
        .iter()
        .zip(&raw)
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max);
    if gap > tol::RICHARDSON {
        return Err(JetError::RichardsonBreakdown(gap));
    }
    Ok(Curvature { n: patch.dim(), frame, r, richardson_gap: gap })
}

pub fn riemann_k(patch: &ImmersionPatch, params: &[f64]) -> Result<SymMat3, JetError> {
    riemann(patch, params)?.k_tensor()
}

/// `R_ii = K_jj + K_kk + 2`, `R_ij = −K_ij`.
pub fn ricci(k: &SymMat3) -> SymMat3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = if i == j { k.trace() - k.0[i][i] + 2.0 } else { -k.0[i][j] };
        }
    }
    SymMat3(r)
}

pub fn gauss_curvature(patch: &ImmersionPatch, params: &[f64]) -> Result<f64, JetError> {
    riemann(patch, params)?.gauss_curvature()
}

#[cfg(test)]
mod tests {
    use super::super::tests::assoc_sphere;
    use super::*;
    use crate::octonion::ImOctonion;

    #[test]
    fn unit_sphere_has_curvature_one() {
        let s = assoc_sphere();
        for q in s.grid(3) {
            assert!((gauss_curvature(&s, &q).unwrap() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn small_sphere_curvature() {
        // Latitude-free round sphere of radius 1/2 inside S⁶ is not geodesic; its
        // intrinsic curvature is 4.
        let s = ImmersionPatch::new("small", vec![[0.5, 2.5], [0.0, 6.0]], |q: &[f64]| {
            let (t, p) = (q[0], q[1]);
            let c = 0.75f64.sqrt();
            ImOctonion::e(4) * c
                + (ImOctonion::e(1) * (t.sin() * p.cos()) + ImOctonion::e(2) * (t.sin() * p.sin()) + ImOctonion::e(3) * t.cos())
                    * 0.5
        });
        // Finite-difference tangents limit the accuracy to roughly 1e-6.
        assert!((gauss_curvature(&s, &[1.2, 0.4]).unwrap() - 4.0).abs() < 1e-4);
    }

    #[test]
    fn ricci_formula() {
        let r = ricci(&SymMat3::zero());
        assert_eq!(r, SymMat3::diag(2.0, 2.0, 2.0));
    }
}
