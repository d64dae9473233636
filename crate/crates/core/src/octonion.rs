//! Octonion arithmetic over the fixed basis `1, ε1, …, ε7`, the seven-dimensional
//! cross product, and the constant-coefficient G2 forms `φ0` and `*φ0`.
//!
//! Orientation is `ε1∧…∧ε7 > 0`. Everything else is read off `MUL_TABLE`.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use nalgebra::{Matrix4, SMatrix, SVector};
use num_complex::Complex64;

pub type Vec7 = SVector<f64, 7>;
pub type Mat7 = SMatrix<f64, 7, 7>;
pub type CVec7 = SVector<Complex64, 7>;

/// `MUL_TABLE[i][j] = (sign, k)` encodes `ε_{i+1} ε_{j+1} = sign · e_k`, where `e_0 = 1`
/// and `e_k = ε_k` otherwise.
pub const MUL_TABLE: [[(i8, u8); 7]; 7] = [
    [(-1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (1, 7), (-1, 6)],
    [(-1, 3), (-1, 0), (1, 1), (1, 6), (-1, 7), (-1, 4), (1, 5)],
    [(1, 2), (-1, 1), (-1, 0), (-1, 7), (-1, 6), (1, 5), (1, 4)],
    [(-1, 5), (-1, 6), (1, 7), (-1, 0), (1, 1), (1, 2), (-1, 3)],
    [(1, 4), (1, 7), (1, 6), (-1, 1), (-1, 0), (-1, 3), (-1, 2)],
    [(-1, 7), (1, 4), (-1, 5), (-1, 2), (1, 3), (-1, 0), (1, 1)],
    [(1, 6), (-1, 5), (-1, 4), (1, 3), (1, 2), (-1, 1), (-1, 0)],
];

/// Product of basis elements `e_a e_b` for `a, b ∈ 0..8` (index 0 is the unit).
pub fn basis_product(a: usize, b: usize) -> (i8, usize) {
    match (a, b) {
        (0, b) => (1, b),
        (a, 0) => (1, a),
        (a, b) => {
            let (s, k) = MUL_TABLE[a - 1][b - 1];
            (s, k as usize)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn zero() -> Self {
        Octonion([0.0; 8])
    }

    /// The basis element `e_k` (`k = 0` is the unit).
    pub fn basis(k: usize) -> Self {
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Octonion(c)
    }

    pub fn from_parts(re: f64, im: &ImOctonion) -> Self {
        let mut c = [0.0; 8];
        c[0] = re;
        c[1..].copy_from_slice(im.0.as_slice());
        Octonion(c)
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn im(&self) -> ImOctonion {
        ImOctonion(Vec7::from_column_slice(&self.0[1..]))
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0.map(|x| -x);
        c[0] = self.0[0];
        Octonion(c)
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn mul(&self, other: &Octonion) -> Octonion {
        let mut out = [0.0; 8];
        for a in 0..8 {
            if self.0[a] == 0.0 {
                continue;
            }
            for b in 0..8 {
                let (s, k) = basis_product(a, b);
                out[k] += f64::from(s) * self.0[a] * other.0[b];
            }
        }
        Octonion(out)
    }

    pub fn scale(&self, t: f64) -> Octonion {
        Octonion(self.0.map(|x| x * t))
    }

    pub fn add(&self, other: &Octonion) -> Octonion {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(other.0.iter()) {
            *x += y;
        }
        Octonion(c)
    }

    pub fn max_abs_diff(&self, other: &Octonion) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn mul(a: &Octonion, b: &Octonion) -> Octonion {
    a.mul(b)
}

/// Imaginary octonion, coordinates along `ε1…ε7`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImOctonion(pub Vec7);

impl ImOctonion {
    pub fn zero() -> Self {
        ImOctonion(Vec7::zeros())
    }

    /// `ε_k` for `k ∈ 1..=7`.
    pub fn e(k: usize) -> Self {
        assert!((1..=7).contains(&k), "basis index {k} outside 1..=7");
        let mut v = Vec7::zeros();
        v[k - 1] = 1.0;
        ImOctonion(v)
    }

    pub fn from_array(c: [f64; 7]) -> Self {
        ImOctonion(Vec7::from(c))
    }

    pub fn to_array(&self) -> [f64; 7] {
        self.0.into()
    }

    pub fn dot(&self, other: &ImOctonion) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn normalize(&self) -> ImOctonion {
        ImOctonion(self.0 / self.0.norm())
    }

    pub fn cross(&self, other: &ImOctonion) -> ImOctonion {
        cross(self, other)
    }

    pub fn transform(&self, m: &Mat7) -> ImOctonion {
        ImOctonion(m * self.0)
    }
}

impl Index<usize> for ImOctonion {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for ImOctonion {
    type Output = ImOctonion;
    fn add(self, rhs: ImOctonion) -> ImOctonion {
        ImOctonion(self.0 + rhs.0)
    }
}

impl Sub for ImOctonion {
    type Output = ImOctonion;
    fn sub(self, rhs: ImOctonion) -> ImOctonion {
        ImOctonion(self.0 - rhs.0)
    }
}

impl Neg for ImOctonion {
    type Output = ImOctonion;
    fn neg(self) -> ImOctonion {
        ImOctonion(-self.0)
    }
}

impl Mul<f64> for ImOctonion {
    type Output = ImOctonion;
    fn mul(self, t: f64) -> ImOctonion {
        ImOctonion(self.0 * t)
    }
}

impl Mul<ImOctonion> for f64 {
    type Output = ImOctonion;
    fn mul(self, v: ImOctonion) -> ImOctonion {
        ImOctonion(v.0 * self)
    }
}

impl Div<f64> for ImOctonion {
    type Output = ImOctonion;
    fn div(self, t: f64) -> ImOctonion {
        ImOctonion(self.0 / t)
    }
}

impl AddAssign for ImOctonion {
    fn add_assign(&mut self, rhs: ImOctonion) {
        self.0 += rhs.0;
    }
}

impl SubAssign for ImOctonion {
    fn sub_assign(&mut self, rhs: ImOctonion) {
        self.0 -= rhs.0;
    }
}

impl From<Vec7> for ImOctonion {
    fn from(v: Vec7) -> Self {
        ImOctonion(v)
    }
}

/// Cross product on `Im O`: the imaginary part of the octonion product.
pub fn cross(u: &ImOctonion, v: &ImOctonion) -> ImOctonion {
    let mut out = Vec7::zeros();
    for i in 0..7 {
        if u.0[i] == 0.0 {
            continue;
        }
        for j in 0..7 {
            let (s, k) = MUL_TABLE[i][j];
            if k != 0 {
                out[k as usize - 1] += f64::from(s) * u.0[i] * v.0[j];
            }
        }
    }
    ImOctonion(out)
}

/// Complex-bilinear extension of [`cross`].
pub fn cross_c(u: &CVec7, v: &CVec7) -> CVec7 {
    let mut out = CVec7::zeros();
    for i in 0..7 {
        for j in 0..7 {
            let (s, k) = MUL_TABLE[i][j];
            if k != 0 {
                out[k as usize - 1] += u[i] * v[j] * f64::from(s);
            }
        }
    }
    out
}

/// `φ0` as a list of `(i, j, k, coefficient)` with `i < j < k` (0-based indices).
pub fn phi0_terms() -> &'static [(usize, usize, usize, f64)] {
    static TERMS: OnceLock<Vec<(usize, usize, usize, f64)>> = OnceLock::new();
    TERMS.get_or_init(|| {
        let mut terms = Vec::new();
        for i in 0..7 {
            for j in (i + 1)..7 {
                let (s, k) = MUL_TABLE[i][j];
                let k = k as usize - 1;
                if k > j {
                    terms.push((i, j, k, f64::from(s)));
                }
            }
        }
        terms
    })
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for a in 0..p.len() {
        for b in (a + 1)..p.len() {
            if p[a] > p[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `*φ0` as `([a, b, c, d], coefficient)` with increasing indices, from the
/// complementary-index sign of each `φ0` term.
pub fn star_phi0_terms() -> &'static [([usize; 4], f64)] {
    static TERMS: OnceLock<Vec<([usize; 4], f64)>> = OnceLock::new();
    TERMS.get_or_init(|| {
        phi0_terms()
            .iter()
            .map(|&(i, j, k, c)| {
                let rest: Vec<usize> = (0..7).filter(|&m| m != i && m != j && m != k).collect();
                let perm = [i, j, k, rest[0], rest[1], rest[2], rest[3]];
                ([rest[0], rest[1], rest[2], rest[3]], c * permutation_sign(&perm))
            })
            .collect()
    })
}

pub fn phi0(u: &ImOctonion, v: &ImOctonion, w: &ImOctonion) -> f64 {
    cross(u, v).dot(w)
}

pub fn star_phi0(a: &ImOctonion, b: &ImOctonion, c: &ImOctonion, d: &ImOctonion) -> f64 {
    star_phi0_terms()
        .iter()
        .map(|(idx, coef)| {
            let m = Matrix4::from_fn(|r, col| {
                let v = [a, b, c, d][r];
                v.0[idx[col]]
            });
            coef * m.determinant()
        })
        .sum()
}

/// The elementary skew map with `E_ij(ε_j) = ε_i` and `E_ij(ε_i) = −ε_j` (1-based indices).
pub fn e_ij(i: usize, j: usize) -> Mat7 {
    assert!(i != j && (1..=7).contains(&i) && (1..=7).contains(&j));
    let mut m = Mat7::zeros();
    m[(i - 1, j - 1)] = 1.0;
    m[(j - 1, i - 1)] = -1.0;
    m
}

/// Largest deviation from the derivation rule `U(u×v) = Uu×v + u×Uv` over basis pairs,
/// and whether it is below `1e-12·max(1, max|U|)`.
pub fn is_g2_derivation(u: &Mat7) -> (bool, f64) {
    let mut worst: f64 = 0.0;
    for a in 1..=7 {
        for b in 1..=7 {
            let ea = ImOctonion::e(a);
            let eb = ImOctonion::e(b);
            let lhs = cross(&ea, &eb).transform(u);
            let rhs = cross(&ea.transform(u), &eb) + cross(&ea, &eb.transform(u));
            worst = worst.max((lhs - rhs).0.amax());
        }
    }
    let scale = u.amax().max(1.0);
    (worst < 1e-12 * scale, worst)
}

/// Reverse the sign of `ε7`. Translates formulas written for the opposite orientation
/// of `Im O` into this basis.
pub fn flip_e7(v: &ImOctonion) -> ImOctonion {
    let mut w = *v;
    w.0[6] = -w.0[6];
    w
}

/// Conjugate a linear map by the `ε7` sign flip.
pub fn flip_e7_matrix(m: &Mat7) -> Mat7 {
    let mut d = Mat7::identity();
    d[(6, 6)] = -1.0;
    d * m * d
}
