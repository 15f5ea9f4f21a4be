//! Small dense linear algebra for 2×2 and 3×3 matrices.
//!
//! Everything here works on fixed-size row-major storage; no allocation
//! happens on the hot paths used by the rotation and isotropy checks.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use rand::Rng;

use crate::error::{Error, Result};

/// Maximum number of one-sided Jacobi sweeps for the 3×3 SVD.
pub const JACOBI_MAX_SWEEPS: usize = 64;
/// Relative off-diagonal tolerance for the Jacobi sweeps.
pub const JACOBI_TOL: f64 = 1e-14;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// A dense d×d real matrix with d ∈ {2, 3}, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    e: [f64; 9],
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.dim)
            .map(|i| &self.e[i * self.dim..(i + 1) * self.dim])
            .collect();
        f.debug_struct("SquareMatrix").field("rows", &rows).finish()
    }
}

impl SquareMatrix {
    pub fn new(dim: usize, entries: &[f64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteEntry(pos));
        }
        let mut e = [0.0; 9];
        e[..entries.len()].copy_from_slice(entries);
        Ok(Self { dim, e })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, e: [0.0; 9] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        Ok(m)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry(i * values.len() + i));
            }
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn from_rows2(r: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(2, &[r[0][0], r[0][1], r[1][0], r[1][1]])
    }

    pub fn from_rows3(r: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(
            3,
            &[
                r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2],
            ],
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.e[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.e[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.e[..self.dim * self.dim]
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(i, j, self.get(j, i));
            }
        }
        t
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries().iter().map(|x| x * x).sum()
    }

    /// Frobenius inner product `A : B`.
    pub fn contract(&self, other: &Self) -> f64 {
        self.entries().iter().zip(other.entries()).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for x in m.e.iter_mut() {
            *x *= s;
        }
        m
    }

    /// Determinant by cofactor expansion.
    pub fn det(&self) -> f64 {
        let g = |i, j| self.get(i, j);
        match self.dim {
            2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
            _ => {
                g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
            }
        }
    }

    /// Cofactor matrix, i.e. `adj(M)^T`. Only defined for 3×3 matrices,
    /// the only case where the adjugate block appears in the minors.
    pub fn adjugate_transpose(&self) -> Result<Self> {
        if self.dim != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                actual: self.dim,
            });
        }
        let g = |i: usize, j: usize| self.get(i, j);
        let mut c = Self { dim: 3, e: [0.0; 9] };
        for i in 0..3 {
            for j in 0..3 {
                let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
                let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
                // cyclic index choice already carries the (-1)^(i+j) sign
                c.set(i, j, g(r0, c0) * g(r1, c1) - g(r0, c1) * g(r1, c0));
            }
        }
        Ok(c)
    }

    /// Inverse via cofactors; `None` when the matrix is singular.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 {
            return None;
        }
        let cof = match self.dim {
            2 => Self {
                dim: 2,
                e: [
                    self.get(1, 1),
                    -self.get(1, 0),
                    -self.get(0, 1),
                    self.get(0, 0),
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                ],
            },
            _ => self.adjugate_transpose().ok()?,
        };
        Some(cof.transpose().scale(1.0 / det))
    }

    /// Entrywise (Schur) product.
    pub fn schur(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let mut m = *self;
        for (x, y) in m.e.iter_mut().zip(other.e.iter()) {
            *x *= y;
        }
        Ok(m)
    }

    fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self { dim: d, e: [0.0; 9] };
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }
}

impl Mul for SquareMatrix {
    type Output = SquareMatrix;

    /// Panics on a dimension mismatch; use [`SquareMatrix::schur`]-style
    /// checked helpers when mixing dimensions is possible.
    fn mul(self, rhs: SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.matmul(&rhs)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.matmul(rhs)
    }
}

/// Entrywise product `A ⊙ B`.
pub fn schur_product(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    a.schur(b)
}

/// The minors of a matrix: `(F, det F)` for d = 2 and
/// `(F, adj(F)^T, det F)` for d = 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorsVector {
    pub a: SquareMatrix,
    pub b: Option<SquareMatrix>,
    pub c: f64,
}

impl MinorsVector {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

pub fn minors(f: &SquareMatrix) -> MinorsVector {
    let b = if f.dim() == 3 {
        Some(f.adjugate_transpose().expect("dimension checked"))
    } else {
        None
    };
    MinorsVector { a: *f, b, c: f.det() }
}

/// Canonical representative of the signed singular values of a matrix:
/// magnitudes sorted descending, the sign of the determinant carried by the
/// last entry only.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSpectrum {
    nu: Vec<f64>,
}

impl SignedSpectrum {
    pub fn dim(&self) -> usize {
        self.nu.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.nu
    }

    pub fn into_values(self) -> Vec<f64> {
        self.nu
    }

    /// Product of the entries, equal to `det F` of the source matrix.
    pub fn product(&self) -> f64 {
        self.nu.iter().product()
    }
}

/// Signed singular values of `f` in canonical form.
pub fn signed_svd(f: &SquareMatrix) -> Result<SignedSpectrum> {
    let det = f.det();
    let mut sigma = match f.dim() {
        2 => singular_values_2x2(f),
        _ => singular_values_3x3(f)?,
    };
    sigma.sort_by(|a, b| b.total_cmp(a));
    let last = sigma.len() - 1;
    if det < 0.0 {
        sigma[last] = -sigma[last];
    }
    // normalize -0.0 so zero singular values carry the + sign
    for s in sigma.iter_mut() {
        if *s == 0.0 {
            *s = 0.0;
        }
    }
    Ok(SignedSpectrum { nu: sigma })
}

/// Closed form: with `F = [[a, b], [c, d]]` the singular values are `q ± r`
/// where `q = |(a + d, c - b)| / 2` and `r = |(a - d, c + b)| / 2`.
fn singular_values_2x2(f: &SquareMatrix) -> Vec<f64> {
    let (a, b, c, d) = (f.get(0, 0), f.get(0, 1), f.get(1, 0), f.get(1, 1));
    let q = 0.5 * (a + d).hypot(c - b);
    let r = 0.5 * (a - d).hypot(c + b);
    vec![q + r, (q - r).abs()]
}

/// One-sided Jacobi: rotate column pairs until they are mutually orthogonal;
/// the column norms are then the singular values.
fn singular_values_3x3(f: &SquareMatrix) -> Result<Vec<f64>> {
    let mut cols = [[0.0f64; 3]; 3];
    for (j, col) in cols.iter_mut().enumerate() {
        for (i, x) in col.iter_mut().enumerate() {
            *x = f.get(i, j);
        }
    }
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
            let beta: f64 = cols[q].iter().map(|x| x * x).sum();
            let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
            if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = c * t;
            for i in 0..3 {
                let (xp, xq) = (cols[p][i], cols[q][i]);
                cols[p][i] = c * xp - s * xq;
                cols[q][i] = s * xp + c * xq;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence(JACOBI_MAX_SWEEPS));
    }
    Ok(cols
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect())
}

/// An element of SO(d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(SquareMatrix);

impl Rotation {
    /// Planar rotation by `theta` (counter-clockwise).
    pub fn planar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Rotation(SquareMatrix::from_rows2([[c, -s], [s, c]]).expect("finite"))
    }

    /// Rotation matrix of a unit quaternion `(w, x, y, z)`.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        let m = SquareMatrix::from_rows3([
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ])
        .expect("finite");
        Rotation(m)
    }

    /// Wraps a matrix after checking orthogonality and unit determinant.
    pub fn try_from_matrix(m: SquareMatrix, tol: f64) -> Option<Self> {
        let gram = m.transpose() * m;
        let id = SquareMatrix::identity(m.dim()).ok()?;
        if gram.max_abs_diff(&id) <= tol && (m.det() - 1.0).abs() <= tol {
            Some(Rotation(m))
        } else {
            None
        }
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// Draws a Haar-distributed element of SO(d). Deterministic given the state
/// of `rng`.
///
/// d = 2 uses a uniform angle; d = 3 uses a uniform unit quaternion
/// (Shoemake's subgroup algorithm), whose induced rotation is Haar.
pub fn sample_rotation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Rotation> {
    check_dim(dim)?;
    if dim == 2 {
        let theta = rng.random::<f64>() * 2.0 * PI;
        return Ok(Rotation::planar(theta));
    }
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let u3: f64 = rng.random();
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (s2, c2) = (2.0 * PI * u2).sin_cos();
    let (s3, c3) = (2.0 * PI * u3).sin_cos();
    Ok(Rotation::from_quaternion(b * c3, a * s2, a * c2, b * s3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m3(r: [[f64; 3]; 3]) -> SquareMatrix {
        SquareMatrix::from_rows3(r).unwrap()
    }

    #[test]
    fn determinants() {
        assert_eq!(SquareMatrix::identity(2).unwrap().det(), 1.0);
        assert_eq!(SquareMatrix::diag(&[2.0, -3.0]).unwrap().det(), -6.0);
        assert_eq!(SquareMatrix::diag(&[1.0, 2.0, 3.0]).unwrap().det(), 6.0);
        let m = m3([[2.0, 0.0, 1.0], [1.0, 3.0, 2.0], [1.0, 1.0, 1.0]]);
        // 2(3-2) - 0 + 1(1-3)
        assert_eq!(m.det(), 0.0);
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert_eq!(
            SquareMatrix::new(2, &[1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::NonFiniteEntry(1))
        );
        assert!(SquareMatrix::new(4, &[0.0; 16]).is_err());
        assert!(SquareMatrix::new(2, &[0.0; 3]).is_err());
    }

    #[test]
    fn adjugate_of_diagonals() {
        let id = SquareMatrix::identity(3).unwrap();
        assert_eq!(id.adjugate_transpose().unwrap(), id);
        let d = SquareMatrix::diag(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            d.adjugate_transpose().unwrap(),
            SquareMatrix::diag(&[6.0, 3.0, 2.0]).unwrap()
        );
        // singular input: cofactors of diag(0,0,1) are 0*1, 0*1, 0*0
        let s = SquareMatrix::diag(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(s.adjugate_transpose().unwrap(), SquareMatrix::zeros(3).unwrap());
    }

    #[test]
    fn adjugate_requires_three_by_three() {
        let m = SquareMatrix::identity(2).unwrap();
        assert_eq!(
            m.adjugate_transpose(),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        );
    }

    #[test]
    fn adjugate_matches_inverse_formula() {
        let m = m3([[2.0, -1.0, 0.5], [0.3, 1.7, -2.0], [1.1, 0.0, 0.9]]);
        let expected = m.inverse().unwrap().scale(m.det()).transpose();
        assert!(m.adjugate_transpose().unwrap().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn minors_of_diagonals() {
        let d2 = SquareMatrix::diag(&[2.0, 5.0]).unwrap();
        let mv = minors(&d2);
        assert_eq!(mv.a, d2);
        assert!(mv.b.is_none());
        assert_eq!(mv.c, 10.0);

        let d3 = SquareMatrix::diag(&[1.0, 2.0, 3.0]).unwrap();
        let mv = minors(&d3);
        assert_eq!(mv.b.unwrap(), SquareMatrix::diag(&[6.0, 3.0, 2.0]).unwrap());
        assert_eq!(mv.c, 6.0);

        let id = SquareMatrix::identity(2).unwrap();
        let mv = minors(&id);
        assert_eq!((mv.a, mv.c), (id, 1.0));
    }

    #[test]
    fn signed_svd_examples() {
        let s = signed_svd(&SquareMatrix::diag(&[2.0, -3.0]).unwrap()).unwrap();
        assert_eq!(s.values(), &[3.0, -2.0]);
        let s = signed_svd(&SquareMatrix::identity(3).unwrap()).unwrap();
        for v in s.values() {
            assert!((v - 1.0).abs() < 1e-15);
        }
        let r = Rotation::planar(std::f64::consts::FRAC_PI_2);
        let s = signed_svd(r.matrix()).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-15 && (s.values()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn signed_svd_zero_singular_value_is_positive() {
        let s = signed_svd(&SquareMatrix::diag(&[0.0, -2.0, 1.0]).unwrap()).unwrap();
        assert_eq!(s.values(), &[2.0, 1.0, 0.0]);
        assert!(s.values()[2].is_sign_positive());
        let s = signed_svd(&SquareMatrix::zeros(2).unwrap()).unwrap();
        assert!(s.values().iter().all(|v| *v == 0.0 && v.is_sign_positive()));
    }

    #[test]
    fn signed_svd_product_matches_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let e: Vec<f64> = (0..9).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let f = SquareMatrix::new(3, &e).unwrap();
            let s = signed_svd(&f).unwrap();
            let v = s.values();
            assert!(v[0] >= v[1].abs() && v[1] >= v[2].abs());
            assert!(v[0] >= 0.0 && v[1] >= 0.0);
            assert!((s.product() - f.det()).abs() <= 1e-8 * f.det().abs().max(1.0));
            // sum of squared singular values is the Frobenius norm
            let fro: f64 = v.iter().map(|x| x * x).sum();
            assert!((fro - f.frobenius_sq()).abs() < 1e-10 * fro.max(1.0));
        }
    }

    #[test]
    fn schur_products() {
        let id = SquareMatrix::identity(2).unwrap();
        assert_eq!(schur_product(&id, &id).unwrap(), id);
        let swap = SquareMatrix::from_rows2([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let d = SquareMatrix::diag(&[1.0, 2.0]).unwrap();
        assert_eq!(schur_product(&d, &swap).unwrap(), SquareMatrix::zeros(2).unwrap());
        let a = SquareMatrix::from_rows2([[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let b = SquareMatrix::from_rows2([[5.0, 6.0], [7.0, 8.0]]).unwrap();
        assert_eq!(
            schur_product(&a, &b).unwrap(),
            SquareMatrix::from_rows2([[5.0, 12.0], [21.0, 32.0]]).unwrap()
        );
        assert!(schur_product(&a, &SquareMatrix::identity(3).unwrap()).is_err());
    }

    #[test]
    fn rotations_are_special_orthogonal_and_deterministic() {
        for dim in [2, 3] {
            let mut a = ChaCha8Rng::seed_from_u64(11);
            let mut b = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..200 {
                let r = sample_rotation(dim, &mut a).unwrap();
                assert_eq!(r, sample_rotation(dim, &mut b).unwrap());
                assert!(Rotation::try_from_matrix(*r.matrix(), 1e-12).is_some());
            }
        }
        let r = sample_rotation(2, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let m = r.matrix();
        assert!((m.get(0, 0) - m.get(1, 1)).abs() < 1e-15);
        assert!((m.get(0, 1) + m.get(1, 0)).abs() < 1e-15);
    }

    #[test]
    fn haar_entry_means_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 10_000;
        let mut mean = [0.0; 9];
        for _ in 0..n {
            let r = sample_rotation(3, &mut rng).unwrap();
            for (acc, x) in mean.iter_mut().zip(r.matrix().entries()) {
                *acc += x / n as f64;
            }
        }
        for m in mean {
            assert!(m.abs() < 3.0 / (n as f64).sqrt(), "mean {m}");
        }
    }
}
