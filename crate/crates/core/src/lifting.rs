//! The lifting `ν ↦ m_d(ν)` into `R^{k_d}`, its relation to the minors of
//! diagonal matrices, and its inverse on the image.
//!
//! Component layout is fixed everywhere in the crate:
//! d = 2: `(ν1, ν2, ν1ν2)`;
//! d = 3: `(ν1, ν2, ν3, ν2ν3, ν1ν3, ν1ν2, ν1ν2ν3)`.

use crate::error::{Error, Result};
use crate::matkit::{check_dim, MinorsVector};

/// Default tolerance of the redundancy relations, used both absolutely and
/// relative to the magnitude of the product.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// `k_d = 2^d - 1`.
pub fn lifted_dim(dim: usize) -> Result<usize> {
    check_dim(dim)?;
    Ok((1 << dim) - 1)
}

/// Recovers d from k_d.
pub fn dim_of_lifted(k: usize) -> Result<usize> {
    match k {
        3 => Ok(2),
        7 => Ok(3),
        _ => Err(Error::DimensionMismatch { expected: 7, actual: k }),
    }
}

/// A point of the lifted space `R^{k_d}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedPoint {
    dim: usize,
    x: [f64; 7],
}

impl LiftedPoint {
    pub fn new(dim: usize, coords: &[f64]) -> Result<Self> {
        let k = lifted_dim(dim)?;
        if coords.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: coords.len(),
            });
        }
        let mut x = [0.0; 7];
        x[..k].copy_from_slice(coords);
        Ok(Self { dim, x })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.x[..(1 << self.dim) - 1]
    }

    /// The determinant-like last coordinate.
    pub fn last(&self) -> f64 {
        self.coords()[self.coords().len() - 1]
    }

    pub fn dot(&self, beta: &[f64]) -> f64 {
        self.coords().iter().zip(beta).map(|(a, b)| a * b).sum()
    }
}

/// Writes `m_d(ν)` into `out` (length `k_d`). No dimension checks: this is
/// the inner-loop form used by the conjugation sweeps.
#[inline]
pub fn lift_into(nu: &[f64], out: &mut [f64]) {
    match nu.len() {
        2 => {
            out[0] = nu[0];
            out[1] = nu[1];
            out[2] = nu[0] * nu[1];
        }
        _ => {
            out[0] = nu[0];
            out[1] = nu[1];
            out[2] = nu[2];
            out[3] = nu[1] * nu[2];
            out[4] = nu[0] * nu[2];
            out[5] = nu[0] * nu[1];
            // same association as the cofactor determinant, so that
            // lifting and projected minors agree bit for bit
            out[6] = nu[0] * (nu[1] * nu[2]);
        }
    }
}

pub fn lift(nu: &[f64]) -> Result<LiftedPoint> {
    let k = lifted_dim(nu.len())?;
    let mut x = [0.0; 7];
    lift_into(nu, &mut x[..k]);
    Ok(LiftedPoint { dim: nu.len(), x })
}

/// `⟨β, m_d(ν)⟩` without materializing the lifted point.
#[inline]
pub fn lifted_pairing(beta: &[f64], nu: &[f64]) -> f64 {
    match nu.len() {
        2 => beta[0] * nu[0] + beta[1] * nu[1] + beta[2] * nu[0] * nu[1],
        _ => {
            beta[0] * nu[0]
                + beta[1] * nu[1]
                + beta[2] * nu[2]
                + beta[3] * nu[1] * nu[2]
                + beta[4] * nu[0] * nu[2]
                + beta[5] * nu[0] * nu[1]
                + beta[6] * (nu[0] * (nu[1] * nu[2]))
        }
    }
}

/// Keeps the diagonals of the matrix blocks and the determinant entry.
pub fn project(m: &MinorsVector) -> LiftedPoint {
    let mut x = [0.0; 7];
    let d = m.dim();
    for i in 0..d {
        x[i] = m.a.get(i, i);
    }
    let mut next = d;
    if let Some(b) = &m.b {
        for i in 0..d {
            x[next + i] = b.get(i, i);
        }
        next += d;
    }
    x[next] = m.c;
    LiftedPoint { dim: d, x }
}

/// Result of testing whether a lifted point lies on `Im(m_d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// Largest absolute violation of the redundancy relations.
    pub residual: f64,
}

/// Tests the redundancy relations of the image within `tol`, applied as
/// `|lhs - product| <= tol * (1 + |product|)`.
pub fn membership(x: &LiftedPoint, tol: f64) -> Membership {
    let c = x.coords();
    let relations: Vec<(f64, f64)> = match x.dim() {
        2 => vec![(c[2], c[0] * c[1])],
        _ => vec![
            (c[3], c[1] * c[2]),
            (c[4], c[0] * c[2]),
            (c[5], c[0] * c[1]),
            (c[6], c[0] * (c[1] * c[2])),
        ],
    };
    let mut residual: f64 = 0.0;
    let mut member = true;
    for (lhs, prod) in relations {
        let v = (lhs - prod).abs();
        residual = residual.max(v);
        if v > tol * (1.0 + prod.abs()) {
            member = false;
        }
    }
    Membership { member, residual }
}

/// Inverse of [`lift`] on its image: the first d coordinates.
pub fn recover(x: &LiftedPoint, tol: f64) -> Result<Vec<f64>> {
    let m = membership(x, tol);
    if !m.member {
        return Err(Error::NotInImage { residual: m.residual });
    }
    Ok(x.coords()[..x.dim()].to_vec())
}

/// Elementary symmetric polynomials of `ν`.
pub fn elementary_symmetric(nu: &[f64]) -> Result<Vec<f64>> {
    check_dim(nu.len())?;
    Ok(match nu.len() {
        2 => vec![nu[0] + nu[1], nu[0] * nu[1]],
        _ => vec![
            nu[0] + nu[1] + nu[2],
            nu[1] * nu[2] + nu[0] * nu[2] + nu[0] * nu[1],
            nu[0] * nu[1] * nu[2],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{minors, SquareMatrix};
    use proptest::prelude::*;

    #[test]
    fn lift_examples() {
        assert_eq!(lift(&[2.0, 3.0]).unwrap().coords(), &[2.0, 3.0, 6.0]);
        assert_eq!(
            lift(&[1.0, 2.0, 3.0]).unwrap().coords(),
            &[1.0, 2.0, 3.0, 6.0, 3.0, 2.0, 6.0]
        );
        assert_eq!(lift(&[0.0, 0.0]).unwrap().coords(), &[0.0, 0.0, 0.0]);
        assert!(lift(&[1.0]).is_err());
    }

    #[test]
    fn project_examples() {
        let m = minors(&SquareMatrix::diag(&[1.0, 2.0, 3.0]).unwrap());
        assert_eq!(project(&m).coords(), &[1.0, 2.0, 3.0, 6.0, 3.0, 2.0, 6.0]);

        let off = MinorsVector {
            a: SquareMatrix::from_rows2([[0.0, 5.0], [7.0, 0.0]]).unwrap(),
            b: None,
            c: 4.5,
        };
        assert_eq!(project(&off).coords(), &[0.0, 0.0, 4.5]);
    }

    #[test]
    fn membership_examples() {
        let p = LiftedPoint::new(2, &[1.0, 2.0, 2.0]).unwrap();
        assert_eq!(
            membership(&p, MEMBERSHIP_TOL),
            Membership {
                member: true,
                residual: 0.0
            }
        );
        let q = LiftedPoint::new(2, &[1.0, 2.0, 3.0]).unwrap();
        let m = membership(&q, MEMBERSHIP_TOL);
        assert!(!m.member);
        assert_eq!(m.residual, 1.0);
    }

    #[test]
    fn recover_examples() {
        let p = LiftedPoint::new(2, &[2.0, 3.0, 6.0]).unwrap();
        assert_eq!(recover(&p, MEMBERSHIP_TOL).unwrap(), vec![2.0, 3.0]);
        let p = LiftedPoint::new(3, &[1.0, 2.0, 3.0, 6.0, 3.0, 2.0, 6.0]).unwrap();
        assert_eq!(recover(&p, MEMBERSHIP_TOL).unwrap(), vec![1.0, 2.0, 3.0]);
        let p = LiftedPoint::new(2, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(recover(&p, MEMBERSHIP_TOL), Err(Error::NotInImage { residual: 1.0 }));
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0]).unwrap(), vec![6.0, 11.0, 6.0]);
        assert_eq!(elementary_symmetric(&[1.5, 1.5]).unwrap(), vec![3.0, 2.25]);
        assert_eq!(elementary_symmetric(&[1.0, -1.0, 0.0]).unwrap(), vec![0.0, -1.0, 0.0]);
    }

    #[test]
    fn pairing_matches_lift() {
        let beta = [0.5, -1.0, 2.0, 0.25, -0.75, 1.5, 3.0];
        let nu = [1.5, -0.5, 2.0];
        let direct = lift(&nu).unwrap().dot(&beta);
        assert!((lifted_pairing(&beta, &nu) - direct).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn lift_equals_projected_minors(nu in proptest::collection::vec(-10.0f64..10.0, 2..=3)) {
            let m = minors(&SquareMatrix::diag(&nu).unwrap());
            prop_assert_eq!(project(&m), lift(&nu).unwrap());
        }

        #[test]
        fn recover_inverts_lift(nu in proptest::collection::vec(-10.0f64..10.0, 2..=3)) {
            let x = lift(&nu).unwrap();
            prop_assert_eq!(membership(&x, 0.0).residual, 0.0);
            prop_assert_eq!(recover(&x, MEMBERSHIP_TOL).unwrap(), nu);
        }

        #[test]
        fn elementary_symmetric_is_permutation_invariant(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
            let e = elementary_symmetric(&[a, b, c]).unwrap();
            for p in [[b, a, c], [c, b, a], [a, c, b], [b, c, a], [c, a, b]] {
                let q = elementary_symmetric(&p).unwrap();
                for (x, y) in e.iter().zip(&q) {
                    prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
                }
            }
        }
    }
}
