//! Signed permutations whose sign vector has product one, acting on signed
//! singular values by `(Sν)_i = signs_i · ν_{perm(i)}`.
//!
//! These are exactly the maps on `ν` induced by `diag(ν) ↦ R1 diag(ν) R2`
//! with `R1, R2 ∈ SO(d)` and the result again diagonal. As matrices they
//! have determinant `sign(perm)`; the rotations realizing them are given by
//! [`embedding`].

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gridfn::{DimKind, GridFunction, GridSpec};
use crate::lifting::{lift_into, lifted_dim, lifted_pairing};
use crate::matkit::{check_dim, minors, Rotation, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    dim: usize,
    perm: [usize; 3],
    signs: [i8; 3],
}

impl GroupElement {
    /// `perm` is 0-based. Rejects non-permutations and sign vectors whose
    /// product is not +1.
    pub fn new(perm: &[usize], signs: &[i8]) -> Result<Self> {
        let dim = perm.len();
        check_dim(dim)?;
        if signs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: signs.len(),
            });
        }
        let mut seen = [false; 3];
        for &p in perm {
            if p >= dim || seen[p] {
                return Err(Error::InvalidParameter {
                    model: "group element".into(),
                    reason: format!("{perm:?} is not a permutation"),
                });
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) || signs.iter().product::<i8>() != 1 {
            return Err(Error::InvalidParameter {
                model: "group element".into(),
                reason: format!("signs {signs:?} must be ±1 with product +1"),
            });
        }
        let mut p = [0, 1, 2];
        let mut s = [1; 3];
        p[..dim].copy_from_slice(perm);
        s[..dim].copy_from_slice(signs);
        Ok(Self { dim, perm: p, signs: s })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            perm: [0, 1, 2],
            signs: [1; 3],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm[..self.dim]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs[..self.dim]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| self.perm[i] == i && self.signs[i] == 1)
    }

    pub fn apply(&self, nu: &[f64]) -> Result<Vec<f64>> {
        if nu.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: nu.len(),
            });
        }
        let mut out = vec![0.0; self.dim];
        self.apply_into(nu, &mut out);
        Ok(out)
    }

    #[inline]
    pub(crate) fn apply_into(&self, nu: &[f64], out: &mut [f64]) {
        for i in 0..self.dim {
            out[i] = if self.signs[i] == 1 {
                nu[self.perm[i]]
            } else {
                -nu[self.perm[i]]
            };
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        // (a(bν))_i = sa_i (bν)_{pa(i)} = sa_i sb_{pa(i)} ν_{pb(pa(i))}
        let mut perm = [0, 1, 2];
        let mut signs = [1; 3];
        for i in 0..self.dim {
            let j = self.perm[i];
            perm[i] = other.perm[j];
            signs[i] = self.signs[i] * other.signs[j];
        }
        Ok(GroupElement {
            dim: self.dim,
            perm,
            signs,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let mut perm = [0, 1, 2];
        let mut signs = [1; 3];
        for i in 0..self.dim {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        GroupElement {
            dim: self.dim,
            perm,
            signs,
        }
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn perm_sign(&self) -> i8 {
        let p = self.perm();
        let mut inversions = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The matrix `S` with `S ν = apply(ν)`.
    pub fn to_matrix(&self) -> SquareMatrix {
        let d = self.dim;
        let mut e = vec![0.0; d * d];
        for i in 0..d {
            e[i * d + self.perm[i]] = self.signs[i] as f64;
        }
        SquareMatrix::new(d, &e).expect("finite entries")
    }

    /// The permutation part alone, `P_{i, perm(i)} = 1`.
    fn permutation_matrix(&self) -> SquareMatrix {
        let d = self.dim;
        let mut e = vec![0.0; d * d];
        for i in 0..d {
            e[i * d + self.perm[i]] = 1.0;
        }
        SquareMatrix::new(d, &e).expect("finite entries")
    }
}

/// Rotations `(R1, R2)` with `R1 · diag(ν) · R2 = diag(Sν)` for every `ν`.
///
/// With `S = diag(signs) · P`, `S diag(ν) Pᵀ = diag(Sν)`. For odd `P` both
/// factors have determinant −1, so a reflection `E = diag(−1, 1, ..)` is
/// inserted on both sides: `E diag(ν) E = diag(ν)`.
pub fn embedding(s: &GroupElement) -> (Rotation, Rotation) {
    let d = s.dim();
    let m = s.to_matrix();
    let pt = s.permutation_matrix().transpose();
    let (r1, r2) = if s.perm_sign() == 1 {
        (m, pt)
    } else {
        let mut e = vec![1.0; d];
        e[0] = -1.0;
        let e = SquareMatrix::diag(&e).expect("finite entries");
        (&m * &e, &e * &pt)
    };
    (
        Rotation::try_from_matrix(r1, 1e-12).expect("signed permutation with det 1"),
        Rotation::try_from_matrix(r2, 1e-12).expect("signed permutation with det 1"),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupTable {
    dim: usize,
    elements: Vec<GroupElement>,
}

impl GroupTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }

    /// All images `Sν`, in table order (duplicates kept).
    pub fn orbit(&self, nu: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.elements.iter().map(|g| g.apply(nu)).collect()
    }
}

fn build_table(dim: usize) -> GroupTable {
    let perms: Vec<Vec<usize>> = match dim {
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ],
    };
    // +1 sorts before -1 so that the identity comes first
    let mut sign_vectors: Vec<Vec<i8>> = (0..1usize << dim)
        .map(|bits| {
            (0..dim)
                .map(|i| if (bits >> (dim - 1 - i)) & 1 == 0 { 1 } else { -1 })
                .collect::<Vec<i8>>()
        })
        .filter(|s| s.iter().product::<i8>() == 1)
        .collect();
    sign_vectors.dedup();
    let elements = perms
        .iter()
        .flat_map(|p| {
            sign_vectors
                .iter()
                .map(move |s| GroupElement::new(p, s).expect("valid by construction"))
        })
        .collect();
    GroupTable { dim, elements }
}

/// The full group, identity first, ordered lexicographically by
/// `(perm, signs)` with `+1 < -1`. Computed once per dimension.
pub fn enumerate_group(dim: usize) -> Result<&'static GroupTable> {
    static D2: OnceLock<GroupTable> = OnceLock::new();
    static D3: OnceLock<GroupTable> = OnceLock::new();
    check_dim(dim)?;
    Ok(match dim {
        2 => D2.get_or_init(|| build_table(2)),
        _ => D3.get_or_init(|| build_table(3)),
    })
}

/// Errors unless `spec` is a nu-space grid (identical symmetric axes).
pub fn check_compatible(spec: &GridSpec) -> Result<()> {
    if spec.kind() != DimKind::Nu {
        return Err(Error::IncompatibleGrid(format!(
            "expected a nu-space grid, got {}",
            spec.kind().as_str()
        )));
    }
    // GridSpec already enforces identical, mirror-symmetric axes for nu grids
    Ok(())
}

/// For each node index, the index of its image under `g`.
pub fn node_permutation(spec: &GridSpec, g: &GroupElement) -> Result<Vec<usize>> {
    check_compatible(spec)?;
    if spec.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: g.dim(),
        });
    }
    let n = spec.axes()[0].len();
    let strides = spec.strides();
    Ok((0..spec.len())
        .map(|i| {
            let multi = spec.multi_index_unchecked(i);
            (0..g.dim())
                .map(|a| {
                    let src = multi[g.perm()[a]];
                    let j = if g.signs()[a] == 1 { src } else { n - 1 - src };
                    j * strides[a]
                })
                .sum()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub max_deviation: f64,
    /// Node and group-element position (in [`enumerate_group`] order) of the
    /// worst deviation, when it is nonzero.
    pub witness: Option<(usize, usize)>,
}

fn deviation(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if a.is_finite() && b.is_finite() {
        (a - b).abs()
    } else {
        f64::INFINITY
    }
}

/// Checks `|Φ(ν) − Φ(Sν)| ≤ tol` at every node for every group element.
/// Equal infinities count as deviation 0.
pub fn is_invariant(phi: &GridFunction, tol: f64) -> Result<InvarianceReport> {
    let spec = phi.spec();
    check_compatible(spec)?;
    let table = enumerate_group(spec.dim())?;
    let v = phi.values();
    let mut report = InvarianceReport {
        invariant: true,
        max_deviation: 0.0,
        witness: None,
    };
    for (k, g) in table.elements().iter().enumerate().skip(1) {
        let image = node_permutation(spec, g)?;
        for (i, &j) in image.iter().enumerate() {
            let dev = deviation(v[i], v[j]);
            if dev > report.max_deviation {
                report.max_deviation = dev;
                report.witness = Some((i, k));
            }
        }
    }
    report.invariant = report.max_deviation <= tol;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymmetrizeMode {
    #[default]
    Min,
    Max,
}

/// Replaces each value by the min (or max) over its orbit.
pub fn symmetrize(phi: &GridFunction, mode: SymmetrizeMode) -> Result<GridFunction> {
    let spec = phi.spec();
    check_compatible(spec)?;
    let table = enumerate_group(spec.dim())?;
    let mut out = phi.values().to_vec();
    for g in table.elements().iter().skip(1) {
        let image = node_permutation(spec, g)?;
        for (i, &j) in image.iter().enumerate() {
            let w = phi.values()[j];
            out[i] = match mode {
                SymmetrizeMode::Min => out[i].min(w),
                SymmetrizeMode::Max => out[i].max(w),
            };
        }
    }
    GridFunction::from_values(spec.clone(), out)
}

/// `Λ_β(ν) = max over S of ⟨β, m_d(Sν)⟩`.
pub fn lambda_support(beta: &[f64], nu: &[f64]) -> Result<f64> {
    let k = lifted_dim(nu.len())?;
    if beta.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: beta.len(),
        });
    }
    let table = enumerate_group(nu.len())?;
    let mut s = [0.0; 3];
    let mut best = f64::NEG_INFINITY;
    for g in table.elements() {
        g.apply_into(nu, &mut s[..nu.len()]);
        best = best.max(lifted_pairing(beta, &s[..nu.len()]));
    }
    Ok(best)
}

fn check_rotation_args(beta: &[f64], nu: &[f64], r1: &Rotation, r2: &Rotation) -> Result<usize> {
    let d = nu.len();
    let k = lifted_dim(d)?;
    if beta.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: beta.len(),
        });
    }
    for r in [r1, r2] {
        if r.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: r.dim(),
            });
        }
    }
    Ok(d)
}

/// `⟨β, P(M(R1 · diag(ν) · R2))⟩` by forming the matrix and its minors.
pub fn lifted_rotation_value(beta: &[f64], nu: &[f64], r1: &Rotation, r2: &Rotation) -> Result<f64> {
    check_rotation_args(beta, nu, r1, r2)?;
    let f = &(r1.matrix() * &SquareMatrix::diag(nu)?) * r2.matrix();
    let p = crate::lifting::project(&minors(&f));
    Ok(p.dot(beta))
}

/// The same value through `(R1 ⊙ R2ᵀ) : N + β_k ν•`, where
/// `N_ij = β_i ν_j` (plus `β_{d+i} ν̃_j` in 3-D, `ν̃` the pairwise products).
pub fn lifted_rotation_value_schur(beta: &[f64], nu: &[f64], r1: &Rotation, r2: &Rotation) -> Result<f64> {
    let d = check_rotation_args(beta, nu, r1, r2)?;
    let mut lifted = [0.0; 7];
    let k = lifted_dim(d)?;
    lift_into(nu, &mut lifted[..k]);
    let mut n = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            n[i * d + j] = beta[i] * nu[j];
            if d == 3 {
                n[i * d + j] += beta[d + i] * lifted[d + j];
            }
        }
    }
    let n = SquareMatrix::new(d, &n)?;
    let w = r1.matrix().schur(&r2.matrix().transpose())?;
    Ok(w.contract(&n) + beta[k - 1] * lifted[k - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::lift;
    use crate::matkit::sample_rotation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_sizes_and_order() {
        let g2 = enumerate_group(2).unwrap();
        assert_eq!(g2.len(), 4);
        assert!(g2.elements()[0].is_identity());
        let g3 = enumerate_group(3).unwrap();
        assert_eq!(g3.len(), 24);
        assert!(g3.elements()[0].is_identity());
        let mut sorted = g3.elements().to_vec();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
        assert!(enumerate_group(4).is_err());
    }

    #[test]
    fn d2_elements_are_the_expected_four() {
        let g2 = enumerate_group(2).unwrap();
        let images: Vec<Vec<f64>> = g2.elements().iter().map(|g| g.apply(&[2.0, 3.0]).unwrap()).collect();
        assert_eq!(
            images,
            vec![vec![2.0, 3.0], vec![-2.0, -3.0], vec![3.0, 2.0], vec![-3.0, -2.0]]
        );
    }

    #[test]
    fn closure_inverse_and_products() {
        for d in [2, 3] {
            let t = enumerate_group(d).unwrap();
            for a in t.elements() {
                assert!(t.position(&a.inverse()).is_some());
                assert!(a.compose(&a.inverse()).unwrap().is_identity());
                assert_eq!(
                    a.to_matrix().det(),
                    a.perm_sign() as f64,
                    "matrix determinant is the permutation sign"
                );
                for b in t.elements() {
                    let c = a.compose(b).unwrap();
                    assert!(t.position(&c).is_some());
                    let nu = [0.3, -1.7, 2.9];
                    let nu = &nu[..d];
                    let lhs = c.apply(nu).unwrap();
                    let rhs = a.apply(&b.apply(nu).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn apply_examples() {
        let id = GroupElement::identity(2).unwrap();
        assert_eq!(id.apply(&[2.0, 3.0]).unwrap(), vec![2.0, 3.0]);
        let swap = GroupElement::new(&[1, 0], &[1, 1]).unwrap();
        assert_eq!(swap.apply(&[2.0, 3.0]).unwrap(), vec![3.0, 2.0]);
        let flip = GroupElement::new(&[0, 1, 2], &[-1, -1, 1]).unwrap();
        let out = flip.apply(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(out, vec![-1.0, -2.0, 3.0]);
        assert_eq!(out.iter().product::<f64>(), 6.0);
        assert!(flip.apply(&[1.0, 2.0]).is_err());
        assert!(GroupElement::new(&[0, 1], &[-1, 1]).is_err());
        assert!(GroupElement::new(&[0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn embedding_diagonalizes_to_the_image() {
        let nu = [1.5, -0.25, 2.0];
        for d in [2, 3] {
            let nu = &nu[..d];
            for g in enumerate_group(d).unwrap().elements() {
                let (r1, r2) = embedding(g);
                let f = &(r1.matrix() * &SquareMatrix::diag(nu).unwrap()) * r2.matrix();
                let expect = SquareMatrix::diag(&g.apply(nu).unwrap()).unwrap();
                assert_eq!(f.max_abs_diff(&expect), 0.0);
            }
        }
    }

    fn grid(d: usize) -> GridSpec {
        GridSpec::uniform(DimKind::Nu, d, 3.0, 7).unwrap()
    }

    #[test]
    fn invariance_examples() {
        let sq = GridFunction::build(grid(2), |x| x[0] * x[0] + x[1] * x[1]).unwrap();
        let r = is_invariant(&sq, 0.0).unwrap();
        assert!(r.invariant);
        assert_eq!(r.max_deviation, 0.0);

        let first = GridFunction::build(grid(2), |x| x[0]).unwrap();
        let r = is_invariant(&first, 1e-12).unwrap();
        assert!(!r.invariant);
        let (node, _) = r.witness.unwrap();
        assert_ne!(grid(2).node_at(node).unwrap()[0], 0.0);

        let prod = GridFunction::build(grid(2), |x| x[0] * x[1]).unwrap();
        assert!(is_invariant(&prod, 0.0).unwrap().invariant);

        let beta_grid = GridSpec::uniform(DimKind::Beta, 3, 1.0, 3).unwrap();
        let f = GridFunction::build(beta_grid, |_| 0.0).unwrap();
        assert!(matches!(is_invariant(&f, 0.0), Err(Error::IncompatibleGrid(_))));
    }

    #[test]
    fn invariance_with_infinities() {
        let ind = GridFunction::build(grid(2), |x| if x[0] * x[1] > 0.0 { 0.0 } else { f64::INFINITY }).unwrap();
        assert!(is_invariant(&ind, 0.0).unwrap().invariant);
        let half = GridFunction::build(grid(2), |x| if x[0] > 0.0 { 0.0 } else { f64::INFINITY }).unwrap();
        assert_eq!(is_invariant(&half, 0.0).unwrap().max_deviation, f64::INFINITY);
    }

    #[test]
    fn symmetrize_examples() {
        let spec = GridSpec::uniform(DimKind::Nu, 2, 3.0, 7).unwrap();
        let at = spec.locate(&[2.0, 3.0]).unwrap();
        let first = GridFunction::build(spec.clone(), |x| x[0]).unwrap();
        let lo = symmetrize(&first, SymmetrizeMode::Min).unwrap();
        let hi = symmetrize(&first, SymmetrizeMode::Max).unwrap();
        assert_eq!(lo.values()[at], -3.0);
        assert_eq!(hi.values()[at], 3.0);
        assert_eq!(is_invariant(&lo, 0.0).unwrap().max_deviation, 0.0);

        let sq = GridFunction::build(spec, |x| x[0] * x[0] + x[1] * x[1]).unwrap();
        assert_eq!(symmetrize(&sq, SymmetrizeMode::default()).unwrap(), sq);

        let g3 = GridFunction::build(grid(3), |x| x[0] + 2.0 * x[1] * x[2]).unwrap();
        assert!(
            is_invariant(&symmetrize(&g3, SymmetrizeMode::Min).unwrap(), 0.0)
                .unwrap()
                .invariant
        );
    }

    #[test]
    fn lambda_support_examples() {
        assert_eq!(lambda_support(&[1.0, 0.0, 0.0], &[2.0, 3.0]).unwrap(), 3.0);
        assert_eq!(lambda_support(&[0.0, 0.0, 1.0], &[2.0, -3.0]).unwrap(), -6.0);
        let mut e7 = [0.0; 7];
        e7[6] = 1.0;
        assert_eq!(lambda_support(&e7, &[1.0, -2.0, 0.5]).unwrap(), -1.0);
        assert_eq!(lambda_support(&[0.0; 3], &[1.0, 1.0]).unwrap(), 0.0);
        assert!(lambda_support(&[0.0; 7], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn rotation_value_examples() {
        let beta = [0.7, -1.1, 2.3];
        let nu = [1.25, -0.5];
        let id = Rotation::planar(0.0);
        let direct = lift(&nu).unwrap().dot(&beta);
        assert!((lifted_rotation_value(&beta, &nu, &id, &id).unwrap() - direct).abs() < 1e-14);

        let (a, b) = (1.25, -0.5);
        let r1 = Rotation::planar(std::f64::consts::FRAC_PI_2);
        let r2 = Rotation::planar(-std::f64::consts::FRAC_PI_2);
        let v = lifted_rotation_value(&beta, &nu, &r1, &r2).unwrap();
        assert!((v - (beta[0] * b + beta[1] * a + beta[2] * a * b)).abs() < 1e-12);
    }

    #[test]
    fn schur_formula_matches_direct_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3] {
            let k = lifted_dim(d).unwrap();
            for _ in 0..500 {
                let beta: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
                let nu: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
                let r1 = sample_rotation(d, &mut rng).unwrap();
                let r2 = sample_rotation(d, &mut rng).unwrap();
                let a = lifted_rotation_value(&beta, &nu, &r1, &r2).unwrap();
                let b = lifted_rotation_value_schur(&beta, &nu, &r1, &r2).unwrap();
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
                assert!(a <= lambda_support(&beta, &nu).unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn lambda_support_is_orbit_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [2, 3] {
            let k = lifted_dim(d).unwrap();
            for _ in 0..200 {
                let beta: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
                let nu: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
                let l = lambda_support(&beta, &nu).unwrap();
                for g in enumerate_group(d).unwrap().elements() {
                    assert_eq!(lambda_support(&beta, &g.apply(&nu).unwrap()).unwrap(), l);
                }
            }
        }
    }
}
