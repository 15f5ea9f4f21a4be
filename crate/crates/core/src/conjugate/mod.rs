//! Discrete conjugations by brute force over finite grids.
//!
//! `Φ^∧(β) = max over ν-nodes of ⟨β, m_d(ν)⟩ − Φ(ν)` and
//! `Θ^∨(ν) = max over β-nodes of ⟨β, m_d(ν)⟩ − Θ(β)`; the envelope is
//! `Φ^∧∨`. Nodes where the function is `+inf` are skipped, so `+inf − +inf`
//! never occurs. Ties in an argmax go to the lowest flat index.
//!
//! The pairing is evaluated by the same expression in both directions, so
//! on fixed grids `Φ^∧∨∧ = Φ^∧` holds exactly, not just up to rounding.

pub mod lp;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gridfn::{DimKind, GridFunction, GridSpec};
use crate::lifting::{lift_into, lifted_dim};
use crate::symmetry::{check_compatible, is_invariant};

pub use lp::{lp_biconjugate_at, solve_standard_form, LpOutcome, LpWitness};

/// Default node count per β axis when the grid is chosen automatically.
pub const DEFAULT_BETA_COUNT_2D: usize = 49;
pub const DEFAULT_BETA_COUNT_3D: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationConfig {
    pub nu_grid: GridSpec,
    pub beta_grid: GridSpec,
    pub tol: f64,
}

impl ConjugationConfig {
    pub fn new(nu_grid: GridSpec, beta_grid: GridSpec, tol: f64) -> Result<Self> {
        check_compatible(&nu_grid)?;
        if beta_grid.kind() != DimKind::Beta {
            return Err(Error::InvalidGrid(format!(
                "expected a beta-space grid, got {}",
                beta_grid.kind().as_str()
            )));
        }
        let k = lifted_dim(nu_grid.dim())?;
        if beta_grid.dim() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: beta_grid.dim(),
            });
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidGrid(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self {
            nu_grid,
            beta_grid,
            tol,
        })
    }

    /// `5 h²` with `h` the largest ν-grid spacing.
    pub fn default_tol(nu_grid: &GridSpec) -> f64 {
        let h = nu_grid.max_spacing();
        5.0 * h * h
    }
}

/// Values of a discrete max-of-affine transform together with the input
/// node attaining each value.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    pub values: GridFunction,
    /// Input-grid index of the maximizer, `None` where every term was skipped.
    pub argmax: Vec<Option<usize>>,
}

/// For each output vector `o`: `max_i ⟨o, x_i⟩ − v_i` with its index.
fn max_affine(
    outputs: &[f64],
    inputs: &[f64],
    vals: &[f64],
    ids: &[usize],
    k: usize,
) -> (Vec<f64>, Vec<Option<usize>>) {
    let eval = |o: &[f64]| -> (f64, Option<usize>) {
        let mut best = f64::NEG_INFINITY;
        let mut arg = None;
        for (x, (&v, &id)) in inputs.chunks_exact(k).zip(vals.iter().zip(ids)) {
            let mut s = 0.0;
            for j in 0..k {
                s += o[j] * x[j];
            }
            let t = s - v;
            if t > best {
                best = t;
                arg = Some(id);
            }
        }
        (best, arg)
    };
    #[cfg(feature = "parallel")]
    let pairs: Vec<(f64, Option<usize>)> = {
        use rayon::prelude::*;
        outputs.par_chunks_exact(k).map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let pairs: Vec<(f64, Option<usize>)> = outputs.chunks_exact(k).map(eval).collect();
    pairs.into_iter().unzip()
}

fn lifted_nodes(spec: &GridSpec) -> Result<Vec<f64>> {
    let d = spec.dim();
    let k = lifted_dim(d)?;
    let mut out = vec![0.0; spec.len() * k];
    let mut node = [0.0; 3];
    for (i, chunk) in out.chunks_exact_mut(k).enumerate() {
        spec.node_into(i, &mut node[..d]);
        lift_into(&node[..d], chunk);
    }
    Ok(out)
}

/// Finite-valued input nodes: flattened vectors, values, grid indices.
fn finite_inputs(vectors: &[f64], f: &GridFunction, k: usize) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    let mut ids = Vec::new();
    for (i, &v) in f.values().iter().enumerate() {
        if v.is_finite() {
            xs.extend_from_slice(&vectors[i * k..(i + 1) * k]);
            vs.push(v);
            ids.push(i);
        }
    }
    (xs, vs, ids)
}

fn transform(
    f: &GridFunction,
    input_vectors: &[f64],
    out_spec: &GridSpec,
    output_vectors: &[f64],
    k: usize,
) -> Result<Transform> {
    if !f.has_finite() {
        return Err(Error::AllInfinite);
    }
    if f.has_neg_inf() {
        // a -inf sample makes every supremum +inf
        return Ok(Transform {
            values: GridFunction::from_values(out_spec.clone(), vec![f64::INFINITY; out_spec.len()])?,
            argmax: vec![None; out_spec.len()],
        });
    }
    let (xs, vs, ids) = finite_inputs(input_vectors, f, k);
    let (values, argmax) = max_affine(output_vectors, &xs, &vs, &ids, k);
    Ok(Transform {
        values: GridFunction::from_values(out_spec.clone(), values)?,
        argmax,
    })
}

fn check_beta_grid(nu: &GridSpec, beta: &GridSpec) -> Result<usize> {
    let k = lifted_dim(nu.dim())?;
    if beta.kind() != DimKind::Beta || beta.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: beta.dim(),
        });
    }
    Ok(k)
}

/// `Φ^∧` on `beta_grid`, with the maximizing ν-node per β-node.
pub fn sv_conjugate_with_argmax(phi: &GridFunction, beta_grid: &GridSpec) -> Result<Transform> {
    check_compatible(phi.spec())?;
    let k = check_beta_grid(phi.spec(), beta_grid)?;
    let lifted = lifted_nodes(phi.spec())?;
    transform(phi, &lifted, beta_grid, &beta_grid.nodes_flat(), k)
}

pub fn sv_conjugate(phi: &GridFunction, beta_grid: &GridSpec) -> Result<GridFunction> {
    Ok(sv_conjugate_with_argmax(phi, beta_grid)?.values)
}

/// `Θ^∨` on `nu_grid`, with the maximizing β-node per ν-node.
pub fn sv_dual_conjugate_with_argmax(theta: &GridFunction, nu_grid: &GridSpec) -> Result<Transform> {
    check_compatible(nu_grid)?;
    let k = check_beta_grid(nu_grid, theta.spec())?;
    let lifted = lifted_nodes(nu_grid)?;
    transform(theta, &theta.spec().nodes_flat(), nu_grid, &lifted, k)
}

pub fn sv_dual_conjugate(theta: &GridFunction, nu_grid: &GridSpec) -> Result<GridFunction> {
    Ok(sv_dual_conjugate_with_argmax(theta, nu_grid)?.values)
}

/// Classical conjugate `f*(y) = max over x-nodes of ⟨y, x⟩ − f(x)`.
pub fn lf_conjugate(f: &GridFunction, dual_grid: &GridSpec) -> Result<GridFunction> {
    let n = f.spec().dim();
    if dual_grid.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: dual_grid.dim(),
        });
    }
    Ok(transform(f, &f.spec().nodes_flat(), dual_grid, &dual_grid.nodes_flat(), n)?.values)
}

/// `f**` back on the grid of `f`.
pub fn lf_biconjugate(f: &GridFunction, dual_grid: &GridSpec) -> Result<GridFunction> {
    let fs = lf_conjugate(f, dual_grid)?;
    lf_conjugate(&fs, f.spec())
}

/// Diagnostics attached to an envelope computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugationReport {
    /// The β attaining the envelope at the witness lies on the β-grid boundary.
    pub boundary_active: bool,
    /// The ν attaining `Φ^∧` at that β lies on the ν-grid boundary.
    pub nu_boundary_active: bool,
    /// Largest `Φ − Φ^∧∨` over interior nodes (finite, away from `+inf`).
    #[serde(serialize_with = "crate::report::real")]
    pub max_gap: f64,
    pub witness: Option<Vec<f64>>,
    pub witness_index: Option<usize>,
    /// Largest gap over finite nodes on the ν-grid edge or next to `+inf`.
    #[serde(serialize_with = "crate::report::real")]
    pub edge_max_gap: f64,
    /// Most negative `Φ − Φ^∧∨` over finite nodes; only rounding can make it negative.
    #[serde(serialize_with = "crate::report::real")]
    pub min_gap: f64,
    /// Interior nodes whose envelope value is attained on the β-grid boundary.
    pub beta_boundary_nodes: usize,
    pub interior_nodes: usize,
    pub nu_nodes: usize,
    pub beta_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub envelope: GridFunction,
    pub conjugate: Transform,
    /// β-node attaining the envelope value at each ν-node.
    pub beta_argmax: Vec<Option<usize>>,
    pub report: ConjugationReport,
}

/// `Φ^∧∨` on the ν-grid of `phi`. The input must be invariant within
/// `config.tol`.
pub fn sv_envelope(phi: &GridFunction, config: &ConjugationConfig) -> Result<Envelope> {
    if phi.spec() != &config.nu_grid {
        return Err(Error::InvalidGrid(
            "phi is not sampled on the configured nu grid".into(),
        ));
    }
    let inv = is_invariant(phi, config.tol)?;
    if !inv.invariant {
        return Err(Error::NotInvariant {
            deviation: inv.max_deviation,
            index: inv.witness.map_or(0, |w| w.0),
        });
    }
    envelope_unchecked(phi, config)
}

pub(crate) fn envelope_unchecked(phi: &GridFunction, config: &ConjugationConfig) -> Result<Envelope> {
    let conjugate = sv_conjugate_with_argmax(phi, &config.beta_grid)?;
    let dual = sv_dual_conjugate_with_argmax(&conjugate.values, &config.nu_grid)?;
    let report = gap_report(phi, &dual, &conjugate, config);
    Ok(Envelope {
        envelope: dual.values,
        conjugate,
        beta_argmax: dual.argmax,
        report,
    })
}

fn gap_report(phi: &GridFunction, dual: &Transform, conj: &Transform, config: &ConjugationConfig) -> ConjugationReport {
    let interior = phi.interior_finite_nodes();
    let env = dual.values.values();
    let v = phi.values();
    let mut is_interior = vec![false; phi.len()];
    for &i in &interior {
        is_interior[i] = true;
    }
    let mut max_gap = 0.0f64;
    let mut witness_index = None;
    let mut edge_max_gap = 0.0f64;
    let mut min_gap = 0.0f64;
    let mut beta_boundary_nodes = 0;
    for i in 0..phi.len() {
        if !v[i].is_finite() {
            continue;
        }
        let gap = v[i] - env[i];
        min_gap = min_gap.min(gap);
        if is_interior[i] {
            if gap > max_gap {
                max_gap = gap;
                witness_index = Some(i);
            }
            if dual.argmax[i].is_some_and(|b| config.beta_grid.is_boundary(b)) {
                beta_boundary_nodes += 1;
            }
        } else {
            edge_max_gap = edge_max_gap.max(gap);
        }
    }
    let beta_at = witness_index.and_then(|i| dual.argmax[i]);
    ConjugationReport {
        boundary_active: beta_at.is_some_and(|b| config.beta_grid.is_boundary(b)),
        nu_boundary_active: beta_at
            .and_then(|b| conj.argmax[b])
            .is_some_and(|n| config.nu_grid.is_boundary(n)),
        max_gap,
        witness: witness_index.map(|i| config.nu_grid.node_at(i).expect("in range")),
        witness_index,
        edge_max_gap,
        min_gap,
        beta_boundary_nodes,
        interior_nodes: interior.len(),
        nu_nodes: config.nu_grid.len(),
        beta_nodes: config.beta_grid.len(),
    }
}

/// Per-coordinate β half-widths from the samples: twice the largest
/// weighted minimum-norm slope `β` with `J_m(ν)ᵀ β = ∇Φ(ν)` over interior nodes,
/// gradients by central differences. Returns `None` when no interior node
/// has finite neighbours.
pub fn slope_ranges(phi: &GridFunction) -> Result<Option<Vec<f64>>> {
    slope_ranges_weighted(phi, PRODUCT_WEIGHT)
}

/// Weight of the product coordinates in the slope norm; below 1 so that
/// steep growth towards a null minor is charged to the product slopes.
const PRODUCT_WEIGHT: f64 = 0.1;

fn slope_ranges_weighted(phi: &GridFunction, product_weight: f64) -> Result<Option<Vec<f64>>> {
    let spec = phi.spec();
    check_compatible(spec)?;
    let d = spec.dim();
    let k = lifted_dim(d)?;
    let interior = phi.interior_finite_nodes();
    if interior.is_empty() {
        return Ok(None);
    }
    let v = phi.values();
    let strides = spec.strides().to_vec();
    let mut ranges = vec![0.0f64; k];
    let mut nu = [0.0; 3];
    for &i in &interior {
        spec.node_into(i, &mut nu[..d]);
        let multi = spec.multi_index_unchecked(i);
        let mut grad = [0.0; 3];
        for a in 0..d {
            let axis = &spec.axes()[a];
            let (lo, hi) = (axis[multi[a] - 1], axis[multi[a] + 1]);
            grad[a] = (v[i + strides[a]] - v[i - strides[a]]) / (hi - lo);
        }
        let beta = min_norm_slope(&nu[..d], &grad[..d], product_weight);
        for (r, b) in ranges.iter_mut().zip(&beta) {
            *r = r.max(2.0 * b.abs());
        }
    }
    Ok(Some(ranges))
}

/// Minimum-norm `β` with `J_m(ν)ᵀ β = g` in the norm `Σ w_j β_j²`, i.e.
/// `β = W⁻¹J (JᵀW⁻¹J)⁻¹ g`.
fn min_norm_slope(nu: &[f64], g: &[f64], product_weight: f64) -> Vec<f64> {
    let d = nu.len();
    // J is k x d: ∂m_j/∂ν_a
    let jac: Vec<Vec<f64>> = if d == 2 {
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![nu[1], nu[0]]]
    } else {
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, nu[2], nu[1]],
            vec![nu[2], 0.0, nu[0]],
            vec![nu[1], nu[0], 0.0],
            vec![nu[1] * nu[2], nu[0] * nu[2], nu[0] * nu[1]],
        ]
    };
    let w = |j: usize| if j < d { 1.0 } else { product_weight };
    let mut gram = vec![vec![0.0; d]; d];
    for (j, row) in jac.iter().enumerate() {
        for a in 0..d {
            for b in 0..d {
                gram[a][b] += row[a] * row[b] / w(j);
            }
        }
    }
    let y = solve_spd(gram, g.to_vec());
    jac.iter()
        .enumerate()
        .map(|(j, row)| row.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / w(j))
        .collect()
}

/// Gaussian elimination for the small positive definite Gram system.
fn solve_spd(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                a[r][j] -= f * a[c][j];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|j| a[r][j] * x[j]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Coefficient `c` of the least-squares fit `Φ ≈ c·ν• + c0` over the finite
/// samples; `c·ν• + c0` are the only invariant affine functions of the
/// lifted point.
pub fn invariant_affine_slope(phi: &GridFunction) -> Option<f64> {
    let spec = phi.spec();
    let d = spec.dim();
    let mut nu = [0.0; 3];
    let (mut n, mut sp, mut sv, mut spp, mut spv) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &v) in phi.values().iter().enumerate() {
        if !v.is_finite() {
            continue;
        }
        spec.node_into(i, &mut nu[..d]);
        let p: f64 = nu[..d].iter().product();
        n += 1.0;
        sp += p;
        sv += v;
        spp += p * p;
        spv += p * v;
    }
    let den = n * spp - sp * sp;
    (n > 1.0 && den > 0.0).then(|| (n * spv - sp * sv) / den)
}

/// Half-widths and extra nodes from which an automatic β-grid is built.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGridPlan {
    pub half_widths: Vec<f64>,
    pub count: usize,
    pub min_half_width: f64,
    /// Grading exponent of the axes (1 = uniform).
    pub power: f64,
    /// Inserted (with their negatives) into the last axis.
    pub det_slopes: Vec<f64>,
}

impl BetaGridPlan {
    /// Half-widths from [`slope_ranges`], plus the slope of
    /// [`invariant_affine_slope`] so that invariant affine samples are
    /// reproduced exactly.
    pub fn from_samples(phi: &GridFunction, count: usize, min_half_width: f64) -> Result<Self> {
        let k = lifted_dim(phi.spec().dim())?;
        let half_widths = slope_ranges(phi)?.unwrap_or_else(|| vec![min_half_width; k]);
        let det_slopes = invariant_affine_slope(phi)
            .filter(|c| c.is_finite() && *c != 0.0)
            .map(|c| vec![c.abs()])
            .unwrap_or_default();
        Ok(Self {
            half_widths,
            count,
            min_half_width,
            power: 3.0,
            det_slopes,
        })
    }

    pub fn build(&self) -> Result<GridSpec> {
        let k = self.half_widths.len();
        let mut axes = self
            .half_widths
            .iter()
            .map(|&r| GridSpec::graded_axis(r.max(self.min_half_width), self.count, self.power))
            .collect::<Result<Vec<_>>>()?;
        let last = &mut axes[k - 1];
        for &c in &self.det_slopes {
            last.push(c);
            last.push(-c);
        }
        last.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        last.dedup();
        GridSpec::new(DimKind::Beta, axes)
    }
}

/// β-grid with cubically graded axes (dense near 0); see [`BetaGridPlan`].
pub fn auto_beta_grid(phi: &GridFunction, count: usize, min_half_width: f64) -> Result<GridSpec> {
    BetaGridPlan::from_samples(phi, count, min_half_width)?.build()
}

/// One sampled node of a primal/dual comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckEntry {
    pub index: usize,
    pub node: Vec<f64>,
    #[serde(serialize_with = "crate::report::real")]
    pub dual: f64,
    #[serde(serialize_with = "crate::report::real")]
    pub lp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub entries: Vec<CrossCheckEntry>,
    /// Largest `|dual − lp|`.
    #[serde(serialize_with = "crate::report::real")]
    pub max_abs_diff: f64,
    /// Largest `dual − lp`; the finite β-grid can only under-estimate, so
    /// this should not exceed the tolerance.
    #[serde(serialize_with = "crate::report::real")]
    pub max_dual_excess: f64,
    #[serde(serialize_with = "crate::report::real")]
    pub cross_tol: f64,
    pub violations: Vec<usize>,
}

/// Compares the grid envelope against the LP value at `sample_nodes`.
pub fn cross_check(
    phi: &GridFunction,
    config: &ConjugationConfig,
    sample_nodes: &[usize],
    cross_tol: f64,
) -> Result<CrossCheckReport> {
    let env = sv_envelope(phi, config)?;
    let mut report = CrossCheckReport {
        entries: Vec::new(),
        max_abs_diff: 0.0,
        max_dual_excess: f64::NEG_INFINITY,
        cross_tol,
        violations: Vec::new(),
    };
    for &i in sample_nodes {
        let node = config.nu_grid.node_at(i)?;
        let dual = env.envelope.values()[i];
        let (lp, _) = lp_biconjugate_at(phi, &node)?;
        let lp = lp.value();
        let diff = if dual == lp { 0.0 } else { (dual - lp).abs() };
        let excess = if dual == lp { 0.0 } else { dual - lp };
        report.max_abs_diff = report.max_abs_diff.max(diff);
        report.max_dual_excess = report.max_dual_excess.max(excess);
        if diff > cross_tol || excess > config.tol {
            report.violations.push(i);
        }
        report.entries.push(CrossCheckEntry {
            index: i,
            node,
            dual,
            lp,
        });
    }
    Ok(report)
}

/// `count` distinct interior nodes (finite, away from `+inf`), sorted,
/// chosen deterministically from `seed`.
pub fn sample_interior_nodes(phi: &GridFunction, count: usize, seed: u64) -> Vec<usize> {
    let interior = phi.interior_finite_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = count.min(interior.len());
    let mut picked: Vec<usize> = sample(&mut rng, interior.len(), n)
        .into_iter()
        .map(|j| interior[j])
        .collect();
    picked.sort_unstable();
    picked
}

/// Envelope restricted to slopes with `β1 = β2 = β3` and `β4 = β5 = β6`
/// (3-D only). The restriction makes the sweep cheap but the result is only
/// an upper bound on the true discrete envelope's gap: it does not certify.
pub fn sv_envelope_symmetric_subspace(
    phi: &GridFunction,
    linear_axis: &[f64],
    quadratic_axis: &[f64],
    det_axis: &[f64],
) -> Result<GridFunction> {
    check_compatible(phi.spec())?;
    if phi.spec().dim() != 3 {
        return Err(Error::UnsupportedDimension(phi.spec().dim()));
    }
    let mut betas = Vec::with_capacity(linear_axis.len() * quadratic_axis.len() * det_axis.len() * 7);
    for &a in linear_axis {
        for &b in quadratic_axis {
            for &c in det_axis {
                betas.extend_from_slice(&[a, a, a, b, b, b, c]);
            }
        }
    }
    let lifted = lifted_nodes(phi.spec())?;
    if !phi.has_finite() {
        return Err(Error::AllInfinite);
    }
    let (xs, vs, ids) = finite_inputs(&lifted, phi, 7);
    let (conj, _) = max_affine(&betas, &xs, &vs, &ids, 7);
    let beta_ids: Vec<usize> = (0..conj.len()).collect();
    let (env, _) = max_affine(&lifted, &betas, &conj, &beta_ids, 7);
    GridFunction::from_values(phi.spec().clone(), env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::lifted_pairing;

    fn nu_grid() -> GridSpec {
        GridSpec::uniform(DimKind::Nu, 2, 2.0, 9).unwrap()
    }

    fn beta_grid() -> GridSpec {
        GridSpec::uniform(DimKind::Beta, 3, 2.0, 9).unwrap()
    }

    #[test]
    fn conjugate_of_zero() {
        let phi = GridFunction::build(nu_grid(), |_| 0.0).unwrap();
        let c = sv_conjugate(&phi, &beta_grid()).unwrap();
        let nodes = nu_grid();
        for (j, &v) in c.values().iter().enumerate() {
            let beta = beta_grid().node_at(j).unwrap();
            let brute = (0..nodes.len())
                .map(|i| lifted_pairing(&beta, &nodes.node_at(i).unwrap()))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(v, brute);
        }
        let zero = beta_grid().locate(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(c.values()[zero], 0.0);
    }

    #[test]
    fn conjugate_vanishes_at_generating_slope() {
        let b0 = [0.5, -1.0, 1.5];
        let phi = GridFunction::build(nu_grid(), |x| lifted_pairing(&b0, x)).unwrap();
        let c = sv_conjugate(&phi, &beta_grid()).unwrap();
        assert_eq!(c.values()[beta_grid().locate(&b0).unwrap()], 0.0);
    }

    #[test]
    fn dual_conjugate_examples() {
        let theta = GridFunction::build(beta_grid(), |_| 0.0).unwrap();
        let t = sv_dual_conjugate(&theta, &nu_grid()).unwrap();
        let nu = nu_grid().node_at(7).unwrap();
        let brute = (0..beta_grid().len())
            .map(|j| lifted_pairing(&beta_grid().node_at(j).unwrap(), &nu))
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(t.values()[7], brute);

        let b0 = [1.0, 0.5, -0.5];
        let single = GridFunction::build(beta_grid(), |b| if b == b0 { 0.0 } else { f64::INFINITY }).unwrap();
        let t = sv_dual_conjugate(&single, &nu_grid()).unwrap();
        for i in 0..nu_grid().len() {
            assert_eq!(t.values()[i], lifted_pairing(&b0, &nu_grid().node_at(i).unwrap()));
        }
    }

    #[test]
    fn envelope_of_constant_and_all_infinite() {
        let cfg = ConjugationConfig::new(nu_grid(), beta_grid(), 1e-9).unwrap();
        let phi = GridFunction::build(nu_grid(), |_| 1.5).unwrap();
        let env = sv_envelope(&phi, &cfg).unwrap();
        assert!(env.envelope.values().iter().all(|v| (v - 1.5).abs() < 1e-12));
        assert_eq!(env.report.max_gap, 0.0);

        let inf = GridFunction::from_values(nu_grid(), vec![f64::INFINITY; 81]).unwrap();
        assert_eq!(sv_envelope(&inf, &cfg).unwrap_err(), Error::AllInfinite);

        let asym = GridFunction::build(nu_grid(), |x| x[0]).unwrap();
        assert!(matches!(sv_envelope(&asym, &cfg), Err(Error::NotInvariant { .. })));
    }

    #[test]
    fn galois_identity_is_exact() {
        let phi = GridFunction::build(nu_grid(), |x| {
            let (a, b) = (x[0] * x[0] - 1.0, x[1] * x[1] - 1.0);
            a * a + b * b - x[0] * x[1]
        })
        .unwrap();
        let cfg = ConjugationConfig::new(nu_grid(), beta_grid(), 1e-9).unwrap();
        let env = sv_envelope(&phi, &cfg).unwrap();
        let again = sv_conjugate(&env.envelope, &beta_grid()).unwrap();
        assert_eq!(again.values(), env.conjugate.values.values());
        for (e, p) in env.envelope.values().iter().zip(phi.values()) {
            assert!(e <= p);
        }
    }

    #[test]
    fn lf_examples() {
        let x = GridSpec::uniform(DimKind::Plain, 1, 4.0, 81).unwrap();
        let f = GridFunction::build(x.clone(), |v| 0.5 * v[0] * v[0]).unwrap();
        let fs = lf_conjugate(&f, &x).unwrap();
        let h = 0.1;
        for (j, &v) in fs.values().iter().enumerate() {
            let y = x.node_at(j).unwrap()[0];
            if y.abs() <= 3.0 {
                assert!((v - 0.5 * y * y).abs() <= h * h / 8.0 + 1e-12);
            }
        }
        let ind = GridFunction::build(x.clone(), |v| if v[0] == 0.0 { 0.0 } else { f64::INFINITY }).unwrap();
        assert!(lf_conjugate(&ind, &x).unwrap().values().iter().all(|v| *v == 0.0));
        let aff = GridFunction::build(x.clone(), |v| 1.5 * v[0]).unwrap();
        let at = x.locate(&[1.5]).unwrap();
        assert_eq!(lf_conjugate(&aff, &x).unwrap().values()[at], 0.0);
    }

    #[test]
    fn slope_ranges_of_lifted_affine_cover_the_slope() {
        let b0 = [0.0, 0.0, 1.0];
        let phi = GridFunction::build(nu_grid(), |x| lifted_pairing(&b0, x)).unwrap();
        let r = slope_ranges(&phi).unwrap().unwrap();
        // min-norm slopes of ν1ν2 put most weight on the product coordinate
        assert!(r[2] >= 1.0);
    }

    #[test]
    fn subspace_envelope_is_an_upper_bound() {
        let spec = GridSpec::uniform(DimKind::Nu, 3, 1.0, 5).unwrap();
        let phi = GridFunction::build(spec, |x| x.iter().map(|v| v * v).sum::<f64>()).unwrap();
        let ax = GridSpec::uniform_axis(2.0, 5).unwrap();
        let env = sv_envelope_symmetric_subspace(&phi, &ax, &ax, &ax).unwrap();
        for (e, p) in env.values().iter().zip(phi.values()) {
            assert!(*e <= p + 1e-12);
        }
    }

    #[test]
    fn sampled_nodes_are_deterministic_and_interior() {
        let phi = GridFunction::build(nu_grid(), |x| x[0] * x[0] + x[1] * x[1]).unwrap();
        let a = sample_interior_nodes(&phi, 10, 3);
        assert_eq!(a, sample_interior_nodes(&phi, 10, 3));
        assert_eq!(a.len(), 10);
        assert!(a.iter().all(|&i| !nu_grid().is_boundary(i)));
    }
}
