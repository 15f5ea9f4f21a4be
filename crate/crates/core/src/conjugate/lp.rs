//! Primal evaluation of the envelope as a convex-hull problem in the lifted
//! space: minimize `Σ λ_i Φ(ν_i)` over `λ ≥ 0` with `Σ λ_i = 1` and
//! `Σ λ_i m_d(ν_i) = m_d(ν)`.
//!
//! Dense two-phase simplex with Bland's rule. The instances have at most
//! eight rows, so robustness matters more than speed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gridfn::{ExtendedReal, GridFunction};
use crate::lifting::{lift_into, lifted_dim};
use crate::symmetry::check_compatible;

pub const LP_TOL: f64 = 1e-10;
pub const LP_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
}

/// Solves `min cᵀx` subject to `A x = b`, `x ≥ 0`, with `A` given row-wise.
/// The problem must be bounded below (true whenever the feasible set is
/// bounded, as it is for convex-combination problems).
pub fn solve_standard_form(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: row.len(),
        });
    }
    // columns: n structural, m artificial, then the right-hand side
    let width = n + m + 1;
    let rhs = n + m;
    let mut t = vec![vec![0.0; width]; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = flip * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][rhs] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut iterations = 0;

    // phase 1: minimize the sum of artificials
    let phase1: Vec<f64> = (0..n + m).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
    run_simplex(&mut t, &mut basis, &phase1, n + m, &mut iterations)?;
    let infeasibility: f64 = basis
        .iter()
        .zip(&t)
        .filter(|(&bj, _)| bj >= n)
        .map(|(_, row)| row[rhs])
        .sum();
    let scale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if infeasibility > LP_TOL * scale * 1e2 {
        return Ok(LpOutcome::Infeasible);
    }

    // drive remaining artificials out of the basis; drop redundant rows
    let mut r = 0;
    while r < t.len() {
        if basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| t[r][j].abs() > LP_TOL) {
                pivot(&mut t, &mut basis, r, j);
            } else {
                t.remove(r);
                basis.remove(r);
                continue;
            }
        }
        r += 1;
    }

    // phase 2 over structural columns only
    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_n(0.0, m));
    run_simplex(&mut t, &mut basis, &cost, n, &mut iterations)?;

    let mut x = vec![0.0; n];
    for (row, &bj) in t.iter().zip(&basis) {
        if bj < n {
            x[bj] = row[rhs].max(0.0);
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(LpOutcome::Optimal { x, value })
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], r: usize, j: usize) {
    let p = t[r][j];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = row[j];
        if f != 0.0 {
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[j] = 0.0;
        }
    }
    basis[r] = j;
}

/// Bland's rule: lowest-index improving column, then lowest basis index
/// among tied ratios. `allowed` bounds the candidate entering columns.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    allowed: usize,
    iterations: &mut usize,
) -> Result<()> {
    let rhs = t.first().map_or(0, |r| r.len() - 1);
    loop {
        *iterations += 1;
        if *iterations > LP_MAX_ITERATIONS {
            return Err(Error::LpIterationCap(LP_MAX_ITERATIONS));
        }
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let reduced = cost[j]
                - t.iter()
                    .zip(basis.iter())
                    .map(|(row, &bj)| cost[bj] * row[j])
                    .sum::<f64>();
            reduced < -LP_TOL
        });
        let Some(j) = entering else {
            return Ok(());
        };
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j] > LP_TOL {
                let ratio = row[rhs] / row[j];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - LP_TOL || (ratio <= best + LP_TOL && basis[i] < basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
        }
        // bounded problems always have a leaving row
        let Some((r, _)) = leave else {
            return Err(Error::LpIterationCap(*iterations));
        };
        pivot(t, basis, r, j);
    }
}

/// A convex combination of grid nodes whose lifted points average to the
/// lifted target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpWitness {
    pub support_indices: Vec<usize>,
    pub support: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub value: f64,
}

impl LpWitness {
    fn empty() -> Self {
        Self {
            support_indices: Vec::new(),
            support: Vec::new(),
            weights: Vec::new(),
            value: f64::INFINITY,
        }
    }
}

/// `h**(m_d(ν))`: the smallest convex combination of finite samples whose
/// lifted nodes average to `m_d(ν)`. Returns `+inf` with an empty witness
/// when `m_d(ν)` lies outside their convex hull.
pub fn lp_biconjugate_at(phi: &GridFunction, nu: &[f64]) -> Result<(ExtendedReal, LpWitness)> {
    let spec = phi.spec();
    check_compatible(spec)?;
    let d = spec.dim();
    if nu.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: nu.len(),
        });
    }
    let k = lifted_dim(d)?;
    let finite: Vec<usize> = (0..phi.len()).filter(|&i| phi.values()[i].is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::AllInfinite);
    }
    let mut a = vec![vec![0.0; finite.len()]; k + 1];
    let mut node = vec![0.0; d];
    let mut lifted = [0.0; 7];
    for (col, &i) in finite.iter().enumerate() {
        spec.node_into(i, &mut node);
        lift_into(&node, &mut lifted[..k]);
        for r in 0..k {
            a[r][col] = lifted[r];
        }
        a[k][col] = 1.0;
    }
    let mut b = vec![0.0; k + 1];
    lift_into(nu, &mut b[..k]);
    b[k] = 1.0;
    let c: Vec<f64> = finite.iter().map(|&i| phi.values()[i]).collect();

    match solve_standard_form(&a, &b, &c)? {
        LpOutcome::Infeasible => Ok((ExtendedReal::POS_INF, LpWitness::empty())),
        LpOutcome::Optimal { x, value } => {
            let mut witness = LpWitness {
                value,
                ..LpWitness::empty()
            };
            for (col, &w) in x.iter().enumerate() {
                if w > 0.0 {
                    witness.support_indices.push(finite[col]);
                    witness.support.push(spec.node_at(finite[col])?);
                    witness.weights.push(w);
                }
            }
            Ok((ExtendedReal::new(value).expect("finite LP value"), witness))
        }
    }
}
