//! Polyconvexity verdicts from the discrete envelope, supporting slopes,
//! the invariant-function criterion and the line-monotonicity diagnostic.
//!
//! Every verdict is conditional on the grids used; the [`Certificate`]
//! records them.

use serde::Serialize;

use crate::conjugate::{
    envelope_unchecked, lp_biconjugate_at, slope_ranges, sv_conjugate, BetaGridPlan, ConjugationConfig,
    ConjugationReport, Envelope, DEFAULT_BETA_COUNT_2D, DEFAULT_BETA_COUNT_3D,
};
use crate::error::{Error, Result};
use crate::gridfn::{ConvexityReport, DimKind, GridFunction, GridSpec};
use crate::lifting::{elementary_symmetric, lift, lifted_dim};
use crate::report::{real, real_opt};
use crate::symmetry::{check_compatible, enumerate_group, is_invariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "SVPC")]
    Svpc,
    #[serde(rename = "NotSVPC")]
    NotSvpc,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Svpc => "SVPC",
            Verdict::NotSvpc => "NotSVPC",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSummary {
    #[serde(serialize_with = "real")]
    pub half_width: f64,
    pub count: usize,
    pub uniform: bool,
}

fn summarize(spec: &GridSpec) -> Vec<AxisSummary> {
    let uniform = spec.uniform_spacings().is_ok();
    spec.axes()
        .iter()
        .map(|a| AxisSummary {
            half_width: a[a.len() - 1],
            count: a.len(),
            uniform,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Largest `Φ − Φ^∧∨` over interior nodes.
    #[serde(serialize_with = "real")]
    pub max_gap: f64,
    pub witness_node: Option<Vec<f64>>,
    pub witness_index: Option<usize>,
    #[serde(serialize_with = "real")]
    pub certify_tol: f64,
    #[serde(serialize_with = "real")]
    pub refute_margin: f64,
    /// The slope attaining the envelope at the witness is on the β-grid boundary.
    pub boundary_active: bool,
    pub nu_boundary_active: bool,
    /// Primal value of the envelope at the witness (2-D refutations only).
    #[serde(serialize_with = "real_opt")]
    pub lp_value: Option<f64>,
    pub lp_confirmed: Option<bool>,
    #[serde(serialize_with = "real")]
    pub edge_max_gap: f64,
    pub nu_grid: Vec<AxisSummary>,
    pub beta_grid: Vec<AxisSummary>,
    /// Widening round whose grid is reported (0 = initial grid).
    pub widening_rounds: usize,
    pub note: &'static str,
}

const NOTE: &str = "verdict is conditional on the sampling grids listed here";

/// Tolerances and β-grid policy for [`certify`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOptions {
    pub certify_tol: f64,
    pub refute_margin: f64,
    /// Fixed β-grid; when `None` one is derived from the samples.
    pub beta_grid: Option<GridSpec>,
    pub beta_count: usize,
    /// Extra rounds that double β half-widths whose boundary is active.
    pub widen_rounds: usize,
    pub min_beta_half_width: f64,
}

impl CertifyOptions {
    /// `certify_tol = 5 h²`, `refute_margin = 10 certify_tol`.
    pub fn for_grid(nu_grid: &GridSpec) -> Self {
        let tol = ConjugationConfig::default_tol(nu_grid);
        Self {
            certify_tol: tol,
            refute_margin: 10.0 * tol,
            beta_grid: None,
            beta_count: if nu_grid.dim() == 2 {
                DEFAULT_BETA_COUNT_2D
            } else {
                DEFAULT_BETA_COUNT_3D
            },
            widen_rounds: 3,
            min_beta_half_width: 0.25,
        }
    }
}

/// Verdict on fixed grids: `certify_tol = config.tol`,
/// `refute_margin = 10 config.tol`.
pub fn is_svpc(phi: &GridFunction, config: &ConjugationConfig) -> Result<Certificate> {
    let options = CertifyOptions {
        certify_tol: config.tol,
        refute_margin: 10.0 * config.tol,
        beta_grid: Some(config.beta_grid.clone()),
        ..CertifyOptions::for_grid(&config.nu_grid)
    };
    Ok(certify(phi, &options)?.0)
}

/// Full certification; also returns the final envelope computation.
pub fn certify(phi: &GridFunction, options: &CertifyOptions) -> Result<(Certificate, Envelope)> {
    let nu_grid = phi.spec().clone();
    check_compatible(&nu_grid)?;
    let inv = is_invariant(phi, options.certify_tol)?;
    if !inv.invariant {
        return Err(Error::NotInvariant {
            deviation: inv.max_deviation,
            index: inv.witness.map_or(0, |w| w.0),
        });
    }
    if !phi.has_finite() {
        return Err(Error::AllInfinite);
    }
    let tol = options.certify_tol;
    let config = |beta: &GridSpec| ConjugationConfig::new(nu_grid.clone(), beta.clone(), tol);
    let Some(g) = &options.beta_grid else {
        return certify_auto(phi, options);
    };
    let env = envelope_unchecked(phi, &config(g)?)?;
    let cert = classify(phi, &env.report, options, g, 0)?;
    Ok((cert, env))
}

/// Automatic β-grid; widening rounds double the half-widths of axes whose
/// boundary is active at badly approximated nodes. The round with the
/// smallest gap is kept.
fn certify_auto(phi: &GridFunction, options: &CertifyOptions) -> Result<(Certificate, Envelope)> {
    let tol = options.certify_tol;
    let nu_grid = phi.spec();
    let mut plan = BetaGridPlan::from_samples(phi, options.beta_count, options.min_beta_half_width)?;
    let mut grid = plan.build()?;
    let mut env = envelope_unchecked(phi, &ConjugationConfig::new(nu_grid.clone(), grid.clone(), tol)?)?;
    let mut best = (0, grid.clone(), env.clone());
    for round in 1..=options.widen_rounds {
        if env.report.max_gap <= tol {
            break;
        }
        let axes = widen_axes(phi, &env, &grid, tol);
        if axes.is_empty() {
            break;
        }
        for a in axes {
            plan.half_widths[a] = plan.half_widths[a].max(plan.min_half_width) * 2.0;
        }
        grid = plan.build()?;
        env = envelope_unchecked(phi, &ConjugationConfig::new(nu_grid.clone(), grid.clone(), tol)?)?;
        if env.report.max_gap < best.2.report.max_gap {
            best = (round, grid.clone(), env.clone());
        }
    }
    let (round, grid, env) = best;
    let cert = classify(phi, &env.report, options, &grid, round)?;
    Ok((cert, env))
}

/// β axes on whose boundary the envelope is attained at some node with a
/// gap above `tol`.
fn widen_axes(phi: &GridFunction, env: &Envelope, beta_grid: &GridSpec, tol: f64) -> Vec<usize> {
    let mut hit = vec![false; beta_grid.dim()];
    for i in phi.interior_finite_nodes() {
        if phi.values()[i] - env.envelope.values()[i] <= tol {
            continue;
        }
        if let Some(b) = env.beta_argmax[i] {
            for a in beta_grid.boundary_axes(b) {
                hit[a] = true;
            }
        }
    }
    (0..hit.len()).filter(|&a| hit[a]).collect()
}

fn classify(
    phi: &GridFunction,
    report: &ConjugationReport,
    options: &CertifyOptions,
    beta_grid: &GridSpec,
    rounds: usize,
) -> Result<Certificate> {
    let mut cert = Certificate {
        verdict: Verdict::Inconclusive,
        max_gap: report.max_gap,
        witness_node: report.witness.clone(),
        witness_index: report.witness_index,
        certify_tol: options.certify_tol,
        refute_margin: options.refute_margin,
        boundary_active: report.boundary_active,
        nu_boundary_active: report.nu_boundary_active,
        lp_value: None,
        lp_confirmed: None,
        edge_max_gap: report.edge_max_gap,
        nu_grid: summarize(phi.spec()),
        beta_grid: summarize(beta_grid),
        widening_rounds: rounds,
        note: NOTE,
    };
    if report.max_gap <= options.certify_tol {
        cert.verdict = Verdict::Svpc;
        return Ok(cert);
    }
    if report.max_gap > options.refute_margin && !report.boundary_active {
        let confirmed = match (phi.spec().dim(), &report.witness, report.witness_index) {
            (2, Some(w), Some(i)) => {
                let (lp, _) = lp_biconjugate_at(phi, w)?;
                cert.lp_value = Some(lp.value());
                let ok = phi.values()[i] - lp.value() > options.refute_margin;
                cert.lp_confirmed = Some(ok);
                ok
            }
            _ => true,
        };
        if confirmed {
            cert.verdict = Verdict::NotSvpc;
        }
    }
    Ok(cert)
}

/// An affine minorant `ν ↦ ⟨β, m_d(ν)⟩ − offset` of `Φ` on the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hyperplane {
    pub beta: Vec<f64>,
    #[serde(serialize_with = "real")]
    pub offset: f64,
    /// `Φ(ν0)` minus the minorant at `ν0` for finite `Φ(ν0)`; for infinite
    /// `Φ(ν0)` the reciprocal of the level reached.
    #[serde(serialize_with = "real")]
    pub epsilon: f64,
    /// Value of the minorant at `ν0`.
    #[serde(serialize_with = "real")]
    pub level: f64,
}

impl Hyperplane {
    /// Largest violation of `Φ(γ) ≥ ⟨β, m_d(γ)⟩ − offset` over the grid.
    pub fn max_violation(&self, phi: &GridFunction) -> f64 {
        let spec = phi.spec();
        (0..phi.len())
            .filter(|&i| phi.values()[i].is_finite())
            .map(|i| {
                let nu = spec.node_at(i).expect("in range");
                lift(&nu).expect("nu grid").dot(&self.beta) - self.offset - phi.values()[i]
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Best grid slope at the grid node `nu0`: maximizes
/// `⟨β, m_d(ν0)⟩ − Φ^∧(β)` over `beta_grid`. For finite `Φ(ν0)` the gap
/// must be at most `epsilon`; for `Φ(ν0) = +inf` the minorant must reach
/// `1/epsilon` at `ν0`.
pub fn supporting_hyperplane(
    phi: &GridFunction,
    nu0: &[f64],
    epsilon: f64,
    beta_grid: &GridSpec,
) -> Result<Hyperplane> {
    let spec = phi.spec();
    check_compatible(spec)?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidGrid(format!("epsilon must be positive, got {epsilon}")));
    }
    let index = spec
        .locate(nu0)
        .ok_or_else(|| Error::InvalidGrid(format!("{nu0:?} is not a node of the nu grid")))?;
    let conj = sv_conjugate(phi, beta_grid)?;
    let m0 = lift(nu0)?;
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    let mut beta = vec![0.0; beta_grid.dim()];
    for (j, &c) in conj.values().iter().enumerate() {
        beta_grid.node_into(j, &mut beta);
        let v = m0.dot(&beta) - c;
        if v > best {
            best = v;
            arg = j;
        }
    }
    let value = phi.values()[index];
    let hyperplane = Hyperplane {
        beta: beta_grid.node_at(arg)?,
        offset: conj.values()[arg],
        epsilon: if value.is_finite() {
            value - best
        } else if best > 0.0 {
            1.0 / best
        } else {
            f64::INFINITY
        },
        level: best,
    };
    if hyperplane.epsilon > epsilon * (1.0 + 1e-12) {
        return Err(Error::HyperplaneNotFound {
            best_epsilon: hyperplane.epsilon,
        });
    }
    Ok(hyperplane)
}

/// Outcome of the invariant-function criterion for `Φ = ψ ∘ e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteigmannReport {
    pub convexity: ConvexityReport,
    pub symmetric: bool,
    #[serde(serialize_with = "real")]
    pub symmetry_deviation: f64,
    /// Node of the companion ν-grid where the symmetry deviation is largest.
    pub symmetry_witness: Option<Vec<f64>>,
    /// Some `e(ν)` fell between ψ-grid nodes and was interpolated.
    pub approximate: bool,
    pub criterion_satisfied: bool,
}

/// Sign flips with an even number of `-1`s, excluding the identity.
fn even_sign_flips(dim: usize) -> Result<Vec<crate::symmetry::GroupElement>> {
    Ok(enumerate_group(dim)?
        .elements()
        .iter()
        .filter(|g| !g.is_identity() && g.perm().iter().enumerate().all(|(i, &p)| i == p))
        .copied()
        .collect())
}

fn check_e_grid(psi_grid: &GridSpec, nu_grid: &GridSpec) -> Result<()> {
    check_compatible(nu_grid)?;
    if psi_grid.dim() != nu_grid.dim() {
        return Err(Error::IncompatibleGrid(format!(
            "psi has {} arguments, expected {}",
            psi_grid.dim(),
            nu_grid.dim()
        )));
    }
    Ok(())
}

fn steigmann_symmetry<F>(psi_of_nu: F, nu_grid: &GridSpec) -> Result<(f64, Option<Vec<f64>>)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let flips = even_sign_flips(nu_grid.dim())?;
    let mut worst = 0.0f64;
    let mut witness = None;
    for i in 0..nu_grid.len() {
        let nu = nu_grid.node_at(i)?;
        let base = psi_of_nu(&nu)?;
        for g in &flips {
            let other = psi_of_nu(&g.apply(&nu)?)?;
            let dev = if base == other {
                0.0
            } else if base.is_finite() && other.is_finite() {
                (base - other).abs()
            } else {
                f64::INFINITY
            };
            if dev > worst {
                worst = dev;
                witness = Some(nu.clone());
            }
        }
    }
    Ok((worst, witness))
}

/// Criterion on a sampled `ψ` (ψ-grid of kind `plain` over `e`-space).
/// `ψ(e(ν))` is read exactly when `e(ν)` is a node and interpolated
/// otherwise, which marks the report approximate.
pub fn steigmann_check(psi: &GridFunction, nu_grid: &GridSpec, tol: f64) -> Result<SteigmannReport> {
    check_e_grid(psi.spec(), nu_grid)?;
    let convexity = psi.midpoint_convexity_check(tol)?;
    let approximate = std::cell::Cell::new(false);
    let lookup = |nu: &[f64]| -> Result<f64> {
        let e = elementary_symmetric(nu)?;
        if let Some(j) = psi.spec().locate(&e) {
            return Ok(psi.values()[j]);
        }
        approximate.set(true);
        psi.interpolate(&e)
            .ok_or_else(|| Error::IncompatibleGrid(format!("e(nu) = {e:?} lies outside the psi grid")))
    };
    let (dev, witness) = steigmann_symmetry(lookup, nu_grid)?;
    let symmetric = dev <= tol;
    Ok(SteigmannReport {
        criterion_satisfied: convexity.convex && symmetric,
        convexity,
        symmetric,
        symmetry_deviation: dev,
        symmetry_witness: witness,
        approximate: approximate.get(),
    })
}

/// Criterion on an exactly evaluable `ψ`: convexity is checked on the
/// samples over `psi_grid`, symmetry by exact evaluation.
pub fn steigmann_check_fn<F>(psi: F, psi_grid: &GridSpec, nu_grid: &GridSpec, tol: f64) -> Result<SteigmannReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_e_grid(psi_grid, nu_grid)?;
    let samples = GridFunction::build(psi_grid.clone(), &psi)?;
    let convexity = samples.midpoint_convexity_check(tol)?;
    let (dev, witness) = steigmann_symmetry(|nu| Ok(psi(&elementary_symmetric(nu)?)), nu_grid)?;
    let symmetric = dev <= tol;
    Ok(SteigmannReport {
        criterion_satisfied: convexity.convex && symmetric,
        convexity,
        symmetric,
        symmetry_deviation: dev,
        symmetry_witness: witness,
        approximate: false,
    })
}

/// `Φ(ν) = ψ(e(ν))` on `nu_grid`, by exact evaluation.
pub fn compose_invariant<F>(psi: F, nu_grid: &GridSpec) -> Result<GridFunction>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_compatible(nu_grid)?;
    GridFunction::build(nu_grid.clone(), |nu| {
        psi(&elementary_symmetric(nu).expect("nu grid has 2 or 3 axes"))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineMonotonicityReport {
    pub monotone: bool,
    /// Violations along `t ↦ g(α+t, t, δ)`, `t ≥ 0`.
    pub family1_violations: usize,
    /// Violations along `t ↦ g(α+t, α−t, δ)`, `0 ≤ t ≤ α`.
    pub family2_violations: usize,
    #[serde(serialize_with = "real")]
    pub worst_drop: f64,
    /// Family number and the lifted point where the worst drop ends.
    pub witness: Option<(u8, Vec<f64>)>,
    pub lines_checked: usize,
}

/// Samples both line families through the nodes of a 3-axis lifted grid.
/// The first two axes must be uniform with equal spacing. Diagnostic only.
pub fn line_monotonicity_check(g: &GridFunction, tol: f64) -> Result<LineMonotonicityReport> {
    let spec = g.spec();
    if spec.dim() != lifted_dim(2)? {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: spec.dim(),
        });
    }
    let h = spec.uniform_spacings()?;
    if (h[0] - h[1]).abs() > 1e-12 * h[0].max(1.0) {
        return Err(Error::IncompatibleGrid("the first two axes need equal spacing".into()));
    }
    let (n1, n2, n3) = (spec.axes()[0].len(), spec.axes()[1].len(), spec.axes()[2].len());
    let c1 = (n1 - 1) / 2;
    let c2 = (n2 - 1) / 2;
    let mut report = LineMonotonicityReport {
        monotone: true,
        family1_violations: 0,
        family2_violations: 0,
        worst_drop: 0.0,
        witness: None,
        lines_checked: 0,
    };
    let walk = |family: u8, steps: &[(usize, usize)], l: usize, report: &mut LineMonotonicityReport| {
        report.lines_checked += 1;
        for w in steps.windows(2) {
            let a = g.values()[spec.flat_index(&[w[0].0, w[0].1, l]).expect("in range")];
            let b = g.values()[spec.flat_index(&[w[1].0, w[1].1, l]).expect("in range")];
            let drop = if b == a || b == f64::INFINITY || a == f64::NEG_INFINITY {
                0.0
            } else if a == f64::INFINITY || b == f64::NEG_INFINITY {
                f64::INFINITY
            } else {
                a - b
            };
            if drop > tol {
                if family == 1 {
                    report.family1_violations += 1;
                } else {
                    report.family2_violations += 1;
                }
                if drop > report.worst_drop {
                    report.worst_drop = drop;
                    report.witness = Some((
                        family,
                        vec![spec.axes()[0][w[1].0], spec.axes()[1][w[1].1], spec.axes()[2][l]],
                    ));
                }
            }
        }
    };
    for l in 0..n3 {
        for i in 0..n1 {
            // family 1 starts at (α, 0, δ)
            let steps: Vec<(usize, usize)> = (0..)
                .map(|s| (i + s, c2 + s))
                .take_while(|&(a, b)| a < n1 && b < n2)
                .collect();
            walk(1, &steps, l, &mut report);
        }
        for i in c1..n1 {
            // family 2 starts at (α, α, δ) with α ≥ 0 and stops at x2 = 0
            let j = i - c1 + c2;
            if j >= n2 {
                continue;
            }
            let steps: Vec<(usize, usize)> = (0..)
                .map(|s| (i + s, j.wrapping_sub(s)))
                .take_while(|&(a, b)| a < n1 && b >= c2 && b < n2)
                .collect();
            walk(2, &steps, l, &mut report);
        }
    }
    report.monotone = report.family1_violations == 0 && report.family2_violations == 0;
    Ok(report)
}

/// `Λ_β` sampled on `nu_grid`.
pub fn sample_lambda_support(beta: &[f64], nu_grid: &GridSpec) -> Result<GridFunction> {
    check_compatible(nu_grid)?;
    let k = lifted_dim(nu_grid.dim())?;
    if beta.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: beta.len(),
        });
    }
    GridFunction::build(nu_grid.clone(), |nu| {
        crate::symmetry::lambda_support(beta, nu).expect("dimensions checked")
    })
}

/// Lifted grid with uniform axes, for line-monotonicity sampling.
pub fn uniform_lifted_grid(half_width: f64, count: usize) -> Result<GridSpec> {
    GridSpec::uniform(DimKind::Plain, 3, half_width, count)
}

/// Half-widths [`certify`] would start from, for reporting.
pub fn initial_beta_half_widths(phi: &GridFunction, min_half_width: f64) -> Result<Option<Vec<f64>>> {
    Ok(slope_ranges(phi)?.map(|r| r.into_iter().map(|x| x.max(min_half_width)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::lifted_pairing;

    fn nu_grid() -> GridSpec {
        GridSpec::uniform(DimKind::Nu, 2, 2.0, 17).unwrap()
    }

    #[test]
    fn zero_is_svpc_with_zero_gap() {
        let phi = GridFunction::build(nu_grid(), |_| 0.0).unwrap();
        let (c, _) = certify(&phi, &CertifyOptions::for_grid(&nu_grid())).unwrap();
        assert_eq!(c.verdict, Verdict::Svpc);
        assert_eq!(c.max_gap, 0.0);
    }

    #[test]
    fn concave_is_refuted_with_lp_confirmation() {
        let phi = GridFunction::build(nu_grid(), |x| -(x[0] * x[0] + x[1] * x[1])).unwrap();
        let (c, _) = certify(&phi, &CertifyOptions::for_grid(&nu_grid())).unwrap();
        assert_eq!(c.verdict, Verdict::NotSvpc);
        assert_eq!(c.witness_node, Some(vec![0.0, 0.0]));
        assert_eq!(c.lp_confirmed, Some(true));
        assert!(!c.boundary_active);
    }

    #[test]
    fn hyperplane_of_zero_at_origin() {
        let phi = GridFunction::build(nu_grid(), |_| 0.0).unwrap();
        let beta = GridSpec::uniform(DimKind::Beta, 3, 1.0, 5).unwrap();
        let h = supporting_hyperplane(&phi, &[0.0, 0.0], 1e-9, &beta).unwrap();
        assert_eq!(h.beta, vec![0.0, 0.0, 0.0]);
        assert_eq!(h.offset, 0.0);
        assert_eq!(h.epsilon, 0.0);
        assert!(h.max_violation(&phi) <= 1e-10);
    }

    #[test]
    fn hyperplane_of_lifted_affine() {
        let b0 = [0.0, 0.0, 1.5];
        let phi = GridFunction::build(nu_grid(), |x| lifted_pairing(&b0, x)).unwrap();
        let beta = GridSpec::uniform(DimKind::Beta, 3, 3.0, 13).unwrap();
        let h = supporting_hyperplane(&phi, &[1.0, -0.5], 1e-9, &beta).unwrap();
        assert!(h.epsilon.abs() < 1e-12);
        assert!(h.max_violation(&phi) <= 1e-10);
        assert!(supporting_hyperplane(&phi, &[0.3, 0.0], 1e-9, &beta).is_err());
    }

    #[test]
    fn hyperplane_of_indicator() {
        let phi = GridFunction::build(
            nu_grid(),
            |x| {
                if x[0] == 0.0 && x[1] == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            },
        )
        .unwrap();
        let wide = GridSpec::uniform(DimKind::Beta, 3, 200.0, 9).unwrap();
        let h = supporting_hyperplane(&phi, &[1.0, 1.0], 0.01, &wide).unwrap();
        assert!(h.level >= 100.0);
        let narrow = GridSpec::uniform(DimKind::Beta, 3, 1.0, 3).unwrap();
        assert!(matches!(
            supporting_hyperplane(&phi, &[1.0, 1.0], 0.01, &narrow),
            Err(Error::HyperplaneNotFound { .. })
        ));
    }

    #[test]
    fn steigmann_examples() {
        let psi_grid = GridSpec::uniform(DimKind::Plain, 3, 4.0, 17).unwrap();
        let nu3 = GridSpec::uniform(DimKind::Nu, 3, 1.0, 5).unwrap();
        let good = |e: &[f64]| e[0] * e[0] - 2.0 * e[1] + 0.5 * e[2] * e[2] - e[2];
        let r = steigmann_check_fn(good, &psi_grid, &nu3, 1e-9).unwrap();
        assert!(r.criterion_satisfied, "{r:?}");

        let trace = |e: &[f64]| e[0];
        let r = steigmann_check_fn(trace, &psi_grid, &nu3, 1e-9).unwrap();
        assert!(r.convexity.convex);
        assert!(!r.symmetric);
        assert!((r.symmetry_deviation - 4.0).abs() < 1e-12);

        let concave = |e: &[f64]| -e[2] * e[2];
        let r = steigmann_check_fn(concave, &psi_grid, &nu3, 1e-9).unwrap();
        assert!(!r.convexity.convex);
        assert!(!r.criterion_satisfied);
    }

    #[test]
    fn steigmann_on_samples() {
        let psi_grid = GridSpec::uniform(DimKind::Plain, 2, 4.0, 33).unwrap();
        let nu2 = GridSpec::uniform(DimKind::Nu, 2, 1.0, 5).unwrap();
        let psi = GridFunction::build(psi_grid, |e| e[0] * e[0] + 0.5 * e[1] * e[1] - e[1]).unwrap();
        let r = steigmann_check(&psi, &nu2, 1e-9).unwrap();
        assert!(r.criterion_satisfied);
        assert!(!r.approximate);

        let small = GridSpec::uniform(DimKind::Plain, 2, 0.5, 3).unwrap();
        let psi = GridFunction::build(small, |e| e[0] * e[0]).unwrap();
        assert!(matches!(
            steigmann_check(&psi, &nu2, 1e-9),
            Err(Error::IncompatibleGrid(_))
        ));
    }

    #[test]
    fn line_monotonicity_examples() {
        let grid = uniform_lifted_grid(2.0, 9).unwrap();
        let sum = GridFunction::build(grid.clone(), |x| x[0] + x[1]).unwrap();
        assert!(line_monotonicity_check(&sum, 1e-12).unwrap().monotone);
        let neg = GridFunction::build(grid.clone(), |x| -x[0]).unwrap();
        let r = line_monotonicity_check(&neg, 1e-12).unwrap();
        assert!(r.family1_violations > 0);
        let det = GridFunction::build(grid, |x| x[2]).unwrap();
        assert!(line_monotonicity_check(&det, 1e-12).unwrap().monotone);
    }
}
