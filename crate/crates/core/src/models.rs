//! Isotropic energy densities, each with a matrix form `W(F)` and a
//! signed-singular-value form `Φ(ν)`.
//!
//! The two forms are written independently: `W` uses only `|F|²`,
//! `|cof F|²`, `det F` and eigenvalues of `FᵀF`, never the SVD. The tests
//! check `W(F) = Φ(signed_svd(F))`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gridfn::ExtendedReal;
use crate::matkit::{check_dim, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KnownSvpc {
    Yes,
    No,
    Unknown,
}

impl KnownSvpc {
    pub fn as_str(self) -> &'static str {
        match self {
            KnownSvpc::Yes => "yes",
            KnownSvpc::No => "no",
            KnownSvpc::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub description: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub dims: &'static [usize],
    pub params: Vec<ParamSpec>,
    pub finite_everywhere: bool,
    pub det_barrier: bool,
    pub known_svpc: KnownSvpc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    LiftedAffine {
        det: f64,
        offset: f64,
    },
    LiftedConvex {
        a: f64,
        b: f64,
        c: f64,
        e: f64,
        f: f64,
        offset: f64,
    },
    StVenantKirchhoff {
        lambda: f64,
        mu: f64,
    },
    OgdenLike {
        p: f64,
        q: f64,
    },
    DoubleWell {
        a: f64,
    },
    DetBarrier {
        mu: f64,
    },
    ConcaveQuadratic {
        c: f64,
    },
    InvariantModel {
        a: f64,
        b: f64,
        c: f64,
    },
}

const NAMES: [&str; 8] = [
    "concave_quadratic",
    "det_barrier",
    "double_well",
    "invariant_model",
    "lifted_affine",
    "lifted_convex",
    "ogden_like",
    "st_venant_kirchhoff",
];

fn p(name: &'static str, default: f64, description: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default,
        description,
    }
}

fn info(name: &str) -> Option<ModelInfo> {
    let both: &'static [usize] = &[2, 3];
    Some(match name {
        "lifted_affine" => ModelInfo {
            name: "lifted_affine",
            description: "det * (product of nu) + offset; the invariant affine functions of the lifted point",
            dims: both,
            params: vec![
                p("det", 1.0, "coefficient of the determinant coordinate"),
                p("offset", 0.0, "constant term"),
            ],
            finite_everywhere: true,
            det_barrier: false,
            known_svpc: KnownSvpc::Yes,
        },
        "lifted_convex" => ModelInfo {
            name: "lifted_convex",
            description: "invariant convex quadratic of the lifted point: a|x|^2 + c*x1x2 (2-D) or a|x|^2 + b|x~|^2 + c<x,x~> (3-D), plus e*det^2 + f*det + offset",
            dims: both,
            params: vec![
                p("a", 0.5, "weight of |nu|^2"),
                p("b", 0.25, "weight of the squared pairwise products (3-D only)"),
                p("c", 0.0, "cross term; |c| <= 2a in 2-D, c^2 <= 4ab in 3-D"),
                p("e", 0.25, "weight of det^2, nonnegative"),
                p("f", -0.5, "coefficient of det"),
                p("offset", 0.0, "constant term"),
            ],
            finite_everywhere: true,
            det_barrier: false,
            known_svpc: KnownSvpc::Yes,
        },
        "st_venant_kirchhoff" => ModelInfo {
            name: "st_venant_kirchhoff",
            description: "lambda/8 (|nu|^2 - d)^2 + mu/4 sum (nu_i^2 - 1)^2",
            dims: both,
            params: vec![
                p("lambda", 1.0, "first Lame parameter, nonnegative"),
                p("mu", 1.0, "shear modulus, nonnegative"),
            ],
            finite_everywhere: true,
            det_barrier: false,
            known_svpc: KnownSvpc::No,
        },
        "ogden_like" => ModelInfo {
            name: "ogden_like",
            description: "sum |nu_i|^p + (prod nu)^(-q), +inf when prod nu <= 0 (no barrier when q = 0)",
            dims: both,
            params: vec![
                p("p", 2.0, "exponent, at least 1"),
                p("q", 1.0, "barrier exponent, nonnegative"),
            ],
            finite_everywhere: false,
            det_barrier: true,
            known_svpc: KnownSvpc::Yes,
        },
        "double_well" => ModelInfo {
            name: "double_well",
            description: "squared distance from nu to the orbit of (a, ..., a)",
            dims: both,
            params: vec![p("a", 1.0, "well position, positive")],
            finite_everywhere: true,
            det_barrier: false,
            known_svpc: KnownSvpc::No,
        },
        "det_barrier" => ModelInfo {
            name: "det_barrier",
            description: "-log(prod nu) + mu |nu|^2, +inf when prod nu <= 0",
            dims: both,
            params: vec![p("mu", 1.0, "weight of |nu|^2, nonnegative")],
            finite_everywhere: false,
            det_barrier: true,
            known_svpc: KnownSvpc::Yes,
        },
        "concave_quadratic" => ModelInfo {
            name: "concave_quadratic",
            description: "-c |nu|^2",
            dims: both,
            params: vec![p("c", 1.0, "curvature, positive")],
            finite_everywhere: true,
            det_barrier: false,
            known_svpc: KnownSvpc::No,
        },
        "invariant_model" => ModelInfo {
            name: "invariant_model",
            description: "psi(e(nu)) with e the elementary symmetric polynomials: a e1^2 + b e2^2 + c e2 (2-D), a (e1^2 - 2 e2) + b e3^2 + c e3 (3-D)",
            dims: both,
            params: vec![
                p("a", 1.0, "nonnegative"),
                p("b", 0.5, "nonnegative"),
                p("c", -1.0, "linear coefficient of the last invariant"),
            ],
            finite_everywhere: true,
            det_barrier: false,
            known_svpc: KnownSvpc::Yes,
        },
        _ => return None,
    })
}

/// Every model, sorted by name.
pub fn catalog() -> Vec<ModelInfo> {
    NAMES.iter().map(|n| info(n).expect("listed")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyModel {
    info: ModelInfo,
    dim: usize,
    params: BTreeMap<String, f64>,
    kind: Kind,
}

fn invalid(model: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        model: model.to_string(),
        reason: reason.into(),
    }
}

impl EnergyModel {
    /// Builds a model; parameters not given take their defaults, unknown
    /// names and out-of-range values are rejected.
    pub fn new(name: &str, dim: usize, params: &BTreeMap<String, f64>) -> Result<Self> {
        let info = info(name).ok_or_else(|| Error::UnknownModel(name.to_string()))?;
        check_dim(dim)?;
        for (k, v) in params {
            if !info.params.iter().any(|p| p.name == k) {
                return Err(invalid(name, format!("unknown parameter `{k}`")));
            }
            if !v.is_finite() {
                return Err(invalid(name, format!("`{k}` must be finite")));
            }
        }
        let mut full = BTreeMap::new();
        for spec in &info.params {
            full.insert(
                spec.name.to_string(),
                params.get(spec.name).copied().unwrap_or(spec.default),
            );
        }
        let g = |k: &str| full[k];
        let kind = match name {
            "lifted_affine" => Kind::LiftedAffine {
                det: g("det"),
                offset: g("offset"),
            },
            "lifted_convex" => {
                let (a, b, c, e) = (g("a"), g("b"), g("c"), g("e"));
                let convex = if dim == 2 {
                    a >= 0.0 && c.abs() <= 2.0 * a && e >= 0.0
                } else {
                    a >= 0.0 && b >= 0.0 && c * c <= 4.0 * a * b && e >= 0.0
                };
                if !convex {
                    return Err(invalid(name, "parameters do not give a convex quadratic"));
                }
                Kind::LiftedConvex {
                    a,
                    b,
                    c,
                    e,
                    f: g("f"),
                    offset: g("offset"),
                }
            }
            "st_venant_kirchhoff" => {
                if g("lambda") < 0.0 || g("mu") < 0.0 {
                    return Err(invalid(name, "lambda and mu must be nonnegative"));
                }
                Kind::StVenantKirchhoff {
                    lambda: g("lambda"),
                    mu: g("mu"),
                }
            }
            "ogden_like" => {
                if g("p") < 1.0 || g("q") < 0.0 {
                    return Err(invalid(name, "need p >= 1 and q >= 0"));
                }
                Kind::OgdenLike { p: g("p"), q: g("q") }
            }
            "double_well" => {
                if g("a") <= 0.0 {
                    return Err(invalid(name, "a must be positive"));
                }
                Kind::DoubleWell { a: g("a") }
            }
            "det_barrier" => {
                if g("mu") < 0.0 {
                    return Err(invalid(name, "mu must be nonnegative"));
                }
                Kind::DetBarrier { mu: g("mu") }
            }
            "concave_quadratic" => {
                if g("c") <= 0.0 {
                    return Err(invalid(name, "c must be positive"));
                }
                Kind::ConcaveQuadratic { c: g("c") }
            }
            "invariant_model" => {
                if g("a") < 0.0 || g("b") < 0.0 {
                    return Err(invalid(name, "a and b must be nonnegative"));
                }
                Kind::InvariantModel {
                    a: g("a"),
                    b: g("b"),
                    c: g("c"),
                }
            }
            _ => unreachable!("info() accepted the name"),
        };
        let mut info = info;
        if let Kind::OgdenLike { q, .. } = kind {
            if q == 0.0 {
                info.finite_everywhere = true;
                info.det_barrier = false;
            }
        }
        Ok(Self {
            info,
            dim,
            params: full,
            kind,
        })
    }

    /// Parameters from a JSON object such as `{"lambda": 2}`.
    pub fn from_json(name: &str, dim: usize, params_json: &str) -> Result<Self> {
        let params: BTreeMap<String, f64> = if params_json.trim().is_empty() {
            BTreeMap::new()
        } else {
            serde_json::from_str(params_json)?
        };
        Self::new(name, dim, &params)
    }

    pub fn with_defaults(name: &str, dim: usize) -> Result<Self> {
        Self::new(name, dim, &BTreeMap::new())
    }

    pub fn name(&self) -> &'static str {
        self.info.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn info(&self) -> &ModelInfo {
        &self.info
    }

    pub fn finite_everywhere(&self) -> bool {
        self.info.finite_everywhere
    }

    pub fn det_barrier(&self) -> bool {
        self.info.det_barrier
    }

    pub fn known_svpc(&self) -> KnownSvpc {
        self.info.known_svpc
    }

    /// `Φ(ν)` as a raw float (`+inf` allowed), for grid construction.
    pub fn phi(&self, nu: &[f64]) -> f64 {
        debug_assert_eq!(nu.len(), self.dim);
        let d = self.dim as f64;
        let sq: f64 = nu.iter().map(|v| v * v).sum();
        let prod: f64 = nu.iter().product();
        match self.kind {
            Kind::LiftedAffine { det, offset } => det * prod + offset,
            Kind::LiftedConvex { a, b, c, e, f, offset } => {
                if self.dim == 2 {
                    a * sq + c * nu[0] * nu[1] + e * prod * prod + f * prod + offset
                } else {
                    let tilde = [nu[1] * nu[2], nu[0] * nu[2], nu[0] * nu[1]];
                    let tsq: f64 = tilde.iter().map(|v| v * v).sum();
                    let cross: f64 = nu.iter().zip(&tilde).map(|(x, y)| x * y).sum();
                    a * sq + b * tsq + c * cross + e * prod * prod + f * prod + offset
                }
            }
            Kind::StVenantKirchhoff { lambda, mu } => {
                let vol = sq - d;
                lambda / 8.0 * vol * vol + mu / 4.0 * nu.iter().map(|v| (v * v - 1.0).powi(2)).sum::<f64>()
            }
            Kind::OgdenLike { p, q } => {
                let body: f64 = nu.iter().map(|v| v.abs().powf(p)).sum();
                if q == 0.0 {
                    body
                } else if prod > 0.0 {
                    body + prod.powf(-q)
                } else {
                    f64::INFINITY
                }
            }
            Kind::DoubleWell { a } => {
                let wells: &[&[f64]] = if self.dim == 2 {
                    &[&[1.0, 1.0], &[-1.0, -1.0]]
                } else {
                    &[
                        &[1.0, 1.0, 1.0],
                        &[-1.0, -1.0, 1.0],
                        &[-1.0, 1.0, -1.0],
                        &[1.0, -1.0, -1.0],
                    ]
                };
                wells
                    .iter()
                    .map(|w| nu.iter().zip(w.iter()).map(|(x, s)| (x - s * a).powi(2)).sum::<f64>())
                    .fold(f64::INFINITY, f64::min)
            }
            Kind::DetBarrier { mu } => {
                if prod > 0.0 {
                    -prod.ln() + mu * sq
                } else {
                    f64::INFINITY
                }
            }
            Kind::ConcaveQuadratic { c } => -c * sq,
            Kind::InvariantModel { a, b, c } => {
                if self.dim == 2 {
                    let e1 = nu[0] + nu[1];
                    a * e1 * e1 + b * prod * prod + c * prod
                } else {
                    let e1 = nu[0] + nu[1] + nu[2];
                    let e2 = nu[1] * nu[2] + nu[0] * nu[2] + nu[0] * nu[1];
                    a * (e1 * e1 - 2.0 * e2) + b * prod * prod + c * prod
                }
            }
        }
    }

    /// `W(F)` as a raw float.
    pub fn w(&self, f: &SquareMatrix) -> f64 {
        debug_assert_eq!(f.dim(), self.dim);
        let d = self.dim as f64;
        let fsq = f.frobenius_sq();
        let det = f.det();
        let cof_sq = || f.adjugate_transpose().expect("3x3 in 3-D branches").frobenius_sq();
        match self.kind {
            Kind::LiftedAffine { det: k, offset } => k * det + offset,
            Kind::LiftedConvex {
                a,
                b,
                c,
                e,
                f: lin,
                offset,
            } => {
                let quad = if self.dim == 2 {
                    a * fsq + c * det
                } else {
                    // <x, x~> = 3 det on diagonal matrices
                    a * fsq + b * cof_sq() + c * 3.0 * det
                };
                quad + e * det * det + lin * det + offset
            }
            Kind::StVenantKirchhoff { lambda, mu } => {
                let c = &f.transpose() * f;
                let csq = c.frobenius_sq();
                let vol = fsq - d;
                lambda / 8.0 * vol * vol + mu / 4.0 * (csq - 2.0 * fsq + d)
            }
            Kind::OgdenLike { p, q } => {
                let body: f64 = singular_values(f).iter().map(|s| s.powf(p)).sum();
                if q == 0.0 {
                    body
                } else if det > 0.0 {
                    body + det.powf(-q)
                } else {
                    f64::INFINITY
                }
            }
            Kind::DoubleWell { a } => {
                let s = singular_values(f);
                let total: f64 = s.iter().sum();
                let smallest = s.iter().copied().fold(f64::INFINITY, f64::min);
                let best = if det < 0.0 { total - 2.0 * smallest } else { total };
                fsq - 2.0 * a * best + d * a * a
            }
            Kind::DetBarrier { mu } => {
                if det > 0.0 {
                    -det.ln() + mu * fsq
                } else {
                    f64::INFINITY
                }
            }
            Kind::ConcaveQuadratic { c } => -c * fsq,
            Kind::InvariantModel { a, b, c } => {
                let first = if self.dim == 2 { fsq + 2.0 * det } else { fsq };
                a * first + b * det * det + c * det
            }
        }
    }
}

pub fn evaluate_w(m: &EnergyModel, f: &SquareMatrix) -> Result<ExtendedReal> {
    if f.dim() != m.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            actual: f.dim(),
        });
    }
    ExtendedReal::new(m.w(f)).ok_or(Error::InvalidValue {
        index: 0,
        reason: "NaN",
    })
}

pub fn evaluate_phi(m: &EnergyModel, nu: &[f64]) -> Result<ExtendedReal> {
    if nu.len() != m.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            actual: nu.len(),
        });
    }
    ExtendedReal::new(m.phi(nu)).ok_or(Error::InvalidValue {
        index: 0,
        reason: "NaN",
    })
}

/// Singular values as square roots of the eigenvalues of `FᵀF`.
fn singular_values(f: &SquareMatrix) -> Vec<f64> {
    let c = &f.transpose() * f;
    symmetric_eigenvalues(&c)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn symmetric_eigenvalues(m: &SquareMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    for _ in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-32 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}
