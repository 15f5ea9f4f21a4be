//! Extended-real-valued functions sampled on rectangular, origin-symmetric
//! grids.
//!
//! Values are stored flat in row-major order over the axes (the last axis
//! varies fastest), so index 0 is the most negative corner and the last
//! index is the most positive one.
//!
//! Arithmetic conventions for infinite values: `+inf + r = +inf`, and no
//! operation in this crate ever forms `+inf - +inf`; every sweep skips
//! `+inf` samples before subtracting.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// A real number or one of the two infinities; never NaN.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const POS_INF: ExtendedReal = ExtendedReal(f64::INFINITY);
    pub const NEG_INF: ExtendedReal = ExtendedReal(f64::NEG_INFINITY);
    pub const ZERO: ExtendedReal = ExtendedReal(0.0);

    /// `None` for NaN.
    pub fn new(v: f64) -> Option<Self> {
        (!v.is_nan()).then_some(ExtendedReal(v))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl fmt::Debug for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_real(self.0))
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_real(self.0))
    }
}

/// Shortest round-trip decimal, with `+inf` / `-inf` literals.
pub fn format_real(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

pub fn parse_real(s: &str) -> Result<f64> {
    match s.trim() {
        "+inf" | "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => {
            let v: f64 = t
                .parse()
                .map_err(|_| Error::Format(format!("not a real number: {t:?}")))?;
            if v.is_nan() {
                return Err(Error::Format("NaN is not an extended real".into()));
            }
            Ok(v)
        }
    }
}

/// Which space a grid lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    /// Signed singular values, `R^d`. All axes identical.
    Nu,
    /// Lifted slopes, `R^{k_d}`.
    Beta,
    /// Any other Euclidean space (invariants, classical conjugation).
    Plain,
}

impl DimKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DimKind::Nu => "nu",
            DimKind::Beta => "beta",
            DimKind::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nu" => Ok(DimKind::Nu),
            "beta" => Ok(DimKind::Beta),
            "plain" => Ok(DimKind::Plain),
            other => Err(Error::Format(format!("unknown dim_kind {other:?}"))),
        }
    }
}

/// Per-axis node lists of a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    kind: DimKind,
    axes: Vec<Vec<f64>>,
    strides: Vec<usize>,
    len: usize,
}

impl GridSpec {
    pub fn new(kind: DimKind, axes: Vec<Vec<f64>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("no axes".into()));
        }
        match kind {
            DimKind::Nu if !(axes.len() == 2 || axes.len() == 3) => {
                return Err(Error::InvalidGrid(format!(
                    "nu-space grids need 2 or 3 axes, got {}",
                    axes.len()
                )))
            }
            DimKind::Beta if !(axes.len() == 3 || axes.len() == 7) => {
                return Err(Error::InvalidGrid(format!(
                    "beta-space grids need 3 or 7 axes, got {}",
                    axes.len()
                )))
            }
            _ => {}
        }
        for (a, axis) in axes.iter().enumerate() {
            if axis.is_empty() {
                return Err(Error::InvalidGrid(format!("axis {a} is empty")));
            }
            if axis.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidGrid(format!("axis {a} has a non-finite node")));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGrid(format!("axis {a} is not strictly increasing")));
            }
            let n = axis.len();
            if (0..n).any(|i| axis[i] != -axis[n - 1 - i]) {
                return Err(Error::InvalidGrid(format!("axis {a} is not symmetric about 0")));
            }
        }
        if kind == DimKind::Nu && axes.iter().any(|a| a != &axes[0]) {
            return Err(Error::InvalidGrid("nu-space axes must be identical".into()));
        }
        let mut strides = vec![1; axes.len()];
        for i in (0..axes.len() - 1).rev() {
            strides[i] = strides[i + 1] * axes[i + 1].len();
        }
        let len = strides[0] * axes[0].len();
        Ok(Self {
            kind,
            axes,
            strides,
            len,
        })
    }

    /// `count` uniformly spaced nodes on `[-half_width, half_width]`, mirrored
    /// exactly. `count` must be odd so that 0 is a node.
    pub fn uniform_axis(half_width: f64, count: usize) -> Result<Vec<f64>> {
        Self::graded_axis(half_width, count, 1.0)
    }

    /// Symmetric axis with nodes `±half_width * (j/m)^power`, `j = 0..m`.
    /// `power > 1` concentrates nodes near the origin.
    pub fn graded_axis(half_width: f64, count: usize, power: f64) -> Result<Vec<f64>> {
        if count.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "node count {count} must be odd so that 0 is a node"
            )));
        }
        if !(half_width.is_finite() && half_width >= 0.0) || (count > 1 && half_width == 0.0) {
            return Err(Error::InvalidGrid(format!("invalid half width {half_width}")));
        }
        let m = (count - 1) / 2;
        let positive: Vec<f64> = (1..=m)
            .map(|j| {
                let t = j as f64 / m as f64;
                if power == 1.0 {
                    half_width * j as f64 / m as f64
                } else {
                    half_width * t.powf(power)
                }
            })
            .collect();
        let mut axis: Vec<f64> = positive.iter().rev().map(|x| -x).collect();
        axis.push(0.0);
        axis.extend(positive);
        Ok(axis)
    }

    /// Grid with `n_axes` copies of the same uniform axis.
    pub fn uniform(kind: DimKind, n_axes: usize, half_width: f64, count: usize) -> Result<Self> {
        let axis = Self::uniform_axis(half_width, count)?;
        Self::new(kind, vec![axis; n_axes])
    }

    pub fn kind(&self) -> DimKind {
        self.kind
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    /// Number of axes.
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn multi_index(&self, index: usize) -> Result<Vec<usize>> {
        self.check_index(index)?;
        Ok(self.multi_index_unchecked(index))
    }

    pub(crate) fn multi_index_unchecked(&self, mut index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let i = index / s;
                index %= s;
                i
            })
            .collect()
    }

    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: multi.len(),
            });
        }
        let mut idx = 0;
        for ((&i, s), axis) in multi.iter().zip(&self.strides).zip(&self.axes) {
            if i >= axis.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: axis.len(),
                });
            }
            idx += i * s;
        }
        Ok(idx)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len {
            Err(Error::IndexOutOfRange { index, len: self.len })
        } else {
            Ok(())
        }
    }

    pub fn node_at(&self, index: usize) -> Result<Vec<f64>> {
        self.check_index(index)?;
        let mut out = vec![0.0; self.dim()];
        self.node_into(index, &mut out);
        Ok(out)
    }

    #[inline]
    pub(crate) fn node_into(&self, mut index: usize, out: &mut [f64]) {
        for ((o, s), axis) in out.iter_mut().zip(&self.strides).zip(&self.axes) {
            *o = axis[index / s];
            index %= s;
        }
    }

    /// All nodes, flattened with stride `dim()`.
    pub fn nodes_flat(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; self.len * d];
        for (i, chunk) in out.chunks_mut(d).enumerate() {
            self.node_into(i, chunk);
        }
        out
    }

    /// True when some coordinate of the node is the first or last on its axis.
    pub fn is_boundary(&self, index: usize) -> bool {
        let mut rem = index;
        for (s, axis) in self.strides.iter().zip(&self.axes) {
            let i = rem / s;
            rem %= s;
            if axis.len() > 1 && (i == 0 || i == axis.len() - 1) {
                return true;
            }
        }
        false
    }

    /// Axes whose coordinate at this node is extreme.
    pub fn boundary_axes(&self, index: usize) -> Vec<usize> {
        let multi = self.multi_index_unchecked(index);
        multi
            .iter()
            .zip(&self.axes)
            .enumerate()
            .filter(|(_, (&i, axis))| axis.len() > 1 && (i == 0 || i == axis.len() - 1))
            .map(|(a, _)| a)
            .collect()
    }

    /// Largest gap between consecutive nodes over all axes.
    pub fn max_spacing(&self) -> f64 {
        self.axes
            .iter()
            .flat_map(|a| a.windows(2).map(|w| w[1] - w[0]))
            .fold(0.0, f64::max)
    }

    /// Spacing of each axis, or an error naming the first non-uniform axis.
    pub fn uniform_spacings(&self) -> Result<Vec<f64>> {
        self.axes
            .iter()
            .enumerate()
            .map(|(a, axis)| {
                if axis.len() < 2 {
                    return Ok(0.0);
                }
                let h = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
                let scale = axis[axis.len() - 1].abs().max(1.0);
                if axis.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * scale) {
                    Err(Error::NonUniformAxis { axis: a })
                } else {
                    Ok(h)
                }
            })
            .collect()
    }

    /// Index of the node equal to `point`, if any.
    pub fn locate(&self, point: &[f64]) -> Option<usize> {
        if point.len() != self.dim() {
            return None;
        }
        let mut idx = 0;
        for ((p, axis), s) in point.iter().zip(&self.axes).zip(&self.strides) {
            if !p.is_finite() {
                return None;
            }
            // partial_cmp so that -0.0 finds the 0 node
            let i = axis.binary_search_by(|x| x.partial_cmp(p).expect("finite")).ok()?;
            idx += i * s;
        }
        Some(idx)
    }
}

/// An extended-real function sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    /// Samples `f` at every node. Intended for energy densities: NaN and
    /// `-inf` are rejected.
    pub fn build<F>(spec: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let d = spec.dim();
        let eval = |i: usize| {
            let mut node = [0.0; 7];
            let node = if d <= 7 {
                spec.node_into(i, &mut node[..d]);
                node[..d].to_vec()
            } else {
                spec.node_at(i).expect("in range")
            };
            f(&node)
        };
        #[cfg(feature = "parallel")]
        let values: Vec<f64> = {
            use rayon::prelude::*;
            (0..spec.len()).into_par_iter().map(eval).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let values: Vec<f64> = (0..spec.len()).map(eval).collect();

        for (index, v) in values.iter().enumerate() {
            if v.is_nan() {
                return Err(Error::InvalidValue { index, reason: "NaN" });
            }
            if *v == f64::NEG_INFINITY {
                return Err(Error::InvalidValue {
                    index,
                    reason: "-inf is not a valid energy value",
                });
            }
        }
        Ok(Self { spec, values })
    }

    /// Wraps precomputed values; `-inf` is allowed (conjugate outputs), NaN is not.
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::DimensionMismatch {
                expected: spec.len(),
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::InvalidValue { index, reason: "NaN" });
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_at(&self, index: usize) -> Result<ExtendedReal> {
        self.values
            .get(index)
            .map(|&v| ExtendedReal(v))
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.values.len(),
            })
    }

    pub fn has_finite(&self) -> bool {
        self.values.iter().any(|v| v.is_finite())
    }

    /// True when some value is `-inf` (never the case for sampled energies).
    pub fn has_neg_inf(&self) -> bool {
        self.values.contains(&f64::NEG_INFINITY)
    }

    /// Nodewise map keeping the grid.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values(self.spec.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Indices of nodes strictly inside the grid whose value and axis
    /// neighbours are all finite.
    pub fn interior_finite_nodes(&self) -> Vec<usize> {
        let spec = &self.spec;
        (0..self.len())
            .filter(|&i| {
                if spec.is_boundary(i) || !self.values[i].is_finite() {
                    return false;
                }
                spec.strides()
                    .iter()
                    .all(|&s| self.values[i - s].is_finite() && self.values[i + s].is_finite())
            })
            .collect()
    }

    /// Discrete midpoint convexity along every axis and every diagonal
    /// direction in `{-1, 0, 1}^n`. Requires uniform axes.
    ///
    /// A triple with an infinite outer value on the `+inf` side never
    /// violates; a `+inf` midpoint between finite values always does.
    pub fn midpoint_convexity_check(&self, tol: f64) -> Result<ConvexityReport> {
        self.spec.uniform_spacings()?;
        let n = self.spec.dim();
        let shape = self.spec.shape();
        let strides = self.spec.strides().to_vec();
        // directions with first nonzero component positive
        let mut directions: Vec<Vec<i64>> = Vec::new();
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let dir: Vec<i64> = (0..n)
                .map(|_| {
                    let v = (c % 3) as i64 - 1;
                    c /= 3;
                    v
                })
                .collect();
            if dir.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) {
                directions.push(dir);
            }
        }
        let mut report = ConvexityReport {
            convex: true,
            worst_violation: 0.0,
            witness: None,
        };
        for index in 0..self.len() {
            let multi = self.spec.multi_index_unchecked(index);
            let center = self.values[index];
            for dir in &directions {
                let mut ok = true;
                let mut offset: i64 = 0;
                for a in 0..n {
                    let i = multi[a] as i64;
                    if i - dir[a].abs() < 0 || i + dir[a].abs() >= shape[a] as i64 {
                        ok = false;
                        break;
                    }
                    offset += dir[a] * strides[a] as i64;
                }
                if !ok {
                    continue;
                }
                let lo = self.values[(index as i64 - offset) as usize];
                let hi = self.values[(index as i64 + offset) as usize];
                let violation = midpoint_violation(center, lo, hi);
                if violation > tol && violation > report.worst_violation {
                    report.convex = false;
                    report.worst_violation = violation;
                    report.witness = Some(ConvexityWitness {
                        index,
                        direction: dir.clone(),
                    });
                }
            }
        }
        Ok(report)
    }

    /// Multilinear interpolation at `point`; `None` outside the grid.
    /// Diagnostic only.
    pub fn interpolate(&self, point: &[f64]) -> Option<f64> {
        let n = self.spec.dim();
        if point.len() != n {
            return None;
        }
        let mut base = Vec::with_capacity(n);
        let mut frac = Vec::with_capacity(n);
        for (p, axis) in point.iter().zip(self.spec.axes()) {
            if *p < axis[0] || *p > axis[axis.len() - 1] || !p.is_finite() {
                return None;
            }
            if axis.len() == 1 {
                base.push(0);
                frac.push(0.0);
                continue;
            }
            let k = match axis.binary_search_by(|x| x.total_cmp(p)) {
                Ok(k) => k.min(axis.len() - 2),
                Err(k) => k - 1,
            };
            base.push(k);
            frac.push((p - axis[k]) / (axis[k + 1] - axis[k]));
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << n) {
            let mut w = 1.0;
            let mut idx = 0;
            for a in 0..n {
                let up = (corner >> a) & 1 == 1;
                let t = frac[a];
                let wa = if up { t } else { 1.0 - t };
                if wa == 0.0 {
                    w = 0.0;
                    break;
                }
                w *= wa;
                idx += (base[a] + up as usize) * self.spec.strides()[a];
            }
            if w != 0.0 {
                let v = self.values[idx];
                if !v.is_finite() {
                    return Some(v);
                }
                acc += w * v;
            }
        }
        Some(acc)
    }

    pub fn to_json_string(&self) -> String {
        let doc = GridDocument {
            kind: "gridfn".to_string(),
            dim_kind: self.spec.kind().as_str().to_string(),
            axes: self
                .spec
                .axes()
                .iter()
                .map(|a| a.iter().map(|&x| Value::String(format_real(x))).collect())
                .collect(),
            values: self.values.iter().map(|&v| Value::String(format_real(v))).collect(),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }

    /// Reads the JSON document; reals may be strings or JSON numbers.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: GridDocument = serde_json::from_str(s)?;
        if doc.kind != "gridfn" {
            return Err(Error::Format(format!("expected kind \"gridfn\", got {:?}", doc.kind)));
        }
        let kind = DimKind::parse(&doc.dim_kind)?;
        let axes = doc
            .axes
            .iter()
            .map(|a| a.iter().map(value_to_real).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?;
        let values = doc.values.iter().map(value_to_real).collect::<Result<Vec<f64>>>()?;
        let spec = GridSpec::new(kind, axes)?;
        Self::from_values(spec, values)
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json_string())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&s)
    }

    /// CSV with a header line, then one row per node: coordinates, value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let prefix = match self.spec.kind() {
            DimKind::Nu => "nu",
            DimKind::Beta => "beta",
            DimKind::Plain => "x",
        };
        let header: Vec<String> = (1..=self.spec.dim())
            .map(|i| format!("{prefix}{i}"))
            .chain(std::iter::once("value".to_string()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        let mut node = vec![0.0; self.spec.dim()];
        for (i, v) in self.values.iter().enumerate() {
            self.spec.node_into(i, &mut node);
            let row: Vec<String> = node
                .iter()
                .map(|&x| format_real(x))
                .chain(std::iter::once(format_real(*v)))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn midpoint_violation(center: f64, lo: f64, hi: f64) -> f64 {
    if lo == f64::INFINITY || hi == f64::INFINITY {
        return 0.0;
    }
    if center == f64::NEG_INFINITY {
        return 0.0;
    }
    if lo == f64::NEG_INFINITY || hi == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    if center == f64::INFINITY {
        return f64::INFINITY;
    }
    center - 0.5 * (lo + hi)
}

fn value_to_real(v: &Value) -> Result<f64> {
    match v {
        Value::String(s) => parse_real(s),
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Format(format!("bad number {n}"))),
        other => Err(Error::Format(format!("expected a real, got {other}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct GridDocument {
    kind: String,
    dim_kind: String,
    axes: Vec<Vec<Value>>,
    values: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub index: usize,
    pub direction: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    pub worst_violation: f64,
    pub witness: Option<ConvexityWitness>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nu_grid(half: f64, count: usize) -> GridSpec {
        GridSpec::uniform(DimKind::Nu, 2, half, count).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(DimKind::Nu, vec![vec![-1.0, 0.0, 1.0]]).is_err());
        assert!(GridSpec::new(DimKind::Nu, vec![vec![-1.0, 0.0, 1.0], vec![-2.0, 0.0, 2.0]]).is_err());
        assert!(GridSpec::new(DimKind::Plain, vec![vec![-1.0, 0.5, 1.0]]).is_err());
        assert!(GridSpec::new(DimKind::Plain, vec![vec![0.0, 0.0]]).is_err());
        assert!(GridSpec::new(DimKind::Beta, vec![vec![0.0]; 4]).is_err());
        assert!(GridSpec::uniform_axis(1.0, 4).is_err());
    }

    #[test]
    fn build_examples() {
        let g = GridFunction::build(nu_grid(2.0, 5), |_| 0.0).unwrap();
        assert!(g.values().iter().all(|v| *v == 0.0));

        let g = GridFunction::build(nu_grid(2.0, 5), |x| {
            if x.iter().all(|v| *v == 0.0) {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .unwrap();
        assert_eq!(g.values().iter().filter(|v| v.is_finite()).count(), 1);

        let g = GridFunction::build(nu_grid(1.0, 3), |x| x[0] * x[1]).unwrap();
        assert_eq!(g.values(), &[1.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn build_rejects_nan_and_negative_infinity() {
        assert!(matches!(
            GridFunction::build(nu_grid(1.0, 3), |_| f64::NAN),
            Err(Error::InvalidValue { index: 0, .. })
        ));
        assert!(GridFunction::build(nu_grid(1.0, 3), |_| f64::NEG_INFINITY).is_err());
        assert!(GridFunction::from_values(nu_grid(1.0, 3), vec![f64::NEG_INFINITY; 9]).is_ok());
        assert!(GridFunction::from_values(nu_grid(1.0, 3), vec![0.0; 8]).is_err());
    }

    #[test]
    fn index_layout() {
        let spec = GridSpec::new(
            DimKind::Plain,
            vec![vec![-1.0, 0.0, 1.0], vec![-2.0, 2.0], vec![-3.0, 0.0, 3.0]],
        )
        .unwrap();
        assert_eq!(spec.len(), 18);
        assert_eq!(spec.node_at(0).unwrap(), vec![-1.0, -2.0, -3.0]);
        assert_eq!(spec.node_at(17).unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(spec.node_at(18).is_err());
        for i in 0..spec.len() {
            let m = spec.multi_index(i).unwrap();
            assert_eq!(spec.flat_index(&m).unwrap(), i);
            assert_eq!(spec.locate(&spec.node_at(i).unwrap()), Some(i));
        }
        assert!(spec.is_boundary(0));
        let g = GridFunction::from_values(spec, vec![0.0; 18]).unwrap();
        assert!(g.value_at(18).is_err());
        assert_eq!(g.value_at(3).unwrap(), ExtendedReal::ZERO);
    }

    #[test]
    fn convexity_examples() {
        let spec = nu_grid(2.0, 9);
        let sq = GridFunction::build(spec.clone(), |x| x[0] * x[0] + x[1] * x[1]).unwrap();
        assert!(sq.midpoint_convexity_check(1e-12).unwrap().convex);

        // on a 3x3 grid the origin is the only node with both neighbours
        let small = nu_grid(1.0, 3);
        let neg = GridFunction::build(small.clone(), |x| -(x[0] * x[0] + x[1] * x[1])).unwrap();
        let rep = neg.midpoint_convexity_check(1e-12).unwrap();
        assert!(!rep.convex);
        assert_eq!(rep.worst_violation, 2.0);
        assert_eq!(small.node_at(rep.witness.unwrap().index).unwrap(), vec![0.0, 0.0]);

        // x1*x2 is convex along both axes but concave along (1,-1)
        let saddle = GridFunction::build(spec.clone(), |x| x[0] * x[1]).unwrap();
        let rep = saddle.midpoint_convexity_check(1e-12).unwrap();
        assert!(!rep.convex);
        let h = 0.5;
        assert!((rep.worst_violation - h * h).abs() < 1e-12);
        assert_eq!(rep.witness.unwrap().direction, vec![1, -1]);
    }

    #[test]
    fn convexity_handles_infinities() {
        let spec = GridSpec::uniform(DimKind::Plain, 1, 2.0, 5).unwrap();
        let ind = GridFunction::from_values(spec.clone(), vec![f64::INFINITY, 0.0, 0.0, 0.0, f64::INFINITY]).unwrap();
        assert!(ind.midpoint_convexity_check(0.0).unwrap().convex);
        let hole = GridFunction::from_values(spec, vec![0.0, 0.0, f64::INFINITY, 0.0, 0.0]).unwrap();
        assert!(!hole.midpoint_convexity_check(0.0).unwrap().convex);
    }

    #[test]
    fn convexity_requires_uniform_axes() {
        let spec = GridSpec::new(DimKind::Plain, vec![vec![-3.0, -1.0, 0.0, 1.0, 3.0]]).unwrap();
        let f = GridFunction::from_values(spec, vec![0.0; 5]).unwrap();
        assert_eq!(f.midpoint_convexity_check(0.0), Err(Error::NonUniformAxis { axis: 0 }));
    }

    #[test]
    fn json_and_csv() {
        let g = GridFunction::build(nu_grid(1.0, 3), |x| if x[0] < 0.0 { f64::INFINITY } else { x[1] / 3.0 }).unwrap();
        let s = g.to_json_string();
        assert!(s.starts_with(r#"{"kind":"gridfn","dim_kind":"nu","axes":[["-1","0","1"]"#));
        assert!(s.contains("\"+inf\""));
        assert_eq!(GridFunction::from_json_str(&s).unwrap(), g);

        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], "nu1,nu2,value");
        assert_eq!(lines[1], "-1,-1,+inf");

        let hand = r#"{"kind":"gridfn","dim_kind":"plain","axes":[[-1,0,1]],"values":[1,"-inf",2.5]}"#;
        let h = GridFunction::from_json_str(hand).unwrap();
        assert_eq!(h.values(), &[1.0, f64::NEG_INFINITY, 2.5]);
        assert!(GridFunction::from_json_str(r#"{"kind":"other","dim_kind":"nu","axes":[],"values":[]}"#).is_err());
    }

    #[test]
    fn interpolation_is_exact_on_multilinear_functions() {
        let spec = GridSpec::uniform(DimKind::Plain, 2, 2.0, 5).unwrap();
        let f = GridFunction::build(spec, |x| 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1]).unwrap();
        let p = [0.3, -1.7];
        let exact = 1.0 + 0.6 + 1.7 + 0.5 * 0.3 * -1.7;
        assert!((f.interpolate(&p).unwrap() - exact).abs() < 1e-12);
        assert!(f.interpolate(&[2.5, 0.0]).is_none());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(vals in proptest::collection::vec(
            prop_oneof![any::<f64>().prop_filter("no NaN", |v| !v.is_nan()), Just(f64::INFINITY)], 25)) {
            let spec = GridSpec::uniform(DimKind::Nu, 2, 1.3, 5).unwrap();
            let g = GridFunction::from_values(spec, vals).unwrap();
            let back = GridFunction::from_json_str(&g.to_json_string()).unwrap();
            for (a, b) in g.values().iter().zip(back.values()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
            prop_assert_eq!(back.spec(), g.spec());
        }

        #[test]
        fn max_of_affine_functions_is_midpoint_convex(
            planes in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 1..6)) {
            let spec = GridSpec::uniform(DimKind::Plain, 2, 2.0, 9).unwrap();
            let f = GridFunction::build(spec, |x| {
                planes.iter().map(|(a, b, c)| a * x[0] + b * x[1] + c).fold(f64::NEG_INFINITY, f64::max)
            }).unwrap();
            prop_assert!(f.midpoint_convexity_check(1e-12).unwrap().convex);
        }
    }
}
