//! Grid descriptors: `min:max:count` for every axis, a comma-separated list
//! with one descriptor per axis, or `@path` naming a JSON file with the
//! axis node lists (`[[...], [...]]`).

use std::path::Path;

use svpc::error::{Error, Result};
use svpc::gridfn::{parse_real, DimKind, GridSpec};

fn parse_number(s: &str) -> Result<f64> {
    let v = parse_real(s.trim())?;
    if !v.is_finite() {
        return Err(Error::InvalidGrid(format!("grid bound {s:?} is not finite")));
    }
    Ok(v)
}

fn parse_axis(desc: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = desc.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(Error::InvalidGrid(format!("expected min:max:count, got {desc:?}")));
    };
    let (lo, hi) = (parse_number(lo)?, parse_number(hi)?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| Error::InvalidGrid(format!("bad node count in {desc:?}")))?;
    if lo != -hi || hi <= 0.0 {
        return Err(Error::InvalidGrid(format!("range {desc:?} is not symmetric about 0")));
    }
    if count < 3 || count.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "node count in {desc:?} must be odd and at least 3"
        )));
    }
    GridSpec::uniform_axis(hi, count)
}

fn read_axes(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    let raw: Vec<Vec<serde_json::Value>> = serde_json::from_str(&text)?;
    raw.iter()
        .map(|axis| {
            axis.iter()
                .map(|v| match v {
                    serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| Error::Format(format!("bad node {n}"))),
                    serde_json::Value::String(s) => parse_number(s),
                    other => Err(Error::Format(format!("bad node {other}"))),
                })
                .collect()
        })
        .collect()
}

/// Expands `desc` to a grid of `kind` with `n_axes` axes.
pub fn expand(desc: &str, kind: DimKind, n_axes: usize) -> Result<GridSpec> {
    let axes = if let Some(path) = desc.strip_prefix('@') {
        read_axes(Path::new(path))?
    } else {
        let parts: Vec<&str> = desc.split(',').collect();
        match parts.len() {
            1 => vec![parse_axis(parts[0])?; n_axes],
            n if n == n_axes => parts.iter().map(|p| parse_axis(p)).collect::<Result<_>>()?,
            n => {
                return Err(Error::InvalidGrid(format!(
                    "{n} axis descriptors given, expected 1 or {n_axes}"
                )))
            }
        }
    };
    if axes.len() != n_axes {
        return Err(Error::InvalidGrid(format!(
            "{} axes given, expected {n_axes}",
            axes.len()
        )));
    }
    GridSpec::new(kind, axes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_descriptor_repeats() {
        let g = expand("-3:3:31", DimKind::Nu, 2).unwrap();
        assert_eq!(g.shape(), vec![31, 31]);
        assert_eq!(g.axes()[0][15], 0.0);
    }

    #[test]
    fn per_axis_descriptors() {
        let g = expand("-1:1:3,-2:2:5,-4:4:9", DimKind::Beta, 3).unwrap();
        assert_eq!(g.shape(), vec![3, 5, 9]);
    }

    #[test]
    fn rejects_asymmetric_and_even() {
        assert!(expand("-1:2:5", DimKind::Nu, 2).is_err());
        assert!(expand("-2:2:4", DimKind::Nu, 2).is_err());
        assert!(expand("-2:2", DimKind::Nu, 2).is_err());
        assert!(expand("-1:1:3,-1:1:3", DimKind::Beta, 3).is_err());
    }
}
