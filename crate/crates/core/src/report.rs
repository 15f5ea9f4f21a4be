//! Serialization helpers: finite reals as JSON numbers (shortest round-trip),
//! infinities as the strings `"+inf"` / `"-inf"`.

use serde::Serializer;

use crate::gridfn::format_real;

pub fn real<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&format_real(*v))
    }
}

pub fn real_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => real(x, s),
        None => s.serialize_none(),
    }
}
