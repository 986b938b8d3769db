//! Serde helpers for extended reals: finite values are JSON numbers,
//! `+inf`/`-inf` are strings (JSON has no infinity literal).

use serde::{de, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        s.serialize_f64(*value)
    } else if value.is_nan() {
        Err(serde::ser::Error::custom("NaN is not a valid extended real"))
    } else if *value > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Num(f64),
    Str(String),
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(v),
        Raw::Str(s) if s == "+inf" || s == "inf" => Ok(f64::INFINITY),
        Raw::Str(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        Raw::Str(s) => Err(de::Error::custom(format!("not an extended real: {s}"))),
    }
}

/// Display form used in human-readable tables.
pub fn fmt(value: f64) -> String {
    if value.is_infinite() {
        if value > 0.0 { "+inf".into() } else { "-inf".into() }
    } else {
        format!("{value:.6}")
    }
}
