//! Decimal-string serde for `BigUint`.

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    let s = String::deserialize(d)?;
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("expected a decimal integer"))
}
