use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Every constant of the graded construction for a group of order `n` and an
/// identity-component ideal of nilpotency index `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSet {
    pub n: u64,
    pub d: u64,
    /// Highest level.
    #[serde(rename = "N")]
    pub levels: u64,
    /// `W_1, …, W_N`.
    #[serde(rename = "W")]
    pub widths: Vec<u64>,
    #[serde(rename = "H")]
    pub h_levels: u64,
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "S")]
    pub s: u64,
    #[serde(rename = "U")]
    pub u: u64,
    #[serde(rename = "Q")]
    pub q: u64,
    /// Graded Bergman–Isaacs bound `n·d`.
    pub nd: u64,
    #[serde(rename = "nQ")]
    pub nq: u64,
    /// `1 + Π_{i=0}^{n} (C(n,i) + 1)`.
    #[serde(with = "crate::big")]
    pub h: BigUint,
    /// `h^d`.
    #[serde(with = "crate::big")]
    pub h_pow_d: BigUint,
}

/// `1 + Π_{i=0}^{n} (C(n,i) + 1)`.
pub fn bergman_isaacs_h(n: u64) -> BigUint {
    let mut binom = BigUint::from(1u32);
    let mut prod = BigUint::from(1u32);
    for i in 0..=n {
        if i > 0 {
            binom = binom * BigUint::from(n - i + 1) / BigUint::from(i);
        }
        prod *= &binom + 1u32;
    }
    prod + 1u32
}

/// Constants for `n ≥ 1`, `d ≥ 1`, with `Q = (U + d + 1)(S − 1) + 1`.
pub fn bounds_for(n: u64, d: u64) -> BoundSet {
    assert!(n >= 1 && d >= 1, "n and d must be positive");
    let d3 = d * d * d;
    let levels = d * d + 3;
    let base = 2 * d3 * (n - 1) + 1;
    let widths = (1..=levels).map(|s| base + s).collect();
    let h_levels = d * d + 1;
    let t = d * (h_levels - 1) + 1;
    let s = (t - 1) * (n - 1) + 1;
    let u = d * (n - 1);
    let q = (u + d + 1) * (s - 1) + 1;
    let h = bergman_isaacs_h(n);
    let h_pow_d = h.pow(d as u32);
    BoundSet {
        n,
        d,
        levels,
        widths,
        h_levels,
        t,
        s,
        u,
        q,
        nd: n * d,
        nq: n * q,
        h,
        h_pow_d,
    }
}

impl BoundSet {
    /// `W_s = 2d³(n−1) + 1 + s`, for any `s ≥ 1`.
    pub fn width(&self, s: usize) -> u64 {
        2 * self.d.pow(3) * (self.n - 1) + 1 + s as u64
    }
}
