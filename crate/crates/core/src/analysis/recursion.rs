//! The scale recursion f_{k+1} <= f_k^2 + g_k and its closed-form bound
//! f_n <= 2^-(n+1) + sum_{j<n} 2^-j g_{n-1-j}.
//!
//! The verdict is certified in dyadic arithmetic: squares are rounded
//! upward, so a `true` verdict holds for the exact recursion.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{PercError, Result};

/// Working precision of the upward-rounded iterates, in bits.
const PRECISION: u64 = 256;

/// A nonnegative dyadic rational mant * 2^exp.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigUint,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigUint::zero(), exp: 0 }
    }

    /// 2^e
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigUint::from(1u8), exp: e }
    }

    /// The exact value of a finite nonnegative float.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        Some(Dyadic { mant: BigUint::from(m), exp: e })
    }

    fn align(&self, other: &Self) -> (BigUint, BigUint, i64) {
        let e = self.exp.min(other.exp);
        ((&self.mant) << (self.exp - e) as u64, (&other.mant) << (other.exp - e) as u64, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(other);
        Dyadic { mant: a + b, exp: e }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    /// Smallest dyadic with at most `bits` mantissa bits that is >= self.
    pub fn round_up(&self, bits: u64) -> Self {
        let len = self.mant.bits();
        if len <= bits {
            return self.clone();
        }
        let shift = len - bits;
        let mut mant = &self.mant >> shift;
        if mant.clone() << shift != self.mant {
            mant += 1u8;
        }
        Dyadic { mant, exp: self.exp + shift as i64 }
    }

    /// Nearest float (may round either way).
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits();
        let shift = len.saturating_sub(64);
        let top = (&self.mant >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        top * 2f64.powf((self.exp + shift as i64) as f64)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecursionReport {
    /// direct[0] = max F0, direct[k] = direct[k-1]^2 + G[k-1]
    pub direct: Vec<f64>,
    /// closed[k] = 2^-(k+1) + sum_{j<k} 2^-j G[k-1-j]
    pub closed: Vec<f64>,
    /// max F0 <= 1/2 and max G <= 1/4
    pub hypotheses_ok: bool,
    /// direct[k] <= closed[k] and direct[k] <= 1/2 for every k, certified.
    pub dominated: bool,
}

/// Iterates the recursion from the base-scale values `f0` with the
/// level-k perturbations `g`, and compares against the closed form.
pub fn recursion_check(f0: &[f64], g: &[f64]) -> Result<RecursionReport> {
    let to_dyadic = |x: f64| {
        Dyadic::from_f64(x)
            .ok_or_else(|| PercError::InvalidSpec(format!("recursion inputs must be finite and >= 0, got {x}")))
    };
    if f0.is_empty() {
        return Err(PercError::InvalidSpec("need at least one base-scale value".into()));
    }
    let f0d = f0.iter().map(|&x| to_dyadic(x)).collect::<Result<Vec<_>>>()?;
    let gd = g.iter().map(|&x| to_dyadic(x)).collect::<Result<Vec<_>>>()?;
    let half = Dyadic::pow2(-1);
    let quarter = Dyadic::pow2(-2);
    let start = f0d.iter().max().cloned().expect("nonempty");
    let hypotheses_ok = start <= half && gd.iter().all(|x| *x <= quarter);

    let mut upper = vec![start];
    for k in 1..=gd.len() {
        let prev = &upper[k - 1];
        upper.push(prev.mul(prev).round_up(PRECISION).add(&gd[k - 1]).round_up(PRECISION));
    }
    let mut closed = Vec::with_capacity(upper.len());
    for k in 0..upper.len() {
        let mut c = Dyadic::pow2(-(k as i64) - 1);
        for j in 0..k {
            c = c.add(&gd[k - 1 - j].mul(&Dyadic::pow2(-(j as i64))));
        }
        closed.push(c);
    }
    let dominated = upper.iter().zip(&closed).all(|(u, c)| u <= c && *u <= half);

    // reported values follow the float recursion
    let mut direct = vec![f0.iter().cloned().fold(0.0, f64::max)];
    for k in 1..=g.len() {
        let prev = direct[k - 1];
        direct.push(prev * prev + g[k - 1]);
    }
    Ok(RecursionReport { direct, closed: closed.iter().map(Dyadic::to_f64).collect(), hypotheses_ok, dominated })
}
