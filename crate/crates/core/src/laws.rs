//! Radius distributions on the non-negative integers.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{PercError, Result};

/// Tail values P(R >= k) for Zeta laws are tabulated for k <= this.
const ZETA_TABLE: usize = 1024;

/// Even-index Bernoulli numbers B_2, B_4, ..., B_16.
const BERNOULLI: [f64; 8] =
    [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0];

/// Hurwitz zeta function sum_{j>=0} (a + j)^(-s) for s > 1, a > 0, by
/// Euler-Maclaurin summation shifted so that the remainder starts at >= 20.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    let n = if a < 20.0 { (20.0 - a).ceil() as usize } else { 0 };
    let mut sum = 0.0;
    for j in 0..n {
        sum += (a + j as f64).powf(-s);
    }
    let x = a + n as f64;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) / (2k)!  times  x^(-s-2k+1)
    let mut coeff = s / 2.0; // k = 1: s / 2!
    let mut xpow = x.powf(-s - 1.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        tail += b * coeff * xpow;
        let k = (k + 1) as f64;
        coeff *= (s + 2.0 * k - 1.0) * (s + 2.0 * k) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        xpow /= x * x;
    }
    sum + tail
}

#[derive(Clone, Debug)]
pub struct ZetaLaw {
    alpha: f64,
    /// Z(alpha) = zeta(alpha + 1).
    norm: f64,
    /// tail[k] = P(R >= k) for k = 0..=ZETA_TABLE.
    tail: Arc<[f64]>,
}

impl ZetaLaw {
    fn new(alpha: f64) -> Self {
        let s = alpha + 1.0;
        let norm = hurwitz_zeta(s, 1.0);
        let mut tail = vec![0.0; ZETA_TABLE + 1];
        tail[ZETA_TABLE] = hurwitz_zeta(s, ZETA_TABLE as f64 + 1.0) / norm;
        for k in (0..ZETA_TABLE).rev() {
            tail[k] = tail[k + 1] + (k as f64 + 1.0).powf(-s) / norm;
        }
        tail[0] = 1.0;
        ZetaLaw { alpha, norm, tail: tail.into() }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn normalizer(&self) -> f64 {
        self.norm
    }

    fn tail_ge(&self, k: u64) -> f64 {
        if (k as usize) <= ZETA_TABLE {
            self.tail[k as usize]
        } else {
            hurwitz_zeta(self.alpha + 1.0, k as f64 + 1.0) / self.norm
        }
    }
}

/// The law nu of the radii.
#[derive(Clone, Debug)]
pub enum RadiusLaw {
    /// R = c almost surely.
    Constant(u64),
    /// P(R = k) = (1 - q) q^k, so P(R >= k) = q^k.
    Geometric(f64),
    /// P(R = k) = (k + 1)^(-(alpha + 1)) / zeta(alpha + 1); E[R^s] < inf iff s < alpha.
    Zeta(ZetaLaw),
}

impl RadiusLaw {
    pub fn constant(c: u64) -> Self {
        RadiusLaw::Constant(c)
    }

    pub fn geometric(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(PercError::InvalidSpec(format!("geometric parameter must lie in (0,1), got {q}")));
        }
        Ok(RadiusLaw::Geometric(q))
    }

    pub fn zeta(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(PercError::InvalidSpec(format!("zeta exponent must be positive, got {alpha}")));
        }
        Ok(RadiusLaw::Zeta(ZetaLaw::new(alpha)))
    }

    /// Parses `const:c`, `geom:q` or `zeta:alpha`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || PercError::InvalidSpec(format!("unrecognised law `{spec}`"));
        let (head, arg) = spec.split_once(':').ok_or_else(bad)?;
        match head {
            "const" => Ok(Self::constant(arg.parse().map_err(|_| bad())?)),
            "geom" => Self::geometric(arg.parse().map_err(|_| bad())?),
            "zeta" => Self::zeta(arg.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }

    /// Probability function nu(k).
    pub fn pmf(&self, k: u64) -> f64 {
        match self {
            RadiusLaw::Constant(c) => f64::from(u8::from(k == *c)),
            RadiusLaw::Geometric(q) => (1.0 - q) * q.powf(k as f64),
            RadiusLaw::Zeta(z) => (k as f64 + 1.0).powf(-(z.alpha + 1.0)) / z.norm,
        }
    }

    /// P(R > r) when `strict`, else P(R >= r).
    pub fn tail(&self, r: u64, strict: bool) -> f64 {
        let k = if strict { r.saturating_add(1) } else { r };
        match self {
            RadiusLaw::Constant(c) => f64::from(u8::from(*c >= k)),
            RadiusLaw::Geometric(q) => q.powf(k as f64),
            RadiusLaw::Zeta(z) => z.tail_ge(k),
        }
    }

    /// Smallest k with CDF(k) > u, for u in [0, 1).
    pub fn quantile(&self, u: f64) -> u64 {
        debug_assert!((0.0..1.0).contains(&u));
        // CDF(k) > u  <=>  P(R >= k + 1) < 1 - u
        let t = 1.0 - u;
        match self {
            RadiusLaw::Constant(c) => *c,
            RadiusLaw::Geometric(q) => {
                let mut j = ((t.ln() / q.ln()).floor().max(0.0) as u64).saturating_add(1);
                while j > 1 && q.powf((j - 1) as f64) < t {
                    j -= 1;
                }
                while q.powf(j as f64) >= t {
                    j += 1;
                }
                j - 1
            }
            RadiusLaw::Zeta(z) => {
                let table = &z.tail;
                if table[ZETA_TABLE] < t {
                    // first index j in 1..=TABLE with tail[j] < t
                    let j = table[1..].partition_point(|&x| x >= t) + 1;
                    return (j - 1) as u64;
                }
                let mut lo = ZETA_TABLE as u64; // tail(lo) >= t
                let mut hi = lo * 2;
                while z.tail_ge(hi) >= t {
                    lo = hi;
                    hi = hi.saturating_mul(2);
                    if hi == u64::MAX {
                        return u64::MAX;
                    }
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if z.tail_ge(mid) >= t {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi - 1
            }
        }
    }

    /// E[R^s 1{R >= r}], or +inf when the moment diverges. Uses 0^0 = 1.
    pub fn truncated_moment(&self, s: f64, r: u64) -> f64 {
        match self {
            RadiusLaw::Constant(c) => {
                if *c >= r {
                    pow0(*c, s)
                } else {
                    0.0
                }
            }
            RadiusLaw::Geometric(q) => {
                let lnq = q.ln();
                let ln1q = (1.0 - q).ln();
                let mut sum = 0.0;
                let mut k = r;
                loop {
                    let term = if k == 0 {
                        pow0(0, s) * (1.0 - q)
                    } else {
                        (s * (k as f64).ln() + ln1q + k as f64 * lnq).exp()
                    };
                    sum += term;
                    k += 1;
                    // successive term ratio ((k+1)/k)^s q, decreasing in k
                    let ratio = ((k as f64 + 1.0) / k as f64).powf(s) * q;
                    if ratio < 1.0 {
                        let next = (s * (k as f64).ln() + ln1q + k as f64 * lnq).exp();
                        if next / (1.0 - ratio) <= 1e-17 * sum || next == 0.0 {
                            break;
                        }
                    }
                }
                sum
            }
            RadiusLaw::Zeta(z) => {
                if s >= z.alpha {
                    return f64::INFINITY;
                }
                zeta_truncated_moment(z, s, r)
            }
        }
    }

    /// E[R^s] < inf.
    pub fn moment_finite(&self, s: f64) -> bool {
        match self {
            RadiusLaw::Constant(_) | RadiusLaw::Geometric(_) => true,
            RadiusLaw::Zeta(z) => s < z.alpha,
        }
    }

    /// E[R^dim] as an exact rational, when available (constant laws).
    pub fn exact_moment(&self, dim: u32) -> Option<BigRational> {
        match self {
            RadiusLaw::Constant(c) => {
                let base = BigInt::from(*c);
                let v = if dim == 0 { BigInt::one() } else { num_traits::pow(base, dim as usize) };
                Some(BigRational::from_integer(v))
            }
            _ => None,
        }
    }

    /// An upper bound on sampled radii that is exceeded with probability
    /// below `tail_prob`.
    pub fn effective_max(&self, tail_prob: f64) -> u64 {
        self.quantile((1.0 - tail_prob).clamp(0.0, 1.0 - f64::EPSILON))
    }
}

fn pow0(k: u64, s: f64) -> f64 {
    if k == 0 {
        if s == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (k as f64).powf(s)
    }
}

/// sum_{k>=r} k^s (k+1)^(-(alpha+1)) / Z. Direct terms up to k+1 < m0, then
/// (m-1)^s m^(-alpha-1) = sum_j C(s,j) (-1)^j m^(-(alpha+1-s+j)) summed over
/// m >= m0 with Hurwitz zeta values.
fn zeta_truncated_moment(z: &ZetaLaw, s: f64, r: u64) -> f64 {
    let a1 = z.alpha + 1.0;
    let m0 = (r + 1).max(64);
    let mut sum = 0.0;
    for k in r..m0 - 1 {
        sum += pow0(k, s) * (k as f64 + 1.0).powf(-a1);
    }
    let base = a1 - s;
    let mut binom = 1.0;
    let mut series = 0.0;
    for j in 0..60 {
        let term = binom * hurwitz_zeta(base + j as f64, m0 as f64);
        series += term;
        if term.abs() < 1e-18 * series.abs() && j > 2 {
            break;
        }
        // C(s, j+1) (-1)^(j+1) from C(s, j) (-1)^j
        binom *= -(s - j as f64) / (j as f64 + 1.0);
        if binom == 0.0 {
            break;
        }
    }
    (sum + series) / z.norm
}

impl fmt::Display for RadiusLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusLaw::Constant(c) => write!(f, "const:{c}"),
            RadiusLaw::Geometric(q) => write!(f, "geom:{q}"),
            RadiusLaw::Zeta(z) => write!(f, "zeta:{}", z.alpha),
        }
    }
}

impl PartialEq for RadiusLaw {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (RadiusLaw::Constant(a), RadiusLaw::Constant(b)) => a == b,
            (RadiusLaw::Geometric(a), RadiusLaw::Geometric(b)) => a == b,
            (RadiusLaw::Zeta(a), RadiusLaw::Zeta(b)) => a.alpha == b.alpha,
            _ => false,
        }
    }
}
