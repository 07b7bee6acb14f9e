//! Growth constants, the first-moment bounds on P(G) and P(H~), the
//! subcriticality threshold p0 and the bracket on P(H(v, r)).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{PercError, Result};
use crate::graph::{assouad_fit, covering_profile, Eps, GraphKind, GraphModel, Vertex};
use crate::laws::RadiusLaw;

/// (dim, C1) with |B(v, r)| <= C1 r^dim, and the constants derived from them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub dim: f64,
    pub c1: f64,
}

/// Where a set of constants came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Declared,
    /// Known growth degree with C1 fitted from exact ball sizes.
    GrowthDegree,
    /// Regression on a covering profile; heuristic.
    Fitted,
}

impl Constants {
    pub fn new(dim: f64, c1: f64) -> Self {
        assert!(dim >= 0.0 && c1 > 0.0, "constants must be positive");
        Constants { dim, c1 }
    }

    /// C2 = C1 10^dim
    pub fn c2(&self) -> f64 {
        self.c1 * 10f64.powf(self.dim)
    }

    /// C3 = C1 100^dim
    pub fn c3(&self) -> f64 {
        self.c1 * 100f64.powf(self.dim)
    }

    /// K = C1^2 800^dim
    pub fn k(&self) -> f64 {
        self.c1 * self.c1 * 800f64.powf(self.dim)
    }

    /// Declared constants when given; otherwise the growth degree of the
    /// built-in model with C1 = max_{1<=r<=16} |B(r)| / r^dim; otherwise a
    /// covering-profile fit.
    pub fn resolve(model: &GraphModel) -> Result<(Constants, Provenance)> {
        let v = model.origin();
        let degree = match model.kind {
            GraphKind::ZLattice(d) => Some(f64::from(d)),
            GraphKind::Heisenberg => Some(4.0),
            _ => None,
        };
        let dim = match (model.declared_dim, degree) {
            (Some(d), _) => d,
            (None, Some(d)) => d,
            (None, None) => {
                log::warn!("no declared dimension for {}; using a covering-profile fit (heuristic)", model.name());
                let eps = [Eps::new(1, 2), Eps::new(1, 4)];
                let rows = covering_profile(model, &v, &[4, 8], &eps, 4, 0)?;
                let fit = assouad_fit(&rows)?;
                let c1 = model.declared_c1.unwrap_or(fit.c1_hat);
                return Ok((Constants::new(fit.beta_hat.max(0.0), c1), Provenance::Fitted));
            }
        };
        if let Some(c1) = model.declared_c1 {
            let prov = if model.declared_dim.is_some() { Provenance::Declared } else { Provenance::GrowthDegree };
            return Ok((Constants::new(dim, c1), prov));
        }
        let rmax = if matches!(model.kind, GraphKind::Heisenberg) { 8 } else { 16 };
        let mut c1: f64 = 0.0;
        for r in 1..=rmax {
            c1 = c1.max(model.growth(&v, r)? as f64 / (r as f64).powf(dim));
        }
        let prov = if model.declared_dim.is_some() { Provenance::Declared } else { Provenance::GrowthDegree };
        Ok((Constants::new(dim, c1), prov))
    }
}

/// p C2 r^dim, an upper bound on P(G(v, r)).
pub fn bound_sb1(c: &Constants, p: f64, r: u64) -> f64 {
    p * c.c2() * (r as f64).powf(c.dim)
}

/// p C3 E[R^dim 1{R >= r}], an upper bound on P(H~(v, r)); +inf when the
/// moment diverges.
pub fn bound_sb2(c: &Constants, p: f64, law: &RadiusLaw, r: u64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    p * c.c3() * law.truncated_moment(c.dim, r)
}

/// min(1 / (2 K C2 10^dim), 1 / (4 K C3 E[R^dim])).
pub fn p_zero(c: &Constants, law: &RadiusLaw) -> Result<f64> {
    let moment = law.truncated_moment(c.dim, 0);
    if !moment.is_finite() {
        return Err(PercError::InfiniteMoment { law: law.to_string(), dim: c.dim });
    }
    let first = 1.0 / (2.0 * c.k() * c.c2() * 10f64.powf(c.dim));
    let second = 1.0 / (4.0 * c.k() * c.c3() * moment);
    Ok(first.min(second))
}

/// Exact constants for integer dimension and rational C1.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactConstants {
    pub dim: u32,
    pub c1: BigRational,
}

impl ExactConstants {
    pub fn new(dim: u32, c1: BigRational) -> Self {
        ExactConstants { dim, c1 }
    }

    /// Exact when `c` has an integer dimension; C1 is taken as the exact
    /// binary value of the float.
    pub fn from_constants(c: &Constants) -> Option<Self> {
        if c.dim.fract() != 0.0 || c.dim < 0.0 {
            return None;
        }
        Some(ExactConstants { dim: c.dim as u32, c1: BigRational::from_float(c.c1)? })
    }

    fn pow(base: u64, e: u32) -> BigRational {
        BigRational::from_integer(num_traits::pow(BigInt::from(base), e as usize))
    }

    pub fn c2(&self) -> BigRational {
        &self.c1 * Self::pow(10, self.dim)
    }

    pub fn c3(&self) -> BigRational {
        &self.c1 * Self::pow(100, self.dim)
    }

    pub fn k(&self) -> BigRational {
        &self.c1 * &self.c1 * Self::pow(800, self.dim)
    }
}

/// p0 in exact rational arithmetic; `None` when the law's moment has no exact form.
pub fn p_zero_exact(c: &ExactConstants, law: &RadiusLaw) -> Result<Option<BigRational>> {
    if !law.moment_finite(f64::from(c.dim)) {
        return Err(PercError::InfiniteMoment { law: law.to_string(), dim: f64::from(c.dim) });
    }
    let Some(moment) = law.exact_moment(c.dim) else {
        return Ok(None);
    };
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let first = &one / (two * c.k() * c.c2() * ExactConstants::pow(10, c.dim));
    if moment.is_zero() {
        return Ok(Some(first));
    }
    let second = &one / (four * c.k() * c.c3() * moment);
    Ok(Some(if first < second { first } else { second }))
}

/// Bracket on P(H(v, r)) for the infinite graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HBracket {
    /// Exact probability of the window-truncated event on B(v, L).
    pub lo: f64,
    /// Upper bound: exact sphere sizes out to `exact_radius`, the growth
    /// bound C1 k^dim beyond; capped at 1.
    pub hi: f64,
    pub exact_radius: u64,
}

/// P(R > k / 10) for integer radii.
fn tail_over_tenth(law: &RadiusLaw, k: u64) -> f64 {
    law.tail(k / 10, true)
}

/// Bracket on P(H(v, r)): `lo` is exact on B(v, L); `hi` extends with exact
/// sphere sizes up to `exact_radius` (at least L, budget permitting) and a
/// union bound with |S(v, k)| <= C1 k^dim beyond.
#[allow(clippy::too_many_arguments)]
pub fn prob_h_bracket(
    model: &GraphModel,
    v: &Vertex,
    r: u64,
    p: f64,
    law: &RadiusLaw,
    window: u64,
    constants: &Constants,
    exact_radius: u64,
) -> Result<HBracket> {
    if window <= 10 * r {
        return Err(PercError::WindowTooSmall { needed: 10 * r + 1, offset: 0, window });
    }
    let spheres = model.sphere_profile(v, exact_radius.max(window));
    let reached = spheres.len() as u64 - 1;
    if reached < window {
        return Err(PercError::Budget { limit: model.budget, radius: window });
    }
    let mut log_keep = 0.0;
    let mut lo = 0.0;
    for k in (10 * r + 1)..=reached {
        let q = p * tail_over_tenth(law, k);
        log_keep += spheres[k as usize] as f64 * (-q).ln_1p();
        if k == window {
            lo = -log_keep.exp_m1();
        }
    }
    let inner = -log_keep.exp_m1();
    let tail = growth_tail(constants, p, law, reached);
    Ok(HBracket { lo, hi: (inner + tail).min(1.0), exact_radius: reached })
}

/// sum_{k > from} C1 k^dim p P(R > k/10), or +inf if it diverges.
fn growth_tail(c: &Constants, p: f64, law: &RadiusLaw, from: u64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    match law {
        RadiusLaw::Constant(rc) => {
            // P(R > k/10) = 0 once k >= 10 rc + 10
            let last = 10 * rc + 9;
            ((from + 1)..=last).map(|k| c.c1 * (k as f64).powf(c.dim) * p).sum()
        }
        RadiusLaw::Geometric(q) => {
            let mut sum = 0.0;
            let mut k = from + 1;
            loop {
                let term = c.c1 * (k as f64).powf(c.dim) * p * tail_over_tenth(law, k);
                sum += term;
                // beyond the mode, blocks of ten shrink by at least q ((k+10)/k)^dim
                let ratio = q * ((k as f64 + 10.0) / k as f64).powf(c.dim);
                if k % 10 == 9 && ratio < 0.9 && term * 10.0 / (1.0 - ratio) < 1e-18 * sum.max(1e-300) {
                    // remaining blocks are dominated by a geometric series
                    sum += term * 10.0 * ratio / (1.0 - ratio);
                    break;
                }
                if term == 0.0 && k > from + 10 {
                    break;
                }
                k += 1;
            }
            sum
        }
        RadiusLaw::Zeta(z) => {
            let alpha = z.alpha();
            if alpha <= c.dim + 1.0 {
                return f64::INFINITY;
            }
            // P(R >= m) <= m^-alpha / (alpha Z) and m > k/10, so the tail is
            // dominated by 10^alpha / (alpha Z) * int_from^inf x^(dim - alpha) dx
            let x = (from.max(1)) as f64;
            c.c1 * p * 10f64.powf(alpha) / (alpha * z.normalizer()) * x.powf(c.dim + 1.0 - alpha)
                / (alpha - c.dim - 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn sb1_arithmetic() {
        let c = Constants::new(1.0, 3.0);
        assert!((bound_sb1(&c, 0.01, 2) - 0.6).abs() < 1e-12);
        assert_eq!(bound_sb1(&c, 0.0, 5), 0.0);
        assert_eq!(bound_sb2(&c, 0.0, &RadiusLaw::zeta(1.0).unwrap(), 5), 0.0);
        assert!(bound_sb2(&c, 0.1, &RadiusLaw::zeta(1.0).unwrap(), 3).is_infinite());
    }

    #[test]
    fn p_zero_exact_value() {
        let c = ExactConstants::new(1, BigRational::from_integer(3.into()));
        assert_eq!(c.k(), BigRational::from_integer(7200.into()));
        assert_eq!(c.c2(), BigRational::from_integer(30.into()));
        assert_eq!(c.c3(), BigRational::from_integer(300.into()));
        let p0 = p_zero_exact(&c, &RadiusLaw::constant(1)).unwrap().unwrap();
        assert_eq!(p0, BigRational::new(1.into(), 8_640_000.into()));
        let f = p_zero(&Constants::new(1.0, 3.0), &RadiusLaw::constant(1)).unwrap();
        assert!((f - 1.0 / 8_640_000.0).abs() < 1e-20);
        assert!(p_zero(&Constants::new(1.0, 3.0), &RadiusLaw::zeta(1.0).unwrap()).is_err());
    }

    #[test]
    fn doubling_c1_shrinks_p0_eightfold() {
        let law = RadiusLaw::constant(2);
        let a = ExactConstants::new(2, BigRational::from_integer(5.into()));
        let b = ExactConstants::new(2, BigRational::from_integer(10.into()));
        let pa = p_zero_exact(&a, &law).unwrap().unwrap();
        let pb = p_zero_exact(&b, &law).unwrap().unwrap();
        assert_eq!(pa / pb, BigRational::from_integer(8.into()));
    }

    #[test]
    fn resolved_defaults() {
        let (c, prov) = Constants::resolve(&GraphModel::z(1)).unwrap();
        assert_eq!((c.dim, c.c1, prov), (1.0, 3.0, Provenance::GrowthDegree));
        let (c, _) = Constants::resolve(&GraphModel::z(2)).unwrap();
        assert_eq!(c.c1, 5.0);
        let (c, _) = Constants::resolve(&GraphModel::heisenberg()).unwrap();
        assert_eq!((c.dim, c.c1), (4.0, 5.0));
        let m = GraphModel::z(2).with_declared(Some(2.0), Some(9.0));
        assert_eq!(Constants::resolve(&m).unwrap(), (Constants::new(2.0, 9.0), Provenance::Declared));
    }

    #[test]
    fn bracket_trivial_cases() {
        let m = GraphModel::z(1);
        let c = Constants::new(1.0, 3.0);
        let b = prob_h_bracket(&m, &m.origin(), 1, 0.0, &RadiusLaw::geometric(0.5).unwrap(), 50, &c, 50).unwrap();
        assert_eq!((b.lo, b.hi), (0.0, 0.0));
        // constant radius c <= r: R > k/10 fails for every k > 10r
        let b = prob_h_bracket(&m, &m.origin(), 2, 0.3, &RadiusLaw::constant(2), 30, &c, 30).unwrap();
        assert_eq!((b.lo, b.hi), (0.0, 0.0));
        assert!(prob_h_bracket(&m, &m.origin(), 3, 0.3, &RadiusLaw::constant(2), 30, &c, 30).is_err());
    }

    #[test]
    fn bracket_geometric_oracle() {
        // Z^1, s_k = 2: lo = 1 - prod_{k=11}^{200} (1 - p q^(floor(k/10)+1))^2
        let m = GraphModel::z(1);
        let law = RadiusLaw::geometric(0.5).unwrap();
        let c = Constants::new(1.0, 3.0);
        let b = prob_h_bracket(&m, &m.origin(), 1, 0.1, &law, 200, &c, 400).unwrap();
        let mut keep = 1.0f64;
        for k in 11u32..=200 {
            keep *= (1.0 - 0.1 * 0.5f64.powi((k / 10 + 1) as i32)).powi(2);
        }
        assert!((b.lo - (1.0 - keep)).abs() < 1e-13);
        // remainder: sum_{k>200} 2 p q^(floor(k/10)+1), discounted by 1 - lo
        // where the spheres are still counted exactly
        let rem: f64 = (201u32..2000).map(|k| 2.0 * 0.1 * 0.5f64.powi((k / 10 + 1) as i32)).sum();
        let gap = b.hi - b.lo;
        assert!(gap >= 0.99 * rem * (1.0 - b.lo) && gap <= rem, "{b:?}");
    }

    #[test]
    fn zeta_tail_diverges_for_heavy_laws() {
        let c = Constants::new(1.0, 3.0);
        let m = GraphModel::z(1);
        let b = prob_h_bracket(&m, &m.origin(), 1, 0.1, &RadiusLaw::zeta(1.5).unwrap(), 50, &c, 50).unwrap();
        assert_eq!(b.hi, 1.0);
        let b = prob_h_bracket(&m, &m.origin(), 1, 0.1, &RadiusLaw::zeta(4.0).unwrap(), 50, &c, 50).unwrap();
        assert!(b.hi < 1.0 && b.lo <= b.hi);
        assert!(b.hi.to_f64().is_some());
    }
}
