//! Coverage of a vertex by the occupied balls, and the series whose
//! divergence makes coverage certain.

use serde::Serialize;

use crate::error::{PercError, Result};
use crate::graph::{GraphModel, Vertex};
use crate::laws::RadiusLaw;
use crate::sampler::Configuration;
use crate::window::Scratch;

use super::bounds::Constants;

/// True iff some occupied window vertex w has d(w, v) <= R_w.
pub fn is_covered(config: &Configuration, v: &Vertex) -> Result<bool> {
    let w = &config.window;
    let i = w.index_of(v).ok_or(PercError::OutOfWindow)?;
    if i == 0 {
        return Ok(config.occupied_indices().any(|j| w.dist[j] <= config.radius[j]));
    }
    let dist = w.distances_from(i, w.dist[i] + w.radius, &mut Scratch::new())?;
    Ok(config.occupied_indices().any(|j| dist[j] <= config.radius[j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeriesClass {
    Converges,
    Diverges,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageSeries {
    /// partial[n] = p sum_{k<=n} s_k P(R > k + r)
    pub partial: Vec<f64>,
    /// Terms up to here use exact sphere sizes; later ones C1 k^dim.
    pub exact_terms: u64,
    /// From E[R^dim] < infinity, not from the partial sums.
    pub classification: SeriesClass,
}

/// Partial sums of p sum_k |S(v, k)| P(R > k + r) for k < `terms`.
pub fn coverage_series(
    model: &GraphModel,
    v: &Vertex,
    r: u64,
    law: &RadiusLaw,
    p: f64,
    terms: u64,
    constants: &Constants,
) -> CoverageSeries {
    let spheres = model.sphere_profile(v, terms.saturating_sub(1));
    let exact_terms = spheres.len() as u64;
    let mut partial = Vec::with_capacity(terms as usize);
    let mut acc = 0.0;
    for k in 0..terms {
        let s = match spheres.get(k as usize) {
            Some(&s) => s as f64,
            None => constants.c1 * (k as f64).powf(constants.dim),
        };
        acc += p * s * law.tail(k + r, true);
        partial.push(acc);
    }
    let classification = if law.moment_finite(constants.dim) { SeriesClass::Converges } else { SeriesClass::Diverges };
    CoverageSeries { partial, exact_terms, classification }
}

/// Fraction of the inner half B(o, L/2) of the window covered by occupied balls.
pub fn coverage_fraction(config: &Configuration) -> Result<f64> {
    let w = &config.window;
    let half = w.radius / 2;
    let inner = w.dist.partition_point(|&d| d <= half);
    let mut covered = vec![false; inner];
    let mut scratch = Scratch::new();
    let mut ball = Vec::new();
    for j in config.occupied_indices() {
        let rj = config.radius[j];
        if w.dist[j] > half && w.dist[j] - half > rj {
            continue;
        }
        if rj >= w.dist[j] + half {
            return Ok(1.0);
        }
        ball.clear();
        w.ball_from(j, rj, &mut scratch, &mut ball)?;
        for &(x, _) in &ball {
            if (x as usize) < inner {
                covered[x as usize] = true;
            }
        }
    }
    Ok(covered.iter().filter(|c| **c).count() as f64 / inner as f64)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::window::Window;

    #[test]
    fn covered_by_single_center() {
        let m = GraphModel::z(1);
        let w = Arc::new(Window::new(&m, &m.origin(), 10).unwrap());
        let c = Configuration::with_centers(w, &[(Vertex::new(&[4]), 4)]).unwrap();
        assert!(is_covered(&c, &Vertex::new(&[0])).unwrap());
        assert!(!is_covered(&c, &Vertex::new(&[-1])).unwrap());
        assert!(is_covered(&c, &Vertex::new(&[8])).unwrap());
        // inner half is [-5, 5]; {0..=5} is covered
        assert!((coverage_fraction(&c).unwrap() - 6.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn series_classes() {
        let m = GraphModel::z(1);
        let c = Constants::new(1.0, 3.0);
        let heavy = coverage_series(&m, &m.origin(), 0, &RadiusLaw::zeta(1.0).unwrap(), 0.1, 10_000, &c);
        assert_eq!(heavy.classification, SeriesClass::Diverges);
        // P(R > k) ~ 1/(zeta(2) k): increments over a decade approach 2 p ln(10) / zeta(2)
        let inc = heavy.partial[9_999] - heavy.partial[999];
        let expect = 2.0 * 0.1 * 10f64.ln() / (std::f64::consts::PI.powi(2) / 6.0);
        assert!((inc - expect).abs() < 0.01 * expect, "{inc} vs {expect}");
        let light = coverage_series(&m, &m.origin(), 0, &RadiusLaw::geometric(0.5).unwrap(), 0.1, 200, &c);
        assert_eq!(light.classification, SeriesClass::Converges);
        // p (P(R>0) + 2 sum_{k>=1} P(R>k)) = 0.1 (1/2 + 2 * 1/2)
        assert!((light.partial[199] - 0.15).abs() < 1e-12);
    }
}
