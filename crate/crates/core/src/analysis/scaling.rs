use serde::Serialize;

use crate::error::Result;
use crate::graph::{GraphModel, Vertex};
use crate::sampler::ProcessSpec;

use super::bounds::Constants;
use super::estimate::{mc_estimate, EventDescriptor, EventEstimate, EventKind};

/// Empirical check of P(G(v, 10r)) <= K P(G(v, r))^2 + P(H~(v, r)).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub g_coarse: EventEstimate,
    pub g_fine: EventEstimate,
    pub htilde: EventEstimate,
    pub k: f64,
    /// Upper confidence limit of P(G(v, 10r)).
    pub lhs: f64,
    /// K hi(G(v, r))^2 + hi(H~(v, r))
    pub rhs: f64,
    pub holds: bool,
}

/// Estimates the three events on independent seeds derived from `seed` and
/// compares upper confidence limits.
pub fn scaling_inequality_check(
    model: &GraphModel,
    constants: &Constants,
    v: &Vertex,
    r: u64,
    spec: &ProcessSpec,
    replicas: u64,
    seed: u64,
) -> Result<ScalingReport> {
    let g_coarse = mc_estimate(model, spec, &EventDescriptor::new(EventKind::G, v.clone(), 10 * r), replicas, seed)?;
    let g_fine =
        mc_estimate(model, spec, &EventDescriptor::new(EventKind::G, v.clone(), r), replicas, seed.wrapping_add(1))?;
    let htilde = mc_estimate(
        model,
        spec,
        &EventDescriptor::new(EventKind::Htilde, v.clone(), r),
        replicas,
        seed.wrapping_add(2),
    )?;
    let k = constants.k();
    let lhs = g_coarse.ci95.1;
    let rhs = k * g_fine.ci95.1 * g_fine.ci95.1 + htilde.ci95.1;
    Ok(ScalingReport { g_coarse, g_fine, htilde, k, lhs, rhs, holds: lhs <= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::RadiusLaw;

    #[test]
    fn holds_at_zero_density() {
        let m = GraphModel::z(1);
        let spec = ProcessSpec::new(0.0, RadiusLaw::constant(1), 0).unwrap();
        let rep = scaling_inequality_check(&m, &Constants::new(1.0, 3.0), &m.origin(), 1, &spec, 100, 5).unwrap();
        assert_eq!(rep.g_coarse.successes, 0);
        assert!(rep.holds);
        assert_eq!(rep.k, 7200.0);
    }
}
