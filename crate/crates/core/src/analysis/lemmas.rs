//! Pathwise checks of the two deterministic implications behind the scale
//! recursion, evaluated on a sampled window.

use serde::Serialize;

use crate::error::{PercError, Result};
use crate::graph::{separated_net, GraphModel, Vertex};
use crate::perc::Evaluator;
use crate::sampler::Configuration;

/// Outcome of "not G(v, r) and not H(v, r) implies D_v <= 8r" on one window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GhmOutcome {
    pub g: bool,
    pub h: bool,
    pub diameter: u64,
    pub holds: bool,
}

/// The window must contain B(v, L) with L > 10r; H is the window-restricted event.
pub fn ghm_check(ev: &mut Evaluator, config: &Configuration, v: &Vertex, r: u64) -> Result<GhmOutcome> {
    let g = ev.event_g(config, v, r)?;
    let h = ev.event_h_window(config, v, r)?;
    let diameter = ev.cluster(config, v)?.diameter;
    Ok(GhmOutcome { g, h, diameter, holds: g || h || diameter <= 8 * r })
}

/// Greedy r-separated nets of S(v, 10r) and S(v, 80r).
#[derive(Clone, Debug)]
pub struct EscalaNets {
    pub v: Vertex,
    pub r: u64,
    pub inner: Vec<Vertex>,
    pub outer: Vec<Vertex>,
}

impl EscalaNets {
    pub fn new(model: &GraphModel, v: &Vertex, r: u64) -> Result<Self> {
        if r == 0 {
            return Err(PercError::InvalidSpec("nets need r >= 1".into()));
        }
        let inner = separated_net(model, &model.sphere(v, 10 * r)?, r)?;
        let outer = separated_net(model, &model.sphere(v, 80 * r)?, r)?;
        Ok(EscalaNets { v: v.clone(), r, inner, outer })
    }
}

/// Outcome of "G(v, 10r) and not H~(v, r) implies G(u1, r) and G(u2, r) for
/// some u1 in the inner net and u2 in the outer net".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscalaOutcome {
    pub premise: bool,
    pub inner: Option<Vertex>,
    pub outer: Option<Vertex>,
    pub holds: bool,
}

/// Needs a window containing B(v, 100r).
pub fn escala_check(ev: &mut Evaluator, config: &Configuration, nets: &EscalaNets) -> Result<EscalaOutcome> {
    let (v, r) = (&nets.v, nets.r);
    // H~ is the cheaper event and usually decides the premise
    let premise = !ev.event_htilde(config, v, r)? && ev.event_g(config, v, 10 * r)?;
    if !premise {
        return Ok(EscalaOutcome { premise, inner: None, outer: None, holds: true });
    }
    let mut find = |net: &[Vertex]| -> Result<Option<Vertex>> {
        for u in net {
            if ev.event_g(config, u, r)? {
                return Ok(Some(u.clone()));
            }
        }
        Ok(None)
    };
    let inner = find(&nets.inner)?;
    let outer = find(&nets.outer)?;
    let holds = inner.is_some() && outer.is_some();
    Ok(EscalaOutcome { premise, inner, outer, holds })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::laws::RadiusLaw;
    use crate::sampler::{sample_window, ProcessSpec};
    use crate::window::Window;

    #[test]
    fn ghm_on_a_long_chain() {
        let m = GraphModel::z(1);
        let w = Arc::new(Window::new(&m, &m.origin(), 30).unwrap());
        let centers: Vec<(Vertex, u64)> = (0..=20).map(|i| (Vertex::new(&[i]), 1)).collect();
        let c = Configuration::with_centers(w, &centers).unwrap();
        let out = ghm_check(&mut Evaluator::new(), &c, &m.origin(), 1).unwrap();
        assert!(out.g && !out.h && out.diameter == 21 && out.holds);
    }

    #[test]
    fn escala_with_full_occupation() {
        let m = GraphModel::z(1);
        let nets = EscalaNets::new(&m, &m.origin(), 1).unwrap();
        assert_eq!(nets.inner.len(), 2);
        assert_eq!(nets.outer.len(), 2);
        // with R = 0 everywhere H~ fails but nothing is connected, so G(0, 10) fails too
        let spec = ProcessSpec::new(1.0, RadiusLaw::constant(0), 1).unwrap();
        let c = sample_window(&m, &m.origin(), 100, &spec).unwrap();
        let out = escala_check(&mut Evaluator::new(), &c, &nets).unwrap();
        assert!(!out.premise && out.holds);
    }
}
