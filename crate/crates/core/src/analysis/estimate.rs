use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{GraphKind, GraphModel, Vertex};
use crate::perc::Evaluator;
use crate::sampler::{mix64, replica_seed, Configuration, ProcessSpec};
use crate::window::Window;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `n` trials.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    assert!(n > 0, "Wilson interval needs at least one trial");
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = ((center - half) / denom).clamp(0.0, p);
    let hi = ((center + half) / denom).clamp(p, 1.0);
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EventKind {
    /// G(v, r), evaluated on the minimal window B(v, 10r).
    G,
    /// H~(v, r), on B(v, 100r).
    Htilde,
    /// H(v, r) truncated to B(v, window).
    HWindow { window: u64 },
    /// D_v > r for the cluster of v in B(v, window).
    DExceeds { window: u64 },
    /// v lies in some occupied ball of B(v, window).
    Covered { window: u64 },
}

impl EventKind {
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::G => "G",
            EventKind::Htilde => "Htilde",
            EventKind::HWindow { .. } => "H_window",
            EventKind::DExceeds { .. } => "D_exceeds",
            EventKind::Covered { .. } => "covered",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventDescriptor {
    pub kind: EventKind,
    pub v: Vertex,
    pub r: u64,
}

impl EventDescriptor {
    pub fn new(kind: EventKind, v: Vertex, r: u64) -> Self {
        EventDescriptor { kind, v, r }
    }

    /// Radius of the window centered at `v` the event is evaluated on.
    pub fn window_radius(&self) -> u64 {
        match self.kind {
            EventKind::G => 10 * self.r,
            EventKind::Htilde => 100 * self.r,
            EventKind::HWindow { window } | EventKind::DExceeds { window } | EventKind::Covered { window } => window,
        }
    }

    /// Evaluates the event on one configuration centered at `v`.
    pub fn evaluate(&self, ev: &mut Evaluator, config: &Configuration) -> Result<bool> {
        match self.kind {
            EventKind::G => ev.event_g(config, &self.v, self.r),
            EventKind::Htilde => ev.event_htilde(config, &self.v, self.r),
            EventKind::HWindow { .. } => ev.event_h_window(config, &self.v, self.r),
            EventKind::DExceeds { .. } => Ok(ev.cluster(config, &self.v)?.diameter > self.r),
            EventKind::Covered { .. } => super::coverage::is_covered(config, &self.v),
        }
    }
}

impl fmt::Display for EventDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.kind.label(), self.v, self.r)
    }
}

/// Monte Carlo estimate of an event probability.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventEstimate {
    pub event: EventDescriptor,
    pub p: f64,
    pub law: String,
    pub successes: u64,
    pub replicas: u64,
    pub p_hat: f64,
    /// Wilson 95% interval.
    pub ci95: (f64, f64),
    pub seed: u64,
}

impl EventEstimate {
    pub fn from_counts(event: EventDescriptor, spec: &ProcessSpec, successes: u64, replicas: u64) -> Self {
        let ci95 = wilson_interval(successes, replicas, Z95);
        EventEstimate {
            event,
            p: spec.p,
            law: spec.law.to_string(),
            successes,
            replicas,
            p_hat: successes as f64 / replicas as f64,
            ci95,
            seed: spec.seed,
        }
    }

    /// Binomial standard error at the point estimate.
    pub fn std_error(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.replicas as f64).sqrt()
    }
}

/// Counts replicas `k in 0..replicas` for which `f` holds on the configuration
/// seeded by `replica_seed(base_seed, k)`. Deterministic regardless of thread count.
pub fn count_replicas<F>(window: &Arc<Window>, spec: &ProcessSpec, replicas: u64, f: F) -> Result<u64>
where
    F: Fn(&mut Evaluator, &Configuration) -> Result<bool> + Sync,
{
    let run = |ev: &mut Evaluator, k: u64| -> Result<u64> {
        let config = Configuration::sample(window.clone(), &spec.with_seed(replica_seed(spec.seed, k)));
        Ok(u64::from(f(ev, &config)?))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..replicas).into_par_iter().map_init(Evaluator::new, |ev, k| run(ev, k)).try_reduce(|| 0, |a, b| Ok(a + b))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut ev = Evaluator::new();
        let mut total = 0;
        for k in 0..replicas {
            total += run(&mut ev, k)?;
        }
        Ok(total)
    }
}

/// Estimates P(event) from `replicas` independent configurations; `spec.seed`
/// is ignored in favour of `base_seed`.
pub fn mc_estimate(
    model: &GraphModel,
    spec: &ProcessSpec,
    event: &EventDescriptor,
    replicas: u64,
    base_seed: u64,
) -> Result<EventEstimate> {
    assert!(replicas >= 1, "need at least one replica");
    let spec = spec.with_seed(base_seed);
    let window = Arc::new(Window::new(model, &event.v, event.window_radius())?);
    let successes = count_replicas(&window, &spec, replicas, |ev, config| event.evaluate(ev, config))?;
    Ok(EventEstimate::from_counts(event.clone(), &spec, successes, replicas))
}

/// Centers at which to evaluate a sup over vertices: the origin for
/// transitive models, else up to `count` distinct labels drawn by hashing.
pub fn sample_centers(model: &GraphModel, count: usize, seed: u64) -> Vec<Vertex> {
    let GraphKind::Loaded(g) = &model.kind else {
        return vec![model.origin()];
    };
    let n = g.labels.len();
    let want = count.clamp(1, n);
    let mut picked = vec![false; n];
    let mut out = Vec::with_capacity(want);
    let mut k = 0u64;
    while out.len() < want {
        let i = (mix64(seed ^ mix64(k)) % n as u64) as usize;
        k += 1;
        if !picked[i] {
            picked[i] = true;
            out.push(Vertex::new(&[g.labels[i]]));
        }
    }
    out
}

/// The largest estimate over `centers` (a lower bound on the sup over all vertices
/// when the model is not transitive).
pub fn mc_estimate_sup(
    model: &GraphModel,
    spec: &ProcessSpec,
    kind: &EventKind,
    r: u64,
    centers: &[Vertex],
    replicas: u64,
    base_seed: u64,
) -> Result<EventEstimate> {
    let mut best: Option<EventEstimate> = None;
    for v in centers {
        let est = mc_estimate(model, spec, &EventDescriptor::new(kind.clone(), v.clone(), r), replicas, base_seed)?;
        if best.as_ref().is_none_or(|b| est.p_hat > b.p_hat) {
            best = Some(est);
        }
    }
    Ok(best.expect("at least one center"))
}
