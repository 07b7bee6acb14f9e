//! Counter-based sampling of the Bernoulli marked point process.
//!
//! Marks are a pure function of `(seed, vertex key, lane)`: lane 0 drives the
//! occupation bit, lane 1 the radius. Sampling a larger window therefore
//! agrees with a smaller one on their intersection, and with a shared seed
//! the occupied set at `p` is contained in the occupied set at any `p' >= p`.

use std::sync::Arc;

use crate::error::{PercError, Result};
use crate::graph::{GraphModel, Vertex};
use crate::laws::RadiusLaw;
use crate::window::Window;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const LANE_OCCUPIED: u64 = 0;
const LANE_RADIUS: u64 = 1;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replica `k` derived from a base seed.
pub fn replica_seed(base: u64, k: u64) -> u64 {
    mix64(base ^ mix64(k.wrapping_mul(GOLDEN) ^ 0x5EED))
}

#[inline]
fn to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Hash of `(seed, v)` from which every lane of `v` is derived.
#[inline]
fn vertex_hash(seed: u64, v: &Vertex) -> u64 {
    let mut h = mix64(seed);
    for w in v.key_words() {
        h = mix64(h ^ w);
    }
    mix64(h ^ v.coords().len() as u64)
}

#[inline]
fn lane_of(h: u64, lane: u64) -> f64 {
    to_unit(mix64(h ^ mix64(lane.wrapping_mul(0xD1B5_4A32_D192_ED03))))
}

/// A uniform in [0, 1) for `(seed, v, lane)`.
pub fn lane_uniform(seed: u64, v: &Vertex, lane: u64) -> f64 {
    lane_of(vertex_hash(seed, v), lane)
}

#[derive(Clone, Debug)]
pub struct ProcessSpec {
    /// Retention parameter, in [0, 1].
    pub p: f64,
    pub law: RadiusLaw,
    pub seed: u64,
}

impl ProcessSpec {
    pub fn new(p: f64, law: RadiusLaw, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(PercError::InvalidSpec(format!("p must lie in [0,1], got {p}")));
        }
        Ok(ProcessSpec { p, law, seed })
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ProcessSpec { seed, ..self.clone() }
    }

    pub fn with_p(&self, p: f64) -> Self {
        ProcessSpec { p, ..self.clone() }
    }

    /// The process of replica `k`.
    pub fn replica(&self, k: u64) -> Self {
        self.with_seed(replica_seed(self.seed, k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Marks {
    pub occupied: bool,
    pub radius: u64,
}

/// The marks of `v` under `spec`.
pub fn marks_at(spec: &ProcessSpec, v: &Vertex) -> Marks {
    let h = vertex_hash(spec.seed, v);
    Marks { occupied: lane_of(h, LANE_OCCUPIED) < spec.p, radius: spec.law.quantile(lane_of(h, LANE_RADIUS)) }
}

/// Marks on every vertex of a window. Radii are only drawn for occupied
/// vertices; unoccupied entries hold 0.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub spec: ProcessSpec,
    pub window: Arc<Window>,
    pub occupied: Vec<bool>,
    pub radius: Vec<u64>,
}

impl Configuration {
    /// Samples marks for every window member.
    pub fn sample(window: Arc<Window>, spec: &ProcessSpec) -> Self {
        let n = window.len();
        let mut occupied = Vec::with_capacity(n);
        let mut radius = Vec::with_capacity(n);
        for v in &window.vertices {
            let h = vertex_hash(spec.seed, v);
            let occ = lane_of(h, LANE_OCCUPIED) < spec.p;
            occupied.push(occ);
            radius.push(if occ { spec.law.quantile(lane_of(h, LANE_RADIUS)) } else { 0 });
        }
        Configuration { spec: spec.clone(), window, occupied, radius }
    }

    /// A configuration with explicitly chosen marks.
    pub fn from_marks(window: Arc<Window>, spec: ProcessSpec, occupied: Vec<bool>, radius: Vec<u64>) -> Self {
        assert_eq!(occupied.len(), window.len());
        assert_eq!(radius.len(), window.len());
        Configuration { spec, window, occupied, radius }
    }

    /// All vertices unoccupied except the listed `(vertex, radius)` centers.
    pub fn with_centers(window: Arc<Window>, centers: &[(Vertex, u64)]) -> Result<Self> {
        let n = window.len();
        let mut occupied = vec![false; n];
        let mut radius = vec![0; n];
        for (v, r) in centers {
            let i = window.index_of(v).ok_or(PercError::OutOfWindow)?;
            occupied[i] = true;
            radius[i] = *r;
        }
        let spec = ProcessSpec { p: f64::NAN, law: RadiusLaw::constant(0), seed: 0 };
        Ok(Configuration { spec, window, occupied, radius })
    }

    pub fn marks(&self, i: usize) -> Marks {
        Marks { occupied: self.occupied[i], radius: self.radius[i] }
    }

    pub fn marks_of(&self, v: &Vertex) -> Option<Marks> {
        self.window.index_of(v).map(|i| self.marks(i))
    }

    /// Largest radius among occupied window vertices (0 when none).
    pub fn r_max(&self) -> u64 {
        self.occupied.iter().zip(&self.radius).filter(|(o, _)| **o).map(|(_, r)| *r).max().unwrap_or(0)
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|o| **o).count()
    }

    pub fn occupied_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.occupied.iter().enumerate().filter(|(_, o)| **o).map(|(i, _)| i)
    }
}

/// Samples the marks on B(o, L).
pub fn sample_window(model: &GraphModel, o: &Vertex, radius: u64, spec: &ProcessSpec) -> Result<Configuration> {
    let window = Arc::new(Window::new(model, o, radius)?);
    Ok(Configuration::sample(window, spec))
}
