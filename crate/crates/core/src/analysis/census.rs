use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::Result;
use crate::perc::Evaluator;
use crate::sampler::Configuration;
use crate::window::Scratch;

/// Component statistics of a window graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Census {
    /// component size -> number of components
    pub histogram: BTreeMap<u64, u64>,
    pub components: u64,
    pub largest: u64,
    /// Components containing two shell vertices at distance >= L.
    pub spanning: u64,
}

pub fn cluster_census(config: &Configuration) -> Result<Census> {
    let w = &config.window;
    let mut ev = Evaluator::new();
    let uf = ev.window_components(config)?;
    let n = w.len();
    let mut sizes: FxHashMap<u32, u64> = FxHashMap::default();
    let mut shell: FxHashMap<u32, Vec<usize>> = FxHashMap::default();
    for i in 0..n {
        let root = uf.find(i as u32);
        *sizes.entry(root).or_default() += 1;
        if w.dist[i] == w.radius {
            shell.entry(root).or_default().push(i);
        }
    }
    let mut histogram = BTreeMap::new();
    for &s in sizes.values() {
        *histogram.entry(s).or_insert(0) += 1;
    }
    let mut scratch = Scratch::new();
    let mut spanning = 0;
    let mut roots: Vec<_> = shell.into_iter().filter(|(_, s)| s.len() >= 2).collect();
    roots.sort_unstable_by_key(|(r, _)| *r);
    for (_, members) in roots {
        let mut found = false;
        for &a in &members {
            let dist = w.distances_from(a, 2 * w.radius, &mut scratch)?;
            if members.iter().any(|&b| dist[b] != u64::MAX && dist[b] >= w.radius) {
                found = true;
                break;
            }
        }
        spanning += u64::from(found);
    }
    Ok(Census {
        components: sizes.len() as u64,
        largest: sizes.values().copied().max().unwrap_or(0),
        histogram,
        spanning,
    })
}
