//! The random graph on a sampled window, its clusters and the multiscale
//! events G(v,r), H~(v,r) and the window-restricted H(v,r).
//!
//! An occupied vertex y joins every vertex of B(y, R_y) to itself, so the
//! edge set is a union of stars and connectivity reduces to union-find over
//! the stars of the occupied centers. Paths in the model are sequences of
//! distinct vertices; component membership is the same either way.

use serde::Serialize;

use crate::error::{PercError, Result};
use crate::graph::Vertex;
use crate::sampler::Configuration;
use crate::unionfind::UnionFind;
use crate::window::Scratch;

/// Result of a cluster exploration inside a window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterResult {
    pub root: Vertex,
    /// Sorted by key.
    pub members: Vec<Vertex>,
    /// max distance from the root to a member
    pub diameter: u64,
    /// The cluster reached vertices close enough to the window boundary that
    /// an unsampled center could attach; members and diameter are lower bounds.
    pub censored: bool,
}

/// True iff `u` and `w` are joined: one of them is occupied and its ball
/// contains the other.
pub fn edge(config: &Configuration, u: &Vertex, w: &Vertex) -> Result<bool> {
    let iu = config.window.index_of(u).ok_or(PercError::OutOfWindow)?;
    let iw = config.window.index_of(w).ok_or(PercError::OutOfWindow)?;
    if iu == iw {
        return Err(PercError::InvalidSpec("edge needs two distinct vertices".into()));
    }
    let d = config.window.model.distance(u, w)?;
    Ok((config.occupied[iu] && d <= config.radius[iu]) || (config.occupied[iw] && d <= config.radius[iw]))
}

/// Reusable state for event evaluation on one window size.
#[derive(Default, Debug)]
pub struct Evaluator {
    bfs: Scratch,
    buf: Vec<(u32, u64)>,
    region: Vec<(u32, u64)>,
    stamp: Vec<u32>,
    local: Vec<u32>,
    epoch: u32,
    uf: UnionFind,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    fn index(config: &Configuration, v: &Vertex) -> Result<usize> {
        config.window.index_of(v).ok_or(PercError::OutOfWindow)
    }

    /// Fills `self.region` with B(vertices[i], r) and assigns local indices.
    fn load_region(&mut self, config: &Configuration, i: usize, r: u64) -> Result<()> {
        let w = &config.window;
        self.region.clear();
        if i == 0 {
            // members are sorted by distance to the center
            let end = w.dist.partition_point(|&d| d <= r);
            self.region.extend((0..end).map(|j| (j as u32, w.dist[j])));
        } else {
            w.ball_from(i, r, &mut self.bfs, &mut self.region)?;
        }
        let n = w.len();
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.local.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        for (k, &(j, _)) in self.region.iter().enumerate() {
            self.stamp[j as usize] = self.epoch;
            self.local[j as usize] = k as u32;
        }
        Ok(())
    }

    #[inline]
    fn local_of(&self, j: u32) -> Option<u32> {
        (self.stamp[j as usize] == self.epoch).then(|| self.local[j as usize])
    }

    /// Union-find over the induced subgraph on the loaded region. `reach`
    /// bounds how far any region member can be from a region center.
    fn union_stars(&mut self, config: &Configuration, reach: u64) -> Result<()> {
        self.uf.reset(self.region.len());
        for k in 0..self.region.len() {
            let (y, dy) = self.region[k];
            let y = y as usize;
            if !config.occupied[y] || config.radius[y] == 0 {
                continue;
            }
            let cap = config.radius[y].min(dy + reach);
            self.buf.clear();
            config.window.ball_from(y, cap, &mut self.bfs, &mut self.buf)?;
            for idx in 0..self.buf.len() {
                let x = self.buf[idx].0;
                if let Some(lx) = self.local_of(x) {
                    self.uf.union(k as u32, lx);
                }
            }
        }
        Ok(())
    }

    /// G(v, r): the component of v in the graph induced on B(v, 10r) leaves B(v, 8r).
    pub fn event_g(&mut self, config: &Configuration, v: &Vertex, r: u64) -> Result<bool> {
        if r == 0 {
            return Err(PercError::InvalidSpec("G(v,r) needs r >= 1".into()));
        }
        let i = Self::index(config, v)?;
        self.event_g_at(config, i, r)
    }

    pub(crate) fn event_g_at(&mut self, config: &Configuration, i: usize, r: u64) -> Result<bool> {
        config.window.require_ball(i, 10 * r)?;
        self.load_region(config, i, 10 * r)?;
        self.union_stars(config, 10 * r)?;
        let root_local = self.local_of(i as u32).expect("center is in its own ball");
        let root = self.uf.find(root_local);
        for k in 0..self.region.len() {
            if self.region[k].1 > 8 * r && self.uf.find(k as u32) == root {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// H~(v, r): some occupied w in B(v, 100r) has R_w >= r.
    pub fn event_htilde(&mut self, config: &Configuration, v: &Vertex, r: u64) -> Result<bool> {
        let i = Self::index(config, v)?;
        config.window.require_ball(i, 100 * r)?;
        self.load_region(config, i, 100 * r)?;
        Ok(self.region.iter().any(|&(j, _)| config.occupied[j as usize] && config.radius[j as usize] >= r))
    }

    /// H(v, r) restricted to the window: some occupied w with
    /// 10r < d(w, v) <= L has R_w > d(w, v) / 10.
    pub fn event_h_window(&mut self, config: &Configuration, v: &Vertex, r: u64) -> Result<bool> {
        let i = Self::index(config, v)?;
        let w = &config.window;
        if w.radius <= 10 * r + w.dist[i] {
            return Err(PercError::WindowTooSmall { needed: 10 * r + 1, offset: w.dist[i], window: w.radius });
        }
        let span = w.dist[i] + w.radius;
        self.load_region(config, i, span)?;
        Ok(self.region.iter().any(|&(j, d)| {
            let j = j as usize;
            d > 10 * r && d <= w.radius && config.occupied[j] && config.radius[j].saturating_mul(10) > d
        }))
    }

    /// Component labels of the whole window graph.
    pub fn window_components(&mut self, config: &Configuration) -> Result<&mut UnionFind> {
        let span = 2 * config.window.radius;
        self.load_region(config, 0, u64::MAX)?;
        self.union_stars(config, span)?;
        Ok(&mut self.uf)
    }

    /// The cluster of `v` in the window graph.
    pub fn cluster(&mut self, config: &Configuration, v: &Vertex) -> Result<ClusterResult> {
        let i = Self::index(config, v)?;
        let w = &config.window;
        self.window_components(config)?;
        // region was loaded from the center, so local index == window index
        let root = self.uf.find(i as u32);
        let member_idx: Vec<usize> = (0..w.len()).filter(|&j| self.uf.find(j as u32) == root).collect();
        let dist = w.distances_from(i, w.dist[i] + w.radius, &mut self.bfs)?;
        let diameter = member_idx.iter().map(|&j| dist[j]).max().unwrap_or(0);
        let shell_reach = config.r_max().max(1);
        let censored = member_idx.iter().any(|&j| w.depth(j) < shell_reach);
        let mut members: Vec<Vertex> = member_idx.iter().map(|&j| w.vertices[j].clone()).collect();
        members.sort();
        Ok(ClusterResult { root: v.clone(), members, diameter, censored })
    }
}

pub fn event_g(config: &Configuration, v: &Vertex, r: u64) -> Result<bool> {
    Evaluator::new().event_g(config, v, r)
}

pub fn event_htilde(config: &Configuration, v: &Vertex, r: u64) -> Result<bool> {
    Evaluator::new().event_htilde(config, v, r)
}

pub fn event_h_window(config: &Configuration, v: &Vertex, r: u64) -> Result<bool> {
    Evaluator::new().event_h_window(config, v, r)
}

pub fn cluster(config: &Configuration, v: &Vertex) -> Result<ClusterResult> {
    Evaluator::new().cluster(config, v)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::GraphModel;
    use crate::laws::RadiusLaw;
    use crate::sampler::{sample_window, ProcessSpec};
    use crate::window::Window;

    fn z1(c: i64) -> Vertex {
        Vertex::new(&[c])
    }

    fn z1_window(l: u64) -> Arc<Window> {
        let m = GraphModel::z(1);
        Arc::new(Window::new(&m, &m.origin(), l).unwrap())
    }

    #[test]
    fn edge_cases() {
        let w = z1_window(10);
        let c = Configuration::with_centers(w.clone(), &[(z1(0), 2)]).unwrap();
        assert!(edge(&c, &z1(0), &z1(2)).unwrap());
        assert!(edge(&c, &z1(2), &z1(0)).unwrap());
        assert!(!edge(&c, &z1(0), &z1(3)).unwrap());
        assert!(!edge(&c, &z1(4), &z1(5)).unwrap());
        let c = Configuration::with_centers(w.clone(), &[(z1(3), 5)]).unwrap();
        assert!(edge(&c, &z1(0), &z1(3)).unwrap());
        assert!(matches!(edge(&c, &z1(0), &z1(11)), Err(PercError::OutOfWindow)));
    }

    #[test]
    fn empty_configuration_cluster() {
        let m = GraphModel::z(2);
        let spec = ProcessSpec::new(0.0, RadiusLaw::constant(3), 1).unwrap();
        let c = sample_window(&m, &m.origin(), 8, &spec).unwrap();
        let cl = cluster(&c, &m.origin()).unwrap();
        assert_eq!(cl.members, vec![m.origin()]);
        assert_eq!(cl.diameter, 0);
        assert!(!cl.censored);
    }

    #[test]
    fn single_center_cluster() {
        let w = z1_window(10);
        let c = Configuration::with_centers(w, &[(z1(2), 3)]).unwrap();
        let cl = cluster(&c, &z1(0)).unwrap();
        assert_eq!(cl.members, (-1..=5).map(z1).collect::<Vec<_>>());
        assert_eq!(cl.diameter, 5);
        assert!(!cl.censored);
    }

    #[test]
    fn full_occupation_is_censored() {
        let m = GraphModel::z(1);
        let spec = ProcessSpec::new(1.0, RadiusLaw::constant(1), 1).unwrap();
        let c = sample_window(&m, &m.origin(), 10, &spec).unwrap();
        let cl = cluster(&c, &m.origin()).unwrap();
        assert_eq!(cl.members.len(), 21);
        assert!(cl.censored);
    }

    #[test]
    fn g_chain_of_unit_balls() {
        let w = z1_window(10);
        let centers: Vec<(Vertex, u64)> = (0..=8).map(|i| (z1(i), 1)).collect();
        let c = Configuration::with_centers(w.clone(), &centers).unwrap();
        assert!(event_g(&c, &z1(0), 1).unwrap());
        // one center short of the exterior: 0..=7 reaches 8, still inside B(0,8)
        let centers: Vec<(Vertex, u64)> = (0..=7).map(|i| (z1(i), 1)).collect();
        let c = Configuration::with_centers(w, &centers).unwrap();
        assert!(!event_g(&c, &z1(0), 1).unwrap());
    }

    #[test]
    fn g_extremes() {
        let m = GraphModel::z(2);
        let r = 2;
        let spec0 = ProcessSpec::new(0.0, RadiusLaw::constant(1), 3).unwrap();
        let c = sample_window(&m, &m.origin(), 10 * r, &spec0).unwrap();
        assert!(!event_g(&c, &m.origin(), r).unwrap());
        let spec1 = ProcessSpec::new(1.0, RadiusLaw::constant(10 * r), 3).unwrap();
        let c = sample_window(&m, &m.origin(), 10 * r, &spec1).unwrap();
        assert!(event_g(&c, &m.origin(), r).unwrap());
    }

    #[test]
    fn g_needs_window() {
        let w = z1_window(9);
        let c = Configuration::with_centers(w, &[]).unwrap();
        assert!(matches!(event_g(&c, &z1(0), 1), Err(PercError::WindowTooSmall { .. })));
    }

    #[test]
    fn htilde_membership() {
        let w = z1_window(250);
        let c = Configuration::with_centers(w.clone(), &[(z1(150), 5)]).unwrap();
        assert!(event_htilde(&c, &z1(0), 2).unwrap());
        let c = Configuration::with_centers(w.clone(), &[(z1(250), 5)]).unwrap();
        assert!(!event_htilde(&c, &z1(0), 2).unwrap());
        let c = Configuration::with_centers(w, &[(z1(-30), 1)]).unwrap();
        assert!(!event_htilde(&c, &z1(0), 2).unwrap());
    }

    #[test]
    fn h_window_strict_comparison() {
        let w = z1_window(30);
        let c = Configuration::with_centers(w.clone(), &[(z1(20), 3)]).unwrap();
        assert!(event_h_window(&c, &z1(0), 1).unwrap());
        let c = Configuration::with_centers(w.clone(), &[(z1(20), 2)]).unwrap();
        assert!(!event_h_window(&c, &z1(0), 1).unwrap());
        // inside B(v, 10r) does not count
        let c = Configuration::with_centers(w.clone(), &[(z1(10), 9)]).unwrap();
        assert!(!event_h_window(&c, &z1(0), 1).unwrap());
        assert!(matches!(event_h_window(&c, &z1(0), 3), Err(PercError::WindowTooSmall { .. })));
    }

    #[test]
    fn off_center_events_match_recentered_window() {
        let m = GraphModel::z(2);
        let law = RadiusLaw::geometric(0.5).unwrap();
        let v = Vertex::new(&[3, -2]);
        for seed in 0..20 {
            let spec = ProcessSpec::new(0.3, law.clone(), seed).unwrap();
            let big = sample_window(&m, &m.origin(), 25, &spec).unwrap();
            let local = sample_window(&m, &v, 10, &spec).unwrap();
            assert_eq!(event_g(&big, &v, 1).unwrap(), event_g(&local, &v, 1).unwrap());
        }
    }
}
