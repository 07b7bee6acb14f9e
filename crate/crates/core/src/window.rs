//! A sampled region B(o, L) with dense indices and its internal adjacency.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rustc_hash::FxHashMap;

use crate::error::{PercError, Result};
use crate::graph::{GraphModel, Vertex};

#[derive(Clone, Debug)]
pub struct Window {
    pub model: GraphModel,
    pub center: Vertex,
    pub radius: u64,
    /// Members sorted by distance to the center, then key.
    pub vertices: Vec<Vertex>,
    /// Distance of each member to the center.
    pub dist: Vec<u64>,
    pub sphere_sizes: Vec<u64>,
    index: FxHashMap<Vertex, u32>,
    offsets: Vec<u32>,
    edges: Vec<(u32, u64)>,
    /// Distances between members equal distances along window-internal paths.
    local_exact: bool,
    unit: bool,
}

impl Window {
    pub fn new(model: &GraphModel, center: &Vertex, radius: u64) -> Result<Self> {
        let ball = model.ball(center, radius)?;
        let (vertices, dist): (Vec<Vertex>, Vec<u64>) = ball.members.into_iter().unzip();
        let index: FxHashMap<Vertex, u32> = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut edges = Vec::new();
        offsets.push(0);
        for v in &vertices {
            model.for_each_neighbor(v, |w, wt| {
                if let Some(&j) = index.get(&w) {
                    edges.push((j, wt));
                }
            });
            offsets.push(edges.len() as u32);
        }
        let local_exact = model.geodesically_convex_balls() || model.vertex_count() == Some(vertices.len());
        Ok(Window {
            model: model.clone(),
            center: center.clone(),
            radius,
            vertices,
            dist,
            sphere_sizes: ball.sphere_sizes,
            index,
            offsets,
            edges,
            local_exact,
            unit: model.unit_weights(),
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    /// Window-internal neighbours of member `i`.
    pub fn neighbors(&self, i: usize) -> &[(u32, u64)] {
        &self.edges[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Whether the window is the entire (finite) graph.
    pub fn is_whole_graph(&self) -> bool {
        self.model.vertex_count() == Some(self.len())
    }

    /// Ok when B(vertices[i], r) lies inside the window.
    pub fn require_ball(&self, i: usize, r: u64) -> Result<()> {
        if self.is_whole_graph() || self.dist[i] + r <= self.radius {
            return Ok(());
        }
        let ball = self.model.ball(&self.vertices[i], r)?;
        if ball.vertices().all(|v| self.index.contains_key(v)) {
            Ok(())
        } else {
            Err(PercError::WindowTooSmall { needed: r, offset: self.dist[i], window: self.radius })
        }
    }

    /// Distance from member `i` to the window's outer shell (0 on the shell).
    pub fn depth(&self, i: usize) -> u64 {
        self.radius - self.dist[i]
    }

    /// Members within distance `r` of member `i`, with their distances,
    /// appended to `out`. Distances are exact graph distances.
    pub fn ball_from(&self, i: usize, r: u64, scratch: &mut Scratch, out: &mut Vec<(u32, u64)>) -> Result<()> {
        if !self.local_exact {
            let ball = self.model.ball(&self.vertices[i], r)?;
            out.extend(ball.members.iter().filter_map(|(v, d)| self.index.get(v).map(|&j| (j, *d))));
            return Ok(());
        }
        scratch.reset(self.len());
        let start = i as u32;
        scratch.visit(start, 0);
        if self.unit {
            out.push((start, 0));
            scratch.queue.push_back(start);
            while let Some(x) = scratch.queue.pop_front() {
                let d = scratch.dist[x as usize];
                if d == r {
                    continue;
                }
                for &(y, _) in self.neighbors(x as usize) {
                    if !scratch.seen(y) {
                        scratch.visit(y, d + 1);
                        out.push((y, d + 1));
                        scratch.queue.push_back(y);
                    }
                }
            }
        } else {
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0u64, start)));
            while let Some(Reverse((d, x))) = heap.pop() {
                if d > scratch.dist[x as usize] {
                    continue;
                }
                out.push((x, d));
                for &(y, w) in self.neighbors(x as usize) {
                    let nd = d + w;
                    if nd <= r && (!scratch.seen(y) || nd < scratch.dist[y as usize]) {
                        scratch.visit(y, nd);
                        heap.push(Reverse((nd, y)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact distances from member `i` to every member within `r`, as a dense
    /// vector with `u64::MAX` for members farther away.
    pub fn distances_from(&self, i: usize, r: u64, scratch: &mut Scratch) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        self.ball_from(i, r, scratch, &mut out)?;
        let mut dist = vec![u64::MAX; self.len()];
        for (j, d) in out {
            dist[j as usize] = d;
        }
        Ok(dist)
    }
}

/// Reusable buffers for window-local searches.
#[derive(Default, Debug)]
pub struct Scratch {
    stamp: Vec<u32>,
    epoch: u32,
    dist: Vec<u64>,
    queue: VecDeque<u32>,
}

impl Scratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.dist.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.queue.clear();
    }

    #[inline]
    fn seen(&self, i: u32) -> bool {
        self.stamp[i as usize] == self.epoch
    }

    #[inline]
    fn visit(&mut self, i: u32, d: u64) {
        self.stamp[i as usize] = self.epoch;
        self.dist[i as usize] = d;
    }
}
