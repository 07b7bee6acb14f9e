//! Metric graphs: the vertex type, the built-in models and ball expansion
//! under the weighted graph distance.

mod loader;
mod net;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{PercError, Result};

pub use loader::{load_graph, parse_graph, LoadedGraph};
pub use net::{assouad_fit, covering_profile, separated_net, AssouadFit, CoverRow, Eps};

/// Default cap on the number of vertices a single ball expansion may visit.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// A vertex of one of the graph models.
///
/// The coordinates are model specific: `d` integers for Z^d, the upper
/// triangular entries `(x, y, z)` for the Heisenberg group, the reduced word
/// for the regular tree and the file label for loaded graphs. Ordering is
/// lexicographic on the coordinates and agrees with byte order of [`Vertex::key`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(SmallVec<[i64; 3]>);

impl Vertex {
    pub fn new(coords: &[i64]) -> Self {
        Vertex(SmallVec::from_slice(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Order-preserving 64-bit words: coordinates with the sign bit flipped.
    pub fn key_words(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&c| (c as u64) ^ (1 << 63))
    }

    /// Canonical byte encoding, big-endian per coordinate.
    pub fn key(&self) -> Vec<u8> {
        self.key_words().flat_map(u64::to_be_bytes).collect()
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum GraphKind {
    /// Z^d with nearest-neighbour edges.
    ZLattice(u32),
    /// Cayley graph of H3(Z) with generators x, y and their inverses.
    Heisenberg,
    /// The `b`-regular tree, realised as reduced words over `b` involutions.
    RegularTree(u32),
    Loaded(Arc<LoadedGraph>),
}

/// An immutable metric graph.
#[derive(Clone, Debug)]
pub struct GraphModel {
    pub kind: GraphKind,
    /// User-asserted Assouad dimension.
    pub declared_dim: Option<f64>,
    /// User-asserted growth constant in |B(v,r)| <= C1 r^dim.
    pub declared_c1: Option<f64>,
    /// Maximum number of vertices one ball expansion may visit.
    pub budget: usize,
}

impl GraphModel {
    pub fn new(kind: GraphKind) -> Self {
        GraphModel { kind, declared_dim: None, declared_c1: None, budget: DEFAULT_BUDGET }
    }

    pub fn z(d: u32) -> Self {
        assert!(d >= 1, "Z^d needs d >= 1");
        Self::new(GraphKind::ZLattice(d))
    }

    pub fn heisenberg() -> Self {
        Self::new(GraphKind::Heisenberg)
    }

    pub fn tree(b: u32) -> Self {
        assert!(b >= 2, "regular tree needs degree >= 2");
        Self::new(GraphKind::RegularTree(b))
    }

    pub fn loaded(g: LoadedGraph) -> Self {
        Self::new(GraphKind::Loaded(Arc::new(g)))
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_declared(mut self, dim: Option<f64>, c1: Option<f64>) -> Self {
        self.declared_dim = dim;
        self.declared_c1 = c1;
        self
    }

    /// Parses `z:<d>`, `heis`, `tree:<b>` or `file:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let bad = || PercError::InvalidSpec(format!("unrecognised model `{spec}`"));
        match (head, arg) {
            ("z", Some(d)) => {
                let d: u32 = d.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Self::z(d))
            }
            ("heis" | "heisenberg", None) => Ok(Self::heisenberg()),
            ("tree", Some(b)) => {
                let b: u32 = b.parse().map_err(|_| bad())?;
                if b < 2 {
                    return Err(bad());
                }
                Ok(Self::tree(b))
            }
            ("file", Some(path)) => Ok(Self::loaded(load_graph(path)?)),
            _ => Err(bad()),
        }
    }

    /// The model string this was built from (loaded graphs report their source).
    pub fn name(&self) -> String {
        match &self.kind {
            GraphKind::ZLattice(d) => format!("z:{d}"),
            GraphKind::Heisenberg => "heis".to_string(),
            GraphKind::RegularTree(b) => format!("tree:{b}"),
            GraphKind::Loaded(g) => format!("file:{}", g.source),
        }
    }

    /// A distinguished vertex: the origin, the identity or the smallest label.
    pub fn origin(&self) -> Vertex {
        match &self.kind {
            GraphKind::ZLattice(d) => Vertex(SmallVec::from_elem(0, *d as usize)),
            GraphKind::Heisenberg => Vertex::new(&[0, 0, 0]),
            GraphKind::RegularTree(_) => Vertex(SmallVec::new()),
            GraphKind::Loaded(g) => Vertex::new(&[g.labels[0]]),
        }
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        match &self.kind {
            GraphKind::ZLattice(d) => v.0.len() == *d as usize,
            GraphKind::Heisenberg => v.0.len() == 3,
            GraphKind::RegularTree(b) => {
                v.0.iter().all(|&a| a >= 0 && a < *b as i64) && v.0.windows(2).all(|w| w[0] != w[1])
            }
            GraphKind::Loaded(g) => v.0.len() == 1 && g.index.contains_key(&v.0[0]),
        }
    }

    /// Vertex-transitive models have ball sizes independent of the center.
    pub fn is_transitive(&self) -> bool {
        !matches!(self.kind, GraphKind::Loaded(_))
    }

    pub fn unit_weights(&self) -> bool {
        match &self.kind {
            GraphKind::Loaded(g) => g.unit_weights,
            _ => true,
        }
    }

    /// True when every geodesic between two points of a ball stays in the ball,
    /// so distances inside a window can be computed without leaving it.
    pub fn geodesically_convex_balls(&self) -> bool {
        matches!(self.kind, GraphKind::ZLattice(_) | GraphKind::RegularTree(_))
    }

    /// Number of vertices for finite models.
    pub fn vertex_count(&self) -> Option<usize> {
        match &self.kind {
            GraphKind::Loaded(g) => Some(g.labels.len()),
            _ => None,
        }
    }

    /// Calls `f(neighbor, weight)` for each neighbor of `v`.
    pub fn for_each_neighbor(&self, v: &Vertex, mut f: impl FnMut(Vertex, u64)) {
        match &self.kind {
            GraphKind::ZLattice(d) => {
                for i in 0..*d as usize {
                    for delta in [-1i64, 1] {
                        let mut w = v.clone();
                        w.0[i] += delta;
                        f(w, 1);
                    }
                }
            }
            GraphKind::Heisenberg => {
                let (a, b, c) = (v.0[0], v.0[1], v.0[2]);
                // right multiplication by x, x^-1, y, y^-1
                f(Vertex::new(&[a + 1, b, c]), 1);
                f(Vertex::new(&[a - 1, b, c]), 1);
                f(Vertex::new(&[a, b + 1, c + a]), 1);
                f(Vertex::new(&[a, b - 1, c - a]), 1);
            }
            GraphKind::RegularTree(b) => {
                let last = v.0.last().copied();
                if last.is_some() {
                    let mut parent = v.clone();
                    parent.0.pop();
                    f(parent, 1);
                }
                for letter in 0..*b as i64 {
                    if Some(letter) != last {
                        let mut child = v.clone();
                        child.0.push(letter);
                        f(child, 1);
                    }
                }
            }
            GraphKind::Loaded(g) => {
                if let Some(&i) = g.index.get(&v.0[0]) {
                    for &(j, w) in &g.adj[i as usize] {
                        f(Vertex::new(&[g.labels[j as usize]]), w);
                    }
                }
            }
        }
    }

    /// Closed-form distance where the model has one.
    fn closed_form_distance(&self, u: &Vertex, w: &Vertex) -> Option<u64> {
        match &self.kind {
            GraphKind::ZLattice(_) => Some(u.0.iter().zip(&w.0).map(|(a, b)| a.abs_diff(*b)).sum()),
            GraphKind::RegularTree(_) => {
                let common = u.0.iter().zip(&w.0).take_while(|(a, b)| a == b).count();
                Some((u.0.len() + w.0.len() - 2 * common) as u64)
            }
            _ => None,
        }
    }

    /// Exact graph distance.
    pub fn distance(&self, u: &Vertex, w: &Vertex) -> Result<u64> {
        if let Some(d) = self.closed_form_distance(u, w) {
            return Ok(d);
        }
        if u == w {
            return Ok(0);
        }
        let mut dist: FxHashMap<Vertex, u64> = FxHashMap::default();
        let mut heap = BinaryHeap::new();
        dist.insert(u.clone(), 0);
        heap.push(Reverse((0u64, u.clone())));
        while let Some(Reverse((d, x))) = heap.pop() {
            if &x == w {
                return Ok(d);
            }
            if dist.get(&x).is_some_and(|&best| best < d) {
                continue;
            }
            if dist.len() > self.budget {
                return Err(PercError::Budget { limit: self.budget, radius: d });
            }
            self.for_each_neighbor(&x, |y, wt| {
                let nd = d + wt;
                let better = dist.get(&y).is_none_or(|&cur| nd < cur);
                if better {
                    dist.insert(y.clone(), nd);
                    heap.push(Reverse((nd, y)));
                }
            });
        }
        Err(PercError::InvalidSpec(format!("{w} is not reachable from {u}")))
    }

    /// Expands balls around `v` layer by layer. Returns the members with their
    /// distances in visiting order and the largest radius fully expanded.
    /// With `strict` a budget overrun is an error; otherwise the expansion
    /// stops at the last complete layer.
    fn expand(&self, v: &Vertex, r: u64, strict: bool) -> Result<(Vec<(Vertex, u64)>, u64)> {
        if self.unit_weights() {
            self.expand_bfs(v, r, strict)
        } else {
            self.expand_dijkstra(v, r, strict)
        }
    }

    fn expand_bfs(&self, v: &Vertex, r: u64, strict: bool) -> Result<(Vec<(Vertex, u64)>, u64)> {
        let mut seen: FxHashSet<Vertex> = FxHashSet::default();
        seen.insert(v.clone());
        let mut out = vec![(v.clone(), 0)];
        let mut layer_start = 0;
        let mut depth = 0;
        while depth < r {
            let layer_end = out.len();
            if layer_start == layer_end {
                break;
            }
            let mut next = Vec::new();
            let room = self.budget.saturating_sub(layer_end);
            for (x, _) in &out[layer_start..layer_end] {
                self.for_each_neighbor(x, |y, _| {
                    if !seen.contains(&y) {
                        seen.insert(y.clone());
                        next.push((y, depth + 1));
                    }
                });
                if next.len() > room {
                    break;
                }
            }
            if out.len() + next.len() > self.budget {
                if strict {
                    return Err(PercError::Budget { limit: self.budget, radius: r });
                }
                return Ok((out, depth));
            }
            out.extend(next);
            layer_start = layer_end;
            depth += 1;
        }
        Ok((out, r))
    }

    fn expand_dijkstra(&self, v: &Vertex, r: u64, strict: bool) -> Result<(Vec<(Vertex, u64)>, u64)> {
        let mut dist: FxHashMap<Vertex, u64> = FxHashMap::default();
        let mut heap = BinaryHeap::new();
        let mut out: Vec<(Vertex, u64)> = Vec::new();
        dist.insert(v.clone(), 0);
        heap.push(Reverse((0u64, v.clone())));
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > r {
                break;
            }
            if dist.get(&x).is_some_and(|&best| best < d) {
                continue;
            }
            if out.len() >= self.budget {
                if strict {
                    return Err(PercError::Budget { limit: self.budget, radius: r });
                }
                // drop the incomplete layer at distance d
                while out.last().is_some_and(|(_, dl)| *dl == d) {
                    out.pop();
                }
                return Ok((out, d.saturating_sub(1)));
            }
            out.push((x.clone(), d));
            self.for_each_neighbor(&x, |y, wt| {
                let nd = d + wt;
                if nd <= r && dist.get(&y).is_none_or(|&cur| nd < cur) {
                    dist.insert(y.clone(), nd);
                    heap.push(Reverse((nd, y)));
                }
            });
        }
        Ok((out, r))
    }

    /// The closed ball B(v, r) with sphere sizes.
    pub fn ball(&self, v: &Vertex, r: u64) -> Result<BallView> {
        let (mut members, _) = self.expand(v, r, true)?;
        members.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let mut sphere_sizes = vec![0u64; r as usize + 1];
        for (_, d) in &members {
            sphere_sizes[*d as usize] += 1;
        }
        Ok(BallView { center: v.clone(), radius: r, members, sphere_sizes })
    }

    /// |B(v, r)|.
    pub fn growth(&self, v: &Vertex, r: u64) -> Result<u64> {
        if let GraphKind::ZLattice(1) = self.kind {
            return Ok(2 * r + 1);
        }
        Ok(self.expand(v, r, true)?.0.len() as u64)
    }

    /// Sphere sizes |S(v,k)| for k = 0..=K where K <= max_r is the largest
    /// radius whose ball fits in the budget.
    pub fn sphere_profile(&self, v: &Vertex, max_r: u64) -> Vec<u64> {
        if let GraphKind::ZLattice(1) = self.kind {
            let k = max_r.min(self.budget as u64 / 2);
            return (0..=k).map(|i| if i == 0 { 1 } else { 2 }).collect();
        }
        let (members, reached) = match self.expand(v, max_r, false) {
            Ok(x) => x,
            Err(_) => return vec![1],
        };
        let mut sizes = vec![0u64; reached as usize + 1];
        for (_, d) in members {
            if d <= reached {
                sizes[d as usize] += 1;
            }
        }
        sizes
    }

    /// The sphere S(v, r) sorted by key.
    pub fn sphere(&self, v: &Vertex, r: u64) -> Result<Vec<Vertex>> {
        let ball = self.ball(v, r)?;
        let mut s: Vec<Vertex> = ball.members.into_iter().filter(|(_, d)| *d == r).map(|(x, _)| x).collect();
        s.sort();
        Ok(s)
    }
}

/// A closed ball with its members sorted by distance, then key.
#[derive(Clone, Debug)]
pub struct BallView {
    pub center: Vertex,
    pub radius: u64,
    pub members: Vec<(Vertex, u64)>,
    /// `sphere_sizes[k] = |S(center, k)|` for `k = 0..=radius`.
    pub sphere_sizes: Vec<u64>,
}

impl BallView {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.members.iter().map(|(v, _)| v)
    }
}
