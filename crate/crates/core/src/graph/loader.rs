use std::path::Path;

use rustc_hash::FxHashMap;

use crate::error::{PercError, Result};

/// A finite weighted graph read from an edge list.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    /// Where the graph came from (a path, or `inline` for parsed text).
    pub source: String,
    /// File labels, sorted ascending; dense index `i` has label `labels[i]`.
    pub labels: Vec<i64>,
    pub index: FxHashMap<i64, u32>,
    pub adj: Vec<Vec<(u32, u64)>>,
    pub unit_weights: bool,
    /// Number of connected components (1 for a valid doubling-graph input).
    pub components: usize,
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut g = parse_graph(&text)?;
    g.source = path.display().to_string();
    Ok(g)
}

/// Parses `u v [w]` lines; `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<LoadedGraph> {
    let mut edges: FxHashMap<(i64, i64), u64> = FxHashMap::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(PercError::Parse { line, msg: format!("expected `u v [w]`, got `{content}`") });
        }
        let int = |s: &str| -> Result<i64> {
            s.parse::<i64>().map_err(|_| PercError::Parse { line, msg: format!("`{s}` is not an integer") })
        };
        let u = int(fields[0])?;
        let v = int(fields[1])?;
        if u < 0 || v < 0 {
            return Err(PercError::Parse { line, msg: "vertex labels must be non-negative".into() });
        }
        if u == v {
            return Err(PercError::Parse { line, msg: format!("self-loop at {u}") });
        }
        let w = match fields.get(2) {
            Some(s) => int(s)?,
            None => 1,
        };
        if w <= 0 {
            return Err(PercError::NonPositiveWeight { line, weight: w });
        }
        let key = (u.min(v), u.max(v));
        let entry = edges.entry(key).or_insert(w as u64);
        *entry = (*entry).min(w as u64);
    }
    if edges.is_empty() {
        return Err(PercError::Parse { line: 0, msg: "graph has no edges".into() });
    }

    let mut labels: Vec<i64> = edges.keys().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    labels.dedup();
    let index: FxHashMap<i64, u32> = labels.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();
    let mut adj = vec![Vec::new(); labels.len()];
    let mut sorted: Vec<_> = edges.into_iter().collect();
    sorted.sort_unstable();
    let mut unit_weights = true;
    for ((a, b), w) in sorted {
        let (ia, ib) = (index[&a], index[&b]);
        adj[ia as usize].push((ib, w));
        adj[ib as usize].push((ia, w));
        unit_weights &= w == 1;
    }

    let components = count_components(&adj);
    if components > 1 {
        log::warn!("loaded graph has {components} connected components; distances across components are undefined");
    }
    Ok(LoadedGraph { source: "inline".into(), labels, index, adj, unit_weights, components })
}

fn count_components(adj: &[Vec<(u32, u64)>]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y as usize);
                }
            }
        }
    }
    count
}
