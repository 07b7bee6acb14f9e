//! Option resolution: command-line flags, then `PERC_BUDGET` for the budget,
//! then an optional `key = value` file, then per-command defaults.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use boolperc::graph::Eps;
use boolperc::{GraphModel, RadiusLaw, Vertex};

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "model",
    "law",
    "p",
    "r",
    "window",
    "replicas",
    "seed",
    "dim",
    "c1",
    "jobs",
    "eps",
    "budget",
    "vertex",
    "centers",
    "f0",
    "g",
    "exact-radius",
    "terms",
];

pub struct Ctx {
    given: BTreeMap<String, String>,
    used: RefCell<BTreeMap<String, String>>,
}

/// Parses a `key = value` file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", n + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Config(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

impl Ctx {
    /// `flags` holds the values given on the command line.
    pub fn new(flags: BTreeMap<String, String>, file: Option<&Path>) -> Result<Self, CliError> {
        let mut given = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        if let Ok(b) = std::env::var("PERC_BUDGET") {
            given.insert("budget".into(), b);
        }
        given.extend(flags);
        Ok(Ctx { given, used: RefCell::new(BTreeMap::new()) })
    }

    /// The effective value of `key`, recorded for the config echo.
    pub fn raw(&self, key: &str, default: &str) -> String {
        let v = self.given.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.used.borrow_mut().insert(key.to_string(), v.clone());
        v
    }

    pub fn is_given(&self, key: &str) -> bool {
        self.given.contains_key(key)
    }

    pub fn opt_raw(&self, key: &str) -> Option<String> {
        let v = self.given.get(key).cloned()?;
        self.used.borrow_mut().insert(key.to_string(), v.clone());
        Some(v)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: &str) -> Result<T, CliError> {
        parse_value(key, &self.raw(key, default))
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.opt_raw(key).map(|v| parse_value(key, &v)).transpose()
    }

    pub fn list<T: FromStr>(&self, key: &str, default: &str) -> Result<Vec<T>, CliError> {
        let raw = self.raw(key, default);
        let items = raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_value(key, s))
            .collect::<Result<Vec<T>, _>>()?;
        if items.is_empty() {
            return Err(CliError::Config(format!("--{key} needs at least one value")));
        }
        Ok(items)
    }

    pub fn positive(&self, key: &str, default: &str) -> Result<u64, CliError> {
        let v: u64 = self.get(key, default)?;
        if v == 0 {
            return Err(CliError::Config(format!("--{key} must be at least 1")));
        }
        Ok(v)
    }

    pub fn p_grid(&self, default: &str) -> Result<Vec<f64>, CliError> {
        let ps: Vec<f64> = self.list("p", default)?;
        if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(CliError::Config(format!("p must lie in [0,1], got {p}")));
        }
        Ok(ps)
    }

    pub fn model(&self) -> Result<GraphModel, CliError> {
        let spec = self.raw("model", "z:2");
        let model = GraphModel::parse(&spec).map_err(|e| match e {
            boolperc::PercError::Io(io) => CliError::Config(format!("cannot read graph file: {io}")),
            other => CliError::Config(other.to_string()),
        })?;
        let budget: usize = self.get("budget", &boolperc::graph::DEFAULT_BUDGET.to_string())?;
        let dim: Option<f64> = self.opt("dim")?;
        let c1: Option<f64> = self.opt("c1")?;
        if dim.is_some_and(|d| d < 0.0) || c1.is_some_and(|c| c <= 0.0) {
            return Err(CliError::Config("--dim must be >= 0 and --c1 > 0".into()));
        }
        Ok(model.with_budget(budget).with_declared(dim, c1))
    }

    pub fn law(&self) -> Result<RadiusLaw, CliError> {
        RadiusLaw::parse(&self.raw("law", "geom:0.5")).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn vertex(&self, model: &GraphModel) -> Result<Vertex, CliError> {
        let Some(raw) = self.opt_raw("vertex") else {
            self.used.borrow_mut().insert("vertex".into(), model.origin().to_string());
            return Ok(model.origin());
        };
        let v = parse_vertex(&raw)?;
        if !model.contains(&v) {
            return Err(CliError::Config(format!("vertex {raw} is not in {}", model.name())));
        }
        Ok(v)
    }

    pub fn eps(&self, default: &str) -> Result<Vec<Eps>, CliError> {
        let raw: Vec<String> = self.list("eps", default)?;
        raw.iter().map(|s| parse_eps(s)).collect()
    }

    /// The `key=value` pairs that determined this run, sorted by key.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.used.borrow().clone()
    }
}

fn parse_value<T: FromStr>(key: &str, s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::Config(format!("invalid value `{s}` for --{key}")))
}

/// `x:y:...` coordinates, or `e` for the empty word.
pub fn parse_vertex(s: &str) -> Result<Vertex, CliError> {
    if s == "e" {
        return Ok(Vertex::new(&[]));
    }
    let coords = s
        .split(':')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Config(format!("invalid vertex `{s}`")))?;
    Ok(Vertex::new(&coords))
}

/// `a/b` or a decimal in (0, 1].
pub fn parse_eps(s: &str) -> Result<Eps, CliError> {
    let bad = || CliError::Config(format!("invalid eps `{s}`"));
    let e = if let Some((a, b)) = s.split_once('/') {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if b == 0 {
            return Err(bad());
        }
        Eps::new(a, b)
    } else {
        let x: f64 = s.parse().map_err(|_| bad())?;
        Eps::new((x * 1e6).round() as u64, 1_000_000)
    };
    if e == Eps::from_integer(0) || e > Eps::from_integer(1) {
        return Err(bad());
    }
    Ok(e)
}
