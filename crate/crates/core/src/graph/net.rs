//! Separated nets, covering profiles and Assouad-dimension estimates.
//!
//! Maximum-cardinality separated sets are hard to compute; the nets here are
//! greedy maximal ones, built in key order. They lower-bound the packing
//! number N(B, eps) and still cover: every base point is within `sep - 1`
//! of some net point.

use num_rational::Ratio;
use rustc_hash::FxHashSet;
use serde::Serialize;

use super::{GraphModel, Vertex};
use crate::error::{PercError, Result};
use crate::sampler::mix64;

pub type Eps = Ratio<u64>;

/// Greedy maximal `sep`-separated subset of `base`, in key order.
pub fn separated_net(model: &GraphModel, base: &[Vertex], sep: u64) -> Result<Vec<Vertex>> {
    assert!(sep >= 1, "separation must be at least 1");
    let mut candidates: Vec<&Vertex> = base.iter().collect();
    candidates.sort();
    candidates.dedup();
    let mut blocked: FxHashSet<Vertex> = FxHashSet::default();
    let mut net = Vec::new();
    for v in candidates {
        if blocked.contains(v) {
            continue;
        }
        net.push(v.clone());
        if sep > 1 {
            let ball = model.ball(v, sep - 1)?;
            blocked.extend(ball.members.into_iter().map(|(x, _)| x));
        } else {
            blocked.insert(v.clone());
        }
    }
    Ok(net)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverRow {
    pub center: Vertex,
    pub r: u64,
    pub eps: Eps,
    /// ceil(eps * r)
    pub sep: u64,
    /// Size of the greedy net of B(center, r) at separation `sep`.
    pub net_size: u64,
    pub ball_size: u64,
}

/// Greedy packing counts of B(v, r) at separation ceil(eps r) for every pair
/// of radius and scale. Non-transitive models are sampled at `samples`
/// centers drawn from B(v, max r).
pub fn covering_profile(
    model: &GraphModel,
    v: &Vertex,
    radii: &[u64],
    eps_list: &[Eps],
    samples: usize,
    seed: u64,
) -> Result<Vec<CoverRow>> {
    let centers = if model.is_transitive() || samples <= 1 {
        vec![v.clone()]
    } else {
        let rmax = radii.iter().copied().max().unwrap_or(0);
        let pool = model.ball(v, rmax)?;
        let mut cs = vec![v.clone()];
        for k in 1..samples as u64 {
            let i = (mix64(seed ^ mix64(k)) % pool.len() as u64) as usize;
            cs.push(pool.members[i].0.clone());
        }
        cs
    };
    let mut rows = Vec::new();
    for c in &centers {
        for &r in radii {
            let ball = model.ball(c, r)?;
            let members: Vec<Vertex> = ball.members.iter().map(|(x, _)| x.clone()).collect();
            for &eps in eps_list {
                if eps <= Eps::from_integer(0) || eps > Eps::from_integer(1) {
                    return Err(PercError::InvalidSpec(format!("eps must lie in (0, 1], got {eps}")));
                }
                let sep = (eps * Eps::from_integer(r)).ceil().to_integer();
                if sep < 1 {
                    return Err(PercError::InvalidSpec(format!("eps * r rounds below 1 for r={r}, eps={eps}")));
                }
                let net = separated_net(model, &members, sep)?;
                rows.push(CoverRow {
                    center: c.clone(),
                    r,
                    eps,
                    sep,
                    net_size: net.len() as u64,
                    ball_size: members.len() as u64,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssouadFit {
    /// Least-squares slope of log N against log(1/eps).
    pub beta_hat: f64,
    /// Smallest C with |B(v,r)| <= C r^beta_hat over the observed balls.
    pub c1_hat: f64,
    /// log2 of the largest count at eps = 1/2, the `beta = log2 C` bound.
    pub log2_doubling: Option<f64>,
}

/// Regression estimate of the Assouad dimension from a covering profile.
/// These are estimates, not certificates.
pub fn assouad_fit(profile: &[CoverRow]) -> Result<AssouadFit> {
    let one = Eps::from_integer(1);
    let rows: Vec<&CoverRow> = profile.iter().filter(|row| row.eps < one).collect();
    let mut distinct: Vec<Eps> = rows.iter().map(|row| row.eps).collect();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(PercError::DegenerateFit(format!("need at least two distinct eps < 1, got {}", distinct.len())));
    }
    let xs: Vec<f64> = rows.iter().map(|row| (1.0 / ratio_f64(row.eps)).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|row| (row.net_size as f64).ln()).collect();
    let beta_hat = ls_slope(&xs, &ys);
    let c1_hat = profile
        .iter()
        .filter(|row| row.r >= 1)
        .map(|row| row.ball_size as f64 / (row.r as f64).powf(beta_hat))
        .fold(0.0, f64::max);
    let half = Eps::new(1, 2);
    let log2_doubling =
        profile.iter().filter(|row| row.eps == half).map(|row| row.net_size).max().map(|c| (c as f64).log2());
    Ok(AssouadFit { beta_hat, c1_hat, log2_doubling })
}

fn ratio_f64(r: Eps) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Ordinary least-squares slope of y on x.
pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
