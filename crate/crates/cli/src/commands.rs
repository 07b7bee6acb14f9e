use std::collections::BTreeMap;
use std::sync::Arc;

use boolperc::analysis::{
    bound_sb1, bound_sb2, cluster_census, coverage_fraction, coverage_series, mc_estimate_sup, p_zero, p_zero_exact,
    prob_h_bracket, recursion_check, sample_centers, scaling_inequality_check, Constants, EventEstimate, EventKind,
    ExactConstants, Provenance, SeriesClass,
};
use boolperc::graph::{assouad_fit, covering_profile, separated_net};
use boolperc::perc::Evaluator;
use boolperc::sampler::replica_seed;
use boolperc::{Configuration, GraphModel, PercError, ProcessSpec, RadiusLaw, Window};
use serde_json::json;

use crate::config::Ctx;
use crate::error::CliError;
use crate::report::Report;
use crate::row;
use crate::svg::Chart;

pub const ESTIMATE_COLUMNS: &[&str] =
    &["event_kind", "model", "p", "law", "r", "replicas", "p_hat", "ci_lo", "ci_hi", "seed"];

fn spec(p: f64, law: &RadiusLaw, seed: u64) -> Result<ProcessSpec, CliError> {
    ProcessSpec::new(p, law.clone(), seed).map_err(|e| CliError::Config(e.to_string()))
}

fn constants(model: &GraphModel, report: &mut Report) -> Result<Constants, CliError> {
    let (c, prov) = Constants::resolve(model)?;
    let how = match prov {
        Provenance::Declared => "declared",
        Provenance::GrowthDegree => "growth degree with C1 fitted on exact balls (not certified)",
        Provenance::Fitted => "covering-profile fit (heuristic)",
    };
    report.note(format!("constants: dim = {}, C1 = {} ({how})", c.dim, c.c1));
    Ok(c)
}

fn estimate_row(model: &GraphModel, e: &EventEstimate) -> Vec<crate::report::Cell> {
    row![
        e.event.kind.label(),
        model.name(),
        e.p,
        e.law.clone(),
        e.event.r,
        e.replicas,
        e.p_hat,
        e.ci95.0,
        e.ci95.1,
        e.seed
    ]
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn graph_info(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let v = ctx.vertex(&model)?;
    let radii: Vec<u64> = ctx.list("r", "1,2,4,8,16")?;
    let mut rep = Report::new("graph-info", &["model", "vertex", "r", "growth", "sphere", "growth_over_r_dim"]);
    let c = constants(&model, &mut rep)?;
    let mut pts = Vec::new();
    for &r in &radii {
        let ball = model.ball(&v, r)?;
        let growth = ball.len() as u64;
        let sphere = ball.sphere_sizes.last().copied().unwrap_or(0);
        let ratio = if r == 0 { f64::NAN } else { growth as f64 / (r as f64).powf(c.dim) };
        rep.push(row![model.name(), v.to_string(), r, growth, sphere, ratio]);
        if r > 0 {
            pts.push((r as f64, growth as f64));
        }
    }
    let logs: Vec<(f64, f64)> = pts.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    if let Some(s) = least_squares_slope(&logs) {
        rep.note(format!("log-log growth exponent over the given radii: {s:.4}"));
        rep.extra = json!({ "growth_exponent": s, "dim": c.dim, "c1": c.c1 });
    }
    let mut chart = Chart::new(&format!("ball growth on {}", model.name()), "r", "|B(v, r)|").log_x().log_y();
    chart.add("growth", pts);
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn net(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let v = ctx.vertex(&model)?;
    let r: u64 = ctx.get("r", "4")?;
    let eps = ctx.eps("1/2")?;
    let mut rep = Report::new("net", &["model", "center", "r", "eps", "sep", "index", "vertex"]);
    let base: Vec<_> = model.ball(&v, r)?.vertices().cloned().collect();
    for e in eps {
        let sep = (e * boolperc::graph::Eps::from_integer(r)).ceil().to_integer().max(1);
        let net = separated_net(&model, &base, sep)?;
        rep.note(format!("eps = {e}: {} points at separation {sep}", net.len()));
        for (i, u) in net.iter().enumerate() {
            rep.push(row![model.name(), v.to_string(), r, e.to_string(), sep, i, u.to_string()]);
        }
    }
    Ok(rep)
}

pub fn assouad(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let v = ctx.vertex(&model)?;
    let radii: Vec<u64> = ctx.list("r", "4,8,16")?;
    let eps = ctx.eps("1/2,1/4")?;
    let samples: usize = ctx.get("centers", "4")?;
    let seed: u64 = ctx.get("seed", "1")?;
    let rows = covering_profile(&model, &v, &radii, &eps, samples, seed)?;
    let mut rep = Report::new("assouad", &["model", "center", "r", "eps", "sep", "net_size", "ball_size"]);
    let mut by_eps: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for row in &rows {
        rep.push(row![
            model.name(),
            row.center.to_string(),
            row.r,
            row.eps.to_string(),
            row.sep,
            row.net_size,
            row.ball_size
        ]);
        by_eps.entry(format!("eps {}", row.eps)).or_default().push((row.r as f64, row.net_size as f64));
    }
    match assouad_fit(&rows) {
        Ok(fit) => {
            let doubling = fit.log2_doubling.map_or("n/a".to_string(), |d| format!("{d:.4}"));
            rep.note(format!(
                "beta_hat = {:.4}, C1_hat = {:.4}, log2 doubling = {doubling} (heuristic)",
                fit.beta_hat, fit.c1_hat
            ));
            rep.extra = serde_json::to_value(fit).unwrap_or_default();
        }
        Err(e) => rep.note(format!("no fit: {e}")),
    }
    let mut chart = Chart::new(&format!("covering profile on {}", model.name()), "r", "net size").log_x();
    for (name, pts) in by_eps {
        chart.add(name, pts);
    }
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn sample(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let v = ctx.vertex(&model)?;
    let p = ctx.p_grid("0.1")?[0];
    let seed: u64 = ctx.get("seed", "1")?;
    let l: u64 = ctx.get("window", "20")?;
    let config = boolperc::sample_window(&model, &v, l, &spec(p, &law, seed)?)?;
    let mut rep = Report::new("sample", &["model", "law", "p", "seed", "window", "vertex", "dist", "radius"]);
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for i in config.occupied_indices() {
        let w = &config.window;
        rep.push(row![
            model.name(),
            law.to_string(),
            p,
            seed,
            l,
            w.vertices[i].to_string(),
            w.dist[i],
            config.radius[i]
        ]);
        *hist.entry(config.radius[i]).or_default() += 1;
    }
    rep.note(format!("{} of {} window vertices occupied", config.occupied_count(), config.window.len()));
    let mut chart = Chart::new("radii of occupied vertices", "radius", "count");
    chart.add("count", hist.iter().map(|(&r, &c)| (r as f64, c as f64)).collect());
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn cluster(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let v = ctx.vertex(&model)?;
    let p = ctx.p_grid("0.1")?[0];
    let seed: u64 = ctx.get("seed", "1")?;
    let l: u64 = ctx.get("window", "50")?;
    let replicas = ctx.positive("replicas", "1")?;
    let window = Arc::new(Window::new(&model, &v, l)?);
    let base = spec(p, &law, seed)?;
    let mut rep = Report::new(
        "cluster",
        &["model", "law", "p", "window", "vertex", "replica", "seed", "size", "diameter", "censored"],
    );
    let mut ev = Evaluator::new();
    let mut sizes = Vec::new();
    for k in 0..replicas {
        let s = base.replica(k);
        let config = Configuration::sample(window.clone(), &s);
        let cl = ev.cluster(&config, &v)?;
        if k == 0 {
            rep.extra = json!({ "members": cl.members.iter().map(|m| m.to_string()).collect::<Vec<_>>() });
        }
        rep.push(row![
            model.name(),
            law.to_string(),
            p,
            l,
            v.to_string(),
            k,
            s.seed,
            cl.members.len(),
            cl.diameter,
            cl.censored
        ]);
        sizes.push((k as f64, cl.members.len() as f64));
    }
    let mut chart = Chart::new("cluster size by replica", "replica", "size");
    chart.add("size", sizes);
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn census(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let v = ctx.vertex(&model)?;
    let p = ctx.p_grid("0.1")?[0];
    let seed: u64 = ctx.get("seed", "1")?;
    let l: u64 = ctx.get("window", "50")?;
    let replicas = ctx.positive("replicas", "1")?;
    let window = Arc::new(Window::new(&model, &v, l)?);
    let base = spec(p, &law, seed)?;
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let (mut components, mut spanning, mut largest) = (0u64, 0u64, 0u64);
    for k in 0..replicas {
        let config = Configuration::sample(window.clone(), &base.replica(k));
        let c = cluster_census(&config)?;
        for (s, n) in c.histogram {
            *hist.entry(s).or_default() += n;
        }
        components += c.components;
        spanning += c.spanning;
        largest = largest.max(c.largest);
    }
    let mut rep = Report::new(
        "census",
        &["model", "law", "p", "window", "replicas", "seed", "size", "count", "components", "spanning"],
    );
    for (&s, &n) in &hist {
        rep.push(row![model.name(), law.to_string(), p, l, replicas, seed, s, n, components, spanning]);
    }
    rep.note(format!("{components} components over {replicas} replicas, largest {largest}, {spanning} spanning"));
    rep.extra = json!({ "components": components, "largest": largest, "spanning": spanning });
    let mut chart = Chart::new("cluster size distribution", "size", "count").log_x().log_y();
    chart.add("count", hist.iter().map(|(&s, &n)| (s as f64, n as f64)).collect());
    rep.chart = Some(chart);
    Ok(rep)
}

/// Estimates of one event kind over the p-grid for every r, r-major.
fn estimate_grid(
    ctx: &Ctx,
    command: &'static str,
    kind: impl Fn(u64, Option<u64>) -> EventKind,
    needs_window: bool,
) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let ps = ctx.p_grid("0.01,0.02,0.05")?;
    let rs: Vec<u64> = ctx.list("r", "1")?;
    if rs.contains(&0) {
        return Err(CliError::Config("radii in --r must be at least 1".into()));
    }
    let replicas = ctx.positive("replicas", "1000")?;
    let seed: u64 = ctx.get("seed", "1")?;
    let window = if needs_window {
        let default = (20 * rs.iter().max().expect("nonempty")).to_string();
        Some(ctx.get::<u64>("window", &default)?)
    } else {
        None
    };
    let centers = if model.is_transitive() || ctx.is_given("vertex") {
        vec![ctx.vertex(&model)?]
    } else {
        let n: usize = ctx.get("centers", "8")?;
        sample_centers(&model, n, seed)
    };
    let mut rep = Report::new(command, ESTIMATE_COLUMNS);
    if centers.len() > 1 {
        rep.note(format!(
            "each row is the max over {} sampled centers: a lower bound on the sup over vertices",
            centers.len()
        ));
    }
    let mut chart = Chart::new(&format!("{command} on {}", model.name()), "p", "p_hat");
    let mut results = Vec::new();
    for &r in &rs {
        if let Some(l) = window {
            if l <= 10 * r {
                return Err(PercError::WindowTooSmall { needed: 10 * r + 1, offset: 0, window: l }.into());
            }
        }
        let mut pts = Vec::new();
        for &p in &ps {
            let est = mc_estimate_sup(&model, &spec(p, &law, seed)?, &kind(r, window), r, &centers, replicas, seed)?;
            rep.push(estimate_row(&model, &est));
            pts.push((p, est.p_hat));
            results.push(serde_json::to_value(&est).unwrap_or_default());
        }
        chart.add(format!("r = {r}"), pts);
    }
    rep.extra = json!(results);
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn event_g(ctx: &Ctx) -> Result<Report, CliError> {
    estimate_grid(ctx, "event-g", |_, _| EventKind::G, false)
}

pub fn event_htilde(ctx: &Ctx) -> Result<Report, CliError> {
    estimate_grid(ctx, "event-htilde", |_, _| EventKind::Htilde, false)
}

pub fn event_h(ctx: &Ctx) -> Result<Report, CliError> {
    estimate_grid(ctx, "event-h", |_, w| EventKind::HWindow { window: w.expect("window") }, true)
}

pub fn sweep(ctx: &Ctx) -> Result<Report, CliError> {
    estimate_grid(ctx, "sweep", |_, _| EventKind::G, false)
}

pub fn bounds(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let ps = ctx.p_grid("0.0001")?;
    let rs: Vec<u64> = ctx.list("r", "1")?;
    let mut rep = Report::new(
        "bounds",
        &["model", "law", "dim", "c1", "c2", "c3", "k", "p0", "p0_exact", "p", "r", "sb1", "sb2"],
    );
    let c = constants(&model, &mut rep)?;
    let (p0, p0_exact) = match p_zero(&c, &law) {
        Ok(p0) => {
            let exact = ExactConstants::from_constants(&c)
                .map(|ec| p_zero_exact(&ec, &law))
                .transpose()?
                .flatten()
                .map(|q| q.to_string())
                .unwrap_or_default();
            (p0, exact)
        }
        Err(PercError::InfiniteMoment { .. }) => {
            rep.note(format!("p0 undefined: E[R^{}] is infinite for {law}", c.dim));
            (f64::NAN, String::new())
        }
        Err(e) => return Err(e.into()),
    };
    if p0.is_finite() {
        if p0_exact.is_empty() {
            rep.note(format!("p0 = {p0}"));
        } else {
            rep.note(format!("p0 = {p0_exact} ({p0})"));
        }
    }
    rep.note(format!("K = {}, C2 = {}, C3 = {}", c.k(), c.c2(), c.c3()));
    let mut chart = Chart::new("first-moment bounds", "p", "SB1").log_x().log_y();
    for &r in &rs {
        let mut pts = Vec::new();
        for &p in &ps {
            let sb1 = bound_sb1(&c, p, r);
            let sb2 = bound_sb2(&c, p, &law, r);
            rep.push(row![
                model.name(),
                law.to_string(),
                c.dim,
                c.c1,
                c.c2(),
                c.c3(),
                c.k(),
                p0,
                p0_exact.clone(),
                p,
                r,
                sb1,
                sb2
            ]);
            pts.push((p, sb1));
        }
        chart.add(format!("r = {r}"), pts);
    }
    rep.extra = json!({ "p0": if p0.is_finite() { json!(p0) } else { json!(null) }, "p0_exact": p0_exact,
        "k": c.k(), "c2": c.c2(), "c3": c.c3() });
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn h_bracket(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let v = ctx.vertex(&model)?;
    let ps = ctx.p_grid("0.1")?;
    let rs: Vec<u64> = ctx.list("r", "1,2,3,4,5")?;
    let l: u64 = ctx.get("window", "200")?;
    let ext: u64 = ctx.get("exact-radius", &(2 * l).to_string())?;
    let mut rep = Report::new("h-bracket", &["model", "law", "p", "r", "window", "exact_radius", "lo", "hi"]);
    let c = constants(&model, &mut rep)?;
    let mut chart = Chart::new("bracket on P(H(v, r))", "r", "probability").log_y();
    for &p in &ps {
        let (mut lo_pts, mut hi_pts) = (Vec::new(), Vec::new());
        for &r in &rs {
            let b = prob_h_bracket(&model, &v, r, p, &law, l, &c, ext)?;
            rep.push(row![model.name(), law.to_string(), p, r, l, b.exact_radius, b.lo, b.hi]);
            lo_pts.push((r as f64, b.lo));
            hi_pts.push((r as f64, b.hi));
        }
        chart.add(format!("lo, p = {p}"), lo_pts);
        chart.add(format!("hi, p = {p}"), hi_pts);
    }
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn recursion(ctx: &Ctx) -> Result<Report, CliError> {
    let f0: Vec<f64> = ctx.list("f0", "0.5")?;
    let default_g: Vec<String> = (0..20).map(|k| (0.5f64.powi(k) / 8.0).to_string()).collect();
    let g: Vec<f64> = ctx.list("g", &default_g.join(","))?;
    let report = recursion_check(&f0, &g)?;
    let mut rep = Report::new("recursion", &["k", "direct", "closed", "bound", "hypotheses_ok", "dominated"]);
    for k in 0..report.direct.len() {
        rep.push(row![
            k,
            report.direct[k],
            report.closed[k],
            report.closed[k].min(0.5),
            report.hypotheses_ok,
            report.dominated
        ]);
    }
    rep.note(format!(
        "hypotheses {}; direct <= min(1/2, closed) {}",
        if report.hypotheses_ok { "hold" } else { "fail" },
        if report.dominated { "certified" } else { "not certified" }
    ));
    let mut chart = Chart::new("scale recursion", "k", "value").log_y();
    chart.add("direct", report.direct.iter().enumerate().map(|(k, &d)| (k as f64, d)).collect());
    chart.add("closed", report.closed.iter().enumerate().map(|(k, &d)| (k as f64, d)).collect());
    rep.extra = serde_json::to_value(&report).unwrap_or_default();
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn scaling_check(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let v = ctx.vertex(&model)?;
    let ps = ctx.p_grid("0.001,0.01")?;
    let rs: Vec<u64> = ctx.list("r", "1")?;
    let replicas = ctx.positive("replicas", "1000")?;
    let seed: u64 = ctx.get("seed", "1")?;
    let mut rep = Report::new(
        "scaling-check",
        &[
            "model",
            "law",
            "p",
            "r",
            "replicas",
            "seed",
            "g_coarse_hi",
            "g_fine_hi",
            "htilde_hi",
            "k",
            "lhs",
            "rhs",
            "holds",
        ],
    );
    let c = constants(&model, &mut rep)?;
    rep.note("one-sided statistical evidence from 95% upper limits, not a proof");
    let mut chart = Chart::new("P(G(v,10r)) against K P(G(v,r))^2 + P(H~(v,r))", "p", "upper limit").log_y();
    let mut results = Vec::new();
    for &r in &rs {
        let (mut l, mut rr) = (Vec::new(), Vec::new());
        for &p in &ps {
            let s = scaling_inequality_check(&model, &c, &v, r, &spec(p, &law, seed)?, replicas, seed)?;
            rep.push(row![
                model.name(),
                law.to_string(),
                p,
                r,
                replicas,
                seed,
                s.g_coarse.ci95.1,
                s.g_fine.ci95.1,
                s.htilde.ci95.1,
                s.k,
                s.lhs,
                s.rhs,
                s.holds
            ]);
            l.push((p, s.lhs));
            rr.push((p, s.rhs));
            results.push(serde_json::to_value(&s).unwrap_or_default());
        }
        chart.add(format!("lhs, r = {r}"), l);
        chart.add(format!("rhs, r = {r}"), rr);
    }
    rep.extra = json!(results);
    rep.chart = Some(chart);
    Ok(rep)
}

pub fn coverage(ctx: &Ctx) -> Result<Report, CliError> {
    let model = ctx.model()?;
    let law = ctx.law()?;
    let v = ctx.vertex(&model)?;
    let ps = ctx.p_grid("0.05")?;
    let r: u64 = ctx.list::<u64>("r", "0")?[0];
    let windows: Vec<u64> = ctx.list("window", "100,1000")?;
    let replicas = ctx.positive("replicas", "4")?;
    let seed: u64 = ctx.get("seed", "1")?;
    let mut rep = Report::new(
        "coverage",
        &[
            "model",
            "law",
            "p",
            "r",
            "window",
            "replicas",
            "seed",
            "series_partial",
            "classification",
            "coverage_fraction",
            "fraction_min",
            "fraction_max",
        ],
    );
    let c = constants(&model, &mut rep)?;
    let terms = ctx.positive("terms", &windows.iter().max().expect("nonempty").to_string())?;
    let mut chart = Chart::new("covered fraction of the inner half-window", "window radius", "fraction").log_x();
    for &p in &ps {
        let series = coverage_series(&model, &v, r, &law, p, terms, &c);
        let class = match series.classification {
            SeriesClass::Converges => "converges",
            SeriesClass::Diverges => "diverges",
        };
        let mut pts = Vec::new();
        for &l in &windows {
            let window = Arc::new(Window::new(&model, &v, l)?);
            let base = spec(p, &law, seed)?;
            let fracs = (0..replicas)
                .map(|k| {
                    coverage_fraction(&Configuration::sample(window.clone(), &base.with_seed(replica_seed(seed, k))))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            let mean = fracs.iter().sum::<f64>() / fracs.len() as f64;
            let lo = fracs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = fracs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let partial = series.partial[(l.min(terms) as usize).saturating_sub(1)];
            rep.push(row![model.name(), law.to_string(), p, r, l, replicas, seed, partial, class, mean, lo, hi]);
            pts.push((l as f64, mean));
        }
        chart.add(format!("p = {p}"), pts);
    }
    rep.chart = Some(chart);
    Ok(rep)
}
