//! Acceptance checks, one pass/fail line per criterion.
//!
//! Runs as a plain binary so every line is printed. The bootstrap
//! calibration check takes hours and only runs when `--ignored` or
//! `--include-ignored` is passed.

use std::time::{Duration, Instant};

use hyperlatent::geometry::{
    equilateral_midpoint_distance, exp_map, hyperboloid_distance, lift_to_hyperboloid, lorentz_inner,
    poincare_distance, tangent_project, to_poincare,
};
use hyperlatent::inference::{
    auc, bootstrap_ci, fit_model, information_criteria, lrt_test, relative_squared_error, theorem1_bound,
    ModelGeometry, PipelineConfig,
};
use hyperlatent::init::{canonicalize, theta_to_embedding};
use hyperlatent::model::{distance_matrix, grad_k, grad_z, neg_log_likelihood, probability_matrix};
use hyperlatent::netgen::{
    generate_network, graph_stats, replicate_rng, sample_uniform_disk, transitivity, SimConfig,
};
use hyperlatent::{Curvature, HyperboloidPoint, LatentEmbedding, LinkFunction, Network};
use rand::Rng;

const LINK: LinkFunction = LinkFunction::Logistic;

fn k(v: f64) -> Curvature {
    Curvature::new(v).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

/// Positions and network for replicate `index` of an experiment.
fn simulate(n: usize, kv: f64, experiment: u64, index: u64) -> (LatentEmbedding, Network) {
    let mut rng = replicate_rng(experiment, index);
    let cfg = SimConfig { n, k: kv, seed: rng.random(), ..Default::default() };
    let truth = sample_uniform_disk(&cfg).unwrap();
    let net = generate_network(&truth, LINK, rng.random()).unwrap();
    (truth, net)
}

fn criterion_1() -> Outcome {
    let targets = [(0.0, 0.208, 0.309), (1.0, 0.126, 0.235), (10.0, 0.021, 0.039)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (kv, density_target, trans_target) in targets {
        let reps = 50;
        let (mut density, mut trans) = (0.0, 0.0);
        for r in 0..reps {
            let (_, net) = simulate(500, kv, 1, r);
            density += net.edge_count() as f64 / (500.0 * 499.0 / 2.0);
            trans += transitivity(&net);
        }
        density /= reps as f64;
        trans /= reps as f64;
        pass &= (density - density_target).abs() <= 0.015 && (trans - trans_target).abs() <= 0.03;
        parts.push(format!("K={kv}: density {density:.4} (target {density_target}±0.015), transitivity {trans:.4} (target {trans_target}±0.03)"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_2() -> Outcome {
    let p = LINK.forward(6.0);
    outcome((0.0049..=0.0050).contains(&p), format!("σ(6) = {p:.6}"))
}

fn criterion_3() -> Outcome {
    let sizes = [100usize, 200, 400];
    let cfg = PipelineConfig::default();
    let mut med_p = Vec::new();
    let mut med_theta = Vec::new();
    for &n in &sizes {
        let (mut dp, mut dt) = (Vec::new(), Vec::new());
        for r in 0..10 {
            let (truth, net) = simulate(n, 1.0, 3, (n * 100 + r) as u64);
            let fitted = fit_model(&net, 2, ModelGeometry::Hyperbolic, &cfg, LINK).unwrap();
            let (pe, pt) = (probability_matrix(&fitted.embedding, LINK).unwrap(), probability_matrix(&truth, LINK).unwrap());
            dp.push(relative_squared_error(&pe, &pt).unwrap());
            let (te, tt) = (distance_matrix(&fitted.embedding).unwrap(), distance_matrix(&truth).unwrap());
            dt.push(relative_squared_error(&te, &tt).unwrap());
        }
        med_p.push(median(&dp));
        med_theta.push(median(&dt));
    }
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let pass = decreasing(&med_p) && decreasing(&med_theta) && med_p[2] < 0.5 * med_p[0];
    outcome(
        pass,
        format!("n = {sizes:?}: median ΔP {med_p:.4?}, median ΔΘ {med_theta:.4?}; ΔP(400)/ΔP(100) = {:.3}", med_p[2] / med_p[0]),
    )
}

fn criterion_4() -> Outcome {
    let grid = [1.0, 1.25, 1.5, 1.75, 2.0];
    let reps = 3;
    let mut delta = vec![0.0; grid.len()];
    for r in 0..reps {
        let (truth, net) = simulate(300, 1.5, 4, r);
        let theta = distance_matrix(&truth).unwrap();
        for (slot, &kp) in delta.iter_mut().zip(&grid) {
            let mut cfg = PipelineConfig::default();
            cfg.init.k_candidates = vec![kp];
            cfg.fit.freeze_k = true;
            let fitted = fit_model(&net, 2, ModelGeometry::Hyperbolic, &cfg, LINK).unwrap();
            *slot += relative_squared_error(&distance_matrix(&fitted.embedding).unwrap(), &theta).unwrap() / reps as f64;
        }
    }
    let bound: Vec<f64> = grid.iter().map(|&kp| theorem1_bound(k(1.5), k(kp))).collect();
    let argmin = (0..grid.len()).min_by(|&a, &b| delta[a].total_cmp(&delta[b])).unwrap();
    let left = delta[..=argmin].windows(2).all(|w| w[0] > w[1]);
    let right = delta[argmin..].windows(2).all(|w| w[1] > w[0]);
    let r = pearson(&delta, &bound);
    let pass = grid[argmin] == 1.5 && left && right && r >= 0.9;
    outcome(
        pass,
        format!("K' = {grid:?}: mean ΔΘ over {reps} networks {delta:.5?}, minimum at K' = {}, Pearson r with bound = {r:.3}", grid[argmin]),
    )
}

fn criterion_5() -> Outcome {
    let cfg = PipelineConfig::default();
    let b = 100;

    let mut rejections = 0;
    for r in 0..50 {
        let (_, net) = simulate(100, 0.0, 51, r);
        let report = lrt_test(&net, 2, b, &cfg, LINK, 5100 + r).unwrap();
        rejections += usize::from(report.p_value <= 0.05);
    }
    let type_one = rejections as f64 / 50.0;

    let power_reps = 20;
    let mut rejections = 0;
    for r in 0..power_reps {
        let (_, net) = simulate(400, 0.1, 52, r);
        let report = lrt_test(&net, 2, b, &cfg, LINK, 5200 + r).unwrap();
        rejections += usize::from(report.p_value <= 0.05);
    }
    let power = rejections as f64 / power_reps as f64;

    let mut covered = 0;
    for r in 0..30 {
        let (_, net) = simulate(200, 1.0, 53, r);
        let ci = bootstrap_ci(&net, 2, b, 0.95, &cfg, LINK, 5300 + r).unwrap();
        covered += usize::from(ci.lo <= 1.0 && 1.0 <= ci.hi);
    }
    let coverage = covered as f64 / 30.0;

    outcome(
        type_one <= 0.15 && power >= 0.6 && coverage >= 0.85,
        format!("type-I rate {type_one:.3} (≤ 0.15), power {power:.3} (≥ 0.6), coverage {coverage:.3} (≥ 0.85)"),
    )
}

fn residual(x: &[f64]) -> f64 {
    (lorentz_inner(x, x).unwrap() + 1.0).abs()
}

fn random_point(rng: &mut impl Rng, d: usize, range: f64) -> HyperboloidPoint {
    let mut w: Vec<f64> = (0..d).map(|_| rng.random_range(-range..range)).collect();
    w.push(0.0);
    lift_to_hyperboloid(&w).unwrap()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = replicate_rng(6, 0);
    let mut failures = Vec::new();

    // manifold invariants on geometry outputs near the apex
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let z = random_point(&mut rng, 2, 2.0);
        let g: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let moved = exp_map(&z, &tangent_project(&z, &g).unwrap()).unwrap();
        worst = worst.max(residual(z.coords())).max(residual(moved.coords()));
    }
    let emb = sample_uniform_disk(&SimConfig { n: 200, k: 1.0, seed: 6, ..Default::default() }).unwrap();
    for i in 0..200 {
        worst = worst.max(residual(&emb.row(i)));
    }
    if worst > 1e-9 {
        failures.push(format!("constraint residual {worst:e}"));
    }

    // tangent-direction finite differences of the loss, and of k
    let mut worst_grad = 0.0f64;
    for c in 0..20 {
        let n = 6;
        let kv = rng.random_range(0.3..3.0);
        let points: Vec<HyperboloidPoint> = (0..n).map(|_| random_point(&mut rng, 2, 1.5)).collect();
        let emb = LatentEmbedding::from_points(k(kv), &points).unwrap();
        let net = Network::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.random::<bool>()).collect::<Vec<_>>()).unwrap();
        let g = grad_z(&emb, &net, LINK).unwrap();
        let i = c % n;
        let dir: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v = tangent_project(&points[i], &dir).unwrap();
        let analytic: f64 = (0..3).map(|a| g[(i, a)] * v[a]).sum();
        let h = 1e-5;
        let loss_along = |t: f64| {
            let mut moved = points.clone();
            moved[i] = exp_map(&points[i], &v.iter().map(|x| x * t).collect::<Vec<_>>()).unwrap();
            neg_log_likelihood(&LatentEmbedding::from_points(k(kv), &moved).unwrap(), &net, LINK).unwrap()
        };
        let numeric = (loss_along(h) - loss_along(-h)) / (2.0 * h);
        worst_grad = worst_grad.max((analytic - numeric).abs() / analytic.abs().max(1e-3));
        let gk = grad_k(&emb, &net, LINK).unwrap();
        let hk = 1e-6 * kv;
        let fk = |x: f64| neg_log_likelihood(&emb.with_curvature(k(x)).unwrap(), &net, LINK).unwrap();
        let numeric_k = (fk(kv + hk) - fk(kv - hk)) / (2.0 * hk);
        worst_grad = worst_grad.max((gk - numeric_k).abs() / gk.abs().max(1e-3));
    }
    if worst_grad > 1e-5 {
        failures.push(format!("gradient relative error {worst_grad:e}"));
    }

    // metric agreement
    let mut worst_metric = 0.0f64;
    for _ in 0..1000 {
        let (x, y) = (random_point(&mut rng, 2, 8.0), random_point(&mut rng, 2, 8.0));
        let kv = rng.random_range(0.05..20.0);
        let dh = hyperboloid_distance(&x, &y, k(kv)).unwrap();
        let dp = poincare_distance(&to_poincare(&x), &to_poincare(&y), k(kv)).unwrap();
        worst_metric = worst_metric.max((dh - dp).abs() / dh.max(1.0));
    }
    if worst_metric > 1e-8 {
        failures.push(format!("metric disagreement {worst_metric:e}"));
    }

    // canonicalization and exact-Θ recovery
    let mut worst_canon = 0.0f64;
    let mut worst_recovery = 0.0f64;
    for s in 0..10 {
        let truth = sample_uniform_disk(&SimConfig { n: 50, k: 0.5 + s as f64 * 0.4, seed: s, ..Default::default() }).unwrap();
        let theta = distance_matrix(&truth).unwrap();
        let canon = canonicalize(&truth).unwrap();
        worst_canon = worst_canon.max((distance_matrix(&canon).unwrap() - &theta).amax());
        let rebuilt = theta_to_embedding(&theta, truth.curvature().unwrap(), 2).unwrap();
        worst_recovery = worst_recovery.max((distance_matrix(&rebuilt).unwrap() - &theta).amax());
    }
    if worst_canon > 1e-8 {
        failures.push(format!("canonicalization moved distances by {worst_canon:e}"));
    }
    if worst_recovery > 1e-6 {
        failures.push(format!("Θ recovery error {worst_recovery:e}"));
    }

    // graph statistics against direct enumeration
    for seed in 0..200u64 {
        let mut g = replicate_rng(60, seed);
        let n = g.random_range(3..=8usize);
        let p: f64 = g.random();
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| g.random::<f64>() < p).collect();
        let net = Network::from_edges(n, edges.iter().copied()).unwrap();
        let stats = graph_stats(&net).unwrap();
        let adj = |i: usize, j: usize| net.has_edge(i, j);
        let mut triangles = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    triangles += usize::from(adj(a, b) && adj(b, c) && adj(a, c));
                }
            }
        }
        let triples: usize = net.degrees().iter().map(|d| d * d.saturating_sub(1) / 2).sum();
        let expected = if triples == 0 { 0.0 } else { 3.0 * triangles as f64 / triples as f64 };
        let density = edges.len() as f64 / (n * (n - 1) / 2) as f64;
        if (stats.transitivity - expected).abs() > 1e-12 || (stats.edge_density - density).abs() > 1e-12 {
            failures.push(format!("graph statistics differ on seed {seed}"));
            break;
        }
    }

    // AUC against the pairwise count
    for _ in 0..200 {
        let m = rng.random_range(2..30);
        let scores: Vec<f64> = (0..m).map(|_| f64::from(rng.random_range(0..5u8))).collect();
        let labels: Vec<bool> = (0..m).map(|_| rng.random()).collect();
        let (mut wins, mut pairs) = (0.0, 0.0);
        for a in 0..m {
            for b in 0..m {
                if labels[a] && !labels[b] {
                    pairs += 1.0;
                    wins += if scores[a] > scores[b] { 1.0 } else if scores[a] == scores[b] { 0.5 } else { 0.0 };
                }
            }
        }
        let matches = match auc(&scores, &labels) {
            Ok(a) => (a - wins / pairs).abs() <= 1e-12,
            Err(_) => pairs == 0.0,
        };
        if !matches {
            failures.push("AUC differs from the pairwise count".into());
            break;
        }
    }

    // radial law of the disk sampler
    let (kv, radius, draws) = (1.0f64, 3.0, 100_000);
    let big = sample_uniform_disk(&SimConfig { n: draws, k: kv, radius, seed: 66, ..Default::default() }).unwrap();
    let apex = HyperboloidPoint::apex(2);
    let mut radii: Vec<f64> = (0..draws)
        .map(|i| hyperboloid_distance(&HyperboloidPoint::new(big.row(i)).unwrap(), &apex, k(kv)).unwrap())
        .collect();
    radii.sort_by(f64::total_cmp);
    let cdf = |r: f64| ((kv.sqrt() * r).cosh() - 1.0) / ((kv.sqrt() * radius).cosh() - 1.0);
    let ks = radii.iter().enumerate().fold(0.0f64, |m, (i, &r)| {
        let f = cdf(r);
        m.max((f - i as f64 / draws as f64).abs()).max(((i + 1) as f64 / draws as f64 - f).abs())
    });
    if ks >= 0.01 {
        failures.push(format!("KS statistic {ks}"));
    }

    // equilateral median strictly monotone in the curvature
    let medians: Vec<f64> = (0..=60).map(|i| equilateral_midpoint_distance(k(10f64.powf(-2.0 + i as f64 / 20.0)), 1.0).unwrap()).collect();
    if !medians.windows(2).all(|w| w[1] < w[0]) {
        failures.push("equilateral median not strictly monotone".into());
    }

    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    let detail = if failures.is_empty() {
        format!(
            "residual {worst:.1e}, gradient error {worst_grad:.1e}, metric {worst_metric:.1e}, canonical {worst_canon:.1e}, recovery {worst_recovery:.1e}, KS {ks:.4}, in {:.1}s",
            elapsed.as_secs_f64()
        )
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_7() -> Outcome {
    // only the formula-level information criterion check is reproducible
    let ic = information_criteria(-1.491e5, 1158, 2, ModelGeometry::Hyperbolic).unwrap();
    let m = 1158.0 * 1157.0 / 2.0;
    let expected = 2.0 * 1.491e5 + (1158.0 * 2.0 + 1.0) * f64::ln(m);
    let pass = (ic.bic - expected).abs() < 1e-6 && (ic.bic - 3.293e5).abs() < 1e3;
    outcome(pass, format!("BIC = {:.4e} (3.293e5); real-data results and unknown constants are out of scope", ic.bic))
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let slow = args.iter().any(|a| a == "--ignored" || a == "--include-ignored");
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();

    let criteria: [(&str, fn() -> Outcome, bool); 7] = [
        ("criterion_1_density_transitivity", criterion_1, false),
        ("criterion_2_link_probability_floor", criterion_2, false),
        ("criterion_3_consistency_trend", criterion_3, false),
        ("criterion_4_misspecified_curvature_shape", criterion_4, false),
        ("criterion_5_bootstrap_calibration", criterion_5, true),
        ("criterion_6_property_suites", criterion_6, false),
        ("criterion_7_exclusions", criterion_7, false),
    ];
    let mut failed = 0;
    for (name, check, is_slow) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        if is_slow && !slow {
            println!("SKIP {name}: slow suite, run with --ignored");
            continue;
        }
        let start = Instant::now();
        let result = check();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("{status} {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), result.detail);
        failed += usize::from(!result.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
