//! Estimation error metrics, information criteria, link-prediction AUC and
//! parametric-bootstrap inference on the curvature.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Curvature;
use crate::init::{canonicalize, initialize, initialize_euclidean, InitConfig};
use crate::model::{distance_matrix, log_likelihood, probability_matrix, LatentEmbedding, LinkFunction, Network};
use crate::netgen::{generate_network_with, replicate_rng};
use crate::optim::{fit, fit_euclidean, FitConfig, FitResult};

/// Which latent geometry a model is fitted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelGeometry {
    #[default]
    Hyperbolic,
    Euclidean,
}

/// Settings shared by every full fit: initialization then optimization.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub init: InitConfig,
    pub fit: FitConfig,
}

/// Initializes and fits a model. Hyperbolic results are canonicalized.
pub fn fit_model(
    net: &Network,
    d: usize,
    geometry: ModelGeometry,
    cfg: &PipelineConfig,
    link: LinkFunction,
) -> Result<FitResult> {
    match geometry {
        ModelGeometry::Hyperbolic => {
            let start = initialize(net, d, &cfg.init, &cfg.fit, link)?;
            let mut result = fit(net, d, &start, &cfg.fit, link)?;
            result.embedding = canonicalize(&result.embedding)?;
            Ok(result)
        }
        ModelGeometry::Euclidean => {
            let start = initialize_euclidean(net, d, &cfg.init, &cfg.fit, link)?;
            fit_euclidean(net, d, &start, &cfg.fit, link)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub delta_k: f64,
    pub delta_z: f64,
    pub delta_theta: f64,
    pub delta_p: f64,
}

/// `‖est − truth‖_F² / ‖truth‖_F²`; zero when both vanish.
pub fn relative_squared_error(est: &DMatrix<f64>, truth: &DMatrix<f64>) -> Result<f64> {
    if est.shape() != truth.shape() {
        return Err(Error::Dimension { expected: truth.len(), got: est.len() });
    }
    let num = (est - truth).norm_squared();
    let den = truth.norm_squared();
    Ok(if num == 0.0 { 0.0 } else { num / den })
}

/// Smallest relative error of `est` against `truth` over all column sign flips.
fn sign_flipped_error(est: &DMatrix<f64>, truth: &DMatrix<f64>) -> f64 {
    let cols = truth.ncols();
    let den = truth.norm_squared();
    // per column: squared error as is, and after flipping the sign
    let keep: Vec<f64> = (0..cols).map(|c| (est.column(c) - truth.column(c)).norm_squared()).collect();
    let flip: Vec<f64> = (0..cols).map(|c| (est.column(c) + truth.column(c)).norm_squared()).collect();
    let mut best = f64::INFINITY;
    for pattern in 0u32..(1 << cols) {
        let num: f64 = (0..cols).map(|c| if pattern >> c & 1 == 1 { flip[c] } else { keep[c] }).sum();
        best = best.min(num);
    }
    if best == 0.0 {
        0.0
    } else {
        best / den
    }
}

/// Estimation errors of `est` against `truth`.
///
/// Hyperbolic embeddings are canonicalized before `ΔZ`, which is minimized
/// over the column signs the canonical form leaves open. Both embeddings must
/// share geometry, node count and dimension.
pub fn relative_errors(truth: &LatentEmbedding, est: &LatentEmbedding, link: LinkFunction) -> Result<ErrorReport> {
    if truth.n() != est.n() {
        return Err(Error::Dimension { expected: truth.n(), got: est.n() });
    }
    if truth.dim() != est.dim() {
        return Err(Error::Dimension { expected: truth.dim(), got: est.dim() });
    }
    if truth.is_hyperbolic() != est.is_hyperbolic() {
        return Err(Error::InvalidArgument(format!(
            "cannot compare a {} estimate with a {} truth",
            est.geometry_name(),
            truth.geometry_name()
        )));
    }
    let (delta_k, delta_z) = match (truth.curvature(), est.curvature()) {
        (Some(kt), Some(ke)) => {
            let zt = canonicalize(truth)?;
            let ze = canonicalize(est)?;
            ((ke.get() - kt.get()).abs(), sign_flipped_error(ze.coords(), zt.coords()))
        }
        _ => (0.0, sign_flipped_error(est.coords(), truth.coords())),
    };
    let delta_theta = relative_squared_error(&distance_matrix(est)?, &distance_matrix(truth)?)?;
    let delta_p = relative_squared_error(&probability_matrix(est, link)?, &probability_matrix(truth, link)?)?;
    Ok(ErrorReport { delta_k, delta_z, delta_theta, delta_p })
}

/// Shape of the distance-error lower bound under a misspecified curvature:
/// `(1 − min{√(k′/k), √(k/k′)})²`.
pub fn theorem1_bound(k: Curvature, k_prime: Curvature) -> f64 {
    let r = (k_prime.get() / k.get()).sqrt();
    let m = r.min(1.0 / r);
    (1.0 - m) * (1.0 - m)
}

/// Area under the ROC curve as a rank statistic: the fraction of
/// positive–negative pairs where the positive scores higher, ties counting
/// one half.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Dimension { expected: labels.len(), got: scores.len() });
    }
    if let Some(s) = scores.iter().find(|s| s.is_nan()) {
        return Err(Error::Domain(format!("score {s} is not a number")));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedAuc);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // sum of midranks of the positives (Mann–Whitney U)
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let midrank = (start + end + 1) as f64 / 2.0;
        rank_sum += midrank * order[start..end].iter().filter(|&&i| labels[i]).count() as f64;
        start = end;
    }
    let p = positives as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64))
}

/// Symmetric observation mask hiding `round(fraction · n(n−1)/2)` unordered
/// pairs chosen uniformly at random. `true` marks an observed pair.
pub fn holdout_mask(n: usize, fraction: f64, seed: u64) -> Result<Vec<bool>> {
    if !(0.0..1.0).contains(&fraction) || fraction == 0.0 {
        return Err(Error::InvalidArgument(format!("holdout fraction must lie in (0, 1), got {fraction}")));
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let hidden = (fraction * pairs.len() as f64).round() as usize;
    pairs.shuffle(&mut replicate_rng(seed, 0));
    let mut mask = vec![true; n * n];
    for i in 0..n {
        mask[i * n + i] = false;
    }
    for &(i, j) in &pairs[..hidden] {
        mask[i * n + j] = false;
        mask[j * n + i] = false;
    }
    Ok(mask)
}

/// Fits the model with a random share of pairs hidden and scores the fitted
/// probabilities on the hidden pairs.
pub fn link_prediction_auc(
    net: &Network,
    d: usize,
    geometry: ModelGeometry,
    cfg: &PipelineConfig,
    link: LinkFunction,
    holdout_fraction: f64,
    seed: u64,
) -> Result<f64> {
    let n = net.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("link prediction needs at least 3 nodes, got {n}")));
    }
    let mask = holdout_mask(n, holdout_fraction, seed)?;
    let training = net.without_mask().with_mask(mask.clone())?;
    let fitted = fit_model(&training, d, geometry, cfg, link)?;
    let p = probability_matrix(&fitted.embedding, link)?;
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !mask[i * n + j] {
                scores.push(p[(i, j)]);
                labels.push(net.has_edge(i, j));
            }
        }
    }
    auc(&scores, &labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationCriteria {
    pub bic: f64,
    pub aic: f64,
}

/// BIC and AIC with `n·d` parameters (plus one for the curvature) and
/// `n(n−1)/2` observations.
pub fn information_criteria(loglik: f64, n: usize, d: usize, geometry: ModelGeometry) -> Result<InformationCriteria> {
    if !loglik.is_finite() {
        return Err(Error::Domain(format!("log-likelihood must be finite, got {loglik}")));
    }
    let p = (n * d) as f64
        + match geometry {
            ModelGeometry::Hyperbolic => 1.0,
            ModelGeometry::Euclidean => 0.0,
        };
    let m = (n * n.saturating_sub(1)) as f64 / 2.0;
    Ok(criteria_with(loglik, p, m))
}

fn criteria_with(loglik: f64, params: f64, samples: f64) -> InformationCriteria {
    InformationCriteria { bic: -2.0 * loglik + params * samples.ln(), aic: -2.0 * loglik + 2.0 * params }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrtReport {
    pub statistic: f64,
    pub bootstrap_statistics: Vec<f64>,
    pub p_value: f64,
    /// Replicates that contributed, after excluding diverged fits.
    pub b: usize,
    pub diverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiReport {
    pub k_hat: f64,
    pub bootstrap_estimates: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub diverged: usize,
}

/// Likelihood ratio statistic `2 (ℓ_H − ℓ_E)` floored at zero, with the
/// fitted Euclidean model.
fn lrt_statistic(net: &Network, d: usize, cfg: &PipelineConfig, link: LinkFunction) -> Result<(f64, LatentEmbedding)> {
    let hyp = fit_model(net, d, ModelGeometry::Hyperbolic, cfg, link)?;
    let euc = fit_model(net, d, ModelGeometry::Euclidean, cfg, link)?;
    let l_h = log_likelihood(&hyp.embedding, net, link)?;
    let l_e = log_likelihood(&euc.embedding, net, link)?;
    Ok((2.0 * (l_h - l_e).max(0.0), euc.embedding))
}

/// Runs `job` on bootstrap networks simulated from `emb`, replicate `b`
/// drawing from stream `b` of `seed`. Diverged replicates are counted and
/// dropped; any other error aborts.
fn bootstrap<T: Send>(
    emb: &LatentEmbedding,
    b: usize,
    link: LinkFunction,
    seed: u64,
    job: impl Fn(&Network) -> Result<T> + Sync,
) -> Result<(Vec<T>, usize)> {
    let outcomes: Vec<Result<T>> = (0..b)
        .into_par_iter()
        .map(|idx| {
            let mut rng = replicate_rng(seed, idx as u64);
            let net = generate_network_with(emb, link, &mut rng)?;
            job(&net)
        })
        .collect();
    let mut kept = Vec::with_capacity(b);
    let mut diverged = 0;
    for (idx, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(v) => kept.push(v),
            Err(Error::Divergence { iteration }) => {
                log::warn!("bootstrap replicate {idx} diverged at iteration {iteration}; excluded");
                diverged += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if kept.is_empty() {
        return Err(Error::Divergence { iteration: 0 });
    }
    Ok((kept, diverged))
}

/// Parametric-bootstrap test of `k = 0` (Euclidean) against the hyperbolic
/// model. The null distribution is simulated from the fitted Euclidean
/// positions; the p-value uses the add-one correction.
pub fn lrt_test(
    net: &Network,
    d: usize,
    b: usize,
    cfg: &PipelineConfig,
    link: LinkFunction,
    seed: u64,
) -> Result<LrtReport> {
    if b == 0 {
        return Err(Error::InvalidArgument("bootstrap count must be at least 1".into()));
    }
    let (statistic, euclidean) = lrt_statistic(net, d, cfg, link)?;
    let (stats, diverged) = bootstrap(&euclidean, b, link, seed, |sim| Ok(lrt_statistic(sim, d, cfg, link)?.0))?;
    let exceed = stats.iter().filter(|&&s| s >= statistic).count();
    let p_value = (exceed + 1) as f64 / (stats.len() + 1) as f64;
    Ok(LrtReport { statistic, b: stats.len(), bootstrap_statistics: stats, p_value, diverged })
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap interval for `k`, simulating from the fitted
/// hyperbolic model.
pub fn bootstrap_ci(
    net: &Network,
    d: usize,
    b: usize,
    level: f64,
    cfg: &PipelineConfig,
    link: LinkFunction,
    seed: u64,
) -> Result<CiReport> {
    if b < 20 {
        return Err(Error::InvalidArgument(format!("bootstrap interval needs at least 20 replicates, got {b}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level must lie in (0, 1), got {level}")));
    }
    let fitted = fit_model(net, d, ModelGeometry::Hyperbolic, cfg, link)?;
    let k_hat = curvature_of(&fitted.embedding);
    let (estimates, diverged) = bootstrap(&fitted.embedding, b, link, seed, |sim| {
        Ok(curvature_of(&fit_model(sim, d, ModelGeometry::Hyperbolic, cfg, link)?.embedding))
    })?;
    let (lo, hi) = percentile_interval(&estimates, level);
    Ok(CiReport { k_hat, bootstrap_estimates: estimates, lo, hi, level, diverged })
}

/// `[q_{(1−level)/2}, q_{(1+level)/2}]` of `values`.
pub fn percentile_interval(values: &[f64], level: f64) -> (f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    (quantile(&sorted, tail), quantile(&sorted, 1.0 - tail))
}

fn curvature_of(emb: &LatentEmbedding) -> f64 {
    emb.curvature().map_or(0.0, Curvature::get)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hyperbolic_rotation;
    use crate::netgen::{sample_uniform_disk, SimConfig};
    use approx::assert_abs_diff_eq;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    fn small_truth() -> LatentEmbedding {
        sample_uniform_disk(&SimConfig { n: 12, seed: 4, ..Default::default() }).unwrap()
    }

    #[test]
    fn identical_embeddings_have_zero_error() {
        let t = small_truth();
        let r = relative_errors(&t, &t, LinkFunction::Logistic).unwrap();
        assert_eq!(r, ErrorReport { delta_k: 0.0, delta_z: 0.0, delta_theta: 0.0, delta_p: 0.0 });
    }

    #[test]
    fn rotated_estimate_has_zero_distance_error() {
        let t = small_truth();
        let rot = hyperbolic_rotation(1, 0.7, 2).unwrap() * hyperbolic_rotation(3, 1.1, 2).unwrap();
        let moved = LatentEmbedding::hyperbolic(k(1.0), t.coords() * rot.transpose()).unwrap();
        let r = relative_errors(&t, &moved, LinkFunction::Logistic).unwrap();
        assert!(r.delta_theta <= 1e-8, "{r:?}");
        assert!(r.delta_p <= 1e-8, "{r:?}");
        assert!(r.delta_z <= 1e-8, "{r:?}");
        assert_eq!(r.delta_k, 0.0);
    }

    #[test]
    fn curvature_error_is_absolute_difference() {
        let t = small_truth();
        let e = t.with_curvature(k(1.75)).unwrap();
        let r = relative_errors(&t, &e, LinkFunction::Logistic).unwrap();
        assert_abs_diff_eq!(r.delta_k, 0.75, epsilon = 1e-15);
        assert_eq!(r.delta_z, 0.0);
        assert!(r.delta_theta > 0.0);
    }

    #[test]
    fn perturbation_error_by_hand() {
        let p = DMatrix::from_row_slice(3, 3, &[0.0, 0.5, 0.2, 0.5, 0.0, 0.4, 0.2, 0.4, 0.0]);
        let e = DMatrix::from_row_slice(3, 3, &[0.0, 0.1, 0.0, 0.1, 0.0, -0.2, 0.0, -0.2, 0.0]);
        // ‖E‖² = 2(0.01 + 0.04), ‖P‖² = 2(0.25 + 0.04 + 0.16)
        let got = relative_squared_error(&(&p + &e), &p).unwrap();
        assert_abs_diff_eq!(got, 0.05 / 0.45, epsilon = 1e-15);
    }

    #[test]
    fn sign_flips_are_minimized() {
        let z = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, -1.0]);
        let mut flipped = z.clone();
        flipped.column_mut(1).neg_mut();
        assert_eq!(sign_flipped_error(&flipped, &z), 0.0);
        assert!(relative_squared_error(&flipped, &z).unwrap() > 0.0);
    }

    #[test]
    fn mismatched_embeddings_rejected() {
        let t = small_truth();
        let other = sample_uniform_disk(&SimConfig { n: 10, ..Default::default() }).unwrap();
        assert!(matches!(relative_errors(&t, &other, LinkFunction::Logistic), Err(Error::Dimension { .. })));
        let flat = LatentEmbedding::euclidean(DMatrix::zeros(12, 2));
        assert!(relative_errors(&t, &flat, LinkFunction::Logistic).is_err());
    }

    #[test]
    fn bound_values() {
        assert_eq!(theorem1_bound(k(2.0), k(2.0)), 0.0);
        assert_abs_diff_eq!(theorem1_bound(k(1.5), k(1.0)), (1.0 - (2.0f64 / 3.0).sqrt()).powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(theorem1_bound(k(1.5), k(1.0)), 0.0337, epsilon = 1e-4);
        assert_abs_diff_eq!(theorem1_bound(k(1.0), k(1.5)), theorem1_bound(k(1.5), k(1.0)), epsilon = 1e-15);
    }

    #[test]
    fn auc_edge_cases() {
        assert_eq!(auc(&[0.9, 0.8, 0.1, 0.2], &[true, true, false, false]).unwrap(), 1.0);
        assert_eq!(auc(&[0.3; 5], &[true, false, true, false, false]).unwrap(), 0.5);
        assert!(matches!(auc(&[0.1, 0.2], &[true, true]), Err(Error::UndefinedAuc)));
    }

    #[test]
    fn auc_five_pairs_by_hand() {
        // positives 0.6 and 0.3; negatives 0.5, 0.3, 0.1
        // 0.6 beats all three; 0.3 ties one, beats one, loses one
        let got = auc(&[0.6, 0.5, 0.3, 0.3, 0.1], &[true, false, true, false, false]).unwrap();
        assert_abs_diff_eq!(got, 4.5 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn holdout_mask_shape() {
        let n = 11;
        let mask = holdout_mask(n, 0.2, 9).unwrap();
        let hidden = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !mask[i * n + j]).count();
        assert_eq!(hidden, 11);
        for i in 0..n {
            assert!(!mask[i * n + i]);
            for j in 0..n {
                assert_eq!(mask[i * n + j], mask[j * n + i]);
            }
        }
        assert_eq!(mask, holdout_mask(n, 0.2, 9).unwrap());
        assert!(holdout_mask(n, 1.0, 9).is_err());
    }

    #[test]
    fn information_criteria_values() {
        let ic = criteria_with(0.0, 1.0, std::f64::consts::E);
        assert_abs_diff_eq!(ic.bic, 1.0, epsilon = 1e-15);
        let h = information_criteria(-120.0, 40, 2, ModelGeometry::Hyperbolic).unwrap();
        let e = information_criteria(-120.0, 40, 2, ModelGeometry::Euclidean).unwrap();
        assert_abs_diff_eq!(h.bic - e.bic, 780f64.ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(h.aic - e.aic, 2.0, epsilon = 1e-12);
        let simmons = information_criteria(-1.491e5, 1158, 2, ModelGeometry::Hyperbolic).unwrap();
        assert!((simmons.bic - 3.293e5).abs() < 1e3, "{}", simmons.bic);
        assert!(information_criteria(f64::NAN, 5, 2, ModelGeometry::Euclidean).is_err());
    }

    #[test]
    fn percentile_interval_behaviour() {
        assert_eq!(percentile_interval(&[1.3; 25], 0.95), (1.3, 1.3));
        let values: Vec<f64> = (0..101).map(f64::from).collect();
        let (lo, hi) = percentile_interval(&values, 0.9);
        assert_abs_diff_eq!(lo, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 95.0, epsilon = 1e-12);
        let (lo99, hi99) = percentile_interval(&values, 0.99);
        let (lo90, hi90) = percentile_interval(&values, 0.9);
        assert!(lo99 <= lo90 && hi90 <= hi99);
    }

    fn quick_cfg() -> PipelineConfig {
        PipelineConfig {
            init: InitConfig { prefit_dim: Some(4), prefit_iters: 30, candidate_iters: 20, ..Default::default() },
            fit: FitConfig { max_iters: 60, ..Default::default() },
        }
    }

    #[test]
    fn lrt_and_ci_are_seed_deterministic() {
        let truth = sample_uniform_disk(&SimConfig { n: 24, seed: 2, ..Default::default() }).unwrap();
        let net = crate::netgen::generate_network(&truth, LinkFunction::Logistic, 3).unwrap();
        let cfg = quick_cfg();
        let a = lrt_test(&net, 2, 3, &cfg, LinkFunction::Logistic, 7).unwrap();
        let b = lrt_test(&net, 2, 3, &cfg, LinkFunction::Logistic, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.statistic >= 0.0);
        assert!(a.bootstrap_statistics.iter().all(|s| *s >= 0.0));
        assert!(a.p_value > 0.0 && a.p_value <= 1.0);
        assert_eq!(a.b + a.diverged, 3);

        let c1 = bootstrap_ci(&net, 2, 20, 0.9, &cfg, LinkFunction::Logistic, 7).unwrap();
        let c2 = bootstrap_ci(&net, 2, 20, 0.9, &cfg, LinkFunction::Logistic, 7).unwrap();
        assert_eq!(c1, c2);
        assert!(c1.lo <= c1.hi);
        assert!(bootstrap_ci(&net, 2, 19, 0.9, &cfg, LinkFunction::Logistic, 7).is_err());
    }

    #[test]
    fn link_prediction_on_geometric_graph() {
        let truth = sample_uniform_disk(&SimConfig { n: 40, seed: 8, ..Default::default() }).unwrap();
        let net = crate::netgen::generate_network(&truth, LinkFunction::Logistic, 1).unwrap();
        let a = link_prediction_auc(&net, 2, ModelGeometry::Hyperbolic, &quick_cfg(), LinkFunction::Logistic, 0.2, 5)
            .unwrap();
        assert!(a > 0.6, "auc {a}");
        assert!(link_prediction_auc(&Network::empty(2), 2, ModelGeometry::Hyperbolic, &quick_cfg(), LinkFunction::Logistic, 0.2, 5).is_err());
    }
}
