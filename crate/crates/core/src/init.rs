//! Spectral initialization and the identifiability canonicalization.
//!
//! The pipeline is: singular value thresholding of the adjacency matrix
//! gives a low-rank probability estimate, the inverse link turns it into a
//! distance estimate `Θ⁰`, an optional higher-dimensional Euclidean pre-fit
//! refines `Θ⁰`, and for each candidate curvature the matrix
//! `ZΛZᵀ = −cosh(√k Θ⁰)` is factorized to obtain hyperboloid positions.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{lift_in_place, Curvature};
use crate::model::{distance_matrix, DistanceMatrix, LatentEmbedding, LinkFunction, Network};
use crate::optim::{fit, fit_euclidean, FitConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitConfig {
    /// Singular value threshold; `2.01 √(n p̄)` when unset.
    pub tau: Option<f64>,
    pub k_candidates: Vec<f64>,
    /// Dimension of the Euclidean pre-fit that refines `Θ⁰`; none disables it.
    pub prefit_dim: Option<usize>,
    /// Iteration budget of the Euclidean pre-fit.
    pub prefit_iters: usize,
    /// Iteration budget of each frozen-curvature candidate fit.
    pub candidate_iters: usize,
    /// Probabilities are clipped to `[clip_eps, 1 − clip_eps]` before `σ⁻¹`.
    pub clip_eps: f64,
}

impl Default for InitConfig {
    fn default() -> Self {
        Self {
            tau: None,
            k_candidates: vec![0.1, 1.0, 10.0],
            prefit_dim: Some(20),
            prefit_iters: 500,
            candidate_iters: 200,
            clip_eps: 1e-6,
        }
    }
}

impl InitConfig {
    pub fn validate(&self, d: usize) -> Result<()> {
        if let Some(tau) = self.tau {
            if !(tau > 0.0) {
                return Err(Error::Config(format!("tau must be positive, got {tau}")));
            }
        }
        if self.k_candidates.is_empty() {
            return Err(Error::Config("k_candidates must not be empty".into()));
        }
        if let Some(k) = self.k_candidates.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return Err(Error::Config(format!("curvature candidates must be positive, got {k}")));
        }
        if let Some(p) = self.prefit_dim {
            if p < d {
                return Err(Error::Config(format!("prefit_dim {p} is below the latent dimension {d}")));
            }
        }
        if !(self.clip_eps > 0.0 && self.clip_eps < 0.5) {
            return Err(Error::Config(format!("clip_eps must lie in (0, 0.5), got {}", self.clip_eps)));
        }
        if self.candidate_iters == 0 {
            return Err(Error::Config("candidate_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// `2.01 √(n p̄)` with `p̄` the observed edge density.
pub fn default_tau(net: &Network) -> f64 {
    let n = net.n();
    let mut edges = 0usize;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if net.is_observed(i, j) {
                pairs += 1;
                if net.has_edge(i, j) {
                    edges += 1;
                }
            }
        }
    }
    let density = if pairs == 0 { 0.0 } else { edges as f64 / pairs as f64 };
    2.01 * (n as f64 * density).sqrt()
}

/// Eigenpairs of a symmetric matrix sorted by descending eigenvalue.
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (values, vectors)
}

/// Singular value thresholding estimate of `Θ`.
///
/// Masked pairs are read as non-edges. Because the adjacency matrix is
/// symmetric its singular triplets are `(|λ|, v, sign(λ) v)`, so the
/// thresholded sum is taken over eigenpairs with `|λ| ≥ τ`.
pub fn usvt(net: &Network, tau: f64, link: LinkFunction, clip_eps: f64) -> Result<DistanceMatrix> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    let n = net.n();
    let (values, vectors) = sorted_eigen(net.observed_dense());
    let mut p = DMatrix::zeros(n, n);
    for (c, &lambda) in values.iter().enumerate() {
        if lambda.abs() >= tau {
            let v = vectors.column(c);
            p.ger(lambda, &v, &v, 1.0);
        }
    }
    let sym = (&p + p.transpose()) * 0.5;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            link.inverse(sym[(i, j)].clamp(clip_eps, 1.0 - clip_eps))
        }
    }))
}

/// Builds `Ũ|S̃|^{1/2}Λ` from `d` leading positive eigenpairs and the most
/// negative one (placed last), then lifts each row onto the hyperboloid.
fn factor_lorentz_gram(values: &[f64], vectors: &DMatrix<f64>, d: usize) -> DMatrix<f64> {
    let n = vectors.nrows();
    let m = values.len();
    let mut z = DMatrix::zeros(n, d + 1);
    for c in 0..d.min(m - 1) {
        let s = values[c];
        if s > 0.0 {
            z.set_column(c, &(vectors.column(c) * s.sqrt()));
        } else {
            log::warn!("only {c} positive eigenvalues where {d} were expected");
            break;
        }
    }
    let neg = values[m - 1];
    if neg < 0.0 {
        let mut col = vectors.column(m - 1) * (-neg).sqrt();
        if col.sum() < 0.0 {
            col.neg_mut();
        }
        z.set_column(d, &col);
    }
    let mut row = vec![0.0; d + 1];
    for i in 0..n {
        for (c, r) in row.iter_mut().enumerate() {
            *r = z[(i, c)];
        }
        lift_in_place(&mut row);
        z[(i, d)] = row[d];
    }
    z
}

/// Hyperboloid positions whose Lorentz Gram matrix best matches
/// `−cosh(√k Θ⁰)` (diagonal `−1`).
pub fn theta_to_embedding(theta0: &DistanceMatrix, k: Curvature, d: usize) -> Result<LatentEmbedding> {
    let n = theta0.nrows();
    if theta0.ncols() != n {
        return Err(Error::Dimension { expected: n, got: theta0.ncols() });
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("latent dimension must be at least 2, got {d}")));
    }
    if n < d + 1 {
        return Err(Error::DegenerateSpectrum(format!("{n} points cannot carry {d} positive and one negative eigenvalue")));
    }
    let sk = k.sqrt();
    let gram = DMatrix::from_fn(n, n, |i, j| if i == j { -1.0 } else { -(sk * theta0[(i, j)]).cosh() });
    let (values, vectors) = sorted_eigen(gram);
    let z = factor_lorentz_gram(&values, &vectors, d);
    Ok(LatentEmbedding::hyperbolic_unchecked(k, z))
}

/// Rotates `Z` into the canonical frame where `ZᵀZ` is diagonal.
///
/// Spatial columns follow descending eigenvalue of `ZΛZᵀ`, each signed so
/// its largest-magnitude entry is positive; the time-like column is last.
pub fn canonicalize(emb: &LatentEmbedding) -> Result<LatentEmbedding> {
    let k = emb
        .curvature()
        .ok_or_else(|| Error::InvalidArgument("canonicalization needs a hyperbolic embedding".into()))?;
    let z = emb.coords();
    let (n, cols) = z.shape();
    let d = cols - 1;
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(cols, |i, _| if i == d { -1.0 } else { 1.0 }));

    // ZΛZᵀ = Q (RΛRᵀ) Qᵀ keeps the eigenproblem at size d+1
    let (values, vectors) = if n > cols {
        let qr = z.clone().qr();
        let (q, r) = (qr.q(), qr.r());
        let small = &r * &lambda * r.transpose();
        let (values, v) = sorted_eigen((&small + small.transpose()) * 0.5);
        (values, q * v)
    } else {
        let full = z * &lambda * z.transpose();
        sorted_eigen((&full + full.transpose()) * 0.5)
    };

    let spread = values.iter().fold(0f64, |a, v| a.max(v.abs())).max(1.0);
    for w in values[..d.min(values.len())].windows(2) {
        if (w[0] - w[1]).abs() <= 1e-10 * spread {
            log::warn!("repeated eigenvalues {:e} and {:e}: embedding is not identifiable", w[0], w[1]);
        }
    }

    let mut out = factor_lorentz_gram(&values, &vectors, d);
    for c in 0..d {
        let col = out.column(c);
        let pivot = col.iter().copied().fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
        if pivot < 0.0 {
            out.column_mut(c).neg_mut();
        }
    }
    Ok(LatentEmbedding::hyperbolic_unchecked(k, out))
}

/// Classical multidimensional scaling of a distance matrix into `dim`
/// coordinates; non-positive eigen-directions become zero columns.
pub fn classical_mds(theta: &DistanceMatrix, dim: usize) -> DMatrix<f64> {
    let n = theta.nrows();
    let sq = theta.map(|x| x * x);
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand));
    let (values, vectors) = sorted_eigen(b);
    let mut x = DMatrix::zeros(n, dim);
    for c in 0..dim.min(n) {
        if values[c] > 0.0 {
            x.set_column(c, &(vectors.column(c) * values[c].sqrt()));
        }
    }
    x
}

/// `Θ⁰` from thresholding, refined by the Euclidean pre-fit when enabled.
pub fn initial_distances(net: &Network, cfg: &InitConfig, fit_cfg: &FitConfig, link: LinkFunction) -> Result<DistanceMatrix> {
    let tau = cfg.tau.unwrap_or_else(|| default_tau(net));
    let theta0 = usvt(net, tau.max(f64::MIN_POSITIVE), link, cfg.clip_eps)?;
    let Some(dim) = cfg.prefit_dim else {
        return Ok(theta0);
    };
    let seed = LatentEmbedding::euclidean(classical_mds(&theta0, dim));
    let prefit_cfg = FitConfig { max_iters: cfg.prefit_iters.max(1), ..fit_cfg.clone() };
    let prefit = fit_euclidean(net, dim, &seed, &prefit_cfg, link)?;
    distance_matrix(&prefit.embedding)
}

/// Starting point for the hyperbolic fit.
///
/// Every candidate curvature gets a frozen-curvature fit from its spectral
/// embedding; the candidate with the lowest loss wins (earliest on ties) and
/// its fitted positions are returned. Candidates whose fit diverges are
/// skipped unless all of them do.
pub fn initialize(
    net: &Network,
    d: usize,
    cfg: &InitConfig,
    fit_cfg: &FitConfig,
    link: LinkFunction,
) -> Result<LatentEmbedding> {
    cfg.validate(d)?;
    let theta0 = initial_distances(net, cfg, fit_cfg, link)?;
    let candidate_cfg = FitConfig { freeze_k: true, max_iters: cfg.candidate_iters, ..fit_cfg.clone() };
    let results: Vec<Result<(f64, LatentEmbedding)>> = cfg
        .k_candidates
        .par_iter()
        .map(|&kj| {
            let k = Curvature::new(kj)?;
            let start = theta_to_embedding(&theta0, k, d)?;
            let fitted = fit(net, d, &start, &candidate_cfg, link)?;
            Ok((fitted.final_loss(), fitted.embedding))
        })
        .collect();
    let mut best: Option<(f64, LatentEmbedding)> = None;
    let mut diverged = None;
    for (r, kj) in results.into_iter().zip(&cfg.k_candidates) {
        let (loss, emb) = match r {
            Err(e @ Error::Divergence { .. }) => {
                log::warn!("candidate k = {kj} dropped: {e}");
                diverged = Some(e);
                continue;
            }
            other => other?,
        };
        log::debug!("candidate k = {}: loss {loss}", emb.curvature().map_or(0.0, f64::from));
        if best.as_ref().is_none_or(|(b, _)| loss < *b) {
            best = Some((loss, emb));
        }
    }
    match (best, diverged) {
        (Some((_, emb)), _) => Ok(emb),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("candidate list validated non-empty"),
    }
}

/// Starting point for the Euclidean fit: classical scaling of `Θ⁰` into `d`
/// dimensions.
pub fn initialize_euclidean(
    net: &Network,
    d: usize,
    cfg: &InitConfig,
    fit_cfg: &FitConfig,
    link: LinkFunction,
) -> Result<LatentEmbedding> {
    cfg.validate(d)?;
    let theta0 = initial_distances(net, cfg, fit_cfg, link)?;
    Ok(LatentEmbedding::euclidean(classical_mds(&theta0, d)))
}
