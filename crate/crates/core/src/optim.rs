//! Joint gradient descent on the curvature and manifold gradient descent on
//! the latent positions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{exp_map_into, minkowski_dot, Curvature};
use crate::model::{evaluate, Evaluation, Geometry, LatentEmbedding, LinkFunction, Network};

/// Loss increases larger than this are reported when a step is rejected.
const INCREASE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Step size for the curvature; `1/n²` when unset.
    pub eta_k: Option<f64>,
    /// Step size for the latent positions; `1/n` when unset.
    pub eta_z: Option<f64>,
    /// Stop once the loss decreases by no more than this.
    pub epsilon: f64,
    pub max_iters: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub freeze_k: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { eta_k: None, eta_z: None, epsilon: 1e-4, max_iters: 2000, k_min: 1e-3, k_max: 1e3, freeze_k: false }
    }
}

impl FitConfig {
    pub fn eta_k_for(&self, n: usize) -> f64 {
        self.eta_k.unwrap_or(1.0 / (n as f64 * n as f64))
    }

    pub fn eta_z_for(&self, n: usize) -> f64 {
        self.eta_z.unwrap_or(1.0 / n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0) => Err(Error::Config(format!("{name} must be positive, got {x}"))),
            _ => Ok(()),
        };
        positive("eta_k", self.eta_k)?;
        positive("eta_z", self.eta_z)?;
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if !(self.k_min > 0.0 && self.k_min < self.k_max) {
            return Err(Error::Config(format!("need 0 < k_min < k_max, got [{}, {}]", self.k_min, self.k_max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub embedding: LatentEmbedding,
    /// Loss at the initial point followed by the loss after each accepted step.
    pub loss_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn final_loss(&self) -> f64 {
        *self.loss_history.last().expect("history holds the initial loss")
    }
}

/// One manifold gradient step on every row, all computed from `z`.
fn mgd_rows(z: &[f64], grad: &[f64], cols: usize, eta: f64) -> Vec<f64> {
    let mut out = vec![0.0; z.len()];
    let mut v = vec![0.0; cols];
    let last = cols - 1;
    for ((zi, gi), oi) in z.chunks_exact(cols).zip(grad.chunks_exact(cols)).zip(out.chunks_exact_mut(cols)) {
        // steepest direction Λ∇, projected onto the tangent space at z_i
        v.copy_from_slice(gi);
        v[last] = -v[last];
        let c = minkowski_dot(&v, zi);
        for a in 0..cols {
            v[a] = -eta * (v[a] + c * zi[a]);
        }
        exp_map_into(zi, &v, oi);
    }
    out
}

fn euclidean_rows(z: &[f64], grad: &[f64], eta: f64) -> Vec<f64> {
    z.iter().zip(grad).map(|(x, g)| x - eta * g).collect()
}

/// A single manifold gradient step on the latent positions, `k` fixed.
pub fn mgd_step(emb: &LatentEmbedding, net: &Network, link: LinkFunction, eta_z: f64) -> Result<LatentEmbedding> {
    if !emb.is_hyperbolic() {
        return Err(Error::InvalidArgument("manifold step needs a hyperbolic embedding".into()));
    }
    let eval = evaluate(emb, net, link, true)?;
    let cols = emb.coords().ncols();
    let rows = mgd_rows(&emb.row_major(), &eval.grad_z, cols, eta_z);
    Ok(LatentEmbedding::from_row_major(emb.geometry(), emb.n(), cols, &rows))
}

/// Maximum-likelihood fit of the hyperbolic model starting from `init`.
///
/// Each iteration moves `k` by a projected gradient step inside
/// `[k_min, k_max]` and every row of `Z` by a manifold step, both using
/// gradients at the current iterate. A step that would raise the loss is
/// rejected and ends the run.
pub fn fit(net: &Network, d: usize, init: &LatentEmbedding, cfg: &FitConfig, link: LinkFunction) -> Result<FitResult> {
    cfg.validate()?;
    let k = init
        .curvature()
        .ok_or_else(|| Error::InvalidArgument("hyperbolic fit needs a hyperbolic initial embedding".into()))?;
    if !(cfg.k_min..=cfg.k_max).contains(&k.get()) {
        return Err(Error::InvalidArgument(format!("initial k = {k} outside [{}, {}]", cfg.k_min, cfg.k_max)));
    }
    check_dims(net, d, init)?;
    run(net, init, cfg, link)
}

/// Gradient descent for the Euclidean distance model.
pub fn fit_euclidean(
    net: &Network,
    d: usize,
    init: &LatentEmbedding,
    cfg: &FitConfig,
    link: LinkFunction,
) -> Result<FitResult> {
    cfg.validate()?;
    if init.is_hyperbolic() {
        return Err(Error::InvalidArgument("Euclidean fit needs a Euclidean initial embedding".into()));
    }
    check_dims(net, d, init)?;
    run(net, init, cfg, link)
}

fn check_dims(net: &Network, d: usize, init: &LatentEmbedding) -> Result<()> {
    if init.dim() != d {
        return Err(Error::Dimension { expected: d, got: init.dim() });
    }
    if init.n() != net.n() {
        return Err(Error::Dimension { expected: net.n(), got: init.n() });
    }
    Ok(())
}

fn run(net: &Network, init: &LatentEmbedding, cfg: &FitConfig, link: LinkFunction) -> Result<FitResult> {
    let n = init.n();
    let cols = init.coords().ncols();
    let (eta_k, eta_z) = (cfg.eta_k_for(n), cfg.eta_z_for(n));

    let mut current = init.clone();
    let mut eval: Evaluation = evaluate(&current, net, link, true)?;
    if !eval.loss.is_finite() {
        return Err(Error::Divergence { iteration: 0 });
    }
    let mut history = vec![eval.loss];
    let mut converged = false;
    let mut iterations = 0;

    for t in 1..=cfg.max_iters {
        iterations = t;
        let z = current.row_major();
        let next = match current.geometry() {
            Geometry::Hyperbolic(k) => {
                let k_next = if cfg.freeze_k {
                    k
                } else {
                    let raw = k.get() - eta_k * eval.grad_k;
                    if !raw.is_finite() {
                        return Err(Error::Divergence { iteration: t });
                    }
                    Curvature::new(raw.clamp(cfg.k_min, cfg.k_max))?
                };
                let rows = mgd_rows(&z, &eval.grad_z, cols, eta_z);
                LatentEmbedding::from_row_major(Geometry::Hyperbolic(k_next), n, cols, &rows)
            }
            Geometry::Euclidean => {
                let rows = euclidean_rows(&z, &eval.grad_z, eta_z);
                LatentEmbedding::from_row_major(Geometry::Euclidean, n, cols, &rows)
            }
        };
        let next_eval = match evaluate(&next, net, link, true) {
            Ok(e) if e.loss.is_finite() => e,
            _ => return Err(Error::Divergence { iteration: t }),
        };
        let delta = eval.loss - next_eval.loss;
        if delta < 0.0 {
            if -delta > INCREASE_TOL {
                log::debug!("iteration {t}: loss rose by {:e}; keeping the previous iterate", -delta);
            }
            converged = true;
            break;
        }
        current = next;
        eval = next_eval;
        history.push(eval.loss);
        if delta <= cfg.epsilon {
            converged = true;
            break;
        }
    }

    Ok(FitResult { embedding: current, loss_history: history, iterations, converged })
}
