//! The latent distance model: `P_ij = σ(d(z_i, z_j))`, its Bernoulli
//! negative log-likelihood and the analytic gradients in `Z` and `k`.
//!
//! The loss follows the ordered-pair convention (a sum over `i ≠ j`), which
//! is computed as twice the sum over unordered pairs. The Bernoulli
//! log-likelihood of the observed graph is the unordered sum, i.e.
//! `−loss / 2`; see [`log_likelihood`].

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{acosh1p, minkowski_dot, Curvature, HyperboloidPoint, MANIFOLD_TOL};

/// Probabilities are clamped to `[PROB_CLAMP, 1 − PROB_CLAMP]` before logs.
pub const PROB_CLAMP: f64 = 1e-12;

/// Pairs closer than this (in `−⟨z_i, z_j⟩_L − 1`, or Euclidean distance)
/// contribute no gradient through the distance.
pub const COINCIDENT_TOL: f64 = 1e-9;

pub type DistanceMatrix = DMatrix<f64>;
pub type ProbabilityMatrix = DMatrix<f64>;

/// Strictly decreasing link `σ: [0, ∞) → [0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkFunction {
    /// `σ(x) = 2 / (1 + eˣ)`, equal to 1 at distance 0.
    #[default]
    Logistic,
    /// `σ(x) = e^{−x}`.
    Exponential,
}

impl LinkFunction {
    #[inline]
    pub fn forward(self, x: f64) -> f64 {
        match self {
            Self::Logistic => 2.0 / (1.0 + x.exp()),
            Self::Exponential => (-x).exp(),
        }
    }

    /// `1 − σ(x)`, computed without cancellation near `x = 0`.
    #[inline]
    pub fn complement(self, x: f64) -> f64 {
        match self {
            Self::Logistic => (0.5 * x).tanh(),
            Self::Exponential => -(-x).exp_m1(),
        }
    }

    /// `σ⁻¹(p)` for `p ∈ (0, 1]`.
    #[inline]
    pub fn inverse(self, p: f64) -> f64 {
        match self {
            // 2/(1+eˣ) = p  ⇔  x = ln((2 − p)/p)
            Self::Logistic => ((2.0 - p) / p).ln().max(0.0),
            Self::Exponential => (-p.ln()).max(0.0),
        }
    }

    #[inline]
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Self::Logistic => {
                let c = (0.5 * x).cosh();
                -0.5 / (c * c)
            }
            Self::Exponential => -(-x).exp(),
        }
    }
}

/// Latent geometry of an embedding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Hyperbolic(Curvature),
    Euclidean,
}

/// Latent positions plus the geometry they live in.
///
/// Hyperbolic embeddings are `n × (d+1)` with rows on the unit hyperboloid;
/// Euclidean embeddings are `n × d` with unconstrained rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentEmbedding {
    geometry: Geometry,
    coords: DMatrix<f64>,
}

impl LatentEmbedding {
    /// Validates every row against the hyperboloid constraint.
    pub fn hyperbolic(k: Curvature, coords: DMatrix<f64>) -> Result<Self> {
        if coords.ncols() < 3 {
            return Err(Error::Dimension { expected: 3, got: coords.ncols() });
        }
        for i in 0..coords.nrows() {
            let row: Vec<f64> = coords.row(i).iter().copied().collect();
            HyperboloidPoint::new(row).map_err(|e| match e {
                Error::ManifoldViolation(m) => Error::ManifoldViolation(format!("row {i}: {m}")),
                other => other,
            })?;
        }
        Ok(Self { geometry: Geometry::Hyperbolic(k), coords })
    }

    pub fn from_points(k: Curvature, points: &[HyperboloidPoint]) -> Result<Self> {
        let cols = points.first().map_or(3, |p| p.coords().len());
        if let Some(p) = points.iter().find(|p| p.coords().len() != cols) {
            return Err(Error::Dimension { expected: cols, got: p.coords().len() });
        }
        let coords = DMatrix::from_fn(points.len(), cols, |i, j| points[i].coords()[j]);
        Ok(Self { geometry: Geometry::Hyperbolic(k), coords })
    }

    pub fn euclidean(coords: DMatrix<f64>) -> Self {
        Self { geometry: Geometry::Euclidean, coords }
    }

    pub(crate) fn hyperbolic_unchecked(k: Curvature, coords: DMatrix<f64>) -> Self {
        Self { geometry: Geometry::Hyperbolic(k), coords }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn geometry_name(&self) -> &'static str {
        match self.geometry {
            Geometry::Hyperbolic(_) => "hyperbolic",
            Geometry::Euclidean => "euclidean",
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.geometry, Geometry::Hyperbolic(_))
    }

    pub fn curvature(&self) -> Option<Curvature> {
        match self.geometry {
            Geometry::Hyperbolic(k) => Some(k),
            Geometry::Euclidean => None,
        }
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DMatrix<f64> {
        self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.nrows()
    }

    /// Latent dimension `d`.
    pub fn dim(&self) -> usize {
        match self.geometry {
            Geometry::Hyperbolic(_) => self.coords.ncols() - 1,
            Geometry::Euclidean => self.coords.ncols(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.coords.row(i).iter().copied().collect()
    }

    /// Same positions under a different curvature.
    pub fn with_curvature(&self, k: Curvature) -> Result<Self> {
        match self.geometry {
            Geometry::Hyperbolic(_) => Ok(Self { geometry: Geometry::Hyperbolic(k), coords: self.coords.clone() }),
            Geometry::Euclidean => Err(Error::InvalidArgument("Euclidean embedding has no curvature".into())),
        }
    }

    /// Row-major copy of the coordinates.
    pub(crate) fn row_major(&self) -> Vec<f64> {
        let (n, c) = self.coords.shape();
        let mut out = vec![0.0; n * c];
        for j in 0..c {
            for i in 0..n {
                out[i * c + j] = self.coords[(i, j)];
            }
        }
        out
    }

    pub(crate) fn from_row_major(geometry: Geometry, n: usize, cols: usize, data: &[f64]) -> Self {
        Self { geometry, coords: DMatrix::from_row_slice(n, cols, data) }
    }
}

/// Undirected simple graph on nodes `0..n`, with an optional observation mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    adjacency: Vec<bool>,
    mask: Option<Vec<bool>>,
}

impl Network {
    pub fn empty(n: usize) -> Self {
        Self { n, adjacency: vec![false; n * n], mask: None }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut net = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at node {u}")));
            }
            net.set_edge(u, v, true);
        }
        Ok(net)
    }

    /// Builds from a dense 0/1 matrix, checking symmetry and the zero diagonal.
    pub fn from_dense(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension { expected: n, got: a.ncols() });
        }
        let mut net = Self::empty(n);
        for i in 0..n {
            if a[(i, i)] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = a[(i, j)];
                if v != 0.0 && v != 1.0 {
                    return Err(Error::InvalidArgument(format!("entry ({i}, {j}) = {v} is not binary")));
                }
                if v != a[(j, i)] {
                    return Err(Error::InvalidArgument(format!("asymmetric entry ({i}, {j})")));
                }
                net.adjacency[i * n + j] = v == 1.0;
            }
        }
        Ok(net)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        self.adjacency[u * self.n + v] = present;
        self.adjacency[v * self.n + u] = present;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    /// Whether the pair enters the likelihood (always true without a mask).
    #[inline]
    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[i * self.n + j])
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    /// Attaches an observation mask; `observed[i*n + j]` must be symmetric
    /// with a false diagonal.
    pub fn with_mask(mut self, observed: Vec<bool>) -> Result<Self> {
        if observed.len() != self.n * self.n {
            return Err(Error::Dimension { expected: self.n * self.n, got: observed.len() });
        }
        for i in 0..self.n {
            if observed[i * self.n + i] {
                return Err(Error::InvalidArgument(format!("mask diagonal set at {i}")));
            }
            for j in 0..i {
                if observed[i * self.n + j] != observed[j * self.n + i] {
                    return Err(Error::InvalidArgument(format!("asymmetric mask at ({i}, {j})")));
                }
            }
        }
        self.mask = Some(observed);
        Ok(self)
    }

    pub fn without_mask(&self) -> Self {
        Self { n: self.n, adjacency: self.adjacency.clone(), mask: None }
    }

    /// Unordered edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&b| b).count() / 2
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| self.adjacency[i * self.n..(i + 1) * self.n].iter().filter(|&&b| b).count())
            .collect()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i * self.n..(i + 1) * self.n]
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
    }

    /// Dense 0/1 adjacency with masked-out pairs set to zero.
    pub fn observed_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            if self.has_edge(i, j) && self.is_observed(i, j) {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Loss plus optional gradients from a single pass over the pairs.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub loss: f64,
    /// Ambient Euclidean gradient in `Z`, row-major `n × cols`.
    pub grad_z: Vec<f64>,
    /// `∂L/∂k`; zero for Euclidean embeddings.
    pub grad_k: f64,
}

fn check_sizes(emb: &LatentEmbedding, net: &Network) -> Result<()> {
    if emb.n() != net.n() {
        return Err(Error::Dimension { expected: net.n(), got: emb.n() });
    }
    Ok(())
}

/// Negative log-likelihood term and `∂term/∂θ` for one unordered pair.
/// The derivative is zero where the clamp is active.
#[inline]
fn pair_term(link: LinkFunction, theta: f64, edge: bool) -> (f64, f64) {
    if edge {
        let p = link.forward(theta);
        if p < PROB_CLAMP {
            (-PROB_CLAMP.ln(), 0.0)
        } else if p > 1.0 - PROB_CLAMP {
            (-(1.0 - PROB_CLAMP).ln(), 0.0)
        } else {
            (-p.ln(), -link.derivative(theta) / p)
        }
    } else {
        let q = link.complement(theta);
        if q < PROB_CLAMP {
            (-PROB_CLAMP.ln(), 0.0)
        } else if q > 1.0 - PROB_CLAMP {
            (-(1.0 - PROB_CLAMP).ln(), 0.0)
        } else {
            (-q.ln(), link.derivative(theta) / q)
        }
    }
}

/// Evaluates the loss and, if `with_grad`, both gradients.
pub fn evaluate(emb: &LatentEmbedding, net: &Network, link: LinkFunction, with_grad: bool) -> Result<Evaluation> {
    check_sizes(emb, net)?;
    let n = emb.n();
    let cols = emb.coords().ncols();
    let z = emb.row_major();
    let mut grad_z = if with_grad { vec![0.0; n * cols] } else { Vec::new() };
    let mut loss = 0.0;
    let mut grad_k = 0.0;

    match emb.geometry() {
        Geometry::Hyperbolic(k) => {
            let inv_sk = 1.0 / k.sqrt();
            let kk = k.get();
            let last = cols - 1;
            for i in 0..n {
                let zi = &z[i * cols..(i + 1) * cols];
                for j in i + 1..n {
                    if !net.is_observed(i, j) {
                        continue;
                    }
                    let zj = &z[j * cols..(j + 1) * cols];
                    let mut t = -minkowski_dot(zi, zj) - 1.0;
                    if t < 0.0 {
                        if t < -MANIFOLD_TOL * (zi[last] * zj[last]).abs().max(1.0) {
                            return Err(Error::ManifoldViolation(format!("rows {i} and {j}: −⟨z_i, z_j⟩_L = {}", t + 1.0)));
                        }
                        t = 0.0;
                    }
                    let theta = acosh1p(t) * inv_sk;
                    let (term, dl) = pair_term(link, theta, net.has_edge(i, j));
                    loss += term;
                    if with_grad && dl != 0.0 {
                        let dl = 2.0 * dl;
                        grad_k += dl * (-theta / (2.0 * kk));
                        if t > COINCIDENT_TOL {
                            // ∂θ/∂z_i = −Λ z_j / (√k √(x² − 1)), x = 1 + t
                            let c = -dl * inv_sk / (t * (t + 2.0)).sqrt();
                            let (gi, gj) = split_rows(&mut grad_z, i, j, cols);
                            for a in 0..last {
                                gi[a] += c * zj[a];
                                gj[a] += c * zi[a];
                            }
                            gi[last] -= c * zj[last];
                            gj[last] -= c * zi[last];
                        }
                    }
                }
            }
        }
        Geometry::Euclidean => {
            for i in 0..n {
                let zi = &z[i * cols..(i + 1) * cols];
                for j in i + 1..n {
                    if !net.is_observed(i, j) {
                        continue;
                    }
                    let zj = &z[j * cols..(j + 1) * cols];
                    let theta = zi.iter().zip(zj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                    let (term, dl) = pair_term(link, theta, net.has_edge(i, j));
                    loss += term;
                    if with_grad && dl != 0.0 && theta > COINCIDENT_TOL {
                        let c = 2.0 * dl / theta;
                        let (gi, gj) = split_rows(&mut grad_z, i, j, cols);
                        for a in 0..cols {
                            let diff = c * (zi[a] - zj[a]);
                            gi[a] += diff;
                            gj[a] -= diff;
                        }
                    }
                }
            }
        }
    }
    Ok(Evaluation { loss: 2.0 * loss, grad_z, grad_k })
}

#[inline]
fn split_rows(buf: &mut [f64], i: usize, j: usize, cols: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(i < j);
    let (head, tail) = buf.split_at_mut(j * cols);
    (&mut head[i * cols..(i + 1) * cols], &mut tail[..cols])
}

/// Pairwise latent distances; zero diagonal.
pub fn distance_matrix(emb: &LatentEmbedding) -> Result<DistanceMatrix> {
    let n = emb.n();
    let cols = emb.coords().ncols();
    let z = emb.row_major();
    let mut theta = DMatrix::zeros(n, n);
    for i in 0..n {
        let zi = &z[i * cols..(i + 1) * cols];
        for j in i + 1..n {
            let zj = &z[j * cols..(j + 1) * cols];
            let d = match emb.geometry() {
                Geometry::Hyperbolic(k) => crate::geometry::unit_distance(zi, zj)
                    .map_err(|e| Error::ManifoldViolation(format!("rows {i} and {j}: {e}")))?
                    / k.sqrt(),
                Geometry::Euclidean => zi.iter().zip(zj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
            };
            theta[(i, j)] = d;
            theta[(j, i)] = d;
        }
    }
    Ok(theta)
}

pub fn probability_matrix(emb: &LatentEmbedding, link: LinkFunction) -> Result<ProbabilityMatrix> {
    let theta = distance_matrix(emb)?;
    Ok(probabilities_from_distances(&theta, link))
}

pub fn probabilities_from_distances(theta: &DistanceMatrix, link: LinkFunction) -> ProbabilityMatrix {
    let n = theta.nrows();
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { link.forward(theta[(i, j)]) })
}

/// Ordered-pair negative log-likelihood, restricted to observed pairs.
pub fn neg_log_likelihood(emb: &LatentEmbedding, net: &Network, link: LinkFunction) -> Result<f64> {
    Ok(evaluate(emb, net, link, false)?.loss)
}

/// Bernoulli log-likelihood over unordered observed pairs (`−loss / 2`).
pub fn log_likelihood(emb: &LatentEmbedding, net: &Network, link: LinkFunction) -> Result<f64> {
    Ok(-0.5 * neg_log_likelihood(emb, net, link)?)
}

/// Ambient gradient of the loss with respect to the rows of `Z`.
pub fn grad_z(emb: &LatentEmbedding, net: &Network, link: LinkFunction) -> Result<DMatrix<f64>> {
    let cols = emb.coords().ncols();
    let eval = evaluate(emb, net, link, true)?;
    Ok(DMatrix::from_row_slice(emb.n(), cols, &eval.grad_z))
}

/// `∂L/∂k` for a hyperbolic embedding.
pub fn grad_k(emb: &LatentEmbedding, net: &Network, link: LinkFunction) -> Result<f64> {
    if !emb.is_hyperbolic() {
        return Err(Error::InvalidArgument("curvature gradient needs a hyperbolic embedding".into()));
    }
    Ok(evaluate(emb, net, link, true)?.grad_k)
}
