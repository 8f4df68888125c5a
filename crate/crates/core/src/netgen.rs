//! Simulation of latent positions and networks, and descriptive graph
//! statistics.
//!
//! All randomness comes from [`ChaCha8Rng`], a counter-based generator with a
//! portable, documented output stream. Independent replicates use separate
//! ChaCha streams of the same seed (see [`replicate_rng`]), so results do not
//! depend on scheduling.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{unit_distance, Curvature};
use crate::model::{Geometry, LatentEmbedding, LinkFunction, Network};

/// Generator for stream `index` of `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n: usize,
    pub d: usize,
    /// Curvature magnitude; `0` selects the Euclidean disk.
    pub k: f64,
    /// Radius of the latent disk.
    pub radius: f64,
    pub link: LinkFunction,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { n: 500, d: 2, k: 1.0, radius: 3.0, link: LinkFunction::Logistic, seed: 0 }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.radius >= 0.0 && self.radius.is_finite()) {
            return Err(Error::Config(format!("radius must be non-negative, got {}", self.radius)));
        }
        if !(self.k >= 0.0 && self.k.is_finite()) {
            return Err(Error::Config(format!("k must be non-negative, got {}", self.k)));
        }
        if self.k > 0.0 && self.d != 2 {
            return Err(Error::Config(format!("hyperbolic disk sampling needs d = 2, got {}", self.d)));
        }
        if self.d == 0 {
            return Err(Error::Config("d must be positive".into()));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<Geometry> {
        if self.k == 0.0 {
            Ok(Geometry::Euclidean)
        } else {
            Ok(Geometry::Hyperbolic(Curvature::new(self.k)?))
        }
    }
}

/// Distance from the disk center for the quantile `u` of the area-uniform
/// radial law on a disk of radius `radius` in the plane of curvature `−k`:
/// `F(r) = (cosh(√k r) − 1) / (cosh(√k R) − 1)`.
pub fn hyperbolic_radius_quantile(u: f64, k: Curvature, radius: f64) -> f64 {
    let sk = k.sqrt();
    // cosh(x) − 1 = 2 sinh²(x/2) keeps small radii accurate
    let span = 2.0 * (0.5 * sk * radius).sinh().powi(2);
    crate::geometry::acosh1p(u * span) / sk
}

/// Draws `n` positions uniformly (by area) from the disk of radius `R`.
///
/// Hyperbolic points are `(sinh(√k r) cos φ, sinh(√k r) sin φ, cosh(√k r))`
/// on the unit hyperboloid; Euclidean points are `(r cos φ, r sin φ, 0, …)`.
pub fn sample_uniform_disk(cfg: &SimConfig) -> Result<LatentEmbedding> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    sample_uniform_disk_with(cfg, &mut rng)
}

pub fn sample_uniform_disk_with(cfg: &SimConfig, rng: &mut impl Rng) -> Result<LatentEmbedding> {
    cfg.validate()?;
    let n = cfg.n;
    match cfg.geometry()? {
        Geometry::Hyperbolic(k) => {
            let sk = k.sqrt();
            let mut coords = DMatrix::zeros(n, 3);
            for i in 0..n {
                let phi = rng.random::<f64>() * std::f64::consts::TAU;
                let r = hyperbolic_radius_quantile(rng.random::<f64>(), k, cfg.radius);
                let (s, c) = ((sk * r).sinh(), (sk * r).cosh());
                coords[(i, 0)] = s * phi.cos();
                coords[(i, 1)] = s * phi.sin();
                coords[(i, 2)] = c;
            }
            Ok(LatentEmbedding::hyperbolic_unchecked(k, coords))
        }
        Geometry::Euclidean => {
            let mut coords = DMatrix::zeros(n, cfg.d);
            for i in 0..n {
                let phi = rng.random::<f64>() * std::f64::consts::TAU;
                let r = cfg.radius * rng.random::<f64>().sqrt();
                coords[(i, 0)] = r * phi.cos();
                if cfg.d > 1 {
                    coords[(i, 1)] = r * phi.sin();
                }
            }
            Ok(LatentEmbedding::euclidean(coords))
        }
    }
}

/// Independent Bernoulli edges with `P_ij = σ(d(z_i, z_j))`, drawn over
/// unordered pairs in lexicographic order.
pub fn generate_network(emb: &LatentEmbedding, link: LinkFunction, seed: u64) -> Result<Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_network_with(emb, link, &mut rng)
}

pub fn generate_network_with(emb: &LatentEmbedding, link: LinkFunction, rng: &mut impl Rng) -> Result<Network> {
    let n = emb.n();
    let cols = emb.coords().ncols();
    let z = emb.row_major();
    let mut net = Network::empty(n);
    for i in 0..n {
        let zi = &z[i * cols..(i + 1) * cols];
        for j in i + 1..n {
            let zj = &z[j * cols..(j + 1) * cols];
            let theta = match emb.geometry() {
                Geometry::Hyperbolic(k) => unit_distance(zi, zj)? / k.sqrt(),
                Geometry::Euclidean => zi.iter().zip(zj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
            };
            if rng.random::<f64>() < link.forward(theta) {
                net.set_edge(i, j, true);
            }
        }
    }
    Ok(net)
}

/// Bernoulli draws from an explicit probability matrix (upper triangle used).
pub fn generate_from_probabilities(p: &DMatrix<f64>, seed: u64) -> Network {
    let n = p.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Network::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p[(i, j)] {
                net.set_edge(i, j, true);
            }
        }
    }
    net
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub edge_density: f64,
    /// Global clustering: `3 × triangles / connected triples`.
    pub transitivity: f64,
    /// Mean over nodes of betweenness normalized by `(n−1)(n−2)/2`.
    pub betweenness_centrality: f64,
    /// Mean shortest-path length within the largest connected component.
    pub average_path_length: f64,
    /// Longest shortest path within the largest connected component.
    pub diameter: f64,
}

fn adjacency_lists(net: &Network) -> Vec<Vec<usize>> {
    (0..net.n()).map(|i| net.neighbors(i).collect()).collect()
}

/// Node sets of the connected components, largest first (ties: smallest id).
pub fn connected_components(net: &Network) -> Vec<Vec<usize>> {
    let adj = adjacency_lists(net);
    let mut seen = vec![false; net.n()];
    let mut comps = Vec::new();
    for s in 0..net.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    comps
}

pub fn transitivity(net: &Network) -> f64 {
    let adj = adjacency_lists(net);
    let mut closed = 0u64;
    let mut triples = 0u64;
    for nb in &adj {
        let d = nb.len() as u64;
        triples += d * d.saturating_sub(1) / 2;
        for (a, &u) in nb.iter().enumerate() {
            for &w in &nb[a + 1..] {
                if net.has_edge(u, w) {
                    closed += 1;
                }
            }
        }
    }
    // each triangle is closed at all three of its vertices
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}

/// Brandes betweenness (unnormalized, each unordered pair counted once)
/// together with BFS distances from every source.
fn brandes(adj: &[Vec<usize>]) -> (Vec<f64>, Vec<Vec<Option<usize>>>) {
    let n = adj.len();
    let mut bc = vec![0.0; n];
    let mut all_dist = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    for s in 0..n {
        let mut dist: Vec<Option<usize>> = vec![None; n];
        order.clear();
        for p in preds.iter_mut() {
            p.clear();
        }
        sigma.iter_mut().for_each(|x| *x = 0.0);
        delta.iter_mut().for_each(|x| *x = 0.0);
        sigma[s] = 1.0;
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let dv = dist[v].unwrap();
            for &w in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
                if dist[w] == Some(dv + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
        all_dist.push(dist);
    }
    // every unordered pair was visited from both endpoints
    bc.iter_mut().for_each(|b| *b /= 2.0);
    (bc, all_dist)
}

/// Per-node betweenness normalized by `(n−1)(n−2)/2`.
pub fn betweenness(net: &Network) -> Vec<f64> {
    let n = net.n();
    let (bc, _) = brandes(&adjacency_lists(net));
    let norm = if n > 2 { ((n - 1) * (n - 2)) as f64 / 2.0 } else { 1.0 };
    bc.into_iter().map(|b| b / norm).collect()
}

pub fn graph_stats(net: &Network) -> Result<GraphStats> {
    let n = net.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("graph statistics need n ≥ 2, got {n}")));
    }
    let adj = adjacency_lists(net);
    let (bc, dist) = brandes(&adj);
    let norm = if n > 2 { ((n - 1) * (n - 2)) as f64 / 2.0 } else { 1.0 };
    let betweenness_centrality = bc.iter().map(|b| b / norm).sum::<f64>() / n as f64;

    let lcc = connected_components(net).swap_remove(0);
    let mut total = 0usize;
    let mut pairs = 0usize;
    let mut diameter = 0usize;
    for (a, &s) in lcc.iter().enumerate() {
        for &t in &lcc[a + 1..] {
            let d = dist[s][t].expect("same component");
            total += d;
            pairs += 1;
            diameter = diameter.max(d);
        }
    }
    Ok(GraphStats {
        edge_density: 2.0 * net.edge_count() as f64 / (n * (n - 1)) as f64,
        transitivity: transitivity(net),
        betweenness_centrality,
        average_path_length: if pairs == 0 { 0.0 } else { total as f64 / pairs as f64 },
        diameter: diameter as f64,
    })
}

/// Degree → number of nodes with that degree.
pub fn degree_distribution(net: &Network) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for d in net.degrees() {
        *hist.entry(d).or_insert(0) += 1;
    }
    hist
}

/// Sample skewness `m₃ / m₂^{3/2}` of the degree sequence.
pub fn degree_skewness(net: &Network) -> f64 {
    let degs: Vec<f64> = net.degrees().into_iter().map(|d| d as f64).collect();
    let n = degs.len() as f64;
    let mean = degs.iter().sum::<f64>() / n;
    let m2 = degs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
    let m3 = degs.iter().map(|d| (d - mean).powi(3)).sum::<f64>() / n;
    if m2 == 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}
