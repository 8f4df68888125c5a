//! Network latent space model on a hyperbolic space of learnable curvature.
//!
//! Networks are modelled as independent Bernoulli edges whose probabilities
//! decay with the hyperbolic distance between latent positions on the
//! hyperboloid. The crate covers maximum-likelihood fitting by manifold
//! gradient descent, spectral initialization, simulation, and bootstrap
//! inference on the curvature.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod inference;
pub mod init;
pub mod model;
pub mod netgen;
pub mod optim;

pub use error::{Error, Result};
pub use geometry::{Curvature, HyperboloidPoint, PoincarePoint};
pub use model::{Geometry, LatentEmbedding, LinkFunction, Network};
