//! Seeded synthetic point clouds.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)`, so a spec
//! reproduces the same coordinates on every platform.

use std::fmt;
use std::str::FromStr;

use diam_core::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal, StandardNormal};

use crate::error::CliError;

/// Spread of each cluster around its center.
pub const CLUSTER_SPREAD: f64 = 0.05;
pub const DEFAULT_CLUSTERS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distribution {
    /// Uniform in `[0, 1]^d`.
    Cube,
    /// Uniform in the unit ball.
    Ball,
    /// Uniform on the unit sphere.
    Sphere,
    /// Standard normal per coordinate.
    Gauss,
    /// Gaussian blobs around centers uniform in `[0, 1]^d`.
    Clusters,
}

impl Distribution {
    pub const ALL: [Distribution; 5] = [
        Distribution::Cube,
        Distribution::Ball,
        Distribution::Sphere,
        Distribution::Gauss,
        Distribution::Clusters,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::Cube => "cube",
            Distribution::Ball => "ball",
            Distribution::Sphere => "sphere",
            Distribution::Gauss => "gauss",
            Distribution::Clusters => "clusters",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Distribution {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown distribution `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSpec {
    pub distribution: Distribution,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    /// Number of blobs; only meaningful for [`Distribution::Clusters`].
    pub cluster_count: Option<usize>,
}

impl GeneratorSpec {
    pub fn new(distribution: Distribution, n: usize, d: usize, seed: u64) -> Self {
        Self {
            distribution,
            n,
            d,
            seed,
            cluster_count: None,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        if self.d == 0 {
            return Err(CliError::Usage("d must be at least 1".into()));
        }
        match (self.distribution, self.cluster_count) {
            (Distribution::Clusters, Some(0)) => {
                Err(CliError::Usage("cluster count must be at least 1".into()))
            }
            (Distribution::Clusters, _) | (_, None) => Ok(()),
            (other, Some(_)) => Err(CliError::Usage(format!(
                "cluster count given for distribution `{other}`"
            ))),
        }
    }

    /// Short label without the seed, e.g. `cube-n200-d3`.
    pub fn label(&self) -> String {
        match (self.distribution, self.cluster_count) {
            (Distribution::Clusters, Some(k)) => {
                format!("clusters{k}-n{}-d{}", self.n, self.d)
            }
            (dist, _) => format!("{dist}-n{}-d{}", self.n, self.d),
        }
    }
}

fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<PointSet, CliError> {
    spec.validate()?;
    let GeneratorSpec { n, d, .. } = *spec;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coords = Vec::with_capacity(n * d);
    match spec.distribution {
        Distribution::Cube => coords.extend((0..n * d).map(|_| rng.random::<f64>())),
        Distribution::Gauss => {
            coords.extend((0..n * d).map(|_| rng.sample::<f64, _>(StandardNormal)))
        }
        Distribution::Sphere => {
            for _ in 0..n {
                coords.extend(unit_vector(&mut rng, d));
            }
        }
        Distribution::Ball => {
            for _ in 0..n {
                let r = rng.random::<f64>().powf(1.0 / d as f64);
                coords.extend(unit_vector(&mut rng, d).into_iter().map(|x| x * r));
            }
        }
        Distribution::Clusters => {
            let k = spec.cluster_count.unwrap_or(DEFAULT_CLUSTERS);
            let centers: Vec<f64> = (0..k * d).map(|_| rng.random::<f64>()).collect();
            let noise = Normal::new(0.0, CLUSTER_SPREAD).expect("valid spread");
            for _ in 0..n {
                let c = rng.random_range(0..k);
                coords.extend(
                    centers[c * d..(c + 1) * d]
                        .iter()
                        .map(|x| x + noise.sample(&mut rng)),
                );
            }
        }
    }
    Ok(PointSet::from_flat(d, coords)?)
}
