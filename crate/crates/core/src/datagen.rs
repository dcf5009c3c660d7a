//! Seeded synthetic point sets and query streams on the planar grid
//! `[0, Δ)²`.
//!
//! All generators draw from ChaCha8 seeded with the 64-bit seed of the spec, so the
//! output is a pure function of the spec.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Geometric, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};

/// Name of the generator behind every dataset and query stream.
pub const PRNG_ALGORITHM: &str = "ChaCha8 (rand_chacha, seed_from_u64)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Uniform,
    Gaussian,
    Skewed,
    Clustered,
}

impl Distribution {
    pub const ALL: [Distribution; 4] = [
        Distribution::Uniform,
        Distribution::Gaussian,
        Distribution::Skewed,
        Distribution::Clustered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::Gaussian => "gaussian",
            Distribution::Skewed => "skewed",
            Distribution::Clustered => "clustered",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown distribution `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetSpec {
    pub distribution: Distribution,
    pub n: usize,
    pub domain: Domain<2>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuerySpec {
    pub centre_distribution: Distribution,
    /// Query diameter relative to the domain extent.
    pub rho: f64,
    pub count: usize,
    pub seed: u64,
    pub domain: Domain<2>,
}

impl QuerySpec {
    /// `⌊⌊rho·Δ⌋ / 2⌋`.
    pub fn radius(&self) -> u64 {
        query_radius(self.rho, &self.domain)
    }
}

/// Radius for relative query diameter `rho`: the diameter `⌊rho·Δ⌋` halved.
pub fn query_radius(rho: f64, domain: &Domain<2>) -> u64 {
    let diameter = (rho * domain.extent() as f64).floor() as u64;
    diameter / 2
}

/// Success probability of the skewed generator's geometric y coordinate,
/// giving a mean of about Δ/16.
pub fn skew_probability(domain: &Domain<2>) -> f64 {
    (16.0 / domain.extent() as f64).min(1.0)
}

/// Points per cluster for `n` points: `⌊√n⌋` clusters of `⌊√n⌋` points, the
/// remainder dealt round-robin from the first cluster on.
pub fn cluster_sizes(n: usize) -> Vec<usize> {
    let k = n.isqrt();
    if k == 0 {
        return Vec::new();
    }
    let extra = n - k * k;
    (0..k).map(|i| k + extra / k + usize::from(i < extra % k)).collect()
}

/// One cluster of the clustered distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub centre: Point<2>,
    pub points: Vec<Point<2>>,
}

fn uniform(rng: &mut ChaCha8Rng, extent: u64) -> Point<2> {
    Point([rng.random_range(0..extent) as u32, rng.random_range(0..extent) as u32])
}

/// Rounds normal draws, redrawing each coordinate until it lands in `[0, extent)`.
fn rounded_normal(rng: &mut ChaCha8Rng, normal: &Normal<f64>, offset: f64, extent: u64) -> u32 {
    loop {
        let v = (offset + normal.sample(rng)).round();
        if v >= 0.0 && v < extent as f64 {
            return v as u32;
        }
    }
}

fn validate(spec: &DatasetSpec) -> Result<()> {
    if spec.n == 0 {
        return Err(Error::Config("dataset size must be at least 1".into()));
    }
    Ok(())
}

/// The clustered distribution with its structure kept visible.
pub fn gen_clusters(spec: &DatasetSpec) -> Result<Vec<Cluster>> {
    validate(spec)?;
    let extent = spec.domain.extent();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sizes = cluster_sizes(spec.n);
    let centres: Vec<_> = sizes.iter().map(|_| uniform(&mut rng, extent)).collect();
    let spread = Normal::new(0.0, extent as f64 / 100.0).expect("positive sigma");
    Ok(centres
        .into_iter()
        .zip(sizes)
        .map(|(centre, size)| {
            let points = (0..size)
                .map(|_| {
                    Point([
                        rounded_normal(&mut rng, &spread, centre.x() as f64, extent),
                        rounded_normal(&mut rng, &spread, centre.y() as f64, extent),
                    ])
                })
                .collect();
            Cluster { centre, points }
        })
        .collect())
}

pub fn gen_points(spec: &DatasetSpec) -> Result<Vec<Point<2>>> {
    validate(spec)?;
    let extent = spec.domain.extent();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let points = match spec.distribution {
        Distribution::Uniform => (0..spec.n).map(|_| uniform(&mut rng, extent)).collect(),
        Distribution::Gaussian => {
            let normal = Normal::new(0.0, extent as f64 / 8.0).expect("positive sigma");
            let mean = extent as f64 / 2.0;
            (0..spec.n)
                .map(|_| {
                    Point([
                        rounded_normal(&mut rng, &normal, mean, extent),
                        rounded_normal(&mut rng, &normal, mean, extent),
                    ])
                })
                .collect()
        }
        Distribution::Skewed => {
            let geo = Geometric::new(skew_probability(&spec.domain)).expect("probability in (0, 1]");
            (0..spec.n)
                .map(|_| {
                    let x = rng.random_range(0..extent) as u32;
                    let y = geo.sample(&mut rng).min(extent - 1) as u32;
                    Point([x, y])
                })
                .collect()
        }
        Distribution::Clustered => gen_clusters(spec)?.into_iter().flat_map(|c| c.points).collect(),
    };
    Ok(points)
}

/// Query centres and the common radius for `spec`.
pub fn gen_queries(spec: &QuerySpec) -> Result<Vec<(Point<2>, u64)>> {
    if !(spec.rho > 0.0 && spec.rho <= 1.0) {
        return Err(Error::Config(format!("rho must be in (0, 1], got {}", spec.rho)));
    }
    if spec.count == 0 {
        return Err(Error::Config("query count must be at least 1".into()));
    }
    let centres = gen_points(&DatasetSpec {
        distribution: spec.centre_distribution,
        n: spec.count,
        domain: spec.domain,
        seed: spec.seed,
    })?;
    let r = spec.radius();
    Ok(centres.into_iter().map(|c| (c, r)).collect())
}
