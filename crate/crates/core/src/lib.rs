//! Approximate diameter of a point set in d-dimensional Euclidean space.
//!
//! The crate is `no_std` (it needs `alloc`) and has no I/O. It provides:
//!
//! * [`exact_diameter`], the quadratic brute force used as ground truth;
//! * [`two_approx_diameter`], the farthest neighbour of the first point;
//! * [`agarwal_diameter`], projection onto a direction set covering the sphere;
//! * [`chan_recursive_diameter`], recursive projection through planar directions;
//! * [`algorithm1`] and [`algorithm2`], two-level grid rounding that shrinks
//!   the search to a pair of small cubes around each diametrical pair of a
//!   coarse grid.
//!
//! ```
//! use diam_core::{algorithm1, exact_diameter, AlgoConfig, PointSet};
//!
//! let s = PointSet::from_flat(2, vec![0.0, 0.0, 3.0, 4.0, 1.0, 1.0]).unwrap();
//! let exact = exact_diameter(&s).unwrap().value;
//! let approx = algorithm1(&s, &AlgoConfig::new(0.1).unwrap()).unwrap().value;
//! assert!(exact <= approx && approx <= 1.1 * exact);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod approx;
pub mod error;
pub mod exact;
mod float;
pub mod geometry;
pub mod grid;
pub mod projection;

pub use approx::{
    algorithm1, algorithm1_with_stats, algorithm2, algorithm2_with_stats, AlgoConfig, RunStats,
    Variant,
};
pub use error::{Error, Result};
pub use exact::{diametrical_pairs, exact_diameter, PairList};
pub use geometry::{
    bounding_box, diameter_bounds_check, distance, two_approx_diameter, Algorithm, BoundingBox,
    DiameterResult, Guarantee, Point, PointSet,
};
pub use grid::{GridSpec, LatticePoint, RoundedSet, RoundingMode};
pub use projection::{
    agarwal_diameter, build_v2, build_vd, chan_recursive_diameter, pi_a, DirectionSet, ProjectedSet,
};

/// Runs `algorithm` on `s`; `epsilon` is ignored by the exact and 2-approximate routines.
pub fn run(algorithm: Algorithm, s: &PointSet, epsilon: f64) -> Result<DiameterResult> {
    match algorithm {
        Algorithm::Exact => exact_diameter(s),
        Algorithm::TwoApprox => two_approx_diameter(s),
        Algorithm::Agarwal => agarwal_diameter(s, epsilon),
        Algorithm::Chan => chan_recursive_diameter(s, epsilon),
        Algorithm::Algorithm1 => algorithm1(s, &AlgoConfig::new(epsilon)?),
        Algorithm::Algorithm2 => algorithm2(s, &AlgoConfig::new(epsilon)?),
    }
}

/// Whether `value` honours the contract of `algorithm` against the exact
/// diameter `oracle` of a `d`-dimensional input. Comparisons are exact.
pub fn satisfies_guarantee(
    algorithm: Algorithm,
    epsilon: f64,
    d: usize,
    value: f64,
    oracle: f64,
) -> bool {
    match algorithm {
        Algorithm::Exact => value == oracle,
        Algorithm::TwoApprox => oracle <= 2.0 * value && value <= oracle,
        Algorithm::Agarwal => value <= oracle && oracle <= (1.0 + epsilon) * value,
        Algorithm::Chan => {
            value <= oracle && oracle <= libm::pow(1.0 + epsilon, d as f64 - 1.0) * value
        }
        Algorithm::Algorithm1 => oracle <= value && value <= (1.0 + epsilon) * oracle,
        Algorithm::Algorithm2 => {
            approx::algorithm2_lower_factor(d, epsilon) * oracle <= value
                && value <= (1.0 + epsilon) * oracle
        }
    }
}
