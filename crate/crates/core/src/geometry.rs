//! Points, point sets, bounding boxes and the diameter result type.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::float::sqrt;

/// A point in d-dimensional Euclidean space with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_finite(&coords)?;
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

fn check_finite(coords: &[f64]) -> Result<()> {
    match coords.iter().position(|c| !c.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: coords[index],
        }),
        None => Ok(()),
    }
}

/// A set of points sharing one dimension, stored row-major in a flat buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// An empty set of dimension `dim`.
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            dim,
            coords: Vec::new(),
        })
    }

    /// Builds a set from row-major coordinates; `coords.len()` must be a multiple of `dim`.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        check_finite(&coords)?;
        Ok(Self { dim, coords })
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptySet)?;
        let mut set = Self::new(first.dim())?;
        set.coords.reserve(points.len() * set.dim);
        for p in points {
            set.push(p.coords())?;
        }
        Ok(set)
    }

    pub fn push(&mut self, coords: &[f64]) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: coords.len(),
            });
        }
        check_finite(coords)?;
        self.coords.extend_from_slice(coords);
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates of point `i`. Panics if out of range.
    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, i: usize) -> Option<Point> {
        (i < self.len()).then(|| Point {
            coords: self.point(i).to_vec(),
        })
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Applies `f` to every coordinate, producing a new set.
    pub fn map_coords(&self, mut f: impl FnMut(usize, f64) -> f64) -> Result<Self> {
        let dim = self.dim;
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, &c)| f(k % dim, c))
            .collect();
        Self::from_flat(dim, coords)
    }
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum()
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    distance_slices(a.coords(), b.coords())
}

pub fn distance_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(sqrt(squared_distance(a, b)))
}

/// Axis-parallel bounding box of a non-empty point set.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub low: Point,
    pub high: Point,
    pub side_lengths: Vec<f64>,
    /// Length of the largest side.
    pub ell: f64,
}

impl BoundingBox {
    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.low.dim()
            && p.iter()
                .zip(self.low.coords().iter().zip(self.high.coords()))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }
}

pub fn bounding_box(s: &PointSet) -> Result<BoundingBox> {
    let mut points = s.iter();
    let first = points.next().ok_or(Error::EmptySet)?;
    let mut low = first.to_vec();
    let mut high = first.to_vec();
    for p in points {
        for ((lo, hi), &x) in low.iter_mut().zip(high.iter_mut()).zip(p) {
            if x < *lo {
                *lo = x;
            }
            if x > *hi {
                *hi = x;
            }
        }
    }
    let side_lengths: Vec<f64> = low.iter().zip(&high).map(|(lo, hi)| hi - lo).collect();
    let ell = side_lengths.iter().copied().fold(0.0, f64::max);
    Ok(BoundingBox {
        low: Point { coords: low },
        high: Point { coords: high },
        side_lengths,
        ell,
    })
}

/// Which routine produced a [`DiameterResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Exact,
    TwoApprox,
    Agarwal,
    Chan,
    Algorithm1,
    Algorithm2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Exact,
        Algorithm::TwoApprox,
        Algorithm::Agarwal,
        Algorithm::Algorithm1,
        Algorithm::Algorithm2,
        Algorithm::Chan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::TwoApprox => "twoapprox",
            Algorithm::Agarwal => "agarwal",
            Algorithm::Chan => "chan",
            Algorithm::Algorithm1 => "algo1",
            Algorithm::Algorithm2 => "algo2",
        }
    }

    pub fn uses_epsilon(self) -> bool {
        !matches!(self, Algorithm::Exact | Algorithm::TwoApprox)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownAlgorithm;

impl fmt::Display for UnknownAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of exact, twoapprox, agarwal, algo1, algo2, chan")
    }
}

impl core::error::Error for UnknownAlgorithm {}

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or(UnknownAlgorithm)
    }
}

/// The contract a result satisfies relative to the true diameter `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    /// `value == D`.
    Exact,
    /// `D <= value <= (1+eps) D`.
    UpperSandwich,
    /// `value <= D`, with an algorithm-specific lower factor.
    LowerSandwich,
    /// `D/2 <= value <= D`.
    TwoApprox,
}

impl Guarantee {
    pub fn as_str(self) -> &'static str {
        match self {
            Guarantee::Exact => "exact",
            Guarantee::UpperSandwich => "upper_sandwich",
            Guarantee::LowerSandwich => "lower_sandwich",
            Guarantee::TwoApprox => "two_approx",
        }
    }
}

/// A diameter value together with an auditable witness pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DiameterResult {
    pub value: f64,
    /// Indices into the input set, smaller index first.
    pub witness: Option<(usize, usize)>,
    pub algorithm: Algorithm,
    pub epsilon: Option<f64>,
    pub guarantee: Guarantee,
}

impl DiameterResult {
    pub(crate) fn zero(algorithm: Algorithm, epsilon: Option<f64>, guarantee: Guarantee) -> Self {
        Self {
            value: 0.0,
            witness: Some((0, 0)),
            algorithm,
            epsilon,
            guarantee,
        }
    }
}

/// `lo_factor * oracle <= result.value <= hi_factor * oracle`.
pub fn diameter_bounds_check(
    result: &DiameterResult,
    oracle: f64,
    lo_factor: f64,
    hi_factor: f64,
) -> bool {
    lo_factor * oracle <= result.value && result.value <= hi_factor * oracle
}

#[inline]
pub(crate) fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Picks the first point and returns its farthest neighbour; within a factor 2 of the diameter.
pub fn two_approx_diameter(s: &PointSet) -> Result<DiameterResult> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let seed = s.point(0);
    let (far, best) = s
        .iter()
        .map(|p| squared_distance(seed, p))
        .enumerate()
        .fold(
            (0, 0.0),
            |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) },
        );
    Ok(DiameterResult {
        value: sqrt(best),
        witness: Some((0, far)),
        algorithm: Algorithm::TwoApprox,
        epsilon: None,
        guarantee: Guarantee::TwoApprox,
    })
}
