//! Brute-force diameter: the ground truth for every approximation, and the
//! exact diametrical-pair scan on lattice points.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::float::sqrt;
use crate::geometry::{squared_distance, Algorithm, DiameterResult, Guarantee, PointSet};
use crate::grid::RoundedSet;

/// Exact diameter by scanning all unordered pairs.
///
/// The witness is the first maximal pair in lexicographic index order; a
/// single point yields `0` with witness `(0, 0)`.
pub fn exact_diameter(s: &PointSet) -> Result<DiameterResult> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = s.len();
    let mut best = 0.0;
    let mut witness = (0, 0);
    for i in 0..n {
        let p = s.point(i);
        for j in i + 1..n {
            let d2 = squared_distance(p, s.point(j));
            if d2 > best {
                best = d2;
                witness = (i, j);
            }
        }
    }
    Ok(DiameterResult {
        value: sqrt(best),
        witness: Some(witness),
        algorithm: Algorithm::Exact,
        epsilon: None,
        guarantee: Guarantee::Exact,
    })
}

/// Every pair of lattice entries attaining the maximum distance.
#[derive(Debug, Clone, PartialEq)]
pub struct PairList {
    /// Maximum squared distance in lattice units.
    pub squared: i64,
    /// `sqrt(squared)` scaled by the grid's cell width.
    pub value: f64,
    /// Index pairs into the rounded set, `i < j`, sorted.
    pub pairs: Vec<(usize, usize)>,
}

pub(crate) fn lattice_squared_distance(a: &[i64], b: &[i64]) -> Result<i64> {
    a.iter().zip(b).try_fold(0i64, |acc, (&x, &y)| {
        let t = x.checked_sub(y).ok_or(Error::LatticeOverflow)?;
        let sq = t.checked_mul(t).ok_or(Error::LatticeOverflow)?;
        acc.checked_add(sq).ok_or(Error::LatticeOverflow)
    })
}

/// Maximum squared lattice distance among `cells` and all pairs attaining it.
pub(crate) fn lattice_max_pairs(cells: &[&[i64]]) -> Result<(i64, Vec<(usize, usize)>)> {
    let mut best = 0i64;
    let mut pairs = Vec::new();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let d2 = lattice_squared_distance(cells[i], cells[j])?;
            if d2 > best {
                best = d2;
                pairs.clear();
                pairs.push((i, j));
            } else if d2 == best && d2 > 0 {
                pairs.push((i, j));
            }
        }
    }
    if pairs.is_empty() {
        // one entry, or all entries coincide
        pairs.push((0, 0));
    }
    Ok((best, pairs))
}

/// All diametrical pairs of a rounded set, found with exact integer comparisons.
pub fn diametrical_pairs(s: &RoundedSet) -> Result<PairList> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let cells: Vec<&[i64]> = s.points.iter().map(|p| p.cell.as_slice()).collect();
    let (squared, pairs) = lattice_max_pairs(&cells)?;
    Ok(PairList {
        squared,
        value: s.grid.cell_width() * sqrt(squared as f64),
        pairs,
    })
}
