//! Grid-based approximate diameter.
//!
//! Both algorithms share the same front half:
//!
//! 1. bounding box of the input and its longest side `ell`;
//! 2. round every point to the center of its cell in a fine grid of width
//!    `eps * ell / (2 sqrt d)`, giving `S_hat`;
//! 3. round `S_hat` to the nearest vertex of a coarse grid, giving `S1`
//!    (width `sqrt(eps) ell / (2 sqrt d)` for [`algorithm1`],
//!    `eps^(1/3) ell / (2 sqrt d)` for [`algorithm2`]);
//! 4. find every diametrical pair of `S1` exactly;
//! 5. around each pair collect the `S_hat` points in the two cubes of side
//!    `3/2` coarse cells centered at the pair.
//!
//! [`algorithm1`] then takes the exact diameter of each pair of cubes and
//! adds `eps * ell / 2`, which yields `D <= value <= (1+eps) D`.
//! [`algorithm2`] runs the recursive planar projection on each pair of cubes
//! instead and returns the largest projected distance.

use alloc::vec::Vec;

use crate::error::{check_epsilon, Error, Result};
use crate::exact::{lattice_max_pairs, PairList};
use crate::float::{cbrt, sqrt};
use crate::geometry::{bounding_box, ordered, Algorithm, DiameterResult, Guarantee, PointSet};
use crate::grid::{
    collect_box_around_vertex, column_filter, distinct_prefixes, round_to_cell_centers,
    round_to_grid_vertices, GridSpec, RoundedSet,
};
use crate::projection::{chan_on, Best};

/// Parameters shared by both algorithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoConfig {
    pub epsilon: f64,
    /// Half side of the candidate cubes in coarse cells; `3/4` gives cubes of
    /// side `3/2` coarse cells.
    pub box_half_side_multiplier: f64,
    /// Keep only the lowest and highest entry of every column of `S1` and of
    /// the candidate cubes.
    pub enable_column_filter: bool,
}

impl AlgoConfig {
    pub const DEFAULT_BOX_MULTIPLIER: f64 = 0.75;

    pub fn new(epsilon: f64) -> Result<Self> {
        let cfg = Self {
            epsilon,
            box_half_side_multiplier: Self::DEFAULT_BOX_MULTIPLIER,
            enable_column_filter: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        let m = self.box_half_side_multiplier;
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidCellWidth(m));
        }
        Ok(())
    }
}

/// Which search runs on the candidate cubes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Exact brute force, coarse width `sqrt(eps)`.
    BruteForce,
    /// Recursive planar projection, coarse width `eps^(1/3)`.
    Recursive,
}

impl Variant {
    pub fn algorithm(self) -> Algorithm {
        match self {
            Variant::BruteForce => Algorithm::Algorithm1,
            Variant::Recursive => Algorithm::Algorithm2,
        }
    }

    /// Exponent `e` of the coarse width `eps^e ell / (2 sqrt d)`.
    pub fn coarse_exponent(self) -> f64 {
        match self {
            Variant::BruteForce => 0.5,
            Variant::Recursive => 1.0 / 3.0,
        }
    }

    fn coarse_scale(self, epsilon: f64) -> f64 {
        match self {
            Variant::BruteForce => sqrt(epsilon),
            Variant::Recursive => cbrt(epsilon),
        }
    }
}

/// Upper bound on the number of coarse vertices: `(2 sqrt d / eps^e + 1)^d`.
pub fn coarse_vertex_bound(d: usize, epsilon: f64, variant: Variant) -> f64 {
    libm::pow(
        2.0 * sqrt(d as f64) / variant.coarse_scale(epsilon) + 1.0,
        d as f64,
    )
}

/// Volume estimate of the cells in one candidate cube:
/// `(3/2)^d / eps^(d (1 - e))`.
pub fn box_cell_bound(d: usize, epsilon: f64, variant: Variant) -> f64 {
    let d = d as f64;
    libm::pow(1.5, d) / libm::pow(epsilon, d * (1.0 - variant.coarse_exponent()))
}

/// Sizes observed during one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub ell: f64,
    pub fine_width: f64,
    pub coarse_width: f64,
    /// `|S_hat|`.
    pub fine_points: usize,
    /// `|S1|` before column filtering.
    pub coarse_points: usize,
    /// Distinct `(d-1)`-prefixes of `S1`.
    pub coarse_prefixes: usize,
    /// `|S1|` after column filtering (equal to `coarse_points` when disabled).
    pub coarse_filtered: usize,
    pub diametrical_pairs: usize,
    /// `(|B1|, |B2|)` per diametrical pair, before column filtering.
    pub box_sizes: Vec<(usize, usize)>,
    /// Points searched per pair after filtering and union.
    pub searched: Vec<usize>,
}

/// Output of the rounding stage (steps 1-3).
#[derive(Debug, Clone)]
pub struct Rounded {
    cfg: AlgoConfig,
    variant: Variant,
    s_hat: Option<RoundedSet>,
    s1_raw: Option<RoundedSet>,
    stats: RunStats,
}

impl Rounded {
    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    pub fn s_hat(&self) -> Option<&RoundedSet> {
        self.s_hat.as_ref()
    }

    pub fn s1(&self) -> Option<&RoundedSet> {
        self.s1_raw.as_ref()
    }
}

/// Steps 1-3: bounding box, fine cell-center rounding, coarse vertex rounding.
pub fn round_stage(s: &PointSet, cfg: &AlgoConfig, variant: Variant) -> Result<Rounded> {
    cfg.validate()?;
    let bbox = bounding_box(s)?;
    let ell = bbox.ell;
    let mut stats = RunStats {
        ell,
        ..RunStats::default()
    };
    if ell == 0.0 {
        return Ok(Rounded {
            cfg: *cfg,
            variant,
            s_hat: None,
            s1_raw: None,
            stats,
        });
    }

    let d = s.dim();
    let denom = 2.0 * sqrt(d as f64);
    let fine_grid = GridSpec::with_unit(bbox.low, ell, cfg.epsilon / denom)?;
    let coarse_grid = GridSpec::staggered(&fine_grid, variant.coarse_scale(cfg.epsilon) / denom)?;

    let s_hat = round_to_cell_centers(s, &fine_grid)?;
    let s1_raw = round_to_grid_vertices(&s_hat, &coarse_grid)?;
    stats.fine_width = fine_grid.cell_width();
    stats.coarse_width = coarse_grid.cell_width();
    stats.fine_points = s_hat.len();
    stats.coarse_points = s1_raw.len();
    stats.coarse_prefixes = distinct_prefixes(&s1_raw);
    debug_assert!(stats.coarse_points <= s.len());
    debug_assert!(stats.coarse_points as f64 <= coarse_vertex_bound(d, cfg.epsilon, variant));
    Ok(Rounded {
        cfg: *cfg,
        variant,
        s_hat: Some(s_hat),
        s1_raw: Some(s1_raw),
        stats,
    })
}

/// One `(B1, B2)` per diametrical pair: the `S_hat` entries within
/// `half_side_cells` coarse cells of each end of the pair.
pub fn candidate_boxes(
    s_hat: &RoundedSet,
    s1: &RoundedSet,
    pairs: &PairList,
    half_side_cells: f64,
) -> Result<Vec<(RoundedSet, RoundedSet)>> {
    pairs
        .pairs
        .iter()
        .map(|&(i, j)| {
            let b1 =
                collect_box_around_vertex(s_hat, &s1.grid, &s1.points[i].cell, half_side_cells)?;
            let b2 =
                collect_box_around_vertex(s_hat, &s1.grid, &s1.points[j].cell, half_side_cells)?;
            Ok((b1, b2))
        })
        .collect()
}

fn union(a: &RoundedSet, b: &RoundedSet) -> RoundedSet {
    let seen: hashbrown::HashSet<&[i64]> = a.points.iter().map(|p| p.cell.as_slice()).collect();
    let mut points = a.points.clone();
    points.extend(
        b.points
            .iter()
            .filter(|p| !seen.contains(p.cell.as_slice()))
            .cloned(),
    );
    RoundedSet {
        grid: a.grid.clone(),
        mode: a.mode,
        points,
    }
}

impl Rounded {
    /// Steps 4-5 and the final search.
    pub fn search(self) -> Result<(DiameterResult, RunStats)> {
        let Rounded {
            cfg,
            variant,
            s_hat,
            s1_raw,
            mut stats,
        } = self;
        let algorithm = variant.algorithm();
        let guarantee = match variant {
            Variant::BruteForce => Guarantee::UpperSandwich,
            Variant::Recursive => Guarantee::LowerSandwich,
        };
        let (Some(s_hat), Some(s1_raw)) = (s_hat, s1_raw) else {
            stats.coarse_filtered = 0;
            return Ok((
                DiameterResult::zero(algorithm, Some(cfg.epsilon), guarantee),
                stats,
            ));
        };

        let s1 = if cfg.enable_column_filter {
            column_filter(&s1_raw)
        } else {
            s1_raw
        };
        stats.coarse_filtered = s1.len();
        debug_assert!(
            !cfg.enable_column_filter || stats.coarse_filtered <= 2 * stats.coarse_prefixes
        );

        let pairs = crate::exact::diametrical_pairs(&s1)?;
        stats.diametrical_pairs = pairs.pairs.len();
        let boxes = candidate_boxes(&s_hat, &s1, &pairs, cfg.box_half_side_multiplier)?;

        let d = s_hat.dim();
        let mut best_sq: Option<(i64, (usize, usize))> = None;
        let mut best: Option<Best> = None;
        let mut local = Vec::new();
        for (b1, b2) in &boxes {
            stats.box_sizes.push((b1.len(), b2.len()));
            let searched = if cfg.enable_column_filter {
                union(&column_filter(b1), &column_filter(b2))
            } else {
                union(b1, b2)
            };
            stats.searched.push(searched.len());
            match variant {
                Variant::BruteForce => {
                    let cells: Vec<&[i64]> =
                        searched.points.iter().map(|p| p.cell.as_slice()).collect();
                    let (sq, max_pairs) = lattice_max_pairs(&cells)?;
                    let witness = max_pairs
                        .iter()
                        .map(|&(a, b)| {
                            ordered(
                                searched.points[a].representative(),
                                searched.points[b].representative(),
                            )
                        })
                        .min()
                        .expect("at least one pair");
                    match best_sq {
                        Some((v, w)) if sq < v || (sq == v && witness >= w) => {}
                        _ => best_sq = Some((sq, witness)),
                    }
                }
                Variant::Recursive => {
                    // cell centers in fine-cell units, rescaled once at the end
                    local.clear();
                    for p in &searched.points {
                        local.extend(p.cell.iter().map(|&c| c as f64 + 0.5));
                    }
                    let prov: Vec<usize> =
                        searched.points.iter().map(|p| p.representative()).collect();
                    let b = chan_on(&local, d, &prov, cfg.epsilon)?;
                    Best::offer(&mut best, b.value, b.witness);
                }
            }
        }

        let (value, witness) = match variant {
            Variant::BruteForce => {
                let (sq, witness) = best_sq.ok_or(Error::EmptySet)?;
                // D_hat + eps*ell/2, evaluated in units of ell
                let d_hat = s_hat.grid.factor() * sqrt(sq as f64);
                (stats.ell * (d_hat + cfg.epsilon / 2.0), witness)
            }
            Variant::Recursive => {
                let b = best.ok_or(Error::EmptySet)?;
                (stats.ell * (s_hat.grid.factor() * b.value), b.witness)
            }
        };
        Ok((
            DiameterResult {
                value,
                witness: Some(witness),
                algorithm,
                epsilon: Some(cfg.epsilon),
                guarantee,
            },
            stats,
        ))
    }
}

/// Grid rounding plus brute force on the candidate cubes:
/// `D <= value <= (1+eps) D`.
pub fn algorithm1(s: &PointSet, cfg: &AlgoConfig) -> Result<DiameterResult> {
    algorithm1_with_stats(s, cfg).map(|(r, _)| r)
}

pub fn algorithm1_with_stats(s: &PointSet, cfg: &AlgoConfig) -> Result<(DiameterResult, RunStats)> {
    round_stage(s, cfg, Variant::BruteForce)?.search()
}

/// Grid rounding plus recursive projection on the candidate cubes:
/// `D (1 - eps/2) / (1+eps)^(d-1) <= value <= (1+eps) D`.
pub fn algorithm2(s: &PointSet, cfg: &AlgoConfig) -> Result<DiameterResult> {
    algorithm2_with_stats(s, cfg).map(|(r, _)| r)
}

pub fn algorithm2_with_stats(s: &PointSet, cfg: &AlgoConfig) -> Result<(DiameterResult, RunStats)> {
    round_stage(s, cfg, Variant::Recursive)?.search()
}

/// Lower factor of the algorithm-2 guarantee, `(1 - eps/2) / (1+eps)^(d-1)`.
pub fn algorithm2_lower_factor(d: usize, epsilon: f64) -> f64 {
    (1.0 - epsilon / 2.0) / libm::pow(1.0 + epsilon, d as f64 - 1.0)
}
