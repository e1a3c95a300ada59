//! Axis-aligned grids, the two rounding steps, deduplication and column filtering.
//!
//! Lattice points are identified by integer cell vectors, so deduplication and
//! diametrical-pair ties are exact. A coarse grid built with
//! [`GridSpec::staggered`] is linked to its fine grid; conversions between the
//! two are then computed from the integer cells and the width ratio alone,
//! which makes the decisions independent of the data's scale and translation.

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::float::{ceil, floor};
use crate::geometry::{Point, PointSet};

/// How lattice cells map back to real coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMode {
    /// Cell `c` stands for the cell center `origin + (c + 1/2) w`.
    CellCenter,
    /// Cell `c` stands for the grid vertex `origin + c w`.
    GridVertex,
}

/// Link from a staggered vertex grid back to the cell-center grid it was derived from.
#[derive(Debug, Clone, PartialEq)]
struct Anchor {
    fine_origin: Vec<f64>,
    fine_factor: f64,
}

/// An axis-aligned grid with cell width `unit * factor`.
///
/// Positions are measured in multiples of `unit` before being divided by
/// `factor`; the approximation pipeline uses `unit = ell`, so every grid
/// decision is made on ratios that do not change when the input is scaled.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    origin: Point,
    unit: f64,
    factor: f64,
    anchor: Option<Anchor>,
}

fn check_width(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidCellWidth(w))
    }
}

impl GridSpec {
    pub fn new(origin: Point, cell_width: f64) -> Result<Self> {
        check_width(cell_width)?;
        Ok(Self {
            origin,
            unit: cell_width,
            factor: 1.0,
            anchor: None,
        })
    }

    /// Grid of width `unit * factor`; both must be positive.
    pub fn with_unit(origin: Point, unit: f64, factor: f64) -> Result<Self> {
        check_width(unit)?;
        check_width(factor)?;
        check_width(unit * factor)?;
        Ok(Self {
            origin,
            unit,
            factor,
            anchor: None,
        })
    }

    /// A vertex grid of width `fine.unit * factor` whose vertex 0 sits half a
    /// coarse cell above the first fine cell center.
    ///
    /// Fine center `c` then rounds to vertex `floor(c * w_fine / w_coarse)`,
    /// the nearest vertex with ties going up, and the vertices used along an
    /// axis of length `L` never exceed `L / w_coarse + 1`.
    pub fn staggered(fine: &GridSpec, factor: f64) -> Result<Self> {
        check_width(factor)?;
        check_width(fine.unit * factor)?;
        let shift = fine.unit * ((fine.factor + factor) / 2.0);
        let origin = Point::new(fine.origin.coords().iter().map(|o| o + shift).collect())?;
        Ok(Self {
            origin,
            unit: fine.unit,
            factor,
            anchor: Some(Anchor {
                fine_origin: fine.origin.coords().to_vec(),
                fine_factor: fine.factor,
            }),
        })
    }

    #[inline]
    pub fn origin(&self) -> &Point {
        &self.origin
    }

    #[inline]
    pub fn cell_width(&self) -> f64 {
        self.unit * self.factor
    }

    #[inline]
    pub fn unit(&self) -> f64 {
        self.unit
    }

    #[inline]
    pub fn factor(&self) -> f64 {
        self.factor
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.origin.dim()
    }

    /// Width ratio `w_fine / w_self` when `self` is staggered over `fine`.
    fn linked_ratio(&self, fine: &GridSpec) -> Option<f64> {
        let anchor = self.anchor.as_ref()?;
        (anchor.fine_factor == fine.factor
            && self.unit == fine.unit
            && anchor.fine_origin.as_slice() == fine.origin.coords())
        .then(|| fine.factor / self.factor)
    }

    /// Position of `x` along `axis` in cell units.
    #[inline]
    fn cell_coord(&self, axis: usize, x: f64) -> f64 {
        ((x - self.origin.coords()[axis]) / self.unit) / self.factor
    }

    /// Integer cell containing `x` along `axis` (floor rule).
    #[inline]
    pub fn cell_index(&self, axis: usize, x: f64) -> i64 {
        floor(self.cell_coord(axis, x)) as i64
    }

    /// Real coordinate of lattice cell `cell`.
    pub fn embed(&self, cell: &[i64], mode: RoundingMode) -> Point {
        let mut coords = Vec::with_capacity(cell.len());
        self.embed_into(cell, mode, &mut coords);
        Point::new(coords).expect("embedding of a valid lattice cell is finite")
    }

    pub(crate) fn embed_into(&self, cell: &[i64], mode: RoundingMode, out: &mut Vec<f64>) {
        let w = self.cell_width();
        let half = match mode {
            RoundingMode::CellCenter => 0.5,
            RoundingMode::GridVertex => 0.0,
        };
        out.extend(
            self.origin
                .coords()
                .iter()
                .zip(cell)
                .map(|(o, &c)| o + (c as f64 + half) * w),
        );
    }

    /// Nearest vertex of this grid to `x`, ties rounding up.
    pub fn nearest_vertex(&self, x: &[f64]) -> Vec<i64> {
        x.iter()
            .enumerate()
            .map(|(axis, &v)| floor(self.cell_coord(axis, v) + 0.5) as i64)
            .collect()
    }
}

/// One rounded point: its integer cell and the input indices that landed there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub cell: Vec<i64>,
    /// Ascending original indices.
    pub source_indices: Vec<usize>,
}

impl LatticePoint {
    #[inline]
    pub fn representative(&self) -> usize {
        self.source_indices[0]
    }
}

/// A deduplicated rounding of a point set onto a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedSet {
    pub grid: GridSpec,
    pub mode: RoundingMode,
    pub points: Vec<LatticePoint>,
}

impl RoundedSet {
    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn embed(&self, i: usize) -> Point {
        self.grid.embed(&self.points[i].cell, self.mode)
    }

    /// All entries embedded back into real coordinates.
    pub fn to_point_set(&self) -> PointSet {
        let mut coords = Vec::with_capacity(self.len() * self.dim());
        for p in &self.points {
            self.grid.embed_into(&p.cell, self.mode, &mut coords);
        }
        PointSet::from_flat(self.dim(), coords).expect("embedded lattice points are finite")
    }

    /// Entries at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> RoundedSet {
        RoundedSet {
            grid: self.grid.clone(),
            mode: self.mode,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// Total number of original points represented.
    pub fn source_count(&self) -> usize {
        self.points.iter().map(|p| p.source_indices.len()).sum()
    }
}

struct Dedup {
    slots: HashMap<Vec<i64>, usize>,
    points: Vec<LatticePoint>,
}

impl Dedup {
    fn new() -> Self {
        Self {
            slots: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn insert(&mut self, cell: Vec<i64>, sources: &[usize]) {
        match self.slots.get(&cell) {
            Some(&slot) => self.points[slot].source_indices.extend_from_slice(sources),
            None => {
                self.slots.insert(cell.clone(), self.points.len());
                self.points.push(LatticePoint {
                    cell,
                    source_indices: sources.to_vec(),
                });
            }
        }
    }

    fn finish(mut self) -> Vec<LatticePoint> {
        for p in &mut self.points {
            p.source_indices.sort_unstable();
        }
        self.points
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Rounds every point to the center of its cell (floor rule).
///
/// Points on the high face of the set's bounding box are clamped into the
/// last cell instead of opening a new one.
pub fn round_to_cell_centers(s: &PointSet, grid: &GridSpec) -> Result<RoundedSet> {
    let d = s.dim();
    check_dim(grid.dim(), d)?;
    let high = crate::geometry::bounding_box(s)?.high;
    let last: Vec<i64> = (0..d)
        .map(|axis| {
            let cells = ceil(grid.cell_coord(axis, high.coords()[axis])) as i64;
            cells.max(1) - 1
        })
        .collect();

    let mut dedup = Dedup::new();
    for (i, p) in s.iter().enumerate() {
        let cell = p
            .iter()
            .enumerate()
            .map(|(axis, &x)| grid.cell_index(axis, x).min(last[axis]))
            .collect();
        dedup.insert(cell, &[i]);
    }
    Ok(RoundedSet {
        grid: grid.clone(),
        mode: RoundingMode::CellCenter,
        points: dedup.finish(),
    })
}

/// Rounds every cell center of `s` to its nearest vertex of `grid` (ties up),
/// merging entries that meet and uniting their source indices.
pub fn round_to_grid_vertices(s: &RoundedSet, grid: &GridSpec) -> Result<RoundedSet> {
    if s.mode != RoundingMode::CellCenter {
        return Err(Error::WrongRoundingMode);
    }
    check_dim(grid.dim(), s.dim())?;
    let linked = grid.linked_ratio(&s.grid);
    let mut dedup = Dedup::new();
    let mut scratch = Vec::with_capacity(s.dim());
    for p in &s.points {
        let cell = match linked {
            Some(ratio) => p
                .cell
                .iter()
                .map(|&c| floor(c as f64 * ratio) as i64)
                .collect(),
            None => {
                scratch.clear();
                s.grid.embed_into(&p.cell, s.mode, &mut scratch);
                grid.nearest_vertex(&scratch)
            }
        };
        dedup.insert(cell, &p.source_indices);
    }
    Ok(RoundedSet {
        grid: grid.clone(),
        mode: RoundingMode::GridVertex,
        points: dedup.finish(),
    })
}

/// Keeps, among entries sharing their first `d - 1` cell coordinates, only
/// those with the lowest and highest last coordinate.
///
/// The farthest point of a collinear column from any fixed point is one of
/// the column's ends, so the diameter is unchanged.
pub fn column_filter(s: &RoundedSet) -> RoundedSet {
    let d = s.dim();
    let mut extremes: HashMap<&[i64], (usize, usize)> = HashMap::new();
    for (i, p) in s.points.iter().enumerate() {
        let (prefix, last) = (&p.cell[..d - 1], p.cell[d - 1]);
        extremes
            .entry(prefix)
            .and_modify(|(lo, hi)| {
                if last < s.points[*lo].cell[d - 1] {
                    *lo = i;
                }
                if last > s.points[*hi].cell[d - 1] {
                    *hi = i;
                }
            })
            .or_insert((i, i));
    }
    let mut keep = alloc::vec![false; s.len()];
    for &(lo, hi) in extremes.values() {
        keep[lo] = true;
        keep[hi] = true;
    }
    let indices: Vec<usize> = (0..s.len()).filter(|&i| keep[i]).collect();
    s.subset(&indices)
}

/// Number of distinct `(d - 1)`-prefixes of the cell vectors.
pub fn distinct_prefixes(s: &RoundedSet) -> usize {
    let d = s.dim();
    let mut seen: hashbrown::HashSet<&[i64]> = hashbrown::HashSet::new();
    for p in &s.points {
        seen.insert(&p.cell[..d - 1]);
    }
    seen.len()
}

/// Entries whose embedded coordinates lie in the closed cube
/// `|x_i - center_i| <= half_side`.
pub fn collect_box(s: &RoundedSet, center: &Point, half_side: f64) -> Result<RoundedSet> {
    check_dim(s.dim(), center.dim())?;
    let mut scratch = Vec::with_capacity(s.dim());
    let indices: Vec<usize> = (0..s.len())
        .filter(|&i| {
            scratch.clear();
            s.grid.embed_into(&s.points[i].cell, s.mode, &mut scratch);
            scratch
                .iter()
                .zip(center.coords())
                .all(|(x, c)| (x - c).abs() <= half_side)
        })
        .collect();
    Ok(s.subset(&indices))
}

/// Cell centers of `fine` within `half_cells` coarse cells (per axis, closed)
/// of vertex `vertex` of `coarse`.
///
/// Uses lattice arithmetic when `coarse` is staggered over `fine.grid`.
pub fn collect_box_around_vertex(
    fine: &RoundedSet,
    coarse: &GridSpec,
    vertex: &[i64],
    half_cells: f64,
) -> Result<RoundedSet> {
    if fine.mode != RoundingMode::CellCenter {
        return Err(Error::WrongRoundingMode);
    }
    check_dim(fine.dim(), vertex.len())?;
    match coarse.linked_ratio(&fine.grid) {
        Some(ratio) => {
            let indices: Vec<usize> =
                (0..fine.len())
                    .filter(|&i| {
                        fine.points[i].cell.iter().zip(vertex).all(|(&c, &j)| {
                            (c as f64 * ratio - (j as f64 + 0.5)).abs() <= half_cells
                        })
                    })
                    .collect();
            Ok(fine.subset(&indices))
        }
        None => {
            let center = coarse.embed(vertex, RoundingMode::GridVertex);
            collect_box(fine, &center, half_cells * coarse.cell_width())
        }
    }
}
