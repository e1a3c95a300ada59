//! Direction sets and projection-based diameter approximations.
//!
//! * [`agarwal_diameter`] projects onto a set of directions covering the
//!   sphere and keeps the widest extent.
//! * [`chan_recursive_diameter`] replaces the first two coordinates by their
//!   projection onto each planar direction of [`build_v2`], recursing one
//!   dimension down each time until a line is left.
//!
//! Both return lower bounds: a projection never lengthens a segment.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::error::{check_epsilon, Error, Result};
use crate::float::{asin, ceil, cos, sin, sqrt};
use crate::geometry::{ordered, Algorithm, DiameterResult, Guarantee, Point, PointSet};

/// A finite set of unit vectors, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    ambient_dim: usize,
    vectors: Vec<f64>,
    /// Every direction (up to sign) is within `angular_gap / 2` of a member.
    pub angular_gap: f64,
}

impl DirectionSet {
    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vectors.len() / self.ambient_dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.vectors.chunks_exact(self.ambient_dim)
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    /// The single direction of the real line.
    fn line() -> Self {
        Self {
            ambient_dim: 1,
            vectors: alloc::vec![1.0],
            angular_gap: 0.0,
        }
    }
}

/// `ceil(pi / sqrt(eps))` planar directions evenly spaced over `[0, pi)`.
pub fn build_v2(epsilon: f64) -> Result<DirectionSet> {
    check_epsilon(epsilon)?;
    let k = ceil(PI / sqrt(epsilon)) as usize;
    let mut vectors = Vec::with_capacity(2 * k);
    for j in 0..k {
        let theta = j as f64 * PI / k as f64;
        vectors.push(cos(theta));
        vectors.push(sin(theta));
    }
    Ok(DirectionSet {
        ambient_dim: 2,
        vectors,
        angular_gap: PI / k as f64,
    })
}

/// Unit directions through a uniform grid on the boundary of `[-1, 1]^d`.
///
/// Each face carries `m + 1` nodes per free axis, `m` even so the face
/// centers (the coordinate axes) are members. With spacing `2/m` a face point
/// is within `sqrt(d-1)/m` of a node, hence within angle
/// `asin(sqrt(d-1)/m)` of it; `m` is chosen so this is at most `sqrt(eps)`.
/// Only the `+1` faces are used since extents are sign-invariant, and a node
/// shared by several faces is kept on the lowest-numbered one.
pub fn build_vd(epsilon: f64, d: usize) -> Result<DirectionSet> {
    check_epsilon(epsilon)?;
    if d < 2 {
        return Err(Error::DimensionTooSmall {
            needed: 2,
            found: d,
        });
    }
    let free = d - 1;
    let radius = sqrt(free as f64);
    let step = 2.0 * sin(sqrt(epsilon)) / radius;
    let m = 2 * (ceil(1.0 / step) as usize);
    let nodes: Vec<f64> = (0..=m)
        .map(|j| (2 * j as i64 - m as i64) as f64 / m as f64)
        .collect();

    let mut vectors = Vec::new();
    let mut idx = alloc::vec![0usize; free];
    let mut v = alloc::vec![0.0; d];
    for face in 0..d {
        idx.iter_mut().for_each(|j| *j = 0);
        'nodes: loop {
            // axes below `face` must not sit on another face
            let mut owned = true;
            let mut k = 0;
            for (axis, slot) in v.iter_mut().enumerate() {
                if axis == face {
                    *slot = 1.0;
                } else {
                    let j = idx[k];
                    k += 1;
                    if axis < face && (j == 0 || j == m) {
                        owned = false;
                    }
                    *slot = nodes[j];
                }
            }
            if owned {
                let norm = sqrt(v.iter().map(|x| x * x).sum());
                vectors.extend(v.iter().map(|x| x / norm));
            }
            for j in idx.iter_mut().rev() {
                *j += 1;
                if *j <= m {
                    continue 'nodes;
                }
                *j = 0;
            }
            break;
        }
    }
    Ok(DirectionSet {
        ambient_dim: d,
        vectors,
        angular_gap: 2.0 * asin(radius / m as f64),
    })
}

/// Scalar products `a . p` for every point of `s`.
pub fn project_all(s: &PointSet, a: &[f64]) -> Result<Vec<f64>> {
    if a.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: a.len(),
        });
    }
    Ok(s.iter().map(|p| dot(a, p)).collect())
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Running maximum with deterministic witness tie-breaking.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Best {
    pub value: f64,
    pub witness: (usize, usize),
}

impl Best {
    #[inline]
    pub(crate) fn offer(slot: &mut Option<Best>, value: f64, witness: (usize, usize)) {
        match slot {
            Some(b) if value < b.value || (value == b.value && witness >= b.witness) => {}
            _ => *slot = Some(Best { value, witness }),
        }
    }
}

/// Extent of `values` (tagged with provenance) with ties resolved toward the
/// smaller original index at each end.
#[inline]
fn extent(values: impl Iterator<Item = (f64, usize)>) -> (f64, (usize, usize)) {
    let mut lo = (f64::INFINITY, usize::MAX);
    let mut hi = (f64::NEG_INFINITY, usize::MAX);
    for (v, i) in values {
        if v < lo.0 || (v == lo.0 && i < lo.1) {
            lo = (v, i);
        }
        if v > hi.0 || (v == hi.0 && i < hi.1) {
            hi = (v, i);
        }
    }
    (hi.0 - lo.0, ordered(lo.1, hi.1))
}

/// Widest projected extent over the directions of `dirs`.
pub fn agarwal_with_directions(
    s: &PointSet,
    dirs: &DirectionSet,
    epsilon: f64,
) -> Result<DiameterResult> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if dirs.ambient_dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: dirs.ambient_dim(),
        });
    }
    let mut best = None;
    for a in dirs.iter() {
        let (value, witness) = extent(s.iter().enumerate().map(|(i, p)| (dot(a, p), i)));
        Best::offer(&mut best, value, witness);
    }
    let best = best.expect("direction set is non-empty");
    Ok(DiameterResult {
        value: best.value,
        witness: Some(best.witness),
        algorithm: Algorithm::Agarwal,
        epsilon: Some(epsilon),
        guarantee: Guarantee::LowerSandwich,
    })
}

/// Projection onto the directions of [`build_vd`]: `value <= D <= (1+eps) value`.
pub fn agarwal_diameter(s: &PointSet, epsilon: f64) -> Result<DiameterResult> {
    check_epsilon(epsilon)?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let dirs = match s.dim() {
        1 => DirectionSet::line(),
        d => build_vd(epsilon, d)?,
    };
    agarwal_with_directions(s, &dirs, epsilon)
}

fn check_unit(a: &[f64]) -> Result<()> {
    let norm = sqrt(dot(a, a));
    if (norm - 1.0).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(Error::NotUnit(norm))
    }
}

/// `(a1 x1 + a2 x2, x3, ..., xd)`.
pub fn pi_a(x: &Point, a: [f64; 2]) -> Result<Point> {
    let c = x.coords();
    if c.len() < 2 {
        return Err(Error::DimensionTooSmall {
            needed: 2,
            found: c.len(),
        });
    }
    check_unit(&a)?;
    let mut out = Vec::with_capacity(c.len() - 1);
    out.push(a[0] * c[0] + a[1] * c[1]);
    out.extend_from_slice(&c[2..]);
    Point::new(out)
}

/// A point set one dimension down, remembering where each point came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedSet {
    pub points: PointSet,
    /// Original input index of each point.
    pub provenance: Vec<usize>,
}

impl ProjectedSet {
    /// Wraps an input set with identity provenance.
    pub fn identity(s: &PointSet) -> Self {
        Self {
            points: s.clone(),
            provenance: (0..s.len()).collect(),
        }
    }
}

/// Applies [`pi_a`] to every point and merges bitwise-equal images, keeping
/// the smallest original index.
pub fn project_set(s: &ProjectedSet, a: [f64; 2]) -> Result<ProjectedSet> {
    let d = s.points.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall {
            needed: 2,
            found: d,
        });
    }
    check_unit(&a)?;
    let (coords, provenance) = project_flat(s.points.as_flat(), d, &s.provenance, a);
    Ok(ProjectedSet {
        points: PointSet::from_flat(d - 1, coords)?,
        provenance,
    })
}

fn project_flat(coords: &[f64], d: usize, prov: &[usize], a: [f64; 2]) -> (Vec<f64>, Vec<usize>) {
    let m = d - 1;
    let mut projected = Vec::with_capacity(prov.len() * m);
    for p in coords.chunks_exact(d) {
        projected.push(a[0] * p[0] + a[1] * p[1]);
        projected.extend_from_slice(&p[2..]);
    }
    let row = |i: usize| &projected[i * m..(i + 1) * m];
    let mut order: Vec<usize> = (0..prov.len()).collect();
    order.sort_unstable_by(|&i, &j| {
        row(i)
            .iter()
            .zip(row(j))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
            .then(prov[i].cmp(&prov[j]))
    });
    let mut out = Vec::with_capacity(projected.len());
    let mut out_prov = Vec::with_capacity(prov.len());
    let mut prev: Option<usize> = None;
    for i in order {
        let same = prev.is_some_and(|p| {
            row(p)
                .iter()
                .zip(row(i))
                .all(|(x, y)| x.to_bits() == y.to_bits())
        });
        if !same {
            out.extend_from_slice(row(i));
            out_prov.push(prov[i]);
            prev = Some(i);
        }
    }
    (out, out_prov)
}

fn bbox_diagonal(coords: &[f64], d: usize) -> f64 {
    let mut lo = alloc::vec![f64::INFINITY; d];
    let mut hi = alloc::vec![f64::NEG_INFINITY; d];
    for p in coords.chunks_exact(d) {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    sqrt(lo.iter().zip(&hi).map(|(l, h)| (h - l) * (h - l)).sum())
}

fn chan_level(
    coords: &[f64],
    d: usize,
    prov: &[usize],
    dirs: &[[f64; 2]],
    best: &mut Option<Best>,
) {
    match d {
        1 => {
            let (value, witness) = extent(coords.iter().copied().zip(prov.iter().copied()));
            Best::offer(best, value, witness);
        }
        2 => {
            for a in dirs {
                let values = coords
                    .chunks_exact(2)
                    .map(|p| a[0] * p[0] + a[1] * p[1])
                    .zip(prov.iter().copied());
                let (value, witness) = extent(values);
                Best::offer(best, value, witness);
            }
        }
        _ => {
            for &a in dirs {
                let (child, child_prov) = project_flat(coords, d, prov, a);
                // a subproblem never beats its own diameter
                let bound = bbox_diagonal(&child, d - 1) * (1.0 + 1e-12);
                if best.is_some_and(|b| bound < b.value) {
                    continue;
                }
                chan_level(&child, d - 1, &child_prov, dirs, best);
            }
        }
    }
}

/// Runs the recursion on row-major `coords` whose rows carry original indices `prov`.
pub(crate) fn chan_on(coords: &[f64], d: usize, prov: &[usize], epsilon: f64) -> Result<Best> {
    let v2 = build_v2(epsilon)?;
    let dirs: Vec<[f64; 2]> = v2.iter().map(|a| [a[0], a[1]]).collect();
    let mut best = None;
    chan_level(coords, d, prov, &dirs, &mut best);
    best.ok_or(Error::EmptySet)
}

/// Recursive planar-projection diameter: `value <= D <= (1+eps)^(d-1) value`,
/// exact for `d = 1`.
pub fn chan_recursive_diameter(s: &PointSet, epsilon: f64) -> Result<DiameterResult> {
    check_epsilon(epsilon)?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let prov: Vec<usize> = (0..s.len()).collect();
    let best = chan_on(s.as_flat(), s.dim(), &prov, epsilon)?;
    Ok(DiameterResult {
        value: best.value,
        witness: Some(best.witness),
        algorithm: Algorithm::Chan,
        epsilon: Some(epsilon),
        guarantee: if s.dim() == 1 {
            Guarantee::Exact
        } else {
            Guarantee::LowerSandwich
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn set(dim: usize, coords: &[f64]) -> PointSet {
        PointSet::from_flat(dim, coords.to_vec()).unwrap()
    }

    #[test]
    fn v2_examples() {
        let v = build_v2(1.0).unwrap();
        assert_eq!(v.len(), 4);
        let angles: Vec<f64> = v.iter().map(|a| libm::atan2(a[1], a[0])).collect();
        for (j, t) in angles.iter().enumerate() {
            assert!((t - j as f64 * PI / 4.0).abs() < 1e-15);
        }
        assert_eq!(build_v2(0.01).unwrap().len(), 32);
        assert!(build_v2(0.0).is_err());
        assert!(build_v2(1.5).is_err());
    }

    #[test]
    fn vd_contains_axes_and_unit_vectors() {
        for d in 2..=4 {
            let v = build_vd(0.5, d).unwrap();
            for a in v.iter() {
                assert!((dot(a, a) - 1.0).abs() < 1e-12);
            }
            for axis in 0..d {
                let hits = v.iter().filter(|a| a[axis] == 1.0).count();
                assert_eq!(hits, 1, "axis {axis} in d={d}");
            }
            assert!(v.angular_gap / 2.0 <= 0.5f64.sqrt());
        }
        assert!(build_vd(0.5, 1).is_err());
    }

    #[test]
    fn vd_has_no_repeated_lines() {
        let v = build_vd(0.25, 3).unwrap();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let c = dot(v.get(i), v.get(j)).abs();
                assert!(c < 1.0 - 1e-12, "{i} {j}");
            }
        }
    }

    #[test]
    fn project_all_examples() {
        let s = set(2, &[0.0, 0.0, 2.0, 0.0]);
        assert_eq!(project_all(&s, &[1.0, 0.0]).unwrap(), vec![0.0, 2.0]);
        let p = project_all(&s, &[0.0, 1.0]).unwrap();
        assert_eq!(p[1] - p[0], 0.0);
        assert!(project_all(&s, &[1.0]).is_err());
    }

    #[test]
    fn agarwal_examples() {
        let s = set(3, &[0.0, 0.0, 0.0, 0.0, 4.0, 0.0]);
        let r = agarwal_diameter(&s, 0.1).unwrap();
        assert_eq!(r.value, 4.0);
        assert_eq!(r.witness, Some((0, 1)));
        let r = agarwal_diameter(&set(2, &[1.0, 2.0]), 0.5).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(agarwal_diameter(&PointSet::new(2).unwrap(), 0.5).is_err());
    }

    #[test]
    fn pi_a_examples() {
        let x = Point::from_slice(&[3.0, 4.0, 7.0]).unwrap();
        assert_eq!(pi_a(&x, [1.0, 0.0]).unwrap().coords(), &[3.0, 7.0]);
        let x = Point::from_slice(&[1.0, 1.0]).unwrap();
        let y = pi_a(&x, [FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!((y.coords()[0] - 2f64.sqrt()).abs() < 1e-15);
        let x = Point::from_slice(&[0.0, 0.0, 5.0, -1.0]).unwrap();
        assert_eq!(pi_a(&x, [0.6, 0.8]).unwrap().coords(), &[0.0, 5.0, -1.0]);
        let x = Point::from_slice(&[1.0]).unwrap();
        assert!(matches!(
            pi_a(&x, [1.0, 0.0]),
            Err(Error::DimensionTooSmall { .. })
        ));
        let x = Point::from_slice(&[1.0, 2.0]).unwrap();
        assert!(matches!(pi_a(&x, [1.0, 1.0]), Err(Error::NotUnit(_))));
    }

    #[test]
    fn project_set_merges_coincident_images() {
        let s = ProjectedSet::identity(&set(3, &[1.0, 5.0, 2.0, 1.0, -3.0, 2.0, 0.0, 0.0, 9.0]));
        let p = project_set(&s, [1.0, 0.0]).unwrap();
        assert_eq!(p.points.len(), 2);
        assert_eq!(p.points.dim(), 2);
        let mut prov = p.provenance.clone();
        prov.sort();
        assert_eq!(prov, vec![0, 2]);
    }

    #[test]
    fn chan_examples() {
        let r = chan_recursive_diameter(&set(1, &[3.0, -2.0, 7.0]), 0.3).unwrap();
        assert_eq!(r.value, 9.0);
        assert_eq!(r.witness, Some((1, 2)));
        assert_eq!(r.guarantee, Guarantee::Exact);

        // segment along the member direction at angle pi/4 (eps = 1)
        let r = chan_recursive_diameter(&set(2, &[0.0, 0.0, 3.0, 3.0]), 1.0).unwrap();
        assert!((r.value - 18f64.sqrt()).abs() < 1e-14);

        let r = chan_recursive_diameter(&set(4, &[1.0, 1.0, 1.0, 1.0]), 0.2).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.witness, Some((0, 0)));
    }
}
