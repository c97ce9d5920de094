//! Finite unions of lattice cells over a single cone.
//!
//! A cell constrains the functionals `⟨·, n(ρ)⟩` for the rays `ρ` of one cone
//! to closed integer intervals. Ray vectors of a cone in a smooth fan extend to
//! a basis of `N`, so these functionals are independent and a cell is empty
//! exactly when one of its intervals is.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};
use crate::polytope::{integer_points, Halfspace};
use crate::toric::{Character, Fan};

/// A closed interval of integers; `None` bounds are infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub const ALL: Interval = Interval { lo: None, hi: None };

    pub fn new(lo: Option<i64>, hi: Option<i64>) -> Self {
        Interval { lo, hi }
    }

    pub fn closed(lo: i64, hi: i64) -> Self {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn at_least(lo: i64) -> Self {
        Interval {
            lo: Some(lo),
            hi: None,
        }
    }

    pub fn at_most(hi: i64) -> Self {
        Interval {
            lo: None,
            hi: Some(hi),
        }
    }

    pub fn point(v: i64) -> Self {
        Interval::closed(v, v)
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|l| l <= v) && self.hi.is_none_or(|h| v <= h)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interval { lo, hi }
    }

    pub fn len(&self) -> Option<u64> {
        if self.is_empty() {
            return Some(0);
        }
        match (self.lo, self.hi) {
            (Some(l), Some(h)) => Some((h as i128 - l as i128 + 1) as u64),
            _ => None,
        }
    }

    pub fn shifted(&self, by: i64) -> Interval {
        Interval {
            lo: self.lo.map(|l| l + by),
            hi: self.hi.map(|h| h + by),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => write!(f, "{{{l}}}"),
            (Some(l), Some(h)) => write!(f, "[{l},{h}]"),
            (Some(l), None) => write!(f, "[{l},+inf)"),
            (None, Some(h)) => write!(f, "(-inf,{h}]"),
            (None, None) => write!(f, "(-inf,+inf)"),
        }
    }
}

/// One interval per ray of the cone, in the cone's (sorted) ray order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub rays: Vec<usize>,
    pub bounds: Vec<Interval>,
}

impl Cell {
    pub fn is_empty(&self) -> bool {
        self.bounds.iter().any(Interval::is_empty)
    }

    fn intersect(&self, other: &Cell) -> Cell {
        Cell {
            rays: self.rays.clone(),
            bounds: self
                .bounds
                .iter()
                .zip(&other.bounds)
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }

    /// `self ∖ other` as disjoint cells.
    fn minus(&self, other: &Cell) -> Vec<Cell> {
        let meet = self.intersect(other);
        if meet.is_empty() {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = self.bounds.clone();
        for (i, cut) in other.bounds.iter().enumerate() {
            let cur = rest[i];
            if let Some(l) = cut.lo {
                let below = cur.intersect(&Interval::at_most(l - 1));
                if !below.is_empty() {
                    let mut b = rest.clone();
                    b[i] = below;
                    out.push(Cell {
                        rays: self.rays.clone(),
                        bounds: b,
                    });
                }
            }
            if let Some(h) = cut.hi {
                let above = cur.intersect(&Interval::at_least(h + 1));
                if !above.is_empty() {
                    let mut b = rest.clone();
                    b[i] = above;
                    out.push(Cell {
                        rays: self.rays.clone(),
                        bounds: b,
                    });
                }
            }
            rest[i] = cur.intersect(cut);
        }
        out
    }

    fn contains_coords(&self, coords: &[i64]) -> bool {
        self.bounds.iter().zip(coords).all(|(b, &v)| b.contains(v))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .rays
            .iter()
            .zip(&self.bounds)
            .map(|(r, b)| format!("ρ{r}∈{b}"));
        write!(f, "{{{}}}", parts.format(", "))
    }
}

/// Geometry of one cone: its ray normals and, for maximal cones, the
/// change of basis between `M` and the dual coordinates.
#[derive(Debug, PartialEq, Eq)]
pub struct ConeFrame {
    dim: usize,
    cone: Vec<usize>,
    normals: IntMatrix,
    inverse: Option<IntMatrix>,
}

impl ConeFrame {
    pub fn new(dim: usize, cone: Vec<usize>, rays: &[Vec<i64>]) -> Result<ConeFrame> {
        let normals: IntMatrix = cone.iter().map(|&i| rays[i].clone()).collect();
        let inverse = if cone.len() == dim {
            lattice::unimodular_inverse(&normals)?
        } else {
            None
        };
        Ok(ConeFrame {
            dim,
            cone,
            normals,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone(&self) -> &[usize] {
        &self.cone
    }

    pub fn is_maximal(&self) -> bool {
        self.inverse.is_some()
    }

    /// `(⟨m, n(ρ)⟩)_{ρ ∈ σ(1)}`.
    pub fn coords(&self, m: &Character) -> Vec<i64> {
        self.normals.iter().map(|row| m.pair(row)).collect()
    }

    /// The character with the given dual coordinates. Maximal cones only.
    pub fn from_coords(&self, y: &[i64]) -> Option<Character> {
        let inv = self.inverse.as_ref()?;
        Some(Character(lattice::mat_vec(inv, y)))
    }

    pub fn full_cell(&self) -> Cell {
        Cell {
            rays: self.cone.clone(),
            bounds: vec![Interval::ALL; self.cone.len()],
        }
    }
}

/// A finite union of cells over one cone.
#[derive(Clone, Debug)]
pub struct LatticeRegion {
    frame: Arc<ConeFrame>,
    cells: Vec<Cell>,
}

impl LatticeRegion {
    pub fn empty(frame: Arc<ConeFrame>) -> Self {
        LatticeRegion {
            frame,
            cells: Vec::new(),
        }
    }

    pub fn full(frame: Arc<ConeFrame>) -> Self {
        let cell = frame.full_cell();
        LatticeRegion {
            frame,
            cells: vec![cell],
        }
    }

    /// The region given by one interval per ray of the cone.
    pub fn from_bounds(frame: Arc<ConeFrame>, bounds: Vec<Interval>) -> Self {
        assert_eq!(bounds.len(), frame.cone.len());
        let cell = Cell {
            rays: frame.cone.clone(),
            bounds,
        };
        LatticeRegion::from_cells(frame, vec![cell])
    }

    /// `{m : ⟨m, n(ρ)⟩ ≥ lo_ρ}`.
    pub fn orthant(frame: Arc<ConeFrame>, lo: &[i64]) -> Self {
        let bounds = lo.iter().map(|&l| Interval::at_least(l)).collect();
        LatticeRegion::from_bounds(frame, bounds)
    }

    pub fn from_cells(frame: Arc<ConeFrame>, cells: Vec<Cell>) -> Self {
        let cells = cells.into_iter().filter(|c| !c.is_empty()).collect();
        LatticeRegion { frame, cells }
    }

    /// Singleton cells, one per point. Maximal cones only.
    pub fn from_points(frame: Arc<ConeFrame>, points: &[Character]) -> Self {
        let cells = points
            .iter()
            .map(|m| Cell {
                rays: frame.cone.clone(),
                bounds: frame.coords(m).into_iter().map(Interval::point).collect(),
            })
            .collect();
        LatticeRegion::from_cells(frame, cells)
    }

    pub fn frame(&self) -> &Arc<ConeFrame> {
        &self.frame
    }

    pub fn cone(&self) -> &[usize] {
        &self.frame.cone
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    fn check_same_cone(&self, other: &LatticeRegion) -> Result<()> {
        if self.frame.cone != other.frame.cone || self.frame.normals != other.frame.normals {
            return Err(Error::ConeMismatch {
                left: self.frame.cone.clone(),
                right: other.frame.cone.clone(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, m: &Character) -> bool {
        let y = self.frame.coords(m);
        self.cells.iter().any(|c| c.contains_coords(&y))
    }

    pub fn union(&self, other: &LatticeRegion) -> Result<LatticeRegion> {
        self.check_same_cone(other)?;
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(LatticeRegion {
            frame: self.frame.clone(),
            cells,
        })
    }

    pub fn intersect(&self, other: &LatticeRegion) -> Result<LatticeRegion> {
        self.check_same_cone(other)?;
        let cells = self
            .cells
            .iter()
            .cartesian_product(&other.cells)
            .map(|(a, b)| a.intersect(b))
            .collect();
        Ok(LatticeRegion::from_cells(self.frame.clone(), cells))
    }

    pub fn difference(&self, other: &LatticeRegion) -> Result<LatticeRegion> {
        self.check_same_cone(other)?;
        let mut cells = self.cells.clone();
        for cut in &other.cells {
            cells = cells.iter().flat_map(|c| c.minus(cut)).collect();
        }
        Ok(LatticeRegion {
            frame: self.frame.clone(),
            cells,
        })
    }

    /// `{m : m − τ ∈ self}`.
    pub fn shift(&self, tau: &Character) -> LatticeRegion {
        let by = self.frame.coords(tau);
        let cells = self
            .cells
            .iter()
            .map(|c| Cell {
                rays: c.rays.clone(),
                bounds: c
                    .bounds
                    .iter()
                    .zip(&by)
                    .map(|(b, &t)| b.shifted(t))
                    .collect(),
            })
            .collect();
        LatticeRegion {
            frame: self.frame.clone(),
            cells,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Cell::is_empty)
    }

    /// An infinite nonempty cell, if there is one.
    pub fn infinite_witness(&self) -> Option<&Cell> {
        let maximal = self.frame.is_maximal();
        self.cells
            .iter()
            .filter(|c| !c.is_empty())
            .find(|c| !maximal || c.bounds.iter().any(|b| !b.is_bounded()))
    }

    pub fn is_finite(&self) -> bool {
        self.infinite_witness().is_none()
    }

    /// Equal cells, pairwise disjoint, covering the same set.
    pub fn disjoint_cells(&self) -> Vec<Cell> {
        let mut out: Vec<Cell> = Vec::new();
        for cell in &self.cells {
            let mut pieces = vec![cell.clone()];
            for prev in &out {
                pieces = pieces.iter().flat_map(|p| p.minus(prev)).collect();
            }
            out.extend(pieces);
        }
        out
    }

    pub fn count(&self) -> Result<u64> {
        if let Some(c) = self.infinite_witness() {
            return Err(Error::Infinite(c.clone()));
        }
        Ok(self
            .disjoint_cells()
            .iter()
            .map(|c| c.bounds.iter().map(|b| b.len().unwrap()).product::<u64>())
            .sum())
    }

    /// All points, sorted. Fails with the witness cell if the region is
    /// infinite.
    pub fn enumerate(&self) -> Result<Vec<Character>> {
        if let Some(c) = self.infinite_witness() {
            return Err(Error::Infinite(c.clone()));
        }
        let mut out = BTreeSet::new();
        for cell in &self.cells {
            let ranges: Vec<_> = cell
                .bounds
                .iter()
                .map(|b| b.lo.unwrap()..=b.hi.unwrap())
                .collect();
            for y in ranges.into_iter().multi_cartesian_product() {
                out.insert(self.frame.from_coords(&y).unwrap());
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Exact set equality.
    pub fn equals(&self, other: &LatticeRegion) -> Result<bool> {
        Ok(self.difference(other)?.is_empty() && other.difference(self)?.is_empty())
    }

    pub fn is_subset(&self, other: &LatticeRegion) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Drops empty cells and cells covered by a single other cell, then sorts.
    pub fn simplified(&self) -> LatticeRegion {
        let cells: Vec<Cell> = self
            .cells
            .iter()
            .filter(|c| !c.is_empty())
            .cloned()
            .collect();
        let covers = |big: &Cell, small: &Cell| {
            big.bounds
                .iter()
                .zip(&small.bounds)
                .all(|(b, s)| b.intersect(s) == *s)
        };
        let mut kept: Vec<Cell> = Vec::new();
        for (i, c) in cells.iter().enumerate() {
            let dominated = cells
                .iter()
                .enumerate()
                .any(|(j, d)| j != i && covers(d, c) && (!covers(c, d) || j < i));
            if !dominated {
                kept.push(c.clone());
            }
        }
        kept.sort();
        kept.dedup();
        LatticeRegion {
            frame: self.frame.clone(),
            cells: kept,
        }
    }

    pub fn to_json(&self) -> RegionJson {
        let r = self.simplified();
        RegionJson {
            cone: r.frame.cone.clone(),
            cells: r
                .cells
                .iter()
                .map(|c| {
                    c.rays
                        .iter()
                        .zip(&c.bounds)
                        .filter(|(_, b)| **b != Interval::ALL)
                        .map(|(&ray, b)| (ray, (b.lo, b.hi)))
                        .collect()
                })
                .collect(),
            points: None,
        }
    }

    pub fn from_json(frame: Arc<ConeFrame>, json: &RegionJson) -> Result<LatticeRegion> {
        let mut cone = json.cone.clone();
        cone.sort_unstable();
        if cone != frame.cone {
            return Err(Error::ConeMismatch {
                left: frame.cone.clone(),
                right: json.cone.clone(),
            });
        }
        let mut cells = Vec::new();
        for map in &json.cells {
            let mut cell = frame.full_cell();
            for (&ray, &(lo, hi)) in map {
                let pos = frame.cone.iter().position(|&r| r == ray).ok_or_else(|| {
                    Error::Parse(format!("ray {ray} is not in cone {:?}", frame.cone))
                })?;
                cell.bounds[pos] = Interval::new(lo, hi);
            }
            cells.push(cell);
        }
        let mut region = LatticeRegion::from_cells(frame.clone(), cells);
        if let Some(points) = &json.points {
            if !frame.is_maximal() {
                return Err(Error::Parse(
                    "points are only allowed on maximal cones".into(),
                ));
            }
            let pts: Vec<Character> = points
                .iter()
                .map(|p| {
                    if p.len() == frame.dim {
                        Ok(Character(p.clone()))
                    } else {
                        Err(Error::DimensionMismatch {
                            expected: frame.dim,
                            got: p.len(),
                        })
                    }
                })
                .collect::<Result<_>>()?;
            region = region.union(&LatticeRegion::from_points(frame, &pts))?;
        }
        Ok(region)
    }
}

/// Serialized region. Each cell maps ray indices to `[lo, hi]`; a `null`
/// bound is infinite and an omitted ray is unconstrained. Input may also list
/// explicit `points`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionJson {
    pub cone: Vec<usize>,
    #[serde(default)]
    pub cells: Vec<BTreeMap<usize, (Option<i64>, Option<i64>)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<i64>>>,
}

/// Lattice points of `𝒞₀(D) = {m : ⟨m, n(ρ)⟩ + D_ρ ≥ 0 for all ρ}`, sorted.
pub fn polytope_points(fan: &Fan, d: &[i64]) -> Result<Vec<Character>> {
    if d.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch {
            expected: fan.num_rays(),
            got: d.len(),
        });
    }
    // work in the dual coordinates y of the first maximal cone, m = A y
    let frame = fan.frame(fan.max_cone_indices()[0]);
    let n = fan.dim();
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            frame.from_coords(&e).unwrap().0
        })
        .collect();
    let constraints: Vec<Halfspace> = fan
        .rays()
        .iter()
        .zip(d)
        .map(|(ray, &a)| Halfspace::new(cols.iter().map(|c| lattice::dot(ray, c)).collect(), -a))
        .collect();
    let mut pts: Vec<Character> = integer_points(n, &constraints)?
        .into_iter()
        .map(|y| frame.from_coords(&y).unwrap())
        .collect();
    pts.sort();
    Ok(pts)
}

/// How [`enumerate_in_polytope`] combines region memberships.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    /// In every region.
    All,
    /// In at least one region.
    Any,
    /// In no region.
    None,
}

/// Points of `𝒞₀(D)` selected by their membership in `regions`.
pub fn enumerate_in_polytope(
    fan: &Fan,
    d: &[i64],
    regions: &[LatticeRegion],
    combine: Combine,
) -> Result<Vec<Character>> {
    let pts = polytope_points(fan, d)?;
    Ok(pts
        .into_iter()
        .filter(|m| match combine {
            Combine::All => regions.iter().all(|r| r.contains(m)),
            Combine::Any => regions.iter().any(|r| r.contains(m)),
            Combine::None => !regions.iter().any(|r| r.contains(m)),
        })
        .collect())
}
