//! Fans of smooth complete toric varieties and the class-group grading of
//! their Cox rings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};
use crate::region::ConeFrame;

/// A character `m ∈ M ≅ ℤⁿ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn zero(dim: usize) -> Self {
        Character(vec![0; dim])
    }

    pub fn pair(&self, ray: &[i64]) -> i64 {
        lattice::dot(&self.0, ray)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl std::ops::Add for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        Character(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub for &Character {
    type Output = Character;
    fn sub(self, rhs: &Character) -> Character {
        Character(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Neg for &Character {
    type Output = Character;
    fn neg(self) -> Character {
        Character(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// An element of `Cl(X) ≅ ℤ^ℓ` in the basis fixed by [`CoxGrading`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(pub Vec<i64>);

impl MultiDegree {
    pub fn dominates(&self, other: &MultiDegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "({})", self.0.iter().join(","))
        }
    }
}

/// Raw fan description, as read from input. Not yet validated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanData {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    /// Full cone list. Computed as the face closure of `max_cones` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    RayDimension { ray: usize, len: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize, gcd: i64 },
    RayIndexOutOfRange { cone: Vec<usize>, index: usize },
    RepeatedRay { cone: Vec<usize> },
    WrongConeSize { cone: Vec<usize>, size: usize },
    NotUnimodular { cone: Vec<usize>, det: i64 },
    FacetNotShared { facet: Vec<usize>, count: usize },
    SameSide { facet: Vec<usize> },
    MissingFace { cone: Vec<usize>, face: Vec<usize> },
    NotAFace { cone: Vec<usize> },
    UnusedRay { ray: usize },
    Empty,
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FanViolation::*;
        match self {
            RayDimension { ray, len } => write!(f, "ray {ray} has {len} coordinates"),
            ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            NonPrimitiveRay { ray, gcd } => write!(f, "non-primitive ray {ray} (gcd {gcd})"),
            RayIndexOutOfRange { cone, index } => {
                write!(f, "cone {cone:?} refers to missing ray {index}")
            }
            RepeatedRay { cone } => write!(f, "cone {cone:?} repeats a ray"),
            WrongConeSize { cone, size } => {
                write!(f, "maximal cone {cone:?} has {size} rays")
            }
            NotUnimodular { cone, det } => {
                write!(f, "non-unimodular maximal cone {cone:?} (det {det})")
            }
            FacetNotShared { facet, count } => {
                write!(
                    f,
                    "facet {facet:?} lies in {count} maximal cones, expected 2"
                )
            }
            SameSide { facet } => {
                write!(f, "maximal cones through facet {facet:?} overlap")
            }
            MissingFace { cone, face } => write!(f, "face {face:?} of cone {cone:?} is missing"),
            NotAFace { cone } => write!(f, "cone {cone:?} is not a face of a maximal cone"),
            UnusedRay { ray } => write!(f, "ray {ray} lies in no maximal cone"),
            Empty => write!(f, "fan has no maximal cones"),
        }
    }
}

/// Checks that a fan is smooth and complete.
pub fn validate_fan(data: &FanData) -> std::result::Result<(), Vec<FanViolation>> {
    let mut v = Vec::new();
    let n = data.dim;
    let r = data.rays.len();
    for (i, ray) in data.rays.iter().enumerate() {
        if ray.len() != n {
            v.push(FanViolation::RayDimension {
                ray: i,
                len: ray.len(),
            });
            continue;
        }
        match lattice::gcd_all(ray) {
            0 => v.push(FanViolation::ZeroRay { ray: i }),
            1 => {}
            g => v.push(FanViolation::NonPrimitiveRay { ray: i, gcd: g }),
        }
    }
    if data.max_cones.is_empty() {
        v.push(FanViolation::Empty);
    }
    if !v.is_empty() {
        return Err(v);
    }

    let mut maximal: Vec<Vec<usize>> = Vec::new();
    for cone in &data.max_cones {
        let sorted: Vec<usize> = cone.iter().copied().sorted().collect();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= r) {
            v.push(FanViolation::RayIndexOutOfRange {
                cone: cone.clone(),
                index: bad,
            });
            continue;
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            v.push(FanViolation::RepeatedRay { cone: cone.clone() });
            continue;
        }
        if sorted.len() != n {
            v.push(FanViolation::WrongConeSize {
                cone: cone.clone(),
                size: sorted.len(),
            });
            continue;
        }
        let m: IntMatrix = sorted.iter().map(|&i| data.rays[i].clone()).collect();
        match lattice::determinant(&m) {
            Ok(d) if d.abs() == 1 => maximal.push(sorted),
            Ok(d) => v.push(FanViolation::NotUnimodular {
                cone: cone.clone(),
                det: d,
            }),
            Err(_) => v.push(FanViolation::NotUnimodular {
                cone: cone.clone(),
                det: 0,
            }),
        }
    }
    if !v.is_empty() {
        return Err(v);
    }

    let used: BTreeSet<usize> = maximal.iter().flatten().copied().collect();
    for ray in 0..r {
        if !used.contains(&ray) {
            v.push(FanViolation::UnusedRay { ray });
        }
    }

    // completeness: every facet is shared by exactly two maximal cones lying
    // on opposite sides of the hyperplane it spans
    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in maximal.iter().enumerate() {
        for skip in 0..cone.len() {
            let facet: Vec<usize> = cone
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &i)| i)
                .collect();
            facets.entry(facet).or_default().push(ci);
        }
    }
    for (facet, owners) in &facets {
        if owners.len() != 2 {
            v.push(FanViolation::FacetNotShared {
                facet: facet.clone(),
                count: owners.len(),
            });
            continue;
        }
        let side = |ci: usize| -> i64 {
            let apex = maximal[ci]
                .iter()
                .find(|i| !facet.contains(i))
                .copied()
                .unwrap();
            let mut m: IntMatrix = facet.iter().map(|&i| data.rays[i].clone()).collect();
            m.push(data.rays[apex].clone());
            lattice::determinant(&m).unwrap_or(0).signum()
        };
        if side(owners[0]) == side(owners[1]) {
            v.push(FanViolation::SameSide {
                facet: facet.clone(),
            });
        }
    }

    if let Some(cones) = &data.cones {
        let listed: BTreeSet<Vec<usize>> = cones
            .iter()
            .map(|c| c.iter().copied().sorted().collect())
            .collect();
        for cone in &listed {
            if !maximal.iter().any(|m| cone.iter().all(|i| m.contains(i))) {
                v.push(FanViolation::NotAFace { cone: cone.clone() });
            }
        }
        for cone in listed.iter().chain(maximal.iter()) {
            for k in 0..cone.len() {
                for face in cone.iter().copied().combinations(k) {
                    if !listed.contains(&face) {
                        v.push(FanViolation::MissingFace {
                            cone: cone.clone(),
                            face,
                        });
                    }
                }
            }
            if !listed.contains(cone) {
                v.push(FanViolation::MissingFace {
                    cone: cone.clone(),
                    face: cone.clone(),
                });
            }
        }
        v.dedup();
    }

    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// A validated smooth complete fan.
#[derive(Debug, Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    /// All cones, sorted by dimension then lexicographically; `cones[0]` is `{0}`.
    cones: Vec<Vec<usize>>,
    /// Indices into `cones`, in input order.
    max_cones: Vec<usize>,
    frames: Vec<Arc<ConeFrame>>,
    grading: Option<Arc<CoxGrading>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Fan) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones().eq(other.max_cones())
    }
}

impl Fan {
    pub fn new(data: FanData) -> Result<Fan> {
        validate_fan(&data).map_err(Error::InvalidFan)?;
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut max_sorted = Vec::new();
        for cone in &data.max_cones {
            let sorted: Vec<usize> = cone.iter().copied().sorted().collect();
            for k in 0..=sorted.len() {
                for face in sorted.iter().copied().combinations(k) {
                    all.insert(face);
                }
            }
            max_sorted.push(sorted);
        }
        let cones: Vec<Vec<usize>> = all
            .into_iter()
            .sorted_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)))
            .collect();
        let max_cones = max_sorted
            .iter()
            .map(|c| cones.iter().position(|x| x == c).unwrap())
            .collect();
        let frames = cones
            .iter()
            .map(|c| ConeFrame::new(data.dim, c.clone(), &data.rays).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let mut fan = Fan {
            dim: data.dim,
            rays: data.rays,
            cones,
            max_cones,
            frames,
            grading: None,
        };
        fan.grading = Some(Arc::new(CoxGrading::new(&fan)?));
        Ok(fan)
    }

    pub fn grading(&self) -> &CoxGrading {
        self.grading
            .as_ref()
            .expect("grading is computed on construction")
    }

    pub fn from_json(text: &str) -> Result<Fan> {
        let data: FanData = serde_json::from_str(text)?;
        Fan::new(data)
    }

    pub fn to_data(&self) -> FanData {
        FanData {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones: self.max_cones().cloned().collect(),
            cones: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone_index(&self, cone: &[usize]) -> Option<usize> {
        let sorted: Vec<usize> = cone.iter().copied().sorted().collect();
        self.cones.iter().position(|c| *c == sorted)
    }

    pub fn max_cone_indices(&self) -> &[usize] {
        &self.max_cones
    }

    pub fn max_cones(&self) -> impl Iterator<Item = &Vec<usize>> + '_ {
        self.max_cones.iter().map(move |&i| &self.cones[i])
    }

    pub fn frame(&self, cone_index: usize) -> &Arc<ConeFrame> {
        &self.frames[cone_index]
    }

    /// `⟨m, n(ρ)⟩` for every ray.
    pub fn pairings(&self, m: &Character) -> Vec<i64> {
        self.rays.iter().map(|ray| m.pair(ray)).collect()
    }

    /// Maps a character to its principal divisor `φ(m) = (⟨m, n(ρ)⟩)_ρ`.
    pub fn principal_divisor(&self, m: &Character) -> Vec<i64> {
        self.pairings(m)
    }

    /// The unique `τ_σ` with `⟨τ_σ, n(ρ)⟩ = D_ρ` for every ray of the maximal
    /// cone `sigma` (an index into [`Fan::cones`]).
    pub fn tau_for_cone(&self, sigma: usize, divisor: &[i64]) -> Character {
        let frame = &self.frames[sigma];
        let values: Vec<i64> = frame.cone().iter().map(|&i| divisor[i]).collect();
        frame
            .from_coords(&values)
            .expect("tau_for_cone needs a maximal cone")
    }

    /// Monomials `x^σ̂` for the maximal cones, as 0/1 exponent vectors.
    pub fn irrelevant_generators(&self) -> Vec<Vec<u32>> {
        self.max_cones()
            .map(|cone| {
                (0..self.num_rays())
                    .map(|i| u32::from(!cone.contains(&i)))
                    .collect()
            })
            .collect()
    }

    /// A built-in fan by name: `P{n}`, `H{a}` or `P{n}xP{m}`.
    pub fn catalog(name: &str) -> Option<Fan> {
        let data = catalog_data(name)?;
        Fan::new(data).ok()
    }
}

fn projective_data(n: usize) -> FanData {
    let mut rays = vec![vec![-1; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        rays.push(e);
    }
    let max_cones = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    FanData {
        dim: n,
        rays,
        max_cones,
        cones: None,
    }
}

fn hirzebruch_data(a: i64) -> FanData {
    FanData {
        dim: 2,
        rays: vec![vec![-1, a], vec![1, 0], vec![0, -1], vec![0, 1]],
        // σ00, σ01, σ10, σ11
        max_cones: vec![vec![1, 3], vec![1, 2], vec![0, 3], vec![0, 2]],
        cones: None,
    }
}

fn product_data(a: &FanData, b: &FanData) -> FanData {
    let dim = a.dim + b.dim;
    let mut rays = Vec::new();
    for r in &a.rays {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(0, b.dim));
        rays.push(v);
    }
    for r in &b.rays {
        let mut v = vec![0; a.dim];
        v.extend(r.iter().copied());
        rays.push(v);
    }
    let shift = a.rays.len();
    let mut max_cones = Vec::new();
    for ca in &a.max_cones {
        for cb in &b.max_cones {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|i| i + shift));
            max_cones.push(c);
        }
    }
    FanData {
        dim,
        rays,
        max_cones,
        cones: None,
    }
}

pub fn catalog_data(name: &str) -> Option<FanData> {
    let parse_p = |s: &str| -> Option<usize> {
        let n: usize = s.strip_prefix('P')?.parse().ok()?;
        (n >= 1).then_some(n)
    };
    if let Some((l, r)) = name.split_once('x') {
        return Some(product_data(
            &projective_data(parse_p(l)?),
            &projective_data(parse_p(r)?),
        ));
    }
    if let Some(a) = name.strip_prefix('H') {
        let a: i64 = a.parse().ok()?;
        return (a >= 0).then(|| hirzebruch_data(a));
    }
    parse_p(name).map(projective_data)
}

/// The grading `π : ℤ^r → Cl(X) ≅ ℤ^ℓ` of the Cox ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxGrading {
    pub r: usize,
    pub ell: usize,
    /// `ℓ × r`; column `ρ` is `deg(x_ρ)`.
    pub deg_matrix: IntMatrix,
    /// Rays whose divisor classes form the chosen basis of `Cl(X)`.
    pub basis_rays: Vec<usize>,
    /// The complementary rays; their vectors form a ℤ-basis of `N`.
    #[serde(skip)]
    complement: Vec<usize>,
    #[serde(skip)]
    complement_inverse: IntMatrix,
}

impl CoxGrading {
    pub fn new(fan: &Fan) -> Result<CoxGrading> {
        let n = fan.dim();
        let r = fan.num_rays();
        let ell = r - n;
        // φ as an r × n matrix; torsion in its cokernel is rejected
        let phi: IntMatrix = fan.rays().to_vec();
        let factors = lattice::invariant_factors(&phi)?;
        if factors.len() != n || factors.iter().any(|&d| d != 1) {
            return Err(Error::Torsion(factors));
        }
        for basis in (0..r).combinations(ell) {
            let complement: Vec<usize> = (0..r).filter(|i| !basis.contains(i)).collect();
            let m: IntMatrix = complement.iter().map(|&i| fan.ray(i).to_vec()).collect();
            let Some(inv) = lattice::unimodular_inverse(&m)? else {
                continue;
            };
            let mut grading = CoxGrading {
                r,
                ell,
                deg_matrix: vec![vec![0; r]; ell],
                basis_rays: basis,
                complement,
                complement_inverse: inv,
            };
            for j in 0..r {
                let mut e = vec![0; r];
                e[j] = 1;
                let col = grading.degree_of_divisor(fan, &e);
                for (i, v) in col.0.into_iter().enumerate() {
                    grading.deg_matrix[i][j] = v;
                }
            }
            return Ok(grading);
        }
        Err(Error::NoUnimodularBasis)
    }

    /// Class of a divisor, computed by subtracting the principal divisor that
    /// clears the complementary coordinates.
    fn degree_of_divisor(&self, fan: &Fan, divisor: &[i64]) -> MultiDegree {
        let values: Vec<i64> = self.complement.iter().map(|&i| divisor[i]).collect();
        // the rows of complement_inverse^T pair to δ with the complement rays
        let n = fan.dim();
        let tau: Vec<i64> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| self.complement_inverse[k][j] * values[j])
                    .sum()
            })
            .collect();
        let tau = Character(tau);
        let reduced: Vec<i64> = divisor
            .iter()
            .zip(fan.pairings(&tau))
            .map(|(a, b)| a - b)
            .collect();
        MultiDegree(self.basis_rays.iter().map(|&i| reduced[i]).collect())
    }

    /// `π(D) = deg_matrix · D`.
    pub fn degree(&self, divisor: &[i64]) -> MultiDegree {
        MultiDegree(lattice::mat_vec(&self.deg_matrix, divisor))
    }

    pub fn degree_of_exponents(&self, exps: &[u32]) -> MultiDegree {
        let d: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
        self.degree(&d)
    }

    /// The canonical lift `ū`: `u` on the basis rays and zero elsewhere.
    pub fn lift(&self, u: &MultiDegree) -> Vec<i64> {
        let mut d = vec![0; self.r];
        for (&i, &v) in self.basis_rays.iter().zip(&u.0) {
            d[i] = v;
        }
        d
    }

    /// Whether `π(D) = π(E)`, decided by solving `D − E = φ(m)` over ℤ.
    pub fn same_class(&self, fan: &Fan, d: &[i64], e: &[i64]) -> bool {
        let diff: Vec<i64> = d.iter().zip(e).map(|(a, b)| a - b).collect();
        let values: Vec<i64> = self.complement.iter().map(|&i| diff[i]).collect();
        let n = fan.dim();
        let m: Vec<i64> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| self.complement_inverse[k][j] * values[j])
                    .sum()
            })
            .collect();
        fan.pairings(&Character(m)) == diff
    }
}
