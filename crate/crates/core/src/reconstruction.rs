//! From a diagram back to the saturated ideal: graded pieces, divisibility
//! spans, minimal generators, and `H¹_B(I)`.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::diagram::{shift_diagram, validate_diagram, KlyachkoDiagram};
use crate::error::{Error, Result};
use crate::monomial::{minimalize, Monomial, MonomialIdeal};
use crate::region::{polytope_points, LatticeRegion};
use crate::toric::{Character, Fan, MultiDegree};

/// Characters `m` naming the monomials `x^{m+D}` of one graded piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: MultiDegree,
    pub lift: Vec<i64>,
    pub basis: Vec<Character>,
}

impl GradedPiece {
    pub fn monomials(&self, fan: &Fan) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self
            .basis
            .iter()
            .map(|m| monomial_of(fan, m, &self.lift))
            .collect();
        out.sort();
        out
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `x^{m+D}` as an exponent vector.
pub fn monomial_of(fan: &Fan, m: &Character, d: &[i64]) -> Monomial {
    let e: Vec<i64> = fan.pairings(m).iter().zip(d).map(|(a, b)| a + b).collect();
    Monomial::from_i64(&e).expect("character outside the polytope of its degree")
}

/// The character `m` with `x^{m+D} = x^k`, if `deg(x^k) = [D]`.
pub fn character_of(fan: &Fan, k: &Monomial, d: &[i64]) -> Option<Character> {
    let diff: Vec<i64> = k.as_i64().iter().zip(d).map(|(a, b)| a - b).collect();
    let frame = fan.frame(fan.max_cone_indices()[0]);
    let vals: Vec<i64> = frame.cone().iter().map(|&r| diff[r]).collect();
    let m = frame.from_coords(&vals)?;
    (fan.pairings(&m) == diff).then_some(m)
}

/// Basis of `I^sat_[D]`: the points of `𝒞₀(D)` lying in
/// `𝒞^σ(D) ∖ Δ^σ(D)` for every maximal cone.
pub fn graded_basis(diag: &KlyachkoDiagram, d: &[i64]) -> Result<GradedPiece> {
    let fan = diag.fan();
    let shifted = shift_diagram(diag, d)?;
    let basis = polytope_points(fan, d)?
        .into_iter()
        .filter(|m| {
            shifted
                .iter()
                .all(|e| e.c.contains(m) && !e.delta.contains(m))
        })
        .collect();
    Ok(GradedPiece {
        degree: fan.grading().degree(d),
        lift: d.to_vec(),
        basis,
    })
}

/// Characters of degree `[E]` whose monomials are multiples of some
/// `x^{m+A}` in `gens`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanSet {
    pub degree: MultiDegree,
    pub covered: Vec<Character>,
}

/// `T_E 𝒢`: points `m'` of `𝒞₀(E)` with `⟨m', n(ρ)⟩ + E_ρ ≥ ⟨m, n(ρ)⟩ + A_ρ`
/// for all rays, for some `(m, A)` in `gens`.
pub fn span_set(fan: &Fan, gens: &[(Character, Vec<i64>)], e: &[i64]) -> Result<SpanSet> {
    let targets: Vec<Vec<i64>> = gens
        .iter()
        .map(|(m, a)| fan.pairings(m).iter().zip(a).map(|(x, y)| x + y).collect())
        .collect();
    let covered = if targets.is_empty() {
        Vec::new()
    } else {
        polytope_points(fan, e)?
            .into_iter()
            .filter(|m| {
                let here: Vec<i64> = fan.pairings(m).iter().zip(e).map(|(x, y)| x + y).collect();
                targets
                    .iter()
                    .any(|t| t.iter().zip(&here).all(|(a, b)| a <= b))
            })
            .collect()
    };
    Ok(SpanSet {
        degree: fan.grading().degree(e),
        covered,
    })
}

/// Degrees to scan, one inclusive range per coordinate of `Cl(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchBox {
    /// A box proven to contain every generator degree of the saturation.
    Default,
    Explicit(Vec<(i64, i64)>),
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// `⋃ 𝒢_u` in scan order.
    pub pre_minimal: Vec<Monomial>,
    pub ideal: MonomialIdeal,
    /// Nonempty `𝒢_u`, in scan order.
    pub by_degree: Vec<(MultiDegree, Vec<Monomial>)>,
    pub search_box: Vec<(i64, i64)>,
}

/// Per-ray exponent bounds `K_ρ` for minimal generators of the saturation.
///
/// If `x^k` is a minimal generator and `k_ρ > 0`, dropping one `x_ρ` leaves
/// the ideal, so for some maximal `σ ∋ ρ` the point `k − e_ρ` falls below `s`
/// or into a cell of `Δ^σ`. That cell cannot be unbounded above along `ρ`
/// since it would then contain `k`.
pub fn exponent_bounds(diag: &KlyachkoDiagram) -> Vec<i64> {
    let fan = diag.fan();
    let mut k: Vec<i64> = diag.s().to_vec();
    for &ci in fan.max_cone_indices() {
        for cell in diag.entry(ci).delta.cells() {
            for (&ray, b) in cell.rays.iter().zip(&cell.bounds) {
                if let Some(h) = b.hi {
                    k[ray] = k[ray].max(h + 1);
                }
            }
        }
    }
    k
}

/// The degree box spanned by exponents `0 ≤ k ≤ K`.
pub fn default_box(diag: &KlyachkoDiagram) -> Vec<(i64, i64)> {
    exponent_box(diag.fan(), &exponent_bounds(diag))
}

/// A window for `H¹_B(I)`: exponents up to `K` and up to the largest
/// exponent of each variable among the generators of `ideal`. The support
/// of `H¹` can be infinite (`x0·(x1, x2)` on `ℙ²`), so this is a heuristic.
pub fn h1_scan_box(ideal: &MonomialIdeal, diag: &KlyachkoDiagram) -> Vec<(i64, i64)> {
    let mut k = exponent_bounds(diag);
    for g in ideal.gens() {
        for (kr, &e) in k.iter_mut().zip(&g.0) {
            *kr = (*kr).max(e as i64);
        }
    }
    exponent_box(diag.fan(), &k)
}

fn exponent_box(fan: &Fan, k: &[i64]) -> Vec<(i64, i64)> {
    fan.grading()
        .deg_matrix
        .iter()
        .map(|row| {
            row.iter().zip(k).fold((0, 0), |(lo, hi), (&d, &kr)| {
                let v = d * kr;
                (lo + v.min(0), hi + v.max(0))
            })
        })
        .collect()
}

/// The degrees of a box in a linear extension of `⪯`: by coordinate sum,
/// then lexicographically.
pub fn box_degrees(bx: &[(i64, i64)]) -> Vec<MultiDegree> {
    let mut out: Vec<MultiDegree> = bx
        .iter()
        .map(|&(lo, hi)| lo..=hi)
        .multi_cartesian_product()
        .map(MultiDegree)
        .collect();
    if bx.is_empty() {
        out = vec![MultiDegree(Vec::new())];
    }
    out.sort_by_key(|u| (u.0.iter().sum::<i64>(), u.0.clone()));
    out
}

/// Minimal generators of the saturated ideal with diagram `diag`.
///
/// Scans degrees `u` in a linear extension of `⪯` and keeps
/// `𝒢_u = basis(ū) ∖ ⋃_{v ≺ u} T_ū 𝒢_v`. With an explicit box, the result
/// is checked against every degree of the default box and
/// [`Error::SearchBoxTooSmall`] names a missed monomial.
pub fn reconstruct_generators(
    diag: &KlyachkoDiagram,
    search: &SearchBox,
) -> Result<Reconstruction> {
    validate_diagram(diag)?;
    let fan = diag.fan();
    let grading = fan.grading();
    let proven = default_box(diag);
    let bx = match search {
        SearchBox::Default => proven.clone(),
        SearchBox::Explicit(b) => {
            if b.len() != grading.ell {
                return Err(Error::DimensionMismatch {
                    expected: grading.ell,
                    got: b.len(),
                });
            }
            b.clone()
        }
    };
    let mut found: Vec<(MultiDegree, Monomial)> = Vec::new();
    let mut by_degree = Vec::new();
    for u in box_degrees(&bx) {
        let lift = grading.lift(&u);
        let piece = graded_basis(diag, &lift)?;
        let earlier: Vec<&Monomial> = found
            .iter()
            .filter(|(v, _)| *v != u && u.dominates(v))
            .map(|(_, g)| g)
            .collect();
        let mut new: Vec<Monomial> = piece
            .monomials(fan)
            .into_iter()
            .filter(|m| !earlier.iter().any(|g| g.divides(m)))
            .collect();
        if !new.is_empty() {
            new.sort();
            found.extend(new.iter().map(|g| (u.clone(), g.clone())));
            by_degree.push((u, new));
        }
    }
    let pre_minimal: Vec<Monomial> = found.into_iter().map(|(_, g)| g).collect();
    let ideal = minimalize(fan.num_rays(), pre_minimal.clone());
    if let SearchBox::Explicit(_) = search {
        for u in box_degrees(&proven) {
            let lift = grading.lift(&u);
            for m in graded_basis(diag, &lift)?.monomials(fan) {
                if !ideal.contains(&m) {
                    return Err(Error::SearchBoxTooSmall {
                        degree: u.0,
                        monomial: m.to_string(),
                    });
                }
            }
        }
    }
    Ok(Reconstruction {
        pre_minimal,
        ideal,
        by_degree,
        search_box: bx,
    })
}

/// `H¹_B(I)_[D]`: monomials of `I^sat_[D]` outside `I`.
pub fn local_cohomology_h1(
    ideal: &MonomialIdeal,
    diag: &KlyachkoDiagram,
    d: &[i64],
) -> Result<GradedPiece> {
    let fan = diag.fan();
    let mut piece = graded_basis(diag, d)?;
    let gens: Vec<(Character, Vec<i64>)> = ideal
        .gens()
        .iter()
        .map(|g| (Character::zero(fan.dim()), g.as_i64()))
        .collect();
    let covered: BTreeSet<Character> = span_set(fan, &gens, d)?.covered.into_iter().collect();
    piece.basis.retain(|m| !covered.contains(m));
    Ok(piece)
}

/// Points of `region` inside `𝒞₀(D)`, as monomials of degree `[D]`.
pub fn region_monomials(fan: &Fan, region: &LatticeRegion, d: &[i64]) -> Result<Vec<Monomial>> {
    Ok(polytope_points(fan, d)?
        .into_iter()
        .filter(|m| region.contains(m))
        .map(|m| monomial_of(fan, &m, d))
        .collect())
}
