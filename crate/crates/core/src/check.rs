//! Cross-checks of the diagram pipelines against the direct oracles.

use itertools::Itertools;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{
    compute_diagram, compute_diagram_with, filtration_member, KlyachkoDiagram, TieOrder,
};
use crate::error::Result;
use crate::hilbert::hilbert_value;
use crate::monomial::{
    hilbert_oracle, monomials_of_degree, saturate_oracle, Monomial, MonomialIdeal,
};
use crate::reconstruction::{graded_basis, local_cohomology_h1, reconstruct_generators, SearchBox};
use crate::toric::{Character, Fan, MultiDegree};

/// Largest exponent used by [`random_ideal`].
pub const MAX_EXPONENT: u32 = 5;
/// Largest number of generators used by [`random_ideal`].
pub const MAX_GENERATORS: usize = 5;

pub const WINDOW_ENV: &str = "KLYACHKO_WINDOW";

/// A nonzero ideal with 1 to 5 generators and exponents at most 5.
pub fn random_ideal<R: Rng>(rng: &mut R, nvars: usize) -> MonomialIdeal {
    let count = rng.gen_range(1..=MAX_GENERATORS);
    let gens = (0..count)
        .map(|_| {
            Monomial(
                (0..nvars)
                    .map(|_| rng.gen_range(0..=MAX_EXPONENT))
                    .collect(),
            )
        })
        .collect();
    MonomialIdeal::new(nvars, gens).expect("generators have the right length")
}

/// `count` ideals from a seeded stream.
pub fn random_ideals(seed: u64, nvars: usize, count: usize) -> Vec<MonomialIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_ideal(&mut rng, nvars)).collect()
}

/// `W = 2 + max generator exponent`, unless overridden by `KLYACHKO_WINDOW`.
pub fn default_window(ideal: &MonomialIdeal) -> i64 {
    if let Some(w) = std::env::var(WINDOW_ENV).ok().and_then(|v| v.parse().ok()) {
        return w;
    }
    2 + ideal
        .gens()
        .iter()
        .flat_map(|g| g.0.iter())
        .copied()
        .max()
        .unwrap_or(0) as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ideal: String,
    pub window: i64,
    pub properties: Vec<PropertyResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.properties.iter().filter(|p| !p.passed)
    }
}

fn outcome(name: &'static str, witness: Option<String>) -> PropertyResult {
    PropertyResult {
        name,
        passed: witness.is_none(),
        witness,
    }
}

/// Characters with all dual coordinates of cone `ci` in `[-w, w]`.
fn window_points(fan: &Fan, ci: usize, w: i64) -> Vec<Character> {
    let frame = fan.frame(ci);
    (0..fan.dim())
        .map(|_| -w..=w)
        .multi_cartesian_product()
        .map(|y| frame.from_coords(&y).unwrap())
        .collect()
}

fn degree_window(fan: &Fan, w: i64) -> Vec<MultiDegree> {
    (0..fan.grading().ell)
        .map(|_| -w..=w)
        .multi_cartesian_product()
        .map(MultiDegree)
        .collect()
}

/// `m ∈ ⋃_i 𝒞^σ_{kⁱ}` straight from the generators.
pub fn brute_member(ideal: &MonomialIdeal, fan: &Fan, cone: &[usize], m: &Character) -> bool {
    ideal
        .gens()
        .iter()
        .any(|g| cone.iter().all(|&r| m.pair(fan.ray(r)) >= g.0[r] as i64))
}

pub fn membership_identity(
    ideal: &MonomialIdeal,
    diag: &KlyachkoDiagram,
    w: i64,
) -> Option<String> {
    let fan = diag.fan();
    for &ci in fan.max_cone_indices() {
        let cone = &fan.cones()[ci];
        for m in window_points(fan, ci, w) {
            let want = brute_member(ideal, fan, cone, &m);
            if filtration_member(diag, ci, &m) != want {
                return Some(format!("cone {cone:?}, m = {m}: expected member = {want}"));
            }
        }
    }
    None
}

fn face_compatibility(diag: &KlyachkoDiagram, w: i64) -> Option<String> {
    let fan = diag.fan();
    for &ci in fan.max_cone_indices() {
        let sigma = &fan.cones()[ci];
        let faces: Vec<usize> = (0..fan.cones().len())
            .filter(|&ti| ti != ci && fan.cones()[ti].iter().all(|r| sigma.contains(r)))
            .collect();
        for m in window_points(fan, ci, w) {
            if !filtration_member(diag, ci, &m) {
                continue;
            }
            if let Some(&ti) = faces.iter().find(|&&ti| !filtration_member(diag, ti, &m)) {
                return Some(format!(
                    "m = {m} is in cone {sigma:?} but not in its face {:?}",
                    fan.cones()[ti]
                ));
            }
        }
    }
    None
}

fn diagrams_agree(a: &KlyachkoDiagram, b: &KlyachkoDiagram) -> Result<Option<String>> {
    let fan = a.fan();
    if a.s() != b.s() {
        return Ok(Some(format!("s differs: {:?} vs {:?}", a.s(), b.s())));
    }
    for ci in 0..fan.cones().len() {
        let (x, y) = (&a.entry(ci).delta, &b.entry(ci).delta);
        let diff = x.difference(y)?.union(&y.difference(x)?)?;
        if let Some(cell) = diff.cells().first() {
            return Ok(Some(format!(
                "Delta of cone {:?} differs on {cell}",
                fan.cones()[ci]
            )));
        }
    }
    Ok(None)
}

/// Runs every property for one ideal. `given` replaces the computed diagram
/// in the membership and face checks.
pub fn check_ideal(
    ideal: &MonomialIdeal,
    fan: &Fan,
    given: Option<&KlyachkoDiagram>,
    window: Option<i64>,
) -> Result<CheckReport> {
    let w = window.unwrap_or_else(|| default_window(ideal));
    let computed = compute_diagram(ideal, fan)?;
    let diag = given.unwrap_or(&computed);
    let sat = saturate_oracle(ideal, fan);
    let grading = fan.grading();
    let mut props = Vec::new();

    props.push(outcome(
        "membership_identity",
        membership_identity(ideal, diag, w),
    ));
    props.push(outcome("face_compatibility", face_compatibility(diag, w)));

    let roundtrip = match reconstruct_generators(&computed, &SearchBox::Default) {
        Ok(r) if r.ideal == sat => None,
        Ok(r) => Some(format!(
            "reconstructed {} but the saturation is {}",
            r.ideal, sat
        )),
        Err(e) => Some(format!("reconstruction failed: {e}")),
    };
    props.push(outcome("roundtrip_saturation", roundtrip));

    let mut hilbert = None;
    let mut h1 = None;
    for a in degree_window(fan, w) {
        let lift = grading.lift(&a);
        let got = hilbert_value(&computed, &a)?;
        let want = hilbert_oracle(&sat, grading, &a)?;
        if hilbert.is_none() && got != want {
            hilbert = Some(format!(
                "degree {a}: diagram gives {got}, oracle gives {want}"
            ));
        }
        if h1.is_none() {
            let basis = graded_basis(&computed, &lift)?.dim();
            let in_ideal = monomials_of_degree(grading, &a)?
                .iter()
                .filter(|m| ideal.contains(m))
                .count();
            let piece = local_cohomology_h1(ideal, &computed, &lift)?.dim();
            if basis != in_ideal + piece {
                h1 = Some(format!(
                    "degree {a}: |I^sat| = {basis} but |I| + |H1| = {in_ideal} + {piece}"
                ));
            } else if sat == *ideal && piece != 0 {
                h1 = Some(format!(
                    "degree {a}: saturated ideal with H1 of dimension {piece}"
                ));
            }
        }
    }
    props.push(outcome("hilbert_agreement", hilbert));
    props.push(outcome("h1_consistency", h1));

    let sat_diag = compute_diagram(&sat, fan)?;
    props.push(outcome(
        "saturation_invariance",
        diagrams_agree(&computed, &sat_diag)?,
    ));
    let reversed = compute_diagram_with(ideal, fan, TieOrder::Reversed)?;
    props.push(outcome(
        "tie_order_independence",
        diagrams_agree(&computed, &reversed)?,
    ));

    Ok(CheckReport {
        ideal: ideal.to_string(),
        window: w,
        properties: props,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_ideals_are_reproducible() {
        let a = random_ideals(7, 3, 5);
        let b = random_ideals(7, 3, 5);
        assert_eq!(a, b);
        for i in &a {
            assert!(!i.is_zero());
            assert!(i.gens().len() <= MAX_GENERATORS);
            assert!(i
                .gens()
                .iter()
                .all(|g| g.0.iter().all(|&e| e <= MAX_EXPONENT)));
        }
    }

    #[test]
    fn worked_ideal_passes() {
        let fan = Fan::catalog("P2").unwrap();
        let i = MonomialIdeal::from_exponents(3, &[&[0, 0, 2], &[1, 0, 1], &[1, 1, 0]]).unwrap();
        let report = check_ideal(&i, &fan, None, None).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.properties.len(), 7);
    }

    #[test]
    fn corrupted_diagram_fails_with_witness() {
        let fan = Fan::catalog("P2").unwrap();
        let i = MonomialIdeal::from_exponents(3, &[&[0, 0, 2], &[1, 0, 1], &[1, 1, 0]]).unwrap();
        let text =
            r#"{"s":[0,0,0],"cones":{"[1,2]":{"Delta":{"cone":[1,2],"points":[[0,0],[1,0]]}}}}"#;
        let bad = KlyachkoDiagram::from_json_str(&fan, text).unwrap();
        let report = check_ideal(&i, &fan, Some(&bad), Some(3)).unwrap();
        let fail = report.failures().next().unwrap();
        assert_eq!(fail.name, "membership_identity");
        assert!(fail.witness.as_ref().unwrap().contains("(1,0)"));
    }
}
