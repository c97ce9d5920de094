//! Multigraded Hilbert functions of `R/I` read off the diagram.

use serde::Serialize;

use crate::diagram::{compute_diagram, KlyachkoDiagram};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::reconstruction::graded_basis;
use crate::region::{polytope_points, Cell};
use crate::toric::{Fan, MultiDegree};

/// `h_{R/I}(α)` for the saturated ideal with diagram `diag`: the points of
/// `𝒞₀(ᾱ)` lying in `Δ^σ(ᾱ)` or outside `𝒞^σ(ᾱ)` for some maximal `σ`.
pub fn hilbert_value(diag: &KlyachkoDiagram, alpha: &MultiDegree) -> Result<u64> {
    let fan = diag.fan();
    let lift = fan.grading().lift(alpha);
    let total = polytope_points(fan, &lift)?.len();
    let inside = graded_basis(diag, &lift)?.basis.len();
    Ok((total - inside) as u64)
}

/// `dim R_α`.
pub fn ambient_dim(fan: &Fan, alpha: &MultiDegree) -> Result<u64> {
    Ok(polytope_points(fan, &fan.grading().lift(alpha))?.len() as u64)
}

/// `h_{R/I^sat}(α)` for any nonzero ideal, through `I = x^s · I₀`:
/// `h_R(α) − h_R(α − [s]) + h_{R/I₀^sat}(α − [s])`.
pub fn hilbert_value_general(ideal: &MonomialIdeal, fan: &Fan, alpha: &MultiDegree) -> Result<u64> {
    if ideal.is_zero() {
        return ambient_dim(fan, alpha);
    }
    let s = ideal.min_exponents();
    let reduced: Vec<Monomial> = ideal
        .gens()
        .iter()
        .map(|g| Monomial(g.0.iter().zip(&s).map(|(a, b)| a - b).collect()))
        .collect();
    let i0 = MonomialIdeal::new(ideal.nvars(), reduced)?;
    let shift = fan.grading().degree_of_exponents(&s);
    let beta = MultiDegree(alpha.0.iter().zip(&shift.0).map(|(a, b)| a - b).collect());
    let d0 = compute_diagram(&i0, fan)?;
    let h_r = ambient_dim(fan, alpha)?;
    let h_r_beta = ambient_dim(fan, &beta)?;
    Ok(h_r - h_r_beta + hilbert_value(&d0, &beta)?)
}

/// Why the Hilbert polynomial is not constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonConstantWitness {
    ShiftNonzero { ray: usize, s: i64 },
    InfiniteCell { cone: Vec<usize>, cell: String },
}

/// `Σ_σ |Δ^σ|` when `s = 0` and every `Δ^σ` of a maximal cone is finite.
pub fn constant_hilbert_poly(
    diag: &KlyachkoDiagram,
) -> std::result::Result<u64, NonConstantWitness> {
    if let Some((ray, &s)) = diag.s().iter().enumerate().find(|(_, &v)| v != 0) {
        return Err(NonConstantWitness::ShiftNonzero { ray, s });
    }
    let fan = diag.fan();
    let mut total = 0;
    for &ci in fan.max_cone_indices() {
        let delta = &diag.entry(ci).delta;
        match delta.count() {
            Ok(c) => total += c,
            Err(Error::Infinite(cell)) => {
                return Err(NonConstantWitness::InfiniteCell {
                    cone: fan.cones()[ci].clone(),
                    cell: cell.to_string(),
                })
            }
            Err(e) => unreachable!("counting a region: {e}"),
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeFiniteness {
    pub cone: Vec<usize>,
    pub finite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertValue {
    pub degree: MultiDegree,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub values: Vec<HilbertValue>,
    pub constant_poly: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_constant: Option<NonConstantWitness>,
    pub finiteness: Vec<ConeFiniteness>,
}

/// Values at `degrees` for the saturation of `ideal`, plus the constancy
/// verdict.
pub fn hilbert_report(
    ideal: &MonomialIdeal,
    fan: &Fan,
    degrees: &[MultiDegree],
) -> Result<HilbertReport> {
    let diag = compute_diagram(ideal, fan)?;
    let values = degrees
        .iter()
        .map(|a| {
            Ok(HilbertValue {
                degree: a.clone(),
                value: hilbert_value_general(ideal, fan, a)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = constant_hilbert_poly(&diag);
    let finiteness = fan
        .max_cone_indices()
        .iter()
        .map(|&ci| {
            let w: Option<&Cell> = diag.entry(ci).delta.infinite_witness();
            ConeFiniteness {
                cone: fan.cones()[ci].clone(),
                finite: w.is_none(),
                witness: w.map(|c| c.to_string()),
            }
        })
        .collect();
    Ok(HilbertReport {
        values,
        constant_poly: verdict.as_ref().ok().copied(),
        not_constant: verdict.err(),
        finiteness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{hilbert_oracle, saturate_oracle};

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, gens).unwrap()
    }

    #[test]
    fn p2_values_and_constant() {
        let fan = Fan::catalog("P2").unwrap();
        let i = ideal(3, &[&[0, 0, 2], &[1, 0, 1], &[1, 1, 0]]);
        let d = compute_diagram(&i, &fan).unwrap();
        let vals: Vec<u64> = (-1..=4)
            .map(|t| hilbert_value(&d, &MultiDegree(vec![t])).unwrap())
            .collect();
        assert_eq!(vals, vec![0, 1, 3, 3, 3, 3]);
        assert_eq!(constant_hilbert_poly(&d), Ok(3));
    }

    #[test]
    fn unit_ideal_is_zero() {
        let fan = Fan::catalog("P2").unwrap();
        let d = compute_diagram(&MonomialIdeal::unit(3), &fan).unwrap();
        for t in -1..4 {
            assert_eq!(hilbert_value(&d, &MultiDegree(vec![t])).unwrap(), 0);
        }
        assert_eq!(constant_hilbert_poly(&d), Ok(0));
    }

    #[test]
    fn general_case_with_shift() {
        let fan = Fan::catalog("P2").unwrap();
        let j = ideal(3, &[&[1, 1, 0], &[1, 0, 1]]);
        let sat = saturate_oracle(&j, &fan);
        for t in 0..6 {
            let a = MultiDegree(vec![t]);
            assert_eq!(
                hilbert_value_general(&j, &fan, &a).unwrap(),
                hilbert_oracle(&sat, fan.grading(), &a).unwrap()
            );
        }
        assert_eq!(
            hilbert_value_general(&j, &fan, &MultiDegree(vec![1])).unwrap(),
            3
        );
        let d = compute_diagram(&j, &fan).unwrap();
        assert_eq!(
            constant_hilbert_poly(&d),
            Err(NonConstantWitness::ShiftNonzero { ray: 0, s: 1 })
        );
    }
}
