//! Monomials and monomial ideals of the Cox ring, plus the direct
//! (diagram-free) saturation and Hilbert-function oracles.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{integer_points, Halfspace};
use crate::toric::{CoxGrading, Fan, MultiDegree};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }

    /// Exponent vector from integer entries, if they are all nonnegative.
    pub fn from_i64(v: &[i64]) -> Option<Monomial> {
        v.iter()
            .map(|&e| u32::try_from(e).ok())
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

/// Ascending total degree, then descending lexicographic exponents.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A monomial ideal, kept as its sorted minimal generating set. No generators
/// means the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    gens: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<Monomial>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                got: g.nvars(),
            });
        }
        Ok(minimalize(nvars, gens))
    }

    pub fn from_exponents(nvars: usize, gens: &[&[u32]]) -> Result<Self> {
        MonomialIdeal::new(nvars, gens.iter().map(|g| Monomial(g.to_vec())).collect())
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: vec![Monomial::one(nvars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.total_degree() == 0)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        minimalize(self.nvars, gens)
    }

    /// `s_ρ`, the least exponent of each variable over the generators.
    pub fn min_exponents(&self) -> Vec<u32> {
        (0..self.nvars)
            .map(|i| self.gens.iter().map(|g| g.0[i]).min().unwrap_or(0))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&IdealJson {
            gens: self.gens.iter().map(|g| g.0.clone()).collect(),
        })
        .unwrap()
    }

    pub fn from_json(text: &str, nvars: usize) -> Result<Self> {
        let raw: IdealJson = serde_json::from_str(text)?;
        MonomialIdeal::new(nvars, raw.gens.into_iter().map(Monomial).collect())
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// The divisibility-minimal generators, sorted.
pub fn minimalize(nvars: usize, mut gens: Vec<Monomial>) -> MonomialIdeal {
    gens.sort();
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    // a divisor never has larger total degree, so it is seen first
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    MonomialIdeal { nvars, gens: out }
}

/// `(I : x_i^∞)`.
pub fn colon_var_saturate(ideal: &MonomialIdeal, i: usize) -> MonomialIdeal {
    let gens = ideal
        .gens
        .iter()
        .map(|g| {
            let mut e = g.0.clone();
            e[i] = 0;
            Monomial(e)
        })
        .collect();
    minimalize(ideal.nvars, gens)
}

pub fn ideal_intersect(a: &MonomialIdeal, b: &MonomialIdeal) -> MonomialIdeal {
    let gens = a
        .gens
        .iter()
        .flat_map(|g| b.gens.iter().map(move |h| g.lcm(h)))
        .collect();
    minimalize(a.nvars, gens)
}

/// `I^sat = ⋂_σ (I : (x^σ̂)^∞)` computed by stripping variables.
pub fn saturate_oracle(ideal: &MonomialIdeal, fan: &Fan) -> MonomialIdeal {
    let mut acc: Option<MonomialIdeal> = None;
    for hat in fan.irrelevant_generators() {
        let mut part = ideal.clone();
        for (i, &e) in hat.iter().enumerate() {
            if e > 0 {
                part = colon_var_saturate(&part, i);
            }
        }
        acc = Some(match acc {
            None => part,
            Some(a) => ideal_intersect(&a, &part),
        });
    }
    acc.unwrap_or_else(|| ideal.clone())
}

/// All exponent vectors `k ≥ 0` with `deg(x^k) = α`, in lexicographic order.
pub fn monomials_of_degree(grading: &CoxGrading, alpha: &MultiDegree) -> Result<Vec<Monomial>> {
    if alpha.0.len() != grading.ell {
        return Err(Error::DimensionMismatch {
            expected: grading.ell,
            got: alpha.0.len(),
        });
    }
    let r = grading.r;
    let mut cs = Vec::new();
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = 1;
        cs.push(Halfspace::new(e, 0));
    }
    for (row, &a) in grading.deg_matrix.iter().zip(&alpha.0) {
        cs.push(Halfspace::new(row.clone(), a));
        cs.push(Halfspace::new(row.iter().map(|x| -x).collect(), -a));
    }
    Ok(integer_points(r, &cs)?
        .into_iter()
        .map(|k| Monomial::from_i64(&k).expect("nonnegative by construction"))
        .collect())
}

/// `h_{R/I}(α)` by counting standard monomials.
pub fn hilbert_oracle(
    ideal: &MonomialIdeal,
    grading: &CoxGrading,
    alpha: &MultiDegree,
) -> Result<u64> {
    Ok(monomials_of_degree(grading, alpha)?
        .iter()
        .filter(|m| !ideal.contains(m))
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, gens).unwrap()
    }

    #[test]
    fn minimalize_examples() {
        let i = ideal(
            4,
            &[
                &[0, 1, 0, 0],
                &[3, 0, 0, 1],
                &[2, 1, 0, 1],
                &[1, 2, 0, 1],
                &[0, 3, 0, 1],
            ],
        );
        assert_eq!(i, ideal(4, &[&[0, 1, 0, 0], &[3, 0, 0, 1]]));
        assert_eq!(ideal(1, &[&[1], &[2]]).gens(), &[Monomial(vec![1])]);
        assert!(minimalize(2, vec![]).is_zero());
    }

    #[test]
    fn canonical_order() {
        let i = ideal(4, &[&[0, 0, 1, 1], &[0, 0, 2, 0], &[0, 1, 0, 0]]);
        let gens: Vec<_> = i.gens().iter().map(|g| g.0.clone()).collect();
        assert_eq!(
            gens,
            vec![vec![0, 1, 0, 0], vec![0, 0, 2, 0], vec![0, 0, 1, 1]]
        );
        assert_eq!(i.to_json(), r#"{"gens":[[0,1,0,0],[0,0,2,0],[0,0,1,1]]}"#);
        assert_eq!(MonomialIdeal::from_json(&i.to_json(), 4).unwrap(), i);
    }

    #[test]
    fn display() {
        assert_eq!(Monomial(vec![2, 1, 0]).to_string(), "x0^2*x1");
        assert_eq!(Monomial(vec![0, 0]).to_string(), "1");
    }

    #[test]
    fn colon_and_intersection() {
        let i = ideal(3, &[&[1, 1, 0], &[2, 0, 1]]);
        assert_eq!(
            colon_var_saturate(&i, 0),
            ideal(3, &[&[0, 1, 0], &[0, 0, 1]])
        );
        let j = ideal(3, &[&[0, 2, 0]]);
        assert_eq!(colon_var_saturate(&j, 0), j);
        let a = ideal(2, &[&[1, 0]]);
        let b = ideal(2, &[&[0, 1]]);
        assert_eq!(ideal_intersect(&a, &b), ideal(2, &[&[1, 1]]));
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(ideal_intersect(&m, &m), m);
    }

    #[test]
    fn saturation_examples() {
        let p2 = Fan::catalog("P2").unwrap();
        let i = ideal(3, &[&[3, 1, 0], &[1, 1, 2], &[0, 0, 3], &[0, 3, 0]]);
        let sat = saturate_oracle(&i, &p2);
        assert!(sat.contains(&Monomial(vec![0, 1, 0])));
        assert!(!i.contains(&Monomial(vec![0, 1, 0])));
        let j = ideal(3, &[&[0, 0, 2], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(saturate_oracle(&j, &p2), j);
        let one = MonomialIdeal::unit(3);
        assert_eq!(saturate_oracle(&one, &p2), one);
        let h3 = Fan::catalog("H3").unwrap();
        let k = ideal(4, &[&[0, 1, 0, 0], &[3, 0, 0, 1]]);
        assert_eq!(
            saturate_oracle(&k, &h3),
            ideal(4, &[&[0, 1, 0, 0], &[0, 0, 0, 1]])
        );
    }

    #[test]
    fn degree_fibres() {
        let p2 = Fan::catalog("P2").unwrap();
        let g = CoxGrading::new(&p2).unwrap();
        assert_eq!(
            monomials_of_degree(&g, &MultiDegree(vec![2]))
                .unwrap()
                .len(),
            6
        );
        assert!(monomials_of_degree(&g, &MultiDegree(vec![-1]))
            .unwrap()
            .is_empty());
        let p3 = Fan::catalog("P3").unwrap();
        let g3 = CoxGrading::new(&p3).unwrap();
        assert_eq!(
            monomials_of_degree(&g3, &MultiDegree(vec![1]))
                .unwrap()
                .len(),
            4
        );
        let h3 = Fan::catalog("H3").unwrap();
        let gh = CoxGrading::new(&h3).unwrap();
        let mut got = monomials_of_degree(&gh, &MultiDegree(vec![0, 1])).unwrap();
        got.sort();
        let mut want = vec![
            Monomial(vec![0, 0, 1, 0]),
            Monomial(vec![3, 0, 0, 1]),
            Monomial(vec![2, 1, 0, 1]),
            Monomial(vec![1, 2, 0, 1]),
            Monomial(vec![0, 3, 0, 1]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn hilbert_counts() {
        let p2 = Fan::catalog("P2").unwrap();
        let g = CoxGrading::new(&p2).unwrap();
        let i = ideal(3, &[&[0, 0, 2], &[1, 0, 1], &[1, 1, 0]]);
        let vals: Vec<u64> = (0..4)
            .map(|t| hilbert_oracle(&i, &g, &MultiDegree(vec![t])).unwrap())
            .collect();
        assert_eq!(vals, vec![1, 3, 3, 3]);
        let one = MonomialIdeal::unit(3);
        assert_eq!(hilbert_oracle(&one, &g, &MultiDegree(vec![3])).unwrap(), 0);
        let zero = MonomialIdeal::zero(3);
        assert_eq!(
            hilbert_oracle(&zero, &g, &MultiDegree(vec![3])).unwrap(),
            10
        );
    }
}
