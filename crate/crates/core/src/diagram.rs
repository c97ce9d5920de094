//! Klyachko diagrams `{(𝒞^σ_I, Δ^σ_I)}_σ` of monomial ideals.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;
use crate::region::{Cell, Interval, LatticeRegion, RegionJson};
use crate::toric::{Character, Fan};

/// How generators of equal degree along a ray are ordered in the recursion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieOrder {
    /// Stable by generator index.
    #[default]
    Index,
    /// Reverse generator index.
    Reversed,
}

#[derive(Clone, Debug)]
pub struct ConeEntry {
    pub c: LatticeRegion,
    pub delta: LatticeRegion,
}

#[derive(Clone, Debug)]
pub struct KlyachkoDiagram {
    fan: Fan,
    s: Vec<i64>,
    /// Aligned with `fan.cones()`.
    entries: Vec<ConeEntry>,
}

type Bounds = Vec<Interval>;

struct Recursion<'a> {
    exps: Vec<Vec<i64>>,
    s: &'a [i64],
    tie: TieOrder,
    memo: HashMap<(Vec<usize>, Vec<usize>), Rc<Vec<Bounds>>>,
}

impl Recursion<'_> {
    /// Cells of `Δ^σ(subset)` for `σ = cone(prefix)`, aligned with `prefix`.
    fn delta(&mut self, prefix: &[usize], subset: &[usize]) -> Rc<Vec<Bounds>> {
        let key = (prefix.to_vec(), subset.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = if subset.is_empty() {
            vec![prefix
                .iter()
                .map(|&r| Interval::at_least(self.s[r]))
                .collect()]
        } else if prefix.len() == 1 {
            let r = prefix[0];
            let least = subset.iter().map(|&g| self.exps[g][r]).min().unwrap();
            vec![vec![Interval::closed(self.s[r], least - 1)]]
        } else {
            let (&last, head) = prefix.split_last().unwrap();
            let mut order = subset.to_vec();
            match self.tie {
                TieOrder::Index => order.sort_by_key(|&g| (self.exps[g][last], g)),
                TieOrder::Reversed => {
                    order.sort_by_key(|&g| (self.exps[g][last], std::cmp::Reverse(g)))
                }
            }
            let t = order.len();
            let mut cells = Vec::new();
            for j in 0..=t {
                let lo = if j == 0 {
                    self.s[last]
                } else {
                    self.exps[order[j - 1]][last]
                };
                let hi = (j < t).then(|| self.exps[order[j]][last] - 1);
                let band = Interval::new(Some(lo), hi);
                if band.is_empty() {
                    continue;
                }
                let mut first: Vec<usize> = order[..j].to_vec();
                first.sort_unstable();
                for cell in self.delta(head, &first).iter() {
                    let mut c = cell.clone();
                    c.push(band);
                    if !c.iter().any(Interval::is_empty) {
                        cells.push(c);
                    }
                }
            }
            cells
        };
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }
}

pub fn compute_diagram(ideal: &MonomialIdeal, fan: &Fan) -> Result<KlyachkoDiagram> {
    compute_diagram_with(ideal, fan, TieOrder::Index)
}

pub fn compute_diagram_with(
    ideal: &MonomialIdeal,
    fan: &Fan,
    tie: TieOrder,
) -> Result<KlyachkoDiagram> {
    if ideal.nvars() != fan.num_rays() {
        return Err(Error::DimensionMismatch {
            expected: fan.num_rays(),
            got: ideal.nvars(),
        });
    }
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let s: Vec<i64> = ideal.min_exponents().into_iter().map(i64::from).collect();
    let mut rec = Recursion {
        exps: ideal.gens().iter().map(|g| g.as_i64()).collect(),
        s: &s,
        tie,
        memo: HashMap::new(),
    };
    let all: Vec<usize> = (0..ideal.gens().len()).collect();
    let mut entries = Vec::new();
    for (ci, cone) in fan.cones().iter().enumerate() {
        let frame = fan.frame(ci).clone();
        let lo: Vec<i64> = cone.iter().map(|&r| s[r]).collect();
        let c = LatticeRegion::orthant(frame.clone(), &lo);
        let delta = if cone.is_empty() {
            LatticeRegion::empty(frame)
        } else {
            let cells = rec
                .delta(cone, &all)
                .iter()
                .map(|b| Cell {
                    rays: cone.clone(),
                    bounds: b.clone(),
                })
                .collect();
            LatticeRegion::from_cells(frame, cells)
        };
        entries.push(ConeEntry { c, delta });
    }
    Ok(KlyachkoDiagram {
        fan: fan.clone(),
        s,
        entries,
    })
}

impl KlyachkoDiagram {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn s(&self) -> &[i64] {
        &self.s
    }

    pub fn entries(&self) -> &[ConeEntry] {
        &self.entries
    }

    pub fn entry(&self, cone_index: usize) -> &ConeEntry {
        &self.entries[cone_index]
    }

    pub fn entry_for(&self, cone: &[usize]) -> Result<&ConeEntry> {
        let i = self
            .fan
            .cone_index(cone)
            .ok_or_else(|| Error::UnknownCone(cone.to_vec()))?;
        Ok(&self.entries[i])
    }

    /// `Δ^σ` for the `i`-th maximal cone in input order.
    pub fn max_delta(&self, i: usize) -> &LatticeRegion {
        &self.entries[self.fan.max_cone_indices()[i]].delta
    }

    /// Builds a diagram from explicit regions; cones without an entry get
    /// `𝒞^σ = {⟨m, n(ρ)⟩ ≥ s_ρ}` and `Δ^σ = ∅`.
    pub fn from_parts(
        fan: &Fan,
        s: Vec<i64>,
        deltas: Vec<(Vec<usize>, LatticeRegion)>,
    ) -> Result<KlyachkoDiagram> {
        if s.len() != fan.num_rays() {
            return Err(Error::DimensionMismatch {
                expected: fan.num_rays(),
                got: s.len(),
            });
        }
        let mut entries: Vec<ConeEntry> = fan
            .cones()
            .iter()
            .enumerate()
            .map(|(ci, cone)| {
                let frame = fan.frame(ci).clone();
                let lo: Vec<i64> = cone.iter().map(|&r| s[r]).collect();
                ConeEntry {
                    c: LatticeRegion::orthant(frame.clone(), &lo),
                    delta: LatticeRegion::empty(frame),
                }
            })
            .collect();
        for (cone, delta) in deltas {
            let ci = fan.cone_index(&cone).ok_or(Error::UnknownCone(cone))?;
            if delta.frame() != fan.frame(ci) {
                return Err(Error::ConeMismatch {
                    left: fan.cones()[ci].clone(),
                    right: delta.cone().to_vec(),
                });
            }
            entries[ci].delta = delta;
        }
        Ok(KlyachkoDiagram {
            fan: fan.clone(),
            s,
            entries,
        })
    }

    pub fn to_json(&self) -> DiagramJson {
        let cones = self
            .fan
            .cones()
            .iter()
            .zip(&self.entries)
            .map(|(cone, e)| {
                (
                    cone_key(cone),
                    EntryJson {
                        c: Some(e.c.to_json()),
                        delta: e.delta.to_json(),
                    },
                )
            })
            .collect();
        DiagramJson {
            s: self.s.clone(),
            cones,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).unwrap()
    }

    pub fn from_json(fan: &Fan, json: &DiagramJson) -> Result<KlyachkoDiagram> {
        let s = if json.s.is_empty() {
            vec![0; fan.num_rays()]
        } else {
            json.s.clone()
        };
        let mut deltas = Vec::new();
        let mut given_c = Vec::new();
        for (key, entry) in &json.cones {
            let cone = parse_cone_key(key)?;
            let ci = fan
                .cone_index(&cone)
                .ok_or_else(|| Error::UnknownCone(cone.clone()))?;
            let frame = fan.frame(ci).clone();
            deltas.push((cone, LatticeRegion::from_json(frame.clone(), &entry.delta)?));
            if let Some(c) = &entry.c {
                given_c.push((ci, LatticeRegion::from_json(frame, c)?));
            }
        }
        let diag = KlyachkoDiagram::from_parts(fan, s, deltas)?;
        for (ci, c) in given_c {
            if !c.equals(&diag.entries[ci].c)? {
                return Err(Error::InvalidDiagram(format!(
                    "C for cone {:?} does not match s",
                    fan.cones()[ci]
                )));
            }
        }
        Ok(diag.simplified())
    }

    pub fn from_json_str(fan: &Fan, text: &str) -> Result<KlyachkoDiagram> {
        let json: DiagramJson = serde_json::from_str(text)?;
        KlyachkoDiagram::from_json(fan, &json)
    }

    fn simplified(mut self) -> Self {
        for e in &mut self.entries {
            e.delta = e.delta.simplified();
        }
        self
    }

    /// Membership-level equality on every cone.
    pub fn equals(&self, other: &KlyachkoDiagram) -> Result<bool> {
        if self.fan != other.fan {
            return Err(Error::FanMismatch);
        }
        if self.s != other.s {
            return Ok(false);
        }
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.delta.equals(&b.delta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn cone_key(cone: &[usize]) -> String {
    format!(
        "[{}]",
        cone.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn parse_cone_key(key: &str) -> Result<Vec<usize>> {
    let inner = key
        .trim()
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad cone key {key:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad cone key {key:?}")))
        })
        .collect()
}

/// Serialized diagram. `C` may be omitted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    #[serde(default)]
    pub s: Vec<i64>,
    pub cones: BTreeMap<String, EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<RegionJson>,
    #[serde(rename = "Delta")]
    pub delta: RegionJson,
}

/// Whether `I^σ_m ≠ 0`, i.e. `m ∈ 𝒞^σ ∖ Δ^σ`.
pub fn filtration_member(diag: &KlyachkoDiagram, cone_index: usize, m: &Character) -> bool {
    let e = &diag.entries[cone_index];
    e.c.contains(m) && !e.delta.contains(m)
}

/// The diagram of `I + J` from those of `I` and `J`.
pub fn sum_diagram(di: &KlyachkoDiagram, dj: &KlyachkoDiagram) -> Result<KlyachkoDiagram> {
    if di.fan != dj.fan {
        return Err(Error::FanMismatch);
    }
    let fan = &di.fan;
    let s: Vec<i64> = di.s.iter().zip(&dj.s).map(|(a, b)| *a.min(b)).collect();
    let mut entries = Vec::new();
    for (ci, cone) in fan.cones().iter().enumerate() {
        let (a, b) = (&di.entries[ci], &dj.entries[ci]);
        let lo: Vec<i64> = cone.iter().map(|&r| s[r]).collect();
        let c = LatticeRegion::orthant(fan.frame(ci).clone(), &lo);
        let both = a.delta.intersect(&b.delta)?;
        let only_i = a.delta.intersect(&c.difference(&b.c)?)?;
        let only_j = b.delta.intersect(&c.difference(&a.c)?)?;
        let neither = c.difference(&a.c.union(&b.c)?)?;
        let delta = both
            .union(&only_i)?
            .union(&only_j)?
            .union(&neither)?
            .simplified();
        entries.push(ConeEntry { c, delta });
    }
    Ok(KlyachkoDiagram {
        fan: fan.clone(),
        s,
        entries,
    })
}

/// `(𝒞^σ(D), Δ^σ(D))` for one maximal cone.
#[derive(Clone, Debug)]
pub struct ShiftedEntry {
    pub cone_index: usize,
    pub tau: Character,
    pub c: LatticeRegion,
    pub delta: LatticeRegion,
}

/// Translates each maximal cone's entry to degree `D`: `m ∈ Δ^σ(D)` iff
/// `m + τ_σ ∈ Δ^σ`, where `⟨τ_σ, n(ρ)⟩ = D_ρ` on `σ(1)`.
pub fn shift_diagram(diag: &KlyachkoDiagram, d: &[i64]) -> Result<Vec<ShiftedEntry>> {
    let fan = &diag.fan;
    if d.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch {
            expected: fan.num_rays(),
            got: d.len(),
        });
    }
    Ok(fan
        .max_cone_indices()
        .iter()
        .map(|&ci| {
            let tau = fan.tau_for_cone(ci, d);
            let back = -&tau;
            let e = &diag.entries[ci];
            ShiftedEntry {
                cone_index: ci,
                c: e.c.shift(&back),
                delta: e.delta.shift(&back),
                tau,
            }
        })
        .collect())
}

/// Checks the structural conditions every diagram of an ideal satisfies on
/// maximal cones: `𝒞^σ` is the orthant at `s`, `Δ^σ ⊆ 𝒞^σ`, and `Δ^σ` is
/// closed under moving down inside `𝒞^σ`.
pub fn validate_diagram(diag: &KlyachkoDiagram) -> Result<()> {
    if diag.s.iter().any(|&v| v < 0) {
        return Err(Error::InvalidDiagram("negative entry in s".into()));
    }
    for &ci in diag.fan.max_cone_indices() {
        let cone = &diag.fan.cones()[ci];
        let e = &diag.entries[ci];
        if !e.delta.is_subset(&e.c)? {
            return Err(Error::InvalidDiagram(format!(
                "Delta of cone {cone:?} leaves C"
            )));
        }
        for cell in e.delta.cells() {
            for (i, b) in cell.bounds.iter().enumerate() {
                let Some(lo) = b.lo else { continue };
                let mut slab = cell.clone();
                slab.bounds[i] = Interval::point(lo - 1);
                let slab = LatticeRegion::from_cells(e.c.frame().clone(), vec![slab]);
                if !slab.intersect(&e.c)?.is_subset(&e.delta)? {
                    return Err(Error::InvalidDiagram(format!(
                        "Delta of cone {cone:?} is not closed downwards below {cell}"
                    )));
                }
            }
        }
    }
    Ok(())
}
