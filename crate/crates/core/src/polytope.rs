//! Lattice points of a rational polyhedron `{y : A y >= b}` by exact
//! Fourier–Motzkin bound propagation.
//!
//! Variables are eliminated from the last to the first. Enumeration then walks
//! the variables in order, reading integer bounds for `y_k` off the projected
//! system in `y_0..=y_k` with the prefix already fixed.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{gcd_all, narrow};

/// The constraint `coeffs · y >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

impl Halfspace {
    pub fn new(coeffs: Vec<i64>, rhs: i64) -> Self {
        Halfspace { coeffs, rhs }
    }

    /// Divides out the content of the coefficient vector, rounding the
    /// right-hand side up. Valid for integer points.
    fn tightened(mut self) -> Self {
        let g = gcd_all(&self.coeffs);
        if g > 1 {
            for c in &mut self.coeffs {
                *c /= g;
            }
            self.rhs = div_ceil(self.rhs, g);
        }
        self
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

fn eliminate(system: &[Halfspace], var: usize) -> Result<Vec<Halfspace>> {
    let mut out = BTreeSet::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for h in system {
        match h.coeffs[var].signum() {
            0 => {
                out.insert(h.clone());
            }
            1 => pos.push(h),
            _ => neg.push(h),
        }
    }
    for p in &pos {
        for q in &neg {
            let (a, b) = (p.coeffs[var] as i128, -(q.coeffs[var] as i128));
            let coeffs = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .map(|(&x, &y)| narrow(b * x as i128 + a * y as i128))
                .collect::<Result<Vec<_>>>()?;
            let rhs = narrow(b * p.rhs as i128 + a * q.rhs as i128)?;
            out.insert(Halfspace::new(coeffs, rhs).tightened());
        }
    }
    Ok(prune(out))
}

/// Keeps only the strongest right-hand side for each coefficient vector.
fn prune(set: BTreeSet<Halfspace>) -> Vec<Halfspace> {
    let mut out: Vec<Halfspace> = Vec::new();
    for h in set {
        match out.last_mut() {
            Some(last) if last.coeffs == h.coeffs => last.rhs = last.rhs.max(h.rhs),
            _ => out.push(h),
        }
    }
    out
}

/// All integer points of `{y ∈ ℤ^dim : coeffs · y >= rhs for every constraint}`,
/// in lexicographic order. Fails with [`Error::Unbounded`] if the rational
/// polyhedron is nonempty and unbounded.
pub fn integer_points(dim: usize, constraints: &[Halfspace]) -> Result<Vec<Vec<i64>>> {
    for h in constraints {
        if h.coeffs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: h.coeffs.len(),
            });
        }
    }
    // levels[k] only involves y_0..y_{k-1}
    let mut levels = vec![Vec::new(); dim + 1];
    levels[dim] = prune(
        constraints
            .iter()
            .cloned()
            .map(Halfspace::tightened)
            .collect(),
    );
    for k in (0..dim).rev() {
        levels[k] = eliminate(&levels[k + 1], k)?;
    }
    if levels[0].iter().any(|h| h.rhs > 0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(dim);
    walk(&levels, dim, &mut prefix, &mut out)?;
    Ok(out)
}

fn walk(
    levels: &[Vec<Halfspace>],
    dim: usize,
    prefix: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) -> Result<()> {
    let k = prefix.len();
    if k == dim {
        out.push(prefix.clone());
        return Ok(());
    }
    let (mut lo, mut hi): (Option<i64>, Option<i64>) = (None, None);
    for h in &levels[k + 1] {
        let c = h.coeffs[k];
        let fixed: i128 = h.coeffs[..k]
            .iter()
            .zip(prefix.iter())
            .map(|(&a, &y)| a as i128 * y as i128)
            .sum();
        let rest = narrow(h.rhs as i128 - fixed)?;
        match c.signum() {
            0 => {
                if rest > 0 {
                    return Ok(());
                }
            }
            1 => {
                let b = div_ceil(rest, c);
                lo = Some(lo.map_or(b, |l| l.max(b)));
            }
            _ => {
                let b = div_floor(-rest, -c);
                hi = Some(hi.map_or(b, |u| u.min(b)));
            }
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::Unbounded);
    };
    for y in lo..=hi {
        prefix.push(y);
        walk(levels, dim, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}
