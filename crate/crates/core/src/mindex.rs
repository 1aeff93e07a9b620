//! Exponent vectors and the lexicomogeneous order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{GermError, Result};

/// Exponent vector `(n_1, …, n_m)` of a monomial `z_1^{n_1}⋯z_m^{n_m}`.
///
/// `Ord` is the lexicomogeneous order: total degree first, then
/// lexicographic, so `(0,2) ≺ (1,0)` and `(1,1,0) ≺ (0,0,3)`. Indices of
/// different lengths compare by length first; use [`MultiIndex::try_cmp`]
/// when a length mismatch is an error.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    /// The unit vector `e_j` in `m` variables.
    pub fn unit(m: usize, j: usize) -> Self {
        let mut v = vec![0; m];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|n|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `n! = n_1!⋯n_m!`.
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, &e| acc * factorial(e))
    }

    /// Natural log of `n!`, finite for every index.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&e| ln_factorial(e)).sum()
    }

    pub fn checked_add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` when it stays in `ℕ^m`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Lexicomogeneous comparison, rejecting indices of different lengths.
    pub fn try_cmp(&self, other: &MultiIndex) -> Result<Ordering> {
        if self.0.len() != other.0.len() {
            return Err(GermError::DimensionMismatch {
                expected: self.0.len(),
                found: other.0.len(),
            });
        }
        Ok(self.cmp(other))
    }

    pub(crate) fn with(&self, j: usize, e: u32) -> MultiIndex {
        let mut v = self.0.clone();
        v[j] = e;
        MultiIndex(v)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

/// All indices of `m` variables with exact degree `d`, increasing in `≺`.
pub fn homogeneous(m: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fill(&mut cur, 0, d, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, rest: u32, out: &mut Vec<MultiIndex>) {
    let m = cur.len();
    if m == 0 {
        if rest == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == m - 1 {
        cur[pos] = rest;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for e in 0..=rest {
        cur[pos] = e;
        fill(cur, pos + 1, rest - e, out);
    }
    cur[pos] = 0;
}

/// All indices with `|n| ≤ d`, increasing in `≺`.
pub fn up_to_degree(m: usize, d: u32) -> Vec<MultiIndex> {
    (0..=d).flat_map(|k| homogeneous(m, k)).collect()
}

/// `C(m+d, d)`, the number of indices of `m` variables with `|n| ≤ d`.
pub fn count_up_to(m: usize, d: u32) -> usize {
    binomial(m as u64 + d as u64, d as u64) as usize
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi<const N: usize>(v: [u32; N]) -> MultiIndex {
        MultiIndex::from(v)
    }

    #[test]
    fn lexicomogeneous_examples() {
        // lexicographic tie-break inside a degree: (0,2) ⋘ (1,1) ⋘ (2,0)
        assert_eq!(mi([0, 2]).cmp(&mi([1, 1])), Ordering::Less);
        assert_eq!(mi([1, 1]).cmp(&mi([2, 0])), Ordering::Less);
        // degree dominates: (1,0) ≺ (0,2)
        assert_eq!(mi([1, 0]).cmp(&mi([0, 2])), Ordering::Less);
        assert_eq!(mi([1, 0]).cmp(&mi([1, 0])), Ordering::Equal);
        assert_eq!(mi([0, 0, 3]).cmp(&mi([1, 1, 0])), Ordering::Greater);
        // displayed chain (2,0) ⪰ (1,1) ⪰ (0,2) ⪰ (1,0) ⪰ (0,1) ⪰ (0,0)
        let chain = [
            mi([2, 0]),
            mi([1, 1]),
            mi([0, 2]),
            mi([1, 0]),
            mi([0, 1]),
            mi([0, 0]),
        ];
        assert!(chain.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            mi([1, 0]).try_cmp(&mi([1, 0, 0])),
            Err(GermError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_counts_and_order() {
        for m in 1..=4 {
            for d in 0..=6 {
                let all = up_to_degree(m, d);
                assert_eq!(all.len(), count_up_to(m, d));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(mi([3, 2]).factorial(), BigUint::from(12u32));
        assert!((mi([5]).ln_factorial() - 120f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn multinomial_factorial_bounds() {
        // |j|! ≥ j!, and |j|! ≥ m!·j! when every j_ℓ > 0.
        for m in 1..=3usize {
            for j in up_to_degree(m, 7) {
                let total = factorial(j.degree());
                assert!(total >= j.factorial());
                if j.exps().iter().all(|&e| e > 0) {
                    assert!(total >= factorial(m as u32) * j.factorial());
                }
            }
        }
    }
}
