//! Truncated multivariate power series.
//!
//! A [`Series`] stores the coefficients `f_n` for `|n| ≤ trunc`; everything
//! above the truncation order is unknown, not zero. Every operation returns
//! the truncation order at which its result is still fully determined.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{GermError, Result};
use crate::mindex::MultiIndex;
use crate::scalar::Scalar;

/// Lowest degree carrying a nonzero coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// Every stored coefficient vanishes; the true valuation exceeds the
    /// truncation order carried here.
    ZeroThrough(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::ZeroThrough(_) => None,
        }
    }

    /// A lower bound on the valuation, usable in degree arithmetic.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) => v,
            Valuation::ZeroThrough(t) => t + 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Series<S> {
    nvars: usize,
    trunc: u32,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Series<S> {
    pub fn zero(nvars: usize, trunc: u32) -> Self {
        Series {
            nvars,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, trunc: u32, c: S) -> Self {
        let mut s = Series::zero(nvars, trunc);
        s.insert(MultiIndex::zero(nvars), c);
        s
    }

    pub fn one(nvars: usize, trunc: u32) -> Self {
        Series::constant(nvars, trunc, S::one())
    }

    /// The coordinate function `z_j`.
    pub fn var(nvars: usize, trunc: u32, j: usize) -> Self {
        assert!(
            j < nvars,
            "variable index {j} out of range for {nvars} variables"
        );
        let mut s = Series::zero(nvars, trunc);
        if trunc >= 1 {
            s.insert(MultiIndex::unit(nvars, j), S::one());
        }
        s
    }

    /// Builds a series from `(index, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, trunc: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut s = Series::zero(nvars, trunc);
        for (n, c) in terms {
            if n.nvars() != nvars {
                return Err(GermError::DimensionMismatch {
                    expected: nvars,
                    found: n.nvars(),
                });
            }
            if n.degree() > trunc {
                return Err(GermError::TruncationExceeded {
                    degree: n.degree(),
                    trunc,
                });
            }
            s.accumulate(n, c);
        }
        Ok(s)
    }

    /// Univariate series from a dense coefficient list `c_0, c_1, …`.
    pub fn univariate(trunc: u32, coeffs: impl IntoIterator<Item = S>) -> Self {
        let mut s = Series::zero(1, trunc);
        for (k, c) in coeffs.into_iter().enumerate() {
            let k = k as u32;
            if k > trunc {
                break;
            }
            s.insert(MultiIndex::new(vec![k]), c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Nonzero stored terms in increasing `≺` order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The Taylor coefficient `f_n`.
    pub fn coeff(&self, n: &MultiIndex) -> Result<S> {
        if n.nvars() != self.nvars {
            return Err(GermError::DimensionMismatch {
                expected: self.nvars,
                found: n.nvars(),
            });
        }
        if n.degree() > self.trunc {
            return Err(GermError::TruncationExceeded {
                degree: n.degree(),
                trunc: self.trunc,
            });
        }
        Ok(self.coeffs.get(n).cloned().unwrap_or_else(S::zero))
    }

    pub(crate) fn get(&self, n: &MultiIndex) -> Option<&S> {
        self.coeffs.get(n)
    }

    /// `f(0)`.
    pub fn constant_term(&self) -> S {
        self.coeffs
            .get(&MultiIndex::zero(self.nvars))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.keys().next() {
            Some(n) => Valuation::Finite(n.degree()),
            None => Valuation::ZeroThrough(self.trunc),
        }
    }

    /// Highest degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().map(MultiIndex::degree)
    }

    /// `J_N(f)`: drops every term of degree above `n`.
    pub fn jet(&self, n: u32) -> Self {
        let trunc = n.min(self.trunc);
        Series {
            nvars: self.nvars,
            trunc,
            coeffs: self
                .coeffs
                .iter()
                .take_while(|(k, _)| k.degree() <= trunc)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Reinterprets the stored terms as a polynomial known to degree `n`.
    ///
    /// Raising the order asserts that the unknown tail is zero; lowering it
    /// is [`Series::jet`].
    pub fn as_polynomial_to(&self, n: u32) -> Self {
        if n <= self.trunc {
            return self.jet(n);
        }
        Series {
            nvars: self.nvars,
            trunc: n,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Series {
            nvars: self.nvars,
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.degree() == d)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(GermError::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.jet(trunc);
        for (n, c) in other.coeffs.iter().take_while(|(k, _)| k.degree() <= trunc) {
            out.accumulate(n.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Series::zero(self.nvars, trunc);
        for (a, ca) in &self.coeffs {
            let da = a.degree();
            if da > trunc {
                break;
            }
            for (b, cb) in &other.coeffs {
                if da + b.degree() > trunc {
                    break;
                }
                out.accumulate(a.checked_add(b), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Series::zero(self.nvars, self.trunc);
        }
        self.map(|v| v.clone() * c.clone())
    }

    /// Multiplies by the monomial `z^n`, raising the order by `|n|`.
    pub fn shift(&self, n: &MultiIndex) -> Self {
        Series {
            nvars: self.nvars,
            trunc: self.trunc + n.degree(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.checked_add(n), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::one(self.nvars, self.trunc);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same dimensions");
        }
        acc
    }

    /// `∂f/∂z_j`, known to order `trunc − 1`.
    pub fn derive(&self, j: usize) -> Result<Self> {
        if j >= self.nvars {
            return Err(GermError::DimensionMismatch {
                expected: self.nvars,
                found: j + 1,
            });
        }
        if self.trunc == 0 {
            return Ok(Series::zero(self.nvars, 0));
        }
        let mut out = Series::zero(self.nvars, self.trunc - 1);
        for (n, c) in &self.coeffs {
            let e = n.exps()[j];
            if e == 0 {
                continue;
            }
            out.insert(n.with(j, e - 1), c.clone() * S::from_i64(e as i64));
        }
        Ok(out)
    }

    /// Iterated derivative `∂^k f/∂z_j^k`.
    pub fn derive_n(&self, j: usize, k: u32) -> Result<Self> {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derive(j)?;
        }
        Ok(out)
    }

    /// Multiplicative inverse `1/f`, defined when `f(0) ≠ 0`.
    pub fn recip(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0
            .inv()
            .ok_or_else(|| GermError::NotInvertible("series with zero constant term".into()))?;
        let parts: Vec<Series<S>> = (0..=self.trunc).map(|d| self.homogeneous_part(d)).collect();
        let mut out: Vec<Series<S>> = vec![Series::constant(self.nvars, self.trunc, inv0.clone())];
        for d in 1..=self.trunc as usize {
            let mut acc = Series::zero(self.nvars, self.trunc);
            for k in 1..=d {
                acc = acc.checked_add(&parts[k].checked_mul(&out[d - k])?)?;
            }
            out.push(acc.homogeneous_part(d as u32).scale(&(-inv0.clone())));
        }
        let mut res = Series::zero(self.nvars, self.trunc);
        for p in out {
            for (n, c) in p.coeffs {
                res.insert(n, c);
            }
        }
        Ok(res)
    }

    /// Re-indexes variables into a larger ring: old variable `i` becomes new
    /// variable `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| {
                let mut e = vec![0u32; nvars];
                for (i, &x) in n.exps().iter().enumerate() {
                    e[map[i]] += x;
                }
                (MultiIndex::new(e), c.clone())
            })
            .collect();
        Series {
            nvars,
            trunc: self.trunc,
            coeffs,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Series<T> {
        let mut out = Series::zero(self.nvars, self.trunc);
        for (n, c) in &self.coeffs {
            out.insert(n.clone(), f(c));
        }
        out
    }

    /// Same coefficients in complex doubles.
    pub fn to_approx(&self) -> Series<Complex64> {
        self.map(Scalar::to_c64)
    }

    /// Evaluates the stored polynomial at a complex point.
    pub fn eval_c64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        self.coeffs
            .iter()
            .map(|(n, c)| {
                n.exps()
                    .iter()
                    .zip(point)
                    .fold(c.to_c64(), |acc, (&e, &p)| acc * p.powu(e))
            })
            .sum()
    }

    /// Largest coefficient difference up to the common truncation order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let trunc = self.trunc.min(other.trunc);
        let d = self.jet(trunc).checked_sub(&other.jet(trunc));
        match d {
            Ok(d) => d.coeffs.values().map(Scalar::modulus).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }

    pub(crate) fn insert(&mut self, n: MultiIndex, c: S) {
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub(crate) fn accumulate(&mut self, n: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(n) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = std::mem::replace(e.get_mut(), S::zero()) + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }
}

impl<S: Scalar> PartialEq for Series<S> {
    /// Same variable count and agreement up to the smaller truncation order.
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let trunc = self.trunc.min(other.trunc);
        let a = self.coeffs.iter().take_while(|(k, _)| k.degree() <= trunc);
        let b = other.coeffs.iter().take_while(|(k, _)| k.degree() <= trunc);
        a.eq(b)
    }
}

/// Conventional variable names: `z`; `x, y`; `x, y, z`; else `z1, …, zm`.
pub fn default_var_names(m: usize) -> Vec<String> {
    match m {
        1 => vec!["z".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=m).map(|i| format!("z{i}")).collect(),
    }
}

impl<S: Scalar> Series<S> {
    /// Human-readable rendering with explicit variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (n, c) in &self.coeffs {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format_coeff(c));
            for (name, &e) in names.iter().zip(n.exps()) {
                match e {
                    0 => {}
                    1 => out.push_str(&format!("*{name}")),
                    _ => out.push_str(&format!("*{name}^{e}")),
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out.push_str(&format!(" + O({})", self.trunc + 1));
        out
    }
}

fn format_coeff<S: Scalar>(c: &S) -> String {
    match c.rational_parts() {
        Some((re, im)) if num_traits::Zero::is_zero(&im) => format!("({re})"),
        Some((re, im)) => format!("({re} + {im}i)"),
        None => {
            let v = c.to_c64();
            if v.im == 0.0 {
                format!("({})", v.re)
            } else {
                format!("({} + {}i)", v.re, v.im)
            }
        }
    }
}

impl<S: Scalar> fmt::Display for Series<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, GaussianRational};

    type S = Series<GaussianRational>;

    fn poly2(trunc: u32, terms: &[([u32; 2], i64)]) -> S {
        S::from_terms(
            2,
            trunc,
            terms.iter().map(|(e, c)| (MultiIndex::from(*e), q(*c, 1))),
        )
        .unwrap()
    }

    fn shared_factor_f1() -> S {
        // (x−1)(x+y)² = x³+2x²y+xy²−x²−2xy−y²
        poly2(
            6,
            &[
                ([3, 0], 1),
                ([2, 1], 2),
                ([1, 2], 1),
                ([2, 0], -1),
                ([1, 1], -2),
                ([0, 2], -1),
            ],
        )
    }

    #[test]
    fn difference_of_squares() {
        let a = S::univariate(4, [q(1, 1), q(1, 1)]);
        let b = S::univariate(4, [q(1, 1), q(-1, 1)]);
        assert_eq!(
            a.checked_mul(&b).unwrap(),
            S::univariate(4, [q(1, 1), q(0, 1), q(-1, 1)])
        );
    }

    #[test]
    fn expands_shared_factor_input() {
        let x = S::var(2, 6, 0);
        let y = S::var(2, 6, 1);
        let xm1 = x.checked_sub(&S::one(2, 6)).unwrap();
        let s = x.checked_add(&y).unwrap();
        let f1 = xm1.checked_mul(&s.pow(2)).unwrap();
        assert_eq!(f1, shared_factor_f1());
        assert_eq!(f1.coeff(&MultiIndex::from([1, 1])).unwrap(), q(-2, 1));
    }

    #[test]
    fn annihilator() {
        let f = shared_factor_f1();
        let z = S::zero(2, 3);
        let p = f.checked_mul(&z).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.trunc(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        let a = S::one(1, 3);
        let b = S::one(2, 3);
        assert!(matches!(
            a.checked_add(&b),
            Err(GermError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.checked_mul(&b),
            Err(GermError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jets() {
        let geo = S::univariate(8, std::iter::repeat_n(q(1, 1), 9));
        assert_eq!(geo.jet(2), S::univariate(2, [q(1, 1), q(1, 1), q(1, 1)]));
        assert_eq!(geo.jet(2).trunc(), 2);
        assert_eq!(geo.jet(0), S::constant(1, 0, q(1, 1)));
        // J_2(x³+2x²y+…−x²−2xy−y²) restricted to the x-only part x³−x² is −x²
        let f = poly2(4, &[([3, 0], 1), ([2, 1], 2), ([2, 0], -1)]);
        assert_eq!(f.jet(2), poly2(2, &[([2, 0], -1)]));
    }

    #[test]
    fn taylor_coefficients() {
        let f = S::univariate(3, [q(1, 1), q(0, 1), q(3, 1)]);
        assert_eq!(f.coeff(&MultiIndex::from([2])).unwrap(), q(3, 1));
        assert!(matches!(
            f.coeff(&MultiIndex::from([4])),
            Err(GermError::TruncationExceeded {
                degree: 4,
                trunc: 3
            })
        ));
        assert_eq!(
            S::zero(1, 3).coeff(&MultiIndex::from([1])).unwrap(),
            q(0, 1)
        );
    }

    #[test]
    fn valuations() {
        let f2 = poly2(4, &[([1, 0], 1), ([0, 1], 1), ([1, 1], -3), ([0, 2], -3)]);
        assert_eq!(f2.valuation(), Valuation::Finite(1));
        assert_eq!(S::zero(1, 5).valuation(), Valuation::ZeroThrough(5));
        let f = S::from_terms(
            1,
            6,
            [
                (MultiIndex::from([3]), q(1, 1)),
                (MultiIndex::from([5]), q(1, 1)),
            ],
        )
        .unwrap();
        assert_eq!(f.valuation(), Valuation::Finite(3));
    }

    #[test]
    fn derivatives() {
        // exp is its own derivative
        let mut c = vec![q(1, 1)];
        for n in 1..=8i64 {
            let prev = c.last().unwrap().clone();
            c.push(prev * q(1, n));
        }
        let e = S::univariate(8, c);
        let de = e.derive(0).unwrap();
        assert_eq!(de.trunc(), 7);
        assert_eq!(de, e);
        let x2y = poly2(4, &[([2, 1], 1)]);
        assert_eq!(x2y.derive(0).unwrap(), poly2(3, &[([1, 1], 2)]));
        let c0 = S::constant(1, 0, q(5, 1)).derive(0).unwrap();
        assert!(c0.is_zero());
        assert_eq!(c0.trunc(), 0);
    }

    #[test]
    fn reciprocal() {
        let one_minus_z = S::univariate(6, [q(1, 1), q(-1, 1)]);
        let r = one_minus_z.recip().unwrap();
        assert_eq!(r, S::univariate(6, std::iter::repeat_n(q(1, 1), 7)));
        assert!(S::var(1, 4, 0).recip().is_err());
    }

    #[test]
    fn equality_up_to_common_truncation() {
        let a = S::univariate(3, [q(1, 1), q(2, 1)]);
        let b = S::univariate(5, [q(1, 1), q(2, 1), q(0, 1), q(0, 1), q(7, 1)]);
        assert_eq!(a, b);
        assert_ne!(a.jet(5), S::univariate(3, [q(1, 1)]));
    }

    #[test]
    fn display() {
        let f = poly2(2, &[([1, 0], 1), ([0, 2], -3)]);
        assert_eq!(f.to_string(), "(1)*x + (-3)*y^2 + O(3)");
    }
}
