//! Multivariate polynomials over `ℚ(i)` with gcd and lcm.
//!
//! The gcd is the recursive primitive remainder sequence: content and
//! primitive part with respect to the main variable, pseudo-remainders, and
//! recursion on the coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::mindex::MultiIndex;
use crate::scalar::{GaussianRational, Scalar};
use crate::series::Series;

type G = GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, G>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: G) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, G::one())
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(MultiIndex::unit(nvars, j), G::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, G)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (n, c) in terms {
            p.add_term(n, c);
        }
        p
    }

    /// The stored terms of a series, read as a polynomial.
    pub fn from_series(s: &Series<G>) -> Self {
        Poly::from_terms(s.nvars(), s.terms().map(|(n, c)| (n.clone(), c.clone())))
    }

    pub fn to_series(&self, trunc: u32) -> Result<Series<G>> {
        Series::from_terms(
            self.nvars,
            trunc,
            self.terms.iter().map(|(n, c)| (n.clone(), c.clone())),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &G)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::degree)
    }

    /// Lowest total degree of a nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(MultiIndex::degree)
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> G {
        self.terms
            .get(&MultiIndex::zero(self.nvars))
            .cloned()
            .unwrap_or_else(G::zero)
    }

    fn add_term(&mut self, n: MultiIndex, c: G) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(n) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (n, c) in &other.terms {
            out.add_term(n.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-G::one()))
    }

    pub fn scale(&self, c: &G) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(n, v)| (n.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: BTreeMap<MultiIndex, G> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = acc.entry(a.checked_add(b)).or_insert_with(G::zero);
                *e = e.clone() + ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    fn mul_monomial(&self, m: &MultiIndex, c: &G) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(n, v)| (n.checked_add(m), v * c))
                .collect(),
        }
    }

    fn lead(&self) -> Option<(&MultiIndex, &G)> {
        self.terms.iter().next_back()
    }

    /// Scales so that the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(&Scalar::inv(c).expect("nonzero leading coefficient")),
        }
    }

    /// `self / b` when `b` divides `self` exactly.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        let (lb, cb) = b.lead()?;
        let cb_inv = Scalar::inv(cb)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((la, ca)) = rem.lead() {
            let m = la.checked_sub(lb)?;
            let c = ca * &cb_inv;
            rem = rem.sub(&b.mul_monomial(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    fn deg_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|n| n.exps()[v]).max().unwrap_or(0)
    }

    fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.deg_in(v) > 0)
    }

    /// Coefficient of `z_v^e`, as a polynomial free of `z_v`.
    fn coeff_in(&self, v: usize, e: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(n, _)| n.exps()[v] == e)
                .map(|(n, c)| (n.with(v, 0), c.clone()))
                .collect(),
        }
    }

    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        (0..=self.deg_in(v))
            .map(|e| self.coeff_in(v, e))
            .filter(|p| !p.is_zero())
            .collect()
    }
}

fn content(a: &Poly, v: usize) -> Poly {
    gcd_all(&a.coeffs_in(v))
}

fn primitive(a: &Poly, v: usize) -> Poly {
    if a.is_zero() {
        return a.clone();
    }
    a.div_exact(&content(a, v))
        .expect("content divides")
        .monic()
}

/// Pseudo-remainder of `a` by `b` in the variable `z_v`.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.deg_in(v);
    let lb = b.coeff_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() && r.deg_in(v) >= db {
        let dr = r.deg_in(v);
        let lr = r.coeff_in(v, dr);
        let shift = MultiIndex::unit(r.nvars, v).with(v, dr - db);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_monomial(&shift, &G::one()));
    }
    r
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let v = match (a.main_var(), b.main_var()) {
        (None, None) => return Poly::one(a.nvars),
        (x, y) => x.max(y).expect("one side has a variable"),
    };
    let (ca, cb) = (content(a, v), content(b, v));
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    if pa.deg_in(v) == 0 || pb.deg_in(v) == 0 {
        return c.monic();
    }
    let (mut r0, mut r1) = if pa.deg_in(v) >= pb.deg_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = prem(&r0, &r1, v);
        if r.is_zero() {
            break;
        }
        if r.deg_in(v) == 0 {
            r1 = Poly::one(a.nvars);
            break;
        }
        r0 = r1;
        r1 = primitive(&r, v);
    }
    c.mul(&primitive(&r1, v)).monic()
}

pub fn gcd_all(ps: &[Poly]) -> Poly {
    match ps.split_first() {
        None => panic!("gcd of an empty family"),
        Some((first, rest)) => rest.iter().fold(first.monic(), |acc, p| gcd(&acc, p)),
    }
}

/// Monic lcm; zero if either side is zero.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.nvars);
    }
    a.mul(b)
        .div_exact(&gcd(a, b))
        .expect("gcd divides the product")
        .monic()
}

pub fn lcm_all(ps: &[Poly]) -> Poly {
    match ps.split_first() {
        None => panic!("lcm of an empty family"),
        Some((first, rest)) => rest.iter().fold(first.monic(), |acc, p| lcm(&acc, p)),
    }
}
