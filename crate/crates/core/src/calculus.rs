//! Composition, inversion and the exponential charts of `Diff(ℂ,0)`.
//!
//! `𝒟(g) = z·exp(g)` maps `ℂ{z}` onto the germs of diffeomorphisms fixing the
//! origin, `ι(g) = 𝒟(g)^{∘−1}`, and `ℋ` is the logarithmic chart with
//! `ι = 𝒟∘ℋ`.

use std::collections::BTreeMap;

use crate::error::{GermError, Result};
use crate::mindex::MultiIndex;
use crate::scalar::Scalar;
use crate::series::Series;

/// Step used by approximate centered differences.
pub const FD_STEP: f64 = 1e-5;

/// Relative agreement required between closed form and finite difference.
pub const FD_RTOL: f64 = 1e-8;

/// `f∘(g_1, …, g_m)`, known up to the smallest truncation among the inputs.
///
/// Every `g_i` must vanish at the origin: beyond that the result would need
/// coefficients of `f` above its truncation.
pub fn compose<S: Scalar>(f: &Series<S>, g: &[Series<S>]) -> Result<Series<S>> {
    if g.len() != f.nvars() {
        return Err(GermError::DimensionMismatch {
            expected: f.nvars(),
            found: g.len(),
        });
    }
    let Some(first) = g.first() else {
        return Err(GermError::InvalidParameters(
            "cannot compose with an empty tuple".into(),
        ));
    };
    let n = first.nvars();
    for gi in g {
        if gi.nvars() != n {
            return Err(GermError::DimensionMismatch {
                expected: n,
                found: gi.nvars(),
            });
        }
        if !gi.constant_term().is_zero() {
            return Err(GermError::Domain(
                "inner series must vanish at the origin".into(),
            ));
        }
    }
    let trunc = g.iter().map(Series::trunc).fold(f.trunc(), u32::min);
    let terms: Vec<(&[u32], &S)> = f
        .terms()
        .take_while(|(k, _)| k.degree() <= trunc)
        .map(|(k, c)| (k.exps(), c))
        .collect();
    horner(&terms, 0, g, n, trunc)
}

/// Horner scheme in the variable `var`, recursing on the remaining ones.
fn horner<S: Scalar>(
    terms: &[(&[u32], &S)],
    var: usize,
    g: &[Series<S>],
    n: usize,
    trunc: u32,
) -> Result<Series<S>> {
    if var == g.len() {
        let c = terms
            .iter()
            .fold(S::zero(), |acc, (_, c)| acc + (*c).clone());
        return Ok(Series::constant(n, trunc, c));
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &S)>> = BTreeMap::new();
    for t in terms {
        groups.entry(t.0[var]).or_default().push(*t);
    }
    let Some(&top) = groups.keys().next_back() else {
        return Ok(Series::zero(n, trunc));
    };
    let mut acc = Series::zero(n, trunc);
    for k in (0..=top).rev() {
        if k < top {
            acc = acc.checked_mul(&g[var])?;
        }
        if let Some(group) = groups.get(&k) {
            acc = acc.checked_add(&horner(group, var + 1, g, n, trunc)?)?;
        }
    }
    Ok(acc)
}

/// `exp(h)`; over exact scalars `h(0)` must vanish.
pub fn exp_series<S: Scalar>(h: &Series<S>) -> Result<Series<S>> {
    let c = h.constant_term();
    let ec = c
        .try_exp()
        .ok_or_else(|| GermError::Domain("exp of a nonzero constant is not exact".into()))?;
    let h0 = h.checked_sub(&Series::constant(h.nvars(), h.trunc(), c))?;
    let mut acc = Series::one(h.nvars(), h.trunc());
    let mut pw = Series::one(h.nvars(), h.trunc());
    for p in 1..=h.trunc() {
        pw = pw.checked_mul(&h0)?.scale(&S::from_ratio(1, p as i64));
        if pw.is_zero() {
            break;
        }
        acc = acc.checked_add(&pw)?;
    }
    Ok(acc.scale(&ec))
}

/// `L(h) = Σ_{p>0} (−1)^{p+1} hᵖ/p`, the logarithm of `1 + h`.
pub fn log_map<S: Scalar>(h: &Series<S>) -> Result<Series<S>> {
    if !h.constant_term().is_zero() {
        return Err(GermError::Domain("log_map needs h(0) = 0".into()));
    }
    let mut acc = Series::zero(h.nvars(), h.trunc());
    let mut pw = h.clone();
    for p in 1..=h.trunc() as i64 {
        if pw.is_zero() {
            break;
        }
        let sign = if p % 2 == 1 { 1 } else { -1 };
        acc = acc.checked_add(&pw.scale(&S::from_ratio(sign, p)))?;
        pw = pw.checked_mul(h)?;
    }
    Ok(acc)
}

/// A germ `d ∈ Diff(ℂ,0)`: one variable, `d(0) = 0`, `d′(0) ≠ 0`.
#[derive(Clone, Debug)]
pub struct DiffeoGerm<S: Scalar> {
    series: Series<S>,
}

impl<S: Scalar> PartialEq for DiffeoGerm<S> {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series
    }
}

impl<S: Scalar> DiffeoGerm<S> {
    pub fn new(series: Series<S>) -> Result<Self> {
        if series.nvars() != 1 {
            return Err(GermError::DimensionMismatch {
                expected: 1,
                found: series.nvars(),
            });
        }
        if series.trunc() < 1 {
            return Err(GermError::InsufficientTruncation {
                needed: 1,
                available: series.trunc(),
            });
        }
        if !series.constant_term().is_zero() {
            return Err(GermError::Domain(
                "a diffeomorphism germ must fix the origin".into(),
            ));
        }
        if series.coeff(&MultiIndex::new(vec![1]))?.is_zero() {
            return Err(GermError::NotInvertible("zero linear coefficient".into()));
        }
        Ok(DiffeoGerm { series })
    }

    pub fn identity(trunc: u32) -> Self {
        DiffeoGerm {
            series: Series::var(1, trunc.max(1), 0),
        }
    }

    /// `λz`.
    pub fn linear(lambda: S, trunc: u32) -> Result<Self> {
        DiffeoGerm::new(Series::var(1, trunc.max(1), 0).scale(&lambda))
    }

    pub fn series(&self) -> &Series<S> {
        &self.series
    }

    pub fn into_series(self) -> Series<S> {
        self.series
    }

    pub fn trunc(&self) -> u32 {
        self.series.trunc()
    }

    /// The linear coefficient `d′(0)`.
    pub fn multiplier(&self) -> S {
        self.series
            .get(&MultiIndex::new(vec![1]))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn jet(&self, n: u32) -> Self {
        DiffeoGerm {
            series: self.series.jet(n.max(1)),
        }
    }

    /// `self∘other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(DiffeoGerm {
            series: compose(&self.series, std::slice::from_ref(&other.series))?,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        comp_inverse(self)
    }

    /// `self^{∘n}`.
    pub fn iterate(&self, n: u32) -> Result<Self> {
        let mut acc = DiffeoGerm::identity(self.trunc());
        for _ in 0..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.series == Series::var(1, self.trunc(), 0)
    }
}

/// Compositional inverse by a degree-wise triangular solve.
pub fn comp_inverse<S: Scalar>(d: &DiffeoGerm<S>) -> Result<DiffeoGerm<S>> {
    let a_inv = d
        .multiplier()
        .inv()
        .ok_or_else(|| GermError::NotInvertible("zero linear coefficient".into()))?;
    let t = d.trunc();
    let mut h = Series::var(1, t, 0).scale(&a_inv);
    for n in 2..=t {
        let c = compose(&d.series.jet(n), &[h.jet(n)])?.coeff(&MultiIndex::new(vec![n]))?;
        h.insert(MultiIndex::new(vec![n]), -(c * a_inv.clone()));
    }
    DiffeoGerm::new(h)
}

/// `𝒟(g) = z·exp(g)`, known to order `trunc_g + 1`.
pub fn diffeo_from<S: Scalar>(g: &Series<S>) -> Result<DiffeoGerm<S>> {
    if g.nvars() != 1 {
        return Err(GermError::DimensionMismatch {
            expected: 1,
            found: g.nvars(),
        });
    }
    DiffeoGerm::new(exp_series(g)?.shift(&MultiIndex::new(vec![1])))
}

/// `ι(g) = 𝒟(g)^{∘−1}`.
pub fn iota<S: Scalar>(g: &Series<S>) -> Result<DiffeoGerm<S>> {
    comp_inverse(&diffeo_from(g)?)
}

/// `u/z` for a one-variable series with `u(0) = 0`.
fn div_z<S: Scalar>(u: &Series<S>) -> Result<Series<S>> {
    if !u.constant_term().is_zero() {
        return Err(GermError::Domain("series is not divisible by z".into()));
    }
    let t = u.trunc().saturating_sub(1);
    Series::from_terms(
        1,
        t,
        u.terms()
            .map(|(k, c)| (MultiIndex::new(vec![k.exps()[0] - 1]), c.clone())),
    )
}

/// `ℋ(g) = L(ι(g)/z − 1)`, with `𝒟∘ℋ = ι` and `ℋ(0) = 0`.
///
/// When `ι(g)/z` has a constant term `c ≠ 1` (approximate scalars only) the
/// principal `log c` is added to `L(ι(g)/(cz) − 1)`.
pub fn h_map<S: Scalar>(g: &Series<S>) -> Result<Series<S>> {
    let u = div_z(iota(g)?.series())?;
    let c = u.constant_term();
    let lc = c
        .try_ln()
        .ok_or_else(|| GermError::Domain("log of the linear coefficient is not exact".into()))?;
    let c_inv = c
        .inv()
        .ok_or_else(|| GermError::NotInvertible("zero linear coefficient".into()))?;
    let w = u.scale(&c_inv);
    // The constant term is 1 by construction; drop it rather than trust rounding.
    let v = Series::from_terms(
        1,
        w.trunc(),
        w.terms()
            .filter(|(k, _)| !k.is_zero())
            .map(|(k, c)| (k.clone(), c.clone())),
    )?;
    log_map(&v)?.checked_add(&Series::constant(1, u.trunc(), lc))
}

/// Operators whose directional derivatives [`frechet_dir`] checks.
#[derive(Clone, Debug)]
pub enum FrechetOp<S: Scalar> {
    /// `g ↦ f∘g` for a fixed `f`.
    RightCompose(Series<S>),
    /// `g ↦ 𝒟(g)`.
    Diffeo,
    /// `g ↦ ι(g)`.
    Inverse,
}

impl<S: Scalar> FrechetOp<S> {
    pub fn apply(&self, g: &[Series<S>]) -> Result<Series<S>> {
        match self {
            FrechetOp::RightCompose(f) => compose(f, g),
            FrechetOp::Diffeo => Ok(diffeo_from(single(g)?)?.into_series()),
            FrechetOp::Inverse => Ok(iota(single(g)?)?.into_series()),
        }
    }

    /// The closed-form derivative at `g` in the direction `h`.
    pub fn derivative(&self, g: &[Series<S>], h: &[Series<S>]) -> Result<Series<S>> {
        let z = MultiIndex::new(vec![1]);
        match self {
            FrechetOp::RightCompose(f) => {
                if h.len() != g.len() {
                    return Err(GermError::DimensionMismatch {
                        expected: g.len(),
                        found: h.len(),
                    });
                }
                if h.iter().any(|hi| !hi.constant_term().is_zero()) {
                    return Err(GermError::Domain(
                        "direction must vanish at the origin".into(),
                    ));
                }
                let t = g
                    .iter()
                    .chain(h)
                    .map(Series::trunc)
                    .fold(f.trunc(), u32::min);
                let mut acc: Option<Series<S>> = None;
                for (i, hi) in h.iter().enumerate() {
                    // ∂_i f∘g is known one order short; h_i(0) = 0 restores it.
                    let term = compose(&f.derive(i)?, g)?
                        .as_polynomial_to(t)
                        .checked_mul(hi)?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.checked_add(&term)?,
                    });
                }
                Ok(acc.expect("at least one component").jet(t))
            }
            FrechetOp::Diffeo => {
                let (g, h) = (single(g)?, single(h)?);
                Ok(exp_series(g)?.checked_mul(h)?.shift(&z))
            }
            FrechetOp::Inverse => {
                let (g, h) = (single(g)?, single(h)?);
                let i = iota(g)?;
                let one_plus = Series::one(1, g.trunc()).checked_add(&g.derive(0)?.shift(&z))?;
                let quotient = h.checked_mul(&one_plus.recip()?)?.shift(&z);
                Ok(compose(&quotient, std::slice::from_ref(i.series()))?.neg())
            }
        }
    }
}

fn single<S: Scalar>(g: &[Series<S>]) -> Result<&Series<S>> {
    match g {
        [s] => Ok(s),
        _ => Err(GermError::DimensionMismatch {
            expected: 1,
            found: g.len(),
        }),
    }
}

#[derive(Clone, Debug)]
pub struct FrechetCheck<S: Scalar> {
    pub analytic: Series<S>,
    /// Absent when the operator is not polynomial in `ε` over exact scalars
    /// (a nonzero constant term in the direction of `𝒟` or `ι`).
    pub finite_difference: Option<Series<S>>,
    pub max_deviation: Option<f64>,
    pub agrees: Option<bool>,
}

/// Closed-form directional derivative of `op` at `g` along `h`, alongside a
/// centered finite difference.
///
/// Over approximate scalars the difference is `(op(g+εh) − op(g−εh))/2ε`.
/// Over exact scalars every coefficient of `op(g+εh)` is a polynomial in `ε`
/// of degree at most the truncation order, so a central stencil with enough
/// points recovers the derivative exactly.
pub fn frechet_dir<S: Scalar>(
    op: &FrechetOp<S>,
    g: &[Series<S>],
    h: &[Series<S>],
    eps: f64,
) -> Result<FrechetCheck<S>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(GermError::InvalidParameters(format!(
            "step {eps} must be positive"
        )));
    }
    let analytic = op.derivative(g, h)?;
    let polynomial_in_eps = h.iter().all(|hi| hi.constant_term().is_zero());
    let fd = if !S::EXACT {
        Some(central_difference(
            op,
            g,
            h,
            &[(1, S::from_ratio(1, 2))],
            eps,
        )?)
    } else if polynomial_in_eps {
        let p = analytic.trunc().div_ceil(2) + 1;
        let weights: Vec<(u32, S)> = (1..=p).map(|j| (j, stencil_weight(p, j))).collect();
        Some(central_difference(op, g, h, &weights, eps)?)
    } else {
        None
    };
    let Some(fd) = fd else {
        return Ok(FrechetCheck {
            analytic,
            finite_difference: None,
            max_deviation: None,
            agrees: None,
        });
    };
    let dev = analytic.max_abs_diff(&fd);
    let agrees = if S::EXACT {
        analytic == fd && analytic.trunc() == fd.trunc()
    } else {
        let scale = op
            .apply(g)?
            .terms()
            .map(|(_, c)| c.modulus())
            .fold(1.0, f64::max);
        let t = analytic.trunc().min(fd.trunc());
        let diff = analytic.jet(t).checked_sub(&fd.jet(t))?;
        let ok = diff.terms().all(|(n, c)| {
            let a = analytic.get(n).map(Scalar::modulus).unwrap_or(0.0);
            c.modulus() <= FD_RTOL * a.max(scale)
        });
        ok
    };
    Ok(FrechetCheck {
        analytic,
        finite_difference: Some(fd),
        max_deviation: Some(dev),
        agrees: Some(agrees),
    })
}

/// `(p!)² (−1)^{j+1} / (j (p−j)! (p+j)!)`, the weight of `f(jε) − f(−jε)`.
fn stencil_weight<S: Scalar>(p: u32, j: u32) -> S {
    use crate::mindex::factorial;
    use num_rational::BigRational;
    let num = factorial(p).pow(2);
    let den = factorial(p - j) * factorial(p + j) * j;
    let w = BigRational::new(num.into(), den.into());
    let w = if j % 2 == 1 { w } else { -w };
    S::from_rational(&w)
}

fn central_difference<S: Scalar>(
    op: &FrechetOp<S>,
    g: &[Series<S>],
    h: &[Series<S>],
    weights: &[(u32, S)],
    eps: f64,
) -> Result<Series<S>> {
    let e = S::from_c64(num_complex::Complex64::new(eps, 0.0))
        .ok_or_else(|| GermError::InvalidParameters(format!("step {eps} is not representable")))?;
    let e_inv = e.inv().expect("positive step");
    let mut acc: Option<Series<S>> = None;
    for (j, w) in weights {
        let step = e.clone() * S::from_i64(*j as i64);
        let plus: Vec<Series<S>> = g
            .iter()
            .zip(h)
            .map(|(a, b)| a.checked_add(&b.scale(&step)))
            .collect::<Result<_>>()?;
        let minus: Vec<Series<S>> = g
            .iter()
            .zip(h)
            .map(|(a, b)| a.checked_sub(&b.scale(&step)))
            .collect::<Result<_>>()?;
        let term = op.apply(&plus)?.checked_sub(&op.apply(&minus)?)?.scale(w);
        acc = Some(match acc {
            None => term,
            Some(a) => a.checked_add(&term)?,
        });
    }
    Ok(acc.expect("nonempty stencil").scale(&e_inv))
}

/// `[f,g] = f^{∘−1}∘g^{∘−1}∘f∘g`.
pub fn commutator<S: Scalar>(f: &DiffeoGerm<S>, g: &DiffeoGerm<S>) -> Result<DiffeoGerm<S>> {
    let fg = f.compose(g)?;
    f.inverse()?.compose(&g.inverse()?.compose(&fg)?)
}

/// `[f,[f,g^{∘2}]]`.
pub fn loray_word<S: Scalar>(f: &DiffeoGerm<S>, g: &DiffeoGerm<S>) -> Result<DiffeoGerm<S>> {
    commutator(f, &commutator(f, &g.iterate(2)?)?)
}

#[derive(Clone, Debug)]
pub struct Solvable2Report<S: Scalar> {
    pub order: u32,
    /// First degree at which `[f,[f,g^{∘2}]] − Id` has a nonzero coefficient.
    pub first_failure: Option<u32>,
    pub defect: Series<S>,
}

impl<S: Scalar> Solvable2Report<S> {
    /// Passing only says the relation holds up to `order`; it never
    /// certifies solvability of the group.
    pub fn passes(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks the relation `[f,[f,g^{∘2}]] = Id` up to `order`.
pub fn solvable2_test<S: Scalar>(
    f: &DiffeoGerm<S>,
    g: &DiffeoGerm<S>,
    order: u32,
) -> Result<Solvable2Report<S>> {
    let available = f.trunc().min(g.trunc());
    if order > available {
        return Err(GermError::InsufficientTruncation {
            needed: order,
            available,
        });
    }
    let w = loray_word(&f.jet(order), &g.jet(order))?;
    let defect = w.series().checked_sub(&Series::var(1, order, 0))?;
    Ok(Solvable2Report {
        order,
        first_failure: defect.valuation().finite(),
        defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, GaussianRational};
    use num_complex::Complex64;

    type S = Series<GaussianRational>;

    fn uni(trunc: u32, c: &[(i64, i64)]) -> S {
        S::univariate(trunc, c.iter().map(|&(n, d)| q(n, d)))
    }

    fn geometric(trunc: u32, start: usize) -> S {
        S::univariate(
            trunc,
            (0..=trunc as usize).map(|k| if k >= start { q(1, 1) } else { q(0, 1) }),
        )
    }

    fn exp_coeffs(trunc: u32, scale: i64) -> S {
        let mut c = vec![q(1, 1)];
        for n in 1..=trunc as i64 {
            let prev = c.last().unwrap().clone();
            c.push(prev * q(scale, n));
        }
        S::univariate(trunc, c)
    }

    #[test]
    fn compose_with_identity() {
        let f = uni(6, &[(1, 1), (2, 1), (0, 1), (-5, 3)]);
        assert_eq!(compose(&f, &[S::var(1, 6, 0)]).unwrap(), f);
    }

    #[test]
    fn compose_rational_functions() {
        // 1/(1−z) ∘ z/(1−z) = (1−z)/(1−2z)
        let r = compose(&geometric(8, 0), &[geometric(8, 1)]).unwrap();
        let mut expected = vec![q(1, 1)];
        for n in 1..=8 {
            expected.push(q(1 << (n - 1), 1));
        }
        assert_eq!(r, S::univariate(8, expected));
    }

    #[test]
    fn compose_exp_with_scaling() {
        let r = compose(&exp_coeffs(9, 1), &[uni(9, &[(0, 1), (2, 1)])]).unwrap();
        assert_eq!(r, exp_coeffs(9, 2));
    }

    #[test]
    fn compose_rejects_constant_terms() {
        let f = exp_coeffs(4, 1);
        assert!(matches!(
            compose(&f, &[S::one(1, 4)]),
            Err(GermError::Domain(_))
        ));
    }

    #[test]
    fn diffeo_from_examples() {
        assert!(diffeo_from(&S::zero(1, 5)).unwrap().is_identity());
        let d = diffeo_from(&S::var(1, 5, 0)).unwrap();
        assert_eq!(
            d.series(),
            &exp_coeffs(5, 1).shift(&MultiIndex::new(vec![1]))
        );
        let c = Series::<Complex64>::constant(1, 4, Complex64::new(0.3, 0.1));
        let dc = diffeo_from(&c).unwrap();
        let e = Complex64::new(0.3, 0.1).exp();
        assert!((dc.multiplier() - e).norm() < 1e-15);
        assert_eq!(dc.series().num_terms(), 1);
    }

    #[test]
    fn inverse_of_mobius_and_linear() {
        // z/(1−z) ↦ z/(1+z)
        let d = DiffeoGerm::new(geometric(8, 1)).unwrap();
        let inv = comp_inverse(&d).unwrap();
        let expected = S::univariate(
            8,
            (0..=8).map(|k| {
                if k == 0 {
                    q(0, 1)
                } else {
                    q(if k % 2 == 1 { 1 } else { -1 }, 1)
                }
            }),
        );
        assert_eq!(inv.series(), &expected);
        let lin = DiffeoGerm::linear(q(3, 1), 4).unwrap();
        assert_eq!(lin.inverse().unwrap().multiplier(), q(1, 3));
        assert!(DiffeoGerm::new(uni(4, &[(0, 1), (0, 1), (1, 1)])).is_err());
    }

    #[test]
    fn log_of_exp_minus_one() {
        let e = exp_coeffs(8, 1).checked_sub(&S::one(1, 8)).unwrap();
        assert_eq!(log_map(&e).unwrap(), S::var(1, 8, 0));
        assert!(log_map(&S::zero(1, 5)).unwrap().is_zero());
        assert!(log_map(&S::one(1, 3)).is_err());
    }

    #[test]
    fn h_map_examples() {
        assert!(h_map(&S::zero(1, 6)).unwrap().is_zero());
        let g = uni(6, &[(0, 1), (1, 2), (-1, 3)]);
        let h = h_map(&g).unwrap();
        assert_eq!(diffeo_from(&h).unwrap(), iota(&g).unwrap());
        let c = Complex64::new(0.25, -0.5);
        let hc = h_map(&Series::<Complex64>::constant(1, 5, c)).unwrap();
        assert!(hc.max_abs_diff(&Series::constant(1, 5, -c)) < 1e-14);
    }

    #[test]
    fn frechet_examples() {
        // f = z², g = z, h = z: derivative 2z²
        let f = uni(5, &[(0, 1), (0, 1), (1, 1)]);
        let op = FrechetOp::RightCompose(f);
        let r = frechet_dir(&op, &[S::var(1, 5, 0)], &[S::var(1, 5, 0)], 1.0).unwrap();
        assert_eq!(r.analytic, uni(5, &[(0, 1), (0, 1), (2, 1)]));
        assert_eq!(r.agrees, Some(true));
        // ∂𝒟(0)(1) = z, analytic only over exact scalars
        let r = frechet_dir(&FrechetOp::Diffeo, &[S::zero(1, 4)], &[S::one(1, 4)], 1.0).unwrap();
        assert_eq!(r.analytic, S::var(1, 5, 0));
        assert!(r.finite_difference.is_none());
        let ra = frechet_dir(
            &FrechetOp::<Complex64>::Diffeo,
            &[Series::zero(1, 4)],
            &[Series::one(1, 4)],
            FD_STEP,
        )
        .unwrap();
        assert_eq!(ra.agrees, Some(true));
        // ∂ι(0)(h) = −z·h
        let h = uni(5, &[(0, 1), (2, 1), (-1, 1)]);
        let r = frechet_dir(
            &FrechetOp::Inverse,
            &[S::zero(1, 5)],
            std::slice::from_ref(&h),
            1.0,
        )
        .unwrap();
        assert_eq!(r.analytic, h.shift(&MultiIndex::new(vec![1])).neg());
        assert_eq!(r.agrees, Some(true));
    }

    #[test]
    fn stencil_weights_are_classical() {
        let w: Vec<GaussianRational> = (1..=2).map(|j| stencil_weight(2, j)).collect();
        assert_eq!(w, vec![q(2, 3), q(-1, 12)]);
    }

    #[test]
    fn commutators() {
        let f = DiffeoGerm::new(uni(7, &[(0, 1), (1, 1), (1, 1)])).unwrap();
        assert!(commutator(&f, &f).unwrap().is_identity());
        let a = DiffeoGerm::linear(q(2, 1), 6).unwrap();
        let b = DiffeoGerm::linear(q(-1, 3), 6).unwrap();
        assert!(commutator(&a, &b).unwrap().is_identity());
        let g = DiffeoGerm::new(uni(7, &[(0, 1), (1, 1), (0, 1), (1, 1)])).unwrap();
        let c = commutator(&f, &g).unwrap();
        let direct = f
            .inverse()
            .unwrap()
            .compose(&g.inverse().unwrap())
            .unwrap()
            .compose(&f)
            .unwrap()
            .compose(&g)
            .unwrap();
        assert_eq!(c, direct);
        assert!(!c.is_identity());
    }

    #[test]
    fn solvability_relation() {
        let a = DiffeoGerm::linear(q(2, 1), 8).unwrap();
        let b = DiffeoGerm::linear(q(5, 7), 8).unwrap();
        assert!(solvable2_test(&a, &b, 8).unwrap().passes());
        let f = DiffeoGerm::new(uni(8, &[(0, 1), (1, 1), (1, 1)])).unwrap();
        assert!(solvable2_test(&f, &f, 8).unwrap().passes());
        let g = DiffeoGerm::new(uni(8, &[(0, 1), (1, 1), (0, 1), (1, 1)])).unwrap();
        let r = solvable2_test(&f, &g, 8).unwrap();
        assert!(!r.passes());
        assert!(solvable2_test(&f, &g, 9).is_err());
    }
}
