//! Sequential norms `‖f‖_a = Σ a_n |f_n|` on truncated series.
//!
//! The weights must satisfy `a_n^{1/n} → 0`; the factorial family
//! `a(α)_n = (n!)^{−α}` is the workhorse. Norms of truncated series are
//! partial sums over the stored support and therefore lower bounds of the
//! norm of any germ with that jet.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{GermError, Result};
use crate::mindex::{factorial, ln_factorial, MultiIndex};
use crate::scalar::{rational_to_f64, Scalar};
use crate::series::Series;

/// Ranks added on each side of the analytic argmax localisation.
pub const SEARCH_MARGIN: u32 = 8;

/// Relative slack used by floating inequality checks.
pub const FLOAT_SLACK: f64 = 1e-12;

/// Relative tolerance of the bisection for `r_{k,α,β}`.
pub const BISECTION_RTOL: f64 = 1e-9;

/// How an explicit weight table continues past its last entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Tail {
    /// `a_n = (n!)^{−α}` beyond the table.
    Factorial { alpha: f64 },
    /// Only the bound `a_{n+1} ≤ ratio·a_n` is known beyond the table.
    RatioBound { ratio: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum WeightSequence {
    /// `a_n = (n!)^{−α}`; for several variables `a_n = (n_1!⋯n_m!)^{−α}`.
    Factorial { alpha: f64 },
    /// Weights indexed by total degree `|n|`.
    Explicit { table: Vec<f64>, tail: Tail },
}

impl WeightSequence {
    pub fn factorial(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(GermError::InvalidParameters(format!(
                "factorial weight exponent {alpha} must be positive"
            )));
        }
        Ok(WeightSequence::Factorial { alpha })
    }

    pub fn explicit(table: Vec<f64>, tail: Tail) -> Result<Self> {
        if let Some(w) = table.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(GermError::InvalidParameters(format!(
                "nonpositive weight {w}"
            )));
        }
        match tail {
            Tail::Factorial { alpha } if !(alpha > 0.0) => {
                return Err(GermError::InvalidParameters(format!(
                    "tail exponent {alpha} must be positive"
                )));
            }
            Tail::RatioBound { ratio } if !(ratio > 0.0) => {
                return Err(GermError::InvalidParameters(format!(
                    "tail ratio {ratio} must be positive"
                )));
            }
            _ => {}
        }
        Ok(WeightSequence::Explicit { table, tail })
    }

    /// `ln a_n` for a univariate rank `n`.
    pub fn ln_weight(&self, n: u32) -> Result<f64> {
        match self {
            WeightSequence::Factorial { alpha } => Ok(-alpha * ln_factorial(n)),
            WeightSequence::Explicit { table, tail } => match table.get(n as usize) {
                Some(w) => Ok(w.ln()),
                None => match tail {
                    Tail::Factorial { alpha } => Ok(-alpha * ln_factorial(n)),
                    Tail::RatioBound { .. } => Err(GermError::InvalidParameters(format!(
                        "weight a_{n} is not determined by a table of length {}",
                        table.len()
                    ))),
                },
            },
        }
    }

    pub fn weight(&self, n: u32) -> Result<f64> {
        self.ln_weight(n).map(f64::exp)
    }

    /// Weight attached to a multi-index.
    pub fn weight_of(&self, n: &MultiIndex) -> Result<f64> {
        match self {
            WeightSequence::Factorial { alpha } => Ok((-alpha * n.ln_factorial()).exp()),
            WeightSequence::Explicit { .. } => self.weight(n.degree()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub value: f64,
    pub truncation_order: u32,
    /// Whether the unstored tail is known to contribute nothing. Always
    /// false for truncated inputs: `value` is then a lower bound.
    pub tail_bounded: bool,
}

pub fn a_norm<S: Scalar>(f: &Series<S>, a: &WeightSequence) -> Result<NormReport> {
    let mut value = 0.0;
    for (n, c) in f.terms() {
        value += a.weight_of(n)? * c.modulus();
    }
    Ok(NormReport {
        value,
        truncation_order: f.trunc(),
        tail_bounded: false,
    })
}

/// `|c|` as a rational, when `c` is real or purely imaginary.
pub fn exact_modulus<S: Scalar>(c: &S) -> Option<BigRational> {
    let (re, im) = c.rational_parts()?;
    if im.is_zero() {
        Some(re.abs())
    } else if re.is_zero() {
        Some(im.abs())
    } else {
        None
    }
}

/// Exact `‖f‖_{a(α)}` for a positive integer `α`, when every coefficient has
/// a rational modulus.
pub fn a_norm_exact<S: Scalar>(f: &Series<S>, alpha: u32) -> Option<BigRational> {
    if alpha == 0 {
        return None;
    }
    let mut acc = BigRational::zero();
    for (n, c) in f.terms() {
        let m = exact_modulus(c)?;
        let w = n
            .exps()
            .iter()
            .fold(num_bigint::BigUint::from(1u32), |acc, &e| {
                acc * factorial(e).pow(alpha)
            });
        acc += m / BigRational::from_integer(w.into());
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Amplitude {
    pub value: f64,
    pub ln_value: f64,
    pub argmax: u32,
}

/// `max_n a_n rⁿ` together with the rank achieving it.
pub fn amplitude(a: &WeightSequence, r: f64) -> Result<Amplitude> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(GermError::InvalidParameters(format!(
            "amplitude radius {r} must be positive"
        )));
    }
    let term = |n: u32| -> Result<f64> { Ok(a.ln_weight(n)? + n as f64 * r.ln()) };
    let (lo, hi) = match a {
        WeightSequence::Factorial { alpha } => factorial_window(r.powf(1.0 / alpha)),
        WeightSequence::Explicit { table, tail } => {
            let last = table.len().saturating_sub(1) as u32;
            match tail {
                Tail::Factorial { alpha } => {
                    let (_, hi) = factorial_window(r.powf(1.0 / alpha));
                    (0, hi.max(last))
                }
                Tail::RatioBound { ratio } => {
                    if table.is_empty() || ratio * r > 1.0 {
                        return Err(GermError::Inconclusive(format!(
                            "weight table of length {} with tail ratio {ratio} cannot certify the maximum at r = {r}",
                            table.len()
                        )));
                    }
                    (0, last)
                }
            }
        }
    };
    let mut best = (f64::NEG_INFINITY, 0);
    for n in lo..=hi {
        let t = term(n)?;
        if t > best.0 {
            best = (t, n);
        }
    }
    Ok(Amplitude {
        value: best.0.exp(),
        ln_value: best.0,
        argmax: best.1,
    })
}

fn factorial_window(center: f64) -> (u32, u32) {
    let c = center.ceil().max(0.0).min(u32::MAX as f64 / 2.0) as u32;
    (c.saturating_sub(1 + SEARCH_MARGIN), c + 1 + SEARCH_MARGIN)
}

/// Partial sum `Σ_{n≤N} a_n xⁿ` of the comparison function of `a`.
pub fn comparison(a: &WeightSequence, x: Complex64, n_max: u32) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    let mut pow = Complex64::new(1.0, 0.0);
    for n in 0..=n_max {
        acc += pow * a.weight(n)?;
        pow *= x;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusEstimate {
    /// Smallest `M_d^{−1/d}` over the window (`M_d` = largest modulus in degree `d`).
    pub lower: f64,
    /// Largest `M_d^{−1/d}`; infinite as soon as one degree of the window vanishes.
    pub upper: f64,
    pub window: (u32, u32),
    /// Every coefficient in the window vanished.
    pub unbounded: bool,
}

/// Hadamard-style radius estimates from the upper half of the stored degrees.
///
/// A finite truncation never certifies `liminf |f_n|^{−1/n}`; both numbers
/// are estimates over the window.
pub fn radius_bounds<S: Scalar>(f: &Series<S>) -> Result<RadiusEstimate> {
    let trunc = f.trunc();
    if trunc < 2 {
        return Err(GermError::InsufficientTruncation {
            needed: 2,
            available: trunc,
        });
    }
    let lo = trunc.div_ceil(2).max(1);
    let mut maxima = vec![0.0f64; (trunc - lo + 1) as usize];
    for (n, c) in f.terms() {
        let d = n.degree();
        if d >= lo {
            let slot = &mut maxima[(d - lo) as usize];
            *slot = slot.max(c.modulus());
        }
    }
    let rhos: Vec<f64> = maxima
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let d = (lo + i as u32) as f64;
            if m == 0.0 {
                f64::INFINITY
            } else {
                (-m.ln() / d).exp()
            }
        })
        .collect();
    let lower = rhos.iter().cloned().fold(f64::INFINITY, f64::min);
    let upper = rhos.iter().cloned().fold(0.0, f64::max);
    Ok(RadiusEstimate {
        lower,
        upper,
        window: (lo, trunc),
        unbounded: lower.is_infinite(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivConstant {
    pub value: f64,
    pub ln_value: f64,
    pub argmax: u32,
    /// Positive root of `(x+k)^{β+1} = x^{α+1}`.
    pub r: f64,
}

/// Optimal `D_{k,α,β} = sup_n (n+k)!^{β+1} / n!^{α+1}` bounding
/// `‖∂^k f‖_{a(α)} ≤ D·‖f − J_k f‖_{a(β)}`.
pub fn deriv_constant(k: u32, alpha: f64, beta: f64) -> Result<DerivConstant> {
    if !(alpha > beta && beta > 0.0 && alpha.is_finite()) {
        return Err(GermError::InvalidParameters(format!(
            "need alpha > beta > 0, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let r = deriv_root(k, alpha, beta);
    let (lo, hi) = factorial_window(r);
    let ln_term = |n: u32| (beta + 1.0) * ln_factorial(n + k) - (alpha + 1.0) * ln_factorial(n);
    let (ln_value, argmax) =
        (lo..=hi)
            .map(|n| (ln_term(n), n))
            .fold((f64::NEG_INFINITY, 0), |best, cur| {
                if cur.0 > best.0 {
                    cur
                } else {
                    best
                }
            });
    Ok(DerivConstant {
        value: ln_value.exp(),
        ln_value,
        argmax,
        r,
    })
}

/// Root of `(α+1)·ln x = (β+1)·ln(x+k)` by bisection.
pub fn deriv_root(k: u32, alpha: f64, beta: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let k = k as f64;
    let g = |x: f64| (alpha + 1.0) * x.ln() - (beta + 1.0) * (x + k).ln();
    let mut lo = k.powf((beta + 1.0) / (alpha + 1.0));
    let mut hi = 2.0 * lo.max(1.0);
    while g(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > BISECTION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundWitness {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// The comparison was carried out in exact rational arithmetic.
    pub exact: bool,
}

/// Evaluates both sides of `‖f·g‖_{a(α)} ≤ ‖f‖_{a(α)}·‖g‖_{a(α)}`.
pub fn check_product_bound<S: Scalar>(
    f: &Series<S>,
    g: &Series<S>,
    alpha: f64,
) -> Result<BoundWitness> {
    let a = WeightSequence::factorial(alpha)?;
    let prod = f.checked_mul(g)?;
    if alpha.fract() == 0.0 && alpha <= u32::MAX as f64 {
        let al = alpha as u32;
        if let (Some(l), Some(nf), Some(ng)) = (
            a_norm_exact(&prod, al),
            a_norm_exact(f, al),
            a_norm_exact(g, al),
        ) {
            let r = nf * ng;
            return Ok(BoundWitness {
                lhs: rational_to_f64(&l),
                rhs: rational_to_f64(&r),
                holds: l <= r,
                exact: true,
            });
        }
    }
    let lhs = a_norm(&prod, &a)?.value;
    let rhs = a_norm(f, &a)?.value * a_norm(g, &a)?.value;
    Ok(BoundWitness {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + FLOAT_SLACK),
        exact: false,
    })
}

/// Liminf estimate of `a_n r_n` over the last `window` ranks of `r`.
///
/// This is the largest radius of an `a`-ball fitting inside the naive
/// polydisc `{f : |f_n| < r_n}`.
pub fn naive_polydisc_radius(a: &WeightSequence, r: &[f64], window: usize) -> Result<f64> {
    if let Some(bad) = r.iter().find(|x| !(**x > 0.0)) {
        return Err(GermError::InvalidParameters(format!(
            "polydisc radius {bad} must be positive"
        )));
    }
    if window == 0 || window > r.len() {
        return Err(GermError::InvalidParameters(format!(
            "window {window} must lie in 1..={}",
            r.len()
        )));
    }
    let start = r.len() - window;
    let mut best = f64::INFINITY;
    for (n, rn) in r.iter().enumerate().skip(start) {
        best = best.min((a.ln_weight(n as u32)? + rn.ln()).exp());
    }
    Ok(best)
}
