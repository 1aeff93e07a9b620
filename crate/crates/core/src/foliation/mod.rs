//! Planar foliations with zero linear part.
//!
//! A pair `(P, Q)` of germs vanishing to order two defines the field
//! `Q∂x + P∂y`. One blow-up in the chart `(x, u) ↦ (x, xu)` followed by
//! division by `x²` gives a field whose restriction to the exceptional line
//! `{x = 0}` is `φ(u)∂u`. The roots of the tangent cubic `φ` are the singular
//! points on that line, and [`holonomy`] transports points of a transversal
//! around them.

mod holonomy;

use nalgebra::Matrix3;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::coprimality::{decide_coprime, default_d_max, CoprimalityVerdict};
use crate::error::{GermError, Result};
use crate::flows::VectorField;
use crate::mindex::MultiIndex;
use crate::scalar::{GaussianRational, Scalar};
use crate::series::Series;

pub use holonomy::{
    fit_germ, generator_loops, holonomy, solvability_report, transport, BlownField, FitReport,
    GeneratorLayout, HolonomyConfig, HolonomyGerm, LinearModel, LoopSpec, SolvabilityReport,
    SolvabilityStatus, TransverseField,
};

type G = GaussianRational;

/// Truncation order required of `P` and `Q`.
pub const MIN_TRUNC: u32 = 6;

/// A proper representative `(P, Q)` in the variables `(x, y)`.
#[derive(Clone, Debug)]
pub struct FoliationPair {
    p: Series<G>,
    q: Series<G>,
    coprimality: Option<CoprimalityVerdict>,
}

fn check_zlp(name: &str, s: &Series<G>) -> Result<()> {
    if s.nvars() != 2 {
        return Err(GermError::DimensionMismatch {
            expected: 2,
            found: s.nvars(),
        });
    }
    if s.trunc() < MIN_TRUNC {
        return Err(GermError::InsufficientTruncation {
            needed: MIN_TRUNC,
            available: s.trunc(),
        });
    }
    if s.terms().any(|(n, _)| n.degree() < 2) {
        return Err(GermError::Domain(format!("{name} has a nonzero 1-jet")));
    }
    Ok(())
}

impl FoliationPair {
    /// Checks the zero linear part and certifies `gcd(P, Q) = 1`.
    pub fn new(p: Series<G>, q: Series<G>) -> Result<Self> {
        let f = FoliationPair::assess(p, q)?;
        if !f
            .coprimality
            .as_ref()
            .is_some_and(CoprimalityVerdict::is_coprime)
        {
            return Err(GermError::Domain(
                "P and Q are not certified coprime".into(),
            ));
        }
        Ok(f)
    }

    /// Like [`FoliationPair::new`], but keeps a pair whose coprimality scan
    /// fails so that [`rnd_star_test`] can report it.
    pub fn assess(p: Series<G>, q: Series<G>) -> Result<Self> {
        let mut f = FoliationPair::zlp(p, q)?;
        let family = [f.p.clone(), f.q.clone()];
        f.coprimality = Some(decide_coprime(&family, default_d_max(&family))?);
        Ok(f)
    }

    /// Checks the zero linear part only.
    pub fn zlp(p: Series<G>, q: Series<G>) -> Result<Self> {
        check_zlp("P", &p)?;
        check_zlp("Q", &q)?;
        Ok(FoliationPair {
            p,
            q,
            coprimality: None,
        })
    }

    pub fn p(&self) -> &Series<G> {
        &self.p
    }

    pub fn q(&self) -> &Series<G> {
        &self.q
    }

    /// `None` when built with [`FoliationPair::zlp`].
    pub fn coprimality(&self) -> Option<&CoprimalityVerdict> {
        self.coprimality.as_ref()
    }

    fn jet2(&self) -> Jet2 {
        let c = |s: &Series<G>, i, j| {
            s.get(&MultiIndex::new(vec![i, j]))
                .cloned()
                .unwrap_or_else(G::zero)
        };
        Jet2 {
            p20: c(&self.p, 2, 0),
            p11: c(&self.p, 1, 1),
            p02: c(&self.p, 0, 2),
            q20: c(&self.q, 2, 0),
            q11: c(&self.q, 1, 1),
            q02: c(&self.q, 0, 2),
        }
    }

    /// The blown-up field `π*X/x²` in the chart `(x, u)`.
    pub fn blown_field(&self) -> Result<VectorField<G>> {
        blowup_chart_x(&self.p, &self.q)
    }
}

struct Jet2 {
    p20: G,
    p11: G,
    p02: G,
    q20: G,
    q11: G,
    q02: G,
}

/// `(Q(x,xu)/x, (P(x,xu) − uQ(x,xu))/x²)` for series in `(x, y)`.
///
/// The result has truncation order `min(trunc) − 2`; every coefficient up to
/// that order is determined by the inputs.
pub fn blowup_chart_x<S: Scalar>(p: &Series<S>, q: &Series<S>) -> Result<VectorField<S>> {
    for s in [p, q] {
        if s.nvars() != 2 {
            return Err(GermError::DimensionMismatch {
                expected: 2,
                found: s.nvars(),
            });
        }
        if s.terms().any(|(n, _)| n.degree() < 2) {
            return Err(GermError::Domain(
                "numerator is not divisible by x²: input has a nonzero 1-jet".into(),
            ));
        }
    }
    let t = p.trunc().min(q.trunc());
    if t < 2 {
        return Err(GermError::InsufficientTruncation {
            needed: 2,
            available: t,
        });
    }
    let out = t - 2;
    let keep =
        |terms: Vec<(MultiIndex, S)>| terms.into_iter().filter(move |(n, _)| n.degree() <= out);
    let ij = |n: &MultiIndex| (n.exps()[0], n.exps()[1]);
    let a: Vec<_> = q
        .terms()
        .map(|(n, c)| {
            let (i, j) = ij(n);
            (MultiIndex::new(vec![i + j - 1, j]), c.clone())
        })
        .collect();
    let mut b: Vec<_> = p
        .terms()
        .map(|(n, c)| {
            let (i, j) = ij(n);
            (MultiIndex::new(vec![i + j - 2, j]), c.clone())
        })
        .collect();
    b.extend(q.terms().map(|(n, c)| {
        let (i, j) = ij(n);
        (MultiIndex::new(vec![i + j - 2, j + 1]), -c.clone())
    }));
    VectorField::new(vec![
        Series::from_terms(2, out, keep(a))?,
        Series::from_terms(2, out, keep(b))?,
    ])
}

/// Coefficients `[φ₃, φ₂, φ₁, φ₀]` of
/// `φ(u) = −Q₀₂u³ + (P₀₂ − Q₁₁)u² + (P₁₁ − Q₂₀)u + P₂₀`.
pub fn tangent_cubic(f: &FoliationPair) -> [G; 4] {
    let j = f.jet2();
    [
        -j.q02.clone(),
        j.p02.clone() - j.q11.clone(),
        j.p11.clone() - j.q20.clone(),
        j.p20,
    ]
}

/// Discriminant of the tangent cubic, written in the second jets of `P, Q`.
///
/// With `B = Q₁₁ − P₀₂`, `C = Q₂₀ − P₁₁` and `d = P₂₀` it reads
/// `Q₀₂(−4C³ − 18BCd − 27Q₀₂d²) + B²(C² + 4Bd)`.
pub fn discriminant(f: &FoliationPair) -> G {
    let j = f.jet2();
    let b = j.q11 - j.p02;
    let c = j.q20 - j.p11;
    let d = j.p20;
    let n = |k: i64| G::from_i64(k);
    let c2 = c.clone() * c.clone();
    let first = n(-4) * c2.clone() * c.clone()
        - n(18) * b.clone() * c.clone() * d.clone()
        - n(27) * j.q02.clone() * d.clone() * d.clone();
    j.q02 * first + b.clone() * b.clone() * (c2 + n(4) * b * d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RndViolation {
    /// `P` and `Q` are not certified coprime.
    NotCoprime,
    /// `Q₀₂ = 0`: the exceptional line may be dicritic and `u = ∞` singular.
    DicriticRisk,
    /// `P₂₀ = 0`: the chart origin is singular.
    SingularAtOrigin,
    /// The tangent cubic has a repeated root.
    RepeatedRoot,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RndStarReport {
    pub member: bool,
    pub violations: Vec<RndViolation>,
}

/// Evaluates the membership conditions exactly.
pub fn rnd_star_test(f: &FoliationPair) -> RndStarReport {
    let j = f.jet2();
    let mut violations = Vec::new();
    if !f
        .coprimality
        .as_ref()
        .is_some_and(CoprimalityVerdict::is_coprime)
    {
        violations.push(RndViolation::NotCoprime);
    }
    if j.q02.is_zero() {
        violations.push(RndViolation::DicriticRisk);
    }
    if j.p20.is_zero() {
        violations.push(RndViolation::SingularAtOrigin);
    }
    if discriminant(f).is_zero() {
        violations.push(RndViolation::RepeatedRoot);
    }
    RndStarReport {
        member: violations.is_empty(),
        violations,
    }
}

/// A root `u` of the tangent cubic with the eigenvalues of the blown-up
/// field there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularPoint {
    pub u: Complex64,
    /// `Q₀₂u² + Q₁₁u + Q₂₀`, transverse to the exceptional line.
    pub lambda_x: Complex64,
    /// `φ′(u)`, along the exceptional line.
    pub lambda_u: Complex64,
    /// `λ_x/λ_u`.
    pub ratio: Complex64,
    /// `|φ(u)|` after polishing.
    pub residual: f64,
}

fn horner(coeffs: &[Complex64], u: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::zero(), |acc, &c| acc * u + c)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (n - k) as f64)
        .collect()
}

const NEWTON_STEPS: usize = 8;
const ROOT_RTOL: f64 = 1e-10;

/// Roots of a cubic with leading coefficient first, from the eigenvalues of
/// its companion matrix and a few Newton steps.
fn cubic_roots(phi: &[Complex64; 4]) -> Result<Vec<(Complex64, f64)>> {
    if phi[0] == Complex64::zero() {
        return Err(GermError::Domain("tangent cubic has degree below 3".into()));
    }
    let m = [phi[1] / phi[0], phi[2] / phi[0], phi[3] / phi[0]];
    let z = Complex64::zero();
    let one = Complex64::new(1.0, 0.0);
    let companion = Matrix3::new(z, z, -m[2], one, z, -m[1], z, one, -m[0]);
    let eig = companion
        .schur()
        .eigenvalues()
        .ok_or_else(|| GermError::Numeric("companion eigenvalues did not converge".into()))?;
    let dphi = derivative(phi);
    let scale = phi.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(3);
    for mut u in eig.iter().copied() {
        for _ in 0..NEWTON_STEPS {
            let d = horner(&dphi, u);
            if d == z {
                break;
            }
            u -= horner(phi, u) / d;
        }
        let r = horner(phi, u).norm();
        let size = scale * (1.0 + u.norm()).powi(3);
        if !(r <= ROOT_RTOL * size) {
            return Err(GermError::Numeric(format!(
                "root {u} of the tangent cubic has residual {r:e}"
            )));
        }
        out.push((u, r));
    }
    Ok(out)
}

fn c64s(g: &[G]) -> Vec<Complex64> {
    g.iter().map(Scalar::to_c64).collect()
}

/// Orders by real part, then imaginary part, treating nearly equal real
/// parts as ties.
fn root_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    let tol = 1e-9 * (1.0 + a.norm().max(b.norm()));
    if (a.re - b.re).abs() <= tol {
        a.im.total_cmp(&b.im)
    } else {
        a.re.total_cmp(&b.re)
    }
}

/// The three singular points on the exceptional line, sorted by real part
/// then imaginary part.
pub fn singular_data(f: &FoliationPair) -> Result<Vec<SingularPoint>> {
    let rnd = rnd_star_test(f);
    if !rnd.member {
        return Err(GermError::Domain(format!(
            "not a member of RND*: {:?}",
            rnd.violations
        )));
    }
    let phi: [Complex64; 4] = c64s(&tangent_cubic(f))
        .try_into()
        .expect("four coefficients");
    let j = f.jet2();
    let lx = c64s(&[j.q02, j.q11, j.q20]);
    let dphi = derivative(&phi);
    let mut points: Vec<SingularPoint> = cubic_roots(&phi)?
        .into_iter()
        .map(|(u, residual)| {
            let lambda_x = horner(&lx, u);
            let lambda_u = horner(&dphi, u);
            SingularPoint {
                u,
                lambda_x,
                lambda_u,
                ratio: lambda_x / lambda_u,
                residual,
            }
        })
        .collect();
    points.sort_by(|a, b| root_order(&a.u, &b.u));
    if let Some(p) = points
        .iter()
        .find(|p| p.lambda_x.norm() == 0.0 || p.lambda_u.norm() == 0.0)
    {
        return Err(GermError::Numeric(format!(
            "vanishing eigenvalue at u = {}",
            p.u
        )));
    }
    Ok(points)
}

/// The blown-up field, its tangent cubic and the membership verdict, with
/// singular points when the verdict allows them.
#[derive(Clone, Debug)]
pub struct BlowupData {
    pub field: VectorField<G>,
    pub phi: [G; 4],
    pub discriminant: G,
    pub rnd_star: RndStarReport,
    pub singular_points: Option<Vec<SingularPoint>>,
}

pub fn blowup_data(f: &FoliationPair) -> Result<BlowupData> {
    let rnd_star = rnd_star_test(f);
    let singular_points = if rnd_star.member {
        Some(singular_data(f)?)
    } else {
        None
    };
    Ok(BlowupData {
        field: f.blown_field()?,
        phi: tangent_cubic(f),
        discriminant: discriminant(f),
        rnd_star,
        singular_points,
    })
}
