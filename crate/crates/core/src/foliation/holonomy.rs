//! Numerical holonomy on a transversal `{u = u₀}` of the exceptional line.
//!
//! Away from the singular points the blown-up field `a∂x + b∂u` is
//! transverse to the vertical lines, so leaves are graphs over the `u`-plane
//! and solve `dx/du = a/b`. Transporting a point `x` of the transversal along
//! a closed polygon in the `u`-plane gives the holonomy germ of that loop.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use super::{rnd_star_test, singular_data, FoliationPair};
use crate::calculus::{solvable2_test, DiffeoGerm};
use crate::error::{GermError, Result};
use crate::scalar::Scalar;
use crate::series::Series;

type C = Complex64;

/// A non-autonomous scalar equation `dx/du = slope(x, u)`.
pub trait TransverseField: Sync {
    /// `None` where the field is tangent to the transversals or not finite.
    fn slope(&self, x: C, u: C) -> Option<C>;

    /// Points of the `u`-plane that loops must avoid.
    fn singular_points(&self) -> Vec<C>;
}

/// `dx/du = a/b` for the blown-up field of a pair in RND*.
///
/// `P` and `Q` enter as the polynomials given by their stored terms.
#[derive(Clone, Debug)]
pub struct BlownField {
    a: Vec<(i32, i32, C)>,
    b: Vec<(i32, i32, C)>,
    roots: Vec<C>,
}

impl BlownField {
    pub fn new(f: &FoliationPair) -> Result<Self> {
        let roots = singular_data(f)?.into_iter().map(|p| p.u).collect();
        let ij = |n: &crate::mindex::MultiIndex| (n.exps()[0] as i32, n.exps()[1] as i32);
        let a = f
            .q()
            .terms()
            .map(|(n, c)| {
                let (i, j) = ij(n);
                (i + j - 1, j, c.to_c64())
            })
            .collect();
        let mut b: Vec<_> = f
            .p()
            .terms()
            .map(|(n, c)| {
                let (i, j) = ij(n);
                (i + j - 2, j, c.to_c64())
            })
            .collect();
        b.extend(f.q().terms().map(|(n, c)| {
            let (i, j) = ij(n);
            (i + j - 2, j + 1, -c.to_c64())
        }));
        Ok(BlownField { a, b, roots })
    }
}

fn eval_terms(terms: &[(i32, i32, C)], x: C, u: C) -> C {
    terms
        .iter()
        .map(|&(i, j, c)| c * x.powi(i) * u.powi(j))
        .sum()
}

impl TransverseField for BlownField {
    fn slope(&self, x: C, u: C) -> Option<C> {
        let b = eval_terms(&self.b, x, u);
        let s = eval_terms(&self.a, x, u) / b;
        (b != C::zero() && s.is_finite()).then_some(s)
    }

    fn singular_points(&self) -> Vec<C> {
        self.roots.clone()
    }
}

/// `λ_x x∂x + λ_u(u − c)∂u`, whose holonomy around `c` is multiplication by
/// `exp(2πi λ_x/λ_u)`.
#[derive(Clone, Copy, Debug)]
pub struct LinearModel {
    pub lambda_x: C,
    pub lambda_u: C,
    pub center: C,
}

impl LinearModel {
    pub fn multiplier(&self) -> C {
        (C::new(0.0, TAU) * self.lambda_x / self.lambda_u).exp()
    }
}

impl TransverseField for LinearModel {
    fn slope(&self, x: C, u: C) -> Option<C> {
        let s = self.lambda_x * x / (self.lambda_u * (u - self.center));
        s.is_finite().then_some(s)
    }

    fn singular_points(&self) -> Vec<C> {
        vec![self.center]
    }
}

/// A closed polygon in the `u`-plane; the first vertex is the base point and
/// the last vertex joins back to it.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopSpec {
    vertices: Vec<C>,
}

impl LoopSpec {
    pub fn polygon(vertices: Vec<C>) -> Result<Self> {
        if vertices.len() < 2 || vertices.iter().any(|v| !v.is_finite()) {
            return Err(GermError::InvalidParameters(
                "a loop needs at least two finite vertices".into(),
            ));
        }
        Ok(LoopSpec { vertices })
    }

    /// `n` vertices on a circle, counterclockwise from `center + radius·e^{iθ₀}`.
    pub fn circle(center: C, radius: f64, n: usize, start_angle: f64) -> Result<Self> {
        if n < 3 || !(radius > 0.0) {
            return Err(GermError::InvalidParameters(
                "a circle needs a positive radius and three vertices".into(),
            ));
        }
        LoopSpec::polygon(
            (0..n)
                .map(|k| center + C::from_polar(radius, start_angle + TAU * k as f64 / n as f64))
                .collect(),
        )
    }

    pub fn base(&self) -> C {
        self.vertices[0]
    }

    pub fn vertices(&self) -> &[C] {
        &self.vertices
    }

    /// Traverses `self`, then `other`; both must share the base point.
    pub fn then(&self, other: &LoopSpec) -> Result<LoopSpec> {
        if self.base() != other.base() {
            return Err(GermError::InvalidParameters(
                "loops with different base points".into(),
            ));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        Ok(LoopSpec { vertices })
    }

    /// Each vertex inserted `k − 1` extra times along its outgoing edge.
    pub fn subdivide(&self, k: usize) -> LoopSpec {
        let mut vertices = Vec::with_capacity(self.vertices.len() * k.max(1));
        for (a, b) in self.edges() {
            for s in 0..k.max(1) {
                vertices.push(a + (b - a) * (s as f64 / k.max(1) as f64));
            }
        }
        LoopSpec { vertices }
    }

    fn edges(&self) -> impl Iterator<Item = (C, C)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Smallest distance from the polygon to any of `points`.
    pub fn clearance(&self, points: &[C]) -> f64 {
        points
            .iter()
            .flat_map(|&p| self.edges().map(move |(a, b)| segment_distance(p, a, b)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|u|` over the vertices.
    pub fn extent(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn segment_distance(p: C, a: C, b: C) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Simple loops around each of a set of points, all based at one point.
#[derive(Clone, Debug)]
pub struct GeneratorLayout {
    pub base: C,
    pub centroid: C,
    /// Radius of the circle around each point.
    pub radius: f64,
    pub points: Vec<C>,
    pub vertices: usize,
}

const BASE_CANDIDATES: usize = 72;
const GENERATOR_RADIUS: f64 = 0.3;

/// Places the base point on a circle around the centroid, at the angle that
/// keeps the spokes to each point furthest from the other points.
pub fn generator_loops(points: &[C], vertices: usize) -> Result<GeneratorLayout> {
    if points.is_empty() || vertices < 3 {
        return Err(GermError::InvalidParameters(
            "generators need points and at least three vertices".into(),
        ));
    }
    let centroid = points.iter().sum::<C>() / points.len() as f64;
    let spread = points
        .iter()
        .map(|p| (p - centroid).norm())
        .fold(0.0, f64::max);
    let mut dmin = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for r in &points[i + 1..] {
            dmin = dmin.min((p - r).norm());
        }
    }
    if dmin == 0.0 {
        return Err(GermError::Domain("repeated singular point".into()));
    }
    let scale = if dmin.is_finite() { dmin } else { 1.0 };
    let radius = GENERATOR_RADIUS * scale;
    let ring = spread + 2.0 * scale;
    let mut layout = GeneratorLayout {
        base: centroid,
        centroid,
        radius,
        points: points.to_vec(),
        vertices,
    };
    let mut best = f64::NEG_INFINITY;
    for k in 0..BASE_CANDIDATES {
        let base = centroid + C::from_polar(ring, TAU * k as f64 / BASE_CANDIDATES as f64);
        let candidate = GeneratorLayout {
            base,
            ..layout.clone()
        };
        let mut clearance = f64::INFINITY;
        for j in 0..points.len() {
            let a = candidate.approach(j);
            for (l, r) in points.iter().enumerate() {
                if l != j {
                    clearance = clearance.min(segment_distance(*r, base, a));
                }
            }
        }
        if clearance > best {
            best = clearance;
            layout = candidate;
        }
    }
    Ok(layout)
}

impl GeneratorLayout {
    fn approach(&self, j: usize) -> C {
        let p = self.points[j];
        p + (self.base - p) / (self.base - p).norm() * self.radius
    }

    /// Base point to the circle around point `j`, once around it
    /// counterclockwise, and back.
    pub fn generator(&self, j: usize) -> LoopSpec {
        let p = self.points[j];
        let theta0 = (self.base - p).arg();
        let mut vertices = vec![self.base];
        vertices.extend((0..=self.vertices).map(|k| {
            p + C::from_polar(self.radius, theta0 + TAU * k as f64 / self.vertices as f64)
        }));
        LoopSpec { vertices }
    }

    /// Indices by increasing angle seen from the base point; traversing the
    /// generators in this order goes once around all the points.
    pub fn order(&self) -> Vec<usize> {
        let axis = self.centroid - self.base;
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&i, &j| {
            let a = ((self.points[i] - self.base) / axis).arg();
            let b = ((self.points[j] - self.base) / axis).arg();
            a.total_cmp(&b)
        });
        idx
    }

    /// The generators concatenated in [`GeneratorLayout::order`].
    pub fn composite(&self) -> LoopSpec {
        let mut vertices = Vec::new();
        for j in self.order() {
            vertices.extend(self.generator(j).vertices);
        }
        LoopSpec { vertices }
    }
}

#[derive(Clone, Debug)]
pub struct HolonomyConfig {
    /// Starting points on the transversal.
    pub samples: usize,
    pub fit_degree: u32,
    /// Relative tolerance of the integrator.
    pub rtol: f64,
    /// Least allowed distance from a loop to a singular point.
    pub margin: f64,
    /// Fits with residual above `fit_tol` times the largest sample are flagged.
    pub fit_tol: f64,
}

impl Default for HolonomyConfig {
    fn default() -> Self {
        HolonomyConfig {
            samples: 32,
            fit_degree: 6,
            rtol: 1e-10,
            margin: 1e-3,
            fit_tol: 1e-6,
        }
    }
}

impl HolonomyConfig {
    fn validate(&self) -> Result<()> {
        if self.samples < self.fit_degree as usize || self.fit_degree == 0 {
            return Err(GermError::InvalidParameters(
                "need a positive fit degree and at least that many samples".into(),
            ));
        }
        if !(self.rtol > 0.0 && self.margin > 0.0 && self.fit_tol > 0.0) {
            return Err(GermError::InvalidParameters(
                "tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

const RADII: usize = 8;
const START_RADIUS: f64 = 1e-2;
const PROBE_FRACTION: f64 = 1e-6;
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
const MAX_STEPS: usize = 200_000;
const MIN_STEP: f64 = 1e-13;

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const NODES: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn nearest(points: &[C], u: C) -> String {
    points
        .iter()
        .min_by(|a, b| (*a - u).norm().total_cmp(&(*b - u).norm()))
        .map_or_else(|| "none".to_string(), |p| format!("{p}"))
}

/// Transports `x0` along the edge `u0 → u1`, returning the end point and
/// the largest `|x|` met on the way.
fn transport_edge<F: TransverseField + ?Sized>(
    field: &F,
    x0: C,
    u0: C,
    u1: C,
    rtol: f64,
) -> Result<(C, f64)> {
    let du = u1 - u0;
    let rhs = |s: f64, x: C| field.slope(x, u0 + du * s).map(|v| v * du);
    let atol = rtol * 1e-6 * x0.norm();
    let (mut s, mut x, mut h) = (0.0f64, x0, 0.125f64);
    let mut peak = x0.norm();
    let fail = |s: f64, why: &str| {
        let u = u0 + du * s;
        GermError::Numeric(format!(
            "transport {why} at u = {u}; nearest singular point {}",
            nearest(&field.singular_points(), u)
        ))
    };
    for _ in 0..MAX_STEPS {
        if s >= 1.0 {
            return Ok((x, peak));
        }
        h = h.min(1.0 - s);
        let mut k = [C::zero(); 7];
        let mut ok = true;
        match rhs(s, x) {
            Some(v) => k[0] = v,
            None => return Err(fail(s, "hit a tangency")),
        }
        for i in 0..6 {
            let xi = x + (0..=i).map(|j| k[j] * A[i][j]).sum::<C>() * h;
            match rhs(s + NODES[i] * h, xi) {
                Some(v) => k[i + 1] = v,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let x5 = x + (0..6).map(|j| k[j] * A[5][j]).sum::<C>() * h;
            let x4 = x + (0..7).map(|j| k[j] * B4[j]).sum::<C>() * h;
            let err = (x5 - x4).norm() / (atol + rtol * x.norm().max(x5.norm()));
            if err.is_finite() && err <= 1.0 {
                s += h;
                x = x5;
                peak = peak.max(x.norm());
                h *= if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                continue;
            }
            h *= if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.2, 0.9)
            } else {
                0.25
            };
        } else {
            h *= 0.25;
        }
        if h < MIN_STEP {
            return Err(fail(s, "step size underflow"));
        }
    }
    Err(fail(s, "exceeded the step budget"))
}

/// Transports `x0` once around `lp`.
pub fn transport<F: TransverseField + ?Sized>(
    field: &F,
    x0: C,
    lp: &LoopSpec,
    rtol: f64,
) -> Result<C> {
    transport_with_peak(field, x0, lp, rtol).map(|(x, _)| x)
}

fn transport_with_peak<F: TransverseField + ?Sized>(
    field: &F,
    x0: C,
    lp: &LoopSpec,
    rtol: f64,
) -> Result<(C, f64)> {
    lp.edges().try_fold((x0, x0.norm()), |(x, peak), (a, b)| {
        transport_edge(field, x, a, b, rtol).map(|(y, p)| (y, peak.max(p)))
    })
}

/// Least-squares fit `x ↦ Σ_{d=1}^{D} c_d x^d` through sample pairs.
#[derive(Clone, Debug)]
pub struct FitReport {
    /// `c_1, …, c_D`.
    pub coefficients: Vec<C>,
    /// Largest sample deviation of the fit.
    pub residual: f64,
    /// Propagated uncertainty of each `c_d`.
    pub uncertainty: Vec<f64>,
    /// Scale of the sample inputs.
    pub r_max: f64,
}

impl FitReport {
    pub fn eval(&self, x: C) -> C {
        self.coefficients
            .iter()
            .rev()
            .fold(C::zero(), |acc, &c| (acc + c) * x)
    }

    /// Coefficients of `w ↦ Δ(rw)/r`, with their uncertainties.
    pub fn rescaled(&self, r: f64) -> (Vec<C>, Vec<f64>) {
        let s = |d: usize| r.powi(d as i32);
        let c = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(d, &c)| c * s(d))
            .collect();
        let u = self
            .uncertainty
            .iter()
            .enumerate()
            .map(|(d, &u)| u * s(d))
            .collect();
        (c, u)
    }

    pub fn germ(&self, trunc: u32) -> Result<DiffeoGerm<C>> {
        germ_from(&self.coefficients, trunc)
    }
}

fn germ_from(coeffs: &[C], trunc: u32) -> Result<DiffeoGerm<C>> {
    let dense = std::iter::once(C::zero()).chain(coeffs.iter().copied());
    DiffeoGerm::new(Series::univariate(trunc.max(1), dense))
}

/// Fits in the scaled variable `w = x/r_max`; `noise_floor` bounds the
/// error of each sample output.
pub fn fit_germ(
    samples: &[(C, C)],
    degree: u32,
    r_max: f64,
    noise_floor: f64,
) -> Result<FitReport> {
    let d = degree as usize;
    if samples.len() < d || d == 0 || !(r_max > 0.0) {
        return Err(GermError::InvalidParameters(
            "fit needs a positive degree, enough samples and a positive scale".into(),
        ));
    }
    let a = DMatrix::from_fn(samples.len(), d, |i, k| {
        (samples[i].0 / r_max).powu(k as u32 + 1)
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1 / r_max));
    let pinv = a
        .clone()
        .pseudo_inverse(1e-14)
        .map_err(|e| GermError::Numeric(format!("fit failed: {e}")))?;
    let e = &pinv * &b;
    let coefficients: Vec<C> = (0..d).map(|k| e[k] / r_max.powi(k as i32)).collect();
    let fit = FitReport {
        coefficients,
        residual: 0.0,
        uncertainty: vec![0.0; d],
        r_max,
    };
    let residual = samples
        .iter()
        .map(|&(x, y)| (fit.eval(x) - y).norm())
        .fold(0.0, f64::max);
    let noise = residual.max(noise_floor) / r_max;
    let uncertainty = (0..d)
        .map(|k| pinv.row(k).iter().map(|v| v.norm()).sum::<f64>() * noise / r_max.powi(k as i32))
        .collect();
    Ok(FitReport {
        residual,
        uncertainty,
        ..fit
    })
}

/// Sample pairs and the fitted germ of one loop.
#[derive(Clone, Debug)]
pub struct HolonomyGerm {
    pub samples: Vec<(C, C)>,
    pub fit: FitReport,
    pub germ: DiffeoGerm<C>,
    /// Residual above `fit_tol` times the largest sample.
    pub low_confidence: bool,
}

impl HolonomyGerm {
    pub fn multiplier(&self) -> C {
        self.germ.multiplier()
    }

    /// Largest `|x_out − x_in|` over the samples.
    pub fn max_displacement(&self) -> f64 {
        self.samples
            .iter()
            .map(|&(x, y)| (y - x).norm())
            .fold(0.0, f64::max)
    }
}

/// Starting points on 8 radii spread over one decade below `r_max`, at
/// golden-angle increments.
///
/// `r_max` is `10⁻²/max(1, extent)` divided by the growth of `|x|` along the
/// loop, measured on a nearly linear probe, so transported points stay in a
/// disc of that size.
fn starting_points<F: TransverseField + ?Sized>(
    field: &F,
    count: usize,
    lp: &LoopSpec,
    rtol: f64,
) -> Result<(Vec<C>, f64)> {
    let cap = START_RADIUS / lp.extent().max(1.0);
    let probe = C::new(cap * PROBE_FRACTION, 0.0);
    let (_, peak) = transport_with_peak(field, probe, lp, rtol)?;
    let r_max = cap / (peak / probe.norm()).max(1.0);
    let pts = (0..count)
        .map(|k| {
            let r = r_max * 10f64.powf(-((k % RADII) as f64) / (RADII - 1) as f64);
            C::from_polar(r, GOLDEN_ANGLE * k as f64)
        })
        .collect();
    Ok((pts, r_max))
}

/// Holonomy of `lp` acting on the transversal through its base point.
pub fn holonomy<F: TransverseField + ?Sized>(
    field: &F,
    lp: &LoopSpec,
    cfg: &HolonomyConfig,
) -> Result<HolonomyGerm> {
    cfg.validate()?;
    let clearance = lp.clearance(&field.singular_points());
    if clearance < cfg.margin {
        return Err(GermError::InvalidParameters(format!(
            "loop passes within {clearance:e} of a singular point (margin {:e})",
            cfg.margin
        )));
    }
    let (starts, r_max) = starting_points(field, cfg.samples, lp, cfg.rtol)?;
    let samples = starts
        .iter()
        .map(|&x| transport(field, x, lp, cfg.rtol).map(|y| (x, y)))
        .collect::<Result<Vec<_>>>()?;
    let out_scale = samples
        .iter()
        .map(|&(x, y)| x.norm().max(y.norm()))
        .fold(0.0, f64::max);
    let fit = fit_germ(&samples, cfg.fit_degree, r_max, 10.0 * cfg.rtol * out_scale)?;
    let germ = fit.germ(cfg.fit_degree)?;
    let low_confidence = fit.residual > cfg.fit_tol * out_scale;
    Ok(HolonomyGerm {
        samples,
        fit,
        germ,
        low_confidence,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolvabilityStatus {
    /// The relation holds within uncertainty through this degree.
    Consistent {
        through: u32,
    },
    /// The relation fails at `degree` by more than ten times its uncertainty.
    Fails {
        degree: u32,
        defect: f64,
        uncertainty: f64,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug)]
pub struct SolvabilityReport {
    pub status: SolvabilityStatus,
    /// Indices of the two singular points whose loops gave the generators.
    pub generators: (usize, usize),
    pub multipliers: (C, C),
    pub residuals: (f64, f64),
    /// `|defect_n|` for `n = 1, …, order`, in the scaled variable.
    pub defect: Vec<f64>,
    pub uncertainty: Vec<f64>,
}

const CONFIDENCE_FACTOR: f64 = 10.0;
const ROUNDING_FLOOR: f64 = 1e-12;

fn word_defect(f: &[C], g: &[C], order: u32) -> Result<Vec<C>> {
    let r = solvable2_test(&germ_from(f, order)?, &germ_from(g, order)?, order)?;
    let mut out = vec![C::zero(); order as usize];
    for (n, c) in r.defect.terms() {
        let k = n.exps()[0] as usize;
        if k >= 1 {
            out[k - 1] = c.to_c64();
        }
    }
    Ok(out)
}

/// Runs the solvability relation on the holonomies of the loops around the
/// two singular points whose multipliers are nearest the unit circle.
///
/// Germs are compared after a common scaling `x = rw`, and a degree counts as
/// failing only when its defect exceeds ten times the uncertainty propagated
/// from the fits. Degrees above the fit degree are not resolved.
pub fn solvability_report(
    f: &FoliationPair,
    order: u32,
    cfg: &HolonomyConfig,
) -> Result<SolvabilityReport> {
    let rnd = rnd_star_test(f);
    if !rnd.member {
        return Err(GermError::Domain(format!(
            "not a member of RND*: {:?}",
            rnd.violations
        )));
    }
    if order == 0 {
        return Err(GermError::InvalidParameters(
            "order must be at least 1".into(),
        ));
    }
    let field = BlownField::new(f)?;
    let layout = generator_loops(&field.singular_points(), 64)?;
    let mut by_growth: Vec<(usize, f64)> = singular_data(f)?
        .iter()
        .enumerate()
        .map(|(j, p)| (j, p.ratio.im.abs()))
        .collect();
    by_growth.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (j1, j2) = (
        by_growth[0].0.min(by_growth[1].0),
        by_growth[0].0.max(by_growth[1].0),
    );
    let h1 = holonomy(&field, &layout.generator(j1), cfg)?;
    let h2 = holonomy(&field, &layout.generator(j2), cfg)?;
    let r = h1.fit.r_max.min(h2.fit.r_max);
    let (c1, u1) = h1.fit.rescaled(r);
    let (c2, u2) = h2.fit.rescaled(r);
    let defect = word_defect(&c1, &c2, order)?;
    let mut uncertainty = vec![ROUNDING_FLOOR; order as usize];
    for (which, unc) in [(0, &u1), (1, &u2)] {
        for (d, &du) in unc.iter().enumerate() {
            let (mut p1, mut p2) = (c1.clone(), c2.clone());
            let target = if which == 0 { &mut p1 } else { &mut p2 };
            target[d] += du;
            let moved = word_defect(&p1, &p2, order)?;
            for (acc, (m, b)) in uncertainty.iter_mut().zip(moved.iter().zip(&defect)) {
                *acc += (m - b).norm();
            }
        }
    }
    let status = if h1.low_confidence || h2.low_confidence {
        SolvabilityStatus::Inconclusive {
            reason: "holonomy fit residual above tolerance".into(),
        }
    } else {
        let resolved = order.min(cfg.fit_degree);
        (0..resolved as usize)
            .find(|&k| defect[k].norm() > CONFIDENCE_FACTOR * uncertainty[k])
            .map_or(SolvabilityStatus::Consistent { through: resolved }, |k| {
                SolvabilityStatus::Fails {
                    degree: k as u32 + 1,
                    defect: defect[k].norm(),
                    uncertainty: uncertainty[k],
                }
            })
    };
    Ok(SolvabilityReport {
        status,
        generators: (j1, j2),
        multipliers: (h1.multiplier(), h2.multiplier()),
        residuals: (h1.fit.residual, h2.fit.residual),
        defect: defect.iter().map(|c| c.norm()).collect(),
        uncertainty,
    })
}
