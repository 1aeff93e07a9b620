//! Lie-series flows and the companion field of a scalar ODE.

use crate::calculus::compose;
use crate::error::{GermError, Result};
use crate::mindex::MultiIndex;
use crate::scalar::Scalar;
use crate::series::Series;

/// `X = Σ X_j ∂/∂z_j` with `m` components in `m` variables.
#[derive(Clone, Debug)]
pub struct VectorField<S: Scalar> {
    components: Vec<Series<S>>,
}

impl<S: Scalar> PartialEq for VectorField<S> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<S: Scalar> VectorField<S> {
    /// Components are cut to their common truncation order.
    pub fn new(components: Vec<Series<S>>) -> Result<Self> {
        let m = components.len();
        if m == 0 {
            return Err(GermError::InvalidParameters(
                "a vector field needs a component".into(),
            ));
        }
        for c in &components {
            if c.nvars() != m {
                return Err(GermError::DimensionMismatch {
                    expected: m,
                    found: c.nvars(),
                });
            }
        }
        let t = components
            .iter()
            .map(Series::trunc)
            .min()
            .expect("nonempty");
        Ok(VectorField {
            components: components.iter().map(|c| c.jet(t)).collect(),
        })
    }

    pub fn components(&self) -> &[Series<S>] {
        &self.components
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn trunc(&self) -> u32 {
        self.components[0].trunc()
    }

    pub fn scale(&self, c: &S) -> Self {
        VectorField {
            components: self.components.iter().map(|x| x.scale(c)).collect(),
        }
    }
}

/// `X·f = Σ X_j ∂f/∂z_j`.
pub fn lie_derivative<S: Scalar>(x: &VectorField<S>, f: &Series<S>) -> Result<Series<S>> {
    if f.nvars() != x.nvars() {
        return Err(GermError::DimensionMismatch {
            expected: x.nvars(),
            found: f.nvars(),
        });
    }
    let t = x.trunc().min(f.trunc().saturating_sub(1));
    let mut acc = Series::zero(f.nvars(), t);
    for (j, xj) in x.components.iter().enumerate() {
        acc = acc.checked_add(&xj.checked_mul(&f.derive(j)?)?)?;
    }
    Ok(acc)
}

/// `Φ(z, t)` with components in `m+1` variables, time last.
#[derive(Clone, Debug)]
pub struct FlowSeries<S: Scalar> {
    components: Vec<Series<S>>,
}

impl<S: Scalar> FlowSeries<S> {
    pub fn from_components(components: Vec<Series<S>>) -> Result<Self> {
        let m = components.len();
        if components.iter().any(|c| c.nvars() != m + 1) {
            return Err(GermError::DimensionMismatch {
                expected: m + 1,
                found: components[0].nvars(),
            });
        }
        Ok(FlowSeries { components })
    }

    pub fn components(&self) -> &[Series<S>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Series<S>> {
        self.components
    }

    /// Number of space variables.
    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn trunc(&self) -> u32 {
        self.components.iter().map(Series::trunc).min().unwrap_or(0)
    }

    /// `Φ(z, 0)`.
    pub fn at_time_zero(&self) -> Vec<Series<S>> {
        let m = self.nvars();
        self.components
            .iter()
            .map(|c| {
                Series::from_terms(
                    m,
                    c.trunc(),
                    c.terms()
                        .filter(|(n, _)| n.exps()[m] == 0)
                        .map(|(n, v)| (MultiIndex::new(n.exps()[..m].to_vec()), v.clone())),
                )
                .expect("same truncation")
            })
            .collect()
    }
}

/// `Φ_X^t = Σ_k tᵏ/k!·X·ᵏ Id` to total order `order` in `(z, t)`.
pub fn flow_series<S: Scalar>(x: &VectorField<S>, order: u32) -> Result<FlowSeries<S>> {
    if x.trunc() < order {
        return Err(GermError::InsufficientTruncation {
            needed: order,
            available: x.trunc(),
        });
    }
    let m = x.nvars();
    let mut components = Vec::with_capacity(m);
    for j in 0..m {
        let mut out = Series::zero(m + 1, order);
        let mut lk = Series::var(m, order, j);
        let mut fact = S::one();
        for k in 0..=order {
            if k == 1 {
                lk = x.components[j].clone();
            } else if k > 1 {
                lk = lie_derivative(x, &lk)?;
                fact = fact * S::from_i64(k as i64);
            }
            let inv = fact.inv().expect("nonzero factorial");
            for (n, c) in lk.terms().take_while(|(n, _)| n.degree() + k <= order) {
                let mut e = n.exps().to_vec();
                e.push(k);
                out.insert(MultiIndex::new(e), c.clone() * inv.clone());
            }
        }
        components.push(out);
    }
    Ok(FlowSeries { components })
}

/// `∂Φ/∂t − X∘Φ`, known to order `trunc − 1`.
pub fn flow_residual<S: Scalar>(x: &VectorField<S>, phi: &FlowSeries<S>) -> Result<Vec<Series<S>>> {
    let m = x.nvars();
    if phi.nvars() != m {
        return Err(GermError::DimensionMismatch {
            expected: m,
            found: phi.nvars(),
        });
    }
    phi.components
        .iter()
        .zip(&x.components)
        .map(|(pj, xj)| pj.derive(m)?.checked_sub(&compose(xj, &phi.components)?))
        .collect()
}

/// A scalar ODE `P(z, δ_0, …, δ_k) = 0`, `δ_j` standing for the `j`-th
/// derivative of the unknown.
#[derive(Clone, Debug)]
pub struct OdeSpec<S: Scalar> {
    k: usize,
    p: Series<S>,
}

impl<S: Scalar> OdeSpec<S> {
    /// Rejects equations with `∂P/∂δ_k(0) = 0`.
    pub fn new(k: usize, p: Series<S>) -> Result<Self> {
        if p.nvars() != k + 2 {
            return Err(GermError::DimensionMismatch {
                expected: k + 2,
                found: p.nvars(),
            });
        }
        if p.trunc() < 1 || p.coeff(&MultiIndex::unit(k + 2, k + 1))?.is_zero() {
            return Err(GermError::Domain(format!(
                "degenerate equation: dP/d(delta_{k}) vanishes at the origin"
            )));
        }
        Ok(OdeSpec { k, p })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> &Series<S> {
        &self.p
    }
}

/// `𝔛(P) = ∂_z + Σ_{j<k} δ_{j+1}∂_{δ_j} − (P_z + Σ_{j<k} P_{δ_j}δ_{j+1})/P_{δ_k}·∂_{δ_k}`
/// in the variables `(z, δ_0, …, δ_k)`, known to order `trunc_P − 1`.
pub fn companion_field<S: Scalar>(spec: &OdeSpec<S>) -> Result<VectorField<S>> {
    let (k, p) = (spec.k, &spec.p);
    let n = k + 2;
    let t = p.trunc() - 1;
    let mut num = p.derive(0)?;
    for j in 0..k {
        let delta_next = Series::var(n, t, j + 2);
        // δ_{j+1} vanishes at the origin, so the product keeps order t.
        num = num.checked_add(
            &p.derive(j + 1)?
                .as_polynomial_to(t)
                .checked_mul(&delta_next)?,
        )?;
    }
    let last = num.checked_mul(&p.derive(k + 1)?.recip()?)?.neg();
    let mut comps = vec![Series::one(n, t)];
    for j in 0..k {
        comps.push(Series::var(n, t, j + 2));
    }
    comps.push(last);
    VectorField::new(comps)
}

/// `J(z) + Π∘Φ_{𝔛(P)}^z(0)`: the `δ_0` component of the companion flow from
/// the origin, at time `z`.
pub fn ode_solve<S: Scalar>(j: &Series<S>, spec: &OdeSpec<S>, order: u32) -> Result<Series<S>> {
    if j.nvars() != 1 {
        return Err(GermError::DimensionMismatch {
            expected: 1,
            found: j.nvars(),
        });
    }
    if j.degree().unwrap_or(0) > spec.k as u32 {
        return Err(GermError::InvalidParameters(format!(
            "jet of degree above {}",
            spec.k
        )));
    }
    if spec.p.trunc() < order + 1 {
        return Err(GermError::InsufficientTruncation {
            needed: order + 1,
            available: spec.p.trunc(),
        });
    }
    let x = companion_field(spec)?;
    let phi = flow_series(&x, order)?;
    let n = x.nvars();
    let delta0 = &phi.components[1];
    let curve = Series::from_terms(
        1,
        order,
        delta0
            .terms()
            .filter(|(e, _)| e.exps()[..n].iter().all(|&v| v == 0))
            .map(|(e, c)| (MultiIndex::new(vec![e.exps()[n]]), c.clone())),
    )?;
    curve.checked_add(&j.as_polynomial_to(order))
}
