//! Coprimality of families of power series through rank conditions.
//!
//! A family `(f_1, …, f_k)` in the maximal ideal `𝔷` is composite when it
//! admits cofactors `h_ℓ` with all `f_ℓ h_ℓ` equal. Truncating the cofactors
//! at degree `d` and the products at degree `d+1` gives the linear map
//! `φ_d`, whose matrix is built from the index skeleton `M_d`. The family is
//! composite iff `rank φ_d ≤ (k−1)·C(m+d,d)` at every `d`, so one failing
//! rank certifies coprimality.

pub mod poly;
mod rank;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{GermError, Result};
use crate::mindex::{count_up_to, up_to_degree, MultiIndex};
use crate::scalar::GaussianRational;
use crate::series::Series;

pub use poly::Poly;
pub use rank::exact_rank;

type G = GaussianRational;

/// Row and column indices in decreasing `≺` order.
fn decreasing(m: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    let mut v: Vec<MultiIndex> = up_to_degree(m, hi)
        .into_iter()
        .filter(|n| n.degree() >= lo)
        .collect();
    v.reverse();
    v
}

/// The matrix of multi-indices `n_{p,q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexSkeleton {
    pub m: usize,
    pub d: u32,
    /// `q` with `0 < |q| ≤ d+1`.
    pub rows: Vec<MultiIndex>,
    /// `p` with `|p| ≤ d`.
    pub cols: Vec<MultiIndex>,
    /// `Some(q−p)` when `q−p ∈ ℕ^m ∖ {0}`; `None` for the null index.
    pub cells: Vec<Vec<Option<MultiIndex>>>,
}

impl IndexSkeleton {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    /// Whether every cell with `|q| < |p|` is null.
    pub fn is_block_triangular(&self) -> bool {
        self.rows.iter().zip(&self.cells).all(|(q, row)| {
            self.cols
                .iter()
                .zip(row)
                .all(|(p, c)| q.degree() >= p.degree() || c.is_none())
        })
    }

    /// The trailing `r × c` sub-skeleton.
    pub fn trailing(&self, r: usize, c: usize) -> Vec<Vec<Option<MultiIndex>>> {
        let (nr, nc) = self.shape();
        self.cells[nr - r..]
            .iter()
            .map(|row| row[nc - c..].to_vec())
            .collect()
    }
}

pub fn build_index_matrix(m: usize, d: u32) -> Result<IndexSkeleton> {
    if m == 0 {
        return Err(GermError::InvalidParameters(
            "need at least one variable".into(),
        ));
    }
    let rows = decreasing(m, 1, d + 1);
    let cols = decreasing(m, 0, d);
    let cells = rows
        .iter()
        .map(|q| {
            cols.iter()
                .map(|p| q.checked_sub(p).filter(|n| !n.is_zero()))
                .collect()
        })
        .collect();
    Ok(IndexSkeleton {
        m,
        d,
        rows,
        cols,
        cells,
    })
}

/// Matrix of `(h_1, …, h_k) ↦ (J_{d+1}(f_a h_a − f_b h_b))_{a<b}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MacaulaySystem {
    pub m: usize,
    pub d: u32,
    pub k: usize,
    /// `((a, b), q)`: the pair of family members and the output monomial.
    pub rows: Vec<((usize, usize), MultiIndex)>,
    /// `(p, ℓ)`: the cofactor monomial and the family member.
    pub cols: Vec<(MultiIndex, usize)>,
    pub entries: Vec<Vec<G>>,
}

impl MacaulaySystem {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn rank(&self) -> usize {
        exact_rank(&self.entries)
    }

    /// `(k−1)·C(m+d,d)`.
    pub fn bound(&self) -> usize {
        (self.k - 1) * count_up_to(self.m, self.d)
    }
}

fn check_family(f: &[Series<G>], need_trunc: u32) -> Result<usize> {
    if f.len() < 2 {
        return Err(GermError::InvalidParameters(format!(
            "need at least two series, got {}",
            f.len()
        )));
    }
    let m = f[0].nvars();
    for s in f {
        if s.nvars() != m {
            return Err(GermError::DimensionMismatch {
                expected: m,
                found: s.nvars(),
            });
        }
        if s.trunc() < need_trunc {
            return Err(GermError::InsufficientTruncation {
                needed: need_trunc,
                available: s.trunc(),
            });
        }
        if !s.constant_term().is_zero() {
            return Err(GermError::Domain("inputs must vanish at the origin".into()));
        }
    }
    Ok(m)
}

/// All pairs `a < b`, lexicographically.
pub fn all_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .collect()
}

pub fn build_system(f: &[Series<G>], d: u32) -> Result<MacaulaySystem> {
    build_with_pairs(f, d, &all_pairs(f.len()))
}

/// Same map restricted to the listed pairs of family members.
pub fn build_with_pairs(
    f: &[Series<G>],
    d: u32,
    pairs: &[(usize, usize)],
) -> Result<MacaulaySystem> {
    let m = check_family(f, d + 1)?;
    let k = f.len();
    let skel = build_index_matrix(m, d)?;
    let cols: Vec<(MultiIndex, usize)> = skel
        .cols
        .iter()
        .flat_map(|p| (0..k).map(move |l| (p.clone(), l)))
        .collect();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for &(a, b) in pairs {
        for (q, cells) in skel.rows.iter().zip(&skel.cells) {
            let mut row = vec![G::zero(); cols.len()];
            for (pi, cell) in cells.iter().enumerate() {
                if let Some(n) = cell {
                    row[pi * k + a] = f[a].coeff(n)?;
                    row[pi * k + b] = -f[b].coeff(n)?;
                }
            }
            rows.push(((a, b), q.clone()));
            entries.push(row);
        }
    }
    Ok(MacaulaySystem {
        m,
        d,
        k,
        rows,
        cols,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRecord {
    pub d: u32,
    pub rank: usize,
    pub bound: usize,
    pub rows: usize,
    pub cols: usize,
}

impl RankRecord {
    pub fn composite(&self) -> bool {
        self.rank <= self.bound
    }
}

pub fn rank_record(f: &[Series<G>], d: u32) -> Result<RankRecord> {
    let sys = build_system(f, d)?;
    let (rows, cols) = sys.shape();
    Ok(RankRecord {
        d,
        rank: sys.rank(),
        bound: sys.bound(),
        rows,
        cols,
    })
}

/// `rank φ_d ≤ (k−1)·C(m+d,d)`.
pub fn composite_at_rank(f: &[Series<G>], d: u32) -> Result<bool> {
    Ok(rank_record(f, d)?.composite())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CoprimalityStatus {
    CoprimeCertified {
        d: u32,
    },
    /// The rank bound held at every scanned `d`; truncated inputs never
    /// certify compositeness.
    CompositeConsistent {
        through: u32,
    },
    InputsDegenerate {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoprimalityVerdict {
    #[serde(flatten)]
    pub status: CoprimalityStatus,
    pub ranks: Vec<RankRecord>,
}

impl CoprimalityVerdict {
    pub fn is_coprime(&self) -> bool {
        matches!(self.status, CoprimalityStatus::CoprimeCertified { .. })
    }
}

/// Largest `d` whose system the stored coefficients determine.
pub fn default_d_max(f: &[Series<G>]) -> u32 {
    f.iter()
        .map(Series::trunc)
        .min()
        .unwrap_or(0)
        .saturating_sub(1)
}

/// Scans `d = 0, …, d_max` and stops at the first rank exceeding the bound.
pub fn decide_coprime(f: &[Series<G>], d_max: u32) -> Result<CoprimalityVerdict> {
    match check_family(f, d_max + 1) {
        Err(GermError::Domain(reason)) => {
            return Ok(CoprimalityVerdict {
                status: CoprimalityStatus::InputsDegenerate { reason },
                ranks: vec![],
            })
        }
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let mut ranks = Vec::new();
    for d in 0..=d_max {
        let rec = rank_record(f, d)?;
        let composite = rec.composite();
        ranks.push(rec);
        if !composite {
            return Ok(CoprimalityVerdict {
                status: CoprimalityStatus::CoprimeCertified { d },
                ranks,
            });
        }
    }
    Ok(CoprimalityVerdict {
        status: CoprimalityStatus::CompositeConsistent { through: d_max },
        ranks,
    })
}

/// `ε_ℓ = (k−1)·ν(gcd) + ν(lcm) − ν(f_ℓ)` for polynomial inputs.
pub fn epsilon_bounds(f: &[Series<G>]) -> Result<Vec<u32>> {
    if f.len() < 2 {
        return Err(GermError::InvalidParameters(format!(
            "need at least two series, got {}",
            f.len()
        )));
    }
    let polys: Vec<Poly> = f.iter().map(Poly::from_series).collect();
    if polys.iter().any(Poly::is_zero) {
        return Err(GermError::Domain("zero member in the family".into()));
    }
    let k = polys.len() as u32;
    let g = poly::gcd_all(&polys).valuation().expect("nonzero gcd");
    let l = poly::lcm_all(&polys).valuation().expect("nonzero lcm");
    Ok(polys
        .iter()
        .map(|p| (k - 1) * g + l - p.valuation().expect("nonzero member"))
        .collect())
}

/// Gcd of the stored polynomials, with the truncation of the first input.
pub fn polynomial_gcd(f: &[Series<G>]) -> Result<Series<G>> {
    let polys: Vec<Poly> = f.iter().map(Poly::from_series).collect();
    let t = f.iter().map(Series::trunc).min().unwrap_or(0);
    let g = poly::gcd_all(&polys);
    g.to_series(t.max(g.total_degree().unwrap_or(0)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorEstimate {
    pub n: u32,
    /// `dim Pol_{≤N} / J_N(Σ f_ℓ·Pol_{≤N})`.
    pub dim: usize,
    pub previous: Option<usize>,
    pub stabilized: bool,
}

/// Codimension of the truncated ideal in `Pol_{≤n}`.
pub fn truncated_quotient_dim(f: &[Series<G>], n: u32) -> Result<usize> {
    let m = check_family(f, n)?;
    let k = f.len();
    let rows = up_to_degree(m, n);
    let cofactors = if n == 0 {
        vec![]
    } else {
        up_to_degree(m, n - 1)
    };
    let mut entries = Vec::with_capacity(cofactors.len() * k);
    for p in &cofactors {
        for fl in f {
            let col: Vec<G> = rows
                .iter()
                .map(|q| match q.checked_sub(p) {
                    Some(r) => fl.coeff(&r),
                    None => Ok(G::zero()),
                })
                .collect::<Result<_>>()?;
            entries.push(col);
        }
    }
    Ok(rows.len() - exact_rank(&entries))
}

pub fn milnor_dim_estimate(f: &[Series<G>], n: u32) -> Result<MilnorEstimate> {
    let dim = truncated_quotient_dim(f, n)?;
    let previous = if n == 0 {
        None
    } else {
        Some(truncated_quotient_dim(f, n - 1)?)
    };
    Ok(MilnorEstimate {
        n,
        dim,
        previous,
        stabilized: previous == Some(dim),
    })
}
