//! Exact rank by fraction-free elimination over the Gaussian integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        GaussInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn one() -> Self {
        GaussInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussInt {
                re: &self.re * &o.re,
                im: BigInt::zero(),
            };
        }
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Exact quotient; the caller guarantees divisibility.
    fn div_exact(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() {
            return GaussInt {
                re: &self.re / &d.re,
                im: &self.im / &d.re,
            };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        debug_assert!(re.is_multiple_of(&n) && im.is_multiple_of(&n));
        GaussInt {
            re: re / &n,
            im: im / n,
        }
    }
}

/// Clears the denominators of a row, keeping its span.
fn integral_row(row: &[GaussianRational]) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for c in row {
        l = l.lcm(c.re.denom()).lcm(c.im.denom());
    }
    row.iter()
        .map(|c| GaussInt {
            re: c.re.numer() * (&l / c.re.denom()),
            im: c.im.numer() * (&l / c.im.denom()),
        })
        .collect()
}

/// Rank over `ℚ(i)` by Bareiss elimination, pivoting on the first nonzero
/// entry of each column.
pub fn exact_rank(rows: &[Vec<GaussianRational>]) -> usize {
    let mut a: Vec<Vec<GaussInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|c| !c.re.is_zero() || !c.im.is_zero()))
        .map(|r| integral_row(r))
        .collect();
    let n = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = GaussInt::one();
    for col in 0..ncols {
        if rank == n {
            break;
        }
        let Some(r) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, r);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = pivot_row[col].clone();
        for row in bottom.iter_mut() {
            let factor = std::mem::replace(&mut row[col], GaussInt::zero());
            for j in col + 1..ncols {
                let mut v = row[j].mul(&p);
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    v = v.sub(&factor.mul(&pivot_row[j]));
                }
                row[j] = if v.is_zero() { v } else { v.div_exact(&prev) };
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Scalar};

    /// Plain Gauss–Jordan over the field, used as an oracle.
    fn field_rank(rows: &[Vec<GaussianRational>]) -> usize {
        let mut a = rows.to_vec();
        let mut rank = 0;
        let ncols = a.first().map_or(0, Vec::len);
        for col in 0..ncols {
            let Some(r) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, r);
            let inv = Scalar::inv(&a[rank][col]).unwrap();
            for i in 0..a.len() {
                if i != rank && !a[i][col].is_zero() {
                    let f = a[i][col].clone() * inv.clone();
                    for j in 0..ncols {
                        let v = a[rank][j].clone() * f.clone();
                        a[i][j] = a[i][j].clone() - v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_cases() {
        assert_eq!(exact_rank(&vec![vec![q(0, 1); 3]; 2]), 0);
        let id: Vec<Vec<_>> = (0..4)
            .map(|i| (0..4).map(|j| q((i == j) as i64, 1)).collect())
            .collect();
        assert_eq!(exact_rank(&id), 4);
        let dep = vec![vec![q(1, 2), qi(0, 1)], vec![q(1, 1), qi(0, 2)]];
        assert_eq!(exact_rank(&dep), 1);
        assert_eq!(exact_rank(&[]), 0);
    }

    #[test]
    fn agrees_with_field_elimination() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            // low-rank products plus sparse noise
            let k = rng.gen_range(0..=r.min(c));
            let left: Vec<Vec<GaussianRational>> = (0..r)
                .map(|_| {
                    (0..k)
                        .map(|_| qi(rng.gen_range(-2..3), rng.gen_range(-1..2)))
                        .collect()
                })
                .collect();
            let right: Vec<Vec<GaussianRational>> = (0..k)
                .map(|_| {
                    (0..c)
                        .map(|_| q(rng.gen_range(-3..4), rng.gen_range(1..4)))
                        .collect()
                })
                .collect();
            let m: Vec<Vec<GaussianRational>> = (0..r)
                .map(|i| {
                    (0..c)
                        .map(|j| {
                            (0..k).fold(q(0, 1), |acc, t| {
                                acc + left[i][t].clone() * right[t][j].clone()
                            })
                        })
                        .collect()
                })
                .collect();
            assert_eq!(exact_rank(&m), field_rank(&m));
        }
    }
}
