#![allow(dead_code)]

use germcalc::mindex::{up_to_degree, MultiIndex};
use germcalc::scalar::{q, GaussianRational};
use germcalc::Series;
use num_traits::Signed;
use proptest::prelude::*;

pub type G = GaussianRational;

/// Sparse series with small rational coefficients, optionally from degree `from`.
pub fn series(m: usize, trunc: u32, from: u32) -> impl Strategy<Value = Series<G>> {
    let slots: Vec<MultiIndex> = up_to_degree(m, trunc)
        .into_iter()
        .filter(|n| n.degree() >= from)
        .collect();
    let n = slots.len();
    proptest::collection::vec(proptest::option::weighted(0.4, (-5i64..=5, 1i64..=3)), n).prop_map(
        move |cs| {
            let terms = slots
                .iter()
                .zip(cs)
                .filter_map(|(k, c)| c.map(|(a, b)| (k.clone(), q(a, b))));
            Series::from_terms(m, trunc, terms).unwrap()
        },
    )
}

/// Series with nonnegative coefficients.
pub fn nonneg_series(m: usize, trunc: u32, from: u32) -> impl Strategy<Value = Series<G>> {
    series(m, trunc, from).prop_map(|s| {
        let terms: Vec<_> = s
            .terms()
            .map(|(k, c)| (k.clone(), G::new(c.re.abs(), c.im.clone())))
            .collect();
        Series::from_terms(s.nvars(), s.trunc(), terms).unwrap()
    })
}

/// `z + a₂z² + …` with a nonzero linear coefficient.
pub fn diffeo(trunc: u32) -> impl Strategy<Value = Series<G>> {
    (series(1, trunc, 2), (1i64..=4, 1i64..=3), any::<bool>()).prop_map(move |(s, (a, b), neg)| {
        let lin = q(if neg { -a } else { a }, b);
        s.checked_add(&Series::var(1, trunc, 0).scale(&lin))
            .unwrap()
    })
}

pub fn mono(m: usize, trunc: u32, e: &[u32], c: G) -> Series<G> {
    Series::from_terms(m, trunc, [(MultiIndex::new(e.to_vec()), c)]).unwrap()
}
