mod common;

use common::{series, G};
use germcalc::coprimality::poly::{gcd, Poly};
use germcalc::coprimality::{
    build_index_matrix, composite_at_rank, decide_coprime, milnor_dim_estimate, CoprimalityStatus,
};
use germcalc::mindex::MultiIndex;
use germcalc::scalar::q;
use germcalc::Series;
use proptest::prelude::*;

fn poly2(trunc: u32, terms: &[((u32, u32), i64)]) -> Series<G> {
    Series::from_terms(
        2,
        trunc,
        terms
            .iter()
            .map(|&((i, j), c)| (MultiIndex::new(vec![i, j]), q(c, 1))),
    )
    .unwrap()
}

#[test]
fn skeletons_nest_and_are_block_triangular() {
    for m in 1..=3 {
        for d in 0..=3 {
            let small = build_index_matrix(m, d).unwrap();
            let big = build_index_matrix(m, d + 1).unwrap();
            assert!(small.is_block_triangular() && big.is_block_triangular());
            let (r, c) = small.shape();
            assert_eq!(big.trailing(r, c), small.cells, "m={m}, d={d}");
            for (i, row) in small.cells.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    if small.rows[i].degree() < small.cols[j].degree() {
                        assert!(cell.is_none());
                    }
                }
            }
        }
    }
}

#[test]
fn shared_linear_factor_stays_composite() {
    let f1 = poly2(
        5,
        &[
            ((3, 0), 1),
            ((2, 1), 2),
            ((1, 2), 1),
            ((2, 0), -1),
            ((1, 1), -2),
            ((0, 2), -1),
        ],
    );
    let f2 = poly2(5, &[((1, 0), 1), ((0, 1), 1), ((1, 1), -3), ((0, 2), -3)]);
    let v = decide_coprime(&[f1.clone(), f2.clone()], 4).unwrap();
    assert_eq!(
        v.status,
        CoprimalityStatus::CompositeConsistent { through: 4 }
    );
    assert!(v.ranks.iter().all(|r| r.composite()));
    assert!(!milnor_dim_estimate(&[f1, f2], 4).unwrap().stabilized);
}

#[test]
fn milnor_numbers_of_monomial_ideals() {
    let cases = [
        (poly2(6, &[((1, 0), 1)]), poly2(6, &[((0, 1), 1)]), 1),
        (poly2(6, &[((2, 0), 1)]), poly2(6, &[((0, 3), 1)]), 6),
        (
            poly2(6, &[((0, 2), 1), ((3, 0), -1)]),
            poly2(6, &[((1, 0), 1)]),
            2,
        ),
    ];
    for (a, b, mu) in cases {
        let est = milnor_dim_estimate(&[a.clone(), b.clone()], 5).unwrap();
        assert!(est.stabilized);
        assert_eq!(est.dim, mu);
        assert!(decide_coprime(&[a, b], 5).unwrap().is_coprime());
    }
}

#[test]
fn degenerate_inputs_are_reported() {
    let unit = poly2(4, &[((0, 0), 1), ((1, 0), 1)]);
    let v = decide_coprime(&[unit, poly2(4, &[((0, 1), 1)])], 3).unwrap();
    assert!(matches!(
        v.status,
        CoprimalityStatus::InputsDegenerate { .. }
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn failing_compositeness_persists(f in series(2, 6, 1), g in series(2, 6, 1)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let fam = [f, g];
        let mut failed = false;
        for d in 0..=5 {
            let c = composite_at_rank(&fam, d).unwrap();
            prop_assert!(!(failed && c), "composite again at d={}", d);
            failed |= !c;
        }
    }

    #[test]
    fn agrees_with_gcd_in_three_variables(a in series(3, 2, 1), b in series(3, 2, 1), g in series(3, 1, 1), planted in any::<bool>()) {
        let (pa, pb, pg) = (Poly::from_series(&a), Poly::from_series(&b), Poly::from_series(&g));
        prop_assume!(!pa.is_zero() && !pb.is_zero() && !pg.is_zero());
        let (pa, pb) = if planted { (pa.mul(&pg), pb.mul(&pg)) } else { (pa, pb) };
        let composite = gcd(&pa, &pb).constant_term() == q(0, 1);
        let fam = [pa.to_series(7).unwrap(), pb.to_series(7).unwrap()];
        let v = decide_coprime(&fam, 6).unwrap();
        prop_assert_eq!(v.is_coprime(), !composite, "{:?}", v.status);
    }
}
