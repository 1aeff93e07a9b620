mod common;

use std::f64::consts::PI;

use common::{diffeo, series, G};
use germcalc::calculus::{
    commutator, comp_inverse, compose, diffeo_from, frechet_dir, solvable2_test, DiffeoGerm,
    FrechetOp,
};
use germcalc::scalar::q;
use germcalc::Series;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn composition_is_associative(f in series(1, 6, 0), g in series(1, 6, 1), h in series(1, 6, 1)) {
        let left = compose(&compose(&f, std::slice::from_ref(&g)).unwrap(), std::slice::from_ref(&h)).unwrap();
        let right = compose(&f, &[compose(&g, &[h]).unwrap()]).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multivariate_composition_is_associative(f in series(2, 4, 0), g1 in series(2, 4, 1), g2 in series(2, 4, 1), h1 in series(2, 4, 1), h2 in series(2, 4, 1)) {
        let g = [g1, g2];
        let h = [h1, h2];
        let gh: Vec<Series<G>> = g.iter().map(|gi| compose(gi, &h).unwrap()).collect();
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        prop_assert_eq!(left, compose(&f, &gh).unwrap());
    }

    #[test]
    fn inverse_round_trips(s in diffeo(8)) {
        let d = DiffeoGerm::new(s).unwrap();
        let inv = comp_inverse(&d).unwrap();
        prop_assert!(d.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&d).unwrap().is_identity());
    }

    #[test]
    fn jets_of_compositions_depend_on_jets(f in series(1, 8, 0), g in series(1, 8, 1), n in 1u32..8) {
        let full = compose(&f, std::slice::from_ref(&g)).unwrap().jet(n);
        prop_assert_eq!(full, compose(&f.jet(n), &[g.jet(n)]).unwrap());
    }

    #[test]
    fn commuting_germs_have_trivial_commutator(s in diffeo(7), k in 1u32..4) {
        let d = DiffeoGerm::new(s).unwrap();
        let c = commutator(&d, &d.iterate(k).unwrap()).unwrap();
        prop_assert!(c.is_identity());
        prop_assert!(solvable2_test(&d, &d, 7).unwrap().passes());
    }

    #[test]
    fn exact_frechet_derivatives_agree(g in series(1, 5, 1), h in series(1, 5, 1), f in series(1, 5, 0)) {
        for op in [FrechetOp::RightCompose(f.clone()), FrechetOp::Diffeo, FrechetOp::Inverse] {
            let r = frechet_dir(&op, std::slice::from_ref(&g), std::slice::from_ref(&h), 0.25).unwrap();
            prop_assert_eq!(r.agrees, Some(true));
            prop_assert_eq!(r.finite_difference.as_ref(), Some(&r.analytic));
        }
    }

    #[test]
    fn approximate_inverse_derivative_is_second_order(g in series(1, 5, 1), h in series(1, 5, 0)) {
        let (g, h) = (g.to_approx(), h.to_approx());
        let dev = |eps: f64| {
            let r = frechet_dir(&FrechetOp::Inverse, std::slice::from_ref(&g), std::slice::from_ref(&h), eps).unwrap();
            r.max_deviation.unwrap()
        };
        let (coarse, fine) = (dev(1e-2), dev(1e-3));
        // Second order until rounding takes over.
        prop_assert!(fine <= coarse / 50.0 || fine < 1e-7, "{} then {}", coarse, fine);
    }
}

#[test]
fn diffeo_is_periodic_in_the_imaginary_direction() {
    let g = Series::univariate(8, [q(0, 1), q(1, 2), q(-1, 3), q(0, 1), q(2, 1)]).to_approx();
    let shifted = g
        .checked_add(&Series::constant(1, 8, Complex64::new(0.0, 2.0 * PI)))
        .unwrap();
    let a = diffeo_from(&g).unwrap();
    let b = diffeo_from(&shifted).unwrap();
    assert!(a.series().max_abs_diff(b.series()) < 1e-12);
}

#[test]
fn catalan_inverse() {
    let d = DiffeoGerm::new(Series::univariate(6, [G::from(q(0, 1)), q(1, 1), q(1, 1)])).unwrap();
    let inv = comp_inverse(&d).unwrap();
    let want = Series::univariate(6, [0i64, 1, -1, 2, -5, 14, -42].map(|c| q(c, 1)));
    assert_eq!(inv.series(), &want);
}
