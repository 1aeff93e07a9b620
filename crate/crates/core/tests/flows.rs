mod common;

use common::{series, G};
use germcalc::calculus::compose;
use germcalc::flows::{flow_residual, flow_series, ode_solve, OdeSpec, VectorField};
use germcalc::mindex::MultiIndex;
use germcalc::scalar::q;
use germcalc::Series;
use proptest::prelude::*;

fn field(m: usize, trunc: u32) -> impl Strategy<Value = VectorField<G>> {
    proptest::collection::vec(series(m, trunc, 0), m).prop_map(|c| VectorField::new(c).unwrap())
}

/// Places `s(z)` in the variables `(z, δ_0, …, δ_k)`.
fn in_z(s: &Series<G>, k: usize) -> Series<G> {
    s.embed(k + 2, &[0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flows_solve_their_equation(x in (1usize..=3).prop_flat_map(|m| field(m, if m == 3 { 4 } else { 6 }))) {
        let order = x.trunc();
        let phi = flow_series(&x, order).unwrap();
        for r in flow_residual(&x, &phi).unwrap() {
            prop_assert!(r.is_zero());
        }
        let start: Vec<Series<G>> = (0..x.nvars()).map(|j| Series::var(x.nvars(), order, j)).collect();
        prop_assert_eq!(phi.at_time_zero(), start);
    }

    #[test]
    fn rescaling_the_field_rescales_time(x in field(2, 5), (a, b) in (-3i64..=3, 1i64..=2)) {
        let lambda = q(a, b);
        let slow = flow_series(&x.scale(&lambda), 5).unwrap();
        let fast = flow_series(&x, 5).unwrap();
        let subst = [Series::var(3, 5, 0), Series::var(3, 5, 1), Series::var(3, 5, 2).scale(&lambda)];
        for (s, f) in slow.components().iter().zip(fast.components()) {
            prop_assert_eq!(s, &compose(f, &subst).unwrap());
        }
    }

    #[test]
    fn ode_solutions_are_reproduced(f in series(1, 9, 2)) {
        // δ₁ − δ₀² − r(z) with r = f′ − f², satisfied by f.
        let r = f.derive(0).unwrap().checked_sub(&f.checked_mul(&f).unwrap()).unwrap();
        let p = Series::var(3, 9, 2)
            .checked_sub(&Series::var(3, 9, 1).pow(2)).unwrap()
            .checked_sub(&in_z(&r.as_polynomial_to(9), 1)).unwrap();
        let spec = OdeSpec::new(1, p).unwrap();
        let sol = ode_solve(&Series::zero(1, 8), &spec, 8).unwrap();
        prop_assert_eq!(sol, f.jet(8));
    }
}

#[test]
fn second_order_equation() {
    // f″ = −f − z with J₁f = 0 gives f = sin z − z.
    let p = Series::from_terms(
        4,
        10,
        [
            (MultiIndex::new(vec![0, 0, 0, 1]), q(1, 1)),
            (MultiIndex::new(vec![0, 1, 0, 0]), q(1, 1)),
            (MultiIndex::new(vec![1, 0, 0, 0]), q(1, 1)),
        ],
    )
    .unwrap();
    let sol = ode_solve(&Series::zero(1, 9), &OdeSpec::new(2, p).unwrap(), 9).unwrap();
    let sin_minus_z = Series::univariate(
        9,
        [0, 0, 0, -1, 0, 1, 0, -1, 0, 1]
            .iter()
            .zip([1, 1, 1, 6, 1, 120, 1, 5040, 1, 362880])
            .map(|(&n, d)| q(n, d)),
    );
    assert_eq!(sol, sin_minus_z);
}

#[test]
fn degenerate_equations_are_rejected() {
    let p: Series<G> = Series::var(3, 4, 1);
    assert!(OdeSpec::new(1, p).is_err());
}
