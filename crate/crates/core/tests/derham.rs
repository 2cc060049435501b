mod common;

use common::*;
use proptest::prelude::*;
use residua::derham::{build_complex, cohomology_dims, formal_integrate, stabilized_cohomology};
use residua::exactalg::{IdealBasis, MonomialOrder, Polynomial};
use residua::forms::Form;
use residua::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn differential_squares_to_zero(g in terms(2, 3, 3), n in 1u32..=3, d in 2u32..=6) {
        let r = qring(&["x", "y"]);
        let g = build(&r, &g);
        prop_assume!(!g.is_zero());
        let ideal = IdealBasis::new(&r, vec![g], MonomialOrder::Grevlex).unwrap();
        let c = build_complex(&ideal, n, d).unwrap();
        prop_assert!(c.d_squared_is_zero());
        let h = c.cohomology();
        let dims = c.dims();
        let ranks = c.ranks();
        for p in 0..dims.len() {
            let incoming = if p == 0 { 0 } else { ranks[p - 1] };
            let outgoing = ranks.get(p).copied().unwrap_or(0);
            prop_assert_eq!(h[p], dims[p] - outgoing - incoming);
        }
    }

    /// `ω = dη + π^*α` with `α` a closed form free of t: the homotopy
    /// returns a primitive of `ω - ω|_{t=0}` up to t-order N.
    #[test]
    fn poincare_round_trip(eta in prop::collection::vec(terms(3, 3, 3), 3), zeta in terms(3, 3, 3), n in 1u32..=4) {
        let r = qring(&["x", "y", "t"]);
        let mut e = Form::zero(&r);
        for (k, c) in eta.iter().enumerate() {
            e = e.add(&Form::basic(build(&r, c), &[k]));
        }
        let alpha = Form::function(build(&r, &zeta).substitute(2, &Polynomial::zero(&r))).d();
        let omega = e.d().add(&alpha);
        let prim = formal_integrate(&omega, 2, n).unwrap();
        let truncate = |f: &Form<_>| f.map_coeffs(|c| c.truncate(&[2], n));
        let at_zero = Form::zero(&r).add(&omega).map_coeffs(|c| c.substitute(2, &Polynomial::zero(&r)));
        let mut restricted = Form::zero(&r);
        for (idx, c) in at_zero.comps() {
            if !idx.contains(&2) {
                restricted = restricted.add(&Form::basic(c.clone(), idx));
            }
        }
        prop_assert_eq!(truncate(&prim.d()), truncate(&omega).sub(&restricted));
    }
}

#[test]
fn integration_examples() {
    let r = qring(&["y", "t"]);
    let f = |s: &str| poly(&r, s);
    let t_dt = Form::basic(f("t"), &[1]);
    assert_eq!(formal_integrate(&t_dt, 1, 3).unwrap(), Form::function(f("1/2*t^2")));
    let closed = Form::basic(f("y"), &[1]).add(&Form::basic(f("t"), &[0]));
    assert_eq!(formal_integrate(&closed, 1, 3).unwrap(), Form::function(f("t*y")));
    let not_closed = Form::basic(f("y"), &[1]);
    assert!(matches!(formal_integrate(&not_closed, 1, 3), Err(Error::NotClosed { .. })));
}

#[test]
fn stabilized_ranks_persist() {
    let r = qring(&["x", "y"]);
    for (g, expect) in [("y^2 - x^3", vec![1, 0, 0]), ("y^2 - x^3 - x^2", vec![1, 1, 0]), ("y", vec![1, 0, 0])] {
        let ideal = IdealBasis::new(&r, vec![poly(&r, g)], MonomialOrder::Grevlex).unwrap();
        let report = stabilized_cohomology(&ideal, 4, 10).unwrap();
        assert!(report.is_stable(), "{g}: {report:?}");
        assert_eq!(report.dims, expect, "{g}");
        let t = report.truncation;
        let further = cohomology_dims(&ideal, t.adic_order + 1, t.degree_cap + 4).unwrap();
        assert_eq!(further.dims, expect, "{g} past the reported window");
    }
}

#[test]
fn characteristic_zero_only() {
    let r = fpring(5, &["x", "y"]);
    let ideal = IdealBasis::new(&r, vec![poly(&r, "y")], MonomialOrder::Grevlex).unwrap();
    assert!(matches!(build_complex(&ideal, 2, 4), Err(Error::UnsupportedCharacteristic(_))));
}
