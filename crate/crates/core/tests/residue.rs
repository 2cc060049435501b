mod common;

use common::*;
use proptest::prelude::*;
use residua::exactalg::Polynomial;
use residua::residue::{
    global_residue, hensel_factor, residue_fiber_decompose, tate_residue_iterated, tate_residue_local, verify_hensel,
    LocalPoint, MonicPresentation,
};
use residua::{Field, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_is_linear(f in terms(2, 5, 5), g in terms(2, 5, 5), lower in prop::collection::vec(terms(2, 1, 2), 3), d in 1u32..=3, i in 1u32..=3, a in -5i64..=5, b in -5i64..=5) {
        let r = fpring(7, &["x", "t"]);
        let lower: Vec<_> = lower.iter().map(|c| build(&r, c).substitute(1, &Polynomial::zero(&r))).collect();
        let qq = monic_in(&r, 1, d, &lower);
        let (f, g) = (build(&r, &f), build(&r, &g));
        let (ca, cb) = (Polynomial::int(&r, a), Polynomial::int(&r, b));
        let lhs = tate_residue_local(&(&(&ca * &f) + &(&cb * &g)), &qq, i, 1).unwrap();
        let rhs = &(&ca * &tate_residue_local(&f, &qq, i, 1).unwrap()) + &(&cb * &tate_residue_local(&g, &qq, i, 1).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rescaling_by_a_monic_factor(f in terms(2, 5, 5), lq in prop::collection::vec(terms(2, 1, 2), 3), lr in prop::collection::vec(terms(2, 1, 2), 3), dq in 1u32..=3, dr in 1u32..=2, i in 1u32..=3) {
        let r = qring(&["x", "t"]);
        let base = |v: &Vec<Terms>| -> Vec<Polynomial<Rational>> { v.iter().map(|c| build(&r, c).substitute(1, &Polynomial::zero(&r))).collect() };
        let qq = monic_in(&r, 1, dq, &base(&lq));
        let rr = monic_in(&r, 1, dr, &base(&lr));
        let f = build(&r, &f);
        let a = tate_residue_local(&f, &qq, i, 1).unwrap();
        let b = tate_residue_local(&(&f * &rr.pow(i)), &(&qq * &rr), i, 1).unwrap();
        prop_assert_eq!(a, b);
    }

    /// For distinct rational roots `a_k` and `i = 1`, the residue is
    /// `Σ f(a_k) / Π_{l≠k} (a_k - a_l)`.
    #[test]
    fn partial_fraction_oracle(f in terms(1, 6, 5), roots in prop::collection::btree_set(-6i64..=6, 1..=4)) {
        let r = qring(&["t"]);
        let roots: Vec<i64> = roots.into_iter().collect();
        let mut qq = Polynomial::one(&r);
        for a in &roots {
            qq = &qq * &(Polynomial::var(&r, 0) - Polynomial::int(&r, *a));
        }
        let f = build(&r, &f);
        let mut expect = q(0);
        for (k, a) in roots.iter().enumerate() {
            let mut denom = q(1);
            for (l, b) in roots.iter().enumerate() {
                if l != k {
                    denom = denom * q(a - b);
                }
            }
            expect = expect + f.eval(&[q(*a)]) * denom.inv().unwrap();
        }
        prop_assert_eq!(tate_residue_local(&f, &qq, 1, 0).unwrap(), Polynomial::constant(&r, expect));
    }

    #[test]
    fn low_degree_numerators_have_no_residue(f in terms(1, 6, 5), lower in prop::collection::vec(-5i64..=5, 6), e in 2u32..=6) {
        let r = qring(&["t"]);
        let lower: Vec<_> = lower.iter().map(|c| Polynomial::int(&r, *c)).collect();
        let pres = MonicPresentation::new(monic_in(&r, 0, e, &lower), 0).unwrap();
        let f = build(&r, &f).truncate(&[0], e - 1);
        prop_assert!(global_residue(&pres, &f, 1).unwrap().is_zero());
    }

    #[test]
    fn split_fibers_sum_to_the_global_residue(roots in prop::collection::btree_set(-3i64..=3, 1..=3), h in terms(2, 2, 3), f in terms(2, 4, 4), i in 1u32..=2, n in 1u32..=6) {
        let r = qring(&["x", "t"]);
        let mut p = Polynomial::one(&r);
        for a in &roots {
            p = &p * &(Polynomial::var(&r, 1) - Polynomial::int(&r, *a));
        }
        let e = roots.len() as u32;
        let h = build(&r, &h).truncate(&[1], e);
        let p = p + &Polynomial::var(&r, 0) * &h;
        let pres = MonicPresentation::new(p.clone(), 1).unwrap();
        let point = LocalPoint::origin(&r, vec![0]);
        let dec = residue_fiber_decompose(&pres, &point, &build(&r, &f), i, n, None).unwrap();
        prop_assert_eq!(dec.locals.len(), roots.len());
        prop_assert!(verify_hensel(&p, &point, &dec.hensel));
        prop_assert!(dec.sums_to_global(&point));
    }
}

#[test]
fn square_root_of_one_plus_x() {
    let r = qring(&["x", "t"]);
    let point = LocalPoint::origin(&r, vec![0]);
    let p = poly(&r, "t^2 - 1 - x");
    let seeds = [poly(&r, "t - 1"), poly(&r, "t + 1")];
    let h = hensel_factor(&p, 1, &point, Some(&seeds), 3).unwrap();
    assert!(verify_hensel(&p, &point, &h));
    // binomial series of sqrt(1 + x) to order 3
    let root = poly(&r, "1 + 1/2*x - 1/8*x^2");
    assert_eq!(h.factors[0], poly(&r, "t") - &root);
    assert_eq!(h.factors[1], poly(&r, "t") + &root);
    // the residue of dt / (t^2 - 1 - x) vanishes; so do the local pieces
    let pres = MonicPresentation::new(p, 1).unwrap();
    let dec = residue_fiber_decompose(&pres, &point, &poly(&r, "1"), 1, 4, None).unwrap();
    assert!(dec.global.is_zero());
    assert!(dec.sums_to_global(&point));
}

#[test]
fn iterated_residues() {
    let r = qring(&["a", "b"]);
    let qs = [poly(&r, "a^2 - 1"), poly(&r, "b - a")];
    assert!(tate_residue_iterated(&poly(&r, "a*b"), &qs, &[1, 1], &[0, 1]).unwrap().is_zero());
    let corner = [poly(&r, "a^2 + 3"), poly(&r, "b^3 - a*b")];
    assert!(tate_residue_iterated(&poly(&r, "a*b^2"), &corner, &[1, 1], &[0, 1]).unwrap().is_one());
    // the inner generator may not involve the outer variable's successor
    let bad = [poly(&r, "a - b"), poly(&r, "b")];
    assert!(tate_residue_iterated(&poly(&r, "1"), &bad, &[1, 1], &[0, 1]).is_err());
}
