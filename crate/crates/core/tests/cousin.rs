mod common;

use common::*;
use proptest::prelude::*;
use residua::cousin::{
    annihilator_check, delta, delta_components, delta_squared_check, eliminate_localization, trace_finite, trace_generic_direct,
    Cell, CousinClass, FiniteMorphismPresentation, RationalForm,
};
use residua::exactalg::{IdealBasis, MonomialOrder, Polynomial, RingRef};
use residua::forms::Form;
use residua::localcoh::{parse_fraction, DenominatorSystem, GenFraction};
use residua::residue::tate_residue_local;
use residua::{Field, Rational};

fn top<F: Field>(g: Polynomial<F>) -> Form<F> {
    let idx: Vec<usize> = (0..g.ring().nvars()).collect();
    Form::basic(g, &idx)
}

fn base_poly(r: &RingRef<Rational>, t: &Terms, keep: &[usize]) -> Polynomial<Rational> {
    let mut p = build(r, t);
    for v in 0..r.nvars() {
        if !keep.contains(&v) {
            p = p.substitute(v, &Polynomial::zero(r));
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `b` monic in x, `c` monic in y and free of x: a regular sequence in
    /// either order.
    #[test]
    fn delta_squares_to_zero(g in terms(3, 3, 4), hb in terms(3, 2, 2), hc in terms(3, 2, 2), db in 1u32..=2, dc in 1u32..=2, kb in 0u32..=2, kc in 0u32..=2) {
        let r = qring(&["x", "y", "z"]);
        let b = &Polynomial::var(&r, 0).pow(db) + &base_poly(&r, &hb, &[1, 2]);
        let c = &Polynomial::var(&r, 1).pow(dc) + &base_poly(&r, &hc, &[2]);
        let f = CousinClass::Generic(RationalForm::new(top(build(&r, &g)), vec![(b.clone(), kb), (c.clone(), kc)]).unwrap());
        prop_assert!(delta_squared_check(&f, &b, &c, false).unwrap());
        let step = delta(&f, &b, false).unwrap();
        prop_assert_eq!(step.codim(), f.codim() + 1);
        prop_assert_eq!(delta(&step, &c, false).unwrap().codim(), f.codim() + 2);
    }

    /// Classes of the parabola `y = x^2` stay in the subcomplex after δ at
    /// a point of the parabola.
    #[test]
    fn subscheme_classes_stay_annihilated(g in terms(2, 3, 4), k in 0u32..=3, a in -2i64..=2) {
        let r = qring(&["x", "y"]);
        let curve = poly(&r, "y - x^2");
        let ideal = IdealBasis::new(&r, vec![curve.clone()], MonomialOrder::Grevlex).unwrap();
        let xa = Polynomial::var(&r, 0) - Polynomial::int(&r, a);
        let frac = GenFraction::new(top(build(&r, &g)), DenominatorSystem::new(vec![curve]).unwrap(), vec![1])
            .unwrap()
            .with_loc(xa.clone(), k)
            .unwrap();
        let f = CousinClass::at_block(frac);
        prop_assert!(annihilator_check(&f, &ideal).unwrap());
        let d = delta(&f, &xa, false).unwrap();
        prop_assert!(annihilator_check(&d, &ideal).unwrap());
    }

    /// On the squaring map `s = t^2`, the X-class `[G ds∧dt/(t^2 - s)]`
    /// is the form `G/(2t) ds = G t/(2s) ds`, and `Tr(t^k)` is `2 s^{k/2}`
    /// for even `k` and 0 otherwise. Hence the trace is
    /// `Σ_{k odd} g_k s^{(k-1)/2} ds`.
    #[test]
    fn squaring_trace_matches_power_traces(g in terms(2, 4, 5)) {
        let r = qring(&["s", "t"]);
        let pres = FiniteMorphismPresentation::monogenic(poly(&r, "t^2 - s"), 1).unwrap();
        let g = build(&r, &g);
        let mut expect = Polynomial::zero(&r);
        for (k, gk) in g.coefficients_in(1).iter().enumerate() {
            if k % 2 == 1 {
                expect = expect + &(gk * &Polynomial::var(&r, 0).pow((k as u32 - 1) / 2));
            }
        }
        let frac = GenFraction::new(top(g), DenominatorSystem::new(vec![poly(&r, "t^2 - s")]).unwrap(), vec![1]).unwrap();
        let class = CousinClass::at_block(frac);
        let expect = RationalForm::new(Form::basic(expect, &[0]), vec![]).unwrap();
        let CousinClass::Generic(tr) = trace_finite(&pres, &class).unwrap() else { panic!("generic trace expected") };
        prop_assert!(tr.equals(&expect));
        prop_assert!(trace_generic_direct(&pres, &class).unwrap().equals(&expect));
    }
}

#[test]
fn partial_fractions_on_the_line() {
    let r = qring(&["t"]);
    let f = CousinClass::Generic(RationalForm::new(top(poly(&r, "1")), vec![(poly(&r, "t^2 - t"), 1)]).unwrap());
    let parts = delta_components(&f, &[], false).unwrap();
    let mut residues = Vec::new();
    for c in &parts {
        let c = eliminate_localization(c).unwrap();
        let frac = c.as_fraction().unwrap();
        let q = frac.denom().gens()[0].clone();
        residues.push((q.to_string(), tate_residue_local(&frac.numer().comp(&[0]), &q, frac.exps()[0], 0).unwrap().to_string()));
    }
    residues.sort();
    assert_eq!(residues, vec![("t".to_string(), "-1".to_string()), ("t - 1".to_string(), "1".to_string())]);
}

#[test]
fn plane_chain() {
    let r = qring(&["x", "y"]);
    let f = CousinClass::at_block(parse_fraction(&r, "[1 / (x)] * y^-1", &[0, 1]).unwrap());
    let d = delta(&f, &poly(&r, "y"), false).unwrap();
    let expect = CousinClass::local(
        Cell::new(vec![vec![poly(&r, "x")], vec![poly(&r, "y")]]),
        parse_fraction(&r, "[1 / (x, y)]", &[0, 1]).unwrap(),
    )
    .unwrap();
    assert!(d.equals(&expect).unwrap());
    let regular = CousinClass::at_block(parse_fraction(&r, "[y / (x)]", &[0, 1]).unwrap());
    assert!(delta(&regular, &poly(&r, "y"), false).unwrap().is_zero().unwrap());
}

#[test]
fn annihilator_examples() {
    let r = qring(&["x", "y"]);
    let f = CousinClass::at_block(parse_fraction(&r, "[1 / (x, y)]", &[0, 1]).unwrap());
    let ideal = |g: &str| IdealBasis::new(&r, vec![poly(&r, g)], MonomialOrder::Grevlex).unwrap();
    assert!(annihilator_check(&f, &ideal("y^2 - x^3")).unwrap());
    assert!(!annihilator_check(&f, &ideal("x - 1")).unwrap());
}
