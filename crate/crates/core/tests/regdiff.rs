mod common;

use common::*;
use proptest::prelude::*;
use residua::cousin::FiniteMorphismPresentation;
use residua::exactalg::Polynomial;
use residua::regdiff::{is_regular_differential, regdiff_generators, trace_gram, MeromorphicForm};
use residua::residue::MonicPresentation;
use residua::Rational;

fn presentation(lower: &[Terms], e: u32) -> MonicPresentation<Rational> {
    let r = qring(&["x", "y"]);
    let lower: Vec<_> = lower.iter().map(|c| build(&r, c).substitute(1, &Polynomial::zero(&r))).collect();
    MonicPresentation::new(monic_in(&r, 1, e, &lower), 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `Tr(y^k)` by Newton's identities against the trace of the
    /// multiplication matrix on the basis `1, y, ..., y^{e-1}`.
    #[test]
    fn gram_matches_multiplication_traces(lower in prop::collection::vec(terms(2, 3, 2), 4), e in 1u32..=4) {
        let pres = presentation(&lower, e);
        let fm = FiniteMorphismPresentation::monogenic(pres.p().clone(), 1).unwrap();
        let gram = trace_gram(&pres);
        let y = Polynomial::var(pres.ring(), 1);
        for i in 0..e as usize {
            for j in 0..e as usize {
                let m = fm.mul_matrix(&y.pow((i + j) as u32)).unwrap();
                let mut tr = Polynomial::zero(pres.ring());
                for (k, row) in m.iter().enumerate() {
                    tr = tr + &row[k];
                }
                prop_assert_eq!(&gram.matrix[i][j], &tr);
            }
        }
    }

    #[test]
    fn regular_differentials_form_a_module(lower in prop::collection::vec(terms(2, 3, 2), 3), e in 2u32..=3, b in terms(2, 3, 3)) {
        let pres = presentation(&lower, e);
        prop_assume!(!trace_gram(&pres).degenerate);
        let module = regdiff_generators(&pres).unwrap();
        let b = build(pres.ring(), &b);
        for beta in &module.generators {
            let moved = beta.scale(&b);
            prop_assert!(is_regular_differential(&pres, &moved).unwrap().regular);
            prop_assert!(module.contains(&moved).unwrap());
        }
        let dx = MeromorphicForm::regular(Polynomial::one(pres.ring()));
        prop_assert!(is_regular_differential(&pres, &dx).unwrap().regular);
        prop_assert!(module.contains(&dx).unwrap());
    }
}

#[test]
fn cusp_examples() {
    let r = qring(&["x", "y"]);
    let pres = MonicPresentation::new(poly(&r, "y^2 - x^3"), 1).unwrap();
    let gram = trace_gram(&pres);
    assert_eq!(gram.matrix, vec![vec![poly(&r, "2"), poly(&r, "0")], vec![poly(&r, "0"), poly(&r, "2*x^3")]]);
    let form = |g: &str, h: &str| MeromorphicForm::new(poly(&r, g), poly(&r, h)).unwrap();
    assert!(is_regular_differential(&pres, &form("1", "y")).unwrap().regular);
    assert!(!is_regular_differential(&pres, &form("1", "y^2")).unwrap().regular);
}

#[test]
fn inseparable_presentations_are_rejected() {
    let r = fpring(2, &["x", "y"]);
    let pres = MonicPresentation::new(poly(&r, "y^2 - x"), 1).unwrap();
    assert!(trace_gram(&pres).degenerate);
    assert!(regdiff_generators(&pres).is_err());
}
