use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::poly::Monomial;

/// Monomial orders. `Lex` and `Grevlex` are user-selectable; the weighted
/// variant is used internally where a grading other than total degree must be
/// respected (tagged module encodings).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
    #[serde(skip)]
    WeightedGrevlex(Vec<u32>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps().cmp(b.exps()),
            MonomialOrder::Grevlex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| revlex_tiebreak(a, b)),
            MonomialOrder::WeightedGrevlex(w) => weighted(w, a)
                .cmp(&weighted(w, b))
                .then_with(|| a.degree().cmp(&b.degree()))
                .then_with(|| revlex_tiebreak(a, b)),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lex" => Some(MonomialOrder::Lex),
            "grevlex" => Some(MonomialOrder::Grevlex),
            _ => None,
        }
    }

    /// Degree used by the sugar strategy.
    pub fn sugar_degree(&self, m: &Monomial) -> u64 {
        match self {
            MonomialOrder::WeightedGrevlex(w) => weighted(w, m),
            _ => m.degree() as u64,
        }
    }
}

fn weighted(w: &[u32], m: &Monomial) -> u64 {
    m.exps()
        .iter()
        .zip(w)
        .map(|(&e, &wi)| e as u64 * wi as u64)
        .sum()
}

// last differing exponent: smaller one is the larger monomial
fn revlex_tiebreak(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exps().iter().zip(b.exps()).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn lex_and_grevlex() {
        // x > y^5 in lex, not in grevlex
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Less);
        // grevlex: x^2 z vs x y^2 (same degree): last var z exponent 1 > 0, so x^2 z smaller
        assert_eq!(
            MonomialOrder::Grevlex.cmp(&m(&[2, 0, 1]), &m(&[1, 2, 0])),
            Ordering::Less
        );
    }

    #[test]
    fn weighted_respects_weights() {
        let o = MonomialOrder::WeightedGrevlex(vec![2, 3]);
        // x^3 (weight 6) vs y^2 (weight 6): tie on weight, degree 3 > 2
        assert_eq!(o.cmp(&m(&[3, 0]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 1])), Ordering::Less);
    }
}
