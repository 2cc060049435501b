#![allow(dead_code)]

use proptest::prelude::*;
use residua::exactalg::{parse_poly, Monomial, Polynomial, Ring, RingRef};
use residua::{Field, Fp, PrimeField, Rational, RationalField};

pub fn qring(vars: &[&str]) -> RingRef<Rational> {
    Ring::<Rational>::new(vars, RationalField).unwrap()
}

pub fn fpring(p: u64, vars: &[&str]) -> RingRef<Fp> {
    Ring::<Fp>::new(vars, PrimeField::new(p).unwrap()).unwrap()
}

pub fn poly<F: Field>(ring: &RingRef<F>, s: &str) -> Polynomial<F> {
    parse_poly(ring, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Raw terms: exponent vectors with small integer coefficients.
pub type Terms = Vec<(Vec<u32>, i64)>;

pub fn terms(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), -6i64..=6), 0..=max_terms)
}

pub fn build<F: Field>(ring: &RingRef<F>, t: &Terms) -> Polynomial<F> {
    let mut p = Polynomial::zero(ring);
    for (e, c) in t {
        p = p + Polynomial::monomial(ring, Monomial::new(e.clone()), ring.int(*c));
    }
    p
}

/// `t^deg + Σ c_k(rest) t^k` with the lower coefficients taken from `lower`.
pub fn monic_in<F: Field>(ring: &RingRef<F>, t: usize, deg: u32, lower: &[Polynomial<F>]) -> Polynomial<F> {
    let tv = Polynomial::var(ring, t);
    let mut p = tv.pow(deg);
    for (k, c) in lower.iter().enumerate().take(deg as usize) {
        p = p + &(c * &tv.pow(k as u32));
    }
    p
}
