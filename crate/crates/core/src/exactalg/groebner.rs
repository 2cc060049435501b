//! Buchberger's algorithm with the sugar selection strategy, the coprime
//! (product) criterion and the chain criterion.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::order::MonomialOrder;
use super::poly::{same_ring, Monomial, Polynomial, RingRef};

type Terms<F> = Vec<(Monomial, F)>;

fn to_sorted<F: Field>(p: &Polynomial<F>, order: &MonomialOrder) -> Terms<F> {
    let mut t: Terms<F> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

fn from_sorted<F: Field>(ring: &RingRef<F>, t: Terms<F>) -> Polynomial<F> {
    Polynomial::from_terms(ring, t)
}

/// `a - c * m * b`, both inputs sorted descending.
fn sub_mul<F: Field>(a: &[(Monomial, F)], c: &F, m: &Monomial, b: &[(Monomial, F)], order: &MonomialOrder) -> Terms<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() {
            out.extend_from_slice(&a[i..]);
            break;
        }
        let bm = m.mul(&b[j].0);
        if i == a.len() {
            out.push((bm, -(b[j].1.clone() * c)));
            j += 1;
            continue;
        }
        match order.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, -(b[j].1.clone() * c)));
                j += 1;
            }
            Ordering::Equal => {
                let s = a[i].1.clone() - b[j].1.clone() * c;
                if !s.is_zero() {
                    out.push((bm, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn make_monic<F: Field>(t: &mut Terms<F>) -> Option<F> {
    let inv = t.first()?.1.inv().expect("nonzero leading coefficient");
    for (_, c) in t.iter_mut() {
        *c = c.clone() * &inv;
    }
    Some(inv)
}

struct Elem<F: Field> {
    terms: Terms<F>,
    sugar: u64,
    cof: Option<Vec<Polynomial<F>>>,
}

impl<F: Field> Elem<F> {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

fn combine_cof<F: Field>(a: &mut Option<Vec<Polynomial<F>>>, c: &F, m: &Monomial, b: &Option<Vec<Polynomial<F>>>) {
    if let (Some(a), Some(b)) = (a.as_mut(), b.as_ref()) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = x.clone() - y.mul_monomial(m, c);
        }
    }
}

/// Full reduction of `(terms, cof)` by `basis`; returns the remainder.
fn reduce_full<F: Field>(
    mut terms: Terms<F>,
    mut cof: Option<Vec<Polynomial<F>>>,
    basis: &[Elem<F>],
    skip: Option<usize>,
    order: &MonomialOrder,
) -> (Terms<F>, Option<Vec<Polynomial<F>>>) {
    let mut rem: Terms<F> = Vec::new();
    while let Some((lm, lc)) = terms.first().cloned() {
        let div = basis
            .iter()
            .enumerate()
            .find(|(k, g)| Some(*k) != skip && !g.terms.is_empty() && g.lm().divides(&lm));
        match div {
            Some((_, g)) => {
                let q = g.lm().quotient_of(&lm);
                let c = lc * g.terms[0].1.inv().unwrap();
                terms = sub_mul(&terms, &c, &q, &g.terms, order);
                combine_cof(&mut cof, &c, &q, &g.cof);
            }
            None => {
                rem.push(terms.remove(0));
            }
        }
    }
    (rem, cof)
}

/// Options for [`buchberger`].
#[derive(Debug, Clone, Default)]
pub struct GroebnerOptions {
    /// Abort when an intermediate basis element exceeds this total degree.
    pub max_degree: Option<u32>,
    /// Track each basis element as a combination of the input generators.
    pub track_cofactors: bool,
}

/// Reduced Gröbner basis, optionally with cofactors expressing every basis
/// element through the input generators.
#[derive(Debug, Clone)]
pub struct GroebnerResult<F: Field> {
    pub basis: Vec<Polynomial<F>>,
    pub cofactors: Option<Vec<Vec<Polynomial<F>>>>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u64,
}

pub fn buchberger<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    order: &MonomialOrder,
    opts: &GroebnerOptions,
) -> Result<GroebnerResult<F>> {
    for g in gens {
        if !same_ring(g.ring(), ring) {
            return Err(Error::RingMismatch(format!(
                "generator {g} does not live in {:?}",
                ring.vars()
            )));
        }
    }
    let ngens = gens.len();
    let check_degree = |t: &Terms<F>| -> Result<()> {
        if let Some(limit) = opts.max_degree {
            let d = t.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
            if d > limit {
                return Err(Error::DegreeLimit { limit, degree: d });
            }
        }
        Ok(())
    };

    let mut basis: Vec<Elem<F>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let insert = |basis: &mut Vec<Elem<F>>, pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>, e: Elem<F>| {
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let lcm = g.lm().lcm(e.lm());
            let si = g.sugar + order.sugar_degree(&g.lm().quotient_of(&lcm));
            let sk = e.sugar + order.sugar_degree(&e.lm().quotient_of(&lcm));
            pairs.push(Pair { i, j: k, lcm, sugar: si.max(sk) });
            pending.insert((i, k));
        }
        basis.push(e);
    };

    for (idx, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let terms = to_sorted(g, order);
        let cof = opts.track_cofactors.then(|| {
            (0..ngens)
                .map(|k| if k == idx { Polynomial::one(ring) } else { Polynomial::zero(ring) })
                .collect::<Vec<_>>()
        });
        let (mut terms, mut cof) = reduce_full(terms, cof, &basis, None, order);
        if terms.is_empty() {
            continue;
        }
        check_degree(&terms)?;
        let inv = make_monic(&mut terms).unwrap();
        if let Some(c) = cof.as_mut() {
            for x in c.iter_mut() {
                *x = x.scale(&inv);
            }
        }
        let sugar = terms.iter().map(|(m, _)| order.sugar_degree(m)).max().unwrap_or(0);
        insert(&mut basis, &mut pairs, &mut pending, Elem { terms, sugar, cof });
    }

    while !pairs.is_empty() {
        // lowest sugar, then smallest lcm
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a]
                    .sugar
                    .cmp(&pairs[b].sugar)
                    .then_with(|| order.cmp(&pairs[a].lcm, &pairs[b].lcm))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));
        let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
        if gi.lm().is_coprime(gj.lm()) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && basis[k].lm().divides(&pair.lcm)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }
        let qi = gi.lm().quotient_of(&pair.lcm);
        let qj = gj.lm().quotient_of(&pair.lcm);
        let one = gi.terms[0].1.one_like();
        let minus_one = -one.clone();
        let s = sub_mul(&[], &minus_one, &qi, &gi.terms, order);
        let s = sub_mul(&s, &one, &qj, &gj.terms, order);
        let cof = if opts.track_cofactors {
            let mut c: Option<Vec<Polynomial<F>>> = Some(vec![Polynomial::zero(ring); ngens]);
            combine_cof(&mut c, &minus_one, &qi, &gi.cof);
            combine_cof(&mut c, &one, &qj, &gj.cof);
            c
        } else {
            None
        };
        let (mut terms, mut cof) = reduce_full(s, cof, &basis, None, order);
        if terms.is_empty() {
            continue;
        }
        check_degree(&terms)?;
        let inv = make_monic(&mut terms).unwrap();
        if let Some(c) = cof.as_mut() {
            for x in c.iter_mut() {
                *x = x.scale(&inv);
            }
        }
        insert(&mut basis, &mut pairs, &mut pending, Elem { terms, sugar: pair.sugar, cof });
    }

    // minimalize
    let n = basis.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && keep[j] && basis[j].lm().divides(basis[i].lm()) && (basis[j].lm() != basis[i].lm() || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Elem<F>> = basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();
    // interreduce tails
    for i in 0..minimal.len() {
        let head = minimal[i].terms[0].clone();
        let tail: Terms<F> = minimal[i].terms[1..].to_vec();
        let cof = minimal[i].cof.take();
        let (rem, cof) = reduce_full(tail, cof.map(|c| c.into_iter().collect()), &minimal, Some(i), order);
        // the head contributes unchanged; cofactors were already for the full element
        let mut terms = vec![head];
        terms.extend(rem);
        minimal[i].terms = terms;
        minimal[i].cof = cof;
    }
    minimal.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    let cofactors = opts
        .track_cofactors
        .then(|| minimal.iter().map(|e| e.cof.clone().unwrap()).collect());
    let basis = minimal.into_iter().map(|e| from_sorted(ring, e.terms)).collect();
    Ok(GroebnerResult { basis, cofactors })
}

/// Normal form of `f` modulo `basis` together with the division quotients:
/// `f = sum(quotients[k] * basis[k]) + remainder`.
pub fn reduce<F: Field>(
    f: &Polynomial<F>,
    basis: &[Polynomial<F>],
    order: &MonomialOrder,
) -> (Polynomial<F>, Vec<Polynomial<F>>) {
    let ring = f.ring();
    let sorted: Vec<Terms<F>> = basis.iter().map(|g| to_sorted(g, order)).collect();
    let mut quots = vec![Polynomial::zero(ring); basis.len()];
    let mut terms = to_sorted(f, order);
    let mut rem: Terms<F> = Vec::new();
    while let Some((lm, lc)) = terms.first().cloned() {
        let div = sorted.iter().position(|g| !g.is_empty() && g[0].0.divides(&lm));
        match div {
            Some(k) => {
                let g = &sorted[k];
                let q = g[0].0.quotient_of(&lm);
                let c = lc * g[0].1.inv().unwrap();
                terms = sub_mul(&terms, &c, &q, g, order);
                quots[k].add_term(q, c);
            }
            None => rem.push(terms.remove(0)),
        }
    }
    (from_sorted(ring, rem), quots)
}

/// Checks the Buchberger criterion: every S-polynomial reduces to zero.
pub fn is_groebner<F: Field>(basis: &[Polynomial<F>], order: &MonomialOrder) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (a, b) = (&basis[i], &basis[j]);
            let (Some((ma, ca)), Some((mb, cb))) = (a.leading_term(order), b.leading_term(order)) else {
                continue;
            };
            let l = ma.lcm(mb);
            let s = a.mul_monomial(&ma.quotient_of(&l), &ca.inv().unwrap())
                - b.mul_monomial(&mb.quotient_of(&l), &cb.inv().unwrap());
            if !reduce(&s, basis, order).0.is_zero() {
                return false;
            }
        }
    }
    true
}

/// An ideal given by generators, with its reduced Gröbner basis computed on
/// first use and cached.
#[derive(Debug)]
pub struct IdealBasis<F: Field> {
    ring: RingRef<F>,
    generators: Vec<Polynomial<F>>,
    order: MonomialOrder,
    groebner: OnceLock<Vec<Polynomial<F>>>,
}

impl<F: Field> Clone for IdealBasis<F> {
    fn clone(&self) -> Self {
        let cell = OnceLock::new();
        if let Some(g) = self.groebner.get() {
            let _ = cell.set(g.clone());
        }
        IdealBasis {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            order: self.order.clone(),
            groebner: cell,
        }
    }
}

impl<F: Field> IdealBasis<F> {
    pub fn new(ring: &RingRef<F>, generators: Vec<Polynomial<F>>, order: MonomialOrder) -> Result<Self> {
        for g in &generators {
            if !same_ring(g.ring(), ring) {
                return Err(Error::RingMismatch(format!("generator {g} not in ideal ring")));
            }
        }
        Ok(IdealBasis { ring: ring.clone(), generators, order, groebner: OnceLock::new() })
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Reduced Gröbner basis (computed once).
    pub fn groebner(&self) -> &[Polynomial<F>] {
        self.groebner.get_or_init(|| {
            buchberger(&self.ring, &self.generators, &self.order, &GroebnerOptions::default())
                .expect("generators checked at construction")
                .basis
        })
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.groebner().iter().any(|g| g.is_one())
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        reduce(f, self.groebner(), &self.order).0
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis<F: Field>(ring: &RingRef<F>, gens: &[Polynomial<F>], order: MonomialOrder) -> Result<IdealBasis<F>> {
    let ideal = IdealBasis::new(ring, gens.to_vec(), order)?;
    let gb = buchberger(ring, gens, &ideal.order, &GroebnerOptions::default())?;
    let _ = ideal.groebner.set(gb.basis);
    Ok(ideal)
}

/// Whether `f` lies in the ideal.
pub fn ideal_member<F: Field>(f: &Polynomial<F>, ideal: &IdealBasis<F>) -> Result<bool> {
    if !same_ring(f.ring(), ideal.ring()) {
        return Err(Error::RingMismatch(format!("{f} is not in the ideal's ring")));
    }
    Ok(ideal.normal_form(f).is_zero())
}

/// Membership with a witness: cofactors `c` with `f = sum(c[k] * generators[k])`.
pub fn membership_cofactors<F: Field>(f: &Polynomial<F>, ideal: &IdealBasis<F>) -> Result<Option<Vec<Polynomial<F>>>> {
    if !same_ring(f.ring(), ideal.ring()) {
        return Err(Error::RingMismatch(format!("{f} is not in the ideal's ring")));
    }
    let opts = GroebnerOptions { max_degree: None, track_cofactors: true };
    let gb = buchberger(ideal.ring(), ideal.generators(), ideal.order(), &opts)?;
    let (rem, quots) = reduce(f, &gb.basis, ideal.order());
    if !rem.is_zero() {
        return Ok(None);
    }
    let ring = ideal.ring();
    let mut out = vec![Polynomial::zero(ring); ideal.generators().len()];
    for (q, cof) in quots.iter().zip(gb.cofactors.as_ref().unwrap()) {
        for (o, c) in out.iter_mut().zip(cof) {
            *o = o.clone() + &(q * c);
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Ring;
    use crate::scalar::{PrimeField, Rational, RationalField};

    fn qring(vars: &[&str]) -> RingRef<Rational> {
        Ring::new(vars, RationalField).unwrap()
    }

    #[test]
    fn already_reduced() {
        let r = qring(&["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let i = groebner_basis(&r, &[x.pow(2), y.clone()], MonomialOrder::Grevlex).unwrap();
        assert_eq!(i.groebner(), &[x.pow(2), y][..]);
    }

    #[test]
    fn linear_elimination() {
        let r = qring(&["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let i = groebner_basis(&r, &[&x + &y, &x - &y], MonomialOrder::Grevlex).unwrap();
        assert_eq!(i.groebner(), &[x, y][..]);
    }

    #[test]
    fn cusp_lex_contains_x_cubed() {
        // variables ordered y > x for lex
        let r = qring(&["y", "x"]);
        let y = Polynomial::var(&r, 0);
        let x = Polynomial::var(&r, 1);
        let i = groebner_basis(&r, &[&y.pow(2) - &x.pow(3), &y * &x], MonomialOrder::Lex).unwrap();
        assert!(i.groebner().contains(&x.pow(4)) || ideal_member(&x.pow(4), &i).unwrap());
        // x * (y^2 - x^3) - y * (x y) = -x^4
        assert!(ideal_member(&x.pow(4), &i).unwrap());
        assert!(!ideal_member(&x.pow(3), &i).unwrap());
        assert!(is_groebner(i.groebner(), &MonomialOrder::Lex));
    }

    #[test]
    fn membership_examples() {
        let r = qring(&["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let ix = groebner_basis(&r, &[x.clone()], MonomialOrder::Grevlex).unwrap();
        assert!(ideal_member(&x.pow(2), &ix).unwrap());
        let m = groebner_basis(&r, &[x.pow(2), y.pow(2)], MonomialOrder::Grevlex).unwrap();
        assert!(!ideal_member(&(&x * &y), &m).unwrap());
        assert!(ideal_member(&Polynomial::zero(&r), &m).unwrap());
    }

    #[test]
    fn ring_mismatch() {
        let r = qring(&["x", "y"]);
        let s = qring(&["x", "z"]);
        let err = groebner_basis(&r, &[Polynomial::var(&r, 0), Polynomial::var(&s, 1)], MonomialOrder::Grevlex);
        assert!(matches!(err, Err(Error::RingMismatch(_))));
        let i = groebner_basis(&r, &[Polynomial::var(&r, 0)], MonomialOrder::Grevlex).unwrap();
        assert!(ideal_member(&Polynomial::var(&s, 1), &i).is_err());
    }

    #[test]
    fn cofactors_reassemble() {
        let r = qring(&["x", "y", "z"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let z = Polynomial::var(&r, 2);
        let gens = vec![&(&x * &y) - &z, &y.pow(2) - &x, &(&z * &x) - &Polynomial::one(&r)];
        let ideal = IdealBasis::new(&r, gens.clone(), MonomialOrder::Grevlex).unwrap();
        let f = &(&gens[0] * &z.pow(2)) + &(&gens[2] * &y);
        let cof = membership_cofactors(&f, &ideal).unwrap().unwrap();
        let mut acc = Polynomial::zero(&r);
        for (c, g) in cof.iter().zip(&gens) {
            acc = acc + &(c * g);
        }
        assert_eq!(acc, f);
    }

    #[test]
    fn degree_cap() {
        let r = qring(&["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let opts = GroebnerOptions { max_degree: Some(3), track_cofactors: false };
        let res = buchberger(&r, &[&x.pow(3) - &y, &(&x * &y) - &Polynomial::one(&r)], &MonomialOrder::Lex, &opts);
        assert!(matches!(res, Err(Error::DegreeLimit { .. })));
    }

    #[test]
    fn prime_field_basis() {
        let r: RingRef<crate::scalar::Fp> = Ring::new(&["x", "y"], PrimeField::new(7).unwrap()).unwrap();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let i = groebner_basis(&r, &[&x + &y, &x - &y], MonomialOrder::Lex).unwrap();
        assert_eq!(i.groebner().len(), 2);
        let r2: RingRef<crate::scalar::Fp> = Ring::new(&["x", "y"], PrimeField::new(2).unwrap()).unwrap();
        let x = Polynomial::var(&r2, 0);
        let y = Polynomial::var(&r2, 1);
        // char 2: x + y and x - y coincide
        let i = groebner_basis(&r2, &[&x + &y, &x - &y], MonomialOrder::Lex).unwrap();
        assert_eq!(i.groebner().len(), 1);
    }
}
