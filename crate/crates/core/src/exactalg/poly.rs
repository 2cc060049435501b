//! Sparse multivariate polynomials over an exact [`Field`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{CoefField, Field};

use super::order::MonomialOrder;

/// Exponent vector, one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A polynomial ring `k[x_1, ..., x_n]`: variable names plus field context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring<F: Field> {
    vars: Vec<String>,
    ctx: F::Ctx,
}

pub type RingRef<F> = Arc<Ring<F>>;

fn valid_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(vars: &[S], ctx: F::Ctx) -> Result<RingRef<F>> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_ident(v) {
                return Err(Error::Parse { offset: 0, message: format!("bad variable name `{v}`") });
            }
            if vars[..i].contains(v) {
                return Err(Error::Parse { offset: 0, message: format!("duplicate variable `{v}`") });
            }
        }
        Ok(Arc::new(Ring { vars, ctx }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn field(&self) -> CoefField {
        F::describe(&self.ctx)
    }

    pub fn characteristic(&self) -> u64 {
        F::characteristic(&self.ctx)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero_coef(&self) -> F {
        F::zero(&self.ctx)
    }

    pub fn one_coef(&self) -> F {
        F::one(&self.ctx)
    }

    pub fn int(&self, n: i64) -> F {
        F::from_i64(&self.ctx, n)
    }

    /// A ring with the same field and `extra` variables appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<RingRef<F>> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Ring::new(&vars, self.ctx.clone())
    }

    /// Fresh variable name not clashing with existing ones.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 0;
        while self.vars.contains(&name) {
            k += 1;
            name = format!("{base}{k}");
        }
        name
    }
}

pub fn same_ring<F: Field>(a: &RingRef<F>, b: &RingRef<F>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Canonical sparse polynomial; terms are keyed by exponent vector and no
/// stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    ring: RingRef<F>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &RingRef<F>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &RingRef<F>) -> Self {
        Self::constant(ring, ring.one_coef())
    }

    pub fn constant(ring: &RingRef<F>, c: F) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn int(ring: &RingRef<F>, n: i64) -> Self {
        Self::constant(ring, ring.int(n))
    }

    pub fn var(ring: &RingRef<F>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), ring.one_coef())
    }

    pub fn var_named(ring: &RingRef<F>, name: &str) -> Result<Self> {
        ring.var_index(name)
            .map(|i| Self::var(ring, i))
            .ok_or_else(|| Error::RingMismatch(format!("no variable `{name}` in ring")))
    }

    pub fn monomial(ring: &RingRef<F>, m: Monomial, c: F) -> Self {
        debug_assert_eq!(m.exps().len(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(ring: &RingRef<F>, it: I) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero_coef())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one(self.ring.nvars())))
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps()[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exps()[var] > 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn assert_same_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring.vars(),
                other.ring.vars()
            )))
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone() * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &F)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of
    /// `var^k`, itself a polynomial free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let deg = match self.degree_in(var) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = vec![Self::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps()[var] as usize;
            let mut e = m.exps().to_vec();
            e[var] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    pub fn coeff_in(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.exps()[var] == k {
                let mut e = m.exps().to_vec();
                e[var] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    pub fn from_coefficients_in(ring: &RingRef<F>, var: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut e = m.exps().to_vec();
                e[var] += k as u32;
                out.add_term(Monomial(e), a.clone());
            }
        }
        out
    }

    /// Leading coefficient in `var`, a polynomial free of `var`.
    pub fn leading_coeff_in(&self, var: usize) -> Self {
        match self.degree_in(var) {
            None => Self::zero(&self.ring),
            Some(d) => self.coeff_in(var, d),
        }
    }

    pub fn is_monic_in(&self, var: usize) -> bool {
        self.leading_coeff_in(var).is_one()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let k = m.exps()[var];
            if k == 0 {
                continue;
            }
            let mut e = m.exps().to_vec();
            e[var] -= 1;
            out.add_term(Monomial(e), c.clone() * self.ring.int(k as i64));
        }
        out
    }

    /// Ring homomorphism: variable `i` of `self`'s ring goes to `images[i]`,
    /// all images living in a common target ring.
    pub fn compose(&self, target: &RingRef<F>, images: &[Self]) -> Self {
        debug_assert_eq!(images.len(), self.ring.nvars());
        let mut cache: Vec<Vec<Self>> = vec![Vec::new(); images.len()];
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                if powers.is_empty() {
                    powers.push(Self::one(target));
                }
                while powers.len() <= e as usize {
                    let next = powers.last().unwrap() * &images[i];
                    powers.push(next);
                }
                term = &term * &powers[e as usize];
            }
            out = out + term;
        }
        out
    }

    pub fn substitute(&self, var: usize, value: &Self) -> Self {
        let images: Vec<Self> = (0..self.ring.nvars())
            .map(|i| if i == var { value.clone() } else { Self::var(&self.ring, i) })
            .collect();
        self.compose(&self.ring, &images)
    }

    /// Re-express in `target`, matching variables by name. Fails if a used
    /// variable is absent from `target`.
    pub fn to_ring(&self, target: &RingRef<F>) -> Result<Self> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let n = target.nvars();
        let map: Vec<Option<usize>> =
            self.ring.vars().iter().map(|v| target.var_index(v)).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; n];
            for (i, &k) in m.exps().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = k,
                    None => {
                        return Err(Error::RingMismatch(format!(
                            "variable `{}` not in target ring",
                            self.ring.vars()[i]
                        )))
                    }
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Drops every term whose total degree in `vars` is at least `n`
    /// (reduction modulo `(vars)^n`).
    pub fn truncate(&self, vars: &[usize], n: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().map(|&v| m.exps()[v]).sum::<u32>() < n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest total degree in `vars` over all terms.
    pub fn order_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|&v| m.exps()[v]).sum::<u32>())
            .min()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let order = MonomialOrder::Lex;
        let (dm, dc) = d.leading_term(&order).map(|(m, c)| (m.clone(), c.clone()))?;
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term(&order).map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&m) {
                return None;
            }
            let qm = dm.quotient_of(&m);
            let qc = c * &dinv;
            rem = rem - d.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn variables_used(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&v| self.involves(v)).collect()
    }

    /// Evaluate all variables at field values.
    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = self.ring.zero_coef();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t * point[i].pow(e as u64);
                }
            }
            acc = acc + t;
        }
        acc
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let order = MonomialOrder::Grevlex;
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        for (k, (m, c)) in terms.iter().enumerate() {
            let (neg, mag) = c.signed_parts();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars()[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    if mag.contains('/') {
                        write!(f, "({mag})*")?;
                    } else {
                        write!(f, "{mag}*")?;
                    }
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<'a, F: Field> Add<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.clone() + rhs
    }
}

impl<'a, F: Field> Add<&'a Polynomial<F>> for Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(mut self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in polynomial addition");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        self
    }
}

impl<F: Field> Add for Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Polynomial<F>) -> Polynomial<F> {
        if self.terms.len() < rhs.terms.len() {
            rhs + &self
        } else {
            self + &rhs
        }
    }
}

impl<'a, F: Field> Sub<&'a Polynomial<F>> for Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(mut self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in polynomial subtraction");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
        self
    }
}

impl<'a, F: Field> Sub<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.clone() - rhs
    }
}

impl<F: Field> Sub for Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Polynomial<F>) -> Polynomial<F> {
        self - &rhs
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            ring: self.ring,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<'a, F: Field> Neg for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -self.clone()
    }
}

impl<'a, F: Field> Mul<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in polynomial product");
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb);
            }
        }
        out
    }
}

impl<F: Field> Mul for Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Polynomial<F>) -> Polynomial<F> {
        &self * &rhs
    }
}

impl<'a, F: Field> Mul<&'a Polynomial<F>> for Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        &self * rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, RationalField};

    fn ring() -> RingRef<Rational> {
        Ring::new(&["x", "y"], RationalField).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = &(&y * &y) - &x.pow(3);
        assert_eq!(p.to_string(), "-x^3 + y^2");
        let q = &p * &p;
        assert_eq!(q.total_degree(), Some(6));
        assert_eq!((&q - &q).to_string(), "0");
        let half = Polynomial::constant(&r, Rational::new(1.into(), 2.into()));
        assert_eq!((&half * &x).to_string(), "(1/2)*x");
    }

    #[test]
    fn exact_division_and_coefficients() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let a = &(&x + &y) * &(&x - &y);
        assert_eq!(a.exact_div(&(&x + &y)).unwrap(), &x - &y);
        assert!(a.exact_div(&x).is_none());
        let c = a.coefficients_in(0);
        assert_eq!(c.len(), 3);
        assert_eq!(Polynomial::from_coefficients_in(&r, 0, &c), a);
        assert!(a.is_monic_in(0));
        assert!(!(&a * &Polynomial::int(&r, 2)).is_monic_in(0));
    }

    #[test]
    fn compose_and_rings() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = &x * &y;
        let s = p.substitute(1, &(&x + &Polynomial::one(&r)));
        assert_eq!(s, &(&x * &x) + &x);
        let big = r.extended(&["z"]).unwrap();
        let lifted = p.to_ring(&big).unwrap();
        assert_eq!(lifted.ring().nvars(), 3);
        assert!(Polynomial::var(&big, 2).to_ring(&r).is_err());
        assert_eq!(p.derivative(0), y);
    }
}
