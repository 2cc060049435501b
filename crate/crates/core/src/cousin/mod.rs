//! The residue complex of an affine scheme over a field, cell by cell.
//!
//! A cell is a chain of generator blocks of complete-intersection primes in
//! a polynomial ambient `k[x_1..x_n]`; its codimension is the number of
//! generators. Classes at the generic cell are rational `n`-forms; classes
//! at deeper cells are generalized fractions over the concatenated chain,
//! with an `n`-form numerator and possibly a localization at elements that
//! are units at the cell.
//!
//! A closed subscheme `X = V(I)` is handled through the classes annihilated
//! by `I`; a finite `X` over a base is presented by monic towers (see
//! [`trace`]).

pub mod trace;

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::univar::split_rational_roots;
use crate::exactalg::quotient::QuotientAlgebra;
use crate::exactalg::{IdealBasis, MonomialOrder, Polynomial, RingRef};
use crate::forms::Form;
use crate::localcoh::{DenominatorSystem, GenFraction, Regularity};
use crate::scalar::Field;

pub use trace::{
    localize_in_base, trace_chainmap_check, trace_chainmap_sides, trace_finite, trace_generic_direct, trace_local_direct,
    trace_transitivity_check, FiniteMorphismPresentation,
};

/// Ordered chain of generator blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell<F: Field> {
    blocks: Vec<Vec<Polynomial<F>>>,
}

impl<F: Field> Cell<F> {
    pub fn generic() -> Self {
        Cell { blocks: Vec::new() }
    }

    pub fn new(blocks: Vec<Vec<Polynomial<F>>>) -> Self {
        Cell { blocks: blocks.into_iter().filter(|b| !b.is_empty()).collect() }
    }

    pub fn blocks(&self) -> &[Vec<Polynomial<F>>] {
        &self.blocks
    }

    pub fn gens(&self) -> Vec<Polynomial<F>> {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn codim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn extended(&self, b: Polynomial<F>) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.push(vec![b]);
        Cell { blocks }
    }
}

/// A rational form `numer / Π d_k^{e_k}` (a class at the generic cell).
#[derive(Clone, PartialEq, Eq)]
pub struct RationalForm<F: Field> {
    numer: Form<F>,
    denom: Vec<(Polynomial<F>, u32)>,
}

impl<F: Field> RationalForm<F> {
    pub fn new(numer: Form<F>, denom: Vec<(Polynomial<F>, u32)>) -> Result<Self> {
        if denom.iter().any(|(d, _)| d.is_zero()) {
            return Err(Error::MalformedForm("zero denominator".into()));
        }
        let denom = denom.into_iter().filter(|(d, e)| *e > 0 && !d.is_one()).collect();
        Ok(RationalForm { numer, denom })
    }

    pub fn ring(&self) -> &RingRef<F> {
        self.numer.ring()
    }

    pub fn numer(&self) -> &Form<F> {
        &self.numer
    }

    pub fn denom(&self) -> &[(Polynomial<F>, u32)] {
        &self.denom
    }

    pub fn denom_product(&self) -> Polynomial<F> {
        let mut p = Polynomial::one(self.ring());
        for (d, e) in &self.denom {
            p = &p * &d.pow(*e);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn scale(&self, c: &Polynomial<F>) -> Self {
        RationalForm { numer: self.numer.mul_poly(c), denom: self.denom.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut denom = self.denom.clone();
        denom.extend(other.denom.iter().cloned());
        let numer = self.numer.mul_poly(&other.denom_product()).add(&other.numer.mul_poly(&self.denom_product()));
        RationalForm { numer, denom }
    }

    pub fn neg(&self) -> Self {
        RationalForm { numer: self.numer.neg(), denom: self.denom.clone() }
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.numer.mul_poly(&other.denom_product()) == other.numer.mul_poly(&self.denom_product())
    }
}

impl<F: Field> fmt::Display for RationalForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.numer)?;
        for (d, e) in &self.denom {
            write!(f, " * ({d})^-{e}")?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for RationalForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalForm({self})")
    }
}

/// A class of the residue complex at one cell.
#[derive(Clone, PartialEq, Eq)]
pub enum CousinClass<F: Field> {
    Generic(RationalForm<F>),
    Local { cell: Cell<F>, frac: GenFraction<F> },
}

impl<F: Field> CousinClass<F> {
    pub fn local(cell: Cell<F>, frac: GenFraction<F>) -> Result<Self> {
        if cell.gens() != frac.denom().gens() {
            return Err(Error::ContractViolation("cell generators differ from the fraction's denominators".into()));
        }
        Ok(CousinClass::Local { cell, frac })
    }

    /// A class at a single-block cell whose generators are the fraction's.
    pub fn at_block(frac: GenFraction<F>) -> Self {
        let cell = Cell::new(vec![frac.denom().gens().to_vec()]);
        CousinClass::Local { cell, frac }
    }

    pub fn ring(&self) -> &RingRef<F> {
        match self {
            CousinClass::Generic(r) => r.ring(),
            CousinClass::Local { frac, .. } => frac.ring(),
        }
    }

    pub fn codim(&self) -> usize {
        match self {
            CousinClass::Generic(_) => 0,
            CousinClass::Local { cell, .. } => cell.codim(),
        }
    }

    pub fn cell(&self) -> Cell<F> {
        match self {
            CousinClass::Generic(_) => Cell::generic(),
            CousinClass::Local { cell, .. } => cell.clone(),
        }
    }

    pub fn is_zero(&self) -> Result<bool> {
        match self {
            CousinClass::Generic(r) => Ok(r.is_zero()),
            CousinClass::Local { frac, .. } => frac.is_zero(),
        }
    }

    pub fn scale(&self, c: &Polynomial<F>) -> Result<Self> {
        Ok(match self {
            CousinClass::Generic(r) => CousinClass::Generic(r.scale(c)),
            CousinClass::Local { cell, frac } => CousinClass::Local { cell: cell.clone(), frac: frac.scale(c)? },
        })
    }

    pub fn as_fraction(&self) -> Option<&GenFraction<F>> {
        match self {
            CousinClass::Local { frac, .. } => Some(frac),
            CousinClass::Generic(_) => None,
        }
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        match (self, other) {
            (CousinClass::Generic(a), CousinClass::Generic(b)) => Ok(a.equals(b)),
            (CousinClass::Local { cell: c1, frac: a }, CousinClass::Local { cell: c2, frac: b }) if c1 == c2 => {
                a.equals(b)
            }
            _ => Err(Error::IncompatibleDenominators("classes live at different cells".into())),
        }
    }
}

impl<F: Field> fmt::Display for CousinClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CousinClass::Generic(r) => write!(f, "{r}"),
            CousinClass::Local { frac, .. } => write!(f, "{frac}"),
        }
    }
}

impl<F: Field> fmt::Debug for CousinClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CousinClass({self})")
    }
}

/// Pulls every power of `b` out of a localization list.
fn extract_power<F: Field>(loc: &[(Polynomial<F>, u32)], b: &Polynomial<F>) -> (u32, Vec<(Polynomial<F>, u32)>) {
    let mut k = 0;
    let mut rest = Vec::new();
    for (u, e) in loc {
        let mut u = u.clone();
        let mut m = 0;
        while !u.is_constant() {
            match u.exact_div(b) {
                Some(q) => {
                    u = q;
                    m += 1;
                }
                None => break,
            }
        }
        k += m * e;
        if !u.is_one() {
            rest.push((u, *e));
        }
    }
    (k, rest)
}

fn absorb_constants<F: Field>(numer: Form<F>, loc: Vec<(Polynomial<F>, u32)>) -> Result<(Form<F>, Vec<(Polynomial<F>, u32)>)> {
    let mut numer = numer;
    let mut out = Vec::new();
    for (u, e) in loc {
        if let Some(c) = u.constant_value() {
            let inv = c.inv().ok_or_else(|| Error::MalformedForm("zero denominator".into()))?.pow(e as u64);
            numer = numer.map_coeffs(|p| p.scale(&inv));
        } else {
            out.push((u, e));
        }
    }
    Ok((numer, out))
}

fn check_units<F: Field>(gens: &[Polynomial<F>], rest: &[(Polynomial<F>, u32)]) -> Result<()> {
    if rest.is_empty() {
        return Ok(());
    }
    let ring = gens[0].ring();
    let ideal = IdealBasis::new(ring, gens.to_vec(), MonomialOrder::Grevlex)?;
    for (u, _) in rest {
        if ideal.normal_form(u).is_zero() {
            return Err(Error::ContractViolation(format!(
                "localization element {u} vanishes on the target cell; split it into its factors first"
            )));
        }
    }
    Ok(())
}

/// The coboundary component from the class `f` to the cell obtained by
/// appending `b`: the power `b^{-k}` in the localization becomes the new
/// exponent, and `k = 0` gives the zero class. `assert_regular` declares the
/// extended chain regular when no certificate is found.
pub fn delta<F: Field>(f: &CousinClass<F>, b: &Polynomial<F>, assert_regular: bool) -> Result<CousinClass<F>> {
    if b.is_constant() {
        return Err(Error::ContractViolation(format!("cannot extend a cell by the unit {b}")));
    }
    let (cell, numer, gens, exps, loc, regularity) = match f {
        CousinClass::Generic(r) => (Cell::generic(), r.numer.clone(), vec![], vec![], r.denom.clone(), None),
        CousinClass::Local { cell, frac } => (
            cell.clone(),
            frac.numer().clone(),
            frac.denom().gens().to_vec(),
            frac.exps().to_vec(),
            frac.loc().to_vec(),
            Some(frac.denom().regularity()),
        ),
    };
    let (k, rest) = extract_power(&loc, b);
    let (numer, rest) = absorb_constants(numer, rest)?;
    let mut new_gens = gens;
    new_gens.push(b.clone());
    check_units(&new_gens, &rest)?;
    let assert = assert_regular || (regularity == Some(Regularity::AssumedRegularSequence) && new_gens.len() == 1);
    let system = if assert {
        DenominatorSystem::assume_regular(new_gens)?
    } else {
        let s = DenominatorSystem::new(new_gens)?;
        if !s.is_certified() {
            return Err(Error::ContractViolation(format!(
                "({}) is not certified as a regular sequence; assert it explicitly",
                s.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        s
    };
    let new_cell = cell.extended(b.clone());
    let mut new_exps = exps;
    if k == 0 {
        new_exps.push(1);
        let frac = GenFraction::new(Form::zero(b.ring()), system, new_exps)?;
        return Ok(CousinClass::Local { cell: new_cell, frac });
    }
    new_exps.push(k);
    let mut frac = GenFraction::new(numer, system, new_exps)?;
    for (u, e) in rest {
        frac = frac.with_loc(u, e)?;
    }
    Ok(CousinClass::Local { cell: new_cell, frac: frac.normalize() })
}

/// Irreducible-factor candidates of `h` over the base field: supplied
/// factors first, then monomial content, then rational roots when what is
/// left involves one variable. Returns the constant unit and the factors.
pub fn prime_factors<F: Field>(h: &Polynomial<F>, supplied: &[Polynomial<F>]) -> Result<(F, Vec<(Polynomial<F>, u32)>)> {
    if h.is_zero() {
        return Err(Error::MalformedForm("zero denominator".into()));
    }
    let ring = h.ring();
    let mut rest = h.clone();
    let mut out: Vec<(Polynomial<F>, u32)> = Vec::new();
    let push = |out: &mut Vec<(Polynomial<F>, u32)>, p: Polynomial<F>, e: u32| {
        if e == 0 {
            return;
        }
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, m)) => *m += e,
            None => out.push((p, e)),
        }
    };
    for s in supplied {
        if s.is_constant() {
            continue;
        }
        let mut m = 0;
        while let Some(q) = rest.exact_div(s) {
            rest = q;
            m += 1;
        }
        push(&mut out, s.clone(), m);
    }
    for v in 0..ring.nvars() {
        let x = Polynomial::var(ring, v);
        let mut m = 0;
        while !rest.is_constant() {
            match rest.exact_div(&x) {
                Some(q) => {
                    rest = q;
                    m += 1;
                }
                None => break,
            }
        }
        push(&mut out, x, m);
    }
    if !rest.is_constant() {
        let vars = rest.variables_used();
        if vars.len() == 1 {
            if let Some((roots, cof)) = split_rational_roots(&rest, vars[0])? {
                let lc = rest.leading_coeff_in(vars[0]);
                for (r, m) in roots {
                    let lin = Polynomial::var(ring, vars[0]) - Polynomial::constant(ring, r);
                    push(&mut out, lin, m);
                }
                if !cof.is_constant() {
                    push(&mut out, cof, 1);
                }
                rest = lc;
            }
        }
    }
    if !rest.is_constant() {
        let lc = rest.leading_term(&MonomialOrder::Lex).map(|(_, c)| c.clone()).expect("nonzero");
        let inv = lc.inv().expect("nonzero");
        push(&mut out, rest.scale(&inv), 1);
        rest = Polynomial::constant(ring, lc);
    }
    let unit = rest.constant_value().expect("constant remainder");
    Ok((unit, out))
}

/// All nonzero coboundary components of `f`: one per prime factor of its
/// localization (factored by [`prime_factors`]).
pub fn delta_components<F: Field>(
    f: &CousinClass<F>,
    supplied: &[Polynomial<F>],
    assert_regular: bool,
) -> Result<Vec<CousinClass<F>>> {
    let (numer, loc) = match f {
        CousinClass::Generic(r) => (r.numer.clone(), r.denom.clone()),
        CousinClass::Local { frac, .. } => (frac.numer().clone(), frac.loc().to_vec()),
    };
    let mut numer = numer;
    let mut primes: Vec<(Polynomial<F>, u32)> = Vec::new();
    for (u, e) in &loc {
        let (c, fs) = prime_factors(u, supplied)?;
        let inv = c.inv().expect("unit").pow(*e as u64);
        numer = numer.map_coeffs(|p| p.scale(&inv));
        for (p, m) in fs {
            match primes.iter_mut().find(|(q, _)| *q == p) {
                Some((_, k)) => *k += m * e,
                None => primes.push((p, m * e)),
            }
        }
    }
    let rewritten = match f {
        CousinClass::Generic(_) => CousinClass::Generic(RationalForm::new(numer, primes.clone())?),
        CousinClass::Local { cell, frac } => {
            let mut g = GenFraction::new(numer, frac.denom().clone(), frac.exps().to_vec())?;
            for (p, m) in &primes {
                g = g.with_loc(p.clone(), *m)?;
            }
            CousinClass::Local { cell: cell.clone(), frac: g }
        }
    };
    let mut out = Vec::new();
    for (p, _) in &primes {
        let c = delta(&rewritten, p, assert_regular)?;
        if !c.is_zero()? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Compares the two routes through a two-step chain `x ⊂ y ⊂ z` (append `b`
/// then `c`, and `c` then `b`). The second route is rewritten over the
/// first route's generator order with its Koszul sign; the check passes
/// when the sum is the zero class.
pub fn delta_squared_check<F: Field>(
    f: &CousinClass<F>,
    b: &Polynomial<F>,
    c: &Polynomial<F>,
    assert_regular: bool,
) -> Result<bool> {
    delta_squared_sum(f, b, c, assert_regular)?.is_zero()
}

pub fn delta_squared_sum<F: Field>(
    f: &CousinClass<F>,
    b: &Polynomial<F>,
    c: &Polynomial<F>,
    assert_regular: bool,
) -> Result<GenFraction<F>> {
    let bc = delta(&delta(f, b, assert_regular)?, c, assert_regular)?;
    let cb = delta(&delta(f, c, assert_regular)?, b, assert_regular)?;
    let (bc, cb) = (bc.as_fraction().expect("local").clone(), cb.as_fraction().expect("local").clone());
    let n = cb.denom().len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(n - 2, n - 1);
    let cb = cb.reordered(&perm)?;
    bc.add(&cb)
}

/// Whether every Gröbner generator of `ideal` kills the class.
pub fn annihilator_check<F: Field>(f: &CousinClass<F>, ideal: &IdealBasis<F>) -> Result<bool> {
    for g in ideal.groebner() {
        if !f.scale(g)?.is_zero()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// At a cell with zero-dimensional exponent ideal every localization
/// element is a unit modulo that ideal; replaces it by its inverse there.
pub fn eliminate_localization<F: Field>(f: &CousinClass<F>) -> Result<CousinClass<F>> {
    let CousinClass::Local { cell, frac } = f else {
        return Ok(f.clone());
    };
    if frac.loc().is_empty() {
        return Ok(f.clone());
    }
    let Some(q) = QuotientAlgebra::new(frac.exponent_ideal()?) else {
        return Ok(f.clone());
    };
    let mut u = Polynomial::one(frac.ring());
    for (b, e) in frac.loc() {
        u = &u * &b.pow(*e);
    }
    let Some(inv) = q.inverse(&u) else {
        return Ok(f.clone());
    };
    let numer = frac.numer().map_coeffs(|c| q.ideal().normal_form(&(c * &inv)));
    let g = GenFraction::new(numer, frac.denom().clone(), frac.exps().to_vec())?;
    Ok(CousinClass::Local { cell: cell.clone(), frac: g.normalize() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Ring};
    use crate::localcoh::parse_fraction;
    use crate::scalar::{Rational, RationalField};

    fn top<F: Field>(ring: &RingRef<F>, f: Polynomial<F>) -> Form<F> {
        let idx: Vec<usize> = (0..ring.nvars()).collect();
        Form::basic(f, &idx)
    }

    #[test]
    fn generic_to_point_on_the_line() {
        let r = Ring::<Rational>::new(&["t"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let f = CousinClass::Generic(RationalForm::new(top(&r, p("1")), vec![(p("t"), 1)]).unwrap());
        let d = delta(&f, &p("t"), false).unwrap();
        assert_eq!(d.codim(), 1);
        assert!(d.equals(&CousinClass::at_block(parse_fraction(&r, "[1 / (t)]", &[0]).unwrap())).unwrap());
        let g = CousinClass::Generic(RationalForm::new(top(&r, p("1")), vec![(p("t^2 - t"), 1)]).unwrap());
        let parts = delta_components(&g, &[], false).unwrap();
        assert_eq!(parts.len(), 2);
        let simplified: Vec<String> = parts.iter().map(|c| eliminate_localization(c).unwrap().to_string()).collect();
        assert!(simplified.contains(&"[-dt / (t)]".to_string()), "{simplified:?}");
        assert!(simplified.contains(&"[dt / (t - 1)]".to_string()), "{simplified:?}");
        let regular = CousinClass::Generic(RationalForm::new(top(&r, p("t")), vec![]).unwrap());
        assert!(delta(&regular, &p("t"), false).unwrap().is_zero().unwrap());
    }

    #[test]
    fn plane_cells() {
        let r = Ring::<Rational>::new(&["x", "y"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let at_x = parse_fraction(&r, "[1 / (x)] * y^-1", &[0, 1]).unwrap();
        let f = CousinClass::at_block(at_x);
        let d = delta(&f, &p("y"), false).unwrap();
        assert_eq!(d.codim(), 2);
        assert!(d.equals(&CousinClass::local(
            Cell::new(vec![vec![p("x")], vec![p("y")]]),
            parse_fraction(&r, "[1 / (x, y)]", &[0, 1]).unwrap()
        ).unwrap()).unwrap());
        let generic = CousinClass::Generic(RationalForm::new(top(&r, p("1")), vec![(p("x*y"), 1)]).unwrap());
        let parts = delta_components(&generic, &[], false).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(delta_squared_check(&generic, &p("x"), &p("y"), false).unwrap());
        let path = delta(&delta(&generic, &p("x"), false).unwrap(), &p("y"), false).unwrap();
        assert!(!path.is_zero().unwrap());
    }

    #[test]
    fn annihilators() {
        let r = Ring::<Rational>::new(&["x", "y"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let f = CousinClass::at_block(parse_fraction(&r, "[1 / (x, y)]", &[0, 1]).unwrap());
        let cusp = IdealBasis::new(&r, vec![p("y^2 - x^3")], MonomialOrder::Grevlex).unwrap();
        assert!(annihilator_check(&f, &cusp).unwrap());
        let line = IdealBasis::new(&r, vec![p("x - 1")], MonomialOrder::Grevlex).unwrap();
        assert!(!annihilator_check(&f, &line).unwrap());
        let zero = IdealBasis::new(&r, vec![], MonomialOrder::Grevlex).unwrap();
        assert!(annihilator_check(&f, &zero).unwrap());
    }

    #[test]
    fn factoring_denominators() {
        let r = Ring::<Rational>::new(&["x", "t"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let (c, fs) = prime_factors(&p("2*x^2*(t^2 - 1)"), &[]).unwrap();
        assert_eq!(c, Rational::from_integer(2.into()));
        assert_eq!(fs.len(), 3);
        let (_, fs) = prime_factors(&p("(t - x)^2*(t + x)"), &[p("t - x")]).unwrap();
        assert_eq!(fs[0], (p("t - x"), 2));
        assert_eq!(fs[1], (p("t + x"), 1));
    }
}
