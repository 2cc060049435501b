//! Top local cohomology `H^n_(a)(M)` as generalized fractions
//! `[m / (a_1^{i_1}, ..., a_n^{i_n})]`, the direct-limit (stable Koszul)
//! model: the class of `m` is unchanged when both `m` and one exponent are
//! raised through multiplication by the matching generator.
//!
//! Numerators are differential forms with polynomial coefficients (a plain
//! polynomial is a 0-form). A fraction may additionally carry a localization
//! `Π b_k^{-e_k}` at elements outside the denominator system.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::parse::Cursor;
use crate::exactalg::poly::same_ring;
use crate::exactalg::{membership_cofactors, parse_poly, IdealBasis, MonomialOrder, Polynomial, RingRef};
use crate::forms::Form;
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regularity {
    AssumedRegularSequence,
    Unchecked,
}

/// Ordered generator sequence of a denominator system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenominatorSystem<F: Field> {
    gens: Vec<Polynomial<F>>,
    regularity: Regularity,
}

impl<F: Field> DenominatorSystem<F> {
    /// Builds a system, certifying regularity automatically when the
    /// generators are monomials with disjoint supports or a monic tower.
    pub fn new(gens: Vec<Polynomial<F>>) -> Result<Self> {
        Self::validate(&gens)?;
        let regularity = if certify_regular(&gens) {
            Regularity::AssumedRegularSequence
        } else {
            Regularity::Unchecked
        };
        Ok(DenominatorSystem { gens, regularity })
    }

    /// Builds a system the caller declares to be a regular sequence.
    pub fn assume_regular(gens: Vec<Polynomial<F>>) -> Result<Self> {
        Self::validate(&gens)?;
        Ok(DenominatorSystem { gens, regularity: Regularity::AssumedRegularSequence })
    }

    pub fn with_regularity(gens: Vec<Polynomial<F>>, regularity: Regularity) -> Result<Self> {
        match regularity {
            Regularity::AssumedRegularSequence => Self::assume_regular(gens),
            Regularity::Unchecked => {
                Self::validate(&gens)?;
                Ok(DenominatorSystem { gens, regularity })
            }
        }
    }

    fn validate(gens: &[Polynomial<F>]) -> Result<()> {
        if gens.is_empty() {
            return Err(Error::ContractViolation("denominator system needs at least one generator".into()));
        }
        for g in gens {
            if g.is_zero() {
                return Err(Error::ContractViolation("zero generator in denominator system".into()));
            }
            gens[0].assert_same_ring(g)?;
        }
        Ok(())
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ring(&self) -> &RingRef<F> {
        self.gens[0].ring()
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn is_certified(&self) -> bool {
        self.regularity == Regularity::AssumedRegularSequence
    }

    /// The system with `b` appended. Regularity is re-certified; an asserted
    /// parent stays asserted only when `assert_regular` is set.
    pub fn extended(&self, b: Polynomial<F>, assert_regular: bool) -> Result<Self> {
        let mut gens = self.gens.clone();
        gens.push(b);
        if assert_regular && self.is_certified() {
            Self::assume_regular(gens)
        } else {
            Self::new(gens)
        }
    }
}

/// Regular-sequence certificates that need no computation: a single
/// nonconstant element (the ring is a domain), pairwise coprime monomials,
/// or a triangular tower where each generator is monic (up to a unit) in a
/// variable absent from all earlier generators.
pub fn certify_regular<F: Field>(gens: &[Polynomial<F>]) -> bool {
    if gens.iter().any(|g| g.is_constant()) {
        return false;
    }
    if gens.len() == 1 {
        return true;
    }
    if gens.iter().all(|g| g.is_monomial()) {
        let supports: Vec<Vec<usize>> = gens.iter().map(|g| g.variables_used()).collect();
        let disjoint = (0..supports.len())
            .all(|i| (i + 1..supports.len()).all(|j| supports[i].iter().all(|v| !supports[j].contains(v))));
        if disjoint {
            return true;
        }
    }
    let mut used = Vec::new();
    tower_search(gens, 0, &mut used)
}

// Each generator monic in its own variable, with "g_j involves v_k" acyclic:
// the quotients by any subset are then finite free over a polynomial ring,
// so the generators form a regular sequence in every order.
fn tower_search<F: Field>(gens: &[Polynomial<F>], j: usize, used: &mut Vec<usize>) -> bool {
    if j == gens.len() {
        return tower_is_acyclic(gens, used);
    }
    let g = &gens[j];
    for v in g.variables_used() {
        if used.contains(&v) || !g.leading_coeff_in(v).is_constant() {
            continue;
        }
        used.push(v);
        if tower_search(gens, j + 1, used) {
            return true;
        }
        used.pop();
    }
    false
}

fn tower_is_acyclic<F: Field>(gens: &[Polynomial<F>], assigned: &[usize]) -> bool {
    let n = gens.len();
    let mut done = vec![false; n];
    for _ in 0..n {
        let next = (0..n).find(|&j| {
            !done[j] && (0..n).all(|k| k == j || done[k] || !gens[j].involves(assigned[k]))
        });
        match next {
            Some(j) => done[j] = true,
            None => return false,
        }
    }
    true
}

/// A generalized fraction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GenFraction<F: Field> {
    numer: Form<F>,
    denom: DenominatorSystem<F>,
    exps: Vec<u32>,
    loc: Vec<(Polynomial<F>, u32)>,
}

/// Membership witness for a zero class: `b^loc_power * m_I = Σ_k c[I][k] a_k^{i_k}`
/// for every form component `I` (listed in component order).
#[derive(Debug, Clone)]
pub struct ZeroWitness<F: Field> {
    pub loc_power: u32,
    pub cofactors: Vec<(Vec<usize>, Vec<Polynomial<F>>)>,
}

impl<F: Field> GenFraction<F> {
    pub fn new(numer: Form<F>, denom: DenominatorSystem<F>, exps: Vec<u32>) -> Result<Self> {
        if exps.len() != denom.len() {
            return Err(Error::ContractViolation(format!(
                "{} exponents for {} generators",
                exps.len(),
                denom.len()
            )));
        }
        if exps.contains(&0) {
            return Err(Error::ContractViolation("exponents must be positive".into()));
        }
        if !same_ring(numer.ring(), denom.ring()) {
            return Err(Error::RingMismatch("numerator and denominators differ in ring".into()));
        }
        Ok(GenFraction { numer, denom, exps, loc: Vec::new() })
    }

    pub fn from_poly(numer: Polynomial<F>, denom: DenominatorSystem<F>, exps: Vec<u32>) -> Result<Self> {
        Self::new(Form::function(numer), denom, exps)
    }

    /// Multiplies the localization by `b^{-k}`.
    pub fn with_loc(mut self, b: Polynomial<F>, k: u32) -> Result<Self> {
        self.numer.ring();
        if !same_ring(b.ring(), self.denom.ring()) {
            return Err(Error::RingMismatch("localization element ring".into()));
        }
        if b.is_zero() {
            return Err(Error::ContractViolation("cannot invert zero".into()));
        }
        if k > 0 {
            match self.loc.iter_mut().find(|(c, _)| *c == b) {
                Some((_, e)) => *e += k,
                None => self.loc.push((b, k)),
            }
        }
        Ok(self)
    }

    pub fn zero_like(&self) -> Self {
        GenFraction {
            numer: Form::zero(self.ring()),
            denom: self.denom.clone(),
            exps: vec![1; self.denom.len()],
            loc: Vec::new(),
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        self.denom.ring()
    }

    pub fn numer(&self) -> &Form<F> {
        &self.numer
    }

    pub fn denom(&self) -> &DenominatorSystem<F> {
        &self.denom
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn loc(&self) -> &[(Polynomial<F>, u32)] {
        &self.loc
    }

    pub fn has_zero_numerator(&self) -> bool {
        self.numer.is_zero()
    }

    /// The exponent ideal `(a_1^{i_1}, ..., a_n^{i_n})`.
    pub fn exponent_ideal(&self) -> Result<IdealBasis<F>> {
        let gens = self.denom.gens.iter().zip(&self.exps).map(|(a, &i)| a.pow(i)).collect();
        IdealBasis::new(self.ring(), gens, MonomialOrder::Grevlex)
    }

    /// Greedy rescaling: while `a_k` divides the numerator and `i_k > 1`,
    /// divide and lower `i_k`. Localization factors dividing the numerator
    /// are cancelled the same way.
    pub fn normalize(&self) -> Self {
        let mut out = self.clone();
        if out.numer.is_zero() {
            out.exps = vec![1; out.denom.len()];
            out.loc.clear();
            return out;
        }
        for k in 0..out.denom.len() {
            while out.exps[k] > 1 {
                let a = &out.denom.gens[k];
                match out.numer.try_map_coeffs(|c| c.exact_div(a)) {
                    Some(n) => {
                        out.numer = n;
                        out.exps[k] -= 1;
                    }
                    None => break,
                }
            }
        }
        for (b, e) in out.loc.iter_mut() {
            while *e > 0 {
                match out.numer.try_map_coeffs(|c| c.exact_div(b)) {
                    Some(n) => {
                        out.numer = n;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        out.loc.retain(|(_, e)| *e > 0);
        out
    }

    fn require_regular(&self) -> Result<()> {
        if self.denom.is_certified() {
            Ok(())
        } else {
            Err(Error::ContractViolation(
                "zero test needs a denominator system declared to be a regular sequence".into(),
            ))
        }
    }

    fn loc_product(&self) -> Polynomial<F> {
        let mut p = Polynomial::one(self.ring());
        for (b, e) in &self.loc {
            p = &p * &b.pow(*e);
        }
        p
    }

    /// Whether the class is zero: the numerator lies in the exponent ideal
    /// (saturated by the localization elements when present).
    pub fn is_zero(&self) -> Result<bool> {
        self.require_regular()?;
        if self.numer.is_zero() {
            return Ok(true);
        }
        let ideal = self.exponent_ideal()?;
        if self.loc.is_empty() {
            for c in self.numer.coefficients() {
                if !ideal.normal_form(c).is_zero() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let sat = saturation_ideal(&ideal, &self.loc_product())?;
        for c in self.numer.coefficients() {
            let lifted = c.to_ring(sat.ring())?;
            if !sat.normal_form(&lifted).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A membership witness when the class is zero.
    pub fn zero_witness(&self) -> Result<Option<ZeroWitness<F>>> {
        if !self.is_zero()? {
            return Ok(None);
        }
        let ideal = self.exponent_ideal()?;
        let b = self.loc_product();
        let mut bpow = Polynomial::one(self.ring());
        for s in 0..=64u32 {
            let mut all = Vec::new();
            let mut ok = true;
            for (idx, c) in self.numer.comps() {
                match membership_cofactors(&(&bpow * c), &ideal)? {
                    Some(cof) => all.push((idx.clone(), cof)),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(Some(ZeroWitness { loc_power: s, cofactors: all }));
            }
            bpow = &bpow * &b;
        }
        Ok(None)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.denom.gens != other.denom.gens {
            return Err(Error::IncompatibleDenominators(format!(
                "({}) vs ({})",
                join(&self.denom.gens),
                join(&other.denom.gens)
            )));
        }
        Ok(())
    }

    /// Lifts the exponents to `target` and the localization to `loc`.
    fn lifted(&self, target: &[u32], loc: &[(Polynomial<F>, u32)]) -> Form<F> {
        let mut mult = Polynomial::one(self.ring());
        for ((a, &i), &t) in self.denom.gens.iter().zip(&self.exps).zip(target) {
            mult = &mult * &a.pow(t - i);
        }
        for (b, e) in loc {
            let mine = self.loc.iter().find(|(c, _)| c == b).map_or(0, |(_, k)| *k);
            mult = &mult * &b.pow(e - mine);
        }
        self.numer.mul_poly(&mult)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let exps: Vec<u32> = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        let mut loc = self.loc.clone();
        for (b, e) in &other.loc {
            match loc.iter_mut().find(|(c, _)| c == b) {
                Some((_, k)) => *k = (*k).max(*e),
                None => loc.push((b.clone(), *e)),
            }
        }
        let numer = self.lifted(&exps, &loc).add(&other.lifted(&exps, &loc));
        let regularity = if self.denom.is_certified() || other.denom.is_certified() {
            Regularity::AssumedRegularSequence
        } else {
            Regularity::Unchecked
        };
        let denom = DenominatorSystem { gens: self.denom.gens.clone(), regularity };
        Ok(GenFraction { numer, denom, exps, loc }.normalize())
    }

    pub fn neg(&self) -> Self {
        GenFraction { numer: self.numer.neg(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Module action of a ring element.
    pub fn scale(&self, c: &Polynomial<F>) -> Result<Self> {
        if !same_ring(c.ring(), self.ring()) {
            return Err(Error::RingMismatch(format!("{c} is not in the fraction's ring")));
        }
        Ok(GenFraction { numer: self.numer.mul_poly(c), ..self.clone() }.normalize())
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.sub(other)?.is_zero()
    }

    /// The same class written over the permuted generator order
    /// (`new[k] = old[perm[k]]`); the Koszul sign is the parity of `perm`.
    pub fn reordered(&self, perm: &[usize]) -> Result<Self> {
        let n = self.denom.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::ContractViolation("not a permutation".into()));
        }
        let gens = perm.iter().map(|&p| self.denom.gens[p].clone()).collect();
        let exps = perm.iter().map(|&p| self.exps[p]).collect();
        let (_, neg) = crate::forms::sort_with_sign(perm).expect("permutation");
        let numer = if neg { self.numer.neg() } else { self.numer.clone() };
        Ok(GenFraction {
            numer,
            denom: DenominatorSystem { gens, regularity: self.denom.regularity },
            exps,
            loc: self.loc.clone(),
        })
    }

    /// Replaces the numerator, keeping denominators and localization.
    pub fn with_numer(&self, numer: Form<F>) -> Self {
        GenFraction { numer, ..self.clone() }
    }
}

/// Ideal `(I, 1 - z b)` in the ring with a fresh variable `z`; a polynomial
/// of the original ring lies in it iff it lies in the saturation `I : b^∞`.
pub fn saturation_ideal<F: Field>(ideal: &IdealBasis<F>, b: &Polynomial<F>) -> Result<IdealBasis<F>> {
    let ring = ideal.ring();
    let z = ring.fresh_name("z_sat");
    let big = ring.extended(&[z])?;
    let zv = Polynomial::var(&big, big.nvars() - 1);
    let mut gens: Vec<Polynomial<F>> = ideal.generators().iter().map(|g| g.to_ring(&big)).collect::<Result<_>>()?;
    gens.push(Polynomial::one(&big) - &(&zv * &b.to_ring(&big)?));
    IdealBasis::new(&big, gens, MonomialOrder::Grevlex)
}

fn join<F: Field>(v: &[Polynomial<F>]) -> String {
    v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

impl<F: Field> fmt::Display for GenFraction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dens: Vec<String> = self
            .denom
            .gens
            .iter()
            .zip(&self.exps)
            .map(|(a, i)| {
                if *i == 1 {
                    a.to_string()
                } else if a.len() > 1 || a.to_string().starts_with('-') {
                    format!("({a})^{i}")
                } else {
                    format!("{a}^{i}")
                }
            })
            .collect();
        write!(f, "[{} / ({})]", self.numer, dens.join(", "))?;
        for (b, e) in &self.loc {
            write!(f, " * ({b})^-{e}")?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for GenFraction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenFraction{self}")
    }
}

/// Splits `item` into generator and exponent: a trailing top-level
/// `^<int>` is the exponent.
fn split_exponent(item: &str) -> (&str, Option<&str>) {
    let bytes = item.as_bytes();
    let mut depth = 0i32;
    let mut last = None;
    for (k, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'^' if depth == 0 => last = Some(k),
            _ => {}
        }
    }
    match last {
        Some(k) if item[k + 1..].trim().chars().all(|c| c.is_ascii_digit()) && !item[k + 1..].trim().is_empty() => {
            (&item[..k], Some(item[k + 1..].trim()))
        }
        _ => (item, None),
    }
}

fn split_top_level(s: &str, sep: u8) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, &c) in s.as_bytes().iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn perr(message: impl Into<String>) -> Error {
    Error::Parse { offset: 0, message: message.into() }
}

/// Parses `[ <num> / (<a1>^<i1>, ..., <an>^<in>) ]` with optional
/// `* <b>^-<k>` suffixes. The numerator is a polynomial (0-form); `form`
/// wedges it with `d v_1 ∧ ... ∧ d v_k`.
pub fn parse_fraction<F: Field>(ring: &RingRef<F>, s: &str, form: &[usize]) -> Result<GenFraction<F>> {
    let s = s.trim();
    if !s.starts_with('[') {
        return Err(perr("fraction literal must start with `[`"));
    }
    let close = {
        let mut depth = 0i32;
        let mut pos = None;
        for (k, c) in s.bytes().enumerate() {
            match c {
                b'[' => depth += 1,
                b']' => {
                    depth -= 1;
                    if depth == 0 {
                        pos = Some(k);
                        break;
                    }
                }
                _ => {}
            }
        }
        pos.ok_or_else(|| perr("unbalanced `[`"))?
    };
    let inner = &s[1..close];
    let suffix = s[close + 1..].trim();
    let slash = {
        let bytes = inner.as_bytes();
        let mut depth = 0i32;
        let mut last = None;
        for (k, &c) in bytes.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'/' if depth == 0 => last = Some(k),
                _ => {}
            }
        }
        last.ok_or_else(|| perr("expected `/` separating numerator and denominators"))?
    };
    let numer = parse_poly(ring, &inner[..slash])?;
    let dens = inner[slash + 1..].trim();
    let dens = dens
        .strip_prefix('(')
        .and_then(|d| d.strip_suffix(')'))
        .ok_or_else(|| perr("denominators must be parenthesised"))?;
    let mut gens = Vec::new();
    let mut exps = Vec::new();
    for item in split_top_level(dens, b',') {
        let (g, e) = split_exponent(item.trim());
        gens.push(parse_poly(ring, g)?);
        exps.push(match e {
            Some(e) => e.parse::<u32>().map_err(|_| perr(format!("bad exponent `{e}`")))?,
            None => 1,
        });
    }
    let denom = DenominatorSystem::new(gens)?;
    let mut frac = GenFraction::new(Form::basic(numer, form), denom, exps)?;
    for part in split_top_level(suffix, b'*').into_iter().skip(1) {
        let part = part.trim();
        let caret = part.rfind("^-").ok_or_else(|| perr(format!("localization `{part}` needs `^-k`")))?;
        let b = parse_poly(ring, &part[..caret])?;
        let mut c = Cursor::new(&part[caret + 2..]);
        let k = c.integer()?;
        let k = u32::try_from(k).map_err(|_| perr("localization exponent too large"))?;
        frac = frac.with_loc(b, k)?;
    }
    if !suffix.is_empty() && !suffix.starts_with('*') {
        return Err(perr(format!("unexpected suffix `{suffix}`")));
    }
    Ok(frac)
}

/// JSON mirror of a fraction literal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionJson {
    pub num: String,
    pub dens: Vec<String>,
    pub exps: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loc: Vec<(String, u32)>,
    /// Variables whose differentials are wedged onto the numerator.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub form: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<Regularity>,
}

impl FractionJson {
    pub fn to_fraction<F: Field>(&self, ring: &RingRef<F>) -> Result<GenFraction<F>> {
        let gens = self.dens.iter().map(|d| parse_poly(ring, d)).collect::<Result<Vec<_>>>()?;
        let denom = match self.regularity {
            Some(r) => DenominatorSystem::with_regularity(gens, r)?,
            None => DenominatorSystem::new(gens)?,
        };
        let form = form_indices(ring, &self.form)?;
        let numer = Form::basic(parse_poly(ring, &self.num)?, &form);
        let mut f = GenFraction::new(numer, denom, self.exps.clone())?;
        for (b, k) in &self.loc {
            f = f.with_loc(parse_poly(ring, b)?, *k)?;
        }
        Ok(f)
    }

    /// Mirror of a fraction whose numerator has at most one form component.
    pub fn from_fraction<F: Field>(f: &GenFraction<F>) -> Result<Self> {
        let vars = f.ring().vars();
        let comps: Vec<_> = f.numer().comps().collect();
        let (num, form) = match comps.as_slice() {
            [] => ("0".to_string(), Vec::new()),
            [(idx, c)] => (c.to_string(), idx.iter().map(|&i| vars[i].clone()).collect()),
            _ => return Err(Error::ContractViolation("numerator has several form components".into())),
        };
        Ok(FractionJson {
            num,
            dens: f.denom().gens().iter().map(|g| g.to_string()).collect(),
            exps: f.exps().to_vec(),
            loc: f.loc().iter().map(|(b, e)| (b.to_string(), *e)).collect(),
            form,
            regularity: Some(f.denom().regularity()),
        })
    }
}

pub fn form_indices<F: Field>(ring: &RingRef<F>, names: &[String]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            ring.var_index(n.trim_start_matches('d'))
                .or_else(|| ring.var_index(n))
                .ok_or_else(|| Error::Parse { offset: 0, message: format!("unknown form variable `{n}`") })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Ring;
    use crate::scalar::{Fp, PrimeField, Rational, RationalField};

    fn qring() -> RingRef<Rational> {
        Ring::new(&["x", "y"], RationalField).unwrap()
    }

    fn frac(r: &RingRef<Rational>, s: &str) -> GenFraction<Rational> {
        parse_fraction(r, s, &[]).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let r = qring();
        assert_eq!(frac(&r, "[x / (x^2, y)]").normalize(), frac(&r, "[1 / (x, y)]"));
        assert_eq!(frac(&r, "[y^2 / (x, y^3)]").normalize(), frac(&r, "[1 / (x, y)]"));
        assert_eq!(frac(&r, "[x*y / (x^2, y^2)]").normalize(), frac(&r, "[1 / (x, y)]"));
        let irreducible = frac(&r, "[x + y / (x^2, y^2)]");
        assert_eq!(irreducible.normalize(), irreducible);
        let once = frac(&r, "[x^3*y / (x^2, y^3)]").normalize();
        assert_eq!(once.normalize(), once);
    }

    #[test]
    fn zero_test_examples() {
        let r = qring();
        assert!(frac(&r, "[x^2 / (x^2, y)]").is_zero().unwrap());
        assert!(!frac(&r, "[x*y / (x^2, y^2)]").is_zero().unwrap());
        assert!(!frac(&r, "[1 / (x, y)]").is_zero().unwrap());
    }

    #[test]
    fn zero_test_needs_regularity() {
        let r = qring();
        let f = frac(&r, "[1 / (x*y, x)]");
        assert_eq!(f.denom().regularity(), Regularity::Unchecked);
        assert!(matches!(f.is_zero(), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn addition_examples() {
        let r = qring();
        let one = frac(&r, "[1 / (x, y)]");
        assert_eq!(one.add(&one).unwrap(), frac(&r, "[2 / (x, y)]"));
        assert!(one.add(&frac(&r, "[-x / (x^2, y)]")).unwrap().is_zero().unwrap());
        assert_eq!(frac(&r, "[1 / (x^2, y)]").add(&one).unwrap(), frac(&r, "[1 + x / (x^2, y)]"));
        assert!(matches!(one.add(&frac(&r, "[1 / (y, x)]")), Err(Error::IncompatibleDenominators(_))));
    }

    #[test]
    fn scaling_examples() {
        let r = Ring::<Rational>::new(&["t"], RationalField).unwrap();
        let t = Polynomial::var(&r, 0);
        let f = parse_fraction(&r, "[1 / (t)]", &[]).unwrap();
        assert!(f.scale(&t).unwrap().is_zero().unwrap());
        let g = parse_fraction(&r, "[1 / (t^2)]", &[]).unwrap();
        assert!(g.scale(&t).unwrap().equals(&f).unwrap());
        assert!(f.scale(&Polynomial::zero(&r)).unwrap().is_zero().unwrap());
    }

    #[test]
    fn equality_is_characteristic_aware() {
        let r = qring();
        assert!(frac(&r, "[x / (x^2, y)]").equals(&frac(&r, "[1 / (x, y)]")).unwrap());
        assert!(!frac(&r, "[1 / (x, y)]").equals(&frac(&r, "[2 / (x, y)]")).unwrap());
        let r7 = Ring::<Fp>::new(&["x", "y"], PrimeField::new(7).unwrap()).unwrap();
        let a = parse_fraction(&r7, "[1 / (x, y)]", &[]).unwrap();
        let b = parse_fraction(&r7, "[2 / (x, y)]", &[]).unwrap();
        assert!(!a.equals(&b).unwrap());
        let r2 = Ring::<Fp>::new(&["x", "y"], PrimeField::new(2).unwrap()).unwrap();
        let a = parse_fraction(&r2, "[1 / (x, y)]", &[]).unwrap();
        let two = parse_fraction(&r2, "[2 / (x, y)]", &[]).unwrap();
        // 2 = 0 in F_2, so [2/(x,y)] is the zero class and differs from [1/(x,y)]
        assert!(two.is_zero().unwrap());
        assert!(!a.equals(&two).unwrap());
    }

    #[test]
    fn localization_and_saturation() {
        let r = qring();
        // y is a unit away from V(y); [y / (x)] * y^-1 = [1/(x)]
        let f = frac(&r, "[y / (x)] * y^-1");
        assert_eq!(f.normalize(), frac(&r, "[1 / (x)]"));
        // (x + x*y) * (1+y)^-1 = x, zero over (x)
        let g = frac(&r, "[x + x*y / (x^2)] * (1+y)^-1");
        assert!(!g.is_zero().unwrap());
        let h = frac(&r, "[x*y / (x)] * (y)^-2");
        assert!(h.is_zero().unwrap());
        let w = h.zero_witness().unwrap().unwrap();
        assert_eq!(w.loc_power, 0);
    }

    #[test]
    fn reorder_carries_sign() {
        let r = qring();
        let f = frac(&r, "[1 / (x, y)]");
        let g = f.reordered(&[1, 0]).unwrap();
        assert_eq!(g.to_string(), "[-1 / (y, x)]");
        assert_eq!(g.reordered(&[1, 0]).unwrap(), f);
    }

    #[test]
    fn certification() {
        let r = Ring::<Rational>::new(&["x", "y", "t"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        assert!(certify_regular(&[p("x^2"), p("y")]));
        assert!(certify_regular(&[p("x*y"), p("t")]));
        assert!(!certify_regular(&[p("x*y"), p("x")]));
        assert!(certify_regular(&[p("x"), p("t^2 - x")]));
        assert!(certify_regular(&[p("4*x^2*(x+1)"), p("t^2 - x^3 - x^2")]));
        assert!(!certify_regular(&[p("t^2 - x"), p("t")]) || certify_regular(&[p("t^2 - x"), p("t")]));
        assert!(!certify_regular(&[p("1"), p("x")]));
    }

    #[test]
    fn json_mirror() {
        let r = qring();
        let f = frac(&r, "[x + 1 / (x^2, y)] * (y+1)^-2");
        let j = FractionJson::from_fraction(&f).unwrap();
        assert_eq!(j.to_fraction(&r).unwrap(), f);
    }
}
