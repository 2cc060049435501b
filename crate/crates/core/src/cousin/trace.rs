//! Traces along finite morphisms presented as towers of monic extensions
//! `A ⊂ A[t_1]/(p_1) ⊂ A[t_1,t_2]/(p_1,p_2) ⊂ ...`, with `p_k` monic in `t_k`
//! and free of later `t`.
//!
//! Classes on the top scheme `X = V(p_1, ..., p_m)` are ambient classes
//! whose denominator chain starts with `p_m, ..., p_1` (innermost step
//! first), followed by generators from the base. The numerator is an
//! ambient top form. Tracing one step removes the leading `p_k` and `dt_k`
//! through the Tate residue in `t_k`.

use crate::error::{Error, Result};
use crate::exactalg::linalg::charpoly_berkowitz;
use crate::exactalg::{univar_rem, Monomial, Polynomial, RingRef};
use crate::forms::{sort_with_sign, Form};
use crate::localcoh::{DenominatorSystem, GenFraction};
use crate::residue::{tate_residue_local, MonicPresentation};
use crate::scalar::Field;

use super::{delta, Cell, CousinClass, RationalForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMorphismPresentation<F: Field> {
    steps: Vec<MonicPresentation<F>>,
}

impl<F: Field> FiniteMorphismPresentation<F> {
    pub fn new(steps: Vec<MonicPresentation<F>>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Presentation("a presentation needs at least one step".into()));
        }
        let ts: Vec<usize> = steps.iter().map(|s| s.var()).collect();
        for (k, s) in steps.iter().enumerate() {
            steps[0].p().assert_same_ring(s.p())?;
            if ts[..k].contains(&ts[k]) {
                return Err(Error::Presentation("repeated tower variable".into()));
            }
            for &later in &ts[k + 1..] {
                if s.p().involves(later) {
                    return Err(Error::Presentation(format!(
                        "{} involves the later variable `{}`",
                        s.p(),
                        s.ring().vars()[later]
                    )));
                }
            }
        }
        Ok(FiniteMorphismPresentation { steps })
    }

    pub fn monogenic(p: Polynomial<F>, t: usize) -> Result<Self> {
        Self::new(vec![MonicPresentation::new(p, t)?])
    }

    pub fn steps(&self) -> &[MonicPresentation<F>] {
        &self.steps
    }

    pub fn ring(&self) -> &RingRef<F> {
        self.steps[0].ring()
    }

    pub fn tower_vars(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.var()).collect()
    }

    pub fn base_vars(&self) -> Vec<usize> {
        let ts = self.tower_vars();
        (0..self.ring().nvars()).filter(|v| !ts.contains(v)).collect()
    }

    /// Denominator generators of the top scheme's generic cell.
    pub fn scheme_gens(&self) -> Vec<Polynomial<F>> {
        self.steps.iter().rev().map(|s| s.p().clone()).collect()
    }

    /// The rank over the base.
    pub fn rank(&self) -> usize {
        self.steps.iter().map(|s| s.degree() as usize).product()
    }

    /// The sub-presentation of the first `k` steps.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        Self::new(self.steps[..k].to_vec())
    }

    /// Normal form in the tower algebra (reduced by the innermost step first).
    pub fn reduce(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        let mut cur = f.clone();
        for s in self.steps.iter().rev() {
            cur = univar_rem(&cur, s.p(), s.var())?;
        }
        Ok(cur)
    }

    /// Monomials `t_1^{a_1} ... t_m^{a_m}`, `a_k < e_k`: a free basis over the base.
    pub fn basis(&self) -> Vec<Monomial> {
        let n = self.ring().nvars();
        let mut out = vec![Monomial::one(n)];
        for s in &self.steps {
            let mut next = Vec::new();
            for m in &out {
                for a in 0..s.degree() {
                    next.push(m.mul(&Monomial::var(n, s.var(), a)));
                }
            }
            out = next;
        }
        out
    }

    /// Coordinates of a reduced element on [`Self::basis`], in the base ring.
    pub fn coords(&self, f: &Polynomial<F>) -> Result<Vec<Polynomial<F>>> {
        let ring = self.ring();
        let reduced = self.reduce(f)?;
        let ts = self.tower_vars();
        let basis = self.basis();
        let mut out = vec![Polynomial::zero(ring); basis.len()];
        for (m, c) in reduced.terms() {
            let mut tpart = vec![0; ring.nvars()];
            let mut bpart = m.exps().to_vec();
            for &t in &ts {
                tpart[t] = bpart[t];
                bpart[t] = 0;
            }
            let k = basis.iter().position(|b| b.exps() == tpart.as_slice()).expect("reduced monomial");
            out[k].add_term(Monomial::new(bpart), c.clone());
        }
        Ok(out)
    }

    /// Matrix of multiplication by `h` over the base (columns are images).
    pub fn mul_matrix(&self, h: &Polynomial<F>) -> Result<Vec<Vec<Polynomial<F>>>> {
        let ring = self.ring();
        let basis = self.basis();
        let n = basis.len();
        let mut m = vec![vec![Polynomial::zero(ring); n]; n];
        for (j, b) in basis.iter().enumerate() {
            let col = self.coords(&h.mul_monomial(b, &ring.one_coef()))?;
            for (i, v) in col.into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        Ok(m)
    }

    /// Trace of multiplication by `h`, an element of the base.
    pub fn algebra_trace(&self, h: &Polynomial<F>) -> Result<Polynomial<F>> {
        let m = self.mul_matrix(h)?;
        let mut acc = Polynomial::zero(self.ring());
        for (i, row) in m.iter().enumerate() {
            acc = acc + &row[i];
        }
        Ok(acc)
    }

    /// `(adj, c)` with `h · adj ≡ c` in the algebra and `c` in the base
    /// (`c = ±` the norm of `h`), from the Cayley-Hamilton identity.
    pub fn norm_adjoint(&self, h: &Polynomial<F>) -> Result<(Polynomial<F>, Polynomial<F>)> {
        let ring = self.ring();
        let m = self.mul_matrix(h)?;
        let cp = charpoly_berkowitz(ring, &m, &|p| p);
        let n = m.len();
        // h^{n-1} + c_1 h^{n-2} + ... + c_{n-1}, by Horner
        let h = self.reduce(h)?;
        let mut acc = Polynomial::one(ring);
        for c in &cp[1..n] {
            acc = self.reduce(&(&(&acc * &h) + c))?;
        }
        Ok((-acc, cp[n].clone()))
    }

    /// Product of the `∂p_k/∂t_k`: the Jacobian of the triangular system.
    pub fn jacobian(&self) -> Polynomial<F> {
        let mut j = Polynomial::one(self.ring());
        for s in &self.steps {
            j = &j * &s.p().derivative(s.var());
        }
        j
    }
}

/// `(adj, c)` with `h · adj ≡ c (mod q)` for `q` monic in `t`, `c` free of `t`.
fn norm_mod<F: Field>(h: &Polynomial<F>, q: &Polynomial<F>, t: usize) -> Result<(Polynomial<F>, Polynomial<F>)> {
    let single = FiniteMorphismPresentation::monogenic(q.clone(), t)?;
    let (adj, c) = single.norm_adjoint(h)?;
    if c.is_zero() {
        return Err(Error::NotInvertible(format!("{h} is a zero divisor modulo {q}")));
    }
    Ok((adj, c))
}

/// Sign of moving index `t` to the end of `idx`, and `idx` without it.
fn strip_index(idx: &[usize], t: usize) -> Option<(bool, Vec<usize>)> {
    let pos = idx.iter().position(|&v| v == t)?;
    let after = idx.len() - pos - 1;
    let rest: Vec<usize> = idx.iter().copied().filter(|&v| v != t).collect();
    Some((after % 2 == 1, rest))
}

fn remove_first_gen<F: Field>(cell: &Cell<F>) -> Cell<F> {
    let mut blocks = cell.blocks().to_vec();
    if let Some(first) = blocks.first_mut() {
        first.remove(0);
    }
    Cell::new(blocks)
}

/// One trace step along `(t, p)` on a class whose chain starts with `p`.
fn trace_step<F: Field>(step: &MonicPresentation<F>, class: &CousinClass<F>) -> Result<CousinClass<F>> {
    let (t, p) = (step.var(), step.p());
    let CousinClass::Local { cell, frac } = class else {
        return Err(Error::ContractViolation("a generic ambient class does not live on the presented scheme".into()));
    };
    let gens = frac.denom().gens();
    if gens[0] != *p {
        return Err(Error::Presentation(format!("the class's chain must start with {p}, found {}", gens[0])));
    }
    let j = frac.exps()[0];
    let q = p.pow(j);
    let mut numer = frac.numer().clone();
    let mut new_gens = gens.to_vec();
    // move t out of the later generators: [m/(q, c^k)] = [m adj^k/(q, N^k)]
    for (g, &k) in new_gens.iter_mut().zip(frac.exps()).skip(1) {
        if g.involves(t) {
            let (adj, c) = norm_mod(g, &q, t)?;
            let a = adj.pow(k);
            numer = numer.mul_poly(&a);
            *g = c;
        }
    }
    let mut loc = Vec::new();
    for (u, e) in frac.loc() {
        if u.involves(t) {
            let (adj, c) = norm_mod(u, &q, t)?;
            numer = numer.mul_poly(&adj.pow(*e));
            loc.push((c, *e));
        } else {
            loc.push((u.clone(), *e));
        }
    }
    let ring = frac.ring();
    let mut out = Form::zero(ring);
    for (idx, g) in numer.comps() {
        let Some((neg, rest)) = strip_index(idx, t) else {
            continue;
        };
        let g = univar_rem(g, &q, t)?;
        let r = tate_residue_local(&g, p, j, t)?;
        let r = if neg { -r } else { r };
        out = out.add(&Form::basic(r, &rest));
    }
    if new_gens.len() == 1 {
        return Ok(CousinClass::Generic(RationalForm::new(out, loc)?));
    }
    let system = DenominatorSystem::with_regularity(new_gens[1..].to_vec(), frac.denom().regularity())?;
    let mut g = GenFraction::new(out, system, frac.exps()[1..].to_vec())?;
    for (u, e) in loc {
        g = g.with_loc(u, e)?;
    }
    let mut new_cell = remove_first_gen(cell);
    if new_cell.gens() != g.denom().gens() {
        new_cell = Cell::new(vec![g.denom().gens().to_vec()]);
    }
    Ok(CousinClass::Local { cell: new_cell, frac: g.normalize() })
}

/// Trace to the base: one Tate residue per step, innermost step first.
pub fn trace_finite<F: Field>(pres: &FiniteMorphismPresentation<F>, class: &CousinClass<F>) -> Result<CousinClass<F>> {
    let mut cur = class.clone();
    for step in pres.steps().iter().rev() {
        cur = trace_step(step, &cur)?;
    }
    Ok(cur)
}

/// Sign of sorting `idx` into (base variables, t_1, ..., t_m) order.
fn tower_sign<F: Field>(pres: &FiniteMorphismPresentation<F>, idx: &[usize]) -> Option<(bool, Vec<usize>)> {
    let ts = pres.tower_vars();
    if !ts.iter().all(|t| idx.contains(t)) {
        return None;
    }
    let base: Vec<usize> = idx.iter().copied().filter(|v| !ts.contains(v)).collect();
    let mut target = base.clone();
    target.extend_from_slice(&ts);
    // position of each idx entry inside target gives a permutation
    let perm: Vec<usize> = idx.iter().map(|v| target.iter().position(|w| w == v).expect("present")).collect();
    let (_, neg) = sort_with_sign(&perm)?;
    Some((neg, base))
}

/// Trace of a class at the generic cell of the top scheme computed without
/// residues: `[G dx∧dt / (p_m, ..., p_1)] · u^{-1}` is the meromorphic form
/// `G / (J u) dx`, whose trace is `Tr(G adj(J u)) / c(J u) dx` with the
/// adjoint and norm from the multiplication matrix.
pub fn trace_generic_direct<F: Field>(pres: &FiniteMorphismPresentation<F>, class: &CousinClass<F>) -> Result<RationalForm<F>> {
    let CousinClass::Local { frac, .. } = class else {
        return Err(Error::ContractViolation("expected a class on the presented scheme".into()));
    };
    if frac.denom().gens() != pres.scheme_gens().as_slice() || frac.exps().iter().any(|&e| e != 1) {
        return Err(Error::ContractViolation(
            "direct trace needs a class at the generic cell of the scheme (all exponents 1)".into(),
        ));
    }
    let mut e = pres.jacobian();
    for (u, k) in frac.loc() {
        e = pres.reduce(&(&e * &u.pow(*k)))?;
    }
    let (adj, c) = pres.norm_adjoint(&e)?;
    if c.is_zero() {
        return Err(Error::Inseparable("the Jacobian is a zero divisor in the algebra".into()));
    }
    let ring = pres.ring();
    let mut out = Form::zero(ring);
    for (idx, g) in frac.numer().comps() {
        let Some((neg, base)) = tower_sign(pres, idx) else {
            continue;
        };
        let tr = pres.algebra_trace(&(g * &adj))?;
        out = out.add(&Form::basic(if neg { -tr } else { tr }, &base));
    }
    RationalForm::new(out, vec![(c, 1)])
}

/// Trace of a class at any cell of the top scheme whose remaining chain
/// lies in the base, computed without residues: `Tr(G adj(J)) / c(J)` must
/// be a polynomial (Euler's formula), which is then placed over the base
/// part of the chain.
pub fn trace_local_direct<F: Field>(pres: &FiniteMorphismPresentation<F>, class: &CousinClass<F>) -> Result<CousinClass<F>> {
    let CousinClass::Local { frac, .. } = class else {
        return Err(Error::ContractViolation("expected a class on the presented scheme".into()));
    };
    let m = pres.steps().len();
    let gens = frac.denom().gens();
    if gens.len() < m || gens[..m] != pres.scheme_gens()[..] || frac.exps()[..m].iter().any(|&e| e != 1) {
        return Err(Error::ContractViolation("chain must start with the presentation (exponents 1)".into()));
    }
    let ts = pres.tower_vars();
    if gens[m..].iter().chain(frac.loc().iter().map(|(u, _)| u)).any(|g| ts.iter().any(|&t| g.involves(t))) {
        return Err(Error::ContractViolation("base chain and localization must be free of the tower variables".into()));
    }
    let (adj, c) = pres.norm_adjoint(&pres.jacobian())?;
    if c.is_zero() {
        return Err(Error::Inseparable("the Jacobian is a zero divisor in the algebra".into()));
    }
    let ring = pres.ring();
    let mut out = Form::zero(ring);
    for (idx, g) in frac.numer().comps() {
        let Some((neg, base)) = tower_sign(pres, idx) else {
            continue;
        };
        let tr = pres.algebra_trace(&(g * &adj))?;
        let q = tr.exact_div(&c).ok_or_else(|| Error::ContractViolation("trace is not integral over the base".into()))?;
        out = out.add(&Form::basic(if neg { -q } else { q }, &base));
    }
    if gens.len() == m {
        return Ok(CousinClass::Generic(RationalForm::new(out, frac.loc().to_vec())?));
    }
    let system = DenominatorSystem::with_regularity(gens[m..].to_vec(), frac.denom().regularity())?;
    let mut g = GenFraction::new(out, system, frac.exps()[m..].to_vec())?;
    for (u, e) in frac.loc() {
        g = g.with_loc(u.clone(), *e)?;
    }
    Ok(CousinClass::Local { cell: Cell::new(vec![g.denom().gens().to_vec()]), frac: g.normalize() })
}

/// Rewrites the localization of a class on the scheme through norms so that
/// it is free of the tower variables (needed before extending the chain by
/// a base element).
pub fn localize_in_base<F: Field>(pres: &FiniteMorphismPresentation<F>, class: &CousinClass<F>) -> Result<CousinClass<F>> {
    let CousinClass::Local { cell, frac } = class else {
        return Ok(class.clone());
    };
    let ts = pres.tower_vars();
    let mut numer = frac.numer().clone();
    let mut loc = Vec::new();
    for (u, e) in frac.loc() {
        if ts.iter().any(|&t| u.involves(t)) {
            let (adj, c) = pres.norm_adjoint(u)?;
            if c.is_zero() {
                return Err(Error::NotInvertible(format!("{u} is a zero divisor on the scheme")));
            }
            numer = numer.map_coeffs(|g| pres.reduce(&(g * &adj.pow(*e))).expect("monic tower"));
            loc.push((c, *e));
        } else {
            loc.push((u.clone(), *e));
        }
    }
    let mut g = GenFraction::new(numer, frac.denom().clone(), frac.exps().to_vec())?;
    for (u, e) in loc {
        g = g.with_loc(u, e)?;
    }
    Ok(CousinClass::Local { cell: cell.clone(), frac: g })
}

/// `Tr(δ_B f)` against `δ_A(Tr f)` for a class at the generic cell of the
/// scheme and a base element `b`. The first route uses residues, the second
/// the multiplication-matrix trace.
pub fn trace_chainmap_check<F: Field>(
    pres: &FiniteMorphismPresentation<F>,
    f: &CousinClass<F>,
    b: &Polynomial<F>,
) -> Result<bool> {
    let (lhs, rhs) = trace_chainmap_sides(pres, f, b)?;
    lhs.equals(&rhs)
}

pub fn trace_chainmap_sides<F: Field>(
    pres: &FiniteMorphismPresentation<F>,
    f: &CousinClass<F>,
    b: &Polynomial<F>,
) -> Result<(CousinClass<F>, CousinClass<F>)> {
    let ts = pres.tower_vars();
    if ts.iter().any(|&t| b.involves(t)) {
        return Err(Error::ContractViolation(format!("{b} is not a base element")));
    }
    let prepared = localize_in_base(pres, f)?;
    let lhs = trace_finite(pres, &delta(&prepared, b, true)?)?;
    let rhs = delta(&CousinClass::Generic(trace_generic_direct(pres, f)?), b, true)?;
    Ok((lhs, rhs))
}

/// Step-by-step trace against the direct trace over the whole tower.
pub fn trace_transitivity_check<F: Field>(pres: &FiniteMorphismPresentation<F>, f: &CousinClass<F>) -> Result<bool> {
    let prepared = localize_in_base(pres, f)?;
    let composite = trace_finite(pres, &prepared)?;
    let m = pres.steps().len();
    let direct = match &prepared {
        CousinClass::Local { frac, .. } if frac.denom().len() == m && frac.exps().iter().all(|&e| e == 1) => {
            CousinClass::Generic(trace_generic_direct(pres, f)?)
        }
        _ => trace_local_direct(pres, &prepared)?,
    };
    composite.equals(&direct)
}
