//! Truncated completed de Rham complexes of an embedding `X = V(I) ⊂ 𝔸ⁿ`
//! in characteristic zero.
//!
//! The complex at adic order `N` and weight cap `D` is the subcomplex of
//! `Ω·` of `k[x]/I^N` spanned by forms `x^a dx_J` of weight `|a| + |J| ≤ D`.
//! Each `Ωᵖ` is a quotient of a free module by the submodule generated by
//! `I^N Ωᵖ` and `d(I^N) ∧ Ωᵖ⁻¹`. That submodule gets a Gröbner basis in a
//! ring with one tag variable per basis `p`-form, under a degree-compatible
//! order. The standard monomials of weight `≤ D` are then a basis of the
//! truncated piece.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::Matrix;
use crate::exactalg::{IdealBasis, Monomial, MonomialOrder, Polynomial, RingRef};
use crate::forms::Form;
use crate::scalar::Field;

/// A basis element `x^a dx_J` of a truncated piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisForm {
    pub monomial: Monomial,
    pub index: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TruncatedDeRham<F: Field> {
    ring: RingRef<F>,
    adic_order: u32,
    degree_cap: u32,
    bases: Vec<Vec<BasisForm>>,
    /// `d_p : Ωᵖ → Ωᵖ⁺¹`, columns indexed by the basis of `Ωᵖ`.
    diffs: Vec<Matrix<F>>,
}

fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Generators of `I^N`: all products of `N` generators.
fn power_generators<F: Field>(gens: &[Polynomial<F>], n: u32) -> Vec<Polynomial<F>> {
    let ring = gens[0].ring();
    let mut cur: Vec<(usize, Polynomial<F>)> = vec![(0, Polynomial::one(ring))];
    for _ in 0..n {
        let mut next = Vec::new();
        for (start, p) in &cur {
            for (k, g) in gens.iter().enumerate().skip(*start) {
                next.push((k, p * g));
            }
        }
        cur = next;
    }
    cur.into_iter().map(|(_, p)| p).collect()
}

/// The free module of `p`-forms encoded with tag variables.
struct TaggedPiece<F: Field> {
    tags: Vec<Vec<usize>>,
    ring: RingRef<F>,
    submodule: IdealBasis<F>,
    nbase: usize,
}

impl<F: Field> TaggedPiece<F> {
    fn new(base: &RingRef<F>, p: usize, relations: &[Polynomial<F>]) -> Result<Self> {
        let n = base.nvars();
        let tags = combinations(n, p);
        let names: Vec<String> = (0..tags.len()).map(|k| base.fresh_name(&format!("e{k}_"))).collect();
        let ring = base.extended(&names)?;
        let mut piece = TaggedPiece { tags, ring, submodule: IdealBasis::new(base, vec![], MonomialOrder::Grevlex)?, nbase: n };
        let mut gens = Vec::new();
        let ntags = piece.tags.len();
        for g in relations {
            let lifted = g.to_ring(&piece.ring)?;
            for k in 0..ntags {
                gens.push(&lifted * &piece.tag(k));
            }
        }
        if p >= 1 {
            for g in relations {
                for k in combinations(n, p - 1) {
                    let dg = Form::function(g.clone()).d();
                    let wedge = dg.wedge(&Form::basic(Polynomial::one(base), &k));
                    gens.push(piece.encode(&wedge)?);
                }
            }
        }
        for a in 0..ntags {
            for b in a..ntags {
                gens.push(&piece.tag(a) * &piece.tag(b));
            }
        }
        gens.retain(|g| !g.is_zero());
        piece.submodule = IdealBasis::new(&piece.ring, gens, MonomialOrder::Grevlex)?;
        Ok(piece)
    }

    fn tag(&self, k: usize) -> Polynomial<F> {
        Polynomial::var(&self.ring, self.nbase + k)
    }

    fn encode(&self, form: &Form<F>) -> Result<Polynomial<F>> {
        let mut acc = Polynomial::zero(&self.ring);
        for (idx, c) in form.comps() {
            let k = self.tags.iter().position(|t| t == idx).ok_or_else(|| Error::MalformedForm("form of the wrong degree".into()))?;
            acc = acc + &(&c.to_ring(&self.ring)? * &self.tag(k));
        }
        Ok(acc)
    }

    fn leading_monomials(&self) -> Vec<Monomial> {
        self.submodule
            .groebner()
            .iter()
            .filter_map(|g| g.leading_term(self.submodule.order()).map(|(m, _)| m.clone()))
            .collect()
    }

    /// Standard monomials `x^a e_J` with `|a| ≤ cap`.
    fn standard_basis(&self, cap: u32) -> Vec<BasisForm> {
        let leads = self.leading_monomials();
        let total = self.ring.nvars();
        let mut out = Vec::new();
        for (k, idx) in self.tags.iter().enumerate() {
            for exps in monomials_up_to(self.nbase, cap) {
                let mut full = exps.clone();
                full.resize(total, 0);
                full[self.nbase + k] = 1;
                let m = Monomial::new(full);
                if !leads.iter().any(|l| l.divides(&m)) {
                    out.push(BasisForm { monomial: Monomial::new(exps), index: idx.clone() });
                }
            }
        }
        out
    }

    /// Coordinates of the class of `form` on `basis`.
    fn coords(&self, form: &Form<F>, basis: &HashMap<BasisForm, usize>) -> Result<Vec<(usize, F)>> {
        let nf = self.submodule.normal_form(&self.encode(form)?);
        let mut out = Vec::new();
        for (m, c) in nf.terms() {
            let exps = m.exps();
            let k = (0..self.tags.len()).find(|&k| exps[self.nbase + k] == 1).expect("linear in the tags");
            let key = BasisForm { monomial: Monomial::new(exps[..self.nbase].to_vec()), index: self.tags[k].clone() };
            let pos = basis.get(&key).ok_or_else(|| Error::ContractViolation("normal form left the truncation".into()))?;
            out.push((*pos, c.clone()));
        }
        Ok(out)
    }
}

fn monomials_up_to(n: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=cap - used {
                let mut v = m.clone();
                v.push(e);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Builds the complex of `k[x]/I^N` truncated at weight `D`.
pub fn build_complex<F: Field>(ideal: &IdealBasis<F>, adic_order: u32, degree_cap: u32) -> Result<TruncatedDeRham<F>> {
    let ring = ideal.ring().clone();
    if ring.characteristic() != 0 {
        return Err(Error::UnsupportedCharacteristic(format!(
            "truncated de Rham complexes need characteristic 0, got {}",
            ring.characteristic()
        )));
    }
    if adic_order == 0 {
        return Err(Error::ContractViolation("adic order must be at least 1".into()));
    }
    let n = ring.nvars();
    let gens: Vec<Polynomial<F>> = ideal.generators().iter().filter(|g| !g.is_zero()).cloned().collect();
    let relations = if gens.is_empty() { Vec::new() } else { power_generators(&gens, adic_order) };
    let pieces: Vec<TaggedPiece<F>> = (0..=n).map(|p| TaggedPiece::new(&ring, p, &relations)).collect::<Result<_>>()?;
    let bases: Vec<Vec<BasisForm>> = pieces
        .iter()
        .enumerate()
        .map(|(p, piece)| if degree_cap as usize >= p { piece.standard_basis(degree_cap - p as u32) } else { Vec::new() })
        .collect();
    let lookups: Vec<HashMap<BasisForm, usize>> =
        bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect()).collect();
    let mut diffs = Vec::new();
    for p in 0..n {
        let mut m = Matrix::zeros(ring.ctx(), bases[p + 1].len(), bases[p].len());
        for (col, b) in bases[p].iter().enumerate() {
            let form = Form::basic(Polynomial::monomial(&ring, b.monomial.clone(), ring.one_coef()), &b.index);
            for (row, c) in pieces[p + 1].coords(&form.d(), &lookups[p + 1])? {
                m.set(row, col, c);
            }
        }
        diffs.push(m);
    }
    Ok(TruncatedDeRham { ring, adic_order, degree_cap, bases, diffs })
}

impl<F: Field> TruncatedDeRham<F> {
    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn adic_order(&self) -> u32 {
        self.adic_order
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }

    pub fn basis(&self, p: usize) -> &[BasisForm] {
        &self.bases[p]
    }

    pub fn differential(&self, p: usize) -> &Matrix<F> {
        &self.diffs[p]
    }

    /// Whether `d_{p+1} ∘ d_p` vanishes for every `p`.
    pub fn d_squared_is_zero(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Ranks of the differentials, one elimination per degree in parallel.
    pub fn ranks(&self) -> Vec<usize> {
        std::thread::scope(|s| {
            let handles: Vec<_> = self.diffs.iter().map(|m| s.spawn(move || m.rank())).collect();
            handles.into_iter().map(|h| h.join().expect("rank worker")).collect()
        })
    }

    /// `dim ker d_p - rank d_{p-1}` for every `p`.
    pub fn cohomology(&self) -> Vec<usize> {
        let ranks = self.ranks();
        let dims = self.dims();
        (0..dims.len())
            .map(|p| {
                let out = if p < ranks.len() { ranks[p] } else { 0 };
                let inc = if p > 0 { ranks[p - 1] } else { 0 };
                dims[p] - out - inc
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Truncation {
    #[serde(rename = "N")]
    pub adic_order: u32,
    #[serde(rename = "D")]
    pub degree_cap: u32,
}

/// Largest degree in the reduced Gröbner basis of `I^N`. Below it the
/// weight window does not see every generator of the relations, and the
/// truncated complex can coincide with that of the ambient space.
pub fn resolution_degree<F: Field>(ideal: &IdealBasis<F>, adic_order: u32) -> Result<u32> {
    let gens: Vec<Polynomial<F>> = ideal.generators().iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Ok(0);
    }
    let power = IdealBasis::new(ideal.ring(), power_generators(&gens, adic_order), MonomialOrder::Grevlex)?;
    Ok(power.groebner().iter().map(|g| g.total_degree().unwrap_or(0)).max().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub dims: Vec<usize>,
    /// Per degree: unchanged at `(N+1, D+2)` and at `(N, D+2)`, with every
    /// window resolving the relations.
    pub stabilized: Vec<bool>,
    pub truncation: Truncation,
    /// Dimensions at `(N+1, D+2)`.
    pub next_dims: Vec<usize>,
    /// Dimensions at `(N, D+2)`.
    pub wider_dims: Vec<usize>,
    /// Whether `D` reaches [`resolution_degree`] at `N`, and `D+2` at `N+1`.
    pub resolved: bool,
    pub complex_dims: Vec<usize>,
    pub ranks: Vec<usize>,
}

impl CohomologyReport {
    pub fn is_stable(&self) -> bool {
        self.stabilized.iter().all(|&s| s)
    }
}

/// Cohomology at `(N, D)` with stabilization flags. Besides the step to
/// `(N+1, D+2)`, a flag needs agreement with `(N, D+2)`: a window that is
/// too narrow for a class at order `N` can look stable along the diagonal.
/// The three complexes are built and reduced concurrently.
pub fn cohomology_dims<F: Field>(ideal: &IdealBasis<F>, adic_order: u32, degree_cap: u32) -> Result<CohomologyReport> {
    let windows = [(adic_order, degree_cap), (adic_order + 1, degree_cap + 2), (adic_order, degree_cap + 2)];
    let built: Vec<Result<(Vec<usize>, Vec<usize>, Vec<usize>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = windows
            .iter()
            .map(|&(n, d)| {
                s.spawn(move || {
                    let c = build_complex(ideal, n, d)?;
                    Ok((c.cohomology(), c.dims(), c.ranks()))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("complex worker")).collect()
    });
    let mut built = built.into_iter();
    let (dims, complex_dims, ranks) = built.next().expect("three windows")?;
    let (next_dims, _, _) = built.next().expect("three windows")?;
    let (wider_dims, _, _) = built.next().expect("three windows")?;
    let resolved = resolution_degree(ideal, adic_order)? <= degree_cap
        && resolution_degree(ideal, adic_order + 1)? <= degree_cap + 2;
    let stabilized = (0..dims.len())
        .map(|p| resolved && dims[p] == next_dims[p] && dims[p] == wider_dims[p])
        .collect();
    Ok(CohomologyReport {
        dims,
        stabilized,
        truncation: Truncation { adic_order, degree_cap },
        next_dims,
        wider_dims,
        resolved,
        complex_dims,
        ranks,
    })
}

/// Searches `N = 1, 2, ...` and, at each order, caps `D` upward from the
/// smallest resolving one; returns the first stabilized report inside
/// `N ≤ max_n`, `D ≤ max_d`, or the last report computed when none is.
pub fn stabilized_cohomology<F: Field>(ideal: &IdealBasis<F>, max_n: u32, max_d: u32) -> Result<CohomologyReport> {
    let mut last = None;
    for n in 1..=max_n {
        let d0 = resolution_degree(ideal, n)?.max(resolution_degree(ideal, n + 1)?.saturating_sub(2)).max(1);
        for d in d0..=max_d {
            let report = cohomology_dims(ideal, n, d)?;
            if report.is_stable() {
                return Ok(report);
            }
            last = Some(report);
        }
    }
    match last {
        Some(r) => Ok(r),
        None => cohomology_dims(ideal, 1, max_d),
    }
}

/// Poincaré homotopy in the direction of `t` for a form truncated at
/// `t`-order `N` (terms `t^k`, `k < N`): writes each `dt`-component as
/// `c dt∧dx_J` and integrates `c` termwise. For closed input,
/// `d(result) = ω - ω|_{t=0}` up to `t`-order `N`.
pub fn formal_integrate<F: Field>(omega: &Form<F>, t: usize, adic_order: u32) -> Result<Form<F>> {
    let ring = omega.ring().clone();
    if ring.characteristic() != 0 {
        return Err(Error::UnsupportedCharacteristic("formal integration needs characteristic 0".into()));
    }
    if omega.degree() == Some(0) {
        return Err(Error::ContractViolation("formal integration needs a form of degree at least 1".into()));
    }
    let truncated = omega.map_coeffs(|c| c.truncate(&[t], adic_order));
    let dw = truncated.d();
    for (idx, c) in dw.comps() {
        let has_dt = idx.contains(&t);
        let low = if has_dt { c.truncate(&[t], adic_order.saturating_sub(1)) } else { c.clone() };
        let witness = low.terms().next().map(|(m, coef)| Polynomial::monomial(&ring, m.clone(), coef.clone()));
        if let Some(w) = witness {
            return Err(Error::NotClosed { witness: Form::basic(w, idx).to_string() });
        }
    }
    let mut out = Form::zero(&ring);
    for (idx, c) in truncated.comps() {
        let Some(pos) = idx.iter().position(|&v| v == t) else {
            continue;
        };
        let rest: Vec<usize> = idx.iter().copied().filter(|&v| v != t).collect();
        let mut prim = Polynomial::zero(&ring);
        for (m, coef) in c.terms() {
            let k = m.exps()[t];
            let inv = ring.int(k as i64 + 1).inv().expect("characteristic 0");
            let raised = m.mul(&Monomial::var(ring.nvars(), t, 1));
            prim.add_term(raised, coef.clone() * inv);
        }
        let prim = if pos % 2 == 1 { -prim } else { prim };
        out = out.add(&Form::basic(prim, &rest));
    }
    Ok(out)
}

/// Cohomology of two embeddings of the same `X`, related by an algebra map
/// `φ` from the second ambient ring to the first (`images[i] = φ(y_i)`).
/// `φ` must carry the second ideal into the first and hit every variable
/// of the first ambient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingComparison {
    pub first: CohomologyReport,
    pub second: CohomologyReport,
    pub agree: bool,
}

pub fn compare_embeddings<F: Field>(
    first: &IdealBasis<F>,
    second: &IdealBasis<F>,
    images: &[Polynomial<F>],
    max_n: u32,
    max_d: u32,
) -> Result<EmbeddingComparison> {
    if images.len() != second.ring().nvars() {
        return Err(Error::EmbeddingMismatch(format!(
            "{} images for {} variables",
            images.len(),
            second.ring().nvars()
        )));
    }
    for g in second.generators() {
        let pulled = g.compose(first.ring(), images);
        if !first.normal_form(&pulled).is_zero() {
            return Err(Error::EmbeddingMismatch(format!("{g} does not map into the first ideal")));
        }
    }
    for v in 0..first.ring().nvars() {
        let x = Polynomial::var(first.ring(), v);
        if !images.iter().any(|im| *im == x) {
            return Err(Error::EmbeddingMismatch(format!("`{}` is not in the image", first.ring().vars()[v])));
        }
    }
    let (a, b) = std::thread::scope(|s| {
        let a = s.spawn(|| stabilized_cohomology(first, max_n, max_d));
        let b = s.spawn(|| stabilized_cohomology(second, max_n, max_d));
        (a.join().expect("embedding worker"), b.join().expect("embedding worker"))
    });
    let (a, b) = (a?, b?);
    let agree = a.is_stable() && b.is_stable() && a.dims[..2.min(a.dims.len())] == b.dims[..2.min(b.dims.len())]
        && a.dims.iter().skip(2).chain(b.dims.iter().skip(2)).all(|&h| h == 0);
    Ok(EmbeddingComparison { first: a, second: b, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Ring};
    use crate::scalar::{Fp, PrimeField, Rational, RationalField};

    fn ideal(vars: &[&str], gens: &[&str]) -> IdealBasis<Rational> {
        let r = Ring::<Rational>::new(vars, RationalField).unwrap();
        let g = gens.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
        IdealBasis::new(&r, g, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn line_and_unit_ideal() {
        let c = build_complex(&ideal(&["x", "y"], &["y"]), 3, 6).unwrap();
        assert!(c.d_squared_is_zero());
        assert_eq!(c.cohomology(), vec![1, 0, 0]);
        let unit = build_complex(&ideal(&["x", "y"], &["1"]), 2, 5).unwrap();
        assert_eq!(unit.dims(), vec![0, 0, 0]);
        let r = Ring::<Fp>::new(&["x"], PrimeField::new(5).unwrap()).unwrap();
        let i = IdealBasis::new(&r, vec![Polynomial::var(&r, 0)], MonomialOrder::Grevlex).unwrap();
        assert!(matches!(build_complex(&i, 1, 3), Err(Error::UnsupportedCharacteristic(_))));
    }

    #[test]
    fn cusp_slice_counts_monomials() {
        // below the relation degree nothing is identified
        let c = build_complex(&ideal(&["x", "y"], &["y^2 - x^3"]), 4, 8).unwrap();
        assert_eq!(c.dims()[0], 45);
        let c = build_complex(&ideal(&["x", "y"], &["y^2 - x^3"]), 1, 8).unwrap();
        // monomials of degree ≤ 8 outside the leading ideal (x^3)
        assert_eq!(c.dims()[0], 24);
    }

    #[test]
    fn blind_windows_do_not_count_as_stable() {
        let r = cohomology_dims(&ideal(&["x", "y"], &["y^2 - x^2*(x + 1)"]), 4, 10).unwrap();
        assert!(!r.resolved);
        assert!(!r.is_stable());
        let r = cohomology_dims(&ideal(&["x", "y"], &["y^2 - x^2*(x + 1)"]), 2, 8).unwrap();
        assert_eq!(r.dims, vec![1, 1, 0]);
        assert!(r.is_stable());
        // resolved, but too narrow for the loop class at order 2
        let graph = ideal(&["x", "y", "z"], &["y^2 - x^2*(x + 1)", "z - x^2"]);
        let r = cohomology_dims(&graph, 2, 4).unwrap();
        assert!(r.resolved && !r.is_stable());
    }

    #[test]
    fn integration_examples() {
        let r = Ring::<Rational>::new(&["y", "t"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let tdt = Form::basic(p("t"), &[1]);
        assert_eq!(formal_integrate(&tdt, 1, 4).unwrap(), Form::function(p("1/2*t^2")));
        let w = Form::basic(p("y"), &[1]).add(&Form::basic(p("t"), &[0]));
        assert_eq!(formal_integrate(&w, 1, 4).unwrap(), Form::function(p("t*y")));
        let series = Form::basic(p("1 + 2*t + 3*t^2 + 4*t^3"), &[1]);
        assert_eq!(formal_integrate(&series, 1, 4).unwrap(), Form::function(p("t + t^2 + t^3 + t^4")));
        let open = Form::basic(p("t"), &[0]);
        assert!(matches!(formal_integrate(&open, 1, 4), Err(Error::NotClosed { .. })));
    }
}

