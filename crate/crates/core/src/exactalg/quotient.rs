//! Finite-dimensional quotients `k[x]/I` for zero-dimensional ideals:
//! standard-monomial coordinates, multiplication matrices, inverses.

use std::collections::BTreeSet;

use crate::scalar::Field;

use super::groebner::IdealBasis;
use super::linalg::Matrix;
use super::poly::{Monomial, Polynomial};

pub struct QuotientAlgebra<F: Field> {
    ideal: IdealBasis<F>,
    basis: Vec<Monomial>,
}

impl<F: Field> QuotientAlgebra<F> {
    /// `None` when the quotient is infinite-dimensional or zero.
    pub fn new(ideal: IdealBasis<F>) -> Option<Self> {
        let n = ideal.ring().nvars();
        let leads: Vec<Monomial> = ideal
            .groebner()
            .iter()
            .filter_map(|g| g.leading_term(ideal.order()).map(|(m, _)| m.clone()))
            .collect();
        if leads.iter().any(|m| m.is_one()) {
            return None;
        }
        let mut bounds = vec![None; n];
        for m in &leads {
            let support: Vec<usize> = (0..n).filter(|&v| m.exps()[v] > 0).collect();
            if let [v] = support.as_slice() {
                let e = m.exps()[*v];
                bounds[*v] = Some(bounds[*v].map_or(e, |b: u32| b.min(e)));
            }
        }
        let bounds: Vec<u32> = bounds.into_iter().collect::<Option<_>>()?;
        // enumerate the box and keep monomials outside the leading ideal
        let mut basis = BTreeSet::new();
        let mut cur = vec![0u32; n];
        loop {
            let m = Monomial::new(cur.clone());
            if !leads.iter().any(|l| l.divides(&m)) {
                basis.insert(m);
            }
            let mut k = 0;
            while k < n {
                cur[k] += 1;
                if cur[k] < bounds[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        Some(QuotientAlgebra { ideal, basis: basis.into_iter().collect() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn ideal(&self) -> &IdealBasis<F> {
        &self.ideal
    }

    pub fn coords(&self, f: &Polynomial<F>) -> Vec<F> {
        let nf = self.ideal.normal_form(f);
        self.basis.iter().map(|m| nf.coeff(m)).collect()
    }

    pub fn from_coords(&self, v: &[F]) -> Polynomial<F> {
        Polynomial::from_terms(self.ideal.ring(), self.basis.iter().cloned().zip(v.iter().cloned()))
    }

    /// Matrix of multiplication by `f` (columns are images of basis elements).
    pub fn mul_matrix(&self, f: &Polynomial<F>) -> Matrix<F> {
        let ring = self.ideal.ring();
        let n = self.dim();
        let mut m = Matrix::zeros(ring.ctx(), n, n);
        for (j, b) in self.basis.iter().enumerate() {
            let img = self.coords(&f.mul_monomial(b, &ring.one_coef()));
            for (i, v) in img.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn inverse(&self, f: &Polynomial<F>) -> Option<Polynomial<F>> {
        let ring = self.ideal.ring();
        let one = self.coords(&Polynomial::one(ring));
        let v = self.mul_matrix(f).solve(ring.ctx(), &one)?;
        Some(self.from_coords(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, MonomialOrder, Ring};
    use crate::scalar::{Rational, RationalField};

    #[test]
    fn local_inverse() {
        let r = Ring::<Rational>::new(&["x", "y"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let i = IdealBasis::new(&r, vec![p("x^2"), p("y^3")], MonomialOrder::Grevlex).unwrap();
        let q = QuotientAlgebra::new(i).unwrap();
        assert_eq!(q.dim(), 6);
        let u = p("1 + x + y");
        let v = q.inverse(&u).unwrap();
        assert!(q.ideal().normal_form(&(&(&u * &v) - &p("1"))).is_zero());
        assert!(q.inverse(&p("x + y")).is_none());
        let line = IdealBasis::new(&r, vec![p("x")], MonomialOrder::Grevlex).unwrap();
        assert!(QuotientAlgebra::new(line).is_none());
    }
}
