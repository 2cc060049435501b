//! Differential forms with polynomial coefficients, `Σ f_I dx_I` with `I`
//! strictly increasing index lists.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::{Polynomial, RingRef};
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<F: Field> {
    ring: RingRef<F>,
    comps: BTreeMap<Vec<usize>, Polynomial<F>>,
}

/// Sign of sorting `idx` (with its permutation parity); `None` when an index
/// repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, neg))
}

impl<F: Field> Form<F> {
    pub fn zero(ring: &RingRef<F>) -> Self {
        Form { ring: ring.clone(), comps: BTreeMap::new() }
    }

    pub fn function(f: Polynomial<F>) -> Self {
        Self::basic(f, &[])
    }

    /// `f · dx_{idx[0]} ∧ ... ∧ dx_{idx[k]}` for any index order.
    pub fn basic(f: Polynomial<F>, idx: &[usize]) -> Self {
        let mut out = Form::zero(f.ring());
        if let Some((sorted, neg)) = sort_with_sign(idx) {
            out.add_comp(sorted, if neg { -f } else { f });
        }
        out
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn comps(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial<F>)> {
        self.comps.iter()
    }

    pub fn comp(&self, idx: &[usize]) -> Polynomial<F> {
        self.comps.get(idx).cloned().unwrap_or_else(|| Polynomial::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Form degree of the (homogeneous) form; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.comps.keys().next().map(|k| k.len())
    }

    fn add_comp(&mut self, idx: Vec<usize>, f: Polynomial<F>) {
        if f.is_zero() {
            return;
        }
        let cur = self.comps.remove(&idx).unwrap_or_else(|| Polynomial::zero(&self.ring));
        let s = cur + f;
        if !s.is_zero() {
            self.comps.insert(idx, s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.comps {
            out.add_comp(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|p| -p.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_poly(&self, c: &Polynomial<F>) -> Self {
        self.map_coeffs(|p| p * c)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Polynomial<F>) -> Polynomial<F>) -> Self {
        let mut out = Form::zero(&self.ring);
        for (k, v) in &self.comps {
            out.add_comp(k.clone(), f(v));
        }
        out
    }

    /// Applies a fallible map to every coefficient.
    pub fn try_map_coeffs(&self, f: impl Fn(&Polynomial<F>) -> Option<Polynomial<F>>) -> Option<Self> {
        let mut out = Form::zero(&self.ring);
        for (k, v) in &self.comps {
            out.add_comp(k.clone(), f(v)?);
        }
        Some(out)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Form::zero(&self.ring);
        for (a, fa) in &self.comps {
            for (b, fb) in &other.comps {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                if let Some((sorted, neg)) = sort_with_sign(&idx) {
                    let p = fa * fb;
                    out.add_comp(sorted, if neg { -p } else { p });
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Form::zero(&self.ring);
        for (idx, f) in &self.comps {
            for v in f.variables_used() {
                if idx.contains(&v) {
                    continue;
                }
                let mut full = vec![v];
                full.extend_from_slice(idx);
                let (sorted, neg) = sort_with_sign(&full).unwrap();
                let df = f.derivative(v);
                out.add_comp(sorted, if neg { -df } else { df });
            }
        }
        out
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Polynomial<F>> {
        self.comps.values()
    }
}

impl<F: Field> fmt::Display for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        for (k, (idx, c)) in self.comps.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if idx.is_empty() {
                write!(f, "{c}")?;
            } else {
                let wedge: Vec<String> = idx.iter().map(|&i| format!("d{}", vars[i])).collect();
                if c.is_one() {
                    write!(f, "{}", wedge.join("^"))?;
                } else if (-c.clone()).is_one() {
                    write!(f, "-{}", wedge.join("^"))?;
                } else if c.len() == 1 && !c.to_string().starts_with('-') {
                    write!(f, "{c}*{}", wedge.join("^"))?;
                } else {
                    write!(f, "({c})*{}", wedge.join("^"))?;
                }
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Ring};
    use crate::scalar::{Rational, RationalField};

    #[test]
    fn d_squared_and_wedge_signs() {
        let r = Ring::<Rational>::new(&["x", "y", "z"], RationalField).unwrap();
        let f = parse_poly(&r, "x^2*y*z + y^3 - z*x").unwrap();
        let w = Form::function(f);
        assert!(w.d().d().is_zero());
        let dx = Form::basic(Polynomial::one(&r), &[0]);
        let dy = Form::basic(Polynomial::one(&r), &[1]);
        assert_eq!(dy.wedge(&dx), dx.wedge(&dy).neg());
        assert!(dx.wedge(&dx).is_zero());
        let one_form = Form::basic(parse_poly(&r, "x*y").unwrap(), &[2]);
        assert!(one_form.d().d().is_zero());
        assert_eq!(one_form.d().to_string(), "y*dx^dz + x*dy^dz");
    }
}
