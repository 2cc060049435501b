//! Tate residues of classes `f dt / q^i` with `q` monic in `t`, iterated
//! residues over triangular systems, and the decomposition of a global
//! residue into local residues at the points of a split fiber.

mod hensel;

pub use hensel::{hensel_factor, verify_hensel, residue_fiber_decompose, FiberDecomposition, HenselFactors, LocalResidue, LocalPoint};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{basis_expand, reassemble, univar_divide, univar_rem, Polynomial, RingRef};
use crate::scalar::Field;

/// A residue value with the expansion that produced it: `f ≡ Σ c[j][l] t^j q^l (mod q^i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueExpansion<F: Field> {
    pub value: Polynomial<F>,
    pub coefficients: Vec<Vec<Polynomial<F>>>,
}

/// `B = A[t]/(p)` with `p` monic in `t`; `A` is the polynomial ring on the
/// remaining variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicPresentation<F: Field> {
    t: usize,
    p: Polynomial<F>,
}

impl<F: Field> MonicPresentation<F> {
    pub fn new(p: Polynomial<F>, t: usize) -> Result<Self> {
        match p.degree_in(t) {
            Some(d) if d >= 1 && p.is_monic_in(t) => Ok(MonicPresentation { t, p }),
            _ => Err(Error::NonMonicDivisor(p.ring().vars()[t].clone())),
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        self.p.ring()
    }

    pub fn var(&self) -> usize {
        self.t
    }

    pub fn p(&self) -> &Polynomial<F> {
        &self.p
    }

    pub fn degree(&self) -> u32 {
        self.p.degree_in(self.t).expect("monic of positive degree")
    }

    /// Variables of the base ring `A`.
    pub fn base_vars(&self) -> Vec<usize> {
        (0..self.ring().nvars()).filter(|&v| v != self.t).collect()
    }

    /// Reduction into the normal form of `B` (degree `< e` in `t`).
    pub fn reduce(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        univar_rem(f, &self.p, self.t)
    }
}

/// Residue of `f dt / q^i`: the coefficient `c[d-1][i-1]` of the
/// `t^j q^l` expansion.
pub fn tate_residue_local<F: Field>(f: &Polynomial<F>, q: &Polynomial<F>, i: u32, t: usize) -> Result<Polynomial<F>> {
    tate_residue_expansion(f, q, i, t).map(|e| e.value)
}

pub fn tate_residue_expansion<F: Field>(
    f: &Polynomial<F>,
    q: &Polynomial<F>,
    i: u32,
    t: usize,
) -> Result<ResidueExpansion<F>> {
    f.assert_same_ring(q)?;
    let coefficients = basis_expand(f, q, t, i)?;
    let d = coefficients.len();
    let value = coefficients[d - 1][i as usize - 1].clone();
    Ok(ResidueExpansion { value, coefficients })
}

/// Re-checks an expansion certificate: coefficients free of `t`, and
/// `f - Σ c[j][l] t^j q^l` divisible by `q^i`.
pub fn verify_expansion<F: Field>(
    f: &Polynomial<F>,
    q: &Polynomial<F>,
    i: u32,
    t: usize,
    coefficients: &[Vec<Polynomial<F>>],
) -> Result<bool> {
    let d = q.degree_in(t).unwrap_or(0) as usize;
    if coefficients.len() != d || coefficients.iter().any(|row| row.len() != i as usize) {
        return Ok(false);
    }
    if coefficients.iter().flatten().any(|c| c.involves(t)) {
        return Ok(false);
    }
    let diff = f - &reassemble(coefficients, q, t);
    Ok(univar_rem(&diff, &q.pow(i), t)?.is_zero())
}

pub fn global_residue<F: Field>(pres: &MonicPresentation<F>, f: &Polynomial<F>, i: u32) -> Result<Polynomial<F>> {
    tate_residue_local(f, pres.p(), i, pres.var())
}

/// Iterated residue of `f dt_1...dt_n / (q_1^{i_1}, ..., q_n^{i_n})` with
/// `q_j` monic in `t_j` and free of `t_{j+1}, ..., t_n`. The innermost
/// variable is eliminated first.
pub fn tate_residue_iterated<F: Field>(
    f: &Polynomial<F>,
    qs: &[Polynomial<F>],
    exps: &[u32],
    ts: &[usize],
) -> Result<Polynomial<F>> {
    if qs.len() != exps.len() || qs.len() != ts.len() || qs.is_empty() {
        return Err(Error::Presentation("need one exponent and one variable per denominator".into()));
    }
    check_triangular(qs, ts)?;
    let mut cur = f.clone();
    for j in (0..qs.len()).rev() {
        cur = tate_residue_local(&cur, &qs[j], exps[j], ts[j])?;
    }
    Ok(cur)
}

pub(crate) fn check_triangular<F: Field>(qs: &[Polynomial<F>], ts: &[usize]) -> Result<()> {
    let names = qs[0].ring().vars();
    for (j, q) in qs.iter().enumerate() {
        for &later in &ts[j + 1..] {
            if q.involves(later) {
                return Err(Error::Presentation(format!(
                    "{q} involves `{}`, which comes after `{}`",
                    names[later], names[ts[j]]
                )));
            }
        }
        if !(q.is_monic_in(ts[j]) && q.degree_in(ts[j]).unwrap_or(0) >= 1) {
            return Err(Error::NonMonicDivisor(names[ts[j]].clone()));
        }
    }
    Ok(())
}

/// Compares the residue of `f dt / q1^i` with that of the rescaled class
/// `f r^i dt / q2^i`, where `q2 = q1 r` for a monic `r`.
pub fn residue_independence_check<F: Field>(
    f: &Polynomial<F>,
    q1: &Polynomial<F>,
    q2: &Polynomial<F>,
    i: u32,
    t: usize,
) -> Result<bool> {
    let (r, rem) = univar_divide(q2, q1, t)?;
    if !rem.is_zero() || !r.is_monic_in(t) {
        return Err(Error::ContractViolation(format!("{q2} is not a monic multiple of {q1}")));
    }
    let a = tate_residue_local(f, q1, i, t)?;
    let b = tate_residue_local(&(f * &r.pow(i)), q2, i, t)?;
    Ok(a == b)
}

/// Serializable rendering of an expansion.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionJson {
    pub value: String,
    pub coefficients: Vec<Vec<String>>,
}

impl<F: Field> From<&ResidueExpansion<F>> for ExpansionJson {
    fn from(e: &ResidueExpansion<F>) -> Self {
        ExpansionJson {
            value: e.value.to_string(),
            coefficients: e.coefficients.iter().map(|row| row.iter().map(|c| c.to_string()).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Ring};
    use crate::scalar::{Rational, RationalField};

    fn tring() -> RingRef<Rational> {
        Ring::new(&["x", "t"], RationalField).unwrap()
    }

    #[test]
    fn normalization_table() {
        let r = tring();
        let q = parse_poly(&r, "t^3 - x*t + 2").unwrap();
        for i in 1..=3 {
            for j in 0..3 {
                let f = Polynomial::var(&r, 1).pow(j);
                let v = tate_residue_local(&f, &q, i, 1).unwrap();
                assert_eq!(v.is_one(), (i, j) == (1, 2));
                assert!(v.is_one() || v.is_zero());
            }
        }
    }

    #[test]
    fn partial_fraction_values() {
        let r = tring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        assert_eq!(tate_residue_local(&p("3*t + 5"), &p("t^2 - 1"), 1, 1).unwrap(), p("3"));
        assert!(tate_residue_local(&p("t"), &p("t^2 - 1"), 2, 1).unwrap().is_zero());
        let pres = MonicPresentation::new(p("t^2 - x"), 1).unwrap();
        assert_eq!(global_residue(&pres, &p("t^3"), 1).unwrap(), p("x"));
        assert!(global_residue(&pres, &p("1"), 1).unwrap().is_zero());
        assert!(MonicPresentation::new(p("x*t^2 - 1"), 1).is_err());
    }

    #[test]
    fn expansion_certificate_round_trip() {
        let r = tring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let (f, q) = (p("x*t^5 + t^2 - 7"), p("t^2 + x*t - 1"));
        let e = tate_residue_expansion(&f, &q, 3, 1).unwrap();
        assert!(verify_expansion(&f, &q, 3, 1, &e.coefficients).unwrap());
        let mut bad = e.coefficients.clone();
        bad[0][0] = bad[0][0].clone() + Polynomial::one(&r);
        assert!(!verify_expansion(&f, &q, 3, 1, &bad).unwrap());
    }

    #[test]
    fn iterated() {
        let r = Ring::<Rational>::new(&["t1", "t2"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let qs = [p("t1^2 - 1"), p("t2 - t1")];
        assert!(tate_residue_iterated(&p("t1*t2"), &qs, &[1, 1], &[0, 1]).unwrap().is_zero());
        let corner = [p("t1^2 + 3"), p("t2^3 - t1")];
        assert!(tate_residue_iterated(&p("t1*t2^2"), &corner, &[1, 1], &[0, 1]).unwrap().is_one());
        assert!(tate_residue_iterated(&p("t1*t2^2"), &corner, &[2, 1], &[0, 1]).unwrap().is_zero());
        let bad = [p("t1 - t2"), p("t2")];
        assert!(matches!(
            tate_residue_iterated(&p("1"), &bad, &[1, 1], &[0, 1]),
            Err(Error::Presentation(_))
        ));
    }

    #[test]
    fn independence_examples() {
        let r = tring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        assert!(residue_independence_check(&p("1"), &p("t - 1"), &p("(t - 1)^2"), 1, 1).unwrap());
        assert!(residue_independence_check(&p("t"), &p("t^2 - 1"), &p("(t^2 - 1)*(t - 2)"), 1, 1).unwrap());
        assert_eq!(tate_residue_local(&p("t*(t-2)"), &p("(t^2 - 1)*(t - 2)"), 1, 1).unwrap(), p("1"));
        assert!(residue_independence_check(&p("1"), &p("t"), &p("t^2 + 1"), 1, 1).is_err());
    }
}
