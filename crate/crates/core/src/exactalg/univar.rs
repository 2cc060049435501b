//! Univariate algorithms over the coefficient field: polynomials that
//! involve only one variable of their ring.

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::division::univar_divide;
use super::poly::Polynomial;

fn require_univariate<F: Field>(f: &Polynomial<F>, var: usize) -> Result<()> {
    if f.variables_used().iter().any(|&v| v != var) {
        return Err(Error::ContractViolation(format!(
            "{f} must involve only `{}`",
            f.ring().vars()[var]
        )));
    }
    Ok(())
}

/// Scales `f` to be monic in `var`; the leading coefficient must be a
/// nonzero constant.
pub fn make_monic<F: Field>(f: &Polynomial<F>, var: usize) -> Result<Polynomial<F>> {
    let lc = f.leading_coeff_in(var);
    let c = lc
        .constant_value()
        .and_then(|c| c.inv())
        .ok_or_else(|| Error::NonMonicDivisor(f.ring().vars()[var].clone()))?;
    Ok(f.scale(&c))
}

/// Division by any nonzero univariate divisor over the field.
pub fn field_divide<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    var: usize,
) -> Result<(Polynomial<F>, Polynomial<F>)> {
    if g.is_zero() {
        return Err(Error::NotInvertible("division by zero".into()));
    }
    if g.degree_in(var) == Some(0) {
        let c = g.constant_value().and_then(|c| c.inv()).ok_or_else(|| {
            Error::NotInvertible(format!("{g} is not a unit"))
        })?;
        return Ok((f.scale(&c), Polynomial::zero(f.ring())));
    }
    let lc = g.leading_coeff_in(var).constant_value().expect("univariate divisor");
    let inv = lc.inv().expect("nonzero leading coefficient");
    let (q, r) = univar_divide(f, &g.scale(&inv), var)?;
    Ok((q.scale(&inv), r))
}

/// Extended Euclid: `(g, s, t)` with `s a + t b = g`, `g` monic (or zero
/// when both inputs vanish).
pub fn ext_gcd<F: Field>(
    a: &Polynomial<F>,
    b: &Polynomial<F>,
    var: usize,
) -> Result<(Polynomial<F>, Polynomial<F>, Polynomial<F>)> {
    require_univariate(a, var)?;
    require_univariate(b, var)?;
    let ring = a.ring();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Polynomial::one(ring), Polynomial::zero(ring));
    let (mut t0, mut t1) = (Polynomial::zero(ring), Polynomial::one(ring));
    while !r1.is_zero() {
        let (q, r) = field_divide(&r0, &r1, var)?;
        let s2 = s0 - &(&q * &s1);
        let t2 = t0 - &(&q * &t1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    if r0.is_zero() {
        return Ok((r0, s0, t0));
    }
    let lc = r0.leading_coeff_in(var).constant_value().expect("univariate");
    let inv = lc.inv().expect("nonzero");
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

pub fn gcd<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, var: usize) -> Result<Polynomial<F>> {
    ext_gcd(a, b, var).map(|(g, _, _)| g)
}

/// Inverse of `a` modulo `m` (both univariate), if they are coprime.
pub fn inverse_mod<F: Field>(a: &Polynomial<F>, m: &Polynomial<F>, var: usize) -> Result<Option<Polynomial<F>>> {
    let (g, s, _) = ext_gcd(a, m, var)?;
    if !g.is_one() {
        return Ok(None);
    }
    Ok(Some(field_divide(&s, m, var)?.1))
}

/// Roots in the base field with multiplicities, plus the cofactor without
/// base-field roots. `None` when the field does not admit a root search.
#[allow(clippy::type_complexity)]
pub fn split_rational_roots<F: Field>(
    f: &Polynomial<F>,
    var: usize,
) -> Result<Option<(Vec<(F, u32)>, Polynomial<F>)>> {
    require_univariate(f, var)?;
    if f.is_zero() {
        return Err(Error::ContractViolation("cannot split the zero polynomial".into()));
    }
    let coeffs: Vec<F> = f
        .coefficients_in(var)
        .iter()
        .map(|c| c.constant_value().unwrap_or_else(|| f.ring().zero_coef()))
        .collect();
    let Some(cands) = F::root_candidates(&coeffs) else {
        return Ok(None);
    };
    let ring = f.ring();
    let mut rest = make_monic(f, var)?;
    let mut roots = Vec::new();
    let mut point = vec![ring.zero_coef(); ring.nvars()];
    for r in cands {
        if rest.degree_in(var).unwrap_or(0) == 0 {
            break;
        }
        point[var] = r.clone();
        let mut mult = 0;
        while rest.degree_in(var).unwrap_or(0) > 0 && rest.eval(&point).is_zero() {
            let lin = Polynomial::var(ring, var) - Polynomial::constant(ring, r.clone());
            rest = univar_divide(&rest, &lin, var)?.0;
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    Ok(Some((roots, rest)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_poly;
    use crate::exactalg::poly::{Ring, RingRef};
    use crate::scalar::{Fp, PrimeField, Rational, RationalField};

    fn ring() -> RingRef<Rational> {
        Ring::new(&["t"], RationalField).unwrap()
    }

    #[test]
    fn bezout_identity() {
        let r = ring();
        let a = parse_poly(&r, "t^3 - 2*t + 1").unwrap();
        let b = parse_poly(&r, "t^2 + 3").unwrap();
        let (g, s, t) = ext_gcd(&a, &b, 0).unwrap();
        assert!(g.is_one());
        assert!((&(&s * &a) + &(&t * &b)).is_one());
        let c = parse_poly(&r, "t^2 - 1").unwrap();
        let d = parse_poly(&r, "t^2 - 2*t + 1").unwrap();
        assert_eq!(gcd(&c, &d, 0).unwrap(), parse_poly(&r, "t - 1").unwrap());
    }

    #[test]
    fn rational_roots() {
        let r = ring();
        let f = parse_poly(&r, "2*t^4 - 3*t^3 + t^2 + 2*t - 2").unwrap();
        // (t - 1)(2t^3 - t^2 + 2) has only the rational root 1
        let (roots, rest) = split_rational_roots(&f, 0).unwrap().unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(rest.degree_in(0), Some(3));
        let g = parse_poly(&r, "t^3*(t - 1/2)^2*(t^2 + 1)").unwrap();
        let (roots, rest) = split_rational_roots(&g, 0).unwrap().unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|(_, m)| *m == 3) && roots.iter().any(|(_, m)| *m == 2));
        assert_eq!(rest, parse_poly(&r, "t^2 + 1").unwrap());
    }

    #[test]
    fn prime_field_roots() {
        let r = Ring::<Fp>::new(&["t"], PrimeField::new(7).unwrap()).unwrap();
        let f = parse_poly(&r, "t^2 + 1").unwrap();
        let (roots, rest) = split_rational_roots(&f, 0).unwrap().unwrap();
        assert!(roots.is_empty());
        assert_eq!(rest, f);
        let g = parse_poly(&r, "t^2 - 2").unwrap();
        let (roots, _) = split_rational_roots(&g, 0).unwrap().unwrap();
        assert_eq!(roots.len(), 2);
    }
}
