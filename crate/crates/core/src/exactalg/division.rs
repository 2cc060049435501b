//! Long division by polynomials monic in one distinguished variable, and the
//! `t^j q^l` expansion that underlies every residue computation.

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::poly::Polynomial;

fn check_monic<F: Field>(q: &Polynomial<F>, var: usize) -> Result<u32> {
    let name = q.ring().vars()[var].clone();
    match q.degree_in(var) {
        Some(d) if d >= 1 && q.is_monic_in(var) => Ok(d),
        _ => Err(Error::NonMonicDivisor(name)),
    }
}

/// Division in `A[t]` by a polynomial monic in `t` (variable index `var`):
/// `f = quotient * q + remainder` with `deg_t remainder < deg_t q`.
pub fn univar_divide<F: Field>(
    f: &Polynomial<F>,
    q: &Polynomial<F>,
    var: usize,
) -> Result<(Polynomial<F>, Polynomial<F>)> {
    f.assert_same_ring(q)?;
    let d = check_monic(q, var)?;
    let ring = f.ring();
    let qc = q.coefficients_in(var);
    let mut rem = f.coefficients_in(var);
    if rem.len() <= d as usize {
        return Ok((Polynomial::zero(ring), f.clone()));
    }
    let mut quot = vec![Polynomial::zero(ring); rem.len() - d as usize];
    for k in (d as usize..rem.len()).rev() {
        let lead = std::mem::replace(&mut rem[k], Polynomial::zero(ring));
        if lead.is_zero() {
            continue;
        }
        let shift = k - d as usize;
        for (j, c) in qc.iter().enumerate().take(d as usize) {
            if !c.is_zero() {
                rem[shift + j] = rem[shift + j].clone() - &(&lead * c);
            }
        }
        quot[shift] = lead;
    }
    rem.truncate(d as usize);
    Ok((
        Polynomial::from_coefficients_in(ring, var, &quot),
        Polynomial::from_coefficients_in(ring, var, &rem),
    ))
}

/// Remainder of `f` modulo `q` in `A[t]`.
pub fn univar_rem<F: Field>(f: &Polynomial<F>, q: &Polynomial<F>, var: usize) -> Result<Polynomial<F>> {
    univar_divide(f, q, var).map(|(_, r)| r)
}

/// The unique array `c[j][l]` (`0 <= j < d`, `0 <= l < i`) of elements of `A`
/// with `f ≡ Σ c[j][l] t^j q^l (mod q^i)`.
pub fn basis_expand<F: Field>(
    f: &Polynomial<F>,
    q: &Polynomial<F>,
    var: usize,
    i: u32,
) -> Result<Vec<Vec<Polynomial<F>>>> {
    let d = check_monic(q, var)? as usize;
    if i == 0 {
        return Err(Error::ContractViolation("expansion order must be positive".into()));
    }
    let ring = f.ring();
    let mut cur = univar_rem(f, &q.pow(i), var)?;
    let mut c = vec![vec![Polynomial::zero(ring); i as usize]; d];
    for l in 0..i as usize {
        let (quot, rem) = univar_divide(&cur, q, var)?;
        let coeffs = rem.coefficients_in(var);
        for (j, cj) in coeffs.into_iter().enumerate() {
            c[j][l] = cj;
        }
        cur = quot;
    }
    debug_assert!(cur.is_zero());
    Ok(c)
}

/// Inverse of [`basis_expand`]: `Σ c[j][l] t^j q^l`.
pub fn reassemble<F: Field>(c: &[Vec<Polynomial<F>>], q: &Polynomial<F>, var: usize) -> Polynomial<F> {
    let ring = q.ring();
    let t = Polynomial::var(ring, var);
    let mut acc = Polynomial::zero(ring);
    let mut qpow = Polynomial::one(ring);
    let levels = c.first().map_or(0, |row| row.len());
    for l in 0..levels {
        let mut tp = Polynomial::one(ring);
        for row in c {
            acc = acc + &(&(&row[l] * &tp) * &qpow);
            tp = &tp * &t;
        }
        qpow = &qpow * q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::{Ring, RingRef};
    use crate::scalar::{Rational, RationalField};

    fn ring() -> RingRef<Rational> {
        Ring::new(&["x", "t"], RationalField).unwrap()
    }

    #[test]
    fn hand_long_division() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let t = Polynomial::var(&r, 1);
        let q = &t.pow(2) - &x;
        let (quo, rem) = univar_divide(&t.pow(3), &q, 1).unwrap();
        assert_eq!(quo, t);
        assert_eq!(rem, &x * &t);
        let (quo, rem) = univar_divide(&q, &q, 1).unwrap();
        assert!(quo.is_one() && rem.is_zero());
        let (quo, rem) = univar_divide(&(&x * &t), &q, 1).unwrap();
        assert!(quo.is_zero());
        assert_eq!(rem, &x * &t);
    }

    #[test]
    fn non_monic_rejected() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let t = Polynomial::var(&r, 1);
        let q = &x * &t.pow(2);
        assert!(matches!(univar_divide(&t, &q, 1), Err(Error::NonMonicDivisor(_))));
        assert!(matches!(univar_divide(&t, &x, 1), Err(Error::NonMonicDivisor(_))));
    }

    #[test]
    fn expansion_examples() {
        let r = ring();
        let t = Polynomial::var(&r, 1);
        let one = Polynomial::one(&r);
        let q = &t.pow(2) - &one;
        let c = basis_expand(&t, &q, 1, 2).unwrap();
        assert!(c[1][0].is_one());
        assert!(c[0][0].is_zero() && c[0][1].is_zero() && c[1][1].is_zero());
        let c = basis_expand(&(&q * &t), &q, 1, 2).unwrap();
        assert!(c[1][1].is_one() && c[1][0].is_zero());
        let c = basis_expand(&t.pow(2), &q, 1, 1).unwrap();
        assert!(c[0][0].is_one() && c[1][0].is_zero());
    }
}
