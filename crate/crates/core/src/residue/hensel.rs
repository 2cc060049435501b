//! Hensel lifting of a coprime factorization of the fiber polynomial, and
//! the split of a global residue into local residues.
//!
//! Base rings are polynomial rings localized and completed at a rational
//! point; elements are stored as polynomials truncated modulo `m^N`, with
//! `m` the maximal ideal of the point.

use crate::error::{Error, Result};
use crate::exactalg::univar::{ext_gcd, inverse_mod, split_rational_roots};
use crate::exactalg::{univar_divide, univar_rem, Polynomial, RingRef};
use crate::scalar::Field;

use super::{tate_residue_local, MonicPresentation};

/// A rational point of the base: coordinates for the listed variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPoint<F: Field> {
    pub vars: Vec<usize>,
    pub values: Vec<F>,
}

impl<F: Field> LocalPoint<F> {
    pub fn new(vars: Vec<usize>, values: Vec<F>) -> Result<Self> {
        if vars.len() != values.len() {
            return Err(Error::ContractViolation("point needs one coordinate per base variable".into()));
        }
        Ok(LocalPoint { vars, values })
    }

    pub fn origin(ring: &RingRef<F>, vars: Vec<usize>) -> Self {
        let values = vec![ring.zero_coef(); vars.len()];
        LocalPoint { vars, values }
    }

    fn shift(&self, f: &Polynomial<F>, sign: bool) -> Polynomial<F> {
        let ring = f.ring();
        let mut out = f.clone();
        for (&v, a) in self.vars.iter().zip(&self.values) {
            if a.is_zero() {
                continue;
            }
            let c = Polynomial::constant(ring, if sign { a.clone() } else { -a.clone() });
            out = out.substitute(v, &(Polynomial::var(ring, v) + c));
        }
        out
    }

    /// Moves the point to the origin.
    pub fn to_origin(&self, f: &Polynomial<F>) -> Polynomial<F> {
        self.shift(f, true)
    }

    pub fn from_origin(&self, f: &Polynomial<F>) -> Polynomial<F> {
        self.shift(f, false)
    }

    /// Reduction modulo `m^n` in coordinates centred at the point.
    pub fn truncate(&self, f: &Polynomial<F>, n: u32) -> Polynomial<F> {
        self.from_origin(&self.to_origin(f).truncate(&self.vars, n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenselFactors<F: Field> {
    /// Monic lifts, in the original coordinates, truncated mod `m^N`.
    pub factors: Vec<Polynomial<F>>,
    /// The residue-field factors the lifts reduce to.
    pub seeds: Vec<Polynomial<F>>,
    pub precision: u32,
}

struct Local<'a> {
    vars: &'a [usize],
    t: usize,
}

impl Local<'_> {
    fn tr<F: Field>(&self, f: &Polynomial<F>, n: u32) -> Polynomial<F> {
        f.truncate(self.vars, n)
    }

    fn residue_field<F: Field>(&self, f: &Polynomial<F>) -> Polynomial<F> {
        f.truncate(self.vars, 1)
    }

    fn divmod<F: Field>(&self, f: &Polynomial<F>, g: &Polynomial<F>, n: u32) -> Result<(Polynomial<F>, Polynomial<F>)> {
        let (q, r) = univar_divide(f, g, self.t)?;
        Ok((self.tr(&q, n), self.tr(&r, n)))
    }

    /// Quadratic lift of `target ≡ g h (mod m)` to precision `n`, both
    /// factors monic, `s g + u h ≡ 1 (mod m)`.
    fn lift_pair<F: Field>(
        &self,
        target: &Polynomial<F>,
        g: &Polynomial<F>,
        h: &Polynomial<F>,
        n: u32,
    ) -> Result<(Polynomial<F>, Polynomial<F>)> {
        let (one, mut s, mut u) = ext_gcd(g, h, self.t)?;
        if !one.is_one() {
            return Err(Error::HenselPrecondition(format!("{g} and {h} are not coprime modulo m")));
        }
        let (mut g, mut h) = (g.clone(), h.clone());
        let ring = target.ring();
        let mut k = 1;
        while k < n {
            let k2 = (2 * k).min(n);
            let e = self.tr(&(target - &(&g * &h)), k2);
            let (_, r) = self.divmod(&(&s * &e), &h, k2)?;
            let h_new = self.tr(&(&h + &r), k2);
            // the cofactor is the exact monic quotient of the target by h
            let g_new = self.divmod(target, &h_new, k2)?.0;
            debug_assert!(g_new.is_monic_in(self.t));
            let b = self.tr(&(&(&(&s * &g_new) + &(&u * &h_new)) - &Polynomial::one(ring)), k2);
            let (c, d) = self.divmod(&(&s * &b), &h_new, k2)?;
            s = self.tr(&(&s - &d), k2);
            u = self.tr(&(&(&u - &(&u * &b)) - &(&c * &g_new)), k2);
            g = g_new;
            h = h_new;
            k = k2;
        }
        Ok((g, h))
    }

    /// Inverse of `a` in `A[t]/(modulus)` modulo `m^n`, `modulus` monic.
    fn inverse<F: Field>(&self, a: &Polynomial<F>, modulus: &Polynomial<F>, n: u32) -> Result<Polynomial<F>> {
        let abar = univar_rem(&self.residue_field(a), &self.residue_field(modulus), self.t)?;
        let mut inv = inverse_mod(&abar, &self.residue_field(modulus), self.t)?
            .ok_or_else(|| Error::HenselPrecondition(format!("{a} is not a unit at the point")))?;
        let two = Polynomial::int(a.ring(), 2);
        let mut k = 1;
        while k < n {
            let k2 = (2 * k).min(n);
            let prod = self.divmod(&(a * &inv), modulus, k2)?.1;
            inv = self.divmod(&(&inv * &(&two - &prod)), modulus, k2)?.1;
            k = k2;
        }
        Ok(inv)
    }
}

/// Splits the residue-field polynomial into pairwise coprime monic factors
/// `(t - r)^m` over its base-field roots, plus the root-free cofactor.
fn default_seeds<F: Field>(pbar: &Polynomial<F>, t: usize) -> Result<Vec<Polynomial<F>>> {
    let ring = pbar.ring();
    let (roots, rest) = split_rational_roots(pbar, t)?.ok_or_else(|| {
        Error::UnsupportedSplitting(format!("no root search available for {pbar}; supply the factors"))
    })?;
    let mut seeds: Vec<Polynomial<F>> = roots
        .into_iter()
        .map(|(r, m)| (Polynomial::var(ring, t) - Polynomial::constant(ring, r)).pow(m))
        .collect();
    if rest.degree_in(t).unwrap_or(0) > 0 {
        seeds.push(rest);
    }
    Ok(seeds)
}

/// Lifts a coprime monic factorization of `p mod m` to monic factors with
/// product `≡ p (mod m^n)`. Without `seeds`, the residue-field polynomial
/// is split by a root search.
pub fn hensel_factor<F: Field>(
    p: &Polynomial<F>,
    t: usize,
    point: &LocalPoint<F>,
    seeds: Option<&[Polynomial<F>]>,
    n: u32,
) -> Result<HenselFactors<F>> {
    if n == 0 {
        return Err(Error::ContractViolation("precision must be positive".into()));
    }
    let pres = MonicPresentation::new(p.clone(), t)?;
    if point.vars.contains(&t) {
        return Err(Error::ContractViolation("the fiber variable cannot be a base coordinate".into()));
    }
    let loc = Local { vars: &point.vars, t };
    let target = loc.tr(&point.to_origin(pres.p()), n);
    let pbar = loc.residue_field(&target);
    let seeds = match seeds {
        Some(s) => {
            let s: Vec<Polynomial<F>> = s.iter().map(|f| loc.residue_field(&point.to_origin(f))).collect();
            let mut prod = Polynomial::one(p.ring());
            for f in &s {
                if !f.is_monic_in(t) || f.degree_in(t).unwrap_or(0) == 0 {
                    return Err(Error::HenselPrecondition(format!("factor {f} is not monic of positive degree")));
                }
                if f.variables_used().iter().any(|&v| v != t) {
                    return Err(Error::HenselPrecondition(format!("factor {f} is not over the residue field")));
                }
                prod = &prod * f;
            }
            if prod != pbar {
                return Err(Error::HenselPrecondition(format!("factors multiply to {prod}, not {pbar}")));
            }
            s
        }
        None => default_seeds(&pbar, t)?,
    };
    let mut factors = Vec::with_capacity(seeds.len());
    let mut rest_target = target;
    for k in 0..seeds.len() {
        if k + 1 == seeds.len() {
            factors.push(rest_target.clone());
            break;
        }
        let mut h = Polynomial::one(p.ring());
        for s in &seeds[k + 1..] {
            h = &h * s;
        }
        let (g, hl) = loc.lift_pair(&rest_target, &seeds[k], &h, n)?;
        factors.push(g);
        rest_target = hl;
    }
    Ok(HenselFactors {
        factors: factors.iter().map(|f| point.from_origin(f)).collect(),
        seeds: seeds.iter().map(|f| point.from_origin(f)).collect(),
        precision: n,
    })
}

/// Checks `Π factors ≡ p (mod m^n)` and each factor against its seed mod `m`.
pub fn verify_hensel<F: Field>(p: &Polynomial<F>, point: &LocalPoint<F>, h: &HenselFactors<F>) -> bool {
    let mut prod = Polynomial::one(p.ring());
    for f in &h.factors {
        prod = &prod * f;
    }
    point.truncate(&(&prod - p), h.precision).is_zero()
        && h.factors.len() == h.seeds.len()
        && h.factors.iter().zip(&h.seeds).all(|(f, s)| point.truncate(&(f - s), 1).is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalResidue<F: Field> {
    pub factor: Polynomial<F>,
    pub value: Polynomial<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberDecomposition<F: Field> {
    pub locals: Vec<LocalResidue<F>>,
    pub global: Polynomial<F>,
    pub hensel: HenselFactors<F>,
    pub precision: u32,
}

impl<F: Field> FiberDecomposition<F> {
    /// Whether the local residues sum to the global one modulo `m^N`.
    pub fn sums_to_global(&self, point: &LocalPoint<F>) -> bool {
        let mut sum = Polynomial::zero(self.global.ring());
        for l in &self.locals {
            sum = sum + &l.value;
        }
        point.truncate(&(sum - &self.global), self.precision).is_zero()
    }
}

/// Rewrites `f dt / p^i` at each point of the fiber over `point` with the
/// local factor `p_q` as denominator (the other factors are units there)
/// and takes the local residues. Everything is reported modulo `m^n`.
pub fn residue_fiber_decompose<F: Field>(
    pres: &MonicPresentation<F>,
    point: &LocalPoint<F>,
    f: &Polynomial<F>,
    i: u32,
    n: u32,
    seeds: Option<&[Polynomial<F>]>,
) -> Result<FiberDecomposition<F>> {
    let t = pres.var();
    let hensel = hensel_factor(pres.p(), t, point, seeds, n)?;
    let loc = Local { vars: &point.vars, t };
    let factors: Vec<Polynomial<F>> = hensel.factors.iter().map(|g| point.to_origin(g)).collect();
    let f0 = loc.tr(&point.to_origin(f), n);
    let mut locals = Vec::with_capacity(factors.len());
    for (k, fq) in factors.iter().enumerate() {
        let modulus = fq.pow(i);
        let mut others = Polynomial::one(f.ring());
        for (l, g) in factors.iter().enumerate() {
            if l != k {
                others = loc.divmod(&(&others * &g.pow(i)), &modulus, n)?.1;
            }
        }
        let u = loc.inverse(&others, &modulus, n)?;
        let num = loc.divmod(&(&f0 * &u), &modulus, n)?.1;
        let value = loc.tr(&tate_residue_local(&num, fq, i, t)?, n);
        locals.push(LocalResidue { factor: point.from_origin(fq), value: point.from_origin(&value) });
    }
    let global = point.truncate(&super::global_residue(pres, f, i)?, n);
    Ok(FiberDecomposition { locals, global, hensel, precision: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Ring};
    use crate::scalar::{Fp, PrimeField, Rational, RationalField};

    fn ring() -> RingRef<Rational> {
        Ring::new(&["x", "t"], RationalField).unwrap()
    }

    #[test]
    fn square_root_series() {
        let r = ring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let pt = LocalPoint::origin(&r, vec![0]);
        let seeds = [p("t - 1"), p("t + 1")];
        let h = hensel_factor(&p("t^2 - (1 + x)"), 1, &pt, Some(&seeds), 3).unwrap();
        assert_eq!(h.factors[0], p("t - (1 + x/2 - x^2/8)"));
        assert_eq!(h.factors[1], p("t + (1 + x/2 - x^2/8)"));
        assert!(verify_hensel(&p("t^2 - (1 + x)"), &pt, &h));
        let auto = hensel_factor(&p("t^2 - (1 + x)"), 1, &pt, None, 6).unwrap();
        assert!(verify_hensel(&p("t^2 - (1 + x)"), &pt, &auto));
        assert_eq!(auto.factors.len(), 2);
    }

    #[test]
    fn trivial_lifts() {
        let r = ring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let pt = LocalPoint::origin(&r, vec![0]);
        let split = p("(t - x)*(t - 2 - x^2)");
        for n in [3, 5, 9] {
            let h = hensel_factor(&split, 1, &pt, None, n).unwrap();
            let mut got = h.factors.clone();
            got.sort_by_key(|f| f.to_string());
            let mut want = vec![p("t - x"), p("t - 2 - x^2")];
            want.sort_by_key(|f| f.to_string());
            assert_eq!(got, want);
        }
        let irr = p("t^2 + 1 + x");
        let h = hensel_factor(&irr, 1, &pt, None, 4).unwrap();
        assert_eq!(h.factors, vec![irr]);
    }

    #[test]
    fn preconditions() {
        let r = ring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let pt = LocalPoint::origin(&r, vec![0]);
        let bad = [p("t"), p("t")];
        assert!(matches!(hensel_factor(&p("t^2 - x"), 1, &pt, Some(&bad), 3), Err(Error::HenselPrecondition(_))));
        let wrong = [p("t - 1"), p("t - 2")];
        assert!(matches!(hensel_factor(&p("t^2 - x"), 1, &pt, Some(&wrong), 3), Err(Error::HenselPrecondition(_))));
        let big = Ring::<Fp>::new(&["x", "t"], PrimeField::new(2_147_483_647).unwrap()).unwrap();
        let f = parse_poly(&big, "t^2 - 3 - x").unwrap();
        let o = LocalPoint::origin(&big, vec![0]);
        assert!(matches!(hensel_factor(&f, 1, &o, None, 3), Err(Error::UnsupportedSplitting(_))));
    }

    #[test]
    fn translated_point() {
        let r = ring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let pt = LocalPoint::new(vec![0], vec![Rational::from_integer(3.into())]).unwrap();
        // over x = 3 the fiber of t^2 - x - 1 is t = ±2
        let f = p("t^2 - x - 1");
        let h = hensel_factor(&f, 1, &pt, None, 5).unwrap();
        assert!(verify_hensel(&f, &pt, &h));
        let pres = MonicPresentation::new(f, 1).unwrap();
        let dec = residue_fiber_decompose(&pres, &pt, &p("x*t + 1"), 2, 5, None).unwrap();
        assert!(dec.sums_to_global(&pt));
    }

    #[test]
    fn fiber_examples() {
        let r0 = Ring::<Rational>::new(&["t"], RationalField).unwrap();
        let p0 = |s: &str| parse_poly(&r0, s).unwrap();
        let pres = MonicPresentation::new(p0("t^2 - 1"), 0).unwrap();
        let pt0 = LocalPoint::origin(&r0, vec![]);
        let dec = residue_fiber_decompose(&pres, &pt0, &p0("t"), 1, 1, None).unwrap();
        assert_eq!(dec.locals.len(), 2);
        for l in &dec.locals {
            assert_eq!(l.value, p0("1/2"));
        }
        assert!(dec.global.is_one() && dec.sums_to_global(&pt0));

        let sq = MonicPresentation::new(p0("t^2"), 0).unwrap();
        let dec = residue_fiber_decompose(&sq, &pt0, &p0("t + 3"), 2, 1, None).unwrap();
        assert_eq!(dec.locals.len(), 1);
        assert_eq!(dec.locals[0].value, dec.global);

        let r = ring();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let pt = LocalPoint::origin(&r, vec![0]);
        let pres = MonicPresentation::new(p("t^2 - (1 + x)"), 1).unwrap();
        let dec = residue_fiber_decompose(&pres, &pt, &p("1"), 1, 4, None).unwrap();
        assert!(dec.global.is_zero());
        assert!(!dec.locals[0].value.is_zero());
        assert!(dec.sums_to_global(&pt));
    }
}
