//! Ring declarations (`ring Q[x,y]`, `ring F7[t]`) and infix polynomial
//! literals (`y^2 - x^3`, `(1/2)*x*y + 3`).

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{CoefField, Field};

use super::poly::{Polynomial, RingRef};

/// Parsed ring declaration: coefficient field plus variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub field: CoefField,
    pub vars: Vec<String>,
}

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

/// Parses `ring Q[x,y]`, `Q[x,y]`, `ring F7[t]`.
pub fn parse_ring_spec(s: &str) -> Result<RingSpec> {
    let body = s.trim();
    let body = body.strip_prefix("ring").map(str::trim_start).unwrap_or(body);
    let open = body.find('[').ok_or_else(|| perr(0, "expected `[` in ring declaration"))?;
    if !body.ends_with(']') {
        return Err(perr(body.len(), "expected `]` at end of ring declaration"));
    }
    let field_str = body[..open].trim();
    let field = match field_str {
        "Q" | "QQ" => CoefField::Rationals,
        f if f.starts_with('F') || f.starts_with("GF") => {
            let digits = f.trim_start_matches("GF").trim_start_matches('F');
            let p: u64 = digits.parse().map_err(|_| perr(0, format!("bad field `{f}`")))?;
            CoefField::prime(p)?
        }
        f => return Err(perr(0, format!("unknown coefficient field `{f}`"))),
    };
    let vars: Vec<String> = body[open + 1..body.len() - 1]
        .split(',')
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    Ok(RingSpec { field, vars })
}

pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(s: &'a str) -> Self {
        Cursor { src: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(start, "expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_integer(&mut self) -> Result<u32> {
        let at = self.pos;
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| perr(at, "exponent too large"))
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
        } else {
            None
        }
    }

    pub(crate) fn expr<F: Field>(&mut self, ring: &RingRef<F>) -> Result<Polynomial<F>> {
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let mut acc = self.term(ring)?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = acc + self.term(ring)?;
            } else if self.eat(b'-') {
                acc = acc - self.term(ring)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<F: Field>(&mut self, ring: &RingRef<F>) -> Result<Polynomial<F>> {
        let mut acc = self.unary(ring)?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary(ring)?;
            } else if self.peek() == Some(b'/') && (!self.slash_then_paren() || self.divide_by_paren_constant()) {
                let at = self.pos;
                self.eat(b'/');
                let d = self.unary(ring)?;
                let c = d
                    .constant_value()
                    .and_then(|c| c.inv())
                    .ok_or_else(|| perr(at, "division only by nonzero constants"))?;
                acc = acc.scale(&c);
            } else {
                return Ok(acc);
            }
        }
    }

    fn slash_then_paren(&self) -> bool {
        let mut k = self.pos + 1;
        while k < self.src.len() && self.src[k].is_ascii_whitespace() {
            k += 1;
        }
        self.src.get(k) == Some(&b'(')
    }

    // `/ (` is a division only when the parenthesised group holds no comma
    fn divide_by_paren_constant(&mut self) -> bool {
        if self.peek() != Some(b'/') {
            return false;
        }
        let mut k = self.pos + 1;
        while k < self.src.len() && self.src[k].is_ascii_whitespace() {
            k += 1;
        }
        if self.src.get(k) != Some(&b'(') {
            return false;
        }
        let mut depth = 0i32;
        for &c in &self.src[k..] {
            match c {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return true;
                    }
                }
                b',' if depth == 1 => return false,
                _ => {}
            }
        }
        false
    }

    fn unary<F: Field>(&mut self, ring: &RingRef<F>) -> Result<Polynomial<F>> {
        if self.eat(b'-') {
            return Ok(-self.unary(ring)?);
        }
        let base = self.atom(ring)?;
        if self.eat(b'^') {
            let e = self.small_integer()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom<F: Field>(&mut self, ring: &RingRef<F>) -> Result<Polynomial<F>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr(ring)?;
                if !self.eat(b')') {
                    return Err(perr(self.pos, "expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Polynomial::constant(ring, F::from_bigint(ring.ctx(), &n)))
            }
            Some(_) => {
                let at = self.pos;
                let name = self.ident().ok_or_else(|| perr(at, "unexpected character"))?;
                ring.var_index(&name)
                    .map(|i| Polynomial::var(ring, i))
                    .ok_or_else(|| perr(at, format!("unknown variable `{name}`")))
            }
            None => Err(perr(self.pos, "unexpected end of input")),
        }
    }
}

/// Parses an infix polynomial literal in `ring`.
pub fn parse_poly<F: Field>(ring: &RingRef<F>, s: &str) -> Result<Polynomial<F>> {
    let mut c = Cursor::new(s);
    let p = c.expr(ring)?;
    if !c.at_end() {
        return Err(perr(c.pos, "trailing input"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Ring;
    use crate::scalar::{Fp, PrimeField, Rational, RationalField};

    #[test]
    fn ring_declarations() {
        let r = parse_ring_spec("ring Q[x,y]").unwrap();
        assert_eq!(r.field, CoefField::Rationals);
        assert_eq!(r.vars, vec!["x", "y"]);
        let r = parse_ring_spec("ring F7[t]").unwrap();
        assert_eq!(r.field, CoefField::PrimeField(7));
        assert!(parse_ring_spec("ring F8[t]").is_err());
        assert!(parse_ring_spec("ring R[t]").is_err());
        assert!(parse_ring_spec("ring Q[t").is_err());
    }

    #[test]
    fn polynomials() {
        let r = Ring::<Rational>::new(&["x", "y"], RationalField).unwrap();
        let p = parse_poly(&r, "y^2 - x^3").unwrap();
        assert_eq!(p.to_string(), "-x^3 + y^2");
        let q = parse_poly(&r, "-(x+y)^2 + 2*x*y").unwrap();
        assert_eq!(q.to_string(), "-x^2 - y^2");
        let h = parse_poly(&r, "x/2 + 1/(3)").unwrap();
        assert_eq!(h.to_string(), "(1/2)*x + 1/3");
        assert!(parse_poly(&r, "x/y").is_err());
        assert!(parse_poly(&r, "x + z").is_err());
        assert!(parse_poly(&r, "x +").is_err());
        assert!(parse_poly(&r, "x y").is_err());
    }

    #[test]
    fn prime_field_literals() {
        let r = Ring::<Fp>::new(&["t"], PrimeField::new(7).unwrap()).unwrap();
        let p = parse_poly(&r, "8*t + 14").unwrap();
        assert_eq!(p.to_string(), "t");
        let h = parse_poly(&r, "t/2").unwrap();
        assert_eq!(h.to_string(), "-3*t");
    }
}
