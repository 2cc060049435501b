//! Dense exact linear algebra over a field, and division-free determinant /
//! characteristic polynomial over polynomial rings (Berkowitz).

use crate::scalar::Field;

use super::poly::{Polynomial, RingRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(ctx); rows * cols] }
    }

    pub fn from_rows(ctx: &F::Ctx, cols: usize, rows: Vec<Vec<F>>) -> Self {
        let mut m = Self::zeros(ctx, rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let zero = self.data.first().or(other.data.first()).map(|v| v.zero_like());
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone().expect("nonempty product");
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc + a.clone() * other.get(k, j);
                    }
                }
                out.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data: out }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().unwrap();
            for j in c..self.cols {
                let v = self.get(r, j).clone() * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    if self.get(r, j).is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).clone() - f.clone() * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn nullspace(&self, ctx: &F::Ctx) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(ctx); self.cols];
                v[f] = F::one(ctx);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`, if one exists.
    pub fn solve(&self, ctx: &F::Ctx, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(ctx); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Dimension of the span of `vectors` (all of equal length).
pub fn span_rank<F: Field>(ctx: &F::Ctx, vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(ctx, vectors[0].len(), vectors.to_vec()).rank()
}

/// Whether two families span the same subspace.
pub fn same_span<F: Field>(ctx: &F::Ctx, a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    let ra = span_rank(ctx, a);
    let rb = span_rank(ctx, b);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && span_rank(ctx, &both) == ra
}

/// Characteristic polynomial coefficients of a square matrix over a
/// commutative ring of polynomials (optionally reduced by `reduce` after
/// every product, for quotient rings). Returns `c` with
/// `det(X I - M) = c[0] X^n + c[1] X^{n-1} + ... + c[n]`, `c[0] = 1`.
/// Berkowitz' algorithm: no divisions.
pub fn charpoly_berkowitz<F: Field>(
    ring: &RingRef<F>,
    m: &[Vec<Polynomial<F>>],
    reduce: &dyn Fn(Polynomial<F>) -> Polynomial<F>,
) -> Vec<Polynomial<F>> {
    let n = m.len();
    let one = Polynomial::one(ring);
    let zero = Polynomial::zero(ring);
    if n == 0 {
        return vec![one];
    }
    // vector of coefficients for the leading r x r principal submatrix
    let mut c: Vec<Polynomial<F>> = vec![one.clone(), -m[0][0].clone()];
    for r in 1..n {
        // partition: A = m[..r][..r], R = m[r][..r], S = m[..r][r], a = m[r][r]
        let a = &m[r][r];
        // powers: R A^k S for k = 0..r-1
        let mut vecs: Vec<Polynomial<F>> = (0..r).map(|i| m[i][r].clone()).collect(); // A^0 S
        let mut rak_s: Vec<Polynomial<F>> = Vec::with_capacity(r);
        for _ in 0..r {
            let mut dot = zero.clone();
            for i in 0..r {
                dot = dot + &(&m[r][i] * &vecs[i]);
            }
            rak_s.push(reduce(dot));
            let mut next = vec![zero.clone(); r];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = zero.clone();
                for (j, v) in vecs.iter().enumerate() {
                    acc = acc + &(&m[i][j] * v);
                }
                *slot = reduce(acc);
            }
            vecs = next;
        }
        // Toeplitz column: [1, -a, -R S, -R A S, ..., -R A^{r-1} S]
        let mut col = vec![one.clone(), -a.clone()];
        for v in &rak_s {
            col.push(-v.clone());
        }
        // new c = T * c where T is lower-triangular Toeplitz (r+2) x (r+1)
        let mut nc = vec![zero.clone(); r + 2];
        for (i, slot) in nc.iter_mut().enumerate() {
            let mut acc = zero.clone();
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    acc = acc + &(&col[i - j] * cj);
                }
            }
            *slot = reduce(acc);
        }
        c = nc;
    }
    c
}

/// Determinant via [`charpoly_berkowitz`].
pub fn det_berkowitz<F: Field>(
    ring: &RingRef<F>,
    m: &[Vec<Polynomial<F>>],
    reduce: &dyn Fn(Polynomial<F>) -> Polynomial<F>,
) -> Polynomial<F> {
    let c = charpoly_berkowitz(ring, m, reduce);
    let n = m.len();
    let last = c[n].clone();
    if n % 2 == 0 {
        last
    } else {
        -last
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Ring;
    use crate::exactalg::parse::parse_poly;
    use crate::scalar::{Rational, RationalField};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rank_nullspace_solve() {
        let ctx = RationalField;
        let m = Matrix::from_rows(&ctx, 3, vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace(&ctx);
        assert_eq!(ns.len(), 1);
        let v = Matrix::from_rows(&ctx, 1, ns[0].iter().map(|x| vec![x.clone()]).collect());
        assert!(m.mul(&v).is_zero());
        let x = m.solve(&ctx, &[q(1), q(2), q(1)]).unwrap();
        let xv = Matrix::from_rows(&ctx, 1, x.iter().map(|v| vec![v.clone()]).collect());
        assert_eq!(m.mul(&xv).row(2), &[q(1)]);
        assert!(m.solve(&ctx, &[q(1), q(3), q(0)]).is_none());
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let r = Ring::<Rational>::new(&["x"], RationalField).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let m = vec![
            vec![p("x"), p("1"), p("2")],
            vec![p("x^2"), p("0"), p("x")],
            vec![p("3"), p("x+1"), p("1")],
        ];
        let id = |a: Polynomial<Rational>| a;
        let det = det_berkowitz(&r, &m, &id);
        // cofactor expansion along the first row
        let expect = &(&p("x") * &(&(&p("0") * &p("1")) - &(&p("x") * &p("x+1"))))
            - &(&p("1") * &(&(&p("x^2") * &p("1")) - &(&p("x") * &p("3"))))
            + (&p("2") * &(&(&p("x^2") * &p("x+1")) - &(&p("0") * &p("3"))));
        assert_eq!(det, expect);
        let c = charpoly_berkowitz(&r, &m, &id);
        // trace coefficient
        assert_eq!(c[1], -(p("x") + p("1")));
    }
}
