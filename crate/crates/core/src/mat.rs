//! Square matrices over `F_q` and the exact linear algebra the engine needs.

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};
use crate::poly::Poly;

/// `n x n` matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    n: usize,
    data: Vec<Fel>,
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat {
            n,
            data: vec![Fel::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Mat {
        Mat::scalar(n, Fel::ONE)
    }

    pub fn scalar(n: usize, c: Fel) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn diag(entries: &[Fel]) -> Mat {
        let mut m = Mat::zero(entries.len());
        for (i, &c) in entries.iter().enumerate() {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fel>>) -> Result<Mat> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("rows must form a square matrix".into()));
        }
        Ok(Mat {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Square matrix from row-major entries.
    pub fn from_vec(n: usize, data: Vec<Fel>) -> Result<Mat> {
        if data.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        Ok(Mat { n, data })
    }

    /// Matrix with entries from the prime subfield.
    pub fn from_ints(ctx: &FieldCtx, rows: &[&[i64]]) -> Mat {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must be square");
        Mat {
            n,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| ctx.from_int(v)))
                .collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Fel>]) -> Mat {
        let n = cols.len();
        let mut m = Mat::zero(n);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n, "column length must match column count");
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Fel] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Fel] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Fel> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_scalar(&self) -> bool {
        let c = if self.n == 0 { Fel::ZERO } else { self[(0, 0)] };
        *self == Mat::scalar(self.n, c)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn add(&self, other: &Mat, ctx: &FieldCtx) -> Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| ctx.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat, ctx: &FieldCtx) -> Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| ctx.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Fel, ctx: &FieldCtx) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|&a| ctx.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Mat, ctx: &FieldCtx) -> Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = ctx.add(out[(i, j)], ctx.mul(a, other[(l, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fel], ctx: &FieldCtx) -> Vec<Fel> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fel::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Fel], ctx: &FieldCtx) -> Vec<Fel> {
        (0..self.n)
            .map(|j| {
                (0..self.n).fold(Fel::ZERO, |acc, i| {
                    ctx.add(acc, ctx.mul(v[i], self[(i, j)]))
                })
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64, ctx: &FieldCtx) -> Mat {
        let mut acc = Mat::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }

    pub fn det(&self, ctx: &FieldCtx) -> Fel {
        let n = self.n;
        let mut a = self.clone();
        let mut det = Fel::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Fel::ZERO;
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = ctx.neg(det);
            }
            let pv = a[(col, col)];
            det = ctx.mul(det, pv);
            let inv = ctx.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let t = ctx.mul(a[(r, col)], inv);
                if t.is_zero() {
                    continue;
                }
                for c in col..n {
                    a[(r, c)] = ctx.sub(a[(r, c)], ctx.mul(t, a[(col, c)]));
                }
            }
        }
        det
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<Mat> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::Singular)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let s = ctx.inv(a[(col, col)])?;
            a.scale_row(col, s, ctx);
            inv.scale_row(col, s, ctx);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let t = a[(r, col)];
                if t.is_zero() {
                    continue;
                }
                a.add_row_multiple(r, col, ctx.neg(t), ctx);
                inv.add_row_multiple(r, col, ctx.neg(t), ctx);
            }
        }
        Ok(inv)
    }

    /// `P A P^{-1}`
    pub fn conjugate(&self, p: &Mat, ctx: &FieldCtx) -> Result<Mat> {
        let p_inv = p.inverse(ctx)?;
        Ok(p.mul(self, ctx).mul(&p_inv, ctx))
    }

    /// `P A P^{-1}` with the inverse supplied.
    pub fn conjugate_with(&self, p: &Mat, p_inv: &Mat, ctx: &FieldCtx) -> Mat {
        p.mul(self, ctx).mul(p_inv, ctx)
    }

    pub fn direct_sum(blocks: &[Mat]) -> Mat {
        let n = blocks.iter().map(Mat::n).sum();
        let mut out = Mat::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    out[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.n;
        }
        out
    }

    /// Companion matrix of monic `g = x^n - a_{n-1} x^{n-1} - ... - a_0`:
    /// ones on the superdiagonal, `(a_0, ..., a_{n-1})` as the last row.
    pub fn companion(g: &Poly, ctx: &FieldCtx) -> Result<Mat> {
        if !g.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = g.deg();
        if n == 0 {
            return Err(Error::ShapeMismatch("companion of a constant".into()));
        }
        let mut c = Mat::zero(n);
        for i in 0..n - 1 {
            c[(i, i + 1)] = Fel::ONE;
        }
        for j in 0..n {
            c[(n - 1, j)] = ctx.neg(g.coeff(j));
        }
        Ok(c)
    }

    /// Monic polynomial whose companion matrix is `self`, if `self` has the
    /// companion shape.
    pub fn companion_poly(&self, ctx: &FieldCtx) -> Option<Poly> {
        let n = self.n;
        if n == 0 {
            return None;
        }
        for i in 0..n - 1 {
            for j in 0..n {
                let want = if j == i + 1 { Fel::ONE } else { Fel::ZERO };
                if self[(i, j)] != want {
                    return None;
                }
            }
        }
        let mut coeffs: Vec<Fel> = (0..n).map(|j| ctx.neg(self[(n - 1, j)])).collect();
        coeffs.push(Fel::ONE);
        Some(Poly::new(coeffs))
    }

    /// `g(A)`
    pub fn eval_poly(&self, g: &Poly, ctx: &FieldCtx) -> Mat {
        let mut acc = Mat::zero(self.n);
        for &c in g.coeffs().iter().rev() {
            acc = acc.mul(self, ctx).add(&Mat::scalar(self.n, c), ctx);
        }
        acc
    }

    /// `det(xI - A)` via similarity reduction to upper Hessenberg form and
    /// the leading-minor recurrence; no division by integers.
    pub fn char_poly(&self, ctx: &FieldCtx) -> Poly {
        let n = self.n;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&r| !h[(r, j)].is_zero()) else {
                continue;
            };
            if piv != j + 1 {
                h.swap_rows(piv, j + 1);
                h.swap_cols(piv, j + 1);
            }
            let inv = ctx.inv(h[(j + 1, j)]).expect("pivot is nonzero");
            for r in j + 2..n {
                let t = ctx.mul(h[(r, j)], inv);
                if t.is_zero() {
                    continue;
                }
                // row_r -= t row_{j+1}; col_{j+1} += t col_r
                h.add_row_multiple(r, j + 1, ctx.neg(t), ctx);
                for i in 0..n {
                    h[(i, j + 1)] = ctx.add(h[(i, j + 1)], ctx.mul(t, h[(i, r)]));
                }
            }
        }

        // p[m] = det(xI - H[..m, ..m])
        let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
        p.push(Poly::one());
        for m in 0..n {
            let lin = Poly::linear(ctx, h[(m, m)]);
            let mut next = lin.mul(&p[m], ctx);
            let mut beta = Fel::ONE;
            for i in (0..m).rev() {
                beta = ctx.mul(beta, h[(i + 1, i)]);
                let coef = ctx.mul(h[(i, m)], beta);
                if !coef.is_zero() {
                    next = next.sub(&p[i].scale(coef, ctx), ctx);
                }
            }
            p.push(next);
        }
        p.pop().expect("recurrence is non-empty")
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, ctx: &FieldCtx) -> (Mat, Vec<usize>) {
        let n = self.n;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == n {
                break;
            }
            let Some(piv) = (row..n).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(piv, row);
            let s = ctx.inv(a[(row, col)]).expect("pivot is nonzero");
            a.scale_row(row, s, ctx);
            for r in 0..n {
                if r != row && !a[(r, col)].is_zero() {
                    let t = ctx.neg(a[(r, col)]);
                    a.add_row_multiple(r, row, t, ctx);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.rref(ctx).1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self, ctx: &FieldCtx) -> Vec<Vec<Fel>> {
        let n = self.n;
        let (r, pivots) = self.rref(ctx);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Fel::ZERO; n];
                v[f] = Fel::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = ctx.neg(r[(row, f)]);
                }
                v
            })
            .collect()
    }

    /// Some `x` with `A x = b`.
    pub fn solve(&self, b: &[Fel], ctx: &FieldCtx) -> Option<Vec<Fel>> {
        solve_rect(&self.data, self.n, self.n, b, ctx)
    }

    /// `(P, eigenvalues)` with `P^{-1} A P = diag(eigenvalues)`.
    pub fn diagonalize(&self, ctx: &FieldCtx) -> Result<(Mat, Vec<Fel>)> {
        let n = self.n;
        let roots = self.char_poly(ctx).roots_with_multiplicity(ctx);
        if roots.iter().map(|r| r.1).sum::<usize>() < n {
            return Err(Error::NotSplit);
        }
        let mut cols = Vec::with_capacity(n);
        let mut eig = Vec::with_capacity(n);
        for (lambda, mult) in roots {
            let shifted = self.sub(&Mat::scalar(n, lambda), ctx);
            let basis = shifted.nullspace(ctx);
            if basis.len() < mult {
                return Err(Error::NotDiagonalizable);
            }
            for v in basis {
                cols.push(v);
                eig.push(lambda);
            }
        }
        Ok((Mat::from_columns(&cols), eig))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.n {
            self.data.swap(i * self.n + a, i * self.n + b);
        }
    }

    fn scale_row(&mut self, r: usize, s: Fel, ctx: &FieldCtx) {
        for j in 0..self.n {
            self[(r, j)] = ctx.mul(self[(r, j)], s);
        }
    }

    /// row_dst += t * row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, t: Fel, ctx: &FieldCtx) {
        for j in 0..self.n {
            let v = ctx.mul(t, self[(src, j)]);
            self[(dst, j)] = ctx.add(self[(dst, j)], v);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Fel;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Fel {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fel {
        &mut self.data[i * self.n + j]
    }
}

/// Solves `M x = b` for a `rows x cols` row-major `M`.
pub(crate) fn solve_rect(
    m: &[Fel],
    rows: usize,
    cols: usize,
    b: &[Fel],
    ctx: &FieldCtx,
) -> Option<Vec<Fel>> {
    let w = cols + 1;
    let mut a: Vec<Fel> = Vec::with_capacity(rows * w);
    for i in 0..rows {
        a.extend_from_slice(&m[i * cols..(i + 1) * cols]);
        a.push(b[i]);
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(piv) = (row..rows).find(|&r| !a[r * w + col].is_zero()) else {
            continue;
        };
        for j in 0..w {
            a.swap(piv * w + j, row * w + j);
        }
        let s = ctx.inv(a[row * w + col]).ok()?;
        for j in 0..w {
            a[row * w + j] = ctx.mul(a[row * w + j], s);
        }
        for r in 0..rows {
            let t = a[r * w + col];
            if r == row || t.is_zero() {
                continue;
            }
            for j in 0..w {
                let v = ctx.mul(t, a[row * w + j]);
                a[r * w + j] = ctx.sub(a[r * w + j], v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..rows).any(|r| !a[r * w + cols].is_zero()) {
        return None;
    }
    let mut x = vec![Fel::ZERO; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r * w + cols];
    }
    Some(x)
}
