//! Rational canonical form with an explicit transform.
//!
//! The decomposition runs on `T = A^T`: pick a vector whose local minimal
//! polynomial is the minimal polynomial of `T`, split off its Krylov space
//! together with a `T`-invariant complement cut out by a dual functional,
//! and recurse on the complement. Transposing the Krylov bases gives rows
//! `v^T A^j`, and in that basis `A` acts by the companion matrix of the
//! block's polynomial.

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};
use crate::mat::{solve_rect, Mat};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusForm {
    /// `P` with `P A P^{-1} = C(g_1) + ... + C(g_s)` (direct sum).
    pub transform: Mat,
    /// Invariant factors `g_1 | g_2 | ... | g_s`, all monic.
    pub factors: Vec<Poly>,
}

impl FrobeniusForm {
    pub fn block_form(&self, ctx: &FieldCtx) -> Mat {
        let blocks: Vec<Mat> = self
            .factors
            .iter()
            .map(|g| Mat::companion(g, ctx).expect("invariant factors are monic"))
            .collect();
        Mat::direct_sum(&blocks)
    }
}

pub fn frobenius_form(a: &Mat, ctx: &FieldCtx) -> Result<FrobeniusForm> {
    let n = a.n();
    let mut blocks = cyclic_blocks(&a.transpose(), ctx);
    blocks.reverse();

    let mut rows: Vec<Fel> = Vec::with_capacity(n * n);
    for (g, v) in &blocks {
        let mut r = v.clone();
        for _ in 0..g.deg() {
            rows.extend_from_slice(&r);
            r = a.vec_mul(&r, ctx);
        }
    }
    let transform = Mat::from_vec(n, rows)?;
    let form = FrobeniusForm {
        transform,
        factors: blocks.into_iter().map(|(g, _)| g).collect(),
    };

    let inv = form
        .transform
        .inverse(ctx)
        .map_err(|_| Error::VerificationFailed("Frobenius transform is singular".into()))?;
    if a.conjugate_with(&form.transform, &inv, ctx) != form.block_form(ctx) {
        return Err(Error::VerificationFailed(
            "Frobenius transform does not reproduce the block form".into(),
        ));
    }
    Ok(form)
}

/// Cyclic blocks of `s` acting on column vectors, largest first.
fn cyclic_blocks(s: &Mat, ctx: &FieldCtx) -> Vec<(Poly, Vec<Fel>)> {
    let r = s.n();
    if r == 0 {
        return Vec::new();
    }
    let (v, mu) = maximal_vector(s, ctx);
    let d = mu.deg();
    if d == r {
        return vec![(mu, v)];
    }

    let krylov = krylov_vectors(s, &v, d, ctx);
    // phi with phi(s^i v) = [i == d-1]; its translates cut out an invariant
    // complement
    let kt: Vec<Fel> = krylov.iter().flatten().copied().collect();
    let mut target = vec![Fel::ZERO; d];
    target[d - 1] = Fel::ONE;
    let phi = solve_rect(&kt, d, r, &target, ctx).expect("Krylov vectors are independent");

    let mut constraints = Vec::with_capacity(r * r);
    let mut row = phi;
    for _ in 0..d {
        constraints.extend_from_slice(&row);
        row = s.vec_mul(&row, ctx);
    }
    constraints.resize(r * r, Fel::ZERO);
    let complement = Mat::from_vec(r, constraints)
        .expect("padded to square")
        .nullspace(ctx);
    let dim = complement.len();
    debug_assert_eq!(dim, r - d);

    // restriction of s to the complement, in complement coordinates
    let mut basis = vec![Fel::ZERO; r * dim];
    for (j, u) in complement.iter().enumerate() {
        for i in 0..r {
            basis[i * dim + j] = u[i];
        }
    }
    let mut restricted = Mat::zero(dim);
    for (j, u) in complement.iter().enumerate() {
        let image = s.mul_vec(u, ctx);
        let coords = solve_rect(&basis, r, dim, &image, ctx).expect("complement is invariant");
        for (i, c) in coords.into_iter().enumerate() {
            restricted[(i, j)] = c;
        }
    }

    let mut out = vec![(mu, v)];
    for (g, w) in cyclic_blocks(&restricted, ctx) {
        let mut lifted = vec![Fel::ZERO; r];
        for (c, u) in w.iter().zip(&complement) {
            for i in 0..r {
                lifted[i] = ctx.add(lifted[i], ctx.mul(*c, u[i]));
            }
        }
        out.push((g, lifted));
    }
    out
}

fn krylov_vectors(s: &Mat, v: &[Fel], d: usize, ctx: &FieldCtx) -> Vec<Vec<Fel>> {
    let mut out = Vec::with_capacity(d);
    let mut cur = v.to_vec();
    for _ in 0..d {
        let next = s.mul_vec(&cur, ctx);
        out.push(cur);
        cur = next;
    }
    out
}

/// Monic generator of `{g : g(s) v = 0}`.
pub(crate) fn local_minpoly(s: &Mat, v: &[Fel], ctx: &FieldCtx) -> Poly {
    let r = s.n();
    if v.iter().all(|c| c.is_zero()) {
        return Poly::one();
    }
    let mut cols: Vec<Vec<Fel>> = vec![v.to_vec()];
    loop {
        let next = s.mul_vec(cols.last().unwrap(), ctx);
        let j = cols.len();
        let mut m = vec![Fel::ZERO; r * j];
        for (c, col) in cols.iter().enumerate() {
            for i in 0..r {
                m[i * j + c] = col[i];
            }
        }
        if let Some(coef) = solve_rect(&m, r, j, &next, ctx) {
            let mut g: Vec<Fel> = coef.into_iter().map(|c| ctx.neg(c)).collect();
            g.push(Fel::ONE);
            return Poly::new(g);
        }
        cols.push(next);
    }
}

/// A vector whose local minimal polynomial is the minimal polynomial of `s`.
fn maximal_vector(s: &Mat, ctx: &FieldCtx) -> (Vec<Fel>, Poly) {
    let r = s.n();
    let mut w = vec![Fel::ZERO; r];
    let mut f = Poly::one();
    for i in 0..r {
        let mut e = vec![Fel::ZERO; r];
        e[i] = Fel::ONE;
        let h = local_minpoly(s, &e, ctx);
        if h.divides(&f, ctx) {
            continue;
        }
        (w, f) = combine(s, &w, &f, &e, &h, ctx);
    }
    (w, f)
}

/// Given `v1`, `v2` with local minimal polynomials `f1`, `f2`, a vector whose
/// local minimal polynomial is `lcm(f1, f2)`.
fn combine(
    s: &Mat,
    v1: &[Fel],
    f1: &Poly,
    v2: &[Fel],
    f2: &Poly,
    ctx: &FieldCtx,
) -> (Vec<Fel>, Poly) {
    let base = coprime_base(&[f1.clone(), f2.clone()], ctx);
    let mut keep1 = Poly::one();
    let mut keep2 = Poly::one();
    for c in &base {
        let a = multiplicity(c, f1, ctx);
        let b = multiplicity(c, f2, ctx);
        if a >= b {
            for _ in 0..a {
                keep1 = keep1.mul(c, ctx);
            }
        } else {
            for _ in 0..b {
                keep2 = keep2.mul(c, ctx);
            }
        }
    }
    let h1 = f1.div_exact(&keep1, ctx).expect("kept part divides f1");
    let h2 = f2.div_exact(&keep2, ctx).expect("kept part divides f2");
    let u1 = s.eval_poly(&h1, ctx).mul_vec(v1, ctx);
    let u2 = s.eval_poly(&h2, ctx).mul_vec(v2, ctx);
    let w: Vec<Fel> = u1.iter().zip(&u2).map(|(&a, &b)| ctx.add(a, b)).collect();
    (w, keep1.mul(&keep2, ctx))
}

fn multiplicity(c: &Poly, f: &Poly, ctx: &FieldCtx) -> usize {
    let mut e = 0;
    let mut cur = f.clone();
    while let Some(next) = cur.div_exact(c, ctx) {
        e += 1;
        cur = next;
    }
    e
}

/// Pairwise coprime monic polynomials such that every input is a product of
/// powers of them.
fn coprime_base(polys: &[Poly], ctx: &FieldCtx) -> Vec<Poly> {
    let mut list: Vec<Poly> = polys
        .iter()
        .filter(|p| p.deg() > 0)
        .map(|p| p.monic(ctx))
        .collect();
    'refine: loop {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let g = list[i].gcd(&list[j], ctx);
                if g.deg() == 0 {
                    continue;
                }
                let b = list.swap_remove(j);
                let a = list.swap_remove(i);
                for part in [
                    a.div_exact(&g, ctx).expect("gcd divides"),
                    b.div_exact(&g, ctx).expect("gcd divides"),
                    g,
                ] {
                    if part.deg() > 0 {
                        list.push(part);
                    }
                }
                continue 'refine;
            }
        }
        return list;
    }
}
