//! `2x2` matrices with irreducible characteristic polynomial.
//!
//! `F_q[A]` is a field with `q^2` elements. Solving `u^k + v^k = t` there, with
//! `t` the class of `x`, gives polynomials `u(x)`, `v(x)` of degree at most one,
//! and `u(A)^k + v(A)^k = A`.

use super::{Case, Decomposition, Engine};
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};
use crate::mat::Mat;
use crate::nt;

/// `F_q[t] / (t^2 + c1 t + c0)`, elements `(a, b) = a + b t`.
struct QuadExt<'a> {
    ctx: &'a FieldCtx,
    c0: Fel,
    c1: Fel,
}

type Qel = (Fel, Fel);

impl QuadExt<'_> {
    fn elem(&self, i: u64) -> Qel {
        let q = self.ctx.q();
        (self.ctx.elem(i % q), self.ctx.elem(i / q))
    }

    fn sub(&self, x: Qel, y: Qel) -> Qel {
        (self.ctx.sub(x.0, y.0), self.ctx.sub(x.1, y.1))
    }

    fn mul(&self, x: Qel, y: Qel) -> Qel {
        let f = self.ctx;
        let bd = f.mul(x.1, y.1);
        (
            f.sub(f.mul(x.0, y.0), f.mul(bd, self.c0)),
            f.sub(f.add(f.mul(x.0, y.1), f.mul(x.1, y.0)), f.mul(bd, self.c1)),
        )
    }

    fn pow(&self, mut x: Qel, mut e: u64) -> Qel {
        let mut acc = (Fel::ONE, Fel::ZERO);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn irreducible_quadratic_decompose(engine: &Engine<'_>, a: &Mat) -> Result<Decomposition> {
    let ctx = engine.ctx();
    let k = engine.k();
    if a.n() != 2 {
        return Err(Error::ShapeMismatch("expected a 2x2 matrix".into()));
    }
    let chi = a.char_poly(ctx);
    if !chi.is_irreducible(ctx) {
        return Err(Error::ShapeMismatch(
            "characteristic polynomial is reducible".into(),
        ));
    }
    let ext = QuadExt {
        ctx,
        c0: chi.coeff(0),
        c1: chi.coeff(1),
    };
    let size = ctx.q() * ctx.q();
    let order = size - 1;
    let d = nt::gcd(k, order);
    let residue_exp = order / d;
    let one = (Fel::ONE, Fel::ZERO);
    let zero = (Fel::ZERO, Fel::ZERO);
    let t = (Fel::ZERO, Fel::ONE);

    for i in 0..size {
        let u = ext.elem(i);
        let w = ext.sub(t, ext.pow(u, k));
        if w != zero && ext.pow(w, residue_exp) != one {
            continue;
        }
        let v = (0..size)
            .map(|j| ext.elem(j))
            .find(|&v| ext.pow(v, k) == w)
            .expect("residue test guarantees a root");
        let eval = |(c, b): Qel| Mat::scalar(2, c).add(&a.scale(b, ctx), ctx);
        return Ok(Decomposition {
            k,
            witnesses: vec![eval(u), eval(v)],
            case: Case::IrreducibleQuadratic,
        });
    }
    Err(Error::need_larger("x is not a sum of two k-th powers in F_q[A]"))
}
