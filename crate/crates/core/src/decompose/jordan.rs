//! `2x2` matrices with a repeated eigenvalue.

use super::{Case, Decomposition, Engine};
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};
use crate::mat::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JordanKind {
    Scalar,
    Jordan,
}

pub(crate) fn jordan_matrix(lambda: Fel) -> Mat {
    Mat::from_rows(vec![vec![lambda, Fel::ONE], vec![Fel::ZERO, lambda]]).expect("2x2")
}

/// For `A` with characteristic polynomial `(x - lambda)^2`: either scalar
/// (with `P = I`), or `P` with `P^{-1} A P = [[lambda, 1], [0, lambda]]`.
pub fn jordan_classify_2x2(ctx: &FieldCtx, a: &Mat) -> Result<(JordanKind, Mat)> {
    if a.n() != 2 {
        return Err(Error::ShapeMismatch("expected a 2x2 matrix".into()));
    }
    let lambda = match a.char_poly(ctx).roots_with_multiplicity(ctx).as_slice() {
        [(l, 2)] => *l,
        [] => return Err(Error::NotSplit),
        _ => {
            return Err(Error::ShapeMismatch(
                "eigenvalues are distinct".into(),
            ))
        }
    };
    if a.is_scalar() {
        return Ok((JordanKind::Scalar, Mat::identity(2)));
    }
    let shifted = a.sub(&Mat::scalar(2, lambda), ctx);
    let v = shifted.nullspace(ctx).swap_remove(0);
    let w = shifted.solve(&v, ctx).expect("nilpotent of rank one");
    Ok((JordanKind::Jordan, Mat::from_columns(&[v, w])))
}

/// Two diagonalizable summands of `[[lambda, 1], [0, lambda]]`, each with
/// two distinct k-th power eigenvalues.
///
/// `B = [[a, b], [1, d]]` and `C = [[lambda - a, b'], [-1, lambda - d]]` have
/// the prescribed traces and determinants, so their eigenvalues are the
/// chosen k-th powers. `B + C = [[lambda, x], [0, lambda]]` with
/// `x = b + b'`, and `D = diag(x^{-1}, 1)` rescales the corner to one.
pub(crate) fn jordan_block_decompose(engine: &Engine<'_>, lambda: Fel) -> Result<Decomposition> {
    let ctx = engine.ctx();
    let kp = engine.powers();
    let q = ctx.q();
    let two_lambda = ctx.add(lambda, lambda);
    for ai in 0..q {
        let a = ctx.elem((ai + 1) % q);
        for di in 0..q {
            let d = ctx.elem(di);
            let tr1 = ctx.add(a, d);
            let tr2 = ctx.sub(two_lambda, tr1);
            if tr1.is_zero() || tr2.is_zero() {
                continue;
            }
            let det1 = ctx.mul(a, d);
            let la = ctx.sub(lambda, a);
            let ld = ctx.sub(lambda, d);
            let det2 = ctx.mul(la, ld);
            let Ok(p1) = kp.constrained_pair(ctx, tr1, det1) else {
                continue;
            };
            let Ok(p2) = kp.constrained_pair(ctx, tr2, det2) else {
                continue;
            };
            let b = ctx.sub(det1, ctx.mul(p1.xk, p1.yk));
            let b2 = ctx.sub(ctx.mul(p2.xk, p2.yk), det2);
            let x = ctx.add(b, b2);
            let Ok(x_inv) = ctx.inv(x) else {
                continue;
            };
            let bm = Mat::from_rows(vec![vec![a, b], vec![Fel::ONE, d]])?;
            let cm = Mat::from_rows(vec![vec![la, b2], vec![ctx.neg(Fel::ONE), ld]])?;
            let dm = Mat::diag(&[x_inv, Fel::ONE]);
            let dm_inv = Mat::diag(&[x, Fel::ONE]);
            let mut witnesses = Vec::with_capacity(2);
            for m in [&bm, &cm] {
                let (p, eig) = m.diagonalize(ctx)?;
                let w = engine
                    .single_root(&p, &eig)
                    .ok_or_else(|| Error::VerificationFailed("summand eigenvalue not a k-th power".into()))?;
                witnesses.push(w.conjugate_with(&dm, &dm_inv, ctx));
            }
            return Ok(Decomposition {
                k: engine.k(),
                witnesses,
                case: Case::JordanBlock,
            });
        }
    }
    Err(Error::need_larger("no admissible trace/determinant choice"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify() {
        let f = FieldCtx::prime(7).unwrap();
        let j = Mat::from_ints(&f, &[&[2, 1], &[0, 2]]);
        assert_eq!(jordan_classify_2x2(&f, &j).unwrap(), (JordanKind::Jordan, Mat::identity(2)));
        let s = Mat::scalar(2, f.elem(3));
        assert_eq!(jordan_classify_2x2(&f, &s).unwrap().0, JordanKind::Scalar);

        let a = Mat::from_ints(&f, &[&[1, 1], &[-1, 3]]);
        let (kind, p) = jordan_classify_2x2(&f, &a).unwrap();
        assert_eq!(kind, JordanKind::Jordan);
        let p_inv = p.inverse(&f).unwrap();
        assert_eq!(p_inv.mul(&a, &f).mul(&p, &f), jordan_matrix(f.elem(2)));

        assert!(jordan_classify_2x2(&f, &Mat::diag(&[f.elem(1), f.elem(2)])).is_err());
    }

    #[test]
    fn jordan_block_witnesses() {
        let f = FieldCtx::prime(101).unwrap();
        for k in [2, 3, 5] {
            let e = Engine::new(&f, k).without_fallback();
            for l in [0, 1, 50] {
                let lambda = f.elem(l);
                let d = e.jordan_block(lambda).unwrap();
                assert_eq!(d.terms(), 2);
                assert_eq!(d.evaluate(&f), jordan_matrix(lambda));
            }
        }
    }
}
