//! Companion matrices of size `n >= 3` as a sum `B + C` of diagonalizable
//! matrices whose eigenvalues are chosen k-th powers.
//!
//! The leading `(n-1) x (n-1)` block of the companion matrix is its
//! superdiagonal of ones. It is split into `G` and `H`, which alternate the
//! superdiagonal ones between them and carry `-x` and `x` on alternating
//! diagonal positions, so both are triangular after a permutation with
//! eigenvalues in `{0, x}` or `{0, -x}`. The last row `v` of coefficients goes
//! to one summand, the remaining superdiagonal one `e` to the other, and the
//! corner entry `a_{n-1}` is split as `b + c`.

use super::{Case, Decomposition, Engine};
use crate::error::{Error, Result};
use crate::ff::Fel;
use crate::mat::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tail {
    /// `B = [[G, 0], [v, b]]`, `C = [[H, e], [0, c]]`
    RowInFirst,
    /// `B = [[G, e], [0, b]]`, `C = [[H, 0], [v, c]]`
    RowInSecond,
}

#[derive(Clone, Copy, Debug)]
struct Layout {
    /// Parity of the superdiagonal positions `G` receives.
    parity: usize,
    tail: Tail,
    b: Fel,
    c: Fel,
    case: Case,
}

pub(crate) fn companion_split(engine: &Engine<'_>, a: &Mat) -> Result<Decomposition> {
    let ctx = engine.ctx();
    let n = a.n();
    if n < 3 {
        return Err(Error::ShapeMismatch("companion split needs n >= 3".into()));
    }
    if a.companion_poly(ctx).is_none() {
        return Err(Error::NotCompanion);
    }
    let corner = a[(n - 1, n - 1)];
    let kp = engine.powers();
    let mut layouts = Vec::new();
    let minus_one = ctx.neg(Fel::ONE);
    if n % 2 == 1 {
        if corner.is_zero() {
            layouts.push(Layout {
                parity: 0,
                tail: Tail::RowInFirst,
                b: minus_one,
                c: Fel::ONE,
                case: Case::CompanionOddZeroTrace,
            });
        } else {
            layouts.push(Layout {
                parity: 0,
                tail: Tail::RowInFirst,
                b: corner,
                c: Fel::ZERO,
                case: Case::CompanionOddCorner,
            });
            if let Ok(w) = kp.constrained_pair(ctx, corner, Fel::ZERO) {
                layouts.push(Layout {
                    parity: 0,
                    tail: Tail::RowInFirst,
                    b: w.xk,
                    c: w.yk,
                    case: Case::CompanionOddSplit,
                });
            }
        }
    } else if corner.is_zero() {
        layouts.push(Layout {
            parity: 0,
            tail: Tail::RowInSecond,
            b: minus_one,
            c: Fel::ONE,
            case: Case::CompanionEvenZeroTrace,
        });
    } else {
        if let Ok(w) = kp.constrained_pair(ctx, corner, Fel::ZERO) {
            layouts.push(Layout {
                parity: 0,
                tail: Tail::RowInSecond,
                b: w.xk,
                c: w.yk,
                case: Case::CompanionEvenSplit,
            });
        }
        layouts.push(Layout {
            parity: 1,
            tail: Tail::RowInFirst,
            b: corner,
            c: Fel::ZERO,
            case: Case::CompanionEvenCorner,
        });
    }

    let xs = kp.distinct_nonzero();
    let mut best: Option<Decomposition> = None;
    for layout in layouts {
        for &x in &xs {
            let Some(d) = try_layout(engine, a, &layout, x)? else {
                continue;
            };
            if d.terms() <= 2 {
                return Ok(d);
            }
            if best.as_ref().is_none_or(|b| d.terms() < b.terms()) {
                best = Some(d);
            }
            break;
        }
    }
    best.ok_or_else(|| Error::need_larger("no admissible companion split"))
}

fn assemble(a: &Mat, layout: &Layout, x: Fel, ctx: &crate::FieldCtx) -> (Mat, Mat) {
    let n = a.n();
    let m = n - 1;
    let s = layout.parity;
    let mut g = Mat::zero(n);
    let mut h = Mat::zero(n);
    for j in 0..m {
        if j % 2 == (s + 1) % 2 {
            g[(j, j)] = ctx.neg(x);
            h[(j, j)] = x;
        }
    }
    for i in 0..m.saturating_sub(1) {
        if i % 2 == s {
            g[(i, i + 1)] = Fel::ONE;
        } else {
            h[(i, i + 1)] = Fel::ONE;
        }
    }
    let (row_holder, edge_holder) = match layout.tail {
        Tail::RowInFirst => (&mut g, &mut h),
        Tail::RowInSecond => (&mut h, &mut g),
    };
    for j in 0..m {
        row_holder[(m, j)] = a[(m, j)];
    }
    edge_holder[(m - 1, m)] = Fel::ONE;
    g[(m, m)] = layout.b;
    h[(m, m)] = layout.c;
    (g, h)
}

fn try_layout(engine: &Engine<'_>, a: &Mat, layout: &Layout, x: Fel) -> Result<Option<Decomposition>> {
    let ctx = engine.ctx();
    let (b, c) = assemble(a, layout, x, ctx);
    if b.add(&c, ctx) != *a {
        return Err(Error::VerificationFailed("companion split does not sum to the input".into()));
    }
    let (Ok((pb, eb)), Ok((pc, ec))) = (b.diagonalize(ctx), c.diagonalize(ctx)) else {
        return Ok(None);
    };
    let Some(wc) = engine.single_root(&pc, &ec) else {
        return Ok(None);
    };
    let mut witnesses = match engine.single_root(&pb, &eb) {
        Some(wb) => vec![wb],
        None => match engine.split_diagonal(&pb, &eb) {
            Ok([w1, w2]) => vec![w1, w2],
            Err(_) => return Ok(None),
        },
    };
    witnesses.push(wc);
    Ok(Some(Decomposition {
        k: engine.k(),
        witnesses,
        case: layout.case,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;
    use crate::poly::Poly;

    fn companion(f: &FieldCtx, low: &[u64]) -> Mat {
        let mut c = low.to_vec();
        c.push(1);
        Mat::companion(&Poly::from_ints(f, &c), f).unwrap()
    }

    #[test]
    fn every_layout_sums_correctly() {
        let f = FieldCtx::prime(101).unwrap();
        let e = Engine::new(&f, 2).without_fallback();
        for low in [
            vec![3, 4, 0],
            vec![3, 4, 7],
            vec![1, 2, 3, 0],
            vec![1, 2, 3, 9],
            vec![5, 0, 2, 8, 0],
            vec![5, 0, 2, 8, 1],
        ] {
            let a = companion(&f, &low);
            let d = e.companion_split(&a).unwrap();
            assert!(d.case.is_companion_split());
            assert!(d.terms() <= 3);
            assert_eq!(d.evaluate(&f), a);
        }
    }

    #[test]
    fn fifth_powers_need_two_terms_only() {
        let f = FieldCtx::prime(101).unwrap();
        let e = Engine::new(&f, 5).without_fallback();
        for corner in 0..101 {
            for low in [vec![2, 3, corner], vec![2, 3, 5, corner]] {
                let a = companion(&f, &low);
                let d = e.companion_split(&a).unwrap();
                assert_eq!(d.terms(), 2, "corner {corner}, case {}", d.case);
            }
        }
    }

    #[test]
    fn rejects_non_companion() {
        let f = FieldCtx::prime(11).unwrap();
        let e = Engine::new(&f, 2);
        assert_eq!(e.companion_split(&Mat::identity(3)), Err(Error::NotCompanion));
    }
}
