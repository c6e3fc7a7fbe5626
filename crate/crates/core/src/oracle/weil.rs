use crate::error::{Error, Result};
use crate::ff::FieldCtx;
use crate::par::Execution;
use crate::poly::{count_points_superelliptic_with, superelliptic_abs_irreducible, Poly};

use super::GUARD;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeilRecord {
    /// Affine solutions of `y^d = f(x)`.
    pub n_points: u64,
    pub abs_irreducible: bool,
    /// `q > 100 d m^2` with `m = deg f`.
    pub hypothesis_met: bool,
    /// `|N - q| <= 4 d^(3/2) m sqrt(q)`, checked as `(N - q)^2 <= 16 d^3 m^2 q`.
    pub bound_holds: bool,
}

pub fn weil_check(ctx: &FieldCtx, d: u64, f: &Poly) -> Result<WeilRecord> {
    weil_check_with(ctx, d, f, Execution::default())
}

pub fn weil_check_with(ctx: &FieldCtx, d: u64, f: &Poly, exec: Execution) -> Result<WeilRecord> {
    let q = ctx.q();
    let work = q as u128 * q as u128;
    if work > GUARD as u128 {
        return Err(Error::TooLarge(work));
    }
    if d == 0 || f.is_zero() {
        return Err(Error::ShapeMismatch("need d >= 1 and f nonzero".into()));
    }
    let m = f.deg() as u128;
    let n_points = count_points_superelliptic_with(ctx, d, f, exec);
    let dev = n_points as i128 - q as i128;
    let d = d as u128;
    Ok(WeilRecord {
        n_points,
        abs_irreducible: superelliptic_abs_irreducible(ctx, d as u64, f),
        hypothesis_met: q as u128 > 100 * d * m * m,
        bound_holds: (dev * dev) as u128 <= 16 * d * d * d * m * m * q as u128,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_cover() {
        let f = FieldCtx::prime(11).unwrap();
        let g = Poly::from_ints(&f, &[3, 1, 4]);
        let r = weil_check(&f, 1, &g).unwrap();
        assert_eq!(r.n_points, 11);
        assert!(r.bound_holds);
    }

    #[test]
    fn elliptic_over_f25() {
        let f = FieldCtx::new(5, 2, None).unwrap();
        let g = Poly::from_ints(&f, &[0, 1, 0, 1]);
        let r = weil_check(&f, 2, &g).unwrap();
        let brute = f
            .elements()
            .flat_map(|x| f.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| f.mul(y, y) == g.eval(x, &f))
            .count() as u64;
        assert_eq!(r.n_points, brute);
        assert!(r.abs_irreducible);
        assert!(!r.hypothesis_met);
        assert!(r.bound_holds);
    }

    #[test]
    fn square_is_reducible() {
        let f = FieldCtx::prime(7).unwrap();
        let g = Poly::from_ints(&f, &[1, 5, 1]); // (x - 1)^2
        assert!(!weil_check(&f, 2, &g).unwrap().abs_irreducible);
    }

    #[test]
    fn guard() {
        let f = FieldCtx::prime(4099).unwrap();
        assert!(matches!(
            weil_check(&f, 2, &Poly::x()),
            Err(Error::TooLarge(_))
        ));
    }
}
