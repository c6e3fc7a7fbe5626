//! Scalar solvers: sums of two k-th powers in `F_q`, with and without the
//! side conditions the 2x2 Jordan construction needs.

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};

/// `x`, `y` and their k-th powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub x: Fel,
    pub y: Fel,
    pub xk: Fel,
    pub yk: Fel,
}

impl PairWitness {
    pub fn check(&self, ctx: &FieldCtx, k: u64) -> bool {
        ctx.pow(self.x, k) == self.xk && ctx.pow(self.y, k) == self.yk
    }
}

/// Threshold `(k + 2k^2)^2` above which the constrained pair always exists.
pub fn waring_constant(k: u64) -> u64 {
    let t = k + 2 * k * k;
    t * t
}

/// The k-th power map of one field, tabulated once.
///
/// Candidates are scanned in the fixed order `0, g, g^2, ..., g^{q-1} = 1`
/// for the field generator `g`, which makes every solver deterministic.
#[derive(Debug, Clone)]
pub struct KthPowers {
    k: u64,
    order: Vec<Fel>,
    powers: Vec<Fel>,
    is_power: Vec<bool>,
}

impl KthPowers {
    pub fn new(ctx: &FieldCtx, k: u64) -> KthPowers {
        assert!(k >= 1, "k must be positive");
        let q = ctx.q() as usize;
        let g = ctx.generator();
        let mut order = Vec::with_capacity(q);
        order.push(Fel::ZERO);
        let mut cur = Fel::ONE;
        for _ in 1..q {
            cur = ctx.mul(cur, g);
            order.push(cur);
        }
        let powers: Vec<Fel> = order.iter().map(|&x| ctx.pow(x, k)).collect();
        let mut is_power = vec![false; q];
        for &v in &powers {
            is_power[v.index() as usize] = true;
        }
        KthPowers {
            k,
            order,
            powers,
            is_power,
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    #[inline]
    pub fn contains(&self, a: Fel) -> bool {
        self.is_power[a.index() as usize]
    }

    pub fn count(&self) -> usize {
        self.is_power.iter().filter(|&&b| b).count()
    }

    /// `(x, x^k)` in scan order.
    pub fn scan(&self) -> impl Iterator<Item = (Fel, Fel)> + '_ {
        self.order.iter().copied().zip(self.powers.iter().copied())
    }

    /// Distinct nonzero k-th powers in order of first appearance.
    pub fn distinct_nonzero(&self) -> Vec<Fel> {
        let mut seen = vec![false; self.is_power.len()];
        let mut out = Vec::new();
        for &v in &self.powers {
            if !v.is_zero() && !seen[v.index() as usize] {
                seen[v.index() as usize] = true;
                out.push(v);
            }
        }
        out
    }

    /// `x^k + y^k = c`; first hit in scan order, `y` the smallest-log root.
    pub fn two_power_rep(&self, ctx: &FieldCtx, c: Fel) -> Result<PairWitness> {
        for (x, xk) in self.scan() {
            let yk = ctx.sub(c, xk);
            if self.contains(yk) {
                let y = ctx.kth_root(yk, self.k).expect("membership implies a root");
                return Ok(PairWitness { x, y, xk, yk });
            }
        }
        Err(Error::NoRepresentation)
    }

    /// `x^k + y^k = c` with `x^k != y^k` and `x^k y^k != lambda`.
    pub fn constrained_pair(&self, ctx: &FieldCtx, c: Fel, lambda: Fel) -> Result<PairWitness> {
        debug_assert!(!c.is_zero(), "constrained_pair needs c != 0");
        for (x, xk) in self.scan() {
            let yk = ctx.sub(c, xk);
            if xk == yk || ctx.mul(xk, yk) == lambda || !self.contains(yk) {
                continue;
            }
            let y = ctx.kth_root(yk, self.k).expect("membership implies a root");
            return Ok(PairWitness { x, y, xk, yk });
        }
        Err(Error::NoSolution)
    }
}

pub fn two_power_rep(ctx: &FieldCtx, c: Fel, k: u64) -> Result<PairWitness> {
    KthPowers::new(ctx, k).two_power_rep(ctx, c)
}

pub fn constrained_pair(ctx: &FieldCtx, c: Fel, k: u64, lambda: Fel) -> Result<PairWitness> {
    KthPowers::new(ctx, k).constrained_pair(ctx, c, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(waring_constant(1), 9);
        assert_eq!(waring_constant(2), 100);
        assert_eq!(waring_constant(3), 441);
    }

    #[test]
    fn two_powers_small_fields() {
        let f7 = FieldCtx::prime(7).unwrap();
        let w = two_power_rep(&f7, f7.elem(5), 2).unwrap();
        assert_eq!((w.xk, w.yk), (f7.elem(4), f7.elem(1)));
        assert_eq!((w.x, w.y), (f7.elem(2), f7.elem(1)));
        assert!(w.check(&f7, 2));

        let z = two_power_rep(&f7, Fel::ZERO, 4).unwrap();
        assert_eq!((z.x, z.y), (Fel::ZERO, Fel::ZERO));

        assert_eq!(
            two_power_rep(&f7, f7.elem(3), 3),
            Err(Error::NoRepresentation)
        );
    }

    #[test]
    fn constrained_examples() {
        let f13 = FieldCtx::prime(13).unwrap();
        let w = constrained_pair(&f13, Fel::ONE, 2, Fel::ZERO).unwrap();
        assert_eq!((w.xk, w.yk), (f13.elem(4), f13.elem(10)));

        let f7 = FieldCtx::prime(7).unwrap();
        let w = constrained_pair(&f7, f7.elem(2), 1, f7.elem(5)).unwrap();
        assert_eq!((w.x, w.y), (Fel::ZERO, f7.elem(2)));

        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(
            constrained_pair(&f5, Fel::ONE, 4, Fel::ZERO),
            Err(Error::NoSolution)
        );
    }
}
