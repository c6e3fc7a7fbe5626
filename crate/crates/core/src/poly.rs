//! Dense univariate polynomials over `F_q`.

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};
use crate::par::{self, Execution};

/// Little-endian coefficient list with no trailing zeros; the zero
/// polynomial has no coefficients and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Fel>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Fel::ONE)
    }

    pub fn x() -> Poly {
        Poly::new(vec![Fel::ZERO, Fel::ONE])
    }

    pub fn constant(c: Fel) -> Poly {
        Poly::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<Fel>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Coefficients taken from the prime subfield.
    pub fn from_ints(ctx: &FieldCtx, c: &[u64]) -> Poly {
        Poly::new(c.iter().map(|&v| ctx.from_int(v as i64)).collect())
    }

    /// `c * x^deg`
    pub fn monomial(c: Fel, deg: usize) -> Poly {
        let mut coeffs = vec![Fel::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    /// `x - root`
    pub fn linear(ctx: &FieldCtx, root: Fel) -> Poly {
        Poly::new(vec![ctx.neg(root), Fel::ONE])
    }

    pub fn coeffs(&self) -> &[Fel] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fel {
        self.coeffs.get(i).copied().unwrap_or(Fel::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fel::ONE]
    }

    pub fn lead(&self) -> Fel {
        self.coeffs.last().copied().unwrap_or(Fel::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fel::ONE
    }

    pub fn add(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| ctx.neg(c)).collect())
    }

    pub fn scale(&self, c: Fel, ctx: &FieldCtx) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fel::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder.
    pub fn divmod(&self, divisor: &Poly, ctx: &FieldCtx) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivideByZero)?;
        let lead_inv = ctx.inv(divisor.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Fel::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let t = ctx.mul(c, lead_inv);
            quot[i - dd] = t;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = ctx.sub(rem[i - dd + j], ctx.mul(t, dc));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        Ok(self.divmod(divisor, ctx)?.1)
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly, ctx: &FieldCtx) -> Option<Poly> {
        let (q, r) = self.divmod(divisor, ctx).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly, ctx: &FieldCtx) -> bool {
        other.rem(self, ctx).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = ctx.inv(self.lead()).expect("nonzero leading coefficient");
        self.scale(inv, ctx)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, ctx).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn eval(&self, x: Fel, ctx: &FieldCtx) -> Fel {
        self.coeffs
            .iter()
            .rev()
            .fold(Fel::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(ctx.from_int(i as i64), c))
                .collect(),
        )
    }

    /// `self^e mod modulus`
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        let mut acc = Poly::one().rem(modulus, ctx)?;
        let mut base = self.rem(modulus, ctx)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx).rem(modulus, ctx)?;
            }
            base = base.mul(&base, ctx).rem(modulus, ctx)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Irreducibility over `F_q`: no factor of `x^{q^i} - x` for `i <= deg/2`.
    pub fn is_irreducible(&self, ctx: &FieldCtx) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic(ctx);
        let x = Poly::x();
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(ctx.q(), &f, ctx).expect("f is nonzero");
            if !f.gcd(&h.sub(&x, ctx), ctx).is_one() {
                return false;
            }
        }
        true
    }

    /// Roots in `F_q` with multiplicities, ordered by packed index.
    pub fn roots_with_multiplicity(&self, ctx: &FieldCtx) -> Vec<(Fel, usize)> {
        if self.deg() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for r in ctx.elements() {
            if !self.eval(r, ctx).is_zero() {
                continue;
            }
            let lin = Poly::linear(ctx, r);
            let mut mult = 0;
            let mut cur = self.clone();
            while let Some(next) = cur.div_exact(&lin, ctx) {
                mult += 1;
                cur = next;
            }
            out.push((r, mult));
        }
        out
    }

    /// Square-free decomposition: pairs `(g, e)` with `g` monic square-free,
    /// pairwise coprime, and `monic(self) = prod g^e`.
    pub fn squarefree_decomposition(&self, ctx: &FieldCtx) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.deg() > 0 {
            squarefree_rec(&self.monic(ctx), 1, ctx, &mut out);
        }
        out.sort_by_key(|(_, e)| *e);
        out
    }

    /// Multiplicities of the distinct roots of `self` in the algebraic
    /// closure, one entry per root.
    pub fn root_multiplicities(&self, ctx: &FieldCtx) -> Vec<usize> {
        self.squarefree_decomposition(ctx)
            .into_iter()
            .flat_map(|(g, e)| std::iter::repeat_n(e, g.deg()))
            .collect()
    }
}

fn pth_root_poly(f: &Poly, ctx: &FieldCtx) -> Poly {
    let p = ctx.p() as usize;
    Poly::new(
        f.coeffs
            .iter()
            .step_by(p)
            .map(|&c| ctx.pth_root(c))
            .collect(),
    )
}

fn squarefree_rec(f: &Poly, scale: usize, ctx: &FieldCtx, out: &mut Vec<(Poly, usize)>) {
    if f.deg() == 0 {
        return;
    }
    let df = f.derivative(ctx);
    if df.is_zero() {
        squarefree_rec(&pth_root_poly(f, ctx), scale * ctx.p() as usize, ctx, out);
        return;
    }
    let mut c = f.gcd(&df, ctx);
    let mut w = f.div_exact(&c, ctx).expect("gcd divides f");
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c, ctx);
        let z = w.div_exact(&y, ctx).expect("gcd divides w");
        if z.deg() > 0 {
            out.push((z, i * scale));
        }
        i += 1;
        c = c.div_exact(&y, ctx).expect("y divides c");
        w = y;
    }
    if c.deg() > 0 {
        squarefree_rec(&pth_root_poly(&c, ctx), scale * ctx.p() as usize, ctx, out);
    }
}

/// Absolute irreducibility of `Y^d - f(X)`: the gcd of `d` and the
/// multiplicities of the distinct roots of `f` over the closure is 1.
pub fn superelliptic_abs_irreducible(ctx: &FieldCtx, d: u64, f: &Poly) -> bool {
    assert!(d >= 1, "d must be positive");
    assert!(!f.is_zero(), "f must be nonzero");
    f.root_multiplicities(ctx)
        .into_iter()
        .fold(d, |g, e| crate::nt::gcd(g, e as u64))
        == 1
}

/// Number of affine solutions `(x, y)` of `y^d = f(x)`.
pub fn count_points_superelliptic(ctx: &FieldCtx, d: u64, f: &Poly) -> u64 {
    count_points_superelliptic_with(ctx, d, f, Execution::default())
}

pub fn count_points_superelliptic_with(ctx: &FieldCtx, d: u64, f: &Poly, exec: Execution) -> u64 {
    assert!(d >= 1, "d must be positive");
    // fibre sizes of y -> y^d
    let mut fibre = vec![0u32; ctx.q() as usize];
    for y in ctx.elements() {
        fibre[ctx.pow(y, d).index() as usize] += 1;
    }
    par::sum_range(exec, 0..ctx.q(), |x| {
        fibre[f.eval(ctx.elem(x), ctx).index() as usize] as u64
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldCtx {
        FieldCtx::prime(7).unwrap()
    }

    #[test]
    fn gcd_and_eval() {
        let f = f7();
        let a = Poly::from_ints(&f, &[6, 0, 1]); // x^2 - 1
        let b = Poly::from_ints(&f, &[6, 1]); // x - 1
        assert_eq!(a.gcd(&b, &f), b);
        let c = Poly::from_ints(&f, &[1, 0, 1]);
        assert_eq!(c.eval(f.elem(3), &f), f.elem(3));
    }

    #[test]
    fn derivative_of_binomial() {
        let f = f7();
        let k = 3;
        let g = Poly::from_ints(&f, &[5, 0, 0, 1]); // x^3 - 2
        let dg = g.derivative(&f);
        assert_eq!(dg, Poly::monomial(f.from_int(k), 2));
        // p | k kills the derivative
        let h = Poly::monomial(Fel::ONE, 7).sub(&Poly::one(), &f);
        assert!(h.derivative(&f).is_zero());
    }

    #[test]
    fn divmod_by_zero_fails() {
        let f = f7();
        assert_eq!(Poly::x().divmod(&Poly::zero(), &f), Err(Error::DivideByZero));
    }

    #[test]
    fn irreducibility_examples() {
        let f = f7();
        assert!(Poly::from_ints(&f, &[1, 0, 1]).is_irreducible(&f));
        assert!(!Poly::from_ints(&f, &[6, 0, 1]).is_irreducible(&f));
        let f13 = FieldCtx::prime(13).unwrap();
        assert!(!Poly::from_ints(&f13, &[1, 0, 1]).is_irreducible(&f13));
        // square of an irreducible
        let g = Poly::from_ints(&f, &[1, 0, 1]);
        assert!(!g.mul(&g, &f).is_irreducible(&f));
    }

    #[test]
    fn roots_examples() {
        let f = f7();
        let g = Poly::linear(&f, f.elem(2))
            .mul(&Poly::linear(&f, f.elem(2)), &f)
            .mul(&Poly::linear(&f, f.elem(3)), &f);
        assert_eq!(
            g.roots_with_multiplicity(&f),
            vec![(f.elem(2), 2), (f.elem(3), 1)]
        );
        assert!(Poly::from_ints(&f, &[1, 0, 1])
            .roots_with_multiplicity(&f)
            .is_empty());
        assert_eq!(Poly::x().roots_with_multiplicity(&f), vec![(Fel::ZERO, 1)]);
    }

    #[test]
    fn squarefree_in_characteristic_p() {
        let f3 = FieldCtx::prime(3).unwrap();
        // (x+1)^3 (x^2+1)^2 x
        let a = Poly::from_ints(&f3, &[1, 1]);
        let b = Poly::from_ints(&f3, &[1, 0, 1]);
        let mut g = Poly::x();
        for _ in 0..3 {
            g = g.mul(&a, &f3);
        }
        g = g.mul(&b, &f3).mul(&b, &f3);
        let mut mults = g.root_multiplicities(&f3);
        mults.sort();
        assert_eq!(mults, vec![1, 2, 2, 3]);
    }

    #[test]
    fn superelliptic_examples() {
        let f = f7();
        let c = f.elem(3);
        for k in 1..=6u64 {
            let g = Poly::monomial(Fel::ONE, k as usize)
                .sub(&Poly::constant(c), &f)
                .neg(&f);
            assert!(superelliptic_abs_irreducible(&f, k, &g));
        }
        let sq = Poly::linear(&f, Fel::ONE).mul(&Poly::linear(&f, Fel::ONE), &f);
        assert!(!superelliptic_abs_irreducible(&f, 2, &sq));
        let xx1 = Poly::x().mul(&Poly::linear(&f, Fel::ONE), &f);
        assert!(superelliptic_abs_irreducible(&f, 3, &xx1));
    }

    #[test]
    fn point_count_examples() {
        let f = f7();
        let g = Poly::from_ints(&f, &[3, 1, 4]);
        assert_eq!(count_points_superelliptic(&f, 1, &g), 7);
        let x2 = Poly::monomial(Fel::ONE, 2);
        assert_eq!(count_points_superelliptic(&f, 2, &x2), 13);
    }
}
