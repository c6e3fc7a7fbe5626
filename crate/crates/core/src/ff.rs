//! Arithmetic in `F_q`, `q = p^m`, realised as `F_p[t]/(modulus)`.
//!
//! An element is stored packed: the coefficient vector `(c_0, ..., c_{m-1})`
//! of `c_0 + c_1 t + ... + c_{m-1} t^{m-1}` is read as the base-`p` integer
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. For prime fields this is just the
//! residue. The packed index also fixes the deterministic scan order used
//! throughout the crate.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::nt;
use crate::poly::Poly;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fel(u32);

impl Fel {
    pub const ZERO: Fel = Fel(0);
    pub const ONE: Fel = Fel(1);

    /// Packed base-`p` index of the coefficient vector.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Unchecked inverse of [`Fel::index`]; the caller keeps it below `q`.
    #[inline]
    pub(crate) fn from_index(i: u32) -> Fel {
        Fel(i)
    }
}

impl fmt::Debug for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct BabySteps {
    stride: u64,
    table: HashMap<u32, u32>,
    /// `g^{-stride}`
    giant: Fel,
}

pub struct FieldCtx {
    p: u64,
    m: usize,
    q: u64,
    /// Monic modulus `c_0, ..., c_m` over `F_p`; present iff `m > 1`.
    modulus: Option<Vec<u64>>,
    generator: Fel,
    baby: OnceLock<BabySteps>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl Clone for FieldCtx {
    fn clone(&self) -> Self {
        FieldCtx {
            p: self.p,
            m: self.m,
            q: self.q,
            modulus: self.modulus.clone(),
            generator: self.generator,
            baby: OnceLock::new(),
        }
    }
}

impl FieldCtx {
    /// Prime field `F_p`.
    pub fn prime(p: u64) -> Result<FieldCtx> {
        FieldCtx::new(p, 1, None)
    }

    /// Builds `F_{p^m}`. Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree `m` is used (smallest packed index
    /// of its lower coefficients).
    pub fn new(p: u64, m: usize, modulus: Option<&[u64]>) -> Result<FieldCtx> {
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::BadModulus("extension degree must be at least 1".into()));
        }
        let order = (p as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(order));
        }
        let q = order as u64;

        let modulus = if m == 1 {
            if let Some(c) = modulus {
                let c = trim(c);
                if c.len() != 2 || c[1] % p != 1 {
                    return Err(Error::BadModulus(
                        "a prime field takes no modulus other than a monic linear one".into(),
                    ));
                }
            }
            None
        } else {
            let base = FieldCtx::prime(p)?;
            let coeffs = match modulus {
                Some(c) => {
                    let c = trim(c);
                    if c.len() != m + 1 {
                        return Err(Error::BadModulus(format!(
                            "degree {} but extension degree is {m}",
                            c.len().saturating_sub(1)
                        )));
                    }
                    if c.iter().any(|&v| v >= p) {
                        return Err(Error::BadModulus(format!("coefficient out of range for p={p}")));
                    }
                    if c[m] != 1 {
                        return Err(Error::BadModulus("not monic".into()));
                    }
                    if !Poly::from_ints(&base, &c).is_irreducible(&base) {
                        return Err(Error::BadModulus("reducible over F_p".into()));
                    }
                    c
                }
                None => smallest_irreducible(&base, m),
            };
            Some(coeffs)
        };

        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            generator: Fel::ONE,
            baby: OnceLock::new(),
        };
        ctx.generator = ctx.find_generator();
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree over the prime field.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn generator(&self) -> Fel {
        self.generator
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// Element with packed index `i`.
    #[inline]
    pub fn elem(&self, i: u64) -> Fel {
        debug_assert!(i < self.q);
        Fel(i as u32)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fel {
        Fel(n.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = Fel> + Clone {
        (0..self.q as u32).map(Fel)
    }

    pub fn coeffs(&self, a: Fel) -> Vec<u64> {
        let mut v = a.0 as u64;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// Element from its coefficient vector; shorter vectors are zero-padded.
    pub fn from_coeffs(&self, c: &[u64]) -> Result<Fel> {
        if c.len() > self.m || c.iter().any(|&d| d >= self.p) {
            return Err(Error::BadModulus(format!(
                "coefficients {c:?} do not describe an element of F_{}",
                self.q
            )));
        }
        let mut v = 0u64;
        for &d in c.iter().rev() {
            v = v * self.p + d;
        }
        Ok(Fel(v as u32))
    }

    #[inline]
    pub fn add(&self, a: Fel, b: Fel) -> Fel {
        if self.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Fel(if s >= self.p { s - self.p } else { s } as u32);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Fel(out as u32)
    }

    #[inline]
    pub fn neg(&self, a: Fel) -> Fel {
        if self.m == 1 {
            return Fel(if a.0 == 0 { 0 } else { (self.p - a.0 as u64) as u32 });
        }
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Fel(out as u32)
    }

    #[inline]
    pub fn sub(&self, a: Fel, b: Fel) -> Fel {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fel, b: Fel) -> Fel {
        if self.m == 1 {
            return Fel((a.0 as u64 * b.0 as u64 % self.p) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fel::ZERO;
        }
        let modulus = self.modulus.as_ref().expect("extension field has a modulus");
        let m = self.m;
        let p = self.p;
        let mut da = [0u64; 32];
        let mut db = [0u64; 32];
        self.unpack(a, &mut da);
        self.unpack(b, &mut db);
        let mut prod = [0u64; 64];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            let nt = p - t;
            for j in 0..m {
                prod[i - m + j] = (prod[i - m + j] + nt * modulus[j]) % p;
            }
            prod[i] = 0;
        }
        self.pack(&prod[..m])
    }

    pub fn pow(&self, a: Fel, mut e: u64) -> Fel {
        let mut acc = Fel::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fel) -> Result<Fel> {
        if a.is_zero() {
            return Err(Error::DivideByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: Fel, b: Fel) -> Result<Fel> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Inverse of the Frobenius `x -> x^p`.
    pub fn pth_root(&self, a: Fel) -> Fel {
        self.pow(a, self.q / self.p)
    }

    /// Whether `a` is a k-th power: zero always is, and a unit `a` is iff
    /// `a^((q-1)/gcd(k, q-1)) = 1`.
    pub fn is_kth_power(&self, a: Fel, k: u64) -> bool {
        assert!(k >= 1, "k must be positive");
        if a.is_zero() {
            return true;
        }
        let d = nt::gcd(k, self.q - 1);
        self.pow(a, (self.q - 1) / d) == Fel::ONE
    }

    /// Size of `{x^k : x in F_q}`, zero included.
    pub fn kth_power_count(&self, k: u64) -> u64 {
        assert!(k >= 1, "k must be positive");
        (self.q - 1) / nt::gcd(k, self.q - 1) + 1
    }

    /// Some `x` with `x^k = a`, choosing the one whose discrete log is
    /// smallest; `None` if `a` is not a k-th power.
    pub fn kth_root(&self, a: Fel, k: u64) -> Option<Fel> {
        assert!(k >= 1, "k must be positive");
        if a.is_zero() {
            return Some(Fel::ZERO);
        }
        let order = self.q - 1;
        let log = self.dlog(a)?;
        let d = nt::gcd(k, order);
        if log % d != 0 {
            return None;
        }
        let reduced = order / d;
        let e = if reduced == 1 {
            0
        } else {
            let inv = nt::inv_mod((k / d) % reduced, reduced)?;
            ((log / d) as u128 * inv as u128 % reduced as u128) as u64
        };
        Some(self.pow(self.generator, e))
    }

    /// Discrete log of a unit to the base of the field generator, in
    /// `[0, q-1)`, by baby-step/giant-step.
    pub fn dlog(&self, a: Fel) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let bs = self.baby.get_or_init(|| self.build_baby_steps());
        let mut gamma = a;
        for i in 0..bs.stride {
            if let Some(&j) = bs.table.get(&gamma.0) {
                return Some((i * bs.stride + j as u64) % (self.q - 1));
            }
            gamma = self.mul(gamma, bs.giant);
        }
        None
    }

    fn build_baby_steps(&self) -> BabySteps {
        let order = self.q - 1;
        let mut stride = (order as f64).sqrt().ceil() as u64;
        while stride * stride < order {
            stride += 1;
        }
        let stride = stride.max(1);
        let mut table = HashMap::with_capacity(stride as usize);
        let mut cur = Fel::ONE;
        for j in 0..stride {
            table.entry(cur.0).or_insert(j as u32);
            cur = self.mul(cur, self.generator);
        }
        // cur = g^stride
        let giant = self.inv(cur).expect("generator power is a unit");
        BabySteps {
            stride,
            table,
            giant,
        }
    }

    fn find_generator(&self) -> Fel {
        let order = self.q - 1;
        if order == 1 {
            return Fel::ONE;
        }
        let factors = nt::prime_factors(order);
        (1..self.q)
            .map(|i| Fel(i as u32))
            .find(|&g| factors.iter().all(|&r| self.pow(g, order / r) != Fel::ONE))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    #[inline]
    fn unpack(&self, a: Fel, out: &mut [u64]) {
        let mut v = a.0 as u64;
        for d in out.iter_mut().take(self.m) {
            *d = v % self.p;
            v /= self.p;
        }
    }

    #[inline]
    fn pack(&self, digits: &[u64]) -> Fel {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        Fel(v as u32)
    }
}

fn trim(c: &[u64]) -> Vec<u64> {
    let mut v = c.to_vec();
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn smallest_irreducible(base: &FieldCtx, m: usize) -> Vec<u64> {
    let p = base.p();
    let count = p.pow(m as u32);
    for idx in 0..count {
        let mut c = Vec::with_capacity(m + 1);
        let mut v = idx;
        for _ in 0..m {
            c.push(v % p);
            v /= p;
        }
        c.push(1);
        if Poly::from_ints(base, &c).is_irreducible(base) {
            return c;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Closed-form test for whether `-1` is a k-th power in `F_{p^l}`: always for
/// `p = 2` or odd `k`; for `k = 2^s t` with `t` odd, iff `p^l = 1 mod 2^{s+1}`.
pub fn minus_one_is_kth_power(p: u64, l: u32, k: u64) -> bool {
    assert!(k >= 1 && l >= 1, "k and l must be positive");
    if p == 2 || k % 2 == 1 {
        return true;
    }
    let s = k.trailing_zeros();
    let modulus = 1u128 << (s + 1);
    let mut q = 1u128;
    for _ in 0..l {
        q = q * p as u128 % modulus;
    }
    q == 1
}
