//! Exhaustive checks for small fields: verification, brute-force
//! decomposition, Waring numbers over conjugacy classes, censuses and the
//! Weil bound for superelliptic curves.

mod census;
mod weil;

pub use census::{census, render_csv, CensusCell, CensusSpec, CSV_HEADER};
pub use weil::{weil_check, WeilRecord};

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};
use crate::mat::Mat;
use crate::par::{self, Execution};
use crate::poly::Poly;

/// Cap on exhaustive enumeration sizes.
pub const GUARD: u64 = 10_000_000;

/// `q^(n^2)`, saturating.
pub fn space_size(q: u64, n: usize) -> u128 {
    let mut s: u128 = 1;
    for _ in 0..n * n {
        s = s.saturating_mul(q as u128);
    }
    s
}

/// Whether `sum of w^k` over the witnesses equals `a`.
pub fn verify(ctx: &FieldCtx, a: &Mat, k: u64, witnesses: &[Mat]) -> Result<bool> {
    let n = a.n();
    if witnesses.iter().any(|w| w.n() != n) {
        return Err(Error::ShapeMismatch("witness size differs from target".into()));
    }
    let sum = witnesses
        .iter()
        .fold(Mat::zero(n), |acc, w| acc.add(&w.pow(k, ctx), ctx));
    Ok(sum == *a)
}

/// Every `n x n` matrix with its k-th power, indexed by the matrix read as a
/// base-`q` number with the first entry most significant, so numeric order
/// is lexicographic order.
#[derive(Debug)]
pub struct PowerSpace {
    n: usize,
    k: u64,
    q: u64,
    power_of: Vec<u32>,
    root_of: HashMap<u32, u32>,
    values: Vec<u32>,
    member: Vec<bool>,
}

impl PowerSpace {
    pub fn new(ctx: &FieldCtx, n: usize, k: u64) -> Result<PowerSpace> {
        PowerSpace::new_with(ctx, n, k, Execution::default())
    }

    pub fn new_with(ctx: &FieldCtx, n: usize, k: u64, exec: Execution) -> Result<PowerSpace> {
        let size = space_size(ctx.q(), n);
        if size > GUARD as u128 {
            return Err(Error::TooLarge(size));
        }
        let size = size as usize;
        let q = ctx.q();
        let power_of: Vec<u32> = par::map_range(exec, 0..size as u64, |code| {
            let x = decode(q, n, code as u32);
            encode(q, &x.pow(k, ctx))
        });
        let mut root_of = HashMap::new();
        let mut member = vec![false; size];
        for (code, &v) in power_of.iter().enumerate() {
            if !member[v as usize] {
                member[v as usize] = true;
                root_of.insert(v, code as u32);
            }
        }
        let mut values: Vec<u32> = root_of.keys().copied().collect();
        values.sort_unstable();
        Ok(PowerSpace {
            n,
            k,
            q,
            power_of,
            root_of,
            values,
            member,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn size(&self) -> usize {
        self.power_of.len()
    }

    /// Number of distinct k-th powers.
    pub fn distinct_powers(&self) -> usize {
        self.values.len()
    }

    pub fn is_power(&self, a: &Mat) -> bool {
        self.member[encode(self.q, a) as usize]
    }

    pub fn encode(&self, a: &Mat) -> u32 {
        encode(self.q, a)
    }

    pub fn decode(&self, code: u32) -> Mat {
        decode(self.q, self.n, code)
    }

    fn sub_codes(&self, ctx: &FieldCtx, a: u32, b: u32) -> u32 {
        let (q, cells) = (self.q as u32, self.n * self.n);
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..cells {
            let d = ctx.sub(Fel::from_index(a % q), Fel::from_index(b % q));
            out += d.index() * scale;
            a /= q;
            b /= q;
            scale = scale.wrapping_mul(q);
        }
        out
    }

    /// Lexicographically first `(X_1, X_2)` with `X_1^k + X_2^k = t`.
    fn first_pair(&self, ctx: &FieldCtx, t: u32) -> Option<(u32, u32)> {
        if !self
            .values
            .iter()
            .any(|&v| self.member[self.sub_codes(ctx, t, v) as usize])
        {
            return None;
        }
        (0..self.power_of.len() as u32).find_map(|x1| {
            let rest = self.sub_codes(ctx, t, self.power_of[x1 as usize]);
            self.root_of.get(&rest).map(|&x2| (x1, x2))
        })
    }

    /// Lexicographically first `s`-tuple of witnesses for `a`, `1 <= s <= 3`.
    pub fn brute_decompose(&self, ctx: &FieldCtx, a: &Mat, s: usize) -> Result<Option<Vec<Mat>>> {
        if a.n() != self.n {
            return Err(Error::ShapeMismatch("target size differs from table".into()));
        }
        let t = self.encode(a);
        let codes = match s {
            1 => self.root_of.get(&t).map(|&x| vec![x]),
            2 => self.first_pair(ctx, t).map(|(x1, x2)| vec![x1, x2]),
            3 => {
                let mut tried = HashSet::new();
                let mut hit = None;
                for x1 in 0..self.power_of.len() as u32 {
                    let v = self.power_of[x1 as usize];
                    if !tried.insert(v) {
                        continue;
                    }
                    if let Some((x2, x3)) = self.first_pair(ctx, self.sub_codes(ctx, t, v)) {
                        hit = Some(vec![x1, x2, x3]);
                        break;
                    }
                }
                hit
            }
            _ => {
                return Err(Error::ShapeMismatch(
                    "exhaustive search supports 1 to 3 terms".into(),
                ))
            }
        };
        Ok(codes.map(|c| c.into_iter().map(|x| self.decode(x)).collect()))
    }

    /// Smallest number of k-th powers summing to `a`, searching up to three.
    pub fn min_terms(&self, ctx: &FieldCtx, a: &Mat) -> Result<Option<usize>> {
        for s in 1..=3 {
            if self.brute_decompose(ctx, a, s)?.is_some() {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

fn encode(q: u64, a: &Mat) -> u32 {
    a.entries()
        .iter()
        .fold(0u64, |acc, e| acc * q + e.index() as u64) as u32
}

fn decode(q: u64, n: usize, mut code: u32) -> Mat {
    let q = q as u32;
    let mut data = vec![Fel::ZERO; n * n];
    for slot in data.iter_mut().rev() {
        *slot = Fel::from_index(code % q);
        code /= q;
    }
    Mat::from_vec(n, data).expect("n*n entries")
}

/// One matrix per similarity class of `M_n(F_q)`: direct sums of companion
/// matrices of invariant factor chains `g_1 | ... | g_s`, degrees summing to
/// `n`.
pub fn class_representatives(ctx: &FieldCtx, n: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    let mut chain = Vec::new();
    chains(ctx, n, None, &mut chain, &mut out);
    out
}

fn monic_polys(ctx: &FieldCtx, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = ctx.q();
    let count = q.pow(d as u32);
    (0..count).map(move |mut i| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(ctx.elem(i % q));
            i /= q;
        }
        c.push(Fel::ONE);
        Poly::new(c)
    })
}

/// Extends a chain whose last factor is `prev` (which must divide every
/// later one) until the degrees use up `left`. Chains are built smallest
/// first.
fn chains(ctx: &FieldCtx, left: usize, prev: Option<&Poly>, chain: &mut Vec<Poly>, out: &mut Vec<Mat>) {
    if left == 0 {
        let blocks: Vec<Mat> = chain
            .iter()
            .map(|g| Mat::companion(g, ctx).expect("monic"))
            .collect();
        out.push(Mat::direct_sum(&blocks));
        return;
    }
    let lo = prev.map_or(1, Poly::deg);
    for d in lo..=left {
        // the last factor must be the largest, so what remains after it is
        // either nothing or at least d again
        if left - d != 0 && left - d < d {
            continue;
        }
        for g in monic_polys(ctx, d) {
            if let Some(p) = prev {
                if !p.divides(&g, ctx) {
                    continue;
                }
            }
            chain.push(g.clone());
            chains(ctx, left - d, Some(&g), chain, out);
            chain.pop();
        }
    }
}

/// The largest, over all `A` in `M_n(F_q)`, of the least number of k-th
/// powers summing to `A`. Returns it with the number of similarity classes
/// examined. Fails with [`Error::NotRepresentable`] when some matrix is not a
/// sum of k-th powers at all.
pub fn min_waring_number(ctx: &FieldCtx, n: usize, k: u64) -> Result<(u32, usize)> {
    min_waring_number_with(ctx, n, k, Execution::default())
}

pub fn min_waring_number_with(ctx: &FieldCtx, n: usize, k: u64, exec: Execution) -> Result<(u32, usize)> {
    let space = PowerSpace::new_with(ctx, n, k, exec)?;
    let reps: Vec<u32> = class_representatives(ctx, n)
        .iter()
        .map(|r| space.encode(r))
        .collect();
    let checked = reps.len();
    let size = space.size();

    // dist[c] = least number of powers summing to c, filled level by level
    let mut dist = vec![u8::MAX; size];
    for &v in &space.values {
        dist[v as usize] = 1;
    }
    let mut frontier: Vec<u32> = space.values.clone();
    let mut remaining: Vec<u32> = reps.into_iter().filter(|&r| dist[r as usize] != 1).collect();
    let mut level: u32 = 1;
    let mut worst: u32 = 1;
    while !remaining.is_empty() {
        level += 1;
        let reach = level as u8 - 1;
        let hit = par::map(exec, &remaining, |&r| {
            space
                .values
                .iter()
                .any(|&v| dist[space.sub_codes(ctx, r, v) as usize] <= reach)
        });
        let before = remaining.len();
        remaining = remaining
            .into_iter()
            .zip(hit)
            .filter_map(|(r, h)| (!h).then_some(r))
            .collect();
        if remaining.len() < before {
            worst = level;
        }
        if remaining.is_empty() {
            break;
        }
        // extend dist to the current level before the next round
        let mut next = Vec::new();
        for &f in &frontier {
            for &v in &space.values {
                let c = add_codes(&space, ctx, f, v) as usize;
                if dist[c] == u8::MAX {
                    dist[c] = level as u8;
                    next.push(c as u32);
                }
            }
        }
        if next.is_empty() {
            return Err(Error::NotRepresentable);
        }
        frontier = next;
    }
    Ok((worst, checked))
}

fn add_codes(space: &PowerSpace, ctx: &FieldCtx, a: u32, b: u32) -> u32 {
    let neg_b = space.sub_codes(ctx, 0, b);
    space.sub_codes(ctx, a, neg_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        // q^2 + q similarity classes in M_2(F_q)
        for q in [2, 3, 5, 7] {
            let f = FieldCtx::prime(q).unwrap();
            assert_eq!(class_representatives(&f, 2).len() as u64, q * q + q);
            assert_eq!(class_representatives(&f, 1).len() as u64, q);
        }
        // M_3(F_2) has 14 classes
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(class_representatives(&f2, 3).len(), 14);
    }

    #[test]
    fn codes_are_lexicographic() {
        let f = FieldCtx::prime(3).unwrap();
        let s = PowerSpace::new(&f, 2, 2).unwrap();
        assert_eq!(s.decode(1), Mat::from_ints(&f, &[&[0, 0], &[0, 1]]));
        assert_eq!(s.decode(27), Mat::from_ints(&f, &[&[1, 0], &[0, 0]]));
        let a = Mat::from_ints(&f, &[&[2, 1], &[0, 2]]);
        assert_eq!(s.decode(s.encode(&a)), a);
    }

    #[test]
    fn brute_small_cases() {
        let f = FieldCtx::prime(7).unwrap();
        let s = PowerSpace::new(&f, 1, 3).unwrap();
        let three = Mat::diag(&[f.elem(3)]);
        assert_eq!(s.brute_decompose(&f, &three, 2).unwrap(), None);
        let w = s.brute_decompose(&f, &three, 3).unwrap().unwrap();
        assert_eq!(w, vec![Mat::diag(&[Fel::ONE]); 3]);
        assert!(verify(&f, &three, 3, &w).unwrap());
    }

    #[test]
    fn waring_numbers() {
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(min_waring_number(&f7, 1, 3).unwrap().0, 3);
        assert_eq!(min_waring_number(&f7, 1, 2).unwrap().0, 2);
        let f3 = FieldCtx::prime(3).unwrap();
        let (w, classes) = min_waring_number(&f3, 2, 2).unwrap();
        assert_eq!(classes, 12);
        assert!(w <= 3);
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(min_waring_number(&f2, 1, 2).unwrap().0, 1);
        assert_eq!(min_waring_number(&f3, 1, 2).unwrap().0, 2);
        // cubes in F_4 form the prime subfield, closed under addition
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(min_waring_number(&f4, 1, 3), Err(Error::NotRepresentable));
    }

    #[test]
    fn guard_rejects_large_spaces() {
        let f = FieldCtx::prime(101).unwrap();
        assert!(matches!(PowerSpace::new(&f, 2, 2), Err(Error::TooLarge(_))));
    }
}
