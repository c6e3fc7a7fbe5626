//! The decomposition engine.
//!
//! Dispatch mirrors the structure of the existence proof: `1x1` matrices go
//! to the scalar solver, `2x2` matrices split by the factorisation of their
//! characteristic polynomial, and larger matrices are brought to rational
//! canonical form, decomposed block by block, padded with zero witnesses
//! and conjugated back. Every result is re-verified before it is returned.

mod companion;
mod jordan;
mod quadratic;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Fel};
use crate::frobenius::frobenius_form;
use crate::mat::Mat;
use crate::oracle::{self, PowerSpace};
use crate::par::{self, Execution};
use crate::scalar::KthPowers;

pub use jordan::{jordan_classify_2x2, JordanKind};

/// Which construction produced a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// `1x1`: sum of two k-th powers in the field.
    Scalar,
    /// Split characteristic polynomial, diagonalizable.
    Diagonal,
    /// Non-scalar matrix with a repeated eigenvalue.
    JordanBlock,
    /// Irreducible characteristic polynomial, solved in `F_q[A]`.
    IrreducibleQuadratic,
    /// Companion split, odd size, vanishing `a_{n-1}`.
    CompanionOddZeroTrace,
    /// Companion split, odd size, `a_{n-1}` kept in the first summand.
    CompanionOddCorner,
    /// Companion split, odd size, `a_{n-1}` split over both summands.
    CompanionOddSplit,
    /// Companion split, even size, vanishing `a_{n-1}`.
    CompanionEvenZeroTrace,
    /// Companion split, even size, `a_{n-1}` split over both summands.
    CompanionEvenSplit,
    /// Companion split, even size, shifted layout with `a_{n-1}` kept whole.
    CompanionEvenCorner,
    /// Several rational canonical blocks merged.
    BlockSum,
    /// Exhaustive search (small fields only).
    BruteForce,
}

const CASE_LABELS: [(Case, &str); 12] = [
    (Case::Scalar, "scalar"),
    (Case::Diagonal, "diagonal"),
    (Case::JordanBlock, "jordan-block"),
    (Case::IrreducibleQuadratic, "irreducible-quadratic"),
    (Case::CompanionOddZeroTrace, "companion-odd-zero-trace"),
    (Case::CompanionOddCorner, "companion-odd-corner"),
    (Case::CompanionOddSplit, "companion-odd-split"),
    (Case::CompanionEvenZeroTrace, "companion-even-zero-trace"),
    (Case::CompanionEvenSplit, "companion-even-split"),
    (Case::CompanionEvenCorner, "companion-even-corner"),
    (Case::BlockSum, "block-sum"),
    (Case::BruteForce, "brute-force"),
];

impl Case {
    pub fn label(self) -> &'static str {
        CASE_LABELS
            .iter()
            .find(|(c, _)| *c == self)
            .map(|(_, l)| *l)
            .expect("every case has a label")
    }

    pub fn is_companion_split(self) -> bool {
        matches!(
            self,
            Case::CompanionOddZeroTrace
                | Case::CompanionOddCorner
                | Case::CompanionOddSplit
                | Case::CompanionEvenZeroTrace
                | Case::CompanionEvenSplit
                | Case::CompanionEvenCorner
        )
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Case, String> {
        CASE_LABELS
            .iter()
            .find(|(_, l)| *l == s)
            .map(|(c, _)| *c)
            .ok_or_else(|| format!("unknown case label `{s}`"))
    }
}

/// `target = sum of witness^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub k: u64,
    pub witnesses: Vec<Mat>,
    pub case: Case,
}

impl Decomposition {
    pub fn terms(&self) -> usize {
        self.witnesses.len()
    }

    /// Recomputes the sum of k-th powers.
    pub fn evaluate(&self, ctx: &FieldCtx) -> Mat {
        let n = self.witnesses.first().map_or(0, Mat::n);
        self.witnesses
            .iter()
            .fold(Mat::zero(n), |acc, w| acc.add(&w.pow(self.k, ctx), ctx))
    }

    /// Conjugates every witness: a decomposition of `A` becomes one of
    /// `P A P^{-1}`.
    pub fn conjugated(&self, p: &Mat, p_inv: &Mat, ctx: &FieldCtx) -> Decomposition {
        Decomposition {
            k: self.k,
            witnesses: self
                .witnesses
                .iter()
                .map(|w| w.conjugate_with(p, p_inv, ctx))
                .collect(),
            case: self.case,
        }
    }
}

/// Decomposition engine for one field and one exponent.
///
/// Holds the tabulated k-th power map and, for the small-field fallback, the
/// exhaustive power tables per matrix size. Shareable across threads.
pub struct Engine<'a> {
    ctx: &'a FieldCtx,
    k: u64,
    powers: KthPowers,
    fallback: bool,
    spaces: Mutex<HashMap<usize, Arc<PowerSpace>>>,
}

impl<'a> Engine<'a> {
    pub fn new(ctx: &'a FieldCtx, k: u64) -> Engine<'a> {
        Engine {
            ctx,
            k,
            powers: KthPowers::new(ctx, k),
            fallback: true,
            spaces: Mutex::new(HashMap::new()),
        }
    }

    /// Disables the exhaustive fallback; constructive failures are returned.
    pub fn without_fallback(mut self) -> Self {
        self.fallback = false;
        self
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.ctx
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn powers(&self) -> &KthPowers {
        &self.powers
    }

    /// Any square matrix: at most two terms for `n <= 2`, three otherwise.
    pub fn decompose(&self, a: &Mat) -> Result<Decomposition> {
        let raw = match a.n() {
            0 => return Err(Error::ShapeMismatch("empty matrix".into())),
            1 => self.scalar_raw(a),
            2 => self.decompose2_raw(a),
            _ => self.blocks_raw(a),
        };
        self.finish(a, raw)
    }

    pub fn decompose_batch(&self, mats: &[Mat], exec: Execution) -> Vec<Result<Decomposition>> {
        par::map(exec, mats, |a| self.decompose(a))
    }

    /// `2x2` matrices.
    pub fn decompose2(&self, a: &Mat) -> Result<Decomposition> {
        if a.n() != 2 {
            return Err(Error::ShapeMismatch("decompose2 needs a 2x2 matrix".into()));
        }
        let raw = self.decompose2_raw(a);
        self.finish(a, raw)
    }

    /// Two-term decomposition of the Jordan block `[[lambda, 1], [0, lambda]]`.
    pub fn jordan_block(&self, lambda: Fel) -> Result<Decomposition> {
        let target = jordan::jordan_matrix(lambda);
        let raw = jordan::jordan_block_decompose(self, lambda);
        self.checked(&target, raw?)
    }

    /// `2x2` matrix with irreducible characteristic polynomial.
    pub fn irreducible_quadratic(&self, a: &Mat) -> Result<Decomposition> {
        let raw = quadratic::irreducible_quadratic_decompose(self, a);
        self.checked(a, raw?)
    }

    /// Companion matrix of size `n >= 3`, split into two diagonalizable
    /// summands. No exhaustive fallback.
    pub fn companion_split(&self, a: &Mat) -> Result<Decomposition> {
        let raw = companion::companion_split(self, a);
        self.checked(a, raw?)
    }

    fn finish(&self, a: &Mat, raw: Result<Decomposition>) -> Result<Decomposition> {
        match raw {
            Ok(d) => self.checked(a, d),
            Err(Error::NeedLargerField(why)) if self.fallback => {
                match self.brute(a)? {
                    Some(d) => self.checked(a, d),
                    None => Err(Error::NeedLargerField(why)),
                }
            }
            Err(e) => Err(e),
        }
    }

    fn brute(&self, a: &Mat) -> Result<Option<Decomposition>> {
        let n = a.n();
        if oracle::space_size(self.ctx.q(), n) > oracle::GUARD as u128 {
            return Ok(None);
        }
        let space = {
            let mut cache = self.spaces.lock().expect("cache lock");
            match cache.get(&n) {
                Some(s) => s.clone(),
                None => {
                    let s = Arc::new(PowerSpace::new(self.ctx, n, self.k)?);
                    cache.insert(n, s.clone());
                    s
                }
            }
        };
        for s in 1..=3 {
            if let Some(w) = space.brute_decompose(self.ctx, a, s)? {
                return Ok(Some(Decomposition {
                    k: self.k,
                    witnesses: w,
                    case: Case::BruteForce,
                }));
            }
        }
        Ok(None)
    }

    /// Drops witnesses with vanishing k-th power and re-verifies.
    fn checked(&self, a: &Mat, mut d: Decomposition) -> Result<Decomposition> {
        let ctx = self.ctx;
        let n = a.n();
        d.witnesses.retain(|w| !w.pow(self.k, ctx).is_zero());
        if d.witnesses.is_empty() {
            d.witnesses.push(Mat::zero(n));
        }
        if !oracle::verify(ctx, a, self.k, &d.witnesses)? {
            return Err(Error::VerificationFailed(format!(
                "{} output does not sum to the target",
                d.case
            )));
        }
        Ok(d)
    }

    fn scalar_raw(&self, a: &Mat) -> Result<Decomposition> {
        let w = self
            .powers
            .two_power_rep(self.ctx, a[(0, 0)])
            .map_err(|_| Error::need_larger("scalar is not a sum of two k-th powers"))?;
        Ok(Decomposition {
            k: self.k,
            witnesses: vec![Mat::diag(&[w.x]), Mat::diag(&[w.y])],
            case: Case::Scalar,
        })
    }

    fn decompose2_raw(&self, a: &Mat) -> Result<Decomposition> {
        let ctx = self.ctx;
        let roots = a.char_poly(ctx).roots_with_multiplicity(ctx);
        match roots.as_slice() {
            [] => quadratic::irreducible_quadratic_decompose(self, a),
            [_, _] => self.diagonal_raw(a),
            [(lambda, 2)] if a.is_scalar() => {
                let _ = lambda;
                self.diagonal_raw(a)
            }
            [(lambda, 2)] => {
                let (_, p) = jordan_classify_2x2(ctx, a)?;
                let d = jordan::jordan_block_decompose(self, *lambda)?;
                let p_inv = p.inverse(ctx)?;
                // P^{-1} A P = J, so A = P J P^{-1}
                Ok(d.conjugated(&p, &p_inv, ctx))
            }
            _ => unreachable!("a quadratic has at most two roots"),
        }
    }

    /// `A = P diag(l_1..l_n) P^{-1}` with every `l_i = x_i^k + y_i^k`.
    fn diagonal_raw(&self, a: &Mat) -> Result<Decomposition> {
        let ctx = self.ctx;
        let (p, eig) = a.diagonalize(ctx)?;
        let [w1, w2] = self.split_diagonal(&p, &eig)?;
        Ok(Decomposition {
            k: self.k,
            witnesses: vec![w1, w2],
            case: Case::Diagonal,
        })
    }

    /// Two witnesses for `P diag(eig) P^{-1}`.
    pub(crate) fn split_diagonal(&self, p: &Mat, eig: &[Fel]) -> Result<[Mat; 2]> {
        let ctx = self.ctx;
        let mut xs = Vec::with_capacity(eig.len());
        let mut ys = Vec::with_capacity(eig.len());
        for &l in eig {
            let w = self
                .powers
                .two_power_rep(ctx, l)
                .map_err(|_| Error::need_larger("eigenvalue is not a sum of two k-th powers"))?;
            xs.push(w.x);
            ys.push(w.y);
        }
        let p_inv = p.inverse(ctx)?;
        Ok([
            Mat::diag(&xs).conjugate_with(p, &p_inv, ctx),
            Mat::diag(&ys).conjugate_with(p, &p_inv, ctx),
        ])
    }

    /// One witness for a diagonalizable matrix whose eigenvalues are all
    /// k-th powers.
    pub(crate) fn single_root(&self, p: &Mat, eig: &[Fel]) -> Option<Mat> {
        let ctx = self.ctx;
        let roots: Option<Vec<Fel>> = eig.iter().map(|&l| ctx.kth_root(l, self.k)).collect();
        let p_inv = p.inverse(ctx).ok()?;
        Some(Mat::diag(&roots?).conjugate_with(p, &p_inv, ctx))
    }

    fn blocks_raw(&self, a: &Mat) -> Result<Decomposition> {
        let ctx = self.ctx;
        let form = frobenius_form(a, ctx)?;
        let mut parts = Vec::with_capacity(form.factors.len());
        for g in &form.factors {
            let c = Mat::companion(g, ctx)?;
            let mut d = match c.n() {
                1 => self.scalar_raw(&c)?,
                2 => self.decompose2_raw(&c)?,
                _ => companion::companion_split(self, &c)?,
            };
            d.witnesses.retain(|w| !w.pow(self.k, ctx).is_zero());
            parts.push((c.n(), d));
        }
        let terms = parts.iter().map(|(_, d)| d.terms()).max().unwrap_or(1).max(1);
        let witnesses: Vec<Mat> = (0..terms)
            .map(|t| {
                let blocks: Vec<Mat> = parts
                    .iter()
                    .map(|(size, d)| d.witnesses.get(t).cloned().unwrap_or_else(|| Mat::zero(*size)))
                    .collect();
                Mat::direct_sum(&blocks)
            })
            .collect();
        let case = match parts.as_slice() {
            [(_, only)] => only.case,
            _ => Case::BlockSum,
        };
        // P A P^{-1} = F, so A = P^{-1} F P
        let p_inv = form.transform.inverse(ctx)?;
        Ok(Decomposition {
            k: self.k,
            witnesses,
            case,
        }
        .conjugated(&p_inv, &form.transform, ctx))
    }
}

/// Decomposes `a` as a sum of k-th powers.
pub fn decompose_n(ctx: &FieldCtx, a: &Mat, k: u64) -> Result<Decomposition> {
    Engine::new(ctx, k).decompose(a)
}

pub fn decompose2(ctx: &FieldCtx, a: &Mat, k: u64) -> Result<Decomposition> {
    Engine::new(ctx, k).decompose2(a)
}

pub fn companion_split(ctx: &FieldCtx, a: &Mat, k: u64) -> Result<Decomposition> {
    Engine::new(ctx, k).companion_split(a)
}

pub fn jordan_block_decompose(ctx: &FieldCtx, lambda: Fel, k: u64) -> Result<Decomposition> {
    Engine::new(ctx, k).jordan_block(lambda)
}

pub fn irreducible_quadratic_decompose(ctx: &FieldCtx, a: &Mat, k: u64) -> Result<Decomposition> {
    Engine::new(ctx, k).irreducible_quadratic(a)
}
