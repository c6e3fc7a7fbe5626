//! Writing matrices over finite fields as sums of k-th powers.
//!
//! Every matrix in `M_n(F_q)` is a sum of two k-th powers when `n <= 2` and
//! of at most three when `n >= 3`, once `q` is large relative to `k`. This
//! crate builds such decompositions constructively and ships the brute-force
//! machinery that checks them at small sizes.
//!
//! Layout:
//! - [`ff`]: field arithmetic, k-th power residues and roots
//! - [`poly`]: polynomials, irreducibility, roots, superelliptic point counts
//! - [`mat`] and [`frobenius`]: exact linear algebra and rational canonical form
//! - [`scalar`]: sums of two k-th powers in `F_q`
//! - [`decompose`]: the matrix decomposition engine
//! - [`oracle`]: exhaustive search, Waring-number census, Weil bound checks
//! - [`text`]: the line-oriented file formats

pub mod decompose;
pub mod error;
pub mod ff;
pub mod frobenius;
pub mod mat;
pub mod nt;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod scalar;
pub mod text;

pub use decompose::{decompose_n, Case, Decomposition, Engine};
pub use error::{Error, ParseErrorKind, Result};
pub use ff::{minus_one_is_kth_power, FieldCtx, Fel};
pub use frobenius::{frobenius_form, FrobeniusForm};
pub use mat::Mat;
pub use par::Execution;
pub use poly::Poly;
pub use scalar::{waring_constant, KthPowers, PairWitness};
