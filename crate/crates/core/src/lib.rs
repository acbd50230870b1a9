//! Verification kernels for Kloosterman sums, two-term exponential sums and
//! Legendre-symbol character sums.
//!
//! - [`arith`]: gcds, inverses, the Legendre symbol, factorization, `4p = d^2 + 27b^2`
//! - [`exp_sums`]: exponential-sum kernels and exact-by-rounding power means
//! - [`char_sums`]: character sums of integer polynomials
//! - [`identities`]: registry of closed-form power-mean identities
//! - [`conjecture`]: the `2k`-th power mean of the cubic family against its Catalan main term
//! - [`search`]: enumeration of polynomial pairs with constant character-sum difference
//! - [`report`]: row model and JSON/CSV/text writers

pub mod arith;
pub mod char_sums;
pub mod conjecture;
pub mod ddouble;
pub mod error;
pub mod exp_sums;
pub mod identities;
pub mod poly;
pub mod report;
pub mod search;

pub use error::{Error, Result};
