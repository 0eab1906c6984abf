//! Decision procedures and computable invariants for shifts of finite type
//! presented by nonnegative integer matrices, and for sofic shifts presented
//! by labelled graphs.
//!
//! * [`matrix`]: exact matrices, powers, rank, characteristic polynomial, entropy.
//! * [`zlinalg`]: Smith normal form, Bowen-Franks groups, unit classes.
//! * [`williams`]: total amalgamation, splittings and one-sided conjugacy.
//! * [`eventual`]: conjugacy of higher powers of one-sided shifts.
//! * [`witnesses`]: checking and bounded search for (balanced) strong shift
//!   equivalence and shift equivalence.
//! * [`classifiers`]: flow equivalence and continuous orbit equivalence.
//! * [`sofic`]: Krieger and Fischer covers of labelled graphs.
//! * [`oracle`]: brute-force sliding block codes.

pub mod classifiers;
pub mod error;
pub mod eventual;
pub mod fixtures;
pub mod io;
pub mod json;
pub mod matrix;
pub mod oracle;
pub mod sofic;
pub mod verdict;
pub mod williams;
pub mod witnesses;
pub mod zlinalg;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use verdict::{Verdict, VerdictKind};
