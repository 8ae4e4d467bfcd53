//! Frobenius cycle types of integer polynomials, computed from powers of `X`
//! modulo a characteristic polynomial, together with the congruences these
//! powers imply for linear recurrences.

pub mod arith;
pub mod classify;
pub mod cyclotomic;
pub mod error;
pub mod factor;
pub mod parse;
pub mod poly;
pub mod recurrence;
mod serde_dec;
pub mod tau;

pub use arith::{Prime, Residue};
pub use classify::{CycleType, QuadLabel, QuadVerdict, S3Class, ScanReport};
pub use error::{Error, Result};
pub use factor::{Backend, FactorizationResult, RngSeed};
pub use poly::{IntPoly, ModPoly, QuotientRing};
pub use recurrence::{LinRec, SquareMatrix};
pub use tau::TauTable;
