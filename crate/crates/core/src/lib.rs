//! Exact and numerical tools for the pentagonal-number recurrences of the
//! partition function obtained from Rankin-Cohen brackets of `1/eta` and `eta`.
//!
//! The exact side builds `P_nu` as a q-series over the rationals, splits it
//! into Eisenstein and Hecke-eigenform parts, and extracts Hecke traces. The
//! numerical side evaluates twisted Dirichlet series and a Kloosterman-sum
//! formula for `p(n)`.

pub mod dirichlet;
pub mod error;
pub mod exactnum;
pub mod forms;
pub mod hecke;
mod linalg;
pub mod partitions;
pub mod qseries;
pub mod rademacher;
pub mod rankincohen;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{PiScalar, QuadNum, Rat};
pub use qseries::{IntQSeries, QSeries24};
