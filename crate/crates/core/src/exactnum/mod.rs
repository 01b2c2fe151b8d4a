//! Exact scalars: rationals, pi-power scalars, real quadratic numbers, and
//! the special values built from them.

mod piscalar;
mod quad;
mod rat;
mod special;

pub use piscalar::PiScalar;
pub use quad::QuadNum;
pub use rat::Rat;
pub use special::{
    bernoulli, binomial, factorial, falling_factorial, gamma_exact, gamma_exact_f64,
    rising_factorial,
};
