//! Pentagonal numbers, the partition function by Euler's recurrence, divisor
//! power sums, and the right-hand side of the trace-corrected recurrence.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{bernoulli, binomial, Rat};
use crate::rankincohen::g_poly;

/// omega(k) = (3k^2 + k)/2.
pub fn pentagonal(k: i64) -> i64 {
    (3 * k * k + k) / 2
}

/// The indices k = 1, -1, 2, -2, ... with omega(k) <= n, in that order.
pub fn pentagonal_indices(n: i64) -> impl Iterator<Item = i64> {
    (1..)
        .take_while(move |&j| pentagonal(-j) <= n)
        .flat_map(|j| [j, -j])
        .filter(move |&k| pentagonal(k) <= n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionTable {
    values: Vec<BigInt>,
}

impl PartitionTable {
    /// p(n), with p(n) = 0 for negative n.
    ///
    /// Panics if `n` exceeds the table.
    pub fn get(&self, n: i64) -> BigInt {
        if n < 0 {
            return BigInt::zero();
        }
        self.values[n as usize].clone()
    }

    /// Largest n covered.
    pub fn max_n(&self) -> i64 {
        self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// p(0..=n) from p(n) = sum_{k != 0} (-1)^(k+1) p(n - omega(k)).
pub fn partition_table(n_max: usize) -> PartitionTable {
    let mut values: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    values.push(BigInt::one());
    for n in 1..=n_max as i64 {
        let mut acc = BigInt::zero();
        for k in pentagonal_indices(n) {
            let term = &values[(n - pentagonal(k)) as usize];
            if k.rem_euclid(2) == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        values.push(acc);
    }
    PartitionTable { values }
}

/// sigma_m(n) = sum of d^m over the divisors d of n.
pub fn sigma(m: u32, n: u64) -> BigInt {
    assert!(n >= 1, "sigma needs n >= 1");
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(m);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(m);
            }
        }
        d += 1;
    }
    acc
}

/// sigma_m(n) for 1 <= n < len by a divisor sieve; index 0 holds 0.
pub fn sigma_table(m: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let p = BigInt::from(d).pow(m);
        for slot in out.iter_mut().skip(d).step_by(d) {
            *slot += &p;
        }
    }
    out
}

/// -(4 nu / B_{2nu}) C(2nu-2, nu-2): the multiple of sigma_{2nu-1}(n) that the
/// Eisenstein part of P_nu contributes at q^n.
pub fn eisenstein_sigma_factor(nu: u32) -> Rat {
    let b = bernoulli(2 * nu as usize);
    let c = Rat::from_int(binomial(2 * nu as i64 - 2, nu as i64 - 2));
    -(Rat::from(4 * nu as i64) / b) * c
}

/// Solves the trace-corrected recurrence for p(n):
///
/// ```text
/// g(n,0) p(n) = -(4nu/B_2nu) C(2nu-2,nu-2) sigma_{2nu-1}(n) + trace
///               + sum_{k != 0} (-1)^(k+1) g(n,k) p(n - omega(k))
/// ```
///
/// The k = 0 term is the unknown, so the sum excludes it. Returns an exact
/// rational; a wrong trace shows up as a non-integral value.
pub fn theorem2_rhs(nu: u32, n: i64, trace: &Rat, ptable: &PartitionTable) -> Result<Rat> {
    if nu < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!("recurrence needs nu >= 2, n >= 1 (got {nu}, {n})")));
    }
    if ptable.max_n() < n - 1 {
        return Err(Error::InsufficientPrecision { needed: n - 1, available: ptable.max_n() });
    }
    let g0 = g_poly(nu, n, 0);
    if g0.is_zero() {
        return Err(Error::DivisionByZero("g_nu(n, 0) vanished"));
    }
    let mut acc = eisenstein_sigma_factor(nu) * Rat::from_int(sigma(2 * nu - 1, n as u64));
    acc += trace;
    for k in pentagonal_indices(n) {
        let p = ptable.get(n - pentagonal(k));
        if p.is_zero() {
            continue;
        }
        let term = g_poly(nu, n, k) * Rat::from_int(p);
        if k.rem_euclid(2) == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.checked_div(&g0)
}

/// p(0..=n_max) generated by the trace-corrected recurrence alone, each value
/// feeding the next. `traces[n]` is Tr_{2nu}(n). A non-integral step is an error.
pub fn recurrence_table(nu: u32, traces: &[Rat], n_max: usize) -> Result<PartitionTable> {
    if traces.len() <= n_max {
        return Err(Error::InsufficientPrecision { needed: n_max as i64, available: traces.len() as i64 - 1 });
    }
    let mut table = PartitionTable { values: vec![BigInt::one()] };
    for (n, trace) in traces.iter().enumerate().take(n_max + 1).skip(1) {
        let v = theorem2_rhs(nu, n as i64, trace, &table)?;
        let p = v
            .to_integer()
            .ok_or_else(|| Error::InvalidArgument(format!("recurrence gave non-integral p({n}) = {v}")))?;
        table.values.push(p);
    }
    Ok(table)
}
