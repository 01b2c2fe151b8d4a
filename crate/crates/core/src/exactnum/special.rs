//! Bernoulli numbers, binomials, falling and rising factorials, and exact
//! Gamma values at integers and half-integers.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{PiScalar, Rat};
use crate::error::{Error, Result};

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient C(n, k) for integer n and k; zero when k < 0 or
/// 0 <= n < k.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    // Generalised form n(n-1)...(n-k+1)/k! also covers negative n.
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - i;
    }
    num / factorial(k as u64)
}

/// B_n with the convention B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rat {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]));
    let mut table = cache.lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= n {
        let m = table.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let s: Rat = table
            .iter()
            .enumerate()
            .filter(|(k, b)| !b.is_zero() || *k == 0)
            .map(|(k, b)| b * Rat::from_int(binomial(m as i64 + 1, k as i64)))
            .sum();
        table.push(-s / Rat::from(m as i64 + 1));
    }
    table[n].clone()
}

/// (x)_m: x(x-1)...(x-m+1) for m >= 1, 1 for m = 0, and 1/(x)_{-m} for m <= -1.
pub fn falling_factorial(x: &Rat, m: i64) -> Result<Rat> {
    if m >= 0 {
        return Ok((0..m).map(|i| x - Rat::from(i)).product());
    }
    let denom = falling_factorial(x, -m)?;
    if denom.is_zero() {
        return Err(Error::DivisionByZero("negative-index falling factorial"));
    }
    denom.recip()
}

/// x(x+1)...(x+j-1), and 1 for j = 0.
pub fn rising_factorial(x: &Rat, j: u64) -> Rat {
    (0..j).map(|i| x + Rat::from(i)).product()
}

fn half_integer_parts(x: &Rat) -> Result<(i64, bool)> {
    let twice = x * Rat::from(2);
    let t = twice
        .to_integer()
        .ok_or_else(|| Error::InvalidArgument(format!("{x} is not a half-integer")))?;
    let t = t
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("{x} is out of range")))?;
    Ok((t, t.rem_euclid(2) == 1))
}

/// Exact Gamma at an integer or half-integer.
///
/// Integers give (n-1)! with no power of pi; half-integers give a rational
/// multiple of sqrt(pi). Negative half-odd-integers are reached through the
/// reflection Gamma(x) = Gamma(x+1)/x.
pub fn gamma_exact(x: &Rat) -> Result<PiScalar> {
    let (twice, half) = half_integer_parts(x)?;
    if !half {
        let n = twice / 2;
        if n <= 0 {
            return Err(Error::GammaPole(x.to_string()));
        }
        return Ok(PiScalar::new(Rat::from_int(factorial((n - 1) as u64)), 0));
    }
    if twice > 0 {
        // x = n + 1/2: Gamma = (2n)! / (4^n n!) * sqrt(pi)
        let n = ((twice - 1) / 2) as u64;
        let c = Rat::new(factorial(2 * n), BigInt::from(4).pow(n as u32) * factorial(n));
        return Ok(PiScalar::new(c, 1));
    }
    // Negative half-odd x: Gamma(x) = Gamma(1/2) / (x (x+1) ... (-1/2)).
    let steps = ((-twice + 1) / 2) as u64;
    let prod = rising_factorial(x, steps);
    let g = gamma_exact(&Rat::new(1, 2))?;
    Ok(PiScalar::new(g.coeff().clone() / prod, 1))
}

/// Exact Gamma(x) converted to binary64.
pub fn gamma_exact_f64(x: &Rat) -> Result<f64> {
    Ok(gamma_exact(x)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Akiyama-Tanigawa algorithm; yields B_1 = +1/2.
    fn bernoulli_oracle(n: usize) -> Rat {
        let mut a: Vec<Rat> = Vec::new();
        for m in 0..=n {
            a.push(Rat::new(1, m as i64 + 1));
            for j in (1..=m).rev() {
                a[j - 1] = Rat::from(j as i64) * (&a[j - 1] - &a[j]);
            }
        }
        if n == 1 {
            -a[0].clone()
        } else {
            a[0].clone()
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), Rat::one());
        assert_eq!(bernoulli(1), Rat::new(-1, 2));
        assert_eq!(bernoulli(4), Rat::new(-1, 30));
        assert_eq!(bernoulli(12), Rat::new(-691, 2730));
        assert_eq!(bernoulli(24), Rat::new(-236364091, 2730));
    }

    #[test]
    fn bernoulli_matches_independent_oracle() {
        for n in 0..=40 {
            assert_eq!(bernoulli(n), bernoulli_oracle(n), "B_{n}");
        }
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for n in 1..=60 {
            assert!(bernoulli(2 * n + 1).is_zero(), "B_{}", 2 * n + 1);
        }
    }

    #[test]
    fn binomial_edge_cases() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(0, -1), BigInt::zero());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(22, 10), BigInt::from(646646));
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(&Rat::from(5), 0).unwrap(), Rat::one());
        assert_eq!(falling_factorial(&Rat::from(-2), -1).unwrap(), Rat::new(-1, 2));
        assert_eq!(falling_factorial(&Rat::from(6), 3).unwrap(), Rat::from(120));
        assert!(matches!(
            falling_factorial(&Rat::from(2), -4),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(&Rat::new(3, 2), 0), Rat::one());
        assert_eq!(rising_factorial(&Rat::new(-3, 2), 2), Rat::new(3, 4));
        // nu = 6, i = 5, j = 6: x = 0 so the product vanishes
        let x = Rat::from(6 - 5 - 1);
        let direct: Rat = (0..6).map(|k| &x + Rat::from(k)).product();
        assert_eq!(rising_factorial(&x, 6), direct);
        assert!(direct.is_zero());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_exact(&Rat::new(1, 2)).unwrap(), PiScalar::new(Rat::one(), 1));
        assert_eq!(gamma_exact(&Rat::new(5, 2)).unwrap(), PiScalar::new(Rat::new(3, 4), 1));
        assert_eq!(gamma_exact(&Rat::from(4)).unwrap(), PiScalar::new(Rat::from(6), 0));
        // Gamma(-1/2) = -2 sqrt(pi), Gamma(-3/2) = 4/3 sqrt(pi)
        assert_eq!(gamma_exact(&Rat::new(-1, 2)).unwrap(), PiScalar::new(Rat::from(-2), 1));
        assert_eq!(gamma_exact(&Rat::new(-3, 2)).unwrap(), PiScalar::new(Rat::new(4, 3), 1));
        for pole in [0, -1, -5] {
            assert!(matches!(gamma_exact(&Rat::from(pole)), Err(Error::GammaPole(_))));
        }
        assert!(gamma_exact(&Rat::new(1, 3)).is_err());
    }

    #[test]
    fn gamma_recursion() {
        // Gamma(x + 1) = x Gamma(x) on the half-integer grid in (0, 20]
        for twice in 1..=40 {
            let x = Rat::new(twice, 2);
            let lhs = gamma_exact(&(&x + Rat::one())).unwrap();
            let rhs = PiScalar::new(x.clone(), 0) * gamma_exact(&x).unwrap();
            assert_eq!(lhs, rhs, "x = {x}");
        }
    }

    #[test]
    fn gamma_agrees_with_float_gamma() {
        for twice in 1..=30 {
            let x = Rat::new(twice, 2);
            let exact = gamma_exact_f64(&x).unwrap();
            let float = statrs::function::gamma::gamma(twice as f64 / 2.0);
            assert!((exact / float - 1.0).abs() < 1e-12, "x = {x}");
        }
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

        #[test]
        fn falling_factorial_negative_index_is_inverse(x in small_rat(), m in 0i64..=8) {
            let pos = falling_factorial(&x, m).unwrap();
            if let Ok(neg) = falling_factorial(&x, -m) {
                prop_assert_eq!(pos * neg, Rat::one());
            } else {
                prop_assert!(pos.is_zero());
            }
        }

        #[test]
        fn rising_is_signed_falling(x in small_rat(), j in 0u64..=10) {
            let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
            prop_assert_eq!(
                rising_factorial(&x, j),
                sign * falling_factorial(&-x.clone(), j as i64).unwrap()
            );
        }
    }
}
