//! The analytic side: the Kronecker symbol (12/n), the constants
//! beta(nu, j, m), partial sums of the twisted quadratic Dirichlet series
//! D(f; s), the truncated double sum D-hat, and Petersson norm estimates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::exactnum::{factorial, gamma_exact, rising_factorial, PiScalar, QuadNum, Rat};
use crate::hecke::{df_over_norm, eigenforms, Eigenform};

/// (12/n): 0 unless gcd(n, 12) = 1, then +1 for n = +-1 and -1 for n = +-5 mod 12.
pub fn kronecker12(n: u64) -> i8 {
    match n % 12 {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// beta(nu, j, m) exactly. The power of pi is always pi^(1 - 2nu).
pub fn beta_constant(nu: u32, j: u32, m: u32) -> Result<PiScalar> {
    if nu < 2 || j > nu - 2 {
        return Err(Error::InvalidArgument(format!("beta needs nu >= 2 and 0 <= j <= nu - 2 (got nu = {nu}, j = {j})")));
    }
    let (nu_i, j_i, m_i) = (nu as i64, j as i64, m as i64);
    let half = |twice: i64| Rat::new(twice, 2);
    let gammas = &gamma_exact(&half(2 * nu_i - 1))? * &gamma_exact(&half(2 * nu_i + 1))?;
    let denom = &PiScalar::new(Rat::from(2), 1) * &gamma_exact(&half(5))?;
    let six_over_pi = PiScalar::new(Rat::from(6), -2).pow(2 * nu as i32 - 1);
    let facts = Rat::from_int(factorial((2 * nu_i + m_i - 2) as u64))
        / Rat::from_int(factorial(j as u64) * factorial(m as u64) * factorial((2 * nu_i - j_i - 2) as u64));
    let rising = rising_factorial(&Rat::from(nu_i - j_i - 1), nu as u64)
        * rising_factorial(&half(3), j as u64)
        / (rising_factorial(&half(-1 - 2 * j_i), nu as u64) * rising_factorial(&half(5), j as u64));
    let sign = if j % 2 == 1 { Rat::one() } else { -Rat::one() };
    let value = &(&gammas.checked_div(&denom)? * &six_over_pi) * &PiScalar::rational(sign * facts * rising);
    debug_assert!(value.is_zero() || value.half_pi_pow() == 2 * (1 - 2 * nu_i));
    Ok(value)
}

/// Floating arithmetic used for the Dirichlet sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloatMode {
    /// IEEE binary64 with compensated summation.
    #[default]
    Binary64,
    /// Double-double (about 106 significant bits).
    DoubleDouble,
}

impl FromStr for FloatMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary64" | "f64" => Ok(FloatMode::Binary64),
            "double-double" | "dd" => Ok(FloatMode::DoubleDouble),
            _ => Err(Error::InvalidArgument(format!("unknown float mode {s:?}"))),
        }
    }
}

impl fmt::Display for FloatMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FloatMode::Binary64 => "binary64",
            FloatMode::DoubleDouble => "double-double",
        })
    }
}

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn big_to_dd(n: &BigInt) -> Result<TwoFloat> {
    let hi = n.to_f64().filter(|x| x.is_finite()).ok_or_else(|| {
        Error::InvalidArgument("integer out of double-double range".into())
    })?;
    let rest = n - BigInt::from_f64(hi).expect("finite");
    let lo = rest.to_f64().unwrap_or(0.0);
    Ok(TwoFloat::new_add(hi, lo))
}

fn rat_to_dd(x: &Rat) -> Result<TwoFloat> {
    Ok(big_to_dd(x.numer())? / big_to_dd(x.denom())?)
}

fn pi_scalar_to_dd(x: &PiScalar) -> Result<TwoFloat> {
    let pi = twofloat::consts::PI;
    let h = x.half_pi_pow();
    let mut v = rat_to_dd(x.coeff())? * pi.powi(h.div_euclid(2) as i32);
    if h.rem_euclid(2) == 1 {
        v *= pi.sqrt();
    }
    Ok(v)
}

fn quad_to_dd(z: &QuadNum) -> Result<TwoFloat> {
    let a = rat_to_dd(&z.a)?;
    if z.b.is_zero() {
        return Ok(a);
    }
    Ok(a + rat_to_dd(&z.b)? * TwoFloat::from(z.d as f64).sqrt())
}

/// chi(n) a_f((n^2 - 1)/24) for the n <= N with chi(n) != 0.
struct TwistedTerms {
    n: Vec<u64>,
    v: Vec<f64>,
    v_dd: Vec<TwoFloat>,
}

impl TwistedTerms {
    fn new(f: &Eigenform, n_max: u64, mode: FloatMode) -> Result<Self> {
        let needed = ((n_max * n_max - 1) / 24) as i64;
        if f.prec() <= needed {
            return Err(Error::InsufficientPrecision { needed: needed + 1, available: f.prec() });
        }
        let mut out = TwistedTerms { n: Vec::new(), v: Vec::new(), v_dd: Vec::new() };
        for n in 1..=n_max {
            let chi = kronecker12(n);
            if chi == 0 {
                continue;
            }
            assert_eq!((n * n - 1) % 24, 0, "24 divides n^2 - 1 when gcd(n, 12) = 1");
            let a = f.a(((n * n - 1) / 24) as usize);
            if a.is_zero() {
                continue;
            }
            out.n.push(n);
            match mode {
                FloatMode::Binary64 => out.v.push(f64::from(chi) * a.to_f64()),
                FloatMode::DoubleDouble => out.v_dd.push(quad_to_dd(a)? * f64::from(chi)),
            }
        }
        Ok(out)
    }

    fn partial(&self, s: i32, mode: FloatMode) -> TwoFloat {
        match mode {
            FloatMode::Binary64 => {
                let mut acc = CompensatedSum::default();
                for (&n, &v) in self.n.iter().zip(&self.v) {
                    acc.add(v * (n as f64).powi(-s));
                }
                TwoFloat::from(acc.value())
            }
            FloatMode::DoubleDouble => {
                let mut acc = TwoFloat::from(0.0);
                for (&n, &v) in self.n.iter().zip(&self.v_dd) {
                    // n^s would overflow; such terms are far below double-double resolution.
                    if f64::from(s) * (n as f64).ln() > 600.0 {
                        continue;
                    }
                    acc += v / TwoFloat::from(n as f64).powi(s);
                }
                acc
            }
        }
    }
}

fn check_s(f: &Eigenform, s: i32) -> Result<()> {
    let min = f.weight() as i32 + 1;
    if s < min {
        return Err(Error::InvalidArgument(format!(
            "s = {s} is below the absolute convergence bound {min} for weight {}",
            f.weight()
        )));
    }
    Ok(())
}

/// D(f, N; s) = sum_{n <= N} (12/n) a_f((n^2 - 1)/24) n^(-s).
pub fn dirichlet_partial(f: &Eigenform, n_max: u64, s: i32) -> Result<f64> {
    dirichlet_partial_with(f, n_max, s, FloatMode::Binary64)
}

pub fn dirichlet_partial_with(f: &Eigenform, n_max: u64, s: i32, mode: FloatMode) -> Result<f64> {
    check_s(f, s)?;
    if n_max == 0 {
        return Ok(0.0);
    }
    Ok(f64::from(TwistedTerms::new(f, n_max, mode)?.partial(s, mode)))
}

/// D-hat_f(M, N) = sum_{j=0}^{nu-2} sum_{m=0}^{M} beta(nu, j, m) D(f, N; 2nu+1+2m+2j),
/// accumulated j-outer, m-inner.
pub fn df_truncated(f: &Eigenform, nu: u32, m_max: u32, n_max: u64) -> Result<f64> {
    df_truncated_with(f, nu, m_max, n_max, FloatMode::Binary64)
}

pub fn df_truncated_with(f: &Eigenform, nu: u32, m_max: u32, n_max: u64, mode: FloatMode) -> Result<f64> {
    if f.weight() != 2 * nu as i64 {
        return Err(Error::InvalidArgument(format!("form of weight {} used with nu = {nu}", f.weight())));
    }
    if n_max == 0 {
        return Ok(0.0);
    }
    let terms = TwistedTerms::new(f, n_max, mode)?;
    let mut cache: HashMap<i32, TwoFloat> = HashMap::new();
    let mut acc = CompensatedSum::default();
    let mut acc_dd = TwoFloat::from(0.0);
    for j in 0..=nu - 2 {
        for m in 0..=m_max {
            let s = (2 * nu + 1 + 2 * m + 2 * j) as i32;
            check_s(f, s)?;
            let d = *cache.entry(s).or_insert_with(|| terms.partial(s, mode));
            let beta = beta_constant(nu, j, m)?;
            match mode {
                FloatMode::Binary64 => acc.add(beta.to_f64() * f64::from(d)),
                FloatMode::DoubleDouble => acc_dd += pi_scalar_to_dd(&beta)? * d,
            }
        }
    }
    Ok(match mode {
        FloatMode::Binary64 => acc.value(),
        FloatMode::DoubleDouble => f64::from(acc_dd),
    })
}

/// Truncation (M, N) used when none is given: (100, 2000) for
/// weight 12 and a smaller N elsewhere, where the coefficients are costlier
/// and the series converge faster.
pub fn default_truncation(nu: u32) -> (u32, u64) {
    if nu == 6 {
        (100, 2000)
    } else {
        (100, 250)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormEstimate {
    pub nu: u32,
    #[serde(rename = "M")]
    pub big_m: u32,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub mode: FloatMode,
    /// D-hat per eigenform.
    pub dhat: Vec<f64>,
    /// Exact D_f/||f|| per eigenform.
    pub ratio: Vec<QuadNum>,
    /// D-hat divided by the exact ratio.
    pub norm: Vec<f64>,
}

/// Eigenforms of weight 2nu with enough coefficients for D(f, N; s).
pub fn eigenforms_for_sums(nu: u32, n_max: u64) -> Result<Vec<Eigenform>> {
    let prec = ((n_max * n_max).saturating_sub(1) / 24 + 1) as i64;
    eigenforms(2 * nu as i64, prec.max(8))
}

pub fn petersson_norm_estimate(nu: u32) -> Result<NormEstimate> {
    let (m, n) = default_truncation(nu);
    petersson_norm_estimate_with(nu, m, n, FloatMode::Binary64)
}

/// ||f_i|| estimated as D-hat_{f_i}(M, N) / (D_{f_i}/||f_i||).
pub fn petersson_norm_estimate_with(nu: u32, m_max: u32, n_max: u64, mode: FloatMode) -> Result<NormEstimate> {
    let ratio = df_over_norm(nu)?;
    let forms = eigenforms_for_sums(nu, n_max)?;
    let dhat = forms
        .iter()
        .map(|f| df_truncated_with(f, nu, m_max, n_max, mode))
        .collect::<Result<Vec<f64>>>()?;
    let norm = dhat.iter().zip(&ratio).map(|(d, r)| d / r.to_f64()).collect();
    Ok(NormEstimate { nu, big_m: m_max, big_n: n_max, mode, dhat, ratio, norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    /// Jacobi symbol (a/n) for odd n > 0 by the reciprocity algorithm.
    fn jacobi(mut a: u64, mut n: u64) -> i8 {
        let mut t = 1;
        a %= n;
        while a != 0 {
            while a.is_multiple_of(2) {
                a /= 2;
                if n % 8 == 3 || n % 8 == 5 {
                    t = -t;
                }
            }
            std::mem::swap(&mut a, &mut n);
            if a % 4 == 3 && n % 4 == 3 {
                t = -t;
            }
            a %= n;
        }
        if n == 1 { t } else { 0 }
    }

    /// (12/n) = (3/n)(4/n) with (4/n) = 1 for odd n.
    fn kronecker_oracle(n: u64) -> i8 {
        if n.is_multiple_of(2) {
            return 0;
        }
        jacobi(3, n)
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker12(1), 1);
        assert_eq!(kronecker12(2), 0);
        assert_eq!(kronecker12(11), 1);
        assert_eq!(kronecker12(5), -1);
        for n in 1..2000 {
            assert_eq!(kronecker12(n), kronecker_oracle(n));
        }
    }

    #[test]
    fn kronecker_multiplicative_and_periodic() {
        for n in 1..10_000u64 {
            assert_eq!(kronecker12(n), kronecker12(n + 12));
        }
        for a in (1..100u64).filter(|a| kronecker12(*a) != 0) {
            for b in (1..100u64).filter(|b| kronecker12(*b) != 0) {
                assert_eq!(kronecker12(a * b), kronecker12(a) * kronecker12(b));
            }
        }
    }

    fn beta_oracle(nu: u32, j: u32, m: u32) -> f64 {
        let (nu, j, m) = (nu as f64, j as f64, m as f64);
        let rising = |x: f64, k: f64| gamma(x + k) / gamma(x);
        let rising_neg = |x: f64, k: u32| (0..k).map(|i| x + i as f64).product::<f64>();
        let sign = if j as u32 % 2 == 1 { 1.0 } else { -1.0 };
        sign * gamma(nu - 0.5) * gamma(nu + 0.5) / (2.0 * std::f64::consts::PI.sqrt() * gamma(2.5))
            * (6.0 / std::f64::consts::PI).powf(2.0 * nu - 1.0)
            * gamma(2.0 * nu + m - 1.0)
            / (gamma(j + 1.0) * gamma(m + 1.0) * gamma(2.0 * nu - j - 1.0))
            * rising_neg(nu - j - 1.0, nu as u32)
            * rising(1.5, j)
            / (rising_neg(-0.5 - j, nu as u32) * rising(2.5, j))
    }

    #[test]
    fn beta_pi_power_and_domain() {
        for nu in 2..=14 {
            for j in 0..=nu - 2 {
                let b = beta_constant(nu, j, 3).unwrap();
                assert_eq!(b.half_pi_pow(), 2 * (1 - 2 * nu as i64));
            }
            assert!(beta_constant(nu, nu - 1, 0).is_err());
        }
    }

    #[test]
    fn beta_matches_float_gamma() {
        for nu in 2..=8 {
            for j in 0..=nu - 2 {
                for m in 0..=5 {
                    let exact = beta_constant(nu, j, m).unwrap().to_f64();
                    let float = beta_oracle(nu, j, m);
                    assert!((exact / float - 1.0).abs() < 1e-12, "beta({nu},{j},{m}): {exact} vs {float}");
                }
            }
        }
    }

    #[test]
    fn double_double_beta_agrees() {
        let b = beta_constant(6, 2, 40).unwrap();
        let dd = f64::from(pi_scalar_to_dd(&b).unwrap());
        assert!((dd / b.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_sum_examples() {
        let delta = &eigenforms(12, 20).unwrap()[0];
        assert_eq!(dirichlet_partial(delta, 1, 13).unwrap(), 0.0);
        let d5 = dirichlet_partial(delta, 5, 13).unwrap();
        assert!((d5 - (-(5f64.powi(-13)))).abs() < 1e-30);
        assert!(dirichlet_partial(delta, 5, 12).is_err());
        assert!(matches!(dirichlet_partial(delta, 100, 13), Err(Error::InsufficientPrecision { .. })));
    }

    fn doubling_steps(values: &[f64]) -> Vec<f64> {
        values.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
    }

    #[test]
    fn truncation_steps_are_not_monotone() {
        // The twisted coefficients change sign irregularly, so the tails behave
        // like a random walk: the step from N = 1000 to 2000 is slightly larger
        // than the one before it. Double-double confirms this is not rounding.
        let forms = eigenforms_for_sums(6, 2000).unwrap();
        let delta = &forms[0];
        let grid = [250u64, 500, 1000, 2000];
        for mode in [FloatMode::Binary64, FloatMode::DoubleDouble] {
            let d: Vec<f64> = grid.iter().map(|&n| dirichlet_partial_with(delta, n, 13, mode).unwrap()).collect();
            let steps = doubling_steps(&d);
            assert!(steps[1] < steps[0] && steps[2] > steps[1], "{steps:?}");
            let dhat: Vec<f64> = grid.iter().map(|&n| df_truncated_with(delta, 6, 100, n, mode).unwrap()).collect();
            let steps = doubling_steps(&dhat);
            assert!(steps[1] < steps[0] && steps[2] > steps[1], "{steps:?}");
            assert!(steps[2] < steps[0] / 4.0);
        }
    }

    #[test]
    fn smallest_truncation() {
        let delta = &eigenforms(12, 20).unwrap()[0];
        let direct: f64 = (0..=4)
            .map(|j| beta_constant(6, j, 0).unwrap().to_f64() * dirichlet_partial(delta, 2, 13 + 2 * j as i32).unwrap())
            .sum();
        assert_eq!(df_truncated(delta, 6, 0, 2).unwrap(), direct);
        assert_eq!(direct, 0.0);
    }

    #[test]
    fn weight_twelve_reproduction() {
        let forms = eigenforms_for_sums(6, 2000).unwrap();
        let dhat = df_truncated(&forms[0], 6, 100, 2000).unwrap();
        assert!((dhat - (-49.608382)).abs() < 1e-5, "{dhat}");
        let dd = df_truncated_with(&forms[0], 6, 100, 2000, FloatMode::DoubleDouble).unwrap();
        assert!((dd - dhat).abs() < 1e-12 * dhat.abs(), "{dd} vs {dhat}");
        let est = petersson_norm_estimate(6).unwrap();
        assert!((1.0353e-6..=1.0354e-6).contains(&est.norm[0]), "{:?}", est.norm);
        assert!((est.norm[0] - 1.035362e-6).abs() < 1e-9);
    }

    #[test]
    fn weight_twenty_four_norms_are_positive() {
        let est = petersson_norm_estimate_with(12, 30, 120, FloatMode::Binary64).unwrap();
        assert_eq!(est.norm.len(), 2);
        assert!(est.norm.iter().all(|x| *x > 0.0), "{:?}", est.norm);
        let forms = eigenforms_for_sums(12, 10).unwrap();
        assert!(forms[0].a(2).to_f64() < forms[1].a(2).to_f64());
    }
}
