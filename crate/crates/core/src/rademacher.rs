//! The Kloosterman-Bessel series for the coefficients of `1/eta`.
//!
//! `1/eta` has weight -1/2 and multiplier the conjugate of the eta
//! multiplier, cusp width `t = 24` and cusp parameter `kappa = 23`. Its
//! principal part is `q^(-1/24)`, so the Poincare series with `m = 24`
//! reproduces `p(j)` as the coefficient of `q^((24j - 1)/24)`, that is at
//! series index `n = 24j - 24`.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Cusp width of `SL_2(Z)` acting on the 1/24 lattice.
pub const CUSP_WIDTH: i64 = 24;
/// Cusp parameter of the conjugate eta multiplier.
pub const KAPPA: i64 = 23;
/// Weight of `1/eta`.
pub const WEIGHT: f64 = -0.5;
/// Default depth of the sum over `c`.
pub const DEFAULT_DEPTH: u32 = 50;

/// `sign * exp(pi i e / 12)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root24 {
    sign: i8,
    e: u8,
}

impl Root24 {
    pub fn new(sign: i8, e: i64) -> Root24 {
        assert!(sign == 1 || sign == -1, "Root24 sign must be +1 or -1");
        Root24 { sign, e: e.rem_euclid(24) as u8 }
    }

    pub fn one() -> Root24 {
        Root24 { sign: 1, e: 0 }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn e(&self) -> u8 {
        self.e
    }

    pub fn conj(&self) -> Root24 {
        Root24::new(self.sign, -(self.e as i64))
    }

    pub fn pow(&self, k: u32) -> Root24 {
        let sign = if self.sign < 0 && k % 2 == 1 { -1 } else { 1 };
        Root24::new(sign, self.e as i64 * k as i64)
    }

    /// Folds the sign into the exponent: `-1 = exp(pi i)`.
    pub fn exponent(&self) -> u8 {
        if self.sign < 0 {
            (self.e + 12) % 24
        } else {
            self.e
        }
    }

    pub fn is_one(&self) -> bool {
        self.exponent() == 0
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.exponent() as f64 / 12.0)
    }
}

impl Mul for Root24 {
    type Output = Root24;
    fn mul(self, rhs: Root24) -> Root24 {
        Root24::new(self.sign * rhs.sign, self.e as i64 + rhs.e as i64)
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i128, n: i128) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// The eta multiplier: `eta(g tau) = eps(g) (c tau + d)^(1/2) eta(tau)`.
pub fn eta_multiplier(a: i64, b: i64, c: i64, d: i64) -> Result<Root24> {
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    if a * d - b * c != 1 {
        return Err(Error::InvalidArgument(format!(
            "({a}, {b}; {c}, {d}) does not have determinant 1"
        )));
    }
    let bd = (b * d).rem_euclid(24);
    let cc = (c * c - 1).rem_euclid(24);
    if c % 2 != 0 {
        let sign = jacobi(d, c.abs());
        let e = c * (a + d - 3) - bd * cc;
        Ok(Root24::new(sign, e.rem_euclid(24) as i64))
    } else {
        let mut sign = jacobi(c, d.abs());
        if c <= 0 && d < 0 {
            sign = -sign;
        }
        let e = c * (a - 2 * d) - bd * cc + 3 * d - 3;
        Ok(Root24::new(sign, e.rem_euclid(24) as i64))
    }
}

/// `eta(tau)` from the product, for `Im(tau) > 0`.
pub fn eta_value(tau: Complex64) -> Complex64 {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let q = (two_pi_i * tau).exp();
    let mut prod = (two_pi_i * tau / 24.0).exp();
    let mut qn = q;
    while qn.norm() > 1e-18 {
        prod *= 1.0 - qn;
        qn *= q;
    }
    prod
}

/// `(c tau + d)^(1/2)` with argument in `[-pi, pi)`. Only `c = 0, d < 0`
/// lands on the cut; there the multiplier formula needs `-i sqrt(|d|)`.
pub fn automorphy_sqrt(c: i64, d: i64, tau: Complex64) -> Complex64 {
    if c == 0 && d < 0 {
        return -Complex64::i() * (-d as f64).sqrt();
    }
    (tau * c as f64 + d as f64).sqrt()
}

fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KloostermanSum {
    pub c: u64,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub term_count: u64,
}

/// One matrix `(a, b; c, d)` of the Kloosterman sum, with the weight
/// `1 / conj(eps(S)) = eps(S)`.
#[derive(Clone, Copy, Debug)]
struct KloostermanTerm {
    a: i64,
    d: i64,
    weight: Root24,
}

/// Literal enumeration of `(a, d)` in `[0, 24c)^2` with `ad = 1 (mod c)`.
fn kloosterman_terms(c: u64) -> Vec<KloostermanTerm> {
    let c = c as i64;
    let width = CUSP_WIDTH * c;
    let mut out = Vec::new();
    for a in 0..width {
        for d in 0..width {
            if (a * d - 1).rem_euclid(c) != 0 {
                continue;
            }
            let b = (a * d - 1) / c;
            let weight = eta_multiplier(a, b, c, d).expect("ad - bc = 1 by construction");
            out.push(KloostermanTerm { a, d, weight });
        }
    }
    out
}

fn sum_terms(c: u64, terms: &[KloostermanTerm], m: i64, n: i64) -> Complex64 {
    let modulus = (CUSP_WIDTH * c as i64) as i128;
    let mut acc = Complex64::new(0.0, 0.0);
    for t in terms {
        // exp(2 pi i x / 24c) * exp(pi i e / 12) = exp(2 pi i (x + e c) / 24c)
        let x = (m + KAPPA) as i128 * t.a as i128
            + (n + KAPPA) as i128 * t.d as i128
            + t.weight.exponent() as i128 * c as i128;
        let r = x.rem_euclid(modulus);
        acc += Complex64::from_polar(1.0, 2.0 * PI * r as f64 / modulus as f64);
    }
    acc
}

/// `K_c(eps, m, n)` for the `1/eta` multiplier.
pub fn kloosterman(c: u64, m: i64, n: i64) -> Result<KloostermanSum> {
    if c == 0 {
        return Err(Error::InvalidArgument("Kloosterman modulus must be positive".into()));
    }
    let terms = kloosterman_terms(c);
    Ok(KloostermanSum { c, value: sum_terms(c, &terms, m, n), term_count: terms.len() as u64 })
}

/// `I_{3/2}(x)` for `x > 0`.
pub fn bessel_i32(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("I_3/2 needs a positive finite argument, got {x}")));
    }
    if x >= 0.5 {
        return Ok((2.0 / (PI * x)).sqrt() * (x.cosh() - x.sinh() / x));
    }
    // (x/2)^(3/2) sum_k (x^2/4)^k / (k! Gamma(k + 5/2))
    let y = x * x / 4.0;
    let mut term = 1.0 / (0.75 * PI.sqrt());
    let mut acc = term;
    for k in 1..30 {
        let k = k as f64;
        term *= y / (k * (k + 1.5));
        acc += term;
        if term < acc * 1e-18 {
            break;
        }
    }
    Ok((x / 2.0).powf(1.5) * acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RademacherEstimate {
    pub n: u64,
    pub depth: u32,
    pub estimate: f64,
    pub nearest: u128,
    pub gap: f64,
    /// |imaginary part| / |real part| of the complex partial sum.
    pub imag_residual: f64,
}

/// Per-`c` Kloosterman terms, shared across all requested `n`.
pub struct KloostermanCache {
    terms: Vec<Vec<KloostermanTerm>>,
}

impl KloostermanCache {
    pub fn new(depth: u32) -> KloostermanCache {
        let terms = (1..=depth as u64).into_par_iter().map(kloosterman_terms).collect();
        KloostermanCache { terms }
    }

    pub fn depth(&self) -> u32 {
        self.terms.len() as u32
    }

    pub fn kloosterman(&self, c: u64, m: i64, n: i64) -> Option<KloostermanSum> {
        let terms = self.terms.get((c as usize).checked_sub(1)?)?;
        Some(KloostermanSum { c, value: sum_terms(c, terms, m, n), term_count: terms.len() as u64 })
    }

    /// Per-`c` terms of the series for `p(n)`, already carrying the overall
    /// constant, so the value is the plain sum over `c`.
    fn contributions(&self, n: u64) -> Result<Vec<Complex64>> {
        if n == 0 {
            return Err(Error::InvalidArgument("the series formula covers n >= 1".into()));
        }
        let m = CUSP_WIDTH;
        let idx = CUSP_WIDTH * n as i64 - CUSP_WIDTH;
        let lhs = (-m + KAPPA).abs() as f64;
        let rhs = (idx + KAPPA).abs() as f64;
        let t = CUSP_WIDTH as f64;
        // -i^(2-k) 2 pi |(-m+kappa)/(n+kappa)|^((1-k)/2) / t, and a further 1/t
        // because the literal sum over a, d in [0, ct) counts each class t times.
        let phase = Complex64::from_polar(1.0, PI / 2.0 * (2.0 - WEIGHT));
        let constant = -phase * (2.0 * PI * (lhs / rhs).powf((1.0 - WEIGHT) / 2.0) / (t * t));
        Ok(self
            .terms
            .par_iter()
            .enumerate()
            .map(|(i, terms)| {
                let c = i as u64 + 1;
                let k = sum_terms(c, terms, -m, idx);
                let arg = 4.0 * PI / (c as f64 * t) * (lhs * rhs).sqrt();
                constant * k / c as f64 * bessel_i32(arg).expect("positive argument")
            })
            .collect())
    }

    /// Real parts of the partial sums over `1 <= c <= C`, for `C = 1..=depth`.
    pub fn running_estimates(&self, n: u64) -> Result<Vec<f64>> {
        let mut total = Complex64::new(0.0, 0.0);
        Ok(self
            .contributions(n)?
            .into_iter()
            .map(|z| {
                total += z;
                total.re
            })
            .collect())
    }

    /// Partial sum over `1 <= c <= depth` for `p(n)`.
    pub fn rademacher_pn(&self, n: u64) -> Result<RademacherEstimate> {
        let mut value = Complex64::new(0.0, 0.0);
        for z in self.contributions(n)? {
            value += z;
        }
        let nearest = value.re.round().max(0.0) as u128;
        Ok(RademacherEstimate {
            n,
            depth: self.depth(),
            estimate: value.re,
            nearest,
            gap: (value.re - nearest as f64).abs(),
            imag_residual: value.im.abs() / value.re.abs(),
        })
    }
}

/// Partial sum over `1 <= c <= depth` of the Kloosterman-Bessel series for `p(n)`.
pub fn rademacher_pn(n: u64, depth: u32) -> Result<RademacherEstimate> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    KloostermanCache::new(depth).rademacher_pn(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partition_table;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> (i64, i64, i64, i64) {
        loop {
            let c = rng.random_range(-bound..=bound);
            let d = rng.random_range(-bound..=bound);
            let g = c.extended_gcd(&d);
            if g.gcd != 1 {
                continue;
            }
            // a d - b c = 1 with a = x', b = -y' from x c + y d = 1
            let (a0, b0) = (g.y, -g.x);
            let k = rng.random_range(-2..=2);
            return (a0 + k * c, b0 + k * d, c, d);
        }
    }

    fn act(g: (i64, i64, i64, i64), tau: Complex64) -> Complex64 {
        let (a, b, c, d) = g;
        (tau * a as f64 + b as f64) / (tau * c as f64 + d as f64)
    }

    fn compose(g: (i64, i64, i64, i64), h: (i64, i64, i64, i64)) -> (i64, i64, i64, i64) {
        (g.0 * h.0 + g.1 * h.2, g.0 * h.1 + g.1 * h.3, g.2 * h.0 + g.3 * h.2, g.2 * h.1 + g.3 * h.3)
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(eta_multiplier(1, 1, 0, 1).unwrap(), Root24::new(1, 1));
        assert_eq!(eta_multiplier(0, -1, 1, 0).unwrap(), Root24::new(1, -3));
        assert!(eta_multiplier(1, 1, 1, 1).is_err());
        assert_eq!(eta_multiplier(-1, 0, 0, -1).unwrap().to_complex().im, 1.0);
    }

    #[test]
    fn multiplier_is_24th_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..200 {
            let (a, b, c, d) = random_sl2(&mut rng, 40);
            let e = eta_multiplier(a, b, c, d).unwrap();
            assert!(e.pow(24).is_one());
            assert!((e * e.conj()).is_one());
        }
    }

    #[test]
    fn multiplier_matches_numeric_eta() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tau = Complex64::new(0.1, 1.1);
        for _ in 0..60 {
            let g = random_sl2(&mut rng, 5);
            let (a, b, c, d) = g;
            let lhs = eta_value(act(g, tau));
            let rhs = eta_multiplier(a, b, c, d).unwrap().to_complex()
                * automorphy_sqrt(c, d, tau)
                * eta_value(tau);
            assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "{g:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn cocycle_at_i() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tau = Complex64::i();
        let eta_tau = eta_value(tau);
        let law = |g: (i64, i64, i64, i64), z: Complex64, ez: Complex64| {
            eta_multiplier(g.0, g.1, g.2, g.3).unwrap().to_complex() * automorphy_sqrt(g.2, g.3, z) * ez
        };
        for _ in 0..100 {
            let g1 = random_sl2(&mut rng, 4);
            let g2 = random_sl2(&mut rng, 4);
            let direct = law(compose(g1, g2), tau, eta_tau);
            let mid = act(g2, tau);
            let stepwise = law(g1, mid, law(g2, tau, eta_tau));
            assert!((direct - stepwise).norm() < 1e-10 * direct.norm(), "{g1:?} {g2:?}");
        }
    }

    #[test]
    fn kloosterman_counts() {
        assert_eq!(kloosterman(1, -24, 0).unwrap().term_count, 576);
        let k2 = kloosterman(2, -24, 0).unwrap();
        let odd = (0..48u64).flat_map(|a| (0..48u64).map(move |d| a * d)).filter(|x| x % 2 == 1).count();
        assert_eq!(k2.term_count, odd as u64);
        assert_eq!(k2.term_count, 576);
        for c in 1..8 {
            let k = kloosterman(c, -24, 48).unwrap();
            assert!(k.value.norm() <= k.term_count as f64 + 1e-9);
        }
        assert!(kloosterman(0, 0, 0).is_err());
    }

    #[test]
    fn cache_matches_direct_sum() {
        let cache = KloostermanCache::new(6);
        for c in 1..=6 {
            for n in [0, 24, 240] {
                assert_eq!(cache.kloosterman(c, -24, n).unwrap(), kloosterman(c, -24, n).unwrap());
            }
        }
    }

    fn bessel_series(x: f64) -> f64 {
        let mut acc = 0.0;
        for k in 0..40 {
            let kf = k as f64;
            acc += (x / 2.0).powf(2.0 * kf + 1.5)
                / (statrs::function::gamma::gamma(kf + 1.0) * statrs::function::gamma::gamma(kf + 2.5));
        }
        acc
    }

    #[test]
    fn bessel_against_series() {
        for (x, tol) in [(1e-3, 1e-10), (0.3, 1e-12), (0.5, 1e-12), (1.0, 1e-12), (3.0, 1e-12)] {
            let a = bessel_i32(x).unwrap();
            let b = bessel_series(x);
            assert!(((a - b) / b).abs() < tol, "x = {x}: {a} vs {b}");
        }
        let x = 40.0;
        let r = bessel_i32(x).unwrap() * (2.0 * PI * x).sqrt() * (-x).exp();
        assert!((r - 1.0).abs() < 0.04);
        assert!(bessel_i32(0.0).is_err());
        assert!(bessel_i32(-1.0).is_err());
    }

    #[test]
    fn small_partitions() {
        let cache = KloostermanCache::new(20);
        let p = partition_table(11);
        for n in 1..=10 {
            let est = cache.rademacher_pn(n).unwrap();
            assert_eq!(est.nearest.to_string(), p.get(n as i64).to_string(), "{est:?}");
            assert!(est.gap < 0.1);
        }
    }

    #[test]
    fn p_of_100() {
        let est = rademacher_pn(100, 50).unwrap();
        assert_eq!(est.nearest, 190569292);
        assert!(est.imag_residual < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(rademacher_pn(0, 5).is_err());
        assert!(rademacher_pn(3, 0).is_err());
    }
}
