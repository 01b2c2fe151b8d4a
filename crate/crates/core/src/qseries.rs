//! Truncated formal series in a fractional power of q over exact rationals.
//!
//! A `Series<DEN>` stores coefficients of `q^(e/DEN)` for every integer `e`
//! with `offset <= e < prec`; all exponents at or beyond `prec` are unknown.
//! [`QSeries24`] is the 1/24-lattice used for eta and its relatives and
//! [`IntQSeries`] holds ordinary integer-exponent q-expansions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::Rat;

#[derive(Clone, PartialEq, Eq)]
pub struct Series<const DEN: i64> {
    offset: i64,
    coeffs: Vec<Rat>,
    prec: i64,
}

/// Series in q^(1/24).
pub type QSeries24 = Series<24>;
/// Series in integral powers of q.
pub type IntQSeries = Series<1>;

impl<const DEN: i64> Series<DEN> {
    pub fn new(offset: i64, coeffs: Vec<Rat>, prec: i64) -> Result<Self> {
        if prec <= offset || coeffs.len() as i64 != prec - offset {
            return Err(Error::InvalidArgument(format!(
                "series with offset {offset}, precision {prec} and {} coefficients",
                coeffs.len()
            )));
        }
        Ok(Series { offset, coeffs, prec })
    }

    /// Coefficients starting at `offset`; precision is the first unstored exponent.
    pub fn from_coeffs(offset: i64, coeffs: Vec<Rat>) -> Result<Self> {
        let prec = offset + coeffs.len() as i64;
        Series::new(offset, coeffs, prec)
    }

    pub fn zero(prec: i64) -> Self {
        let offset = 0.min(prec - 1);
        Series { offset, coeffs: vec![Rat::zero(); (prec - offset) as usize], prec }
    }

    pub fn monomial(exp: i64, coeff: Rat, prec: i64) -> Result<Self> {
        if exp >= prec {
            return Err(Error::InsufficientPrecision { needed: exp + 1, available: prec });
        }
        let mut coeffs = vec![Rat::zero(); (prec - exp) as usize];
        coeffs[0] = coeff;
        Ok(Series { offset: exp, coeffs, prec })
    }

    pub fn one(prec: i64) -> Result<Self> {
        Series::monomial(0, Rat::one(), prec)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of q^(exp/DEN), or `None` beyond the known precision.
    pub fn try_coeff(&self, exp: i64) -> Option<Rat> {
        if exp >= self.prec {
            None
        } else if exp < self.offset {
            Some(Rat::zero())
        } else {
            Some(self.coeffs[(exp - self.offset) as usize].clone())
        }
    }

    /// Coefficient of q^(exp/DEN).
    ///
    /// Panics if `exp` is at or beyond the precision.
    pub fn coeff(&self, exp: i64) -> Rat {
        self.try_coeff(exp)
            .unwrap_or_else(|| panic!("coefficient {exp} requested beyond precision {}", self.prec))
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.iter_nonzero().next().map(|(e, _)| e)
    }

    /// Drops leading zero coefficients; the zero series is left unchanged.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Some(v) if v > self.offset => Series {
                offset: v,
                coeffs: self.coeffs[(v - self.offset) as usize..].to_vec(),
                prec: self.prec,
            },
            _ => self.clone(),
        }
    }

    /// Restricts to a lower precision.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.offset {
            return Series::zero(prec);
        }
        Series {
            offset: self.offset,
            coeffs: self.coeffs[..(prec - self.offset) as usize].to_vec(),
            prec,
        }
    }

    /// Re-bases the storage at a lower offset by padding zeros.
    fn extended_down(&self, offset: i64) -> Vec<Rat> {
        let pad = (self.offset - offset).max(0) as usize;
        let mut v = vec![Rat::zero(); pad];
        v.extend(self.coeffs.iter().cloned());
        v
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        let offset = self.offset.min(rhs.offset);
        let prec = self.prec.min(rhs.prec);
        let len = (prec - offset) as usize;
        let mut out = self.extended_down(offset);
        out.truncate(len);
        out.resize(len, Rat::zero());
        for (e, c) in rhs.iter_nonzero() {
            if e >= prec {
                break;
            }
            let slot = &mut out[(e - offset) as usize];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Series { offset, coeffs: out, prec }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Series {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            prec: self.prec,
        }
    }

    /// Multiplication by q^(exp/DEN).
    pub fn shift(&self, exp: i64) -> Self {
        Series { offset: self.offset + exp, coeffs: self.coeffs.clone(), prec: self.prec + exp }
    }

    /// Convolution product. Known through
    /// `min(a.prec + b.offset, b.prec + a.offset)`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let offset = self.offset + rhs.offset;
        let prec = (self.prec + rhs.offset).min(rhs.prec + self.offset);
        let len = (prec - offset) as usize;
        let a: Vec<(usize, &Rat)> = nonzero_indexed(&self.coeffs, len);
        let b: Vec<(usize, &Rat)> = nonzero_indexed(&rhs.coeffs, len);
        let integral = a.iter().chain(b.iter()).all(|(_, c)| c.is_integer());
        let coeffs = if integral {
            convolve_integral(&a, &b, len)
        } else {
            let mut out = vec![Rat::zero(); len];
            for &(i, x) in &a {
                for &(j, y) in &b {
                    if i + j >= len {
                        break;
                    }
                    out[i + j] += x * y;
                }
            }
            out
        };
        Series { offset, coeffs, prec }
    }

    pub fn pow(&self, mut exp: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        if exp == 0 {
            return Series::one(self.prec - self.offset);
        }
        while exp > 0 {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("positive exponent"))
    }

    /// Multiplicative inverse. The leading stored coefficient must be nonzero.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let inv0 = c0.recip()?;
        let len = self.coeffs.len();
        let tail: Vec<(usize, &Rat)> =
            nonzero_indexed(&self.coeffs, len).into_iter().filter(|(i, _)| *i > 0).collect();
        let mut out: Vec<Rat> = Vec::with_capacity(len);
        out.push(inv0.clone());
        for n in 1..len {
            let mut s = Rat::zero();
            for &(i, c) in &tail {
                if i > n {
                    break;
                }
                let prev = &out[n - i];
                if !prev.is_zero() {
                    s += c * prev;
                }
            }
            out.push(-(s * &inv0));
        }
        Ok(Series { offset: -self.offset, coeffs: out, prec: -self.offset + len as i64 })
    }

    /// The operator q d/dq: the coefficient at q^(e/DEN) is multiplied by e/DEN.
    pub fn d_operator(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_zero() {
                    Rat::zero()
                } else {
                    c * Rat::new(self.offset + i as i64, DEN)
                }
            })
            .collect();
        Series { offset: self.offset, coeffs, prec: self.prec }
    }

    pub fn d_power(&self, r: u32) -> Self {
        (0..r).fold(self.clone(), |s, _| s.d_operator())
    }

    /// Equality on the common known range.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        let lo = self.offset.min(other.offset);
        (lo..prec).all(|e| self.coeff(e) == other.coeff(e))
    }

    /// First exponent below the common precision where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let prec = self.prec.min(other.prec);
        let lo = self.offset.min(other.offset);
        (lo..prec).find(|&e| self.coeff(e) != other.coeff(e))
    }
}

fn nonzero_indexed(coeffs: &[Rat], len: usize) -> Vec<(usize, &Rat)> {
    coeffs
        .iter()
        .take(len)
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn convolve_integral(a: &[(usize, &Rat)], b: &[(usize, &Rat)], len: usize) -> Vec<Rat> {
    let a: Vec<(usize, &BigInt)> = a.iter().map(|(i, c)| (*i, c.numer())).collect();
    let b: Vec<(usize, &BigInt)> = b.iter().map(|(i, c)| (*i, c.numer())).collect();
    let mut out = vec![BigInt::zero(); len];
    for &(i, x) in &a {
        for &(j, y) in &b {
            if i + j >= len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out.into_iter().map(Rat::from_int).collect()
}

impl QSeries24 {
    /// Down-conversion to integral exponents. Every coefficient off the
    /// multiples of 24 must vanish.
    pub fn to_integral(&self) -> Result<IntQSeries> {
        if let Some((e, _)) = self.iter_nonzero().find(|(e, _)| e.rem_euclid(24) != 0) {
            return Err(Error::FractionalExponent { exp24: e });
        }
        let prec = ceil_div(self.prec, 24);
        let offset = ceil_div(self.offset, 24).min(prec - 1);
        let coeffs = (offset..prec).map(|n| self.coeff(24 * n)).collect();
        Series::new(offset, coeffs, prec)
    }
}

impl IntQSeries {
    /// Up-conversion to the 1/24 lattice.
    pub fn to_q24(&self) -> QSeries24 {
        let offset = 24 * self.offset;
        let prec = 24 * self.prec - 23;
        let mut coeffs = vec![Rat::zero(); (prec - offset) as usize];
        for (e, c) in self.iter_nonzero() {
            coeffs[(24 * e - offset) as usize] = c.clone();
        }
        Series { offset, coeffs, prec }
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl<const DEN: i64> Add for &Series<DEN> {
    type Output = Series<DEN>;
    fn add(self, rhs: &Series<DEN>) -> Series<DEN> {
        self.combine(rhs, false)
    }
}

impl<const DEN: i64> Sub for &Series<DEN> {
    type Output = Series<DEN>;
    fn sub(self, rhs: &Series<DEN>) -> Series<DEN> {
        self.combine(rhs, true)
    }
}

impl<const DEN: i64> Mul for &Series<DEN> {
    type Output = Series<DEN>;
    fn mul(self, rhs: &Series<DEN>) -> Series<DEN> {
        Series::mul(self, rhs)
    }
}

impl<const DEN: i64> Neg for &Series<DEN> {
    type Output = Series<DEN>;
    fn neg(self) -> Series<DEN> {
        self.scale(&-Rat::one())
    }
}

fn fmt_exponent(e: i64, den: i64) -> String {
    let g = num_integer::gcd(e, den);
    let (n, d) = (e / g, den / g);
    if d == 1 {
        format!("q^{n}")
    } else {
        format!("q^({n}/{d})")
    }
}

impl<const DEN: i64> fmt::Display for Series<DEN> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.iter_nonzero() {
            write!(f, "({c})*{} + ", fmt_exponent(e, DEN))?;
        }
        write!(f, "O({})", fmt_exponent(self.prec, DEN))
    }
}

impl<const DEN: i64> fmt::Debug for Series<DEN> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const DEN: i64> Serialize for Series<DEN> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Series", 3)?;
        if DEN == 24 {
            st.serialize_field("offset24", &self.offset)?;
            st.serialize_field("prec24", &self.prec)?;
        } else {
            st.serialize_field("offset", &self.offset)?;
            st.serialize_field("prec", &self.prec)?;
        }
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

/// The product prod_{n>=1} (1 - q^n) through q^(prec-1).
pub fn euler_product(prec: i64) -> IntQSeries {
    let mut s = IntQSeries::one(prec).expect("positive precision");
    for n in 1..prec {
        let factor = &IntQSeries::one(prec).expect("positive precision")
            - &IntQSeries::monomial(n, Rat::one(), prec).expect("n < prec");
        s = s.mul(&factor);
    }
    s
}

/// Dedekind eta as the signed sum over (6k+1)^2 on the 1/24 lattice.
pub fn eta_expansion(prec24: i64) -> Result<QSeries24> {
    if prec24 <= 1 {
        return Err(Error::InvalidArgument(format!("eta needs prec24 > 1, got {prec24}")));
    }
    let mut coeffs = vec![Rat::zero(); (prec24 - 1) as usize];
    // (6k+1)^2 over k in Z is m^2 over m = 1, 5, 7, 11, ... with sign (-1)^k.
    let mut m: i64 = 1;
    while m * m < prec24 {
        if m % 6 == 1 || m % 6 == 5 {
            let k = if m % 6 == 1 { (m - 1) / 6 } else { -(m + 1) / 6 };
            let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            coeffs[(m * m - 1) as usize] = Rat::from(sign);
        }
        m += 1;
    }
    Series::new(1, coeffs, prec24)
}

/// Eta as q^(1/24) prod (1 - q^n); must agree with [`eta_expansion`].
pub fn eta_product(prec24: i64) -> Result<QSeries24> {
    if prec24 <= 1 {
        return Err(Error::InvalidArgument(format!("eta needs prec24 > 1, got {prec24}")));
    }
    let int_prec = ceil_div(prec24 + 22, 24);
    let prod = euler_product(int_prec.max(1)).to_q24().shift(1);
    Ok(prod.truncate(prec24))
}

/// 1/eta = q^(-1/24) sum p(n) q^n.
pub fn eta_inverse_expansion(prec24: i64) -> Result<QSeries24> {
    if prec24 <= -1 {
        return Err(Error::InvalidArgument(format!("1/eta needs prec24 > -1, got {prec24}")));
    }
    eta_expansion(prec24 + 2)?.invert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rat {
        Rat::from(n)
    }

    #[test]
    fn eta_leading_terms() {
        let eta = eta_expansion(24 * 13 + 1).unwrap();
        assert_eq!(eta.offset(), 1);
        let int_part: Vec<Rat> = (0..13).map(|n| eta.coeff(24 * n + 1)).collect();
        let expected = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1].map(r);
        assert_eq!(int_part, expected.to_vec());
        assert_eq!(eta.coeff(25), r(-1));
        assert_eq!(eta.coeff(2), r(0));
    }

    #[test]
    fn pentagonal_number_theorem() {
        for prec24 in [2, 25, 100, 24 * 100] {
            let sum = eta_expansion(prec24).unwrap();
            let prod = eta_product(prec24).unwrap();
            assert_eq!(sum.prec(), prod.prec());
            assert!(sum.agrees_with(&prod), "prec24 = {prec24}");
        }
    }

    #[test]
    fn inverse_eta_is_partition_generating_function() {
        let inv = eta_inverse_expansion(24 * 11).unwrap();
        assert_eq!(inv.offset(), -1);
        assert_eq!(inv.coeff(-1), r(1));
        assert_eq!(inv.coeff(119), r(7));
        let p: Vec<Rat> = (0..=10).map(|n| inv.coeff(24 * n - 1)).collect();
        assert_eq!(p, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42].map(r).to_vec());
    }

    #[test]
    fn eta_times_inverse_is_one() {
        let prec24 = 24 * 60;
        let eta = eta_expansion(prec24).unwrap();
        let inv = eta_inverse_expansion(prec24).unwrap();
        let prod = eta.mul(&inv);
        let one = QSeries24::one(prod.prec()).unwrap();
        assert!(prod.agrees_with(&one));
        assert!(prod.prec() >= 24 * 60 - 2);
    }

    #[test]
    fn identity_and_exponent_bookkeeping() {
        let eta = eta_expansion(200).unwrap();
        let one = QSeries24::one(400).unwrap();
        assert!(eta.mul(&one).agrees_with(&eta));
        let a = QSeries24::monomial(-1, r(1), 100).unwrap();
        let b = QSeries24::monomial(1, r(1), 100).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.valuation(), Some(0));
        assert_eq!(p.coeff(0), r(1));
    }

    #[test]
    fn invert_examples() {
        let one = QSeries24::one(50).unwrap();
        assert_eq!(one.invert().unwrap(), one);
        let eta = eta_expansion(24 * 20).unwrap();
        let back = eta.invert().unwrap().invert().unwrap();
        assert!(back.agrees_with(&eta));
        assert_eq!(back.prec(), eta.prec());
        let z = QSeries24::zero(10);
        assert_eq!(z.invert(), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn d_operator_examples() {
        let c = QSeries24::monomial(0, r(5), 48).unwrap();
        assert!(c.d_operator().is_zero());
        let m = QSeries24::monomial(5, r(1), 48).unwrap();
        assert_eq!(m.d_operator().coeff(5), Rat::new(5, 24));
        assert_eq!(m.d_operator().prec(), 48);
    }

    #[test]
    fn precision_rules() {
        let a = QSeries24::from_coeffs(-1, vec![r(1); 10]).unwrap();
        let b = QSeries24::from_coeffs(3, vec![r(2); 4]).unwrap();
        assert_eq!(a.mul(&b).prec(), 6);
        assert_eq!((&a + &b).prec(), 7);
        assert_eq!((&a + &b).offset(), -1);
    }

    #[test]
    fn integral_conversion() {
        let eta = eta_expansion(24 * 5).unwrap();
        assert!(matches!(eta.to_integral(), Err(Error::FractionalExponent { exp24: 1 })));
        let p = euler_product(10);
        let back = p.to_q24().to_integral().unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn serialization_field_names() {
        let s = QSeries24::monomial(1, r(-1), 3).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v, serde_json::json!({"offset24": 1, "prec24": 3, "coeffs": ["-1", "0"]}));
    }

    fn sparse_series() -> impl Strategy<Value = QSeries24> {
        (-30i64..30, proptest::collection::vec((0usize..40, -9i64..10, 1i64..4), 1..6)).prop_map(
            |(offset, terms)| {
                let mut coeffs = vec![Rat::zero(); 48];
                for (i, n, d) in terms {
                    coeffs[i] = Rat::new(n, d);
                }
                QSeries24::from_coeffs(offset, coeffs).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

        #[test]
        fn ring_axioms(a in sparse_series(), b in sparse_series(), c in sparse_series()) {
            prop_assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
            prop_assert!(a.mul(&(&b + &c)).agrees_with(&(&a.mul(&b) + &a.mul(&c))));
            prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
        }

        #[test]
        fn leibniz_rule(a in sparse_series(), b in sparse_series()) {
            let lhs = a.mul(&b).d_operator();
            let rhs = &a.d_operator().mul(&b) + &a.mul(&b.d_operator());
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn invert_is_two_sided(a in sparse_series(), lead in 1i64..5) {
            let mut coeffs = a.coeffs().to_vec();
            coeffs[0] = Rat::from(lead);
            let a = QSeries24::from_coeffs(a.offset(), coeffs).unwrap();
            let b = a.invert().unwrap();
            let one = QSeries24::one(a.mul(&b).prec()).unwrap();
            prop_assert!(a.mul(&b).agrees_with(&one));
            prop_assert!(b.mul(&a).agrees_with(&one));
        }
    }
}
