use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Rat;
use crate::error::{Error, Result};

/// An element `a + b*sqrt(d)` of a real quadratic field, d squarefree.
///
/// Rationals are always stored with `b = 0` and `d = 1`, so equality and
/// hashing do not depend on which field a rational result came from. Binary
/// operations between different fields are allowed only when one operand is
/// rational.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadNum {
    pub a: Rat,
    pub b: Rat,
    pub d: u64,
}

impl QuadNum {
    pub fn new(a: Rat, b: Rat, d: u64) -> QuadNum {
        assert!(d >= 1, "field parameter must be positive");
        if d == 1 {
            return QuadNum { a: a + b, b: Rat::zero(), d };
        }
        if b.is_zero() {
            return QuadNum::rational(a);
        }
        QuadNum { a, b, d }
    }

    pub fn rational(a: Rat) -> QuadNum {
        QuadNum { a, b: Rat::zero(), d: 1 }
    }

    pub fn zero() -> QuadNum {
        QuadNum::rational(Rat::zero())
    }

    pub fn one() -> QuadNum {
        QuadNum::rational(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> QuadNum {
        QuadNum::new(self.a.clone(), -&self.b, self.d)
    }

    /// a^2 - d b^2
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from(self.d)
    }

    pub fn trace(&self) -> Rat {
        &self.a * Rat::from(2)
    }

    pub fn recip(&self) -> Result<QuadNum> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero("reciprocal of zero in a quadratic field"));
        }
        let c = self.conjugate();
        Ok(QuadNum::new(c.a / &n, c.b / &n, self.d))
    }

    pub fn checked_div(&self, rhs: &QuadNum) -> Result<QuadNum> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, k: &Rat) -> QuadNum {
        QuadNum::new(&self.a * k, &self.b * k, self.d)
    }

    /// Real embedding with the positive square root.
    pub fn to_f64(&self) -> f64 {
        if self.b.is_zero() {
            return self.a.to_f64();
        }
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }

    fn common_field(&self, rhs: &QuadNum) -> u64 {
        match (self.is_rational(), rhs.is_rational()) {
            (_, true) => self.d,
            (true, false) => rhs.d,
            (false, false) => {
                assert_eq!(self.d, rhs.d, "mixing quadratic fields Q(sqrt {}) and Q(sqrt {})", self.d, rhs.d);
                self.d
            }
        }
    }
}

impl From<Rat> for QuadNum {
    fn from(a: Rat) -> QuadNum {
        QuadNum::rational(a)
    }
}

impl Add<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        let d = self.common_field(rhs);
        QuadNum::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        let d = self.common_field(rhs);
        QuadNum::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        let d = self.common_field(rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * Rat::from(d);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadNum { a, b, d }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                $tr::$m(&self, &rhs)
            }
        }
        impl $tr<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                $tr::$m(&self, rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-self.a, -self.b, self.d)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-&self.a, -&self.b, self.d)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "({})*sqrt({})", self.b, self.d);
        }
        write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.d)
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
