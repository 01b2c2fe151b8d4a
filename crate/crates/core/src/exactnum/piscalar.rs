use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use super::Rat;
use crate::error::{Error, Result};

/// An exact value `coeff * pi^(half_pi_pow / 2)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiScalar {
    coeff: Rat,
    #[serde(rename = "halfPiPow")]
    half_pi_pow: i64,
}

impl PiScalar {
    pub fn new(coeff: Rat, half_pi_pow: i64) -> PiScalar {
        let half_pi_pow = if coeff.is_zero() { 0 } else { half_pi_pow };
        PiScalar { coeff, half_pi_pow }
    }

    pub fn rational(coeff: Rat) -> PiScalar {
        PiScalar::new(coeff, 0)
    }

    pub fn zero() -> PiScalar {
        PiScalar::new(Rat::zero(), 0)
    }

    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    pub fn half_pi_pow(&self) -> i64 {
        self.half_pi_pow
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn recip(&self) -> Result<PiScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("reciprocal of a zero pi-scalar"));
        }
        Ok(PiScalar::new(self.coeff.recip()?, -self.half_pi_pow))
    }

    pub fn checked_div(&self, rhs: &PiScalar) -> Result<PiScalar> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, exp: i32) -> PiScalar {
        PiScalar::new(self.coeff.pow(exp), self.half_pi_pow * exp as i64)
    }

    pub fn to_f64(&self) -> f64 {
        let pi_part = std::f64::consts::PI.powf(self.half_pi_pow as f64 / 2.0);
        self.coeff.to_f64() * pi_part
    }
}

impl Mul<&PiScalar> for &PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: &PiScalar) -> PiScalar {
        PiScalar::new(&self.coeff * &rhs.coeff, self.half_pi_pow + rhs.half_pi_pow)
    }
}

impl Mul for PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: PiScalar) -> PiScalar {
        &self * &rhs
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar::new(-self.coeff, self.half_pi_pow)
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.half_pi_pow {
            0 => write!(f, "{}", self.coeff),
            h if h % 2 == 0 => write!(f, "{}*pi^{}", self.coeff, h / 2),
            h => write!(f, "{}*pi^({}/2)", self.coeff, h),
        }
    }
}

impl fmt::Debug for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
