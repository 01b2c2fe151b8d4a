//! Hecke operators on level-one q-expansions, normalized eigenforms over real
//! quadratic fields, the trace series of P_nu and the ratios D_f/||f||.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, QuadNum, Rat};
use crate::forms::{cusp_echelon_basis, delta_2nu, dim_cusp, eisenstein};
use crate::qseries::IntQSeries;
use crate::rankincohen::p_nu;

/// Default trial-division bound for the squarefree part of a discriminant.
pub const SQUAREFREE_BOUND: u64 = 1_000_000;

/// T_m on a weight-`weight` expansion: b(n) = sum_{d | gcd(m,n)} d^(weight-1) a(mn/d^2).
/// The result is known for n < floor(f.prec / m).
pub fn hecke_operator(f: &IntQSeries, weight: i64, m: u64) -> Result<IntQSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("Hecke index must be positive".into()));
    }
    if f.offset() < 0 {
        return Err(Error::InvalidArgument("Hecke operators need a series without negative powers".into()));
    }
    let m_i = m as i64;
    let out_prec = f.prec() / m_i;
    if out_prec < 1 {
        return Err(Error::InsufficientPrecision { needed: m_i, available: f.prec() });
    }
    let divisors: Vec<i64> = (1..=m_i).filter(|d| m_i % d == 0).collect();
    let coeffs = (0..out_prec)
        .map(|n| {
            if n == 0 {
                // gcd(m, 0) = m: every divisor of m contributes a(0).
                let a0 = f.coeff(0);
                if a0.is_zero() {
                    return a0;
                }
                let s: BigInt = divisors.iter().map(|&d| BigInt::from(d).pow((weight - 1) as u32)).sum();
                return a0 * Rat::from_int(s);
            }
            let g = n.gcd(&m_i);
            divisors
                .iter()
                .filter(|&&d| g % d == 0)
                .map(|&d| {
                    let a = f.coeff(m_i * n / (d * d));
                    if a.is_zero() {
                        a
                    } else {
                        a * Rat::from_int(BigInt::from(d).pow((weight - 1) as u32))
                    }
                })
                .sum()
        })
        .collect();
    IntQSeries::from_coeffs(0, coeffs)
}

/// Writes n = s^2 d with d squarefree, by trial division up to `bound`.
///
/// A cofactor left after trial division has all prime factors above `bound`;
/// below `bound^3` it is either a perfect square or squarefree.
pub fn squarefree_decompose(n: &BigUint, bound: u64) -> Result<(BigUint, BigUint)> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("squarefree part of zero".into()));
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    let mut p = 2u64;
    while p <= bound && BigUint::from(p) * p <= rest {
        let bp = BigUint::from(p);
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            s *= Pow::pow(&bp, e / 2);
            if e % 2 == 1 {
                d *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Ok((s, d));
    }
    if BigUint::from(p) * p > rest {
        return Ok((s, d * rest));
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        return Ok((s * root, d));
    }
    if rest < BigUint::from(bound).pow(3u32) {
        return Ok((s, d * rest));
    }
    Err(Error::SquarefreeUnresolved(n.to_string()))
}

/// Exact square root of a nonnegative rational as q * sqrt(d), d squarefree.
fn rational_sqrt(x: &Rat, bound: u64) -> Result<(Rat, u64)> {
    if x.is_negative() {
        return Err(Error::InvalidArgument(format!("square root of negative {x}")));
    }
    if x.is_zero() {
        return Ok((Rat::zero(), 1));
    }
    // sqrt(p/q) = sqrt(p q) / q
    let pq = (x.numer() * x.denom()).to_biguint().expect("positive");
    let (s, d) = squarefree_decompose(&pq, bound)?;
    let d = d
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("field parameter {d} exceeds 64 bits")))?;
    let coeff = Rat::from_int(BigInt::from_biguint(Sign::Plus, s)) / Rat::from_int(x.denom().clone());
    Ok((coeff, d))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigenform {
    weight: i64,
    #[serde(rename = "fieldDisc")]
    field_disc: u64,
    coeffs: Vec<QuadNum>,
}

impl Eigenform {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// The squarefree d with coefficients in Q(sqrt d); 1 when rational.
    pub fn field_disc(&self) -> u64 {
        self.field_disc
    }

    pub fn coeffs(&self) -> &[QuadNum] {
        &self.coeffs
    }

    /// Coefficients are stored for n < prec.
    pub fn prec(&self) -> i64 {
        self.coeffs.len() as i64
    }

    pub fn a(&self, n: usize) -> &QuadNum {
        &self.coeffs[n]
    }

    /// Real values of the coefficients with sqrt(d) > 0.
    pub fn embedding(&self) -> Vec<f64> {
        self.coeffs.iter().map(QuadNum::to_f64).collect()
    }

    /// The rational and sqrt(d) parts as separate series.
    pub fn components(&self) -> (IntQSeries, IntQSeries) {
        let a = self.coeffs.iter().map(|c| c.a.clone()).collect();
        let b = self.coeffs.iter().map(|c| c.b.clone()).collect();
        (
            IntQSeries::from_coeffs(0, a).expect("nonempty"),
            IntQSeries::from_coeffs(0, b).expect("nonempty"),
        )
    }

    /// Checks T_m f = a(m) f through the precision available after T_m.
    pub fn is_hecke_eigenform_for(&self, m: u64) -> Result<bool> {
        let (a, b) = self.components();
        let ta = hecke_operator(&a, self.weight, m)?;
        let tb = hecke_operator(&b, self.weight, m)?;
        let lam = self.a(m as usize);
        let d = Rat::from(self.field_disc);
        // (x + y sqrt d)(A + B sqrt d) = (xA + d yB) + (yA + xB) sqrt d
        let want_a = &a.scale(&lam.a) + &b.scale(&(&lam.b * &d));
        let want_b = &a.scale(&lam.b) + &b.scale(&lam.a);
        Ok(ta.agrees_with(&want_a) && tb.agrees_with(&want_b))
    }
}

/// Normalized Hecke eigenforms of weight `weight`, coefficients for n < prec.
pub fn eigenforms(weight: i64, prec: i64) -> Result<Vec<Eigenform>> {
    eigenforms_with_bound(weight, prec, SQUAREFREE_BOUND)
}

pub fn eigenforms_with_bound(weight: i64, prec: i64, bound: u64) -> Result<Vec<Eigenform>> {
    let dim = dim_cusp(weight);
    match dim {
        0 => Ok(Vec::new()),
        1 => {
            let basis = cusp_echelon_basis(weight, prec.max(3))?;
            let coeffs = basis[0].coeffs().iter().cloned().map(QuadNum::rational).collect();
            Ok(vec![Eigenform { weight, field_disc: 1, coeffs }])
        }
        2 => eigenforms_dim2(weight, prec, bound),
        _ => Err(Error::UnsupportedHeckeField { weight, dim }),
    }
}

fn eigenforms_dim2(weight: i64, prec: i64, bound: u64) -> Result<Vec<Eigenform>> {
    let work = prec.max(8);
    let basis = cusp_echelon_basis(weight, work)?;
    // T2 g_i = m[i][0] g_1 + m[i][1] g_2, read off at q and q^2.
    let m: Vec<Vec<Rat>> = basis
        .iter()
        .map(|g| {
            let t = hecke_operator(g, weight, 2)?;
            Ok(vec![t.coeff(1), t.coeff(2)])
        })
        .collect::<Result<_>>()?;
    let tr = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let disc = &tr * &tr - det * Rat::from(4);
    let (root, d) = rational_sqrt(&disc, bound)?;
    let half = Rat::new(1, 2);
    let mut forms = Vec::with_capacity(2);
    for sign in [-1i64, 1] {
        let lambda = if d == 1 {
            QuadNum::rational(&tr * &half + &root * &half * Rat::from(sign))
        } else {
            QuadNum::new(&tr * &half, &root * &half * Rat::from(sign), d)
        };
        // Left eigenvector (1, y) of m: m00 + y m10 = lambda.
        if m[1][0].is_zero() {
            return Err(Error::SingularSystem);
        }
        let y = (&lambda - &QuadNum::rational(m[0][0].clone())).scale(&m[1][0].recip()?);
        let coeffs = (0..prec.max(3))
            .map(|n| &QuadNum::rational(basis[0].coeff(n)) + &y.scale(&basis[1].coeff(n)))
            .collect();
        forms.push(Eigenform { weight, field_disc: d, coeffs });
    }
    if d == 1 {
        forms.sort_by(|f, g| f.a(2).a.cmp(&g.a(2).a));
    }
    Ok(forms)
}

/// The n-th coefficients of the cuspidal part of P_nu, n = 0..=n_max.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceSeries {
    pub nu: u32,
    pub values: Vec<Rat>,
}

impl TraceSeries {
    pub fn get(&self, n: usize) -> &Rat {
        &self.values[n]
    }
}

/// C(2nu-2, nu-2), the constant term of P_nu and so its E_{2nu} coordinate.
pub fn eisenstein_multiple(nu: u32) -> Rat {
    Rat::from_int(binomial(2 * nu as i64 - 2, nu as i64 - 2))
}

/// Tr_{2nu}(n) = [q^n] (P_nu - C(2nu-2, nu-2) E_{2nu}). When S_{2nu} = 0 the
/// values are zero; this is computed, not assumed.
pub fn trace_series(nu: u32, n_max: usize) -> Result<TraceSeries> {
    if nu < 2 {
        return Err(Error::InvalidArgument(format!("trace series needs nu >= 2, got {nu}")));
    }
    let prec = n_max as i64 + 1;
    let p = p_nu(nu, prec.max(2))?;
    let e = eisenstein(2 * nu as i64, prec.max(2))?;
    let cusp = &p - &e.scale(&eisenstein_multiple(nu));
    let values = (0..prec).map(|n| cusp.coeff(n)).collect();
    Ok(TraceSeries { nu, values })
}

/// Coordinates of the cuspidal part of P_nu on the normalized eigenforms,
/// i.e. D_{f_i}/||f_i||, in the order returned by [`eigenforms`].
pub fn df_over_norm(nu: u32) -> Result<Vec<QuadNum>> {
    let weight = 2 * nu as i64;
    let dim = dim_cusp(weight);
    if !(1..=2).contains(&dim) {
        return Err(Error::UnsupportedHeckeField { weight, dim });
    }
    let forms = eigenforms(weight, 8)?;
    let tr = trace_series(nu, dim)?;
    let c1 = QuadNum::rational(tr.get(1).clone());
    if dim == 1 {
        return Ok(vec![c1]);
    }
    let c2 = QuadNum::rational(tr.get(2).clone());
    let (a1, a2) = (forms[0].a(2), forms[1].a(2));
    // gamma_1 + gamma_2 = c(1), gamma_1 a1(2) + gamma_2 a2(2) = c(2)
    let denom = a1 - a2;
    if denom.is_zero() {
        return Err(Error::SingularSystem);
    }
    let g1 = (&c2 - &(&c1 * a2)).checked_div(&denom)?;
    let g2 = &c1 - &g1;
    Ok(vec![g1, g2])
}

/// The multiple beta_nu with cuspidal part of P_nu = beta_nu Delta_{2nu},
/// for nu in {6, 8, 9, 10, 11, 13}.
pub fn beta_nu(nu: u32) -> Result<Rat> {
    delta_2nu(nu, 2)?;
    Ok(trace_series(nu, 1)?.get(1).clone())
}
