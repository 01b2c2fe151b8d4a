//! The brackets P_nu of 1/eta and eta, the polynomials g_nu(n, k), the
//! pentagonal series form of P_nu, and the general Rankin-Cohen bracket.
//!
//! Normalization used throughout:
//!
//! ```text
//! P_nu = 24^nu * c_nu * sum_{r+s=nu} (-1)^r (2r-1) / ((2r)! (2s)!) * D^r(1/eta) * D^s(eta)
//! c_nu = (2nu-1) (2nu-2)_{nu-1}^2 / 2^(2nu-2)
//! ```
//!
//! With this choice P_0 = 1, P_1 = 0, P_2 = E_4, and
//! P_nu = sum_n sum_k (-1)^k g_nu(n,k) p(n - omega(k)) q^n. It also equals
//! 24^nu times the general bracket [1/eta, eta]_nu with weights -1/2 and 1/2.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, falling_factorial, Rat};
use crate::partitions::{partition_table, pentagonal, pentagonal_indices};
use crate::qseries::{eta_expansion, eta_inverse_expansion, IntQSeries, QSeries24};

/// c_nu = (2nu-1) (2nu-2)_{nu-1}^2 / 2^(2nu-2), using the negative-index
/// falling factorial at nu = 0.
pub fn prefactor(nu: u32) -> Rat {
    let nu = nu as i64;
    let ff = falling_factorial(&Rat::from(2 * nu - 2), nu - 1)
        .expect("(2nu-2)_{nu-1} is nonzero for nu >= 0");
    Rat::from(2 * nu - 1) * ff.pow(2) * Rat::from(2).pow(-(2 * nu - 2) as i32)
}

fn factorial_rat(n: i64) -> Rat {
    Rat::from_int(factorial(n as u64))
}

/// Weight of D^r(1/eta) D^(nu-r)(eta) in P_nu, including 24^nu and c_nu.
fn operator_weight(nu: u32, r: u32) -> Rat {
    let s = nu - r;
    let sign = if r.is_multiple_of(2) { 1 } else { -1 };
    let w = Rat::from(sign * (2 * r as i64 - 1))
        / (factorial_rat(2 * r as i64) * factorial_rat(2 * s as i64));
    w * prefactor(nu) * Rat::from_int(BigInt::from(24).pow(nu))
}

/// g_nu(n, k) = c_nu sum_{r=0}^{nu} (-1)^(nu+r) (2nu-2r-1) / ((2r)! (2nu-2r)!)
///              (6k+1)^(2r) (24n - (6k+1)^2)^(nu-r)
pub fn g_poly(nu: u32, n: i64, k: i64) -> Rat {
    g_poly_at(nu, n, 6 * k + 1)
}

/// g_nu as a polynomial in n and m = 6k+1; even in m.
pub fn g_poly_at(nu: u32, n: i64, m: i64) -> Rat {
    let u = BigInt::from(m).pow(2u32);
    let x = BigInt::from(24 * n) - &u;
    let mut acc = Rat::zero();
    for r in 0..=nu {
        let s = nu - r;
        let sign: i64 = if (nu + r).is_multiple_of(2) { 1 } else { -1 };
        let num = BigInt::from(sign * (2 * s as i64 - 1)) * Pow::pow(&u, r) * Pow::pow(&x, s);
        if num.is_zero() {
            continue;
        }
        acc += Rat::from_int(num)
            / (factorial_rat(2 * r as i64) * factorial_rat(2 * s as i64));
    }
    acc * prefactor(nu)
}

/// P_nu through q^(prec-1) from the derivative formula, down-converted from
/// the 1/24 lattice. Any surviving fractional exponent is reported as an error.
pub fn p_nu(nu: u32, prec: i64) -> Result<IntQSeries> {
    if prec < 2 {
        return Err(Error::InvalidArgument(format!("P_nu needs prec >= 2, got {prec}")));
    }
    let inv = eta_inverse_expansion(24 * prec - 24)?;
    let eta = eta_expansion(24 * prec - 22)?;
    let mut d_inv = vec![inv];
    let mut d_eta = vec![eta];
    for _ in 0..nu {
        let a = d_inv.last().expect("nonempty").d_operator();
        d_inv.push(a);
        let b = d_eta.last().expect("nonempty").d_operator();
        d_eta.push(b);
    }
    let mut total: Option<QSeries24> = None;
    for r in 0..=nu {
        let term = d_inv[r as usize].mul(&d_eta[(nu - r) as usize]).scale(&operator_weight(nu, r));
        total = Some(match total {
            None => term,
            Some(t) => &t + &term,
        });
    }
    total.expect("nu + 1 terms").to_integral()
}

/// sum_n sum_k (-1)^k g_nu(n, k) p(n - omega(k)) q^n, with k = 0 included.
pub fn p_nu_series_side(nu: u32, prec: i64) -> Result<IntQSeries> {
    if prec < 2 {
        return Err(Error::InvalidArgument(format!("P_nu needs prec >= 2, got {prec}")));
    }
    let table = partition_table(prec as usize);
    let mut coeffs = Vec::with_capacity(prec as usize);
    for n in 0..prec {
        let mut acc = g_poly(nu, n, 0) * Rat::from_int(table.get(n));
        for k in pentagonal_indices(n) {
            let term = g_poly(nu, n, k) * Rat::from_int(table.get(n - pentagonal(k)));
            if k.rem_euclid(2) == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        coeffs.push(acc);
    }
    IntQSeries::from_coeffs(0, coeffs)
}

fn is_gamma_pole(x: &Rat) -> bool {
    x.is_integer() && (x.is_negative() || x.is_zero())
}

/// Gamma(x + nu) / (j! Gamma(x + nu - j)) as a product of j rational factors.
fn gamma_ratio(x: &Rat, nu: u32, j: u32) -> Result<Rat> {
    let top = x + Rat::from(nu as i64);
    if is_gamma_pole(&top) {
        return Err(Error::GammaPole(top.to_string()));
    }
    let ff = falling_factorial(&(&top - Rat::one()), j as i64)?;
    Ok(ff / factorial_rat(j as i64))
}

/// [f, g]_nu = sum_{r+s=nu} (-1)^r Gamma(wf+nu) Gamma(wg+nu)
///             / (s! r! Gamma(wf+nu-s) Gamma(wg+nu-r)) D^r(f) D^s(g)
pub fn rc_bracket(f: &QSeries24, wf: &Rat, g: &QSeries24, wg: &Rat, nu: u32) -> Result<QSeries24> {
    let mut df = vec![f.clone()];
    let mut dg = vec![g.clone()];
    for _ in 0..nu {
        let a = df.last().expect("nonempty").d_operator();
        df.push(a);
        let b = dg.last().expect("nonempty").d_operator();
        dg.push(b);
    }
    let mut total: Option<QSeries24> = None;
    for r in 0..=nu {
        let s = nu - r;
        let sign = if r % 2 == 0 { Rat::one() } else { -Rat::one() };
        let w = sign * gamma_ratio(wf, nu, s)? * gamma_ratio(wg, nu, r)?;
        let term = df[r as usize].mul(&dg[s as usize]).scale(&w);
        total = Some(match total {
            None => term,
            Some(t) => &t + &term,
        });
    }
    Ok(total.expect("nu + 1 terms"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::binomial;

    fn r(n: i64) -> Rat {
        Rat::from(n)
    }

    #[test]
    fn prefactor_values() {
        assert_eq!(prefactor(0), r(-1));
        assert_eq!(prefactor(1), r(1));
        assert_eq!(prefactor(2), r(3));
    }

    #[test]
    fn g_poly_examples() {
        for (n, v) in [(1, 181), (2, 793), (3, 1837)] {
            assert_eq!(g_poly(2, n, 0), r(v));
        }
        assert_eq!(g_poly(2, 1, 1), r(853));
        for n in -3..5 {
            for k in -3..4 {
                assert_eq!(g_poly(0, n, k), r(1));
                let u = (6 * k + 1) * (6 * k + 1);
                assert_eq!(g_poly(2, n, k), r(216 * n * n - 36 * u * n + u * u));
            }
        }
    }

    #[test]
    fn g_depends_on_k_through_square() {
        for nu in 0..8 {
            for n in 0..5 {
                for k in -10i64..=10 {
                    let m = 6 * k + 1;
                    assert_eq!(g_poly(nu, n, k), g_poly_at(nu, n, -m));
                }
            }
        }
    }

    #[test]
    fn small_nu_brackets() {
        let p0 = p_nu(0, 60).unwrap();
        assert!(p0.agrees_with(&IntQSeries::one(60).unwrap()));
        assert!(p_nu(1, 60).unwrap().is_zero());
        let p2 = p_nu(2, 10).unwrap();
        let e4: Vec<i64> = vec![1, 240, 2160, 6720, 17520, 30240, 60480, 82560, 140400, 181680];
        for (n, c) in e4.iter().enumerate() {
            assert_eq!(p2.coeff(n as i64), r(*c));
        }
    }

    #[test]
    fn series_side_matches_operator_side() {
        for nu in 0..=6 {
            let a = p_nu(nu, 30).unwrap();
            let b = p_nu_series_side(nu, 30).unwrap();
            assert_eq!(a.first_difference(&b), None, "nu = {nu}");
        }
    }

    #[test]
    fn constant_term_is_central_binomial() {
        for nu in 2..=10u32 {
            let p = p_nu(nu, 2).unwrap();
            assert_eq!(p.coeff(0), Rat::from_int(binomial(2 * nu as i64 - 2, nu as i64 - 2)));
        }
    }

    #[test]
    fn general_bracket_matches_up_to_power_of_24() {
        let prec24 = 24 * 20;
        let inv = eta_inverse_expansion(prec24).unwrap();
        let eta = eta_expansion(prec24 + 2).unwrap();
        for nu in 0..=6u32 {
            let b = rc_bracket(&inv, &Rat::new(-1, 2), &eta, &Rat::new(1, 2), nu).unwrap();
            let scaled = b.scale(&Rat::from_int(BigInt::from(24).pow(nu))).to_integral().unwrap();
            let p = p_nu(nu, scaled.prec()).unwrap();
            assert!(scaled.agrees_with(&p), "nu = {nu}");
        }
    }

    #[test]
    fn order_zero_bracket_is_product() {
        let eta = eta_expansion(200).unwrap();
        let inv = eta_inverse_expansion(200).unwrap();
        let b = rc_bracket(&eta, &Rat::new(1, 2), &inv, &Rat::new(7, 2), 0).unwrap();
        assert!(b.agrees_with(&eta.mul(&inv)));
    }

    #[test]
    fn pole_in_gamma_ratio() {
        let eta = eta_expansion(50).unwrap();
        let err = rc_bracket(&eta, &Rat::from(-3), &eta, &Rat::from(1), 2);
        assert!(matches!(err, Err(Error::GammaPole(_))));
    }
}
