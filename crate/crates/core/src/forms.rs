//! Level-one modular forms as exact q-expansions: Eisenstein series, Delta and
//! the Delta_{2nu} family, E4/E6 monomial bases, and exact decomposition.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{bernoulli, Rat};
use crate::linalg::{rref, solve};
use crate::partitions::{pentagonal, sigma_table};
use crate::qseries::IntQSeries;

/// E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n. Weight 2 is the quasi-modular E_2.
pub fn eisenstein(w: i64, prec: i64) -> Result<IntQSeries> {
    if w < 2 || w % 2 != 0 {
        return Err(Error::InvalidArgument(format!("Eisenstein weight must be even and >= 2, got {w}")));
    }
    if prec < 1 {
        return Err(Error::InvalidArgument(format!("precision must be positive, got {prec}")));
    }
    let factor = -(Rat::from(2 * w) / bernoulli(w as usize));
    let sig = sigma_table((w - 1) as u32, prec as usize);
    let coeffs = sig
        .into_iter()
        .enumerate()
        .map(|(n, s)| if n == 0 { Rat::one() } else { &factor * Rat::from_int(s) })
        .collect();
    IntQSeries::from_coeffs(0, coeffs)
}

/// Coefficients of prod (1 - q^n)^24 through index len-1 by the power
/// recurrence F_n = (1/n) sum_j (25j - n) g_j F_{n-j}, where g is the sparse
/// pentagonal series. Runs in i128 and falls back to big integers on overflow.
fn euler_power_24(len: usize) -> Vec<BigInt> {
    let mut g: Vec<(usize, i128)> = Vec::new();
    for j in 1i64.. {
        let (a, b) = (pentagonal(-j), pentagonal(j));
        if a as usize >= len {
            break;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        g.push((a as usize, sign));
        if (b as usize) < len {
            g.push((b as usize, sign));
        }
    }
    g.sort_unstable();
    match euler_power_24_i128(len, &g) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => euler_power_24_big(len, &g),
    }
}

fn euler_power_24_i128(len: usize, g: &[(usize, i128)]) -> Option<Vec<i128>> {
    let mut f: Vec<i128> = Vec::with_capacity(len);
    // Float copies of f, for the range check below.
    let mut fx: Vec<f64> = Vec::with_capacity(len);
    if len > 0 {
        f.push(1);
        fx.push(1.0);
    }
    for n in 1..len {
        // Wrapping sums are exact mod 2^128, so they are exact outright
        // whenever the true sum lies well inside i128; a float shadow sum
        // decides that. Partial products may leave the range on the way.
        let (mut acc, mut approx) = (0i128, 0f64);
        for &(j, gj) in g {
            if j > n {
                break;
            }
            let w = (25 * j as i64 - n as i64) * gj as i64;
            acc = acc.wrapping_add((w as i128).wrapping_mul(f[n - j]));
            approx += w as f64 * fx[n - j];
        }
        let value = if approx.abs() < 2f64.powi(125) {
            debug_assert_eq!(acc % n as i128, 0);
            acc / n as i128
        } else {
            let acc: BigInt = g
                .iter()
                .take_while(|&&(j, _)| j <= n)
                .map(|&(j, gj)| BigInt::from((25 * j as i128 - n as i128) * gj) * BigInt::from(f[n - j]))
                .sum();
            (acc / n).to_i128()?
        };
        f.push(value);
        fx.push(value as f64);
    }
    Some(f)
}

fn euler_power_24_big(len: usize, g: &[(usize, i128)]) -> Vec<BigInt> {
    let mut f: Vec<BigInt> = Vec::with_capacity(len);
    if len > 0 {
        f.push(BigInt::from(1));
    }
    for n in 1..len {
        let mut acc = BigInt::zero();
        for &(j, gj) in g {
            if j > n {
                break;
            }
            acc += &f[n - j] * BigInt::from((25 * j as i128 - n as i128) * gj);
        }
        f.push(acc / n);
    }
    f
}

/// Delta = eta^24 = q prod (1 - q^n)^24 through q^(prec-1).
pub fn delta(prec: i64) -> IntQSeries {
    assert!(prec >= 2, "Delta needs prec >= 2");
    let f = euler_power_24(prec as usize - 1);
    let mut coeffs = vec![Rat::zero()];
    coeffs.extend(f.into_iter().map(Rat::from_int));
    IntQSeries::from_coeffs(0, coeffs).expect("nonempty")
}

/// Delta_{2nu} for nu in {6, 8, 9, 10, 11, 13}: Delta, Delta E4, Delta E6,
/// Delta E4^2, Delta E4 E6, Delta E4^2 E6.
pub fn delta_2nu(nu: u32, prec: i64) -> Result<IntQSeries> {
    let (a, b) = match nu {
        6 => (0, 0),
        8 => (1, 0),
        9 => (0, 1),
        10 => (2, 0),
        11 => (1, 1),
        13 => (2, 1),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "Delta_2nu is defined for nu in {{6, 8, 9, 10, 11, 13}}, got {nu}"
            )))
        }
    };
    let mut f = delta(prec.max(2));
    if a + b > 0 {
        let e4 = eisenstein(4, prec)?;
        let e6 = eisenstein(6, prec)?;
        for _ in 0..a {
            f = f.mul(&e4);
        }
        for _ in 0..b {
            f = f.mul(&e6);
        }
    }
    Ok(f.truncate(prec))
}

/// Exponent pairs (a, b) with 4a + 6b = weight, a ascending.
pub fn monomial_exponents(weight: i64) -> Vec<(u32, u32)> {
    if weight < 0 || weight % 2 != 0 {
        return Vec::new();
    }
    (0..=weight / 4)
        .filter(|a| (weight - 4 * a) % 6 == 0)
        .map(|a| (a as u32, ((weight - 4 * a) / 6) as u32))
        .collect()
}

pub fn dim_total(weight: i64) -> usize {
    monomial_exponents(weight).len()
}

pub fn dim_cusp(weight: i64) -> usize {
    dim_total(weight).saturating_sub(1)
}

/// Incrementally cached powers of one series.
struct Powers {
    base: IntQSeries,
    cache: Vec<IntQSeries>,
}

impl Powers {
    fn new(base: IntQSeries) -> Self {
        let one = IntQSeries::one(base.prec()).expect("positive precision");
        Powers { base, cache: vec![one] }
    }

    fn get(&mut self, e: u32) -> &IntQSeries {
        while self.cache.len() <= e as usize {
            let next = self.cache.last().expect("nonempty").mul(&self.base);
            self.cache.push(next);
        }
        &self.cache[e as usize]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MFSpace {
    pub weight: i64,
    pub prec: i64,
    #[serde(rename = "dimTotal")]
    pub dim_total: usize,
    #[serde(rename = "dimCusp")]
    pub dim_cusp: usize,
    /// E4^a E6^b with 4a + 6b = weight, a ascending.
    pub basis: Vec<IntQSeries>,
    /// Reduced echelon basis of the cusp space; element i starts q^(i+1).
    #[serde(rename = "cuspBasis")]
    pub cusp_basis: Vec<IntQSeries>,
}

fn coeff_rows(series: &[IntQSeries], prec: i64) -> Vec<Vec<Rat>> {
    series.iter().map(|s| (0..prec).map(|n| s.coeff(n)).collect()).collect()
}

fn rows_to_series(rows: Vec<Vec<Rat>>) -> Vec<IntQSeries> {
    rows.into_iter().map(|r| IntQSeries::from_coeffs(0, r).expect("nonempty")).collect()
}

fn check_staircase(weight: i64, pivots: &[usize], dim: usize, prec: i64) -> Result<()> {
    if pivots.len() != dim {
        return Err(Error::InsufficientPrecision { needed: dim as i64 + 2, available: prec });
    }
    if pivots.iter().enumerate().any(|(i, &c)| c != i + 1) {
        return Err(Error::InvalidArgument(format!("weight {weight} cusp basis is not a staircase")));
    }
    Ok(())
}

/// The monomial basis of M_weight and the reduced echelon basis of S_weight.
pub fn space_basis(weight: i64, prec: i64) -> Result<MFSpace> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("space weight must be even and >= 4, got {weight}")));
    }
    let exps = monomial_exponents(weight);
    let dim = exps.len();
    if prec <= dim as i64 + 2 {
        return Err(Error::InsufficientPrecision { needed: dim as i64 + 3, available: prec });
    }
    let mut e4 = Powers::new(eisenstein(4, prec)?);
    let mut e6 = Powers::new(eisenstein(6, prec)?);
    let basis: Vec<IntQSeries> = exps
        .iter()
        .map(|&(a, b)| {
            let x = e4.get(a).clone();
            x.mul(e6.get(b))
        })
        .collect();
    // Every monomial has constant term 1, so differences against the first
    // span the cusp space.
    let diffs: Vec<IntQSeries> = basis[1..].iter().map(|m| m - &basis[0]).collect();
    let mut rows = coeff_rows(&diffs, prec);
    let pivots = rref(&mut rows);
    check_staircase(weight, &pivots, dim - 1, prec)?;
    Ok(MFSpace {
        weight,
        prec,
        dim_total: dim,
        dim_cusp: dim - 1,
        basis,
        cusp_basis: rows_to_series(rows),
    })
}

/// The reduced echelon cusp basis of weight `weight`, built from the products
/// Delta^i E4^a E6^b. Reduced echelon form is unique, so this agrees with
/// [`space_basis`]; it avoids the high E4/E6 powers at large precision.
pub fn cusp_echelon_basis(weight: i64, prec: i64) -> Result<Vec<IntQSeries>> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("space weight must be even and >= 4, got {weight}")));
    }
    let dim = dim_cusp(weight);
    if dim == 0 {
        return Ok(Vec::new());
    }
    if prec <= dim as i64 + 1 {
        return Err(Error::InsufficientPrecision { needed: dim as i64 + 2, available: prec });
    }
    let mut d = Powers::new(delta(prec));
    let mut e4: Option<Powers> = None;
    let mut e6: Option<Powers> = None;
    let mut gens = Vec::with_capacity(dim);
    for i in 1..=dim as u32 {
        let rest = weight - 12 * i as i64;
        let &(a, b) = monomial_exponents(rest).last().expect("weight - 12i is a valid weight");
        let mut g = d.get(i).clone();
        if a > 0 {
            let p = e4.get_or_insert_with(|| Powers::new(eisenstein(4, prec).expect("valid weight")));
            g = g.mul(p.get(a));
        }
        if b > 0 {
            let p = e6.get_or_insert_with(|| Powers::new(eisenstein(6, prec).expect("valid weight")));
            g = g.mul(p.get(b));
        }
        gens.push(g);
    }
    let mut rows = coeff_rows(&gens, prec);
    let pivots = rref(&mut rows);
    check_staircase(weight, &pivots, dim, prec)?;
    Ok(rows_to_series(rows))
}

impl MFSpace {
    /// sum c_i basis_i.
    pub fn synthesize(&self, coords: &[Rat]) -> IntQSeries {
        let mut acc = IntQSeries::zero(self.prec);
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = &acc + &b.scale(c);
        }
        acc
    }

    /// The Eisenstein series of this weight.
    pub fn eisenstein(&self) -> IntQSeries {
        eisenstein(self.weight, self.prec).expect("weight validated at construction")
    }
}

fn residual_check(f: &IntQSeries, g: &IntQSeries, weight: i64) -> Result<()> {
    match f.first_difference(g) {
        None => Ok(()),
        Some(index) => Err(Error::NotInSpace { weight, index }),
    }
}

/// Coordinates of `f` on the monomial basis; the residual must vanish through
/// the common precision.
pub fn decompose(f: &IntQSeries, space: &MFSpace) -> Result<Vec<Rat>> {
    let dim = space.dim_total;
    if f.prec() < dim as i64 + 1 {
        return Err(Error::InsufficientPrecision { needed: dim as i64 + 1, available: f.prec() });
    }
    if let Some(v) = f.valuation().filter(|&v| v < 0) {
        return Err(Error::NotInSpace { weight: space.weight, index: v });
    }
    let a: Vec<Vec<Rat>> = (0..dim)
        .map(|n| space.basis.iter().map(|b| b.coeff(n as i64)).collect())
        .collect();
    let rhs: Vec<Rat> = (0..dim).map(|n| f.coeff(n as i64)).collect();
    let coords = solve(&a, &rhs)?;
    residual_check(f, &space.synthesize(&coords), space.weight)?;
    Ok(coords)
}

/// Splits `f` as c E_weight + sum_i x_i cusp_basis_i and verifies the residual.
pub fn split_eisenstein_cusp(f: &IntQSeries, space: &MFSpace) -> Result<(Rat, Vec<Rat>)> {
    if f.prec() <= space.dim_cusp as i64 {
        return Err(Error::InsufficientPrecision {
            needed: space.dim_cusp as i64 + 1,
            available: f.prec(),
        });
    }
    let c = f.coeff(0);
    let cusp = f - &space.eisenstein().scale(&c);
    let coords: Vec<Rat> = (1..=space.dim_cusp as i64).map(|n| cusp.coeff(n)).collect();
    let mut rebuilt = IntQSeries::zero(space.prec);
    for (x, b) in coords.iter().zip(&space.cusp_basis) {
        rebuilt = &rebuilt + &b.scale(x);
    }
    residual_check(&cusp, &rebuilt, space.weight)?;
    Ok((c, coords))
}
