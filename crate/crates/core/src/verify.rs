//! Named invariant suites, shared by the command line `verify` command and
//! the acceptance runner. Every random draw comes from a fixed seed, so a run
//! is deterministic apart from its timings.

use std::cell::OnceCell;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dirichlet::{
    beta_constant, df_truncated, dirichlet_partial, eigenforms_for_sums, kronecker12, petersson_norm_estimate,
};
use crate::error::{Error, Result};
use crate::exactnum::{bernoulli, binomial, falling_factorial, gamma_exact, rising_factorial, PiScalar, QuadNum, Rat};
use crate::forms::{decompose, delta, dim_cusp, dim_total, eisenstein, space_basis};
use crate::hecke::{df_over_norm, eigenforms, eisenstein_multiple, trace_series, Eigenform};
use crate::partitions::{eisenstein_sigma_factor, partition_table, sigma, theorem2_rhs};
use crate::qseries::{eta_expansion, eta_inverse_expansion, eta_product, euler_product, IntQSeries};
use crate::rademacher::{automorphy_sqrt, eta_multiplier, eta_value, KloostermanCache};
use crate::rankincohen::{g_poly, g_poly_at, p_nu, p_nu_series_side};

/// Seed for every randomized check.
pub const SEED: u64 = 0x5eed_2412;

/// Suite names accepted by [`run_suite`], in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "exactnum",
    "qseries",
    "euler",
    "theorem2",
    "forms",
    "rankincohen",
    "corollaries",
    "hecke",
    "ramanujan-691",
    "dirichlet",
    "rademacher",
];

/// The six tabulated multiples of the normalized cusp form.
pub const BETA_TABLE: [(u32, &str); 6] = [
    (6, "-33108590592/691"),
    (8, "-187167592415232/3617"),
    (9, "-28682634201661440/43867"),
    (10, "-8294726176465158144/174611"),
    (11, "-101475065073734516736/77683"),
    (13, "-1195065734266339700244480/657931"),
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

type Outcome = Result<(bool, String)>;

fn run(suite: &'static str, name: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check { suite, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn all_of(items: impl IntoIterator<Item = Result<Option<String>>>, ok: &str) -> Outcome {
    for item in items {
        if let Some(bad) = item? {
            return Ok((false, bad));
        }
    }
    Ok((true, ok.to_string()))
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.random_range(-60i64..=60), rng.random_range(1i64..=12))
}

fn random_series(rng: &mut ChaCha8Rng, prec: i64, unit: bool) -> Result<IntQSeries> {
    let coeffs = (0..prec)
        .map(|i| {
            if i == 0 && unit {
                Rat::from(rng.random_range(1i64..=5))
            } else if rng.random_bool(0.3) {
                random_rat(rng)
            } else {
                Rat::zero()
            }
        })
        .collect();
    IntQSeries::from_coeffs(0, coeffs)
}

fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> (i64, i64, i64, i64) {
    loop {
        let c = rng.random_range(-bound..=bound);
        let d = rng.random_range(-bound..=bound);
        let g = c.extended_gcd(&d);
        if g.gcd != 1 {
            continue;
        }
        let k = rng.random_range(-2i64..=2);
        return (g.y + k * c, -g.x + k * d, c, d);
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let checks = match name {
        "all" => SUITES.iter().map(|s| suite_checks(s)).collect::<Result<Vec<_>>>()?.concat(),
        other => suite_checks(other)?,
    };
    Ok(SuiteReport { suite: name.to_string(), seed: SEED, checks })
}

fn suite_checks(name: &str) -> Result<Vec<Check>> {
    Ok(match name {
        "exactnum" => exactnum_suite(),
        "qseries" => qseries_suite(),
        "euler" => euler_suite(),
        "theorem2" => theorem2_suite(),
        "forms" => forms_suite(),
        "rankincohen" => rankincohen_suite(),
        "corollaries" => corollaries_suite(),
        "hecke" => hecke_suite(),
        "ramanujan-691" => ramanujan_suite(),
        "dirichlet" => dirichlet_suite(),
        "rademacher" => rademacher_suite(),
        _ => return Err(Error::InvalidArgument(format!("unknown suite {name:?}; expected one of {SUITES:?} or all"))),
    })
}

fn exactnum_suite() -> Vec<Check> {
    const S: &str = "exactnum";
    vec![
        run(S, "odd-bernoulli-vanish", || {
            all_of((1..60).map(|n| Ok((!bernoulli(2 * n + 1).is_zero()).then(|| format!("B_{}", 2 * n + 1)))), "n < 60")
        }),
        run(S, "falling-negative-index-inverse", || {
            let mut rng = rng(1);
            all_of(
                (0..200).map(|_| {
                    let x = random_rat(&mut rng);
                    let m = rng.random_range(0i64..=8);
                    Ok(match falling_factorial(&x, -m) {
                        Ok(inv) => (falling_factorial(&x, m)? * inv != Rat::one()).then(|| format!("x = {x}, m = {m}")),
                        Err(_) => None,
                    })
                }),
                "200 random (x, m)",
            )
        }),
        run(S, "rising-is-signed-falling", || {
            let mut rng = rng(2);
            all_of(
                (0..200).map(|_| {
                    let x = random_rat(&mut rng);
                    let j = rng.random_range(0u64..=10);
                    let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
                    let rhs = sign * falling_factorial(&-x.clone(), j as i64)?;
                    Ok((rising_factorial(&x, j) != rhs).then(|| format!("x = {x}, j = {j}")))
                }),
                "200 random (x, j)",
            )
        }),
        run(S, "gamma-recurrence", || {
            all_of(
                (1..=40).map(|t| {
                    let x = Rat::new(t, 2);
                    let lhs = gamma_exact(&(&x + Rat::one()))?;
                    let rhs = &PiScalar::rational(x.clone()) * &gamma_exact(&x)?;
                    Ok((lhs != rhs).then(|| format!("x = {x}")))
                }),
                "half-integers in (0, 20]",
            )
        }),
        run(S, "quadratic-norm-rational", || {
            let mut rng = rng(3);
            let fields = [2u64, 3, 5, 6, 7, 10, 13, 144169];
            all_of(
                (0..100).map(|_| {
                    let d = fields[rng.random_range(0..fields.len())];
                    let z = QuadNum::new(random_rat(&mut rng), random_rat(&mut rng), d);
                    Ok((!(&z * &z.conjugate()).is_rational()).then(|| format!("{z:?}")))
                }),
                "100 random z",
            )
        }),
    ]
}

fn qseries_suite() -> Vec<Check> {
    const S: &str = "qseries";
    vec![
        run(S, "pentagonal-number-theorem", || {
            let a = eta_expansion(2400)?;
            let b = eta_product(2400)?;
            Ok((a.agrees_with(&b), "prec24 = 2400".into()))
        }),
        run(S, "ring-axioms", || {
            let mut rng = rng(4);
            all_of(
                (0..40).map(|i| {
                    let a = random_series(&mut rng, 25, false)?;
                    let b = random_series(&mut rng, 20, false)?;
                    let c = random_series(&mut rng, 30, false)?;
                    let assoc = a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c)));
                    let dist = a.mul(&(&b + &c)).agrees_with(&(&a.mul(&b) + &a.mul(&c)));
                    Ok((!(assoc && dist)).then(|| format!("trial {i}")))
                }),
                "40 random triples",
            )
        }),
        run(S, "leibniz", || {
            let mut rng = rng(5);
            all_of(
                (0..40).map(|i| {
                    let a = random_series(&mut rng, 25, false)?;
                    let b = random_series(&mut rng, 25, false)?;
                    let lhs = a.mul(&b).d_operator();
                    let rhs = &a.d_operator().mul(&b) + &a.mul(&b.d_operator());
                    Ok((!lhs.agrees_with(&rhs)).then(|| format!("trial {i}")))
                }),
                "40 random pairs",
            )
        }),
        run(S, "eta-inverse-log-derivative", || {
            let inv = eta_inverse_expansion(24 * 60)?;
            let e2 = eisenstein(2, 61)?.to_q24();
            let rhs = e2.mul(&inv).scale(&Rat::new(-1, 24));
            Ok((inv.d_operator().agrees_with(&rhs), "D(1/eta) = -E2/(24 eta), 60 coefficients".into()))
        }),
        run(S, "invert-two-sided", || {
            let mut rng = rng(6);
            all_of(
                (0..50).map(|i| {
                    let a = random_series(&mut rng, 30, true)?;
                    let inv = a.invert()?;
                    let one = IntQSeries::one(30)?;
                    Ok((!(a.mul(&inv).agrees_with(&one) && inv.mul(&a).agrees_with(&one))).then(|| format!("trial {i}")))
                }),
                "50 random units",
            )
        }),
    ]
}

/// Checks the exact partition table against the inverse of the Euler product.
pub fn euler_equivalence(n_max: usize) -> Outcome {
    let table = partition_table(n_max);
    let inv = euler_product(n_max as i64 + 1).invert()?;
    for n in 0..=n_max as i64 {
        if Rat::from_int(table.get(n)) != inv.coeff(n) {
            return Ok((false, format!("first mismatch at n = {n}")));
        }
    }
    Ok((true, format!("n <= {n_max}")))
}

fn euler_suite() -> Vec<Check> {
    vec![run("euler", "recurrence-matches-product", || euler_equivalence(200))]
}

/// theorem2_rhs against p(n) for the given nu and 1 <= n <= n_max.
pub fn theorem2_roundtrip(nus: impl IntoIterator<Item = u32>, n_max: usize) -> Outcome {
    let table = partition_table(n_max);
    for nu in nus {
        let traces = trace_series(nu, n_max)?;
        for n in 1..=n_max {
            let got = theorem2_rhs(nu, n as i64, traces.get(n), &table)?;
            if got != Rat::from_int(table.get(n as i64)) {
                return Ok((false, format!("nu = {nu}, n = {n}: {got}")));
            }
        }
    }
    Ok((true, format!("n <= {n_max}")))
}

fn theorem2_suite() -> Vec<Check> {
    const S: &str = "theorem2";
    vec![
        run(S, "recurrence-reproduces-p", || theorem2_roundtrip(2..=13, 40)),
        run(S, "g-constant-term-nonzero", || {
            all_of(
                (0..=14u32).flat_map(|nu| (1..=1000i64).map(move |n| (nu, n))).map(|(nu, n)| {
                    Ok(g_poly(nu, n, 0).is_zero().then(|| format!("g_{nu}({n}, 0) = 0")))
                }),
                "nu <= 14, 1 <= n <= 1000",
            )
        }),
    ]
}

fn forms_suite() -> Vec<Check> {
    const S: &str = "forms";
    let prec = 60;
    vec![
        run(S, "ramanujan-derivatives", || {
            let e2 = eisenstein(2, prec)?;
            let e4 = eisenstein(4, prec)?;
            let e6 = eisenstein(6, prec)?;
            let d2 = (&e2.mul(&e2) - &e4).scale(&Rat::new(1, 12));
            let d4 = (&e2.mul(&e4) - &e6).scale(&Rat::new(1, 3));
            let d6 = (&e2.mul(&e6) - &e4.mul(&e4)).scale(&Rat::new(1, 2));
            let ok = [(&e2, d2, "E2"), (&e4, d4, "E4"), (&e6, d6, "E6")]
                .into_iter()
                .find(|(e, d, _)| !e.d_operator().agrees_with(d));
            Ok(match ok {
                None => (true, "D(E2), D(E4), D(E6) to 60 coefficients".into()),
                Some((_, _, name)) => (false, format!("D({name}) mismatch")),
            })
        }),
        run(S, "delta-from-eisenstein", || {
            let e4 = eisenstein(4, prec)?;
            let e6 = eisenstein(6, prec)?;
            let rhs = (&e4.pow(3)? - &e6.pow(2)?).scale(&Rat::new(1, 1728));
            Ok((delta(prec).agrees_with(&rhs), "eta^24 = (E4^3 - E6^2)/1728".into()))
        }),
        run(S, "one-eisenstein-direction", || {
            all_of(
                (4..=40).step_by(2).map(|w| {
                    Ok((dim_total(w) != dim_cusp(w) + 1).then(|| format!("weight {w}")))
                }),
                "even weights 4..=40",
            )
        }),
        run(S, "decompose-synthesize", || {
            let mut rng = rng(7);
            all_of(
                (4..=30).step_by(2).map(|w| {
                    let space = space_basis(w, dim_total(w) as i64 + 12)?;
                    let coords: Vec<Rat> = (0..space.dim_total).map(|_| random_rat(&mut rng)).collect();
                    let back = decompose(&space.synthesize(&coords), &space)?;
                    Ok((back != coords).then(|| format!("weight {w}")))
                }),
                "weights 4..=30",
            )
        }),
    ]
}

/// p_nu from derivatives against the pentagonal series form.
pub fn operator_series_agreement(nu_max: u32, prec: i64) -> Outcome {
    for nu in 0..=nu_max {
        let a = p_nu(nu, prec)?;
        let b = p_nu_series_side(nu, prec)?;
        if let Some(n) = a.first_difference(&b) {
            return Ok((false, format!("nu = {nu} differs at q^{n}")));
        }
    }
    Ok((true, format!("nu <= {nu_max}, {prec} coefficients")))
}

fn rankincohen_suite() -> Vec<Check> {
    const S: &str = "rankincohen";
    vec![
        run(S, "operator-series-agreement", || operator_series_agreement(10, 60)),
        run(S, "modularity", || {
            all_of(
                (2..=14u32).map(|nu| {
                    let w = 2 * nu as i64;
                    let space = space_basis(w, dim_total(w) as i64 + 20)?;
                    decompose(&p_nu(nu, space.prec)?, &space)?;
                    Ok(None)
                }),
                "2 <= nu <= 14 decompose with zero residual",
            )
        }),
        run(S, "constant-term", || {
            all_of(
                (2..=14u32).map(|nu| {
                    let c = p_nu(nu, 2)?.coeff(0);
                    let want = Rat::from_int(binomial(2 * nu as i64 - 2, nu as i64 - 2));
                    Ok((c != want).then(|| format!("nu = {nu}: {c}")))
                }),
                "2 <= nu <= 14",
            )
        }),
        run(S, "g-even-in-6k+1", || {
            all_of(
                (0..=10u32).flat_map(|nu| (-10i64..=10).map(move |k| (nu, k))).map(|(nu, k)| {
                    let bad = (0..6).any(|n| g_poly(nu, n, k) != g_poly_at(nu, n, -(6 * k + 1)));
                    Ok(bad.then(|| format!("nu = {nu}, k = {k}")))
                }),
                "|k| <= 10",
            )
        }),
    ]
}

/// For the weights with no cusp forms, P_nu is the stated multiple of the
/// divisor sums, coefficient by coefficient.
pub fn eisenstein_only(nus: &[u32], n_max: u64) -> Outcome {
    for &nu in nus {
        let traces = trace_series(nu, n_max as usize)?;
        if traces.values.iter().any(|t| !t.is_zero()) {
            return Ok((false, format!("nu = {nu}: nonzero cuspidal part")));
        }
        let p = p_nu(nu, n_max as i64 + 1)?;
        let factor = eisenstein_sigma_factor(nu);
        for n in 1..=n_max {
            if p.coeff(n as i64) != &factor * Rat::from_int(sigma(2 * nu - 1, n)) {
                return Ok((false, format!("nu = {nu}, n = {n}")));
            }
        }
    }
    Ok((true, format!("nu in {nus:?}, n <= {n_max}")))
}

/// The six tabulated multiples, and cusp part = beta * Delta_{2nu}.
pub fn beta_table_check() -> Outcome {
    for (nu, value) in BETA_TABLE {
        let want: Rat = value.parse()?;
        let traces = trace_series(nu, 30)?;
        let d = crate::forms::delta_2nu(nu, 31)?;
        for n in 0..=30 {
            if traces.get(n) != &(&want * d.coeff(n as i64)) {
                return Ok((false, format!("nu = {nu} at q^{n}")));
            }
        }
    }
    Ok((true, "nu in {6, 8, 9, 10, 11, 13}".into()))
}

fn corollaries_suite() -> Vec<Check> {
    const S: &str = "corollaries";
    vec![
        run(S, "eisenstein-only-weights", || eisenstein_only(&[2, 3, 4, 5, 7], 50)),
        run(S, "beta-table", beta_table_check),
    ]
}

fn hecke_suite() -> Vec<Check> {
    const S: &str = "hecke";
    vec![
        run(S, "eigenvector", || {
            all_of(
                (12..=26).step_by(2).filter(|&w| dim_cusp(w) > 0).map(|w| {
                    let forms = eigenforms(w, 80)?;
                    for f in &forms {
                        for m in [2, 3, 5, 7] {
                            if !f.is_hecke_eigenform_for(m)? {
                                return Ok(Some(format!("weight {w}, T_{m}")));
                            }
                        }
                    }
                    Ok(None)
                }),
                "weights 12..=26, m in {2, 3, 5, 7}",
            )
        }),
        run(S, "reconstruction", || {
            let n_max = 30usize;
            all_of(
                (2..=13u32).map(|nu| {
                    let w = 2 * nu as i64;
                    let p = p_nu(nu, n_max as i64 + 1)?;
                    let e = eisenstein(w, n_max as i64 + 1)?.scale(&eisenstein_multiple(nu));
                    let (forms, gammas) = if dim_cusp(w) == 0 {
                        (Vec::new(), Vec::new())
                    } else {
                        (eigenforms(w, n_max as i64 + 1)?, df_over_norm(nu)?)
                    };
                    for n in 0..=n_max {
                        let mut acc = QuadNum::rational(e.coeff(n as i64));
                        for (f, g) in forms.iter().zip(&gammas) {
                            acc = &acc + &(f.a(n) * g);
                        }
                        if acc != QuadNum::rational(p.coeff(n as i64)) {
                            return Ok(Some(format!("nu = {nu} at q^{n}")));
                        }
                    }
                    Ok(None)
                }),
                "nu <= 13, 31 coefficients",
            )
        }),
        run(S, "galois-conjugate-coordinates", || {
            all_of(
                (2..=14u32).filter(|&nu| dim_cusp(2 * nu as i64) == 2).map(|nu| {
                    let g = df_over_norm(nu)?;
                    Ok((g[1] != g[0].conjugate()).then(|| format!("nu = {nu}")))
                }),
                "two-dimensional cusp spaces, nu <= 14",
            )
        }),
    ]
}

/// Tr_12(n) = beta_6 tau(n) and tau(n) = sigma_11(n) mod 691, n <= n_max.
pub fn weight_twelve_checks(n_max: usize) -> (Outcome, Outcome) {
    let trace = || -> Outcome {
        let beta: Rat = BETA_TABLE[0].1.parse()?;
        let traces = trace_series(6, n_max)?;
        let tau = delta(n_max as i64 + 1);
        for n in 1..=n_max {
            if traces.get(n) != &(&beta * tau.coeff(n as i64)) {
                return Ok((false, format!("n = {n}")));
            }
        }
        Ok((true, format!("n <= {n_max}")))
    };
    let congruence = || -> Outcome {
        let tau = delta(n_max as i64 + 1);
        let p = BigInt::from(691);
        for n in 1..=n_max {
            let t = tau.coeff(n as i64).to_integer().expect("integral coefficients");
            if (t - sigma(11, n as u64)).mod_floor(&p) != BigInt::zero() {
                return Ok((false, format!("n = {n}")));
            }
        }
        Ok((true, format!("n <= {n_max}")))
    };
    (trace(), congruence())
}

fn ramanujan_suite() -> Vec<Check> {
    const S: &str = "ramanujan-691";
    let (trace, congruence) = weight_twelve_checks(50);
    vec![run(S, "trace-is-beta-tau", || trace), run(S, "tau-sigma11-mod-691", || congruence)]
}

/// |x_{i+1} - x_i| for consecutive values.
fn steps(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn fmt_steps(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn dirichlet_suite() -> Vec<Check> {
    const S: &str = "dirichlet";
    let grid = [250u64, 500, 1000, 2000];
    let delta_cell = OnceCell::new();
    let delta_form = || -> Result<Eigenform> {
        delta_cell.get_or_init(|| eigenforms_for_sums(6, 2000).map(|v| v[0].clone())).clone()
    };
    vec![
        run(S, "kronecker-multiplicative-periodic", || {
            all_of(
                (1..10_000u64).map(|n| {
                    let periodic = kronecker12(n) == kronecker12(n + 12);
                    let mult = (1..=12u64).all(|m| kronecker12(n * m) == kronecker12(n) * kronecker12(m));
                    Ok((!(periodic && mult)).then(|| format!("n = {n}")))
                }),
                "n < 10^4",
            )
        }),
        run(S, "beta-float-oracle", || {
            all_of(
                (2..=8u32).flat_map(|nu| (0..=nu - 2).flat_map(move |j| (0..=5u32).map(move |m| (nu, j, m)))).map(
                    |(nu, j, m)| {
                        let exact = beta_constant(nu, j, m)?.to_f64();
                        let oracle = beta_float(nu, j, m);
                        Ok((((exact - oracle) / oracle).abs() > 1e-12).then(|| format!("({nu}, {j}, {m}): {exact} vs {oracle}")))
                    },
                ),
                "nu <= 8, j <= nu - 2, m <= 5",
            )
        }),
        run(S, "partial-sum-example", || {
            let f = delta_form()?;
            let d5 = dirichlet_partial(&f, 5, 13)?;
            Ok(((d5 + 5f64.powi(-13)).abs() < 1e-30, format!("D(Delta, 5; 13) = {d5:e}")))
        }),
        run(S, "tail-steps-shrink-s13", || {
            let f = delta_form()?;
            let d = grid.iter().map(|&n| dirichlet_partial(&f, n, 13)).collect::<Result<Vec<_>>>()?;
            let st = steps(&d);
            Ok((strictly_decreasing(&st), format!("consecutive steps over N = 250, 500, 1000, 2000: {}", fmt_steps(&st))))
        }),
        run(S, "dhat-steps-shrink", || {
            let f = delta_form()?;
            let d = grid.iter().map(|&n| df_truncated(&f, 6, 100, n)).collect::<Result<Vec<_>>>()?;
            let st = steps(&d);
            Ok((strictly_decreasing(&st), format!("consecutive steps over N = 250, 500, 1000, 2000 (M = 100): {}", fmt_steps(&st))))
        }),
        run(S, "petersson-norm-range", || {
            let est = petersson_norm_estimate(6)?;
            let norm = est.norm[0];
            Ok(((1.0353e-6..=1.0354e-6).contains(&norm), format!("||Delta|| ~ {norm:.9e}")))
        }),
    ]
}

/// Float version of beta(nu, j, m) built from a general-purpose Gamma.
fn beta_float(nu: u32, j: u32, m: u32) -> f64 {
    use statrs::function::gamma::gamma;
    let (nuf, jf, mf) = (nu as f64, j as f64, m as f64);
    let pi = std::f64::consts::PI;
    let rising = |x: f64, k: f64| gamma(x + k) / gamma(x);
    let rising_prod = |x: f64, k: u32| (0..k).map(|i| x + i as f64).product::<f64>();
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    sign * gamma(nuf - 0.5) * gamma(nuf + 0.5) / (2.0 * pi.sqrt() * gamma(2.5))
        * (6.0 / pi).powf(2.0 * nuf - 1.0)
        * gamma(2.0 * nuf + mf - 1.0)
        / (gamma(jf + 1.0) * gamma(mf + 1.0) * gamma(2.0 * nuf - jf - 1.0))
        * rising_prod(nuf - jf - 1.0, nu)
        * rising(1.5, jf)
        / (rising_prod(-0.5 - jf, nu) * rising(2.5, jf))
}

/// Rounding, gap and imaginary residual of the series for p(n), n <= n_max.
pub fn rademacher_checks(n_max: u64, depth: u32) -> (Outcome, Outcome) {
    let cache = KloostermanCache::new(depth);
    let table = partition_table(n_max as usize);
    let mut worst_gap = 0f64;
    let mut worst_im = 0f64;
    let mut worst_c0 = 0usize;
    let mut rounding: Option<String> = None;
    for n in 1..=n_max {
        let est = match cache.rademacher_pn(n) {
            Ok(e) => e,
            Err(e) => return (Err(e.clone()), Err(e)),
        };
        let running = cache.running_estimates(n).expect("n >= 1");
        let p = table.get(n as i64).to_string();
        // Smallest C0 with correct rounding for every C in C0..=depth.
        let c0 = running.iter().rposition(|x| x.round().to_string() != p).map_or(1, |i| i + 2);
        worst_c0 = worst_c0.max(c0);
        worst_gap = worst_gap.max(est.gap);
        worst_im = worst_im.max(est.imag_residual);
        if rounding.is_none() && (est.nearest.to_string() != p || est.gap >= 0.5 || c0 > depth as usize) {
            rounding = Some(format!("n = {n}: estimate {} vs p(n) = {p}", est.estimate));
        }
    }
    let r1 = Ok(match rounding {
        Some(bad) => (false, bad),
        None => (true, format!("n <= {n_max}, C = {depth}: worst gap {worst_gap:.3e}, settled by C = {worst_c0}")),
    });
    let r2 = Ok((worst_im < 1e-6, format!("worst relative imaginary part {worst_im:.3e}")));
    (r1, r2)
}

fn rademacher_suite() -> Vec<Check> {
    const S: &str = "rademacher";
    let residual_cell = OnceCell::new();
    vec![
        run(S, "multiplier-24th-root", || {
            let mut rng = rng(8);
            all_of(
                (0..200).map(|_| {
                    let (a, b, c, d) = random_sl2(&mut rng, 60);
                    let e = eta_multiplier(a, b, c, d)?;
                    Ok((!e.pow(24).is_one()).then(|| format!("({a}, {b}; {c}, {d})")))
                }),
                "200 random matrices",
            )
        }),
        run(S, "multiplier-cocycle-at-i", || {
            let mut rng = rng(9);
            let tau = Complex64::i();
            let eta_tau = eta_value(tau);
            let act = |g: (i64, i64, i64, i64), z: Complex64| (z * g.0 as f64 + g.1 as f64) / (z * g.2 as f64 + g.3 as f64);
            let law = |g: (i64, i64, i64, i64), z: Complex64, ez: Complex64| -> Result<Complex64> {
                Ok(eta_multiplier(g.0, g.1, g.2, g.3)?.to_complex() * automorphy_sqrt(g.2, g.3, z) * ez)
            };
            all_of(
                (0..100).map(|_| {
                    let g1 = random_sl2(&mut rng, 4);
                    let g2 = random_sl2(&mut rng, 4);
                    let g12 = (
                        g1.0 * g2.0 + g1.1 * g2.2,
                        g1.0 * g2.1 + g1.1 * g2.3,
                        g1.2 * g2.0 + g1.3 * g2.2,
                        g1.2 * g2.1 + g1.3 * g2.3,
                    );
                    let direct = law(g12, tau, eta_tau)?;
                    let stepwise = law(g1, act(g2, tau), law(g2, tau, eta_tau)?)?;
                    let numeric = eta_value(act(g12, tau));
                    let ok = (direct - stepwise).norm() < 1e-10 * direct.norm()
                        && (direct - numeric).norm() < 1e-10 * direct.norm();
                    Ok((!ok).then(|| format!("{g1:?} {g2:?}")))
                }),
                "100 random pairs",
            )
        }),
        run(S, "rounds-to-p", || {
            let (rounding, residual) = rademacher_checks(50, 50);
            let _ = residual_cell.set(residual);
            rounding
        }),
        run(S, "imaginary-residual", || residual_cell.get().cloned().unwrap_or_else(|| rademacher_checks(50, 50).1)),
    ]
}
