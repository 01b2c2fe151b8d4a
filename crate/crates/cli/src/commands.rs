use std::collections::BTreeMap;

use pentarec::dirichlet::{default_truncation, petersson_norm_estimate_with};
use pentarec::forms::{dim_cusp, dim_total, space_basis, split_eisenstein_cusp};
use pentarec::hecke::{beta_nu, df_over_norm, eigenforms as hecke_eigenforms, trace_series};
use pentarec::partitions::{partition_table, recurrence_table};
use pentarec::rademacher::KloostermanCache;
use pentarec::rankincohen::{g_poly, p_nu};
use pentarec::verify::run_suite;
use serde_json::Value;

use crate::config::RunConfig;
use crate::output::{float, quad, rat, rats, text};
use crate::{record, Failure, Outcome};

/// `n`, `a..b` or `a..=b`, both ends inclusive.
fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::usage(format!("expected n or a..b, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

enum Method {
    Euler,
    Theorem2(u32),
    Rademacher(u32),
}

impl Method {
    fn parse(s: &str) -> Result<Method, Failure> {
        let bad = || Failure::usage(format!("unknown method {s:?}; expected euler, theorem2:NU or rademacher:C"));
        match s.split_once(':') {
            None if s == "euler" => Ok(Method::Euler),
            Some(("theorem2", nu)) => match nu.parse() {
                Ok(nu) if nu >= 2 => Ok(Method::Theorem2(nu)),
                _ => Err(bad()),
            },
            Some(("rademacher", c)) => match c.parse() {
                Ok(c) if c >= 1 => Ok(Method::Rademacher(c)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }

    fn label(&self) -> String {
        match self {
            Method::Euler => "euler".into(),
            Method::Theorem2(nu) => format!("theorem2:{nu}"),
            Method::Rademacher(c) => format!("rademacher:{c}"),
        }
    }
}

pub fn partition(_cfg: &RunConfig, range: &str, methods: &[String], cross_check: bool) -> Result<Outcome, Failure> {
    let (lo, hi) = parse_range(range)?;
    let mut methods: Vec<Method> = methods.iter().map(|m| Method::parse(m)).collect::<Result<_, _>>()?;
    if cross_check && !methods.iter().any(|m| matches!(m, Method::Euler)) {
        methods.insert(0, Method::Euler);
    }
    // values[n][i] is p(n) from methods[i].
    let mut values: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    let mut records = Vec::new();
    for method in &methods {
        let label = method.label();
        match method {
            Method::Euler => {
                let table = partition_table(hi as usize);
                for n in lo..=hi {
                    let v = table.get(n as i64).to_string();
                    records.push(record! { "n" => n, "method" => label.clone(), "value" => v.clone() });
                    values.entry(n).or_default().push(v);
                }
            }
            Method::Theorem2(nu) => {
                let traces = trace_series(*nu, hi as usize)?;
                let table = recurrence_table(*nu, &traces.values, hi as usize)?;
                for n in lo..=hi {
                    let v = table.get(n as i64).to_string();
                    records.push(record! { "n" => n, "method" => label.clone(), "nu" => *nu, "value" => v.clone() });
                    values.entry(n).or_default().push(v);
                }
            }
            Method::Rademacher(c) => {
                if lo == 0 {
                    return Err(Failure::usage("the Kloosterman-Bessel series covers n >= 1"));
                }
                let cache = KloostermanCache::new(*c);
                for n in lo..=hi {
                    let est = cache.rademacher_pn(n)?;
                    let v = est.nearest.to_string();
                    records.push(record! {
                        "n" => n, "method" => label.clone(), "C" => *c, "value" => v.clone(),
                        "estimate" => float(est.estimate), "gap" => float(est.gap),
                        "imag_residual" => float(est.imag_residual),
                    });
                    values.entry(n).or_default().push(v);
                }
            }
        }
    }
    records.sort_by_key(|r| r["n"].as_u64());
    let mut outcome = Outcome::ok(records);
    if cross_check {
        for (n, vs) in &values {
            let agree = vs.iter().all(|v| v == &vs[0]);
            outcome.records.push(record! { "n" => *n, "method" => "cross-check", "agree" => agree });
            if !agree {
                outcome.ok = false;
                let diff: Vec<String> = methods.iter().zip(vs).map(|(m, v)| format!("{}={v}", m.label())).collect();
                outcome.notes.push(format!("p({n}) disagrees: {}", diff.join(", ")));
            }
        }
    }
    Ok(outcome)
}

pub fn pnu(cfg: &RunConfig, nu: u32) -> Result<Outcome, Failure> {
    let weight = 2 * nu as i64;
    // The decomposition needs a few coefficients past the dimension.
    let work = if nu >= 2 { cfg.prec.max(dim_total(weight) as i64 + 3) } else { cfg.prec };
    let p = p_nu(nu, work)?;
    let shown = p.truncate(cfg.prec);
    let mut r = record! {
        "nu" => nu, "weight" => weight, "method" => "rankin-cohen", "prec" => cfg.prec,
        "coefficients" => rats(shown.coeffs()), "is_zero" => shown.is_zero(),
    };
    if nu >= 2 {
        let space = space_basis(weight, work)?;
        let (eis, cusp) = split_eisenstein_cusp(&p, &space)?;
        let dim = dim_cusp(weight);
        r.insert("eisenstein_coefficient".into(), rat(&eis));
        r.insert("cusp_dim".into(), Value::from(dim));
        r.insert("cusp_coordinates".into(), rats(&cusp));
        r.insert("cusp_basis".into(), text("echelon"));
        if dim == 1 {
            r.insert("beta".into(), rat(&beta_nu(nu)?));
        }
        if (1..=2).contains(&dim) {
            let g = df_over_norm(nu)?;
            r.insert("df_over_norm".into(), Value::Array(g.iter().map(quad).collect()));
            r.insert("df_over_norm_value".into(), Value::Array(g.iter().map(|x| float(x.to_f64())).collect()));
        }
    }
    Ok(Outcome::ok(vec![r]))
}

pub fn gpoly(nu: u32, n: i64, k: i64) -> Result<Outcome, Failure> {
    let v = g_poly(nu, n, k);
    Ok(Outcome::ok(vec![record! { "nu" => nu, "n" => n, "k" => k, "method" => "closed-form", "value" => rat(&v) }]))
}

pub fn trace(cfg: &RunConfig, nu: u32) -> Result<Outcome, Failure> {
    let n_max = (cfg.prec - 1) as usize;
    let t = trace_series(nu, n_max)?;
    let records = (1..=n_max)
        .map(|n| record! { "nu" => nu, "n" => n, "method" => "cusp-part", "prec" => cfg.prec, "trace" => rat(t.get(n)) })
        .collect();
    Ok(Outcome::ok(records))
}

pub fn eigenforms(cfg: &RunConfig, weight: i64) -> Result<Outcome, Failure> {
    if weight < 0 || weight % 2 != 0 {
        return Err(Failure::usage(format!("weight must be even and nonnegative, got {weight}")));
    }
    let forms = hecke_eigenforms(weight, cfg.prec)?;
    let records = forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            record! {
                "weight" => weight, "index" => i, "method" => "hecke-t2", "prec" => cfg.prec,
                "field_disc" => f.field_disc(), "coefficients" => Value::Array(f.coeffs().iter().map(quad).collect()),
            }
        })
        .collect();
    Ok(Outcome::ok(records))
}

pub fn dirichlet(cfg: &RunConfig, nu: u32) -> Result<Outcome, Failure> {
    let (m0, n0) = default_truncation(nu);
    let (m, n) = (cfg.big_m.unwrap_or(m0), cfg.big_n.unwrap_or(n0));
    let est = petersson_norm_estimate_with(nu, m, n, cfg.float_mode)?;
    let records = (0..est.dhat.len())
        .map(|i| {
            record! {
                "nu" => nu, "eigenform" => i, "method" => "truncated-double-sum",
                "M" => m, "N" => n, "float_mode" => cfg.float_mode.to_string(),
                "dhat" => float(est.dhat[i]), "df_over_norm" => quad(&est.ratio[i]),
                "df_over_norm_value" => float(est.ratio[i].to_f64()), "norm_estimate" => float(est.norm[i]),
            }
        })
        .collect();
    Ok(Outcome::ok(records))
}

pub fn rademacher(cfg: &RunConfig, range: &str) -> Result<Outcome, Failure> {
    let (lo, hi) = parse_range(range)?;
    if lo == 0 {
        return Err(Failure::usage("the Kloosterman-Bessel series covers n >= 1"));
    }
    let cache = KloostermanCache::new(cfg.depth_c);
    let records = (lo..=hi)
        .map(|n| {
            let est = cache.rademacher_pn(n)?;
            Ok(record! {
                "n" => n, "method" => "kloosterman-bessel", "C" => cfg.depth_c,
                "estimate" => float(est.estimate), "nearest" => est.nearest.to_string(),
                "gap" => float(est.gap), "imag_residual" => float(est.imag_residual),
            })
        })
        .collect::<Result<_, Failure>>()?;
    Ok(Outcome::ok(records))
}

pub fn verify(suite: &str) -> Result<Outcome, Failure> {
    let report = run_suite(suite)?;
    let mut outcome = Outcome::ok(Vec::new());
    outcome.ok = report.passed();
    for c in &report.checks {
        outcome.records.push(record! {
            "suite" => c.suite, "name" => c.name, "passed" => c.passed, "detail" => c.detail.clone(),
            "seed" => report.seed,
        });
        outcome.check_timings.insert(format!("{}/{}", c.suite, c.name), float(c.seconds));
        if !c.passed {
            outcome.notes.push(format!("FAIL {}/{}: {}", c.suite, c.name, c.detail));
        }
    }
    Ok(outcome)
}
