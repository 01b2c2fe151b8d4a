//! End-to-end use of the public API: brackets to traces to partitions, and
//! the analytic series against the exact table.

use num_bigint::BigInt;
use pentarec::forms::{dim_cusp, space_basis, split_eisenstein_cusp};
use pentarec::hecke::{eigenforms, trace_series};
use pentarec::partitions::{partition_table, recurrence_table};
use pentarec::rademacher::KloostermanCache;
use pentarec::rankincohen::{p_nu, p_nu_series_side};
use proptest::prelude::*;

#[test]
fn bracket_traces_and_recurrence_agree_with_euler() {
    let table = partition_table(30);
    for nu in [6u32, 8, 12] {
        let weight = 2 * nu as i64;
        let p = p_nu(nu, 12).unwrap();
        let space = space_basis(weight, 12).unwrap();
        let (_, cusp) = split_eisenstein_cusp(&p, &space).unwrap();
        assert_eq!(cusp.len(), dim_cusp(weight));

        let traces = trace_series(nu, 30).unwrap();
        let rebuilt = recurrence_table(nu, &traces.values, 30).unwrap();
        assert_eq!(rebuilt.values(), table.values(), "nu = {nu}");
    }
}

#[test]
fn weight_twenty_four_eigenforms_are_conjugate() {
    let forms = eigenforms(24, 6).unwrap();
    assert_eq!(forms.len(), 2);
    for n in 1..6 {
        assert_eq!(forms[0].a(n).conjugate(), *forms[1].a(n));
    }
    assert!(forms.iter().all(|f| f.a(1).is_rational() && f.a(1).to_f64() == 1.0));
    assert!(!forms[0].a(2).is_rational());
}

#[test]
fn analytic_series_matches_table() {
    let table = partition_table(40);
    let cache = KloostermanCache::new(12);
    for n in 1..=40u64 {
        let est = cache.rademacher_pn(n).unwrap();
        assert_eq!(BigInt::from(est.nearest), table.get(n as i64), "n = {n}");
        assert!(est.gap < 0.25);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn operator_and_series_sides_coincide(nu in 0u32..9, prec in 4i64..20) {
        prop_assert_eq!(p_nu(nu, prec).unwrap(), p_nu_series_side(nu, prec).unwrap());
    }
}
