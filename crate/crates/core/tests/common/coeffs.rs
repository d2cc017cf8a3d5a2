//! Checks on even-function expansions of the multiple sum.

use multiram::fourier::{c_interval_closed_form, c_interval_sum, even_coeffs_of_S, ffc_of_S};
use multiram::multisum::{transpose_data, transpose_data_restricted};
use multiram::nt;
use rand::Rng;

use super::{rng, RandomSpec};

pub fn closed_form_matches_enumeration() {
    for n in 1..=60 {
        let divs = nt::divisors(n).unwrap();
        for &e in &divs {
            for &d in &divs {
                assert_eq!(c_interval_sum(n, e, d).unwrap(), c_interval_closed_form(n, e, d).unwrap(), "({n},{e},{d})");
            }
        }
    }
}

pub fn coefficient_closed_form_matches_direct() {
    let mut r = rng(51);
    for i in 0..100 {
        let m = 1 + i % 2;
        let spec = RandomSpec::generate(&mut r, m, 3, false, true);
        let s = spec.spec();
        for n1 in 1..=30 {
            let closed = ffc_of_S(&s, n1).unwrap();
            let direct = even_coeffs_of_S(&s, n1).unwrap();
            assert_eq!(closed, direct, "{spec:?} at n1 = {n1}");
        }
    }
}

pub fn transposed_restriction_remark() {
    let mut r = rng(52);
    for _ in 0..50 {
        let m = r.gen_range(1..=2);
        let mut spec = RandomSpec::generate(&mut r, m, 1, false, true);
        let mut prev = 1;
        spec.gammas = (0..m)
            .map(|_| {
                prev *= r.gen_range(1..=3);
                prev
            })
            .collect();
        let s = spec.spec();
        let n1 = r.gen_range(1..=48);
        let plain = transpose_data(&s, n1).unwrap();
        let restricted = transpose_data_restricted(&s, n1).unwrap();
        let divs = nt::divisors(n1).unwrap();
        let mut ds = vec![0; m];
        for _ in 0..20 {
            for d in ds.iter_mut() {
                *d = divs[r.gen_range(0..divs.len())];
            }
            let mut args = vec![n1];
            args.extend(ds.iter().rev().map(|&d| n1 / d));
            assert_eq!(plain.eval(&args).unwrap(), restricted.eval(&args).unwrap(), "{spec:?} at {args:?}");
        }
    }
}

pub fn fourier_suite() {
    coefficient_closed_form_matches_direct();
    transposed_restriction_remark();
}
