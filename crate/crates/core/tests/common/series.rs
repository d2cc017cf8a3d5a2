//! Coefficient-exact checks of the Dirichlet series identities, each with a
//! deliberate single-coefficient mutation that must be caught.

use multiram::arithfn::{rat, ArithFn};
use multiram::dseries::*;
use multiram::multisum::{sigma_spec, MultiSumSpec};
use rand::Rng;

use super::{rng, RandomSpec};

fn ok(r: VerificationReport) {
    assert!(r.is_ok(), "{}", r.to_json());
}

/// Both sides agree, and bumping one left-hand coefficient is caught at
/// exactly that index.
fn ok_and_detects_mutation(mut sides: IdentitySides, at: &[u64]) {
    ok(sides.report().unwrap());
    let bumped = sides.lhs.get(at) + rat(1);
    sides.lhs.set(at, bumped).unwrap();
    let r = sides.report().unwrap();
    assert!(!r.is_ok());
    assert_eq!(r.first_mismatch.as_ref().unwrap().index, at.to_vec());
    assert_eq!(r.to_json()["status"], "mismatch");
}

/// `base | γ_1 | ⋯ | γ_m`, each step a factor of 1, 2 or 3.
fn dividing_chain(r: &mut impl Rng, base: u32, m: usize) -> Vec<u32> {
    let mut prev = base;
    (0..m)
        .map(|_| {
            prev *= r.gen_range(1..=3);
            prev
        })
        .collect()
}

pub fn gamma_chain_instances() {
    ok_and_detects_mutation(prop_gamma_chain_sides(&[ArithFn::one(), ArithFn::one()], &[2], 200).unwrap(), &[144]);
    ok(verify_prop_gamma_chain(&[ArithFn::mobius(), ArithFn::one(), ArithFn::power(1)], &[2, 4], 200).unwrap());
    let mut r = rng(11);
    for _ in 0..10 {
        let m = r.gen_range(1..=3);
        let spec = RandomSpec::generate(&mut r, m, 3, false, false);
        let fs: Vec<ArithFn> = spec.kinds.iter().map(|k| k.arith()).collect();
        ok(verify_prop_gamma_chain(&fs, &dividing_chain(&mut r, 1, m), 200).unwrap());
    }
}

pub fn multivariable_instances() {
    ok(classical_c_series_sides(40).unwrap().report().unwrap());
    let c = MultiSumSpec::unit(vec![ArithFn::mobius(), ArithFn::power(1)]).unwrap();
    ok_and_detects_mutation(multivariable_l_sides(&c, 1, 30).unwrap(), &[12, 18]);
    let tau = MultiSumSpec::unit(vec![ArithFn::one(), ArithFn::one()]).unwrap();
    ok(verify_multivariable_l(&tau, 1, 50).unwrap());
    ok(verify_multivariable_l(&sigma_spec(&[1, 1], &[1, 0]).unwrap(), 1, 30).unwrap());
    let s = MultiSumSpec::new(vec![2, 4], vec![ArithFn::mobius(), ArithFn::phi(), ArithFn::power(1)]).unwrap();
    ok(verify_multivariable_l(&s, 2, 30).unwrap());
}

pub fn multivariable_random_chains() {
    let mut r = rng(12);
    for _ in 0..6 {
        let m = r.gen_range(1..=2);
        let g0 = r.gen_range(1..=2u32);
        let mut spec = RandomSpec::generate(&mut r, m, 1, true, false);
        spec.gammas = dividing_chain(&mut r, g0, m);
        ok(verify_multivariable_l(&spec.spec(), g0, 30).unwrap());
    }
}

pub fn phi_series_instances() {
    let s = MultiSumSpec::new(vec![2, 3], vec![ArithFn::mobius(), ArithFn::phi(), ArithFn::power(1)]).unwrap();
    for j in 1..=3 {
        ok(verify_phi_series(&s, &[36, 72], j, 40).unwrap());
        ok(verify_phi_series(&s, &[12, 8], j, 40).unwrap());
    }
    let c = MultiSumSpec::unit(vec![ArithFn::mobius(), ArithFn::power(1)]).unwrap();
    ok(verify_phi_series(&c, &[6], 1, 40).unwrap());
    ok_and_detects_mutation(phi_series_sides(&c, &[6], 2, 40).unwrap(), &[7]);
}

pub fn phi_series_random() {
    let mut r = rng(13);
    for _ in 0..12 {
        let m = r.gen_range(0..=2);
        let spec = RandomSpec::generate(&mut r, m, 3, false, false);
        let fixed: Vec<u64> = (0..m).map(|_| r.gen_range(1..=72)).collect();
        for j in 1..=m + 1 {
            ok(verify_phi_series(&spec.spec(), &fixed, j, 40).unwrap());
        }
    }
}

pub fn double_and_diagonal() {
    let (p1, p0) = (ArithFn::power(1), ArithFn::power(0));
    ok_and_detects_mutation(double_series_sides(&p1, &p0, &p0, &p0, 1, 40).unwrap(), &[4, 6]);
    ok(verify_double_series(&p0, &p0, &p0, &p0, 2, 40).unwrap());
    let liouville = ArithFn::completely_multiplicative("lambda", |_| rat(-1));
    let chi = ArithFn::completely_multiplicative("chi4", |p| rat([0, 1, 0, -1][(p % 4) as usize]));
    ok(verify_double_series(&liouville, &chi, &p1, &ArithFn::power(-1), 3, 40).unwrap());
    ok(verify_double_series(&chi, &p0, &liouville, &ArithFn::power(2), 2, 40).unwrap());
    assert!(verify_double_series(&ArithFn::mobius(), &p0, &p0, &p0, 1, 10).is_err());
    ok(verify_borwein_choi(&p1, &p0, &p0, &p0, 1, 60).unwrap());
    ok_and_detects_mutation(borwein_choi_sides(&p1, &p0, &p1, &p0, 2, 60).unwrap(), &[36]);
}

pub fn gen_ramanujan_series() {
    ok(verify_gen_ramanujan_series(1, 1, &[1], &[12], 40).unwrap());
    ok(verify_gen_ramanujan_series(2, 1, &[1, 0], &[6, 4], 20).unwrap());
    ok(verify_gen_ramanujan_series(2, 1, &[2, 1], &[12, 18], 20).unwrap());
    ok(verify_gen_ramanujan_series(2, 2, &[1], &[6], 20).unwrap());
    ok_and_detects_mutation(gen_ramanujan_series_sides(2, 2, &[0], &[12], 20).unwrap(), &[3, 4]);
}

pub fn f_gcd_series() {
    ok_and_detects_mutation(f_gcd_series_sides(&ArithFn::power(1), 2, 40).unwrap(), &[10, 15]);
    ok(verify_f_gcd_series(&ArithFn::phi(), 2, 40).unwrap());
    ok(verify_f_gcd_series(&ArithFn::epsilon(), 3, 12).unwrap());
    ok(verify_f_gcd_single(&ArithFn::phi(), &[6], 1, 40).unwrap());
    ok_and_detects_mutation(f_gcd_single_sides(&ArithFn::power(1), &[12, 8], 3, 40).unwrap(), &[4]);
}

pub fn dirichlet_suite() {
    gamma_chain_instances();
    multivariable_instances();
    multivariable_random_chains();
    phi_series_instances();
    phi_series_random();
    double_and_diagonal();
    gen_ramanujan_series();
    f_gcd_series();
}
