//! Checks on Ramanujan sums and the multiple sum itself.

use multiram::arithfn::chain_gamma_convolve;
use multiram::dseries::{embed, from_multisum, VarMask};
use multiram::fourier::{ramanujan_c, ramanujan_c_expsum};
use multiram::multisum::{degeneracy_check, Degeneracy, MultiSumSpec};
use multiram_oracle as oracle;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{rng, RandomSpec};

pub fn ramanujan_sum_forms_agree() {
    for k in 1..=100 {
        for n in 1..=100 {
            let exact = ramanujan_c(k, n).unwrap();
            let z = ramanujan_c_expsum(k, n);
            assert!((z.re - exact as f64).abs() < 1e-9 && z.im.abs() < 1e-9, "c({k},{n})");
            assert_eq!(exact, oracle::ramanujan_c(k, n));
        }
    }
}

/// Random tuples in `[1, 40]`, half of them sharing a random common factor
/// so that long divisor chains actually occur.
pub fn tuple40(r: &mut impl Rng, len: usize) -> Vec<u64> {
    if r.gen_bool(0.5) {
        let base = r.gen_range(1..=12u64);
        (0..len).map(|_| base * r.gen_range(1..=40 / base)).collect()
    } else {
        (0..len).map(|_| r.gen_range(1..=40)).collect()
    }
}

pub fn multiple_sums_match_brute_force() {
    let mut r = rng(2);
    for i in 0..50 {
        let m = 1 + i % 3;
        let spec = RandomSpec::generate(&mut r, m, 3, false, true);
        let s = spec.spec();
        if m == 1 {
            for n1 in 1..=40 {
                for n2 in 1..=40 {
                    assert_eq!(s.eval(&[n1, n2]).unwrap(), spec.oracle_eval(&[n1, n2]), "{spec:?} at ({n1},{n2})");
                }
            }
        } else {
            let samples = if m == 2 { 400 } else { 120 };
            for _ in 0..samples {
                let ns = tuple40(&mut r, m + 1);
                assert_eq!(s.eval(&ns).unwrap(), spec.oracle_eval(&ns), "{spec:?} at {ns:?}");
            }
        }
    }
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// A number ≤ `cap` built only from `primes` (possibly 1).
fn smooth(r: &mut impl Rng, primes: &[u64], cap: u64) -> u64 {
    let mut n = 1;
    for _ in 0..r.gen_range(0..6) {
        let p = *primes.choose(r).unwrap();
        if n * p <= cap {
            n *= p;
        }
    }
    n
}

pub fn multiplicative_on_coprime_tuples() {
    let mut r = rng(31);
    for _ in 0..500 {
        let m = r.gen_range(0..=2);
        let spec = RandomSpec::generate(&mut r, m, 3, true, true);
        let s = spec.spec();
        let mut primes = PRIMES.to_vec();
        primes.shuffle(&mut r);
        let split = r.gen_range(1..primes.len());
        let (left, right) = primes.split_at(split);
        let a: Vec<u64> = (0..=m).map(|_| smooth(&mut r, left, 100)).collect();
        let b: Vec<u64> = (0..=m).map(|_| smooth(&mut r, right, 100)).collect();
        let ab: Vec<u64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        assert_eq!(s.eval(&ab).unwrap(), s.eval(&a).unwrap() * s.eval(&b).unwrap(), "{spec:?} at {a:?}, {b:?}");
    }
}

/// Tuples in `[1, 100]` biased toward sharing a common factor.
pub fn tuple100(r: &mut impl Rng, len: usize) -> Vec<u64> {
    let base = *[1u64, 2, 4, 6, 8, 12, 16, 24, 36].choose(r).unwrap();
    (0..len).map(|_| base * r.gen_range(1..=100 / base)).collect()
}

fn check(spec: &MultiSumSpec, ns: &[u64], which: Degeneracy) {
    let (lhs, rhs) = degeneracy_check(spec, ns, which).unwrap();
    assert_eq!(lhs, rhs, "{which:?} at {ns:?} for {spec:?}");
}

pub fn recursion_degeneracy() {
    let mut r = rng(32);
    for _ in 0..200 {
        let m = r.gen_range(0..=3);
        let spec = RandomSpec::generate(&mut r, m, 3, false, false).spec();
        let j = r.gen_range(1..=m + 1);
        check(&spec, &tuple100(&mut r, m + 1), Degeneracy::Recursion(j));
    }
}

pub fn unit_slot_degeneracy() {
    let mut r = rng(33);
    for _ in 0..200 {
        let m = r.gen_range(0..=3);
        let spec = RandomSpec::generate(&mut r, m, 3, false, false).spec();
        let j = r.gen_range(1..=m + 1);
        check(&spec, &tuple100(&mut r, m + 1), Degeneracy::UnitSlot(j));
    }
}

pub fn epsilon_slot_degeneracy() {
    let mut r = rng(34);
    for _ in 0..200 {
        let m = r.gen_range(1..=3);
        let spec = RandomSpec::generate(&mut r, m, 3, false, false).spec();
        let j = r.gen_range(1..=m + 1);
        let mut ns = tuple100(&mut r, m + 1);
        if j == 1 {
            ns[1] = ns[0] * r.gen_range(1..=4);
        }
        check(&spec, &ns, Degeneracy::EpsilonSlot(j));
    }
}

pub fn divisible_degeneracy() {
    let mut r = rng(35);
    for _ in 0..200 {
        let m = r.gen_range(0..=3);
        let spec = RandomSpec::generate(&mut r, m, 3, false, false).spec();
        let n1 = r.gen_range(1..=100);
        let ns: Vec<u64> = std::iter::once(n1).chain((0..m).map(|_| n1 * r.gen_range(1..=3))).collect();
        check(&spec, &ns, Degeneracy::Divisible);
    }
}

pub fn diagonal_matches_chain_convolution() {
    let mut r = rng(36);
    for _ in 0..8 {
        let m = r.gen_range(0..=3);
        let spec = RandomSpec::generate(&mut r, m, 3, false, false);
        let s = spec.spec();
        let conv = chain_gamma_convolve(s.fns(), s.gammas()).unwrap();
        for n in 1..=300 {
            assert_eq!(s.eval(&vec![n; m + 1]).unwrap(), conv.eval(n), "{spec:?} at {n}");
        }
        if m <= 2 {
            let diag = from_multisum(&s, 20, None).unwrap().diagonal();
            let expected = embed(&conv, &VarMask::single(1).unwrap(), 1, 20).unwrap();
            assert_eq!(diag.first_difference(&expected).unwrap(), None);
        }
    }
}

pub fn degeneracy_suite() {
    recursion_degeneracy();
    unit_slot_degeneracy();
    epsilon_slot_degeneracy();
    divisible_degeneracy();
    diagonal_matches_chain_convolution();
}
