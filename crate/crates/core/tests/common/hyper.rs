//! Checks of the hyperdeterminant, its lemmas and the Smith-type evaluations.

use std::collections::BTreeMap;

use multiram::arithfn::{rat, rat_frac, ArithFn};
use multiram::fourier::{ramanujan_c, EvenCoeffTable};
use multiram::hyperdet::*;
use multiram::multisum::{f_of_gcd_spec, MultiSumSpec, WeightFn};
use multiram::{nt, Rat};
use multiram_oracle as oracle;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{rng, Kind};

pub fn random_matrix(r: &mut impl Rng, dim: usize, order: usize) -> Hypermatrix {
    let total = order.pow(dim as u32);
    let entries = (0..total).map(|_| rat_frac(r.gen_range(-5..=5), r.gen_range(1..=3))).collect();
    Hypermatrix::new(dim, order, entries).unwrap()
}

pub fn oracle_det(a: &Hypermatrix, sig: &Signature) -> Rat {
    let members: Vec<usize> = sig.members().collect();
    let entry = |idx: &[usize]| {
        let one_based: Vec<usize> = idx.iter().map(|i| i + 1).collect();
        a.get(&one_based).clone()
    };
    oracle::hyperdet(a.dim(), a.order(), &entry, &members)
}

pub fn subsets(k: usize) -> Vec<Signature> {
    (0..1usize << k)
        .map(|bits| Signature::new((1..=k).filter(|j| bits >> (j - 1) & 1 == 1)).unwrap())
        .collect()
}

pub fn random_perm(r: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(r);
    p
}

pub fn fast_path_matches_full_definition() {
    let mut r = rng(71);
    for dim in 1..=3 {
        for order in 1..=3 {
            for _ in 0..4 {
                let a = random_matrix(&mut r, dim, order);
                for sig in subsets(dim) {
                    assert_eq!(hyperdet(&a, &sig).unwrap(), oracle_det(&a, &sig), "k={dim} n={order} I={sig:?}");
                }
            }
        }
    }
}

pub fn odd_signatures_vanish() {
    let mut r = rng(72);
    for _ in 0..30 {
        let dim = r.gen_range(1..=4);
        let order = r.gen_range(2..=3);
        let a = random_matrix(&mut r, dim, order);
        for sig in subsets(dim).into_iter().filter(|s| s.len() % 2 == 1) {
            assert_eq!(hyperdet(&a, &sig).unwrap(), rat(0));
        }
    }
    // order 1 has no sign cancellation: every signature gives the entry
    let a = Hypermatrix::new(3, 1, vec![rat(7)]).unwrap();
    for sig in subsets(3) {
        assert_eq!(hyperdet(&a, &sig).unwrap(), rat(7));
    }
}

pub fn two_dimensional_case_is_the_determinant() {
    let mut r = rng(73);
    for _ in 0..100 {
        let a = random_matrix(&mut r, 2, 4);
        let rows: Vec<Vec<Rat>> = a.entries().chunks(4).map(|c| c.to_vec()).collect();
        let expected = oracle::leibniz_det(&rows);
        assert_eq!(hyperdet(&a, &Signature::full(2)).unwrap(), expected);
        assert_eq!(determinant(&a).unwrap(), expected);
    }
}

pub fn permutation_lemmas() {
    let mut r = rng(74);
    for _ in 0..40 {
        let dim = r.gen_range(2..=3);
        let order = r.gen_range(1..=3);
        let a = random_matrix(&mut r, dim, order);
        let pi_order = random_perm(&mut r, order);
        let pi_axes = random_perm(&mut r, dim);
        let b = permute_order(&a, &pi_order).unwrap();
        let c = permute_axes(&a, &pi_axes).unwrap();
        for sig in subsets(dim) {
            assert_eq!(hyperdet(&b, &sig).unwrap(), hyperdet(&a, &sig).unwrap());
            let pulled = sig.preimage(&pi_axes).unwrap();
            assert_eq!(hyperdet(&c, &sig).unwrap(), hyperdet(&a, &pulled).unwrap(), "π={pi_axes:?} I={sig:?}");
        }
    }
}

pub fn product_lemma() {
    let mut r = rng(75);
    for (k, l) in [(2, 2), (3, 2), (2, 3)] {
        for _ in 0..15 {
            let order = r.gen_range(1..=3);
            let a = random_matrix(&mut r, k, order);
            let b = random_matrix(&mut r, l, order);
            let ab = cayley_product(&a, &b).unwrap();
            for ks in subsets(k - 1).into_iter().filter(|s| s.len() % 2 == 1) {
                for ls in subsets(l).into_iter().filter(|s| !s.contains(1) && s.len() % 2 == 1) {
                    let sig_a = Signature::new(ks.members().chain([k])).unwrap();
                    let sig_b = Signature::new(ls.members().chain([1])).unwrap();
                    let sig_ab = Signature::new(ks.members().chain(ls.members().map(|j| k + j - 2))).unwrap();
                    assert_eq!(
                        hyperdet(&ab, &sig_ab).unwrap(),
                        hyperdet(&a, &sig_a).unwrap() * hyperdet(&b, &sig_b).unwrap(),
                        "k={k} l={l} K={ks:?} L={ls:?}"
                    );
                }
            }
        }
    }
}

pub fn all_factor_closed(max: u64) -> Vec<FactorClosedSet> {
    (1u32..1 << max)
        .map(|bits| (1..=max).filter(|x| bits >> (x - 1) & 1 == 1).collect::<Vec<_>>())
        .filter(|xs| is_factor_closed(xs))
        .map(|xs| FactorClosedSet::new(&xs).unwrap())
        .collect()
}

pub fn smith_determinants_over_all_small_sets() {
    let sets = all_factor_closed(12);
    assert!(sets.len() > 100);
    let c_spec = MultiSumSpec::unit(vec![ArithFn::mobius(), ArithFn::power(1)]).unwrap();
    let gcd_spec = f_of_gcd_spec(&ArithFn::power(1), 2).unwrap();
    for set in &sets {
        let xs = set.elements();
        let n = xs.len();
        let c = Hypermatrix::from_fn(2, n, |i| rat(oracle::ramanujan_c(xs[i[0] - 1], xs[i[1] - 1]))).unwrap();
        assert_eq!(determinant(&c).unwrap(), set.product(), "{xs:?}");
        let g = Hypermatrix::from_fn(2, n, |i| rat(oracle::gcd(xs[i[0] - 1], xs[i[1] - 1]) as i64)).unwrap();
        let phis = xs.iter().fold(rat(1), |acc, &x| acc * rat(oracle::phi(x) as i64));
        assert_eq!(determinant(&g).unwrap(), phis, "{xs:?}");
        assert_eq!(totient_product(set).unwrap(), phis);

        let (lhs, rhs) = smith_hyperdet_check(&c_spec, set, &Signature::smith(1)).unwrap();
        assert_eq!((&lhs, &rhs), (&set.product(), &set.product()));
        let (lhs, rhs) = smith_hyperdet_check(&gcd_spec, set, &Signature::smith(1)).unwrap();
        assert_eq!((&lhs, &rhs), (&phis, &phis));
    }
}

pub fn smith_corollary_random_specs() {
    let mut r = rng(78);
    let pool = [Kind::Mu, Kind::Eps, Kind::One, Kind::Id, Kind::Phi];
    let sets: Vec<FactorClosedSet> = all_factor_closed(12).into_iter().filter(|s| s.len() <= 4).collect();
    for i in 0..50 {
        let m = 1 + i % 2;
        let gammas: Vec<u32> = (0..m).map(|_| r.gen_range(1..=3)).collect();
        let fns: Vec<ArithFn> = (0..=m).map(|_| pool.choose(&mut r).unwrap().arith()).collect();
        let mut spec = MultiSumSpec::new(gammas, fns).unwrap();
        if r.gen_bool(0.5) {
            let sample = Kind::Mult(r.gen());
            let weight = WeightFn::multiplicative(m, "sample", move |p, es| {
                es.iter().fold(rat(1), |acc, &e| acc * sample.arith().eval(p.pow(e)))
            });
            spec = spec.with_weight(weight).unwrap();
        }
        for _ in 0..6 {
            let set = sets.choose(&mut r).unwrap();
            let (lhs, rhs) = smith_hyperdet_check(&spec, set, &Signature::smith(m)).unwrap();
            assert_eq!(lhs, rhs, "{spec:?} on {:?}", set.elements());
        }
    }
}

/// Random even functions `F(r; ·)` for each modulus `r ≤ 12`, built from
/// random coefficient tables.
pub struct RandomEvenFamily {
    tables: BTreeMap<u64, EvenCoeffTable>,
}

impl RandomEvenFamily {
    pub fn new(r: &mut impl Rng, arity: usize) -> Self {
        let tables = (1..=12)
            .map(|modulus| {
                let divs = nt::divisors(modulus).unwrap();
                let mut keys = vec![vec![]];
                for _ in 0..arity {
                    keys = keys
                        .into_iter()
                        .flat_map(|k: Vec<u64>| divs.iter().map(move |&d| [k.clone(), vec![d]].concat()))
                        .collect();
                }
                let coeffs = keys.into_iter().map(|k| (k, rat_frac(r.gen_range(-6..=6), r.gen_range(1..=4)))).collect();
                (modulus, EvenCoeffTable::from_coeffs(vec![modulus], vec![arity], coeffs).unwrap())
            })
            .collect();
        RandomEvenFamily { tables }
    }

    pub fn eval(&self, moduli: &[u64], ns: &[u64]) -> Rat {
        self.tables[&moduli[0]].reconstruct(ns).unwrap()
    }
}

pub fn even_function_determinants() {
    let c_family = |r: &[u64], n: &[u64]| n.iter().fold(rat(1), |acc, &x| acc * rat(ramanujan_c(r[0], x).unwrap()));
    let set = FactorClosedSet::new(&[1, 2, 3]).unwrap();
    let (lhs, rhs) = even_hyperdet_check(c_family, &[1], &set, &Signature::full(2)).unwrap();
    assert_eq!((lhs, rhs), (rat(6), rat(6)));
    let pair = FactorClosedSet::new(&[1, 2]).unwrap();
    let (lhs, rhs) = even_hyperdet_check(c_family, &[2], &pair, &Signature::new([2, 3]).unwrap()).unwrap();
    assert_eq!(lhs, rhs);

    let mut r = rng(79);
    let sets: Vec<FactorClosedSet> = all_factor_closed(12).into_iter().filter(|s| s.len() <= 4).collect();
    for ks in [1usize, 2] {
        for _ in 0..15 {
            let family = RandomEvenFamily::new(&mut r, ks);
            let sig = if ks == 1 { Signature::full(2) } else { Signature::new([2, 3]).unwrap() };
            for set in sets.choose_multiple(&mut r, 4) {
                let (lhs, rhs) = even_hyperdet_check(|m, n| family.eval(m, n), &[ks], set, &sig).unwrap();
                assert_eq!(lhs, rhs, "k = {ks} on {:?}", set.elements());
            }
        }
    }
    assert!(even_hyperdet_check(c_family, &[1], &set, &Signature::new([1]).unwrap()).is_err());
    assert!(even_hyperdet_check(c_family, &[2], &set, &Signature::new([1, 2]).unwrap()).is_err());
}

pub fn core_suite() {
    fast_path_matches_full_definition();
    odd_signatures_vanish();
    two_dimensional_case_is_the_determinant();
    permutation_lemmas();
    product_lemma();
}

pub fn smith_suite() {
    smith_determinants_over_all_small_sets();
    smith_corollary_random_specs();
    even_function_determinants();
}
