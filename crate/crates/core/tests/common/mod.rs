#![allow(dead_code)]

pub mod coeffs;
pub mod hyper;
pub mod series;
pub mod sums;

use multiram::arithfn::{rat, ArithFn};
use multiram::multisum::{MultiSumSpec, WeightFn};
use multiram::Rat;
use multiram_oracle as oracle;
use oracle::Q;
use rand::Rng;

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut x = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    x ^= x >> 31;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x
}

fn small(seed: u64, a: u64, b: u64, span: i64) -> i64 {
    (mix(seed, a, b) % (2 * span as u64 + 1)) as i64 - span
}

fn key(ds: &[u64]) -> u64 {
    ds.iter().fold(0u64, |acc, &d| acc.wrapping_mul(1_000_003).wrapping_add(d))
}

/// Function kinds with a library form and an independently computed oracle form.
#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Mu,
    Eps,
    One,
    Id,
    Phi,
    Square,
    /// Multiplicative with pseudo-random prime-power values in [-2, 2].
    Mult(u64),
    /// Arbitrary pseudo-random values in [-3, 3].
    Hash(u64),
}

impl Kind {
    pub fn arith(self) -> ArithFn {
        match self {
            Kind::Mu => ArithFn::mobius(),
            Kind::Eps => ArithFn::epsilon(),
            Kind::One => ArithFn::one(),
            Kind::Id => ArithFn::power(1),
            Kind::Phi => ArithFn::phi(),
            Kind::Square => ArithFn::a_gamma(2).unwrap(),
            Kind::Mult(s) => ArithFn::multiplicative(format!("mult{s}"), move |p, e| rat(small(s, p, e as u64, 2))),
            Kind::Hash(s) => ArithFn::new(format!("hash{s}"), move |n| rat(small(s, n, 0, 3))),
        }
    }

    pub fn oracle(self, n: u64) -> Q {
        match self {
            Kind::Mu => oracle::q(oracle::mobius(n)),
            Kind::Eps => oracle::q((n == 1) as i64),
            Kind::One => oracle::q(1),
            Kind::Id => oracle::q(n as i64),
            Kind::Phi => oracle::q(oracle::phi(n) as i64),
            Kind::Square => oracle::q(oracle::is_power(n, 2) as i64),
            Kind::Mult(s) => oracle::factor(n)
                .into_iter()
                .fold(oracle::q(1), |acc, (p, e)| acc * oracle::q(small(s, p, e as u64, 2))),
            Kind::Hash(s) => oracle::q(small(s, n, 0, 3)),
        }
    }

    pub fn is_multiplicative(self) -> bool {
        !matches!(self, Kind::Hash(_))
    }
}

pub fn random_kind<R: Rng>(rng: &mut R, multiplicative_only: bool) -> Kind {
    let top = if multiplicative_only { 7 } else { 8 };
    match rng.gen_range(0..top) {
        0 => Kind::Mu,
        1 => Kind::Eps,
        2 => Kind::One,
        3 => Kind::Id,
        4 => Kind::Phi,
        5 => Kind::Square,
        6 => Kind::Mult(rng.gen()),
        _ => Kind::Hash(rng.gen()),
    }
}

/// A weight `ξ(d) = Π g_i(d_i)` (multiplicative when every `g_i` is) or an
/// arbitrary hashed weight.
#[derive(Debug, Clone)]
pub enum Weight {
    Product(Vec<Kind>),
    Hash(u64),
}

impl Weight {
    pub fn weight_fn(&self, arity: usize) -> WeightFn {
        match self {
            Weight::Product(ks) => WeightFn::product(ks.iter().map(|k| k.arith()).collect()),
            Weight::Hash(s) => {
                let s = *s;
                WeightFn::new(arity, format!("whash{s}"), move |ds| rat(small(s, key(ds), 1, 2)))
            }
        }
    }

    pub fn oracle(&self, ds: &[u64]) -> Q {
        match self {
            Weight::Product(ks) => ks.iter().zip(ds).fold(oracle::q(1), |acc, (k, &d)| acc * k.oracle(d)),
            Weight::Hash(s) => oracle::q(small(*s, key(ds), 1, 2)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub gammas: Vec<u32>,
    pub kinds: Vec<Kind>,
    pub weight: Option<Weight>,
}

impl RandomSpec {
    pub fn generate<R: Rng>(rng: &mut R, m: usize, max_gamma: u32, multiplicative_only: bool, weighted: bool) -> Self {
        let gammas = (0..m).map(|_| rng.gen_range(1..=max_gamma)).collect();
        let kinds = (0..=m).map(|_| random_kind(rng, multiplicative_only)).collect();
        let weight = (weighted && m > 0 && rng.gen_bool(0.5)).then(|| {
            if multiplicative_only || rng.gen_bool(0.5) {
                Weight::Product((0..m).map(|_| random_kind(rng, true)).collect())
            } else {
                Weight::Hash(rng.gen())
            }
        });
        RandomSpec { gammas, kinds, weight }
    }

    pub fn spec(&self) -> MultiSumSpec {
        let s = MultiSumSpec::new(self.gammas.clone(), self.kinds.iter().map(|k| k.arith()).collect()).unwrap();
        match &self.weight {
            Some(w) => s.with_weight(w.weight_fn(self.gammas.len())).unwrap(),
            None => s,
        }
    }

    pub fn oracle_eval(&self, ns: &[u64]) -> Q {
        let fns: Vec<Box<dyn Fn(u64) -> Q>> = self
            .kinds
            .iter()
            .map(|&k| Box::new(move |n| k.oracle(n)) as Box<dyn Fn(u64) -> Q>)
            .collect();
        let refs: Vec<&dyn Fn(u64) -> Q> = fns.iter().map(|b| b.as_ref()).collect();
        match &self.weight {
            Some(w) => {
                let wf = |ds: &[u64]| w.oracle(ds);
                oracle::multisum(&self.gammas, &refs, Some(&wf), ns)
            }
            None => oracle::multisum(&self.gammas, &refs, None, ns),
        }
    }
}

/// Library and oracle share the representation, so values compare directly.
pub fn same(a: &Rat, b: &Q) -> bool {
    a == b
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Acceptance criteria checked by the library suites, each as (number,
/// description, check). A check panics on failure.
pub const CRITERIA: &[(u32, &str, fn())] = &[
    (1, "Ramanujan sum divisor form vs exponential sum, k, n <= 100", sums::ramanujan_sum_forms_agree),
    (2, "multiple sum vs brute-force enumeration, m in 1..=3, n_i <= 40, 50 specs", sums::multiple_sums_match_brute_force),
    (3, "multiplicativity on 500 coprime tuple pairs", sums::multiplicative_on_coprime_tuples),
    (4, "degeneracies on 200 instances each, diagonal vs chained convolution", sums::degeneracy_suite),
    (5, "closed-form Fourier coefficients on 100 specs, transposed restriction on 50", coeffs::fourier_suite),
    (6, "interval sum of c closed form for all n <= 60", coeffs::closed_form_matches_enumeration),
    (7, "Dirichlet series identities with mutation detection", series::dirichlet_suite),
    (8, "hyperdeterminant reduction, parity, lemmas and fast path", hyper::core_suite),
    (9, "Smith determinants, random-spec corollary and even-function families", hyper::smith_suite),
];
