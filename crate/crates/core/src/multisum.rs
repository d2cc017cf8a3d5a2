//! The multiple Ramanujan sum
//!
//! ```text
//! S^{γ,ξ}_f(n_1..n_{m+1}) = Σ ξ(D_1..D_m) f_1(n_1/D_1) f_2(D_1/D_2) ⋯ f_{m+1}(D_m)
//! ```
//!
//! summed over `D_j = d_j^{γ_j}` dividing `gcd(n_1..n_{j+1})`. A summand
//! vanishes unless `D_m | ⋯ | D_1 | n_1`, so the evaluator walks divisor
//! chains only.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arithfn::{chain_gamma_convolve, dirichlet, pointwise_mul, restrict_gamma, ArithFn, Rat};
use crate::error::{Error, Result};
use crate::nt;

type WeightEval = dyn Fn(&[u64]) -> Rat + Send + Sync;

/// Weight ξ of `arity` variables.
#[derive(Clone)]
pub struct WeightFn {
    arity: usize,
    multiplicative: bool,
    label: String,
    eval: Arc<WeightEval>,
}

impl fmt::Debug for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFn")
            .field("label", &self.label)
            .field("arity", &self.arity)
            .field("multiplicative", &self.multiplicative)
            .finish()
    }
}

impl WeightFn {
    /// Arbitrary weight, no multiplicativity claim.
    pub fn new(
        arity: usize,
        label: impl Into<String>,
        eval: impl Fn(&[u64]) -> Rat + Send + Sync + 'static,
    ) -> Self {
        WeightFn {
            arity,
            multiplicative: false,
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// The constant weight `1_m`.
    pub fn one(arity: usize) -> Self {
        WeightFn {
            arity,
            multiplicative: true,
            label: "1".into(),
            eval: Arc::new(|_| Rat::one()),
        }
    }

    /// Multiplicative weight from its values at `(p^{e_1}, …, p^{e_k})`.
    /// The all-zero exponent vector always maps to 1.
    pub fn multiplicative(
        arity: usize,
        label: impl Into<String>,
        at_prime_powers: impl Fn(u64, &[u32]) -> Rat + Send + Sync + 'static,
    ) -> Self {
        WeightFn {
            arity,
            multiplicative: true,
            label: label.into(),
            eval: Arc::new(move |ds: &[u64]| {
                let facs: Vec<_> = ds
                    .iter()
                    .map(|&d| nt::factorize(d).expect("positive argument"))
                    .collect();
                let mut primes: Vec<u64> = facs.iter().flat_map(|f| f.primes()).collect();
                primes.sort_unstable();
                primes.dedup();
                primes.into_iter().fold(Rat::one(), |acc, p| {
                    let exps: Vec<u32> = facs.iter().map(|f| f.ord(p)).collect();
                    acc * at_prime_powers(p, &exps)
                })
            }),
        }
    }

    /// `ξ(d_1..d_k) = g_1(d_1) ⋯ g_k(d_k)`; multiplicative when every factor is.
    pub fn product(fns: Vec<ArithFn>) -> Self {
        let label = fns.iter().map(|f| f.label().to_string()).collect::<Vec<_>>().join("⊗");
        WeightFn {
            arity: fns.len(),
            multiplicative: fns.iter().all(ArithFn::is_multiplicative),
            label,
            eval: Arc::new(move |ds: &[u64]| {
                fns.iter()
                    .zip(ds)
                    .fold(Rat::one(), |acc, (f, &d)| acc * f.eval(d))
            }),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, ds: &[u64]) -> Rat {
        assert_eq!(ds.len(), self.arity, "weight arity");
        (self.eval)(ds)
    }
}

/// The data `(γ, f, ξ)` defining `S^{γ,ξ}_f`; `m = γ.len()`.
#[derive(Clone, Debug)]
pub struct MultiSumSpec {
    gammas: Vec<u32>,
    fns: Vec<ArithFn>,
    weight: Option<WeightFn>,
}

impl MultiSumSpec {
    pub fn new(gammas: Vec<u32>, fns: Vec<ArithFn>) -> Result<Self> {
        if fns.len() != gammas.len() + 1 {
            return Err(Error::Arity {
                context: "multiple sum functions",
                expected: gammas.len() + 1,
                found: fns.len(),
            });
        }
        if gammas.contains(&0) {
            return Err(Error::NonPositive { what: "gamma" });
        }
        Ok(MultiSumSpec {
            gammas,
            fns,
            weight: None,
        })
    }

    /// All exponents equal to 1.
    pub fn unit(fns: Vec<ArithFn>) -> Result<Self> {
        if fns.is_empty() {
            return Err(Error::Empty { what: "function vector" });
        }
        Self::new(vec![1; fns.len() - 1], fns)
    }

    pub fn with_weight(mut self, weight: WeightFn) -> Result<Self> {
        if weight.arity() != self.m() {
            return Err(Error::Arity {
                context: "weight",
                expected: self.m(),
                found: weight.arity(),
            });
        }
        self.weight = Some(weight);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[u32] {
        &self.gammas
    }

    pub fn fns(&self) -> &[ArithFn] {
        &self.fns
    }

    pub fn weight(&self) -> Option<&WeightFn> {
        self.weight.as_ref()
    }

    fn check_args(&self, ns: &[u64]) -> Result<()> {
        if ns.len() != self.m() + 1 {
            return Err(Error::Arity {
                context: "multiple sum arguments",
                expected: self.m() + 1,
                found: ns.len(),
            });
        }
        if ns.contains(&0) {
            return Err(Error::NonPositive { what: "argument" });
        }
        Ok(())
    }

    /// Direct evaluation by walking divisor chains.
    pub fn eval(&self, ns: &[u64]) -> Result<Rat> {
        self.check_args(ns)?;
        let m = self.m();
        if m == 0 {
            return Ok(self.fns[0].eval(ns[0]));
        }
        // bounds[j] = gcd(n_1..n_{j+2}) constrains D_{j+1}
        let mut bounds = Vec::with_capacity(m);
        let mut g = ns[0];
        for &n in &ns[1..] {
            g = g.gcd(&n);
            bounds.push(g);
        }
        let mut chain = Vec::with_capacity(m);
        Ok(self.walk(0, ns[0], &bounds, &mut chain))
    }

    fn walk(&self, j: usize, prev: u64, bounds: &[u64], chain: &mut Vec<u64>) -> Rat {
        let m = self.m();
        if j == m {
            let last = self.fns[m].eval(prev);
            if last.is_zero() {
                return last;
            }
            return match &self.weight {
                Some(w) => w.eval(chain) * last,
                None => last,
            };
        }
        let mut total = Rat::zero();
        for big_d in nt::power_divisors(prev.gcd(&bounds[j]), self.gammas[j]) {
            let head = self.fns[j].eval(prev / big_d);
            if head.is_zero() {
                continue;
            }
            chain.push(big_d);
            let tail = self.walk(j + 1, big_d, bounds, chain);
            chain.pop();
            if !tail.is_zero() {
                total += head * tail;
            }
        }
        total
    }

    /// Evaluation as a product of prime-power values. Requires every
    /// function (and the weight, if any) to be flagged multiplicative.
    pub fn eval_euler(&self, ns: &[u64]) -> Result<Rat> {
        self.check_args(ns)?;
        if let Some(f) = self.fns.iter().find(|f| !f.is_multiplicative()) {
            return Err(Error::NotMultiplicative(f.label().to_string()));
        }
        if let Some(w) = self.weight.as_ref().filter(|w| !w.is_multiplicative()) {
            return Err(Error::NotMultiplicative(format!("weight {}", w.label())));
        }
        let facs = ns
            .iter()
            .map(|&n| nt::factorize(n))
            .collect::<Result<Vec<_>>>()?;
        let mut primes: Vec<u64> = facs.iter().flat_map(|f| f.primes()).collect();
        primes.sort_unstable();
        primes.dedup();
        let mut total = Rat::one();
        for p in primes {
            let local: Vec<u64> = facs.iter().map(|f| p.pow(f.ord(p))).collect();
            total *= self.eval(&local)?;
            if total.is_zero() {
                break;
            }
        }
        Ok(total)
    }

    /// Evaluate over many argument tuples in parallel; output order follows input.
    pub fn eval_many(&self, tuples: &[Vec<u64>]) -> Result<Vec<Rat>> {
        tuples.par_iter().map(|ns| self.eval(ns)).collect()
    }
}

/// `σ^γ_a`: the spec with `f_j = δ^{a_0+⋯+a_{j-1}}`, `a_0 = 0`.
pub fn sigma_spec(gammas: &[u32], exponents: &[i64]) -> Result<MultiSumSpec> {
    if exponents.len() != gammas.len() {
        return Err(Error::Arity {
            context: "divisor function exponents",
            expected: gammas.len(),
            found: exponents.len(),
        });
    }
    let mut partial = 0i64;
    let mut fns = vec![ArithFn::power(0)];
    for &a in exponents {
        partial += a;
        fns.push(ArithFn::power(partial));
    }
    MultiSumSpec::new(gammas.to_vec(), fns)
}

/// The multiple divisor function `σ^γ_a(n_1..n_{m+1})`.
pub fn sigma_multi(gammas: &[u32], exponents: &[i64], ns: &[u64]) -> Result<Rat> {
    sigma_spec(gammas, exponents)?.eval(ns)
}

/// Spec of `c^a_{m+1,k}`: `k` copies of μ followed by `δ^{a_1}, …, δ^{a_{m+1-k}}`.
pub fn gen_ramanujan_spec(m: usize, k: usize, exponents: &[i64]) -> Result<MultiSumSpec> {
    if k > m + 1 {
        return Err(Error::Precondition(format!("k = {k} exceeds m + 1 = {}", m + 1)));
    }
    if exponents.len() != m + 1 - k {
        return Err(Error::Arity {
            context: "generalized Ramanujan exponents",
            expected: m + 1 - k,
            found: exponents.len(),
        });
    }
    let fns = std::iter::repeat_with(ArithFn::mobius)
        .take(k)
        .chain(exponents.iter().map(|&a| ArithFn::power(a)))
        .collect();
    MultiSumSpec::unit(fns)
}

pub fn gen_ramanujan(m: usize, k: usize, exponents: &[i64], ns: &[u64]) -> Result<Rat> {
    gen_ramanujan_spec(m, k, exponents)?.eval(ns)
}

/// Spec with `S_f = f∘gcd` on `arity` variables:
/// `f_1 = δ⁰`, `f_2 = ⋯ = f_m = ε`, `f_{m+1} = f*μ`.
pub fn f_of_gcd_spec(f: &ArithFn, arity: usize) -> Result<MultiSumSpec> {
    match arity {
        0 => Err(Error::Empty { what: "argument list" }),
        1 => MultiSumSpec::unit(vec![f.clone()]),
        _ => {
            let mut fns = vec![ArithFn::one()];
            fns.extend(std::iter::repeat_with(ArithFn::epsilon).take(arity - 2));
            fns.push(dirichlet(f, &ArithFn::mobius()));
            MultiSumSpec::unit(fns)
        }
    }
}

/// `f(gcd(ns))` computed directly and through its multiple-sum form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdPaths {
    pub direct: Rat,
    pub via_sum: Rat,
}

pub fn f_of_gcd(f: &ArithFn, ns: &[u64]) -> Result<GcdPaths> {
    let g = nt::gcd_many(ns)?;
    Ok(GcdPaths {
        direct: f.eval(g),
        via_sum: f_of_gcd_spec(f, ns.len())?.eval(ns)?,
    })
}

/// The elementary degeneracies of the multiple sum (indices 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Splitting at slot `j` into an outer sum whose last function is an inner sum.
    Recursion(usize),
    /// Argument `n_j = 1`.
    UnitSlot(usize),
    /// `f_j = ε`, merging `n_j` and `n_{j+1}` through their gcd.
    EpsilonSlot(usize),
    /// `n_1 | n_j` for all `j`: reduces to the γ-convolution at `n_1`.
    Divisible,
}

/// Both sides of a degeneracy identity, `(lhs, rhs)`.
pub fn degeneracy_check(spec: &MultiSumSpec, ns: &[u64], which: Degeneracy) -> Result<(Rat, Rat)> {
    spec.check_args(ns)?;
    if spec.weight.is_some() {
        return Err(Error::Precondition("degeneracies are stated for unweighted sums".into()));
    }
    let m = spec.m();
    let g = &spec.gammas;
    let f = &spec.fns;
    let slot = |j: usize, hi: usize| -> Result<()> {
        if (1..=hi).contains(&j) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("slot {j} outside 1..={hi}")))
        }
    };
    match which {
        Degeneracy::Recursion(j) => {
            slot(j, m + 1)?;
            let inner = MultiSumSpec::new(g[j - 1..].to_vec(), f[j - 1..].to_vec())?;
            let tail: Vec<u64> = ns[j..].to_vec();
            let inner_fn = ArithFn::new(format!("S[{j}..]"), move |x| {
                let mut args = Vec::with_capacity(tail.len() + 1);
                args.push(x);
                args.extend_from_slice(&tail);
                inner.eval(&args).expect("arity fixed at construction")
            });
            let mut outer_fns = f[..j - 1].to_vec();
            outer_fns.push(inner_fn);
            let outer = MultiSumSpec::new(g[..j - 1].to_vec(), outer_fns)?;
            Ok((spec.eval(ns)?, outer.eval(&ns[..j])?))
        }
        Degeneracy::UnitSlot(j) => {
            slot(j, m + 1)?;
            let mut args = ns.to_vec();
            args[j - 1] = 1;
            let units = f[j - 1..].iter().fold(Rat::one(), |acc, h| acc * h.eval(1));
            let prefix = if j == 1 {
                Rat::one()
            } else {
                MultiSumSpec::new(g[..j - 2].to_vec(), f[..j - 1].to_vec())?.eval(&ns[..j - 1])?
            };
            Ok((spec.eval(&args)?, units * prefix))
        }
        Degeneracy::EpsilonSlot(j) => {
            slot(j, m + 1)?;
            if m == 0 {
                return Err(Error::Precondition("no slot to collapse when m = 0".into()));
            }
            let mut lhs_fns = f.to_vec();
            lhs_fns[j - 1] = ArithFn::epsilon();
            let lhs = MultiSumSpec::new(g.to_vec(), lhs_fns)?.eval(ns)?;
            let mut rest_fns = f.to_vec();
            rest_fns.remove(j - 1);
            let rhs = if j == m + 1 {
                MultiSumSpec::new(g[..m - 1].to_vec(), rest_fns)?.eval(&ns[..m])?
            } else if j == 1 {
                if ns[1] % ns[0] != 0 {
                    return Err(Error::Precondition("slot 1 requires n_1 | n_2".into()));
                }
                let mut args = vec![ns[0]];
                args.extend_from_slice(&ns[2..]);
                let indicator = if nt::is_gamma_power(ns[0], g[0]) { Rat::one() } else { Rat::zero() };
                indicator * MultiSumSpec::new(g[1..].to_vec(), rest_fns)?.eval(&args)?
            } else {
                // the merged divisor must be a power of both γ_{j-1} and γ_j
                let mut gs = g.to_vec();
                gs[j - 2] = gs[j - 2].lcm(&gs[j - 1]);
                gs.remove(j - 1);
                let mut args = ns[..j - 1].to_vec();
                args.push(ns[j - 1].gcd(&ns[j]));
                args.extend_from_slice(&ns[j + 1..]);
                MultiSumSpec::new(gs, rest_fns)?.eval(&args)?
            };
            Ok((lhs, rhs))
        }
        Degeneracy::Divisible => {
            if let Some(&n) = ns[1..].iter().find(|&&n| n % ns[0] != 0) {
                return Err(Error::Precondition(format!("n_1 = {} does not divide {n}", ns[0])));
            }
            let conv = chain_gamma_convolve(f, g)?;
            Ok((spec.eval(ns)?, conv.eval(ns[0])))
        }
    }
}

/// Transposed data `(ᵗf̃, ᵗξ^γ_{n_1})` with all exponents 1:
/// `ᵗf̃ = (δ⁰f_{m+1}, δ¹f_m, …, δ^m f_1)` and
/// `ᵗξ^γ_{n_1}(d) = Π_j a_{γ_j}(n_1/d_{m+1-j}) · ξ(n_1/d_m, …, n_1/d_1)`.
pub fn transpose_data(spec: &MultiSumSpec, n1: u64) -> Result<MultiSumSpec> {
    if n1 == 0 {
        return Err(Error::NonPositive { what: "n_1" });
    }
    let m = spec.m();
    let fns = (0..=m)
        .map(|j| twist(&spec.fns[m - j], j as i64))
        .collect();
    let gammas = spec.gammas.clone();
    let xi = spec.weight.clone();
    let weight = WeightFn::new(m, format!("t-weight[{n1}]"), move |ds: &[u64]| {
        if ds.iter().any(|&d| n1 % d != 0) {
            return Rat::zero();
        }
        let powers = (1..=m).all(|j| nt::is_gamma_power(n1 / ds[m - j], gammas[j - 1]));
        if !powers {
            return Rat::zero();
        }
        match &xi {
            Some(w) => w.eval(&ds.iter().rev().map(|&d| n1 / d).collect::<Vec<_>>()),
            None => Rat::one(),
        }
    });
    MultiSumSpec::new(vec![1; m], fns)?.with_weight(weight)
}

/// For `1 | γ_1 | ⋯ | γ_m`: the same transposed sum with the restrictions
/// moved into the functions, `(δ⁰f_{m+1}^{[γ_m]}, …, δ^m f_1^{[γ_0]})`, and
/// the plain reversed weight `ξ(n_1/d_m, …, n_1/d_1)`.
pub fn transpose_data_restricted(spec: &MultiSumSpec, n1: u64) -> Result<MultiSumSpec> {
    if n1 == 0 {
        return Err(Error::NonPositive { what: "n_1" });
    }
    check_chain(1, &spec.gammas)?;
    let m = spec.m();
    let fns = (0..=m)
        .map(|j| {
            let idx = m - j;
            let gamma = if idx == 0 { 1 } else { spec.gammas[idx - 1] };
            Ok(twist(&restrict_gamma(&spec.fns[idx], gamma)?, j as i64))
        })
        .collect::<Result<Vec<_>>>()?;
    let xi = spec.weight.clone();
    let weight = WeightFn::new(m, format!("t-weight1[{n1}]"), move |ds: &[u64]| {
        if ds.iter().any(|&d| n1 % d != 0) {
            return Rat::zero();
        }
        match &xi {
            Some(w) => w.eval(&ds.iter().rev().map(|&d| n1 / d).collect::<Vec<_>>()),
            None => Rat::one(),
        }
    });
    MultiSumSpec::new(vec![1; m], fns)?.with_weight(weight)
}

/// `δ^a f`.
fn twist(f: &ArithFn, a: i64) -> ArithFn {
    if a == 0 {
        f.clone()
    } else {
        pointwise_mul(&ArithFn::power(a), f)
    }
}

/// Checks `base | γ_1 | γ_2 | ⋯`.
pub fn check_chain(base: u32, gammas: &[u32]) -> Result<()> {
    let mut prev = base;
    for &g in gammas {
        if prev == 0 || g % prev != 0 {
            let mut all = vec![base];
            all.extend_from_slice(gammas);
            return Err(Error::ChainViolated(all));
        }
        prev = g;
    }
    Ok(())
}
