//! Formal truncated multivariable Dirichlet series.
//!
//! A series `Σ F(n_1..n_v) n_1^{-s_1} ⋯ n_v^{-s_v}` is stored as its
//! coefficient tensor on `[1, N]^v`. Products of series are componentwise
//! Dirichlet products of tensors; since every index is at least 1, the
//! coefficients of a product at indices `≤ N` are exact.
//!
//! The exponent structure survives only through [`VarMask`]: a
//! single-variable series in `s_{i_1} + ⋯ + s_{i_j}` is embedded on the
//! mask diagonal. Shifts `s - a` are absorbed into coefficients (`ζ(s - a)`
//! is the embedding of `δ^a`), and `L(2s; f)` puts `f(n)` at `n²`.
//! Identities with a denominator are compared after clearing it.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arithfn::{
    chain_gamma_convolve, dirichlet, pointwise_mul, rat_pow, restrict_gamma, ArithFn, Rat,
};
use crate::error::{Error, Result};
use crate::multisum::{check_chain, f_of_gcd_spec, gen_ramanujan_spec, sigma_multi, MultiSumSpec};
use crate::nt;

/// Default ceiling on the number of coefficient slots [`from_multisum`] fills.
pub const DEFAULT_SLOT_LIMIT: u128 = 1_000_000;

/// Nonempty set of 1-based variable positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMask(Vec<usize>);

impl VarMask {
    pub fn new(positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = positions.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::Empty { what: "variable mask" });
        }
        if v[0] == 0 {
            return Err(Error::NonPositive { what: "mask position" });
        }
        Ok(VarMask(v))
    }

    pub fn single(j: usize) -> Result<Self> {
        Self::new([j])
    }

    /// `{1..j}`: the exponent `s_1 + ⋯ + s_j`.
    pub fn prefix(j: usize) -> Result<Self> {
        Self::new(1..=j)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&(i + 1)).is_ok()
    }
}

/// Coefficient tensor of a truncated Dirichlet series in `arity` variables.
/// Index `(n_1..n_v)` lives at offset `Σ (n_i - 1) N^{v-1-i}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedMDS {
    arity: usize,
    bound: u64,
    coeffs: Vec<Rat>,
}

impl fmt::Debug for TruncatedMDS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        write!(f, "TruncatedMDS(arity={}, N={}, nonzero={})", self.arity, self.bound, nonzero)
    }
}

impl TruncatedMDS {
    pub fn zeros(arity: usize, bound: u64) -> Result<Self> {
        let len = slot_count(arity, bound)?;
        Ok(TruncatedMDS {
            arity,
            bound,
            coeffs: vec![Rat::zero(); len],
        })
    }

    /// Tensor with coefficient `func(n)` at every index.
    pub fn from_fn<F>(arity: usize, bound: u64, func: F) -> Result<Self>
    where
        F: Fn(&[u64]) -> Result<Rat> + Sync,
    {
        let len = slot_count(arity, bound)?;
        let coeffs = (0..len)
            .into_par_iter()
            .map(|off| func(&decode(off, arity, bound)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedMDS { arity, bound, coeffs })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    fn offset(&self, idx: &[u64]) -> Option<usize> {
        if idx.len() != self.arity || idx.iter().any(|&n| n == 0 || n > self.bound) {
            return None;
        }
        Some(idx.iter().fold(0usize, |acc, &n| acc * self.bound as usize + (n - 1) as usize))
    }

    /// Coefficient at `idx`; zero outside the box.
    pub fn get(&self, idx: &[u64]) -> Rat {
        self.offset(idx).map_or_else(Rat::zero, |o| self.coeffs[o].clone())
    }

    pub fn set(&mut self, idx: &[u64], value: Rat) -> Result<()> {
        let o = self.offset(idx).ok_or_else(|| {
            Error::Precondition(format!("index {idx:?} outside [1, {}]^{}", self.bound, self.arity))
        })?;
        self.coeffs[o] = value;
        Ok(())
    }

    /// Nonzero coefficients in lexicographic index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<u64>, &Rat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(o, c)| (decode(o, self.arity, self.bound), c))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::Arity {
                context: "series product",
                expected: self.arity,
                found: other.arity,
            });
        }
        if self.bound != other.bound {
            return Err(Error::Precondition(format!(
                "truncation bounds differ: {} vs {}",
                self.bound, other.bound
            )));
        }
        Ok(())
    }

    /// Componentwise Dirichlet product, truncated at the common bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let (v, n) = (self.arity, self.bound);
        let (sparse, dense) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        let sparse_entries: Vec<(Vec<u64>, &Rat)> = sparse.nonzero().collect();
        let divisors: Vec<Vec<u64>> = (0..=n)
            .map(|k| if k == 0 { Vec::new() } else { nt::divisors(k).expect("k >= 1") })
            .collect();
        let strides: Vec<usize> = (0..v).map(|i| (n as usize).pow((v - 1 - i) as u32)).collect();
        // Scanning the sparse factor beats enumerating divisor tuples when
        // it is supported on few indices (embedded single-variable series).
        let scan_sparse = sparse_entries.len() <= 4 * n as usize;
        let coeffs = (0..self.coeffs.len())
            .into_par_iter()
            .map(|off| {
                let idx = decode(off, v, n);
                let mut acc = Rat::zero();
                if scan_sparse {
                    for (a, val) in &sparse_entries {
                        if a.iter().zip(&idx).all(|(&ai, &mi)| mi % ai == 0) {
                            let b_off: usize = idx
                                .iter()
                                .zip(a)
                                .zip(&strides)
                                .map(|((&mi, &ai), &s)| (mi / ai - 1) as usize * s)
                                .sum();
                            let b = &dense.coeffs[b_off];
                            if !b.is_zero() {
                                acc += *val * b;
                            }
                        }
                    }
                } else {
                    divisor_walk(sparse, dense, &idx, 0, 0, 0, &divisors, &strides, &mut acc);
                }
                acc
            })
            .collect();
        Ok(TruncatedMDS { arity: v, bound: n, coeffs })
    }

    fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Single-variable series with coefficient `A(n, …, n)` at `n`.
    pub fn diagonal(&self) -> Self {
        let coeffs = (1..=self.bound).map(|k| self.get(&vec![k; self.arity])).collect();
        TruncatedMDS {
            arity: 1,
            bound: self.bound,
            coeffs,
        }
    }

    /// First index (lexicographic) where the two tensors differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Vec<u64>>> {
        self.check_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
            .map(|o| decode(o, self.arity, self.bound)))
    }
}

#[allow(clippy::too_many_arguments)]
fn divisor_walk(
    a: &TruncatedMDS,
    b: &TruncatedMDS,
    idx: &[u64],
    pos: usize,
    off_a: usize,
    off_b: usize,
    divisors: &[Vec<u64>],
    strides: &[usize],
    acc: &mut Rat,
) {
    if pos == idx.len() {
        let (x, y) = (&a.coeffs[off_a], &b.coeffs[off_b]);
        if !x.is_zero() && !y.is_zero() {
            *acc += x * y;
        }
        return;
    }
    let m = idx[pos];
    for &d in &divisors[m as usize] {
        divisor_walk(
            a,
            b,
            idx,
            pos + 1,
            off_a + (d - 1) as usize * strides[pos],
            off_b + (m / d - 1) as usize * strides[pos],
            divisors,
            strides,
            acc,
        );
    }
}

fn slot_count(arity: usize, bound: u64) -> Result<usize> {
    if arity == 0 {
        return Err(Error::Empty { what: "series variables" });
    }
    if bound == 0 {
        return Err(Error::NonPositive { what: "truncation bound" });
    }
    (bound as usize)
        .checked_pow(arity as u32)
        .ok_or(Error::ResourceLimit {
            what: "series tensor slots",
            needed: u128::MAX,
            limit: usize::MAX as u128,
        })
}

fn decode(mut off: usize, arity: usize, bound: u64) -> Vec<u64> {
    let mut idx = vec![0u64; arity];
    for slot in idx.iter_mut().rev() {
        *slot = (off % bound as usize) as u64 + 1;
        off /= bound as usize;
    }
    idx
}

/// `Σ_n f(n) n^{-Σ_{i∈mask} s_i}`.
pub fn embed(f: &ArithFn, mask: &VarMask, arity: usize, bound: u64) -> Result<TruncatedMDS> {
    embed_power(f, mask, arity, bound, 1)
}

/// `Σ_n f(n) n^{-e Σ_{i∈mask} s_i}`: coefficient `f(n)` at `n^e` on the
/// mask diagonal.
pub fn embed_power(f: &ArithFn, mask: &VarMask, arity: usize, bound: u64, e: u32) -> Result<TruncatedMDS> {
    if mask.0.last().is_some_and(|&j| j > arity) {
        return Err(Error::Precondition(format!(
            "mask {:?} exceeds arity {arity}",
            mask.positions()
        )));
    }
    if e == 0 {
        return Err(Error::NonPositive { what: "embedding exponent" });
    }
    let mut out = TruncatedMDS::zeros(arity, bound)?;
    let mut idx = vec![1u64; arity];
    let mut n = 1u64;
    while let Some(p) = n.checked_pow(e).filter(|&p| p <= bound) {
        for (i, slot) in idx.iter_mut().enumerate() {
            if mask.contains(i) {
                *slot = p;
            }
        }
        let value = f.eval(n);
        out.set(&idx, value)?;
        n += 1;
    }
    Ok(out)
}

/// `ζ(s_{mask})` truncated.
fn zeta(mask: &VarMask, arity: usize, bound: u64) -> Result<TruncatedMDS> {
    embed(&ArithFn::one(), mask, arity, bound)
}

fn product(factors: Vec<TruncatedMDS>) -> Result<TruncatedMDS> {
    let mut iter = factors.into_iter();
    let first = iter.next().ok_or(Error::Empty { what: "factor list" })?;
    iter.try_fold(first, |acc, f| acc.mul(&f))
}

/// Tensor of `a_{γ_0}(n_1) S(n_1..n_{m+1})` on `[1, N]^{m+1}`.
pub fn from_multisum(spec: &MultiSumSpec, bound: u64, gamma0: Option<u32>) -> Result<TruncatedMDS> {
    from_multisum_with_limit(spec, bound, gamma0, DEFAULT_SLOT_LIMIT)
}

pub fn from_multisum_with_limit(
    spec: &MultiSumSpec,
    bound: u64,
    gamma0: Option<u32>,
    limit: u128,
) -> Result<TruncatedMDS> {
    let arity = spec.m() + 1;
    let needed = (bound as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    if needed > limit {
        return Err(Error::ResourceLimit {
            what: "series tensor slots",
            needed,
            limit,
        });
    }
    let gamma0 = gamma0.unwrap_or(1);
    if gamma0 == 0 {
        return Err(Error::NonPositive { what: "gamma_0" });
    }
    TruncatedMDS::from_fn(arity, bound, |ns| {
        if nt::is_gamma_power(ns[0], gamma0) {
            spec.eval(ns)
        } else {
            Ok(Rat::zero())
        }
    })
}

/// First disagreement between the two sides of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: Vec<u64>,
    pub lhs: Rat,
    pub rhs: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub identity: String,
    pub bound: u64,
    pub first_mismatch: Option<Mismatch>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.first_mismatch.is_none()
    }

    pub fn to_json(&self) -> Value {
        let mismatch = self.first_mismatch.as_ref().map_or(Value::Null, |m| {
            json!({"index": m.index, "lhs": m.lhs.to_string(), "rhs": m.rhs.to_string()})
        });
        json!({
            "identity": self.identity,
            "bound": self.bound,
            "status": if self.is_ok() { "ok" } else { "mismatch" },
            "first_mismatch": mismatch,
        })
    }
}

/// Both sides of a coefficient identity, kept so callers can perturb them.
#[derive(Debug, Clone)]
pub struct IdentitySides {
    pub name: String,
    pub lhs: TruncatedMDS,
    pub rhs: TruncatedMDS,
}

impl IdentitySides {
    pub fn report(&self) -> Result<VerificationReport> {
        let first_mismatch = self.lhs.first_difference(&self.rhs)?.map(|index| Mismatch {
            lhs: self.lhs.get(&index),
            rhs: self.rhs.get(&index),
            index,
        });
        Ok(VerificationReport {
            identity: self.name.clone(),
            bound: self.lhs.bound(),
            first_mismatch,
        })
    }
}

fn unweighted(spec: &MultiSumSpec) -> Result<()> {
    match spec.weight() {
        Some(w) => Err(Error::Precondition(format!("identity needs an unweighted sum, got weight {}", w.label()))),
        None => Ok(()),
    }
}

/// `L(s; f_{m+1} *_{γ_m} ⋯ *_{γ_1} f_1) = Π_j L(s; f_j^{[γ_{j-1}]})` with
/// `γ_0 = 1`; refuses unless `1 | γ_1 | ⋯ | γ_m`.
pub fn prop_gamma_chain_sides(fs: &[ArithFn], gammas: &[u32], bound: u64) -> Result<IdentitySides> {
    check_chain(1, gammas)?;
    let mask = VarMask::single(1)?;
    let lhs = embed(&chain_gamma_convolve(fs, gammas)?, &mask, 1, bound)?;
    let factors = fs
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let g = if j == 0 { 1 } else { gammas[j - 1] };
            embed(&restrict_gamma(f, g)?, &mask, 1, bound)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentitySides {
        name: "gamma-chain".into(),
        lhs,
        rhs: product(factors)?,
    })
}

pub fn verify_prop_gamma_chain(fs: &[ArithFn], gammas: &[u32], bound: u64) -> Result<VerificationReport> {
    prop_gamma_chain_sides(fs, gammas, bound)?.report()
}

/// `L(s; a_{γ_0} S^γ_f) = Π_{j≥2} ζ(s_j) · Π_j L(s_1+⋯+s_j; f_j^{[γ_{j-1}]})`
/// for `γ_0 | γ_1 | ⋯ | γ_m`.
pub fn multivariable_l_sides(spec: &MultiSumSpec, gamma0: u32, bound: u64) -> Result<IdentitySides> {
    unweighted(spec)?;
    check_chain(gamma0, spec.gammas())?;
    let arity = spec.m() + 1;
    let lhs = from_multisum(spec, bound, Some(gamma0))?;
    let mut factors = Vec::with_capacity(2 * arity);
    for j in 2..=arity {
        factors.push(zeta(&VarMask::single(j)?, arity, bound)?);
    }
    for (j, f) in spec.fns().iter().enumerate() {
        let g = if j == 0 { gamma0 } else { spec.gammas()[j - 1] };
        factors.push(embed(&restrict_gamma(f, g)?, &VarMask::prefix(j + 1)?, arity, bound)?);
    }
    Ok(IdentitySides {
        name: "multivariable-L".into(),
        lhs,
        rhs: product(factors)?,
    })
}

pub fn verify_multivariable_l(spec: &MultiSumSpec, gamma0: u32, bound: u64) -> Result<VerificationReport> {
    multivariable_l_sides(spec, gamma0, bound)?.report()
}

/// `L((s_1,s_2); c) = ζ(s_2) ζ(s_1+s_2-1) / ζ(s_1)`, cleared:
/// `ζ(s_1) · L(c) = ζ(s_2) · ζ(s_1+s_2-1)`.
pub fn classical_c_series_sides(bound: u64) -> Result<IdentitySides> {
    let c = MultiSumSpec::unit(vec![ArithFn::mobius(), ArithFn::power(1)])?;
    let lhs = zeta(&VarMask::single(1)?, 2, bound)?.mul(&from_multisum(&c, bound, None)?)?;
    let rhs = zeta(&VarMask::single(2)?, 2, bound)?.mul(&embed(&ArithFn::power(1), &VarMask::prefix(2)?, 2, bound)?)?;
    Ok(IdentitySides {
        name: "classical-c-series".into(),
        lhs,
        rhs,
    })
}

/// The series in the single variable `n_j` (1-based), other arguments
/// fixed, against its factorization into `L(s; f_1)` (`j = 1`) or `ζ(s)`
/// (`j ≥ 2`) times a finite Dirichlet polynomial. The polynomial has
/// coefficient at `t`:
///
/// * `j = 1`: `[t | n_2, t a γ_1-th power] · G(t)` with
///   `G = S^{(γ_2..γ_m)}_{f_2..f_{m+1}}(·, n_3..n_{m+1})`;
/// * `j ≥ 2`: `S^{(γ_1..γ_{j-2})}_{f_1..f_{j-2}, h_t}(n_1..n_{j-1})` with
///   `h_t(x) = [t | x, t a γ_{j-1}-th power] f_{j-1}(x/t) G_j(t)` and
///   `G_j = S^{(γ_j..γ_m)}_{f_j..f_{m+1}}(·, n_{j+1}..n_{m+1})`.
pub fn phi_series_sides(spec: &MultiSumSpec, fixed: &[u64], j: usize, bound: u64) -> Result<IdentitySides> {
    unweighted(spec)?;
    let m = spec.m();
    if j == 0 || j > m + 1 {
        return Err(Error::Precondition(format!("running variable {j} outside 1..={}", m + 1)));
    }
    if fixed.len() != m {
        return Err(Error::Arity {
            context: "fixed arguments",
            expected: m,
            found: fixed.len(),
        });
    }
    if fixed.contains(&0) {
        return Err(Error::NonPositive { what: "fixed argument" });
    }
    let with_running = |k: u64| {
        let mut ns = fixed.to_vec();
        ns.insert(j - 1, k);
        ns
    };
    let lhs = TruncatedMDS::from_fn(1, bound, |k| spec.eval(&with_running(k[0])))?;
    // n_1..n_{m+1} with n_j unused
    let ns = with_running(1);
    let gammas = spec.gammas();
    let fns = spec.fns();
    // G_i(x) = S^{(γ_i..γ_m)}_{f_i..f_{m+1}}(x, n_{i+1}..n_{m+1}), 1-based i
    let tail_sum = |i: usize| -> Result<ArithFn> {
        let tail = MultiSumSpec::new(gammas[i - 1..].to_vec(), fns[i - 1..].to_vec())?;
        let rest = ns[i..].to_vec();
        Ok(ArithFn::new(format!("tail{i}"), move |x| {
            let mut args = vec![x];
            args.extend_from_slice(&rest);
            tail.eval(&args).expect("valid tail arguments")
        }))
    };
    let mask = VarMask::single(1)?;
    let (series, poly) = if j == 1 {
        let poly = if m == 0 {
            // the series is L(s; f_1) itself
            embed(&ArithFn::epsilon(), &mask, 1, bound)?
        } else {
            let (g1, n2) = (gammas[0], ns[1]);
            let big_g = tail_sum(2)?;
            TruncatedMDS::from_fn(1, bound, |t| {
                let t = t[0];
                Ok(if n2 % t == 0 && nt::is_gamma_power(t, g1) {
                    big_g.eval(t)
                } else {
                    Rat::zero()
                })
            })?
        };
        (embed(&fns[0], &mask, 1, bound)?, poly)
    } else {
        let gj = gammas[j - 2];
        let big_g = tail_sum(j)?;
        let f_prev = fns[j - 2].clone();
        let head_gammas = gammas[..j - 2].to_vec();
        let head_fns = fns[..j - 2].to_vec();
        let head_args = ns[..j - 1].to_vec();
        let poly = TruncatedMDS::from_fn(1, bound, |t| {
            let t = t[0];
            if !nt::is_gamma_power(t, gj) {
                return Ok(Rat::zero());
            }
            let weight = big_g.eval(t);
            if weight.is_zero() {
                return Ok(weight);
            }
            let f = f_prev.clone();
            let h = ArithFn::new(format!("h{t}"), move |x| {
                if x % t == 0 {
                    f.eval(x / t) * &weight
                } else {
                    Rat::zero()
                }
            });
            let mut hf = head_fns.clone();
            hf.push(h);
            MultiSumSpec::new(head_gammas.clone(), hf)?.eval(&head_args)
        })?;
        (zeta(&mask, 1, bound)?, poly)
    };
    Ok(IdentitySides {
        name: format!("phi-series[j={j}]"),
        lhs,
        rhs: series.mul(&poly)?,
    })
}

pub fn verify_phi_series(spec: &MultiSumSpec, fixed: &[u64], j: usize, bound: u64) -> Result<VerificationReport> {
    phi_series_sides(spec, fixed, j, bound)?.report()
}

fn require_completely_multiplicative(fs: &[&ArithFn]) -> Result<()> {
    match fs.iter().find(|f| !f.is_completely_multiplicative()) {
        Some(f) => Err(Error::NotCompletelyMultiplicative(f.label().to_string())),
        None => Ok(()),
    }
}

struct DoubleFactors {
    f1g1: ArithFn,
    cross: [ArithFn; 3],
    all_four: ArithFn,
}

fn double_factors(f1: &ArithFn, f2: &ArithFn, g1: &ArithFn, g2: &ArithFn, gamma: u32) -> Result<DoubleFactors> {
    require_completely_multiplicative(&[f1, f2, g1, g2])?;
    Ok(DoubleFactors {
        f1g1: pointwise_mul(f1, g1),
        cross: [
            restrict_gamma(&pointwise_mul(f2, g1), gamma)?,
            restrict_gamma(&pointwise_mul(f1, g2), gamma)?,
            restrict_gamma(&pointwise_mul(f2, g2), gamma)?,
        ],
        all_four: restrict_gamma(&pointwise_mul(&pointwise_mul(f1, f2), &pointwise_mul(g1, g2)), gamma)?,
    })
}

fn double_product_tensor(f1: &ArithFn, f2: &ArithFn, g1: &ArithFn, g2: &ArithFn, gamma: u32, bound: u64) -> Result<TruncatedMDS> {
    let sf = MultiSumSpec::new(vec![gamma], vec![f1.clone(), f2.clone()])?;
    let sg = MultiSumSpec::new(vec![gamma], vec![g1.clone(), g2.clone()])?;
    TruncatedMDS::from_fn(2, bound, |ns| Ok(sf.eval(ns)? * sg.eval(ns)?))
}

/// `L((s_1,s_2); S^{(γ)}_{f_1,f_2} S^{(γ)}_{g_1,g_2}) · L(2(s_1+s_2); (f_1f_2g_1g_2)^{[γ]})
///  = ζ(s_2) L(s_1; f_1g_1) Π L(s_1+s_2; (f_ig_j)^{[γ]})` over the three
/// cross pairs, for completely multiplicative `f_i, g_i`.
pub fn double_series_sides(
    f1: &ArithFn,
    f2: &ArithFn,
    g1: &ArithFn,
    g2: &ArithFn,
    gamma: u32,
    bound: u64,
) -> Result<IdentitySides> {
    let parts = double_factors(f1, f2, g1, g2, gamma)?;
    let both = VarMask::prefix(2)?;
    let lhs = double_product_tensor(f1, f2, g1, g2, gamma, bound)?
        .mul(&embed_power(&parts.all_four, &both, 2, bound, 2)?)?;
    let mut factors = vec![
        zeta(&VarMask::single(2)?, 2, bound)?,
        embed(&parts.f1g1, &VarMask::single(1)?, 2, bound)?,
    ];
    for h in &parts.cross {
        factors.push(embed(h, &both, 2, bound)?);
    }
    Ok(IdentitySides {
        name: "double-series".into(),
        lhs,
        rhs: product(factors)?,
    })
}

pub fn verify_double_series(
    f1: &ArithFn,
    f2: &ArithFn,
    g1: &ArithFn,
    g2: &ArithFn,
    gamma: u32,
    bound: u64,
) -> Result<VerificationReport> {
    double_series_sides(f1, f2, g1, g2, gamma, bound)?.report()
}

/// Single-variable specialization: the left side is the diagonal of the
/// two-variable product tensor, `(f_2 *_γ f_1)(n)(g_2 *_γ g_1)(n)`.
pub fn borwein_choi_sides(
    f1: &ArithFn,
    f2: &ArithFn,
    g1: &ArithFn,
    g2: &ArithFn,
    gamma: u32,
    bound: u64,
) -> Result<IdentitySides> {
    let parts = double_factors(f1, f2, g1, g2, gamma)?;
    let mask = VarMask::single(1)?;
    let diag = double_product_tensor(f1, f2, g1, g2, gamma, bound)?.diagonal();
    let lhs = diag.mul(&embed_power(&parts.all_four, &mask, 1, bound, 2)?)?;
    let mut factors = vec![embed(&parts.f1g1, &mask, 1, bound)?];
    for h in &parts.cross {
        factors.push(embed(h, &mask, 1, bound)?);
    }
    Ok(IdentitySides {
        name: "borwein-choi".into(),
        lhs,
        rhs: product(factors)?,
    })
}

pub fn verify_borwein_choi(
    f1: &ArithFn,
    f2: &ArithFn,
    g1: &ArithFn,
    g2: &ArithFn,
    gamma: u32,
    bound: u64,
) -> Result<VerificationReport> {
    borwein_choi_sides(f1, f2, g1, g2, gamma, bound)?.report()
}

/// Series of `c^a_{m+1,k}` in its first `k` variables with
/// `n_{k+1}..n_{m+1}` fixed, cleared:
/// `Π_{j≤k} ζ(s_1+⋯+s_j) · LHS = Π_{2≤j≤k} ζ(s_j) · Σ_{d | n_{k+1}} d^{a_1} σ_ã(d, n_{k+2}..) d^{-(s_1+⋯+s_k)}`
/// with `ã = (a_2-a_1, …, a_{m+1-k}-a_{m-k})`.
pub fn gen_ramanujan_series_sides(m: usize, k: usize, exponents: &[i64], fixed: &[u64], bound: u64) -> Result<IdentitySides> {
    if k == 0 || k > m {
        return Err(Error::Precondition(format!("need 1 <= k <= m, got k={k}, m={m}")));
    }
    if fixed.len() != m + 1 - k {
        return Err(Error::Arity {
            context: "fixed arguments",
            expected: m + 1 - k,
            found: fixed.len(),
        });
    }
    if fixed.contains(&0) {
        return Err(Error::NonPositive { what: "fixed argument" });
    }
    let spec = gen_ramanujan_spec(m, k, exponents)?;
    let lhs_raw = TruncatedMDS::from_fn(k, bound, |ns| {
        let mut args = ns.to_vec();
        args.extend_from_slice(fixed);
        spec.eval(&args)
    })?;
    let mut left = vec![lhs_raw];
    for j in 1..=k {
        left.push(zeta(&VarMask::prefix(j)?, k, bound)?);
    }
    let diffs: Vec<i64> = exponents.windows(2).map(|w| w[1] - w[0]).collect();
    let (a1, n_next, rest) = (exponents[0], fixed[0], fixed[1..].to_vec());
    let poly = ArithFn::new("divisor-poly", move |d| {
        if n_next % d != 0 {
            return Rat::zero();
        }
        let mut args = vec![d];
        args.extend_from_slice(&rest);
        let sigma = sigma_multi(&vec![1; diffs.len()], &diffs, &args).expect("consistent lengths");
        rat_pow(d, a1) * sigma
    });
    let mut right = Vec::new();
    for j in 2..=k {
        right.push(zeta(&VarMask::single(j)?, k, bound)?);
    }
    right.push(embed(&poly, &VarMask::prefix(k)?, k, bound)?);
    Ok(IdentitySides {
        name: format!("gen-ramanujan[m={m},k={k}]"),
        lhs: product(left)?,
        rhs: product(right)?,
    })
}

pub fn verify_gen_ramanujan_series(m: usize, k: usize, exponents: &[i64], fixed: &[u64], bound: u64) -> Result<VerificationReport> {
    gen_ramanujan_series_sides(m, k, exponents, fixed, bound)?.report()
}

/// `ζ(s_1+⋯+s_v) · L(f∘gcd) = Π ζ(s_j) · L(s_1+⋯+s_v; f)`, the gcd tensor
/// taken from its multiple-sum representation.
pub fn f_gcd_series_sides(f: &ArithFn, arity: usize, bound: u64) -> Result<IdentitySides> {
    if arity < 2 {
        return Err(Error::Precondition(format!("need at least two variables, got {arity}")));
    }
    let spec = f_of_gcd_spec(f, arity)?;
    let full = VarMask::prefix(arity)?;
    let lhs = zeta(&full, arity, bound)?.mul(&from_multisum(&spec, bound, None)?)?;
    let mut factors = Vec::with_capacity(arity + 1);
    for j in 1..=arity {
        factors.push(zeta(&VarMask::single(j)?, arity, bound)?);
    }
    factors.push(embed(f, &full, arity, bound)?);
    Ok(IdentitySides {
        name: format!("f-gcd[{}]", f.label()),
        lhs,
        rhs: product(factors)?,
    })
}

pub fn verify_f_gcd_series(f: &ArithFn, arity: usize, bound: u64) -> Result<VerificationReport> {
    f_gcd_series_sides(f, arity, bound)?.report()
}

/// `Σ_{n_j} f(gcd(n_1..n_{m+1})) n_j^{-s} = ζ(s) Σ_{d | g} (f*μ)(d) d^{-s}`
/// with `g` the gcd of the fixed arguments; `n_j` sits at 1-based position `j`.
pub fn f_gcd_single_sides(f: &ArithFn, fixed: &[u64], j: usize, bound: u64) -> Result<IdentitySides> {
    if fixed.is_empty() {
        return Err(Error::Precondition("need at least two variables".into()));
    }
    if j == 0 || j > fixed.len() + 1 {
        return Err(Error::Precondition(format!("running variable {j} outside 1..={}", fixed.len() + 1)));
    }
    let g = nt::gcd_many(fixed)?;
    let spec = f_of_gcd_spec(f, fixed.len() + 1)?;
    let lhs = TruncatedMDS::from_fn(1, bound, |k| {
        let mut ns = fixed.to_vec();
        ns.insert(j - 1, k[0]);
        spec.eval(&ns)
    })?;
    let fm = dirichlet(f, &ArithFn::mobius());
    let poly = ArithFn::new("gcd-poly", move |d| if g % d == 0 { fm.eval(d) } else { Rat::zero() });
    let mask = VarMask::single(1)?;
    Ok(IdentitySides {
        name: format!("f-gcd-single[{}]", f.label()),
        lhs,
        rhs: zeta(&mask, 1, bound)?.mul(&embed(&poly, &mask, 1, bound)?)?,
    })
}

pub fn verify_f_gcd_single(f: &ArithFn, fixed: &[u64], j: usize, bound: u64) -> Result<VerificationReport> {
    f_gcd_single_sides(f, fixed, j, bound)?.report()
}
