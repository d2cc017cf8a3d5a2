//! Cayley hyperdeterminants and Smith-type evaluations over factor-closed
//! sets.
//!
//! For a `k`-dimensional hypermatrix `A` of order `n` and a signature
//! `I ⊆ {1..k}`,
//!
//! ```text
//! det_I A = (1/n!) Σ_{σ_1..σ_k ∈ S_n} Π_j sgn(σ_j)^{[j ∈ I]} Π_v A(σ_1(v), …, σ_k(v)).
//! ```
//!
//! Relabelling `v` by `σ_1` shows every `σ_1` contributes the same amount
//! times `sgn(σ_1)^{|I|}`, so for even `|I|` the sum runs over `σ_1 = id`
//! without the `1/n!`, and for odd `|I|` it vanishes once `n ≥ 2`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arithfn::{rat, Rat};
use crate::error::{Error, Result};
use crate::fourier::general_even_coeff_at;
use crate::multisum::MultiSumSpec;
use crate::nt;

/// Default ceiling on `(n!)^{k-1}`, the number of enumerated tuples.
pub const DEFAULT_TUPLE_LIMIT: u128 = 10_000_000;

/// Dense `k`-dimensional array of order `n`, indices 1-based, stored
/// row-major (last index fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypermatrix {
    dim: usize,
    order: usize,
    entries: Vec<Rat>,
}

impl Hypermatrix {
    pub fn new(dim: usize, order: usize, entries: Vec<Rat>) -> Result<Self> {
        let len = slots(dim, order)?;
        if entries.len() != len {
            return Err(Error::Arity {
                context: "hypermatrix entries",
                expected: len,
                found: entries.len(),
            });
        }
        Ok(Hypermatrix { dim, order, entries })
    }

    pub fn from_fn<F>(dim: usize, order: usize, func: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Rat + Sync,
    {
        let len = slots(dim, order)?;
        let entries = (0..len)
            .into_par_iter()
            .map(|off| func(&decode(off, dim, order)))
            .collect();
        Ok(Hypermatrix { dim, order, entries })
    }

    pub fn try_from_fn<F>(dim: usize, order: usize, func: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Result<Rat> + Sync,
    {
        let len = slots(dim, order)?;
        let entries = (0..len)
            .into_par_iter()
            .map(|off| func(&decode(off, dim, order)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hypermatrix { dim, order, entries })
    }

    /// The `n × n` identity matrix.
    pub fn identity(order: usize) -> Result<Self> {
        Self::from_fn(2, order, |i| if i[0] == i[1] { rat(1) } else { rat(0) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dim);
        idx.iter().fold(0, |acc, &i| acc * self.order + (i - 1))
    }

    /// Entry at the 1-based index `idx`. Panics when out of range.
    pub fn get(&self, idx: &[usize]) -> &Rat {
        assert!(
            idx.len() == self.dim && idx.iter().all(|&i| (1..=self.order).contains(&i)),
            "index {idx:?} outside [1, {}]^{}",
            self.order,
            self.dim
        );
        &self.entries[self.offset(idx)]
    }

    /// `{"dim": k, "order": n, "entries": ["p/q", ...]}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        json!({"dim": self.dim, "order": self.order, "entries": entries})
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Precondition(format!("malformed hypermatrix JSON: {what}"));
        let dim = value["dim"].as_u64().ok_or_else(|| bad("dim"))? as usize;
        let order = value["order"].as_u64().ok_or_else(|| bad("order"))? as usize;
        let entries = value["entries"]
            .as_array()
            .ok_or_else(|| bad("entries"))?
            .iter()
            .map(|e| {
                e.as_str()
                    .and_then(|s| s.parse::<Rat>().ok())
                    .ok_or_else(|| bad("entry"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, order, entries)
    }
}

fn slots(dim: usize, order: usize) -> Result<usize> {
    if dim == 0 {
        return Err(Error::NonPositive { what: "hypermatrix dimension" });
    }
    if order == 0 {
        return Err(Error::NonPositive { what: "hypermatrix order" });
    }
    order.checked_pow(dim as u32).ok_or(Error::ResourceLimit {
        what: "hypermatrix entries",
        needed: u128::MAX,
        limit: usize::MAX as u128,
    })
}

fn decode(mut off: usize, dim: usize, order: usize) -> Vec<usize> {
    let mut idx = vec![0; dim];
    for slot in idx.iter_mut().rev() {
        *slot = off % order + 1;
        off /= order;
    }
    idx
}

/// A signature `I ⊆ {1..k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature(BTreeSet<usize>);

impl Signature {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if set.contains(&0) {
            return Err(Error::NonPositive { what: "signature member" });
        }
        Ok(Signature(set))
    }

    /// `{1..k}`.
    pub fn full(k: usize) -> Self {
        Signature((1..=k).collect())
    }

    /// `{2..m+1}` for even `m`, `{1..m+1}` for odd `m`.
    pub fn smith(m: usize) -> Self {
        let start = if m % 2 == 0 { 2 } else { 1 };
        Signature((start..=m + 1).collect())
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    fn max(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// `π^{-1}(I)` for a permutation `π` of `{1..k}` given as values
    /// `π(1)..π(k)`.
    pub fn preimage(&self, pi: &[usize]) -> Result<Self> {
        check_permutation(pi, "axis permutation")?;
        if self.max() > pi.len() {
            return Err(Error::Precondition(format!("signature exceeds {} axes", pi.len())));
        }
        let mut inverse = vec![0; pi.len() + 1];
        for (j, &p) in pi.iter().enumerate() {
            inverse[p] = j + 1;
        }
        Ok(Signature(self.0.iter().map(|&i| inverse[i]).collect()))
    }
}

fn check_permutation(pi: &[usize], what: &str) -> Result<()> {
    let mut seen = vec![false; pi.len() + 1];
    for &p in pi {
        if p == 0 || p > pi.len() || seen[p] {
            return Err(Error::Precondition(format!("{what} {pi:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// All permutations of `0..n` with their signs, lexicographic.
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), odd));
            return;
        }
        // placing x after the prefix adds one inversion per larger element already placed
        for x in 0..n {
            if !used[x] {
                let inversions = prefix.iter().filter(|&&p| p > x).count();
                used[x] = true;
                prefix.push(x);
                go(prefix, used, odd ^ (inversions % 2 == 1), out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], false, &mut out);
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

pub fn hyperdet(a: &Hypermatrix, signature: &Signature) -> Result<Rat> {
    hyperdet_with_limit(a, signature, DEFAULT_TUPLE_LIMIT)
}

/// `det_I A` by enumeration with `σ_1` fixed to the identity.
pub fn hyperdet_with_limit(a: &Hypermatrix, signature: &Signature, limit: u128) -> Result<Rat> {
    let (k, n) = (a.dim, a.order);
    if signature.max() > k {
        return Err(Error::Precondition(format!("signature exceeds dimension {k}")));
    }
    // with a single index every σ_j is the identity and nothing cancels
    if n == 1 {
        return Ok(a.entries[0].clone());
    }
    if signature.len() % 2 == 1 {
        return Ok(Rat::zero());
    }
    let needed = (0..k - 1).fold(1u128, |acc, _| acc.saturating_mul(factorial(n)));
    if needed > limit {
        return Err(Error::ResourceLimit {
            what: "hyperdeterminant permutation tuples",
            needed,
            limit,
        });
    }
    if k == 1 {
        return Ok(a.entries.iter().fold(Rat::one(), |acc, x| acc * x));
    }
    let perms = permutations(n);
    let strides: Vec<usize> = (0..k).map(|j| n.pow((k - 1 - j) as u32)).collect();
    // offsets[v] accumulates the flat position of A(v, σ_2(v), …)
    let base: Vec<usize> = (0..n).map(|v| v * strides[0]).collect();
    let total = perms
        .par_iter()
        .map(|(sigma, odd)| {
            let negate = signature.contains(2) && *odd;
            let offsets: Vec<usize> = base.iter().zip(sigma).map(|(b, &s)| b + s * strides[1]).collect();
            let mut acc = Rat::zero();
            enumerate_axes(a, signature, &perms, &strides, 2, offsets, negate, &mut acc);
            acc
        })
        .reduce(Rat::zero, |x, y| x + y);
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_axes(
    a: &Hypermatrix,
    signature: &Signature,
    perms: &[(Vec<usize>, bool)],
    strides: &[usize],
    axis: usize,
    offsets: Vec<usize>,
    negate: bool,
    acc: &mut Rat,
) {
    if axis == a.dim {
        let mut term = Rat::one();
        for &o in &offsets {
            let x = &a.entries[o];
            if x.is_zero() {
                return;
            }
            term *= x;
        }
        if negate {
            *acc -= term;
        } else {
            *acc += term;
        }
        return;
    }
    let signed = signature.contains(axis + 1);
    for (sigma, odd) in perms {
        let next: Vec<usize> = offsets.iter().zip(sigma).map(|(o, &s)| o + s * strides[axis]).collect();
        enumerate_axes(a, signature, perms, strides, axis + 1, next, negate ^ (signed && *odd), acc);
    }
}

/// Ordinary determinant by Gaussian elimination over the rationals.
pub fn determinant(a: &Hypermatrix) -> Result<Rat> {
    if a.dim != 2 {
        return Err(Error::Arity {
            context: "determinant dimension",
            expected: 2,
            found: a.dim,
        });
    }
    let n = a.order;
    let mut rows: Vec<Vec<Rat>> = a.entries.chunks(n).map(|r| r.to_vec()).collect();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return Ok(Rat::zero());
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let p = rows[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &p;
            for c in col..n {
                let delta = &factor * &rows[col][c];
                rows[r][c] -= delta;
            }
        }
    }
    Ok(det)
}

/// `(AB)(i_1..i_{k+l-2}) = Σ_j A(i_1..i_{k-1}, j) B(j, i_k..i_{k+l-2})`.
pub fn cayley_product(a: &Hypermatrix, b: &Hypermatrix) -> Result<Hypermatrix> {
    if a.order != b.order {
        return Err(Error::Precondition(format!("orders differ: {} vs {}", a.order, b.order)));
    }
    let dim = a.dim + b.dim - 2;
    if dim == 0 {
        return Err(Error::Precondition("product of two vectors has no indices".into()));
    }
    let n = a.order;
    Hypermatrix::from_fn(dim, n, |idx| {
        let (head, tail) = idx.split_at(a.dim - 1);
        let mut ia = head.to_vec();
        ia.push(0);
        let mut ib = vec![0];
        ib.extend_from_slice(tail);
        let mut sum = Rat::zero();
        for j in 1..=n {
            ia[a.dim - 1] = j;
            ib[0] = j;
            let x = a.get(&ia);
            if !x.is_zero() {
                sum += x * b.get(&ib);
            }
        }
        sum
    })
}

fn check_iterate(a: &Hypermatrix, c: &Hypermatrix, l: usize) -> Result<()> {
    if c.dim != 2 {
        return Err(Error::Arity {
            context: "contraction matrix dimension",
            expected: 2,
            found: c.dim,
        });
    }
    if a.order != c.order {
        return Err(Error::Precondition(format!("orders differ: {} vs {}", a.order, c.order)));
    }
    if l > a.dim {
        return Err(Error::Precondition(format!("l = {l} exceeds dimension {}", a.dim)));
    }
    Ok(())
}

/// `A^{(0)} = A`, `A^{(l)}(i_1..i_k) = (A^{(l-1)} C)(i_2..i_k, i_1)`.
pub fn iterate_ac(a: &Hypermatrix, c: &Hypermatrix, l: usize) -> Result<Hypermatrix> {
    check_iterate(a, c, l)?;
    let mut cur = a.clone();
    for _ in 0..l {
        let prod = cayley_product(&cur, c)?;
        cur = Hypermatrix::from_fn(a.dim, a.order, |idx| {
            let mut rotated = idx[1..].to_vec();
            rotated.push(idx[0]);
            prod.get(&rotated).clone()
        })?;
    }
    Ok(cur)
}

/// `A^{(l)}(i) = Σ_{j_1..j_l} A(i_{l+1}..i_k, j_1..j_l) Π_h C(j_h, i_h)`.
pub fn iterate_ac_closed(a: &Hypermatrix, c: &Hypermatrix, l: usize) -> Result<Hypermatrix> {
    check_iterate(a, c, l)?;
    let n = a.order;
    let js: Vec<Vec<usize>> = (0..n.pow(l as u32)).map(|o| if l == 0 { Vec::new() } else { decode(o, l, n) }).collect();
    Hypermatrix::from_fn(a.dim, n, |idx| {
        let mut sum = Rat::zero();
        for j in &js {
            let mut weight = Rat::one();
            for (h, &jh) in j.iter().enumerate() {
                weight *= c.get(&[jh, idx[h]]);
                if weight.is_zero() {
                    break;
                }
            }
            if weight.is_zero() {
                continue;
            }
            let mut ia = idx[l..].to_vec();
            ia.extend_from_slice(j);
            sum += weight * a.get(&ia);
        }
        sum
    })
}

/// `B(i_1..i_k) = A(π(i_1)..π(i_k))`; `det_I B = det_I A`.
pub fn permute_order(a: &Hypermatrix, pi: &[usize]) -> Result<Hypermatrix> {
    if pi.len() != a.order {
        return Err(Error::Arity {
            context: "order permutation",
            expected: a.order,
            found: pi.len(),
        });
    }
    check_permutation(pi, "order permutation")?;
    Hypermatrix::from_fn(a.dim, a.order, |idx| {
        let mapped: Vec<usize> = idx.iter().map(|&i| pi[i - 1]).collect();
        a.get(&mapped).clone()
    })
}

/// `B(i_1..i_k) = A(i_{π(1)}..i_{π(k)})`; `det_I B = det_{π^{-1}(I)} A`.
pub fn permute_axes(a: &Hypermatrix, pi: &[usize]) -> Result<Hypermatrix> {
    if pi.len() != a.dim {
        return Err(Error::Arity {
            context: "axis permutation",
            expected: a.dim,
            found: pi.len(),
        });
    }
    check_permutation(pi, "axis permutation")?;
    Hypermatrix::from_fn(a.dim, a.order, |idx| {
        let mapped: Vec<usize> = pi.iter().map(|&p| idx[p - 1]).collect();
        a.get(&mapped).clone()
    })
}

/// Strictly increasing positive integers containing every divisor of
/// each member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorClosedSet(Vec<u64>);

impl FactorClosedSet {
    pub fn new(xs: &[u64]) -> Result<Self> {
        let sorted = sorted_distinct(xs)?;
        for &x in &sorted {
            for d in nt::divisors(x)? {
                if sorted.binary_search(&d).is_err() {
                    return Err(Error::NotFactorClosed { missing: d, of: x });
                }
            }
        }
        Ok(FactorClosedSet(sorted))
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x_1 ⋯ x_n`.
    pub fn product(&self) -> Rat {
        self.0.iter().fold(Rat::one(), |acc, &x| acc * rat(x as i64))
    }
}

fn sorted_distinct(xs: &[u64]) -> Result<Vec<u64>> {
    if xs.is_empty() {
        return Err(Error::Empty { what: "integer set" });
    }
    if xs.contains(&0) {
        return Err(Error::NonPositive { what: "set element" });
    }
    let mut sorted = xs.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Duplicate(w[0]));
    }
    Ok(sorted)
}

/// Smallest factor-closed superset of `xs`.
pub fn factor_closure(xs: &[u64]) -> Result<FactorClosedSet> {
    let mut all = BTreeSet::new();
    for &x in &sorted_distinct(xs)? {
        all.extend(nt::divisors(x)?);
    }
    Ok(FactorClosedSet(all.into_iter().collect()))
}

pub fn is_factor_closed(xs: &[u64]) -> bool {
    FactorClosedSet::new(xs).is_ok()
}

/// `(S(x_{i_1}, …, x_{i_{m+1}}))`, a hypermatrix of dimension `m + 1`.
#[allow(non_snake_case)]
pub fn build_S_hypermatrix(spec: &MultiSumSpec, set: &FactorClosedSet) -> Result<Hypermatrix> {
    let xs = set.elements();
    Hypermatrix::try_from_fn(spec.m() + 1, xs.len(), |idx| {
        let args: Vec<u64> = idx.iter().map(|&i| xs[i - 1]).collect();
        spec.eval(&args)
    })
}

/// Both sides of
/// `det_I (S^{γ,ξ}_f(x_{i_1}..x_{i_{m+1}})) = (f_1(1)⋯f_m(1))^n Π_v ξ(x_v..x_v) f_{m+1}^{[lcm γ]}(x_v)`
/// with `I` as in [`Signature::smith`]. Two-dimensional cases use
/// elimination; higher ones enumerate.
pub fn smith_hyperdet_check(spec: &MultiSumSpec, set: &FactorClosedSet, signature: &Signature) -> Result<(Rat, Rat)> {
    let m = spec.m();
    if *signature != Signature::smith(m) {
        return Err(Error::Precondition(format!(
            "signature must be {:?} for m = {m}",
            Signature::smith(m).members().collect::<Vec<_>>()
        )));
    }
    let matrix = build_S_hypermatrix(spec, set)?;
    let lhs = if m == 1 { determinant(&matrix)? } else { hyperdet(&matrix, signature)? };
    let fns = spec.fns();
    let lead = fns[..m].iter().fold(Rat::one(), |acc, f| acc * f.eval(1));
    let lcm = spec.gammas().iter().fold(1u64, |l, &g| l.lcm(&(g as u64)));
    let mut rhs = num_traits::pow::Pow::pow(lead, set.len() as u32);
    for &x in set.elements() {
        if !nt::is_gamma_power(x, lcm as u32) {
            return Ok((lhs, Rat::zero()));
        }
        let xi = spec.weight().map_or_else(Rat::one, |w| w.eval(&vec![x; m]));
        rhs *= xi * fns[m].eval(x);
    }
    Ok((lhs, rhs))
}

/// `Ĩ = {j ≤ m : [j ∈ I] + k_j odd}`.
pub fn reduced_signature(signature: &Signature, ks: &[usize]) -> Signature {
    Signature(
        (1..=ks.len())
            .filter(|&j| (signature.contains(j) as usize + ks[j - 1]) % 2 == 1)
            .collect(),
    )
}

/// Both sides of `det_I B = (x_1⋯x_n)^{|k|} det_Ĩ (α_{x_{i_1}..x_{i_m}}(x_{i_1}^{×k_1}, …, x_{i_m}^{×k_m}))`
/// where `B(i) = F(x_{i_1}..x_{i_m}; x_{i_{m+1}}, …)` and `F(r; ·)` is even
/// modulo `r^{(k)}` for every modulus vector `r` drawn from the set.
/// `family(r, n)` takes the `m` moduli and the `|k|` variables.
pub fn even_hyperdet_check<F>(family: F, ks: &[usize], set: &FactorClosedSet, signature: &Signature) -> Result<(Rat, Rat)>
where
    F: Fn(&[u64], &[u64]) -> Rat + Sync,
{
    let m = ks.len();
    if m == 0 {
        return Err(Error::Empty { what: "arity vector" });
    }
    if ks.contains(&0) {
        return Err(Error::NonPositive { what: "block arity" });
    }
    let total: usize = ks.iter().sum();
    let k = m + total;
    if signature.max() > k {
        return Err(Error::Precondition(format!("signature exceeds dimension {k}")));
    }
    if signature.len() % 2 == 1 || !(m + 1..=k).all(|j| signature.contains(j)) {
        return Err(Error::Precondition(format!(
            "signature must have even size and contain {}..={k}",
            m + 1
        )));
    }
    let xs = set.elements();
    let n = xs.len();
    let b = Hypermatrix::from_fn(k, n, |idx| {
        let vals: Vec<u64> = idx.iter().map(|&i| xs[i - 1]).collect();
        family(&vals[..m], &vals[m..])
    })?;
    let lhs = if k == 2 && signature.len() == 2 { determinant(&b)? } else { hyperdet(&b, signature)? };
    let coeffs = Hypermatrix::try_from_fn(m, n, |idx| {
        let moduli: Vec<u64> = idx.iter().map(|&i| xs[i - 1]).collect();
        let ds: Vec<u64> = moduli
            .iter()
            .zip(ks)
            .flat_map(|(&r, &kj)| std::iter::repeat(r).take(kj))
            .collect();
        general_even_coeff_at(|ns: &[u64]| family(&moduli, ns), &moduli, ks, &ds)
    })?;
    let reduced = reduced_signature(signature, ks);
    let det = if m == 2 && reduced.len() == 2 { determinant(&coeffs)? } else { hyperdet(&coeffs, &reduced)? };
    let scale = num_traits::pow::Pow::pow(set.product(), total as u32);
    Ok((lhs, scale * det))
}

/// `Π φ(x_v)` over a set, as a rational.
pub fn totient_product(set: &FactorClosedSet) -> Result<Rat> {
    set.elements().iter().try_fold(Rat::one(), |acc, &x| {
        Ok(acc * Rat::from_integer(BigInt::from(nt::euler_phi(x)?)))
    })
}
