//! Finite Fourier expansions of periodic and even functions of several
//! variables.
//!
//! Even functions use the Ramanujan-sum kernel and exact rational
//! coefficients; periodic ones use the exponential kernel in `f64`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arithfn::{rat, rat_pow, Rat};
use crate::error::{Error, Result};
use crate::multisum::{transpose_data, MultiSumSpec};
use crate::nt;

/// `c(k, n) = Σ_{d | gcd(k,n)} μ(k/d) d`.
pub fn ramanujan_c(k: u64, n: u64) -> Result<i64> {
    if k == 0 || n == 0 {
        return Err(Error::NonPositive { what: "Ramanujan sum argument" });
    }
    let mut total = 0i64;
    for d in nt::divisors(k.gcd(&n))? {
        total += nt::mobius(k / d)? as i64 * d as i64;
    }
    Ok(total)
}

/// `e(r, n) = exp(2πi n / r)`.
pub fn unit_root(r: u64, n: i64) -> Complex64 {
    let t = 2.0 * PI * (n.rem_euclid(r as i64) as f64) / r as f64;
    Complex64::new(t.cos(), t.sin())
}

/// `c(k, n)` as the exponential sum over a reduced residue system mod `k`.
pub fn ramanujan_c_expsum(k: u64, n: u64) -> Complex64 {
    (1..=k)
        .filter(|l| l.gcd(&k) == 1)
        .map(|l| unit_root(k, ((n % k) * l % k) as i64))
        .sum()
}

/// `Σ_{e | δ | n} c(n/δ, n/d)` for `e | n`, `d | n`.
pub fn c_interval_sum(n: u64, e: u64, d: u64) -> Result<i64> {
    check_interval(n, e, d)?;
    let mut total = 0;
    for delta in nt::divisors(n)?.into_iter().filter(|delta| delta % e == 0) {
        total += ramanujan_c(n / delta, n / d)?;
    }
    Ok(total)
}

/// Closed form of [`c_interval_sum`]: `n/e` when `d | e`, else 0.
pub fn c_interval_closed_form(n: u64, e: u64, d: u64) -> Result<i64> {
    check_interval(n, e, d)?;
    Ok(if e % d == 0 { (n / e) as i64 } else { 0 })
}

fn check_interval(n: u64, e: u64, d: u64) -> Result<()> {
    if n == 0 || e == 0 || d == 0 {
        return Err(Error::NonPositive { what: "interval sum argument" });
    }
    if n % e != 0 || n % d != 0 {
        return Err(Error::Precondition(format!("need e | n and d | n, got n={n} e={e} d={d}")));
    }
    Ok(())
}

/// Finite Fourier coefficients of an even function.
///
/// The simple form has one modulus `r` and `k` variables. The general form
/// groups variables into blocks: block `j` has `arities[j]` variables and
/// is even modulo `moduli[j]`. Keys are the concatenated divisor tuples,
/// ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenCoeffTable {
    moduli: Vec<u64>,
    arities: Vec<usize>,
    coeffs: BTreeMap<Vec<u64>, Rat>,
}

impl EvenCoeffTable {
    /// Builds a table directly; missing divisor tuples are filled with 0.
    pub fn from_coeffs(moduli: Vec<u64>, arities: Vec<usize>, coeffs: BTreeMap<Vec<u64>, Rat>) -> Result<Self> {
        check_blocks(&moduli, &arities)?;
        let keys = divisor_tuples(&moduli, &arities)?;
        if let Some(bad) = coeffs.keys().find(|k| keys.binary_search(k).is_err()) {
            return Err(Error::Precondition(format!("{bad:?} is not a divisor tuple of the modulus")));
        }
        let full = keys
            .into_iter()
            .map(|k| {
                let v = coeffs.get(&k).cloned().unwrap_or_else(Rat::zero);
                (k, v)
            })
            .collect();
        Ok(EvenCoeffTable {
            moduli,
            arities,
            coeffs: full,
        })
    }

    /// Modulus of the first block (the only one in the simple form).
    pub fn modulus(&self) -> u64 {
        self.moduli[0]
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn arity(&self) -> usize {
        self.arities.iter().sum()
    }

    pub fn get(&self, ds: &[u64]) -> Option<&Rat> {
        self.coeffs.get(ds)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u64>, &Rat)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ_d α(d) Π c(d_i, n_i)`.
    pub fn reconstruct(&self, ns: &[u64]) -> Result<Rat> {
        if ns.len() != self.arity() {
            return Err(Error::Arity {
                context: "even expansion arguments",
                expected: self.arity(),
                found: ns.len(),
            });
        }
        let mut cache = HashMap::new();
        let mut total = Rat::zero();
        for (ds, alpha) in &self.coeffs {
            if alpha.is_zero() {
                continue;
            }
            let mut kernel = 1i64;
            for (&d, &n) in ds.iter().zip(ns) {
                kernel *= cached_c(&mut cache, d, n)?;
                if kernel == 0 {
                    break;
                }
            }
            if kernel != 0 {
                total += alpha * rat(kernel);
            }
        }
        Ok(total)
    }

    /// `{"modulus": r, "coeffs": [{"d": [..], "value": "p/q"}, ..]}`; the
    /// general form carries a modulus list and an `"arities"` field.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(d, v)| json!({"d": d, "value": v.to_string()}))
            .collect();
        if self.moduli.len() == 1 {
            json!({"modulus": self.moduli[0], "coeffs": coeffs})
        } else {
            json!({"modulus": self.moduli, "arities": self.arities, "coeffs": coeffs})
        }
    }
}

pub fn reconstruct_even(table: &EvenCoeffTable, ns: &[u64]) -> Result<Rat> {
    table.reconstruct(ns)
}

fn cached_c(cache: &mut HashMap<(u64, u64), i64>, k: u64, n: u64) -> Result<i64> {
    if let Some(&v) = cache.get(&(k, n)) {
        return Ok(v);
    }
    let v = ramanujan_c(k, n)?;
    cache.insert((k, n), v);
    Ok(v)
}

fn check_blocks(moduli: &[u64], arities: &[usize]) -> Result<()> {
    if moduli.len() != arities.len() {
        return Err(Error::Arity {
            context: "moduli and arities",
            expected: moduli.len(),
            found: arities.len(),
        });
    }
    if moduli.is_empty() {
        return Err(Error::Empty { what: "modulus list" });
    }
    if moduli.contains(&0) {
        return Err(Error::NonPositive { what: "modulus" });
    }
    Ok(())
}

/// Cartesian product of lists, lexicographic.
pub(crate) fn cartesian(lists: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |&x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn block_lists(moduli: &[u64], arities: &[usize], per_modulus: impl Fn(u64) -> Result<Vec<u64>>) -> Result<Vec<Vec<u64>>> {
    let mut lists = Vec::new();
    for (&r, &k) in moduli.iter().zip(arities) {
        let list = per_modulus(r)?;
        lists.extend(std::iter::repeat(list).take(k));
    }
    Ok(lists)
}

fn divisor_tuples(moduli: &[u64], arities: &[usize]) -> Result<Vec<Vec<u64>>> {
    Ok(cartesian(&block_lists(moduli, arities, nt::divisors)?))
}

/// Verifies `F(n) = F(gcd(n, r))` on every residue tuple.
pub fn check_even<F>(func: &F, moduli: &[u64], arities: &[usize]) -> Result<()>
where
    F: Fn(&[u64]) -> Rat + Sync,
{
    check_blocks(moduli, arities)?;
    let residues = cartesian(&block_lists(moduli, arities, |r| Ok((1..=r).collect()))?);
    let block_of: Vec<u64> = moduli
        .iter()
        .zip(arities)
        .flat_map(|(&r, &k)| std::iter::repeat(r).take(k))
        .collect();
    let bad = residues.par_iter().find_any(|ns| {
        let reduced: Vec<u64> = ns.iter().zip(&block_of).map(|(&n, &r)| n.gcd(&r)).collect();
        reduced != **ns && func(ns) != func(&reduced)
    });
    match bad {
        Some(at) => Err(Error::NotEven {
            modulus: moduli.to_vec(),
            at: at.clone(),
        }),
        None => Ok(()),
    }
}

/// Coefficients of an even function with grouped moduli:
/// `α(d) = Π r_j^{-k_j} Σ_{δ | r} F(δ) Π c(r_j/δ_{j,l}, r_j/d_{j,l})`.
pub fn general_even_coeffs<F>(func: F, moduli: &[u64], arities: &[usize]) -> Result<EvenCoeffTable>
where
    F: Fn(&[u64]) -> Rat + Sync,
{
    check_even(&func, moduli, arities)?;
    let keys = divisor_tuples(moduli, arities)?;
    let values: Vec<Rat> = keys.par_iter().map(|delta| func(delta)).collect();
    let modulus_of: Vec<u64> = moduli
        .iter()
        .zip(arities)
        .flat_map(|(&r, &k)| std::iter::repeat(r).take(k))
        .collect();
    let scale = moduli
        .iter()
        .zip(arities)
        .fold(Rat::from_integer(BigInt::from(1)), |acc, (&r, &k)| acc * rat_pow(r, -(k as i64)));
    let coeffs = keys
        .par_iter()
        .map(|ds| {
            let mut cache = HashMap::new();
            let mut total = Rat::zero();
            for (delta, value) in keys.iter().zip(&values) {
                if value.is_zero() {
                    continue;
                }
                let mut kernel = 1i64;
                for ((&dl, &d), &r) in delta.iter().zip(ds).zip(&modulus_of) {
                    kernel *= cached_c(&mut cache, r / dl, r / d)?;
                    if kernel == 0 {
                        break;
                    }
                }
                if kernel != 0 {
                    total += value * rat(kernel);
                }
            }
            Ok((ds.clone(), total * &scale))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(EvenCoeffTable {
        moduli: moduli.to_vec(),
        arities: arities.to_vec(),
        coeffs,
    })
}

/// Coefficients of an `m`-variable function even modulo `r`.
pub fn even_coeffs<F>(func: F, r: u64, m: usize) -> Result<EvenCoeffTable>
where
    F: Fn(&[u64]) -> Rat + Sync,
{
    general_even_coeffs(func, &[r], &[m])
}

/// Single coefficient `α(ds)` of a grouped even function.
pub fn general_even_coeff_at<F>(func: F, moduli: &[u64], arities: &[usize], ds: &[u64]) -> Result<Rat>
where
    F: Fn(&[u64]) -> Rat + Sync,
{
    check_even(&func, moduli, arities)?;
    let modulus_of: Vec<u64> = moduli
        .iter()
        .zip(arities)
        .flat_map(|(&r, &k)| std::iter::repeat(r).take(k))
        .collect();
    if ds.len() != modulus_of.len() {
        return Err(Error::Arity {
            context: "coefficient index",
            expected: modulus_of.len(),
            found: ds.len(),
        });
    }
    if let Some((d, r)) = ds.iter().zip(&modulus_of).find(|(&d, &r)| d == 0 || r % d != 0) {
        return Err(Error::Precondition(format!("{d} does not divide modulus {r}")));
    }
    let mut cache = HashMap::new();
    let mut total = Rat::zero();
    for delta in divisor_tuples(moduli, arities)? {
        let mut kernel = 1i64;
        for ((&dl, &d), &r) in delta.iter().zip(ds).zip(&modulus_of) {
            kernel *= cached_c(&mut cache, r / dl, r / d)?;
            if kernel == 0 {
                break;
            }
        }
        if kernel != 0 {
            total += func(&delta) * rat(kernel);
        }
    }
    let scale = moduli
        .iter()
        .zip(arities)
        .fold(rat(1), |acc, (&r, &k)| acc * rat_pow(r, -(k as i64)));
    Ok(total * scale)
}

/// Exponential-kernel coefficients `a_r(l)` of a function periodic mod `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCoeffTable {
    modulus: u64,
    arity: usize,
    coeffs: BTreeMap<Vec<u64>, Complex64>,
}

impl PeriodicCoeffTable {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, ls: &[u64]) -> Option<Complex64> {
        self.coeffs.get(ls).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u64>, &Complex64)> {
        self.coeffs.iter()
    }

    /// `Σ_l a_r(l) Π e(r, n_i l_i)`.
    pub fn reconstruct(&self, ns: &[u64]) -> Result<Complex64> {
        if ns.len() != self.arity {
            return Err(Error::Arity {
                context: "periodic expansion arguments",
                expected: self.arity,
                found: ns.len(),
            });
        }
        let r = self.modulus;
        Ok(self
            .coeffs
            .iter()
            .map(|(ls, a)| {
                let phase: u64 = ls.iter().zip(ns).map(|(&l, &n)| (l % r) * (n % r) % r).sum();
                a * unit_root(r, (phase % r) as i64)
            })
            .sum())
    }
}

/// `a_r(l) = r^{-m} Σ_{n ∈ [1,r]^m} F(n) Π e(r, -n_i l_i)`.
pub fn periodic_coeffs<F>(func: F, r: u64, m: usize) -> Result<PeriodicCoeffTable>
where
    F: Fn(&[u64]) -> Rat + Sync,
{
    if r == 0 {
        return Err(Error::NonPositive { what: "modulus" });
    }
    let residues = cartesian(&vec![(1..=r).collect(); m]);
    let values: Vec<f64> = residues
        .par_iter()
        .map(|ns| func(ns).to_f64().expect("finite value"))
        .collect();
    let scale = (r as f64).powi(m as i32);
    let coeffs = residues
        .par_iter()
        .map(|ls| {
            let sum: Complex64 = residues
                .iter()
                .zip(&values)
                .map(|(ns, &v)| {
                    let phase: u64 = ls.iter().zip(ns).map(|(&l, &n)| l * n % r).sum();
                    unit_root(r, -((phase % r) as i64)) * v
                })
                .sum();
            (ls.clone(), sum / scale)
        })
        .collect();
    Ok(PeriodicCoeffTable {
        modulus: r,
        arity: m,
        coeffs,
    })
}

/// Closed-form even coefficients of `(n_2..n_{m+1}) ↦ S^{γ,ξ}_f(n_1, n_2..)`:
/// `α(d_2..d_{m+1}) = n_1^{-m} S^{ᵗξ^γ_{n_1}}_{ᵗf̃}(n_1, n_1/d_{m+1}, …, n_1/d_2)`.
#[allow(non_snake_case)]
pub fn ffc_of_S(spec: &MultiSumSpec, n1: u64) -> Result<EvenCoeffTable> {
    let m = spec.m();
    let transposed = transpose_data(spec, n1)?;
    let scale = rat_pow(n1, -(m as i64));
    let keys = divisor_tuples(&[n1], &[m])?;
    let coeffs = keys
        .par_iter()
        .map(|ds| {
            let mut args = vec![n1];
            args.extend(ds.iter().rev().map(|&d| n1 / d));
            Ok((ds.clone(), transposed.eval(&args)? * &scale))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(EvenCoeffTable {
        moduli: vec![n1],
        arities: vec![m],
        coeffs,
    })
}

/// Even coefficients of `S^{γ,ξ}_f(n_1, ·)` obtained from the generic
/// coefficient formula (no closed form involved).
#[allow(non_snake_case)]
pub fn even_coeffs_of_S(spec: &MultiSumSpec, n1: u64) -> Result<EvenCoeffTable> {
    let m = spec.m();
    even_coeffs(
        |ns: &[u64]| {
            let mut args = vec![n1];
            args.extend_from_slice(ns);
            spec.eval(&args).expect("arity matches")
        },
        n1,
        m,
    )
}
