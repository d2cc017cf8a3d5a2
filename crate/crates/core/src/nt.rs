//! Integer number theory primitives: factorization, Möbius, totient,
//! divisors, gcd/lcm of lists and exact integer roots.

use std::sync::OnceLock;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Prime factorization `value = Π p^e` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p` in the factorization (0 if absent).
    pub fn ord(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

const SIEVE_LIMIT: usize = 1 << 20;

/// Smallest-prime-factor table for small arguments; filled once.
fn spf_table() -> &'static [u32] {
    static SPF: OnceLock<Vec<u32>> = OnceLock::new();
    SPF.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE_LIMIT];
        for i in 2..SIEVE_LIMIT {
            if spf[i] == 0 {
                let mut j = i;
                while j < SIEVE_LIMIT {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

fn push_factor(factors: &mut Vec<(u64, u32)>, p: u64) {
    match factors.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => factors.push((p, 1)),
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive { what: "n" });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    if (n as usize) < SIEVE_LIMIT {
        let spf = spf_table();
        while rest > 1 {
            let p = spf[rest as usize] as u64;
            push_factor(&mut factors, p);
            rest /= p;
        }
    } else {
        let mut p = 2u64;
        while p * p <= rest {
            while rest % p == 0 {
                push_factor(&mut factors, p);
                rest /= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if rest > 1 {
            push_factor(&mut factors, rest);
        }
    }
    Ok(Factorization { value: n, factors })
}

pub fn mobius(n: u64) -> Result<i8> {
    let fac = factorize(n)?;
    Ok(if !fac.is_squarefree() {
        0
    } else if fac.factors.len() % 2 == 0 {
        1
    } else {
        -1
    })
}

pub fn euler_phi(n: u64) -> Result<u64> {
    let fac = factorize(n)?;
    Ok(fac
        .factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product())
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let fac = factorize(n)?;
    Ok(divisors_of(&fac))
}

pub fn divisors_of(fac: &Factorization) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in &fac.factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn gcd_many(ns: &[u64]) -> Result<u64> {
    check_list(ns)?;
    Ok(ns.iter().fold(0, |g, &n| g.gcd(&n)))
}

pub fn lcm_many(ns: &[u64]) -> Result<u64> {
    check_list(ns)?;
    Ok(ns.iter().fold(1, |l, &n| l.lcm(&n)))
}

fn check_list(ns: &[u64]) -> Result<()> {
    if ns.is_empty() {
        return Err(Error::Empty { what: "list" });
    }
    if ns.contains(&0) {
        return Err(Error::NonPositive { what: "list entry" });
    }
    Ok(())
}

/// Returns `d` with `d^gamma == n`, if such an integer exists.
pub fn gamma_root(n: u64, gamma: u32) -> Result<Option<u64>> {
    if n == 0 {
        return Err(Error::NonPositive { what: "n" });
    }
    if gamma == 0 {
        return Err(Error::NonPositive { what: "gamma" });
    }
    Ok(exact_root(n, gamma))
}

/// `a_γ(n)`: whether `n` is a perfect `gamma`-th power.
pub fn is_gamma_power(n: u64, gamma: u32) -> bool {
    exact_root(n, gamma).is_some()
}

fn exact_root(n: u64, gamma: u32) -> Option<u64> {
    if gamma == 1 || n <= 1 {
        return Some(n);
    }
    let guess = (n as f64).powf(1.0 / gamma as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|&d| d.checked_pow(gamma) == Some(n))
}

/// `n^e` with overflow reported as a precondition failure.
pub fn checked_pow(n: u64, e: u32) -> Result<u64> {
    n.checked_pow(e)
        .ok_or_else(|| Error::Precondition(format!("{n}^{e} overflows u64")))
}

/// Divisors `d` of `n` that are perfect `gamma`-th powers, ascending.
pub fn power_divisors(n: u64, gamma: u32) -> Vec<u64> {
    let fac = factorize(n).expect("positive argument");
    let reduced = Factorization {
        value: 0,
        factors: fac
            .factors
            .iter()
            .filter_map(|&(p, e)| (e >= gamma).then(|| (p.pow(gamma), e / gamma)))
            .collect(),
    };
    divisors_of(&reduced)
}
