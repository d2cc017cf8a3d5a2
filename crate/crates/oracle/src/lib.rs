//! Slow reference implementations used only by tests.
//!
//! Everything here works on plain closures and `BigRational`, straight from
//! the defining formulas, without sieves, pruning or shortcuts. Nothing
//! depends on the library under test.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization by trial division.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Counts `1 ≤ j ≤ n` coprime to `n`.
pub fn phi(n: u64) -> u64 {
    (1..=n).filter(|&j| gcd(j, n) == 1).count() as u64
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Whether `n` is a perfect `g`-th power, by search.
pub fn is_power(n: u64, g: u32) -> bool {
    (1..=n).take_while(|d| d.pow(g) <= n).any(|d| d.pow(g) == n)
}

/// `Σ_{l ∈ [1,k], (l,k)=1} exp(2πi n l / k)`.
pub fn ramanujan_expsum(k: u64, n: u64) -> Complex64 {
    (1..=k)
        .filter(|&l| gcd(l, k) == 1)
        .map(|l| {
            let t = 2.0 * std::f64::consts::PI * ((n * l) % k) as f64 / k as f64;
            Complex64::new(t.cos(), t.sin())
        })
        .sum()
}

/// `c(k, n)` as the rounded real part of the exponential sum.
pub fn ramanujan_c(k: u64, n: u64) -> i64 {
    ramanujan_expsum(k, n).re.round() as i64
}

/// The multiple sum by enumerating every `d_j ∈ [1, n_1]` independently and
/// testing each summation condition `d_j^{γ_j} | gcd(n_1..n_{j+1})` and the
/// integrality of every quotient.
pub fn multisum(
    gammas: &[u32],
    fns: &[&dyn Fn(u64) -> Q],
    weight: Option<&dyn Fn(&[u64]) -> Q>,
    ns: &[u64],
) -> Q {
    let m = gammas.len();
    assert_eq!(fns.len(), m + 1);
    assert_eq!(ns.len(), m + 1);
    if m == 0 {
        return fns[0](ns[0]);
    }
    let n1 = ns[0];
    let mut total = Q::zero();
    let mut ds = vec![1u64; m];
    loop {
        let big: Vec<u64> = ds.iter().zip(gammas).map(|(&d, &g)| d.pow(g)).collect();
        let admissible = (0..m).all(|j| ns[..=j + 1].iter().all(|&n| n % big[j] == 0));
        let chained = (1..m).all(|j| big[j - 1] % big[j] == 0) && n1 % big[0] == 0;
        if admissible && chained {
            let mut term = fns[0](n1 / big[0]);
            for j in 1..m {
                term *= fns[j](big[j - 1] / big[j]);
            }
            term *= fns[m](big[m - 1]);
            if let Some(w) = weight {
                term *= w(&big);
            }
            total += term;
        }
        // odometer over d_j with d_j^{γ_j} ≤ n_1
        let mut j = 0;
        loop {
            if j == m {
                return total;
            }
            ds[j] += 1;
            if ds[j].checked_pow(gammas[j]).is_some_and(|p| p <= n1) {
                break;
            }
            ds[j] = 1;
            j += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Sign by counting inversions.
fn sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `det_I A` straight from the definition, all `k` permutations free and
/// divided by `n!`. `entry` takes 0-based indices; `signature` is 1-based.
pub fn hyperdet(dim: usize, order: usize, entry: &dyn Fn(&[usize]) -> Q, signature: &[usize]) -> Q {
    let perms = permutations(order);
    let mut total = Q::zero();
    let mut choice = vec![0usize; dim];
    loop {
        let mut term = Q::one();
        for (j, &c) in choice.iter().enumerate() {
            if signature.contains(&(j + 1)) && sign(&perms[c]) < 0 {
                term = -term;
            }
        }
        for v in 0..order {
            let idx: Vec<usize> = choice.iter().map(|&c| perms[c][v]).collect();
            term *= entry(&idx);
        }
        total += term;
        let mut j = 0;
        loop {
            if j == dim {
                let fact: i64 = (1..=order as i64).product();
                return total / q(fact);
            }
            choice[j] += 1;
            if choice[j] < perms.len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

/// Leibniz expansion of an ordinary determinant.
pub fn leibniz_det(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    permutations(n)
        .iter()
        .map(|p| {
            let prod = (0..n).fold(Q::one(), |acc, i| acc * &rows[i][p[i]]);
            prod * q(sign(p))
        })
        .fold(Q::zero(), |a, b| a + b)
}

/// Solves `M x = b` exactly by Gauss–Jordan elimination; `None` if singular.
pub fn solve(mut m: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        b.swap(pivot, col);
        let p = m[col][col].clone();
        for c in 0..n {
            m[col][c] = &m[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

/// Coefficients `α(d)` of an `m`-variable function even mod `r`, found by
/// solving `F(n) = Σ_d α(d) Π c(d_i, n_i)` over the divisor tuples `n`.
/// Returns `(d, α(d))` with tuples in lexicographic order.
pub fn even_coeffs_by_solving(func: &dyn Fn(&[u64]) -> Q, r: u64, m: usize) -> Vec<(Vec<u64>, Q)> {
    let divs = divisors(r);
    let mut tuples: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..m {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                divs.iter().map(move |&d| {
                    let mut u = t.clone();
                    u.push(d);
                    u
                })
            })
            .collect();
    }
    let matrix: Vec<Vec<Q>> = tuples
        .iter()
        .map(|ns| {
            tuples
                .iter()
                .map(|ds| q(ds.iter().zip(ns).map(|(&d, &n)| ramanujan_c(d, n)).product()))
                .collect()
        })
        .collect();
    let rhs: Vec<Q> = tuples.iter().map(|ns| func(ns)).collect();
    let sol = solve(matrix, rhs).expect("Ramanujan kernel is invertible on divisor tuples");
    tuples.into_iter().zip(sol).collect()
}

/// Coefficient at `idx` of the componentwise Dirichlet product of two
/// tensors given as closures, by scanning every candidate factor.
pub fn dirichlet_product_at(a: &dyn Fn(&[u64]) -> Q, b: &dyn Fn(&[u64]) -> Q, idx: &[u64]) -> Q {
    let mut total = Q::zero();
    let mut d = vec![1u64; idx.len()];
    loop {
        if d.iter().zip(idx).all(|(&x, &n)| n % x == 0) {
            let rest: Vec<u64> = d.iter().zip(idx).map(|(&x, &n)| n / x).collect();
            total += a(&d) * b(&rest);
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return total;
            }
            d[j] += 1;
            if d[j] <= idx[j] {
                break;
            }
            d[j] = 1;
            j += 1;
        }
    }
}

/// `|x|` as a float, for tolerance checks.
pub fn abs_f64(x: &Q) -> f64 {
    let a = x.abs();
    let n: f64 = a.numer().to_string().parse().unwrap_or(f64::INFINITY);
    let d: f64 = a.denom().to_string().parse().unwrap_or(f64::INFINITY);
    n / d
}
