//! Single-variable arithmetic functions over exact rationals and the
//! convolution algebra built on them: Dirichlet convolution, the
//! γ-restriction `f^[γ] = a_γ·f`, dilation `f^⟨γ⟩(n) = f(n^γ)` and the
//! γ-convolutions `g *_γ f = g^[γ] * f`.
//!
//! Multiplicativity flags are only ever set by constructors that guarantee
//! them; nothing is inferred from sampled values.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nt;

/// Exact rational value: always reduced, denominator positive.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `n^a` for any integer exponent, exactly.
pub fn rat_pow(n: u64, a: i64) -> Rat {
    let base = Rat::from_integer(BigInt::from(n));
    num_traits::pow::Pow::pow(base, a as i32)
}

type Evaluator = dyn Fn(u64) -> Rat + Send + Sync;

struct Inner {
    label: String,
    multiplicative: bool,
    completely_multiplicative: bool,
    eval: Box<Evaluator>,
    memo: Option<RwLock<HashMap<u64, Rat>>>,
}

/// An arithmetic function `f: N → Q`. Cloning is cheap and shares the memo.
#[derive(Clone)]
pub struct ArithFn(Arc<Inner>);

impl fmt::Debug for ArithFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArithFn")
            .field("label", &self.0.label)
            .field("multiplicative", &self.0.multiplicative)
            .field("completely_multiplicative", &self.0.completely_multiplicative)
            .finish()
    }
}

impl fmt::Display for ArithFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

impl ArithFn {
    fn build(
        label: impl Into<String>,
        multiplicative: bool,
        completely_multiplicative: bool,
        memoize: bool,
        eval: impl Fn(u64) -> Rat + Send + Sync + 'static,
    ) -> Self {
        ArithFn(Arc::new(Inner {
            label: label.into(),
            multiplicative: multiplicative || completely_multiplicative,
            completely_multiplicative,
            eval: Box::new(eval),
            memo: memoize.then(|| RwLock::new(HashMap::new())),
        }))
    }

    /// An arbitrary function with no multiplicativity claims.
    pub fn new(label: impl Into<String>, eval: impl Fn(u64) -> Rat + Send + Sync + 'static) -> Self {
        Self::build(label, false, false, true, eval)
    }

    /// The multiplicative function determined by its prime-power values.
    pub fn multiplicative(
        label: impl Into<String>,
        at_prime_power: impl Fn(u64, u32) -> Rat + Send + Sync + 'static,
    ) -> Self {
        Self::build(label, true, false, true, move |n| {
            let fac = nt::factorize(n).expect("positive argument");
            fac.factors()
                .iter()
                .map(|&(p, e)| at_prime_power(p, e))
                .fold(Rat::one(), |acc, v| acc * v)
        })
    }

    /// The completely multiplicative function determined by its prime values.
    pub fn completely_multiplicative(
        label: impl Into<String>,
        at_prime: impl Fn(u64) -> Rat + Send + Sync + 'static,
    ) -> Self {
        Self::build(label, true, true, true, move |n| {
            let fac = nt::factorize(n).expect("positive argument");
            fac.factors()
                .iter()
                .map(|&(p, e)| num_traits::pow::Pow::pow(at_prime(p), e))
                .fold(Rat::one(), |acc, v| acc * v)
        })
    }

    pub fn mobius() -> Self {
        Self::build("mu", true, false, false, |n| rat(nt::mobius(n).expect("positive argument") as i64))
    }

    /// The convolution identity ε(n) = ⌊1/n⌋.
    pub fn epsilon() -> Self {
        Self::build("eps", true, true, false, |n| if n == 1 { Rat::one() } else { Rat::zero() })
    }

    /// δ⁰, the constant function 1.
    pub fn one() -> Self {
        Self::build("one", true, true, false, |_| Rat::one())
    }

    /// δ^a(n) = n^a for an integer exponent.
    pub fn power(a: i64) -> Self {
        if a == 0 {
            return Self::one();
        }
        Self::build(format!("pow:{a}"), true, true, false, move |n| rat_pow(n, a))
    }

    pub fn phi() -> Self {
        Self::build("phi", true, false, true, |n| {
            Rat::from_integer(BigInt::from(nt::euler_phi(n).expect("positive argument")))
        })
    }

    /// Indicator of perfect γ-th powers. Multiplicative: `n = Π p^e` is a
    /// γ-th power iff every `e` is divisible by γ.
    pub fn a_gamma(gamma: u32) -> Result<Self> {
        if gamma == 0 {
            return Err(Error::NonPositive { what: "gamma" });
        }
        if gamma == 1 {
            return Ok(Self::one());
        }
        Ok(Self::build(format!("agamma:{gamma}"), true, false, false, move |n| {
            if nt::is_gamma_power(n, gamma) {
                Rat::one()
            } else {
                Rat::zero()
            }
        }))
    }

    /// Look up a built-in by name: `mu`, `eps`, `one`, `phi`, `pow` (one
    /// integer parameter) or `agamma` (one positive parameter).
    pub fn builtin(name: &str, params: &[i64]) -> Result<Self> {
        let want = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::Arity {
                    context: "builtin parameters",
                    expected: k,
                    found: params.len(),
                })
            }
        };
        match name {
            "mu" => want(0).map(|_| Self::mobius()),
            "eps" => want(0).map(|_| Self::epsilon()),
            "one" => want(0).map(|_| Self::one()),
            "phi" => want(0).map(|_| Self::phi()),
            "pow" => want(1).map(|_| Self::power(params[0])),
            "agamma" => {
                want(1)?;
                let g = u32::try_from(params[0]).map_err(|_| Error::NonPositive { what: "gamma" })?;
                Self::a_gamma(g)
            }
            other => Err(Error::UnknownFunction(other.to_string())),
        }
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn is_multiplicative(&self) -> bool {
        self.0.multiplicative
    }

    pub fn is_completely_multiplicative(&self) -> bool {
        self.0.completely_multiplicative
    }

    /// Evaluate at a positive integer.
    pub fn eval(&self, n: u64) -> Rat {
        assert!(n >= 1, "arithmetic functions are evaluated at positive integers only");
        let Some(memo) = &self.0.memo else {
            return (self.0.eval)(n);
        };
        if let Some(v) = memo.read().expect("memo lock").get(&n) {
            return v.clone();
        }
        let v = (self.0.eval)(n);
        memo.write().expect("memo lock").insert(n, v.clone());
        v
    }

    /// Value at `num/den`, zero unless the quotient is a positive integer.
    pub fn eval_ratio(&self, num: u64, den: u64) -> Rat {
        if den != 0 && num % den == 0 && num != 0 {
            self.eval(num / den)
        } else {
            Rat::zero()
        }
    }
}

/// `(fg)(n) = f(n) g(n)`.
pub fn pointwise_mul(f: &ArithFn, g: &ArithFn) -> ArithFn {
    let (f2, g2) = (f.clone(), g.clone());
    ArithFn::build(
        format!("mul({f},{g})"),
        f.is_multiplicative() && g.is_multiplicative(),
        f.is_completely_multiplicative() && g.is_completely_multiplicative(),
        true,
        move |n| f2.eval(n) * g2.eval(n),
    )
}

/// `(f*g)(n) = Σ_{d|n} f(d) g(n/d)`.
pub fn dirichlet(f: &ArithFn, g: &ArithFn) -> ArithFn {
    let (f2, g2) = (f.clone(), g.clone());
    ArithFn::build(
        format!("dirichlet({f},{g})"),
        f.is_multiplicative() && g.is_multiplicative(),
        false,
        true,
        move |n| {
            nt::divisors(n)
                .expect("positive argument")
                .into_iter()
                .map(|d| f2.eval(d) * g2.eval(n / d))
                .fold(Rat::zero(), |acc, v| acc + v)
        },
    )
}

/// `f^[γ] = a_γ · f`.
pub fn restrict_gamma(f: &ArithFn, gamma: u32) -> Result<ArithFn> {
    if gamma == 0 {
        return Err(Error::NonPositive { what: "gamma" });
    }
    if gamma == 1 {
        return Ok(f.clone());
    }
    let f2 = f.clone();
    Ok(ArithFn::build(
        format!("restrict:{gamma}({f})"),
        f.is_multiplicative(),
        false,
        true,
        move |n| {
            if nt::is_gamma_power(n, gamma) {
                f2.eval(n)
            } else {
                Rat::zero()
            }
        },
    ))
}

/// `f^⟨γ⟩(n) = f(n^γ)`. Panics on evaluation if `n^γ` overflows `u64`.
pub fn dilate(f: &ArithFn, gamma: u32) -> Result<ArithFn> {
    if gamma == 0 {
        return Err(Error::NonPositive { what: "gamma" });
    }
    if gamma == 1 {
        return Ok(f.clone());
    }
    let f2 = f.clone();
    Ok(ArithFn::build(
        format!("dilate:{gamma}({f})"),
        f.is_multiplicative(),
        f.is_completely_multiplicative(),
        true,
        move |n| f2.eval(nt::checked_pow(n, gamma).expect("dilated argument fits in u64")),
    ))
}

/// `(g *_γ f)(n) = Σ_{d^γ | n} f(n/d^γ) g(d^γ)`.
pub fn gamma_convolve(g: &ArithFn, f: &ArithFn, gamma: u32) -> Result<ArithFn> {
    if gamma == 0 {
        return Err(Error::NonPositive { what: "gamma" });
    }
    let (f2, g2) = (f.clone(), g.clone());
    Ok(ArithFn::build(
        format!("gconv:{gamma}({g},{f})"),
        f.is_multiplicative() && g.is_multiplicative(),
        false,
        true,
        move |n| {
            nt::power_divisors(n, gamma)
                .into_iter()
                .map(|dg| f2.eval(n / dg) * g2.eval(dg))
                .fold(Rat::zero(), |acc, v| acc + v)
        },
    ))
}

/// `f_{m+1} *_{γ_m} ⋯ *_{γ_1} f_1`, folded from the right:
/// `((f_{m+1} *_{γ_m} ⋯ *_{γ_2} f_2) *_{γ_1} f_1)`.
pub fn chain_gamma_convolve(fs: &[ArithFn], gammas: &[u32]) -> Result<ArithFn> {
    if fs.len() != gammas.len() + 1 {
        return Err(Error::Arity {
            context: "chain_gamma_convolve",
            expected: gammas.len() + 1,
            found: fs.len(),
        });
    }
    let mut acc = fs.last().expect("nonempty").clone();
    for j in (0..gammas.len()).rev() {
        acc = gamma_convolve(&acc, &fs[j], gammas[j])?;
    }
    Ok(acc)
}
