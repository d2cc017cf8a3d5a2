use std::collections::BTreeMap;
use std::fmt;

use multiram::arithfn::{rat, rat_frac};
use multiram::dseries::*;
use multiram::fourier::{even_coeffs_of_S, ffc_of_S, ramanujan_c, EvenCoeffTable};
use multiram::hyperdet::*;
use multiram::multisum::{MultiSumSpec, WeightFn};
use multiram::{nt, Rat};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::expr::{parse_list, ParseError};
use crate::{Cli, Command, Format, SpecArgs, TableTarget, VerifyTarget};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Arity(String),
    Resource(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Arity(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) | CliError::Arity(s) | CliError::Resource(s) => f.write_str(s),
        }
    }
}

impl From<multiram::Error> for CliError {
    fn from(e: multiram::Error) -> Self {
        match e {
            multiram::Error::Arity { .. } => CliError::Arity(e.to_string()),
            multiram::Error::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.0)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }

    fn report(value: Value) -> Self {
        let code = if value["status"] == "ok" { 0 } else { 1 };
        Output {
            stdout: format!("{value}\n"),
            code,
        }
    }
}

fn parse_nums<T: std::str::FromStr>(src: &str, what: &str) -> Result<Vec<T>> {
    src.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Input(format!("bad {what} entry `{s}`"))))
        .collect()
}

fn build_spec(args: &SpecArgs) -> Result<MultiSumSpec> {
    let src = args.fns.as_deref().ok_or_else(|| CliError::Input("missing --fns".into()))?;
    let fns = parse_list(src)?;
    if fns.is_empty() {
        return Err(CliError::Input("--fns needs at least one function".into()));
    }
    let gammas = match &args.gammas {
        Some(g) => parse_nums(g, "gamma")?,
        None => vec![1; fns.len() - 1],
    };
    let spec = MultiSumSpec::new(gammas, fns)?;
    match &args.weight {
        Some(w) => Ok(spec.with_weight(WeightFn::product(parse_list(w)?))?),
        None => Ok(spec),
    }
}

fn unweighted_spec(args: &SpecArgs) -> Result<MultiSumSpec> {
    if args.weight.is_some() {
        return Err(CliError::Input("this identity is stated for unweighted sums".into()));
    }
    build_spec(args)
}

fn ratio(x: &Rat) -> String {
    x.to_string()
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "mismatch"
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Eval { spec, ns } => eval(cli.format, spec, ns),
        Command::Verify { target } => {
            if cli.format.is_some_and(|f| f != Format::Json) {
                return Err(CliError::Input("verify reports are JSON only".into()));
            }
            verify(target, cli.seed)
        }
        Command::Table { target } => table(cli.format, target),
    }
}

fn eval(format: Option<Format>, args: &SpecArgs, ns: &str) -> Result<Output> {
    let spec = build_spec(args)?;
    let ns: Vec<u64> = parse_nums(ns, "argument")?;
    let value = ratio(&spec.eval(&ns)?);
    Ok(Output::ok(match format.unwrap_or(Format::Plain) {
        Format::Plain => format!("{value}\n"),
        Format::Csv => format!("value\n{value}\n"),
        Format::Json => format!("{}\n", json!({ "value": value })),
    }))
}

fn verify(target: &VerifyTarget, seed: u64) -> Result<Output> {
    let report = |r: VerificationReport| Ok(Output::report(r.to_json()));
    match target {
        VerifyTarget::GammaChain { spec, bound } => {
            let s = unweighted_spec(spec)?;
            report(verify_prop_gamma_chain(s.fns(), s.gammas(), *bound)?)
        }
        VerifyTarget::MultivariableL { spec, gamma0, bound } => {
            report(verify_multivariable_l(&unweighted_spec(spec)?, *gamma0, *bound)?)
        }
        VerifyTarget::PhiSeries { spec, fixed, j, bound } => {
            let s = unweighted_spec(spec)?;
            let fixed: Vec<u64> = parse_nums(fixed, "fixed argument")?;
            match j {
                Some(j) => report(verify_phi_series(&s, &fixed, *j, *bound)?),
                None => {
                    let reports = (1..=s.m() + 1)
                        .map(|j| verify_phi_series(&s, &fixed, j, *bound))
                        .collect::<multiram::Result<Vec<_>>>()?;
                    let all = reports.iter().all(VerificationReport::is_ok);
                    Ok(Output::report(json!({
                        "identity": "phi-series",
                        "reports": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
                        "status": status(all),
                    })))
                }
            }
        }
        VerifyTarget::DoubleSeries { fns, gamma, diagonal, bound } => {
            let fs = parse_list(fns)?;
            if fs.len() != 4 {
                return Err(CliError::Arity(format!("--fns needs f1,f2,g1,g2, got {} functions", fs.len())));
            }
            let run = if *diagonal { verify_borwein_choi } else { verify_double_series };
            report(run(&fs[0], &fs[1], &fs[2], &fs[3], *gamma, *bound)?)
        }
        VerifyTarget::GenRamanujan { m, k, exps, fixed, bound } => {
            let exps: Vec<i64> = parse_nums(exps, "exponent")?;
            let fixed: Vec<u64> = parse_nums(fixed, "fixed argument")?;
            report(verify_gen_ramanujan_series(*m, *k, &exps, &fixed, *bound)?)
        }
        VerifyTarget::FourierTheorem { spec, n1 } => fourier_theorem(spec, n1),
        VerifyTarget::Smith { spec, set } => {
            let set = FactorClosedSet::new(&parse_nums(set, "set element")?)?;
            let s = build_spec(spec)?;
            let (lhs, rhs) = smith_hyperdet_check(&s, &set, &Signature::smith(s.m()))?;
            Ok(Output::report(json!({
                "identity": "smith",
                "set": set.elements(),
                "lhs": ratio(&lhs),
                "rhs": ratio(&rhs),
                "status": status(lhs == rhs),
            })))
        }
        VerifyTarget::Prop41 { family, ks, set, signature } => prop41(family, ks, set, signature.as_deref(), seed),
        VerifyTarget::Lemmas { trials } => Ok(lemmas(*trials, seed)),
    }
}

fn fourier_theorem(args: &SpecArgs, n1s: &str) -> Result<Output> {
    let spec = build_spec(args)?;
    let n1s: Vec<u64> = parse_nums(n1s, "modulus")?;
    if n1s.is_empty() {
        return Err(CliError::Input("--n1 needs at least one modulus".into()));
    }
    let mut mismatch = Value::Null;
    for &n1 in &n1s {
        let closed = ffc_of_S(&spec, n1)?;
        let direct = even_coeffs_of_S(&spec, n1)?;
        let first = closed.iter().find(|(d, a)| direct.get(d) != Some(a)).map(|(d, a)| {
            let b = direct.get(d).map_or_else(|| "missing".to_string(), ratio);
            json!({"n1": n1, "d": d, "closed": ratio(a), "direct": b})
        });
        if let Some(found) = first {
            mismatch = found;
            break;
        }
    }
    Ok(Output::report(json!({
        "identity": "fourier-theorem",
        "checked": n1s,
        "status": status(mismatch.is_null()),
        "first_mismatch": mismatch,
    })))
}

fn default_signature(m: usize, total: usize) -> Signature {
    let mut members: Vec<usize> = (m + 1..=m + total).collect();
    if total % 2 == 1 {
        members.insert(0, 1);
    }
    Signature::new(members).expect("positive members")
}

/// Divisor tuples of `moduli` with block sizes `ks`, lexicographic.
fn divisor_keys(moduli: &[u64], ks: &[usize]) -> Result<Vec<Vec<u64>>> {
    let mut keys = vec![Vec::new()];
    for (&r, &k) in moduli.iter().zip(ks) {
        let divs = nt::divisors(r)?;
        for _ in 0..k {
            keys = keys
                .into_iter()
                .flat_map(|key: Vec<u64>| divs.iter().map(move |&d| [key.clone(), vec![d]].concat()))
                .collect();
        }
    }
    Ok(keys)
}

fn prop41(family: &str, ks: &str, set: &str, signature: Option<&str>, seed: u64) -> Result<Output> {
    let set = FactorClosedSet::new(&parse_nums(set, "set element")?)?;
    let ks: Vec<usize> = parse_nums(ks, "block size")?;
    let m = ks.len();
    let total: usize = ks.iter().sum();
    let sig = match signature {
        Some(s) => Signature::new(parse_nums::<usize>(s, "signature member")?)?,
        None => default_signature(m, total),
    };
    let (lhs, rhs) = match family {
        "c" => {
            let f = |moduli: &[u64], ns: &[u64]| {
                let mut value = rat(1);
                let mut it = ns.iter();
                for (&r, &k) in moduli.iter().zip(&ks) {
                    for &n in it.by_ref().take(k) {
                        value *= rat(ramanujan_c(r, n).expect("positive arguments"));
                    }
                }
                value
            };
            even_hyperdet_check(f, &ks, &set, &sig)?
        }
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xs = set.elements();
            let mut tables = BTreeMap::new();
            let mut moduli_list = vec![Vec::new()];
            for _ in 0..m {
                moduli_list = moduli_list
                    .into_iter()
                    .flat_map(|v: Vec<u64>| xs.iter().map(move |&x| [v.clone(), vec![x]].concat()))
                    .collect();
            }
            for moduli in moduli_list {
                let coeffs = divisor_keys(&moduli, &ks)?
                    .into_iter()
                    .map(|d| (d, rat_frac(rng.gen_range(-6..=6), rng.gen_range(1..=4))))
                    .collect();
                let table = EvenCoeffTable::from_coeffs(moduli.clone(), ks.clone(), coeffs)?;
                tables.insert(moduli, table);
            }
            let f = |moduli: &[u64], ns: &[u64]| tables[moduli].reconstruct(ns).expect("arity fixed");
            even_hyperdet_check(f, &ks, &set, &sig)?
        }
        other => return Err(CliError::Input(format!("unknown family `{other}` (expected c or random)"))),
    };
    Ok(Output::report(json!({
        "identity": "prop41",
        "family": family,
        "ks": ks,
        "set": set.elements(),
        "signature": sig.members().collect::<Vec<_>>(),
        "lhs": ratio(&lhs),
        "rhs": ratio(&rhs),
        "status": status(lhs == rhs),
    })))
}

fn random_matrix(rng: &mut impl Rng, dim: usize, order: usize) -> Hypermatrix {
    let entries = (0..order.pow(dim as u32))
        .map(|_| rat_frac(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
        .collect();
    Hypermatrix::new(dim, order, entries).expect("sized to fit")
}

fn signatures(k: usize) -> impl Iterator<Item = Signature> {
    (0..1usize << k).map(move |bits| Signature::new((1..=k).filter(|j| bits >> (j - 1) & 1 == 1)).expect("positive"))
}

fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}

fn lemmas(trials: usize, seed: u64) -> Output {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let det = |a: &Hypermatrix, s: &Signature| hyperdet(a, s).expect("within the guard");
    let mut failures: BTreeMap<&str, usize> = [
        "axis-permutation",
        "odd-signature",
        "order-permutation",
        "product",
        "two-dim-reduction",
    ]
    .into_iter()
    .map(|name| (name, 0))
    .collect();
    for _ in 0..trials {
        let (k, n) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let a = random_matrix(&mut rng, k, n);
        let by_order = permute_order(&a, &random_perm(&mut rng, n)).expect("valid permutation");
        let pi = random_perm(&mut rng, k);
        let by_axes = permute_axes(&a, &pi).expect("valid permutation");
        for sig in signatures(k) {
            let base = det(&a, &sig);
            if det(&by_order, &sig) != base {
                *failures.get_mut("order-permutation").unwrap() += 1;
            }
            if det(&by_axes, &sig) != det(&a, &sig.preimage(&pi).expect("valid permutation")) {
                *failures.get_mut("axis-permutation").unwrap() += 1;
            }
            if sig.len() % 2 == 1 && !base.is_zero() {
                *failures.get_mut("odd-signature").unwrap() += 1;
            }
        }
        // with a matrix on the right (l = 2, L = {2}) the product lemma reads
        // det_{K ∪ {k}}(AB) = det_{K ∪ {k}} A · det B for odd |K| ⊆ {1..k-1}
        let b = random_matrix(&mut rng, 2, n);
        let ab = cayley_product(&a, &b).expect("orders match");
        let sig = Signature::new([rng.gen_range(1..k), k]).expect("positive");
        if det(&ab, &sig) != det(&a, &sig) * det(&b, &Signature::full(2)) {
            *failures.get_mut("product").unwrap() += 1;
        }
        let square = random_matrix(&mut rng, 2, 4);
        if det(&square, &Signature::full(2)) != determinant(&square).expect("two-dimensional") {
            *failures.get_mut("two-dim-reduction").unwrap() += 1;
        }
    }
    let all = failures.values().all(|&f| f == 0);
    let checks: Vec<Value> = failures
        .iter()
        .map(|(name, &f)| json!({"name": name, "failures": f, "status": status(f == 0)}))
        .collect();
    Output::report(json!({
        "identity": "lemmas",
        "seed": seed,
        "trials": trials,
        "checks": checks,
        "status": status(all),
    }))
}

fn check_entries(needed: u128, limit: u64) -> Result<()> {
    if needed > limit as u128 {
        return Err(CliError::Resource(format!(
            "table needs {needed} entries, above --max-entries {limit}"
        )));
    }
    Ok(())
}

/// Rows of a table: header plus values, rendered per format.
struct Rows {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Rows {
    fn csv(&self) -> String {
        let mut out = self.header.join(",") + "\n";
        for r in &self.rows {
            out += &(r.join(",") + "\n");
        }
        out
    }

    fn plain(&self) -> String {
        self.rows.iter().map(|r| r.join(" ") + "\n").collect()
    }
}

fn table(format: Option<Format>, target: &TableTarget) -> Result<Output> {
    let out = match target {
        TableTarget::C { kmax, nmax, max_entries } => {
            check_entries(*kmax as u128 * *nmax as u128, *max_entries)?;
            let mut rows = Vec::new();
            for k in 1..=*kmax {
                for n in 1..=*nmax {
                    rows.push((k, n, ramanujan_c(k, n)?));
                }
            }
            match format.unwrap_or(Format::Csv) {
                Format::Json => {
                    let v: Vec<Value> = rows.iter().map(|&(k, n, c)| json!({"k": k, "n": n, "c": c})).collect();
                    format!("{}\n", Value::Array(v))
                }
                Format::Csv => Rows {
                    header: vec!["k".into(), "n".into(), "c".into()],
                    rows: rows.iter().map(|&(k, n, c)| vec![k.to_string(), n.to_string(), c.to_string()]).collect(),
                }
                .csv(),
                Format::Plain => rows
                    .chunks(*nmax as usize)
                    .map(|r| r.iter().map(|&(_, _, c)| c.to_string()).collect::<Vec<_>>().join(" ") + "\n")
                    .collect(),
            }
        }
        TableTarget::Sums { spec, nmax, max_entries } => {
            let s = build_spec(spec)?;
            let arity = s.m() + 1;
            check_entries((*nmax as u128).saturating_pow(arity as u32), *max_entries)?;
            let mut tuples = vec![Vec::new()];
            for _ in 0..arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t: Vec<u64>| (1..=*nmax).map(move |n| [t.clone(), vec![n]].concat()))
                    .collect();
            }
            let values = s.eval_many(&tuples)?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => {
                    let v: Vec<Value> = tuples
                        .iter()
                        .zip(&values)
                        .map(|(ns, x)| json!({"ns": ns, "value": ratio(x)}))
                        .collect();
                    format!("{}\n", Value::Array(v))
                }
                f => {
                    let rows = Rows {
                        header: (1..=arity).map(|i| format!("n{i}")).chain(["value".into()]).collect(),
                        rows: tuples
                            .iter()
                            .zip(&values)
                            .map(|(ns, x)| ns.iter().map(u64::to_string).chain([ratio(x)]).collect())
                            .collect(),
                    };
                    if f == Format::Csv {
                        rows.csv()
                    } else {
                        rows.plain()
                    }
                }
            }
        }
        TableTarget::Fourier { spec, n1 } => {
            let t = ffc_of_S(&build_spec(spec)?, *n1)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => format!("{}\n", t.to_json()),
                f => {
                    let rows = Rows {
                        header: (1..=t.arity()).map(|i| format!("d{i}")).chain(["value".into()]).collect(),
                        rows: t
                            .iter()
                            .map(|(d, x)| d.iter().map(u64::to_string).chain([ratio(x)]).collect())
                            .collect(),
                    };
                    if f == Format::Csv {
                        rows.csv()
                    } else {
                        rows.plain()
                    }
                }
            }
        }
        TableTarget::Closure { set } => {
            let c = factor_closure(&parse_nums(set, "set element")?)?;
            let xs: Vec<String> = c.elements().iter().map(u64::to_string).collect();
            match format.unwrap_or(Format::Plain) {
                Format::Plain => xs.join(",") + "\n",
                Format::Csv => format!("x\n{}\n", xs.join("\n")),
                Format::Json => format!("{}\n", json!({ "closure": c.elements() })),
            }
        }
        TableTarget::Hypermatrix { spec, set } => {
            let set = FactorClosedSet::new(&parse_nums(set, "set element")?)?;
            let h = build_S_hypermatrix(&build_spec(spec)?, &set)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => format!("{}\n", h.to_json()),
                f => {
                    let dim = h.dim();
                    let mut idx = vec![1usize; dim];
                    let mut rows = Vec::new();
                    for x in h.entries() {
                        rows.push(idx.iter().map(usize::to_string).chain([ratio(x)]).collect());
                        for j in (0..dim).rev() {
                            if idx[j] < h.order() {
                                idx[j] += 1;
                                break;
                            }
                            idx[j] = 1;
                        }
                    }
                    let rows = Rows {
                        header: (1..=dim).map(|i| format!("i{i}")).chain(["value".into()]).collect(),
                        rows,
                    };
                    if f == Format::Csv {
                        rows.csv()
                    } else {
                        rows.plain()
                    }
                }
            }
        }
    };
    Ok(Output::ok(out))
}
