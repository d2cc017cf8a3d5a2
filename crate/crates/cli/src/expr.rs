//! Parser for arithmetic-function expressions.
//!
//! ```text
//! expr  := name [':' int] ['(' expr (',' expr)* ')']
//! list  := [expr (',' expr)*]
//! ```
//!
//! Leaves: `mu`, `eps`, `one`, `phi`, `pow:a`, `agamma:g`.
//! Combinators: `restrict:g(e)`, `dilate:g(e)`, `dirichlet(e, e)`,
//! `mul(e, e)`, `gconv:g(e, e)` (the first argument is the restricted one).

use multiram::arithfn::{dilate, dirichlet, gamma_convolve, pointwise_mul, restrict_gamma, ArithFn};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Call { name: String, param: Option<i64>, args: Vec<Node> },
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, what: &str) -> Result<T, ParseError> {
        Err(ParseError(format!("{what} at offset {} in `{}`", self.pos, self.src)))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next().filter(|&c| pred(c)) {
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn node(&mut self) -> Result<Node, ParseError> {
        self.skip_ws();
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
        if name.is_empty() {
            return self.err("expected a function name");
        }
        let param = if self.eat(':') {
            self.skip_ws();
            let start = self.pos;
            self.eat('-');
            self.take_while(|c| c.is_ascii_digit());
            match self.src[start..self.pos].parse::<i64>() {
                Ok(v) => Some(v),
                Err(_) => return self.err("expected an integer parameter"),
            }
        } else {
            None
        };
        let mut args = Vec::new();
        if self.eat('(') {
            loop {
                args.push(self.node()?);
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return self.err("expected `,` or `)`");
                }
            }
        }
        Ok(Node::Call { name, param, args })
    }
}

fn build(node: &Node) -> Result<ArithFn, ParseError> {
    let Node::Call { name, param, args } = node;
    let want = |n: usize| -> Result<Vec<ArithFn>, ParseError> {
        if args.len() != n {
            return Err(ParseError(format!("`{name}` takes {n} argument(s), got {}", args.len())));
        }
        args.iter().map(build).collect()
    };
    let gamma = || -> Result<u32, ParseError> {
        match param {
            Some(g) if *g >= 1 => u32::try_from(*g).map_err(|_| ParseError(format!("`{name}` parameter too large"))),
            _ => Err(ParseError(format!("`{name}` needs a positive parameter, e.g. `{name}:2`"))),
        }
    };
    let lib = |e: multiram::Error| ParseError(e.to_string());
    match name.as_str() {
        "restrict" => restrict_gamma(&want(1)?[0], gamma()?).map_err(lib),
        "dilate" => dilate(&want(1)?[0], gamma()?).map_err(lib),
        "gconv" => {
            let fs = want(2)?;
            gamma_convolve(&fs[0], &fs[1], gamma()?).map_err(lib)
        }
        "dirichlet" | "mul" => {
            if param.is_some() {
                return Err(ParseError(format!("`{name}` takes no parameter")));
            }
            let fs = want(2)?;
            Ok(if name == "mul" { pointwise_mul(&fs[0], &fs[1]) } else { dirichlet(&fs[0], &fs[1]) })
        }
        _ => {
            want(0)?;
            let params: Vec<i64> = param.iter().copied().collect();
            ArithFn::builtin(name, &params).map_err(lib)
        }
    }
}

/// Parses a comma-separated list of expressions; the empty string is the
/// empty list.
pub fn parse_list(src: &str) -> Result<Vec<ArithFn>, ParseError> {
    let mut p = Parser { src, pos: 0 };
    p.skip_ws();
    if p.pos == src.len() {
        return Ok(Vec::new());
    }
    let mut out = vec![build(&p.node()?)?];
    while p.eat(',') {
        out.push(build(&p.node()?)?);
    }
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}
