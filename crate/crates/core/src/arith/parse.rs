//! Polynomial literal parser.
//!
//! Accepts sums of products such as `x^4 + 11*x^3 - 3/2 x + (x+1)^2`:
//! integers and fractions, named variables, `+ - * /`, `^` with a
//! nonnegative integer exponent, parentheses, and implicit multiplication.
//! Division is only allowed by a constant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Rational, UniPoly};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over Q in a fixed list of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms keyed by exponent vectors.
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient of `var_i^k`, as a polynomial in the remaining variables
    /// (the slot `i` is kept at zero).
    pub fn coeff_of(&self, i: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e2 = e.clone();
                e2[i] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// View as a univariate polynomial in variable `i`; fails if another
    /// variable occurs.
    pub fn to_univariate(&self, i: usize) -> Result<UniPoly> {
        let mut cs = vec![Rational::zero(); self.degree_in(i) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k != 0) {
                return Err(Error::Parse("unexpected variable in univariate polynomial".into()));
            }
            cs[e[i] as usize] += c;
        }
        Ok(UniPoly::new(cs))
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().unwrap()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {}", self.pos))
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    let c = f.as_constant().ok_or_else(|| self.err("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let f = self.power()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                    if k > 4096 {
                        return Err(self.err("exponent too large"));
                    }
                    return Ok(base.pow(k));
                }
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(MPoly::constant(n, Rational::from_integer(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(MPoly::var(n, i)),
                    None => Err(Error::Parse(format!("unknown variable `{name}`"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("missing `)`")),
                }
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Parse an expression in the given variables.
pub fn parse_mpoly(s: &str, vars: &[&str]) -> Result<MPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, vars };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parse a univariate polynomial literal in `var`.
pub fn parse_poly(s: &str, var: &str) -> Result<UniPoly> {
    parse_mpoly(s, &[var])?.to_univariate(0)
}

/// Parse `a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let p = parse_mpoly(s, &[])?;
    p.as_constant().ok_or_else(|| Error::Parse(format!("not a rational number: `{s}`")))
}

impl MPoly {
    /// Parse with an explicit variable list.
    pub fn parse(s: &str, vars: &[&str]) -> Result<MPoly> {
        parse_mpoly(s, vars)
    }

    /// Substitute `subs[i]` for variable `i`; the substitutes share their own
    /// variable list.
    pub fn compose(&self, subs: &[MPoly]) -> MPoly {
        let nv = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut out = MPoly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(nv, c.clone());
            for (s, &k) in subs.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&s.pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_terms(&self) -> Option<BTreeMap<Vec<u32>, BigInt>> {
        self.terms
            .iter()
            .map(|(e, c)| c.is_integer().then(|| (e.clone(), c.to_integer())))
            .collect()
    }

    /// Render in graded-descending order, e.g. `x^3 - 3*x*y^2 - 4`.
    pub fn display_with(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for e in keys {
            let c = &self.terms[e];
            let neg = c < &Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{abs}*{}", mono.join("*")));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn univariate_literals() {
        let f = parse_poly("x^4 + 11*x^3 + 51x^2 + 121*x + 121", "x").unwrap();
        assert_eq!(f, UniPoly::from_ints(&[121, 121, 51, 11, 1]));
        let g = parse_poly("(x^2 - 5)^2", "x").unwrap();
        assert_eq!(g, UniPoly::from_ints(&[25, 0, -10, 0, 1]));
        let h = parse_poly("1/2 - 3/4*x", "x").unwrap();
        assert_eq!(h.coeffs(), &[Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into())]);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-7/14").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("12").unwrap(), rat(12));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn bivariate() {
        let f = parse_mpoly("x^3 - 3*x*y^2 - y^3 - 6x^2 - 3xy + 9x + 3y - 4", &["x", "y"]);
        // `xy` lexes as one identifier, which is rejected
        assert!(f.is_err());
        let f = parse_mpoly("x^3 - 3*x*y^2 - y^3 - 6x^2 - 3x y + 9x + 3y - 4", &["x", "y"]).unwrap();
        assert_eq!(f.eval(&[rat(1), rat(0)]), rat(0));
        assert_eq!(f.eval(&[rat(22), rat(-63)]), rat(0));
        assert_eq!(f.display_with(&["x", "y"]), "x^3 - 3*x*y^2 - y^3 - 6*x^2 - 3*x*y + 9*x + 3*y - 4");
        let shift = f.compose(&[MPoly::var(2, 0).add(&MPoly::constant(2, rat(1))), MPoly::var(2, 1)]);
        assert_eq!(shift.eval(&[rat(0), rat(0)]), rat(0));
        assert_eq!(shift.eval(&[rat(21), rat(-63)]), rat(0));
    }

    #[test]
    fn errors() {
        assert!(parse_poly("x^", "x").is_err());
        assert!(parse_poly("(x + 1", "x").is_err());
        assert!(parse_poly("x / x", "x").is_err());
        assert!(parse_poly("", "x").is_err());
        assert!(parse_poly("x $ 2", "x").is_err());
    }
}
