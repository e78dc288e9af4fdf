//! Curves `y^2 + h(x) y = f(x)` over finite fields and naive point counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::field::{Elem, FiniteField, ZERO};
use crate::arith::{parse_mpoly, parse_poly, prime_power, MPoly, Rational};
use crate::error::{Error, Result};

/// Default enumeration budget for [`count_points`].
pub const COUNT_BUDGET: u64 = 100_000_000;

/// Polynomial over a finite field, ascending, no trailing zeros.
pub type FqPoly = Vec<Elem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    EllipticWeierstrass,
    Hyperelliptic,
}

/// A nonsingular model `y^2 + h(x) y = f(x)`.
#[derive(Clone, Debug)]
pub struct CurveModel {
    pub field: FiniteField,
    pub h: FqPoly,
    pub f: FqPoly,
    pub genus: usize,
    pub kind: CurveKind,
}

pub(crate) mod poly {
    use super::*;

    pub fn trim(fld: &FiniteField, mut a: FqPoly) -> FqPoly {
        while a.last().is_some_and(|c| fld.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &FqPoly) -> isize {
        a.len() as isize - 1
    }

    pub fn coeff(a: &FqPoly, i: usize) -> Elem {
        a.get(i).copied().unwrap_or(ZERO)
    }

    pub fn add(fld: &FiniteField, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.len().max(b.len());
        trim(fld, (0..n).map(|i| fld.add(&coeff(a, i), &coeff(b, i))).collect())
    }

    pub fn scale(fld: &FiniteField, a: &FqPoly, c: &Elem) -> FqPoly {
        trim(fld, a.iter().map(|x| fld.mul(x, c)).collect())
    }

    pub fn mul(fld: &FiniteField, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![ZERO; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = fld.add(&out[i + j], &fld.mul(x, y));
            }
        }
        trim(fld, out)
    }

    pub fn derivative(fld: &FiniteField, a: &FqPoly) -> FqPoly {
        trim(
            fld,
            a.iter().enumerate().skip(1).map(|(i, c)| fld.scale(c, i as u64 % fld.p())).collect(),
        )
    }

    pub fn rem(fld: &FiniteField, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let mut r = a.clone();
        let db = b.len() - 1;
        let inv = fld.inv(&b[db]).expect("nonzero leading coefficient");
        while r.len() > db {
            let k = r.len() - 1;
            let c = fld.mul(&r[k], &inv);
            for i in 0..=db {
                r[k - db + i] = fld.sub(&r[k - db + i], &fld.mul(&c, &b[i]));
            }
            r = trim(fld, r);
        }
        r
    }

    pub fn gcd(fld: &FiniteField, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(fld, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    #[inline]
    pub fn eval(fld: &FiniteField, a: &FqPoly, x: &Elem) -> Elem {
        a.iter().rev().fold(ZERO, |acc, c| fld.add(&fld.mul(&acc, x), c))
    }
}

impl CurveModel {
    /// Validate and classify `y^2 + h y = f`.
    pub fn new(field: FiniteField, h: FqPoly, f: FqPoly) -> Result<Self> {
        let h = poly::trim(&field, h);
        let f = poly::trim(&field, f);
        if f.is_empty() && h.is_empty() {
            return Err(Error::Singular("h and f are both zero".into()));
        }
        let df = poly::deg(&f).max(0) as usize;
        let dh = poly::deg(&h).max(0) as usize;
        let g = df.div_ceil(2).max(dh).saturating_sub(1);
        if g == 0 {
            return Err(Error::domain("curve has genus 0"));
        }
        let monic_cubic = df == 3 && f[3] == field.one() && dh <= 1;
        let kind = if g == 1 && monic_cubic { CurveKind::EllipticWeierstrass } else { CurveKind::Hyperelliptic };
        let c = CurveModel { field, h, f, genus: g, kind };
        match kind {
            CurveKind::EllipticWeierstrass => {
                if c.field.is_zero(&c.discriminant().expect("weierstrass")) {
                    return Err(Error::Singular("discriminant is zero".into()));
                }
            }
            CurveKind::Hyperelliptic => c.check_smooth()?,
        }
        Ok(c)
    }

    /// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
    pub fn weierstrass(field: FiniteField, a: [Elem; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let one = field.one();
        Self::new(field, vec![a3, a1], vec![a6, a4, a2, one])
    }

    /// `[a1, a2, a3, a4, a6]` for a Weierstrass model.
    pub fn a_invariants(&self) -> Option<[Elem; 5]> {
        (self.kind == CurveKind::EllipticWeierstrass).then(|| {
            let c = |p: &FqPoly, i| poly::coeff(p, i);
            [c(&self.h, 1), c(&self.f, 2), c(&self.h, 0), c(&self.f, 1), c(&self.f, 0)]
        })
    }

    pub fn discriminant(&self) -> Option<Elem> {
        let [a1, a2, a3, a4, a6] = self.a_invariants()?;
        let k = &self.field;
        let m = |a: &Elem, b: &Elem| k.mul(a, b);
        let s = |a: &Elem, c: i64| k.mul(a, &k.from_i64(c));
        let b2 = k.add(&m(&a1, &a1), &s(&a2, 4));
        let b4 = k.add(&s(&a4, 2), &m(&a1, &a3));
        let b6 = k.add(&m(&a3, &a3), &s(&a6, 4));
        let b8 = {
            let t1 = m(&m(&a1, &a1), &a6);
            let t2 = s(&m(&a2, &a6), 4);
            let t3 = m(&m(&a1, &a3), &a4);
            let t4 = m(&a2, &m(&a3, &a3));
            let t5 = m(&a4, &a4);
            k.sub(&k.add(&k.sub(&k.add(&t1, &t2), &t3), &t4), &t5)
        };
        let d1 = k.neg(&m(&m(&b2, &b2), &b8));
        let d2 = s(&m(&m(&b4, &b4), &b4), 8);
        let d3 = s(&m(&b6, &b6), 27);
        let d4 = s(&m(&m(&b2, &b4), &b6), 9);
        Some(k.add(&k.sub(&k.sub(&d1, &d2), &d3), &d4))
    }

    /// Nonsingularity of the affine model and of the chart at infinity.
    fn check_smooth(&self) -> Result<()> {
        let k = &self.field;
        let g = self.genus;
        if k.p() != 2 {
            let d = poly::add(k, &poly::mul(k, &self.h, &self.h), &poly::scale(k, &self.f, &k.from_u64(4)));
            let dd = poly::deg(&d);
            if dd < 2 * g as isize + 1 {
                return Err(Error::Singular(format!("h^2 + 4f has degree {dd} < {}", 2 * g + 1)));
            }
            if poly::deg(&poly::gcd(k, &d, &poly::derivative(k, &d))) > 0 {
                return Err(Error::Singular("h^2 + 4f is not squarefree".into()));
            }
            return Ok(());
        }
        if self.h.is_empty() {
            return Err(Error::Singular("h = 0 in characteristic 2".into()));
        }
        let h1 = poly::derivative(k, &self.h);
        let f1 = poly::derivative(k, &self.f);
        let e = poly::add(k, &poly::mul(k, &poly::mul(k, &h1, &h1), &self.f), &poly::mul(k, &f1, &f1));
        if poly::deg(&poly::gcd(k, &self.h, &e)) > 0 {
            return Err(Error::Singular("affine singular point".into()));
        }
        let c = |p: &FqPoly, i| poly::coeff(p, i);
        let (h0, h1, f0, f1) = (c(&self.h, g + 1), c(&self.h, g), c(&self.f, 2 * g + 2), c(&self.f, 2 * g + 1));
        if k.is_zero(&h0) && k.is_zero(&k.add(&k.mul(&k.square(&h1), &f0), &k.square(&f1))) {
            return Err(Error::Singular("singular point at infinity".into()));
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.field.size()
    }

    /// The same equation over `F_{q^e}`.
    pub fn base_change(&self, e: usize) -> Result<CurveModel> {
        if e == 1 {
            return Ok(self.clone());
        }
        let big = FiniteField::new(self.field.p(), self.field.degree() * e)?;
        let img = big.embedding_of(&self.field)?;
        let map = |v: &FqPoly| v.iter().map(|c| big.embed(&self.field, &img, c)).collect::<Vec<_>>();
        let (h, f) = (map(&self.h), map(&self.f));
        Ok(CurveModel { field: big, h, f, genus: self.genus, kind: self.kind })
    }

    /// Parse `y^2 + h(x)*y = f(x) over GF(q)`; `GF(p^a, m(w))` fixes the
    /// modulus, and coefficients may use the generator `w`.
    pub fn parse(s: &str) -> Result<Self> {
        let (eq, fld) = s
            .split_once(" over ")
            .ok_or_else(|| Error::Parse(format!("expected `<equation> over GF(q)`: `{s}`")))?;
        let field = parse_field(fld.trim())?;
        let (lhs, rhs) = eq
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected an equation: `{eq}`")))?;
        let vars = ["x", "y", "w"];
        let mut total = parse_mpoly(lhs, &vars)?.sub(&parse_mpoly(rhs, &vars)?);
        if total.degree_in(1) != 2 {
            return Err(Error::Parse("equation must have degree 2 in y".into()));
        }
        let lead = total
            .coeff_of(1, 2)
            .as_constant()
            .filter(|c| c.abs() == Rational::from_integer(1.into()))
            .ok_or_else(|| Error::Parse("the y^2 coefficient must be 1".into()))?;
        if lead.is_negative() {
            total = total.neg();
        }
        let h = to_fq_poly(&field, &total.coeff_of(1, 1))?;
        let f = to_fq_poly(&field, &total.coeff_of(1, 0).neg())?;
        Self::new(field, h, f)
    }
}

fn parse_field(s: &str) -> Result<FiniteField> {
    let inner = s
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected GF(...): `{s}`")))?;
    let (size, modulus) = match inner.split_once(',') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (inner.trim(), None),
    };
    let bad = || Error::Parse(format!("bad field size `{size}`"));
    let (p, a) = match size.split_once('^') {
        Some((p, a)) => (
            p.trim().parse::<u64>().map_err(|_| bad())?,
            a.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => prime_power(size.parse::<u64>().map_err(|_| bad())?).ok_or_else(bad)?,
    };
    if prime_power(p) != Some((p, 1)) {
        return Err(Error::Parse(format!("{p} is not prime")));
    }
    match modulus {
        None => FiniteField::new(p, a as usize),
        Some(m) => {
            let poly = parse_poly(m, "w")?;
            if poly.degree() != Some(a as usize) {
                return Err(Error::Parse(format!("modulus `{m}` does not have degree {a}")));
            }
            let cs = poly
                .coeffs()
                .iter()
                .map(|c| reduce_rational(p, c))
                .collect::<Result<Vec<_>>>()?;
            FiniteField::with_modulus(p, cs)
        }
    }
}

fn reduce_rational(p: u64, c: &Rational) -> Result<u64> {
    let pb = BigInt::from(p);
    let num = c.numer().mod_floor(&pb).to_u64().expect("reduced");
    let den = c.denom().mod_floor(&pb).to_u64().expect("reduced");
    if den == 0 {
        return Err(Error::Parse(format!("coefficient {c} has a denominator divisible by {p}")));
    }
    let fp = crate::arith::Fp::new(p);
    Ok(fp.mul(num, fp.inv(den)))
}

/// Coefficients in `x` of a polynomial in `(x, _, w)`.
fn to_fq_poly(field: &FiniteField, m: &MPoly) -> Result<FqPoly> {
    let mut out = vec![ZERO; m.degree_in(0) as usize + 1];
    for (e, c) in m.terms() {
        let w = field.pow(&field.gen(), e[2] as u128);
        let v = field.scale(&w, reduce_rational(field.p(), c)?);
        out[e[0] as usize] = field.add(&out[e[0] as usize], &v);
    }
    Ok(poly::trim(field, out))
}

fn display_poly(k: &FiniteField, a: &FqPoly) -> String {
    let mut parts = Vec::new();
    for (i, c) in a.iter().enumerate().rev() {
        if k.is_zero(c) {
            continue;
        }
        let cs = k.display(c);
        let cs = if k.is_prime_field_elem(c) { cs } else { format!("({cs})") };
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        parts.push(match (mono.is_empty(), cs == "1") {
            (true, _) => cs,
            (false, true) => mono,
            (false, false) => format!("{cs}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        let lhs = match self.h.len() {
            0 => "y^2".to_string(),
            1 if self.h[0] == k.one() => "y^2 + y".to_string(),
            1 => format!("y^2 + {}*y", display_poly(k, &self.h)),
            _ => format!("y^2 + ({})*y", display_poly(k, &self.h)),
        };
        write!(out, "{lhs} = {} over ", display_poly(k, &self.f))?;
        if k.degree() == 1 {
            write!(out, "GF({})", k.p())
        } else {
            let m: Vec<Elem> = k.modulus().iter().map(|&c| k.from_u64(c)).collect();
            let ms = display_poly(&FiniteField::new(k.p(), 1).expect("prime field"), &m).replace('x', "w");
            write!(out, "GF({}^{}, {ms})", k.p(), k.degree())
        }
    }
}

/// `#C(F_{q^e})` on the smooth model, with the default budget.
pub fn count_points(c: &CurveModel, ext_degree: usize) -> Result<u64> {
    count_points_with_budget(c, ext_degree, COUNT_BUDGET)
}

pub fn count_points_with_budget(c: &CurveModel, ext_degree: usize, budget: u64) -> Result<u64> {
    if ext_degree == 0 {
        return Err(Error::domain("extension degree must be positive"));
    }
    let total_bits = (c.field.degree() * ext_degree) as f64 * (c.field.p() as f64).log2();
    if total_bits > 62.0 || c.field.size().pow(ext_degree as u32) > budget {
        return Err(Error::Budget(format!(
            "q^{ext_degree} = {}^{ext_degree} exceeds the enumeration budget {budget}",
            c.q()
        )));
    }
    let cc = c.base_change(ext_degree)?;
    Ok(affine_count(&cc) + infinity_count(&cc))
}

fn infinity_count(c: &CurveModel) -> u64 {
    let g = c.genus;
    let k = &c.field;
    k.quadratic_solutions(&poly::coeff(&c.h, g + 1), &poly::coeff(&c.f, 2 * g + 2))
}

fn chunks(q: u64) -> Vec<(u64, u64)> {
    let size = (q / (rayon::current_num_threads() as u64 * 16)).clamp(1024, 1 << 20);
    (0..q.div_ceil(size)).map(|i| (i * size, ((i + 1) * size).min(q))).collect()
}

fn affine_count(c: &CurveModel) -> u64 {
    let k = &c.field;
    let q = k.size();
    if k.p() != 2 {
        let d = poly::add(k, &poly::mul(k, &c.h, &c.h), &poly::scale(k, &c.f, &k.from_u64(4)));
        let sum: i64 = chunks(q)
            .into_par_iter()
            .map(|(lo, hi)| {
                let mut x = k.from_index(lo);
                let mut acc = 0i64;
                for _ in lo..hi {
                    acc += k.chi(&poly::eval(k, &d, &x)) as i64;
                    k.increment(&mut x);
                }
                acc
            })
            .sum();
        return (q as i64 + sum) as u64;
    }
    chunks(q)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut x = k.from_index(lo);
            let mut hs = Vec::with_capacity((hi - lo) as usize);
            let mut fs = Vec::with_capacity((hi - lo) as usize);
            for _ in lo..hi {
                hs.push(k.square(&poly::eval(k, &c.h, &x)));
                fs.push(poly::eval(k, &c.f, &x));
                k.increment(&mut x);
            }
            let inv = k.batch_inv(&hs);
            hs.iter()
                .zip(&fs)
                .zip(&inv)
                .map(|((h2, f), i)| {
                    if k.is_zero(h2) {
                        1
                    } else if k.trace(&k.mul(f, i)) == 0 {
                        2
                    } else {
                        0
                    }
                })
                .sum::<u64>()
        })
        .sum()
}

/// Direct enumeration of projective points, for cross-checks on tiny fields.
pub fn brute_force_count(c: &CurveModel) -> u64 {
    let k = &c.field;
    let q = k.size();
    let mut n = 0;
    for xi in 0..q {
        let x = k.from_index(xi);
        let hx = poly::eval(k, &c.h, &x);
        let fx = poly::eval(k, &c.f, &x);
        for yi in 0..q {
            let y = k.from_index(yi);
            if k.add(&k.square(&y), &k.mul(&hx, &y)) == fx {
                n += 1;
            }
        }
    }
    let g = c.genus;
    let (hc, fc) = (poly::coeff(&c.h, g + 1), poly::coeff(&c.f, 2 * g + 2));
    for yi in 0..q {
        let y = k.from_index(yi);
        if k.add(&k.square(&y), &k.mul(&hc, &y)) == fc {
            n += 1;
        }
    }
    n
}
