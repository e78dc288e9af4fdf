use num_traits::{One, Zero};

use super::{Rational, UniPoly};
use crate::error::{Error, Result};

/// Resultant of two polynomials over Q.
///
/// Runs the Euclidean remainder sequence over Q, which stays exact because
/// every intermediate is a reduced rational. Degenerate inputs follow the
/// usual conventions: a zero argument gives 0, and `Res(f, c) = c^deg f`.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> Result<Rational> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::domain("resultant of two zero polynomials"));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Rational::zero());
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut acc = Rational::one();
    loop {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        if n == 0 {
            return Ok(acc * pow(&b.lc(), m));
        }
        if m == 0 {
            return Ok(acc * pow(&a.lc(), n));
        }
        let r = a.rem(&b)?;
        if r.is_zero() {
            return Ok(Rational::zero());
        }
        let k = r.degree().unwrap();
        // Res(a, b) = (-1)^{mn} lc(b)^{m-k} Res(b, r)
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= pow(&b.lc(), m - k);
        a = b;
        b = r;
    }
}

/// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`
pub fn discriminant(f: &UniPoly) -> Result<Rational> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::domain("discriminant of a constant polynomial")),
    };
    let r = resultant(f, &f.derivative())?;
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -Rational::one() } else { Rational::one() };
    Ok(sign * r / f.lc())
}

fn pow(x: &Rational, k: usize) -> Rational {
    num_traits::pow(x.clone(), k)
}
