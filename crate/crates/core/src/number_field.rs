//! Number fields `Q[x]/(m(x))` with exact element arithmetic and numeric embeddings.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, poly_roots_f64, rational_to_f64, Rational, UniPoly};
use crate::error::{Error, Result};

struct FieldData {
    poly: UniPoly,
    n: usize,
    roots: Vec<Complex64>,
    real_count: usize,
    /// `x^k mod m` for `k = n .. 2n-2`
    reduce: Vec<Vec<Rational>>,
}

/// A number field given by a monic irreducible integer polynomial.
///
/// Cloning is cheap; clones share the defining data.
#[derive(Clone)]
pub struct NumberField(Arc<FieldData>);

/// A complex embedding, by index into the approximated roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub index: usize,
    pub real: bool,
}

impl NumberField {
    pub fn new(poly: UniPoly) -> Result<Self> {
        if poly.degree().is_none_or(|n| n < 1) {
            return Err(Error::domain("defining polynomial must be nonconstant"));
        }
        if !poly.is_monic() || !poly.is_integral() {
            return Err(Error::domain(format!("defining polynomial {poly} is not monic with integer coefficients")));
        }
        if !arith::is_irreducible(&poly) {
            return Err(Error::domain(format!("defining polynomial {poly} is reducible")));
        }
        Ok(Self::new_unchecked(poly))
    }

    /// Skips the irreducibility check; for polynomials already known to be irreducible.
    pub(crate) fn new_unchecked(poly: UniPoly) -> Self {
        let n = poly.degree().expect("nonconstant");
        let mut roots = poly_roots_f64(&poly);
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut real: Vec<Complex64> = Vec::new();
        let mut upper: Vec<Complex64> = Vec::new();
        for z in roots.drain(..) {
            if z.im.abs() <= 1e-9 * scale {
                real.push(Complex64::new(z.re, 0.0));
            } else if z.im > 0.0 {
                upper.push(z);
            }
        }
        real.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        upper.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let real_count = real.len();
        let mut ordered = real;
        for z in upper {
            ordered.push(z);
            ordered.push(z.conj());
        }
        debug_assert_eq!(ordered.len(), n);
        let m = poly.coeffs();
        let mut reduce = Vec::new();
        // x^n = -sum m_i x^i
        let mut cur: Vec<Rational> = (0..n).map(|i| -m[i].clone()).collect();
        for _ in n..=(2 * n).saturating_sub(2).max(n) {
            reduce.push(cur.clone());
            // multiply by x
            let top = cur[n - 1].clone();
            let mut next = vec![Rational::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..n {
                next[i] -= &top * &m[i];
            }
            cur = next;
        }
        NumberField(Arc::new(FieldData { poly, n, roots: ordered, real_count, reduce }))
    }

    /// Parse a defining polynomial in `x`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(arith::parse_poly(s, "x")?)
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn poly(&self) -> &UniPoly {
        &self.0.poly
    }

    /// Approximate roots: real roots first (ascending), then conjugate pairs.
    pub fn roots(&self) -> &[Complex64] {
        &self.0.roots
    }

    pub fn embeddings(&self) -> Vec<Embedding> {
        (0..self.0.n)
            .map(|index| Embedding { index, real: index < self.0.real_count })
            .collect()
    }

    pub fn is_totally_real(&self) -> bool {
        self.0.real_count == self.0.n
    }

    pub fn same(&self, other: &NumberField) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.poly == other.0.poly
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<NFElement> {
        if coords.len() != self.0.n {
            return Err(Error::domain(format!(
                "expected {} coordinates, got {}",
                self.0.n,
                coords.len()
            )));
        }
        Ok(NFElement { field: self.clone(), coords })
    }

    pub fn from_ints(&self, coords: &[i64]) -> NFElement {
        let mut v: Vec<Rational> = coords.iter().map(|&c| arith::rat(c)).collect();
        v.resize(self.0.n, Rational::zero());
        v.truncate(self.0.n);
        NFElement { field: self.clone(), coords: v }
    }

    pub fn from_rational(&self, r: Rational) -> NFElement {
        let mut v = vec![Rational::zero(); self.0.n];
        v[0] = r;
        NFElement { field: self.clone(), coords: v }
    }

    pub fn from_poly(&self, p: &UniPoly) -> NFElement {
        let mut acc = vec![Rational::zero(); self.0.n];
        for (k, c) in p.coeffs().iter().enumerate() {
            self.add_power(&mut acc, k, c);
        }
        NFElement { field: self.clone(), coords: acc }
    }

    pub fn zero(&self) -> NFElement {
        self.from_rational(Rational::zero())
    }

    pub fn one(&self) -> NFElement {
        self.from_rational(Rational::one())
    }

    /// The class of `x`.
    pub fn gen(&self) -> NFElement {
        self.from_poly(&UniPoly::x())
    }

    /// acc += c * x^k reduced
    fn add_power(&self, acc: &mut [Rational], k: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let n = self.0.n;
        if k < n {
            acc[k] += c;
        } else if k - n < self.0.reduce.len() {
            for (a, r) in acc.iter_mut().zip(&self.0.reduce[k - n]) {
                if !r.is_zero() {
                    *a += c * r;
                }
            }
        } else {
            let r = UniPoly::constant(c.clone()).shift(k).rem(&self.0.poly).expect("monic modulus");
            for (i, v) in r.coeffs().iter().enumerate() {
                acc[i] += v;
            }
        }
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.0.poly)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

/// Element of a number field as power-basis coordinates.
#[derive(Clone)]
pub struct NFElement {
    field: NumberField,
    coords: Vec<Rational>,
}

/// Operation selector for [`nf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn nf_arith(a: &NFElement, b: &NFElement, op: ArithOp) -> Result<NFElement> {
    if !a.field.same(&b.field) {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.div(b)?,
    })
}

impl NFElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The element as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }

    /// Integer coordinates, if all coordinates are integers.
    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_rational(&self, c: &Rational) -> NFElement {
        let mut out = self.clone();
        out.coords[0] += c;
        out
    }

    fn mul_raw(&self, other: &NFElement) -> NFElement {
        assert!(self.field.same(&other.field), "elements belong to different fields");
        let n = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut acc: Vec<Rational> = prod[..n].to_vec();
        for (k, c) in prod.iter().enumerate().skip(n) {
            self.field.add_power(&mut acc, k, c);
        }
        NFElement { field: self.field.clone(), coords: acc }
    }

    pub fn inverse(&self) -> Result<NFElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = UniPoly::xgcd(&self.to_poly(), self.field.poly());
        // g is a nonzero constant because m is irreducible
        let c = g.coeff(0);
        Ok(self.field.from_poly(&s.scale(&c.recip())))
    }

    pub fn div(&self, other: &NFElement) -> Result<NFElement> {
        if !self.field.same(&other.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, k: i64) -> Result<NFElement> {
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Substitute `image` for the generator: the image of `self` under the
    /// homomorphism `x ↦ image`.
    pub fn apply_hom(&self, image: &NFElement) -> NFElement {
        let mut acc = image.field.zero();
        for c in self.coords.iter().rev() {
            acc = (&acc * image).add_rational(c);
        }
        acc
    }

    /// Characteristic polynomial over Q, computed as `Res_y(m(y), x - a(y))`
    /// by evaluation at `n + 1` integers and interpolation.
    pub fn char_poly(&self) -> UniPoly {
        let n = self.field.degree();
        let a = self.to_poly();
        if let Some(r) = self.as_rational() {
            return UniPoly::linear_root(&r).pow(n as u32);
        }
        let xs: Vec<Rational> = (0..=n as i64).map(arith::rat).collect();
        let ys: Vec<Rational> = xs
            .iter()
            .map(|x| {
                let g = &UniPoly::constant(x.clone()) - &a;
                arith::resultant(self.field.poly(), &g).expect("nonzero modulus")
            })
            .collect();
        UniPoly::interpolate(&xs, &ys).expect("distinct nodes")
    }

    pub fn min_poly(&self) -> UniPoly {
        self.char_poly().squarefree_part().monic()
    }

    /// `(Norm, Trace)` over Q.
    pub fn norm_trace(&self) -> (Rational, Rational) {
        let f = self.char_poly();
        let n = self.field.degree();
        let norm = if n % 2 == 0 { f.coeff(0) } else { -f.coeff(0) };
        (norm, -f.coeff(n - 1))
    }

    pub fn norm(&self) -> Rational {
        self.norm_trace().0
    }

    pub fn trace(&self) -> Rational {
        self.norm_trace().1
    }

    pub fn is_integral(&self) -> bool {
        if self.integer_coords().is_some() {
            return true;
        }
        self.char_poly().is_integral()
    }

    /// Numeric value under an embedding.
    pub fn embed(&self, e: Embedding) -> Complex64 {
        let z = self.field.roots()[e.index];
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coords.iter().rev() {
            acc = acc * z + rational_to_f64(c);
        }
        acc
    }

    pub fn embeddings(&self) -> Vec<Complex64> {
        self.field.embeddings().into_iter().map(|e| self.embed(e)).collect()
    }

    /// Interval containing `max_σ |σ(self)|`.
    ///
    /// Roots are held in double precision, so the interval width is bounded
    /// below by roughly 1e-12 relative error regardless of `precision`.
    pub fn height(&self, precision: u32) -> (f64, f64) {
        let _ = precision;
        if let Some(r) = self.as_rational() {
            let v = rational_to_f64(&r.abs());
            return (v, v);
        }
        let m = self.field.poly();
        let dm = m.derivative();
        let a = self.to_poly();
        let da = a.derivative();
        let n = self.field.degree() as f64;
        let mut lo = 0.0f64;
        let mut hi = 0.0f64;
        for &z in self.field.roots() {
            let mz = eval_c(m, z).norm();
            let dmz = eval_c(&dm, z).norm().max(f64::MIN_POSITIVE);
            // Newton-type bound on the distance to the true root
            let rerr = n * mz / dmz + 1e-15 * (1.0 + z.norm());
            let v = eval_c(&a, z).norm();
            let slope = eval_c(&da, z).norm() + 1.0;
            let e = slope * rerr * 2.0 + 1e-13 * (1.0 + v);
            lo = lo.max(v - e);
            hi = hi.max(v + e);
        }
        (lo.max(0.0), hi)
    }

    /// Point estimate of the height.
    pub fn height_f64(&self) -> f64 {
        self.embeddings().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn eval_c(p: &UniPoly, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.coeffs().iter().rev() {
        acc = acc * z + rational_to_f64(c);
    }
    acc
}

/// `((α - ᾱ)^2, α - ᾱ)` where `conj_image` is the image of the generator
/// under complex conjugation.
pub fn element_disc_diff(a: &NFElement, conj_image: &NFElement) -> (NFElement, NFElement) {
    let d = a - &a.apply_hom(conj_image);
    (&d * &d, d)
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.coords == other.coords
    }
}

impl Eq for NFElement {}

impl std::hash::Hash for NFElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly().display_with("x"))
    }
}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self, self.field.poly())
    }
}

impl Add for &NFElement {
    type Output = NFElement;
    fn add(self, o: &NFElement) -> NFElement {
        assert!(self.field.same(&o.field), "elements belong to different fields");
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &NFElement {
    type Output = NFElement;
    fn sub(self, o: &NFElement) -> NFElement {
        assert!(self.field.same(&o.field), "elements belong to different fields");
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &NFElement {
    type Output = NFElement;
    fn mul(self, o: &NFElement) -> NFElement {
        self.mul_raw(o)
    }
}

impl Neg for &NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

impl Add for NFElement {
    type Output = NFElement;
    fn add(self, o: NFElement) -> NFElement {
        &self + &o
    }
}

impl Sub for NFElement {
    type Output = NFElement;
    fn sub(self, o: NFElement) -> NFElement {
        &self - &o
    }
}

impl Mul for NFElement {
    type Output = NFElement;
    fn mul(self, o: NFElement) -> NFElement {
        &self * &o
    }
}

impl Neg for NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn qi() -> NumberField {
        NumberField::parse("x^2 + 1").unwrap()
    }

    fn zeta5() -> NumberField {
        NumberField::parse("x^4 + x^3 + x^2 + x + 1").unwrap()
    }

    #[test]
    fn i_squared() {
        let k = qi();
        let i = k.gen();
        assert_eq!(&i * &i, k.from_ints(&[-1]));
    }

    #[test]
    fn zeta_times_conjugate() {
        let k = zeta5();
        let z = k.gen();
        let zbar = z.pow(4).unwrap();
        assert!((&z * &zbar).is_one());
        assert_eq!(z.pow(-1).unwrap(), zbar);
    }

    #[test]
    fn sqrt_minus_two_norm() {
        let k = NumberField::parse("x^2 + 2").unwrap();
        let a = k.from_ints(&[3, 1]);
        let b = k.from_ints(&[3, -1]);
        assert_eq!(&a * &b, k.from_ints(&[11]));
        assert_eq!(a.norm_trace(), (rat(11), rat(6)));
    }

    #[test]
    fn division_and_errors() {
        let k = zeta5();
        let a = k.from_ints(&[1, 2, 0, -1]);
        let b = k.from_ints(&[0, 3, 1]);
        let q = nf_arith(&a, &b, ArithOp::Div).unwrap();
        assert_eq!(&q * &b, a);
        assert_eq!(nf_arith(&a, &k.zero(), ArithOp::Div), Err(Error::DivisionByZero));
        assert_eq!(nf_arith(&a, &qi().gen(), ArithOp::Add), Err(Error::FieldMismatch));
    }

    #[test]
    fn char_poly_examples() {
        let k = qi();
        assert_eq!(k.from_ints(&[2]).char_poly(), UniPoly::from_ints(&[4, -4, 1]));
        let f = UniPoly::from_ints(&[121, 121, 51, 11, 1]);
        let kp = NumberField::new(f.clone()).unwrap();
        assert_eq!(kp.gen().char_poly(), f);
    }

    #[test]
    fn zeta9_real_element_char_poly() {
        // t = ζ + ζ^-1 satisfies t^3 = ζ^3 + ζ^-3 + 3t and ζ^3 + ζ^-3 = -1,
        // so t^3 - 3t + 1 = 0; inside a degree-6 field it appears squared.
        let k = NumberField::parse("x^6 + x^3 + 1").unwrap();
        let z = k.gen();
        let t = &z + &z.pow(-1).unwrap();
        let m = UniPoly::from_ints(&[1, -3, 0, 1]);
        assert_eq!(t.char_poly(), m.pow(2));
        assert_eq!(t.min_poly(), m);
    }

    #[test]
    fn integrality() {
        let k = NumberField::parse("x^2 - x - 1").unwrap();
        assert!(k.gen().is_integral());
        let z = zeta5();
        assert!(!z.gen().scale(&Rational::new(1.into(), 2.into())).is_integral());
        // e = (η0 + 5)/2 with η0^2 + η0 - 1 = 0 gives 4e^2 - 18e + 19 = 0
        let f = NumberField::parse("x^2 + x - 1").unwrap();
        let e = f.gen().add_rational(&rat(5)).scale(&Rational::new(1.into(), 2.into()));
        assert!(!e.is_integral());
        assert_eq!(e.char_poly(), UniPoly::new(vec![Rational::new(19.into(), 4.into()), rat(-9) / rat(2), rat(1)]));
    }

    #[test]
    fn heights() {
        let k = NumberField::parse("x^2 - x - 1").unwrap();
        let (lo, hi) = k.from_ints(&[-7]).height(64);
        assert_eq!((lo, hi), (7.0, 7.0));
        let (lo, hi) = qi().gen().height(64);
        assert!(lo <= 1.0 && 1.0 <= hi && hi - lo < 1e-9);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let (lo, hi) = k.gen().height(64);
        assert!(lo <= phi && phi <= hi && hi - lo < 1e-9);
    }

    #[test]
    fn disc_diff() {
        let k = qi();
        let conj = k.from_ints(&[0, -1]);
        let (d2, d) = element_disc_diff(&k.from_ints(&[5]), &conj);
        assert!(d2.is_zero() && d.is_zero());
        let (d2, d) = element_disc_diff(&k.gen(), &conj);
        assert_eq!(d2, k.from_ints(&[-4]));
        assert_eq!(d, k.from_ints(&[0, 2]));
    }

    #[test]
    fn reducible_rejected() {
        assert!(NumberField::parse("x^2 - 4").is_err());
        assert!(NumberField::parse("2x^2 + 1").is_err());
    }
}
