//! Finite fields `F_{p^n} = F_p[x]/(m)` for word-sized `p`.
//!
//! Elements are fixed-size coefficient arrays in ascending degree; only the
//! first `n` slots are ever nonzero.

use std::fmt;

use crate::arith::{is_prime_u64, Fp};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 32;

pub type Elem = [u64; MAX_DEGREE];

pub const ZERO: Elem = [0; MAX_DEGREE];

/// Conway polynomials for `p ∈ {2, 3, 5, 7}` and `n ≤ 6`, ascending
/// coefficients without the leading 1.
const CONWAY: &[(u64, &[&[u64]])] = &[
    (
        2,
        &[&[1], &[1, 1], &[1, 1, 0], &[1, 1, 0, 0], &[1, 0, 1, 0, 0], &[1, 1, 0, 1, 1, 0]],
    ),
    (
        3,
        &[&[1], &[2, 2], &[1, 2, 0], &[2, 0, 0, 2], &[1, 2, 0, 0, 0], &[2, 2, 1, 0, 2, 0]],
    ),
    (
        5,
        &[&[3], &[2, 4], &[3, 3, 0], &[2, 4, 4, 0], &[3, 4, 0, 0, 0], &[2, 0, 1, 4, 1, 0]],
    ),
    (
        7,
        &[&[4], &[3, 6], &[4, 0, 6], &[3, 4, 5, 0], &[4, 1, 0, 0, 0], &[3, 6, 4, 5, 1, 0]],
    ),
];

/// Tabulated Conway polynomial, monic, ascending.
pub fn conway_polynomial(p: u64, n: usize) -> Option<Vec<u64>> {
    let (_, table) = CONWAY.iter().find(|(q, _)| *q == p)?;
    let low = table.get(n.checked_sub(1)?)?;
    let mut m = low.to_vec();
    m.push(1);
    Some(m)
}

/// `F_{p^n}` with a fixed defining polynomial.
#[derive(Clone)]
pub struct FiniteField {
    fp: Fp,
    n: usize,
    q: u64,
    modulus: Vec<u64>,
    /// `p - m_i`
    neg_mod: Vec<u64>,
    lazy: bool,
    /// images of `x^i` under the absolute Frobenius
    frob: Vec<Elem>,
    /// quadratic character on F_p, odd `p` only
    chi: Vec<i8>,
    /// `Tr(x^i)` to F_p
    traces: Vec<u64>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.fp.p, self.n, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, o: &Self) -> bool {
        self.fp.p == o.fp.p && self.modulus == o.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// `F_{p^n}` with the Conway polynomial when tabulated, otherwise the
    /// lexicographically first monic irreducible of degree `n`.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        Self::check_size(p, n)?;
        let modulus = match conway_polynomial(p, n) {
            Some(m) => m,
            None if n == 1 => vec![0, 1],
            None => first_irreducible(Fp::new(p), n),
        };
        Self::with_modulus(p, modulus)
    }

    /// `F_p[x]/(m)` for an explicit monic irreducible `m` (ascending).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let n = modulus.len().saturating_sub(1);
        Self::check_size(p, n)?;
        let fp = Fp::new(p);
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if modulus[n] != 1 {
            return Err(Error::domain("field modulus must be monic"));
        }
        if !fp.poly_is_irreducible(&modulus) {
            return Err(Error::domain(format!("modulus {modulus:?} is reducible mod {p}")));
        }
        let neg_mod = modulus.iter().map(|&c| fp.neg(c)).collect();
        let mut fld = FiniteField {
            fp,
            n,
            q: p.pow(n as u32),
            modulus,
            neg_mod,
            lazy: p < (1 << 28),
            frob: Vec::new(),
            chi: Vec::new(),
            traces: Vec::new(),
        };
        let xp = fld.pow(&fld.gen(), p as u128);
        let mut pw = fld.one();
        let mut frob = Vec::with_capacity(n);
        for _ in 0..n {
            frob.push(pw);
            pw = fld.mul(&pw, &xp);
        }
        fld.frob = frob;
        if p != 2 && p < (1 << 24) {
            let mut chi = vec![-1i8; p as usize];
            chi[0] = 0;
            for a in 1..p {
                chi[(a * a % p) as usize] = 1;
            }
            fld.chi = chi;
        }
        let mut traces = Vec::with_capacity(n);
        let mut pw = fld.one();
        for _ in 0..n {
            let mut acc = ZERO;
            let mut z = pw;
            for _ in 0..n {
                acc = fld.add(&acc, &z);
                z = fld.frobenius(&z);
            }
            debug_assert!(acc[1..].iter().all(|&c| c == 0));
            traces.push(acc[0]);
            pw = fld.mul(&pw, &fld.gen());
        }
        fld.traces = traces;
        Ok(fld)
    }

    fn check_size(p: u64, n: usize) -> Result<()> {
        if !(2..1 << 32).contains(&p) || !is_prime_u64(p) {
            return Err(Error::domain(format!("{p} is not a word-sized prime")));
        }
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::domain(format!("extension degree {n} outside 1..={MAX_DEGREE}")));
        }
        if (n as f64) * (p as f64).log2() >= 62.0 {
            return Err(Error::domain(format!("GF({p}^{n}) is too large")));
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.fp.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn prime_field(&self) -> Fp {
        self.fp
    }

    pub fn zero(&self) -> Elem {
        ZERO
    }

    pub fn one(&self) -> Elem {
        self.from_u64(1)
    }

    /// The class of `x`.
    pub fn gen(&self) -> Elem {
        if self.n == 1 {
            return self.from_u64(self.neg_mod[0]);
        }
        let mut e = ZERO;
        e[1] = 1;
        e
    }

    pub fn from_u64(&self, a: u64) -> Elem {
        let mut e = ZERO;
        e[0] = a % self.fp.p;
        e
    }

    pub fn from_i64(&self, a: i64) -> Elem {
        self.from_u64(self.fp.from_i64(a))
    }

    /// Reduce an ascending coefficient list modulo the defining polynomial.
    pub fn from_coeffs(&self, cs: &[u64]) -> Elem {
        let p = self.fp.p;
        let mut acc = ZERO;
        let mut pw = self.one();
        let x = self.gen();
        for &c in cs {
            acc = self.add(&acc, &self.scale(&pw, c % p));
            pw = self.mul(&pw, &x);
        }
        acc
    }

    /// Element whose coefficients are the base-`p` digits of `k`.
    pub fn from_index(&self, mut k: u64) -> Elem {
        let mut e = ZERO;
        for c in e.iter_mut().take(self.n) {
            *c = k % self.fp.p;
            k /= self.fp.p;
        }
        e
    }

    pub fn index(&self, a: &Elem) -> u64 {
        a[..self.n].iter().rev().fold(0, |acc, &c| acc * self.fp.p + c)
    }

    /// Advance to the element with the next index, wrapping to zero.
    #[inline]
    pub fn increment(&self, a: &mut Elem) {
        for c in a.iter_mut().take(self.n) {
            *c += 1;
            if *c < self.fp.p {
                return;
            }
            *c = 0;
        }
    }

    #[inline]
    pub fn is_zero(&self, a: &Elem) -> bool {
        a[..self.n].iter().all(|&c| c == 0)
    }

    /// Lies in the prime field.
    pub fn is_prime_field_elem(&self, a: &Elem) -> bool {
        a[1..self.n].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let mut c = ZERO;
        for i in 0..self.n {
            c[i] = self.fp.add(a[i], b[i]);
        }
        c
    }

    #[inline]
    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        let mut c = ZERO;
        for i in 0..self.n {
            c[i] = self.fp.sub(a[i], b[i]);
        }
        c
    }

    #[inline]
    pub fn neg(&self, a: &Elem) -> Elem {
        let mut c = ZERO;
        for i in 0..self.n {
            c[i] = self.fp.neg(a[i]);
        }
        c
    }

    /// Multiply by a prime-field scalar.
    #[inline]
    pub fn scale(&self, a: &Elem, k: u64) -> Elem {
        let mut c = ZERO;
        for i in 0..self.n {
            c[i] = self.fp.mul(a[i], k);
        }
        c
    }

    #[inline]
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.n;
        let p = self.fp.p;
        if n == 1 {
            let mut c = ZERO;
            c[0] = a[0] * b[0] % p;
            return c;
        }
        let mut c = [0u64; 2 * MAX_DEGREE];
        if self.lazy {
            for i in 0..n {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    c[i + j] += a[i] * b[j];
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    c[i + j] = (c[i + j] + a[i] * b[j] % p) % p;
                }
            }
        }
        self.reduce(&mut c)
    }

    #[inline]
    pub fn square(&self, a: &Elem) -> Elem {
        self.mul(a, a)
    }

    /// Reduce a product of length `2n - 1` whose entries are below `2n p^2`.
    #[inline]
    fn reduce(&self, c: &mut [u64; 2 * MAX_DEGREE]) -> Elem {
        let n = self.n;
        let p = self.fp.p;
        for k in (n..2 * n - 1).rev() {
            let ck = c[k] % p;
            if ck == 0 {
                continue;
            }
            if self.lazy {
                for i in 0..n {
                    c[k - n + i] += ck * self.neg_mod[i];
                }
            } else {
                for i in 0..n {
                    c[k - n + i] = (c[k - n + i] % p + ck * self.neg_mod[i] % p) % p;
                }
            }
        }
        let mut out = ZERO;
        for i in 0..n {
            out[i] = c[i] % p;
        }
        out
    }

    pub fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let mut acc = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.square(&b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u128 - 2))
    }

    /// Inverses of all entries, zeros mapped to zero (Montgomery's trick).
    pub fn batch_inv(&self, xs: &[Elem]) -> Vec<Elem> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = self.one();
        for x in xs {
            prefix.push(acc);
            if !self.is_zero(x) {
                acc = self.mul(&acc, x);
            }
        }
        let mut inv = self.pow(&acc, self.q as u128 - 2);
        let mut out = vec![ZERO; xs.len()];
        for i in (0..xs.len()).rev() {
            if self.is_zero(&xs[i]) {
                continue;
            }
            out[i] = self.mul(&inv, &prefix[i]);
            inv = self.mul(&inv, &xs[i]);
        }
        out
    }

    /// `a^p`
    #[inline]
    pub fn frobenius(&self, a: &Elem) -> Elem {
        let n = self.n;
        if n == 1 {
            return *a;
        }
        let p = self.fp.p;
        let mut c = [0u64; MAX_DEGREE];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            let row = &self.frob[i];
            for j in 0..n {
                c[j] = if self.lazy { c[j] + a[i] * row[j] } else { (c[j] + a[i] * row[j] % p) % p };
            }
        }
        for v in c.iter_mut().take(n) {
            *v %= p;
        }
        c
    }

    /// Absolute norm to F_p.
    pub fn norm(&self, a: &Elem) -> u64 {
        let mut acc = *a;
        let mut z = *a;
        for _ in 1..self.n {
            z = self.frobenius(&z);
            acc = self.mul(&acc, &z);
        }
        acc[0]
    }

    /// Absolute trace to F_p.
    #[inline]
    pub fn trace(&self, a: &Elem) -> u64 {
        let p = self.fp.p;
        (0..self.n).fold(0u64, |acc, i| (acc + a[i] * self.traces[i] % p) % p)
    }

    /// Quadratic character for odd `p`: 0, 1 or -1.
    #[inline]
    pub fn chi(&self, a: &Elem) -> i32 {
        debug_assert!(self.fp.p != 2);
        let nm = if self.n == 1 { a[0] } else { self.norm(a) };
        if self.chi.is_empty() {
            self.fp.legendre(nm)
        } else {
            self.chi[nm as usize] as i32
        }
    }

    /// Every element is a square in characteristic 2.
    pub fn is_square(&self, a: &Elem) -> bool {
        self.fp.p == 2 || self.chi(a) >= 0
    }

    /// Number of `y` with `y^2 + b y = c`.
    #[inline]
    pub fn quadratic_solutions(&self, b: &Elem, c: &Elem) -> u64 {
        if self.fp.p == 2 {
            if self.is_zero(b) {
                return 1;
            }
            let b2 = self.square(b);
            let z = self.mul(c, &self.inv(&b2).expect("nonzero"));
            if self.trace(&z) == 0 {
                2
            } else {
                0
            }
        } else {
            let d = self.add(&self.square(b), &self.scale(c, 4));
            (1 + self.chi(&d)) as u64
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &Elem) -> u64 {
        let mut ord = self.q - 1;
        for (r, _) in factor_u64(self.q - 1) {
            while ord % r == 0 && self.pow(a, (ord / r) as u128) == self.one() {
                ord /= r;
            }
        }
        ord
    }

    /// The generator of the multiplicative group with the smallest index.
    pub fn primitive_element(&self) -> Elem {
        let x = self.gen();
        if self.order(&x) == self.q - 1 {
            return x;
        }
        (1..self.q)
            .map(|k| self.from_index(k))
            .find(|e| self.order(e) == self.q - 1)
            .expect("cyclic group has a generator")
    }

    /// Image of the generator of a subfield `sub`, i.e. a root of its modulus.
    pub fn embedding_of(&self, sub: &FiniteField) -> Result<Elem> {
        if sub.p() != self.p() || self.n % sub.n != 0 {
            return Err(Error::domain(format!("{sub:?} is not a subfield of {self:?}")));
        }
        let eval = |z: &Elem| {
            sub.modulus
                .iter()
                .rev()
                .fold(ZERO, |acc, &c| self.add(&self.mul(&acc, z), &self.from_u64(c)))
        };
        if sub.n == 1 {
            return Ok(self.neg(&self.from_u64(sub.modulus[0])));
        }
        let w = self.pow(&self.primitive_element(), ((self.q - 1) / (sub.q - 1)) as u128);
        let mut z = w;
        for _ in 1..sub.q {
            if self.is_zero(&eval(&z)) {
                return Ok(z);
            }
            z = self.mul(&z, &w);
        }
        Err(Error::domain("no root of the subfield modulus found"))
    }

    /// Map an element of `sub` through the embedding with generator image `img`.
    pub fn embed(&self, sub: &FiniteField, img: &Elem, a: &Elem) -> Elem {
        (0..sub.n)
            .rev()
            .fold(ZERO, |acc, i| self.add(&self.mul(&acc, img), &self.from_u64(a[i])))
    }

    /// Render with `w` for the generator, e.g. `3*w + 1`.
    pub fn display(&self, a: &Elem) -> String {
        let mut parts = Vec::new();
        for i in (0..self.n).rev() {
            let c = a[i];
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn first_irreducible(fp: Fp, n: usize) -> Vec<u64> {
    let p = fp.p;
    let mut k = 0u64;
    loop {
        let mut m: Vec<u64> = (0..n).map(|i| (k / p.pow(i as u32)) % p).collect();
        m.push(1);
        if fp.poly_is_irreducible(&m) {
            return m;
        }
        k += 1;
    }
}

/// Prime factorisation by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
