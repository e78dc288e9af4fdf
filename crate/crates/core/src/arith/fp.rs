//! Prime-field scalars and dense polynomials over F_p for word-sized p.
//!
//! Polynomials are coefficient vectors in ascending degree with no trailing
//! zeros. All routines assume `p < 2^32` so products fit in a `u64`.

/// Arithmetic modulo a word-sized prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2 && p < (1 << 32));
        Fp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    /// Reduce a signed integer.
    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Legendre symbol for odd p: 1, p-1 (i.e. -1) or 0.
    pub fn legendre(self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    // ---- polynomials ----

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn poly_mul(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        Self::trim(&mut out);
        out
    }

    pub fn poly_sub(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        Self::trim(&mut out);
        out
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn poly_divrem(self, a: &[u64], d: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert!(!d.is_empty(), "division by the zero polynomial");
        let mut r = a.to_vec();
        Self::trim(&mut r);
        if r.len() < d.len() {
            return (Vec::new(), r);
        }
        let dd = d.len() - 1;
        let inv = self.inv(d[dd]);
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = self.mul(r[i + dd], inv);
            if c != 0 {
                for (j, &dc) in d.iter().enumerate() {
                    r[i + j] = self.sub(r[i + j], self.mul(c, dc));
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Self::trim(&mut r);
        Self::trim(&mut q);
        (q, r)
    }

    pub fn poly_rem(self, a: &[u64], d: &[u64]) -> Vec<u64> {
        self.poly_divrem(a, d).1
    }

    pub fn poly_monic(self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => {
                let inv = self.inv(lc);
                a.iter().map(|&c| self.mul(c, inv)).collect()
            }
        }
    }

    pub fn poly_gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        Self::trim(&mut x);
        Self::trim(&mut y);
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = std::mem::replace(&mut y, r);
        }
        self.poly_monic(&x)
    }

    pub fn poly_mulmod(self, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    /// `base^e mod m`
    pub fn poly_powmod(self, base: &[u64], mut e: u128, m: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = self.poly_rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mulmod(&acc, &b, m);
            }
            e >>= 1;
            if e > 0 {
                b = self.poly_mulmod(&b, &b, m);
            }
        }
        self.poly_rem(&acc, m)
    }

    pub fn poly_derivative(self, a: &[u64]) -> Vec<u64> {
        let mut out: Vec<u64> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        Self::trim(&mut out);
        out
    }

    pub fn poly_eval(self, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, with
    /// multiplicity (distinct-degree factorization).
    pub fn factor_degrees(self, f: &[u64]) -> Vec<usize> {
        let mut f = self.poly_monic(f);
        let mut degs = Vec::new();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut d = 1usize;
        while f.len() > 1 && 2 * d <= f.len() - 1 {
            h = self.poly_powmod(&h, self.p as u128, &f);
            let g = self.poly_gcd(&f, &self.poly_sub(&h, &x));
            if g.len() > 1 {
                let k = (g.len() - 1) / d;
                degs.extend(std::iter::repeat_n(d, k));
                f = self.poly_divrem(&f, &g).0;
                f = self.poly_monic(&f);
                h = self.poly_rem(&h, &f);
            }
            d += 1;
        }
        if f.len() > 1 {
            degs.push(f.len() - 1);
        }
        degs.sort_unstable();
        degs
    }

    pub fn is_squarefree(self, f: &[u64]) -> bool {
        let d = self.poly_derivative(f);
        if d.is_empty() {
            return f.len() <= 1;
        }
        self.poly_gcd(f, &d).len() == 1
    }

    /// Rabin-style irreducibility test.
    pub fn poly_is_irreducible(self, f: &[u64]) -> bool {
        let n = match f.len() {
            0 | 1 => return false,
            l => l - 1,
        };
        if n == 1 {
            return true;
        }
        self.is_squarefree(f) && self.factor_degrees(f) == vec![n]
    }

    /// `Res(m, a)` over F_p; with `m` monic this is the norm of `a` in F_p[x]/(m).
    pub fn poly_resultant(self, m: &[u64], a: &[u64]) -> u64 {
        let mut f = m.to_vec();
        let mut g = a.to_vec();
        Self::trim(&mut f);
        Self::trim(&mut g);
        if f.is_empty() || g.is_empty() {
            return 0;
        }
        let mut acc = 1u64;
        loop {
            let dm = f.len() - 1;
            let dn = g.len() - 1;
            if dn == 0 {
                return self.mul(acc, self.pow(g[0], dm as u64));
            }
            if dm == 0 {
                return self.mul(acc, self.pow(f[0], dn as u64));
            }
            let r = self.poly_rem(&f, &g);
            if r.is_empty() {
                return 0;
            }
            let k = r.len() - 1;
            if (dm * dn) % 2 == 1 {
                acc = self.neg(acc);
            }
            acc = self.mul(acc, self.pow(g[dn], (dm - k) as u64));
            f = g;
            g = r;
        }
    }
}

/// Primes below `bound` by a simple sieve.
pub fn small_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_legendre() {
        let f = Fp::new(11);
        for a in 1..11 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // squares mod 11: 1,3,4,5,9
        let sq: Vec<u64> = (1..11).filter(|&a| f.legendre(a) == 1).collect();
        assert_eq!(sq, vec![1, 3, 4, 5, 9]);
    }

    #[test]
    fn factor_degrees_mod_two() {
        let f = Fp::new(2);
        // x^3 + x + 1 irreducible over F_2
        assert_eq!(f.factor_degrees(&[1, 1, 0, 1]), vec![3]);
        // x(x+1)(x^2+x+1)
        let g = f.poly_mul(&f.poly_mul(&[0, 1], &[1, 1]), &[1, 1, 1]);
        assert_eq!(f.factor_degrees(&g), vec![1, 1, 2]);
    }

    #[test]
    fn resultant_is_norm() {
        // In F_7[x]/(x^2+1): N(a + b x) = a^2 + b^2
        let f = Fp::new(7);
        assert_eq!(f.poly_resultant(&[1, 0, 1], &[3, 2]), (9 + 4) % 7);
    }

    #[test]
    fn primes_sieve() {
        assert_eq!(small_primes(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
