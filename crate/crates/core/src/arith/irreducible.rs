use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fp::{small_primes, Fp};
use super::numeric::poly_roots_f64;
use super::UniPoly;

/// Decide irreducibility over Q of a polynomial with rational coefficients.
///
/// Reductions modulo small good primes give the possible degrees of a
/// rational factor; an empty intersection is a certificate. Otherwise the
/// remaining candidate degrees are tested by exact trial division against
/// integer polynomials assembled from numerical root subsets.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let g = UniPoly::from_bigints(&f.primitive_part());
    if !g.is_squarefree() {
        return false;
    }
    if g.coeff(0).is_zero() {
        return false;
    }
    let ints = g.integer_coeffs().expect("primitive part is integral");
    let disc = super::discriminant(&g).expect("degree at least 2");
    let bad = disc.numer() * &ints[n];

    // possible[d] = a factor of degree d might exist
    let mut possible = vec![true; n + 1];
    let mut tried = 0;
    for p in small_primes(400) {
        if tried >= 12 {
            break;
        }
        if (&bad % BigInt::from(p)).is_zero() {
            continue;
        }
        tried += 1;
        let field = Fp::new(p);
        let red: Vec<u64> = ints
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
            .collect();
        let degs = field.factor_degrees(&red);
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                if reach[s - d] {
                    reach[s] = true;
                }
            }
        }
        for d in 0..=n {
            possible[d] &= reach[d];
        }
        if (1..n).all(|d| !possible[d]) {
            return true;
        }
    }
    !has_factor_from_roots(&g, &ints, &possible)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

fn has_factor_from_roots(g: &UniPoly, ints: &[BigInt], possible: &[bool]) -> bool {
    let n = ints.len() - 1;
    let roots = poly_roots_f64(g);
    let lc_divs = divisors(&ints[n]);
    // subsets closed under complex conjugation are the only candidates
    for mask in 1u32..(1u32 << n) {
        let k = mask.count_ones() as usize;
        if k > n / 2 || !possible[k] {
            continue;
        }
        let mut coeffs = vec![num_complex::Complex64::new(1.0, 0.0)];
        for (i, r) in roots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let mut next = vec![num_complex::Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (j, c) in coeffs.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * r;
                }
                coeffs = next;
            }
        }
        if coeffs.iter().any(|c| c.im.abs() > 1e-6 * (1.0 + c.re.abs())) {
            continue;
        }
        for d in &lc_divs {
            let df = d.to_f64().unwrap();
            let cand: Vec<BigInt> = coeffs
                .iter()
                .map(|c| BigInt::from((c.re * df).round() as i128))
                .collect();
            let h = UniPoly::from_bigints(&cand);
            if h.degree() != Some(k) {
                continue;
            }
            if let Ok((_, r)) = g.divrem(&h) {
                if r.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_quartic_is_irreducible() {
        assert!(is_irreducible(&UniPoly::from_ints(&[121, 121, 51, 11, 1])));
    }

    #[test]
    fn square_is_reducible() {
        // (x^2 - 5)^2
        assert!(!is_irreducible(&UniPoly::from_ints(&[25, 0, -10, 0, 1])));
    }

    #[test]
    fn small_cases() {
        assert!(is_irreducible(&UniPoly::from_ints(&[1, 0, 1])));
        assert!(!is_irreducible(&UniPoly::from_ints(&[-1, 0, 1])));
        assert!(!is_irreducible(&UniPoly::from_ints(&[3])));
        assert!(is_irreducible(&UniPoly::from_ints(&[3, 2])));
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        assert!(!is_irreducible(&UniPoly::from_ints(&[4, 0, 0, 0, 1])));
        // x^4 + 1 is irreducible but reducible mod every prime
        assert!(is_irreducible(&UniPoly::from_ints(&[1, 0, 0, 0, 1])));
    }

    #[test]
    fn non_monic_product() {
        // (2x + 1)(3x^2 + x + 5)
        let f = &UniPoly::from_ints(&[1, 2]) * &UniPoly::from_ints(&[5, 1, 3]);
        assert!(!is_irreducible(&f));
    }
}
