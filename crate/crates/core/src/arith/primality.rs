use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const SMALL_PRIMES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first thirteen primes as witnesses, which is a
/// proof of primality below 3.317e24. Larger inputs get 64 further witnesses
/// drawn from a generator seeded by `n` itself, so the answer is reproducible.
pub fn is_probable_prime(n: &BigInt) -> bool {
    let n = match n.to_biguint() {
        Some(n) => n,
        None => return false,
    };
    if n < BigUint::from(2u32) {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if n == p {
            return true;
        }
        if (&n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = &n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let strong_witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, &n);
        if x == one || x == n1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % &n;
            if x == n1 {
                return false;
            }
        }
        true
    };
    for &a in SMALL_PRIMES.iter() {
        if strong_witness(&BigUint::from(a)) {
            return false;
        }
    }
    let deterministic_limit: BigUint = "3317044064679887385961981".parse().unwrap();
    if n < deterministic_limit {
        return true;
    }
    let mut seed = [0u8; 32];
    for (i, b) in n.to_bytes_le().iter().enumerate() {
        seed[i % 32] ^= b;
    }
    let mut rng = ChaCha20Rng::from_seed(seed);
    let two = BigUint::from(2u32);
    for _ in 0..64 {
        let a = rng.gen_biguint_range(&two, &n1);
        if strong_witness(&a) {
            return false;
        }
    }
    true
}

/// Number of one bits in the binary expansion of `|n|`.
pub fn hamming_weight(n: &BigInt) -> u64 {
    n.magnitude().to_u32_digits().iter().map(|d| d.count_ones() as u64).sum()
}

/// Exact integer square root test.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `n = p^a` with `p` a probable prime, for arbitrary-size `n`.
pub fn prime_power_big(n: &BigInt) -> Option<(BigInt, u32)> {
    if n < &BigInt::from(2) {
        return None;
    }
    let bits = n.bits() as u32;
    for k in (1..=bits).rev() {
        let r = n.nth_root(k);
        if r > BigInt::one() && &num_traits::pow(r.clone(), k as usize) == n && is_probable_prime(&r) {
            return Some((r, k));
        }
    }
    None
}

/// Small-integer trial division, used by tests and census code.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_even() {
        return false;
    }
    let mut i = 3u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 2;
    }
    true
}

/// `n = p^a` with `p` prime, if it is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            break;
        }
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let mut m = n;
    let mut a = 0;
    while m % p == 0 {
        m /= p;
        a += 1;
    }
    (m == 1).then_some((p, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_prime_powers_agree_with_small() {
        for n in 0u64..3000 {
            let big = prime_power_big(&BigInt::from(n)).map(|(p, a)| (u64::try_from(p).unwrap(), a));
            assert_eq!(big, prime_power(n), "n = {n}");
        }
        let p: BigInt = "170141183460469231731687303715884105727".parse().unwrap();
        assert_eq!(prime_power_big(&(&p * &p * &p)), Some((p, 3)));
    }

    #[test]
    fn small_values() {
        let primes: Vec<i64> = (0..60).filter(|&n| is_probable_prime(&BigInt::from(n))).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // 3215031751 is a strong pseudoprime to bases 2, 3, 5, 7.
        assert!(!is_probable_prime(&BigInt::from(3215031751u64)));
        // Carmichael number
        assert!(!is_probable_prime(&BigInt::from(561)));
    }

    #[test]
    fn large_known_prime() {
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * BigInt::from(3))));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(353), Some((353, 1)));
    }

    #[test]
    fn weights() {
        assert_eq!(hamming_weight(&BigInt::from(0b1011)), 3);
        assert_eq!(exact_sqrt(&BigInt::from(144)), Some(BigInt::from(12)));
        assert_eq!(exact_sqrt(&BigInt::from(145)), None);
    }
}
