//! Exact integer, rational and polynomial arithmetic.

mod fp;
mod irreducible;
pub mod linalg;
mod numeric;
mod parse;
mod poly;
mod primality;
mod resultant;
mod sturm;

pub use num_bigint::BigInt;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub use fp::{small_primes, Fp};
pub use irreducible::is_irreducible;
pub use numeric::{invert_f64, poly_roots_f64, rational_to_f64};
pub use parse::{parse_mpoly, parse_poly, parse_rational, MPoly};
pub use poly::UniPoly;
pub use primality::{exact_sqrt, hamming_weight, is_prime_u64, is_probable_prime, prime_power, prime_power_big};
pub use resultant::{discriminant, resultant};
pub use sturm::count_real_roots;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parse a decimal integer, with optional sign.
pub fn parse_bigint(s: &str) -> crate::Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| crate::Error::Parse(format!("not an integer: `{s}`")))
}
