//! Prime Weil generators `b + ω` in imaginary quadratic fields.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{hamming_weight, is_probable_prime};
use crate::cm_field::{CmField, WeilGeneratorRecord};
use crate::error::{Error, Result};
use crate::number_field::NFElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmPrime {
    pub b: Option<i64>,
    pub p: BigInt,
    pub bits: u64,
    pub hamming_weight: u64,
    pub trace: BigInt,
    /// `p + 1 - Tr(α)`
    pub order: BigInt,
    pub record: WeilGeneratorRecord,
}

#[derive(Serialize)]
struct CmPrimeJson {
    b: Option<i64>,
    alpha: String,
    p: String,
    bits: u64,
    hamming_weight: u64,
    trace: String,
    order: String,
}

impl Serialize for CmPrime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CmPrimeJson {
            b: self.b,
            alpha: self.record.alpha.to_string(),
            p: self.p.to_string(),
            bits: self.bits,
            hamming_weight: self.hamming_weight,
            trace: self.trace.to_string(),
            order: self.order.to_string(),
        }
        .serialize(s)
    }
}

fn require_quadratic(fld: &CmField) -> Result<()> {
    if fld.g() != 1 {
        return Err(Error::domain(format!("{} is not imaginary quadratic", fld.label)));
    }
    Ok(())
}

/// `α` annotated with `p = αᾱ` when it is a Weil generator with prime norm
/// and nonzero trace.
pub fn cm_prime_from_alpha(fld: &CmField, alpha: &NFElement) -> Result<Option<CmPrime>> {
    require_quadratic(fld)?;
    let check = fld.is_weil_generator(alpha)?;
    if !check.is_generator {
        return Ok(None);
    }
    let p = check.q.clone().expect("weil number");
    let trace = alpha.trace().to_integer();
    if trace.is_zero() || !is_probable_prime(&p) {
        return Ok(None);
    }
    let record = fld.decompose(alpha)?;
    Ok(Some(CmPrime {
        b: None,
        bits: p.bits(),
        hamming_weight: hamming_weight(&p),
        order: &p + 1 - &trace,
        p,
        trace,
        record,
    }))
}

/// Scan `α = b + ω` for `b` in the range, with `ω` the catalog's `γ`.
pub fn cm_prime_search(fld: &CmField, b_range: std::ops::RangeInclusive<i64>) -> Result<Vec<CmPrime>> {
    require_quadratic(fld)?;
    let omega = fld.gamma()?.clone();
    let mut out = Vec::new();
    for b in b_range {
        let alpha = omega.add_rational(&crate::arith::rat(b));
        if let Some(mut c) = cm_prime_from_alpha(fld, &alpha)? {
            c.b = Some(b);
            out.push(c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn sqrt_minus_two_small_range() {
        let cat = Catalog::builtin().unwrap();
        let fld = cat.get("Q(sqrt-2)").unwrap();
        let found = cm_prime_search(fld, 1..=10).unwrap();
        let pairs: Vec<(i64, i64)> = found.iter().map(|c| (c.b.unwrap(), i64::try_from(&c.p).unwrap())).collect();
        let oracle: Vec<(i64, i64)> = (1..=10i64)
            .map(|b| (b, b * b + 2))
            .filter(|&(_, p)| crate::arith::is_prime_u64(p as u64))
            .collect();
        assert_eq!(pairs, oracle);
        assert!(pairs.contains(&(3, 11)));
    }

    #[test]
    fn trace_zero_excluded() {
        let cat = Catalog::builtin().unwrap();
        let fld = cat.get("Q(i)").unwrap();
        let found = cm_prime_search(fld, -3..=3).unwrap();
        assert!(found.iter().all(|c| !c.trace.is_zero()));
        assert!(!found.iter().any(|c| c.b == Some(0)));
        assert!(cm_prime_search(cat.get("Q(zeta5)").unwrap(), 0..=1).is_err());
    }
}
