//! Frobenius characteristic polynomials and zeta numerators from point counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::curve::{count_points_with_budget, CurveModel, COUNT_BUDGET};
use crate::arith::{poly_roots_f64, UniPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusData {
    pub q: u64,
    pub genus: usize,
    /// `#C(F_{q^i})` for `i = 1..=g`
    pub counts: Vec<u64>,
    #[serde(serialize_with = "ser_poly")]
    pub charpoly: UniPoly,
    #[serde(serialize_with = "ser_bigint")]
    pub trace: BigInt,
}

fn ser_poly<S: serde::Serializer>(p: &UniPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.display_with("x"))
}

fn ser_bigint<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

impl FrobeniusData {
    /// Integer coefficients, ascending.
    pub fn coefficients(&self) -> Vec<BigInt> {
        self.charpoly.integer_coeffs().expect("integral charpoly")
    }

    /// The middle coefficient `a_g`.
    pub fn middle_coefficient(&self) -> BigInt {
        self.coefficients()[self.genus].clone()
    }
}

pub fn frobenius_charpoly(c: &CurveModel) -> Result<FrobeniusData> {
    frobenius_charpoly_with_budget(c, COUNT_BUDGET)
}

pub fn frobenius_charpoly_with_budget(c: &CurveModel, budget: u64) -> Result<FrobeniusData> {
    let g = c.genus;
    let counts = (1..=g)
        .map(|i| count_points_with_budget(c, i, budget))
        .collect::<Result<Vec<_>>>()?;
    charpoly_from_counts(c.q(), g, &counts)
}

/// Newton's identities on `s_i = q^i + 1 - N_i` plus the functional equation.
pub fn charpoly_from_counts(q: u64, g: usize, counts: &[u64]) -> Result<FrobeniusData> {
    if counts.len() != g || g == 0 {
        return Err(Error::domain(format!("need {g} point counts, got {}", counts.len())));
    }
    let qb = BigInt::from(q);
    let s: Vec<BigInt> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| qb.pow(i as u32 + 1) + 1 - BigInt::from(n))
        .collect();
    for (i, si) in s.iter().enumerate() {
        // |s_i| <= 2g q^{i/2}
        if si * si > BigInt::from(4 * g * g) * qb.pow(i as u32 + 1) {
            return Err(Error::domain(format!(
                "count {} over F_{{q^{}}} violates the Hasse-Weil bound",
                counts[i],
                i + 1
            )));
        }
    }
    let mut e = vec![BigInt::one()];
    for k in 1..=g {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quo, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::domain("power sums are not those of an integral polynomial"));
        }
        e.push(quo);
    }
    // c_k is the coefficient of x^{2g-k}
    let mut c = vec![BigInt::zero(); 2 * g + 1];
    for k in 0..=g {
        c[k] = if k % 2 == 0 { e[k].clone() } else { -e[k].clone() };
    }
    for k in 0..g {
        c[2 * g - k] = qb.pow((g - k) as u32) * &c[k];
    }
    let asc: Vec<BigInt> = c.into_iter().rev().collect();
    let charpoly = UniPoly::from_bigints(&asc);
    check_weil_roots(&charpoly, q)?;
    Ok(FrobeniusData { q, genus: g, counts: counts.to_vec(), charpoly, trace: s[0].clone() })
}

fn check_weil_roots(f: &UniPoly, q: u64) -> Result<()> {
    let qf = q as f64;
    for r in poly_roots_f64(&f.squarefree_part()) {
        if (r.norm_sqr() - qf).abs() > 1e-6 * qf {
            return Err(Error::domain(format!("root {r} of {} has |root|^2 != {q}", f.display_with("x"))));
        }
    }
    Ok(())
}

/// `t^{2g} P(1/t)`
pub fn zeta_numerator(fd: &FrobeniusData) -> UniPoly {
    fd.charpoly.reversed(2 * fd.genus)
}

/// Functional equation `a_{2g-i} = q^{g-i} a_i`, with `a_i` the coefficient of `x^{2g-i}`.
pub fn satisfies_functional_equation(fd: &FrobeniusData) -> bool {
    let g = fd.genus;
    let cs = fd.coefficients();
    let a = |i: usize| cs[2 * g - i].clone();
    (0..=g).all(|i| a(2 * g - i) == BigInt::from(fd.q).pow((g - i) as u32) * a(i))
}

/// `|q^i + 1 - N_i| <= 2g q^{i/2}` for every recorded count.
pub fn satisfies_hasse_weil(fd: &FrobeniusData) -> bool {
    let qb = BigInt::from(fd.q);
    fd.counts.iter().enumerate().all(|(i, &n)| {
        let s = qb.pow(i as u32 + 1) + 1 - BigInt::from(n);
        &s * &s <= BigInt::from(4 * fd.genus * fd.genus) * qb.pow(i as u32 + 1)
    })
}

/// `t_a = α^a + β^a` from `t_{a+1} = t_1 t_a - q t_{a-1}`.
pub fn trace_recurrence(q: &BigInt, t1: &BigInt, a_max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(a_max);
    let (mut prev, mut cur) = (BigInt::from(2), t1.clone());
    for _ in 0..a_max {
        out.push(cur.clone());
        let next = t1 * &cur - q * &prev;
        prev = cur;
        cur = next;
    }
    out
}
