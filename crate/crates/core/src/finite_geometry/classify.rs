//! Super-isolation verdicts: the elliptic-curve case list and the
//! ordinary abelian variety test through Weil generators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::frobenius::FrobeniusData;
use crate::arith::{self, invert_f64, poly_roots_f64, prime_power_big, Rational, UniPoly};
use crate::catalog::Catalog;
use crate::cm_field::CmField;
use crate::error::{Error, Result};
use crate::number_field::NFElement;

/// Discriminants of the imaginary quadratic fields of class number one.
pub const CLASS_NUMBER_ONE_DISCS: [i64; 9] = [-3, -4, -7, -8, -11, -19, -43, -67, -163];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictCase {
    /// Case 1..=5 of the elliptic list.
    Elliptic(u8),
    /// Ordinary, Weil generator, class number one.
    OrdinaryHt,
}

impl Serialize for VerdictCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            VerdictCase::Elliptic(k) => s.serialize_u8(*k),
            VerdictCase::OrdinaryHt => s.serialize_str("ordinary-HT"),
        }
    }
}

/// `verdict` is `None` when the question is outside what can be decided
/// (not simple, not ordinary, or an unknown field).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperIsolatedVerdict {
    pub verdict: Option<bool>,
    pub case: Option<VerdictCase>,
    pub witness: BTreeMap<String, String>,
}

impl SuperIsolatedVerdict {
    pub fn is_super_isolated(&self) -> bool {
        self.verdict == Some(true)
    }

    pub fn elliptic_case(&self) -> Option<u8> {
        match self.case {
            Some(VerdictCase::Elliptic(k)) => Some(k),
            _ => None,
        }
    }
}

fn w(m: &mut BTreeMap<String, String>, k: &str, v: impl ToString) {
    m.insert(k.to_string(), v.to_string());
}

/// Super-isolation of an elliptic curve over `F_q` with trace `t`; the
/// lowest-numbered matching case is reported.
pub fn classify_elliptic(q: &BigInt, t: &BigInt) -> Result<SuperIsolatedVerdict> {
    let (p, a) = prime_power_big(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    let t2 = t * t;
    if t2 > BigInt::from(4) * q {
        return Err(Error::Hasse { t: t.to_string(), q: q.to_string() });
    }
    let d = &t2 - BigInt::from(4) * q;
    let small_p = p.to_u64().filter(|&v| v <= 13);
    let p_in = |set: &[u64]| small_p.is_some_and(|v| set.contains(&v));
    let mut witness = BTreeMap::new();
    w(&mut witness, "p", &p);
    w(&mut witness, "a", a);
    w(&mut witness, "t^2 - 4q", &d);

    let p_divides_t = t.is_multiple_of(&p);
    let d_small = d.to_i64().filter(|v| CLASS_NUMBER_ONE_DISCS.contains(v));
    let conditions: [Vec<(bool, String)>; 5] = [
        vec![
            (!p_divides_t, "p divides t".into()),
            (d_small.is_some(), format!("t^2 - 4q = {d} is not a class-number-one discriminant")),
        ],
        vec![
            (p_in(&[2, 3, 5, 7, 13]), format!("p = {p} not in {{2, 3, 5, 7, 13}}")),
            (d.is_zero(), "t^2 != 4q".into()),
        ],
        vec![
            (p_in(&[2, 3]), format!("p = {p} not in {{2, 3}}")),
            (t2 == num_traits::pow(p.clone(), a as usize + 1), "t^2 != p^(a+1)".into()),
        ],
        vec![(p_in(&[2]), "p != 2".into()), (t.is_zero(), "t != 0".into())],
        vec![(p_in(&[3]), "p != 3".into()), (&t2 == q, "t^2 != q".into())],
    ];
    for (i, conds) in conditions.iter().enumerate() {
        match conds.iter().find(|(ok, _)| !ok) {
            None => {
                return Ok(SuperIsolatedVerdict {
                    verdict: Some(true),
                    case: Some(VerdictCase::Elliptic(i as u8 + 1)),
                    witness,
                })
            }
            Some((_, why)) => w(&mut witness, &format!("case-{}", i + 1), why),
        }
    }
    Ok(SuperIsolatedVerdict { verdict: Some(false), case: None, witness })
}

/// A root of the irreducible integer polynomial `f` inside some catalog
/// field of the same degree.
pub fn find_root_in_catalog<'a>(f: &UniPoly, catalog: &'a Catalog) -> Option<(&'a CmField, NFElement)> {
    let n = f.degree()?;
    let disc_f = arith::discriminant(f).ok()?;
    catalog
        .fields()
        .iter()
        .filter(|fld| fld.k.degree() == n)
        .find_map(|fld| {
            let ratio = &disc_f / Rational::from_integer(fld.disc_k.clone());
            (ratio.is_integer() && arith::exact_sqrt(&ratio.to_integer()).is_some())
                .then(|| root_in_field(f, fld))
                .flatten()
                .map(|r| (fld, r))
        })
}

/// Solve for the coordinates of a root from its complex images, one
/// assignment of conjugate root pairs to embeddings at a time.
fn root_in_field(f: &UniPoly, fld: &CmField) -> Option<NFElement> {
    let k = &fld.k;
    let n = k.degree();
    let kpoly_disc = arith::discriminant(k.poly()).ok()?;
    let index2 = (kpoly_disc / Rational::from_integer(fld.disc_k.clone())).abs();
    let den = arith::exact_sqrt(&index2.to_integer())?.to_u64()?.max(1) as f64;
    let upper = |v: &[num_complex::Complex64]| {
        let mut u: Vec<_> = v.iter().copied().filter(|z| z.im > 0.0).collect();
        u.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        u
    };
    let thetas = upper(k.roots());
    let roots = upper(&poly_roots_f64(f));
    if thetas.len() * 2 != n || roots.len() * 2 != n {
        return None;
    }
    let mut m = Vec::with_capacity(n);
    for th in &thetas {
        let pw: Vec<_> = (0..n).map(|i| th.powi(i as i32)).collect();
        m.push(pw.iter().map(|z| z.re).collect::<Vec<f64>>());
        m.push(pw.iter().map(|z| z.im).collect::<Vec<f64>>());
    }
    let minv = invert_f64(&m)?;
    let g = thetas.len();
    let mut perm: Vec<usize> = (0..g).collect();
    loop {
        for signs in 0u32..(1 << g) {
            let mut b = Vec::with_capacity(n);
            for (j, &r) in perm.iter().enumerate() {
                let z = roots[r];
                let im = if signs >> j & 1 == 1 { -z.im } else { z.im };
                b.push(z.re);
                b.push(im);
            }
            let c: Vec<f64> = minv.iter().map(|row| row.iter().zip(&b).map(|(a, x)| a * x).sum()).collect();
            let scaled: Vec<f64> = c.iter().map(|v| v * den).collect();
            if scaled.iter().all(|v| (v - v.round()).abs() < 1e-5 * (1.0 + v.abs())) {
                let coords = scaled
                    .iter()
                    .map(|v| Rational::new(BigInt::from(v.round() as i64), BigInt::from(den as i64)))
                    .collect();
                let cand = k.element(coords).ok()?;
                if eval_at(f, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn eval_at(f: &UniPoly, x: &NFElement) -> NFElement {
    f.coeffs()
        .iter()
        .rev()
        .fold(x.field().zero(), |acc, c| (&acc * x).add_rational(c))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Super-isolation of a simple ordinary abelian variety from its Frobenius
/// data, through `Q(π)` in the catalog.
pub fn classify_ordinary_av(fd: &FrobeniusData, catalog: &Catalog) -> Result<SuperIsolatedVerdict> {
    classify_weil_polynomial(&fd.charpoly, fd.q, catalog)
}

/// As [`classify_ordinary_av`] for a bare characteristic polynomial over `F_q`.
pub fn classify_weil_polynomial(charpoly: &UniPoly, q: u64, catalog: &Catalog) -> Result<SuperIsolatedVerdict> {
    let (p, _) = arith::prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    let deg = charpoly.degree().unwrap_or(0);
    if deg == 0 || deg % 2 == 1 || !charpoly.is_monic() || !charpoly.is_integral() {
        return Err(Error::domain(format!("{charpoly} is not a monic integral polynomial of even degree")));
    }
    let g = deg / 2;
    let mut witness = BTreeMap::new();
    w(&mut witness, "charpoly", charpoly.display_with("x"));
    w(&mut witness, "q", q);
    let undecided = |mut witness: BTreeMap<String, String>, status: String| {
        w(&mut witness, "status", status);
        Ok(SuperIsolatedVerdict { verdict: None, case: None, witness })
    };
    if !arith::is_irreducible(charpoly) {
        return undecided(witness, "not simple or not handled: the characteristic polynomial is reducible".into());
    }
    let a_g = charpoly.coeff(g).to_integer();
    let ordinary = !a_g.is_multiple_of(&BigInt::from(p));
    w(
        &mut witness,
        "ordinary",
        if ordinary {
            format!("true: p = {p} does not divide a_g = {a_g}")
        } else {
            format!("false: p = {p} divides a_g = {a_g}")
        },
    );
    let Some((fld, pi)) = find_root_in_catalog(charpoly, catalog) else {
        return undecided(witness, "unknown field: Q(pi) matches no catalog field".into());
    };
    w(&mut witness, "field", &fld.label);
    w(&mut witness, "pi", &pi);
    let check = fld.is_weil_generator(&pi)?;
    w(
        &mut witness,
        "weil-generator",
        if check.is_generator { "true".to_string() } else { format!("false: {}", check.detail) },
    );
    if let Some(qq) = &check.q {
        w(&mut witness, "pi*conj(pi)", qq);
    }
    if check.is_generator {
        match fld.decompose(&pi) {
            Ok(r) => w(&mut witness, "decomposition", format!("u = {}, eta = T[{}], a = {}", r.u, r.eta_index, r.a)),
            Err(e) => w(&mut witness, "decomposition", format!("unavailable: {e}")),
        }
    }
    w(&mut witness, "class-number", fld.class_number);
    if !ordinary {
        return undecided(witness, "out of scope: not ordinary".into());
    }
    let verdict = check.is_generator && fld.class_number == 1 && check.q == Some(BigInt::from(q));
    Ok(SuperIsolatedVerdict { verdict: Some(verdict), case: Some(VerdictCase::OrdinaryHt), witness })
}

/// Class number of the imaginary quadratic order of discriminant `d < 0`,
/// by counting reduced binary quadratic forms.
pub fn class_number_imaginary(d: i64) -> u64 {
    assert!(d < 0 && d.rem_euclid(4) <= 1, "not a negative discriminant");
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if BigInt::from(a).gcd(&BigInt::from(b)).gcd(&BigInt::from(c)).is_one() {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ce(q: i64, t: i64) -> SuperIsolatedVerdict {
        classify_elliptic(&BigInt::from(q), &BigInt::from(t)).unwrap()
    }

    #[test]
    fn elliptic_table_rows() {
        assert_eq!(ce(7, 5).elliptic_case(), Some(1));
        assert_eq!(ce(4, -4).elliptic_case(), Some(2));
        assert_eq!(ce(2, 2).elliptic_case(), Some(3));
        assert_eq!(ce(2, 0).elliptic_case(), Some(4));
        assert_eq!(ce(9, 3).elliptic_case(), Some(5));
        let v = ce(5, 0);
        assert_eq!(v.verdict, Some(false));
        assert_eq!(v.witness["case-2"], "t^2 != 4q");
        assert_eq!(ce(25, 10).elliptic_case(), Some(2));
        assert_eq!(ce(25, -10).elliptic_case(), Some(2));
        assert_eq!(ce(8, 4).elliptic_case(), Some(3));
        assert_eq!(ce(27, 9).elliptic_case(), Some(3));
        assert_eq!(ce(8, 0).elliptic_case(), Some(4));
    }

    #[test]
    fn elliptic_errors() {
        assert!(matches!(
            classify_elliptic(&BigInt::from(7), &BigInt::from(6)),
            Err(Error::Hasse { .. })
        ));
        assert!(classify_elliptic(&BigInt::from(6), &BigInt::from(1)).is_err());
    }

    #[test]
    fn class_numbers_of_small_discriminants() {
        let ones: Vec<i64> = (1..=200)
            .map(|k| -k)
            .filter(|&d: &i64| d.rem_euclid(4) <= 1)
            .filter(|&d| is_fundamental(d) && class_number_imaginary(d) == 1)
            .collect();
        assert_eq!(ones, vec![-3, -4, -7, -8, -11, -19, -43, -67, -163]);
        assert_eq!(class_number_imaginary(-23), 3);
        assert_eq!(class_number_imaginary(-20), 2);
        assert_eq!(class_number_imaginary(-56), 4);
    }

    fn is_fundamental(d: i64) -> bool {
        let m = if d.rem_euclid(4) == 0 { d / 4 } else { d };
        if d.rem_euclid(4) == 0 && !matches!(m.rem_euclid(4), 2 | 3) {
            return false;
        }
        (2..=m.abs()).take_while(|k| k * k <= m.abs()).all(|k| m % (k * k) != 0)
    }

    #[test]
    fn example_quartic_over_f11() {
        let cat = Catalog::builtin().unwrap();
        let f = UniPoly::from_ints(&[121, 121, 51, 11, 1]);
        let v = classify_weil_polynomial(&f, 11, &cat).unwrap();
        assert_eq!(v.verdict, Some(true), "{v:?}");
        assert_eq!(v.witness["field"], "Q(zeta5)");
        assert_eq!(v.witness["pi*conj(pi)"], "11");
        assert!(v.witness["ordinary"].starts_with("true"));
    }

    #[test]
    fn supersingular_quadratic_is_not_a_generator() {
        let cat = Catalog::builtin().unwrap();
        let v = classify_weil_polynomial(&UniPoly::from_ints(&[9, -3, 1]), 9, &cat).unwrap();
        assert_eq!(v.verdict, None);
        assert!(v.witness["weil-generator"].starts_with("false"), "{v:?}");
        assert!(v.witness["status"].starts_with("out of scope"));
    }

    #[test]
    fn unknown_and_reducible() {
        let cat = Catalog::builtin().unwrap();
        // Q(sqrt-5) has class number two and is not catalogued
        let v = classify_weil_polynomial(&UniPoly::from_ints(&[9, 4, 1]), 9, &cat).unwrap();
        assert_eq!(v.verdict, None);
        assert!(v.witness["status"].starts_with("unknown field"));
        let r = classify_weil_polynomial(&UniPoly::from_ints(&[4, 4, 1]), 4, &cat).unwrap();
        assert!(r.witness["status"].starts_with("not simple"));
    }

    #[test]
    fn ordinary_route_agrees_with_elliptic_case_one() {
        let cat = Catalog::builtin().unwrap();
        for q in [5u64, 7, 11, 13, 17, 19, 23] {
            let bound = (4.0 * q as f64).sqrt() as i64;
            for t in -bound..=bound {
                if t.rem_euclid(q as i64) == 0 || t * t == 4 * q as i64 {
                    continue;
                }
                let f = UniPoly::from_ints(&[q as i64, -t, 1]);
                let av = classify_weil_polynomial(&f, q, &cat).unwrap();
                let ell = ce(q as i64, t);
                let d = t * t - 4 * q as i64;
                let (fund, _) = fundamental_part(d);
                if class_number_imaginary(fund) == 1 {
                    assert_eq!(av.verdict, ell.verdict, "q={q} t={t} {av:?}");
                } else {
                    assert_eq!(ell.verdict, Some(false));
                    assert_ne!(av.verdict, Some(true));
                }
            }
        }
    }

    fn fundamental_part(d: i64) -> (i64, i64) {
        let mut m = d;
        let mut f = 1;
        let mut k = 2;
        while k * k <= m.abs() {
            while m % (k * k) == 0 && (m / (k * k)).rem_euclid(4) <= 1 {
                m /= k * k;
                f *= k;
            }
            k += 1;
        }
        (m, f)
    }
}
