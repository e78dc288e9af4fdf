//! Searching for Weil generators: unit enumeration, the unit-height search, the
//! quadratic closed form, quartic congruence classes and height censuses.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{count_real_roots, invert_f64, rational_to_f64, Rational};
use crate::cm_field::{CmField, WeilGeneratorRecord};
use crate::error::{Error, Result};
use crate::number_field::NFElement;

/// Units `±u_1^{k_1}⋯u_r^{k_r}` of `F` with height at most `B`.
#[derive(Clone, Debug)]
pub struct UnitEnumerator {
    units: Vec<NFElement>,
    bound: Rational,
    box_bounds: Vec<i64>,
}

/// One emitted unit with its exponent vector and sign.
#[derive(Clone, Debug)]
pub struct EnumeratedUnit {
    pub unit: NFElement,
    pub exponents: Vec<i64>,
    pub negative: bool,
}

impl UnitEnumerator {
    pub fn new(fld: &CmField, bound: &Rational) -> Result<Self> {
        let r = fld.g() - 1;
        if fld.units.len() != r {
            return Err(Error::catalog(format!(
                "{}: expected {r} fundamental units, found {}",
                fld.label,
                fld.units.len()
            )));
        }
        let box_bounds = if bound < &Rational::one() || r == 0 {
            vec![0; r]
        } else {
            exponent_box(&fld.units, rational_to_f64(bound))?
        };
        Ok(UnitEnumerator { units: fld.units.clone(), bound: bound.clone(), box_bounds })
    }

    /// Exponent bounds `|k_i| ≤ K_i` of the search box.
    pub fn box_bounds(&self) -> &[i64] {
        &self.box_bounds
    }

    /// All units of height `≤ B`, ordered by `(|k_1|, …, |k_r|)`, then the
    /// signs of the exponents, then the overall sign.
    pub fn collect(&self) -> Result<Vec<EnumeratedUnit>> {
        if self.bound < Rational::one() {
            return Ok(Vec::new());
        }
        let mut vectors: Vec<Vec<i64>> = vec![Vec::new()];
        for &kb in &self.box_bounds {
            vectors = vectors
                .into_iter()
                .flat_map(|v| {
                    (-kb..=kb).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        vectors.sort_by_key(|v| {
            let abs: Vec<i64> = v.iter().map(|k| k.abs()).collect();
            let signs: Vec<bool> = v.iter().map(|&k| k < 0).collect();
            (abs, signs)
        });
        let f = self
            .units
            .first()
            .map(|u| u.field().clone());
        let cands: Vec<Option<NFElement>> = vectors
            .par_iter()
            .map(|ks| {
                let mut u = match &f {
                    Some(f) => f.one(),
                    None => return Ok(None),
                };
                for (b, &k) in self.units.iter().zip(ks) {
                    u = &u * &b.pow(k)?;
                }
                Ok(height_at_most(&u, &self.bound).then_some(u))
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        for (ks, c) in vectors.into_iter().zip(cands) {
            if let Some(u) = c {
                out.push(EnumeratedUnit { unit: u.clone(), exponents: ks.clone(), negative: false });
                out.push(EnumeratedUnit { unit: -u, exponents: ks, negative: true });
            }
        }
        Ok(out)
    }
}

/// Box in exponent space containing every unit of height `≤ B`.
///
/// For such a unit every `log|σ_j(u)|` lies in `[-(g-1) log B, log B]`, and
/// the exponents are recovered from `r` of these logs.
fn exponent_box(units: &[NFElement], b: f64) -> Result<Vec<i64>> {
    let r = units.len();
    let g = r + 1;
    let m: Vec<Vec<f64>> = (0..r)
        .map(|j| units.iter().map(|u| u.embeddings()[j].norm().ln()).collect())
        .collect();
    let inv = invert_f64(&m).ok_or_else(|| Error::catalog("fundamental units are dependent"))?;
    let lb = (g as f64 - 1.0) * b.ln().max(0.0);
    Ok((0..r)
        .map(|i| {
            let s: f64 = inv[i].iter().map(|v| v.abs()).sum();
            (s * lb * (1.0 + 1e-9) + 1e-6).floor() as i64 + 1
        })
        .collect())
}

/// Exact test `h(u) ≤ B` for an element of a totally real field.
///
/// Floating point decides clear cases; near the boundary the distinct real
/// roots of the characteristic polynomial in `[-B, B]` are counted.
pub fn height_at_most(u: &NFElement, b: &Rational) -> bool {
    let bf = rational_to_f64(b);
    let h = u.height_f64();
    if h < bf * (1.0 - 1e-9) {
        return true;
    }
    if h > bf * (1.0 + 1e-9) {
        return false;
    }
    let sf = u.char_poly().squarefree_part();
    let d = sf.degree().unwrap_or(0);
    let mut inside = count_real_roots(&sf, &-b, b);
    if sf.eval(&-b).is_zero() {
        inside += 1;
    }
    inside == d
}

/// Result of a unit-height search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub records: Vec<WeilGeneratorRecord>,
    /// A prime certifying that `O_F` is not monogenic, so no search is needed.
    pub obstruction: Option<u64>,
    pub units_tested: usize,
    pub pairs_tested: usize,
    /// Whether the catalog marks `T` as complete.
    pub t_complete: bool,
}

/// All Weil generators `α(u, η)` with `h(u) ≤ B`.
pub fn algorithm1(fld: &CmField, bound: &Rational) -> Result<SearchOutcome> {
    if fld.g() < 2 {
        return Err(Error::domain("algorithm1 needs [F:Q] >= 2; use quadratic_weil_gens"));
    }
    if let Some(p) = fld.monogenic_obstruction() {
        return Ok(SearchOutcome {
            records: Vec::new(),
            obstruction: Some(p),
            units_tested: 0,
            pairs_tested: 0,
            t_complete: fld.t_complete,
        });
    }
    fld.gamma()?;
    let units = UnitEnumerator::new(fld, bound)?.collect()?;
    let pairs: Vec<(&NFElement, usize)> =
        units.iter().flat_map(|u| (0..fld.t.len()).map(move |i| (&u.unit, i))).collect();
    let found: Vec<Option<WeilGeneratorRecord>> =
        pairs.par_iter().map(|&(u, i)| candidate(fld, u, i)).collect::<Result<_>>()?;
    Ok(SearchOutcome {
        records: found.into_iter().flatten().collect(),
        obstruction: None,
        units_tested: units.len(),
        pairs_tested: pairs.len(),
        t_complete: fld.t_complete,
    })
}

/// The body of the search loop for one `(u, η)`.
pub fn candidate(fld: &CmField, u: &NFElement, eta_index: usize) -> Result<Option<WeilGeneratorRecord>> {
    let eta = &fld.t[eta_index];
    let (a, residual) = fld.a_from_u_eta(u, eta)?;
    if residual.iter().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    let alpha = fld.alpha_from(u, eta, &a)?;
    if !alpha.is_integral() || !a.is_integer() {
        return Ok(None);
    }
    let check = fld.is_weil_generator(&alpha)?;
    if !check.is_generator {
        return Ok(None);
    }
    Ok(Some(WeilGeneratorRecord {
        alpha,
        u: u.clone(),
        eta: eta.clone(),
        eta_index,
        a: a.to_integer(),
        q: check.q.expect("weil number"),
    }))
}

fn quadratic_params(fld: &CmField) -> Result<(BigInt, BigInt)> {
    if fld.g() != 1 {
        return Err(Error::domain(format!("{} is not imaginary quadratic", fld.label)));
    }
    let gm = fld.gamma()?;
    let (n, t) = gm.norm_trace();
    if !n.is_integer() || !t.is_integer() {
        return Err(Error::catalog(format!("{}: gamma is not integral", fld.label)));
    }
    Ok((n.to_integer(), t.to_integer()))
}

/// Number of `b ∈ Z` with `Norm(b + γ) ≤ N²`.
fn count_translates(norm: &BigInt, trace: &BigInt, n: &BigInt) -> BigInt {
    // (2b + t)^2 ≤ 4N^2 - (4n - t^2)
    let r = BigInt::from(4) * n * n - (BigInt::from(4) * norm - trace * trace);
    if r.is_negative() {
        return BigInt::zero();
    }
    let s = r.sqrt();
    let two = BigInt::from(2);
    if (trace % &two).is_zero() {
        &two * (&s / &two) + 1
    } else {
        &two * ((&s + 1) / &two)
    }
}

/// `#{α ∈ W : h(α) ≤ N}` for an imaginary quadratic field, in closed form.
pub fn quadratic_count(fld: &CmField, n: &BigInt) -> Result<BigInt> {
    let (norm, trace) = quadratic_params(fld)?;
    if n.is_negative() {
        return Ok(BigInt::zero());
    }
    Ok(BigInt::from(2) * count_translates(&norm, &trace, n))
}

/// All Weil generators `b ± γ` of an imaginary quadratic field with
/// `h(α) ≤ N`, ordered by `q`, then `b`, then sign.
pub fn quadratic_weil_gens(fld: &CmField, n: &BigInt) -> Result<Vec<WeilGeneratorRecord>> {
    let (norm, trace) = quadratic_params(fld)?;
    if n.is_negative() {
        return Ok(Vec::new());
    }
    let r = BigInt::from(4) * n * n - (BigInt::from(4) * &norm - &trace * &trace);
    if r.is_negative() {
        return Ok(Vec::new());
    }
    let s = r.sqrt();
    let gm = fld.gamma()?.clone();
    let lo: BigInt = (-&s - &trace) / 2 - 1;
    let hi: BigInt = (&s - &trace) / 2 + 1;
    let n2 = n * n;
    let mut out = Vec::new();
    let mut b = lo;
    while b <= hi {
        let br = Rational::from_integer(b.clone());
        for sign in [1i64, -1] {
            let alpha = if sign == 1 { gm.add_rational(&br) } else { (-&gm).add_rational(&br) };
            let rec = fld.decompose(&alpha)?;
            if rec.q <= n2 {
                out.push((b.clone(), sign, rec));
            }
        }
        b += 1;
    }
    out.sort_by(|x, y| (&x.2.q, &x.0, -x.1).cmp(&(&y.2.q, &y.0, -y.1)));
    Ok(out.into_iter().map(|x| x.2).collect())
}

/// One congruence row: `4α(u_0^k, η_0)` and its class mod `4O_K`.
#[derive(Clone, Debug)]
pub struct CongruenceRow {
    pub k: usize,
    pub a: Rational,
    pub four_alpha: NFElement,
    pub class: Vec<BigInt>,
    pub admissible: bool,
}

#[derive(Clone, Debug)]
pub struct QuarticCongruence {
    /// Order of `u_0` in `(O_K/4O_K)^×`.
    pub m: usize,
    pub admissible: Vec<usize>,
    pub rows: Vec<CongruenceRow>,
    pub c6: f64,
    pub rho: f64,
    pub log_height_u0: f64,
}

/// Congruence classes of `k` for which `α(u_0^k, η_0)` is integral.
pub fn quartic_congruence(fld: &CmField) -> Result<QuarticCongruence> {
    if fld.g() != 2 {
        return Err(Error::domain(format!("{} is not a quartic CM field", fld.label)));
    }
    let u0 = fld
        .units
        .first()
        .ok_or_else(|| Error::catalog(format!("{}: no fundamental unit", fld.label)))?;
    let eta0 = fld
        .t
        .first()
        .ok_or_else(|| Error::catalog(format!("{}: empty T", fld.label)))?;
    let uk = fld.embed_f(u0);
    let one = fld.k.one();
    let mut p = uk.clone();
    let mut m = 0;
    for i in 1..=256 {
        if fld.mod4_class(&(&p - &one))?.iter().all(|c| c.is_zero()) {
            m = i;
            break;
        }
        p = &p * &uk;
    }
    if m == 0 {
        return Err(Error::catalog(format!("{}: u0 has no finite order mod 4", fld.label)));
    }
    let mut rows = Vec::with_capacity(m);
    let mut u = fld.f.one();
    let four = Rational::from_integer(4.into());
    for k in 0..m {
        let (a, _) = fld.a_from_u_eta(&u, eta0)?;
        let four_alpha = fld.alpha_from(&u, eta0, &a)?.scale(&four);
        let class = fld.mod4_class(&four_alpha)?;
        let admissible = class.iter().all(|c| c.is_zero());
        rows.push(CongruenceRow { k, a, four_alpha, class, admissible });
        u = &u * u0;
    }
    let admissible: Vec<usize> = rows.iter().filter(|r| r.admissible).map(|r| r.k).collect();
    let c6 = admissible.len() as f64 / m as f64;
    let log_height_u0 = u0.height_f64().ln();
    Ok(QuarticCongruence { m, admissible, rows, c6, rho: 4.0 * c6 / log_height_u0, log_height_u0 })
}

/// One row of a census: `N`, the exact count and the predicted value.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusRow {
    pub n: BigInt,
    pub count: u64,
    pub predicted: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    /// Unit height bound used for the search (none for quadratic fields).
    pub unit_bound: Option<Rational>,
    /// Observed range of `h(α)/h(u)^2` over records with `h(u) ≥ 2`.
    pub height_ratio: Option<(f64, f64)>,
}

/// Default unit height bound for a quartic census up to `N`: `10·√N`.
pub fn default_census_bound(n_max: &BigInt) -> Rational {
    Rational::from_integer(BigInt::from(10) * n_max.sqrt() + 10)
}

/// Counts of Weil generators with `h(α) ≤ N` over a grid of `N`.
pub fn census(fld: &CmField, grid: &[BigInt], bound: Option<&Rational>) -> Result<Census> {
    if fld.g() == 1 {
        let rows = grid
            .iter()
            .map(|n| {
                Ok(CensusRow {
                    n: n.clone(),
                    count: quadratic_count(fld, n)?.to_u64().unwrap_or(u64::MAX),
                    predicted: Some(4.0 * n.to_f64().unwrap_or(f64::INFINITY)),
                })
            })
            .collect::<Result<_>>()?;
        return Ok(Census { rows, unit_bound: None, height_ratio: None });
    }
    let n_max = grid.iter().max().cloned().unwrap_or_default();
    let b = bound.cloned().unwrap_or_else(|| default_census_bound(&n_max));
    let out = algorithm1(fld, &b)?;
    let rho = if fld.g() == 2 && out.obstruction.is_none() { Some(quartic_congruence(fld)?.rho) } else { None };
    let mut ratio: Option<(f64, f64)> = None;
    for r in &out.records {
        let hu = r.u.height_f64();
        if hu >= 2.0 {
            let v = r.alpha.height_f64() / (hu * hu);
            ratio = Some(match ratio {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
    }
    let rows = grid
        .iter()
        .map(|n| {
            let n2 = n * n;
            let count = if n.is_positive() { out.records.iter().filter(|r| r.q <= n2).count() as u64 } else { 0 };
            let predicted = rho.map(|rho| {
                let nf = n.to_f64().unwrap_or(f64::INFINITY);
                if nf > 0.0 {
                    rho * nf.ln()
                } else {
                    0.0
                }
            });
            CensusRow { n: n.clone(), count, predicted }
        })
        .collect();
    Ok(Census { rows, unit_bound: Some(b), height_ratio: ratio })
}

/// CSV with header `N,count,predicted`.
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut s = String::from("N,count,predicted\n");
    for r in rows {
        let p = r.predicted.map(|v| format!("{v:.6}")).unwrap_or_default();
        s.push_str(&format!("{},{},{}\n", r.n, r.count, p));
    }
    s
}
