//! Brute-force census of elliptic curves over small fields up to
//! isomorphism, grouped into isogeny classes by point count, and traces
//! over extension fields.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::curve::{count_points_with_budget, CurveKind, CurveModel};
use super::field::{Elem, FiniteField};
use super::frobenius::trace_recurrence;
use crate::arith::prime_power;
use crate::error::{Error, Result};

/// Largest `q` enumerated with full Weierstrass models.
pub const FULL_CENSUS_MAX_Q: u64 = 16;
/// Largest `q` (with `p >= 5`) enumerated with short Weierstrass models.
pub const SHORT_CENSUS_MAX_Q: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMethod {
    FullWeierstrass,
    ShortWeierstrass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsogenyClassRow {
    pub t: i64,
    pub points: u64,
    /// isomorphism classes in the isogeny class
    pub iso_classes: usize,
    /// nonsingular models in the isogeny class
    pub models: u64,
    pub singleton: bool,
    pub representatives: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsogenyCensus {
    pub q: u64,
    pub method: CensusMethod,
    pub iso_classes: usize,
    pub rows: Vec<IsogenyClassRow>,
    #[serde(skip)]
    field: FiniteField,
    /// class id per model index, `u32::MAX` for singular models
    #[serde(skip)]
    class_of: Vec<u32>,
    #[serde(skip)]
    class_t: Vec<i64>,
}

/// Field operations as lookup tables on element indices.
struct Tables {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// number of `y` with `y^2 + b y = c`, indexed `b*q + c`
    sol: Vec<u8>,
}

impl Tables {
    fn new(k: &FiniteField) -> Self {
        let q = k.size() as usize;
        let e: Vec<Elem> = (0..q as u64).map(|i| k.from_index(i)).collect();
        let idx = |a: &Elem| k.index(a) as u16;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for i in 0..q {
            for j in 0..q {
                add[i * q + j] = idx(&k.add(&e[i], &e[j]));
                mul[i * q + j] = idx(&k.mul(&e[i], &e[j]));
            }
        }
        let neg = e.iter().map(|a| idx(&k.neg(a))).collect();
        let inv = e.iter().map(|a| if k.is_zero(a) { 0 } else { idx(&k.inv(a).expect("nonzero")) }).collect();
        let mut sol = vec![0u8; q * q];
        for b in 0..q {
            for y in 0..q {
                let c = add[mul[y * q + y] as usize * q + mul[b * q + y] as usize] as usize;
                sol[b * q + c] += 1;
            }
        }
        Tables { q, add, mul, neg, inv, sol }
    }

    #[inline]
    fn a(&self, x: u16, y: u16) -> u16 {
        self.add[x as usize * self.q + y as usize]
    }
    #[inline]
    fn m(&self, x: u16, y: u16) -> u16 {
        self.mul[x as usize * self.q + y as usize]
    }
    #[inline]
    fn s(&self, x: u16, y: u16) -> u16 {
        self.a(x, self.neg[y as usize])
    }
    /// image of the integer `k`
    fn int(&self, k: u64) -> u16 {
        (0..k).fold(0u16, |acc, _| self.a(acc, 1))
    }

    fn discriminant(&self, c: &[u16; 5]) -> u16 {
        let [a1, a2, a3, a4, a6] = *c;
        let (two, three, four) = (self.int(2), self.int(3), self.int(4));
        let b2 = self.a(self.m(a1, a1), self.m(four, a2));
        let b4 = self.a(self.m(two, a4), self.m(a1, a3));
        let b6 = self.a(self.m(a3, a3), self.m(four, a6));
        let b8 = {
            let t1 = self.m(self.m(a1, a1), a6);
            let t2 = self.m(four, self.m(a2, a6));
            let t3 = self.m(self.m(a1, a3), a4);
            let t4 = self.m(a2, self.m(a3, a3));
            self.s(self.a(self.s(self.a(t1, t2), t3), t4), self.m(a4, a4))
        };
        let d1 = self.neg[self.m(self.m(b2, b2), b8) as usize];
        let d2 = self.m(self.int(8), self.m(b4, self.m(b4, b4)));
        let d3 = self.m(self.m(three, self.m(three, three)), self.m(b6, b6));
        let d4 = self.m(self.m(three, three), self.m(b2, self.m(b4, b6)));
        self.a(self.s(self.s(d1, d2), d3), d4)
    }

    /// Points on the model, including the one at infinity.
    fn count(&self, c: &[u16; 5]) -> u64 {
        let [a1, a2, a3, a4, a6] = *c;
        let mut n = 1u64;
        for x in 0..self.q as u16 {
            let x2 = self.m(x, x);
            let rhs = self.a(self.a(self.a(self.m(x2, x), self.m(a2, x2)), self.m(a4, x)), a6);
            let b = self.a(self.m(a1, x), a3);
            n += self.sol[b as usize * self.q + rhs as usize] as u64;
        }
        n
    }

    /// Coordinate change `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
    fn transform(&self, c: &[u16; 5], u: u16, r: u16, s: u16, t: u16) -> [u16; 5] {
        let [a1, a2, a3, a4, a6] = *c;
        let (two, three) = (self.int(2), self.int(3));
        let ui = self.inv[u as usize];
        let u2 = self.m(ui, ui);
        let u3 = self.m(u2, ui);
        let u4 = self.m(u2, u2);
        let u6 = self.m(u3, u3);
        let n1 = self.a(a1, self.m(two, s));
        let n2 = self.s(self.a(self.s(a2, self.m(s, a1)), self.m(three, r)), self.m(s, s));
        let n3 = self.a(self.a(a3, self.m(r, a1)), self.m(two, t));
        let n4 = {
            let v = self.s(a4, self.m(s, a3));
            let v = self.a(v, self.m(two, self.m(r, a2)));
            let v = self.s(v, self.m(self.a(t, self.m(r, s)), a1));
            let v = self.a(v, self.m(three, self.m(r, r)));
            self.s(v, self.m(two, self.m(s, t)))
        };
        let n6 = {
            let r2 = self.m(r, r);
            let v = self.a(a6, self.m(r, a4));
            let v = self.a(v, self.m(r2, a2));
            let v = self.a(v, self.m(r2, r));
            let v = self.s(v, self.m(t, a3));
            let v = self.s(v, self.m(t, t));
            self.s(v, self.m(self.m(r, t), a1))
        };
        [self.m(n1, ui), self.m(n2, u2), self.m(n3, u3), self.m(n4, u4), self.m(n6, u6)]
    }
}

impl IsogenyCensus {
    /// Isomorphism class id of a Weierstrass model, if it is nonsingular
    /// and of the enumerated shape.
    pub fn class_id(&self, a: &[Elem; 5]) -> Option<usize> {
        let k = &self.field;
        let q = k.size();
        let ix: Vec<u64> = a.iter().map(|e| k.index(e)).collect();
        let model = match self.method {
            CensusMethod::FullWeierstrass => ix.iter().rev().fold(0, |acc, &v| acc * q + v),
            CensusMethod::ShortWeierstrass => {
                if ix[0] != 0 || ix[1] != 0 || ix[2] != 0 {
                    return None;
                }
                ix[3] + q * ix[4]
            }
        };
        let id = *self.class_of.get(model as usize)?;
        (id != u32::MAX).then_some(id as usize)
    }

    pub fn class_trace(&self, id: usize) -> i64 {
        self.class_t[id]
    }

    pub fn row(&self, t: i64) -> Option<&IsogenyClassRow> {
        self.rows.iter().find(|r| r.t == t)
    }
}

/// Census over `F_q` with the default field for `q`.
pub fn isogeny_census(q: u64) -> Result<IsogenyCensus> {
    let (p, a) = prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    isogeny_census_in(FiniteField::new(p, a as usize)?)
}

pub fn isogeny_census_in(field: FiniteField) -> Result<IsogenyCensus> {
    let q = field.size();
    let method = if q <= FULL_CENSUS_MAX_Q {
        CensusMethod::FullWeierstrass
    } else if field.p() >= 5 && q <= SHORT_CENSUS_MAX_Q {
        CensusMethod::ShortWeierstrass
    } else {
        return Err(Error::domain(format!(
            "census needs q <= {FULL_CENSUS_MAX_Q}, or p >= 5 and q <= {SHORT_CENSUS_MAX_Q}; got q = {q}"
        )));
    };
    let tb = Tables::new(&field);
    let qs = q as usize;
    let n_models = match method {
        CensusMethod::FullWeierstrass => qs.pow(5),
        CensusMethod::ShortWeierstrass => qs * qs,
    };
    let decode = |m: usize| -> [u16; 5] {
        match method {
            CensusMethod::FullWeierstrass => {
                let mut c = [0u16; 5];
                let mut m = m;
                for v in c.iter_mut() {
                    *v = (m % qs) as u16;
                    m /= qs;
                }
                c
            }
            CensusMethod::ShortWeierstrass => [0, 0, 0, (m % qs) as u16, (m / qs) as u16],
        }
    };
    let encode = |c: &[u16; 5]| -> usize {
        match method {
            CensusMethod::FullWeierstrass => c.iter().rev().fold(0, |acc, &v| acc * qs + v as usize),
            CensusMethod::ShortWeierstrass => c[3] as usize + qs * c[4] as usize,
        }
    };
    let mut class_of = vec![u32::MAX; n_models];
    let mut classes: Vec<([u16; 5], u64, i64)> = Vec::new();
    for m in 0..n_models {
        if class_of[m] != u32::MAX {
            continue;
        }
        let c = decode(m);
        if tb.discriminant(&c) == 0 {
            continue;
        }
        let id = classes.len() as u32;
        let mut size = 0u64;
        for u in 1..qs as u16 {
            let (rs, ss, ts) = match method {
                CensusMethod::FullWeierstrass => (qs as u16, qs as u16, qs as u16),
                CensusMethod::ShortWeierstrass => (1, 1, 1),
            };
            for r in 0..rs {
                for s in 0..ss {
                    for t in 0..ts {
                        let img = encode(&tb.transform(&c, u, r, s, t));
                        if class_of[img] == u32::MAX {
                            class_of[img] = id;
                            size += 1;
                        }
                    }
                }
            }
        }
        let t = q as i64 + 1 - tb.count(&c) as i64;
        classes.push((c, size, t));
    }
    let elem = |i: u16| field.from_index(i as u64);
    let mut by_t: BTreeMap<i64, IsogenyClassRow> = BTreeMap::new();
    for (c, size, t) in &classes {
        let model = CurveModel::weierstrass(field.clone(), [elem(c[0]), elem(c[1]), elem(c[2]), elem(c[3]), elem(c[4])])?;
        debug_assert_eq!(model.kind, CurveKind::EllipticWeierstrass);
        let row = by_t.entry(*t).or_insert_with(|| IsogenyClassRow {
            t: *t,
            points: (q as i64 + 1 - t) as u64,
            iso_classes: 0,
            models: 0,
            singleton: false,
            representatives: Vec::new(),
        });
        row.iso_classes += 1;
        row.models += size;
        row.representatives.push(model.to_string());
    }
    let mut rows: Vec<IsogenyClassRow> = by_t.into_values().collect();
    for r in rows.iter_mut() {
        r.singleton = r.iso_classes == 1;
    }
    rows.sort_by_key(|r| std::cmp::Reverse(r.t));
    let class_t = classes.iter().map(|c| c.2).collect();
    Ok(IsogenyCensus { q, method, iso_classes: classes.len(), rows, field, class_of, class_t })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionTrace {
    pub a: usize,
    pub q: String,
    pub t: String,
    /// confirmed by direct counting over `F_{q^a}`
    pub checked: bool,
}

/// Largest field over which [`extension_trace`] confirms by direct count.
pub const DIRECT_CHECK_BUDGET: u64 = 1 << 20;

/// `t(E/F_{q^a})` for `a = 1..=a_max` from the Frobenius recurrence.
pub fn extension_trace(c: &CurveModel, a_max: usize) -> Result<Vec<ExtensionTrace>> {
    if c.genus != 1 {
        return Err(Error::domain("extension traces need a genus-one curve"));
    }
    let q = BigInt::from(c.q());
    let n1 = count_points_with_budget(c, 1, DIRECT_CHECK_BUDGET)?;
    let t1 = &q + 1 - BigInt::from(n1);
    let ts = trace_recurrence(&q, &t1, a_max);
    let mut out = Vec::with_capacity(a_max);
    for (i, t) in ts.into_iter().enumerate() {
        let a = i + 1;
        let qa = q.pow(a as u32);
        let checked = match count_points_with_budget(c, a, DIRECT_CHECK_BUDGET) {
            Ok(n) => {
                if &qa + 1 - BigInt::from(n) != t {
                    return Err(Error::domain(format!("direct count over F_{{q^{a}}} disagrees with the recurrence")));
                }
                true
            }
            Err(Error::Budget(_)) => false,
            Err(e) => return Err(e),
        };
        out.push(ExtensionTrace { a, q: qa.to_string(), t: t.to_string(), checked });
    }
    Ok(out)
}
