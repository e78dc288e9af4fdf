//! The CM field catalog: JSON loading and invariant validation.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, linalg, parse_bigint, parse_rational, Rational};
use crate::cm_field::CmField;
use crate::error::{Error, Result};
use crate::number_field::{NFElement, NumberField};

/// Environment variable naming a catalog file that replaces the built-in one.
pub const CATALOG_ENV: &str = "SUPERISO_CATALOG";

const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawField {
    pub label: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub k_poly: String,
    pub conj: Vec<String>,
    pub f_poly: String,
    pub f_in_k: Vec<String>,
    #[serde(default)]
    pub gamma: Option<Vec<String>>,
    pub t: Vec<Vec<String>>,
    #[serde(default = "yes")]
    pub t_complete: bool,
    pub units: Vec<Vec<String>>,
    pub disc_k: String,
    pub disc_f: String,
    pub class_number: u32,
    pub roots_of_unity: u32,
    #[serde(default)]
    pub f_integral_basis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub notes: BTreeMap<String, String>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawCatalog {
    pub fields: Vec<RawField>,
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub label: String,
    pub datum: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub records: usize,
    pub checks: usize,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Loaded catalog, in file order.
#[derive(Clone, Debug)]
pub struct Catalog {
    fields: Vec<CmField>,
}

fn coords(field: &NumberField, v: &[String], what: &str) -> Result<NFElement> {
    let c: Vec<Rational> = v
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()
        .map_err(|e| Error::catalog(format!("{what}: {e}")))?;
    field
        .element(c)
        .map_err(|e| Error::catalog(format!("{what}: {e}")))
}

fn build(raw: &RawField) -> Result<CmField> {
    let l = &raw.label;
    let k = NumberField::new(arith::parse_poly(&raw.k_poly, "x")?)
        .map_err(|e| Error::catalog(format!("{l}: k_poly: {e}")))?;
    let f = NumberField::new(arith::parse_poly(&raw.f_poly, "x")?)
        .map_err(|e| Error::catalog(format!("{l}: f_poly: {e}")))?;
    let f_in_k = coords(&k, &raw.f_in_k, &format!("{l}: f_in_k"))?;
    let conj = coords(&k, &raw.conj, &format!("{l}: conj"))?;
    let gamma = raw
        .gamma
        .as_ref()
        .map(|v| coords(&k, v, &format!("{l}: gamma")))
        .transpose()?;
    let t = raw
        .t
        .iter()
        .enumerate()
        .map(|(i, v)| coords(&f, v, &format!("{l}: t[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let units = raw
        .units
        .iter()
        .enumerate()
        .map(|(i, v)| coords(&f, v, &format!("{l}: units[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let basis = raw
        .f_integral_basis
        .as_ref()
        .map(|b| {
            b.iter()
                .enumerate()
                .map(|(i, v)| coords(&f, v, &format!("{l}: f_integral_basis[{i}]")))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let disc_k = parse_bigint(&raw.disc_k).map_err(|e| Error::catalog(format!("{l}: disc_k: {e}")))?;
    let disc_f = parse_bigint(&raw.disc_f).map_err(|e| Error::catalog(format!("{l}: disc_f: {e}")))?;
    CmField::assemble(
        l.clone(),
        raw.aliases.clone(),
        k,
        f,
        f_in_k,
        conj,
        gamma,
        t,
        raw.t_complete,
        units,
        disc_k,
        disc_f,
        raw.class_number,
        raw.roots_of_unity,
        basis,
        raw.notes.clone(),
    )
}

impl Catalog {
    /// Parse and validate; any failed invariant is an error.
    pub fn from_json(text: &str) -> Result<Self> {
        let cat = Self::from_json_unchecked(text)?;
        let report = cat.validate();
        if let Some(first) = report.issues.first() {
            return Err(Error::catalog(format!(
                "{} check(s) failed; first: {}: {}: {}",
                report.issues.len(),
                first.label,
                first.datum,
                first.message
            )));
        }
        Ok(cat)
    }

    /// Parse without running [`Catalog::validate`].
    pub fn from_json_unchecked(text: &str) -> Result<Self> {
        let raw: RawCatalog = serde_json::from_str(text).map_err(|e| Error::catalog(format!("json: {e}")))?;
        let mut seen = std::collections::BTreeSet::new();
        for r in &raw.fields {
            for name in std::iter::once(&r.label).chain(&r.aliases) {
                if !seen.insert(name.clone()) {
                    return Err(Error::catalog(format!("duplicate label `{name}`")));
                }
            }
        }
        let fields = raw.fields.iter().map(build).collect::<Result<Vec<_>>>()?;
        Ok(Catalog { fields })
    }

    pub fn builtin() -> Result<Self> {
        Self::from_json(BUILTIN)
    }

    pub fn builtin_json() -> &'static str {
        BUILTIN
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::catalog(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The file named by `SUPERISO_CATALOG`, or the built-in catalog.
    pub fn load_default() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Self::builtin(),
        }
    }

    pub fn fields(&self) -> &[CmField] {
        &self.fields
    }

    pub fn get(&self, label: &str) -> Result<&CmField> {
        self.fields
            .iter()
            .find(|f| f.label == label || f.aliases.iter().any(|a| a == label))
            .ok_or_else(|| Error::UnknownField(label.to_string()))
    }

    /// Re-derive every checkable invariant of every record.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport { records: self.fields.len(), ..Default::default() };
        for fld in &self.fields {
            validate_field(fld, &mut rep);
        }
        rep
    }
}

fn validate_field(fld: &CmField, rep: &mut ValidationReport) {
    let mut check = |datum: &str, ok: bool, msg: String| {
        rep.checks += 1;
        if !ok {
            rep.issues.push(ValidationIssue { label: fld.label.clone(), datum: datum.into(), message: msg });
        }
    };
    let g = fld.g();
    let conj = |a: &NFElement| a.apply_hom(&fld.conj_image);
    let x = fld.k.gen();
    check("conj", conj(&conj(&x)) == x, "conjugation is not an involution".into());
    check("conj", conj(&fld.f_in_k) == fld.f_in_k, "conjugation does not fix F".into());
    check(
        "f_in_k",
        poly_at(fld.f.poly(), &fld.f_in_k).is_zero(),
        "f_in_k is not a root of f_poly".into(),
    );
    check(
        "conj",
        fld.k.embeddings().iter().all(|e| !e.real),
        "K has a real embedding".into(),
    );
    let matches_complex_conj = fld.k.embeddings().into_iter().all(|e| {
        let z = fld.k.roots()[e.index];
        (fld.conj_image.embed(e) - z.conj()).norm() <= 1e-6 * (1.0 + z.norm())
    });
    check(
        "conj",
        matches_complex_conj,
        "conj does not act as complex conjugation on the embeddings".into(),
    );
    check("f_poly", fld.f.is_totally_real(), "F is not totally real".into());

    let disc_kp = arith::discriminant(fld.k.poly()).unwrap_or_else(|_| Rational::one());
    let idx2 = &disc_kp / Rational::from_integer(fld.disc_k.clone());
    check(
        "disc_k",
        idx2.is_integer() && arith::exact_sqrt(&idx2.to_integer()).is_some() && fld.disc_k.sign() == disc_kp.numer().sign(),
        format!("disc(k_poly)/disc_k = {idx2} is not a square"),
    );
    let disc_fp = arith::discriminant(fld.f.poly()).unwrap_or_else(|_| Rational::one());
    let idx2 = &disc_fp / Rational::from_integer(fld.disc_f.clone());
    check(
        "disc_f",
        idx2.is_integer() && arith::exact_sqrt(&idx2.to_integer()).is_some(),
        format!("disc(f_poly)/disc_f = {idx2} is not a square"),
    );
    let f2 = &fld.disc_f * &fld.disc_f;
    check(
        "disc_k",
        (&fld.disc_k % &f2).is_zero(),
        "disc_F^2 does not divide disc_K".into(),
    );

    for (i, eta) in fld.t.iter().enumerate() {
        let cp = eta.char_poly();
        let ok = cp.is_squarefree()
            && cp.is_integral()
            && arith::discriminant(&cp).map(|d| d == Rational::from_integer(fld.disc_f.clone())).unwrap_or(g == 1);
        check(&format!("t[{i}]"), ok, format!("disc(minpoly({eta})) != disc_F"));
        for (j, other) in fld.t.iter().enumerate().skip(i + 1) {
            let d = eta - other;
            let dup = d.as_rational().is_some_and(|r| r.is_integer());
            check(
                &format!("t[{j}]"),
                !dup,
                format!("same translation class as t[{i}] (duplicate-translation-class)"),
            );
        }
    }

    check(
        "units",
        fld.units.len() == g - 1,
        format!("expected {} fundamental units, found {}", g - 1, fld.units.len()),
    );
    for (i, u) in fld.units.iter().enumerate() {
        let n = u.norm();
        check(&format!("units[{i}]"), u.is_integral(), format!("{u} is not integral"));
        check(&format!("units[{i}]"), n.abs().is_one(), format!("Norm({u}) = {n}, not +-1"));
    }

    if let Some(gm) = &fld.gamma {
        let eta0 = fld.t.first().cloned().unwrap_or_else(|| fld.f.gen());
        let basis = fld.integral_basis(&eta0);
        let d = module_disc(&fld.k, &basis);
        let ok = d == Some(Rational::from_integer(fld.disc_k.clone()));
        let why = if fld.t.is_empty() { "Z[x_F]" } else { "Z[eta0]" };
        check(
            "gamma",
            ok || fld.t.is_empty(),
            format!("module {why}[gamma] has discriminant {d:?}, not disc_K"),
        );
        check("gamma", gm.is_integral(), "gamma is not integral".into());
    }

    if let Some(b) = &fld.f_integral_basis {
        let d = module_disc(&fld.f, b);
        check(
            "f_integral_basis",
            d == Some(Rational::from_integer(fld.disc_f.clone())),
            format!("basis discriminant {d:?} != disc_F"),
        );
    }
    check("roots_of_unity", fld.kappa >= 2 && fld.kappa % 2 == 0, "kappa must be even".into());
}

fn poly_at(p: &arith::UniPoly, x: &NFElement) -> NFElement {
    let mut acc = x.field().zero();
    for c in p.coeffs().iter().rev() {
        acc = (&acc * x).add_rational(c);
    }
    acc
}

/// Discriminant of the Z-module spanned by `basis` (a Q-basis of the field):
/// `det(coords)^2 · disc(m)`.
pub fn module_disc(field: &NumberField, basis: &[NFElement]) -> Option<Rational> {
    if basis.len() != field.degree() {
        return None;
    }
    let m: Vec<Vec<Rational>> = basis.iter().map(|b| b.coords().to_vec()).collect();
    let det = linalg::determinant(&m);
    if det.is_zero() {
        return None;
    }
    let dm = arith::discriminant(field.poly()).unwrap_or_else(|_| Rational::one());
    Some(&det * &det * dm)
}

/// Discriminant of the Z-module generated by arbitrarily many integral
/// elements spanning the field.
pub fn generated_module_disc(field: &NumberField, gens: &[NFElement]) -> Option<Rational> {
    let n = field.degree();
    let den = gens
        .iter()
        .flat_map(|g| g.coords().iter())
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            g.coords()
                .iter()
                .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let det = linalg::lattice_det(&rows, n);
    if det.is_zero() {
        return None;
    }
    let scale = num_traits::pow(Rational::from_integer(den), n);
    let d = Rational::from_integer(det) / scale;
    let dm = arith::discriminant(field.poly()).unwrap_or_else(|_| Rational::one());
    Some(&d * &d * dm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_validates() {
        let cat = Catalog::builtin().unwrap();
        let rep = cat.validate();
        assert!(rep.ok(), "{:?}", rep.issues);
        assert!(rep.records >= 12);
        for l in ["Q(i)", "Q(sqrt-1)", "Q(sqrt-2)", "Q(zeta3)", "Q(sqrt-3)", "Q(zeta5)", "Q(sqrt5,i)", "Q(zeta9)"] {
            assert!(cat.get(l).is_ok(), "{l}");
        }
        assert_eq!(cat.get("Q(zeta11)").unwrap_err(), Error::UnknownField("Q(zeta11)".into()));
    }

    fn mutate(f: impl FnOnce(&mut RawCatalog)) -> String {
        let mut raw: RawCatalog = serde_json::from_str(BUILTIN).unwrap();
        f(&mut raw);
        serde_json::to_string(&raw).unwrap()
    }

    #[test]
    fn duplicate_translation_class_detected() {
        let text = mutate(|r| {
            let z = r.fields.iter_mut().find(|f| f.label == "Q(zeta5)").unwrap();
            // eta0 + 1
            let mut e = z.t[0].clone();
            let c0: Rational = parse_rational(&e[0]).unwrap() + Rational::one();
            e[0] = c0.to_string();
            z.t.push(e);
        });
        let cat = Catalog::from_json_unchecked(&text).unwrap();
        let rep = cat.validate();
        assert!(rep.issues.iter().any(|i| i.label == "Q(zeta5)" && i.message.contains("duplicate-translation-class")));
        assert!(Catalog::from_json(&text).is_err());
    }

    #[test]
    fn fake_unit_detected() {
        let text = mutate(|r| {
            let z = r.fields.iter_mut().find(|f| f.label == "Q(zeta9)").unwrap();
            // 2 has norm 8
            z.units[0] = vec!["2".into(), "0".into(), "0".into()];
        });
        let rep = Catalog::from_json_unchecked(&text).unwrap().validate();
        assert!(rep.issues.iter().any(|i| i.datum == "units[0]" && i.message.contains("Norm")));
    }

    #[test]
    fn bad_conjugation_detected() {
        let text = mutate(|r| {
            let z = r.fields.iter_mut().find(|f| f.label == "Q(i)").unwrap();
            z.conj = vec!["0".into(), "1".into()];
        });
        let rep = Catalog::from_json_unchecked(&text).unwrap().validate();
        assert!(!rep.ok());
    }

    #[test]
    fn module_discriminants() {
        let cat = Catalog::builtin().unwrap();
        let z9 = cat.get("Q(zeta9)").unwrap();
        let b = z9.integral_basis(&z9.t[0]);
        assert_eq!(module_disc(&z9.k, &b), Some(Rational::from_integer(z9.disc_k.clone())));
        assert_eq!(generated_module_disc(&z9.k, &b), Some(Rational::from_integer(z9.disc_k.clone())));
    }
}
