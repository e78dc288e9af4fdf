//! CM fields over their totally real subfields: conjugation, the Weil
//! number and Weil generator predicates, and the `(u, η, a)` decomposition.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, linalg, Rational};
use crate::error::{Error, Result};
use crate::number_field::{NFElement, NumberField};

/// A CM field `K` with totally real subfield `F` and the data needed to
/// search for Weil generators.
#[derive(Clone, Debug)]
pub struct CmField {
    pub label: String,
    pub aliases: Vec<String>,
    pub k: NumberField,
    pub f: NumberField,
    /// Image of the generator of `F` in `K`.
    pub f_in_k: NFElement,
    /// Image of the generator of `K` under complex conjugation.
    pub conj_image: NFElement,
    /// `O_K = O_F[γ]`, when known.
    pub gamma: Option<NFElement>,
    /// Monogenic generators of `O_F` up to integer translation, as elements of `F`.
    pub t: Vec<NFElement>,
    pub t_complete: bool,
    pub units: Vec<NFElement>,
    pub disc_k: BigInt,
    pub disc_f: BigInt,
    pub class_number: u32,
    /// Number of roots of unity in `K`.
    pub kappa: u32,
    pub f_integral_basis: Option<Vec<NFElement>>,
    pub notes: BTreeMap<String, String>,
    /// columns: powers of `f_in_k`, rows: K coordinates
    f_powers: linalg::Matrix,
    /// inverse of the integral basis {η0^i, γ η0^i} in K coordinates
    int_basis_inv: Option<linalg::Matrix>,
}

/// Lemma-style condition names reported by [`CmField::is_weil_generator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeilCondition {
    /// `αᾱ ∈ Z`
    WeilNumber,
    /// `Z[α + ᾱ] = O_F`
    RealSubring,
    /// `(α - ᾱ)` generates the relative different
    Different,
}

impl fmt::Display for WeilCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeilCondition::WeilNumber => "alpha*conj(alpha) is not a rational integer",
            WeilCondition::RealSubring => "Z[alpha + conj(alpha)] is not O_F",
            WeilCondition::Different => "(alpha - conj(alpha))/(gamma - conj(gamma)) is not a unit of O_F",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilCheck {
    pub is_generator: bool,
    pub q: Option<BigInt>,
    pub failed: Option<WeilCondition>,
    pub detail: String,
}

/// A verified Weil generator and its decomposition `α = (u(γ-γ̄) + η + a)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilGeneratorRecord {
    pub alpha: NFElement,
    pub u: NFElement,
    pub eta: NFElement,
    pub eta_index: usize,
    pub a: BigInt,
    pub q: BigInt,
}

impl CmField {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        label: String,
        aliases: Vec<String>,
        k: NumberField,
        f: NumberField,
        f_in_k: NFElement,
        conj_image: NFElement,
        gamma: Option<NFElement>,
        t: Vec<NFElement>,
        t_complete: bool,
        units: Vec<NFElement>,
        disc_k: BigInt,
        disc_f: BigInt,
        class_number: u32,
        kappa: u32,
        f_integral_basis: Option<Vec<NFElement>>,
        notes: BTreeMap<String, String>,
    ) -> Result<Self> {
        let g = f.degree();
        if k.degree() != 2 * g {
            return Err(Error::catalog(format!("{label}: [K:Q] = {} is not 2[F:Q] = {}", k.degree(), 2 * g)));
        }
        let mut cols = Vec::with_capacity(g);
        let mut p = k.one();
        for _ in 0..g {
            cols.push(p.coords().to_vec());
            p = &p * &f_in_k;
        }
        let f_powers = linalg::transpose(&cols);
        let mut fld = CmField {
            label,
            aliases,
            k,
            f,
            f_in_k,
            conj_image,
            gamma,
            t,
            t_complete,
            units,
            disc_k,
            disc_f,
            class_number,
            kappa,
            f_integral_basis,
            notes,
            f_powers,
            int_basis_inv: None,
        };
        if let (Some(_), Some(eta0)) = (&fld.gamma, fld.t.first()) {
            let basis = fld.integral_basis(eta0);
            let m = linalg::transpose(&basis.iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>());
            fld.int_basis_inv = linalg::inverse(&m);
        }
        Ok(fld)
    }

    /// `g = [F:Q]`
    pub fn g(&self) -> usize {
        self.f.degree()
    }

    pub fn conj(&self, a: &NFElement) -> Result<NFElement> {
        if !a.field().same(&self.k) {
            return Err(Error::FieldMismatch);
        }
        Ok(a.apply_hom(&self.conj_image))
    }

    /// Image of an element of `F` in `K`.
    pub fn embed_f(&self, x: &NFElement) -> NFElement {
        x.apply_hom(&self.f_in_k)
    }

    /// Preimage in `F` of an element of `K`, if it lies in `F`.
    pub fn to_f(&self, a: &NFElement) -> Option<NFElement> {
        let c = linalg::solve(&self.f_powers, a.coords())?;
        self.f.element(c).ok()
    }

    pub fn gamma(&self) -> Result<&NFElement> {
        self.gamma
            .as_ref()
            .ok_or_else(|| Error::catalog(format!("{}: no relative generator gamma", self.label)))
    }

    /// `γ - γ̄`
    pub fn gamma_diff(&self) -> Result<NFElement> {
        let gm = self.gamma()?;
        Ok(gm - &self.conj(gm)?)
    }

    /// `{1, η, …, η^{g-1}, γ, γη, …, γη^{g-1}}` in `K`.
    pub fn integral_basis(&self, eta: &NFElement) -> Vec<NFElement> {
        let e = self.embed_f(eta);
        let mut out = Vec::with_capacity(2 * self.g());
        let mut p = self.k.one();
        for _ in 0..self.g() {
            out.push(p.clone());
            p = &p * &e;
        }
        if let Some(gm) = &self.gamma {
            let n = out.len();
            for i in 0..n {
                out.push(&out[i] * gm);
            }
        }
        out
    }

    /// `αᾱ` when it is a rational integer.
    pub fn is_weil_number(&self, a: &NFElement) -> Result<Option<BigInt>> {
        if !a.is_integral() {
            return Err(Error::NotIntegral);
        }
        let n = a * &self.conj(a)?;
        Ok(n.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer()))
    }

    /// Tests `αᾱ ∈ Z`, `Z[α+ᾱ] = O_F` and that `(α-ᾱ)/(γ-γ̄)` is a unit of
    /// `O_F`, in that order, reporting the first failure.
    pub fn is_weil_generator(&self, a: &NFElement) -> Result<WeilCheck> {
        let fail = |c: WeilCondition, q: Option<BigInt>, detail: String| WeilCheck {
            is_generator: false,
            q,
            failed: Some(c),
            detail,
        };
        let q = match self.is_weil_number(a)? {
            Some(q) => q,
            None => return Ok(fail(WeilCondition::WeilNumber, None, "alpha*conj(alpha) not in Z".into())),
        };
        let abar = self.conj(a)?;
        let s = self
            .to_f(&(a + &abar))
            .ok_or_else(|| Error::catalog(format!("{}: alpha + conj(alpha) not in F", self.label)))?;
        let cp = s.char_poly();
        if !cp.is_squarefree() {
            return Ok(fail(
                WeilCondition::RealSubring,
                Some(q),
                format!("alpha + conj(alpha) has degree < {}", self.g()),
            ));
        }
        let d = arith::discriminant(&cp)?;
        if d != Rational::from_integer(self.disc_f.clone()) {
            return Ok(fail(
                WeilCondition::RealSubring,
                Some(q),
                format!("disc of alpha + conj(alpha) is {d}, disc_F is {}", self.disc_f),
            ));
        }
        let diff = a - &abar;
        if diff.is_zero() {
            return Ok(fail(WeilCondition::Different, Some(q), "alpha = conj(alpha)".into()));
        }
        let ratio = diff.div(&self.gamma_diff()?)?;
        let u = match self.to_f(&ratio) {
            Some(u) => u,
            None => return Ok(fail(WeilCondition::Different, Some(q), "quotient not in F".into())),
        };
        if !u.is_integral() {
            return Ok(fail(WeilCondition::Different, Some(q), format!("u = {u} is not integral")));
        }
        let nu = u.norm();
        if nu.abs() != Rational::one() {
            return Ok(fail(WeilCondition::Different, Some(q), format!("Norm(u) = {nu}")));
        }
        Ok(WeilCheck { is_generator: true, q: Some(q), failed: None, detail: "all conditions hold".into() })
    }

    /// The unique `(u, η, a)` with `α = (u(γ-γ̄) + η + a)/2` and `η ∈ T`.
    pub fn decompose(&self, a: &NFElement) -> Result<WeilGeneratorRecord> {
        let check = self.is_weil_generator(a)?;
        if !check.is_generator {
            return Err(Error::domain(format!("{a} is not a Weil generator: {}", check.detail)));
        }
        let abar = self.conj(a)?;
        let u = self.to_f(&(a - &abar).div(&self.gamma_diff()?)?).expect("checked above");
        let s = self.to_f(&(a + &abar)).expect("checked above");
        for (i, eta) in self.t.iter().enumerate() {
            let shift = &s - eta;
            if let Some(c) = shift.as_rational() {
                if c.is_integer() {
                    return Ok(WeilGeneratorRecord {
                        alpha: a.clone(),
                        u,
                        eta: eta.clone(),
                        eta_index: i,
                        a: c.to_integer(),
                        q: check.q.expect("weil number"),
                    });
                }
            }
        }
        Err(Error::catalog(format!(
            "{}: alpha + conj(alpha) = {s} matches no T representative",
            self.label
        )))
    }

    /// `(u(γ-γ̄) + η + a)/2`
    pub fn alpha_from(&self, u: &NFElement, eta: &NFElement, a: &Rational) -> Result<NFElement> {
        let x = &(&self.embed_f(u) * &self.gamma_diff()?) + &self.embed_f(eta);
        Ok(x.add_rational(a).scale(&Rational::new(1.into(), 2.into())))
    }

    /// Expands `ΩΩ̄ = Σ a_i η^i` for `Ω = (u(γ-γ̄) + η)/2` and returns
    /// `a = -2a_1` together with `a_2, …, a_{g-1}`.
    pub fn a_from_u_eta(&self, u: &NFElement, eta: &NFElement) -> Result<(Rational, Vec<Rational>)> {
        let g = self.g();
        if g < 2 {
            return Err(Error::domain("a_from_u_eta needs [F:Q] >= 2"));
        }
        let omega = self.alpha_from(u, eta, &Rational::zero())?;
        let nn = self
            .to_f(&(&omega * &self.conj(&omega)?))
            .ok_or_else(|| Error::catalog("Omega*conj(Omega) not in F"))?;
        let coeffs = self.eta_coords(eta, &nn)?;
        let a = -(&coeffs[1] * Rational::from_integer(2.into()));
        Ok((a, coeffs[2..].to_vec()))
    }

    /// Coordinates of `x ∈ F` over `{1, η, …, η^{g-1}}`.
    pub fn eta_coords(&self, eta: &NFElement, x: &NFElement) -> Result<Vec<Rational>> {
        let g = self.g();
        let mut cols = Vec::with_capacity(g);
        let mut p = self.f.one();
        for _ in 0..g {
            cols.push(p.coords().to_vec());
            p = &p * eta;
        }
        linalg::solve(&linalg::transpose(&cols), x.coords())
            .ok_or_else(|| Error::catalog(format!("{}: eta = {eta} does not generate F", self.label)))
    }

    /// Coordinates over `{η0^i, γη0^i}` reduced into `[0, 4)`.
    pub fn mod4_class(&self, a: &NFElement) -> Result<Vec<BigInt>> {
        if !a.is_integral() {
            return Err(Error::NotIntegral);
        }
        let inv = self
            .int_basis_inv
            .as_ref()
            .ok_or_else(|| Error::catalog(format!("{}: no integral basis (needs gamma and T)", self.label)))?;
        let c = linalg::mat_vec(inv, a.coords());
        let four = BigInt::from(4);
        c.iter()
            .map(|v| {
                if v.is_integer() {
                    Ok(v.to_integer().mod_floor(&four))
                } else {
                    Err(Error::catalog(format!("{}: integral element has non-integral basis coordinates", self.label)))
                }
            })
            .collect()
    }

    /// A prime `p < 2^g` with more ring maps `O_F → F_p` than `p`, which
    /// rules out `O_F = Z[η]` for every `η`.
    pub fn monogenic_obstruction(&self) -> Option<u64> {
        let g = self.g();
        if g < 2 {
            return None;
        }
        let basis = self.f_integral_basis.as_ref()?;
        let m = linalg::transpose(&basis.iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>());
        let inv = linalg::inverse(&m)?;
        // structure constants c[i][j] = coords of b_i b_j
        let mut table = vec![vec![Vec::new(); g]; g];
        for i in 0..g {
            for j in 0..g {
                let c = linalg::mat_vec(&inv, (&basis[i] * &basis[j]).coords());
                if c.iter().any(|v| !v.is_integer()) {
                    return None;
                }
                table[i][j] = c.iter().map(|v| v.to_integer()).collect::<Vec<BigInt>>();
            }
        }
        let one = linalg::mat_vec(&inv, self.f.one().coords());
        if one.iter().any(|v| !v.is_integer()) {
            return None;
        }
        let one: Vec<BigInt> = one.iter().map(|v| v.to_integer()).collect();
        for p in arith::small_primes(1u64 << g.min(20)) {
            let count = count_homs(&table, &one, p);
            if count > p {
                return Some(p);
            }
        }
        None
    }
}

/// Number of ring maps from the order with structure constants `table` to `F_p`.
fn count_homs(table: &[Vec<Vec<BigInt>>], one: &[BigInt], p: u64) -> u64 {
    let g = one.len();
    let pb = BigInt::from(p);
    let red = |v: &BigInt| -> u64 { v.mod_floor(&pb).try_into().unwrap() };
    let mut phi = vec![0u64; g];
    let mut count = 0;
    let total = (p as u128).pow(g as u32);
    for idx in 0..total {
        let mut x = idx;
        for v in phi.iter_mut() {
            *v = (x % p as u128) as u64;
            x /= p as u128;
        }
        let lin = |c: &[BigInt]| -> u64 { c.iter().zip(&phi).map(|(a, b)| red(a) * b % p).sum::<u64>() % p };
        if lin(one) != 1 % p {
            continue;
        }
        let ok = (0..g).all(|i| (0..g).all(|j| lin(&table[i][j]) == phi[i] * phi[j] % p));
        if ok {
            count += 1;
        }
    }
    count
}

impl WeilGeneratorRecord {
    /// Rebuild `α` from the decomposition.
    pub fn reconstruct(&self, fld: &CmField) -> Result<NFElement> {
        fld.alpha_from(&self.u, &self.eta, &Rational::from_integer(self.a.clone()))
    }
}

impl fmt::Display for WeilGeneratorRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (q = {}, u = {}, eta#{}, a = {})", self.alpha, self.q, self.u, self.eta_index, self.a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    fn cat() -> Catalog {
        Catalog::builtin().unwrap()
    }

    #[test]
    fn conjugation_examples() {
        let c = cat();
        let z5 = c.get("Q(zeta5)").unwrap();
        let z = z5.k.gen();
        assert_eq!(z5.conj(&z).unwrap(), z.pow(4).unwrap());
        let qi = c.get("Q(i)").unwrap();
        assert_eq!(qi.conj(&qi.k.from_ints(&[3, 1])).unwrap(), qi.k.from_ints(&[3, -1]));
        for eta in &z5.t {
            let e = z5.embed_f(eta);
            assert_eq!(z5.conj(&e).unwrap(), e);
        }
    }

    #[test]
    fn weil_numbers() {
        let c = cat();
        let z5 = c.get("Q(zeta5)").unwrap();
        assert_eq!(z5.is_weil_number(&z5.k.gen()).unwrap(), Some(BigInt::one()));
        assert_eq!(z5.is_weil_number(&z5.k.from_ints(&[1, 1])).unwrap(), None);
        let qi = c.get("Q(i)").unwrap();
        assert_eq!(qi.is_weil_number(&qi.k.from_ints(&[0, 2])).unwrap(), Some(BigInt::from(4)));
        let half = qi.k.gen().scale(&Rational::new(1.into(), 2.into()));
        assert_eq!(qi.is_weil_number(&half), Err(Error::NotIntegral));
    }

    #[test]
    fn weil_generators() {
        let c = cat();
        let qi = c.get("Q(i)").unwrap();
        assert!(qi.is_weil_generator(&qi.k.gen()).unwrap().is_generator);
        let r = qi.is_weil_generator(&qi.k.from_ints(&[-1])).unwrap();
        assert_eq!(r.failed, Some(WeilCondition::Different));
        let z5 = c.get("Q(zeta5)").unwrap();
        let r = z5.is_weil_generator(&z5.k.from_ints(&[-2, 2, -4, -5])).unwrap();
        assert_eq!(r.failed, Some(WeilCondition::RealSubring));
    }

    #[test]
    fn decompose_zeta5() {
        let c = cat();
        let z5 = c.get("Q(zeta5)").unwrap();
        let rec = z5.decompose(&z5.k.gen()).unwrap();
        assert!(rec.u.is_one());
        assert_eq!(rec.eta_index, 0);
        assert_eq!(rec.a, BigInt::zero());
        assert_eq!(rec.reconstruct(z5).unwrap(), z5.k.gen());
        // conjugate flips the sign of u
        let rb = z5.decompose(&z5.conj(&z5.k.gen()).unwrap()).unwrap();
        assert_eq!(rb.u, -&rec.u);
        assert_eq!(rb.eta, rec.eta);
    }

    #[test]
    fn decompose_i() {
        let c = cat();
        let qi = c.get("Q(i)").unwrap();
        let rec = qi.decompose(&qi.k.gen()).unwrap();
        // i = (1*(i - (-i)) + 0 + 0)/2
        assert!(rec.u.is_one());
        assert_eq!(rec.a, BigInt::zero());
        let rec = qi.decompose(&qi.k.from_ints(&[2, 1])).unwrap();
        assert_eq!(rec.a, BigInt::from(4));
    }

    #[test]
    fn a_values_zeta5() {
        let c = cat();
        let z5 = c.get("Q(zeta5)").unwrap();
        let eta0 = &z5.t[0];
        let u0 = &z5.units[0];
        let (a, res) = z5.a_from_u_eta(&u0.pow(2).unwrap(), eta0).unwrap();
        assert_eq!(a, Rational::new(5.into(), 2.into()));
        assert!(res.is_empty());
        let (a, _) = z5.a_from_u_eta(&z5.f.one(), eta0).unwrap();
        assert_eq!(a, Rational::zero());
        assert_eq!(z5.alpha_from(&z5.f.one(), eta0, &a).unwrap(), z5.k.gen());
    }

    #[test]
    fn mod4_classes() {
        let c = cat();
        let z5 = c.get("Q(zeta5)").unwrap();
        let x = z5.k.from_ints(&[3, -1, 7, 2]);
        let four_x = x.scale(&arith::rat(4));
        assert!(z5.mod4_class(&four_x).unwrap().iter().all(|v| v.is_zero()));
        assert_eq!(z5.mod4_class(&x.scale(&Rational::new(1.into(), 3.into()))), Err(Error::NotIntegral));
    }

    #[test]
    fn obstruction() {
        let c = cat();
        assert_eq!(c.get("sextic-x6+12x4+17x2+2").unwrap().monogenic_obstruction(), Some(2));
        assert_eq!(c.get("Q(zeta5)").unwrap().monogenic_obstruction(), None);
        assert_eq!(c.get("Q(zeta9)").unwrap().monogenic_obstruction(), None);
    }
}
