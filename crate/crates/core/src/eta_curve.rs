//! η-curves of CM fields with `[F:Q] ≥ 3`: the norm-form curves whose
//! integral points parameterize Weil generators, the integral change of
//! variables between them, box search for integral points and lifting of
//! points to Weil generators.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, invert_f64, linalg, rational_to_f64, MPoly, Rational, UniPoly};
use crate::cm_field::{CmField, WeilGeneratorRecord};
use crate::error::{Error, Result};
use crate::number_field::NFElement;

/// Plane curve `Norm_{F/Q}(x + yη - η²) = |disc_K| / disc_F²`.
#[derive(Clone, Debug)]
pub struct EtaCurve {
    pub eta_index: usize,
    pub eta: NFElement,
    /// `f_η(x, y)`, integral, monic in `x`.
    pub poly: MPoly,
    /// Largest absolute value of a coefficient of `f_η`.
    pub h_eta: BigInt,
    pub rhs: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralPoint {
    pub a: BigInt,
    pub b: BigInt,
}

impl IntegralPoint {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        IntegralPoint { a: a.into(), b: b.into() }
    }
}

impl std::fmt::Display for IntegralPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl EtaCurve {
    pub fn eval(&self, p: &IntegralPoint) -> Rational {
        self.poly.eval(&[Rational::from_integer(p.a.clone()), Rational::from_integer(p.b.clone())])
    }

    pub fn contains(&self, p: &IntegralPoint) -> bool {
        self.eval(p).is_zero()
    }

    pub fn display(&self) -> String {
        self.poly.display_with(&["x", "y"])
    }

    /// Restriction to the line `y = b`, as a polynomial in `x`.
    pub fn row(&self, b: &BigInt) -> UniPoly {
        let bb = Rational::from_integer(b.clone());
        let g = self.poly.degree_in(0);
        let cs = (0..=g)
            .map(|k| self.poly.coeff_of(0, k).eval(&[Rational::zero(), bb.clone()]))
            .collect();
        UniPoly::new(cs)
    }
}

/// Determinant of a matrix of polynomials by cofactor expansion.
fn mpoly_det(m: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::constant(nvars, Rational::one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MPoly::zero(nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let t = m[0][j].mul(&mpoly_det(&minor, nvars));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// Matrix of multiplication by `a` on the power basis of its field.
fn mult_matrix(a: &NFElement) -> linalg::Matrix {
    let f = a.field();
    let n = f.degree();
    let mut cols = Vec::with_capacity(n);
    let mut b = f.one();
    let x = f.gen();
    for _ in 0..n {
        cols.push((a * &b).coords().to_vec());
        b = &b * &x;
    }
    linalg::transpose(&cols)
}

/// `|disc_K| / disc_F²`
pub fn eta_rhs(fld: &CmField) -> Result<BigInt> {
    let d2 = &fld.disc_f * &fld.disc_f;
    let dk = fld.disc_k.abs();
    if d2.is_zero() || !(&dk % &d2).is_zero() {
        return Err(Error::catalog(format!("{}: disc_F^2 does not divide disc_K", fld.label)));
    }
    Ok(dk / d2)
}

/// Builds `C_η` for the `index`-th element of `T`.
pub fn build_eta_curve(fld: &CmField, index: usize) -> Result<EtaCurve> {
    let g = fld.g();
    if g < 3 {
        return Err(Error::domain(format!("{}: eta-curves need [F:Q] >= 3", fld.label)));
    }
    let eta = fld
        .t
        .get(index)
        .ok_or_else(|| Error::domain(format!("{}: T has no entry {index}", fld.label)))?
        .clone();
    if !eta.char_poly().is_squarefree() {
        return Err(Error::catalog(format!("{}: eta = {eta} does not generate F", fld.label)));
    }
    let rhs = eta_rhs(fld)?;
    // Norm(x + yη - η²) = det(x I + y M - M²)
    let m1 = mult_matrix(&eta);
    let m2 = mult_matrix(&(&eta * &eta));
    let x = MPoly::var(2, 0);
    let y = MPoly::var(2, 1);
    let mat: Vec<Vec<MPoly>> = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| {
                    let mut e = y.scale(&m1[i][j]).sub(&MPoly::constant(2, m2[i][j].clone()));
                    if i == j {
                        e = e.add(&x);
                    }
                    e
                })
                .collect()
        })
        .collect();
    let poly = mpoly_det(&mat, 2).sub(&MPoly::constant(2, Rational::from_integer(rhs.clone())));
    let ints = poly
        .integer_terms()
        .ok_or_else(|| Error::catalog(format!("{}: eta = {eta} is not integral", fld.label)))?;
    let mut lead = vec![0u32; 2];
    lead[0] = g as u32;
    if ints.get(&lead).is_none_or(|c| !c.is_one()) {
        return Err(Error::domain("norm form is not monic in x"));
    }
    let h_eta = ints.values().map(|c| c.abs()).max().unwrap_or_default();
    Ok(EtaCurve { eta_index: index, eta, poly, h_eta, rhs })
}

/// All integral points with `|A|, |B| ≤ bound`, sorted by `(B, A)`.
///
/// Each row `y = B` is a monic polynomial in `x`; numerical roots propose
/// candidates and exact evaluation decides.
pub fn integral_points_box(c: &EtaCurve, bound: &BigInt) -> Result<Vec<IntegralPoint>> {
    let bound_i = bound
        .to_i64()
        .filter(|b| *b >= 0 && *b <= 10_000_000)
        .ok_or_else(|| Error::Budget(format!("box bound {bound} outside 0..=10^7")))?;
    let rows: Vec<Vec<IntegralPoint>> = (-bound_i..=bound_i)
        .into_par_iter()
        .map(|b| {
            let bb = BigInt::from(b);
            let p = c.row(&bb);
            let mut found: Vec<i64> = Vec::new();
            for z in arith::poly_roots_f64(&p) {
                let r = z.re;
                if !r.is_finite() || r.abs() > bound_i as f64 + 3.0 {
                    continue;
                }
                let base = r.floor() as i64;
                for a in base - 2..=base + 3 {
                    if a.abs() <= bound_i && !found.contains(&a) && p.eval(&arith::rat(a)).is_zero() {
                        found.push(a);
                    }
                }
            }
            found.sort_unstable();
            found.into_iter().map(|a| IntegralPoint::new(a, b)).collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// `δ = (γ - γ̄)(γ̄ - γ)` as an element of `F`.
pub fn delta(fld: &CmField) -> Result<NFElement> {
    let d = fld.gamma_diff()?;
    fld.to_f(&-(&d * &d)).ok_or_else(|| Error::catalog(format!("{}: (gamma - conj(gamma))^2 not in F", fld.label)))
}

/// Index of `Z[x]` in `O_F`, where `x` is the generator of `F`.
fn f_index(fld: &CmField) -> Result<BigInt> {
    let d = arith::discriminant(fld.f.poly())?;
    let q = d / Rational::from_integer(fld.disc_f.clone());
    if !q.is_integer() {
        return Err(Error::catalog(format!("{}: disc_F does not divide disc(f)", fld.label)));
    }
    arith::exact_sqrt(&q.to_integer())
        .ok_or_else(|| Error::catalog(format!("{}: disc(f)/disc_F is not a square", fld.label)))
}

/// A square root of `w` in a totally real field, if one exists.
///
/// Candidates come from the signed real square roots at each embedding,
/// rounded to the lattice `(1/index) Z[x]`; the result is verified exactly.
pub fn sqrt_in_totally_real(w: &NFElement, index: &BigInt) -> Option<NFElement> {
    let f = w.field();
    let n = f.degree();
    let vals: Vec<f64> = w.embeddings().iter().map(|z| z.re).collect();
    if vals.iter().any(|v| *v < 0.0 && v.abs() > 1e-9) {
        return None;
    }
    let roots: Vec<f64> = f.roots().iter().map(|z| z.re).collect();
    let v: Vec<Vec<f64>> = roots.iter().map(|r| (0..n).map(|i| r.powi(i as i32)).collect()).collect();
    let inv = invert_f64(&v)?;
    let d = index.to_f64()?;
    for mask in 0..(1u32 << (n - 1)) {
        let target: Vec<f64> = vals
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let s = x.max(0.0).sqrt();
                if j > 0 && mask & (1 << (j - 1)) != 0 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        let coords: Vec<Rational> = (0..n)
            .map(|i| {
                let c: f64 = inv[i].iter().zip(&target).map(|(a, b)| a * b).sum();
                let num = BigInt::from((c * d).round() as i64);
                Rational::new(num, index.clone())
            })
            .collect();
        if let Ok(u) = f.element(coords) {
            if &(&u * &u) == w {
                return Some(u);
            }
        }
    }
    None
}

/// `(A, B)` with `4ΩΩ̄ = u²δ + η² = A + Bη`, for a record with `[F:Q] ≥ 3`.
pub fn point_of(fld: &CmField, rec: &WeilGeneratorRecord) -> Result<IntegralPoint> {
    let d = delta(fld)?;
    let w = &(&(&rec.u * &rec.u) * &d) + &(&rec.eta * &rec.eta);
    let c = fld.eta_coords(&rec.eta, &w)?;
    if c[2..].iter().any(|v| !v.is_zero()) || !c[0].is_integer() || !c[1].is_integer() {
        return Err(Error::domain(format!("4*Omega*conj(Omega) = {w} is not in Z + Z*eta")));
    }
    Ok(IntegralPoint { a: c[0].to_integer(), b: c[1].to_integer() })
}

/// Weil generators over an integral point of `C_η`: `u` with
/// `u²δ = A + Bη - η²` is found up to sign, and each sign is tested.
pub fn lift_point(fld: &CmField, c: &EtaCurve, p: &IntegralPoint) -> Result<Vec<WeilGeneratorRecord>> {
    let eta = &c.eta;
    let lin = &eta.scale(&Rational::from_integer(p.b.clone())).add_rational(&Rational::from_integer(p.a.clone()))
        - &(eta * eta);
    let w = lin.div(&delta(fld)?)?;
    if !w.is_integral() || w.norm() != Rational::one() {
        return Ok(Vec::new());
    }
    let Some(u) = sqrt_in_totally_real(&w, &f_index(fld)?) else {
        return Ok(Vec::new());
    };
    if !u.is_integral() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for u in [u.clone(), -u] {
        let (a, residual) = fld.a_from_u_eta(&u, eta)?;
        if residual.iter().any(|r| !r.is_zero()) || !a.is_integer() {
            continue;
        }
        let alpha = fld.alpha_from(&u, eta, &a)?;
        if !alpha.is_integral() {
            continue;
        }
        let chk = fld.is_weil_generator(&alpha)?;
        if chk.is_generator {
            out.push(WeilGeneratorRecord {
                alpha,
                u,
                eta: eta.clone(),
                eta_index: c.eta_index,
                a: a.to_integer(),
                q: chk.q.expect("weil number"),
            });
        }
    }
    Ok(out)
}

/// Integral change of variables `ṽ(x, y) = (A₁x + A₂y - A₃, B₁x + B₂y - B₃)`
/// with `f_{η₁} ∘ ṽ = Norm(v) · Π L₂ - rhs`.
#[derive(Clone, Debug)]
pub struct EtaTransform {
    pub eta1_index: usize,
    pub eta2_index: usize,
    pub a: [BigInt; 3],
    pub b: [BigInt; 3],
    pub v: NFElement,
    pub norm_v: Rational,
    /// Whether `f_{η₁} ∘ ṽ = f_{η₂}` holds as polynomials.
    pub identity_holds: bool,
}

impl EtaTransform {
    /// `ṽ(P)`: maps points of `C_{η₂}` to points of `C_{η₁}`.
    pub fn apply(&self, p: &IntegralPoint) -> IntegralPoint {
        IntegralPoint {
            a: &self.a[0] * &p.a + &self.a[1] * &p.b - &self.a[2],
            b: &self.b[0] * &p.a + &self.b[1] * &p.b - &self.b[2],
        }
    }

    pub fn substitution(&self) -> [MPoly; 2] {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let lin = |c: &[BigInt; 3]| {
            x.scale(&Rational::from_integer(c[0].clone()))
                .add(&y.scale(&Rational::from_integer(c[1].clone())))
                .sub(&MPoly::constant(2, Rational::from_integer(c[2].clone())))
        };
        [lin(&self.a), lin(&self.b)]
    }
}

/// The transform from `C_{η₂}` to `C_{η₁}` for `[F:Q] = 3`.
pub fn eta_transform(fld: &CmField, i1: usize, i2: usize) -> Result<EtaTransform> {
    if fld.g() != 3 {
        return Err(Error::domain("eta_transform needs [F:Q] = 3"));
    }
    let c1 = build_eta_curve(fld, i1)?;
    let c2 = build_eta_curve(fld, i2)?;
    let (e1, e2) = (&c1.eta, &c2.eta);
    let coords = |x: &NFElement| fld.eta_coords(e1, x);
    // v = c0 + c1 η₁ with [v η₂]_3 = 0 and [v η₂²]_3 = 1
    let e2sq = e2 * e2;
    let basis = [fld.f.one(), e1.clone()];
    let mut m = vec![Vec::new(), Vec::new()];
    for bv in &basis {
        m[0].push(coords(&(bv * e2))?[2].clone());
        m[1].push(coords(&(bv * &e2sq))?[2].clone());
    }
    let sol = linalg::solve(&m, &[Rational::zero(), Rational::one()])
        .ok_or_else(|| Error::catalog(format!("{}: change of basis between T entries is singular", fld.label)))?;
    let v = &basis[0].scale(&sol[0]) + &basis[1].scale(&sol[1]);
    let cv = coords(&v)?;
    let cv2 = coords(&(&v * e2))?;
    let cv3 = coords(&(&v * &e2sq))?;
    let int = |r: &Rational| -> Result<BigInt> {
        if r.is_integer() {
            Ok(r.to_integer())
        } else {
            Err(Error::catalog(format!("{}: eta_{i2} is not in Z[eta_{i1}]", fld.label)))
        }
    };
    let a = [int(&cv[0])?, int(&cv2[0])?, int(&cv3[0])?];
    let b = [int(&cv[1])?, int(&cv2[1])?, int(&cv3[1])?];
    let mut t = EtaTransform {
        eta1_index: i1,
        eta2_index: i2,
        a,
        b,
        norm_v: v.norm(),
        v,
        identity_holds: false,
    };
    t.identity_holds = c1.poly.compose(&t.substitution()) == c2.poly;
    Ok(t)
}

/// Integral points on every `C_η`, obtained by transporting the box points of
/// `C_{η_0}`, together with the Weil generators lifted from them.
#[derive(Clone, Debug)]
pub struct EtaPipeline {
    pub base: EtaCurve,
    pub base_points: Vec<IntegralPoint>,
    pub curves: Vec<(EtaCurve, Vec<IntegralPoint>)>,
    pub transforms: Vec<EtaTransform>,
    pub records: Vec<WeilGeneratorRecord>,
    pub obstruction: Option<u64>,
}

pub fn eta_pipeline(fld: &CmField, bound: &BigInt) -> Result<EtaPipeline> {
    if fld.g() != 3 {
        return Err(Error::domain("the eta-curve pipeline needs [F:Q] = 3"));
    }
    if fld.t.is_empty() {
        return Err(Error::catalog(format!(
            "{}: T is empty (obstruction: {:?})",
            fld.label,
            fld.monogenic_obstruction()
        )));
    }
    let base = build_eta_curve(fld, 0)?;
    let base_points = integral_points_box(&base, bound)?;
    let mut curves = Vec::with_capacity(fld.t.len());
    let mut transforms = Vec::new();
    let mut records = Vec::new();
    for i in 0..fld.t.len() {
        let c = build_eta_curve(fld, i)?;
        let pts = if i == 0 {
            base_points.clone()
        } else {
            let t = eta_transform(fld, i, 0)?;
            if !t.identity_holds {
                return Err(Error::domain(format!(
                    "{}: f_eta{i} o v does not equal f_eta0 (Norm(v) = {})",
                    fld.label, t.norm_v
                )));
            }
            let pts: Vec<IntegralPoint> = base_points.iter().map(|p| t.apply(p)).collect();
            transforms.push(t);
            pts
        };
        for p in &pts {
            if !c.contains(p) {
                return Err(Error::domain(format!("transported point {p} is not on C_eta{i}")));
            }
            records.extend(lift_point(fld, &c, p)?);
        }
        curves.push((c, pts));
    }
    Ok(EtaPipeline { base, base_points, curves, transforms, records, obstruction: None })
}

/// Lower and upper bounds for `ζ_K(2)` from a truncated Euler product.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaInterval {
    pub lo: f64,
    pub hi: f64,
    pub prime_bound: u64,
}

/// Degrees of the distinct monic irreducible factors of `f` mod `p`.
fn distinct_factor_degrees(fp: arith::Fp, f: &[u64]) -> Vec<usize> {
    let mut rem = fp.poly_monic(f);
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut out = Vec::new();
    let n = rem.len().saturating_sub(1);
    for d in 1..=n {
        if rem.len() <= 1 {
            break;
        }
        h = fp.poly_powmod(&h, fp.p as u128, &rem);
        let g = fp.poly_gcd(&rem, &fp.poly_sub(&h, &x));
        if g.len() > 1 {
            out.extend(std::iter::repeat_n(d, (g.len() - 1) / d));
            loop {
                let gg = fp.poly_gcd(&rem, &g);
                if gg.len() <= 1 {
                    break;
                }
                rem = fp.poly_monic(&fp.poly_divrem(&rem, &gg).0);
            }
            h = if rem.len() > 1 { fp.poly_rem(&h, &rem) } else { h };
        }
    }
    out
}

/// `ζ_K(2)` enclosed using the primes below `prime_bound`.
///
/// Primes not dividing the index of `Z[x]` in `O_K` use the factorization of
/// the defining polynomial; the others contribute an interval. The tail is
/// bounded by `exp(4n / (3P))`.
pub fn dedekind_zeta2(fld: &CmField, prime_bound: u64) -> Result<ZetaInterval> {
    let poly = fld.k.poly();
    let n = fld.k.degree();
    let d = arith::discriminant(poly)? / Rational::from_integer(fld.disc_k.clone());
    let index = arith::exact_sqrt(&d.to_integer())
        .ok_or_else(|| Error::catalog(format!("{}: disc(k)/disc_K is not a square", fld.label)))?;
    let coeffs = poly.integer_coeffs().ok_or(Error::NotIntegral)?;
    let mut lo = 1.0f64;
    let mut hi = 1.0f64;
    for p in arith::small_primes(prime_bound) {
        let pf = p as f64;
        if (&index % p).is_zero() {
            hi *= (1.0 - pf.powi(-2)).powi(-(n as i32));
            continue;
        }
        let fp = arith::Fp::new(p);
        let pb = BigInt::from(p);
        let red: Vec<u64> = coeffs
            .iter()
            .map(|c| {
                let r = ((c % &pb) + &pb) % &pb;
                r.to_u64().unwrap_or(0)
            })
            .collect();
        let mut local = 1.0;
        for deg in distinct_factor_degrees(fp, &red) {
            local /= 1.0 - pf.powi(-2 * deg as i32);
        }
        lo *= local;
        hi *= local;
    }
    hi *= (4.0 * n as f64 / (3.0 * prime_bound as f64)).exp();
    Ok(ZetaInterval { lo: lo * (1.0 - 1e-12), hi: hi * (1.0 + 1e-12), prime_bound })
}

/// The effective bounds for a sextic CM field, reported symbolically.
#[derive(Clone, Debug)]
pub struct BakerCoatesReport {
    pub h_per_eta: Vec<(usize, BigInt)>,
    /// `max_η H_η`
    pub h_max: BigInt,
    pub kappa: u32,
    /// `2 deg K`
    pub exponent: usize,
    pub zeta_k2: ZetaInterval,
    pub height_bound: String,
    pub count_bound: String,
    pub t_complete: bool,
}

pub fn baker_coates_report(fld: &CmField) -> Result<BakerCoatesReport> {
    if fld.g() != 3 {
        return Err(Error::domain("the Baker-Coates report needs [F:Q] = 3"));
    }
    let mut h_per_eta = Vec::with_capacity(fld.t.len());
    for i in 0..fld.t.len() {
        h_per_eta.push((i, build_eta_curve(fld, i)?.h_eta));
    }
    let h_max = h_per_eta.iter().map(|(_, h)| h.clone()).max().unwrap_or_default();
    let exponent = 2 * fld.k.degree();
    let zeta_k2 = dedekind_zeta2(fld, 20_000)?;
    let height_bound = format!("h(alpha) <= exp(exp(exp(2*{h_max})))^(10^(3^10))");
    let count_bound = format!(
        "#W <= {} * zeta_K(2) * (exp(exp(exp(2*{h_max})))^(10^(3^10)))^{exponent}, zeta_K(2) in [{:.9}, {:.9}]",
        fld.kappa, zeta_k2.lo, zeta_k2.hi
    );
    Ok(BakerCoatesReport {
        h_per_eta,
        h_max,
        kappa: fld.kappa,
        exponent,
        zeta_k2,
        height_bound,
        count_bound,
        t_complete: fld.t_complete,
    })
}

/// `h(α)` lower bound from a point: `αᾱ = A/4 + B²/16`.
pub fn q_of_point(p: &IntegralPoint) -> Rational {
    Rational::new(p.a.clone(), 4.into()) + Rational::new(&p.b * &p.b, 16.into())
}

/// Largest coordinate magnitude of a point.
pub fn point_height(p: &IntegralPoint) -> f64 {
    rational_to_f64(&Rational::from_integer(p.a.abs().max(p.b.abs())))
}
