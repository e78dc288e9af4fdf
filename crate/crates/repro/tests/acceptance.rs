//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use serde_json::Value;
use superiso::arith::{
    is_irreducible, is_probable_prime, parse_mpoly, parse_poly, rational_to_f64, BigInt, MPoly, Rational, UniPoly,
};
use superiso::catalog::{generated_module_disc, Catalog};
use superiso::cm_field::CmField;
use superiso::eta_curve::{build_eta_curve, eta_pipeline, eta_transform, integral_points_box, IntegralPoint};
use superiso::finite_geometry::{
    classify_elliptic, classify_ordinary_av, cm_prime_from_alpha, cm_prime_search, count_points,
    find_root_in_catalog, frobenius_charpoly, isogeny_census, zeta_numerator, CurveModel, FrobeniusData,
};
use superiso::number_field::NFElement;
use superiso::weil_search::{algorithm1, census, quadratic_count, quadratic_weil_gens, quartic_congruence};

const F2_MAX: Duration = Duration::from_secs(1);
const ELLIPTIC_ORACLE_MAX: Duration = Duration::from_secs(120);
const F11_MAX: Duration = Duration::from_secs(1);
const F353_SINGLE_MAX: Duration = Duration::from_secs(600);
const F353_EIGHT_MAX: Duration = Duration::from_secs(120);
const ZETA9_MAX: Duration = Duration::from_secs(300);
const QUARTIC_MAX: Duration = Duration::from_secs(120);
const F5465351_MAX: Duration = Duration::from_secs(30);
/// Allowed `|count - ρ log N|` for the quartic census.
const QUARTIC_DEVIATION: f64 = 8.0;
/// Relative tolerance on `ρ`, which is computed from a floating-point unit height.
const RHO_REL_TOL: f64 = 1e-9;
/// Allowed `|count - 4N|` for the quadratic closed form.
const QUADRATIC_DEVIATION: i64 = 8;
const NORM_REL_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

trait OrFail<T> {
    fn or_fail(self, what: &str) -> Result<T, String>;
}

impl<T, E: Display> OrFail<T> for Result<T, E> {
    fn or_fail(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

impl<T> OrFail<T> for Option<T> {
    fn or_fail(self, what: &str) -> Result<T, String> {
        self.ok_or_else(|| format!("{what}: missing"))
    }
}

/// Shared state: the catalog and every Weil generator produced so far.
struct Ctx {
    cat: Catalog,
    gens: Vec<(String, NFElement)>,
}

impl Ctx {
    fn field(&self, label: &str) -> Result<&CmField, String> {
        self.cat.get(label).or_fail(label)
    }

    fn keep(&mut self, label: &str, alpha: NFElement) {
        self.gens.push((label.to_string(), alpha));
    }

    /// Records `π` with `f(π) = 0` in the catalog field of the Frobenius data.
    fn keep_frobenius(&mut self, fd: &FrobeniusData) -> Result<(), String> {
        let (fld, pi) = find_root_in_catalog(&fd.charpoly, &self.cat).or_fail("root of charpoly in catalog")?;
        let label = fld.label.clone();
        self.keep(&label, pi);
        Ok(())
    }
}

fn poly(s: &str) -> Result<UniPoly, String> {
    parse_poly(s, "x").or_fail(s)
}

fn curve(s: &str) -> Result<CurveModel, String> {
    CurveModel::parse(s).or_fail(s)
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn within(t: Instant, max: Duration, what: &str) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure!(e < max, "{what} took {e:.2?}, limit {max:?}");
    Ok(e)
}

fn key(a: &NFElement) -> Vec<Rational> {
    a.coords().to_vec()
}

/// Fermat test to bases 2, 3, 5, 7, 11, 13 with trial division below 1000.
fn fermat_prime(n: &BigInt) -> bool {
    if *n < big(2) {
        return false;
    }
    for d in 2..1000i64 {
        let d = big(d);
        if *n == d {
            return true;
        }
        if (n % &d) == big(0) {
            return false;
        }
    }
    let m = n - 1;
    [2i64, 3, 5, 7, 11, 13].iter().all(|&b| big(b).modpow(&m, n) == big(1))
}

/// Runs the CLI in-process and parses its JSON output.
fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (code, out, err) = superiso_cli::execute(args.iter().copied());
    ensure!(code == 0, "superiso {args:?} exited {code}: {err}");
    serde_json::from_str(&out).or_fail("CLI output")
}

const F2_CURVES: [(&str, u64); 5] = [
    ("y^2 + y = x^3 over GF(2)", 3),
    ("y^2 + y = x^3 + x over GF(2)", 5),
    ("y^2 + y = x^3 + x + 1 over GF(2)", 1),
    ("y^2 + x*y = x^3 + 1 over GF(2)", 4),
    ("y^2 + x*y + y = x^3 + 1 over GF(2)", 2),
];

fn f2_census(_: &mut Ctx) -> Outcome {
    let t = Instant::now();
    let mut traces = BTreeSet::new();
    for (s, want) in F2_CURVES {
        let n = count_points(&curve(s)?, 1).or_fail(s)?;
        ensure!(n == want, "{s}: {n} points, expected {want}");
        traces.insert(3 - n as i64);
    }
    let cen = isogeny_census(2).or_fail("isogeny_census(2)")?;
    ensure!(cen.iso_classes == 5, "{} isomorphism classes", cen.iso_classes);
    ensure!(cen.rows.len() == 5, "{} isogeny classes", cen.rows.len());
    ensure!(cen.rows.iter().all(|r| r.singleton && r.iso_classes == 1), "a class is not a singleton");
    let census_traces: BTreeSet<i64> = cen.rows.iter().map(|r| r.t).collect();
    ensure!(census_traces == traces, "census traces {census_traces:?} differ from the curves' {traces:?}");
    let e = within(t, F2_MAX, "F2 reproduction")?;
    Ok(format!("counts 3,5,1,4,2; 5 singleton classes; {e:.2?}"))
}

fn elliptic_oracle(_: &mut Ctx) -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    let mut singletons = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let cen = isogeny_census(q).or_fail("isogeny_census")?;
        for r in &cen.rows {
            ensure!(r.points as i64 == q as i64 + 1 - r.t, "q={q} t={}: {} points", r.t, r.points);
            let v = classify_elliptic(&BigInt::from(q), &big(r.t)).or_fail("classify_elliptic")?;
            ensure!(
                v.verdict == Some(r.singleton),
                "q={q} t={}: verdict {:?}, census singleton {}",
                r.t,
                v.verdict,
                r.singleton
            );
            checked += 1;
            singletons += r.singleton as usize;
        }
    }
    let e = within(t, ELLIPTIC_ORACLE_MAX, "census sweep")?;
    Ok(format!("{checked} isogeny classes agree ({singletons} singletons); {e:.2?}"))
}

fn elliptic_cases(_: &mut Ctx) -> Outcome {
    let rows = [
        ("y^2 = x^3 + 4 over GF(7)", 7, 5, 1),
        ("y^2 + y = x^3 over GF(4)", 4, -4, 2),
        ("y^2 + y = x^3 + x + 1 over GF(2)", 2, 2, 3),
        ("y^2 + y = x^3 over GF(2)", 2, 0, 4),
        ("y^2 = x^3 - x + w over GF(3^2, w^2 - w - 1)", 9, 3, 5),
    ];
    for (s, q, t, case) in rows {
        let n = count_points(&curve(s)?, 1).or_fail(s)? as i64;
        ensure!(q + 1 - n == t, "{s}: trace {}, expected {t}", q + 1 - n);
        let v = classify_elliptic(&big(q), &big(t)).or_fail("classify_elliptic")?;
        ensure!(v.elliptic_case() == Some(case), "q={q} t={t}: case {:?}, expected {case}", v.case);
    }
    let v = classify_elliptic(&big(5), &big(0)).or_fail("classify_elliptic")?;
    ensure!(v.verdict == Some(false), "q=5 t=0: verdict {:?}", v.verdict);
    let v = classify_elliptic(&big(25), &big(10)).or_fail("classify_elliptic")?;
    ensure!(v.elliptic_case() == Some(2), "q=25 t=10: case {:?}", v.case);
    Ok("cases 1-5 in order; (5,0) false; (25,10) case 2".into())
}

fn genus_two_f11(ctx: &mut Ctx) -> Outcome {
    let t = Instant::now();
    let fd = frobenius_charpoly(&curve("y^2 = x^5 + 4 over GF(11)")?).or_fail("charpoly")?;
    ensure!(fd.charpoly == poly("x^4 + 11*x^3 + 51*x^2 + 121*x + 121")?, "charpoly {}", fd.charpoly);
    let num = zeta_numerator(&fd);
    let want = parse_poly("121*t^4 + 121*t^3 + 51*t^2 + 11*t + 1", "t").or_fail("numerator")?;
    ensure!(num == want, "zeta numerator {num}");
    let v = classify_ordinary_av(&fd, &ctx.cat).or_fail("classify_ordinary_av")?;
    ensure!(v.is_super_isolated(), "verdict {:?}", v.verdict);
    let e = within(t, F11_MAX, "F11 example")?;
    ctx.keep_frobenius(&fd)?;
    Ok(format!("charpoly, numerator and verdict match; {e:.2?}"))
}

fn sextic_f353(ctx: &mut Ctx) -> Outcome {
    let c = curve("y^2 = x^7 + x^5 + 160*x^3 + 79*x over GF(353)")?;
    let want = poly("x^6 - 88*x^5 + 3440*x^4 - 80400*x^3 + 1214320*x^2 - 10965592*x + 43986977")?;
    let mut times = Vec::new();
    let mut fd = None;
    for (workers, max) in [(1, F353_SINGLE_MAX), (8, F353_EIGHT_MAX)] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().or_fail("thread pool")?;
        let t = Instant::now();
        let got = pool.install(|| frobenius_charpoly(&c)).or_fail("charpoly")?;
        times.push(within(t, max, &format!("{workers} worker(s)"))?);
        ensure!(got.charpoly == want, "{workers} worker(s): charpoly {}", got.charpoly);
        fd = Some(got);
    }
    let fd = fd.expect("two runs");
    let v = classify_ordinary_av(&fd, &ctx.cat).or_fail("classify_ordinary_av")?;
    ensure!(v.is_super_isolated(), "verdict {:?}", v.verdict);
    ctx.keep_frobenius(&fd)?;
    let cpus = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    Ok(format!(
        "charpoly matches, super-isolated; 1 worker {:.2?}, 8 workers {:.2?} on {cpus} cpu(s)",
        times[0], times[1]
    ))
}

fn jacobians(ctx: &mut Ctx) -> Outcome {
    let rows = [
        ("y^2 = x^3 + 5*x^2 + x + 1 over GF(7)", 1),
        ("y^2 = x^5 + 2*x^4 + 4*x^3 + x^2 + x + 4 over GF(5)", 2),
        ("y^2 = x^7 + x^5 + x + 2 over GF(3)", 3),
        ("y^2 + (x^5 + x^3 + 1)*y = x^9 + x^6 over GF(2)", 4),
    ];
    for (s, g) in rows {
        let c = curve(s)?;
        ensure!(c.genus == g, "{s}: genus {}", c.genus);
        let fd = frobenius_charpoly(&c).or_fail(s)?;
        let v = classify_ordinary_av(&fd, &ctx.cat).or_fail(s)?;
        ensure!(v.is_super_isolated(), "{s}: verdict {:?} ({:?})", v.verdict, v.witness);
        if g == 4 {
            ensure!(is_irreducible(&fd.charpoly), "{s}: charpoly {} is reducible", fd.charpoly);
            let p = big(c.field.p() as i64);
            ensure!(fd.middle_coefficient() % &p != big(0), "{s}: not ordinary");
            let (fld, pi) = find_root_in_catalog(&fd.charpoly, &ctx.cat).or_fail("Q(pi) in catalog")?;
            let chk = fld.is_weil_generator(&pi).or_fail("is_weil_generator")?;
            ensure!(chk.is_generator, "{s}: pi is not a Weil generator: {}", chk.detail);
            ensure!(fld.class_number == 1, "{s}: class number {}", fld.class_number);
        }
        ctx.keep_frobenius(&fd)?;
    }
    Ok("all four Jacobians super-isolated; genus 4 irreducible, ordinary, Weil generator".into())
}

const ZETA9_POINTS: [(i64, i64); 10] =
    [(22, -63), (1, 0), (1, -3), (-2, 6), (7, -3), (4, 0), (-2, -3), (43, 21), (-2, 3), (-62, 42)];

/// The printed generators with `ζ_9` written as `x`.
const ZETA9_GENERATORS: [&str; 36] = [
    "-3*x^4 - 2*x",
    "-x^5 + 2*x^2",
    "-2*x^5 - x^4 + 2*x^3 - 2*x + 4",
    "x^5 - 2*x^4 - 2*x^3 + 2*x^2 + 2",
    "-2*x^5 - 3*x^2",
    "x^4 + 3*x",
    "-2*x^5 + 2*x^4 - 2*x^3 - x^2 + 2*x + 2",
    "-x^4 + 2*x^3 - 2*x^2 + x + 4",
    "-x",
    "x^5 + x^2",
    "-x^2",
    "x^4 + x",
    "-x^4 - x",
    "x^2",
    "-x^5 - x^2",
    "x",
    "-x^5 + 2*x^4 + 2*x^3 - 2*x^2 - 2",
    "2*x^5 + x^4 - 2*x^3 + 2*x - 4",
    "x^5 - 2*x^2",
    "3*x^4 + 2*x",
    "x^4",
    "x^5",
    "-x^4 - 3*x",
    "2*x^5 + 3*x^2",
    "x^4 - 2*x^3 + 2*x^2 - x - 4",
    "2*x^5 - 2*x^4 + 2*x^3 + x^2 - 2*x - 2",
    "x^5 - 2*x^3 - x^2 - 2*x + 2",
    "2*x^5 + 2*x^4 + 2*x^3 + 2*x^2 + x + 4",
    "2*x^4 - x",
    "3*x^5 + x^2",
    "-2*x^5 - 2*x^4 - 2*x^3 - 2*x^2 - x - 4",
    "-x^5 + 2*x^3 + x^2 + 2*x - 2",
    "-3*x^5 - x^2",
    "-2*x^4 + x",
    "-x^5",
    "-x^4",
];

fn point_set(pts: &[IntegralPoint]) -> BTreeSet<IntegralPoint> {
    pts.iter().cloned().collect()
}

fn zeta9_pipeline(ctx: &mut Ctx) -> Outcome {
    let t = Instant::now();
    let fld = ctx.field("Q(zeta9)")?.clone();
    ensure!(*fld.k.poly() == poly("x^6 + x^3 + 1")?, "Q(zeta9) is not presented by x^6 + x^3 + 1");
    let z = fld.k.gen();
    let eta = &z + &z.pow(-1).or_fail("zeta^-1")?;
    let idx = fld.t.iter().position(|e| fld.embed_f(e) == eta).or_fail("zeta + zeta^-1 in T")?;
    let c = build_eta_curve(&fld, idx).or_fail("build_eta_curve")?;
    let want = parse_mpoly("x^3 - 3*x*y^2 - y^3 - 6*x^2 - 3*x*y + 9*x + 3*y - 4", &["x", "y"]).or_fail("f_eta")?;
    ensure!(c.poly == want, "f_eta = {}", c.display());
    let pts = point_set(&integral_points_box(&c, &big(100)).or_fail("integral_points_box")?);
    let printed: BTreeSet<IntegralPoint> = ZETA9_POINTS.iter().map(|&(a, b)| IntegralPoint::new(a, b)).collect();
    ensure!(pts == printed, "box points {pts:?}");

    let pipe = eta_pipeline(&fld, &big(100)).or_fail("eta_pipeline")?;
    let mut expected = BTreeSet::new();
    for s in ZETA9_GENERATORS {
        expected.insert(key(&fld.k.from_poly(&poly(s)?)));
    }
    ensure!(expected.len() == 36, "printed list has {} distinct entries", expected.len());
    let got: BTreeSet<Vec<Rational>> = pipe.records.iter().map(|r| key(&r.alpha)).collect();
    ensure!(got.len() == pipe.records.len(), "duplicate generators in the lift");
    let missing = expected.difference(&got).count();
    let extra = got.difference(&expected).count();
    ensure!(got == expected, "{} lifted; {missing} printed ones missing, {extra} extra", got.len());
    let e = within(t, ZETA9_MAX, "Q(zeta9) pipeline")?;
    for r in pipe.records {
        ctx.keep("Q(zeta9)", r.alpha);
    }
    Ok(format!("f_eta exact, 10 points, 36 generators equal the printed list; {e:.2?}"))
}

fn eta_transforms(ctx: &mut Ctx) -> Outcome {
    let fld = ctx.field("Q(zeta9)")?.clone();
    let pipe = eta_pipeline(&fld, &big(100)).or_fail("eta_pipeline")?;
    let sets: Vec<BTreeSet<IntegralPoint>> = pipe.curves.iter().map(|(_, p)| point_set(p)).collect();
    for (i, (c, _)) in pipe.curves.iter().enumerate() {
        let reach = sets[i].iter().map(|p| p.a.magnitude().max(p.b.magnitude()).clone()).max().unwrap_or_default();
        let boxed = point_set(&integral_points_box(c, &BigInt::from(reach)).or_fail("integral_points_box")?);
        ensure!(boxed == sets[i], "C_eta{i}: box search disagrees with the transported points");
    }
    let n = fld.t.len();
    for i1 in 0..n {
        for i2 in 0..n {
            let tr = eta_transform(&fld, i1, i2).or_fail("eta_transform")?;
            ensure!(tr.identity_holds, "f_eta{i1} o v != f_eta{i2}");
            let image: Vec<IntegralPoint> = sets[i2].iter().map(|p| tr.apply(p)).collect();
            let image_set = point_set(&image);
            ensure!(image_set.len() == image.len(), "eta{i2} -> eta{i1} is not injective on points");
            ensure!(image_set == sets[i1], "eta{i2} -> eta{i1} does not map onto the points of C_eta{i1}");
        }
    }
    Ok(format!("{} ordered pairs: exact identity and point bijection", n * n))
}

const GENUS_ONE_FIELD: &str = "sextic-x6-x5+3x4+5x2-2x+1";

fn genus_one_empty(ctx: &mut Ctx) -> Outcome {
    let fld = ctx.field(GENUS_ONE_FIELD)?;
    let want = parse_mpoly(
        "x^3 + x^2*y - 2*x*y^2 - y^3 - 5*x^2 - x*y + y^2 + 6*x + 2*y - 28",
        &["x", "y"],
    )
    .or_fail("cubic")?;
    let stated = poly("x^3 + x^2 - 2*x - 1")?;
    let mut found = None;
    for i in 0..fld.t.len() {
        let c = build_eta_curve(fld, i).or_fail("build_eta_curve")?;
        if c.poly == want {
            found = Some(c);
            break;
        }
    }
    let c = found.or_fail("T entry with the printed cubic")?;
    // the stated root gives the printed cubic up to y -> -y
    let minus = (-&c.eta).min_poly();
    ensure!(minus == stated, "-eta has minimal polynomial {minus}");
    let flip = [MPoly::var(2, 0), MPoly::var(2, 1).neg()];
    let mut other = None;
    for (i, e) in fld.t.iter().enumerate() {
        if e.min_poly() == stated && build_eta_curve(fld, i).or_fail("build_eta_curve")?.poly.compose(&flip) == want {
            other = Some(i);
        }
    }
    ensure!(other.is_some(), "no root of {stated} in T gives the printed cubic after y -> -y");
    let pts = integral_points_box(&c, &big(1000)).or_fail("integral_points_box")?;
    ensure!(pts.is_empty(), "box holds {} points", pts.len());
    let v = cli_json(&["weil-search", "--field", GENUS_ONE_FIELD, "--via", "eta-curves", "--box", "1000"])?;
    ensure!(v["message"] == "no Weil generators found in box", "message {}", v["message"]);
    ensure!(v["count"] == 0, "count {}", v["count"]);
    let scope = v["scope"].as_str().unwrap_or_default();
    ensure!(scope.contains("rank 0"), "scope does not cite the rank-0 metadata: {scope:?}");
    Ok(format!(
        "cubic exact for eta = T[{}] (minimal polynomial {}), box 1000 empty, artifact scoped to rank-0 metadata",
        c.eta_index,
        c.eta.min_poly()
    ))
}

fn quartic_zeta5(ctx: &mut Ctx) -> Outcome {
    let t = Instant::now();
    let fld = ctx.field("Q(zeta5)")?.clone();
    ensure!(*fld.k.poly() == poly("x^4 + x^3 + x^2 + x + 1")?, "Q(zeta5) is not presented by its cyclotomic polynomial");
    let qc = quartic_congruence(&fld).or_fail("quartic_congruence")?;
    ensure!(qc.m == 6, "m = {}", qc.m);
    let adm: Vec<usize> = (0..6).filter(|k| k % 3 != 2).collect();
    ensure!(qc.admissible == adm, "admissible {:?}", qc.admissible);
    let odd = fld.k.from_poly(&poly("-2*x^3 - 2*x^2 + 1")?);
    for r in &qc.rows {
        let target = if r.k % 3 == 2 { odd.clone() } else { fld.k.zero() };
        let diff = (&r.four_alpha - &target).integer_coords().or_fail("integral 4 alpha")?;
        ensure!(diff.iter().all(|c| c % 4 == big(0)), "row {}: 4 alpha = {} in the wrong class", r.k, r.four_alpha);
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let rho = 8.0 / (3.0 * phi.ln());
    ensure!((qc.rho - rho).abs() <= RHO_REL_TOL * rho, "rho = {}, expected {rho}", qc.rho);

    let grid: Vec<BigInt> = [100i64, 1000, 10_000, 100_000].map(big).to_vec();
    let cen = census(&fld, &grid, None).or_fail("census")?;
    let mut worst: f64 = 0.0;
    let mut devs = Vec::new();
    for r in &cen.rows {
        let n: f64 = r.n.to_string().parse().unwrap();
        let d = r.count as f64 - rho * n.ln();
        devs.push(format!("N={} count={} dev={d:+.2}", r.n, r.count));
        worst = worst.max(d.abs());
    }
    let bound = cen.unit_bound.clone().or_fail("unit bound")?;
    for r in algorithm1(&fld, &bound).or_fail("algorithm1")?.records {
        ctx.keep("Q(zeta5)", r.alpha);
    }
    ensure!(worst <= QUARTIC_DEVIATION, "|count - rho log N| reaches {worst:.2} > {QUARTIC_DEVIATION}: {}", devs.join(", "));
    let e = within(t, QUARTIC_MAX, "quartic census")?;
    Ok(format!("m=6, k != 2 mod 3, residues and rho exact; {}; {e:.2?}", devs.join(", ")))
}

/// Weil generators of height at most `n` in `Z[x]` by enumerating coordinates.
fn exhaustive_quadratic(fld: &CmField, n: i64) -> Result<BTreeSet<Vec<Rational>>, String> {
    let mut out = BTreeSet::new();
    for a in -n..=n {
        for b in -n..=n {
            let alpha = fld.k.from_ints(&[a, b]);
            let chk = fld.is_weil_generator(&alpha).or_fail("is_weil_generator")?;
            if !chk.is_generator || chk.q.clone().or_fail("q")? > big(n * n) {
                continue;
            }
            let rec = fld.decompose(&alpha).or_fail("decompose")?;
            ensure!(rec.reconstruct(fld).or_fail("reconstruct")? == alpha, "{alpha}: decomposition does not round-trip");
            out.insert(key(&alpha));
        }
    }
    Ok(out)
}

fn quadratic_counts(ctx: &mut Ctx) -> Outcome {
    let mut notes = Vec::new();
    for (label, modulus) in [("Q(i)", "x^2 + 1"), ("Q(sqrt-2)", "x^2 + 2")] {
        let fld = ctx.field(label)?.clone();
        ensure!(*fld.k.poly() == poly(modulus)?, "{label} is not presented by {modulus}");
        let mut counts = Vec::new();
        for n in [10i64, 100, 1000, 10_000] {
            let c = quadratic_count(&fld, &big(n)).or_fail("quadratic_count")?;
            let d = &c - big(4 * n);
            ensure!(d >= big(-QUADRATIC_DEVIATION) && d <= big(QUADRATIC_DEVIATION), "{label} N={n}: count {c}");
            counts.push(c.to_string());
        }
        let brute = exhaustive_quadratic(&fld, 10)?;
        let recs = quadratic_weil_gens(&fld, &big(10)).or_fail("quadratic_weil_gens")?;
        let closed: BTreeSet<Vec<Rational>> = recs.iter().map(|r| key(&r.alpha)).collect();
        ensure!(brute == closed, "{label}: exhaustive search finds {} at N=10, closed form {}", brute.len(), closed.len());
        ensure!(counts[0] == brute.len().to_string(), "{label}: count {} at N=10 vs {} found", counts[0], brute.len());
        for r in recs {
            ctx.keep(label, r.alpha);
        }
        notes.push(format!("{label} {}", counts.join("/")));
    }
    Ok(format!("{}; N=10 matches exhaustive search", notes.join(", ")))
}

const OBSTRUCTED_FIELD: &str = "sextic-x6+12x4+17x2+2";

fn obstruction(ctx: &mut Ctx) -> Outcome {
    let fld = ctx.field(OBSTRUCTED_FIELD)?;
    ensure!(*fld.k.poly() == poly("x^6 + 12*x^4 + 17*x^2 + 2")?, "unexpected defining polynomial");
    ensure!(fld.monogenic_obstruction() == Some(2), "obstruction {:?}", fld.monogenic_obstruction());
    let out = algorithm1(fld, &Rational::from_integer(big(10))).or_fail("algorithm1")?;
    ensure!(out.records.is_empty() && out.obstruction == Some(2), "search gave {:?}", out.obstruction);
    let v = cli_json(&["weil-search", "--field", OBSTRUCTED_FIELD])?;
    ensure!(v["count"] == 0 && v["obstruction"] == 2, "CLI reports count {} obstruction {}", v["count"], v["obstruction"]);
    let msg = v["message"].as_str().unwrap_or_default();
    ensure!(msg.contains("p = 2"), "message does not cite p = 2: {msg:?}");
    Ok("obstruction at 2; search empty with the prime cited".into())
}

fn cm_primes(ctx: &mut Ctx) -> Outcome {
    let s2 = ctx.field("Q(sqrt-2)")?.clone();
    let found = cm_prime_search(&s2, 1..=10).or_fail("cm_prime_search")?;
    ensure!(found.iter().any(|c| c.b == Some(3) && c.p == big(11)), "(3, 11) missing");
    let bs: Vec<i64> = found.iter().filter_map(|c| c.b).collect();
    let oracle: Vec<i64> = (1..=10).filter(|&b| fermat_prime(&big(b * b + 2))).collect();
    ensure!(bs == oracle, "b values {bs:?}, expected {oracle:?}");
    for c in found {
        ctx.keep("Q(sqrt-2)", c.record.alpha);
    }

    let z3 = ctx.field("Q(zeta3)")?.clone();
    ensure!(*z3.k.poly() == poly("x^2 + x + 1")?, "Q(zeta3) is not presented by x^2 + x + 1");
    let c = (BigInt::from(1) << 127) + (BigInt::from(1) << 25) + (BigInt::from(1) << 12) + (BigInt::from(1) << 6);
    // (1 - sqrt(-3))/2 = -zeta3
    let pi = &z3.k.from_rational(Rational::from_integer(c)) - &z3.k.gen();
    let cp = cm_prime_from_alpha(&z3, &pi).or_fail("cm_prime_from_alpha")?.or_fail("255-bit prime")?;
    ensure!(cp.bits == 255 && cp.hamming_weight == 14, "bits {} weight {}", cp.bits, cp.hamming_weight);
    ensure!(fermat_prime(&cp.p), "p fails the Fermat oracle");
    let order = (&pi - &z3.k.one()).norm().to_integer();
    ensure!(order == cp.order, "(pi - 1)(conj(pi) - 1) = {order}, reported {}", cp.order);
    ensure!(order.bits() == 255 && is_probable_prime(&order) && fermat_prime(&order), "curve order is not a 255-bit prime");
    ctx.keep("Q(zeta3)", pi);

    let z5 = ctx.field("Q(zeta5)")?.clone();
    let pi = z5.k.from_ints(&[-2320, 34, -10, 45]);
    let chk = z5.is_weil_generator(&pi).or_fail("is_weil_generator")?;
    ensure!(chk.is_generator, "pi is not a Weil generator: {}", chk.detail);
    let p = chk.q.clone().or_fail("q")?;
    ensure!(p == big(5_465_351) && fermat_prime(&p), "pi conj(pi) = {p}");
    let trace = pi.trace().to_integer();
    let t = Instant::now();
    let n = count_points(&curve("y^2 = x^5 - 4 over GF(5465351)")?, 1).or_fail("point count")?;
    let e = within(t, F5465351_MAX, "F_5465351 count")?;
    ensure!(BigInt::from(n) == &p + 1 - &trace, "{n} points, p + 1 - Tr = {}", &p + 1 - &trace);
    ctx.keep("Q(zeta5)", pi);
    Ok(format!("b in {bs:?}; 255-bit p of weight 14; #C(F_p) = {n} = p + 1 - ({trace}) in {e:.2?}"))
}

fn properties(ctx: &mut Ctx) -> Outcome {
    ensure!(!ctx.gens.is_empty(), "no Weil generators were collected");
    let mut fields = BTreeSet::new();
    for (label, alpha) in &ctx.gens {
        let fld = ctx.field(label)?;
        let rec = fld.decompose(alpha).or_fail("decompose")?;
        let again = fld.alpha_from(&rec.u, &rec.eta, &Rational::from_integer(rec.a.clone())).or_fail("alpha_from")?;
        ensure!(again == *alpha && rec.reconstruct(fld).or_fail("reconstruct")? == *alpha, "{label} {alpha}: no round trip");
        let neg = -alpha;
        let bar = fld.conj(alpha).or_fail("conj")?;
        for (name, b) in [("-alpha", &neg), ("conj(alpha)", &bar)] {
            ensure!(fld.is_weil_generator(b).or_fail(name)?.is_generator, "{label} {alpha}: {name} is not a Weil generator");
        }
        let norm = rational_to_f64(&alpha.norm()).abs();
        let (lo, hi) = alpha.height(128);
        let e = 2 * fld.g() as i32;
        ensure!(
            norm >= lo.powi(e) * (1.0 - NORM_REL_TOL) && norm <= hi.powi(e) * (1.0 + NORM_REL_TOL),
            "{label} {alpha}: |Norm| = {norm}, h^2g in [{}, {}]",
            lo.powi(e),
            hi.powi(e)
        );
        ensure!((hi - lo) <= NORM_REL_TOL * hi, "{label} {alpha}: height interval too wide");
        let n = fld.k.degree() as i64;
        let mut mons = Vec::new();
        for i in 0..n {
            for j in 0..n {
                mons.push(&alpha.pow(i).or_fail("pow")? * &bar.pow(j).or_fail("pow")?);
            }
        }
        let disc = generated_module_disc(&fld.k, &mons).or_fail("module discriminant")?;
        ensure!(disc == Rational::from_integer(fld.disc_k.clone()), "{label} {alpha}: disc Z[alpha, conj] = {disc}");
        fields.insert(label.clone());
    }
    Ok(format!("{} generators over {} fields", ctx.gens.len(), fields.len()))
}

fn main() {
    std::env::remove_var("SUPERISO_CATALOG");
    let mut ctx = Ctx { cat: Catalog::builtin().expect("built-in catalog"), gens: Vec::new() };
    let checks: [(&str, fn(&mut Ctx) -> Outcome); 14] = [
        ("elliptic curves over F2", f2_census),
        ("elliptic verdicts vs isogeny census", elliptic_oracle),
        ("elliptic case examples", elliptic_cases),
        ("genus-2 curve over F11", genus_two_f11),
        ("genus-3 curve over F353", sextic_f353),
        ("hyperelliptic Jacobians of genus 1-4", jacobians),
        ("Q(zeta9) eta-curve pipeline", zeta9_pipeline),
        ("eta-curve changes of variables", eta_transforms),
        ("genus-1 eta-curve with no points", genus_one_empty),
        ("Q(zeta5) congruences and census", quartic_zeta5),
        ("imaginary quadratic counts", quadratic_counts),
        ("non-monogenic real subfield", obstruction),
        ("prime Weil generators", cm_primes),
        ("properties of every generator", properties),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(|| check(&mut ctx))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
