use serde_json::{json, Value};
use superiso::arith::{parse_bigint, parse_poly, parse_rational, BigInt};
use superiso::catalog::Catalog;
use superiso::cm_field::{CmField, WeilGeneratorRecord};
use superiso::eta_curve::{
    baker_coates_report, build_eta_curve, eta_pipeline, eta_transform, integral_points_box, lift_point, IntegralPoint,
};
use superiso::finite_geometry::{
    classify_elliptic, classify_ordinary_av, classify_weil_polynomial, cm_prime_from_alpha, cm_prime_search,
    frobenius_charpoly_with_budget, isogeny_census, zeta_numerator, CurveModel,
};
use superiso::finite_geometry::frobenius::{satisfies_functional_equation, satisfies_hasse_weil};
use superiso::weil_search::{algorithm1, census, quadratic_weil_gens, quartic_congruence};
use superiso::Error;

use crate::output::{Artifact, Table};
use crate::{Cli, Command, EtaCommand, Via, EXIT_CATALOG};

type R = anyhow::Result<Artifact>;

fn load_catalog(cli: &Cli) -> anyhow::Result<Catalog> {
    Ok(match &cli.catalog {
        Some(p) => Catalog::load(p)?,
        None => Catalog::load_default()?,
    })
}

pub fn run(cli: &Cli) -> R {
    match &cli.command {
        Command::WeilSearch(a) => {
            let cat = load_catalog(cli)?;
            weil_search(cat.get(&a.field)?, a)
        }
        Command::Census(a) => {
            let cat = load_catalog(cli)?;
            run_census(cat.get(&a.field)?, &a.grid, a.bound.as_deref())
        }
        Command::QuarticDensity(a) => {
            let cat = load_catalog(cli)?;
            quartic_density(cat.get(&a.field)?)
        }
        Command::EtaCurve(c) => {
            let cat = load_catalog(cli)?;
            eta_curve(&cat, c)
        }
        Command::ClassifyEc(a) => {
            let v = classify_elliptic(&parse_bigint(&a.q)?, &parse_bigint(&a.t)?)?;
            Ok(Artifact::new(serde_json::to_value(v)?))
        }
        Command::Zeta(a) => zeta(&a.curve, a.budget),
        Command::ClassifyAv(a) => {
            let cat = load_catalog(cli)?;
            let mut out = match (&a.curve, &a.charpoly) {
                (Some(c), _) => {
                    let curve = CurveModel::parse(c)?;
                    let fd = frobenius_charpoly_with_budget(&curve, a.budget)?;
                    serde_json::to_value(classify_ordinary_av(&fd, &cat)?)?
                }
                (None, Some(p)) => {
                    let q = a.q.ok_or_else(|| Error::Parse("--charpoly needs --q".into()))?;
                    serde_json::to_value(classify_weil_polynomial(&parse_poly(p, "x")?, q, &cat)?)?
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            if let Some(c) = &a.curve {
                out["curve"] = json!(c);
            }
            Ok(Artifact::new(out))
        }
        Command::IsogenyCensus(a) => {
            let c = isogeny_census(a.q)?;
            let mut t = Table::new(&["t", "points", "iso_classes", "models", "singleton"]);
            for r in &c.rows {
                t.push(vec![
                    r.t.to_string(),
                    r.points.to_string(),
                    r.iso_classes.to_string(),
                    r.models.to_string(),
                    r.singleton.to_string(),
                ]);
            }
            Ok(Artifact::new(serde_json::to_value(&c)?).with_table(t))
        }
        Command::CmPrimeSearch(a) => {
            let cat = load_catalog(cli)?;
            let fld = cat.get(&a.field)?;
            let found = match &a.alpha {
                Some(s) => {
                    let alpha = fld.k.from_poly(&parse_poly(s, "x")?);
                    cm_prime_from_alpha(fld, &alpha)?.into_iter().collect()
                }
                None => cm_prime_search(fld, a.b_min..=a.b_max)?,
            };
            let mut t = Table::new(&["b", "alpha", "p", "bits", "hamming_weight", "trace", "order"]);
            for c in &found {
                t.push(vec![
                    c.b.map(|b| b.to_string()).unwrap_or_default(),
                    c.record.alpha.to_string(),
                    c.p.to_string(),
                    c.bits.to_string(),
                    c.hamming_weight.to_string(),
                    c.trace.to_string(),
                    c.order.to_string(),
                ]);
            }
            Ok(Artifact::new(json!({ "field": fld.label, "primes": found })).with_table(t))
        }
        Command::CatalogValidate => {
            let cat = match &cli.catalog {
                Some(p) => Catalog::from_json_unchecked(&std::fs::read_to_string(p).map_err(|e| {
                    Error::Catalog(format!("{}: {e}", p.display()))
                })?)?,
                None => match std::env::var_os(superiso::catalog::CATALOG_ENV) {
                    Some(p) if !p.is_empty() => Catalog::from_json_unchecked(
                        &std::fs::read_to_string(&p).map_err(|e| Error::Catalog(format!("{p:?}: {e}")))?,
                    )?,
                    _ => Catalog::builtin()?,
                },
            };
            let rep = cat.validate();
            let mut t = Table::new(&["label", "datum", "message"]);
            for i in &rep.issues {
                t.push(vec![i.label.clone(), i.datum.clone(), i.message.clone()]);
            }
            let mut a = Artifact::new(json!({
                "ok": rep.ok(),
                "records": rep.records,
                "checks": rep.checks,
                "issues": rep.issues,
            }))
            .with_table(t);
            if !rep.ok() {
                a.exit = EXIT_CATALOG as i32;
            }
            Ok(a)
        }
        Command::BakerCoates(a) => {
            let cat = load_catalog(cli)?;
            let r = baker_coates_report(cat.get(&a.field)?)?;
            Ok(Artifact::new(json!({
                "field": a.field,
                "h_eta": r.h_per_eta.iter().map(|(i, h)| json!({ "eta": i, "H": h.to_string() })).collect::<Vec<_>>(),
                "h_max": r.h_max.to_string(),
                "kappa": r.kappa,
                "exponent": r.exponent,
                "zeta_k2": { "lo": r.zeta_k2.lo, "hi": r.zeta_k2.hi, "prime_bound": r.zeta_k2.prime_bound },
                "height_bound": r.height_bound,
                "count_bound": r.count_bound,
                "t_complete": r.t_complete,
            })))
        }
    }
}

fn record_json(r: &WeilGeneratorRecord) -> Value {
    json!({
        "alpha": r.alpha.to_string(),
        "q": r.q.to_string(),
        "u": r.u.to_string(),
        "eta_index": r.eta_index,
        "eta": r.eta.to_string(),
        "a": r.a.to_string(),
        "height": r.alpha.height_f64(),
    })
}

fn records_table(recs: &[WeilGeneratorRecord]) -> Table {
    let mut t = Table::new(&["alpha", "q", "u", "eta_index", "a"]);
    for r in recs {
        t.push(vec![r.alpha.to_string(), r.q.to_string(), r.u.to_string(), r.eta_index.to_string(), r.a.to_string()]);
    }
    t
}

fn sorted(mut recs: Vec<WeilGeneratorRecord>) -> Vec<WeilGeneratorRecord> {
    recs.sort_by_cached_key(|r| (r.q.clone(), r.eta_index, r.alpha.to_string()));
    recs
}

fn weil_search(fld: &CmField, a: &crate::WeilSearchArgs) -> R {
    let via = match a.via {
        Via::Auto if fld.g() == 1 => Via::Quadratic,
        Via::Auto => Via::Units,
        v => v,
    };
    let mut out = json!({ "field": fld.label, "g": fld.g(), "t_complete": fld.t_complete });
    let (recs, obstruction) = match via {
        Via::Quadratic => {
            let n = parse_bigint(&a.n)?;
            out["method"] = json!("quadratic");
            out["n"] = json!(n.to_string());
            (quadratic_weil_gens(fld, &n)?, None)
        }
        Via::Units => {
            let b = parse_rational(&a.bound)?;
            let r = algorithm1(fld, &b)?;
            out["method"] = json!("units");
            out["bound"] = json!(b.to_string());
            out["units_tested"] = json!(r.units_tested);
            out["pairs_tested"] = json!(r.pairs_tested);
            (sorted(r.records), r.obstruction)
        }
        Via::EtaCurves => {
            let bound = parse_bigint(&a.box_bound)?;
            out["method"] = json!("eta-curves");
            out["box"] = json!(bound.to_string());
            match fld.monogenic_obstruction() {
                Some(p) => (Vec::new(), Some(p)),
                None => {
                    let pl = eta_pipeline(fld, &bound)?;
                    out["points"] = json!(pl.base_points.iter().map(|p| p.to_string()).collect::<Vec<_>>());
                    (sorted(pl.records), None)
                }
            }
        }
        Via::Auto => unreachable!(),
    };
    out["obstruction"] = json!(obstruction);
    out["count"] = json!(recs.len());
    out["generators"] = Value::Array(recs.iter().map(record_json).collect());
    if let Some(p) = obstruction {
        out["message"] = json!(format!("O_F is not monogenic: obstruction at p = {p}; no Weil generators"));
    } else if recs.is_empty() {
        out["message"] = json!(if via == Via::EtaCurves {
            "no Weil generators found in box".to_string()
        } else {
            "no Weil generators found".to_string()
        });
        if via == Via::EtaCurves {
            if let Some(n) = fld.notes.get("eta_curve_rank") {
                out["scope"] = json!(format!("emptiness outside the box rests on catalog metadata: {n}"));
            }
        }
    }
    Ok(Artifact::new(out).with_table(records_table(&recs)))
}

fn run_census(fld: &CmField, grid: &str, bound: Option<&str>) -> R {
    let grid = grid.split(',').map(parse_bigint).collect::<superiso::Result<Vec<BigInt>>>()?;
    let b = bound.map(parse_rational).transpose()?;
    let c = census(fld, &grid, b.as_ref())?;
    let mut t = Table::new(&["N", "count", "predicted"]);
    let mut rows = Vec::new();
    for r in &c.rows {
        let pred = r.predicted.map(|p| format!("{p:.6}")).unwrap_or_default();
        t.push(vec![r.n.to_string(), r.count.to_string(), pred.clone()]);
        rows.push(json!({ "N": r.n.to_string(), "count": r.count, "predicted": r.predicted }));
    }
    Ok(Artifact::new(json!({
        "field": fld.label,
        "unit_bound": c.unit_bound.map(|b| b.to_string()),
        "height_ratio": c.height_ratio.map(|(lo, hi)| json!([lo, hi])),
        "rows": rows,
    }))
    .with_table(t))
}

fn quartic_density(fld: &CmField) -> R {
    let qc = quartic_congruence(fld)?;
    let mut t = Table::new(&["k", "a", "four_alpha", "class_mod_4", "admissible"]);
    let mut rows = Vec::new();
    for r in &qc.rows {
        let class = r.class.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        t.push(vec![
            r.k.to_string(),
            r.a.to_string(),
            r.four_alpha.to_string(),
            class.join(" "),
            r.admissible.to_string(),
        ]);
        rows.push(json!({
            "k": r.k,
            "a": r.a.to_string(),
            "four_alpha": r.four_alpha.to_string(),
            "class_mod_4": class,
            "admissible": r.admissible,
        }));
    }
    Ok(Artifact::new(json!({
        "field": fld.label,
        "m": qc.m,
        "admissible": qc.admissible,
        "c6": qc.c6,
        "rho": qc.rho,
        "log_height_u0": qc.log_height_u0,
        "rows": rows,
    }))
    .with_table(t))
}

fn check_eta(fld: &CmField, i: usize) -> anyhow::Result<()> {
    if i >= fld.t.len() {
        return Err(Error::Domain(format!("{} has {} entries in T; --eta {i} is out of range", fld.label, fld.t.len())).into());
    }
    Ok(())
}

fn points_json(pts: &[IntegralPoint]) -> (Value, Table) {
    let mut t = Table::new(&["A", "B"]);
    for p in pts {
        t.push(vec![p.a.to_string(), p.b.to_string()]);
    }
    (json!(pts.iter().map(|p| json!([p.a.to_string(), p.b.to_string()])).collect::<Vec<_>>()), t)
}

fn eta_curve(cat: &Catalog, c: &EtaCommand) -> R {
    match c {
        EtaCommand::Build { field, eta } => {
            let fld = cat.get(field)?;
            check_eta(fld, *eta)?;
            let ec = build_eta_curve(fld, *eta)?;
            Ok(Artifact::new(json!({
                "field": fld.label,
                "eta_index": ec.eta_index,
                "eta": ec.eta.to_string(),
                "f_eta": ec.display(),
                "rhs": ec.rhs.to_string(),
                "H_eta": ec.h_eta.to_string(),
            })))
        }
        EtaCommand::Points { field, eta, box_bound } => {
            let fld = cat.get(field)?;
            check_eta(fld, *eta)?;
            let ec = build_eta_curve(fld, *eta)?;
            let pts = integral_points_box(&ec, &parse_bigint(box_bound)?)?;
            let (pj, t) = points_json(&pts);
            let mut out = json!({ "field": fld.label, "eta_index": eta, "box": box_bound, "count": pts.len(), "points": pj });
            if pts.is_empty() {
                out["message"] = json!("no integral points in box");
            }
            Ok(Artifact::new(out).with_table(t))
        }
        EtaCommand::Lift { field, eta, point } => {
            let fld = cat.get(field)?;
            check_eta(fld, *eta)?;
            let (a, b) = point
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("point `{point}` is not of the form A,B")))?;
            let p = IntegralPoint::new(parse_bigint(a)?, parse_bigint(b)?);
            let ec = build_eta_curve(fld, *eta)?;
            if !ec.contains(&p) {
                return Err(Error::Domain(format!("{p} is not on C_eta{eta}")).into());
            }
            let recs = sorted(lift_point(fld, &ec, &p)?);
            Ok(Artifact::new(json!({
                "field": fld.label,
                "eta_index": eta,
                "point": p.to_string(),
                "generators": recs.iter().map(record_json).collect::<Vec<_>>(),
            }))
            .with_table(records_table(&recs)))
        }
        EtaCommand::Transform { field, eta1, eta2 } => {
            let fld = cat.get(field)?;
            check_eta(fld, *eta1)?;
            check_eta(fld, *eta2)?;
            let t = eta_transform(fld, *eta1, *eta2)?;
            let s = |v: &[BigInt; 3]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            let sub = t.substitution();
            Ok(Artifact::new(json!({
                "field": fld.label,
                "eta1": eta1,
                "eta2": eta2,
                "A": s(&t.a),
                "B": s(&t.b),
                "v": t.v.to_string(),
                "norm_v": t.norm_v.to_string(),
                "substitution": [sub[0].display_with(&["x", "y"]), sub[1].display_with(&["x", "y"])],
                "identity_holds": t.identity_holds,
            })))
        }
    }
}

fn zeta(curve: &str, budget: u64) -> R {
    let c = CurveModel::parse(curve)?;
    let fd = frobenius_charpoly_with_budget(&c, budget)?;
    let mut t = Table::new(&["i", "count"]);
    for (i, n) in fd.counts.iter().enumerate() {
        t.push(vec![(i + 1).to_string(), n.to_string()]);
    }
    Ok(Artifact::new(json!({
        "curve": c.to_string(),
        "q": fd.q,
        "genus": fd.genus,
        "counts": fd.counts,
        "charpoly": fd.charpoly.display_with("x"),
        "zeta_numerator": zeta_numerator(&fd).display_with("t"),
        "trace": fd.trace.to_string(),
        "functional_equation": satisfies_functional_equation(&fd),
        "hasse_weil": satisfies_hasse_weil(&fd),
    }))
    .with_table(t))
}
