use std::path::Path;

use invariant_means::commarginal::finite_witness_from_reps;
use invariant_means::means::{expansion_pseudomean_report, render_number};
use invariant_means::rational::format_rational;
use invariant_means::repr::to_description;
use invariant_means::{
    absolute_mediality, asymptotic_profile, check_witness, counting_discrepancy, covering_number, density_pair,
    is_perturbation, lowest_mean, minimax_weights, packing_limit_check, packing_number, round_to_set,
    run_axiom_suite, tile_report, Error, FiniteSubset, FunctionRep, MedialityVerdict, PackingResult,
    PerturbationVerdict, Rational, SearchMode, uppermost_mean,
};
use serde_json::{json, Value};

use crate::input::{parse_family, read_finite_set, read_function};
use crate::render::{csv_cell, Output};
use crate::CliError;

type CmdResult = Result<Output, CliError>;

pub fn density(input: &Path) -> CmdResult {
    let a = read_function(input)?;
    let pair = density_pair(&a)?;
    let json = pair.to_json();
    let fields = json
        .as_object()
        .expect("object")
        .iter()
        .map(|(k, v)| (k.as_str(), v.clone()))
        .collect();
    Ok(Output::record(fields))
}

pub fn mean(input: &Path, k: u64, depth: Option<i64>, tol: &Rational) -> CmdResult {
    let f = read_function(input)?;
    let lower = lowest_mean(&f)?;
    let upper = uppermost_mean(&f)?;
    let medial = absolute_mediality(&f, k)?;
    let pseudo = match f.as_oracle() {
        Some(_) => None,
        None => Some(expansion_pseudomean_report(&f)?),
    };
    let minimax = match depth {
        Some(side) => {
            if side <= 0 {
                return Err(Error::Domain(format!("depth {side} must be positive")).into());
            }
            let t = FiniteSubset::box_set(f.group(), side);
            Some(minimax_weights(&f, &t, tol)?)
        }
        None => None,
    };
    let medial_text = match &medial {
        MedialityVerdict::Medial { mabs, certified, .. } => {
            format!("yes (Mabs {})", render_number(mabs, *certified))
        }
        MedialityVerdict::NotMedial { .. } => "no".to_string(),
    };
    let mut fields = vec![
        ("lowest", json!(lower.render(&lower.value))),
        ("uppermost", json!(upper.render(&upper.value))),
        ("medial", json!(medial_text)),
        (
            "pseudomean",
            pseudo
                .as_ref()
                .map_or(Value::Null, |p| json!(render_number(&p.estimate.value, true))),
        ),
    ];
    let minimax_json = minimax.as_ref().map(|m| {
        json!({
            "side": depth,
            "value": render_number(&m.value, true),
            "lower_bound": render_number(&m.lower_bound, true),
            "gap": render_number(&m.gap, true),
            "exact": m.exact,
            "weights": m.weights.to_json(),
        })
    });
    if let Some(m) = &minimax {
        fields.push(("minimax", json!(format_rational(&m.value))));
        fields.push(("minimax_gap", json!(format_rational(&m.gap))));
    }
    let json = json!({
        "lowest": lower.to_json(),
        "uppermost": upper.to_json(),
        "medial": medial.to_json(),
        "pseudomean": pseudo.as_ref().map_or(Value::Null, |p| p.to_json()),
        "minimax": minimax_json,
    });
    Ok(Output::record(fields).with_json(json))
}

fn witness_list(r: &PackingResult) -> String {
    let parts: Vec<String> = r.witness.iter().map(|t| t.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn packing_line(r: &PackingResult, letter: &str) -> String {
    let mut line = format!(
        "{letter}={} ratio={} witness={}",
        r.value,
        format_rational(&r.ratio()),
        witness_list(r)
    );
    if r.mode == SearchMode::Greedy {
        line.push_str(" mode=greedy");
    }
    line
}

pub fn pack(input: &Path, k: usize, mode: SearchMode, curve: bool, cover: bool) -> CmdResult {
    let a = read_function(input)?;
    let letter = if cover { "c" } else { "p" };
    let solve = |k: usize| {
        if cover {
            covering_number(&a, k, mode)
        } else {
            packing_number(&a, k, mode)
        }
    };
    if !curve {
        let r = solve(k)?;
        let csv = format!(
            "k,{letter},ratio,mode,witness\n{},{},{},{},{}\n",
            r.k,
            r.value,
            format_rational(&r.ratio()),
            r.mode.name(),
            csv_cell(&witness_list(&r))
        );
        return Ok(Output {
            json: r.to_json(),
            table: format!("{}\n", packing_line(&r, letter)),
            csv,
        });
    }
    let (density, results) = if cover {
        let d = density_pair(&a)?;
        let rows = (1..=k).map(solve).collect::<Result<Vec<_>, _>>()?;
        (d.lower.render(&d.lower.value), rows)
    } else {
        let c = packing_limit_check(&a, k)?;
        (render_number(&c.density, true), c.entries.into_iter().map(|e| e.result).collect())
    };
    let mut table = String::new();
    let mut csv = format!("k,{letter},ratio,mode\n");
    for r in &results {
        table.push_str(&format!("k={} {}\n", r.k, packing_line(r, letter)));
        csv.push_str(&format!("{},{},{},{}\n", r.k, r.value, format_rational(&r.ratio()), r.mode.name()));
    }
    table.push_str(&format!("density={density}\n"));
    let json = json!({
        "density": density,
        "entries": results.iter().map(PackingResult::to_json).collect::<Vec<_>>(),
    });
    Ok(Output { json, table, csv })
}

pub fn witness(input: &Path, tol: &Rational, depth: i64) -> CmdResult {
    let (doc, t) = read_finite_set(input, "T")?;
    let group = t.group().clone();
    let family = parse_family(&group, &doc)?;
    let v = check_witness(&group, &family, &t, tol, depth)?;
    let json = serde_json::to_value(&v).expect("serializable");
    let fields = json
        .as_object()
        .expect("object")
        .iter()
        .map(|(k, v)| (k.as_str(), v.clone()))
        .collect();
    Ok(Output::record(fields))
}

pub fn tile(input: &Path, eps: &Rational) -> CmdResult {
    let (_, b) = read_finite_set(input, "B")?;
    let (tile, report) = tile_report(&b, eps)?;
    let disjoint = tile.cover_defects(2) == 0;
    if !disjoint {
        return Err(Error::Invariant("tile translates do not cover disjointly".into()).into());
    }
    let below = report.ratio < Rational::from_integer(1.into()) + eps;
    if !below {
        return Err(Error::Invariant("tile expansion ratio is not below 1 + eps".into()).into());
    }
    Ok(Output::record(vec![
        ("box_side", json!(report.box_side)),
        ("tile_size", json!(report.tile_size)),
        ("ratio", json!(format_rational(&report.ratio))),
        ("bound", json!(format_rational(&report.bound))),
        ("disjoint_cover", json!(disjoint)),
    ]))
}

fn density_text(a: &FunctionRep) -> Result<Value, Error> {
    Ok(density_pair(a)?.to_json())
}

pub fn commarginal(input: &Path, other: &Path, horizon: i64, window: i64) -> CmdResult {
    let a = read_function(input)?;
    let a2 = read_function(other)?;
    let verdict = is_perturbation(&a, &a2)?;
    let discrepancy = counting_discrepancy(&a, &a2, horizon)?;
    let witness = match finite_witness_from_reps(&a, &a2) {
        Ok(w) => Some(w),
        Err(Error::Kind(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let check = witness.as_ref().map(|w| w.verify(-window, window));
    if let Some(c) = &check {
        if !c.passed() {
            return Err(Error::Invariant("commarginal witness fails its marginal check".into()).into());
        }
    }
    let (bound, detail) = match &verdict {
        PerturbationVerdict::Perturbation { bound, .. } => (json!(bound), Value::Null),
        PerturbationVerdict::NotPerturbation { reason } => (Value::Null, json!(reason)),
    };
    let fields = vec![
        ("perturbation", json!(verdict.is_perturbation())),
        ("bound", bound),
        ("reason", detail),
        ("discrepancy", json!(discrepancy)),
        ("witness", json!(check.as_ref().map(|_| "verified"))),
    ];
    let json = json!({
        "first": density_text(&a)?,
        "second": density_text(&a2)?,
        "perturbation": verdict.to_json(),
        "discrepancy": {"horizon": horizon, "value": discrepancy},
        "witness": witness.as_ref().map(|w| {
            let mut j = w.to_json();
            j["window"] = json!([-window, window]);
            j["verified"] = json!(true);
            j
        }),
    });
    Ok(Output::record(fields).with_json(json))
}

pub fn axioms(functional: &str, cases: usize, seed: u64) -> CmdResult {
    let report = run_axiom_suite(functional, cases, seed)?;
    let mut csv = String::from("axiom,status,checked,witness,estimate_based\n");
    for v in &report.verdicts {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            v.axiom,
            v.status.name(),
            v.checked,
            v.witness.as_ref().map_or("", |w| w.label.as_str()),
            v.estimate_based
        ));
    }
    Ok(Output {
        json: report.to_json(),
        table: report.to_text(),
        csv,
    })
}

pub fn envelope(input: &Path) -> CmdResult {
    let f = read_function(input)?;
    let p = asymptotic_profile(&f)?;
    let fields = vec![
        ("prefix_limsup", json!(p.prefix_limsup.render(&p.prefix_limsup.value))),
        (
            "envelope",
            json!(p.envelope_estimate.render(&p.envelope_estimate.value)),
        ),
        ("uppermost", json!(p.uppermost.render(&p.uppermost.value))),
    ];
    let cert = p.envelope_estimate.certified;
    let mut csv = String::from("eps,x_min,x_max,value\n");
    for r in &p.grid {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_rational(&r.eps),
            r.x_min,
            r.x_max,
            render_number(&r.value, cert)
        ));
    }
    Ok(Output::record(fields).with_json(p.to_json()).with_csv(csv))
}

pub fn round(input: &Path, eps: &Rational) -> CmdResult {
    let f = read_function(input)?;
    let r = round_to_set(&f, eps)?;
    let description = to_description(&FunctionRep::from(r.set.clone()));
    let fields = vec![
        ("box_side", json!(r.box_side)),
        ("tile_size", json!(r.tile_size)),
        ("count", json!(r.count)),
        ("density", json!(format_rational(&r.density))),
        ("mean", json!(format_rational(&r.mean))),
        ("set", json!(description.to_string())),
    ];
    let mut json = r.to_json();
    json["set"] = description;
    Ok(Output::record(fields).with_json(json))
}
