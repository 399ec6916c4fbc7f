//! The JSON description format:
//!
//! ```json
//! {"group": {"free_rank": 1, "torsion": []},
//!  "object": {"kind": "periodic_set", "period": [6], "cell": [0, 2, 3]}}
//! ```
//!
//! Object kinds are `periodic_set`, `periodic_function`, `modified`,
//! `oracle` and `constant`. Elements are `[free..., tors...]` integer lists;
//! a bare integer is accepted for groups with a single coordinate.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{FiniteModRep, FunctionRep, OracleGenerator, OracleWindowRep, PeriodicRep};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Parses a full description document.
pub fn parse_description(text: &str) -> Result<FunctionRep> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let group = parse_group(field(&doc, "group", "$")?, "$.group")?;
    parse_object(&group, field(&doc, "object", "$")?, "$.object")
}

pub fn parse_group(v: &Value, path: &str) -> Result<GroupSpec> {
    let rank = field(v, "free_rank", path)?
        .as_u64()
        .ok_or_else(|| Error::parse(format!("{path}.free_rank"), "expected a nonnegative integer"))?;
    let torsion = match v.get("torsion") {
        None => Vec::new(),
        Some(t) => int_list(t, &format!("{path}.torsion"))?,
    };
    if let Some(m) = torsion.iter().find(|&&m| m < 2) {
        return Err(Error::parse(format!("{path}.torsion"), format!("modulus {m} is smaller than 2")));
    }
    GroupSpec::new(rank as usize, torsion).map_err(|e| Error::parse(path, e.to_string()))
}

fn parse_object(group: &GroupSpec, v: &Value, path: &str) -> Result<FunctionRep> {
    let kind = field(v, "kind", path)?
        .as_str()
        .ok_or_else(|| Error::parse(format!("{path}.kind"), "expected a string"))?;
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => Error::parse(path, other.to_string()),
    };
    match kind {
        "periodic_set" => {
            let period = parse_period(group, v, path)?;
            let cell = parse_elements(group, field(v, "cell", path)?, &format!("{path}.cell"))?;
            Ok(PeriodicRep::indicator(group, period, &cell).map_err(wrap)?.into())
        }
        "periodic_function" => {
            let period = parse_period(group, v, path)?;
            let values = rational_list(field(v, "values", path)?, &format!("{path}.values"))?;
            Ok(PeriodicRep::new(group, period, values).map_err(wrap)?.into())
        }
        "constant" => {
            let c = rational_value(field(v, "value", path)?, &format!("{path}.value"))?;
            Ok(FunctionRep::constant(group, c))
        }
        "modified" => parse_modified(group, v, path),
        "oracle" => parse_oracle(group, v, path),
        other => Err(Error::parse(format!("{path}.kind"), format!("unknown kind {other:?}"))),
    }
}

fn parse_period(group: &GroupSpec, v: &Value, path: &str) -> Result<Vec<i64>> {
    let p = int_list(field(v, "period", path)?, &format!("{path}.period"))?;
    if p.len() != group.free_rank {
        return Err(Error::parse(
            format!("{path}.period"),
            format!("expected {} entries, got {}", group.free_rank, p.len()),
        ));
    }
    if p.iter().any(|&x| x < 1) {
        return Err(Error::parse(format!("{path}.period"), "entries must be positive"));
    }
    Ok(p)
}

fn parse_modified(group: &GroupSpec, v: &Value, path: &str) -> Result<FunctionRep> {
    let base_path = format!("{path}.base");
    let base = match v.get("base") {
        Some(b) => parse_object(group, b, &base_path)?,
        None => {
            // inline form: the periodic fields sit next to the modification
            let mut inline = v.as_object().cloned().unwrap_or_default();
            let kind = if inline.contains_key("cell") {
                "periodic_set"
            } else if inline.contains_key("values") {
                "periodic_function"
            } else {
                return Err(Error::parse(path, "missing field \"base\""));
            };
            inline.insert("kind".into(), Value::from(kind));
            parse_object(group, &Value::Object(inline), path)?
        }
    };
    let base = match base {
        FunctionRep::Periodic(p) => p,
        _ => return Err(Error::parse(base_path, "base must be periodic")),
    };
    let mut overrides = BTreeMap::new();
    if let Some(add) = v.get("add") {
        for x in parse_elements(group, add, &format!("{path}.add"))? {
            overrides.insert(x, int(1));
        }
    }
    if let Some(remove) = v.get("remove") {
        for x in parse_elements(group, remove, &format!("{path}.remove"))? {
            overrides.insert(x, int(0));
        }
    }
    if let Some(set) = v.get("set") {
        let spath = format!("{path}.set");
        let items = set.as_array().ok_or_else(|| Error::parse(&spath, "expected a list"))?;
        for (i, item) in items.iter().enumerate() {
            let ipath = format!("{spath}[{i}]");
            let pair = item
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::parse(&ipath, "expected [element, value]"))?;
            let x = parse_element(group, &pair[0], &format!("{ipath}[0]"))?;
            let val = rational_value(&pair[1], &format!("{ipath}[1]"))?;
            overrides.insert(x, val);
        }
    }
    Ok(FiniteModRep::new(base, overrides)?.into())
}

fn parse_oracle(group: &GroupSpec, v: &Value, path: &str) -> Result<FunctionRep> {
    if group.free_rank != 1 || !group.torsion.is_empty() {
        return Err(Error::parse(path, "oracle windows are only supported on Z"));
    }
    let horizon = field(v, "horizon", path)?
        .as_i64()
        .filter(|&h| h >= 1)
        .ok_or_else(|| Error::parse(format!("{path}.horizon"), "expected a positive integer"))?;
    let generator = field(v, "generator", path)?
        .as_str()
        .ok_or_else(|| Error::parse(format!("{path}.generator"), "expected a string"))?;
    let rep = match generator {
        "dyadic_blocks" => OracleWindowRep::dyadic_blocks(horizon),
        "explicit_table" => {
            let tpath = format!("{path}.table");
            let table = rational_list(field(v, "table", path)?, &tpath)?;
            OracleWindowRep::from_table(horizon, table).map_err(|e| Error::parse(tpath, e.to_string()))
        }
        other => {
            return Err(Error::parse(
                format!("{path}.generator"),
                format!("unknown generator {other:?}"),
            ))
        }
    }?;
    Ok(rep.into())
}

/// Parses a list of elements (a finite subset) in the description layout.
pub fn parse_elements(group: &GroupSpec, v: &Value, path: &str) -> Result<Vec<GroupElement>> {
    let items = v.as_array().ok_or_else(|| Error::parse(path, "expected a list of elements"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| parse_element(group, item, &format!("{path}[{i}]")))
        .collect()
}

fn parse_element(group: &GroupSpec, v: &Value, path: &str) -> Result<GroupElement> {
    let coords = match v {
        Value::Number(_) => vec![v.as_i64().ok_or_else(|| Error::parse(path, "expected an integer"))?],
        _ => int_list(v, path)?,
    };
    group.from_flat(&coords).map_err(|e| Error::parse(path, e.to_string()))
}

fn field<'a>(v: &'a Value, name: &str, path: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::parse(path, format!("missing field {name:?}")))
}

fn int_list(v: &Value, path: &str) -> Result<Vec<i64>> {
    let items = v.as_array().ok_or_else(|| Error::parse(path, "expected a list of integers"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_i64()
                .ok_or_else(|| Error::parse(format!("{path}[{i}]"), "expected an integer"))
        })
        .collect()
}

fn rational_value(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(path, message),
            other => other,
        }),
        Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::parse(path, "numbers must be integers; write fractions as \"num/den\"")),
        _ => Err(Error::parse(path, "expected a rational \"num/den\"")),
    }
}

fn rational_list(v: &Value, path: &str) -> Result<Vec<Rational>> {
    let items = v.as_array().ok_or_else(|| Error::parse(path, "expected a list of rationals"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| rational_value(x, &format!("{path}[{i}]")))
        .collect()
}

fn element_json(x: &GroupElement) -> Value {
    Value::from(x.flat())
}

fn object_json(f: &FunctionRep) -> Value {
    match f {
        FunctionRep::Periodic(p) => periodic_json(p),
        FunctionRep::Modified(m) => {
            let mut obj = Map::new();
            obj.insert("kind".into(), "modified".into());
            obj.insert("base".into(), periodic_json(m.base()));
            let as_set = m.base().is_set() && f.is_set();
            if as_set {
                let pick = |want: i64| -> Vec<Value> {
                    m.overrides()
                        .iter()
                        .filter(|(_, v)| **v == int(want))
                        .map(|(x, _)| element_json(x))
                        .collect()
                };
                obj.insert("add".into(), Value::from(pick(1)));
                obj.insert("remove".into(), Value::from(pick(0)));
            } else {
                let set: Vec<Value> = m
                    .overrides()
                    .iter()
                    .map(|(x, v)| json!([element_json(x), format_rational(v)]))
                    .collect();
                obj.insert("set".into(), Value::from(set));
            }
            Value::Object(obj)
        }
        FunctionRep::Oracle(o) => match o.generator() {
            OracleGenerator::DyadicBlocks => json!({
                "kind": "oracle",
                "generator": "dyadic_blocks",
                "horizon": o.horizon(),
            }),
            OracleGenerator::ExplicitTable => json!({
                "kind": "oracle",
                "generator": "explicit_table",
                "horizon": o.horizon(),
                "table": o.table().iter().map(format_rational).collect::<Vec<_>>(),
            }),
        },
    }
}

fn periodic_json(p: &PeriodicRep) -> Value {
    if p.period().iter().all(|&x| x == 1) && p.is_constant() {
        return json!({"kind": "constant", "value": format_rational(&p.values()[0])});
    }
    if p.is_set() {
        let cell: Vec<Value> = p.support_points().iter().map(element_json).collect();
        json!({"kind": "periodic_set", "period": p.period(), "cell": cell})
    } else {
        json!({
            "kind": "periodic_function",
            "period": p.period(),
            "values": p.values().iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

/// The description document as a JSON value.
pub fn to_description(f: &FunctionRep) -> Value {
    let g = f.group();
    json!({
        "group": {"free_rank": g.free_rank, "torsion": g.torsion},
        "object": object_json(f),
    })
}

pub fn serialize_description(f: &FunctionRep) -> String {
    to_description(f).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const A236: &str = r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"periodic_set","period":[6],"cell":[0,2,3]}}"#;

    #[test]
    fn periodic_set_parses() {
        let f = parse_description(A236).unwrap();
        assert_eq!(f, PeriodicRep::integer_set(6, &[0, 2, 3]).into());
    }

    #[test]
    fn modified_inline_and_nested() {
        let inline = r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"modified","period":[6],"cell":[0,2,3],"remove":[[2]]}}"#;
        let nested = r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"modified","base":{"kind":"periodic_set","period":[6],"cell":[0,2,3]},"remove":[[2]]}}"#;
        let a = parse_description(inline).unwrap();
        let b = parse_description(nested).unwrap();
        assert_eq!(a, b);
        let z = GroupSpec::integers();
        assert_eq!(a.evaluate(&z.int(2)).unwrap(), int(0));
        assert_eq!(a.evaluate(&z.int(8)).unwrap(), int(1));
    }

    #[test]
    fn oracle_parses() {
        let text = r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"oracle","generator":"dyadic_blocks","horizon":4096}}"#;
        let f = parse_description(text).unwrap();
        assert_eq!(f.as_oracle().unwrap().horizon(), 4096);
        assert_eq!(f.evaluate(&GroupSpec::integers().int(10)).unwrap(), int(-1));
    }

    #[test]
    fn errors_carry_location() {
        let bad_mod = r#"{"group":{"free_rank":1,"torsion":[1]},"object":{"kind":"constant","value":"1"}}"#;
        match parse_description(bad_mod) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "$.group.torsion"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_cell = r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"periodic_function","period":[3],"values":["1","0"]}}"#;
        assert!(matches!(parse_description(bad_cell), Err(Error::Parse { .. })));
        let bad_value = r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"periodic_function","period":[2],"values":["1","x"]}}"#;
        match parse_description(bad_value) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "$.object.values[1]"),
            other => panic!("unexpected {other:?}"),
        }
        match parse_description("{\"group\": ") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn serialization_round_trips() {
        let texts = [
            A236,
            r#"{"group":{"free_rank":2,"torsion":[3]},"object":{"kind":"periodic_function","period":[1,2],"values":["1/2","0","-3","1","2","7/3"]}}"#,
            r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"modified","base":{"kind":"periodic_set","period":[2],"cell":[0]},"remove":[0],"add":[[5]]}}"#,
            r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"modified","base":{"kind":"constant","value":"1/2"},"set":[[[3],"-1/4"]]}}"#,
            r#"{"group":{"free_rank":1,"torsion":[]},"object":{"kind":"oracle","generator":"explicit_table","horizon":1,"table":["1","1/2","0"]}}"#,
            r#"{"group":{"free_rank":1,"torsion":[2]},"object":{"kind":"constant","value":"-2"}}"#,
        ];
        for t in texts {
            let f = parse_description(t).unwrap();
            let again = parse_description(&serialize_description(&f)).unwrap();
            assert_eq!(f, again, "{t}");
        }
    }
}
