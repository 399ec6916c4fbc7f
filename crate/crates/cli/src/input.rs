use std::path::Path;

use invariant_means::repr::{parse_description, parse_elements, parse_group};
use invariant_means::{Error, FiniteSubset, FunctionRep, GroupSpec, WitnessFamilySpec};
use serde_json::Value;

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_function(path: &Path) -> Result<FunctionRep, CliError> {
    Ok(parse_description(&read_text(path)?)?)
}

fn parse_error(location: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.to_string(),
        message: message.into(),
    }
}

fn read_document(path: &Path) -> Result<Value, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        parse_error(&format!("line {} column {}", e.line(), e.column()), e.to_string()).into()
    })
}

fn field<'a>(doc: &'a Value, name: &str) -> Result<&'a Value, Error> {
    doc.get(name)
        .ok_or_else(|| parse_error("$", format!("missing field {name:?}")))
}

fn subset(group: &GroupSpec, v: &Value, path: &str) -> Result<FiniteSubset, Error> {
    FiniteSubset::new(group, parse_elements(group, v, path)?)
}

/// A `{"group": ..., "<name>": [elements]}` document.
pub fn read_finite_set(path: &Path, name: &str) -> Result<(Value, FiniteSubset), CliError> {
    let doc = read_document(path)?;
    let group = parse_group(field(&doc, "group")?, "$.group")?;
    let set = subset(&group, field(&doc, name)?, &format!("$.{name}"))?;
    Ok((doc, set))
}

/// The `family` entry of a witness document; boxes when absent.
pub fn parse_family(group: &GroupSpec, doc: &Value) -> Result<WitnessFamilySpec, Error> {
    let Some(fam) = doc.get("family") else {
        return Ok(WitnessFamilySpec::Boxes);
    };
    let kind = fam
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_error("$.family.kind", "expected a string"))?;
    match kind {
        "boxes" => Ok(WitnessFamilySpec::Boxes),
        "pair" => {
            let stride = field(fam, "stride")?;
            let stride = parse_elements(group, &Value::Array(vec![stride.clone()]), "$.family.stride")?;
            Ok(WitnessFamilySpec::Pair {
                stride: stride.into_iter().next().expect("one element"),
            })
        }
        "list" => {
            let sets = field(fam, "sets")?
                .as_array()
                .ok_or_else(|| parse_error("$.family.sets", "expected a list of sets"))?
                .iter()
                .enumerate()
                .map(|(i, s)| subset(group, s, &format!("$.family.sets[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let nonimproving = match fam.get("nonimproving") {
                None => false,
                Some(v) => v
                    .as_bool()
                    .ok_or_else(|| parse_error("$.family.nonimproving", "expected a boolean"))?,
            };
            Ok(WitnessFamilySpec::List { sets, nonimproving })
        }
        other => Err(parse_error("$.family.kind", format!("unknown family `{other}`"))),
    }
}
