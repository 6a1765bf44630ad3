//! JSON documents for CAFs.
//!
//! ```json
//! {"params": {"n": 2, "m": 3, "rho": 2}, "kind": "independent",
//!  "tables": [{"00": 0, "01": 0, "10": 1, "11": 1}, ...]}
//! {"params": {"n": 3, "m": 3, "rho": 2}, "kind": "rule", "rule": "dictator:1"}
//! ```
//!
//! Table keys are base-`rho` digit strings of length `n` (`0-9` then `a-v`),
//! individual 1 leftmost. An optional `"certified_valid": true` makes the
//! loader re-check validity.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::axioms::{check_validity, Caf, ElementaryCaf, IndependentCaf};
use crate::error::{Error, Result};
use crate::model::{Budget, Category, CategoryVector, Params};
use crate::rules::{BuiltRule, RuleSpec};

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuv";

/// The base-`rho` key for vector `code`.
pub fn vector_key(params: &Params, code: usize) -> String {
    let v = CategoryVector::decode_unchecked(params.n(), params.rho(), code);
    v.entries()
        .iter()
        .map(|c| DIGITS[c.index()] as char)
        .collect()
}

fn parse_key(params: &Params, key: &str) -> Option<usize> {
    if key.len() != params.n() {
        return None;
    }
    key.bytes().try_fold(0usize, |acc, b| {
        let digit = DIGITS.iter().position(|&d| d == b.to_ascii_lowercase())?;
        (digit < params.rho()).then_some(acc * params.rho() + digit)
    })
}

fn tables_json(caf: &IndependentCaf) -> Vec<BTreeMap<String, usize>> {
    let params = caf.params_ref();
    caf.tables()
        .iter()
        .map(|t| {
            (0..params.table_len())
                .map(|code| (vector_key(params, code), t.eval_code(code).index()))
                .collect()
        })
        .collect()
}

impl Serialize for IndependentCaf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut doc = serializer.serialize_struct("CafDocument", 3)?;
        doc.serialize_field("params", self.params_ref())?;
        doc.serialize_field("kind", "independent")?;
        doc.serialize_field("tables", &tables_json(self))?;
        doc.end()
    }
}

/// A parsed CAF document.
#[derive(Clone, Debug)]
pub enum CafDocument {
    Independent {
        caf: IndependentCaf,
        certified_valid: bool,
    },
    Rule {
        params: Params,
        rule: RuleSpec,
    },
}

/// What a document evaluates to.
#[derive(Clone, Debug)]
pub enum LoadedCaf {
    Independent(IndependentCaf),
    Rule(RuleSpec, BuiltRule),
}

impl LoadedCaf {
    pub fn caf(&self) -> &dyn Caf {
        match self {
            LoadedCaf::Independent(c) => c,
            LoadedCaf::Rule(_, r) => r.caf(),
        }
    }

    /// Table form, when available.
    pub fn independent(&self) -> Option<IndependentCaf> {
        match self {
            LoadedCaf::Independent(c) => Some(c.clone()),
            LoadedCaf::Rule(_, r) => r.independent(),
        }
    }

    pub fn params(&self) -> Params {
        self.caf().params()
    }
}

impl CafDocument {
    pub fn independent(caf: IndependentCaf) -> Self {
        CafDocument::Independent {
            caf,
            certified_valid: false,
        }
    }

    pub fn params(&self) -> Params {
        match self {
            CafDocument::Independent { caf, .. } => *caf.params_ref(),
            CafDocument::Rule { params, .. } => *params,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert(
            "params".into(),
            serde_json::to_value(self.params()).expect("plain struct"),
        );
        match self {
            CafDocument::Independent {
                caf,
                certified_valid,
            } => {
                doc.insert("kind".into(), "independent".into());
                if *certified_valid {
                    doc.insert("certified_valid".into(), true.into());
                }
                doc.insert(
                    "tables".into(),
                    serde_json::to_value(tables_json(caf)).expect("plain maps"),
                );
            }
            CafDocument::Rule { rule, .. } => {
                doc.insert("kind".into(), "rule".into());
                doc.insert("rule".into(), rule.to_string().into());
            }
        }
        Value::Object(doc)
    }

    /// Builds the CAF. Certified documents are checked for validity here.
    pub fn load(&self, budget: Budget) -> Result<LoadedCaf> {
        match self {
            CafDocument::Independent {
                caf,
                certified_valid,
            } => {
                if *certified_valid {
                    let report = check_validity(caf, budget)?;
                    if let Some(witness) = report.witness {
                        let names = Default::default();
                        return Err(Error::NotSurjectiveTable(
                            witness.describe(caf.params_ref().rho(), names),
                        ));
                    }
                }
                Ok(LoadedCaf::Independent(caf.clone()))
            }
            CafDocument::Rule { params, rule } => {
                Ok(LoadedCaf::Rule(rule.clone(), rule.build(params)?))
            }
        }
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::schema(path, format!("missing field `{name}`")))
}

fn as_usize(value: &Value, path: &str) -> Result<usize> {
    value
        .as_u64()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| Error::schema(path, "expected a non-negative integer"))
}

fn parse_params(value: &Value) -> Result<Params> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema("params", "expected an object"))?;
    for key in obj.keys() {
        if !["n", "m", "rho"].contains(&key.as_str()) {
            return Err(Error::schema(format!("params.{key}"), "unknown field"));
        }
    }
    let get = |name: &str| -> Result<usize> {
        let path = format!("params.{name}");
        as_usize(field(obj, "params", name)?, &path)
    };
    Params::new(get("n")?, get("m")?, get("rho")?)
        .map_err(|e| Error::schema("params", e.to_string()))
}

fn parse_table(params: &Params, value: &Value, path: &str) -> Result<ElementaryCaf> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema(path, "expected an object of digit-string keys"))?;
    let mut table: Vec<Option<Category>> = vec![None; params.table_len()];
    for (key, entry) in obj {
        let at = format!("{path}.\"{key}\"");
        let code = parse_key(params, key).ok_or_else(|| {
            Error::schema(
                &at,
                format!("key must be {} base-{} digits", params.n(), params.rho()),
            )
        })?;
        let index = as_usize(entry, &at)?;
        let category =
            Category::new(index, params.rho()).map_err(|e| Error::schema(&at, e.to_string()))?;
        if table[code].replace(category).is_some() {
            return Err(Error::schema(&at, "duplicate vector"));
        }
    }
    let table: Vec<Category> = table
        .into_iter()
        .enumerate()
        .map(|(code, c)| {
            c.ok_or_else(|| {
                Error::schema(
                    path,
                    format!("missing key \"{}\"", vector_key(params, code)),
                )
            })
        })
        .collect::<Result<_>>()?;
    ElementaryCaf::new(params, table)
}

/// Parses a document from JSON text. Syntax errors carry line and column.
pub fn parse_caf(text: &str) -> Result<CafDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::schema(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    parse_caf_value(&value)
}

pub fn parse_caf_value(value: &Value) -> Result<CafDocument> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema("$", "expected an object"))?;
    let kind = field(obj, "$", "kind")?
        .as_str()
        .ok_or_else(|| Error::schema("kind", "expected a string"))?;
    match kind {
        "independent" => {
            let params = parse_params(field(obj, "$", "params")?)?;
            for key in obj.keys() {
                if !["params", "kind", "tables", "certified_valid"].contains(&key.as_str()) {
                    return Err(Error::schema(key.as_str(), "unknown field"));
                }
            }
            let tables = field(obj, "$", "tables")?
                .as_array()
                .ok_or_else(|| Error::schema("tables", "expected an array"))?;
            if tables.len() != params.m() {
                return Err(Error::schema(
                    "tables",
                    format!("expected {} tables, got {}", params.m(), tables.len()),
                ));
            }
            let tables = tables
                .iter()
                .enumerate()
                .map(|(x, t)| parse_table(&params, t, &format!("tables[{x}]")))
                .collect::<Result<Vec<_>>>()?;
            let certified_valid = match obj.get("certified_valid") {
                None => false,
                Some(v) => v
                    .as_bool()
                    .ok_or_else(|| Error::schema("certified_valid", "expected a boolean"))?,
            };
            Ok(CafDocument::Independent {
                caf: IndependentCaf::new(&params, tables)?,
                certified_valid,
            })
        }
        "rule" => {
            for key in obj.keys() {
                if !["params", "kind", "rule"].contains(&key.as_str()) {
                    return Err(Error::schema(key.as_str(), "unknown field"));
                }
            }
            let rule: RuleSpec = field(obj, "$", "rule")?
                .as_str()
                .ok_or_else(|| Error::schema("rule", "expected a string"))?
                .parse()
                .map_err(|e: Error| Error::schema("rule", e.to_string()))?;
            let params = match (obj.get("params"), rule.fixed_params()) {
                (Some(p), _) => parse_params(p)?,
                (None, Some(p)) => p,
                (None, None) => return Err(Error::schema("$", "missing field `params`")),
            };
            Ok(CafDocument::Rule { params, rule })
        }
        other => Err(Error::schema(
            "kind",
            format!("expected \"independent\" or \"rule\", got {other:?}"),
        )),
    }
}

pub fn load_caf(path: &Path) -> Result<CafDocument> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_caf(&text)
}

pub fn save_caf(document: &CafDocument, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&document.to_json()).expect("valid JSON value");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// One JSONL line for an emitted CAF.
pub fn jsonl_line(caf: &IndependentCaf) -> String {
    serde_json::to_string(caf).expect("plain document")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Individual;
    use crate::rules::make_dictatorship;

    fn dictator() -> IndependentCaf {
        let params = Params::new(2, 3, 2).unwrap();
        make_dictatorship(&params, Individual::from_index(0))
            .unwrap()
            .to_independent()
    }

    #[test]
    fn keys_put_individual_one_first() {
        let params = Params::new(3, 3, 3).unwrap();
        assert_eq!(vector_key(&params, 0), "000");
        assert_eq!(vector_key(&params, 9), "100");
        assert_eq!(parse_key(&params, "100"), Some(9));
        assert_eq!(parse_key(&params, "30"), None);
        assert_eq!(parse_key(&params, "003"), None);
    }

    #[test]
    fn round_trip_is_identical() {
        let caf = dictator();
        let doc = CafDocument::independent(caf.clone());
        let text = serde_json::to_string(&doc.to_json()).unwrap();
        match parse_caf(&text).unwrap() {
            CafDocument::Independent { caf: back, .. } => assert_eq!(back, caf),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(serde_json::to_value(&caf).unwrap(), doc.to_json());
    }

    #[test]
    fn long_key_is_a_schema_error() {
        let text = r#"{"params":{"n":2,"m":2,"rho":2},"kind":"independent",
            "tables":[{"000":0},{"00":0}]}"#;
        let err = parse_caf(text).unwrap_err();
        assert!(
            matches!(&err, Error::Schema { location, .. } if location.starts_with("tables[0]"))
        );
    }

    #[test]
    fn out_of_range_category_is_a_schema_error() {
        let mut doc = CafDocument::independent(dictator()).to_json();
        doc["tables"][1]["01"] = 2.into();
        let err = parse_caf_value(&doc).unwrap_err();
        assert!(matches!(&err, Error::Schema { location, .. } if location == "tables[1].\"01\""));
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_caf("{\n  \"kind\": }").unwrap_err();
        assert!(matches!(&err, Error::Schema { location, .. } if location.starts_with("line 2")));
    }

    #[test]
    fn certificate_is_checked() {
        let params = Params::new(3, 3, 2).unwrap();
        let majority =
            crate::rules::make_per_object_majority(&params, Category::from_index(0)).unwrap();
        let doc = CafDocument::Independent {
            caf: majority.clone(),
            certified_valid: true,
        };
        assert!(matches!(
            doc.load(Budget::default()),
            Err(Error::NotSurjectiveTable(_))
        ));
        assert!(CafDocument::independent(majority)
            .load(Budget::default())
            .is_ok());
    }

    #[test]
    fn rule_documents_build() {
        let doc = parse_caf(r#"{"kind":"rule","rule":"plurality-table1"}"#).unwrap();
        assert_eq!(doc.params(), crate::rules::table1_params());
        assert!(doc.load(Budget::default()).unwrap().independent().is_none());
    }
}
