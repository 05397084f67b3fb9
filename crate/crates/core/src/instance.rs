//! JSON instance files.
//!
//! ```json
//! { "m": 3, "kind": "xos", "clauses": [[1, 1, 0], [0, 0, "1/2"]],
//!   "costs": [2, 1, 3], "budget": 3 }
//! ```
//!
//! Numbers are integers or strings holding exact rationals (`"p/q"`).
//! Payload by kind: `additive` has `weights` (length `m`); `xos` has
//! `clauses` (rows of length `m`); `table` has `table` (length `2^m`, lex
//! subset order, first entry 0); `coverage` has `universe` (element weights)
//! and `covers` (per item, 0-based element indices). `costs` and `budget`
//! are optional but must appear together.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use crate::valuations::{
    AdditiveValuation, CostVector, CoverageValuation, ExplicitTable, GroundSet, Valuation,
    XosValuation,
};

/// An exact rational as it appears in a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Num(pub Rational);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.denom().is_one() {
            if let Some(n) = self.0.numer().to_i64() {
                return serializer.serialize_i64(n);
            }
        }
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct NumVisitor;

        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational string such as \"5/2\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num(Rational::from_integer(BigInt::from(v))))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                Ok(Num(Rational::from_integer(BigInt::from(v))))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                Err(E::custom(format!(
                    "floating-point number {v} is not exact; write it as \"p/q\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                parse_rational(v)
                    .map(Num)
                    .map_err(|_| E::custom(format!("invalid rational literal {v:?}")))
            }
        }

        deserializer.deserialize_any(NumVisitor)
    }
}

fn nums(xs: &[Rational]) -> Vec<Num> {
    xs.iter().cloned().map(Num).collect()
}

fn rats(xs: Vec<Num>) -> Vec<Rational> {
    xs.into_iter().map(|n| n.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Additive,
    Xos,
    Table,
    Coverage,
}

/// On-disk form of an instance. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub m: usize,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clauses: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Num>,
}

/// A validated instance: a valuation plus optional knapsack data.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub valuation: Valuation,
    pub costs: Option<CostVector>,
}

fn field_error(field: &str, err: Error) -> Error {
    Error::Parse(format!("field `{field}`: {err}"))
}

fn required<T>(value: Option<T>, field: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| Error::Parse(format!("field `{field}` is required for kind `{kind}`")))
}

fn check_len(field: &str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Parse(format!(
            "field `{field}`: expected {expected} entries, found {found}"
        )));
    }
    Ok(())
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let m = self.m;
        if m == 0 {
            return Err(field_error("m", Error::EmptyGroundSet));
        }
        let stray = |present: bool, field: &str| -> Result<()> {
            if present {
                Err(Error::Parse(format!(
                    "field `{field}` does not belong to kind `{:?}`",
                    self.kind
                )))
            } else {
                Ok(())
            }
        };
        let valuation: Valuation = match self.kind {
            Kind::Additive => {
                stray(self.clauses.is_some(), "clauses")?;
                stray(self.table.is_some(), "table")?;
                stray(self.universe.is_some() || self.covers.is_some(), "universe")?;
                let weights = required(self.weights, "weights", "additive")?;
                check_len("weights", m, weights.len())?;
                AdditiveValuation::new(rats(weights))
                    .map_err(|e| field_error("weights", e))?
                    .into()
            }
            Kind::Xos => {
                stray(self.weights.is_some(), "weights")?;
                stray(self.table.is_some(), "table")?;
                stray(self.universe.is_some() || self.covers.is_some(), "universe")?;
                let clauses = required(self.clauses, "clauses", "xos")?;
                if clauses.is_empty() {
                    return Err(Error::Parse(
                        "field `clauses`: at least one clause is required".into(),
                    ));
                }
                for (i, row) in clauses.iter().enumerate() {
                    check_len(&format!("clauses[{i}]"), m, row.len())?;
                }
                XosValuation::new(clauses.into_iter().map(rats).collect())
                    .map_err(|e| field_error("clauses", e))?
                    .into()
            }
            Kind::Table => {
                stray(self.weights.is_some(), "weights")?;
                stray(self.clauses.is_some(), "clauses")?;
                stray(self.universe.is_some() || self.covers.is_some(), "universe")?;
                let table = required(self.table, "table", "table")?;
                ExplicitTable::new(m, rats(table))
                    .map_err(|e| match e {
                        Error::UnsupportedSize { .. } => e,
                        other => field_error("table", other),
                    })?
                    .into()
            }
            Kind::Coverage => {
                stray(self.weights.is_some(), "weights")?;
                stray(self.clauses.is_some(), "clauses")?;
                stray(self.table.is_some(), "table")?;
                let universe = required(self.universe, "universe", "coverage")?;
                let covers = required(self.covers, "covers", "coverage")?;
                check_len("covers", m, covers.len())?;
                CoverageValuation::new(rats(universe), covers)
                    .map_err(|e| field_error("covers", e))?
                    .into()
            }
        };
        let costs = match (self.costs, self.budget) {
            (None, None) => None,
            (Some(costs), Some(budget)) => {
                check_len("costs", m, costs.len())?;
                Some(CostVector::new(rats(costs), budget.0).map_err(|e| field_error("costs", e))?)
            }
            (Some(_), None) => {
                return Err(Error::Parse(
                    "field `budget` is required with `costs`".into(),
                ))
            }
            (None, Some(_)) => {
                return Err(Error::Parse(
                    "field `costs` is required with `budget`".into(),
                ))
            }
        };
        Ok(Instance { valuation, costs })
    }
}

impl Instance {
    pub fn to_file(&self) -> InstanceFile {
        let mut file = InstanceFile {
            m: self.valuation.ground_size(),
            kind: Kind::Additive,
            weights: None,
            clauses: None,
            table: None,
            universe: None,
            covers: None,
            costs: self.costs.as_ref().map(|c| nums(c.costs())),
            budget: self.costs.as_ref().map(|c| Num(c.budget().clone())),
        };
        match &self.valuation {
            Valuation::Additive(v) => file.weights = Some(nums(v.weights())),
            Valuation::Xos(v) => {
                file.kind = Kind::Xos;
                file.clauses = Some(v.clauses().iter().map(|c| nums(c)).collect());
            }
            Valuation::Table(v) => {
                file.kind = Kind::Table;
                file.table = Some(nums(v.entries()));
            }
            Valuation::Coverage(v) => {
                file.kind = Kind::Coverage;
                file.universe = Some(nums(v.element_weights()));
                file.covers = Some(v.covers().to_vec());
            }
        }
        file
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    /// Canonical file text: one top-level field per line, each value
    /// compact, fields in schema order, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self.to_file()).expect("instance serializes");
        let serde_json::Value::Object(fields) = value else {
            unreachable!("instance files are objects")
        };
        let lines: Vec<String> = fields
            .iter()
            .map(|(key, value)| format!("  {}: {}", serde_json::Value::from(key.as_str()), value))
            .collect();
        format!("{{\n{}\n}}\n", lines.join(",\n"))
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        let mut de = serde_json::Deserializer::from_str(text);
        let file: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            match path.as_str() {
                "." | "" => Error::Parse(e.into_inner().to_string()),
                _ => Error::Parse(format!("field `{path}`: {}", e.into_inner())),
            }
        })?;
        de.end().map_err(|e| Error::Parse(e.to_string()))?;
        file.into_instance()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{add3, xos3};
    use crate::rational::{int, ratio};

    #[test]
    fn parses_all_kinds() {
        let add = Instance::from_json(
            r#"{"m":3,"kind":"additive","weights":[3,1,2],"costs":[2,1,3],"budget":3}"#,
        )
        .unwrap();
        assert_eq!(add.valuation, add3());
        assert_eq!(add.costs.unwrap().budget(), &int(3));

        let xos =
            Instance::from_json(r#"{"m":3,"kind":"xos","clauses":[[1,1,0],[0,0,1]]}"#).unwrap();
        assert_eq!(xos.valuation, xos3());

        let table = Instance::from_json(r#"{"m":1,"kind":"table","table":[0,"1/2"]}"#).unwrap();
        match table.valuation {
            Valuation::Table(t) => assert_eq!(t.entries()[1], ratio(1, 2)),
            other => panic!("unexpected {other:?}"),
        }

        let cov = Instance::from_json(
            r#"{"m":2,"kind":"coverage","universe":[1,2],"covers":[[0],[0,1]]}"#,
        )
        .unwrap();
        assert_eq!(cov.valuation.kind(), "coverage");
    }

    fn parse_err(text: &str) -> String {
        match Instance::from_json(text).unwrap_err() {
            Error::Parse(msg) => msg,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics_name_the_field() {
        assert!(parse_err(r#"{"m":3,"kind":"additive","weights":[3,1]}"#).contains("`weights`"));
        assert!(parse_err(r#"{"m":3,"kind":"additive"}"#).contains("`weights`"));
        assert!(parse_err(r#"{"m":2,"kind":"table","table":[1,0,0,0]}"#).contains("`table`"));
        assert!(parse_err(r#"{"m":2,"kind":"xos","clauses":[[1,2],[1]]}"#).contains("clauses[1]"));
        assert!(parse_err(r#"{"m":1,"kind":"additive","weights":[1.5]}"#).contains("not exact"));
        assert!(
            parse_err(r#"{"m":1,"kind":"additive","weights":[1],"costs":[1]}"#)
                .contains("`budget`")
        );
        assert!(
            parse_err(r#"{"m":1,"kind":"additive","weights":[1],"table":[0,1]}"#)
                .contains("`table`")
        );
        assert!(parse_err(r#"{"m":1,"kind":"cube"}"#).contains("unknown variant"));
        assert!(parse_err(r#"{"m":1,"kind":"additive","weights":["1/0"]}"#)
            .contains("invalid rational"));
    }

    #[test]
    fn serializes_exact_numbers() {
        let inst =
            Instance::from_json(r#"{"m":2,"kind":"additive","weights":["5/2", 3]}"#).unwrap();
        let text = inst.to_json();
        assert!(text.contains("\"5/2\""));
        assert!(text.contains("3"));
        assert_eq!(Instance::from_json(&text).unwrap(), inst);
    }
}
