//! JSON ingestion and serialization of the two input kinds, discriminated by
//! a top-level `"type"` field.

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cyclotomic::{self, CycNum};
use crate::error::{Error, Result};
use crate::fusion_ring::{FusionRing, FusionRingJson};
use crate::metric_groups::{MetricGroup, MetricGroupJson};
use crate::premodular::{CycMatrix, PremodularData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Datum {
    Premodular(PremodularData),
    MetricGroup(MetricGroup),
}

impl Datum {
    pub fn type_name(&self) -> &'static str {
        match self {
            Datum::Premodular(_) => "premodular",
            Datum::MetricGroup(_) => "metric_group",
        }
    }

    /// The premodular datum, converting metric groups.
    pub fn to_premodular(&self) -> PremodularData {
        match self {
            Datum::Premodular(d) => d.clone(),
            Datum::MetricGroup(g) => g.to_premodular(),
        }
    }

    pub fn validate(&self) -> Vec<crate::violation::Violation> {
        match self {
            Datum::Premodular(d) => d.validate(),
            Datum::MetricGroup(g) => g.validate(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PremodularJson {
    #[serde(flatten)]
    ring: FusionRingJson,
    conductor: u32,
    dims: Vec<CycNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twists: Option<Vec<CycNum>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta_exp: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<CycMatrix>,
}

fn premodular_to_json(d: &PremodularData) -> PremodularJson {
    PremodularJson {
        ring: FusionRingJson::from(d.ring()),
        conductor: d.conductor(),
        dims: d.dims().to_vec(),
        twists: Some(d.twists().to_vec()),
        theta_exp: None,
        s: Some(d.s_matrix().clone()),
    }
}

fn premodular_from_json(raw: PremodularJson) -> Result<PremodularData> {
    let ring = FusionRing::try_from(raw.ring)?;
    let twists = match (raw.twists, raw.theta_exp) {
        (Some(t), None) => t,
        (None, Some(exps)) => exps
            .iter()
            .map(|[p, q]| {
                let r = cyclotomic::parse_rational(&format!("{p}/{q}"))?;
                let q: u32 = r
                    .denom()
                    .try_into()
                    .map_err(|_| Error::Parse(format!("theta exponent denominator too large: {r}")))?;
                let p: i64 = r
                    .numer()
                    .mod_floor(&BigInt::from(q))
                    .try_into()
                    .map_err(|_| Error::Parse("theta exponent out of range".into()))?;
                Ok(CycNum::root(p, q))
            })
            .collect::<Result<_>>()?,
        (Some(_), Some(_)) => return Err(Error::Parse("give either `twists` or `theta_exp`, not both".into())),
        (None, None) => return Err(Error::Parse("missing `twists` (or `theta_exp`)".into())),
    };
    PremodularData::from_parts(ring, raw.conductor, raw.dims, twists, raw.s)
}

/// The JSON value of a datum, with the `"type"` field first.
pub fn datum_to_value(d: &Datum) -> Value {
    let body = match d {
        Datum::Premodular(p) => serde_json::to_value(premodular_to_json(p)),
        Datum::MetricGroup(g) => serde_json::to_value(MetricGroupJson::from(g)),
    }
    .expect("datum serializes");
    let mut out = serde_json::Map::new();
    out.insert("type".into(), Value::String(d.type_name().into()));
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

pub fn serialize_datum(d: &Datum) -> String {
    serde_json::to_string_pretty(&datum_to_value(d)).expect("datum serializes")
}

/// Parse without running the axiom checks (shape problems are still errors).
pub fn parse_datum_unchecked(text: &str) -> Result<Datum> {
    let mut value: Value = serde_json::from_str(text)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Parse("top level must be a JSON object".into()))?;
    let kind = obj
        .remove("type")
        .ok_or_else(|| Error::Parse("missing `type` field".into()))?;
    match kind.as_str() {
        Some("premodular") => {
            let raw: PremodularJson = serde_json::from_value(value)?;
            Ok(Datum::Premodular(premodular_from_json(raw)?))
        }
        Some("metric_group") => {
            let raw: MetricGroupJson = serde_json::from_value(value)?;
            Ok(Datum::MetricGroup(MetricGroup::try_from(raw)?))
        }
        _ => Err(Error::Parse(format!(
            "`type` must be \"premodular\" or \"metric_group\", got {kind}"
        ))),
    }
}

/// Parse and validate.
pub fn parse_datum(text: &str) -> Result<Datum> {
    let d = parse_datum_unchecked(text)?;
    let violations = d.validate();
    if violations.is_empty() {
        Ok(d)
    } else {
        Err(Error::Validation(violations))
    }
}

pub fn load_datum(path: impl AsRef<Path>) -> Result<Datum> {
    parse_datum(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::violation::Violation;

    #[test]
    fn catalog_round_trip() {
        for e in catalog::all_entries() {
            let text = serialize_datum(&e.payload);
            assert_eq!(parse_datum(&text).unwrap(), e.payload, "{}", e.name);
        }
    }

    #[test]
    fn forced_dimension_violation() {
        let svec = catalog::catalog_get("svec").unwrap().payload.to_premodular();
        let mut v = datum_to_value(&Datum::Premodular(svec));
        v["dims"][1] = serde_json::json!({"n": 1, "c": [["2", "1"]]});
        v.as_object_mut().unwrap().remove("s");
        let err = parse_datum(&v.to_string()).unwrap_err();
        let Error::Validation(list) = err else { panic!("{err:?}") };
        assert!(list.iter().any(|x| matches!(x, Violation::DimensionCharacterViolation { .. })));
    }

    #[test]
    fn metric_group_file() {
        let text = r#"{"type":"metric_group","orders":[4],"q":{"(0)":"0/1","(1)":"1/8","(2)":"1/2","(3)":"1/8"}}"#;
        let Datum::MetricGroup(g) = parse_datum(text).unwrap() else { panic!() };
        assert_eq!(g.orders(), &[4]);
        assert_eq!(g.signature_mod8(), Some(1));
    }

    #[test]
    fn theta_exponents() {
        let text = r#"{"type":"premodular","labels":["1","s"],"unit":0,"dual":[0,1],
            "fusion":[[0,0,0,1],[0,1,1,1],[1,0,1,1],[1,1,0,1]],
            "conductor":4,"dims":[{"n":1,"c":[["1","1"]]},{"n":1,"c":[["1","1"]]}],
            "theta_exp":[["0","1"],["1","4"]]}"#;
        let Datum::Premodular(d) = parse_datum(text).unwrap() else { panic!() };
        assert_eq!(d.twists()[1], CycNum::root(1, 4));
        assert_eq!(d.classify_degeneracy().kind, crate::premodular::DegeneracyKind::Nondegenerate);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_datum("[1]"), Err(Error::Parse(_))));
        assert!(matches!(parse_datum("{\"type\":\"x\"}"), Err(Error::Parse(_))));
        assert!(matches!(parse_datum("not json"), Err(Error::Parse(_))));
    }
}
