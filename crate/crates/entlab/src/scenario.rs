//! JSON formats: scenario inputs, verdicts, and report serialization.
//!
//! Rationals travel as `"p/q"` strings. Joints are nested arrays in
//! row-major (x-major) order: `joint[x][z]`. Distinguishers come as
//! `{"kind":"table",...}`, `{"kind":"dsl",...}`, or `{"kind":"combo",...}`;
//! classes as an explicit list, inline DSL text (one circuit per line), or
//! an enumeration spec. serde_json's default map is ordered, so serialized
//! reports are canonical byte-for-byte.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circuit::{enumerate_class, Circuit, EnumSpec, GateKind, ALL_GATES};
use crate::dist::{Dist, Domain, EntropyParams, Joint};
use crate::distinguisher::{close_under_complement, Distinguisher, Kind};
use crate::entropy::{EntropyVerdict, Witness};
use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, Rat};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<u32>,
    /// Row-major (x-major): `joint[x][z]`, entries "p/q".
    pub joint: Vec<Vec<String>>,
    /// Optional second joint (same shape) for pairwise notions; must share
    /// the Z-marginal with `joint`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint_y: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassSpecFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsFile>,
    /// Reduction-specific knobs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguisher: Option<DistinguisherFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumption: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_size: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler_size: Option<i64>,
    /// Output bits of a function for the tightness demo, as DSL text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsFile {
    /// Either gamma as "p/q" or k as an integer (gamma = 2^-k).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub epsilon: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_budget: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassSpecFile {
    pub kind: String, // "list" | "dsl" | "enumerate"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<DistinguisherFile>>,
    /// DSL text, one circuit per line, '#' comments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// Path to a .dsl file (alternative to inline source).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement_close: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistinguisherFile {
    pub kind: String, // "table" | "dsl" | "combo"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boolean: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<ComboPartFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComboPartFile {
    pub weight: String,
    #[serde(flatten)]
    pub part: DistinguisherFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerFile {
    /// `conditionals[z][x]` as "p/q".
    pub conditionals: Vec<Vec<String>>,
    #[serde(default)]
    pub declared_size: u64,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scenario(format!("bad JSON: {e}")))
    }

    pub fn m_bits(&self) -> Result<u32> {
        match (self.m, self.m1, self.m2) {
            (Some(m), None, None) => Ok(m),
            (None, Some(m1), Some(m2)) => Ok(m1 + m2),
            (None, None, None) => Ok(0),
            _ => Err(Error::Scenario(
                "give either m or the pair m1/m2, not both".into(),
            )),
        }
    }

    pub fn joint(&self) -> Result<Joint> {
        self.build_joint(&self.joint)
    }

    /// The optional second joint for pairwise notions.
    pub fn joint_y(&self) -> Result<Option<Joint>> {
        match &self.joint_y {
            None => Ok(None),
            Some(rows) => Ok(Some(self.build_joint(rows)?)),
        }
    }

    fn build_joint(&self, rows: &[Vec<String>]) -> Result<Joint> {
        let m = self.m_bits()?;
        let x_domain = Domain::new(self.n)?;
        let z_domain = Domain::new(m)?;
        if rows.len() != x_domain.size() {
            return Err(Error::Scenario(format!(
                "joint needs {} rows (one per x), got {}",
                x_domain.size(),
                rows.len()
            )));
        }
        let mut probs = Vec::with_capacity(x_domain.size() * z_domain.size());
        for row in rows {
            if row.len() != z_domain.size() {
                return Err(Error::Scenario(format!(
                    "joint rows need {} entries (one per z), got {}",
                    z_domain.size(),
                    row.len()
                )));
            }
            for cell in row {
                probs.push(parse_rat(cell)?);
            }
        }
        Joint::new(x_domain, z_domain, probs)
    }

    pub fn params(&self) -> Result<EntropyParams> {
        let p = self
            .params
            .as_ref()
            .ok_or_else(|| Error::Scenario("missing params".into()))?;
        let gamma = match (&p.gamma, p.k) {
            (Some(g), None) => parse_rat(g)?,
            (None, Some(k)) => crate::rat::pow2_inv(k),
            _ => {
                return Err(Error::Scenario(
                    "params need exactly one of gamma or k".into(),
                ))
            }
        };
        EntropyParams::new(gamma, parse_rat(&p.epsilon)?, p.size_budget)
    }

    pub fn class(&self) -> Result<Vec<Distinguisher>> {
        let spec = self
            .class
            .as_ref()
            .ok_or_else(|| Error::Scenario("missing class".into()))?;
        let m = self.m_bits()?;
        build_class(spec, self.n, m)
    }

    pub fn single_distinguisher(&self) -> Result<Distinguisher> {
        let spec = self
            .distinguisher
            .as_ref()
            .ok_or_else(|| Error::Scenario("missing distinguisher".into()))?;
        build_distinguisher(spec, self.n, self.m_bits()?)
    }
}

pub fn build_distinguisher(
    spec: &DistinguisherFile,
    n: u32,
    m: u32,
) -> Result<Distinguisher> {
    match spec.kind.as_str() {
        "table" => {
            let raw = spec
                .values
                .as_ref()
                .ok_or_else(|| Error::Scenario("table kind needs values".into()))?;
            let values: Vec<Rat> = raw.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?;
            let boolean = spec.boolean.unwrap_or_else(|| {
                values
                    .iter()
                    .all(|v| v == &crate::rat::rat_zero() || v == &crate::rat::rat_one())
            });
            Distinguisher::from_table(
                n,
                m,
                values,
                if boolean { Kind::Boolean } else { Kind::Real },
                spec.size.unwrap_or(0),
            )
        }
        "dsl" => {
            let src = spec
                .source
                .as_ref()
                .ok_or_else(|| Error::Scenario("dsl kind needs source".into()))?;
            let c = Circuit::parse_with_arity(src, n, m)?;
            Ok(Distinguisher::from_circuit(&c))
        }
        "combo" => {
            let parts = spec
                .parts
                .as_ref()
                .ok_or_else(|| Error::Scenario("combo kind needs parts".into()))?;
            let built: Vec<(Rat, Distinguisher)> = parts
                .iter()
                .map(|p| Ok((parse_rat(&p.weight)?, build_distinguisher(&p.part, n, m)?)))
                .collect::<Result<_>>()?;
            Distinguisher::convex_combine(&built)
        }
        other => Err(Error::Scenario(format!("unknown distinguisher kind {other:?}"))),
    }
}

pub fn build_class(spec: &ClassSpecFile, n: u32, m: u32) -> Result<Vec<Distinguisher>> {
    let mut class = match spec.kind.as_str() {
        "list" => {
            let members = spec
                .members
                .as_ref()
                .ok_or_else(|| Error::Scenario("list kind needs members".into()))?;
            members
                .iter()
                .map(|d| build_distinguisher(d, n, m))
                .collect::<Result<Vec<_>>>()?
        }
        "dsl" => {
            let text = match (&spec.source, &spec.path) {
                (Some(s), None) => s.clone(),
                (None, Some(p)) => std::fs::read_to_string(p)
                    .map_err(|e| Error::Scenario(format!("cannot read {p}: {e}")))?,
                _ => {
                    return Err(Error::Scenario(
                        "dsl kind needs exactly one of source or path".into(),
                    ))
                }
            };
            Circuit::parse_dsl_file(&text, n, m)?
                .iter()
                .map(Distinguisher::from_circuit)
                .collect()
        }
        "enumerate" => {
            let gates = match &spec.gates {
                None => ALL_GATES.to_vec(),
                Some(names) => names
                    .iter()
                    .map(|g| match g.as_str() {
                        "not" => Ok(GateKind::Not),
                        "and" => Ok(GateKind::And),
                        "or" => Ok(GateKind::Or),
                        "xor" => Ok(GateKind::Xor),
                        "maj" => Ok(GateKind::Maj),
                        other => Err(Error::Scenario(format!("unknown gate {other:?}"))),
                    })
                    .collect::<Result<_>>()?,
            };
            let enum_spec = EnumSpec {
                gates,
                max_size: spec
                    .max_size
                    .ok_or_else(|| Error::Scenario("enumerate needs max_size".into()))?,
                n_x: n,
                m_z: m,
                dedup: spec.dedup.unwrap_or(true),
            };
            enumerate_class(&enum_spec)?
                .iter()
                .map(Distinguisher::from_circuit)
                .collect()
        }
        other => return Err(Error::Scenario(format!("unknown class kind {other:?}"))),
    };
    if spec.complement_close.unwrap_or(false) {
        class = close_under_complement(class);
    }
    Ok(class)
}

/// Canonical JSON for a joint, row-major.
pub fn joint_to_json(j: &Joint) -> Value {
    let zs = j.z_domain().size();
    let rows: Vec<Value> = (0..j.x_domain().size())
        .map(|x| {
            Value::Array(
                (0..zs)
                    .map(|z| Value::String(format_rat(j.prob(x, z))))
                    .collect(),
            )
        })
        .collect();
    json!({
        "n": j.x_domain().bits(),
        "m": j.z_domain().bits(),
        "joint": rows,
    })
}

pub fn dist_to_json(d: &Dist) -> Value {
    json!({
        "n": d.domain().bits(),
        "probs": d.probs().iter().map(|p| Value::String(format_rat(p))).collect::<Vec<_>>(),
    })
}

pub fn verdict_to_json(v: &EntropyVerdict) -> Value {
    let witness = match &v.witness {
        None => Value::Null,
        Some(Witness::FailingDistinguisher { index, violation }) => json!({
            "kind": "failing-distinguisher",
            "index": index,
            "violation": format_rat(violation),
        }),
        Some(Witness::WitnessJoint(j)) => json!({
            "kind": "witness-joint",
            "joint": joint_to_json(j),
        }),
        Some(Witness::Budget(b)) => json!({
            "kind": "budget",
            "caps": b.caps.iter().map(|c| Value::String(format_rat(c))).collect::<Vec<_>>(),
            "eps": b.eps.as_ref().map(|e| {
                e.iter().map(|x| Value::String(format_rat(x))).collect::<Vec<_>>()
            }),
        }),
    };
    json!({
        "notion": v.notion.as_str(),
        "holds": v.holds,
        "gamma": format_rat(&v.params.gamma),
        "epsilon": format_rat(&v.params.epsilon),
        "display_k": v.params.display_k(),
        "witness": witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn scenario_round_trip() {
        let text = r#"{
            "n": 1, "m": 1,
            "joint": [["1/4", "1/4"], ["1/4", "1/4"]],
            "class": {"kind": "dsl", "source": "x0\nand(x0, z0)"},
            "params": {"k": 1, "epsilon": "1/8"}
        }"#;
        let sc = ScenarioFile::from_json(text).unwrap();
        let j = sc.joint().unwrap();
        assert_eq!(j.z_mass(0), rat(1, 2));
        let class = sc.class().unwrap();
        assert_eq!(class.len(), 2);
        let p = sc.params().unwrap();
        assert_eq!(p.gamma, rat(1, 2));
    }

    #[test]
    fn joint_shape_validation() {
        let text = r#"{"n": 1, "m": 1, "joint": [["1/2", "1/2"]]}"#;
        let sc = ScenarioFile::from_json(text).unwrap();
        assert!(matches!(sc.joint(), Err(Error::Scenario(_))));
        let text = r#"{"n": 1, "joint": [["2/3"], ["1/2"]]}"#;
        let sc = ScenarioFile::from_json(text).unwrap();
        assert!(sc.joint().is_err()); // mass not 1
    }

    #[test]
    fn split_z_domain() {
        let text = r#"{"n": 1, "m1": 1, "m2": 1,
            "joint": [["1/8","1/8","1/8","1/8"],["1/8","1/8","1/8","1/8"]]}"#;
        let sc = ScenarioFile::from_json(text).unwrap();
        assert_eq!(sc.m_bits().unwrap(), 2);
        assert!(sc.joint().is_ok());
    }

    #[test]
    fn distinguisher_kinds() {
        let table = DistinguisherFile {
            kind: "table".into(),
            values: Some(vec!["1".into(), "0".into(), "1/2".into(), "0".into()]),
            boolean: None,
            source: None,
            parts: None,
            size: Some(3),
        };
        let d = build_distinguisher(&table, 1, 1).unwrap();
        assert_eq!(d.kind(), Kind::Real);
        assert_eq!(d.size(), 3);

        let combo = DistinguisherFile {
            kind: "combo".into(),
            values: None,
            boolean: None,
            source: None,
            parts: Some(vec![
                ComboPartFile {
                    weight: "1/2".into(),
                    part: DistinguisherFile {
                        kind: "dsl".into(),
                        values: None,
                        boolean: None,
                        source: Some("x0".into()),
                        parts: None,
                        size: None,
                    },
                },
                ComboPartFile {
                    weight: "1/2".into(),
                    part: DistinguisherFile {
                        kind: "dsl".into(),
                        values: None,
                        boolean: None,
                        source: Some("not(x0)".into()),
                        parts: None,
                        size: None,
                    },
                },
            ]),
            size: None,
        };
        let d = build_distinguisher(&combo, 1, 1).unwrap();
        assert!(d.values().iter().all(|v| v == &rat(1, 2)));
    }

    #[test]
    fn enumerate_class_spec() {
        let spec = ClassSpecFile {
            kind: "enumerate".into(),
            members: None,
            source: None,
            path: None,
            max_size: Some(1),
            gates: Some(vec!["not".into(), "and".into()]),
            dedup: Some(true),
            complement_close: Some(true),
        };
        let class = build_class(&spec, 1, 1).unwrap();
        assert!(crate::distinguisher::complement_closed(&class));
    }

    #[test]
    fn canonical_json_is_stable() {
        let j = Joint::new(
            Domain::new(1).unwrap(),
            Domain::new(0).unwrap(),
            vec![rat(1, 2), rat(1, 2)],
        )
        .unwrap();
        let a = serde_json::to_string(&joint_to_json(&j)).unwrap();
        let b = serde_json::to_string(&joint_to_json(&j)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"1/2\""));
    }
}
