//! JSON form of model presentations.
//!
//! ```json
//! {
//!   "signature": {"constants": ["a"], "functions": ["f"], "predicates": ["p"]},
//!   "extra_components": [{"type": "nonroot", "prefix": [], "period": ["f"], "count": 1}],
//!   "predicates": {"p": "0 0 (b1* | 1 1*)"}
//! }
//! ```

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{Component, ModelError, ModelPresentation};
use crate::automata::Regex;
use crate::syntax::Signature;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SignatureFile {
    #[serde(default)]
    pub constants: Vec<String>,
    #[serde(default)]
    pub functions: Vec<String>,
    #[serde(default)]
    pub predicates: Vec<String>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ComponentFile {
    Root {
        #[serde(default = "one")]
        count: usize,
    },
    Nonroot {
        #[serde(default)]
        prefix: Vec<String>,
        period: Vec<String>,
        #[serde(default = "one")]
        count: usize,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    signature: SignatureFile,
    #[serde(default)]
    extra_components: Vec<ComponentFile>,
    #[serde(default)]
    predicates: IndexMap<String, String>,
}

impl SignatureFile {
    pub fn from_signature(sig: &Signature) -> Self {
        SignatureFile {
            constants: sig.constants.clone(),
            functions: sig.functions.clone(),
            predicates: sig.predicates.clone(),
        }
    }
}

pub fn from_json(text: &str) -> Result<ModelPresentation, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
    let s = file.signature;
    let sig = Signature::new(s.constants, s.functions, s.predicates)?;
    let func = |name: &String| {
        sig.function_index(name)
            .ok_or_else(|| ModelError::UnknownFunction(name.clone()))
    };
    let mut extra = Vec::new();
    for c in &file.extra_components {
        extra.push(match c {
            ComponentFile::Root { count } => (Component::Root, *count),
            ComponentFile::Nonroot { prefix, period, count } => (
                Component::NonRoot {
                    prefix: prefix.iter().map(func).collect::<Result<_, _>>()?,
                    period: period.iter().map(func).collect::<Result<_, _>>()?,
                },
                *count,
            ),
        });
    }
    if let Some(name) = file.predicates.keys().find(|name| sig.predicate_index(name).is_none()) {
        return Err(ModelError::UnknownPredicate(name.clone()));
    }
    let mut predicates = Vec::with_capacity(sig.m());
    for name in &sig.predicates {
        let text = file
            .predicates
            .get(name)
            .ok_or_else(|| ModelError::MissingPredicate(name.clone()))?;
        let r = Regex::parse(text, sig.n()).map_err(|source| ModelError::Regex {
            name: name.clone(),
            source,
        })?;
        predicates.push(r);
    }
    ModelPresentation::new(sig, extra, predicates)
}

/// Pretty-printed JSON with fields in canonical order.
pub fn to_json(m: &ModelPresentation) -> String {
    serde_json::to_string_pretty(&to_value(m)).expect("serializable")
}

pub(crate) fn to_value(m: &ModelPresentation) -> serde_json::Value {
    let sig = m.sig();
    let fname = |i: &usize| sig.functions[*i].clone();
    let file = ModelFile {
        signature: SignatureFile::from_signature(sig),
        extra_components: m
            .extra()
            .iter()
            .map(|(c, count)| match c {
                Component::Root => ComponentFile::Root { count: *count },
                Component::NonRoot { prefix, period } => ComponentFile::Nonroot {
                    prefix: prefix.iter().map(fname).collect(),
                    period: period.iter().map(fname).collect(),
                    count: *count,
                },
            })
            .collect(),
        predicates: sig
            .predicates
            .iter()
            .cloned()
            .zip(m.predicates().iter().map(|r| r.to_string()))
            .collect(),
    };
    serde_json::to_value(file).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z_CHAIN: &str = r#"{
  "signature": {
    "constants": [
      "a"
    ],
    "functions": [
      "f"
    ],
    "predicates": [
      "p"
    ]
  },
  "extra_components": [
    {
      "type": "nonroot",
      "prefix": [],
      "period": [
        "f"
      ],
      "count": 1
    }
  ],
  "predicates": {
    "p": "0 0 (b1* | 1 1*)"
  }
}"#;

    #[test]
    fn round_trip() {
        let m = from_json(Z_CHAIN).unwrap();
        assert_eq!(m.extra(), &[(Component::nonroot(vec![], vec![0]), 1)]);
        assert_eq!(to_json(&m), Z_CHAIN);
        assert_eq!(from_json(&to_json(&m)).unwrap(), m);
    }

    #[test]
    fn defaults_and_errors() {
        let m = from_json(r#"{"signature": {"constants": ["a"]}, "extra_components": [{"type": "root"}]}"#).unwrap();
        assert_eq!(m.extra(), &[(Component::Root, 1)]);
        assert!(matches!(from_json("{"), Err(ModelError::Format(_))));
        assert!(matches!(
            from_json(r#"{"signature": {"constants": ["a"], "predicates": ["p"]}}"#),
            Err(ModelError::MissingPredicate(_))
        ));
        assert!(matches!(
            from_json(r#"{"signature": {"constants": ["a"], "functions": ["f"]}, "extra_components": [{"type": "nonroot", "period": ["g"]}]}"#),
            Err(ModelError::UnknownFunction(_))
        ));
        assert!(matches!(
            from_json(r#"{"signature": {"constants": ["a"], "predicates": ["p"]}, "predicates": {"p": "2"}}"#),
            Err(ModelError::Regex { .. })
        ));
    }
}
