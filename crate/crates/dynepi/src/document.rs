//! JSON model documents.
//!
//! ```json
//! {
//!   "agents": ["a", "b"],
//!   "attributes": [{"name": "x", "domain": [1, 2]}],
//!   "worlds": [{"id": "w1", "labels": {"x": 1}}, {"id": "w2", "labels": {"x": 2}}],
//!   "relations": {
//!     "a": {"kind": "partition", "classes": [["w1", "w2"]]},
//!     "b": {"kind": "pairs", "pairs": [["w1", "w1"]]}
//!   }
//! }
//! ```
//!
//! Pair relations get their reflexive closure for free but must already be
//! symmetric and transitive.

use std::collections::{BTreeMap, BTreeSet};

use dynepi_core::{KripkeModel, ModelError, Value, World};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("agent `{0}` has no relation")]
    MissingRelation(String),
    #[error("relation given for undeclared agent `{0}`")]
    UndeclaredAgent(String),
    #[error("world `{world}` uses undeclared attribute `{attribute}`")]
    UndeclaredAttribute { world: String, attribute: String },
    #[error("world `{world}`: {attribute} = {value} is outside the declared domain")]
    OutsideDomain {
        world: String,
        attribute: String,
        value: String,
    },
    #[error("agent `{agent}`: relation names unknown world `{world}`")]
    UnknownWorld { agent: String, world: String },
    #[error(
        "agent `{agent}`: pair ({from}, {to}) present but ({to}, {from}) missing (not symmetric)"
    )]
    NotSymmetric {
        agent: String,
        from: String,
        to: String,
    },
    #[error("agent `{agent}`: pairs ({from}, {via}) and ({via}, {to}) present but ({from}, {to}) missing (not transitive)")]
    NotTransitive {
        agent: String,
        from: String,
        via: String,
        to: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DocValue {
    Int(i64),
    Str(String),
}

impl From<&Value> for DocValue {
    fn from(v: &Value) -> Self {
        match v {
            Value::Int(i) => DocValue::Int(*i),
            Value::Str(s) => DocValue::Str(s.clone()),
        }
    }
}

impl From<DocValue> for Value {
    fn from(v: DocValue) -> Self {
        match v {
            DocValue::Int(i) => Value::Int(i),
            DocValue::Str(s) => Value::Str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeDecl {
    pub name: String,
    pub domain: Vec<DocValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldDoc {
    pub id: String,
    pub labels: BTreeMap<String, DocValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RelationDoc {
    Partition { classes: Vec<Vec<String>> },
    Pairs { pairs: Vec<(String, String)> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub agents: Vec<String>,
    pub attributes: Vec<AttributeDecl>,
    pub worlds: Vec<WorldDoc>,
    pub relations: BTreeMap<String, RelationDoc>,
}

impl ModelDocument {
    pub fn parse(bytes: &[u8]) -> Result<Self, DocumentError> {
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Describes `model` with partition relations and the value domains that
    /// actually occur, in order of first appearance.
    pub fn from_model(model: &KripkeModel) -> Self {
        let attributes = model
            .attributes()
            .iter()
            .map(|name| {
                let mut domain: Vec<DocValue> = Vec::new();
                for w in model.worlds() {
                    let v = DocValue::from(&w.labels[name.as_str()]);
                    if !domain.contains(&v) {
                        domain.push(v);
                    }
                }
                AttributeDecl {
                    name: name.clone(),
                    domain,
                }
            })
            .collect();
        let worlds = model
            .worlds()
            .iter()
            .map(|w| WorldDoc {
                id: w.id.clone(),
                labels: w
                    .labels
                    .iter()
                    .map(|(k, v)| (k.clone(), v.into()))
                    .collect(),
            })
            .collect();
        let relations = model
            .agents()
            .iter()
            .map(|a| {
                let classes = model
                    .classes(a)
                    .expect("own agent")
                    .into_iter()
                    .map(|c| c.into_iter().map(String::from).collect())
                    .collect();
                (a.clone(), RelationDoc::Partition { classes })
            })
            .collect();
        ModelDocument {
            agents: model.agents().to_vec(),
            attributes,
            worlds,
            relations,
        }
    }

    pub fn to_model(&self) -> Result<KripkeModel, DocumentError> {
        let domains: BTreeMap<&str, &Vec<DocValue>> = self
            .attributes
            .iter()
            .map(|a| (a.name.as_str(), &a.domain))
            .collect();
        for w in &self.worlds {
            for (attr, value) in &w.labels {
                let domain = domains.get(attr.as_str()).ok_or_else(|| {
                    DocumentError::UndeclaredAttribute {
                        world: w.id.clone(),
                        attribute: attr.clone(),
                    }
                })?;
                if !domain.contains(value) {
                    return Err(DocumentError::OutsideDomain {
                        world: w.id.clone(),
                        attribute: attr.clone(),
                        value: Value::from(value.clone()).to_string(),
                    });
                }
            }
        }
        for agent in self.relations.keys() {
            if !self.agents.contains(agent) {
                return Err(DocumentError::UndeclaredAgent(agent.clone()));
            }
        }
        let ids: BTreeSet<&str> = self.worlds.iter().map(|w| w.id.as_str()).collect();
        let mut partitions = Vec::with_capacity(self.agents.len());
        for agent in &self.agents {
            let relation = self
                .relations
                .get(agent)
                .ok_or_else(|| DocumentError::MissingRelation(agent.clone()))?;
            let classes = match relation {
                RelationDoc::Partition { classes } => {
                    for id in classes.iter().flatten() {
                        if !ids.contains(id.as_str()) {
                            return Err(DocumentError::UnknownWorld {
                                agent: agent.clone(),
                                world: id.clone(),
                            });
                        }
                    }
                    classes.clone()
                }
                RelationDoc::Pairs { pairs } => pairs_to_classes(agent, &self.worlds, &ids, pairs)?,
            };
            partitions.push(classes);
        }
        let worlds = self
            .worlds
            .iter()
            .map(|w| World {
                id: w.id.clone(),
                labels: w
                    .labels
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::from(v.clone())))
                    .collect(),
            })
            .collect();
        Ok(KripkeModel::new(self.agents.clone(), worlds, partitions)?)
    }
}

/// Checks that `pairs`, closed under reflexivity, is an equivalence relation
/// and returns its classes in world order.
fn pairs_to_classes(
    agent: &str,
    worlds: &[WorldDoc],
    ids: &BTreeSet<&str>,
    pairs: &[(String, String)],
) -> Result<Vec<Vec<String>>, DocumentError> {
    let mut related: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (a, b) in pairs {
        for w in [a, b] {
            if !ids.contains(w.as_str()) {
                return Err(DocumentError::UnknownWorld {
                    agent: agent.into(),
                    world: w.clone(),
                });
            }
        }
        if a != b {
            related.entry(a).or_default().insert(b);
        }
    }
    for (a, b) in pairs {
        if a != b
            && !related
                .get(b.as_str())
                .is_some_and(|s| s.contains(a.as_str()))
        {
            return Err(DocumentError::NotSymmetric {
                agent: agent.into(),
                from: a.clone(),
                to: b.clone(),
            });
        }
    }
    for (&a, succ) in &related {
        for &b in succ {
            for &c in related.get(b).into_iter().flatten() {
                if c != a && !succ.contains(c) {
                    return Err(DocumentError::NotTransitive {
                        agent: agent.into(),
                        from: a.into(),
                        via: b.into(),
                        to: c.into(),
                    });
                }
            }
        }
    }
    // transitive and symmetric: a world's class is itself plus its neighbours
    let mut assigned: BTreeSet<&str> = BTreeSet::new();
    let mut classes = Vec::new();
    for w in worlds {
        let id = w.id.as_str();
        if assigned.contains(id) {
            continue;
        }
        let mut class = vec![w.id.clone()];
        assigned.insert(id);
        for other in worlds {
            let o = other.id.as_str();
            if !assigned.contains(o) && related.get(id).is_some_and(|s| s.contains(o)) {
                assigned.insert(o);
                class.push(other.id.clone());
            }
        }
        classes.push(class);
    }
    Ok(classes)
}

/// Parses and validates a model document.
pub fn load_model(bytes: &[u8]) -> Result<KripkeModel, DocumentError> {
    ModelDocument::parse(bytes)?.to_model()
}

/// Pretty-printed JSON document for `model`, newline terminated.
pub fn save_model(model: &KripkeModel) -> String {
    let mut s = serde_json::to_string_pretty(&ModelDocument::from_model(model))
        .expect("documents always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynepi_core::puzzles;

    fn doc(relations: &str) -> String {
        format!(
            r#"{{"agents": ["a"],
                "attributes": [{{"name": "x", "domain": [1, 2, 3]}}],
                "worlds": [{{"id": "w1", "labels": {{"x": 1}}}},
                           {{"id": "w2", "labels": {{"x": 2}}}},
                           {{"id": "w3", "labels": {{"x": 3}}}}],
                "relations": {{"a": {relations}}}}}"#
        )
    }

    #[test]
    fn pairs_form_builds_classes() {
        let m =
            load_model(doc(r#"{"kind": "pairs", "pairs": [["w1","w2"],["w2","w1"]]}"#).as_bytes())
                .unwrap();
        assert_eq!(m.classes("a").unwrap(), vec![vec!["w1", "w2"], vec!["w3"]]);
    }

    #[test]
    fn missing_symmetric_pair_is_named() {
        let err =
            load_model(doc(r#"{"kind": "pairs", "pairs": [["w1","w2"]]}"#).as_bytes()).unwrap_err();
        match err {
            DocumentError::NotSymmetric { from, to, .. } => {
                assert_eq!((from.as_str(), to.as_str()), ("w1", "w2"))
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_transitive_pair_is_named() {
        let pairs =
            r#"{"kind": "pairs", "pairs": [["w1","w2"],["w2","w1"],["w2","w3"],["w3","w2"]]}"#;
        let err = load_model(doc(pairs).as_bytes()).unwrap_err();
        assert!(matches!(err, DocumentError::NotTransitive { .. }), "{err}");
        assert!(err.to_string().contains("(w1, w3)"));
    }

    #[test]
    fn singleton_without_pairs() {
        let text = r#"{"agents": ["a"], "attributes": [{"name": "x", "domain": [0]}],
            "worlds": [{"id": "only", "labels": {"x": 0}}],
            "relations": {"a": {"kind": "pairs", "pairs": []}}}"#;
        let m = load_model(text.as_bytes()).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.agent_class("a", "only").unwrap(), ["only"]);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(load_model(b"{"), Err(DocumentError::Json(_))));
        let extra = doc(r#"{"kind": "partition", "classes": [["w1","w2","w3"]], "bogus": 1}"#);
        assert!(matches!(
            load_model(extra.as_bytes()),
            Err(DocumentError::Json(_))
        ));
        let bad_kind = doc(r#"{"kind": "edges", "pairs": []}"#);
        assert!(matches!(
            load_model(bad_kind.as_bytes()),
            Err(DocumentError::Json(_))
        ));
        let unknown = doc(r#"{"kind": "partition", "classes": [["w1","w2","w9"], ["w3"]]}"#);
        assert!(matches!(
            load_model(unknown.as_bytes()),
            Err(DocumentError::UnknownWorld { .. })
        ));
        let uncovered = doc(r#"{"kind": "partition", "classes": [["w1","w2"]]}"#);
        assert!(matches!(
            load_model(uncovered.as_bytes()),
            Err(DocumentError::Model(ModelError::Uncovered { .. }))
        ));
    }

    #[test]
    fn duplicate_world_rejected() {
        let text = r#"{"agents": ["a"], "attributes": [{"name": "x", "domain": [0]}],
            "worlds": [{"id": "w", "labels": {"x": 0}}, {"id": "w", "labels": {"x": 0}}],
            "relations": {"a": {"kind": "pairs", "pairs": []}}}"#;
        assert!(matches!(
            load_model(text.as_bytes()),
            Err(DocumentError::Model(ModelError::DuplicateWorld(_)))
        ));
    }

    #[test]
    fn domain_is_enforced() {
        let text = r#"{"agents": ["a"], "attributes": [{"name": "x", "domain": [0]}],
            "worlds": [{"id": "w", "labels": {"x": 5}}],
            "relations": {"a": {"kind": "pairs", "pairs": []}}}"#;
        assert!(matches!(
            load_model(text.as_bytes()),
            Err(DocumentError::OutsideDomain { .. })
        ));
        let text = r#"{"agents": ["a"], "attributes": [{"name": "x", "domain": [0]}],
            "worlds": [{"id": "w", "labels": {"x": 0, "y": 1}}],
            "relations": {"a": {"kind": "pairs", "pairs": []}}}"#;
        assert!(matches!(
            load_model(text.as_bytes()),
            Err(DocumentError::UndeclaredAttribute { .. })
        ));
    }

    #[test]
    fn relations_must_match_agents() {
        let text = r#"{"agents": ["a", "b"], "attributes": [{"name": "x", "domain": [0]}],
            "worlds": [{"id": "w", "labels": {"x": 0}}],
            "relations": {"a": {"kind": "pairs", "pairs": []}}}"#;
        assert!(matches!(
            load_model(text.as_bytes()),
            Err(DocumentError::MissingRelation(_))
        ));
        let text = r#"{"agents": ["a"], "attributes": [{"name": "x", "domain": [0]}],
            "worlds": [{"id": "w", "labels": {"x": 0}}],
            "relations": {"a": {"kind": "pairs", "pairs": []}, "z": {"kind": "pairs", "pairs": []}}}"#;
        assert!(matches!(
            load_model(text.as_bytes()),
            Err(DocumentError::UndeclaredAgent(_))
        ));
    }

    #[test]
    fn puzzle_models_round_trip() {
        for m in [
            puzzles::build_cheryl(),
            puzzles::build_blind(),
            puzzles::build_abby(),
        ] {
            let back = load_model(save_model(&m).as_bytes()).unwrap();
            assert_eq!(back, m);
        }
    }
}
