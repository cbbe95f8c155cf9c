use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// An attribute value. Values are opaque and only ever compared for equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Str(String),
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct World {
    pub id: String,
    pub labels: BTreeMap<String, Value>,
}

impl World {
    pub fn new<I, K, V>(id: impl Into<String>, labels: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<Value>,
    {
        World {
            id: id.into(),
            labels: labels
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        }
    }

    pub fn label(&self, attribute: &str) -> Option<&Value> {
        self.labels.get(attribute)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("duplicate world id `{0}`")]
    DuplicateWorld(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("world `{world}` has attributes {found:?}, expected {expected:?}")]
    AttributeMismatch {
        world: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("agent `{agent}`: world `{world}` is in no equivalence class")]
    Uncovered { agent: String, world: String },
    #[error("agent `{agent}`: world `{world}` is in more than one equivalence class")]
    Overlapping { agent: String, world: String },
    #[error("agent `{0}` has no relation")]
    MissingRelation(String),
    #[error("model has no worlds")]
    Empty,
}

/// Indistinguishability of one agent, stored as a partition of world indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Partition {
    pub(crate) classes: Vec<Vec<usize>>,
    pub(crate) class_of: Vec<usize>,
}

impl Partition {
    /// Builds a partition from a class label per world. Classes are ordered by
    /// their first member and members keep world order.
    fn from_keys<K: Ord>(keys: &[K]) -> Self {
        let mut slot: BTreeMap<&K, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(keys.len());
        for (w, k) in keys.iter().enumerate() {
            let c = *slot.entry(k).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(w);
            class_of.push(c);
        }
        Partition { classes, class_of }
    }
}

/// A finite multi-agent S5 Kripke model.
///
/// Worlds keep insertion order; every agent's accessibility relation is an
/// equivalence relation given by a partition of the worlds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    agents: Vec<String>,
    attributes: Vec<String>,
    worlds: Vec<World>,
    index: BTreeMap<String, usize>,
    partitions: Vec<Partition>,
}

impl KripkeModel {
    /// Builds a model from explicit partitions, one per agent, given as lists
    /// of world ids.
    pub fn new(
        agents: Vec<String>,
        worlds: Vec<World>,
        partitions: Vec<Vec<Vec<String>>>,
    ) -> Result<Self, ModelError> {
        let (attributes, index) = Self::check_worlds(&agents, &worlds)?;
        if partitions.len() != agents.len() {
            let missing = agents.get(partitions.len()).cloned().unwrap_or_default();
            return Err(ModelError::MissingRelation(missing));
        }
        let mut parts = Vec::with_capacity(agents.len());
        for (agent, classes) in agents.iter().zip(partitions) {
            let mut key = vec![usize::MAX; worlds.len()];
            for (c, class) in classes.iter().enumerate() {
                for id in class {
                    let w = *index
                        .get(id)
                        .ok_or_else(|| ModelError::UnknownWorld(id.clone()))?;
                    if key[w] != usize::MAX {
                        return Err(ModelError::Overlapping {
                            agent: agent.clone(),
                            world: id.clone(),
                        });
                    }
                    key[w] = c;
                }
            }
            if let Some(w) = key.iter().position(|&k| k == usize::MAX) {
                return Err(ModelError::Uncovered {
                    agent: agent.clone(),
                    world: worlds[w].id.clone(),
                });
            }
            parts.push(Partition::from_keys(&key));
        }
        Ok(KripkeModel {
            agents,
            attributes,
            worlds,
            index,
            partitions: parts,
        })
    }

    /// Builds a model where each agent observes a fixed set of attributes:
    /// two worlds are indistinguishable for the agent iff they agree on all
    /// of them.
    pub fn observational(
        worlds: Vec<World>,
        observers: &[(&str, &[&str])],
    ) -> Result<Self, ModelError> {
        let agents: Vec<String> = observers.iter().map(|(a, _)| a.to_string()).collect();
        let (attributes, index) = Self::check_worlds(&agents, &worlds)?;
        let mut partitions = Vec::with_capacity(observers.len());
        for (_, observed) in observers {
            for attr in observed.iter() {
                if !attributes.iter().any(|a| a == attr) {
                    return Err(ModelError::UnknownAttribute(attr.to_string()));
                }
            }
            let keys: Vec<Vec<&Value>> = worlds
                .iter()
                .map(|w| observed.iter().map(|a| &w.labels[*a]).collect())
                .collect();
            partitions.push(Partition::from_keys(&keys));
        }
        Ok(KripkeModel {
            agents,
            attributes,
            worlds,
            index,
            partitions,
        })
    }

    #[allow(clippy::type_complexity)]
    fn check_worlds(
        agents: &[String],
        worlds: &[World],
    ) -> Result<(Vec<String>, BTreeMap<String, usize>), ModelError> {
        let first = worlds.first().ok_or(ModelError::Empty)?;
        let mut seen = BTreeSet::new();
        for a in agents {
            if !seen.insert(a.as_str()) {
                return Err(ModelError::DuplicateAgent(a.clone()));
            }
        }
        let attributes: Vec<String> = first.labels.keys().cloned().collect();
        let mut index = BTreeMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.id.clone()));
            }
            if !w.labels.keys().eq(attributes.iter()) {
                return Err(ModelError::AttributeMismatch {
                    world: w.id.clone(),
                    expected: attributes.clone(),
                    found: w.labels.keys().cloned().collect(),
                });
            }
        }
        Ok((attributes, index))
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    /// Attribute names, sorted. Kept even when the model becomes empty.
    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn world_ids(&self) -> Vec<&str> {
        self.worlds.iter().map(|w| w.id.as_str()).collect()
    }

    pub fn world(&self, id: &str) -> Option<&World> {
        self.index.get(id).map(|&i| &self.worlds[i])
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn has_attribute(&self, attribute: &str) -> bool {
        self.attributes.iter().any(|a| a == attribute)
    }

    /// The equivalence class of `world` for `agent`, in world order.
    pub fn agent_class(&self, agent: &str, world: &str) -> Result<Vec<&str>, ModelError> {
        let a = self.agent_index(agent)?;
        let w = self.world_index(world)?;
        let p = &self.partitions[a];
        Ok(p.classes[p.class_of[w]]
            .iter()
            .map(|&i| self.worlds[i].id.as_str())
            .collect())
    }

    /// All equivalence classes of `agent`, ordered by first member.
    pub fn classes(&self, agent: &str) -> Result<Vec<Vec<&str>>, ModelError> {
        let a = self.agent_index(agent)?;
        Ok(self.partitions[a]
            .classes
            .iter()
            .map(|c| c.iter().map(|&i| self.worlds[i].id.as_str()).collect())
            .collect())
    }

    /// The submodel on the worlds connected to `world` through any agent's
    /// relation.
    pub fn component(&self, world: &str) -> Result<KripkeModel, ModelError> {
        let start = self.world_index(world)?;
        let mut keep = vec![false; self.worlds.len()];
        keep[start] = true;
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            for p in &self.partitions {
                for &v in &p.classes[p.class_of[w]] {
                    if !keep[v] {
                        keep[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        Ok(self.restrict(&keep))
    }

    /// The submodel on the listed worlds.
    pub fn submodel(&self, ids: &[&str]) -> Result<KripkeModel, ModelError> {
        let mut keep = vec![false; self.worlds.len()];
        for id in ids {
            keep[self.world_index(id)?] = true;
        }
        Ok(self.restrict(&keep))
    }

    /// Restriction to the worlds flagged in `keep`. Classes are intersected
    /// with the surviving worlds and empty classes dropped.
    pub(crate) fn restrict(&self, keep: &[bool]) -> KripkeModel {
        debug_assert_eq!(keep.len(), self.worlds.len());
        let mut remap = vec![usize::MAX; self.worlds.len()];
        let mut worlds = Vec::new();
        let mut index = BTreeMap::new();
        for (i, w) in self.worlds.iter().enumerate() {
            if keep[i] {
                remap[i] = worlds.len();
                index.insert(w.id.clone(), worlds.len());
                worlds.push(w.clone());
            }
        }
        let partitions = self
            .partitions
            .iter()
            .map(|p| {
                let classes: Vec<Vec<usize>> = p
                    .classes
                    .iter()
                    .map(|c| c.iter().filter(|&&w| keep[w]).map(|&w| remap[w]).collect())
                    .filter(|c: &Vec<usize>| !c.is_empty())
                    .collect();
                let mut class_of = vec![0; worlds.len()];
                for (ci, c) in classes.iter().enumerate() {
                    for &w in c {
                        class_of[w] = ci;
                    }
                }
                Partition { classes, class_of }
            })
            .collect();
        KripkeModel {
            agents: self.agents.clone(),
            attributes: self.attributes.clone(),
            worlds,
            index,
            partitions,
        }
    }

    pub(crate) fn agent_index(&self, agent: &str) -> Result<usize, ModelError> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| ModelError::UnknownAgent(agent.to_string()))
    }

    pub(crate) fn world_index(&self, world: &str) -> Result<usize, ModelError> {
        self.index
            .get(world)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(world.to_string()))
    }

    pub(crate) fn partition(&self, agent: usize) -> &Partition {
        &self.partitions[agent]
    }

    /// Checks that every partition covers the worlds exactly once. Always
    /// true for models built through the public constructors.
    pub fn partitions_valid(&self) -> bool {
        self.partitions.iter().all(|p| {
            let mut hits = vec![0usize; self.worlds.len()];
            for (ci, c) in p.classes.iter().enumerate() {
                if c.is_empty() {
                    return false;
                }
                for &w in c {
                    if w >= hits.len() || p.class_of[w] != ci {
                        return false;
                    }
                    hits[w] += 1;
                }
            }
            p.class_of.len() == self.worlds.len() && hits.iter().all(|&h| h == 1)
        })
    }
}
