use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::kripke::{KripkeModel, ModelError, Value};

/// One entry of an update trace: the model after a named step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub label: String,
    pub count: usize,
    pub worlds: Vec<String>,
}

/// The sequence of models produced by a run of announcements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateTrace {
    pub steps: Vec<TraceStep>,
}

impl UpdateTrace {
    pub fn record(&mut self, label: impl Into<String>, model: &KripkeModel) {
        self.steps.push(TraceStep {
            label: label.into(),
            count: model.len(),
            worlds: model.world_ids().into_iter().map(String::from).collect(),
        });
    }

    pub fn counts(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.count).collect()
    }
}

/// Which announcers speak in one round of [`KripkeModel::iterate_ignorance`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IgnoranceMode {
    /// Every announcer declares ignorance in every round.
    #[default]
    Simultaneous,
    /// Announcers take turns, one per round; stops after a full cycle of
    /// rounds without removals.
    Alternating,
}

#[derive(Clone, Debug)]
pub struct IgnoranceFixpoint {
    pub model: KripkeModel,
    /// Number of rounds that removed at least one world.
    pub rounds: usize,
    pub trace: UpdateTrace,
}

impl KripkeModel {
    /// Truth value of `formula` at `world`.
    pub fn eval_formula(&self, world: &str, formula: &Formula) -> Result<bool, ModelError> {
        let w = self.world_index(world)?;
        formula.validate(self)?;
        Ok(self.extension_unchecked(formula)[w])
    }

    /// Truth value of `formula` at every world, in world order.
    pub fn extension(&self, formula: &Formula) -> Result<Vec<bool>, ModelError> {
        formula.validate(self)?;
        Ok(self.extension_unchecked(formula))
    }

    /// Ids of the worlds where `formula` holds.
    pub fn satisfying(&self, formula: &Formula) -> Result<Vec<&str>, ModelError> {
        let ext = self.extension(formula)?;
        Ok(self
            .worlds()
            .iter()
            .zip(ext)
            .filter(|(_, t)| *t)
            .map(|(w, _)| w.id.as_str())
            .collect())
    }

    /// Public announcement of `formula`: the submodel where it holds.
    pub fn update(&self, formula: &Formula) -> Result<KripkeModel, ModelError> {
        let ext = self.extension(formula)?;
        Ok(self.restrict(&ext))
    }

    /// Repeatedly announces that none of `announcers` knows their attribute,
    /// removing in each round every world where some announcer does know,
    /// until a round removes nothing.
    pub fn iterate_simultaneous_ignorance(
        &self,
        announcers: &[(&str, &str)],
    ) -> Result<IgnoranceFixpoint, ModelError> {
        self.iterate_ignorance(announcers, IgnoranceMode::Simultaneous)
    }

    pub fn iterate_ignorance(
        &self,
        announcers: &[(&str, &str)],
        mode: IgnoranceMode,
    ) -> Result<IgnoranceFixpoint, ModelError> {
        if self.is_empty() {
            return Err(ModelError::Empty);
        }
        let knows: Vec<Formula> = announcers
            .iter()
            .map(|(agent, attr)| Formula::knows_value(*agent, *attr))
            .collect();
        for f in &knows {
            f.validate(self)?;
        }
        let mut trace = UpdateTrace::default();
        trace.record("initial", self);
        let mut model = self.clone();
        let mut rounds = 0;
        let mut step = 0;
        let mut idle = 0;
        loop {
            step += 1;
            let speakers: &[Formula] = match mode {
                IgnoranceMode::Simultaneous => &knows,
                IgnoranceMode::Alternating => {
                    let i = (step - 1) % knows.len().max(1);
                    &knows[i..(i + 1).min(knows.len())]
                }
            };
            let mut keep = vec![true; model.len()];
            for f in speakers {
                for (k, t) in keep.iter_mut().zip(model.extension_unchecked(f)) {
                    *k &= !t;
                }
            }
            let removed = keep.iter().filter(|k| !**k).count();
            if removed == 0 {
                idle += 1;
                let done = match mode {
                    IgnoranceMode::Simultaneous => true,
                    IgnoranceMode::Alternating => idle >= knows.len().max(1),
                };
                if done {
                    trace.record(format!("round {step}: fixpoint"), &model);
                    break;
                }
                continue;
            }
            idle = 0;
            rounds += 1;
            model = model.restrict(&keep);
            trace.record(format!("round {step}"), &model);
        }
        Ok(IgnoranceFixpoint {
            model,
            rounds,
            trace,
        })
    }

    pub(crate) fn extension_unchecked(&self, formula: &Formula) -> Vec<bool> {
        match formula {
            Formula::Atom { attribute, value } => self
                .worlds()
                .iter()
                .map(|w| w.labels.get(attribute.as_str()) == Some(value))
                .collect(),
            Formula::Not(f) => self
                .extension_unchecked(f)
                .into_iter()
                .map(|t| !t)
                .collect(),
            Formula::And(a, b) => zip_with(
                self.extension_unchecked(a),
                self.extension_unchecked(b),
                |x, y| x && y,
            ),
            Formula::Or(a, b) => zip_with(
                self.extension_unchecked(a),
                self.extension_unchecked(b),
                |x, y| x || y,
            ),
            Formula::Implies(a, b) => zip_with(
                self.extension_unchecked(a),
                self.extension_unchecked(b),
                |x, y| !x || y,
            ),
            Formula::Knows { agent, formula } => {
                let inner = self.extension_unchecked(formula);
                let p = self.partition(self.agent_index(agent).expect("validated"));
                let class_true: Vec<bool> = p
                    .classes
                    .iter()
                    .map(|c| c.iter().all(|&w| inner[w]))
                    .collect();
                p.class_of.iter().map(|&c| class_true[c]).collect()
            }
            Formula::KnowsValue { agent, attributes } => {
                let p = self.partition(self.agent_index(agent).expect("validated"));
                let key = |w: usize| -> Vec<Option<&Value>> {
                    attributes
                        .iter()
                        .map(|a| self.worlds()[w].labels.get(a.as_str()))
                        .collect()
                };
                let class_known: Vec<bool> = p
                    .classes
                    .iter()
                    .map(|c| {
                        let first = key(c[0]);
                        c[1..].iter().all(|&w| key(w) == first)
                    })
                    .collect();
                p.class_of.iter().map(|&c| class_known[c]).collect()
            }
            Formula::Announce { announcement, then } => {
                let pre = self.extension_unchecked(announcement);
                let sub = self.restrict(&pre);
                let post = sub.extension_unchecked(then);
                let mut j = 0;
                pre.iter()
                    .map(|&holds| {
                        if holds {
                            j += 1;
                            post[j - 1]
                        } else {
                            true
                        }
                    })
                    .collect()
            }
        }
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Applies `announcements` in order, recording every intermediate model.
pub(crate) fn announce_all(
    model: &KripkeModel,
    announcements: &[(String, Formula)],
) -> Result<(KripkeModel, UpdateTrace), ModelError> {
    let mut trace = UpdateTrace::default();
    trace.record("initial", model);
    let mut current = model.clone();
    for (label, f) in announcements {
        current = current.update(f)?;
        trace.record(label.to_string(), &current);
        if current.is_empty() {
            break;
        }
    }
    Ok((current, trace))
}
