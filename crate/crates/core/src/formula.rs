use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kripke::{KripkeModel, ModelError, Value};

/// Formulas of epistemic logic with public announcements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `attribute = value`
    Atom {
        attribute: String,
        value: Value,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `K agent φ`: φ holds throughout the agent's class.
    Knows {
        agent: String,
        formula: Box<Formula>,
    },
    /// `Kv agent (attr, ...)`: the agent knows the joint value of the listed
    /// attributes, i.e. the disjunction over present values `v` of
    /// `K agent (attrs = v)`.
    KnowsValue {
        agent: String,
        attributes: Vec<String>,
    },
    /// `[! φ] ψ`: if φ is true, ψ holds after announcing φ.
    Announce {
        announcement: Box<Formula>,
        then: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(attribute: impl Into<String>, value: impl Into<Value>) -> Self {
        Formula::Atom {
            attribute: attribute.into(),
            value: value.into(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn knows(agent: impl Into<String>, f: Formula) -> Self {
        Formula::Knows {
            agent: agent.into(),
            formula: Box::new(f),
        }
    }

    pub fn knows_value(agent: impl Into<String>, attribute: impl Into<String>) -> Self {
        Formula::KnowsValue {
            agent: agent.into(),
            attributes: alloc::vec![attribute.into()],
        }
    }

    pub fn knows_values<I, S>(agent: impl Into<String>, attributes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Formula::KnowsValue {
            agent: agent.into(),
            attributes: attributes.into_iter().map(Into::into).collect(),
        }
    }

    pub fn announce(announcement: Formula, then: Formula) -> Self {
        Formula::Announce {
            announcement: Box::new(announcement),
            then: Box::new(then),
        }
    }

    /// Checks that every agent and attribute mentioned exists in `model`.
    pub fn validate(&self, model: &KripkeModel) -> Result<(), ModelError> {
        match self {
            Formula::Atom { attribute, .. } => check_attribute(model, attribute),
            Formula::Not(f) => f.validate(model),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.validate(model)?;
                b.validate(model)
            }
            Formula::Knows { agent, formula } => {
                model.agent_index(agent)?;
                formula.validate(model)
            }
            Formula::KnowsValue { agent, attributes } => {
                model.agent_index(agent)?;
                attributes
                    .iter()
                    .try_for_each(|a| check_attribute(model, a))
            }
            Formula::Announce { announcement, then } => {
                announcement.validate(model)?;
                then.validate(model)
            }
        }
    }
}

fn check_attribute(model: &KripkeModel, attribute: &str) -> Result<(), ModelError> {
    if model.has_attribute(attribute) {
        Ok(())
    } else {
        Err(ModelError::UnknownAttribute(attribute.into()))
    }
}

pub(crate) fn is_bare_word(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_bare_word(name) {
        f.write_str(name)
    } else {
        write_quoted(f, name)
    }
}

fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

/// Prints in the text grammar accepted by [`crate::parse_formula`]. Binary
/// connectives are always parenthesized.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { attribute, value } => {
                write_name(f, attribute)?;
                f.write_str(" = ")?;
                match value {
                    Value::Int(v) => write!(f, "{v}"),
                    Value::Str(s) if is_bare_word(s) => f.write_str(s),
                    Value::Str(s) => write_quoted(f, s),
                }
            }
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Knows { agent, formula } => {
                f.write_str("K ")?;
                write_name(f, agent)?;
                write!(f, " {formula}")
            }
            Formula::KnowsValue { agent, attributes } => {
                f.write_str("Kv ")?;
                write_name(f, agent)?;
                f.write_str(" ")?;
                if let [single] = attributes.as_slice() {
                    write_name(f, single)
                } else {
                    f.write_str("(")?;
                    for (i, a) in attributes.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write_name(f, a)?;
                    }
                    f.write_str(")")
                }
            }
            Formula::Announce { announcement, then } => write!(f, "[! {announcement}] {then}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn prints_grammar() {
        let f = Formula::knows(
            "Albert",
            Formula::not(Formula::knows_value("Bernard", "day")),
        );
        assert_eq!(f.to_string(), "K Albert ~Kv Bernard day");
        let g = Formula::and(Formula::atom("month", "July"), Formula::atom("day", 16));
        assert_eq!(g.to_string(), "(month = July & day = 16)");
        let h = Formula::announce(g, Formula::knows_values("A", ["month", "day"]));
        assert_eq!(
            h.to_string(),
            "[! (month = July & day = 16)] Kv A (month, day)"
        );
        assert_eq!(
            Formula::atom("x y", "a\"b").to_string(),
            "\"x y\" = \"a\\\"b\""
        );
        assert_eq!(Formula::atom("n", "16").to_string(), "n = \"16\"");
    }
}
