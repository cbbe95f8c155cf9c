//! Graphviz output in the style of the usual two-agent pictures: one line
//! style per agent, an edge between every two worlds the agent confuses.

use std::fmt::Write;

use dynepi_core::{KripkeModel, ModelError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeStyle {
    Solid,
    Dotted,
}

impl EdgeStyle {
    fn as_str(self) -> &'static str {
        match self {
            EdgeStyle::Solid => "solid",
            EdgeStyle::Dotted => "dotted",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DotError {
    #[error("at most two agents can be drawn, got {0}")]
    TooManyAgents(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Renders `model` as an undirected DOT graph. Agents not listed in `styles`
/// (observers) are not drawn.
pub fn export_dot(model: &KripkeModel, styles: &[(&str, EdgeStyle)]) -> Result<String, DotError> {
    if styles.len() > 2 {
        return Err(DotError::TooManyAgents(styles.len()));
    }
    let mut out = String::from("graph kripke {\n  node [shape=plaintext];\n");
    for w in model.worlds() {
        let tooltip: Vec<String> = w.labels.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(
            out,
            "  {} [label={}, tooltip={}];",
            quote(&w.id),
            quote(&w.id),
            quote(&tooltip.join(", "))
        )
        .unwrap();
    }
    for (agent, style) in styles {
        for class in model.classes(agent)? {
            for (i, a) in class.iter().enumerate() {
                for b in &class[i + 1..] {
                    writeln!(
                        out,
                        "  {} -- {} [style={}, class={}];",
                        quote(a),
                        quote(b),
                        style.as_str(),
                        quote(agent)
                    )
                    .unwrap();
                }
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
