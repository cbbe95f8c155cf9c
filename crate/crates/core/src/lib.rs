//! Public announcement logic over finite S5 Kripke models, scripted solvers
//! for a handful of knowledge puzzles, and exact plus Monte Carlo analysis of
//! the prisoners-and-a-light-bulb protocols.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, DOT export,
//! parallel batches and the command line live in the `dynepi` crate.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

mod eval;
mod formula;
mod kripke;
mod linalg;
mod parse;
pub mod prisoners;
pub mod puzzles;

pub use eval::{IgnoranceFixpoint, IgnoranceMode, TraceStep, UpdateTrace};
pub use formula::Formula;
pub use kripke::{KripkeModel, ModelError, Value, World};
pub use parse::{parse_formula, parse_formula_for, FormulaError, ParseError};
