//! Builders and scripted solvers for Cheryl's Birthday, A Blind Guess and
//! Abby's Birthday.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::eval::{announce_all, IgnoranceMode, UpdateTrace};
use crate::formula::Formula;
use crate::kripke::{KripkeModel, ModelError, Value, World};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PuzzleError {
    #[error("announcement `{0}` left no worlds")]
    Inconsistent(String),
    #[error("puzzle unsolved: final worlds disagree on {attribute} ({values})")]
    Unsolved { attribute: String, values: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A solved puzzle: the answer, how the model shrank, and the final model.
#[derive(Clone, Debug)]
pub struct PuzzleResult {
    pub answer: Vec<(String, Value)>,
    pub trace: UpdateTrace,
    pub model: KripkeModel,
}

impl PuzzleResult {
    pub fn value(&self, attribute: &str) -> Option<&Value> {
        self.answer
            .iter()
            .find(|(a, _)| a == attribute)
            .map(|(_, v)| v)
    }
}

/// Reads the shared value of `attributes` off a nonempty final model.
fn common_answer(
    model: &KripkeModel,
    attributes: &[&str],
) -> Result<Vec<(String, Value)>, PuzzleError> {
    let mut answer = Vec::new();
    for attr in attributes {
        let values: BTreeSet<&Value> = model.worlds().iter().map(|w| &w.labels[*attr]).collect();
        if values.len() != 1 {
            let listed: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            return Err(PuzzleError::Unsolved {
                attribute: attr.to_string(),
                values: listed.join(", "),
            });
        }
        let v = values.into_iter().next().expect("one value").clone();
        answer.push((attr.to_string(), v));
    }
    Ok(answer)
}

fn run_script(
    model: &KripkeModel,
    script: Vec<(String, Formula)>,
    answer_attributes: &[&str],
) -> Result<PuzzleResult, PuzzleError> {
    let (model, trace) = announce_all(model, &script)?;
    if model.is_empty() {
        let last = trace
            .steps
            .last()
            .map(|s| s.label.clone())
            .unwrap_or_default();
        return Err(PuzzleError::Inconsistent(last));
    }
    let answer = common_answer(&model, answer_attributes)?;
    Ok(PuzzleResult {
        answer,
        trace,
        model,
    })
}

pub const CHERYL_DATES: [(&str, i64); 10] = [
    ("May", 15),
    ("May", 16),
    ("May", 19),
    ("June", 17),
    ("June", 18),
    ("July", 14),
    ("July", 16),
    ("August", 14),
    ("August", 15),
    ("August", 17),
];

/// World id of a Cheryl date, e.g. `July-16`.
pub fn cheryl_id(month: &str, day: i64) -> String {
    format!("{month}-{day}")
}

/// Albert is told the month, Bernard the day.
pub fn build_cheryl() -> KripkeModel {
    let worlds = CHERYL_DATES
        .iter()
        .map(|&(m, d)| {
            World::new(
                cheryl_id(m, d),
                [("month", Value::from(m)), ("day", Value::Int(d))],
            )
        })
        .collect();
    KripkeModel::observational(worlds, &[("Albert", &["month"]), ("Bernard", &["day"])])
        .expect("static model")
}

fn knows_birthday(agent: &str) -> Formula {
    Formula::knows_values(agent, ["month", "day"])
}

/// Albert's first statement in full: he does not know, and knows that
/// Bernard does not know either.
pub fn cheryl_first_statement() -> Formula {
    Formula::and(
        Formula::not(knows_birthday("Albert")),
        cheryl_first_statement_second_half(),
    )
}

/// Only the informative half of Albert's first statement.
pub fn cheryl_first_statement_second_half() -> Formula {
    Formula::knows("Albert", Formula::not(knows_birthday("Bernard")))
}

fn cheryl_script(first: Formula) -> Vec<(String, Formula)> {
    alloc::vec![
        (
            "Albert: I don't know, but I know you don't know".into(),
            first
        ),
        ("Bernard: now I know".into(), knows_birthday("Bernard")),
        ("Albert: now I also know".into(), knows_birthday("Albert")),
    ]
}

pub fn solve_cheryl() -> Result<PuzzleResult, PuzzleError> {
    run_script(
        &build_cheryl(),
        cheryl_script(cheryl_first_statement()),
        &["month", "day"],
    )
}

/// Same as [`solve_cheryl`] but announcing only `K Albert ~Kv Bernard` first.
pub fn solve_cheryl_short() -> Result<PuzzleResult, PuzzleError> {
    run_script(
        &build_cheryl(),
        cheryl_script(cheryl_first_statement_second_half()),
        &["month", "day"],
    )
}

/// Squares of 10 through 31.
pub fn three_digit_squares() -> Vec<u32> {
    (10u32..32).map(|m| m * m).collect()
}

fn digits(n: u32) -> [i64; 3] {
    [(n / 100) as i64, (n / 10 % 10) as i64, (n % 10) as i64]
}

/// World id of a digit triple, e.g. `526`.
pub fn blind_id(a: i64, b: i64, c: i64) -> String {
    format!("{a}{b}{c}")
}

/// Every arrangement of the digits of a three-digit square, leading zeros
/// included. A sees the cards of B and C, B sees those of A and C. The blind
/// player C is the observer and has no relation of his own.
pub fn build_blind() -> KripkeModel {
    let multisets: BTreeSet<[i64; 3]> = three_digit_squares()
        .into_iter()
        .map(|s| {
            let mut d = digits(s);
            d.sort_unstable();
            d
        })
        .collect();
    let mut worlds = Vec::new();
    for n in 0..1000u32 {
        let d = digits(n);
        let mut sorted = d;
        sorted.sort_unstable();
        if multisets.contains(&sorted) {
            let [a, b, c] = d;
            worlds.push(World::new(
                blind_id(a, b, c),
                [("a", a), ("b", b), ("c", c)],
            ));
        }
    }
    KripkeModel::observational(worlds, &[("A", &["b", "c"]), ("B", &["a", "c"])])
        .expect("static model")
}

pub fn solve_blind() -> Result<PuzzleResult, PuzzleError> {
    solve_blind_with(IgnoranceMode::Simultaneous)
}

pub fn solve_blind_with(mode: IgnoranceMode) -> Result<PuzzleResult, PuzzleError> {
    let fix = build_blind().iterate_ignorance(&[("A", "a"), ("B", "b")], mode)?;
    if fix.model.is_empty() {
        return Err(PuzzleError::Inconsistent("ignorance fixpoint".into()));
    }
    let answer = common_answer(&fix.model, &["c"])?;
    Ok(PuzzleResult {
        answer,
        trace: fix.trace,
        model: fix.model,
    })
}

/// Days of the week numbered 1 (Monday) to 7 (Sunday).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weekday(pub u8);

impl Weekday {
    pub const NAMES: [&'static str; 7] = [
        "Monday",
        "Tuesday",
        "Wednesday",
        "Thursday",
        "Friday",
        "Saturday",
        "Sunday",
    ];

    pub fn adjacent(self, other: Weekday) -> bool {
        let d = (self.0 as i32 - other.0 as i32).rem_euclid(7);
        d == 1 || d == 6
    }
}

impl fmt::Display for Weekday {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(Self::NAMES[(self.0 - 1) as usize])
    }
}

/// World id for "Abby born on day i, Barry on day j", e.g. `17`.
pub fn abby_id(abby: i64, barry: i64) -> String {
    format!("{abby}{barry}")
}

/// Abby and Barry born a day apart on a cyclic week; each knows only their
/// own day.
pub fn build_abby() -> KripkeModel {
    let mut worlds = Vec::new();
    for i in 1..=7u8 {
        for j in 1..=7u8 {
            if Weekday(i).adjacent(Weekday(j)) {
                let (a, b) = (i as i64, j as i64);
                worlds.push(World::new(abby_id(a, b), [("abby", a), ("barry", b)]));
            }
        }
    }
    KripkeModel::observational(worlds, &[("Abby", &["abby"]), ("Barry", &["barry"])])
        .expect("static model")
}

pub fn solve_abby() -> Result<PuzzleResult, PuzzleError> {
    let mut script: Vec<(String, Formula)> = alloc::vec![(
        "setter: Barry was not born on a Monday".into(),
        Formula::not(Formula::atom("barry", 1)),
    )];
    for turn in 0..5 {
        let (label, f) = if turn % 2 == 0 {
            (
                "Abby: no",
                Formula::not(Formula::knows_value("Abby", "barry")),
            )
        } else {
            (
                "Barry: no",
                Formula::not(Formula::knows_value("Barry", "abby")),
            )
        };
        script.push((label.into(), f));
    }
    run_script(&build_abby(), script, &["abby"])
}
