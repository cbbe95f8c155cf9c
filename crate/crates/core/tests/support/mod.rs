//! Generators and property checks shared by the property suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dynepi_core::{parse_formula, Formula, KripkeModel, Value, World};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const AGENTS: [&str; 2] = ["a", "b"];
pub const ATTRS: [&str; 2] = ["x", "y"];

pub fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

/// Up to 8 worlds labelled with x, y in 0..3; each agent's partition given by
/// a random class key per world.
pub fn arb_model() -> impl Strategy<Value = KripkeModel> {
    (1usize..=8)
        .prop_flat_map(|n| {
            (
                prop::collection::vec((0i64..3, 0i64..3), n),
                prop::collection::vec(0usize..3, n),
                prop::collection::vec(0usize..3, n),
            )
        })
        .prop_map(|(labels, ka, kb)| {
            let worlds: Vec<World> = labels
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| World::new(format!("w{i}"), [("x", x), ("y", y)]))
                .collect();
            let classes = |keys: &[usize]| -> Vec<Vec<String>> {
                (0..3)
                    .map(|k| {
                        keys.iter()
                            .enumerate()
                            .filter(|(_, &c)| c == k)
                            .map(|(i, _)| format!("w{i}"))
                            .collect::<Vec<_>>()
                    })
                    .filter(|c| !c.is_empty())
                    .collect()
            };
            KripkeModel::new(
                AGENTS.iter().map(|s| s.to_string()).collect(),
                worlds,
                vec![classes(&ka), classes(&kb)],
            )
            .expect("valid random model")
        })
}

/// Formulas over the agents and attributes of [`arb_model`].
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (prop::sample::select(&ATTRS[..]), 0i64..3).prop_map(|(a, v)| Formula::atom(a, v)),
        (
            prop::sample::select(&AGENTS[..]),
            prop::sample::subsequence(&ATTRS[..], 1..=2)
        )
            .prop_map(|(ag, attrs)| Formula::knows_values(ag, attrs)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (prop::sample::select(&AGENTS[..]), inner.clone())
                .prop_map(|(ag, f)| Formula::knows(ag, f)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::announce(a, b)),
        ]
    })
}

/// Names and values that need quoting as well as plain ones.
pub fn arb_syntax_formula() -> impl Strategy<Value = Formula> {
    let names = prop::sample::select(vec![
        "x",
        "month",
        "K",
        "Kv",
        "has space",
        "a\"q",
        "_b1",
        "ü",
    ]);
    let value = prop_oneof![
        any::<i64>().prop_map(Value::Int),
        prop::sample::select(vec!["July", "16", "-3", "two words", "", "K", "a\\b"])
            .prop_map(|s| Value::Str(s.to_string())),
    ];
    let leaf = prop_oneof![
        (names.clone(), value).prop_map(|(a, v)| Formula::atom(a, v)),
        (names.clone(), prop::collection::vec(names.clone(), 1..=3))
            .prop_map(|(ag, attrs)| Formula::knows_values(ag, attrs)),
    ];
    leaf.prop_recursive(5, 32, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (names.clone(), inner.clone()).prop_map(|(ag, f)| Formula::knows(ag, f)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::announce(a, b)),
        ]
    })
}

pub fn ids(m: &KripkeModel) -> BTreeSet<String> {
    m.world_ids().into_iter().map(str::to_string).collect()
}

pub type Check = Result<(), TestCaseError>;

/// `[!phi] psi` holds where phi fails or psi holds after announcing phi, and
/// the update keeps exactly the phi-worlds.
pub fn announcement_semantics(m: &KripkeModel, phi: &Formula, psi: &Formula) -> Check {
    let updated = m.update(phi).unwrap();
    let holds: BTreeSet<String> = m
        .satisfying(phi)
        .unwrap()
        .into_iter()
        .map(str::to_string)
        .collect();
    prop_assert_eq!(ids(&updated), holds);
    let boxed = Formula::announce(phi.clone(), psi.clone());
    for w in m.world_ids() {
        let expect = !m.eval_formula(w, phi).unwrap() || updated.eval_formula(w, psi).unwrap();
        prop_assert_eq!(m.eval_formula(w, &boxed).unwrap(), expect);
    }
    Ok(())
}

pub fn update_is_monotone(m: &KripkeModel, phi: &Formula) -> Check {
    let updated = m.update(phi).unwrap();
    prop_assert!(updated.len() <= m.len());
    prop_assert!(ids(&updated).is_subset(&ids(m)));
    for w in updated.worlds() {
        prop_assert_eq!(Some(w), m.world(&w.id));
    }
    Ok(())
}

/// Classes after an update are the old classes cut down to the survivors.
pub fn update_keeps_partitions(m: &KripkeModel, phi: &Formula) -> Check {
    let updated = m.update(phi).unwrap();
    prop_assert!(updated.partitions_valid());
    let kept = ids(&updated);
    for agent in AGENTS {
        for w in updated.world_ids() {
            let before: BTreeSet<&str> = m
                .agent_class(agent, w)
                .unwrap()
                .into_iter()
                .filter(|v| kept.contains(*v))
                .collect();
            let after: BTreeSet<&str> =
                updated.agent_class(agent, w).unwrap().into_iter().collect();
            prop_assert_eq!(before, after);
        }
    }
    Ok(())
}

pub fn print_then_parse(f: &Formula) -> Check {
    let text = f.to_string();
    let back = parse_formula(&text);
    prop_assert_eq!(back.as_ref().ok(), Some(f), "text: {}", text);
    Ok(())
}

pub fn knowledge_is_truthful(m: &KripkeModel, phi: &Formula) -> Check {
    for agent in AGENTS {
        let t = Formula::implies(Formula::knows(agent, phi.clone()), phi.clone());
        prop_assert_eq!(m.satisfying(&t).unwrap().len(), m.len());
    }
    Ok(())
}

/// The simultaneous ignorance fixpoint equals repeating the plain public
/// update until it stops removing worlds.
pub fn ignorance_fixpoint(m: &KripkeModel) -> Check {
    let fix = m
        .iterate_simultaneous_ignorance(&[("a", "x"), ("b", "y")])
        .unwrap();
    let ignorance = Formula::and(
        Formula::not(Formula::knows_value("a", "x")),
        Formula::not(Formula::knows_value("b", "y")),
    );
    let mut cur = m.clone();
    let mut rounds = 0;
    loop {
        let next = cur.update(&ignorance).unwrap();
        if next.len() == cur.len() {
            break;
        }
        cur = next;
        rounds += 1;
        if cur.is_empty() {
            break;
        }
    }
    prop_assert_eq!(ids(&fix.model), ids(&cur));
    prop_assert_eq!(fix.rounds, rounds);
    if !fix.model.is_empty() {
        prop_assert_eq!(fix.model.update(&ignorance).unwrap().len(), fix.model.len());
    }
    Ok(())
}
