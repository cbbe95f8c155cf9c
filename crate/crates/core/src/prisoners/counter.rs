//! The counter protocol as an absorbing Markov chain.
//!
//! A state is the number of followers who have not switched the light on
//! yet, plus the light. Apart from self-loops the chain only moves forward,
//! so it is solved by back substitution in exact rationals.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Light, SolveError};

pub const MAX_COUNTER_N: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CounterState {
    /// Followers still holding their token.
    pub remaining: u32,
    pub light: Light,
}

/// Expected days to escape from every state of the chain.
#[derive(Clone, Debug)]
pub struct CounterChain {
    pub n: u32,
    /// In solve order, ending with the initial state.
    pub values: Vec<(CounterState, BigRational)>,
}

impl CounterChain {
    pub fn expected(&self) -> &BigRational {
        &self.values.last().expect("initial state").1
    }

    pub fn expected_days(&self) -> f64 {
        self.expected().to_f64().unwrap_or(f64::NAN)
    }

    /// Every state with its value rounded to `f64`, in solve order.
    pub fn rows(&self) -> Vec<(CounterState, f64)> {
        self.values
            .iter()
            .map(|(s, v)| (*s, v.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    pub fn get(&self, state: CounterState) -> Option<&BigRational> {
        self.values
            .iter()
            .find(|(s, _)| *s == state)
            .map(|(_, v)| v)
    }
}

fn ratio(num: u32, den: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Self-loop probability and forward moves of `s`; `None` means the
/// prisoners are free.
fn transitions(n: u32, s: CounterState) -> (BigRational, Vec<(BigRational, Option<CounterState>)>) {
    match s.light {
        // one of the remaining followers walks in and switches the light on
        Light::Off => (
            ratio(n - s.remaining, n),
            alloc::vec![(
                ratio(s.remaining, n),
                Some(CounterState {
                    remaining: s.remaining - 1,
                    light: Light::On,
                })
            )],
        ),
        // only the counter changes anything
        Light::On => {
            let next = if s.remaining == 0 {
                None
            } else {
                Some(CounterState {
                    remaining: s.remaining,
                    light: Light::Off,
                })
            };
            (ratio(n - 1, n), alloc::vec![(ratio(1, n), next)])
        }
    }
}

/// Expected escape day under the counter protocol with `n` prisoners.
pub fn exact_counter_expectation(n: u32) -> Result<CounterChain, SolveError> {
    if !(2..=MAX_COUNTER_N).contains(&n) {
        return Err(SolveError::OutOfRange {
            n,
            min: 2,
            max: MAX_COUNTER_N,
        });
    }
    // On(0), Off(1), On(1), Off(2), ..., Off(n - 1): every state only
    // leads to states earlier in this order
    let mut order = alloc::vec![CounterState {
        remaining: 0,
        light: Light::On
    }];
    for j in 1..n {
        order.push(CounterState {
            remaining: j,
            light: Light::Off,
        });
        if j + 1 < n {
            order.push(CounterState {
                remaining: j,
                light: Light::On,
            });
        }
    }
    let mut values: Vec<(CounterState, BigRational)> = Vec::with_capacity(order.len());
    for s in order {
        let (stay, moves) = transitions(n, s);
        let mut acc = BigRational::one();
        for (p, next) in moves {
            if let Some(t) = next {
                let v = values
                    .iter()
                    .rev()
                    .find(|(u, _)| *u == t)
                    .map(|(_, v)| v)
                    .ok_or(SolveError::Singular)?;
                acc += p * v;
            }
        }
        let leave = BigRational::one() - stay;
        if leave.is_zero() {
            return Err(SolveError::Singular);
        }
        values.push((s, acc / leave));
    }
    Ok(CounterChain { n, values })
}
