//! Expected escape time of the uniform token protocol.
//!
//! With `k` of `n` prisoners holding tokens `a_1..a_k` and the light off,
//!
//! ```text
//! U(a) = 1 + (n-k)/n U(a) + 1/n sum_i T(a - e_i)
//! T(a) = 1 + (n-k)/n T(a) + 1/n sum_i U(a + e_i)
//! ```
//!
//! with `U` of a single holder of `n` tokens equal to zero. Prisoners are
//! exchangeable under uniform scheduling, so configurations are multisets.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Light, SolveError};
use crate::linalg::{max_abs, solve_rational, Lu};

/// Largest prisoner count accepted by [`exact_uniform_expectation`].
pub const MAX_UNIFORM_N: u32 = 30;

/// Systems with at most this many unknowns are solved in exact rationals.
pub const EXACT_STATE_LIMIT: usize = 128;

/// Largest tolerated equation residual, relative to the largest expected
/// time in the table (or absolute when that is below one).
const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Token holdings (positive values, descending) and the light.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenConfiguration {
    pub light: Light,
    pub held: Vec<u32>,
    pub n: u32,
}

impl TokenConfiguration {
    pub fn new(mut held: Vec<u32>, light: Light, n: u32) -> Self {
        held.retain(|&t| t > 0);
        held.sort_unstable_by(|a, b| b.cmp(a));
        TokenConfiguration { light, held, n }
    }

    /// All prisoners hold one token and the light is off.
    pub fn initial(n: u32) -> Self {
        Self::new(vec![1; n as usize], Light::Off, n)
    }

    pub fn total(&self) -> u64 {
        self.held.iter().map(|&t| t as u64).sum()
    }

    /// Token counts add up: `n` with the light off, `n - 1` with it on.
    pub fn is_reachable(&self) -> bool {
        self.held.len() <= self.n as usize
            && self.total() + self.light.is_on() as u64 == self.n as u64
    }

    /// Someone holds every token: the prisoners have announced.
    pub fn is_terminal(&self) -> bool {
        self.light == Light::Off && self.held.len() == 1 && self.held[0] == self.n
    }

    /// Configurations after each holder's move, one entry per holder.
    /// Non-holders leave the configuration unchanged.
    pub fn successors(&self) -> Vec<TokenConfiguration> {
        (0..self.held.len())
            .map(|i| {
                let mut next = self.held.clone();
                let light = match self.light {
                    Light::Off => {
                        next[i] -= 1;
                        Light::On
                    }
                    Light::On => {
                        next[i] += 1;
                        Light::Off
                    }
                };
                TokenConfiguration::new(next, light, self.n)
            })
            .collect()
    }
}

impl fmt::Display for TokenConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.light.is_on() { "T{" } else { "U{" })?;
        for (i, t) in self.held.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedTime {
    pub days: f64,
    /// Present when the system was solved in rationals.
    pub exact: Option<BigRational>,
}

/// Expected days to escape for every configuration reachable from the
/// starting ones.
#[derive(Clone, Debug)]
pub struct ExpectedTimeTable {
    pub n: u32,
    pub entries: BTreeMap<TokenConfiguration, ExpectedTime>,
    /// Largest residual of any equation, scaled as in the tolerance check.
    pub max_residual: f64,
}

impl ExpectedTimeTable {
    /// Solves the system for everything reachable from `starts`.
    pub fn solve_from(n: u32, starts: &[TokenConfiguration]) -> Result<Self, SolveError> {
        let (unknowns, index) = reachable(starts);
        if unknowns.len() <= EXACT_STATE_LIMIT {
            solve_exact(n, unknowns, index)
        } else {
            solve_float(n, unknowns, index)
        }
    }

    pub fn get(&self, config: &TokenConfiguration) -> Option<&ExpectedTime> {
        self.entries.get(config)
    }

    /// Light-off value for the given holdings.
    pub fn u(&self, held: &[u32]) -> Option<&ExpectedTime> {
        self.get(&TokenConfiguration::new(held.to_vec(), Light::Off, self.n))
    }

    /// Light-on value for the given holdings.
    pub fn t(&self, held: &[u32]) -> Option<&ExpectedTime> {
        self.get(&TokenConfiguration::new(held.to_vec(), Light::On, self.n))
    }

    /// Expected escape day from the initial configuration.
    pub fn initial(&self) -> Option<&ExpectedTime> {
        self.get(&TokenConfiguration::initial(self.n))
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|e| e.exact.is_some())
    }
}

/// Full table for `n` prisoners starting with one token each, light off.
pub fn exact_uniform_expectation(n: u32) -> Result<ExpectedTimeTable, SolveError> {
    if !(2..=MAX_UNIFORM_N).contains(&n) {
        return Err(SolveError::OutOfRange {
            n,
            min: 2,
            max: MAX_UNIFORM_N,
        });
    }
    ExpectedTimeTable::solve_from(n, &[TokenConfiguration::initial(n)])
}

/// `T({n-1})`: one prisoner holds `n - 1` tokens and the light is on. Only
/// that configuration's own equation is built, so any `n` works.
pub fn endgame_expectation(n: u32) -> Result<BigRational, SolveError> {
    if n < 2 {
        return Err(SolveError::OutOfRange {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    let start = TokenConfiguration::new(vec![n - 1], Light::On, n);
    let table = ExpectedTimeTable::solve_from(n, core::slice::from_ref(&start))?;
    table
        .get(&start)
        .and_then(|e| e.exact.clone())
        .ok_or(SolveError::Singular)
}

/// Breadth-first closure of non-terminal configurations.
fn reachable(
    starts: &[TokenConfiguration],
) -> (Vec<TokenConfiguration>, BTreeMap<TokenConfiguration, usize>) {
    let mut unknowns = Vec::new();
    let mut index = BTreeMap::new();
    let mut queue: VecDeque<TokenConfiguration> = starts.iter().cloned().collect();
    while let Some(c) = queue.pop_front() {
        if c.is_terminal() || index.contains_key(&c) {
            continue;
        }
        index.insert(c.clone(), unknowns.len());
        for s in c.successors() {
            if !s.is_terminal() && !index.contains_key(&s) {
                queue.push_back(s);
            }
        }
        unknowns.push(c);
    }
    (unknowns, index)
}

/// Equation of `c`, scaled by `n`: `k E(c) - sum_i E(s_i) = n`. Terminal
/// successors contribute zero and are skipped.
fn equation(
    c: &TokenConfiguration,
    index: &BTreeMap<TokenConfiguration, usize>,
) -> (u32, Vec<usize>) {
    let k = c.held.len() as u32;
    let succ = c
        .successors()
        .iter()
        .filter_map(|s| index.get(s).copied())
        .collect();
    (k, succ)
}

fn terminal_entry(n: u32) -> (TokenConfiguration, ExpectedTime) {
    (
        TokenConfiguration::new(vec![n], Light::Off, n),
        ExpectedTime {
            days: 0.0,
            exact: Some(BigRational::zero()),
        },
    )
}

fn solve_exact(
    n: u32,
    unknowns: Vec<TokenConfiguration>,
    index: BTreeMap<TokenConfiguration, usize>,
) -> Result<ExpectedTimeTable, SolveError> {
    let m = unknowns.len();
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut a = vec![vec![BigRational::zero(); m]; m];
    let b = vec![int(n as i64); m];
    for (r, c) in unknowns.iter().enumerate() {
        let (k, succ) = equation(c, &index);
        a[r][r] += int(k as i64);
        for s in succ {
            a[r][s] -= int(1);
        }
    }
    let x = solve_rational(a.clone(), b.clone()).ok_or(SolveError::Singular)?;
    // exact arithmetic: the residual is zero, check anyway
    for r in 0..m {
        let mut acc = -b[r].clone();
        for (c, coeff) in a[r].iter().enumerate() {
            if !coeff.is_zero() {
                acc += coeff * &x[c];
            }
        }
        if !acc.is_zero() {
            return Err(SolveError::Residual {
                residual: acc.to_f64().unwrap_or(f64::INFINITY),
            });
        }
    }
    let mut entries: BTreeMap<_, _> = unknowns
        .into_iter()
        .zip(x)
        .map(|(c, v)| {
            let days = v.to_f64().unwrap_or(f64::NAN);
            (
                c,
                ExpectedTime {
                    days,
                    exact: Some(v),
                },
            )
        })
        .collect();
    let (tc, te) = terminal_entry(n);
    entries.insert(tc, te);
    Ok(ExpectedTimeTable {
        n,
        entries,
        max_residual: 0.0,
    })
}

/// Floating-point route: light-on unknowns are eliminated through their own
/// equations, leaving a dense system over the light-off ones.
fn solve_float(
    n: u32,
    unknowns: Vec<TokenConfiguration>,
    index: BTreeMap<TokenConfiguration, usize>,
) -> Result<ExpectedTimeTable, SolveError> {
    let nf = n as f64;
    let equations: Vec<(u32, Vec<usize>)> = unknowns.iter().map(|c| equation(c, &index)).collect();
    let off: Vec<usize> = (0..unknowns.len())
        .filter(|&i| unknowns[i].light == Light::Off)
        .collect();
    let mut slot = vec![usize::MAX; unknowns.len()];
    for (j, &i) in off.iter().enumerate() {
        slot[i] = j;
    }
    let m = off.len();
    let mut a = vec![0.0; m * m];
    let mut b = vec![0.0; m];
    for (r, &i) in off.iter().enumerate() {
        let (k, succ) = &equations[i];
        a[r * m + r] += *k as f64;
        b[r] = nf;
        // E(t) = (n + sum_j E(u_j)) / k_t
        for &t in succ {
            let (kt, ts) = &equations[t];
            let kt = *kt as f64;
            b[r] += nf / kt;
            for &u in ts {
                a[r * m + slot[u]] -= 1.0 / kt;
            }
        }
    }
    let lu = Lu::factor(m, a.clone()).ok_or(SolveError::Singular)?;
    let mut x = lu.solve(&b);
    // a few rounds of iterative refinement
    for _ in 0..3 {
        let r: Vec<f64> = (0..m)
            .map(|i| b[i] - (0..m).map(|j| a[i * m + j] * x[j]).sum::<f64>())
            .collect();
        let dx = lu.solve(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
    }
    let mut values = vec![0.0; unknowns.len()];
    for (j, &i) in off.iter().enumerate() {
        values[i] = x[j];
    }
    for (i, c) in unknowns.iter().enumerate() {
        if c.light == Light::On {
            let (k, succ) = &equations[i];
            values[i] = (nf + succ.iter().map(|&u| values[u]).sum::<f64>()) / *k as f64;
        }
    }
    // residuals of the original equations, in the form E = 1 + ...
    let scale = max_abs(&values).max(1.0);
    let residuals: Vec<f64> = equations
        .iter()
        .enumerate()
        .map(|(i, (k, succ))| {
            let lhs = *k as f64 * values[i] - succ.iter().map(|&s| values[s]).sum::<f64>();
            (lhs - nf) / nf / scale
        })
        .collect();
    let max_residual = max_abs(&residuals);
    // negated so that a NaN residual fails too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(max_residual <= RESIDUAL_TOLERANCE) {
        return Err(SolveError::Residual {
            residual: max_residual,
        });
    }
    let mut entries: BTreeMap<_, _> = unknowns
        .into_iter()
        .zip(values)
        .map(|(c, days)| (c, ExpectedTime { days, exact: None }))
        .collect();
    let (tc, te) = terminal_entry(n);
    entries.insert(tc, ExpectedTime { days: 0.0, ..te });
    Ok(ExpectedTimeTable {
        n,
        entries,
        max_residual,
    })
}
