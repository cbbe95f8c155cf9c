use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::protocol::{Action, Protocol, ProtocolError, Visit};
use super::Light;

pub const DEFAULT_STEP_CAP: u64 = 100_000_000;

/// Token conservation is recomputed from scratch every this many days.
const CONSERVATION_CHECK_PERIOD: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(
        "false announcement by prisoner {prisoner} on day {day}: {missing} never interrogated"
    )]
    FalseAnnouncement {
        prisoner: usize,
        day: u64,
        missing: usize,
    },
    #[error(
        "prisoner {prisoner} chose {action:?} with token {token} and light {light} on day {day}"
    )]
    IllegalAction {
        prisoner: usize,
        action: Action,
        token: u32,
        light: Light,
        day: u64,
    },
    #[error("token conservation broken on day {day}: {held} held, light {light}, n = {n}")]
    Conservation {
        day: u64,
        held: u64,
        light: Light,
        n: u32,
    },
    #[error("invalid setup: {0}")]
    Setup(&'static str),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    /// A true announcement on this day; the announcing day counts.
    Escaped {
        day: u64,
    },
    CapExceeded {
        days: u64,
    },
}

impl RunOutcome {
    pub fn escape_day(self) -> Option<u64> {
        match self {
            RunOutcome::Escaped { day } => Some(day),
            RunOutcome::CapExceeded { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrisonState {
    pub n: u32,
    pub light: Light,
    pub tokens: Vec<u32>,
    pub interrogated: Vec<bool>,
    /// Times each prisoner switched the light on.
    pub switched_on: Vec<u32>,
    /// Times each prisoner was interrogated.
    pub visits: Vec<u64>,
    /// Interrogations so far.
    pub day: u64,
}

impl PrisonState {
    /// Everybody holds one token and the light is off.
    pub fn initial(n: u32) -> Self {
        Self::with_tokens(vec![1; n as usize], Light::Off)
    }

    /// A custom starting point, e.g. to replay a stuck configuration. Nobody
    /// counts as interrogated yet.
    pub fn with_tokens(tokens: Vec<u32>, light: Light) -> Self {
        let n = tokens.len() as u32;
        PrisonState {
            n,
            light,
            interrogated: vec![false; tokens.len()],
            switched_on: vec![0; tokens.len()],
            visits: vec![0; tokens.len()],
            tokens,
            day: 0,
        }
    }

    pub fn held(&self) -> u64 {
        self.tokens.iter().map(|&t| t as u64).sum()
    }

    /// Tokens in hands plus the one in the bulb equal `n`.
    pub fn conserved(&self) -> bool {
        self.held() + self.light.is_on() as u64 == self.n as u64
    }

    fn check_conservation(&self) -> Result<(), SimError> {
        if self.conserved() {
            Ok(())
        } else {
            Err(SimError::Conservation {
                day: self.day,
                held: self.held(),
                light: self.light,
                n: self.n,
            })
        }
    }

    /// Interrogates `prisoner` for one day. Returns true on a (verified)
    /// announcement.
    pub fn apply(&mut self, prisoner: usize, action: Action) -> Result<bool, SimError> {
        self.day += 1;
        self.interrogated[prisoner] = true;
        self.visits[prisoner] += 1;
        let (token, light, day) = (self.tokens[prisoner], self.light, self.day);
        let illegal = || SimError::IllegalAction {
            prisoner,
            action,
            token,
            light,
            day,
        };
        let collect = |s: &mut Self| -> Result<(), SimError> {
            if !s.light.is_on() {
                return Err(illegal());
            }
            s.light = Light::Off;
            s.tokens[prisoner] += 1;
            Ok(())
        };
        let announce = match action {
            Action::Nothing => false,
            Action::Deposit => {
                if self.light.is_on() || token == 0 {
                    return Err(illegal());
                }
                self.light = Light::On;
                self.tokens[prisoner] -= 1;
                self.switched_on[prisoner] += 1;
                false
            }
            Action::Collect => {
                collect(self)?;
                false
            }
            Action::Announce => true,
            Action::CollectAndAnnounce => {
                collect(self)?;
                true
            }
        };
        if announce {
            let missing = self.interrogated.iter().filter(|i| !**i).count();
            if missing > 0 {
                return Err(SimError::FalseAnnouncement {
                    prisoner,
                    day: self.day,
                    missing,
                });
            }
        }
        Ok(announce)
    }
}

/// Per-run seed: run `index` of a batch seeded with `base`.
pub fn run_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index)
}

/// The generator used for one run. `seed_from_u64` expands the 64-bit seed
/// through PCG32, so neighbouring seeds give unrelated ChaCha streams.
pub fn rng_for_run(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A running simulation under a uniformly random scheduler.
pub struct Simulation<'p, P: Protocol + ?Sized> {
    protocol: &'p P,
    state: PrisonState,
    rng: ChaCha8Rng,
    done: bool,
}

impl<'p, P: Protocol + ?Sized> Simulation<'p, P> {
    pub fn new(protocol: &'p P, state: PrisonState, rng: ChaCha8Rng) -> Result<Self, SimError> {
        if state.n < 2 {
            return Err(SimError::Setup("need at least two prisoners"));
        }
        Ok(Simulation {
            protocol,
            state,
            rng,
            done: false,
        })
    }

    pub fn state(&self) -> &PrisonState {
        &self.state
    }

    /// One interrogation. Returns true once the prisoners are free.
    pub fn step(&mut self) -> Result<bool, SimError> {
        if self.done {
            return Ok(true);
        }
        let n = self.state.n;
        let prisoner = self.rng.random_range(0..n as usize);
        let visit = Visit {
            prisoner,
            token: self.state.tokens[prisoner],
            light: self.state.light,
            n,
        };
        let action = self.protocol.decide(visit, &mut self.rng)?;
        self.done = self.state.apply(prisoner, action)?;
        Ok(self.done)
    }

    /// Runs until an announcement or until `cap` days have passed in total.
    pub fn run(&mut self, cap: u64) -> Result<RunOutcome, SimError> {
        self.state.check_conservation()?;
        while self.state.day < cap {
            if self.step()? {
                self.state.check_conservation()?;
                return Ok(RunOutcome::Escaped {
                    day: self.state.day,
                });
            }
            if self.state.day.is_multiple_of(CONSERVATION_CHECK_PERIOD) {
                self.state.check_conservation()?;
            }
        }
        self.state.check_conservation()?;
        Ok(RunOutcome::CapExceeded {
            days: self.state.day,
        })
    }
}

/// One run from the initial state with the generator for `seed`.
pub fn simulate<P: Protocol + ?Sized>(
    protocol: &P,
    n: u32,
    seed: u64,
    cap: u64,
) -> Result<RunOutcome, SimError> {
    if cap == 0 {
        return Err(SimError::Setup("step cap must be at least 1"));
    }
    Simulation::new(protocol, PrisonState::initial(n), rng_for_run(seed))?.run(cap)
}
