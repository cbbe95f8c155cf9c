//! One hundred prisoners and a light bulb.
//!
//! Every protocol here is phrased in terms of tokens: each prisoner starts
//! with one, switching the light on deposits a token into the bulb and
//! switching it off collects it. A prisoner who gathers all `n` tokens knows
//! that everybody has been in the room.

mod closed_form;
mod counter;
mod exact;
mod protocol;
mod sim;

pub use closed_form::closed_form_t3;
pub use counter::{exact_counter_expectation, CounterChain, CounterState};
pub use exact::{
    endgame_expectation, exact_uniform_expectation, ExpectedTime, ExpectedTimeTable,
    TokenConfiguration, EXACT_STATE_LIMIT, MAX_UNIFORM_N,
};
pub use protocol::{
    default_counter_probability, Action, CounterProtocol, MixedProtocol, Protocol, ProtocolError,
    UniformProtocol, Visit,
};
pub use sim::{
    rng_for_run, run_seed, simulate, PrisonState, RunOutcome, SimError, Simulation,
    DEFAULT_STEP_CAP,
};

/// Days per year used when reporting durations.
pub const DAYS_PER_YEAR: f64 = 365.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Light {
    Off,
    On,
}

impl Light {
    pub fn is_on(self) -> bool {
        self == Light::On
    }
}

impl core::fmt::Display for Light {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Light::Off => "off",
            Light::On => "on",
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("prisoner count {n} outside the supported range {min}..={max}")]
    OutOfRange { n: u32, min: u32, max: u32 },
    #[error("formula undefined: token sum is zero")]
    ZeroTokens,
    #[error("linear system is singular")]
    Singular,
    #[error("residual {residual:e} exceeds tolerance")]
    Residual { residual: f64 },
}
