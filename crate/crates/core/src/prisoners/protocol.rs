use alloc::string::String;
use alloc::sync::Arc;
use rand::{Rng, RngCore};

use super::Light;

/// What the prisoner in the room sees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub prisoner: usize,
    pub token: u32,
    pub light: Light,
    pub n: u32,
}

/// What the prisoner in the room does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Nothing,
    /// Switch the light on, giving up one token.
    Deposit,
    /// Switch the light off, taking one token.
    Collect,
    /// Declare that everybody has been interrogated.
    Announce,
    /// Collect the last token and announce in the same visit.
    CollectAndAnnounce,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ProtocolError {
    #[error("counter probability {p} for token {token} is not in [0, 1]")]
    InvalidProbability { token: u32, p: f64 },
}

pub trait Protocol: Send + Sync {
    fn id(&self) -> &str;

    fn decide(&self, visit: Visit, rng: &mut dyn RngCore) -> Result<Action, ProtocolError>;
}

/// One designated counter collects; every other prisoner switches the light
/// on exactly once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterProtocol {
    pub counter: usize,
}

impl CounterProtocol {
    pub fn new(counter: usize) -> Self {
        CounterProtocol { counter }
    }
}

impl Protocol for CounterProtocol {
    fn id(&self) -> &str {
        "counter"
    }

    fn decide(&self, v: Visit, _rng: &mut dyn RngCore) -> Result<Action, ProtocolError> {
        Ok(if v.prisoner == self.counter {
            match v.light {
                Light::On if v.token + 1 >= v.n => Action::CollectAndAnnounce,
                Light::On => Action::Collect,
                Light::Off => Action::Nothing,
            }
        } else {
            match v.light {
                Light::Off if v.token > 0 => Action::Deposit,
                _ => Action::Nothing,
            }
        })
    }
}

/// Everybody runs the same deterministic token rule: deposit when the light
/// is off, collect when it is on, announce when holding `n - 1` with the
/// light on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UniformProtocol;

impl Protocol for UniformProtocol {
    fn id(&self) -> &str {
        "uniform"
    }

    fn decide(&self, v: Visit, _rng: &mut dyn RngCore) -> Result<Action, ProtocolError> {
        Ok(match (v.token, v.light) {
            (0, _) => Action::Nothing,
            (_, Light::Off) => Action::Deposit,
            (t, Light::On) if t + 1 == v.n => Action::Announce,
            (_, Light::On) => Action::Collect,
        })
    }
}

type Policy = dyn Fn(u32, u32) -> f64 + Send + Sync;

/// Each visit the prisoner acts as counter with probability `policy(token, n)`,
/// otherwise as follower. Counters collect when the light is on; followers
/// deposit when it is off.
#[derive(Clone)]
pub struct MixedProtocol {
    policy: Arc<Policy>,
    name: String,
}

/// Even odds up to half the tokens, always counting above.
pub fn default_counter_probability(token: u32, n: u32) -> f64 {
    if 2 * token > n {
        1.0
    } else {
        0.5
    }
}

impl MixedProtocol {
    pub fn new(policy: impl Fn(u32, u32) -> f64 + Send + Sync + 'static) -> Self {
        MixedProtocol {
            policy: Arc::new(policy),
            name: "mixed".into(),
        }
    }

    /// A protocol whose counter probability ignores the token value.
    pub fn constant(p: f64) -> Self {
        Self::new(move |_, _| p)
    }
}

impl Default for MixedProtocol {
    fn default() -> Self {
        Self::new(default_counter_probability)
    }
}

impl core::fmt::Debug for MixedProtocol {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MixedProtocol")
            .field("name", &self.name)
            .finish()
    }
}

impl Protocol for MixedProtocol {
    fn id(&self) -> &str {
        &self.name
    }

    fn decide(&self, v: Visit, rng: &mut dyn RngCore) -> Result<Action, ProtocolError> {
        if v.token == 0 {
            return Ok(Action::Nothing);
        }
        let p = (self.policy)(v.token, v.n);
        if !(0.0..=1.0).contains(&p) {
            return Err(ProtocolError::InvalidProbability { token: v.token, p });
        }
        let counter = rng.random_bool(p);
        Ok(match (counter, v.light) {
            (true, Light::On) if v.token + 1 >= v.n => Action::CollectAndAnnounce,
            (true, Light::On) => Action::Collect,
            (false, Light::Off) => Action::Deposit,
            _ => Action::Nothing,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn visit(prisoner: usize, token: u32, light: Light, n: u32) -> Visit {
        Visit {
            prisoner,
            token,
            light,
            n,
        }
    }

    #[test]
    fn counter_rules() {
        let p = CounterProtocol::new(0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut d = |v| p.decide(v, &mut rng).unwrap();
        assert_eq!(d(visit(1, 0, Light::Off, 5)), Action::Nothing);
        assert_eq!(d(visit(1, 1, Light::Off, 5)), Action::Deposit);
        assert_eq!(d(visit(1, 1, Light::On, 5)), Action::Nothing);
        assert_eq!(d(visit(0, 1, Light::Off, 5)), Action::Nothing);
        assert_eq!(d(visit(0, 3, Light::On, 5)), Action::Collect);
        assert_eq!(d(visit(0, 4, Light::On, 5)), Action::CollectAndAnnounce);
    }

    #[test]
    fn uniform_rules() {
        let p = UniformProtocol;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut d = |v| p.decide(v, &mut rng).unwrap();
        assert_eq!(d(visit(3, 0, Light::Off, 100)), Action::Nothing);
        assert_eq!(d(visit(3, 0, Light::On, 100)), Action::Nothing);
        assert_eq!(d(visit(3, 7, Light::Off, 100)), Action::Deposit);
        assert_eq!(d(visit(3, 7, Light::On, 100)), Action::Collect);
        assert_eq!(d(visit(3, 99, Light::On, 100)), Action::Announce);
        assert_eq!(d(visit(3, 98, Light::On, 100)), Action::Collect);
    }

    #[test]
    fn mixed_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let always = MixedProtocol::constant(1.0);
        assert_eq!(
            always.decide(visit(0, 3, Light::Off, 4), &mut rng).unwrap(),
            Action::Nothing
        );
        assert_eq!(
            always.decide(visit(0, 3, Light::On, 4), &mut rng).unwrap(),
            Action::CollectAndAnnounce
        );
        let never = MixedProtocol::constant(0.0);
        assert_eq!(
            never.decide(visit(0, 3, Light::Off, 4), &mut rng).unwrap(),
            Action::Deposit
        );
        assert_eq!(
            never.decide(visit(0, 3, Light::On, 4), &mut rng).unwrap(),
            Action::Nothing
        );
        assert_eq!(
            never.decide(visit(0, 0, Light::Off, 4), &mut rng).unwrap(),
            Action::Nothing
        );
        let bad = MixedProtocol::constant(1.5);
        assert!(bad.decide(visit(0, 1, Light::Off, 4), &mut rng).is_err());
    }

    #[test]
    fn default_policy_shape() {
        assert_eq!(default_counter_probability(1, 100), 0.5);
        assert_eq!(default_counter_probability(50, 100), 0.5);
        assert_eq!(default_counter_probability(51, 100), 1.0);
    }
}
