use rand::Rng;

use crate::configuration::Configuration;
use crate::error::{invalid, Result};
use crate::rng::SeededRng;

/// A distribution over configurations.
pub trait ConfigSampler: Send + Sync {
    fn sample(&self, n: usize, rng: &mut SeededRng) -> Configuration;
}

/// Independent vertex states, each 0 with probability `p_zero`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliDistribution {
    p_zero: f64,
}

impl BernoulliDistribution {
    pub fn new(p_zero: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_zero) {
            return Err(invalid(format!("probability {p_zero} not in [0, 1]")));
        }
        Ok(BernoulliDistribution { p_zero })
    }

    pub fn p_zero(&self) -> f64 {
        self.p_zero
    }
}

impl ConfigSampler for BernoulliDistribution {
    fn sample(&self, n: usize, rng: &mut SeededRng) -> Configuration {
        let p_one = 1.0 - self.p_zero;
        Configuration::from_bits((0..n).map(|_| rng.gen_bool(p_one)))
    }
}

/// Uniform over the configurations of a recorded trajectory; every other
/// configuration has probability zero.
#[derive(Debug, Clone)]
pub struct TrajectoryReplay {
    configs: Vec<Configuration>,
}

impl TrajectoryReplay {
    pub fn new(configs: Vec<Configuration>) -> Result<Self> {
        let Some(first) = configs.first() else {
            return Err(invalid("trajectory must contain at least one configuration"));
        };
        if configs.iter().any(|c| c.len() != first.len()) {
            return Err(invalid("trajectory configurations differ in length"));
        }
        Ok(TrajectoryReplay { configs })
    }
}

impl ConfigSampler for TrajectoryReplay {
    fn sample(&self, n: usize, rng: &mut SeededRng) -> Configuration {
        let c = &self.configs[rng.gen_range(0..self.configs.len())];
        assert_eq!(c.len(), n, "trajectory length does not match n");
        c.clone()
    }
}
