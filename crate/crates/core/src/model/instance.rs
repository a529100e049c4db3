use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{invalid, Result};
use crate::rng::{derive_seed, rng_from_seed, PLANTED_STREAM};

/// How the hidden permutation is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PlantedMode {
    #[default]
    Random,
    Identity,
}

/// Everything needed to regenerate an instance bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub d: usize,
    pub sigma2: f64,
    pub seed: u64,
    #[serde(default)]
    pub planted: PlantedMode,
}

impl InstanceSpec {
    pub fn new(n: usize, d: usize, sigma2: f64, seed: u64) -> Self {
        Self {
            n,
            d,
            sigma2,
            seed,
            planted: PlantedMode::Random,
        }
    }

    pub fn with_planted(mut self, planted: PlantedMode) -> Self {
        self.planted = planted;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.d < 1 {
            return Err(invalid(format!(
                "need n >= 1 and d >= 1, got n={} d={}",
                self.n, self.d
            )));
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(invalid(format!(
                "sigma2 must be finite and >= 0, got {}",
                self.sigma2
            )));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Instance> {
        self.validate()?;
        let (n, d) = (self.n, self.d);
        let mut rng = rng_from_seed(self.seed);
        let x = Array2::from_shape_simple_fn((n, d), || rng.sample::<f64, _>(StandardNormal));
        let sigma = self.sigma2.sqrt();
        let noise =
            Array2::from_shape_simple_fn((n, d), || sigma * rng.sample::<f64, _>(StandardNormal));
        let planted = match self.planted {
            PlantedMode::Identity => Permutation::identity(n),
            PlantedMode::Random => {
                let mut prng = rng_from_seed(derive_seed(self.seed, &[PLANTED_STREAM]));
                Permutation::random(n, &mut prng)
            }
        };
        let mut y = Array2::zeros((n, d));
        for i in 0..n {
            let row = &x.row(i) + &noise.row(i);
            y.row_mut(planted.apply(i)).assign(&row);
        }
        Ok(Instance {
            spec: *self,
            x,
            y,
            noise,
            planted,
        })
    }
}

/// A generated problem: `y[planted(i)] = x[i] + noise[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub x: Array2<f64>,
    pub y: Array2<f64>,
    pub noise: Array2<f64>,
    pub planted: Permutation,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn d(&self) -> usize {
        self.spec.d
    }
}

/// Instance with a uniformly random planted permutation.
pub fn generate_instance(n: usize, d: usize, sigma2: f64, seed: u64) -> Result<Instance> {
    InstanceSpec::new(n, d, sigma2, seed).generate()
}
