//! Cost-model specification and reproducible random cost generation.
//!
//! Each item draws independently from a uniform, exponential, or
//! Beta(alpha,1) distribution. A cost vector is a pure function of
//! `(master_seed, replication)`: replication `r` reads stream `r` of a
//! counter-mode ChaCha generator, so replications can run in any order
//! on any number of workers and still reproduce bit for bit. Exact float
//! ties inside a vector (probability zero, but representable) trigger a
//! salted redraw that is itself deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// One item's cost distribution. Supports on `(0, upper)`, `(0, inf)`
/// and `(0, 1)` respectively; every density is continuous, so ties are
/// null events.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case")]
pub enum Dist<S> {
    /// Uniform on `(0, upper)`.
    Uniform { upper: S },
    /// Exponential with the given rate (mean `1/rate`).
    Exponential { rate: S },
    /// Beta(alpha, 1): density `alpha * x^(alpha-1)` on `(0, 1)`.
    Beta { alpha: S },
}

impl<S: Scalar> Dist<S> {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Dist::Uniform { upper } => *upper > S::zero() && upper.is_finite(),
            Dist::Exponential { rate } => *rate > S::zero() && rate.is_finite(),
            Dist::Beta { alpha } => *alpha > S::zero() && alpha.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "distribution parameter must be positive and finite: {self:?}"
            )))
        }
    }

    /// Inverse CDF at `p` in (0,1); Beta uses `p^(1/alpha)` directly.
    pub fn quantile(&self, p: S) -> S {
        match self {
            Dist::Uniform { upper } => *upper * p,
            Dist::Exponential { rate } => -(S::one() - p).ln() / *rate,
            Dist::Beta { alpha } => p.powf(S::one() / *alpha),
        }
    }

    /// CDF at `x >= 0`.
    pub fn cdf(&self, x: S) -> S {
        if x <= S::zero() {
            return S::zero();
        }
        match self {
            Dist::Uniform { upper } => (x / *upper).min(S::one()),
            Dist::Exponential { rate } => -(-(*rate) * x).exp_m1(),
            Dist::Beta { alpha } => {
                if x >= S::one() {
                    S::one()
                } else {
                    x.powf(*alpha)
                }
            }
        }
    }

    /// Closed-form conditional expectation `E[X | X <= v]` for `v > 0`.
    pub fn conditional_mean_below(&self, v: S) -> Result<S> {
        if !(v > S::zero()) {
            return Err(Error::InvalidParameter(
                "conditional mean requires v > 0".into(),
            ));
        }
        self.validate()?;
        let two = S::from_f64(2.0).expect("2 fits");
        Ok(match self {
            Dist::Uniform { upper } => v.min(*upper) / two,
            // 1/rate - v / (e^(rate v) - 1), with expm1 for stability
            Dist::Exponential { rate } => S::one() / *rate - v / (*rate * v).exp_m1(),
            Dist::Beta { alpha } => *alpha / (*alpha + S::one()) * v.min(S::one()),
        })
    }
}

/// Identifies one replication of one experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub replication: u64,
}

/// Per-item independent distributions for a whole instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostModel<S> {
    dists: Vec<Dist<S>>,
}

impl<S: Scalar> CostModel<S> {
    pub fn per_item(dists: Vec<Dist<S>>) -> Result<Self> {
        if dists.is_empty() {
            return Err(Error::InvalidParameter("cost model has no items".into()));
        }
        for d in &dists {
            d.validate()?;
        }
        Ok(CostModel { dists })
    }

    /// The same distribution for every item.
    pub fn iid(len: usize, dist: Dist<S>) -> Result<Self> {
        CostModel::per_item(vec![dist; len])
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    pub fn dists(&self) -> &[Dist<S>] {
        &self.dists
    }

    /// True when every item draws Uniform(0,1).
    pub fn is_standard_uniform(&self) -> bool {
        self.dists.iter().all(|d| match d {
            Dist::Uniform { upper } => (upper.as_f64() - 1.0).abs() < 1e-15,
            _ => false,
        })
    }

    /// One cost vector for the given replication; bit-identical across
    /// runs and worker layouts.
    pub fn sample(&self, seed: SeedSpec) -> Vec<S> {
        self.sample_counting(seed).0
    }

    /// As [`CostModel::sample`], also reporting how many salted redraws
    /// the tie guard used (normally zero).
    pub fn sample_counting(&self, seed: SeedSpec) -> (Vec<S>, u32) {
        let mut salt = 0u32;
        loop {
            let mut rng = rng_for(seed, salt);
            let costs: Vec<S> = self
                .dists
                .iter()
                .map(|d| {
                    // open-interval uniform: reject the exact 0
                    let mut u = rng.random::<f64>();
                    while u == 0.0 {
                        u = rng.random::<f64>();
                    }
                    d.quantile(S::from_f64_lossy(u))
                })
                .collect();
            if distinct(&costs) {
                return (costs, salt);
            }
            salt += 1;
        }
    }
}

fn distinct<S: Scalar>(costs: &[S]) -> bool {
    let mut sorted = costs.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Counter-mode generator: the master seed keys the cipher, the
/// replication index selects the stream, the tie salt re-keys.
fn rng_for(seed: SeedSpec, salt: u32) -> ChaCha8Rng {
    let key = seed
        .master_seed
        .wrapping_add(u64::from(salt).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(seed.replication);
    rng
}
