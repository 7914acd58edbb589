//! VCG procurement auctions over matroids and explicit set systems.
//!
//! A procurement instance pairs a system of desired structures (the bases of
//! a matroid, or an explicit family of item sets) with per-item costs. The
//! buyer pays each selected item its VCG threshold: the most the item could
//! have cost and still been selected. This crate computes those quantities
//! exactly per instance and estimates their moments under random costs:
//!
//! * [`matroid`] — rank-oracle matroids (uniform, graphic, custom), bridge
//!   detection, and the greedy minimum-basis algorithm;
//! * [`set_system`] — explicit structure families with brute-force
//!   minimization;
//! * [`vcg`] — thresholds, incentive payments, extended thresholds, full
//!   auction outcomes, and an enumeration-backed cross-check;
//! * [`integrals`] — exact evaluation of the nominal cost, VCG total,
//!   per-item threshold, and sum-of-squares as step-function integrals of
//!   the rank and bridge-count profiles;
//! * [`sampling`] — reproducible cost generation for uniform, exponential
//!   and Beta(alpha,1) models;
//! * [`mc`] — replication engine, moment estimates with standard errors,
//!   conditional-law and conditional-uniformity studies, variance and
//!   monotonicity test suites, MST scaling sweeps;
//! * [`oracles`] — closed-form reference values used by tests and the
//!   experiment CLI.
//!
//! Core numerics are generic over the cost scalar through [`Scalar`]
//! (any `num_traits::Float`, in practice `f32` or `f64`); statistics are
//! aggregated in `f64`. Concrete aliases for the common instantiations
//! live at the crate root.

use std::fmt;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub mod bridge_tracker;
pub mod integrals;
pub mod matroid;
pub mod mc;
pub mod oracles;
pub mod sampling;
pub mod set_system;
pub mod stats;
pub mod vcg;

/// Cost scalar used by the core algorithms.
///
/// Blanket-implemented for every floating type that satisfies the bounds,
/// so `f32` and `f64` work out of the box.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Lossy view as `f64`, used when feeding statistics accumulators.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    /// Conversion from `f64`, used by samplers and closed forms.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to scalar")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// A cost value that may be infinite.
///
/// Deleting an item can leave no feasible structure, in which case the
/// minimum cost (and any threshold derived from it) is infinite. Infinities
/// are kept out of float arithmetic: they only ever appear as this variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtCost<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> ExtCost<S> {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtCost::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtCost::Infinite)
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<S> {
        match self {
            ExtCost::Finite(x) => Some(*x),
            ExtCost::Infinite => None,
        }
    }

    /// The finite value, panicking on infinity. For contexts where
    /// finiteness was already established (e.g. bridgeless matroids).
    pub fn expect_finite(&self, what: &str) -> S {
        self.finite()
            .unwrap_or_else(|| panic!("expected finite value for {what}"))
    }

    /// Difference `self - rhs` with the convention `inf - x = inf`.
    /// `inf - inf` is not meaningful and panics.
    pub fn sub_finite(&self, rhs: S) -> ExtCost<S> {
        match self {
            ExtCost::Finite(x) => ExtCost::Finite(*x - rhs),
            ExtCost::Infinite => ExtCost::Infinite,
        }
    }
}

impl<S: Scalar> PartialOrd for ExtCost<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match (self, other) {
            (ExtCost::Finite(a), ExtCost::Finite(b)) => a.partial_cmp(b),
            (ExtCost::Finite(_), ExtCost::Infinite) => Some(Ordering::Less),
            (ExtCost::Infinite, ExtCost::Finite(_)) => Some(Ordering::Greater),
            (ExtCost::Infinite, ExtCost::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl<S: Scalar + Serialize> Serialize for ExtCost<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        match self {
            ExtCost::Finite(x) => x.serialize(serializer),
            ExtCost::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de, S: Scalar> Deserialize<'de> for ExtCost<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtCostVisitor<S>(std::marker::PhantomData<S>);

        impl<'de, S: Scalar> Visitor<'de> for ExtCostVisitor<S> {
            type Value = ExtCost<S>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a finite number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                S::from_f64(v)
                    .map(ExtCost::Finite)
                    .ok_or_else(|| E::custom("value out of range for scalar"))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "inf" {
                    Ok(ExtCost::Infinite)
                } else {
                    Err(E::custom(format!("unexpected string {v:?}, want \"inf\"")))
                }
            }
        }

        deserializer.deserialize_any(ExtCostVisitor(std::marker::PhantomData))
    }
}

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("element {index} out of range for ground set of size {ground_size}")]
    ElementOutOfRange { index: usize, ground_size: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no finite basis: the available elements do not span the matroid")]
    NoFiniteBasis,

    #[error("structure family must contain at least one structure")]
    EmptyFamily,

    #[error("set {0:?} is dependent; an independent set is required")]
    DependentSet(Vec<usize>),

    #[error("matroid has bridges {bridges:?}; the total VCG cost is infinite")]
    BridgedMatroid { bridges: Vec<usize> },

    #[error("integral diverges: the element stays a bridge at every cost level")]
    DivergentIntegral,

    #[error("ground set of size {size} exceeds the enumeration guard ({limit})")]
    EnumerationGuard { size: usize, limit: usize },

    #[error("conditioning event too rare: {accepted} of {attempted} replications accepted")]
    LowAcceptance { accepted: usize, attempted: usize },

    #[error("no bin reached the minimum of {min_count} samples")]
    UnderpopulatedBins { min_count: usize },

    #[error("exact identity violated in {what}: relative deviation {deviation:.3e}")]
    IdentityViolation { what: String, deviation: f64 },

    #[error("cannot serialize a custom rank oracle")]
    UnserializableSystem,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use matroid::{GraphicMatroidSpec, Matroid, MatroidKind, MinBasis, UniformMatroidSpec};
pub use set_system::StructureFamily;
pub use vcg::{AuctionOutcome, Instance, System, SystemSpec};

/// Default-precision aliases for the generic core types.
pub type Instance64 = vcg::Instance<f64>;
pub type Instance32 = vcg::Instance<f32>;
pub type AuctionOutcome64 = vcg::AuctionOutcome<f64>;
pub type AuctionOutcome32 = vcg::AuctionOutcome<f32>;
pub type RankProfile64 = integrals::RankProfile<f64>;
pub type RankProfile32 = integrals::RankProfile<f32>;
pub type CostModel64 = sampling::CostModel<f64>;
pub type CostModel32 = sampling::CostModel<f32>;
pub type Template64 = mc::Template<f64>;
