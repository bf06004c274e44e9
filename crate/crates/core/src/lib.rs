// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha_core;
pub mod cli;
pub mod convex_body;
pub mod digest;
pub mod error;
pub mod layercake;
pub mod mixed_integral;
pub mod oracle;
pub mod rearrange;
pub mod report;
pub mod rng;
pub mod sample;

pub use alpha_core::{ConvexProfile, RadialAlphaProfile};
pub use convex_body::{mixed_volume, BallApprox, Polytope};
pub use error::{Error, Result};
pub use layercake::{Layer, LayerCake, MaxOutcome};
