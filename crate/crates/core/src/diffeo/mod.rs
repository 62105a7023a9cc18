//! Volume-preserving diffeomorphisms of `T^N` as words in exactly invertible
//! primitives, with exact Jacobians and pushforwards of metrics and complex
//! structures.
//!
//! A word `l_1 ... l_m` means `l_1 o ... o l_m`. Every primitive carries its
//! inverse in closed form, so `w^-1` is evaluated without any root finding.

mod isotopy;
mod primitive;
mod push;
mod word;

pub use isotopy::Isotopy;
pub use primitive::{Primitive, Scalar};
pub use push::{
    pushforward_j, pushforward_metric, BaseJ, BaseMetric, PushedJ, PushedMetric, PUSH_TOL,
};
pub use word::{DiffeoWord, Letter, LetterSpec};
