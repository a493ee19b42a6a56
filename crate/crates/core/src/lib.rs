//! Additive generators for Archimedean t-norms and the machinery built on them.
//!
//! A strictly decreasing `g: [0,1] -> [0,+inf]` with `g(1) = 0` generates a
//! t-norm `T(x,y) = g^{-1}(min{g(0+), g(x)+g(y)})`. This crate implements the
//! Lukasiewicz, Product, Schweizer-Sklar and Frank generator families, their
//! pseudo-inverses and derivatives, the induced residuum and bi-residuum, the
//! Godel and Drastic catalog t-norms, and a grid-based aggregation-function
//! classifier.
//!
//! `g(0+) = +inf` is represented by `f64::INFINITY`; IEEE comparison semantics
//! give the required ordering against finite values. Strict generators clamp
//! arguments below `eps` to `eps` so that every evaluation is finite; clamp
//! events are reported to the caller through the flagged entry points.

mod classify;
mod generator;
mod rng;
mod tnorm;

pub use classify::{classify_aggregator, AggregatorClass};
pub use generator::{GeneratorError, GeneratorFamily, GeneratorSpec, Strictness, DEFAULT_EPS};
pub use rng::XorShift64Star;
pub use tnorm::{TNormKind, TNormOp};
