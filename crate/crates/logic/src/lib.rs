//! First-order formulas compiled into differentiable fuzzy-logic losses.
//!
//! The pipeline: parse a formula, ground its quantifiers over finite sample
//! sets, translate connectives through a generated t-norm, and emit a
//! [`LossExpr`] DAG whose inputs are learned predicate outputs. Universal
//! quantifiers translate either as minima over groundings or through the
//! additive-generator form whose penalty is a plain sum in g-space; that
//! choice is what makes one loss a cross-entropy and another an L1 distance.

mod ast;
mod compile;
mod convexity;
mod domain;
mod error;
mod expr;
mod parser;

pub use ast::Formula;
pub use compile::{
    generator_of, kb_loss, loss_universal, parse_kb, positive_supervision_loss, supervision_loss,
    translate_connectives, translate_quantifier_generator, translate_quantifier_minmax,
    KnowledgeBase, QuantifierMode,
};
pub use convexity::convexity_probe;
pub use domain::{GroundingDomain, PredId};
pub use error::LogicError;
pub use expr::{Evaluated, ExprBuilder, LossExpr, Node, NodeId, Slot, SlotId};
pub use parser::parse_formula;
