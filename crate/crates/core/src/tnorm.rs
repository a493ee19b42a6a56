//! T-norm evaluation: generated kinds plus the Godel and Drastic catalog.

use crate::generator::{GeneratorSpec, Strictness};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TNormKind {
    /// `T(x,y) = g^{-1}(min{g(0+), g(x)+g(y)})` for an additive generator g.
    Generated(GeneratorSpec),
    /// `min(x,y)`. Continuous but not Archimedean; admits no generator.
    Godel,
    /// 0 everywhere except when an argument is 1. Not continuous; admits no
    /// continuous generator.
    Drastic,
}

/// A binary aggregator on the unit square with cached strictness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TNormOp {
    kind: TNormKind,
    strictness: Strictness,
}

impl TNormOp {
    pub fn generated(spec: GeneratorSpec) -> Self {
        TNormOp {
            kind: TNormKind::Generated(spec),
            strictness: spec.strictness(),
        }
    }

    pub fn godel() -> Self {
        TNormOp {
            kind: TNormKind::Godel,
            strictness: Strictness::NotArchimedean,
        }
    }

    /// Strictness is stored as Nilpotent purely for dispatch; Drastic never
    /// participates in generator translation.
    pub fn drastic() -> Self {
        TNormOp {
            kind: TNormKind::Drastic,
            strictness: Strictness::Nilpotent,
        }
    }

    pub fn kind(&self) -> TNormKind {
        self.kind
    }

    pub fn strictness(&self) -> Strictness {
        self.strictness
    }

    /// The underlying generator, when this op has one.
    pub fn generator(&self) -> Option<GeneratorSpec> {
        match self.kind {
            TNormKind::Generated(spec) => Some(spec),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
        match self.kind {
            TNormKind::Generated(spec) => spec.tnorm(x, y),
            TNormKind::Godel => x.min(y),
            TNormKind::Drastic => {
                if x == 1.0 {
                    y
                } else if y == 1.0 {
                    x
                } else {
                    0.0
                }
            }
        }
    }

    /// De Morgan dual under `n(x) = 1 - x`.
    pub fn conorm(&self, x: f64, y: f64) -> f64 {
        1.0 - self.eval(1.0 - x, 1.0 - y)
    }
}
