//! Finite grounding domains: sample sets, task predicates, known predicates.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::LogicError;

/// Index of a registered task predicate. Stable across every expression
/// compiled against the same domain, so gradients can be routed by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredId(pub usize);

impl fmt::Display for PredId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

type KnownFn = Arc<dyn Fn(&[usize]) -> f64 + Send + Sync>;

struct KnownPred {
    arity: usize,
    eval: KnownFn,
}

struct TaskPred {
    name: String,
    arity: usize,
}

/// Finite sample sets plus the predicate registry formulas are compiled
/// against. Task predicates resolve to learned outputs at evaluation time;
/// known predicates are evaluated here, at compile time, and must return
/// exactly 0 or 1.
pub struct GroundingDomain {
    items: Vec<usize>,
    var_overrides: HashMap<String, Vec<usize>>,
    preds: Vec<TaskPred>,
    by_name: HashMap<String, PredId>,
    known: HashMap<String, KnownPred>,
}

impl GroundingDomain {
    /// `items` is the default sample set every quantified variable ranges
    /// over unless overridden per variable name.
    pub fn new(items: Vec<usize>) -> Self {
        GroundingDomain {
            items,
            var_overrides: HashMap::new(),
            preds: Vec::new(),
            by_name: HashMap::new(),
            known: HashMap::new(),
        }
    }

    /// Registers a task predicate; re-registering with the same arity
    /// returns the existing id.
    pub fn register_predicate(&mut self, name: &str, arity: usize) -> Result<PredId, LogicError> {
        if let Some(&id) = self.by_name.get(name) {
            let declared = self.preds[id.0].arity;
            if declared != arity {
                return Err(LogicError::ArityMismatch {
                    pred: name.to_string(),
                    expected: declared,
                    found: arity,
                    line: 0,
                    col: 0,
                });
            }
            return Ok(id);
        }
        let id = PredId(self.preds.len());
        self.preds.push(TaskPred {
            name: name.to_string(),
            arity,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    /// Registers a known predicate evaluated during compilation. Outputs are
    /// checked to be exactly 0 or 1 at each grounding.
    pub fn register_known<F>(&mut self, name: &str, arity: usize, eval: F)
    where
        F: Fn(&[usize]) -> f64 + Send + Sync + 'static,
    {
        self.known.insert(
            name.to_string(),
            KnownPred {
                arity,
                eval: Arc::new(eval),
            },
        );
    }

    /// Restricts one variable to its own sample set.
    pub fn set_var_domain(&mut self, var: &str, items: Vec<usize>) {
        self.var_overrides.insert(var.to_string(), items);
    }

    pub fn items_for(&self, var: &str) -> &[usize] {
        self.var_overrides
            .get(var)
            .map(Vec::as_slice)
            .unwrap_or(&self.items)
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn pred(&self, name: &str) -> Option<PredId> {
        self.by_name.get(name).copied()
    }

    pub fn pred_name(&self, id: PredId) -> &str {
        &self.preds[id.0].name
    }

    pub fn pred_arity(&self, id: PredId) -> usize {
        self.preds[id.0].arity
    }

    pub fn num_predicates(&self) -> usize {
        self.preds.len()
    }

    pub(crate) fn resolve_task(&self, name: &str, arity: usize) -> Result<PredId, LogicError> {
        let id = self
            .pred(name)
            .ok_or_else(|| LogicError::UnknownPredicate {
                name: name.to_string(),
            })?;
        let declared = self.pred_arity(id);
        if declared != arity {
            return Err(LogicError::ArityMismatch {
                pred: name.to_string(),
                expected: declared,
                found: arity,
                line: 0,
                col: 0,
            });
        }
        Ok(id)
    }

    pub(crate) fn eval_known(&self, name: &str, args: &[usize]) -> Result<f64, LogicError> {
        let kp = self
            .known
            .get(name)
            .ok_or_else(|| LogicError::UnknownPredicate {
                name: format!("@{name}"),
            })?;
        if kp.arity != args.len() {
            return Err(LogicError::ArityMismatch {
                pred: format!("@{name}"),
                expected: kp.arity,
                found: args.len(),
                line: 0,
                col: 0,
            });
        }
        let v = (kp.eval)(args);
        if v != 0.0 && v != 1.0 {
            return Err(LogicError::KnownPredicateRange {
                name: name.to_string(),
                value: v,
            });
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registration_is_idempotent_per_arity() {
        let mut dom = GroundingDomain::new(vec![0, 1, 2]);
        let a = dom.register_predicate("P1", 1).unwrap();
        let b = dom.register_predicate("P1", 1).unwrap();
        assert_eq!(a, b);
        assert!(dom.register_predicate("P1", 2).is_err());
        assert_eq!(dom.pred_name(a), "P1");
    }

    #[test]
    fn variable_overrides_take_precedence() {
        let mut dom = GroundingDomain::new(vec![0, 1, 2]);
        dom.set_var_domain("y", vec![7, 8]);
        assert_eq!(dom.items_for("x"), &[0, 1, 2]);
        assert_eq!(dom.items_for("y"), &[7, 8]);
    }

    #[test]
    fn known_predicates_must_be_boolean() {
        let mut dom = GroundingDomain::new(vec![0, 1]);
        dom.register_known("S1", 1, |args| if args[0] == 0 { 1.0 } else { 0.0 });
        dom.register_known("Bad", 1, |_| 0.5);
        assert_eq!(dom.eval_known("S1", &[0]).unwrap(), 1.0);
        assert_eq!(dom.eval_known("S1", &[1]).unwrap(), 0.0);
        assert!(matches!(
            dom.eval_known("Bad", &[0]),
            Err(LogicError::KnownPredicateRange { .. })
        ));
        assert!(matches!(
            dom.eval_known("Missing", &[0]),
            Err(LogicError::UnknownPredicate { .. })
        ));
    }
}
