//! Print-parse round trip on randomly generated closed formulas.

use genloss_core::XorShift64Star;
use genloss_logic::{parse_formula, Formula};

// Fixed predicate table; arities stay consistent by construction.
const TASK_PREDS: &[(&str, usize)] = &[("P1", 1), ("P2", 1), ("R1", 2)];
const KNOWN_PREDS: &[(&str, usize)] = &[("S1", 1), ("K1", 2)];

struct Gen {
    rng: XorShift64Star,
    next_var: usize,
}

impl Gen {
    fn fresh_var(&mut self) -> String {
        let v = format!("v{}", self.next_var);
        self.next_var += 1;
        v
    }

    fn atom(&mut self, scope: &[String]) -> Formula {
        let known = self.rng.next_below(4) == 0;
        let (pred, arity) = if known {
            KNOWN_PREDS[self.rng.next_below(KNOWN_PREDS.len() as u64) as usize]
        } else {
            TASK_PREDS[self.rng.next_below(TASK_PREDS.len() as u64) as usize]
        };
        let args = (0..arity)
            .map(|_| scope[self.rng.next_below(scope.len() as u64) as usize].clone())
            .collect();
        if known {
            Formula::KnownAtom {
                pred: pred.into(),
                args,
            }
        } else {
            Formula::Atom {
                pred: pred.into(),
                args,
            }
        }
    }

    fn quantified(&mut self, scope: &mut Vec<String>, depth: usize) -> Formula {
        let var = self.fresh_var();
        scope.push(var.clone());
        let body = Box::new(self.body(scope, depth));
        scope.pop();
        if self.rng.next_below(2) == 0 {
            Formula::Forall { var, body }
        } else {
            Formula::Exists { var, body }
        }
    }

    fn body(&mut self, scope: &mut Vec<String>, depth: usize) -> Formula {
        if depth == 0 {
            return self.atom(scope);
        }
        match self.rng.next_below(8) {
            0 => Formula::Not(Box::new(self.body(scope, depth - 1))),
            1 => Formula::And(
                Box::new(self.body(scope, depth - 1)),
                Box::new(self.body(scope, depth - 1)),
            ),
            2 => Formula::Or(
                Box::new(self.body(scope, depth - 1)),
                Box::new(self.body(scope, depth - 1)),
            ),
            3 => Formula::Implies(
                Box::new(self.body(scope, depth - 1)),
                Box::new(self.body(scope, depth - 1)),
            ),
            4 => Formula::Iff(
                Box::new(self.body(scope, depth - 1)),
                Box::new(self.body(scope, depth - 1)),
            ),
            5 => self.quantified(scope, depth - 1),
            _ => self.atom(scope),
        }
    }

    fn formula(&mut self, depth: usize) -> Formula {
        let mut scope = Vec::new();
        // Outermost is always a quantifier so every formula is closed.
        let var = self.fresh_var();
        scope.push(var.clone());
        let body = Box::new(self.body(&mut scope, depth));
        Formula::Forall { var, body }
    }
}

#[test]
fn printed_formulas_reparse_to_the_same_ast() {
    let mut g = Gen {
        rng: XorShift64Star::new(0x5EED),
        next_var: 0,
    };
    for i in 0..1000 {
        g.next_var = 0;
        let f = g.formula(4);
        let printed = f.to_string();
        let reparsed = parse_formula(&printed)
            .unwrap_or_else(|e| panic!("iteration {i}: `{printed}` failed to reparse: {e}"));
        assert_eq!(reparsed, f, "iteration {i}: `{printed}`");
    }
}

#[test]
fn frozen_examples_round_trip() {
    for text in [
        "forall x: @S1(x) <-> P1(x)",
        "forall x: P1(x) -> P2(x)",
        "forall x: ~P1(x) & P2(x) | P1(x)",
        "forall x: (exists y: R1(x,y)) -> P1(x)",
        "forall x: P1(x) -> P2(x) -> P1(x)",
    ] {
        let f = parse_formula(text).unwrap();
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{text}");
    }
}
