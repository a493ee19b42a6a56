//! Formula AST and its precedence-aware printer.

use std::fmt;

/// First-order formula over unary-or-wider predicates and quantified
/// variables. `Atom` names a task predicate (learned), `KnownAtom` a given
/// predicate evaluated at grounding time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom { pred: String, args: Vec<String> },
    KnownAtom { pred: String, args: Vec<String> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall { var: String, body: Box<Formula> },
    Exists { var: String, body: Box<Formula> },
}

/// Binding power; higher binds tighter. Quantifiers reach as far right as
/// possible, so they carry the loosest power.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Forall { .. } | Formula::Exists { .. } => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) => 5,
        Formula::Atom { .. } | Formula::KnownAtom { .. } => 6,
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, pred: &str, args: &[String]) -> fmt::Result {
    write!(f, "{pred}(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

/// Prints `node`, parenthesizing when its own binding power is below what
/// the parent position requires. Left operands of the left-associative
/// connectives get `min_prec = own`, right operands `own + 1`; the
/// right-associative arrows are mirrored.
fn write_prec(f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
    let own = prec(node);
    if own < min_prec {
        write!(f, "(")?;
        write_prec(f, node, 0)?;
        return write!(f, ")");
    }
    match node {
        Formula::Atom { pred, args } => write_atom(f, pred, args),
        Formula::KnownAtom { pred, args } => {
            write!(f, "@")?;
            write_atom(f, pred, args)
        }
        Formula::Not(inner) => {
            write!(f, "~")?;
            write_prec(f, inner, own)
        }
        Formula::And(l, r) => {
            write_prec(f, l, own)?;
            write!(f, " & ")?;
            write_prec(f, r, own + 1)
        }
        Formula::Or(l, r) => {
            write_prec(f, l, own)?;
            write!(f, " | ")?;
            write_prec(f, r, own + 1)
        }
        Formula::Implies(l, r) => {
            write_prec(f, l, own + 1)?;
            write!(f, " -> ")?;
            write_prec(f, r, own)
        }
        Formula::Iff(l, r) => {
            write_prec(f, l, own + 1)?;
            write!(f, " <-> ")?;
            write_prec(f, r, own)
        }
        Formula::Forall { var, body } => {
            write!(f, "forall {var}: ")?;
            write_prec(f, body, 0)
        }
        Formula::Exists { var, body } => {
            write!(f, "exists {var}: ")?;
            write_prec(f, body, 0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(f, self, 0)
    }
}

impl Formula {
    /// Free variables would violate the closed-formula invariant; the parser
    /// rejects them, and compiled formulas may assume emptiness.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::KnownAtom { .. } => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Forall { .. } | Formula::Exists { .. } => false,
        }
    }
}
