//! Compilation of formulas into loss expressions.
//!
//! Connectives translate through the generated t-norm: conjunction is
//! `g^{-1}(min{g(0+), g(x)+g(y)})`, disjunction its De Morgan dual,
//! implication the residuum, equivalence the bi-residuum, and negation the
//! fixed involution `1 - x`. Quantifiers translate in one of two modes:
//! min/max over groundings, or the generator form that turns a universal
//! into `g^{-1}(min{g(0+), sum over x of g(body)})`. Applying `g` on top of
//! either truth value yields the penalty; for the generator form the
//! builder's rewrite collapses it to the direct sum shape, a plain sum in
//! g-space for strict generators and its capped variant for nilpotent ones.

use std::collections::HashMap;

use genloss_core::{GeneratorSpec, TNormKind, TNormOp};

use crate::ast::Formula;
use crate::domain::{GroundingDomain, PredId};
use crate::error::LogicError;
use crate::expr::{ExprBuilder, LossExpr, NodeId};
use crate::parser::parse_formula;

/// How quantifiers become aggregations over groundings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantifierMode {
    /// Universal is the minimum of the body over groundings, existential the
    /// maximum.
    MinMax,
    /// Universal follows the additive-generator form; existential still
    /// falls back to the maximum, which has no generator counterpart.
    Generator,
}

/// Weighted formulas plus the aggregator and quantifier mode they compile
/// under. Weights must be finite and non-negative.
pub struct KnowledgeBase {
    pub formulas: Vec<(Formula, f64)>,
    pub op: TNormOp,
    pub mode: QuantifierMode,
}

/// Only generated t-norms can drive compilation; the catalog entries have
/// no additive generator to build losses from.
pub fn generator_of(op: &TNormOp) -> Result<GeneratorSpec, LogicError> {
    match op.kind() {
        TNormKind::Generated(spec) => Ok(spec),
        TNormKind::Godel => Err(LogicError::UnsupportedGenerator {
            kind: "the Godel t-norm (min)".into(),
        }),
        TNormKind::Drastic => Err(LogicError::UnsupportedGenerator {
            kind: "the Drastic t-norm".into(),
        }),
    }
}

/// `min{g(0+), y}` as an expression; a no-op for strict generators.
fn cap_at_zero_limit(b: &mut ExprBuilder, spec: GeneratorSpec, y: NodeId) -> NodeId {
    let zl = spec.zero_limit();
    if zl.is_infinite() {
        return y;
    }
    let cap = b.konst(zl);
    b.min_of(vec![y, cap])
}

/// Generated t-norm of two already-translated truth values.
fn tnorm_node(b: &mut ExprBuilder, spec: GeneratorSpec, x: NodeId, y: NodeId) -> NodeId {
    let gx = b.gen_apply(spec, x);
    let gy = b.gen_apply(spec, y);
    let s = b.sum(0.0, vec![(1.0, gx), (1.0, gy)]);
    let capped = cap_at_zero_limit(b, spec, s);
    b.gen_inverse(spec, capped)
}

/// Translates a quantifier-free formula with all variables bound to items.
pub fn translate_connectives(
    f: &Formula,
    dom: &GroundingDomain,
    bindings: &HashMap<String, usize>,
    spec: GeneratorSpec,
    b: &mut ExprBuilder,
) -> Result<NodeId, LogicError> {
    match f {
        Formula::Atom { pred, args } => {
            let id = dom.resolve_task(pred, args.len())?;
            let mut ground = Vec::with_capacity(args.len());
            for a in args {
                let item = bindings
                    .get(a)
                    .ok_or_else(|| LogicError::UnboundVariable {
                        var: a.clone(),
                        line: 0,
                        col: 0,
                    })?;
                ground.push(*item);
            }
            Ok(b.pred(id, &ground))
        }
        Formula::KnownAtom { pred, args } => {
            let mut ground = Vec::with_capacity(args.len());
            for a in args {
                let item = bindings
                    .get(a)
                    .ok_or_else(|| LogicError::UnboundVariable {
                        var: a.clone(),
                        line: 0,
                        col: 0,
                    })?;
                ground.push(*item);
            }
            let v = dom.eval_known(pred, &ground)?;
            Ok(b.konst(v))
        }
        Formula::Not(inner) => {
            let n = translate_connectives(inner, dom, bindings, spec, b)?;
            Ok(b.one_minus(n))
        }
        Formula::And(l, r) => {
            let x = translate_connectives(l, dom, bindings, spec, b)?;
            let y = translate_connectives(r, dom, bindings, spec, b)?;
            Ok(tnorm_node(b, spec, x, y))
        }
        Formula::Or(l, r) => {
            let x = translate_connectives(l, dom, bindings, spec, b)?;
            let y = translate_connectives(r, dom, bindings, spec, b)?;
            let nx = b.one_minus(x);
            let ny = b.one_minus(y);
            let t = tnorm_node(b, spec, nx, ny);
            Ok(b.one_minus(t))
        }
        Formula::Implies(l, r) => {
            let x = translate_connectives(l, dom, bindings, spec, b)?;
            let y = translate_connectives(r, dom, bindings, spec, b)?;
            let gx = b.gen_apply(spec, x);
            let gy = b.gen_apply(spec, y);
            let diff = b.sum(0.0, vec![(1.0, gy), (-1.0, gx)]);
            let zero = b.konst(0.0);
            let hinge = b.max_of(vec![diff, zero]);
            Ok(b.gen_inverse(spec, hinge))
        }
        Formula::Iff(l, r) => {
            let x = translate_connectives(l, dom, bindings, spec, b)?;
            let y = translate_connectives(r, dom, bindings, spec, b)?;
            let gx = b.gen_apply(spec, x);
            let gy = b.gen_apply(spec, y);
            let diff = b.sum(0.0, vec![(1.0, gx), (-1.0, gy)]);
            let gap = b.abs(diff);
            Ok(b.gen_inverse(spec, gap))
        }
        Formula::Forall { .. } | Formula::Exists { .. } => Err(LogicError::UnexpectedQuantifier),
    }
}

fn truth_minmax(
    f: &Formula,
    dom: &GroundingDomain,
    bindings: &mut HashMap<String, usize>,
    spec: GeneratorSpec,
    b: &mut ExprBuilder,
) -> Result<NodeId, LogicError> {
    match f {
        Formula::Forall { var, body } | Formula::Exists { var, body } => {
            let items = dom.items_for(var);
            if items.is_empty() {
                return Err(LogicError::EmptyDomain { var: var.clone() });
            }
            let mut children = Vec::with_capacity(items.len());
            for &item in items {
                bindings.insert(var.clone(), item);
                children.push(truth_minmax(body, dom, bindings, spec, b)?);
            }
            bindings.remove(var);
            Ok(match f {
                Formula::Forall { .. } => b.min_of(children),
                _ => b.max_of(children),
            })
        }
        _ => translate_connectives(f, dom, bindings, spec, b),
    }
}

fn truth_generator(
    f: &Formula,
    dom: &GroundingDomain,
    bindings: &mut HashMap<String, usize>,
    spec: GeneratorSpec,
    b: &mut ExprBuilder,
) -> Result<NodeId, LogicError> {
    match f {
        Formula::Forall { var, body } => {
            let items = dom.items_for(var);
            if items.is_empty() {
                return Err(LogicError::EmptyDomain { var: var.clone() });
            }
            let mut terms = Vec::with_capacity(items.len());
            for &item in items {
                bindings.insert(var.clone(), item);
                let truth = truth_generator(body, dom, bindings, spec, b)?;
                let g = b.gen_apply(spec, truth);
                terms.push((1.0, g));
            }
            bindings.remove(var);
            let s = b.sum(0.0, terms);
            let capped = cap_at_zero_limit(b, spec, s);
            Ok(b.gen_inverse(spec, capped))
        }
        Formula::Exists { var, body } => {
            let items = dom.items_for(var);
            if items.is_empty() {
                return Err(LogicError::EmptyDomain { var: var.clone() });
            }
            let mut children = Vec::with_capacity(items.len());
            for &item in items {
                bindings.insert(var.clone(), item);
                children.push(truth_generator(body, dom, bindings, spec, b)?);
            }
            bindings.remove(var);
            Ok(b.max_of(children))
        }
        _ => translate_connectives(f, dom, bindings, spec, b),
    }
}

/// Truth value of a closed formula with universals as minima and
/// existentials as maxima over their groundings.
pub fn translate_quantifier_minmax(
    f: &Formula,
    dom: &GroundingDomain,
    op: &TNormOp,
) -> Result<LossExpr, LogicError> {
    let spec = generator_of(op)?;
    let mut b = ExprBuilder::new();
    let mut bindings = HashMap::new();
    let root = truth_minmax(f, dom, &mut bindings, spec, &mut b)?;
    Ok(b.finish(root))
}

/// Truth value of a closed formula with universals in the additive form
/// `g^{-1}(min{g(0+), sum over x of g(body)})`; existentials stay maxima.
pub fn translate_quantifier_generator(
    f: &Formula,
    dom: &GroundingDomain,
    op: &TNormOp,
) -> Result<LossExpr, LogicError> {
    let spec = generator_of(op)?;
    let mut b = ExprBuilder::new();
    let mut bindings = HashMap::new();
    let root = truth_generator(f, dom, &mut bindings, spec, &mut b)?;
    Ok(b.finish(root))
}

/// Penalty of a universally quantified formula: `g` applied to the additive
/// truth value, which simplifies to `min{g(0+), sum over x of g(body)}` for
/// nilpotent generators and the uncapped sum for strict ones. Zero exactly
/// when every grounding is fully satisfied.
pub fn loss_universal(
    f: &Formula,
    dom: &GroundingDomain,
    op: &TNormOp,
) -> Result<LossExpr, LogicError> {
    if !matches!(f, Formula::Forall { .. }) {
        return Err(LogicError::NotUniversal);
    }
    let spec = generator_of(op)?;
    let mut b = ExprBuilder::new();
    let mut bindings = HashMap::new();
    let truth = truth_generator(f, dom, &mut bindings, spec, &mut b)?;
    let penalty = b.gen_apply(spec, truth);
    Ok(b.finish(penalty))
}

/// Weighted sum of per-formula penalties, where each penalty is `g` of the
/// formula's truth value under the knowledge base's quantifier mode.
pub fn kb_loss(kb: &KnowledgeBase, dom: &GroundingDomain) -> Result<LossExpr, LogicError> {
    let spec = generator_of(&kb.op)?;
    let mut b = ExprBuilder::new();
    let mut terms = Vec::with_capacity(kb.formulas.len());
    for (formula, weight) in &kb.formulas {
        if !(weight.is_finite() && *weight >= 0.0) {
            return Err(LogicError::InvalidWeight {
                raw: weight.to_string(),
                line: 0,
            });
        }
        let mut bindings = HashMap::new();
        let truth = match kb.mode {
            QuantifierMode::MinMax => truth_minmax(formula, dom, &mut bindings, spec, &mut b)?,
            QuantifierMode::Generator => {
                truth_generator(formula, dom, &mut bindings, spec, &mut b)?
            }
        };
        let penalty = b.gen_apply(spec, truth);
        terms.push((*weight, penalty));
    }
    let root = b.sum(0.0, terms);
    Ok(b.finish(root))
}

/// `sum over x of |g(S(x)) - g(p(x)))|` against the known predicate named
/// `known`, over the domain's default sample set. The known side is folded
/// to a constant at compile time, through the clamp where `S(x) = 0` meets
/// a strict generator.
pub fn supervision_loss(
    dom: &GroundingDomain,
    pred: PredId,
    known: &str,
    spec: GeneratorSpec,
) -> Result<LossExpr, LogicError> {
    if dom.pred_arity(pred) != 1 {
        return Err(LogicError::ArityMismatch {
            pred: dom.pred_name(pred).to_string(),
            expected: 1,
            found: dom.pred_arity(pred),
            line: 0,
            col: 0,
        });
    }
    if dom.items().is_empty() {
        return Err(LogicError::EmptyDomain { var: "x".into() });
    }
    let mut b = ExprBuilder::new();
    let mut terms = Vec::with_capacity(dom.items().len());
    for &x in dom.items() {
        let s_val = dom.eval_known(known, &[x])?;
        let s_node = b.konst(s_val);
        let gs = b.gen_apply(spec, s_node);
        let p = b.pred(pred, &[x]);
        let gp = b.gen_apply(spec, p);
        let diff = b.sum(0.0, vec![(1.0, gs), (-1.0, gp)]);
        let gap = b.abs(diff);
        terms.push((1.0, gap));
    }
    let root = b.sum(0.0, terms);
    Ok(b.finish(root))
}

/// `sum over x in positives of g(p(x))`: the positive-only supervision
/// penalty. With `g = -log` this is the cross-entropy over true labels;
/// with `g = 1 - x` the L1 form.
pub fn positive_supervision_loss(
    dom: &GroundingDomain,
    pred: PredId,
    positives: &[usize],
    spec: GeneratorSpec,
) -> Result<LossExpr, LogicError> {
    if dom.pred_arity(pred) != 1 {
        return Err(LogicError::ArityMismatch {
            pred: dom.pred_name(pred).to_string(),
            expected: 1,
            found: dom.pred_arity(pred),
            line: 0,
            col: 0,
        });
    }
    if positives.is_empty() {
        return Err(LogicError::EmptyPositives);
    }
    let mut b = ExprBuilder::new();
    let mut terms = Vec::with_capacity(positives.len());
    for &x in positives {
        let p = b.pred(pred, &[x]);
        let g = b.gen_apply(spec, p);
        terms.push((1.0, g));
    }
    let root = b.sum(0.0, terms);
    Ok(b.finish(root))
}

/// Parses a knowledge-base file: one `weight :: formula` per line, `#`
/// starting a comment, blank lines skipped, weight defaulting to 1.
pub fn parse_kb(text: &str) -> Result<Vec<(Formula, f64)>, LogicError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (weight, formula_text, formula_col) = match line.split_once("::") {
            Some((w, f)) => {
                let weight: f64 = w.trim().parse().map_err(|_| LogicError::InvalidWeight {
                    raw: w.trim().to_string(),
                    line: line_no,
                })?;
                if !(weight.is_finite() && weight >= 0.0) {
                    return Err(LogicError::InvalidWeight {
                        raw: w.trim().to_string(),
                        line: line_no,
                    });
                }
                let col = raw.find("::").unwrap() + 2;
                (weight, f, col)
            }
            None => (1.0, line, 0),
        };
        let formula = parse_formula(formula_text).map_err(|e| relocate(e, raw, line_no, formula_col))?;
        out.push((formula, weight));
    }
    Ok(out)
}

/// Parser positions are relative to the formula substring; rebase them onto
/// the enclosing file line.
fn relocate(e: LogicError, raw: &str, line_no: usize, formula_col: usize) -> LogicError {
    let leading = raw.len() - raw.trim_start().len();
    let base = if formula_col > 0 { formula_col } else { leading };
    let shift = |line: usize, col: usize| {
        if line == 1 {
            (line_no, col + base)
        } else {
            (line_no + line - 1, col)
        }
    };
    match e {
        LogicError::Syntax { line, col, message } => {
            let (line, col) = shift(line, col);
            LogicError::Syntax { line, col, message }
        }
        LogicError::UnboundVariable { var, line, col } => {
            let (line, col) = shift(line, col);
            LogicError::UnboundVariable { var, line, col }
        }
        LogicError::ArityMismatch {
            pred,
            expected,
            found,
            line,
            col,
        } => {
            let (line, col) = shift(line, col);
            LogicError::ArityMismatch {
                pred,
                expected,
                found,
                line,
                col,
            }
        }
        LogicError::ShadowedVariable { var, line, col } => {
            let (line, col) = shift(line, col);
            LogicError::ShadowedVariable { var, line, col }
        }
        other => other,
    }
}
