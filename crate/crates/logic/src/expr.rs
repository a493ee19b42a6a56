//! Grounded loss expressions as immutable DAGs.
//!
//! Expressions are built bottom-up through [`ExprBuilder`], which folds
//! constants as it goes and rewrites `g(g^{-1}(u))` into `min{g(0+), u}`.
//! That one rewrite is what turns the truth-value form of a universally
//! quantified formula into its direct penalty form: applying `g` on top of
//! `g^{-1}(min{g(0+), sum})` collapses to `min{g(0+), sum}`, and the min
//! itself folds away for strict generators.
//!
//! Node indices are topologically ordered by construction, so a single
//! in-order sweep evaluates the graph.

use std::collections::HashMap;

use genloss_core::GeneratorSpec;

use crate::domain::PredId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index into the expression's grounded-atom table. The same (predicate,
/// arguments) pair always maps to the same slot within one expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlotId(u32);

impl SlotId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A grounded task-predicate atom awaiting a learned value in [0,1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub pred: PredId,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    /// Reads the slot's value from the evaluation input.
    Pred(SlotId),
    /// `g(x)`; inputs are truth values, clamping counts toward diagnostics.
    GenApply(GeneratorSpec, NodeId),
    /// `g^{-1}(min{g(0+), y})`; inputs live in g-space, `y >= 0`.
    GenInverse(GeneratorSpec, NodeId),
    /// `bias + sum of coeff * child`. Coefficients carry constraint weights,
    /// mean-reduction factors and the subtractions inside residua.
    Sum { bias: f64, terms: Vec<(f64, NodeId)> },
    /// Ties resolve to the first extremal child, which is the gradient
    /// routing rule downstream consumers rely on.
    Min(Vec<NodeId>),
    Max(Vec<NodeId>),
    Abs(NodeId),
    /// `1 - x`: the involutive negation.
    OneMinus(NodeId),
}

/// Result of one evaluation: the root value plus how many strict-generator
/// clamps fired along the way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    pub clamp_count: u64,
}

#[derive(Debug, Clone)]
pub struct LossExpr {
    nodes: Vec<Node>,
    slots: Vec<Slot>,
    root: NodeId,
}

impl LossExpr {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn num_slots(&self) -> usize {
        self.slots.len()
    }

    /// Fills `vals` with one value per node and returns the clamp count.
    /// `inputs` is indexed by slot.
    pub fn forward(&self, inputs: &[f64], vals: &mut Vec<f64>) -> u64 {
        assert_eq!(inputs.len(), self.slots.len(), "one input per slot");
        vals.clear();
        vals.reserve(self.nodes.len());
        let mut clamps = 0u64;
        for node in &self.nodes {
            let v = match node {
                Node::Const(c) => *c,
                Node::Pred(s) => inputs[s.index()],
                Node::GenApply(spec, a) => {
                    // Truth values can drift an ulp past the interval ends
                    // through float cancellation; pin them back.
                    let x = vals[a.index()].clamp(0.0, 1.0);
                    let (g, clamped) = spec.eval_flagged(x);
                    if clamped {
                        clamps += 1;
                    }
                    g
                }
                Node::GenInverse(spec, a) => spec.pseudo_inverse(vals[a.index()]),
                Node::Sum { bias, terms } => {
                    let mut acc = *bias;
                    for (c, n) in terms {
                        acc += c * vals[n.index()];
                    }
                    acc
                }
                Node::Min(children) => {
                    let mut best = f64::INFINITY;
                    for n in children {
                        let v = vals[n.index()];
                        if v < best {
                            best = v;
                        }
                    }
                    best
                }
                Node::Max(children) => {
                    let mut best = f64::NEG_INFINITY;
                    for n in children {
                        let v = vals[n.index()];
                        if v > best {
                            best = v;
                        }
                    }
                    best
                }
                Node::Abs(a) => vals[a.index()].abs(),
                Node::OneMinus(a) => 1.0 - vals[a.index()],
            };
            vals.push(v);
        }
        clamps
    }

    pub fn eval(&self, inputs: &[f64]) -> Evaluated {
        let mut vals = Vec::new();
        let clamp_count = self.forward(inputs, &mut vals);
        Evaluated {
            value: vals[self.root.index()],
            clamp_count,
        }
    }
}

/// Bottom-up constructor with constant folding and the `g . g^{-1}` rewrite.
#[derive(Default)]
pub struct ExprBuilder {
    nodes: Vec<Node>,
    slots: Vec<Slot>,
    slot_ids: HashMap<(PredId, Vec<usize>), SlotId>,
}

impl ExprBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: Node) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    fn const_of(&self, id: NodeId) -> Option<f64> {
        match self.nodes[id.index()] {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn konst(&mut self, c: f64) -> NodeId {
        self.push(Node::Const(c))
    }

    /// The slot for a grounded atom, shared across repeated occurrences.
    pub fn pred(&mut self, pred: PredId, args: &[usize]) -> NodeId {
        let key = (pred, args.to_vec());
        let slot = match self.slot_ids.get(&key) {
            Some(&s) => s,
            None => {
                let s = SlotId(self.slots.len() as u32);
                self.slots.push(Slot {
                    pred,
                    args: args.to_vec(),
                });
                self.slot_ids.insert(key, s);
                s
            }
        };
        self.push(Node::Pred(slot))
    }

    /// `g(a)`. Constants fold immediately (through the clamp for strict
    /// generators); `g(g^{-1}(u))` with the same spec becomes
    /// `min{g(0+), u}`.
    pub fn gen_apply(&mut self, spec: GeneratorSpec, a: NodeId) -> NodeId {
        if let Some(c) = self.const_of(a) {
            return self.konst(spec.eval(c.clamp(0.0, 1.0)));
        }
        if let Node::GenInverse(inner, u) = self.nodes[a.index()] {
            if inner == spec {
                let zl = spec.zero_limit();
                if zl.is_infinite() {
                    return u;
                }
                let cap = self.konst(zl);
                return self.min_of(vec![u, cap]);
            }
        }
        self.push(Node::GenApply(spec, a))
    }

    /// `g^{-1}(a)`. Constants fold immediately.
    pub fn gen_inverse(&mut self, spec: GeneratorSpec, a: NodeId) -> NodeId {
        if let Some(c) = self.const_of(a) {
            return self.konst(spec.pseudo_inverse(c));
        }
        self.push(Node::GenInverse(spec, a))
    }

    /// `bias + sum of coeff * child`. Constant children fold into the bias,
    /// repeated children merge their coefficients (making `g(x) - g(x)`
    /// exactly zero), and zero coefficients drop out.
    pub fn sum(&mut self, bias: f64, terms: Vec<(f64, NodeId)>) -> NodeId {
        let mut folded_bias = bias;
        let mut merged: Vec<(f64, NodeId)> = Vec::with_capacity(terms.len());
        for (c, n) in terms {
            if c == 0.0 {
                continue;
            }
            if let Some(k) = self.const_of(n) {
                folded_bias += c * k;
                continue;
            }
            match merged.iter_mut().find(|(_, m)| *m == n) {
                Some(entry) => entry.0 += c,
                None => merged.push((c, n)),
            }
        }
        merged.retain(|(c, _)| *c != 0.0);
        if merged.is_empty() {
            return self.konst(folded_bias);
        }
        if folded_bias == 0.0 && merged.len() == 1 && merged[0].0 == 1.0 {
            return merged[0].1;
        }
        self.push(Node::Sum {
            bias: folded_bias,
            terms: merged,
        })
    }

    /// Minimum. Constant children collapse to one trailing constant, and an
    /// infinite constant (a strict generator's `g(0+)`) drops out entirely.
    /// Variable children keep their order, so ties route to the earliest.
    pub fn min_of(&mut self, children: Vec<NodeId>) -> NodeId {
        let mut vars = Vec::with_capacity(children.len());
        let mut const_min = f64::INFINITY;
        for n in children {
            match self.const_of(n) {
                Some(c) => const_min = const_min.min(c),
                None => {
                    if !vars.contains(&n) {
                        vars.push(n);
                    }
                }
            }
        }
        if vars.is_empty() {
            return self.konst(const_min);
        }
        if const_min.is_finite() {
            let c = self.konst(const_min);
            vars.push(c);
        }
        if vars.len() == 1 {
            return vars[0];
        }
        self.push(Node::Min(vars))
    }

    /// Maximum, mirroring [`ExprBuilder::min_of`].
    pub fn max_of(&mut self, children: Vec<NodeId>) -> NodeId {
        let mut vars = Vec::with_capacity(children.len());
        let mut const_max = f64::NEG_INFINITY;
        for n in children {
            match self.const_of(n) {
                Some(c) => const_max = const_max.max(c),
                None => {
                    if !vars.contains(&n) {
                        vars.push(n);
                    }
                }
            }
        }
        if vars.is_empty() {
            return self.konst(const_max);
        }
        if const_max > f64::NEG_INFINITY {
            let c = self.konst(const_max);
            vars.push(c);
        }
        if vars.len() == 1 {
            return vars[0];
        }
        self.push(Node::Max(vars))
    }

    pub fn abs(&mut self, a: NodeId) -> NodeId {
        if let Some(c) = self.const_of(a) {
            return self.konst(c.abs());
        }
        self.push(Node::Abs(a))
    }

    pub fn one_minus(&mut self, a: NodeId) -> NodeId {
        if let Some(c) = self.const_of(a) {
            return self.konst(1.0 - c);
        }
        self.push(Node::OneMinus(a))
    }

    pub fn finish(self, root: NodeId) -> LossExpr {
        assert!(root.index() < self.nodes.len());
        LossExpr {
            nodes: self.nodes,
            slots: self.slots,
            root,
        }
    }
}
