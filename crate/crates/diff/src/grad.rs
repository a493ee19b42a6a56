//! Reverse-mode differentiation through loss expressions and the network.
//!
//! A compiled expression's slots address softmax outputs: slot predicate id
//! `j` is class `j`, the single argument is the row inside the batch. The
//! backward pass runs in three stages: adjoints over the expression DAG,
//! the softmax Jacobian per row, then the dense-layer chain rule.

use genloss_logic::{Evaluated, LossExpr, Node};

use crate::error::DiffError;
use crate::network::{ForwardCache, Network};
use crate::tensor::Tensor;

/// Parameter gradients, same shapes as the network fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Tensor,
    pub b1: Tensor,
    pub w2: Tensor,
    pub b2: Tensor,
}

impl Gradients {
    pub fn zeros_like(net: &Network) -> Self {
        Gradients {
            w1: Tensor::zeros(net.w1.shape()),
            b1: Tensor::zeros(net.b1.shape()),
            w2: Tensor::zeros(net.w2.shape()),
            b2: Tensor::zeros(net.b2.shape()),
        }
    }

    /// Scales every gradient entry, used for mean reduction.
    pub fn scale(&mut self, c: f64) {
        for t in [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2] {
            for v in t.data_mut() {
                *v *= c;
            }
        }
    }
}

/// Reads the expression's inputs out of a `[B x classes]` probability
/// tensor by slot: value of slot `(j, [i])` is `probs[i][j]`.
pub fn gather_slot_inputs(expr: &LossExpr, probs: &Tensor) -> Result<Vec<f64>, DiffError> {
    let classes = probs.cols();
    let rows = probs.rows();
    let mut inputs = Vec::with_capacity(expr.num_slots());
    for slot in expr.slots() {
        let j = slot.pred.0;
        let i = slot.args[0];
        if j >= classes || i >= rows {
            return Err(DiffError::ShapeMismatch {
                context: "slot gather",
                expected: rows * classes,
                found: i * classes + j,
            });
        }
        inputs.push(probs.data()[i * classes + j]);
    }
    Ok(inputs)
}

/// Scalar penalty of an expression over batch outputs.
pub fn loss_forward(expr: &LossExpr, probs: &Tensor) -> Result<Evaluated, DiffError> {
    let inputs = gather_slot_inputs(expr, probs)?;
    Ok(expr.eval(&inputs))
}

/// Adjoints of the root with respect to each slot, by one reverse sweep.
/// `vals` must come from `expr.forward` on the same inputs. Min/Max route
/// their adjoint to the first extremal child, matching forward evaluation;
/// clamped generator applications contribute zero through `deriv`.
pub fn expr_input_gradients(expr: &LossExpr, vals: &[f64]) -> Vec<f64> {
    let nodes = expr.nodes();
    let mut adj = vec![0.0; nodes.len()];
    adj[expr.root().index()] = 1.0;
    for (i, node) in nodes.iter().enumerate().rev() {
        let a = adj[i];
        if a == 0.0 {
            continue;
        }
        match node {
            Node::Const(_) | Node::Pred(_) => {}
            Node::GenApply(spec, c) => {
                let x = vals[c.index()].clamp(0.0, 1.0);
                adj[c.index()] += a * spec.deriv(x);
            }
            Node::GenInverse(spec, c) => {
                adj[c.index()] += a * spec.pseudo_inverse_deriv(vals[c.index()]);
            }
            Node::Sum { terms, .. } => {
                for (coef, c) in terms {
                    adj[c.index()] += a * coef;
                }
            }
            Node::Min(children) => {
                let mut best = 0;
                for (k, c) in children.iter().enumerate() {
                    if vals[c.index()] < vals[children[best].index()] {
                        best = k;
                    }
                }
                adj[children[best].index()] += a;
            }
            Node::Max(children) => {
                let mut best = 0;
                for (k, c) in children.iter().enumerate() {
                    if vals[c.index()] > vals[children[best].index()] {
                        best = k;
                    }
                }
                adj[children[best].index()] += a;
            }
            Node::Abs(c) => {
                let v = vals[c.index()];
                // Subgradient 0 at the kink.
                let s = if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                adj[c.index()] += a * s;
            }
            Node::OneMinus(c) => {
                adj[c.index()] -= a;
            }
        }
    }
    let mut slot_grads = vec![0.0; expr.num_slots()];
    for (i, node) in nodes.iter().enumerate() {
        if let Node::Pred(s) = node {
            slot_grads[s.index()] += adj[i];
        }
    }
    slot_grads
}

/// Full backward pass: loss value, clamp count, and parameter gradients of
/// the expression over this batch. `cache` must come from
/// `net.forward_cached(batch)`.
pub fn backward(
    expr: &LossExpr,
    net: &Network,
    batch: &Tensor,
    cache: &ForwardCache,
) -> Result<(Evaluated, Gradients), DiffError> {
    let inputs = gather_slot_inputs(expr, &cache.probs)?;
    let mut vals = Vec::new();
    let clamp_count = expr.forward(&inputs, &mut vals);
    let value = vals[expr.root().index()];
    let slot_grads = expr_input_gradients(expr, &vals);

    let b = batch.rows();
    let (hd, od) = (net.hidden_dim(), net.out_dim());

    // dL/dp per batch row and class.
    let mut dprobs = vec![0.0; b * od];
    for (slot, g) in expr.slots().iter().zip(slot_grads.iter()) {
        dprobs[slot.args[0] * od + slot.pred.0] += g;
    }

    let mut grads = Gradients::zeros_like(net);
    let mut dlogits = vec![0.0; od];
    let mut dhidden = vec![0.0; hd];
    for i in 0..b {
        let p = cache.probs.row(i);
        let dp = &dprobs[i * od..(i + 1) * od];
        // Softmax Jacobian: dlogit_k = p_k * (dp_k - sum_j dp_j p_j).
        let inner: f64 = dp.iter().zip(p.iter()).map(|(d, p)| d * p).sum();
        for k in 0..od {
            dlogits[k] = p[k] * (dp[k] - inner);
        }

        let h = cache.hidden.row(i);
        for k in 0..hd {
            let w2row = &net.w2.data()[k * od..(k + 1) * od];
            let mut acc = 0.0;
            for j in 0..od {
                acc += dlogits[j] * w2row[j];
                grads.w2.data_mut()[k * od + j] += h[k] * dlogits[j];
            }
            dhidden[k] = acc;
        }
        for j in 0..od {
            grads.b2.data_mut()[j] += dlogits[j];
        }

        let hp = cache.hidden_pre.row(i);
        let x = batch.row(i);
        for k in 0..hd {
            // ReLU passes gradient only where it fired.
            if hp[k] <= 0.0 {
                dhidden[k] = 0.0;
            }
        }
        for (k, &xk) in x.iter().enumerate() {
            if xk == 0.0 {
                continue;
            }
            let w1row = &mut grads.w1.data_mut()[k * hd..(k + 1) * hd];
            for j in 0..hd {
                w1row[j] += xk * dhidden[j];
            }
        }
        for j in 0..hd {
            grads.b1.data_mut()[j] += dhidden[j];
        }
    }

    Ok((
        Evaluated {
            value,
            clamp_count,
        },
        grads,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use genloss_core::GeneratorSpec;
    use genloss_logic::{positive_supervision_loss, ExprBuilder, GroundingDomain, PredId};

    #[test]
    fn constant_expressions_have_zero_gradients() {
        let mut b = ExprBuilder::new();
        let c = b.konst(0.25);
        let g = b.gen_apply(GeneratorSpec::product(), c);
        let expr = b.finish(g);
        let net = Network::init_with_dims(4, 3, 2, 1);
        let batch = Tensor::from_vec(&[1, 4], vec![0.5; 4]).unwrap();
        let cache = net.forward_cached(&batch).unwrap();
        let (out, grads) = backward(&expr, &net, &batch, &cache).unwrap();
        assert!((out.value - 1.3862943611198906).abs() < 1e-12);
        assert!(grads.w1.data().iter().all(|&g| g == 0.0));
        assert!(grads.w2.data().iter().all(|&g| g == 0.0));
        assert!(grads.b1.data().iter().all(|&g| g == 0.0));
        assert!(grads.b2.data().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn l1_loss_gradient_is_minus_one_per_label_probability() {
        // Penalty sum(1 - p_label): dL/dp_label = -1, others 0.
        let mut dom = GroundingDomain::new(vec![0, 1]);
        let p = dom.register_predicate("P1", 1).unwrap();
        let expr =
            positive_supervision_loss(&dom, p, &[0, 1], GeneratorSpec::lukasiewicz()).unwrap();
        let probs = Tensor::from_vec(&[2, 1], vec![0.8, 0.5]).unwrap();
        let inputs = gather_slot_inputs(&expr, &probs).unwrap();
        let mut vals = Vec::new();
        expr.forward(&inputs, &mut vals);
        let grads = expr_input_gradients(&expr, &vals);
        assert_eq!(grads, vec![-1.0, -1.0]);
    }

    #[test]
    fn min_routes_gradient_to_the_first_extremal_child() {
        let mut b = ExprBuilder::new();
        let x = b.pred(PredId(0), &[0]);
        let y = b.pred(PredId(0), &[1]);
        let m = b.min_of(vec![x, y]);
        let expr = b.finish(m);
        let mut vals = Vec::new();
        // Tie: both 0.4. First child wins.
        expr.forward(&[0.4, 0.4], &mut vals);
        assert_eq!(expr_input_gradients(&expr, &vals), vec![1.0, 0.0]);
        expr.forward(&[0.6, 0.4], &mut vals);
        assert_eq!(expr_input_gradients(&expr, &vals), vec![0.0, 1.0]);
    }

    #[test]
    fn clamped_branches_block_gradient() {
        let mut b = ExprBuilder::new();
        let x = b.pred(PredId(0), &[0]);
        let g = b.gen_apply(GeneratorSpec::product(), x);
        let expr = b.finish(g);
        let mut vals = Vec::new();
        expr.forward(&[0.0], &mut vals);
        assert_eq!(expr_input_gradients(&expr, &vals), vec![0.0]);
        expr.forward(&[0.5], &mut vals);
        let g = expr_input_gradients(&expr, &vals);
        assert!((g[0] - (-2.0)).abs() < 1e-12);
    }
}
