//! Central finite differences versus the reverse-mode pass, across every
//! generator family and lambda used by the benchmark, on 20/5/3 toy nets.

use genloss_core::{GeneratorSpec, TNormOp, XorShift64Star};
use genloss_diff::{backward, supervision_expr, Gradients, Network, Tensor};
use genloss_logic::{
    kb_loss, parse_formula, GroundingDomain, KnowledgeBase, LossExpr, QuantifierMode,
};

const FD_STEP: f64 = 1e-5;
const REL_TOL: f64 = 1e-4;

fn sweep_specs() -> Vec<GeneratorSpec> {
    let mut specs = vec![GeneratorSpec::product(), GeneratorSpec::lukasiewicz()];
    for l in [-2.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        specs.push(GeneratorSpec::schweizer_sklar(l).unwrap());
    }
    for l in [0.5, 1.0, 2.0, 10.0, f64::INFINITY] {
        specs.push(GeneratorSpec::frank(l).unwrap());
    }
    specs
}

fn toy_batch(rows: usize, in_dim: usize, seed: u64) -> (Tensor, Vec<usize>) {
    let mut rng = XorShift64Star::new(seed);
    let data = (0..rows * in_dim).map(|_| rng.next_f64()).collect();
    let labels = (0..rows).map(|_| rng.next_below(3) as usize).collect();
    (Tensor::from_vec(&[rows, in_dim], data).unwrap(), labels)
}

/// Domain over the batch rows with predicates P0..P2 mapping to classes.
fn row_domain(rows: usize) -> GroundingDomain {
    let mut dom = GroundingDomain::new((0..rows).collect());
    for j in 0..3 {
        dom.register_predicate(&format!("P{j}"), 1).unwrap();
    }
    dom
}

fn formula_loss(text: &str, rows: usize, spec: GeneratorSpec, mode: QuantifierMode) -> LossExpr {
    let kb = KnowledgeBase {
        formulas: vec![(parse_formula(text).unwrap(), 1.0)],
        op: TNormOp::generated(spec),
        mode,
    };
    kb_loss(&kb, &row_domain(rows)).unwrap()
}

fn flat_grad(g: &Gradients, i: usize) -> f64 {
    let order = [&g.w1, &g.b1, &g.w2, &g.b2];
    let mut i = i;
    for t in order {
        if i < t.data().len() {
            return t.data()[i];
        }
        i -= t.data().len();
    }
    panic!("index out of range");
}

fn check_expr(expr: &LossExpr, net: &Network, batch: &Tensor, what: &str) {
    let cache = net.forward_cached(batch).unwrap();
    let (_, grads) = backward(expr, net, batch, &cache).unwrap();

    let mut probe = net.clone();
    let loss_at = |net: &Network| {
        let cache = net.forward_cached(batch).unwrap();
        genloss_diff::loss_forward(expr, &cache.probs).unwrap().value
    };
    for i in 0..net.param_count() {
        let saved = probe.param(i);
        *probe.param_mut(i) = saved + FD_STEP;
        let up = loss_at(&probe);
        *probe.param_mut(i) = saved - FD_STEP;
        let down = loss_at(&probe);
        *probe.param_mut(i) = saved;

        let fd = (up - down) / (2.0 * FD_STEP);
        let ad = flat_grad(&grads, i);
        let rel = (ad - fd).abs() / ad.abs().max(fd.abs()).max(1e-4);
        assert!(
            rel <= REL_TOL,
            "{what}: param {i} autodiff {ad} vs finite difference {fd} (rel {rel:.3e})"
        );
    }
}

#[test]
fn supervision_gradients_match_finite_differences_for_every_family() {
    let (batch, labels) = toy_batch(8, 20, 5);
    let net = Network::init_with_dims(20, 5, 3, 17);
    for spec in sweep_specs() {
        let expr = supervision_expr(&labels, 3, spec).unwrap();
        check_expr(&expr, &net, &batch, &format!("supervision {spec:?}"));
    }
}

#[test]
fn implication_gradients_match_finite_differences_in_both_modes() {
    let (batch, _) = toy_batch(4, 20, 6);
    let net = Network::init_with_dims(20, 5, 3, 18);
    for spec in sweep_specs() {
        for mode in [QuantifierMode::MinMax, QuantifierMode::Generator] {
            let expr = formula_loss("forall v: P0(v) -> P1(v)", 4, spec, mode);
            check_expr(&expr, &net, &batch, &format!("implication {mode:?} {spec:?}"));
        }
    }
}

#[test]
fn composite_formula_gradients_match_finite_differences() {
    // Exercises negation, conjunction and the biconditional's absolute
    // value in one expression.
    let (batch, _) = toy_batch(4, 20, 7);
    let net = Network::init_with_dims(20, 5, 3, 19);
    for spec in sweep_specs() {
        let expr = formula_loss(
            "forall v: ~(P0(v) & ~P1(v)) <-> P2(v)",
            4,
            spec,
            QuantifierMode::Generator,
        );
        check_expr(&expr, &net, &batch, &format!("composite {spec:?}"));
    }
}

#[test]
fn lukasiewicz_gradient_matches_the_closed_form() {
    // Net 1 -> 1 -> 2 with W1=[1], b1=[0], W2=[a, 0], b2=0, input x=1:
    // p0 is the logistic of a and the batch loss 1 - p0 has
    // dL/da = -p0 (1 - p0), dL/db2 = (-p0(1-p0), +p0(1-p0)).
    let mut net = Network::init_with_dims(1, 1, 2, 0);
    let a = 0.5;
    *net.param_mut(0) = 1.0; // W1
    *net.param_mut(1) = 0.0; // b1
    *net.param_mut(2) = a; // W2[0][0]
    *net.param_mut(3) = 0.0; // W2[0][1]
    *net.param_mut(4) = 0.0;
    *net.param_mut(5) = 0.0;

    let batch = Tensor::from_vec(&[1, 1], vec![1.0]).unwrap();
    let expr = supervision_expr(&[0], 2, GeneratorSpec::lukasiewicz()).unwrap();
    let cache = net.forward_cached(&batch).unwrap();
    let (out, grads) = backward(&expr, &net, &batch, &cache).unwrap();

    let p0 = (a as f64).exp() / ((a as f64).exp() + 1.0);
    assert!((out.value - (1.0 - p0)).abs() < 1e-15);
    let s = p0 * (1.0 - p0);
    assert!((grads.w2.data()[0] - (-s)).abs() < 1e-15);
    assert!((grads.w2.data()[1] - s).abs() < 1e-15);
    assert!((grads.b2.data()[0] - (-s)).abs() < 1e-15);
    assert!((grads.b2.data()[1] - s).abs() < 1e-15);
    // Hidden chain: dh = -a s, ReLU active, x = 1.
    assert!((grads.w1.data()[0] - (-a * s)).abs() < 1e-15);
    assert!((grads.b1.data()[0] - (-a * s)).abs() < 1e-15);
}

#[test]
fn two_successive_sgd_steps_compose_as_expected() {
    use genloss_diff::{sgd_step, OptimState};
    let mut net = Network::init_with_dims(1, 1, 2, 0);
    for i in 0..net.param_count() {
        *net.param_mut(i) = 0.5;
    }
    let mut grads = Gradients::zeros_like(&net);
    grads.w1.data_mut()[0] = 1.0;
    grads.b2.data_mut()[1] = -2.0;
    let mut opt = OptimState::new(0.1);
    sgd_step(&mut net, &grads, &mut opt);
    sgd_step(&mut net, &grads, &mut opt);
    // theta - 2 eta g, written out by hand.
    assert!((net.param(0) - 0.3).abs() < 1e-15);
    assert!((net.param(5) - 0.9).abs() < 1e-15);
    assert_eq!(opt.step, 2);
}
