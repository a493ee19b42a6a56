//! Self-contained oracle and property suites behind `bench verify`.
//!
//! Each check re-derives its expected values from closed forms or finite
//! differences right here, so a pass means the shipped operators agree
//! with independent arithmetic, not with themselves. The acceptance tests
//! run the same checks at full criterion sizes.

use genloss_core::{GeneratorSpec, TNormOp, XorShift64Star};
use genloss_diff::{backward, supervision_expr, Network, Tensor};
use genloss_logic::{
    convexity_probe, kb_loss, loss_universal, parse_formula, positive_supervision_loss,
    ExprBuilder, GroundingDomain, KnowledgeBase, PredId, QuantifierMode,
};

pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn ok(name: &'static str) -> Self {
        CheckReport {
            name,
            passed: true,
            detail: String::new(),
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckReport {
            name,
            passed: false,
            detail,
        }
    }
}

/// Every shipped generator configuration: the defaults grids plus the
/// parameter-free families.
pub fn shipped_specs() -> Vec<GeneratorSpec> {
    let mut specs = vec![GeneratorSpec::product(), GeneratorSpec::lukasiewicz()];
    for l in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        specs.push(GeneratorSpec::schweizer_sklar(l).unwrap());
    }
    for l in [0.5, 1.0, 2.0, 5.0, 10.0, f64::INFINITY] {
        specs.push(GeneratorSpec::frank(l).unwrap());
    }
    specs
}

/// Commutativity, monotonicity and the neutral element within `exact_tol`,
/// associativity within `assoc_tol`, on `triples` random triples per spec.
pub fn check_tnorm_laws(triples: usize, seed: u64) -> CheckReport {
    const NAME: &str = "t-norm laws";
    let exact_tol = 1e-12;
    let assoc_tol = 1e-7;
    let mut rng = XorShift64Star::new(seed);
    for spec in shipped_specs() {
        let op = TNormOp::generated(spec);
        for _ in 0..triples {
            let (x, y, z) = (rng.next_f64(), rng.next_f64(), rng.next_f64());
            let t = |a: f64, b: f64| op.eval(a, b);
            if (t(x, y) - t(y, x)).abs() > exact_tol {
                return CheckReport::fail(NAME, format!("{spec:?}: T({x},{y}) not commutative"));
            }
            if (t(x, 1.0) - x).abs() > exact_tol {
                return CheckReport::fail(NAME, format!("{spec:?}: 1 not neutral at {x}"));
            }
            let (lo, hi) = if y <= z { (y, z) } else { (z, y) };
            if t(x, lo) > t(x, hi) + exact_tol {
                return CheckReport::fail(NAME, format!("{spec:?}: not monotone at {x},{lo},{hi}"));
            }
            if (t(t(x, y), z) - t(x, t(y, z))).abs() > assoc_tol {
                return CheckReport::fail(
                    NAME,
                    format!("{spec:?}: not associative at {x},{y},{z}"),
                );
            }
        }
    }
    CheckReport::ok(NAME)
}

/// Closed forms and family collapses on an `n x n` grid: Lukasiewicz vs
/// `max(0, x+y-1)` and Product vs `x*y` within 1e-12; SS(0)=Frank(1)=Product
/// within 1e-9; SS(1)=Frank(inf)=Lukasiewicz within 1e-12.
pub fn check_closed_forms(n: usize) -> CheckReport {
    const NAME: &str = "closed-form oracles";
    let luk = GeneratorSpec::lukasiewicz();
    let prod = GeneratorSpec::product();
    let ss0 = GeneratorSpec::schweizer_sklar(0.0).unwrap();
    let ss1 = GeneratorSpec::schweizer_sklar(1.0).unwrap();
    let fr1 = GeneratorSpec::frank(1.0).unwrap();
    let frinf = GeneratorSpec::frank(f64::INFINITY).unwrap();
    for i in 0..n {
        for j in 0..n {
            let x = i as f64 / (n - 1) as f64;
            let y = j as f64 / (n - 1) as f64;
            let checks: [(f64, f64, f64, &str); 6] = [
                (luk.tnorm(x, y), (x + y - 1.0).max(0.0), 1e-12, "lukasiewicz"),
                (prod.tnorm(x, y), x * y, 1e-12, "product"),
                (ss0.tnorm(x, y), x * y, 1e-9, "ss(0)=product"),
                (fr1.tnorm(x, y), x * y, 1e-9, "frank(1)=product"),
                (ss1.tnorm(x, y), (x + y - 1.0).max(0.0), 1e-12, "ss(1)=lukasiewicz"),
                (
                    frinf.tnorm(x, y),
                    (x + y - 1.0).max(0.0),
                    1e-12,
                    "frank(inf)=lukasiewicz",
                ),
            ];
            for (got, want, tol, what) in checks {
                if (got - want).abs() > tol {
                    return CheckReport::fail(
                        NAME,
                        format!("{what} at ({x},{y}): {got} vs {want}"),
                    );
                }
            }
        }
    }
    CheckReport::ok(NAME)
}

/// Adjunction `T(x,y) <= z iff y <= res(x,z)` on random triples at 1e-9,
/// and the biresiduum diagonal exactly 1.
pub fn check_residuation(triples: usize, seed: u64) -> CheckReport {
    const NAME: &str = "residuation";
    let mut rng = XorShift64Star::new(seed);
    for spec in shipped_specs() {
        for _ in 0..triples {
            let (x, y, z) = (rng.next_f64(), rng.next_f64(), rng.next_f64());
            let left = spec.tnorm(x, y) <= z + 1e-9;
            let right = y <= spec.residuum(x, z) + 1e-9;
            if left != right {
                return CheckReport::fail(
                    NAME,
                    format!("{spec:?}: adjunction broken at ({x},{y},{z})"),
                );
            }
        }
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            let b = spec.biresiduum(x, x);
            if b != 1.0 {
                return CheckReport::fail(NAME, format!("{spec:?}: biresiduum({x},{x}) = {b}"));
            }
        }
    }
    CheckReport::ok(NAME)
}

/// Product-generator supervision loss versus cross entropy computed from
/// scratch, on random probability batches.
pub fn check_cross_entropy(batches: usize, seed: u64) -> CheckReport {
    const NAME: &str = "cross-entropy recovery";
    let mut rng = XorShift64Star::new(seed);
    for _ in 0..batches {
        let rows = 1 + rng.next_below(32) as usize;
        let classes = 10;
        let mut data = vec![0.0; rows * classes];
        let mut labels = Vec::with_capacity(rows);
        for i in 0..rows {
            let mut z = 0.0;
            for j in 0..classes {
                let v = 0.05 + rng.next_f64();
                data[i * classes + j] = v;
                z += v;
            }
            for j in 0..classes {
                data[i * classes + j] /= z;
            }
            labels.push(rng.next_below(classes as u64) as usize);
        }
        let probs = Tensor::from_vec(&[rows, classes], data).unwrap();
        let expr = supervision_expr(&labels, classes, GeneratorSpec::product()).unwrap();
        let got = genloss_diff::loss_forward(&expr, &probs).unwrap().value;
        let want: f64 = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| -probs.row(i)[l].ln())
            .sum();
        if (got - want).abs() > 1e-9 {
            return CheckReport::fail(NAME, format!("batch loss {got} vs cross entropy {want}"));
        }
    }
    CheckReport::ok(NAME)
}

/// Spot finite-difference gradient check on a small net for a sample of
/// families.
pub fn check_gradients(params: usize, seed: u64) -> CheckReport {
    const NAME: &str = "gradient spot check";
    let specs = [
        GeneratorSpec::product(),
        GeneratorSpec::lukasiewicz(),
        GeneratorSpec::schweizer_sklar(-0.5).unwrap(),
        GeneratorSpec::frank(2.0).unwrap(),
    ];
    let mut rng = XorShift64Star::new(seed);
    let rows = 6;
    let data = (0..rows * 20).map(|_| rng.next_f64()).collect();
    let batch = Tensor::from_vec(&[rows, 20], data).unwrap();
    let labels: Vec<usize> = (0..rows).map(|_| rng.next_below(3) as usize).collect();
    let net = Network::init_with_dims(20, 5, 3, seed);

    for spec in specs {
        let expr = supervision_expr(&labels, 3, spec).unwrap();
        let cache = net.forward_cached(&batch).unwrap();
        let (_, grads) = backward(&expr, &net, &batch, &cache).unwrap();
        let flat = |i: usize| {
            let order = [&grads.w1, &grads.b1, &grads.w2, &grads.b2];
            let mut i = i;
            for t in order {
                if i < t.data().len() {
                    return t.data()[i];
                }
                i -= t.data().len();
            }
            unreachable!()
        };
        let mut probe = net.clone();
        for _ in 0..params {
            let i = rng.next_below(net.param_count() as u64) as usize;
            let saved = probe.param(i);
            let h = 1e-5;
            *probe.param_mut(i) = saved + h;
            let up = genloss_diff::loss_forward(&expr, &probe.forward(&batch).unwrap())
                .unwrap()
                .value;
            *probe.param_mut(i) = saved - h;
            let down = genloss_diff::loss_forward(&expr, &probe.forward(&batch).unwrap())
                .unwrap()
                .value;
            *probe.param_mut(i) = saved;
            let fd = (up - down) / (2.0 * h);
            let ad = flat(i);
            let rel = (ad - fd).abs() / ad.abs().max(fd.abs()).max(1e-4);
            if rel > 1e-4 {
                return CheckReport::fail(
                    NAME,
                    format!("{spec:?}: param {i} autodiff {ad} vs fd {fd}"),
                );
            }
        }
    }
    CheckReport::ok(NAME)
}

/// Every compiled penalty form evaluates to exactly zero at full
/// satisfaction.
pub fn check_penalty_normalization() -> CheckReport {
    const NAME: &str = "penalty normalization";
    let mut dom = GroundingDomain::new(vec![0, 1, 2]);
    let p = dom.register_predicate("P1", 1).unwrap();
    let q = dom.register_predicate("P2", 1).unwrap();
    dom.register_known("S1", 1, |_| 1.0);

    for spec in shipped_specs() {
        let op = TNormOp::generated(spec);
        let ones = [1.0; 8];

        for text in ["forall v: P1(v)", "forall v: P1(v) -> P2(v)", "forall v: P1(v) <-> P2(v)"] {
            let f = parse_formula(text).unwrap();
            let expr = loss_universal(&f, &dom, &op).unwrap();
            let v = expr.eval(&ones[..expr.num_slots()]).value;
            if v != 0.0 {
                return CheckReport::fail(NAME, format!("{spec:?}: {text} gives {v}"));
            }
            let kb = KnowledgeBase {
                formulas: vec![(f, 1.0)],
                op: op.clone(),
                mode: QuantifierMode::MinMax,
            };
            let expr = kb_loss(&kb, &dom).unwrap();
            let v = expr.eval(&ones[..expr.num_slots()]).value;
            if v != 0.0 {
                return CheckReport::fail(NAME, format!("{spec:?}: minmax {text} gives {v}"));
            }
        }

        let expr = genloss_logic::supervision_loss(&dom, p, "S1", spec).unwrap();
        let v = expr.eval(&ones[..expr.num_slots()]).value;
        if v != 0.0 {
            return CheckReport::fail(NAME, format!("{spec:?}: supervision gives {v}"));
        }
        let expr = positive_supervision_loss(&dom, q, &[0, 2], spec).unwrap();
        let v = expr.eval(&ones[..expr.num_slots()]).value;
        if v != 0.0 {
            return CheckReport::fail(NAME, format!("{spec:?}: positive supervision gives {v}"));
        }
    }
    CheckReport::ok(NAME)
}

/// Midpoint convexity of the nilpotent penalty on a single grounding and
/// the strict sum over several groundings.
pub fn check_convexity(trials: usize) -> CheckReport {
    const NAME: &str = "convexity probes";
    let single = {
        let dom = GroundingDomain::new(vec![0]);
        let mut dom = dom;
        dom.register_predicate("P1", 1).unwrap();
        let f = parse_formula("forall v: P1(v)").unwrap();
        loss_universal(&f, &dom, &TNormOp::generated(GeneratorSpec::lukasiewicz())).unwrap()
    };
    if !convexity_probe(&single, trials, 11) {
        return CheckReport::fail(NAME, "nilpotent single-grounding penalty".to_string());
    }
    let sum = {
        let mut b = ExprBuilder::new();
        let spec = GeneratorSpec::product();
        let terms = (0..4)
            .map(|i| {
                let p = b.pred(PredId(0), &[i]);
                (1.0, b.gen_apply(spec, p))
            })
            .collect();
        let root = b.sum(0.0, terms);
        b.finish(root)
    };
    if !convexity_probe(&sum, trials, 12) {
        return CheckReport::fail(NAME, "strict neglog sum penalty".to_string());
    }
    CheckReport::ok(NAME)
}

/// The whole battery at `bench verify` sizes.
pub fn run_all() -> Vec<CheckReport> {
    vec![
        check_tnorm_laws(2000, 101),
        check_closed_forms(101),
        check_residuation(2000, 102),
        check_cross_entropy(20, 103),
        check_gradients(25, 104),
        check_penalty_normalization(),
        check_convexity(200),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_battery_passes() {
        for report in run_all() {
            assert!(report.passed, "{}: {}", report.name, report.detail);
        }
    }
}
