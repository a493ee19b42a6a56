//! Randomized midpoint-convexity probing of compiled loss expressions.

use genloss_core::XorShift64Star;

use crate::expr::LossExpr;

/// Checks midpoint convexity in predicate-output space: for `trials` random
/// pairs `u, v` in the unit cube, `expr((u+v)/2)` must not exceed
/// `(expr(u) + expr(v))/2` by more than 1e-9. Returns whether every trial
/// passed. A `true` is evidence, not proof; a `false` is a counterexample.
pub fn convexity_probe(expr: &LossExpr, trials: usize, seed: u64) -> bool {
    let n = expr.num_slots();
    let mut rng = XorShift64Star::new(seed);
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut mid = vec![0.0; n];
    for _ in 0..trials {
        for i in 0..n {
            u[i] = rng.next_f64();
            v[i] = rng.next_f64();
            mid[i] = 0.5 * (u[i] + v[i]);
        }
        let eu = expr.eval(&u).value;
        let ev = expr.eval(&v).value;
        let em = expr.eval(&mid).value;
        if em > 0.5 * (eu + ev) + 1e-9 {
            return false;
        }
    }
    true
}
