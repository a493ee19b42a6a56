//! Grid-based classification of binary aggregation functions.

/// Position of an aggregator relative to min and max in the pointwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggregatorClass {
    /// `f <= min` everywhere.
    Conjunctive,
    /// `f >= max` everywhere.
    Disjunctive,
    /// `min < f < max` strictly off the diagonal (min = max on it).
    Averaging,
    /// None of the bounds holds uniformly.
    Hybrid,
}

/// Comparison slack for the non-strict bounds. The strict averaging test
/// uses the exact order: Eq-style strictness is attainable off the diagonal.
const SLACK: f64 = 1e-12;

/// Samples `f` on a uniform `grid_n x grid_n` grid over the unit square and
/// classifies it by pointwise comparison against min and max.
pub fn classify_aggregator<F>(f: F, grid_n: usize) -> AggregatorClass
where
    F: Fn(f64, f64) -> f64,
{
    assert!(grid_n >= 2, "grid_n must be at least 2");
    let step = 1.0 / (grid_n - 1) as f64;
    let mut conjunctive = true;
    let mut disjunctive = true;
    let mut averaging = true;
    for i in 0..grid_n {
        let x = i as f64 * step;
        for j in 0..grid_n {
            let y = j as f64 * step;
            let v = f(x, y);
            let lo = x.min(y);
            let hi = x.max(y);
            if v > lo + SLACK {
                conjunctive = false;
            }
            if v < hi - SLACK {
                disjunctive = false;
            }
            // Strict betweenness is impossible on the diagonal; skip it.
            if i != j && !(lo < v && v < hi) {
                averaging = false;
            }
        }
    }
    if conjunctive {
        AggregatorClass::Conjunctive
    } else if disjunctive {
        AggregatorClass::Disjunctive
    } else if averaging {
        AggregatorClass::Averaging
    } else {
        AggregatorClass::Hybrid
    }
}
