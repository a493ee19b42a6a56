//! Additive generator families and the operations derived from them.

use thiserror::Error;

/// Default clamp for strict generators evaluated near zero.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Below this magnitude the Schweizer-Sklar parameter is treated as zero:
/// `(1 - x^lambda)/lambda` has lost all precision to cancellation long before.
const SS_LAMBDA_ZERO: f64 = 1e-7;

/// Above this value the Frank generator is evaluated as its `lambda = +inf`
/// limit `1 - x`.
const FRANK_LAMBDA_INF: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("invalid lambda {lambda} for {family:?}: {reason}")]
    InvalidLambda {
        family: GeneratorFamily,
        lambda: f64,
        reason: &'static str,
    },
    #[error("eps {0} outside (0, 1e-3]")]
    InvalidEps(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorFamily {
    SchweizerSklar,
    Frank,
    Lukasiewicz,
    Product,
}

impl GeneratorFamily {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorFamily::SchweizerSklar => "ss",
            GeneratorFamily::Frank => "frank",
            GeneratorFamily::Lukasiewicz => "lukasiewicz",
            GeneratorFamily::Product => "product",
        }
    }
}

/// Whether the generated t-norm is strict (`g(0+) = +inf`) or nilpotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strictness {
    Strict,
    Nilpotent,
    /// Catalog t-norms (Godel) that admit no additive generator.
    NotArchimedean,
}

/// The closed form a spec resolves to after parameter dispatch.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `g(x) = -log(x)` (Product; SS at lambda ~ 0; Frank at lambda = 1).
    NegLog,
    /// `g(x) = 1 - x` (Lukasiewicz; Frank at lambda = +inf).
    OneMinusX,
    /// `g(x) = (1 - x^lambda)/lambda`, lambda finite and away from zero.
    SsPow(f64),
    /// `g(x) = log((lambda-1)/(lambda^x - 1))`, lambda in (0,1) U (1, ~1e8).
    FrankLog(f64),
}

/// A family tag plus parameter identifying one additive generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    family: GeneratorFamily,
    lambda: f64,
    eps: f64,
}

impl GeneratorSpec {
    /// Validates the parameter against the family domain.
    pub fn new(family: GeneratorFamily, lambda: f64) -> Result<Self, GeneratorError> {
        let invalid = |reason| GeneratorError::InvalidLambda {
            family,
            lambda,
            reason,
        };
        match family {
            GeneratorFamily::SchweizerSklar => {
                if !lambda.is_finite() {
                    return Err(invalid("must be finite"));
                }
            }
            GeneratorFamily::Frank => {
                if lambda.is_nan() {
                    return Err(invalid("must not be NaN"));
                }
                // lambda = 0 has no generator formula; Godel min is a separate
                // catalog t-norm, not a member of this family.
                if lambda <= 0.0 {
                    return Err(invalid("must be in (0, +inf]"));
                }
            }
            GeneratorFamily::Lukasiewicz | GeneratorFamily::Product => {}
        }
        Ok(GeneratorSpec {
            family,
            lambda,
            eps: DEFAULT_EPS,
        })
    }

    pub fn schweizer_sklar(lambda: f64) -> Result<Self, GeneratorError> {
        Self::new(GeneratorFamily::SchweizerSklar, lambda)
    }

    pub fn frank(lambda: f64) -> Result<Self, GeneratorError> {
        Self::new(GeneratorFamily::Frank, lambda)
    }

    pub fn lukasiewicz() -> Self {
        Self::new(GeneratorFamily::Lukasiewicz, 0.0).unwrap()
    }

    pub fn product() -> Self {
        Self::new(GeneratorFamily::Product, 0.0).unwrap()
    }

    /// Replaces the clamp threshold. Must lie in (0, 1e-3].
    pub fn with_eps(mut self, eps: f64) -> Result<Self, GeneratorError> {
        if !(eps > 0.0 && eps <= 1e-3) {
            return Err(GeneratorError::InvalidEps(eps));
        }
        self.eps = eps;
        Ok(self)
    }

    pub fn family(&self) -> GeneratorFamily {
        self.family
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn shape(&self) -> Shape {
        match self.family {
            GeneratorFamily::Product => Shape::NegLog,
            GeneratorFamily::Lukasiewicz => Shape::OneMinusX,
            GeneratorFamily::SchweizerSklar => {
                if self.lambda.abs() < SS_LAMBDA_ZERO {
                    Shape::NegLog
                } else {
                    Shape::SsPow(self.lambda)
                }
            }
            GeneratorFamily::Frank => {
                if self.lambda == 1.0 {
                    Shape::NegLog
                } else if self.lambda > FRANK_LAMBDA_INF {
                    Shape::OneMinusX
                } else {
                    Shape::FrankLog(self.lambda)
                }
            }
        }
    }

    /// Strict iff `g(0+) = +inf`, after parameter dispatch.
    pub fn strictness(&self) -> Strictness {
        match self.shape() {
            Shape::NegLog => Strictness::Strict,
            Shape::OneMinusX => Strictness::Nilpotent,
            Shape::SsPow(l) => {
                if l < 0.0 {
                    Strictness::Strict
                } else {
                    Strictness::Nilpotent
                }
            }
            Shape::FrankLog(_) => Strictness::Strict,
        }
    }

    /// `g(0+)`: `+inf` for strict generators, finite otherwise.
    pub fn zero_limit(&self) -> f64 {
        match self.shape() {
            Shape::NegLog | Shape::FrankLog(_) => f64::INFINITY,
            Shape::OneMinusX => 1.0,
            Shape::SsPow(l) => {
                if l < 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / l
                }
            }
        }
    }

    /// `g(x)` with the strict-generator clamp applied; the flag reports
    /// whether the clamp fired.
    pub fn eval_flagged(&self, x: f64) -> (f64, bool) {
        debug_assert!((0.0..=1.0).contains(&x), "generator argument {x} outside [0,1]");
        if x == 1.0 {
            return (0.0, false);
        }
        let (x, clamped) = if self.strictness() == Strictness::Strict && x < self.eps {
            (self.eps, true)
        } else {
            (x, false)
        };
        let g = match self.shape() {
            Shape::NegLog => -x.ln(),
            Shape::OneMinusX => 1.0 - x,
            // (1 - x^l)/l = -expm1(l ln x)/l, exact as l -> 0 and at x = 0.
            Shape::SsPow(l) => -f64::exp_m1(l * x.ln()) / l,
            // log((l-1)/(l^x-1)) with both factors carried as logs of
            // magnitudes; numerator and denominator share a sign for l < 1.
            Shape::FrankLog(l) => (l - 1.0).abs().ln() - f64::exp_m1(x * l.ln()).abs().ln(),
        };
        (g, clamped)
    }

    /// `g(x)`; see [`GeneratorSpec::eval_flagged`] for the clamp flag.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_flagged(x).0
    }

    /// `g'(x)`, with zero on the clamped branch.
    pub fn deriv(&self, x: f64) -> f64 {
        if self.strictness() == Strictness::Strict && x < self.eps {
            return 0.0;
        }
        match self.shape() {
            Shape::NegLog => -1.0 / x,
            Shape::OneMinusX => -1.0,
            Shape::SsPow(l) => -x.powf(l - 1.0),
            Shape::FrankLog(l) => {
                let t = f64::exp_m1(x * l.ln());
                -l.ln() * (t + 1.0) / t
            }
        }
    }

    /// The pseudo-inverse `g^{-1}(min{g(0+), y})`, total on `y >= 0`.
    pub fn pseudo_inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 1.0;
        }
        if y >= self.zero_limit() {
            return 0.0;
        }
        match self.shape() {
            Shape::NegLog => (-y).exp(),
            Shape::OneMinusX => 1.0 - y,
            // (1 - l y)^(1/l) = exp(log1p(-l y)/l)
            Shape::SsPow(l) => (f64::ln_1p(-l * y) / l).exp(),
            // log(1 + (l-1) e^{-y}) / log(l)
            Shape::FrankLog(l) => f64::ln_1p((l - 1.0) * (-y).exp()) / l.ln(),
        }
    }

    /// `d/dy g^{-1}(min{g(0+), y})`: zero beyond `g(0+)`, the inverse-function
    /// derivative on the active branch (ties included).
    pub fn pseudo_inverse_deriv(&self, y: f64) -> f64 {
        if y < 0.0 || y > self.zero_limit() {
            return 0.0;
        }
        match self.shape() {
            Shape::NegLog => -(-y).exp(),
            Shape::OneMinusX => -1.0,
            Shape::SsPow(l) => -((1.0 / l - 1.0) * f64::ln_1p(-l * y)).exp(),
            Shape::FrankLog(l) => {
                let s = (l - 1.0) * (-y).exp();
                -s / (l.ln() * (1.0 + s))
            }
        }
    }

    /// Generated t-norm `g^{-1}(min{g(0+), g(x) + g(y)})`.
    pub fn tnorm(&self, x: f64, y: f64) -> f64 {
        // g(1) = 0 makes 1 neutral and 0 annihilating; the shortcuts keep
        // both exact where the strict-generator clamp would otherwise leak
        // eps into the result.
        if x == 1.0 {
            return y;
        }
        if y == 1.0 {
            return x;
        }
        if x == 0.0 || y == 0.0 {
            return 0.0;
        }
        self.pseudo_inverse(self.eval(x) + self.eval(y))
    }

    /// De Morgan dual under `n(x) = 1 - x`.
    pub fn tconorm(&self, x: f64, y: f64) -> f64 {
        1.0 - self.tnorm(1.0 - x, 1.0 - y)
    }

    /// Residuum `x => y`, i.e. `g^{-1}(max{0, g(y) - g(x)})`.
    pub fn residuum(&self, x: f64, y: f64) -> f64 {
        if x <= y {
            return 1.0;
        }
        self.pseudo_inverse((self.eval(y) - self.eval(x)).max(0.0))
    }

    /// Bi-residuum `x <=> y`, i.e. `g^{-1}(|g(x) - g(y)|)`.
    pub fn biresiduum(&self, x: f64, y: f64) -> f64 {
        self.pseudo_inverse((self.eval(x) - self.eval(y)).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn product_generator_is_neg_log() {
        // -log(0.5) = 0.6931471805599453
        let g = GeneratorSpec::product();
        assert!(close(g.eval(0.5), 0.693_147_180_559_945_3, 1e-15));
    }

    #[test]
    fn g_of_one_is_exactly_zero_for_every_family() {
        let specs = [
            GeneratorSpec::product(),
            GeneratorSpec::lukasiewicz(),
            GeneratorSpec::schweizer_sklar(2.0).unwrap(),
            GeneratorSpec::schweizer_sklar(-0.5).unwrap(),
            GeneratorSpec::frank(0.3).unwrap(),
            GeneratorSpec::frank(10.0).unwrap(),
            GeneratorSpec::frank(f64::INFINITY).unwrap(),
        ];
        for s in specs {
            assert_eq!(s.eval(1.0), 0.0);
            assert_eq!(s.pseudo_inverse(0.0), 1.0);
        }
    }

    #[test]
    fn ss_lambda_one_reduces_to_one_minus_x() {
        let g = GeneratorSpec::schweizer_sklar(1.0).unwrap();
        assert!(close(g.eval(0.3), 0.7, 1e-15));
    }

    #[test]
    fn frank_infinite_lambda_is_one_minus_x() {
        let g = GeneratorSpec::frank(f64::INFINITY).unwrap();
        assert_eq!(g.eval(0.3), 0.7);
        // The huge-but-finite dispatch hits the same branch.
        let g = GeneratorSpec::frank(1e9).unwrap();
        assert_eq!(g.eval(0.3), 0.7);
    }

    #[test]
    fn pseudo_inverse_examples() {
        // Above g(0+) = 1 clamps to 0.
        assert_eq!(GeneratorSpec::lukasiewicz().pseudo_inverse(2.0), 0.0);
        // exp(-0.693147) = 0.50000016...
        assert!(close(
            GeneratorSpec::product().pseudo_inverse(0.693_147),
            0.5,
            1e-6
        ));
        assert_eq!(GeneratorSpec::product().pseudo_inverse(0.0), 1.0);
        assert_eq!(GeneratorSpec::product().pseudo_inverse(f64::INFINITY), 0.0);
    }

    #[test]
    fn clamp_fires_below_eps_for_strict_generators() {
        let g = GeneratorSpec::product();
        let (v, clamped) = g.eval_flagged(0.0);
        assert!(clamped);
        assert!(close(v, -(1e-12f64).ln(), 1e-9));
        let (_, clamped) = g.eval_flagged(0.5);
        assert!(!clamped);
        // Nilpotent generators never clamp: g(0) is finite.
        let (v, clamped) = GeneratorSpec::lukasiewicz().eval_flagged(0.0);
        assert!(!clamped);
        assert_eq!(v, 1.0);
        let (v, clamped) = GeneratorSpec::schweizer_sklar(2.0).unwrap().eval_flagged(0.0);
        assert!(!clamped);
        assert!(close(v, 0.5, 1e-15));
    }

    #[test]
    fn strictness_follows_the_zero_limit() {
        let cases = [
            (GeneratorSpec::schweizer_sklar(0.0).unwrap(), Strictness::Strict),
            (GeneratorSpec::schweizer_sklar(2.0).unwrap(), Strictness::Nilpotent),
            (GeneratorSpec::schweizer_sklar(-2.0).unwrap(), Strictness::Strict),
            // Inside the near-zero dispatch window.
            (GeneratorSpec::schweizer_sklar(1e-9).unwrap(), Strictness::Strict),
            (GeneratorSpec::frank(2.0).unwrap(), Strictness::Strict),
            (GeneratorSpec::frank(f64::INFINITY).unwrap(), Strictness::Nilpotent),
            (GeneratorSpec::product(), Strictness::Strict),
            (GeneratorSpec::lukasiewicz(), Strictness::Nilpotent),
        ];
        for (spec, want) in cases {
            assert_eq!(spec.strictness(), want, "{spec:?}");
            let zl = spec.zero_limit();
            match want {
                Strictness::Strict => assert!(zl.is_infinite()),
                Strictness::Nilpotent => assert!(zl.is_finite()),
                Strictness::NotArchimedean => unreachable!(),
            }
        }
    }

    #[test]
    fn parameter_domains_are_enforced() {
        assert!(GeneratorSpec::frank(0.0).is_err());
        assert!(GeneratorSpec::frank(-1.0).is_err());
        assert!(GeneratorSpec::frank(f64::NAN).is_err());
        assert!(GeneratorSpec::frank(0.5).is_ok());
        assert!(GeneratorSpec::frank(f64::INFINITY).is_ok());
        assert!(GeneratorSpec::schweizer_sklar(f64::INFINITY).is_err());
        assert!(GeneratorSpec::schweizer_sklar(f64::NAN).is_err());
        assert!(GeneratorSpec::schweizer_sklar(-3.5).is_ok());
        assert!(GeneratorSpec::product().with_eps(0.0).is_err());
        assert!(GeneratorSpec::product().with_eps(1e-2).is_err());
        assert!(GeneratorSpec::product().with_eps(1e-3).is_ok());
    }

    #[test]
    fn residuum_examples() {
        // Goguen form min(1, y/x).
        let p = GeneratorSpec::product();
        assert!(close(p.residuum(0.5, 0.25), 0.5, 1e-12));
        assert_eq!(p.residuum(0.3, 0.7), 1.0);
        let l = GeneratorSpec::lukasiewicz();
        assert!(close(l.residuum(0.9, 0.4), 0.5, 1e-12));
    }

    #[test]
    fn biresiduum_examples() {
        let l = GeneratorSpec::lukasiewicz();
        assert_eq!(l.biresiduum(0.42, 0.42), 1.0);
        assert!(close(l.biresiduum(0.9, 0.4), 0.5, 1e-12));
        let p = GeneratorSpec::product();
        assert_eq!(p.biresiduum(0.42, 0.42), 1.0);
        assert!(close(p.biresiduum(0.5, 0.25), 0.5, 1e-12));
        // Diagonal is exactly 1 even where the clamp fires on both sides.
        assert_eq!(p.biresiduum(0.0, 0.0), 1.0);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let specs = [
            GeneratorSpec::product(),
            GeneratorSpec::lukasiewicz(),
            GeneratorSpec::schweizer_sklar(2.0).unwrap(),
            GeneratorSpec::schweizer_sklar(-1.5).unwrap(),
            GeneratorSpec::frank(0.5).unwrap(),
            GeneratorSpec::frank(7.0).unwrap(),
        ];
        let h = 1e-6;
        for spec in specs {
            for &x in &[0.1, 0.35, 0.6, 0.9] {
                let fd = (spec.eval(x + h) - spec.eval(x - h)) / (2.0 * h);
                let an = spec.deriv(x);
                assert!(
                    (fd - an).abs() / an.abs().max(1.0) < 1e-6,
                    "{spec:?} g'({x}): fd {fd} vs {an}"
                );
            }
            for &y in &[0.05, 0.4, 0.8] {
                let fd = (spec.pseudo_inverse(y + h) - spec.pseudo_inverse(y - h)) / (2.0 * h);
                let an = spec.pseudo_inverse_deriv(y);
                assert!(
                    (fd - an).abs() / an.abs().max(1.0) < 1e-5,
                    "{spec:?} (g^-1)'({y}): fd {fd} vs {an}"
                );
            }
        }
    }
}
