//! The quadratic Poincaré function and its closed-form oracles.
//!
//! For `|s| > 1` the family `f_n = z + z²/sⁿ` composes to an entire function
//! `F` satisfying `F(sz) = sF(z) + sF(z)²`. Inside a base disk `F` is
//! evaluated directly from the composition; outside, `z` is pulled back by
//! powers of `s` into the disk and the value is pushed forward through the
//! exact quadratic map `u ↦ s(u + u²)`, with the error budget propagated
//! through per-step Lipschitz factors.

use num_complex::Complex64;

use crate::composer::{self, EvalPlan, DEFAULT_MAX_FACTORS};
use crate::convergence::FactorFamily;
use crate::error::{Error, Result};

/// Parameters of the Poincaré evaluation: the multiplier `s` (`|s| > 1`) and
/// the radius inside which the composition is evaluated directly.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareSpec {
    s: Complex64,
    base_radius: f64,
}

/// Like [`composer::EvalResult`], with the number of functional-equation
/// steps (`depth`, the continuation depth `k`) used to reach the point.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareResult {
    pub value: Complex64,
    pub error_bound: f64,
    pub depth: u32,
    /// Plan of the base evaluation inside the direct disk.
    pub plan: EvalPlan,
}

impl PoincareSpec {
    /// Base radius defaults to the family's certified safe radius.
    pub fn new(s: Complex64) -> Result<Self> {
        let family = FactorFamily::geometric(s, 2)?;
        let base_radius = family.certify()?.safe_radius();
        Ok(Self { s, base_radius })
    }

    /// Custom direct-evaluation radius, at most the certified safe radius.
    pub fn with_base_radius(s: Complex64, base_radius: f64) -> Result<Self> {
        let family = FactorFamily::geometric(s, 2)?;
        let safe = family.certify()?.safe_radius();
        if base_radius <= 0.0 || base_radius.is_nan() || base_radius > safe {
            return Err(Error::InvalidParameter(format!(
                "base radius must lie in (0, {safe}], got {base_radius}"
            )));
        }
        Ok(Self { s, base_radius })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn base_radius(&self) -> f64 {
        self.base_radius
    }

    pub fn family(&self) -> FactorFamily {
        FactorFamily::geometric(self.s, 2).expect("validated at construction")
    }

    /// Evaluates `F(z)` anywhere in the plane with certified error `epsilon`.
    pub fn eval(&self, z: Complex64, epsilon: f64) -> Result<PoincareResult> {
        if epsilon <= 0.0 || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if !z.is_finite() {
            return Err(Error::InvalidParameter("evaluation point must be finite".into()));
        }
        let family = self.family();
        let cert = family.certify()?;
        if z.norm() <= self.base_radius {
            let res = composer::eval_certified_with(&family, &cert, z, epsilon, DEFAULT_MAX_FACTORS)?;
            return Ok(PoincareResult {
                value: res.value,
                error_bound: res.error_bound,
                depth: 0,
                plan: res.plan,
            });
        }

        let s_norm = self.s.norm();
        let depth = ((z.norm() / self.base_radius).ln() / s_norm.ln()).ceil().max(1.0) as u32;
        let pulled_back = z / self.s.powu(depth);

        // The forward map expands; find a base accuracy whose propagated
        // error lands under the requested one. The Lipschitz factors depend
        // on the chain values, so refine iteratively (two passes in practice).
        let mut base_epsilon = epsilon;
        for _ in 0..16 {
            let base =
                composer::eval_certified_with(&family, &cert, pulled_back, base_epsilon, DEFAULT_MAX_FACTORS)?;
            let mut value = base.value;
            let mut err = base.error_bound;
            for _ in 0..depth {
                // |h(u+e) − h(u)| ≤ |s|·(1 + 2(|u|+e))·e for h(u) = s(u+u²)
                let lipschitz = s_norm * (1.0 + 2.0 * (value.norm() + err));
                value = self.s * (value + value * value);
                err *= lipschitz;
                if !value.is_finite() || !err.is_finite() {
                    return Err(Error::Overflow(format!(
                        "continuation exceeds the floating-point range at |z| = {}",
                        z.norm()
                    )));
                }
            }
            if err <= epsilon {
                return Ok(PoincareResult {
                    value,
                    error_bound: err,
                    depth,
                    plan: base.plan,
                });
            }
            base_epsilon *= (epsilon / err) * 0.5;
            if base_epsilon < 1e-300 {
                return Err(Error::BudgetExceeded(format!(
                    "continuation error {epsilon} is not reachable at |z| = {}",
                    z.norm()
                )));
            }
        }
        Err(Error::BudgetExceeded(
            "continuation error budget did not converge".into(),
        ))
    }

    /// `|F(sz) − s·F(z) − s·F(z)²|` with both evaluations at accuracy
    /// `epsilon`. Small residuals certify the Poincaré property.
    pub fn functional_residual(&self, z: Complex64, epsilon: f64) -> Result<f64> {
        let lhs = self.eval(self.s * z, epsilon)?.value;
        let f = self.eval(z, epsilon)?.value;
        Ok((lhs - self.s * (f + f * f)).norm())
    }

    /// Applies the first `n` factors at `z`: the partial composition at the
    /// limit of the rescaled conjugation `sⁿ·f(z/sⁿ) → z`. Converges to
    /// `F(z)` geometrically in `n`; compare against [`oracle_h`] for
    /// `s ∈ {2, −2, 4}`.
    pub fn uniqueness_probe(&self, n: u32, z: Complex64) -> Result<Complex64> {
        composer::compose_pointwise(&self.family(), 1, n, z)
    }
}

/// Closed-form targets for `s = 2, −2, 4` (indices 1, 2, 3):
///
/// ```text
/// h₁(z) = (e^{2z} − 1)/2
/// h₂(z) = sin(2z/√3 + π/6) − 1/2
/// h₃(z) = sinh(√z)²
/// ```
///
/// `h₃` is even in `√z`, so the principal branch choice is immaterial and the
/// function is entire. Each is computed in a form that stays fully accurate
/// near the origin (no `e^w − 1`-style cancellation), which matters when the
/// argument has been scaled down by a large power of `s`.
pub fn oracle_h(index: u32, z: Complex64) -> Result<Complex64> {
    match index {
        1 => Ok(exp_m1(2.0 * z) / 2.0),
        2 => {
            // sin(δ + π/6) − 1/2 = (√3/2)·sin δ − sin²(δ/2), δ = 2z/√3
            let delta = 2.0 * z / 3.0f64.sqrt();
            let half = (delta / 2.0).sin();
            Ok(3.0f64.sqrt() / 2.0 * delta.sin() - half * half)
        }
        3 => {
            let w = z.sqrt().sinh();
            Ok(w * w)
        }
        _ => Err(Error::InvalidParameter(format!(
            "oracle index must be 1, 2 or 3, got {index}"
        ))),
    }
}

/// Residual of the oracle's own self-similarity `h(σz) = σ(h(z) + h(z)²)`
/// with `σ = 2, −2, 4` for indices 1, 2, 3. Rounding-level everywhere.
pub fn oracle_residual(index: u32, z: Complex64) -> Result<f64> {
    let sigma = match index {
        1 => 2.0,
        2 => -2.0,
        3 => 4.0,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "oracle index must be 1, 2 or 3, got {index}"
            )))
        }
    };
    let lhs = oracle_h(index, sigma * z)?;
    let h = oracle_h(index, z)?;
    Ok((lhs - sigma * (h + h * h)).norm())
}

/// `e^w − 1` without cancellation for small `w`.
fn exp_m1(w: Complex64) -> Complex64 {
    let half_sin = (w.im / 2.0).sin();
    Complex64::new(
        w.re.exp_m1() * w.im.cos() - 2.0 * half_sin * half_sin,
        w.re.exp() * w.im.sin(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(s: f64) -> PoincareSpec {
        PoincareSpec::new(c(s, 0.0)).unwrap()
    }

    #[test]
    fn rejects_contracting_multiplier() {
        assert!(PoincareSpec::new(c(0.5, 0.0)).is_err());
        assert!(PoincareSpec::new(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn base_radius_defaults_to_safe_radius() {
        let p = spec(2.0);
        assert!((p.base_radius() - 0.25).abs() <= 1e-6);
        assert!(PoincareSpec::with_base_radius(c(2.0, 0.0), 0.3).is_err());
        assert!(PoincareSpec::with_base_radius(c(2.0, 0.0), 0.1).is_ok());
    }

    #[test]
    fn oracle_values_at_origin() {
        for index in 1..=3 {
            assert!(oracle_h(index, c(0.0, 0.0)).unwrap().norm() <= 1e-15);
        }
    }

    #[test]
    fn oracle_exponential_value() {
        let got = oracle_h(1, c(1.0, 0.0)).unwrap();
        let want = (2.0f64.exp() - 1.0) / 2.0;
        assert!((got - c(want, 0.0)).norm() <= 1e-13);
        assert!((got.re - 3.194528049465).abs() <= 1e-11);
    }

    #[test]
    fn oracle_sinh_squared_at_negative_argument() {
        // sinh(√(−π²/4))² = sinh(iπ/2)² = (i·1)² = −1
        let got = oracle_h(3, c(-std::f64::consts::PI.powi(2) / 4.0, 0.0)).unwrap();
        assert!((got - c(-1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn oracle_rejects_unknown_index() {
        assert!(oracle_h(4, c(0.0, 0.0)).is_err());
        assert!(oracle_residual(0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn oracle_residuals_at_rounding_level() {
        assert_eq!(oracle_residual(1, c(0.0, 0.0)).unwrap(), 0.0);
        assert!(oracle_residual(2, c(0.3, 0.0)).unwrap() <= 1e-13);
        assert!(oracle_residual(3, c(1.0, 1.0)).unwrap() <= 1e-12);
    }

    #[test]
    fn oracle_stays_accurate_for_tiny_arguments() {
        // relative accuracy must survive rescaling by s^N, N = 40
        let w = c(0.5 / 2.0f64.powi(40), 0.0);
        let got = oracle_h(1, w).unwrap();
        // h₁(w) = w + w² + …: at this scale the w² term is the whole story
        let want = w + w * w;
        assert!((got - want).norm() <= 1e-18 * w.norm());
    }

    #[test]
    fn eval_fixes_origin() {
        let res = spec(2.0).eval(c(0.0, 0.0), 1e-9).unwrap();
        assert_eq!(res.value, c(0.0, 0.0));
        assert_eq!(res.depth, 0);
    }

    #[test]
    fn eval_continues_past_base_radius() {
        // F(3) = (e⁶ − 1)/2 needs several pull-back steps
        let res = spec(2.0).eval(c(3.0, 0.0), 1e-9).unwrap();
        let truth = (6.0f64.exp() - 1.0) / 2.0;
        assert!(res.depth >= 3);
        assert!((res.value - c(truth, 0.0)).norm() <= res.error_bound + 1e-10 * truth);
        assert!(res.error_bound <= 1e-9);
    }

    #[test]
    fn eval_matches_sine_identity_for_negative_multiplier() {
        let res = spec(-2.0).eval(c(0.5, 0.0), 1e-9).unwrap();
        let truth = oracle_h(2, c(0.5, 0.0)).unwrap();
        assert!((res.value - truth).norm() <= 1e-8);
        // cross-check the decimal expansion of sin(1/√3 + π/6) − 1/2
        assert!((res.value.re - 0.3916374416827052).abs() <= 1e-8);
    }

    #[test]
    fn eval_reports_overflow_for_enormous_points() {
        assert!(matches!(
            spec(2.0).eval(c(500.0, 0.0), 1e-6).unwrap_err(),
            Error::Overflow(_)
        ));
    }

    #[test]
    fn continuation_agrees_with_direct_evaluation() {
        // inside the base disk, one functional-equation step from z/s must
        // match the direct value within the combined budgets
        let p = spec(2.0);
        let z = c(0.2, 0.1);
        let eps = 1e-11;
        let direct = p.eval(z, eps).unwrap();
        let inner = p.eval(z / p.s(), eps).unwrap();
        let stepped = p.s() * (inner.value + inner.value * inner.value);
        let step_lipschitz = p.s().norm() * (1.0 + 2.0 * inner.value.norm());
        let budget = direct.error_bound + step_lipschitz * inner.error_bound;
        assert!((stepped - direct.value).norm() <= budget + 1e-14);
    }

    #[test]
    fn functional_residual_examples() {
        assert_eq!(spec(2.0).functional_residual(c(0.0, 0.0), 1e-10).unwrap(), 0.0);
        assert!(spec(2.0).functional_residual(c(0.1, 0.0), 1e-10).unwrap() <= 1e-8);
        assert!(spec(4.0).functional_residual(c(0.2, 0.0), 1e-10).unwrap() <= 1e-8);
    }

    #[test]
    fn probe_fixes_origin() {
        assert_eq!(spec(2.0).uniqueness_probe(12, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn eval_matches_oracles_on_the_unit_disk() {
        use crate::verify::sample_disk;
        use rand::SeedableRng;

        for (s, index) in [(2.0, 1u32), (-2.0, 2), (4.0, 3)] {
            let p = spec(s);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xFACADE);
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let z = sample_disk(&mut rng, 1.0);
                let got = p.eval(z, 1e-9).unwrap().value;
                worst = worst.max((got - oracle_h(index, z).unwrap()).norm());
            }
            assert!(worst <= 1e-8, "s = {s}: worst deviation {worst}");
        }
    }

    #[test]
    fn probe_errors_decay_geometrically() {
        let p = spec(2.0);
        let z = c(0.5, 0.0);
        let truth = oracle_h(1, z).unwrap();
        let errors: Vec<f64> = [5u32, 10, 20, 40]
            .iter()
            .map(|&n| (p.uniqueness_probe(n, z).unwrap() - truth).norm())
            .collect();
        for pair in errors.windows(2) {
            assert!(pair[1] < pair[0], "no decay: {errors:?}");
        }
        // roughly one bit per factor
        assert!(errors[0] / errors[2] > 1e3, "decay too slow: {errors:?}");
    }

    #[test]
    fn probe_converges_to_exponential_target() {
        let p = spec(2.0);
        let truth = oracle_h(1, c(0.5, 0.0)).unwrap();
        let probe = p.uniqueness_probe(40, c(0.5, 0.0)).unwrap();
        assert!((probe - truth).norm() <= 1e-11);
    }

    #[test]
    fn probe_converges_to_sinh_target() {
        let p = spec(4.0);
        let truth = oracle_h(3, c(0.5, 0.0)).unwrap();
        let probe = p.uniqueness_probe(30, c(0.5, 0.0)).unwrap();
        assert!((probe - truth).norm() <= 1e-12);
    }
}
