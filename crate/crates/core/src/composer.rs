//! Pointwise evaluation of finite and infinite compositions.
//!
//! Finite compositions are evaluated innermost-first, exactly (no series
//! truncation). Infinite compositions are certified by splitting the factor
//! sequence at an index `m1` chosen so the tail `f_{m1}, f_{m1+1}, …` is
//! certified on the working disk `|z| ≤ r1`; the finitely many head factors
//! are entire polynomials applied exactly, and a Lipschitz bound for the head
//! propagates the tail's truncation error to the final value.
//!
//! Internal bound arithmetic runs in `log2` space so certification keeps
//! working while the values themselves approach the floating-point range;
//! past that range evaluation reports overflow explicitly.

use num_complex::Complex64;

use crate::convergence::{ConvergenceCertificate, FactorFamily};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Default cap on the number of factors composed for one evaluation.
pub const DEFAULT_MAX_FACTORS: u32 = 1_000_000;

/// How an evaluation was carried out.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPlan {
    /// Working radius `r1 = max(|z|, safe_radius)`.
    pub working_radius: f64,
    /// First factor index treated as certified tail (`m1`).
    pub tail_start: u32,
    /// Last factor composed (`N`).
    pub last_factor: u32,
    /// Largest polynomial degree among the head factors.
    pub head_degree: usize,
    /// Requested error bound.
    pub epsilon: f64,
}

/// A value together with its certified truncation-error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub error_bound: f64,
    pub plan: EvalPlan,
}

/// `f_d(f_{d+1}(… f_n(z) …))`, innermost factor first. Exact composition
/// order, no truncation.
pub fn compose_pointwise(family: &FactorFamily, d: u32, n: u32, z: Complex64) -> Result<Complex64> {
    if d < 1 || d > n {
        return Err(Error::InvalidRange(format!(
            "requires 1 <= d <= n, got d = {d}, n = {n}"
        )));
    }
    let mut w = z;
    for k in (d..=n).rev() {
        w = family.eval_factor(k, w);
    }
    Ok(w)
}

/// Lipschitz bound for the head `f_1 ∘ … ∘ f_{m1-1}` on a disk covering the
/// tail's image, as a product of per-factor derivative majorants.
///
/// May return `+∞` when the bound exceeds the floating-point range; the
/// `log2`-domain variant used internally never overflows.
pub fn head_lipschitz(family: &FactorFamily, m1: u32, r1: f64) -> Result<f64> {
    let cert = family.certify()?;
    Ok(log2_head_lipschitz(family, &cert, m1, r1)?.exp2())
}

/// `log2` of the head Lipschitz bound.
///
/// The tail image is bounded by `r1/(1 − r1·α_{m1})`, inflated by a factor 2
/// for margin; each head factor `f_n` multiplies the bound by
/// `1 + Σ_r r·|c_{n,r}|·ρ^{r-1}` where `ρ` tracks the image of the partial
/// composition through the head.
fn log2_head_lipschitz(
    family: &FactorFamily,
    cert: &ConvergenceCertificate,
    m1: u32,
    r1: f64,
) -> Result<f64> {
    if m1 < 1 {
        return Err(Error::InvalidRange(format!("requires m1 >= 1, got {m1}")));
    }
    if m1 == 1 {
        return Ok(0.0);
    }
    let tail_image = cert.majorant_tail_bound(m1, r1)?;
    let mut log_rho = (2.0 * tail_image).log2();
    let mut log_lipschitz = 0.0;
    for n in (1..m1).rev() {
        let f = family.factor(n);
        let mut log_deriv = 0.0; // the constant term 1
        let mut log_image = log_rho;
        for r in 2..=f.degree() {
            let c = f.coeff(r).norm();
            if c > 0.0 {
                let lc = c.log2();
                let rf = r as f64;
                log_deriv = log2_sum(log_deriv, rf.log2() + lc + (rf - 1.0) * log_rho);
                log_image = log2_sum(log_image, lc + rf * log_rho);
            }
        }
        log_lipschitz += log_deriv;
        log_rho = log_image;
    }
    Ok(log_lipschitz)
}

/// `log2(2^a + 2^b)` without overflow; tolerates `-∞` arguments.
fn log2_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// Evaluates the infinite composition at `z` with certified truncation error
/// at most `epsilon`.
pub fn eval_certified(family: &FactorFamily, z: Complex64, epsilon: f64) -> Result<EvalResult> {
    let cert = family.certify()?;
    eval_certified_with(family, &cert, z, epsilon, DEFAULT_MAX_FACTORS)
}

/// [`eval_certified`] with a reusable certificate and an explicit factor
/// budget.
pub fn eval_certified_with(
    family: &FactorFamily,
    cert: &ConvergenceCertificate,
    z: Complex64,
    epsilon: f64,
    max_factors: u32,
) -> Result<EvalResult> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !z.is_finite() {
        return Err(Error::InvalidParameter("evaluation point must be finite".into()));
    }
    if cert.alpha() == 0.0 {
        // every factor is the identity
        return Ok(EvalResult {
            value: z,
            error_bound: 0.0,
            plan: EvalPlan {
                working_radius: z.norm(),
                tail_start: 1,
                last_factor: 1,
                head_degree: 0,
                epsilon,
            },
        });
    }
    let r1 = z.norm().max(cert.safe_radius());
    let m1 = cert.plan_split(r1)?;
    if m1 > max_factors {
        return Err(Error::BudgetExceeded(format!(
            "head/tail split at factor {m1} exceeds the budget of {max_factors}"
        )));
    }
    let log_lipschitz = log2_head_lipschitz(family, cert, m1, r1)?;
    let log_target = epsilon.log2();
    let log_bound =
        |n: u32| -> Result<f64> { Ok(log_lipschitz + cert.log2_truncation_error(m1, n)?) };

    let mut n = m1;
    if log_bound(n)? > log_target {
        let mut lo = n;
        let mut hi = n;
        loop {
            hi = hi.saturating_mul(2).min(max_factors);
            if log_bound(hi)? <= log_target {
                break;
            }
            if hi == max_factors {
                return Err(Error::BudgetExceeded(format!(
                    "cannot certify error {epsilon} within {max_factors} factors"
                )));
            }
            lo = hi;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if log_bound(mid)? <= log_target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        n = hi;
    }

    let value = compose_pointwise(family, 1, n, z)?;
    if !value.is_finite() {
        return Err(Error::Overflow(format!(
            "composition value exceeds the floating-point range at |z| = {}",
            z.norm()
        )));
    }
    Ok(EvalResult {
        value,
        error_bound: log_bound(n)?.exp2(),
        plan: EvalPlan {
            working_radius: r1,
            tail_start: m1,
            last_factor: n,
            head_degree: head_degree(family, m1),
            epsilon,
        },
    })
}

fn head_degree(family: &FactorFamily, m1: u32) -> usize {
    if m1 <= 1 {
        return 0;
    }
    match family {
        FactorFamily::Explicit { factors } => factors
            .iter()
            .take(m1 as usize - 1)
            .map(|f| f.degree())
            .max()
            .unwrap_or(0),
        FactorFamily::Geometric { exponent, .. } | FactorFamily::PowerLaw { exponent, .. } => {
            *exponent as usize
        }
    }
}

/// Stabilization metadata for [`limit_series`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSeriesReport {
    pub series: TruncatedSeries,
    /// Number of factors composed when the jet stabilized.
    pub last_factor: u32,
    /// Largest per-coefficient movement in the final step.
    pub last_movement: f64,
}

/// Degree-`degree` jet of the limit function at the origin.
///
/// Composes the factor jets for increasing `N` until no coefficient moves by
/// `epsilon` or more between successive steps (absolute, per coefficient:
/// coefficients may be zero).
pub fn limit_series(family: &FactorFamily, degree: usize, epsilon: f64) -> Result<TruncatedSeries> {
    Ok(limit_series_with_report(family, degree, epsilon, DEFAULT_MAX_FACTORS)?.series)
}

/// [`limit_series`] with stabilization metadata and an explicit budget.
pub fn limit_series_with_report(
    family: &FactorFamily,
    degree: usize,
    epsilon: f64,
    max_factors: u32,
) -> Result<LimitSeriesReport> {
    if degree < 1 {
        return Err(Error::DegreeTooSmall);
    }
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let cert = family.certify()?;
    let pad = TruncatedSeries::identity();
    if cert.alpha() == 0.0 {
        return Ok(LimitSeriesReport {
            series: pad.compose(&TruncatedSeries::identity(), degree)?,
            last_factor: 1,
            last_movement: 0.0,
        });
    }
    // R_{n=1}^{N+1} = (R_{n=1}^{N}) ∘ f_{N+1}: extend the jet outer-to-inner.
    let mut jet = family.factor(1).compose(&pad, degree)?;
    for n in 2..=max_factors {
        let next = jet.compose(&family.factor(n), degree)?;
        let movement = (0..=degree)
            .map(|k| (next.coeff(k) - jet.coeff(k)).norm())
            .fold(0.0f64, f64::max);
        jet = next;
        if movement < epsilon {
            return Ok(LimitSeriesReport {
                series: jet,
                last_factor: n,
                last_movement: movement,
            });
        }
    }
    Err(Error::BudgetExceeded(format!(
        "limit jet did not stabilize within {max_factors} factors"
    )))
}
