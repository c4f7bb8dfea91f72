//! Factor families and convergence certificates.
//!
//! A family `{f_n}` of normalized factors converges (as an infinite
//! composition) when the constants
//!
//! ```text
//! C_n = max_{r ≥ 2} |c_{n,r}|^{1/(r-1)}
//! ```
//!
//! have a finite sum `α`. A [`ConvergenceCertificate`] packages certified
//! upper bounds on `α`, on every tail `α_m = Σ_{n≥m} C_n`, and on partial
//! sums, and derives from them:
//!
//! - `safe_radius = 1/(4α)`, the disk where plain truncation is certified;
//! - the geometric growth bound `|R_{n=d}^{m} f_n(z)| ≤ r/(1 − r·Σ C_n)`;
//! - the Cauchy-difference bound `|F_N − F_M| ≤ (Σ_{M+1}^{N} C_n)/α²`;
//! - the head/tail split index used to certify arbitrarily large disks.
//!
//! All certificate arithmetic is pessimistic: closed-form tails are inflated
//! by a fixed margin so that floating rounding cannot push a claimed bound
//! below the true sum. Interval arithmetic is deliberately out of scope.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Multiplicative inflation applied to every certified sum of constants.
/// Covers floating rounding in the closed-form tail expressions.
const ROUNDING_MARGIN: f64 = 1.000_000_1;

/// The per-factor convergence constant `max_{r≥2} |c_r|^{1/(r-1)}`.
///
/// Zero for the identity; requires a normalized series.
pub fn cn_of(f: &TruncatedSeries) -> Result<f64> {
    if !f.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let mut best = 0.0f64;
    for r in 2..=f.degree() {
        let c = f.coeff(r).norm();
        if c > 0.0 {
            best = best.max(c.powf(1.0 / (r as f64 - 1.0)));
        }
    }
    Ok(best)
}

/// A sequence of normalized factors `f_1, f_2, …`.
///
/// Closed-form kinds carry their parameters; explicit lists are identity
/// beyond their last factor. Every produced factor is normalized.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorFamily {
    /// Finitely many explicit factors, identity beyond the list.
    Explicit { factors: Vec<TruncatedSeries> },
    /// `f_n = z + z^{r0} / s^n` with `|s| > 1`.
    Geometric { s: Complex64, exponent: u32 },
    /// `f_n = z + z^{r0} / n^p` with `p > 0`.
    PowerLaw { p: f64, exponent: u32 },
}

impl FactorFamily {
    pub fn explicit(factors: Vec<TruncatedSeries>) -> Result<Self> {
        if factors.iter().any(|f| !f.is_normalized()) {
            return Err(Error::NotNormalized);
        }
        Ok(FactorFamily::Explicit { factors })
    }

    pub fn geometric(s: Complex64, exponent: u32) -> Result<Self> {
        if s.norm() <= 1.0 || !s.norm().is_finite() {
            return Err(Error::InvalidParameter(format!(
                "geometric family requires |s| > 1, got |s| = {}",
                s.norm()
            )));
        }
        if exponent < 2 {
            return Err(Error::InvalidParameter(format!(
                "nonlinear exponent must be at least 2, got {exponent}"
            )));
        }
        Ok(FactorFamily::Geometric { s, exponent })
    }

    pub fn power_law(p: f64, exponent: u32) -> Result<Self> {
        if p <= 0.0 || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power-law family requires p > 0, got {p}"
            )));
        }
        if exponent < 2 {
            return Err(Error::InvalidParameter(format!(
                "nonlinear exponent must be at least 2, got {exponent}"
            )));
        }
        Ok(FactorFamily::PowerLaw { p, exponent })
    }

    /// The `n`-th factor as a jet (`n ≥ 1`). Identity beyond an explicit list.
    pub fn factor(&self, n: u32) -> TruncatedSeries {
        debug_assert!(n >= 1);
        match self {
            FactorFamily::Explicit { factors } => factors
                .get(n as usize - 1)
                .cloned()
                .unwrap_or_else(TruncatedSeries::identity),
            FactorFamily::Geometric { s, exponent } => {
                nonlinear_factor(*exponent, s.inv().powu(n))
            }
            FactorFamily::PowerLaw { p, exponent } => {
                let c = (n as f64).powf(-p);
                nonlinear_factor(*exponent, Complex64::new(c, 0.0))
            }
        }
    }

    /// Evaluates the `n`-th factor at a point without building the jet.
    ///
    /// Identical operation order to `factor(n).eval(w)`.
    pub fn eval_factor(&self, n: u32, w: Complex64) -> Complex64 {
        match self {
            FactorFamily::Explicit { factors } => match factors.get(n as usize - 1) {
                Some(f) => f.eval(w),
                None => w,
            },
            FactorFamily::Geometric { s, exponent } => {
                eval_nonlinear_factor(*exponent, s.inv().powu(n), w)
            }
            FactorFamily::PowerLaw { p, exponent } => {
                let c = (n as f64).powf(-p);
                eval_nonlinear_factor(*exponent, Complex64::new(c, 0.0), w)
            }
        }
    }

    /// Raw (uninflated) constant `C_n`.
    pub fn cn(&self, n: u32) -> f64 {
        debug_assert!(n >= 1);
        match self {
            FactorFamily::Explicit { factors } => factors
                .get(n as usize - 1)
                .map(|f| cn_of(f).expect("explicit factors are normalized"))
                .unwrap_or(0.0),
            FactorFamily::Geometric { s, exponent } => {
                (-(n as f64) * log2_beta(s.norm(), *exponent)).exp2()
            }
            FactorFamily::PowerLaw { p, exponent } => {
                let q = p / (*exponent as f64 - 1.0);
                (n as f64).powf(-q)
            }
        }
    }

    /// Certifies convergence, or reports why the family does not qualify.
    pub fn certify(&self) -> Result<ConvergenceCertificate> {
        match self {
            FactorFamily::Explicit { factors } => {
                let cns = factors
                    .iter()
                    .map(|f| cn_of(f).expect("explicit factors are normalized"))
                    .collect();
                Ok(ConvergenceCertificate {
                    family: self.clone(),
                    tail: TailBound::Finite { cns },
                })
            }
            FactorFamily::Geometric { s, exponent } => Ok(ConvergenceCertificate {
                family: self.clone(),
                tail: TailBound::Geometric {
                    log2_beta: log2_beta(s.norm(), *exponent),
                },
            }),
            FactorFamily::PowerLaw { p, exponent } => {
                let q = p / (*exponent as f64 - 1.0);
                if q <= 1.0 {
                    return Err(Error::DivergentFamily(format!(
                        "sum of constants C_n = n^(-{q}) diverges; requires p/(r0-1) > 1"
                    )));
                }
                Ok(ConvergenceCertificate {
                    family: self.clone(),
                    tail: TailBound::PowerLaw { q },
                })
            }
        }
    }
}

/// `z + c z^{r0}` as a jet.
fn nonlinear_factor(exponent: u32, c: Complex64) -> TruncatedSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); exponent as usize + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    coeffs[exponent as usize] = c;
    TruncatedSeries::new(coeffs).expect("non-empty")
}

/// Horner evaluation of `z + c z^{r0}`, matching the jet coefficient order.
fn eval_nonlinear_factor(exponent: u32, c: Complex64, w: Complex64) -> Complex64 {
    let mut value = c;
    for _ in 2..exponent {
        value *= w;
    }
    value = value * w + Complex64::new(1.0, 0.0);
    value * w
}

/// `log2 β` where `β = |s|^{1/(r0-1)}`, so that `C_n = β^{-n} = 2^{-n·log2 β}`.
fn log2_beta(s_norm: f64, exponent: u32) -> f64 {
    s_norm.log2() / (exponent as f64 - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
enum TailBound {
    Finite { cns: Vec<f64> },
    Geometric { log2_beta: f64 },
    PowerLaw { q: f64 },
}

/// Certified convergence data for a factor family.
///
/// `alpha`, `alpha_from(m)` and `partial_sum(d, m)` are upper bounds on the
/// corresponding true sums of constants (inflated by a fixed rounding
/// margin); every bound derived from them remains a true upper bound.
#[derive(Debug, Clone)]
pub struct ConvergenceCertificate {
    family: FactorFamily,
    tail: TailBound,
}

impl ConvergenceCertificate {
    pub fn family(&self) -> &FactorFamily {
        &self.family
    }

    /// Certified upper bound on `Σ_{n≥1} C_n`.
    pub fn alpha(&self) -> f64 {
        self.alpha_from(1)
    }

    /// Certified upper bound on the tail `α_m = Σ_{n≥m} C_n` (`m ≥ 1`).
    pub fn alpha_from(&self, m: u32) -> f64 {
        debug_assert!(m >= 1);
        match &self.tail {
            TailBound::Finite { cns } => {
                let raw: f64 = cns.iter().skip(m as usize - 1).sum();
                raw * ROUNDING_MARGIN
            }
            _ => self.log2_alpha_from(m).exp2(),
        }
    }

    /// `log2` of `alpha_from(m)`; `-∞` for an empty tail. Closed forms avoid
    /// underflow for very large `m`.
    pub fn log2_alpha_from(&self, m: u32) -> f64 {
        debug_assert!(m >= 1);
        match &self.tail {
            TailBound::Finite { .. } => self.alpha_from(m).log2(),
            TailBound::Geometric { log2_beta } => {
                // Σ_{n≥m} β^{-n} = β^{1-m}/(β-1)
                let beta = log2_beta.exp2();
                (1.0 - m as f64) * log2_beta - (beta - 1.0).log2() + ROUNDING_MARGIN.log2()
            }
            TailBound::PowerLaw { q } => {
                // Σ_{n≥m} n^{-q} ≤ m^{-q} + ∫_m^∞ x^{-q} dx = m^{-q} + m^{1-q}/(q-1)
                let lm = (m as f64).log2();
                let first = -q * lm;
                let integral = (1.0 - q) * lm - (q - 1.0).log2();
                log2_sum(first, integral) + ROUNDING_MARGIN.log2()
            }
        }
    }

    /// Certified upper bound on `Σ_{n=d}^{m} C_n` (`1 ≤ d ≤ m`).
    pub fn partial_sum(&self, d: u32, m: u32) -> f64 {
        debug_assert!(1 <= d && d <= m);
        let raw: f64 = match &self.tail {
            TailBound::Finite { cns } => cns
                .iter()
                .skip(d as usize - 1)
                .take((m - d + 1) as usize)
                .sum(),
            _ => (d..=m).map(|n| self.family.cn(n)).sum(),
        };
        raw * ROUNDING_MARGIN
    }

    /// Raw constant `C_n`.
    pub fn cn(&self, n: u32) -> f64 {
        self.family.cn(n)
    }

    /// `1/(4α)`: the radius on which plain truncation of the whole family is
    /// certified. Infinite for a degenerate (all-identity) family.
    pub fn safe_radius(&self) -> f64 {
        let alpha = self.alpha();
        if alpha == 0.0 {
            f64::INFINITY
        } else {
            1.0 / (4.0 * alpha)
        }
    }

    /// Growth bound `r/(1 − r·Σ_{n=d}^{m} C_n)` for `|R_{n=d}^{m} f_n(z)|` on
    /// `|z| = r` inside the precondition disk `r < 1/Σ`.
    pub fn majorant_bound(&self, d: u32, m: u32, r: f64) -> Result<f64> {
        if d < 1 || d > m {
            return Err(Error::InvalidRange(format!("requires 1 <= d <= m, got d = {d}, m = {m}")));
        }
        if r < 0.0 {
            return Err(Error::NegativeRadius(r));
        }
        bounded_growth(r, self.partial_sum(d, m))
    }

    /// Same bound with the sum taken over the whole tail `n ≥ d`.
    pub fn majorant_tail_bound(&self, d: u32, r: f64) -> Result<f64> {
        if d < 1 {
            return Err(Error::InvalidRange(format!("requires d >= 1, got {d}")));
        }
        if r < 0.0 {
            return Err(Error::NegativeRadius(r));
        }
        bounded_growth(r, self.alpha_from(d))
    }

    /// Bound on `|F_N(z) − F_M(z)|` for compositions starting at `start`,
    /// valid on `|z| ≤ 1/(4·alpha_from(start))`:
    ///
    /// ```text
    /// |F_N − F_M| ≤ (Σ_{n=M+1}^{N} C_n) / alpha_from(start)²
    /// ```
    pub fn cauchy_diff_bound(&self, start: u32, m: u32, n: u32) -> Result<f64> {
        if start < 1 || m < start || m < 1 {
            return Err(Error::InvalidRange(format!(
                "requires m >= start >= 1, got start = {start}, m = {m}"
            )));
        }
        if n <= m {
            return Err(Error::InvalidRange(format!(
                "requires n > m, got n = {n}, m = {m}"
            )));
        }
        let sum = self.partial_sum(m + 1, n);
        if sum == 0.0 {
            return Ok(0.0);
        }
        let alpha = self.alpha_from(start);
        Ok(sum / (alpha * alpha))
    }

    /// Bound on `|F_∞(z) − F_M(z)|` (the `N → ∞` limit of the difference
    /// bound) on `|z| ≤ 1/(4·alpha_from(start))`.
    pub fn truncation_error(&self, start: u32, m: u32) -> Result<f64> {
        Ok(self.log2_truncation_error(start, m)?.exp2())
    }

    /// `log2` of `truncation_error`; `-∞` when the tail past `m` is empty.
    pub fn log2_truncation_error(&self, start: u32, m: u32) -> Result<f64> {
        if start < 1 || m < start {
            return Err(Error::InvalidRange(format!(
                "requires m >= start >= 1, got start = {start}, m = {m}"
            )));
        }
        let tail = self.log2_alpha_from(m + 1);
        if tail == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(tail - 2.0 * self.log2_alpha_from(start))
    }

    /// Smallest `m1 ≥ 1` with `alpha_from(m1) ≤ 1/(4·r1)`: from index `m1`
    /// on, the tail composition is certified on `|z| ≤ r1`.
    pub fn plan_split(&self, r1: f64) -> Result<u32> {
        if r1 <= 0.0 || !r1.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "working radius must be positive, got {r1}"
            )));
        }
        let target = 1.0 / (4.0 * r1);
        // linear scan first; doubling + bisection for distant splits
        const LINEAR_LIMIT: u32 = 64;
        for m in 1..=LINEAR_LIMIT {
            if self.alpha_from(m) <= target {
                return Ok(m);
            }
        }
        let mut lo = LINEAR_LIMIT; // alpha_from(lo) > target
        let mut hi = LINEAR_LIMIT;
        loop {
            hi = hi.saturating_mul(2);
            if self.alpha_from(hi) <= target {
                break;
            }
            if hi == u32::MAX {
                return Err(Error::InvalidParameter(
                    "split index exceeds supported range".into(),
                ));
            }
            lo = hi;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.alpha_from(mid) <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

fn bounded_growth(r: f64, sum: f64) -> Result<f64> {
    if sum == 0.0 {
        return Ok(r);
    }
    if r * sum >= 1.0 {
        return Err(Error::OutsideCertifiedDisk {
            radius: r,
            limit: 1.0 / sum,
        });
    }
    Ok(r / (1.0 - r * sum))
}

/// `log2(2^a + 2^b)` without overflow; tolerates `-∞` arguments.
fn log2_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// Wire format for a factor family, as consumed by the CLI:
///
/// ```json
/// {"kind":"geometric","s":[2.0,0.0],"r0":2}
/// {"kind":"power_law","p":3.0,"r0":3}
/// {"kind":"explicit","factors":[[[0.0,0.0],[1.0,0.0],[0.5,0.0]]]}
/// ```
///
/// Complex numbers travel as `[re, im]`; explicit factor coefficient lists
/// start at degree 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyDescription {
    Geometric { s: [f64; 2], r0: u32 },
    PowerLaw { p: f64, r0: u32 },
    Explicit { factors: Vec<Vec<[f64; 2]>> },
}

impl FamilyDescription {
    pub fn build(&self) -> Result<FactorFamily> {
        match self {
            FamilyDescription::Geometric { s, r0 } => {
                FactorFamily::geometric(Complex64::new(s[0], s[1]), *r0)
            }
            FamilyDescription::PowerLaw { p, r0 } => FactorFamily::power_law(*p, *r0),
            FamilyDescription::Explicit { factors } => {
                let series = factors
                    .iter()
                    .map(|coeffs| {
                        TruncatedSeries::new(
                            coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                FactorFamily::explicit(series)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geometric(s: f64) -> FactorFamily {
        FactorFamily::geometric(Complex64::new(s, 0.0), 2).unwrap()
    }

    #[test]
    fn cn_of_geometric_quadratic_factors() {
        for n in 1..=5u32 {
            let f = geometric(2.0).factor(n);
            assert_eq!(cn_of(&f).unwrap(), 2.0f64.powi(-(n as i32)));
        }
    }

    #[test]
    fn cn_of_cubic_power_law_factors() {
        // z + z³/n³ → n^{-3/2}
        let family = FactorFamily::power_law(3.0, 3).unwrap();
        for n in 2..=4u32 {
            let f = family.factor(n);
            let expected = (n as f64).powf(-1.5);
            assert!((cn_of(&f).unwrap() - expected).abs() <= 1e-15 * expected);
        }
    }

    #[test]
    fn cn_of_identity_is_zero() {
        assert_eq!(cn_of(&TruncatedSeries::identity()).unwrap(), 0.0);
    }

    #[test]
    fn cn_of_rejects_non_normalized() {
        let f = TruncatedSeries::from_real(&[0.0, 2.0]).unwrap();
        assert_eq!(cn_of(&f).unwrap_err(), Error::NotNormalized);
    }

    #[test]
    fn cn_scale_law() {
        // f = z + c z^r has C = |c|^{1/(r-1)} exactly
        for (c, r) in [(0.37, 2usize), (0.02, 3), (1.9, 5)] {
            let mut coeffs = vec![0.0; r + 1];
            coeffs[1] = 1.0;
            coeffs[r] = c;
            let f = TruncatedSeries::from_real(&coeffs).unwrap();
            assert_eq!(cn_of(&f).unwrap(), c.powf(1.0 / (r as f64 - 1.0)));
        }
    }

    #[test]
    fn certify_geometric_s2() {
        let cert = geometric(2.0).certify().unwrap();
        assert!((cert.alpha() - 1.0).abs() <= 1e-6);
        assert!(cert.alpha() >= 1.0, "alpha must stay an upper bound");
        assert!((cert.safe_radius() - 0.25).abs() <= 1e-6);
        assert!(cert.safe_radius() <= 0.25);
    }

    #[test]
    fn certify_single_explicit_factor() {
        let family =
            FactorFamily::explicit(vec![TruncatedSeries::from_real(&[0.0, 1.0, 1.0]).unwrap()])
                .unwrap();
        let cert = family.certify().unwrap();
        assert!((cert.alpha() - 1.0).abs() <= 1e-6);
        assert!((cert.safe_radius() - 0.25).abs() <= 1e-6);
    }

    #[test]
    fn certify_rejects_divergent_power_law() {
        let family = FactorFamily::power_law(1.0, 2).unwrap();
        assert!(matches!(
            family.certify().unwrap_err(),
            Error::DivergentFamily(_)
        ));
    }

    #[test]
    fn geometric_general_exponent_tail() {
        // r0 = 3, s = 4: C_n = 2^{-n}, so alpha = 1
        let family = FactorFamily::geometric(Complex64::new(4.0, 0.0), 3).unwrap();
        let cert = family.certify().unwrap();
        assert!((cert.cn(3) - 0.125).abs() <= 1e-15);
        assert!((cert.alpha() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn alpha_from_dominates_finite_sums() {
        let families = [
            geometric(2.0),
            FactorFamily::power_law(3.0, 2).unwrap(),
            FactorFamily::explicit(vec![
                TruncatedSeries::from_real(&[0.0, 1.0, 0.5]).unwrap(),
                TruncatedSeries::from_real(&[0.0, 1.0, 0.0, 0.25]).unwrap(),
            ])
            .unwrap(),
        ];
        for family in families {
            let cert = family.certify().unwrap();
            for m in 1..=20u32 {
                let finite: f64 = (m..m + 2000).map(|n| cert.cn(n)).sum();
                assert!(
                    cert.alpha_from(m) >= finite,
                    "tail bound below finite sum at m = {m}"
                );
            }
        }
    }

    #[test]
    fn majorant_bound_examples() {
        let cert = geometric(2.0).certify().unwrap();
        // d = m = 1: sum = 1/2, r = 1 → 2
        assert!((cert.majorant_bound(1, 1, 1.0).unwrap() - 2.0).abs() <= 1e-6);
        assert_eq!(cert.majorant_bound(1, 5, 0.0).unwrap(), 0.0);
        // whole tail: sum = 1, r = 1/4 → 1/3
        let b = cert.majorant_tail_bound(1, 0.25).unwrap();
        assert!((b - 1.0 / 3.0).abs() <= 1e-6);
    }

    #[test]
    fn majorant_bound_rejects_outside_disk() {
        let cert = geometric(2.0).certify().unwrap();
        assert!(matches!(
            cert.majorant_tail_bound(1, 1.5).unwrap_err(),
            Error::OutsideCertifiedDisk { .. }
        ));
    }

    #[test]
    fn cauchy_diff_bound_geometric_partial_sum() {
        let cert = geometric(2.0).certify().unwrap();
        let expected = 2.0f64.powi(-10) - 2.0f64.powi(-20);
        let got = cert.cauchy_diff_bound(1, 10, 20).unwrap();
        assert!((got - expected).abs() <= 1e-5 * expected);
    }

    #[test]
    fn cauchy_diff_bound_rejects_bad_ranges() {
        let cert = geometric(2.0).certify().unwrap();
        assert!(cert.cauchy_diff_bound(1, 5, 5).is_err());
        assert!(cert.cauchy_diff_bound(1, 0, 5).is_err());
    }

    #[test]
    fn truncation_error_examples() {
        let cert = geometric(2.0).certify().unwrap();
        let got = cert.truncation_error(1, 20).unwrap();
        let expected = 2.0f64.powi(-20);
        assert!((got - expected).abs() <= 1e-5 * expected);

        // finite family: tail past the list is empty
        let family = FactorFamily::explicit(vec![
            TruncatedSeries::from_real(&[0.0, 1.0, 0.5]).unwrap(),
        ])
        .unwrap();
        assert_eq!(family.certify().unwrap().truncation_error(1, 5).unwrap(), 0.0);

        // integral tail bound for the power law (q = 3/2)
        let family = FactorFamily::power_law(3.0, 3).unwrap();
        let cert = family.certify().unwrap();
        let alpha_raw = 1.0 + 1.0 / 0.5; // uninflated bound on alpha
        let rhs = (101f64.powf(-1.5) + 2.0 * 101f64.powf(-0.5)) / (alpha_raw * alpha_raw);
        let got = cert.truncation_error(1, 100).unwrap();
        assert!(got <= rhs * (1.0 + 1e-9));
        assert!(got >= rhs * 0.9);
    }

    #[test]
    fn plan_split_examples() {
        let cert = geometric(2.0).certify().unwrap();
        // exact-boundary cases land one index later because of the margin
        assert_eq!(cert.plan_split(0.25).unwrap(), 2);
        assert_eq!(cert.plan_split(1.0).unwrap(), 4);
        // away from the boundary the raw closed form decides
        assert_eq!(cert.plan_split(0.9).unwrap(), 3);
        assert_eq!(cert.plan_split(0.2).unwrap(), 1);

        // explicit finite family: split lands at most one past the list
        let family = FactorFamily::explicit(vec![
            TruncatedSeries::from_real(&[0.0, 1.0, 0.5]).unwrap(),
            TruncatedSeries::from_real(&[0.0, 1.0, 0.25]).unwrap(),
        ])
        .unwrap();
        let cert = family.certify().unwrap();
        assert!(cert.plan_split(1000.0).unwrap() <= 3);
    }

    #[test]
    fn plan_split_is_consistent_with_tail_bound() {
        let cert = FactorFamily::power_law(4.0, 2).unwrap().certify().unwrap();
        for r1 in [0.01, 0.3, 1.0, 7.5, 300.0] {
            let m1 = cert.plan_split(r1).unwrap();
            assert!(cert.alpha_from(m1) <= 1.0 / (4.0 * r1));
            if m1 > 1 {
                assert!(cert.alpha_from(m1 - 1) > 1.0 / (4.0 * r1));
            }
        }
    }

    #[test]
    fn log2_alpha_matches_linear_at_moderate_indices() {
        let cert = geometric(3.0).certify().unwrap();
        for m in [1u32, 2, 7, 30] {
            let linear = cert.alpha_from(m);
            let via_log = cert.log2_alpha_from(m).exp2();
            assert!((linear - via_log).abs() <= 1e-12 * linear);
        }
    }

    #[test]
    fn log2_alpha_survives_deep_tails() {
        let cert = geometric(2.0).certify().unwrap();
        let l = cert.log2_alpha_from(100_000);
        assert!(l.is_finite());
        assert!((l - (1.0 - 100_000.0)).abs() <= 1e-6 * 100_000.0);
    }

    #[test]
    fn family_description_round_trip() {
        let docs = [
            r#"{"kind":"geometric","s":[2.0,0.0],"r0":2}"#,
            r#"{"kind":"power_law","p":3.0,"r0":3}"#,
            r#"{"kind":"explicit","factors":[[[0.0,0.0],[1.0,0.0],[0.5,0.0]]]}"#,
        ];
        for doc in docs {
            let desc: FamilyDescription = serde_json::from_str(doc).unwrap();
            let family = desc.build().unwrap();
            family.certify().unwrap();
            let emitted = serde_json::to_string(&desc).unwrap();
            let desc2: FamilyDescription = serde_json::from_str(&emitted).unwrap();
            assert_eq!(desc2.build().unwrap(), family);
        }
    }

    #[test]
    fn family_description_rejects_bad_factors() {
        let doc = r#"{"kind":"explicit","factors":[[[0.0,0.0],[2.0,0.0]]]}"#;
        let desc: FamilyDescription = serde_json::from_str(doc).unwrap();
        assert_eq!(desc.build().unwrap_err(), Error::NotNormalized);
    }

    #[test]
    fn difference_bound_holds_for_deep_explicit_families() {
        use crate::composer::compose_pointwise;
        use crate::verify::{random_explicit_family, sample_disk};
        use rand::SeedableRng;

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xBADC0DE);
        for _ in 0..5 {
            let family = random_explicit_family(&mut rng, 30, 4, 0.85);
            let cert = family.certify().unwrap();
            for _ in 0..20 {
                let z = sample_disk(&mut rng, cert.safe_radius());
                let partials: Vec<_> = (1..=30u32)
                    .map(|m| compose_pointwise(&family, 1, m, z).unwrap())
                    .collect();
                for m in 1..30u32 {
                    for n in (m + 1)..=30 {
                        let measured =
                            (partials[n as usize - 1] - partials[m as usize - 1]).norm();
                        let bound = cert.cauchy_diff_bound(1, m, n).unwrap();
                        assert!(
                            measured <= bound,
                            "m = {m}, n = {n}: {measured} > {bound}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn alpha_from_is_monotone(m in 1u32..200) {
            let cert = FactorFamily::power_law(3.0, 2).unwrap().certify().unwrap();
            prop_assert!(cert.alpha_from(m) >= cert.alpha_from(m + 1));
        }

        #[test]
        fn plan_split_is_monotone_in_radius(a in 0.01f64..50.0, b in 0.01f64..50.0) {
            let cert = geometric(1.5).certify().unwrap();
            let (small, large) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(cert.plan_split(small).unwrap() <= cert.plan_split(large).unwrap());
        }
    }
}
