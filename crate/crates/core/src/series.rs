//! Truncated complex power series (polynomial jets).
//!
//! A [`TruncatedSeries`] of degree `D` stores coefficients `a_0 ..= a_D` of
//! `Σ a_k z^k`. Everything here is plain binary64 complex arithmetic with a
//! fixed, explicit truncation degree: no operation silently extends degree,
//! so the error terms tracked elsewhere stay auditable.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Degree-`D` jet of an analytic function at the origin.
///
/// Invariant: the coefficient vector is non-empty; `degree() == len - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from coefficients `a_0, a_1, …` (lowest degree first).
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        Ok(Self { coeffs })
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The identity jet `z`.
    pub fn identity() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// True iff `a_0 = 0` and `a_1 = 1`: the factor shape `z + Σ_{r≥2} c_r z^r`.
    pub fn is_normalized(&self) -> bool {
        self.coeff(0) == Complex64::new(0.0, 0.0) && self.coeff(1) == Complex64::new(1.0, 0.0)
    }

    /// True iff every coefficient is real and non-negative.
    pub fn is_majorant(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0 && c.re >= 0.0)
    }

    /// The majorant series: every coefficient replaced by its modulus.
    ///
    /// A majorant dominates the original on circles and controls composition
    /// growth; it is the basis of every bound in [`crate::convergence`].
    pub fn hat(&self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.norm(), 0.0))
                .collect(),
        }
    }

    /// The degree-`out_degree` jet of `self(inner(z))`.
    ///
    /// Requires `inner` to fix the origin; coefficients up to `out_degree` are
    /// exact polynomials in the input coefficients (truncation only discards
    /// higher terms, it never perturbs lower ones). Normalized inputs compose
    /// to a normalized output, exactly, also in floating point.
    ///
    /// Horner on series: accumulate `acc = acc·inner + a_k` from the highest
    /// coefficient down, truncating each product at `out_degree`.
    pub fn compose(&self, inner: &TruncatedSeries, out_degree: usize) -> Result<TruncatedSeries> {
        if inner.coeff(0) != Complex64::new(0.0, 0.0) {
            return Err(Error::ConstantTermNotZero);
        }
        if out_degree < 1 {
            return Err(Error::DegreeTooSmall);
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); out_degree + 1];
        acc[0] = self.coeff(self.degree());
        for k in (0..self.degree()).rev() {
            acc = mul_truncated(&acc, &inner.coeffs, out_degree);
            acc[0] += self.coeff(k);
        }
        Ok(TruncatedSeries { coeffs: acc })
    }

    /// Horner evaluation of the jet, highest coefficient first.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut value = self.coeff(self.degree());
        for k in (0..self.degree()).rev() {
            value = value * z + self.coeff(k);
        }
        value
    }

    /// `f̂(r)`: the majorant evaluated at a non-negative radius.
    ///
    /// For a normalized series this is `≥ r`; the gap `f̂(r) − r` bounds the
    /// displacement `|f(z) − z|` on `|z| = r`.
    pub fn eval_majorant(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::NegativeRadius(r));
        }
        Ok(self.hat().eval(Complex64::new(r, 0.0)).re)
    }

    /// Formal derivative. Degree drops by one; a constant differentiates to
    /// the zero series of degree 0.
    pub fn derivative(&self) -> TruncatedSeries {
        if self.degree() == 0 {
            return TruncatedSeries {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        TruncatedSeries {
            coeffs: (1..=self.degree())
                .map(|k| self.coeff(k) * (k as f64))
                .collect(),
        }
    }
}

/// Product of two coefficient slices, truncated at `out_degree`.
fn mul_truncated(a: &[Complex64], b: &[Complex64], out_degree: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); out_degree + 1];
    for (i, &ai) in a.iter().enumerate() {
        if i > out_degree {
            break;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j > out_degree {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}
