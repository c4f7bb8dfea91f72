//! Certified evaluation of infinite compositions of entire functions.
//!
//! An infinite composition `f_1 ∘ f_2 ∘ f_3 ∘ …` of normalized factors
//! `f_n(z) = z + Σ_{r≥2} c_{n,r} z^r` defines an entire function whenever the
//! per-factor constants `C_n = max_r |c_{n,r}|^{1/(r-1)}` have a finite sum.
//! This crate turns that convergence statement into an algorithm: it certifies
//! a family of factors, evaluates the limit function anywhere in the plane,
//! and returns a rigorous truncation-error bound alongside every value.
//!
//! The pieces:
//!
//! - [`series`]: truncated complex power series (jets) with composition,
//!   evaluation, differentiation, and the coefficient-modulus majorant.
//! - [`convergence`]: factor families, the constants `C_n`, `α`, tail bounds,
//!   certified disk radii, and the Cauchy-difference bound.
//! - [`composer`]: pointwise evaluation of finite and infinite compositions
//!   with certified error, and extraction of the limit function's jet.
//! - [`poincare`]: the quadratic Poincaré function `F(sz) = sF(z) + sF(z)²`,
//!   evaluated on all of ℂ via functional-equation continuation, plus the
//!   closed-form oracles it is checked against.
//! - [`verify`]: the self-check suite shared by `cargo test` and the CLI's
//!   `verify` subcommand.
//!
//! Error bounds certify the series-truncation error in exact arithmetic; they
//! do not model floating-point rounding of the evaluation itself, which is
//! orders of magnitude below the tolerances used throughout.

pub mod composer;
pub mod convergence;
pub mod error;
pub mod poincare;
pub mod series;
pub mod verify;

pub use composer::{
    compose_pointwise, eval_certified, head_lipschitz, limit_series, EvalPlan, EvalResult,
};
pub use convergence::{cn_of, ConvergenceCertificate, FactorFamily, FamilyDescription};
pub use error::{Error, Result};
pub use poincare::{oracle_h, oracle_residual, PoincareResult, PoincareSpec};
pub use series::TruncatedSeries;

pub use num_complex::Complex64;
