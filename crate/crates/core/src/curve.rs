//! One-factor experience curve.
//!
//! Unit cost falls by a constant fraction, the learning rate, with every
//! doubling of cumulative deployment:
//!
//! ```text
//! C(x) = C0 * (x / x0)^b,    b = ln(1 - LR) / ln 2
//! ```

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};

/// Checks that `lr` lies in the open interval (-1, 1).
pub(crate) fn check_learning_rate(lr: f64) -> Result<()> {
    if lr.is_nan() {
        return Err(Error::validation("learning_rate", lr, "is not a number"));
    }
    if lr >= 1.0 {
        return Err(Error::validation(
            "learning_rate",
            lr,
            "outside (-1, 1): must be < 1",
        ));
    }
    if lr <= -1.0 {
        return Err(Error::validation(
            "learning_rate",
            lr,
            "outside (-1, 1): must be > -1",
        ));
    }
    Ok(())
}

/// Experience exponent `b` for a learning rate: `ln(1 - lr) / ln 2`.
///
/// Zero for no learning, `-1` when cost halves per doubling.
pub fn exponent_from_learning_rate(lr: f64) -> Result<f64> {
    check_learning_rate(lr)?;
    Ok((1.0 - lr).ln() / LN_2)
}

/// A cost curve anchored at `(initial_base_gw, initial_cost_usd_per_kw)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperienceCurve {
    initial_cost_usd_per_kw: f64,
    initial_base_gw: f64,
    learning_rate: f64,
}

impl ExperienceCurve {
    pub fn new(initial_cost_usd_per_kw: f64, initial_base_gw: f64, learning_rate: f64) -> Result<Self> {
        if !(initial_cost_usd_per_kw.is_finite() && initial_cost_usd_per_kw > 0.0) {
            return Err(Error::validation(
                "initial_cost_usd_per_kw",
                initial_cost_usd_per_kw,
                "must be finite and > 0",
            ));
        }
        if !(initial_base_gw.is_finite() && initial_base_gw > 0.0) {
            return Err(Error::validation(
                "initial_base_gw",
                initial_base_gw,
                "must be finite and > 0",
            ));
        }
        check_learning_rate(learning_rate)?;
        Ok(Self {
            initial_cost_usd_per_kw,
            initial_base_gw,
            learning_rate,
        })
    }

    pub fn initial_cost(&self) -> f64 {
        self.initial_cost_usd_per_kw
    }

    pub fn initial_base(&self) -> f64 {
        self.initial_base_gw
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn exponent(&self) -> f64 {
        // learning_rate was range-checked on construction
        (1.0 - self.learning_rate).ln() / LN_2
    }

    /// Same anchor cost, different learning rate.
    pub fn with_learning_rate(&self, learning_rate: f64) -> Result<Self> {
        Self::new(self.initial_cost_usd_per_kw, self.initial_base_gw, learning_rate)
    }

    /// Same cost and learning rate, re-anchored at a different experience base.
    pub fn with_base(&self, initial_base_gw: f64) -> Result<Self> {
        Self::new(self.initial_cost_usd_per_kw, initial_base_gw, self.learning_rate)
    }

    /// Cost at cumulative deployment `x_gw` along this curve.
    pub fn cost_at(&self, x_gw: f64) -> Result<f64> {
        project_cost(self, self.initial_base_gw, x_gw)
    }
}

/// Projects the curve's initial cost from a family experience base of
/// `family_base_current` GW to `family_base_projected` GW.
///
/// The curve's own `initial_base` is not used here; the family bases come
/// from the learning structure.
pub fn project_cost(
    curve: &ExperienceCurve,
    family_base_current: f64,
    family_base_projected: f64,
) -> Result<f64> {
    if !(family_base_current.is_finite() && family_base_current > 0.0) {
        return Err(Error::Domain(format!(
            "current family base must be finite and > 0 GW, got {family_base_current}"
        )));
    }
    if !family_base_projected.is_finite() {
        return Err(Error::validation(
            "family_base_projected_gw",
            family_base_projected,
            "must be finite",
        ));
    }
    if family_base_projected < family_base_current {
        return Err(Error::validation(
            "family_base_projected_gw",
            family_base_projected,
            format!(
                "is below the current family base of {family_base_current} GW (cumulative capacity cannot shrink)"
            ),
        ));
    }
    if family_base_projected == family_base_current {
        return Ok(curve.initial_cost_usd_per_kw);
    }
    let ratio = family_base_projected / family_base_current;
    Ok(curve.initial_cost_usd_per_kw * ratio.powf(curve.exponent()))
}
