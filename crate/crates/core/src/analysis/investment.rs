use crate::curve::ExperienceCurve;
use crate::error::{Error, Result};

/// kW per GW. Costs are per kW and capacities in GW; the product is scaled
/// by this factor exactly once, here.
pub const KW_PER_GW: f64 = 1.0e6;

/// Undiscounted cumulative capital expenditure (USD) while deployment grows
/// from `from_gw` to `to_gw` along `curve`, i.e. the integral of the unit
/// cost over cumulative capacity.
///
/// The curve is anchored at its own `(initial_base, initial_cost)`; the
/// bounds need not coincide with the anchor.
pub fn learning_investment(curve: &ExperienceCurve, from_gw: f64, to_gw: f64) -> Result<f64> {
    if !(from_gw.is_finite() && from_gw > 0.0) {
        return Err(Error::Domain(format!("integration lower bound must be finite and > 0 GW, got {from_gw}")));
    }
    if !(to_gw.is_finite() && to_gw > 0.0) {
        return Err(Error::Domain(format!("integration upper bound must be finite and > 0 GW, got {to_gw}")));
    }
    if to_gw < from_gw {
        return Err(Error::validation(
            "to_gw",
            to_gw,
            format!("is below the lower bound {from_gw} GW (cumulative capacity cannot shrink)"),
        ));
    }
    if to_gw == from_gw {
        return Ok(0.0);
    }
    let c0 = curve.initial_cost();
    let x0 = curve.initial_base();
    // integrand c0 * (x/x0)^b has antiderivative c0*x0*(x/x0)^(b+1)/(b+1)
    let e = curve.exponent() + 1.0;
    let scaled = if e == 0.0 {
        (to_gw / from_gw).ln()
    } else {
        // expm1 keeps the difference accurate as e approaches zero
        ((e * (to_gw / x0).ln()).exp_m1() - (e * (from_gw / x0).ln()).exp_m1()) / e
    };
    Ok(c0 * x0 * scaled * KW_PER_GW)
}
