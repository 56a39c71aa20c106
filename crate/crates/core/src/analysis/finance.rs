use crate::error::{Error, Result};
use crate::scenario::FinanceParams;

pub const HOURS_PER_YEAR: f64 = 8760.0;

/// Annuity factor converting an upfront cost into equal annual payments.
pub fn capital_recovery_factor(wacc: f64, lifetime_years: u32) -> Result<f64> {
    if lifetime_years < 1 {
        return Err(Error::validation("lifetime_years", lifetime_years, "must be >= 1"));
    }
    if !(wacc.is_finite() && wacc >= 0.0) {
        return Err(Error::validation("wacc", wacc, "must be finite and >= 0"));
    }
    if wacc == 0.0 {
        return Ok(1.0 / f64::from(lifetime_years));
    }
    let growth = (1.0 + wacc).powi(lifetime_years as i32);
    Ok(wacc * growth / (growth - 1.0))
}

/// Capital-cost contribution to the levelized cost of hydrogen, USD per kg.
///
/// Annualized capex per kW divided by the hydrogen one kW of electrolysis
/// produces in a year at `utilization`.
pub fn lcoh_contribution(capex_usd_per_kw: f64, finance: &FinanceParams, utilization: f64) -> Result<f64> {
    if !(capex_usd_per_kw.is_finite() && capex_usd_per_kw >= 0.0) {
        return Err(Error::validation("capex_usd_per_kw", capex_usd_per_kw, "must be finite and >= 0"));
    }
    if utilization.is_nan() || utilization <= 0.0 {
        return Err(Error::Domain(format!(
            "utilization must be > 0 (no hydrogen is produced at {utilization})"
        )));
    }
    if utilization > 1.0 {
        return Err(Error::validation("utilization", utilization, "must lie in (0, 1]"));
    }
    finance.validate()?;
    let crf = capital_recovery_factor(finance.wacc, finance.lifetime_years)?;
    let kg_per_kw_year = HOURS_PER_YEAR * utilization / finance.specific_energy_kwh_per_kg;
    Ok(crf * capex_usd_per_kw / kg_per_kw_year)
}
