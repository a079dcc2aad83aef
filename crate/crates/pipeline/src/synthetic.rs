//! Synthetic price paths: GARCH(1,1) volatility driven by standardised CTS
//! innovations.

use chrono::{Days, NaiveDate};
use tempered_core::{mean_variance, ParamVector};
use tempered_sim::{sample, Cutoff};

use crate::error::Result;
use crate::garch::simulate_garch11;
use crate::series::PriceSeries;

/// `CTS(α, δ₊, δ₋, λ₊, λ₋, μ)` of the innovations before standardisation.
pub const INNOVATION_CTS: [f64; 6] = [0.66, 0.37, 1.0, 1.2, 1.14, 0.0];
/// `(ω, a, b)` of the volatility recursion, returns in percent.
pub const GARCH: (f64, f64, f64) = (0.02, 0.08, 0.9);
pub const DAYS: usize = 2500;
const SEED: u64 = 0x5EED_2500;

/// Price path number `world`: `p_t = 100 exp(Σ r_s / 100)` over consecutive days.
pub fn synthetic_prices(world: u64) -> Result<PriceSeries> {
    let theta = ParamVector::cts(
        INNOVATION_CTS[0],
        INNOVATION_CTS[1],
        INNOVATION_CTS[2],
        INNOVATION_CTS[3],
        INNOVATION_CTS[4],
        INNOVATION_CTS[5],
    )?;
    let (mean, var) = mean_variance(&theta);
    let z: Vec<f64> = sample(&theta, DAYS - 1, SEED, world, Cutoff::Auto)?.values.iter().map(|x| (x - mean) / var.sqrt()).collect();
    let r = simulate_garch11(GARCH.0, GARCH.1, GARCH.2, &z);
    let start = NaiveDate::from_ymd_opt(2014, 1, 1).expect("valid date");
    let mut prices = Vec::with_capacity(DAYS);
    let mut p = 100.0f64;
    prices.push(p);
    for x in r {
        p *= (x / 100.0).exp();
        prices.push(p);
    }
    let dates = (0..DAYS as u64).map(|i| start + Days::new(i)).collect();
    PriceSeries::new(dates, prices)
}
